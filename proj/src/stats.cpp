#include "bar/stats.hpp"

#include <algorithm>
#include <stdexcept>

#include "bar/kernels.hpp"

namespace bar {

TransitionCounts::TransitionCounts(int p) : p_(p) {
  if (p < 1 || p > kMaxNodes) throw std::invalid_argument("TransitionCounts: p must lie in [1, 64]");
}

TransitionCounts TransitionCounts::from_pairs(int p,
                                              const std::vector<std::pair<Transition, std::uint64_t>>& pairs) {
  TransitionCounts out(p);
  for (const auto& [t, n] : pairs) out.add(t.from, t.to, n);
  return out;
}

void TransitionCounts::add(State from, State to, std::uint64_t n) {
  if (n == 0) return;
  StateTally& tally = tallies_[from];
  if (tally.ones.empty()) tally.ones.assign(static_cast<std::size_t>(p_), 0);
  tally.visits += n;
  for (int r = 0; r < p_; ++r) {
    if (bit(to, r)) tally.ones[static_cast<std::size_t>(r)] += n;
  }
  pairs_[{from, to}] += n;
  total_ += n;
}

void TransitionCounts::merge(const TransitionCounts& other) {
  if (other.p_ != p_) throw std::invalid_argument("TransitionCounts::merge: p mismatch");
  for (const auto& [u, tally] : other.tallies_) {
    StateTally& mine = tallies_[u];
    if (mine.ones.empty()) mine.ones.assign(static_cast<std::size_t>(p_), 0);
    mine.visits += tally.visits;
    for (std::size_t r = 0; r < mine.ones.size(); ++r) mine.ones[r] += tally.ones[r];
  }
  for (const auto& [t, n] : other.pairs_) pairs_[t] += n;
  total_ += other.total_;
}

std::uint64_t TransitionCounts::visits(State u) const {
  const auto it = tallies_.find(u);
  return it == tallies_.end() ? 0 : it->second.visits;
}

std::uint64_t TransitionCounts::pair(State u, State v) const {
  const auto it = pairs_.find({u, v});
  return it == pairs_.end() ? 0 : it->second;
}

std::uint64_t TransitionCounts::marginal(State u, int r, int l) const {
  const auto it = tallies_.find(u);
  if (it == tallies_.end()) return 0;
  const std::uint64_t ones = it->second.ones[static_cast<std::size_t>(r)];
  return l == 1 ? ones : it->second.visits - ones;
}

std::vector<State> TransitionCounts::visited_states() const {
  std::vector<State> out;
  out.reserve(tallies_.size());
  for (const auto& entry : tallies_) out.push_back(entry.first);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<Transition, std::uint64_t>> TransitionCounts::sorted_pairs() const {
  std::vector<std::pair<Transition, std::uint64_t>> out(pairs_.begin(), pairs_.end());
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.first.from != y.first.from ? x.first.from < y.first.from : x.first.to < y.first.to;
  });
  return out;
}

TransitionCounts count_transitions(const Trajectory& traj) {
  if (traj.T() == 0) throw std::invalid_argument("no transitions: trajectory has T = 0");
  return kernels::omp::count_transitions(traj);
}

DesignMatrix build_design(const TransitionCounts& counts) {
  if (counts.T() == 0) throw std::invalid_argument("build_design: counts are empty");
  const int p = counts.p();
  DesignMatrix d;
  d.states = counts.visited_states();
  const auto m = static_cast<Eigen::Index>(d.states.size());
  d.U.resize(m, p);
  d.Y.resize(m, p);
  d.visits.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const State u = d.states[static_cast<std::size_t>(k)];
    const StateTally& tally = counts.tallies().at(u);
    const double n = static_cast<double>(tally.visits);
    d.visits(k) = n;
    for (int r = 0; r < p; ++r) {
      d.U(k, r) = bit(u, r);
      d.Y(k, r) = static_cast<double>(tally.ones[static_cast<std::size_t>(r)]) / n;
    }
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(d.U);
  qr.setThreshold(kRankThreshold);
  d.rank = static_cast<int>(qr.rank());
  return d;
}

}  // namespace bar
