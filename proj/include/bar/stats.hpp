#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "bar/model.hpp"
#include "bar/simulate.hpp"

namespace bar {

struct Transition {
  State from;
  State to;

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct TransitionHash {
  std::size_t operator()(const Transition& t) const noexcept {
    std::uint64_t s = t.from * 0x9E3779B97F4A7C15ull ^ (t.to + 0x632BE59BD9B4E019ull);
    return static_cast<std::size_t>(splitmix64(s));
  }
};

/// Per-state visit count N_u and the per-node one counts N_{u,r,1}.
struct StateTally {
  std::uint64_t visits = 0;
  std::vector<std::uint64_t> ones;
};

/// Sufficient statistics of a trajectory: N_uv, N_u and N_{u,r,l}.
class TransitionCounts {
 public:
  explicit TransitionCounts(int p = 1);

  /// Builds counts directly from pair totals (no trajectory needed).
  static TransitionCounts from_pairs(int p, const std::vector<std::pair<Transition, std::uint64_t>>& pairs);

  void add(State from, State to, std::uint64_t n = 1);
  /// Pointwise sum with counts over the same p.
  void merge(const TransitionCounts& other);

  int p() const { return p_; }
  std::uint64_t T() const { return total_; }

  std::uint64_t visits(State u) const;
  std::uint64_t pair(State u, State v) const;
  /// N_{u,r,l}; r is 0-based, l in {0,1}.
  std::uint64_t marginal(State u, int r, int l) const;

  /// Visited states in ascending integer order.
  std::vector<State> visited_states() const;
  /// Pairs sorted by (from, to).
  std::vector<std::pair<Transition, std::uint64_t>> sorted_pairs() const;

  const std::unordered_map<State, StateTally>& tallies() const { return tallies_; }

 private:
  int p_;
  std::uint64_t total_ = 0;
  std::unordered_map<State, StateTally> tallies_;
  std::unordered_map<Transition, std::uint64_t, TransitionHash> pairs_;
};

/// Throws std::invalid_argument for a trajectory without transitions.
TransitionCounts count_transitions(const Trajectory& traj);

struct DesignMatrix {
  std::vector<State> states;  // ascending, one per row of U
  Matrix U;                   // m x p, rows are the visited states
  Matrix Y;                   // m x p, column r is y_{m,r}
  Vector visits;              // N_u per row
  int rank = 0;

  int m() const { return static_cast<int>(states.size()); }
  bool full_rank() const { return rank == U.cols(); }
};

inline constexpr double kRankThreshold = 1e-10;

DesignMatrix build_design(const TransitionCounts& counts);

}  // namespace bar
