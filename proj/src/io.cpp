#include "bar/io.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace bar::io {
namespace {

constexpr std::array<char, 4> kMagic{'B', 'A', 'R', 'T'};
constexpr std::uint16_t kBinaryVersion = 1;

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Matrix matrix_from(const Json& j, int p, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != p) {
    throw FormatError(std::string(name) + " must be a " + std::to_string(p) + "x" + std::to_string(p) + " array");
  }
  Matrix m(p, p);
  for (int i = 0; i < p; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != p) {
      throw FormatError(std::string(name) + " row " + std::to_string(i + 1) + " must have " + std::to_string(p) +
                        " entries");
    }
    for (int k = 0; k < p; ++k) m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
  }
  return m;
}

Vector vector_from(const Json& j, int p, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != p) {
    throw FormatError(std::string(name) + " must be an array of length " + std::to_string(p));
  }
  Vector v(p);
  for (int i = 0; i < p; ++i) v(i) = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

template <typename T>
void put_le(std::ostream& os, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t k = 0; k < sizeof(T); ++k) bytes[k] = static_cast<char>((value >> (8 * k)) & 0xFF);
  os.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& is) {
  std::array<unsigned char, sizeof(T)> bytes{};
  if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw FormatError("binary trajectory is truncated");
  }
  T value = 0;
  for (std::size_t k = 0; k < sizeof(T); ++k) value |= static_cast<T>(bytes[k]) << (8 * k);
  return value;
}

void check_p(int p) {
  if (p < 1 || p > kMaxNodes) throw FormatError("p must lie in [1, 64]");
}

Trajectory read_binary(std::istream& is) {
  std::array<char, 4> magic{};
  is.read(magic.data(), magic.size());
  if (magic != kMagic) throw FormatError("not a binary trajectory");
  const auto version = get_le<std::uint16_t>(is);
  if (version != kBinaryVersion) throw FormatError("unsupported binary trajectory version");
  Trajectory traj;
  traj.p = get_le<std::uint16_t>(is);
  check_p(traj.p);
  const auto T = get_le<std::uint64_t>(is);
  traj.states.resize(T + 1);
  for (auto& s : traj.states) s = get_le<std::uint64_t>(is);
  return traj;
}

Trajectory read_text(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("empty trajectory file");
  int p = 0;
  unsigned long long T = 0;
  if (std::sscanf(line.c_str(), "p=%d T=%llu", &p, &T) != 2) {
    throw FormatError("trajectory header must read 'p=<p> T=<T>'");
  }
  check_p(p);
  Trajectory traj;
  traj.p = p;
  traj.states.reserve(T + 1);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    State s = 0;
    int count = 0;
    int value = 0;
    while (row >> value) {
      if (value != 0 && value != 1) throw FormatError("trajectory entries must be 0 or 1");
      if (count >= p) throw FormatError("trajectory line has more than p entries");
      if (value) s |= State{1} << count;
      ++count;
    }
    if (count != p) throw FormatError("trajectory line has fewer than p entries");
    traj.states.push_back(s);
  }
  if (traj.states.size() != T + 1) throw FormatError("trajectory length does not match its header");
  return traj;
}

}  // namespace

Json to_json(const Model& params, const SpaceConfig& config) {
  Json j;
  j["p"] = node_count(params);
  std::visit(
      [&](const auto& m) {
        j["A"] = matrix_json(m.A);
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, GenericBarParams>) {
          j["A_tilde"] = matrix_json(m.A_tilde);
        }
        j["b"] = vector_json(m.b);
        j["rho_w"] = vector_json(m.rho_w);
      },
      params);
  j["config"] = {{"b_min", config.b_min}, {"rho_min", config.rho_min}, {"rho_max", config.rho_max}};
  return j;
}

Json to_json(const EstimateResult& result, const SpaceConfig& config) {
  Json j = to_json(result.params, config);
  const EstimateDiagnostics& d = result.diagnostics;
  Json diag;
  diag["method"] = d.method;
  diag["iterations"] = d.iterations;
  diag["converged"] = d.converged;
  diag["rank"] = d.rank;
  diag["visited_states"] = d.visited_states;
  diag["projection_displacement"] = d.projection_displacement;
  diag["projection_moved"] = d.projection_moved;
  diag["log_likelihood"] = result.likelihood.total;
  diag["active_constraints"] = d.active_constraints;
  j["diagnostics"] = std::move(diag);
  return j;
}

ParamFile params_from_json(const Json& j) {
  try {
    ParamFile out;
    const int p = j.at("p").get<int>();
    check_p(p);
    out.config.p = p;
    if (j.contains("config")) {
      const Json& c = j["config"];
      out.config.b_min = c.value("b_min", out.config.b_min);
      out.config.rho_min = c.value("rho_min", out.config.rho_min);
      out.config.rho_max = c.value("rho_max", out.config.rho_max);
    }
    const Matrix A = matrix_from(j.at("A"), p, "A");
    const Vector b = vector_from(j.at("b"), p, "b");
    const Vector rho = vector_from(j.at("rho_w"), p, "rho_w");
    if (j.contains("A_tilde")) {
      out.params = GenericBarParams{A, matrix_from(j["A_tilde"], p, "A_tilde"), b, rho};
    } else {
      out.params = BarParams{A, b, rho};
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("parameter file: ") + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  try {
    return Json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

ParamFile read_params(const std::filesystem::path& path) { return params_from_json(read_json(path)); }

void write_trajectory(std::ostream& os, const Trajectory& traj, TrajectoryFormat format) {
  check_p(traj.p);
  if (format == TrajectoryFormat::binary) {
    os.write(kMagic.data(), kMagic.size());
    put_le<std::uint16_t>(os, kBinaryVersion);
    put_le<std::uint16_t>(os, static_cast<std::uint16_t>(traj.p));
    put_le<std::uint64_t>(os, traj.T());
    for (State s : traj.states) put_le<std::uint64_t>(os, s);
    return;
  }
  os << "p=" << traj.p << " T=" << traj.T() << '\n';
  std::string line(static_cast<std::size_t>(2 * traj.p), ' ');
  line.back() = '\n';
  for (State s : traj.states) {
    for (int i = 0; i < traj.p; ++i) line[static_cast<std::size_t>(2 * i)] = bit(s, i) ? '1' : '0';
    os << line;
  }
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj, TrajectoryFormat format) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_trajectory(os, traj, format);
}

Trajectory read_trajectory(std::istream& is) {
  if (is.peek() == kMagic[0]) return read_binary(is);
  return read_text(is);
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_trajectory(is);
}

void write_counts_csv(std::ostream& os, const TransitionCounts& counts) {
  os << "u,v,count\n";
  for (const auto& [t, n] : counts.sorted_pairs()) os << t.from << ',' << t.to << ',' << n << '\n';
}

void write_transition_csv(std::ostream& os, const ExactChain& chain) {
  if (!chain.dense()) throw std::invalid_argument("transition matrix is only stored for dense chains");
  os << "state_u,state_v,prob\n" << std::setprecision(17);
  for (State u = 0; u < chain.states(); ++u) {
    for (State v = 0; v < chain.states(); ++v) os << u << ',' << v << ',' << chain.prob(u, v) << '\n';
  }
}

void write_stationary_csv(std::ostream& os, const ExactChain& chain) {
  os << "state,pi\n" << std::setprecision(17);
  for (State u = 0; u < chain.states(); ++u) os << u << ',' << chain.pi(static_cast<Eigen::Index>(u)) << '\n';
}

}  // namespace bar::io
