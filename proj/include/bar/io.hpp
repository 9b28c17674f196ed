#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bar/estimate.hpp"
#include "bar/exact.hpp"
#include "bar/model.hpp"
#include "bar/simulate.hpp"
#include "bar/stats.hpp"

namespace bar::io {

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParamFile {
  Model params;
  SpaceConfig config;
};

Json to_json(const Model& params, const SpaceConfig& config);
Json to_json(const EstimateResult& result, const SpaceConfig& config);
ParamFile params_from_json(const Json& j);

void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

ParamFile read_params(const std::filesystem::path& path);

enum class TrajectoryFormat { text, binary };

void write_trajectory(std::ostream& os, const Trajectory& traj, TrajectoryFormat format);
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj, TrajectoryFormat format);
/// Detects the format from the leading bytes.
Trajectory read_trajectory(std::istream& is);
Trajectory read_trajectory(const std::filesystem::path& path);

/// `u,v,count` rows sorted by (u, v).
void write_counts_csv(std::ostream& os, const TransitionCounts& counts);

/// `state_u,state_v,prob` (dense chains only) and `state,pi`.
void write_transition_csv(std::ostream& os, const ExactChain& chain);
void write_stationary_csv(std::ostream& os, const ExactChain& chain);

}  // namespace bar::io
