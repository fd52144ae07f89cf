#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "infousage/bounds.hpp"
#include "infousage/errors.hpp"
#include "infousage/report.hpp"

namespace infousage {

/// Bad or unknown key in an experiment's parameter block. The CLI reports it
/// as a usage error.
class ParameterError : public ConfigError {
 public:
  ParameterError(std::string field, const std::string& what)
      : ConfigError("parameter '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct ParamSpec {
  std::string key;
  nlohmann::ordered_json default_value;
  std::string help;
};

struct ExperimentSpec {
  std::string name;
  std::string summary;
  std::size_t default_reps = 10000;
  std::vector<ParamSpec> params;
};

const std::vector<ExperimentSpec>& experiment_catalog();
/// Throws ParameterError("experiment", ...) for an unknown name.
const ExperimentSpec& find_experiment(const std::string& name);

struct RunConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::optional<std::size_t> reps;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
};

/// Defaults overlaid with `config.params`; rejects unknown keys and values
/// whose JSON type differs from the default's.
nlohmann::ordered_json resolve_params(const ExperimentSpec& spec, const RunConfig& config);

struct ExperimentOutput {
  std::string name;
  Table table;
  std::vector<std::pair<std::string, Table>> extra_tables;
  std::optional<LineChart> chart;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  std::vector<BoundReport> checks;
  nlohmann::ordered_json meta;  // experiment, seed, replications, resolved params

  bool all_checks_pass() const;
};

ExperimentOutput run_experiment(const RunConfig& config);

/// Table of BoundReports in the bounds-table column layout.
Table checks_table(const std::vector<BoundReport>& checks);

}  // namespace infousage
