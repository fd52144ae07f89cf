// infousage: run a named simulation experiment and write its data table.
//
//   infousage <experiment> [--seed N] [--reps N] [--out DIR] [--format csv|json]
//             [--svg] [--check] [--config FILE] [--set key=value ...]

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "infousage/errors.hpp"
#include "infousage/experiments.hpp"
#include "infousage/report.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace infousage;

namespace {

enum Exit : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kConfig = 3,
  kFilesystem = 4,
  kCheckFailed = 5,
};

struct Settings {
  RunConfig run;
  fs::path out_dir = "results";
  std::string format = "csv";
  bool svg = false;
};

std::uint64_t parse_seed(const std::string& text, const std::string& origin) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-')
    throw ConfigError(origin + ": '" + text + "' is not a non-negative integer seed");
  return v;
}

// Known keys configure the run; any other key (or the "params" object) is an
// experiment parameter.
void load_config(const fs::path& path, Settings& s) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "experiment") {
        s.run.experiment = value.get<std::string>();
      } else if (key == "seed") {
        if (!value.is_number_unsigned()) throw ConfigError("config: seed must be a non-negative integer");
        s.run.seed = value.get<std::uint64_t>();
      } else if (key == "replications") {
        if (!value.is_number_unsigned()) throw ConfigError("config: replications must be a positive integer");
        s.run.reps = value.get<std::size_t>();
      } else if (key == "output_dir") {
        s.out_dir = value.get<std::string>();
      } else if (key == "format") {
        s.format = value.get<std::string>();
      } else if (key == "emit_svg") {
        s.svg = value.get<bool>();
      } else if (key == "params") {
        if (!value.is_object()) throw ConfigError("config: params must be an object");
        for (const auto& [k, v] : value.items()) s.run.params[k] = v;
      } else {
        s.run.params[key] = value;
      }
    }
  } catch (const json::type_error& e) {
    throw ConfigError(std::string("config: wrong value type: ") + e.what());
  }
}

std::string catalog_help() {
  std::ostringstream os;
  os << "Experiments (parameter defaults; override with --set key=value or a config file):\n";
  for (const auto& e : experiment_catalog()) {
    os << "  " << e.name << "  [reps " << e.default_reps << "]\n      " << e.summary << "\n";
    for (const auto& p : e.params)
      os << "      " << p.key << " = " << p.default_value.dump() << "  (" << p.help << ")\n";
  }
  os << "\nThe seed defaults to $INFOUSAGE_SEED, else 1.\n"
     << "Exit codes: 0 ok, 2 usage or bad parameter, 3 config, 4 filesystem,\n"
     << "5 a --check bound failed, 1 internal error.\n";
  return os.str();
}

void write_table(const fs::path& dir, const std::string& stem, const std::string& format,
                 const Table& table, const json& meta) {
  if (format == "json")
    write_text(dir / (stem + ".json"), to_json(table, meta).dump(2) + "\n");
  else
    write_text(dir / (stem + ".csv"), to_csv(table, meta));
}

int run(int argc, char** argv) {
  CLI::App app{"Selection-bias and information-usage simulator"};
  app.footer(catalog_help());

  std::string experiment, config_file, format;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::string out_dir;
  bool svg = false, check = false;
  std::vector<std::string> sets;

  app.add_option("experiment", experiment, "experiment name (see below)");
  app.add_option("--seed", seed, "base seed");
  app.add_option("--reps", reps, "replications (experiment default if omitted)");
  app.add_option("--out", out_dir, "output directory (default: results)");
  app.add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--svg", svg, "also write an SVG line chart");
  app.add_flag("--check", check, "exit 5 if any bound check is unsatisfied");
  app.add_option("--config", config_file, "JSON config file");
  app.add_option("--set", sets, "parameter override key=value (value parsed as JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  Settings s;
  if (const char* env = std::getenv("INFOUSAGE_SEED"); env && *env)
    s.run.seed = parse_seed(env, "INFOUSAGE_SEED");
  if (!config_file.empty()) load_config(config_file, s);
  if (!experiment.empty()) s.run.experiment = experiment;
  if (seed) s.run.seed = *seed;
  if (reps) s.run.reps = *reps;
  if (!out_dir.empty()) s.out_dir = out_dir;
  if (!format.empty()) s.format = format;
  if (svg) s.svg = true;
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParameterError(kv, "--set expects key=value");
    const std::string key = kv.substr(0, eq), text = kv.substr(eq + 1);
    json v = json::parse(text, nullptr, false);
    s.run.params[key] = v.is_discarded() ? json(text) : v;
  }
  if (s.run.experiment.empty()) throw ParameterError("experiment", "no experiment given");
  if (s.format != "csv" && s.format != "json")
    throw ConfigError("format must be csv or json, got '" + s.format + "'");

  // Validate everything cheap before touching the filesystem or simulating.
  resolve_params(find_experiment(s.run.experiment), s.run);
  ensure_writable_dir(s.out_dir);

  const ExperimentOutput out = run_experiment(s.run);
  json meta = out.meta;
  if (!out.summary.empty()) meta["summary"] = out.summary;

  write_table(s.out_dir, out.name, s.format, out.table, meta);
  for (const auto& [suffix, table] : out.extra_tables)
    write_table(s.out_dir, out.name + "_" + suffix, s.format, table, out.meta);
  if (!out.checks.empty() && out.name != "bounds-table")
    write_table(s.out_dir, out.name + "_checks", s.format, checks_table(out.checks), out.meta);
  if (s.svg && out.chart) write_text(s.out_dir / (out.name + ".svg"), render_svg(*out.chart, out.meta));

  std::size_t ok = 0;
  for (const auto& c : out.checks) ok += c.satisfied ? 1 : 0;
  std::cout << out.name << ": " << out.table.rows.size() << " rows -> "
            << (s.out_dir / (out.name + "." + s.format)).string();
  if (!out.checks.empty()) std::cout << "; checks " << ok << "/" << out.checks.size() << " satisfied";
  std::cout << "\n";
  for (const auto& [key, value] : out.summary.items()) std::cout << "  " << key << " = " << value.dump() << "\n";
  if (check && ok != out.checks.size()) {
    for (const auto& c : out.checks)
      if (!c.satisfied)
        std::cerr << "FAILED " << c.name << ": empirical " << format_number(c.empirical)
                  << (c.lower ? " < " : " > ") << format_number(c.value) << " (tolerance "
                  << format_number(c.tolerance) << ")\n";
    return kCheckFailed;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParameterError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const FilesystemError& e) {
    std::cerr << "filesystem error: " << e.what() << "\n";
    return kFilesystem;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
}
