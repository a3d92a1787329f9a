#include "cli_app.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cvqkd/attacks.hpp"
#include "cvqkd/errors.hpp"
#include "cvqkd/protocol.hpp"
#include "cvqkd/security.hpp"
#include "cvqkd/serialize.hpp"

namespace cvqkd::cli {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

struct Settings {
  std::vector<double> T;
  std::vector<double> omega;
  std::optional<double> g;
  std::optional<double> g_prime;
  std::vector<std::string> attack;
  double mu = kDefaultModulation;
  double step = 0.02;
  double t_min = 0.3;
  double t_max = 0.99;
  double t_step = 0.01;
  std::string format = "csv";
  std::string output = "-";
  std::string config;
  bool with_oneway = false;
  bool full_grid = false;
  unsigned threads = 1;
};

// Keys accepted in a --config file: the long flag names without dashes.
const std::vector<std::string> kConfigKeys{"T",   "omega", "g",      "g-prime", "attack", "mu",          "step",
                                           "t-min", "t-max", "t-step", "format",  "output", "with-oneway", "full-grid",
                                           "threads"};

const std::vector<std::string> kCommands{"keyrate", "threshold", "scan", "oneway", "appendix"};

void register_options(CLI::App& app, Settings& s) {
  app.add_option("--T", s.T, "Channel transmissivity (repeatable for appendix)")->delimiter(',');
  app.add_option("--omega", s.omega, "Thermal noise variance of Eve's ancillas (SNU)")->delimiter(',');
  app.add_option("--g", s.g, "Custom correlation g (q quadratures)");
  app.add_option("--g-prime", s.g_prime, "Custom correlation g' (p quadratures)");
  app.add_option("--attack", s.attack, "Attack class: collective, epr+, epr-, sep-sym+, sep-sym-, sep-anti+, sep-anti-, a-d")
      ->delimiter(',');
  app.add_option("--mu", s.mu, "Gaussian modulation variance");
  app.add_option("--step", s.step, "Correlation grid step for scan");
  app.add_option("--t-min", s.t_min, "Lowest transmissivity of a threshold sweep");
  app.add_option("--t-max", s.t_max, "Highest transmissivity of a threshold sweep");
  app.add_option("--t-step", s.t_step, "Transmissivity step of a threshold sweep");
  app.add_option("--format", s.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", s.output, "Output path ('-' for standard output)");
  app.add_option("--config", s.config, "JSON file with flag values; flags override it");
  app.add_flag("--with-oneway", s.with_oneway, "Append the one-way baseline curve");
  app.add_flag("--full-grid", s.full_grid, "Emit every scanned grid point");
  app.add_option("--threads", s.threads, "Worker threads for sweeps")->check(CLI::Range(1u, 256u));
  app.require_subcommand(0, 1);
  for (const auto& name : kCommands) app.add_subcommand(name)->fallthrough();
}

std::string scalar_text(const Json& v, const std::string& key) {
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  throw UsageError("config: value of '" + key + "' must be a number or string");
}

/// Turns a config object into leading arguments; keys whose flag also
/// appears on the command line are skipped so the flag wins.
std::vector<std::string> config_arguments(const Json& cfg, const CLI::App& parsed, bool have_command) {
  if (!cfg.is_object()) throw UsageError("config: top level must be a JSON object");
  std::vector<std::string> args;
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command") {
      if (!value.is_string()) throw UsageError("config: 'command' must be a string");
      if (!have_command) args.insert(args.begin(), value.get<std::string>());
      continue;
    }
    if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end()) {
      throw UsageError("config: unknown key '" + key + "'");
    }
    if (parsed.get_option("--" + key)->count() > 0) continue;
    if (key == "with-oneway" || key == "full-grid") {
      if (!value.is_boolean()) throw UsageError("config: '" + key + "' must be a boolean");
      if (value.get<bool>()) args.push_back("--" + key);
      continue;
    }
    if (value.is_array()) {
      for (const auto& item : value) {
        args.push_back("--" + key);
        args.push_back(scalar_text(item, key));
      }
    } else {
      args.push_back("--" + key);
      args.push_back(scalar_text(value, key));
    }
  }
  return args;
}

Json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config: cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

double single(const std::vector<double>& values, const char* flag) {
  if (values.size() != 1) throw UsageError(std::string("exactly one ") + flag + " value is required");
  return values.front();
}

AttackLabel named_label(const std::string& name) {
  const auto label = parse_attack_label(name);
  if (!label) throw UsageError("unknown attack class '" + name + "'");
  return *label;
}

AttackParams resolve_attack(const Settings& s, double omega) {
  const bool custom = s.g.has_value() || s.g_prime.has_value();
  if (custom) {
    if (!s.attack.empty()) throw UsageError("--attack and --g/--g-prime are mutually exclusive");
    if (!s.g || !s.g_prime) throw UsageError("--g and --g-prime must be given together");
    return AttackParams{omega, *s.g, *s.g_prime};
  }
  if (s.attack.size() != 1) throw UsageError("keyrate needs one --attack class or --g/--g-prime");
  const auto label = named_label(s.attack.front());
  if (label == AttackLabel::custom) throw UsageError("use --g/--g-prime for custom correlations");
  return attack_from_class(label, omega);
}

struct Outcome {
  std::string text;
  int code = kSuccess;
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Outcome cmd_keyrate(const Settings& s, Format fmt) {
  const double T = single(s.T, "--T");
  const auto a = resolve_attack(s, single(s.omega, "--omega"));
  require_physical(a);
  const auto report = key_rate_report(T, a, s.mu);
  return {fmt == Format::json ? dump(to_json(report)) : to_csv(report), report.R > 0.0 ? kSuccess : kInsecure};
}

Outcome cmd_threshold(const Settings& s, Format fmt) {
  if (s.attack.empty()) throw UsageError("threshold needs at least one --attack class");
  if (!(s.t_min > 0.0 && s.t_min < s.t_max && s.t_max < 1.0)) {
    throw UsageError("threshold needs 0 < t-min < t-max < 1");
  }
  std::vector<AttackClass> classes;
  for (const auto& name : s.attack) {
    const auto label = named_label(name);
    if (label == AttackLabel::custom) throw UsageError("thresholds are defined for named classes only");
    classes.push_back(AttackClass::named(label));
  }
  const auto grid = uniform_grid(s.t_min, s.t_max, s.t_step);
  std::vector<ThresholdCurve> curves;
  for (const auto& cls : classes) curves.push_back(threshold_curve(cls, grid, s.threads));
  if (s.with_oneway) curves.push_back(oneway_threshold_curve(grid, s.threads));

  if (fmt == Format::csv) return {to_csv(curves)};
  Json all = Json::array();
  for (const auto& c : curves) all.push_back(to_json(c));
  return {dump(all)};
}

Outcome cmd_scan(const Settings& s, Format fmt) {
  const double T = single(s.T, "--T");
  const double omega = single(s.omega, "--omega");
  ScanGrid grid;
  const auto result = optimal_attack_scan(T, omega, s.step, kernels::best_isa(), s.full_grid ? &grid : nullptr);
  const ScanGrid* g = s.full_grid ? &grid : nullptr;
  return {fmt == Format::json ? dump(to_json(result, g)) : to_csv(result, g)};
}

Outcome cmd_oneway(const Settings& s, Format fmt) {
  const double T = single(s.T, "--T");
  const double omega = single(s.omega, "--omega");
  const double R = oneway_keyrate(T, omega);
  const double grid[] = {T};
  const auto point = oneway_threshold_curve(grid).points.front();
  const int code = R > 0.0 ? kSuccess : kInsecure;
  if (fmt == Format::json) {
    Json j;
    j["T"] = T;
    j["omega"] = omega;
    j["R"] = R;
    j["omega_star"] = std::isfinite(point.omega_star) ? Json(point.omega_star) : Json(nullptr);
    j["N_star"] = std::isfinite(point.N_star) ? Json(point.N_star) : Json(nullptr);
    j["secure"] = std::string(to_string(point.status));
    return {dump(j), code};
  }
  std::string out = "T,omega,R,omega_star,N_star,secure\n";
  out += format_number(T) + ',' + format_number(omega) + ',' + format_number(R) + ',' +
         format_number(point.omega_star) + ',' + format_number(point.N_star) + ',' +
         std::string(to_string(point.status)) + '\n';
  return {out, code};
}

Outcome cmd_appendix(const Settings& s, Format fmt) {
  const std::vector<double> t_values = s.T.empty() ? std::vector<double>{0.65, 0.95} : s.T;
  const std::vector<double> omegas = s.omega.empty() ? uniform_grid(1.0, 5.0, 0.5) : s.omega;
  const std::vector<std::pair<std::string, AttackLabel>> classes{
      {"collective", AttackLabel::collective}, {"a", AttackLabel::epr_pos},      {"b", AttackLabel::sep_sym_pos},
      {"c", AttackLabel::sep_anti_pos},        {"d", AttackLabel::sep_sym_neg},
  };

  std::string csv = "T,omega";
  for (const auto& c : classes) csv += ",I_AB_" + c.first;
  for (const auto& c : classes) csv += ",chi_EA_" + c.first;
  csv += ",dI_AB,dchi_EA,valid\n";
  Json tables = Json::array();

  for (double T : t_values) {
    const auto variations = relative_variations(T, s.mu, omegas);
    Json rows = Json::array();
    for (const auto& v : variations) {
      std::vector<double> info;
      std::vector<double> holevo;
      for (const auto& c : classes) {
        const auto a = attack_from_class(c.second, v.omega);
        info.push_back(mutual_information_asymptotic(T, a, s.mu).I_AB);
        holevo.push_back(holevo_asymptotic(T, a, s.mu));
      }
      csv += format_number(T) + ',' + format_number(v.omega);
      for (double x : info) csv += ',' + format_number(x);
      for (double x : holevo) csv += ',' + format_number(x);
      csv += ',' + format_number(v.dI_AB) + ',' + format_number(v.dchi_EA) + ',' + (v.valid ? "1" : "0") + '\n';

      Json row;
      row["omega"] = v.omega;
      Json ji;
      Json jh;
      for (std::size_t k = 0; k < classes.size(); ++k) {
        ji[classes[k].first] = info[k];
        jh[classes[k].first] = holevo[k];
      }
      row["I_AB"] = std::move(ji);
      row["chi_EA"] = std::move(jh);
      row["dI_AB"] = v.valid ? Json(v.dI_AB) : Json(nullptr);
      row["dchi_EA"] = v.valid ? Json(v.dchi_EA) : Json(nullptr);
      row["valid"] = v.valid;
      rows.push_back(std::move(row));
    }
    Json table;
    table["T"] = T;
    table["rows"] = std::move(rows);
    tables.push_back(std::move(table));
  }
  if (fmt == Format::csv) return {csv};
  Json j;
  j["mu"] = s.mu;
  j["tables"] = std::move(tables);
  return {dump(j)};
}

std::string selected_command(const CLI::App& app) {
  for (const auto* sub : app.get_subcommands()) return sub->get_name();
  return {};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Two-way CV-QKD key rates, thresholds and attack scans", "cvqkd"};
  register_options(app, s);
  std::string command;
  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    command = selected_command(app);
    if (!s.config.empty()) {
      const auto cfg = read_config(s.config);
      auto merged = config_arguments(cfg, app, !command.empty());
      merged.insert(merged.end(), args.begin(), args.end());
      s = Settings{};
      app.clear();
      app.parse(std::vector<std::string>(merged.rbegin(), merged.rend()));
      command = selected_command(app);
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  if (command.empty()) {
    err << "error: a command is required (" << "keyrate, threshold, scan, oneway, appendix)\n";
    return kError;
  }

  try {
    const Format fmt = s.format == "json" ? Format::json : Format::csv;
    Outcome result;
    if (command == "keyrate") {
      result = cmd_keyrate(s, fmt);
    } else if (command == "threshold") {
      result = cmd_threshold(s, fmt);
    } else if (command == "scan") {
      result = cmd_scan(s, fmt);
    } else if (command == "oneway") {
      result = cmd_oneway(s, fmt);
    } else {
      result = cmd_appendix(s, fmt);
    }
    if (s.output == "-") {
      out << result.text;
    } else {
      std::ofstream file(s.output, std::ios::binary);
      if (!file) throw UsageError("cannot open output file '" + s.output + "'");
      file << result.text;
      if (!file.flush()) throw UsageError("failed writing '" + s.output + "'");
    }
    return result.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

}  // namespace cvqkd::cli
