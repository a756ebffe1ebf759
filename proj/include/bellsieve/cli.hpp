#pragma once

// Command-line front end: `bsa`, `hom` and `field` subcommands.
//
// Exit codes: 0 success, 1 runtime failure, 2 invalid configuration,
// 3 circuit schema error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bellsieve/analysis.hpp"
#include "bellsieve/circuit_io.hpp"
#include "bellsieve/io.hpp"

#ifndef BELLSIEVE_FIXTURE_DIR
#define BELLSIEVE_FIXTURE_DIR "fixtures"
#endif

namespace bellsieve::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kBadConfig = 2, kBadSchema = 3 };

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// gauss | hg01 | hg:m,n | hg(m,n)
inline hg::PumpProfile parse_pump(const std::string& spec, double waist) {
  if (spec == "gauss" || spec == "gaussian") return hg::PumpProfile::gaussian(waist);
  if (spec == "hg01") return hg::PumpProfile::hg01(waist);
  static const std::regex pattern(R"(hg[:(](\d+),(\d+)\)?)");
  std::smatch match;
  if (std::regex_match(spec, match, pattern))
    return hg::PumpProfile(
        hg::HGMode(std::stoi(match[1]), std::stoi(match[2]), waist, hg::kPumpWavelength));
  throw ConfigError("unknown pump '" + spec + "' (expected gauss, hg01 or hg:m,n)");
}

/// from:to:step in micrometres, returned in metres.
inline std::vector<double> parse_delay_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad delay grid '" + spec + "'");
    }
    if (used != item.size() || !std::isfinite(v)) throw ConfigError("bad delay grid '" + spec + "'");
    parts.push_back(v);
  }
  if (parts.size() != 3) throw ConfigError("delay grid must be from:to:step");
  const double from = parts[0], to = parts[1], step = parts[2];
  if (!(step > 0.0) || to < from) throw ConfigError("delay grid needs step > 0 and from <= to");
  const auto count = static_cast<long>(std::floor((to - from) / step + 1e-9)) + 1;
  if (count > 1'000'000) throw ConfigError("delay grid has too many points");
  std::vector<double> grid;
  grid.reserve(std::size_t(count));
  for (long i = 0; i < count; ++i) grid.push_back((from + double(i) * step) * 1e-6);
  return grid;
}

/// Resolves a circuit argument: the path itself if it exists, else a file of
/// that name in $BELLSIEVE_FIXTURES or the bundled fixture directory.
inline std::filesystem::path resolve_circuit(const std::string& arg) {
  namespace fs = std::filesystem;
  if (fs::exists(arg)) return arg;
  const char* env = std::getenv("BELLSIEVE_FIXTURES");
  const fs::path dir = env && *env ? fs::path(env) : fs::path(BELLSIEVE_FIXTURE_DIR);
  for (const fs::path& candidate : {dir / arg, dir / (arg + ".json")})
    if (fs::exists(candidate)) return candidate;
  throw ConfigError("circuit file '" + arg + "' not found");
}

struct StateChoice {
  std::string label;
  BellKind kind;
};

inline std::vector<StateChoice> select_states(const std::vector<std::string>& names, bool all_bell,
                                              bool all_hyper, bool hyper_circuit) {
  if (all_bell && all_hyper) throw ConfigError("--all-bell and --all-hyper are exclusive");
  if ((all_bell || all_hyper) && !names.empty())
    throw ConfigError("--state cannot be combined with --all-bell/--all-hyper");
  if (all_bell && hyper_circuit) throw ConfigError("--all-bell needs a two-path source circuit");
  if (all_hyper && !hyper_circuit) throw ConfigError("--all-hyper needs a four-path source circuit");
  std::vector<StateChoice> out;
  const std::string prefix = hyper_circuit ? "hyper-" : "";
  if (all_bell || all_hyper || names.empty()) {
    for (auto k : kAllBellKinds) out.push_back({prefix + std::string(to_string(k)), k});
    return out;
  }
  for (const auto& n : names) {
    std::string bare = n;
    const bool hyper = bare.starts_with("hyper-");
    if (hyper) bare = bare.substr(6);
    if (hyper != hyper_circuit)
      throw ConfigError("state '" + n + "' does not match the circuit's source");
    try {
      out.push_back({prefix + bare, parse_bell_kind(bare)});
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return out;
}

inline void write_output(const std::string& out_path, const std::string& text, std::ostream& out) {
  if (out_path.empty() || out_path == "-") {
    out << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + out_path + "'");
  file << text;
}

struct BsaOptions {
  std::string circuit;
  std::string pump = "gauss";
  std::vector<std::string> states;
  bool all_bell = false;
  bool all_hyper = false;
  double overlap = 1.0;
  std::string policy = "error";
  std::string format = "json";
  std::string out;
};

inline std::string cmd_bsa(const BsaOptions& opt) {
  if (!(opt.overlap >= 0.0 && opt.overlap <= 1.0)) throw ConfigError("--overlap must lie in [0, 1]");
  if (opt.format != "json" && opt.format != "csv") throw ConfigError("unknown format '" + opt.format + "'");
  UnassignedPolicy policy;
  try {
    policy = parse_policy(opt.policy);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto pump = parse_pump(opt.pump, hg::kDefaultWaist);
  const auto file = io::load_circuit(resolve_circuit(opt.circuit).string());
  const auto choices = select_states(opt.states, opt.all_bell, opt.all_hyper, file.hyper());

  std::vector<LabeledState> pumped;
  std::vector<SourceInput> sources;
  for (const auto& c : choices) {
    pumped.push_back({c.label, attach_pump_parity(file.source(c.kind), pump)});
    sources.push_back({c.label, file.source(c.kind), file.delayed_paths});
  }
  const auto table = signature_table(file.circuit, pumped, file.layout);

  if (opt.format == "csv") {
    std::string csv = "state,event,probability\n";
    for (const auto& row : table.rows)
      for (const auto& [ev, p] : row.distribution)
        if (p > kSupportTolerance)
          csv += row.label + "," + ev.label() + "," + io::format_number(p) + "\n";
    return csv;
  }

  const auto report = classify(table);
  const auto success =
      success_probability(file.circuit, file.layout, pump.parity(), opt.overlap, sources, {}, policy);
  nlohmann::json doc{{"circuit", file.name},
                     {"pump", pump.mode.label()},
                     {"table", io::to_json(table)},
                     {"report", io::to_json(report)},
                     {"coincidence_basis_only", coincidence_basis_only(table)},
                     {"success", io::to_json(success)}};
  return doc.dump(2) + "\n";
}

struct HomOptions {
  std::string pump = "gauss";
  std::vector<std::string> states;
  bool all_bell = false;
  std::string delays = "-600:600:20";
  double filter_nm = 1.0;
  std::string format = "csv";
  std::string out;
};

inline std::string cmd_hom(const HomOptions& opt) {
  if (opt.format != "json" && opt.format != "csv") throw ConfigError("unknown format '" + opt.format + "'");
  if (!(opt.filter_nm > 0.0)) throw ConfigError("--filter-nm must be > 0");
  const auto pump = parse_pump(opt.pump, hg::kDefaultWaist);
  const auto grid = parse_delay_grid(opt.delays);
  const auto choices = select_states(opt.states, opt.all_bell, false, false);
  const auto model = OverlapModel::from_filter(hg::kPhotonWavelength, opt.filter_nm * 1e-9);

  if (opt.format == "json") {
    nlohmann::json curves = nlohmann::json::object();
    for (const auto& c : choices) {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& pt : hom_scan(c.kind, pump.parity(), grid, model))
        rows.push_back({{"delta_um", io::rounded(pt.delta * 1e6)},
                        {"overlap", io::rounded(pt.overlap)},
                        {"p_coinc", io::rounded(pt.p_coinc)}});
      curves[c.label] = rows;
    }
    nlohmann::json doc{{"pump", pump.mode.label()},
                       {"sigma_l_um", io::rounded(model.sigma_l * 1e6)},
                       {"curves", curves}};
    return doc.dump(2) + "\n";
  }
  std::string csv = "# pump=" + pump.mode.label() +
                    " sigma_L_um=" + io::format_number(model.sigma_l * 1e6) + "\n";
  csv += "state,delta_um,overlap,p_coinc\n";
  for (const auto& c : choices)
    for (const auto& pt : hom_scan(c.kind, pump.parity(), grid, model))
      csv += c.label + "," + io::format_number(pt.delta * 1e6) + "," +
             io::format_number(pt.overlap) + "," + io::format_number(pt.p_coinc) + "\n";
  return csv;
}

struct FieldOptions {
  std::string pump = "gauss";
  std::string state = "psi-";
  double z = 1.0;
  double x2 = 0.0;
  double y2 = 0.0;
  double waist = hg::kDefaultWaist;
  std::optional<double> half_width;
  int points = 41;
  std::string out;
};

inline std::string cmd_field(const FieldOptions& opt) {
  if (!(opt.z > 0.0)) throw ConfigError("--z must be > 0");
  if (!(opt.waist > 0.0)) throw ConfigError("--waist must be > 0");
  if (opt.points < 2) throw ConfigError("--points must be >= 2");
  const double half = opt.half_width.value_or(3.0 * opt.waist);
  if (!(half > 0.0)) throw ConfigError("--half-width must be > 0");
  const auto pump = parse_pump(opt.pump, opt.waist);
  BellKind kind;
  try {
    kind = parse_bell_kind(opt.state);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const hg::DetectorPoint r2{opt.x2, opt.y2, opt.z};
  std::string csv = "# pump=" + pump.mode.label() + " state=" + std::string(to_string(kind)) +
                    " Z=" + io::format_number(opt.z) +
                    " K=" + io::format_number(pump.wave_number) +
                    " polarization=" +
                    std::string(to_string(hg::polarization_structure(kind))) + "\n";
  csv += "x1,y1,re,im,abs2\n";
  const double step = 2.0 * half / (opt.points - 1);
  for (int i = 0; i < opt.points; ++i) {
    const double y1 = -half + i * step;
    for (int j = 0; j < opt.points; ++j) {
      const double x1 = -half + j * step;
      const cplx a = hg::coincidence_amplitude(kind, pump, {x1, y1, opt.z}, r2).value;
      csv += io::format_number(x1) + "," + io::format_number(y1) + "," +
             io::format_number(a.real()) + "," + io::format_number(a.imag()) + "," +
             io::format_number(std::norm(a)) + "\n";
    }
  }
  return csv;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-photon linear-optics simulator for parity-controlled Bell-state analysis",
               "bellsieve"};
  app.require_subcommand(1);

  BsaOptions bsa;
  auto* bsa_cmd = app.add_subcommand("bsa", "Signature table, classes and success of a Bell-state analyzer");
  bsa_cmd->add_option("--circuit", bsa.circuit, "Circuit file or bundled fixture name")->required();
  bsa_cmd->add_option("--pump", bsa.pump, "gauss | hg01 | hg:m,n")->capture_default_str();
  bsa_cmd->add_option("--state", bsa.states, "psi+, psi-, phi+, phi- (hyper- prefix for 4-path sources)");
  bsa_cmd->add_flag("--all-bell", bsa.all_bell, "All four Bell states");
  bsa_cmd->add_flag("--all-hyper", bsa.all_hyper, "All four hyperentangled states");
  bsa_cmd->add_option("--overlap", bsa.overlap, "Temporal overlap o in [0, 1]")->capture_default_str();
  bsa_cmd->add_option("--policy", bsa.policy, "Unassigned events: error | discard")->capture_default_str();
  bsa_cmd->add_option("--format", bsa.format, "json | csv")->capture_default_str();
  bsa_cmd->add_option("--out", bsa.out, "Output file (default stdout)");

  HomOptions hom;
  auto* hom_cmd = app.add_subcommand("hom", "Coincidence probability versus delay");
  hom_cmd->add_option("--pump", hom.pump, "gauss | hg01 | hg:m,n")->capture_default_str();
  hom_cmd->add_option("--state", hom.states, "psi+, psi-, phi+, phi-");
  hom_cmd->add_flag("--all-bell", hom.all_bell, "All four Bell states");
  hom_cmd->add_option("--delays", hom.delays, "from:to:step in micrometres")->capture_default_str();
  hom_cmd->add_option("--filter-nm", hom.filter_nm, "Interference filter FWHM (nm)")->capture_default_str();
  hom_cmd->add_option("--format", hom.format, "csv | json")->capture_default_str();
  hom_cmd->add_option("--out", hom.out, "Output file (default stdout)");

  FieldOptions field;
  double half_width = 0.0;
  auto* field_cmd = app.add_subcommand("field", "Coincidence amplitude over (x1, y1) with r2 fixed");
  field_cmd->add_option("--pump", field.pump, "gauss | hg01 | hg:m,n")->capture_default_str();
  field_cmd->add_option("--state", field.state, "psi+, psi-, phi+, phi-")->capture_default_str();
  field_cmd->add_option("--z", field.z, "Detector plane Z (m)")->capture_default_str();
  field_cmd->add_option("--x2", field.x2, "Second detector x (m)")->capture_default_str();
  field_cmd->add_option("--y2", field.y2, "Second detector y (m)")->capture_default_str();
  field_cmd->add_option("--waist", field.waist, "Pump waist (m)")->capture_default_str();
  auto* hw = field_cmd->add_option("--half-width", half_width, "Grid half width (m), default 3 waists");
  field_cmd->add_option("--points", field.points, "Grid points per axis")->capture_default_str();
  field_cmd->add_option("--out", field.out, "Output file (default stdout)");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kBadConfig;
  }

  try {
    if (*bsa_cmd) {
      write_output(bsa.out, cmd_bsa(bsa), out);
    } else if (*hom_cmd) {
      write_output(hom.out, cmd_hom(hom), out);
    } else {
      if (hw->count() > 0) field.half_width = half_width;
      write_output(field.out, cmd_field(field), out);
    }
  } catch (const io::SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kBadSchema;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}

}  // namespace bellsieve::cli
