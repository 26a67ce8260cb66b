#include "supercoherence/cli.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "supercoherence/encoded_logic.hpp"
#include "supercoherence/selection_rules.hpp"

namespace supercoherence::cli {

namespace {

using nlohmann::json;

enum class Kind { integer, number, number_list, text };

struct ParamSpec {
  std::string key;
  Kind kind;
  json fallback;  // null: no default, parameter stays absent
  std::string help;
};

class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<ParamSpec>& params_for(Subcommand s) {
  static const std::map<Subcommand, std::vector<ParamSpec>> table{
      {Subcommand::spectrum,
       {{"n", Kind::integer, 4, "qubit count"},
        {"delta", Kind::number, 1.0, "energy scale Delta"},
        {"form", Kind::text, "spin-squared", "spin-squared | pairwise-heisenberg"}}},
      {Subcommand::paths,
       {{"n", Kind::integer, 4, "qubit count"},
        {"J", Kind::number, nullptr, "final total spin (all J when omitted)"}}},
      {Subcommand::selection, {{"n", Kind::integer, 4, "qubit count (1..8)"}}},
      {Subcommand::lindblad,
       {{"n", Kind::integer, 4, "qubit count (must be 4)"},
        {"delta", Kind::number, 1.0, "energy scale Delta"},
        {"beta", Kind::number, nullptr, "single inverse temperature"},
        {"beta-list", Kind::number_list, nullptr, "comma-separated inverse temperatures"},
        {"g", Kind::number_list, json::array({0.1}),
         "coupling magnitude, or 12 values ordered (qubit, axis)"},
        {"gamma0", Kind::number, nullptr, "rate of the (1,1) and (2,2) blocks (default g^2)"},
        {"t-final", Kind::number, nullptr, "fit window (default from the rates)"},
        {"dt", Kind::number, nullptr, "integrator step"},
        {"state", Kind::number_list, json::array({1.0, 0.0, 0.0, 0.0}),
         "initial logical amplitudes a_re,a_im,b_re,b_im"}}},
      {Subcommand::fidelity,
       {{"beta-list", Kind::number_list, json::array({1.0, 2.0, 5.0}), "inverse temperatures"},
        {"delta-grid", Kind::number, nullptr, "grid step for delta (default 1e-3 Delta)"},
        {"Delta", Kind::number, 1.0, "energy gap Delta"}}},
  };
  return table.at(s);
}

Subcommand parse_subcommand(const std::string& name) {
  if (name == "spectrum") return Subcommand::spectrum;
  if (name == "paths") return Subcommand::paths;
  if (name == "selection") return Subcommand::selection;
  if (name == "lindblad") return Subcommand::lindblad;
  if (name == "fidelity") return Subcommand::fidelity;
  throw UsageError("unknown subcommand '" + name + "'");
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw UsageError("unknown format '" + name + "' (expected csv or json)");
}

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw UsageError("malformed number '" + text + "' for key '" + key + "'");
  }
  return v;
}

json value_from_flag(const ParamSpec& spec, const std::string& text) {
  switch (spec.kind) {
    case Kind::integer: {
      const double v = parse_number(spec.key, text);
      if (v != std::floor(v)) throw UsageError("key '" + spec.key + "' expects an integer");
      return static_cast<long long>(v);
    }
    case Kind::number:
      return parse_number(spec.key, text);
    case Kind::number_list: {
      json list = json::array();
      std::size_t start = 0;
      while (true) {
        const std::size_t comma = text.find(',', start);
        list.push_back(parse_number(spec.key, text.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      return list;
    }
    case Kind::text:
      return text;
  }
  return nullptr;
}

json value_from_file(const ParamSpec& spec, const json& value) {
  auto bad = [&] { return UsageError("config key '" + spec.key + "' has the wrong type"); };
  switch (spec.kind) {
    case Kind::integer:
      if (!value.is_number() || value.get<double>() != std::floor(value.get<double>())) throw bad();
      return value.get<long long>();
    case Kind::number:
      if (!value.is_number()) throw bad();
      return value.get<double>();
    case Kind::number_list: {
      if (value.is_number()) return json::array({value.get<double>()});
      if (!value.is_array() || value.empty()) throw bad();
      json list = json::array();
      for (const auto& v : value) {
        if (!v.is_number()) throw bad();
        list.push_back(v.get<double>());
      }
      return list;
    }
    case Kind::text:
      if (!value.is_string()) throw bad();
      return value;
  }
  return nullptr;
}

const ParamSpec* find_param(Subcommand s, const std::string& key) {
  for (const auto& p : params_for(s)) {
    if (p.key == key) return &p;
  }
  return nullptr;
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file '" + path + "' must hold a JSON object");
  return doc;
}

// ---- parameter access -------------------------------------------------------

long long get_int(const ExperimentConfig& c, const std::string& key) {
  return c.parameters.at(key).get<long long>();
}

double get_number(const ExperimentConfig& c, const std::string& key) {
  return c.parameters.at(key).get<double>();
}

std::optional<double> get_optional(const ExperimentConfig& c, const std::string& key) {
  if (!c.parameters.contains(key)) return std::nullopt;
  return c.parameters.at(key).get<double>();
}

std::vector<double> get_list(const ExperimentConfig& c, const std::string& key) {
  return c.parameters.at(key).get<std::vector<double>>();
}

int checked_qubits(long long n, int lo, int hi) {
  if (n < lo || n > hi) {
    throw std::invalid_argument("n must be in [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "], got " + std::to_string(n));
  }
  return static_cast<int>(n);
}

HalfInt half_int_from(double value, const std::string& key) {
  const double twice = 2.0 * value;
  if (std::abs(twice - std::round(twice)) > 1e-9) {
    throw std::invalid_argument(key + " must be a multiple of 1/2");
  }
  return HalfInt::from_twice(static_cast<int>(std::lround(twice)));
}

// ---- experiments ------------------------------------------------------------

ResultTable run_spectrum(const ExperimentConfig& c) {
  const SystemSpec spec{checked_qubits(get_int(c, "n"), 1, kMaxQubits), get_number(c, "delta")};
  spec.validate();
  const std::string form_name = c.parameters.at("form").get<std::string>();
  HamiltonianForm form;
  if (form_name == "spin-squared") {
    form = HamiltonianForm::spin_squared;
  } else if (form_name == "pairwise-heisenberg") {
    form = HamiltonianForm::pairwise_heisenberg;
  } else {
    throw std::invalid_argument("form must be spin-squared or pairwise-heisenberg");
  }

  ResultTable table;
  table.columns = {"J", "E", "multiplicity"};
  const auto clusters = cluster_eigenvalues(eigenvalues(collective_hamiltonian(spec, form)));
  for (const auto& [energy, count] : clusters) {
    const double jj = 2.0 * energy / spec.delta;  // J(J+1)
    const double j = 0.5 * (-1.0 + std::sqrt(std::max(0.0, 1.0 + 4.0 * jj)));
    const double twice = std::round(2.0 * j);
    const double exact = 0.5 * spec.delta * (0.5 * twice) * (0.5 * twice + 1.0);
    if (std::abs(energy - exact) > kLabelTol * std::max(1.0, spec.delta)) {
      throw std::logic_error("eigenvalue " + std::to_string(energy) +
                             " is not of the form (Delta/2) J(J+1)");
    }
    table.add_row({0.5 * twice, exact, static_cast<long long>(count)});
  }
  return table;
}

ResultTable run_paths(const ExperimentConfig& c) {
  const int n = checked_qubits(get_int(c, "n"), 1, kMaxQubits);
  ResultTable table;
  table.columns = {"n", "J", "multiplicity", "path"};
  std::vector<HalfInt> targets;
  if (auto j = get_optional(c, "J")) {
    targets.push_back(half_int_from(*j, "J"));
  } else {
    for (const auto& row : irrep_table(n).rows) targets.push_back(row.j);
  }
  for (HalfInt j : targets) {
    const auto paths = enumerate_paths(n, j);
    for (const auto& p : paths) {
      table.add_row({static_cast<long long>(n), j.value(),
                     static_cast<long long>(paths.size()), p.to_string()});
    }
  }
  return table;
}

ResultTable run_selection(const ExperimentConfig& c) {
  const int n = checked_qubits(get_int(c, "n"), 1, 8);
  ResultTable table;
  table.columns = {"rule", "value", "threshold", "criterion", "pass"};
  auto below = [&](const std::string& rule, double value, double threshold) {
    table.add_row({rule, value, threshold, std::string("below"), value < threshold});
  };

  if (n >= 2) {
    for (Axis a : kAllAxes) {
      below(std::string("on_identity_residual_") + axis_name(a), verify_on_identity(n, a), kIdentityTol);
    }
    double sign_rule = 0.0;
    for (Axis a : kAllAxes) sign_rule = std::max(sign_rule, max_element_outside_sign_rule(n, a));
    below("elements_outside_sign_rule", sign_rule, kZeroTol);
  }

  double worst_dj = 0.0, worst_ground = 0.0, worst_exit = 0.0;
  int m_mixing = 0;
  json elements = json::array();
  for (int i = 1; i <= n; ++i) {
    for (Axis a : kAllAxes) {
      const MatrixElementReport r = selection_rule_scan(n, i, a);
      worst_dj = std::max(worst_dj, r.worst_delta_j);
      worst_ground = std::max(worst_ground, r.worst_ground_block);
      worst_exit = std::max(worst_exit, r.worst_ground_exit);
      m_mixing += r.m_mixing_count;
      if (c.verbose) {
        for (const auto& e : r.nonzero) {
          elements.push_back({{"qubit", i},
                              {"axis", axis_name(a)},
                              {"bra", e.bra_path.to_string()},
                              {"bra_m", e.bra_m.value()},
                              {"ket", e.ket_path.to_string()},
                              {"ket_m", e.ket_m.value()},
                              {"re", e.value.real()},
                              {"im", e.value.imag()}});
        }
      }
    }
  }
  below("delta_j_at_most_one", worst_dj, kZeroTol);
  if (n % 2 == 0) {
    below("ground_block_vanishes", worst_ground, kZeroTol);
    below("ground_exits_to_j1_only", worst_exit, kZeroTol);
  }
  if (n == 4) {
    below("error_detection", error_detection_check().worst_block_norm, kZeroTol);
    const DenseOperator zz = single_spin_operator(Axis::z, 1, 4) * single_spin_operator(Axis::z, 2, 4);
    const Matrix block = ground_block(zz);
    const cplx mean = block.trace() / 2.0;
    const double spread = max_abs_diff(block, mean * Matrix::Identity(2, 2));
    table.add_row({std::string("two_qubit_block_nonscalar"), spread, kZeroTol,
                   std::string("above"), spread > kZeroTol});

    std::vector<Matrix2> generators;
    for (int i = 1; i <= 4; ++i) {
      for (int j = i + 1; j <= 4; ++j) generators.push_back(projected_generator(i, j));
    }
    const Matrix2 a = generators.front(), b = generators[3];  // (1,2) and (2,3)
    generators.push_back(cplx(0.0, 1.0) * (a * b - b * a));
    const long long rank = real_algebra_rank(generators);
    table.add_row({std::string("encoded_algebra_rank"), rank, 3LL, std::string("equal"), rank == 3});
    const double e12 = (a - Matrix2(Eigen::Vector2cd(-1.0, 1.0).asDiagonal())).cwiseAbs().maxCoeff();
    below("p0_e12_p0_diagonal", e12, kZeroTol);
  }
  if (n == 8) {
    const GroundSpaceReport g = h8_ground_space();
    const long long dim = g.dimension;
    table.add_row({std::string("ground_space_dimension"), dim, 14LL, std::string("equal"), dim == 14});
    below("logical_products_in_ground_space", g.product_residual, kIdentityTol);
    below("exchange_preserves_ground_space", g.exchange_leakage, kIdentityTol);
  }
  if (n >= 2) {
    double conj = 0.0;
    for (int i = 1; i < n; ++i) {
      for (Axis a : kAllAxes) conj = std::max(conj, exchange_conjugation_check(i, n, a));
    }
    below("exchange_conjugation", conj, kZeroTol);
  }
  table.meta["m_mixing_elements"] = m_mixing;
  if (c.verbose) table.meta["nonzero_elements"] = std::move(elements);
  return table;
}

ResultTable run_lindblad(const ExperimentConfig& c) {
  const SystemSpec spec{checked_qubits(get_int(c, "n"), 4, 4), get_number(c, "delta")};
  spec.validate();

  std::vector<double> betas;
  if (c.parameters.contains("beta")) {
    betas = {get_number(c, "beta")};
  } else {
    betas = get_list(c, "beta-list");
  }

  const std::vector<double> g_list = get_list(c, "g");
  Couplings g;
  if (g_list.size() == 1) {
    g = uniform_couplings(g_list[0]);
  } else if (g_list.size() == 12) {
    for (int k = 0; k < 12; ++k) g[k / 3][k % 3] = g_list[k];
  } else {
    throw std::invalid_argument("g takes 1 or 12 values");
  }

  const std::vector<double> amps = get_list(c, "state");
  if (amps.size() != 4) throw std::invalid_argument("state takes four numbers a_re,a_im,b_re,b_im");
  const LogicalState psi = encode({amps[0], amps[1]}, {amps[2], amps[3]});
  const Matrix rho0 = psi.physical * psi.physical.adjoint();

  LeakageOptions options;
  options.window = get_optional(c, "t-final");
  options.dt = get_optional(c, "dt");
  if (options.window && !(*options.window > 0.0)) throw std::invalid_argument("t-final must be > 0");
  if (options.dt && !(*options.dt > 0.0)) throw std::invalid_argument("dt must be > 0");

  const auto rows = temperature_sweep(spec, g, get_optional(c, "gamma0"), rho0, betas, options);
  ResultTable table;
  table.columns = {"beta", "gamma_fit", "n_thermal", "slope_check"};
  for (const auto& r : rows) table.add_row({r.beta, r.gamma_fit, r.n_thermal, r.slope});
  return table;
}

ResultTable run_fidelity(const ExperimentConfig& c) {
  const double big_delta = get_number(c, "Delta");
  if (!(big_delta > 0.0)) throw std::invalid_argument("Delta must be positive");
  const double step = get_optional(c, "delta-grid").value_or(1e-3 * big_delta);
  const auto betas = get_list(c, "beta-list");
  for (double b : betas) {
    if (!(b > 0.0)) throw std::invalid_argument("every beta must be positive");
  }
  if (!(step > 0.0) || !(step < big_delta)) {
    throw std::invalid_argument("delta-grid must lie in (0, Delta)");
  }

  ResultTable table;
  table.columns = {"beta", "delta_opt_numeric", "delta_opt_analytic", "F_at_opt"};
  for (double beta : betas) {
    const GridOptimum best = grid_optimal_delta(big_delta, beta, step);
    table.add_row({beta, best.delta, optimal_delta(beta), best.fidelity});
  }
  return table;
}

}  // namespace

const char* subcommand_name(Subcommand s) {
  switch (s) {
    case Subcommand::spectrum:
      return "spectrum";
    case Subcommand::paths:
      return "paths";
    case Subcommand::selection:
      return "selection";
    case Subcommand::lindblad:
      return "lindblad";
    case Subcommand::fidelity:
      return "fidelity";
  }
  return "?";
}

json ExperimentConfig::echo() const {
  json out = parameters;
  out["subcommand"] = subcommand_name(subcommand);
  out["format"] = format_name(format);
  return out;
}

ExperimentConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Supercoherent qubit numerics", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  struct Flags {
    std::string out, format, config;
    bool verbose = false;
    std::map<std::string, std::string> values;
  };
  std::map<Subcommand, Flags> flags;
  std::map<Subcommand, CLI::App*> subs;

  for (Subcommand s : {Subcommand::spectrum, Subcommand::paths, Subcommand::selection,
                       Subcommand::lindblad, Subcommand::fidelity}) {
    CLI::App* sub = app.add_subcommand(subcommand_name(s));
    Flags& f = flags[s];
    sub->add_option("--out", f.out, "output file (stdout when omitted)");
    sub->add_option("--format", f.format, "csv | json");
    sub->add_option("--config", f.config, "flat JSON config file");
    sub->add_flag("--verbose", f.verbose, "include per-element detail where available");
    for (const auto& p : params_for(s)) {
      sub->add_option("--" + p.key, f.values[p.key], p.help);
    }
    subs[s] = sub;
  }

  if (!args.empty() && !args.front().starts_with("-")) parse_subcommand(args.front());

  std::vector<const char*> argv{kToolName};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested(std::string(kToolVersion) + "\n");
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  ExperimentConfig config;
  for (const auto& [s, sub] : subs) {
    if (sub->parsed()) config.subcommand = s;
  }
  const CLI::App* sub = subs.at(config.subcommand);
  const Flags& f = flags.at(config.subcommand);

  config.format = config.subcommand == Subcommand::selection ? OutputFormat::json : OutputFormat::csv;
  for (const auto& p : params_for(config.subcommand)) {
    if (!p.fallback.is_null()) config.parameters[p.key] = p.fallback;
  }

  if (sub->count("--config")) {
    const json file = load_config_file(f.config);
    for (const auto& [key, value] : file.items()) {
      if (key == "subcommand") {
        if (!value.is_string() || parse_subcommand(value.get<std::string>()) != config.subcommand) {
          throw UsageError("config file is for a different subcommand");
        }
      } else if (key == "format") {
        if (!value.is_string()) throw UsageError("config key 'format' must be a string");
        config.format = parse_format(value.get<std::string>());
      } else if (const ParamSpec* p = find_param(config.subcommand, key)) {
        config.parameters[key] = value_from_file(*p, value);
      } else {
        throw UsageError("unknown config key '" + key + "' for " +
                         subcommand_name(config.subcommand));
      }
    }
  }

  for (const auto& p : params_for(config.subcommand)) {
    if (sub->count("--" + p.key)) config.parameters[p.key] = value_from_flag(p, f.values.at(p.key));
  }
  if (sub->count("--format")) config.format = parse_format(f.format);
  if (sub->count("--out")) config.out = f.out;
  config.verbose = f.verbose;

  if (config.subcommand == Subcommand::lindblad) {
    const bool has_beta = config.parameters.contains("beta");
    const bool has_list = config.parameters.contains("beta-list");
    if (has_beta && has_list) throw UsageError("give either beta or beta-list, not both");
    if (!has_beta && !has_list) config.parameters["beta-list"] = json::array({2.0, 3.0, 4.0, 5.0, 6.0});
  }
  return config;
}

ResultTable run_experiment(const ExperimentConfig& config) {
  ResultTable table;
  switch (config.subcommand) {
    case Subcommand::spectrum:
      table = run_spectrum(config);
      break;
    case Subcommand::paths:
      table = run_paths(config);
      break;
    case Subcommand::selection:
      table = run_selection(config);
      break;
    case Subcommand::lindblad:
      table = run_lindblad(config);
      break;
    case Subcommand::fidelity:
      table = run_fidelity(config);
      break;
  }
  table.meta["tool"] = kToolName;
  table.meta["version"] = kToolVersion;
  table.meta["config"] = config.echo();
  return table;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  try {
    config = parse_config(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << kToolName << ": " << e.what() << "\n";
    return kExitUsage;
  }

  const std::string context = subcommand_name(config.subcommand);
  ResultTable table;
  try {
    table = run_experiment(config);
  } catch (const std::invalid_argument& e) {
    err << kToolName << " " << context << ": invalid parameter: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << kToolName << " " << context << ": invalid parameter: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << kToolName << " " << context << ": numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }

  try {
    emit_results(table, config.format, config.out, out);
  } catch (const std::exception& e) {
    err << kToolName << ": " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace supercoherence::cli
