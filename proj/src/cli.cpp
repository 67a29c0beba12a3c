#include "pinsker/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pinsker/augmented.hpp"
#include "pinsker/measures.hpp"
#include "pinsker/oracle.hpp"
#include "pinsker/pinsker_bounds.hpp"
#include "pinsker/serialize.hpp"
#include "pinsker/vajda_curve.hpp"

namespace pinsker::cli {

namespace {

using nlohmann::json;

enum class Format { Json, Csv };

/// Parsed command line. Only the fields of the selected subcommand are used.
struct CliConfig {
  std::string subcommand;
  Format format = Format::Json;
  std::string convention;
  std::string p_arg;
  std::string q_arg;
  std::optional<double> delta;
  std::optional<double> xi;
  std::optional<double> atv;
  std::optional<double> m1, big_m1, m2, big_m2;
  double t_min = 0.01;
  double t_max = 20.0;
  int n_points = 500;
  int budget = 10000;
  std::uint64_t seed = 1;
  int trials = 100000;
  int max_support = 6;
  double tightness_tol = 5e-3;
  double agreement_tol = 1e-6;
  std::string violations_path;
};

class InputError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

TvConvention required_convention(const CliConfig& cfg) {
  if (cfg.convention.empty()) {
    throw InputError("--convention {sup,variational} is required for '" + cfg.subcommand + "'");
  }
  return parse_tv_convention(cfg.convention);
}

Distribution read_distribution(const std::string& arg, std::istream& in, const char* name) {
  if (arg.empty()) throw InputError(std::string("missing --") + name);
  const auto first = arg.find_first_not_of(" \t\r\n");
  std::string text;
  if (first != std::string::npos && arg[first] == '{') {
    text = arg;
  } else if (arg == "-") {
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  } else {
    std::ifstream file(arg);
    if (!file) throw InputError("cannot open distribution file '" + arg + "'");
    std::ostringstream buf;
    buf << file.rdbuf();
    text = buf.str();
  }
  return parse_distribution(text);
}

DensityBounds bounds_from(const std::optional<double>& m, const std::optional<double>& big_m, const char* what) {
  if (!m || !big_m) throw InputError(std::string("missing density bounds for ") + what);
  return DensityBounds(*m, *big_m);
}

std::string csv_cell(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "inf";
  return v.dump();
}

void emit(const json& result, Format format, std::ostream& out) {
  if (format == Format::Json) {
    out << result.dump() << '\n';
    return;
  }
  if (!result.is_object()) throw InputError("csv output needs a flat record");
  std::string header, row;
  for (const auto& [key, value] : result.items()) {
    if (value.is_structured()) throw InputError("csv output is not available for this subcommand; use --format json");
    header += (header.empty() ? "" : ",") + key;
    row += (row.empty() ? "" : ",") + csv_cell(value);
  }
  out << header << '\n' << row << '\n';
}

int cmd_divergence(const CliConfig& cfg, std::istream& in, std::ostream& out) {
  const TvConvention conv = required_convention(cfg);
  const Distribution p = read_distribution(cfg.p_arg, in, "p");
  const Distribution q = read_distribution(cfg.q_arg, in, "q");
  json result;
  if (const auto* pd = std::get_if<DiscreteDistribution>(&p)) {
    const auto* qd = std::get_if<DiscreteDistribution>(&q);
    if (qd == nullptr) throw InputError("divergence needs two distributions of the same type");
    const double kl = kl_discrete(*pd, *qd);
    result = {{"kl", std::isfinite(kl) ? json(kl) : json(nullptr)},
              {"tv", tv_discrete(*pd, *qd, conv)},
              {"convention", to_string(conv)}};
  } else if (const auto* pg = std::get_if<Gaussian1D>(&p)) {
    const auto* qg = std::get_if<Gaussian1D>(&q);
    if (qg == nullptr) {
      throw InputError("divergence between gaussian1d and another type is not supported; see gaussian-akl");
    }
    result = {{"kl", kl_gaussian_1d(*pg, *qg)}, {"tv", tv_gaussian_1d(*pg, *qg, conv)}, {"convention", to_string(conv)}};
  } else {
    throw InputError("divergence supports discrete and gaussian1d pairs; see gaussian-akl for gaussiannd");
  }
  emit(result, cfg.format, out);
  return kExitOk;
}

int cmd_vajda(const CliConfig& cfg, std::ostream& out) {
  const TvConvention conv = required_convention(cfg);
  if (!cfg.delta) throw InputError("vajda needs --delta");
  const GammaSearchResult reid = reid_lower_bound(*cfg.delta, conv);
  json result = {{"delta", *cfg.delta},
                 {"convention", to_string(conv)},
                 {"vajda", vajda_lower_bound(*cfg.delta, conv)},
                 {"reid", reid.value},
                 {"gamma_star", reid.gamma_star}};
  emit(result, cfg.format, out);
  return kExitOk;
}

int cmd_poly(const CliConfig& cfg, std::ostream& out) {
  if (cfg.delta.has_value() == cfg.xi.has_value()) throw InputError("poly needs exactly one of --delta or --xi");
  // The polynomial is stated in the variational convention; --convention only rescales the input/output.
  const TvConvention conv = cfg.convention.empty() ? TvConvention::Variational : parse_tv_convention(cfg.convention);
  json result;
  if (cfg.delta) {
    const double delta_var = convert_tv(*cfg.delta, conv, TvConvention::Variational);
    result = {{"delta", *cfg.delta}, {"convention", to_string(conv)}, {"poly", poly_lower_bound(delta_var)}};
  } else {
    const double delta_var = invert_poly_bound(*cfg.xi);
    const double delta = conv == TvConvention::Variational ? delta_var : 0.5 * delta_var;
    result = {{"xi", *cfg.xi}, {"convention", to_string(conv)}, {"delta", delta}};
  }
  emit(result, cfg.format, out);
  return kExitOk;
}

int cmd_reverse_pinsker(const CliConfig& cfg, std::ostream& out) {
  const TvConvention conv = required_convention(cfg);
  if (!cfg.delta) throw InputError("reverse-pinsker needs --delta");
  const DensityBounds first = bounds_from(cfg.m1, cfg.big_m1, "--m/--M");
  const double u1 = reverse_pinsker(*cfg.delta, conv, first);
  json result = {{"delta", *cfg.delta}, {"convention", to_string(conv)}, {"u1", u1}};
  if (cfg.m2 || cfg.big_m2) {
    const AugmentedDensityBounds both{first, bounds_from(cfg.m2, cfg.big_m2, "--m2/--M2")};
    result["u2"] = reverse_pinsker(*cfg.delta, conv, both.proj);
    result["upper"] = augmented_upper_bound(*cfg.delta, conv, both);
  } else {
    result["upper"] = u1;
  }
  emit(result, cfg.format, out);
  return kExitOk;
}

int cmd_curve(const CliConfig& cfg, std::ostream& out) {
  const std::vector<CurvePoint> points = emit_curve(cfg.t_min, cfg.t_max, cfg.n_points);
  if (cfg.format == Format::Csv) {
    write_curve_csv(out, points);
  } else {
    out << curve_to_json(points).dump() << '\n';
  }
  return kExitOk;
}

std::pair<Gaussian1D, GaussianND> gaussian_pair(const CliConfig& cfg, std::istream& in) {
  const Distribution p = read_distribution(cfg.p_arg, in, "p");
  const Distribution q = read_distribution(cfg.q_arg, in, "q");
  const auto* pg = std::get_if<Gaussian1D>(&p);
  const auto* qg = std::get_if<GaussianND>(&q);
  if (pg == nullptr || qg == nullptr) throw InputError("expected --p gaussian1d and --q gaussiannd");
  return {*pg, *qg};
}

int cmd_gaussian_akl(const CliConfig& cfg, std::istream& in, std::ostream& out) {
  const TvConvention conv = required_convention(cfg);
  const auto [p, q] = gaussian_pair(cfg, in);
  const double akl = gaussian_akl(p, q);
  const ProjectionSearchResult search = search_projection_divergence(p, q, SearchObjective::Kl, conv, cfg.budget, cfg.seed);
  json result = {{"akl", akl},
                 {"search", to_json(search)},
                 {"search_gap", search.best_value - akl},
                 {"atv", atv_gaussian(p, q, conv, 0, cfg.seed)},
                 {"convention", to_string(conv)},
                 {"atv_upper_variational", invert_poly_bound(akl)}};
  emit(result, cfg.format, out);
  return kExitOk;
}

int cmd_sandwich(const CliConfig& cfg, std::istream& in, std::ostream& out) {
  const Distribution p = read_distribution(cfg.p_arg, in, "p");
  const Distribution q = read_distribution(cfg.q_arg, in, "q");
  json result;
  if (std::holds_alternative<DiscreteDistribution>(p) && std::holds_alternative<DiscreteDistribution>(q)) {
    result = to_json(check_sandwich_same_dim(std::get<DiscreteDistribution>(p), std::get<DiscreteDistribution>(q)));
  } else if (std::holds_alternative<Gaussian1D>(p) && std::holds_alternative<GaussianND>(q)) {
    const TvConvention conv = required_convention(cfg);
    const auto& pg = std::get<Gaussian1D>(p);
    const auto& qg = std::get<GaussianND>(q);
    const AugmentedDensityBounds bounds{bounds_from(cfg.m1, cfg.big_m1, "--m1/--M1"),
                                        bounds_from(cfg.m2, cfg.big_m2, "--m2/--M2")};
    const double atv = cfg.atv ? *cfg.atv : atv_gaussian(pg, qg, conv, 0, cfg.seed);
    result = to_json(check_sandwich_augmented(pg, qg, bounds, atv, conv));
    result["atv"] = atv;
    result["convention"] = to_string(conv);
  } else {
    throw InputError("sandwich needs two discrete distributions or a gaussian1d p with a gaussiannd q");
  }
  emit(result, cfg.format, out);
  return kExitOk;
}

json check(const std::string& name, bool passed, json detail) {
  return {{"name", name}, {"passed", passed}, {"detail", std::move(detail)}};
}

int cmd_verify(const CliConfig& cfg, std::ostream& out) {
  if (!(cfg.tightness_tol > 0.0) || !(cfg.agreement_tol > 0.0)) throw InputError("tolerances must be positive");
  json checks = json::array();

  const TvConvention resolved = oracle::resolve_tv_convention();
  checks.push_back(check("tv_convention", resolved == kReversePinskerConvention,
                         {{"resolved", to_string(resolved)}, {"pinned", to_string(kReversePinskerConvention)}}));

  const oracle::FuzzReport fuzz = oracle::fuzz_sandwich(cfg.trials, cfg.max_support, cfg.seed);
  checks.push_back(check("fuzz_sandwich", fuzz.violations.empty(),
                         {{"trials", fuzz.n_trials}, {"violations", fuzz.violations.size()}}));
  if (!cfg.violations_path.empty()) {
    std::ofstream file(cfg.violations_path);
    if (!file) throw InputError("cannot write violations file '" + cfg.violations_path + "'");
    write_violations_jsonl(file, fuzz);
  }

  double worst_gap = 0.0;
  bool ordered = true;
  for (int i = 0; i < 200; ++i) {
    const double delta = 1.9 * i / 199.0;
    const double vajda = vajda_lower_bound(delta, TvConvention::Variational);
    worst_gap = std::max(worst_gap, std::abs(vajda - reid_lower_bound(delta, TvConvention::Variational).value));
    ordered = ordered && poly_lower_bound(delta) <= vajda;
  }
  checks.push_back(check("curve_agreement", worst_gap <= cfg.agreement_tol, {{"max_abs_gap", worst_gap}}));
  checks.push_back(check("poly_below_curve", ordered, json::object()));

  json tightness = json::array();
  bool tight = true;
  for (double delta : {0.2, 0.5, 0.9, 1.3, 1.7}) {
    oracle::OracleGridSpec spec;
    spec.constraint_delta = delta;
    const double grid_min = oracle::min_kl_at_tv(spec);
    const double bound = vajda_lower_bound(delta, TvConvention::Variational);
    tight = tight && grid_min >= bound - 1e-9 && grid_min <= bound + cfg.tightness_tol;
    tightness.push_back({{"delta", delta}, {"grid_min", grid_min}, {"vajda", bound}});
  }
  checks.push_back(check("oracle_tightness", tight, std::move(tightness)));

  const Gaussian1D p(0.0, 0.25);
  Eigen::MatrixXd sigma = Eigen::Vector3d(1.0, 2.0, 4.0).asDiagonal();
  const GaussianND q(Eigen::VectorXd::Zero(3), sigma);
  const double akl = gaussian_akl(p, q);
  const ProjectionSearchResult search =
      search_projection_divergence(p, q, SearchObjective::Kl, TvConvention::Sup, cfg.budget, cfg.seed);
  checks.push_back(check("gaussian_akl_search", std::abs(search.best_value - akl) <= 1e-4,
                         {{"closed_form", akl}, {"search", search.best_value}}));

  const bool passed = std::all_of(checks.begin(), checks.end(), [](const json& c) { return c.at("passed").get<bool>(); });
  out << json{{"passed", passed}, {"checks", std::move(checks)}}.dump() << '\n';
  return passed ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pinsker-type bounds between KL divergence and total variation"};
  app.name("pinsker");
  app.require_subcommand(1);
  CliConfig cfg;

  std::string format = "json";
  const auto formats = CLI::IsMember({"json", "csv"});
  const auto conventions = CLI::IsMember({"sup", "variational"});
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(formats);
  };
  auto add_convention = [&](CLI::App* sub) {
    sub->add_option("--convention", cfg.convention, "TV convention: sup (range [0,1]) or variational ([0,2])")
        ->check(conventions);
  };
  auto add_pair = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p_arg, "Distribution P: inline JSON, file path, or - for stdin")->required();
    sub->add_option("--q", cfg.q_arg, "Distribution Q: inline JSON, file path, or - for stdin")->required();
  };

  auto* divergence = app.add_subcommand("divergence", "KL divergence and TV distance of a pair");
  add_pair(divergence);
  add_convention(divergence);
  add_common(divergence);

  auto* vajda = app.add_subcommand("vajda", "Optimal lower bound L(delta), parametric and explicit");
  vajda->add_option("--delta", cfg.delta, "TV distance")->required();
  add_convention(vajda);
  add_common(vajda);

  auto* poly = app.add_subcommand("poly", "Polynomial lower bound, or its inverse with --xi");
  poly->add_option("--delta", cfg.delta, "TV distance (variational unless --convention is given)");
  poly->add_option("--xi", cfg.xi, "KL value to invert");
  add_convention(poly);
  add_common(poly);

  auto* reverse = app.add_subcommand("reverse-pinsker", "Reverse Pinsker upper bound, optionally max over two sides");
  reverse->add_option("--delta", cfg.delta, "TV distance")->required();
  reverse->add_option("--m", cfg.m1, "Essential infimum of the relative density")->required();
  reverse->add_option("--M", cfg.big_m1, "Essential supremum of the relative density")->required();
  reverse->add_option("--m2", cfg.m2, "Second-side essential infimum");
  reverse->add_option("--M2", cfg.big_m2, "Second-side essential supremum");
  add_convention(reverse);
  add_common(reverse);

  auto* curve = app.add_subcommand("curve", "Points of the lower-bound curve on a log-spaced parameter grid");
  curve->add_option("--t-min", cfg.t_min, "Smallest curve parameter");
  curve->add_option("--t-max", cfg.t_max, "Largest curve parameter");
  curve->add_option("--n", cfg.n_points, "Number of points");
  add_common(curve);

  auto* akl = app.add_subcommand("gaussian-akl", "Augmented KL of a 1-D vs n-D Gaussian with search cross-check");
  add_pair(akl);
  add_convention(akl);
  akl->add_option("--budget", cfg.budget, "Random frames drawn by the search")->check(CLI::PositiveNumber);
  akl->add_option("--seed", cfg.seed, "Root seed");
  add_common(akl);

  auto* sandwich = app.add_subcommand("sandwich", "Check poly <= L <= divergence <= upper for a pair");
  add_pair(sandwich);
  add_convention(sandwich);
  sandwich->add_option("--atv", cfg.atv, "Augmented TV (estimated when omitted)");
  sandwich->add_option("--m1", cfg.m1, "Embedding-side essential infimum");
  sandwich->add_option("--M1", cfg.big_m1, "Embedding-side essential supremum");
  sandwich->add_option("--m2", cfg.m2, "Projection-side essential infimum");
  sandwich->add_option("--M2", cfg.big_m2, "Projection-side essential supremum");
  sandwich->add_option("--seed", cfg.seed, "Root seed");
  add_common(sandwich);

  auto* verify = app.add_subcommand("verify", "Run the brute-force oracle suite");
  verify->add_option("--trials", cfg.trials, "Random pairs for the sandwich fuzzer")->check(CLI::PositiveNumber);
  verify->add_option("--max-support", cfg.max_support, "Largest support size for the fuzzer");
  verify->add_option("--seed", cfg.seed, "Root seed");
  verify->add_option("--budget", cfg.budget, "Frames for the Gaussian search check")->check(CLI::PositiveNumber);
  verify->add_option("--tightness-tol", cfg.tightness_tol, "Allowed excess of grid minimum over the bound");
  verify->add_option("--agreement-tol", cfg.agreement_tol, "Allowed gap between the two curve evaluations");
  verify->add_option("--violations", cfg.violations_path, "Write violating pairs as JSON lines to this file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "pinsker: " << e.what() << "\n\n" << app.help();
    return kExitInputError;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.format = format == "csv" ? Format::Csv : Format::Json;

  const std::map<std::string, std::function<int()>> handlers{
      {"divergence", [&] { return cmd_divergence(cfg, in, out); }},
      {"vajda", [&] { return cmd_vajda(cfg, out); }},
      {"poly", [&] { return cmd_poly(cfg, out); }},
      {"reverse-pinsker", [&] { return cmd_reverse_pinsker(cfg, out); }},
      {"curve", [&] { return cmd_curve(cfg, out); }},
      {"gaussian-akl", [&] { return cmd_gaussian_akl(cfg, in, out); }},
      {"sandwich", [&] { return cmd_sandwich(cfg, in, out); }},
      {"verify", [&] { return cmd_verify(cfg, out); }},
  };
  try {
    return handlers.at(cfg.subcommand)();
  } catch (const std::invalid_argument& e) {
    err << "pinsker " << cfg.subcommand << ": " << e.what() << '\n';
  } catch (const std::domain_error& e) {
    err << "pinsker " << cfg.subcommand << ": " << e.what() << '\n';
  } catch (const InputError& e) {
    err << "pinsker " << cfg.subcommand << ": " << e.what() << '\n';
  } catch (const QuadratureError& e) {
    err << "pinsker " << cfg.subcommand << ": " << e.what() << '\n';
  }
  return kExitInputError;
}

}  // namespace pinsker::cli
