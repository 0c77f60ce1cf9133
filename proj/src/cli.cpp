#include "mldp/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mldp/error.hpp"
#include "mldp/free_energy.hpp"
#include "mldp/io.hpp"
#include "mldp/lattice.hpp"
#include "mldp/oracle.hpp"
#include "mldp/rate.hpp"

namespace mldp {

std::vector<double> parse_range(const std::string& spec) {
  std::vector<std::string> parts;
  std::string cell;
  std::istringstream ss(spec);
  while (std::getline(ss, cell, ':')) parts.push_back(cell);
  if (parts.size() != 3) {
    throw Error(Errc::InvalidArgument, "range '" + spec + "' is not start:stop:step");
  }
  const double start = parse_real(parts[0]);
  const double stop = parse_real(parts[1]);
  const double step = parse_real(parts[2]);
  if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop)) {
    throw Error(Errc::InvalidArgument, "range '" + spec + "' needs finite ends and step > 0");
  }
  if (stop < start) throw Error(Errc::InvalidArgument, "range '" + spec + "' is empty");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + static_cast<double>(i) * step;
  return out;
}

namespace {

struct RunConfig {
  std::vector<std::int64_t> p;
  std::vector<std::int64_t> box;
  double r = 0.5;
  std::optional<double> beta;
  std::string beta_range;
  std::optional<double> x;
  std::string x_range;
  std::optional<double> alpha;
  std::string alpha_range;
  std::uint64_t terms = 100;
  std::uint64_t seed = 0;
  std::uint64_t samples = 10000;
  std::string output;
  std::string format = "csv";
  bool figure = false;
  bool allow_non_coprime = false;
  bool mobius_profile = false;
  std::vector<double> values;
  std::vector<double> freqs;
  std::string kind = "bc1";
  double eps = 0.0;
  std::string dump;
  std::string estimator = "chain";
};

std::vector<double> grid(const std::optional<double>& single, const std::string& range,
                         const char* name) {
  if (single && !range.empty()) {
    throw Error(Errc::InvalidArgument,
                std::string("give either --") + name + " or --" + name + "-range, not both");
  }
  if (single) return {*single};
  if (!range.empty()) return parse_range(range);
  throw Error(Errc::InvalidArgument,
              std::string("missing --") + name + " <real> or --" + name + "-range start:stop:step");
}

MultiplierVector multipliers(const RunConfig& cfg, std::ostream& err) {
  if (cfg.p.empty()) throw Error(Errc::InvalidArgument, "missing --p p1,p2,...");
  MultiplierVector p = validate_multipliers(cfg.p, cfg.allow_non_coprime);
  if (p.warning()) err << "warning: " << *p.warning() << '\n';
  return p;
}

BoxSpec box_of(const RunConfig& cfg, const MultiplierVector& p) {
  if (cfg.box.empty()) throw Error(Errc::InvalidArgument, "missing --N n1,n2,...");
  BoxSpec box = BoxSpec::make(cfg.box);
  if (box.dim() != p.dim()) {
    throw Error(Errc::DimensionMismatch, "--N has " + std::to_string(box.dim()) +
                                             " entries but --p has " + std::to_string(p.dim()));
  }
  return box;
}

WeightProfile profile_of(const RunConfig& cfg) {
  if (cfg.mobius_profile) return WeightProfile::mobius();
  if (cfg.values.empty()) {
    throw Error(Errc::InvalidArgument, "missing --values v1,v2,... and --freqs P1,P2,...");
  }
  return WeightProfile::make(cfg.values, cfg.freqs);
}

bool json_output(const RunConfig& cfg) { return cfg.format == "json"; }

std::vector<CurvePoint> sample_curve(const FreeEnergyEvaluator& f, const std::vector<double>& betas) {
  std::vector<CurvePoint> out;
  out.reserve(betas.size());
  for (double b : betas) {
    out.push_back({b, f.value(b), free_energy_derivative(f, b), f.tail_bound ? f.tail_bound(b) : 0.0});
  }
  return out;
}

void emit_curve(std::ostream& os, const RunConfig& cfg, const std::vector<CurvePoint>& curve) {
  json_output(cfg) ? write_curve_json(os, curve) : write_curve_csv(os, curve);
}

void emit_rates(std::ostream& os, const RunConfig& cfg, const std::vector<RateValue>& rows) {
  json_output(cfg) ? write_rate_json(os, rows) : write_rate_csv(os, rows);
}

int cmd_counts(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const MultiplierVector p = multipliers(cfg, err);
  const ChainCensus census = census_closed_form(box_of(cfg, p), p);
  json_output(cfg) ? write_census_json(os, census) : write_census_csv(os, census);
  return kExitOk;
}

int cmd_free_energy(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const SeriesControl ctrl{cfg.terms, true};
  if (cfg.figure) {
    const std::vector<double> betas =
        cfg.beta || !cfg.beta_range.empty() ? grid(cfg.beta, cfg.beta_range, "beta")
                                            : parse_range("-3:3:0.05");
    const std::vector<std::int64_t> settings[2] = {{2, 1}, {2, 3, 5, 7, 11}};
    std::vector<FigurePoint> rows;
    for (int fig = 1; fig <= 2; ++fig) {
      const MultiplierVector p = validate_multipliers(settings[fig - 1]);
      for (int k = 1; k <= 9; ++k) {
        const double r = k / 10.0;
        for (const CurvePoint& pt : sample_curve(general_evaluator(r, p, ctrl), betas)) {
          rows.push_back({fig, r, pt});
        }
      }
    }
    json_output(cfg) ? write_figure_json(os, rows) : write_figure_csv(os, rows);
    return kExitOk;
  }
  const MultiplierVector p = multipliers(cfg, err);
  emit_curve(os, cfg, sample_curve(general_evaluator(cfg.r, p, ctrl), grid(cfg.beta, cfg.beta_range, "beta")));
  return kExitOk;
}

int cmd_rate(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const MultiplierVector p = multipliers(cfg, err);
  const SeriesControl ctrl{cfg.terms, true};
  std::vector<RateValue> rows;
  for (double x : grid(cfg.x, cfg.x_range, "x")) rows.push_back(general_rate(cfg.r, p, x, ctrl));
  emit_rates(os, cfg, rows);
  return kExitOk;
}

int weighted_like(const RunConfig& cfg, const FreeEnergyEvaluator& f, std::ostream& os) {
  const bool want_rate = cfg.x || !cfg.x_range.empty();
  const bool want_curve = cfg.beta || !cfg.beta_range.empty();
  if (want_rate == want_curve) {
    throw Error(Errc::InvalidArgument,
                "give --beta/--beta-range for the free energy or --x/--x-range for the rate");
  }
  if (want_curve) {
    emit_curve(os, cfg, sample_curve(f, grid(cfg.beta, cfg.beta_range, "beta")));
  } else {
    std::vector<RateValue> rows;
    for (double x : grid(cfg.x, cfg.x_range, "x")) rows.push_back(legendre_rate(f, x));
    emit_rates(os, cfg, rows);
  }
  return kExitOk;
}

int cmd_weighted(const RunConfig& cfg, std::ostream& os, std::ostream&) {
  return weighted_like(cfg, weighted_evaluator(profile_of(cfg), cfg.r), os);
}

int cmd_mobius(const RunConfig& cfg, std::ostream& os, std::ostream&) {
  return weighted_like(cfg, mobius_evaluator(), os);
}

int cmd_boundary(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const MultiplierVector p = multipliers(cfg, err);
  const FreeEnergyEvaluator f = boundary_evaluator(parse_boundary(cfg.kind), p, {cfg.terms, true});
  emit_curve(os, cfg, sample_curve(f, grid(cfg.beta, cfg.beta_range, "beta")));
  return kExitOk;
}

int cmd_spectrum_dim(const RunConfig& cfg, std::ostream& os, std::ostream&) {
  std::vector<DimensionPoint> rows;
  for (double a : grid(cfg.alpha, cfg.alpha_range, "alpha")) {
    const double dim = cfg.mobius_profile ? mobius_dimension_F(a) : fan_dimension_E(profile_of(cfg), a);
    rows.push_back({a, dim});
  }
  json_output(cfg) ? write_dimension_json(os, rows) : write_dimension_csv(os, rows);
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const MultiplierVector p = multipliers(cfg, err);
  const BoxSpec box = box_of(cfg, p);
  if (!cfg.beta) throw Error(Errc::InvalidArgument, "missing --beta <real>");
  const double oracle = brute_force_mgf_log(box, p, cfg.r, *cfg.beta);
  const double formula =
      static_cast<double>(box.volume()) * finite_volume_free_energy(box, p, cfg.r, *cfg.beta);
  const double diff = std::abs(oracle - formula);
  const bool agree = diff <= 1e-10 * std::max(1.0, std::abs(oracle));
  if (json_output(cfg)) {
    os << "{\"oracle\": " << format_real(oracle) << ", \"formula\": " << format_real(formula)
       << ", \"abs_diff\": " << format_real(diff) << ", \"agree\": " << (agree ? "true" : "false")
       << "}\n";
  } else {
    os << kVerifyHeader << '\n'
       << format_real(oracle) << ',' << format_real(formula) << ',' << format_real(diff) << ','
       << (agree ? "true" : "false") << '\n';
  }
  return agree ? kExitOk : kExitMismatch;
}

int cmd_mc(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const MultiplierVector p = multipliers(cfg, err);
  const BoxSpec box = box_of(cfg, p);
  McEstimate est;
  if (cfg.x) {
    if (cfg.beta) throw Error(Errc::InvalidArgument, "--x (rate) and --beta (free energy) are exclusive");
    est = empirical_rate(box, p, cfg.r, *cfg.x, cfg.eps, cfg.samples, cfg.seed);
  } else {
    if (!cfg.beta) throw Error(Errc::InvalidArgument, "missing --beta <real> (or --x with --eps)");
    if (cfg.estimator != "chain" && cfg.estimator != "joint") {
      throw Error(Errc::InvalidArgument, "--estimator must be chain or joint");
    }
    est = mc_free_energy(box, p, cfg.r, *cfg.beta, cfg.samples, cfg.seed,
                         cfg.estimator == "joint" ? McEstimator::Joint : McEstimator::ChainFactorized);
  }
  if (!cfg.dump.empty()) {
    std::ofstream dump(cfg.dump);
    if (!dump) throw Error(Errc::InvalidArgument, "cannot open --dump file '" + cfg.dump + "'");
    write_samples_csv(dump, sample_sums(box, p, cfg.r, cfg.samples, cfg.seed));
  }
  write_estimate_json(os, est);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Large deviations of multiple averages on N^d"};
  app.require_subcommand(1);
  app.name("mldp");

  RunConfig cfg;
  std::function<int(const RunConfig&, std::ostream&, std::ostream&)> action;

  const auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--output,-o", cfg.output, "write to this file instead of stdout");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  const auto add_p = [&cfg](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "multipliers p1,p2,...")->delimiter(',');
    sub->add_flag("--allow-non-coprime", cfg.allow_non_coprime,
                  "accept multipliers that share a factor (with a warning)");
  };
  const auto add_box = [&cfg](CLI::App* sub) {
    sub->add_option("--N", cfg.box, "box sides N1,N2,...")->delimiter(',');
  };
  const auto add_r = [&cfg](CLI::App* sub) {
    sub->add_option("--r", cfg.r, "P(spin = +1), in (0, 1)");
  };
  const auto add_beta = [&cfg](CLI::App* sub) {
    sub->add_option("--beta", cfg.beta, "inverse temperature");
    sub->add_option("--beta-range", cfg.beta_range, "start:stop:step");
  };
  const auto add_x = [&cfg](CLI::App* sub) {
    sub->add_option("--x", cfg.x, "rate-function argument");
    sub->add_option("--x-range", cfg.x_range, "start:stop:step");
  };
  const auto add_terms = [&cfg](CLI::App* sub) {
    sub->add_option("--terms", cfg.terms, "series truncation")->check(CLI::PositiveNumber);
  };
  const auto add_profile = [&cfg](CLI::App* sub) {
    sub->add_option("--values", cfg.values, "weight values v1,v2,...")->delimiter(',');
    sub->add_option("--freqs", cfg.freqs, "weight frequencies P1,P2,...")->delimiter(',');
  };
  const auto bind = [&action](CLI::App* sub, auto fn) {
    sub->callback([&action, fn] { action = fn; });
  };

  auto* counts = app.add_subcommand("counts", "chain census of a box");
  add_box(counts), add_p(counts), add_common(counts);
  bind(counts, cmd_counts);

  auto* fe = app.add_subcommand("free-energy", "infinite-volume free energy curve");
  add_p(fe), add_r(fe), add_beta(fe), add_terms(fe), add_common(fe);
  fe->add_flag("--figure", cfg.figure,
               "r = 0.1..0.9 curves for p = (2,1) (figure 1) and p = (2,3,5,7,11) (figure 2)");
  bind(fe, cmd_free_energy);

  auto* rate = app.add_subcommand("rate", "Legendre-transform rate function");
  add_p(rate), add_r(rate), add_x(rate), add_terms(rate), add_common(rate);
  bind(rate, cmd_rate);

  auto* weighted = app.add_subcommand("weighted", "weighted free energy or rate (r = 1/2)");
  add_profile(weighted), add_r(weighted), add_beta(weighted), add_x(weighted), add_common(weighted);
  bind(weighted, cmd_weighted);

  auto* mob = app.add_subcommand("mobius", "Moebius-weighted free energy or rate");
  add_beta(mob), add_x(mob), add_common(mob);
  bind(mob, cmd_mobius);

  auto* boundary = app.add_subcommand("boundary", "energy under boundary conditions");
  boundary->add_option("--kind", cfg.kind, "free, bc1, bc2 or bcp");
  add_p(boundary), add_beta(boundary), add_terms(boundary), add_common(boundary);
  bind(boundary, cmd_boundary);

  auto* dim = app.add_subcommand("spectrum-dim", "dimension spectra of weighted level sets");
  add_profile(dim), add_common(dim);
  dim->add_flag("--mobius", cfg.mobius_profile, "Moebius level sets instead of a weight profile");
  dim->add_option("--alpha", cfg.alpha, "level");
  dim->add_option("--alpha-range", cfg.alpha_range, "start:stop:step");
  bind(dim, cmd_spectrum_dim);

  auto* verify = app.add_subcommand("verify", "brute-force oracle against the chain formula");
  add_box(verify), add_p(verify), add_r(verify), add_common(verify);
  verify->add_option("--beta", cfg.beta, "inverse temperature");
  bind(verify, cmd_verify);

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimates");
  add_box(mc), add_p(mc), add_r(mc), add_common(mc);
  mc->add_option("--beta", cfg.beta, "free-energy estimate at this beta");
  mc->add_option("--x", cfg.x, "empirical rate at this level (needs --eps)");
  mc->add_option("--eps", cfg.eps, "half-width of the rate window");
  mc->add_option("--samples", cfg.samples, "number of samples")->check(CLI::PositiveNumber);
  mc->add_option("--seed", cfg.seed, "stream seed");
  mc->add_option("--dump", cfg.dump, "write sample_index,S to this CSV file");
  mc->add_option("--estimator", cfg.estimator, "chain (default) or joint");

  bind(mc, cmd_mc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (!app.get_subcommands().empty()) err << app.get_subcommands().front()->help();
    return kExitValidation;
  }

  try {
    if (cfg.output.empty()) return action(cfg, out, err);
    std::ostringstream buffer;
    const int code = action(cfg, buffer, err);
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) throw Error(Errc::InvalidArgument, "cannot open --output file '" + cfg.output + "'");
    file << buffer.str();
    return code;
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << " (last bracket [" << e.bracket_lo() << ", " << e.bracket_hi()
        << "])\n";
    return kExitNonConvergence;
  } catch (const InsufficientHits& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("mldp");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace mldp
