#include "mslab/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>

#include "mslab/certificates.hpp"
#include "mslab/cli/output.hpp"
#include "mslab/density.hpp"
#include "mslab/dimension.hpp"
#include "mslab/dynamics.hpp"
#include "mslab/maps.hpp"
#include "mslab/measures.hpp"
#include "mslab/parallel.hpp"
#include "mslab/rng.hpp"
#include "mslab/ulam.hpp"

namespace mslab::cli {
namespace {

struct Model {
  QuadraticMap t1;
  QuadraticMap t2;
  DensityOnI h;
};

DensityProvider provider_of(const std::string& name) {
  if (name == "analytic") return DensityProvider::Analytic;
  if (name == "orbit-histogram") return DensityProvider::OrbitHistogram;
  return DensityProvider::Ulam;
}

// h is the invariant density of the master map; it is also the law of the
// noise in the chain.
Model load_model(const ExperimentConfig& cfg) {
  const double c1 = cfg.real("model", "c1");
  const std::string& provider = cfg.text("model", "h_provider");
  if (provider == "analytic" && c1 != 1.0) {
    throw ConfigError("model.h_provider: analytic needs model.c1 = 1");
  }
  if (provider == "orbit-histogram" && cfg.count("model", "h_budget") < 100000) {
    throw ConfigError("model.h_budget: orbit-histogram needs at least 100000 points");
  }
  const QuadraticMap t1(c1);
  DensityRequest req;
  req.provider = provider_of(provider);
  req.n_bins = cfg.count("model", "h_bins");
  req.budget = cfg.count("model", "h_budget");
  req.seed = cfg.count("model", "seed");
  return {t1, QuadraticMap(cfg.real("model", "c2")), invariant_density(t1, req)};
}

std::string k_note(double k) { return "k=" + format_real(k); }

void write_density(const RunContext& ctx, const std::string& name, const DensityOnI& d,
                   const std::vector<std::string>& notes) {
  CsvWriter csv(ctx, name, {"bin_center", "density"}, notes);
  const Partition p = d.partition();
  for (std::size_t j = 0; j < d.n_bins(); ++j) csv.row({p.center(j), d.density(j)});
  csv.close();
}

int cmd_simulate(const ExperimentConfig& cfg, const RunContext& ctx) {
  const QuadraticMap t1(cfg.real("model", "c1"));
  const QuadraticMap t2(cfg.real("model", "c2"));
  const double k = cfg.real("simulate", "k");
  const std::size_t n = cfg.count("simulate", "length");
  const CoupledOrbit o = simulate_coupled(t1, t2, k, cfg.real("simulate", "x0"),
                                          cfg.real("simulate", "y0"), n);

  CsvWriter orbit(ctx, "orbit.csv", {"i", "x", "y", "sync_error"}, {k_note(k)});
  const std::size_t stride = cfg.count("simulate", "orbit_stride");
  for (std::size_t i = 0; i < n; i += stride) {
    orbit.row({i, o.xs[i], o.ys[i], std::abs(o.xs[i] - o.ys[i])});
  }
  orbit.close();

  const double clip = cfg.real("simulate", "lyapunov_clip");
  const auto trace = transverse_lyapunov_trace(o, cfg.count("simulate", "trace_stride"), clip);
  CsvWriter lyap(ctx, "lyapunov.csv", {"n", "lambda_tilde", "clipped_count"}, {k_note(k)});
  for (const auto& t : trace) lyap.row({t.n, t.value, t.clipped});
  lyap.close();

  const std::size_t tail = std::min<std::size_t>(cfg.count("simulate", "sync_tail"), n);
  Report rep(ctx, "summary.txt");
  rep.add("k", k);
  rep.add("length", n);
  rep.add("sync_tail", tail);
  rep.add("sync_error", sync_error(o, tail));
  rep.add("lambda_tilde", trace.back().value);
  rep.add("clipped_count", trace.back().clipped);
  // Start of a frozen tail of y: a float orbit stuck on a fixed point.
  std::size_t frozen = n - 1;
  while (frozen > 0 && o.ys[frozen - 1] == o.ys[n - 1]) --frozen;
  if (frozen + 1 < n) {
    rep.add("absorbed_at", frozen);
  } else {
    rep.add("absorbed_at", std::string("none"));
  }
  rep.close();
  return kExitOk;
}

int cmd_stationary(const ExperimentConfig& cfg, const RunContext& ctx) {
  const Model m = load_model(cfg);
  const double k = cfg.real("stationary", "k");
  const std::size_t n_bins = cfg.count("stationary", "n_bins");
  const UlamOperator op = build_ulam(m.t2, m.h, k, n_bins, cfg.count("stationary", "samples_per_bin"));

  const std::string& initial = cfg.text("stationary", "initial");
  DensityOnI f0 = DensityOnI::uniform(n_bins);
  if (initial == "point") {
    f0 = DensityOnI::point_mass(n_bins,
                                Partition(n_bins).bin_of(cfg.real("stationary", "initial_point")));
  } else if (initial == "random") {
    f0 = random_density(n_bins, derive_seed(cfg.count("model", "seed"), 1));
  }

  const std::size_t max_iter = cfg.count("stationary", "max_iter");
  const StationaryResult res = stationary_density(op, f0, max_iter, cfg.real("stationary", "tol"));
  const StationaryResult ref =
      stationary_density(op, res.density, max_iter, cfg.real("stationary", "reference_tol"));

  const std::vector<std::string> notes = {k_note(k), "c2=" + format_real(m.t2.c()),
                                          "initial=" + initial};
  write_density(ctx, "density.csv", res.density, notes);
  write_density(ctx, "h.csv", project(m.h, n_bins), {"noise density h on the operator partition"});

  Report rep(ctx, "summary.txt");
  rep.add("k", k);
  rep.add("c2", m.t2.c());
  rep.add("n_bins", n_bins);
  rep.add("initial", initial);
  rep.add("iterations", res.iterations);
  rep.add("last_change", res.last_change);
  rep.add("l1_to_h", l1_distance(res.density.weights(), project(m.h, n_bins).weights()));

  std::vector<double> distances;
  try {
    const RateFit fit = empirical_rate(op, f0, ref.density, cfg.count("stationary", "rate_steps"));
    distances = fit.distances;
    rep.add("rate_status", "ok");
    rep.add("rate", fit.rate);
    rep.add("slope", fit.slope);
    rep.add("r_squared", fit.r_squared);
    rep.add("window_first", fit.window_first);
    rep.add("window_last", fit.window_last);
    rep.add("r_squared_ok", fit.r_squared >= cfg.real("stationary", "min_r2"));
  } catch (const DiagnosticError& e) {
    rep.add("rate_status", e.kind() == DiagnosticError::Kind::TooFast ? "too-fast" : "too-slow");
  }
  rep.close();

  if (distances.empty()) {
    DensityOnI f = f0;
    distances.push_back(l1_distance(f.weights(), ref.density.weights()));
    for (std::size_t i = 0; i < res.iterations + 1; ++i) {
      f = op.apply(f);
      distances.push_back(l1_distance(f.weights(), ref.density.weights()));
    }
  }
  CsvWriter trace(ctx, "convergence.csv", {"n", "l1_distance", "log_l1_distance"}, notes);
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const double d = distances[i];
    trace.row({i, d, d > 0 ? Cell(std::log(d)) : Cell("-inf")});
  }
  trace.close();
  return kExitOk;
}

const char* branch_name(KStar::Branch b) {
  switch (b) {
    case KStar::Branch::AboveC2:
      return "a0>c2";
    case KStar::Branch::BelowMinusC2:
      return "b0<-c2";
    case KStar::Branch::Straddles:
      return "a0<c2,b0>-c2";
  }
  return "?";
}

int cmd_certify(const ExperimentConfig& cfg, const RunContext& ctx) {
  const Model m = load_model(cfg);
  const double c2 = m.t2.c();
  if (c2 >= 1.0) throw ConfigError("model.c2: certify needs c2 < 1");
  const double k = cfg.real("certify", "k");

  const auto grid = interior_grid(cfg.count("certify", "grid_points"), cfg.real("certify", "grid_eps"));
  const DriftCertificate drift =
      drift_certificate(m.t2, m.h, k, grid, cfg.real("certify", "quad_rel_tol"));

  CsvWriter res(ctx, "residuals.csv", {"y", "residual", "scale", "relative_residual"},
                {k_note(k), "c2=" + format_real(c2)});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    res.row({grid[i], drift.residuals[i], drift.scales[i], drift.residuals[i] / drift.scales[i]});
  }
  res.close();

  Report rep(ctx, "certificate.txt");
  rep.section("drift");
  rep.add("k", k);
  rep.add("c2", c2);
  rep.add("gamma_k", drift.gamma);
  rep.add("K_k", drift.K);
  rep.add("grid_points", grid.size());
  rep.add("rel_tol", drift.rel_tol);
  rep.add("max_residual", drift.max_residual());
  rep.add("max_relative_residual", drift.max_relative_residual());
  rep.add("VALID", drift.valid());

  int code = kExitOk;
  rep.section("minorization");
  MinorizationParams params;
  params.margin = cfg.real("certify", "margin");
  params.alpha_bar_frac = cfg.real("certify", "alpha_bar_frac");
  params.R_frac = cfg.real("certify", "R_frac");
  params.shift_grid = cfg.count("certify", "shift_grid");
  try {
    const MinorizationCertificate mc = minorization_certificate(m.t2, m.h, k, params);
    rep.add("status", "ok");
    rep.add("a0", mc.envelope.a0);
    rep.add("b0", mc.envelope.b0);
    rep.add("envelope_height", mc.envelope.height);
    rep.add("alpha_k", mc.alpha);
    rep.add("k_star", mc.k_star.value);
    rep.add("k_star_branch", branch_name(mc.k_star.branch));
    rep.add("k_star_ratio", mc.k_star.ratio);
    rep.add("doeblin_mass", mc.nu_tilde_mass);
    rep.add("alpha_bar", mc.alpha_bar);
    rep.add("R", mc.R);
    rep.add("rate_bound", mc.rate_bound);
    rep.add("min_rate_bound", mc.min_rate_bound);
    rep.add("min_alpha_bar_frac", mc.min_alpha_bar_frac);
    rep.add("min_R_frac", mc.min_R_frac);
  } catch (const OutOfRegimeError& e) {
    rep.add("status", "out-of-regime");
    rep.add("k_star", e.k_star());
    rep.add("message", e.what());
    code = kExitOutOfRegime;
  } catch (const EnvelopeError& e) {
    rep.add("status", "no-envelope");
    rep.add("message", e.what());
  }

  const std::size_t steps = cfg.count("certify", "mc_steps");
  const DriftMcReport mcr =
      drift_mc_check(m.t2, m.h, k, cfg.real("certify", "mc_y0"), steps,
                     cfg.count("certify", "mc_reps"), derive_seed(cfg.count("model", "seed"), 2));
  rep.section("drift_mc");
  rep.add("y0", cfg.real("certify", "mc_y0"));
  rep.add("reps", cfg.count("certify", "mc_reps"));
  rep.add("steps", steps);
  double worst = -INFINITY;
  for (const auto& s : mcr.steps) worst = std::max(worst, (s.mean - s.bound) / s.standard_error);
  rep.add("max_excess_in_se", worst);
  rep.add("pass", mcr.pass);
  rep.close();

  CsvWriter mc(ctx, "drift_mc.csv", {"n", "mean_V", "standard_error", "bound", "pass"},
               {k_note(k), "c2=" + format_real(c2)});
  for (const auto& s : mcr.steps) mc.row({s.n, s.mean, s.standard_error, s.bound, s.pass});
  mc.close();
  return code;
}

int cmd_weaklimit(const ExperimentConfig& cfg, const RunContext& ctx) {
  const QuadraticMap t1(cfg.real("model", "c1"));
  const QuadraticMap t2(cfg.real("model", "c2"));
  const auto ks = cfg.reals("weaklimit", "k_list");
  const std::size_t n = cfg.count("weaklimit", "length");
  const std::size_t n_bins = cfg.count("weaklimit", "n_bins");
  const double x0 = cfg.real("weaklimit", "x0");
  const double y0 = cfg.real("weaklimit", "y0");
  const std::size_t burn_in = cfg.count("weaklimit", "burn_in");
  if (burn_in >= n) throw ConfigError("weaklimit.burn_in must be smaller than weaklimit.length");

  DensityRequest req;
  req.n_bins = cfg.count("model", "h_bins");
  req.budget = cfg.count("model", "h_budget");
  const DensityOnI nu_bar = project(invariant_density(t2, req), n_bins);
  const auto grid = default_frequency_grid();

  struct Row {
    double mad, gap, l1_marginals, l1_nu_bar;
  };
  std::vector<Row> rows(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    const CoupledOrbit o = simulate_coupled(t1, t2, ks[i], x0, y0, n);
    const EmpiricalMeasures em = empirical_measures(o, n_bins, burn_in);
    rows[i] = {mean_abs_diff(em.joint), char_function_gap(em.joint, em.master, grid),
               l1_distance(em.joint, product_measure(em.master, em.slave)),
               l1_distance(em.joint, product_measure(em.master, nu_bar))};
  });

  CsvWriter csv(ctx, "weaklimit.csv",
                {"k", "mean_abs_diff", "char_gap", "l1_product_marginals", "l1_product_nu_bar"},
                {"length=" + std::to_string(n), "burn_in=" + std::to_string(burn_in),
                 "n_bins=" + std::to_string(n_bins), "mad_tol=" + format_real(cfg.real("weaklimit", "mad_tol")),
                 "char_gap_tol=" + format_real(cfg.real("weaklimit", "char_gap_tol")),
                 "product_l1_tol=" + format_real(cfg.real("weaklimit", "product_l1_tol"))});
  for (std::size_t i = 0; i < ks.size(); ++i) {
    csv.row({ks[i], rows[i].mad, rows[i].gap, rows[i].l1_marginals, rows[i].l1_nu_bar});
  }
  csv.close();
  return kExitOk;
}

struct Question3Row {
  double k;
  bool control;
  double tv;           // slave histogram vs chain histogram
  double tv_operator;  // slave histogram vs Ulam stationary density
  double tv_chain_operator;
  double tv_conditional;
};

// Law of y given the x-bin, compared with g bin by bin and averaged with the
// master weights. Bins with fewer than min_visits visits are left out.
double conditional_tv(const JointCounts& jc, const DensityOnI& g, std::size_t min_visits) {
  const auto xc = jc.x_counts();
  double acc = 0.0;
  double weight = 0.0;
  for (std::size_t i = 0; i < jc.n_bins; ++i) {
    if (xc[i] < min_visits) continue;
    std::vector<double> row(jc.n_bins);
    for (std::size_t j = 0; j < jc.n_bins; ++j) {
      row[j] = static_cast<double>(jc.cells[i * jc.n_bins + j]) / static_cast<double>(xc[i]);
    }
    const double w = static_cast<double>(xc[i]);
    acc += w * 0.5 * l1_distance(row, g.weights());
    weight += w;
  }
  return weight > 0 ? acc / weight : NAN;
}

int cmd_question3(const ExperimentConfig& cfg, const RunContext& ctx) {
  const Model m = load_model(cfg);
  auto ks = cfg.reals("question3", "k_list");
  const bool control = cfg.flag("question3", "control_row");
  if (control) ks.push_back(1.0);
  const std::size_t n = cfg.count("question3", "length");
  const std::size_t n_chain = cfg.count("question3", "chain_length");
  const std::size_t n_bins = cfg.count("question3", "n_bins");
  const std::size_t op_bins = cfg.count("question3", "operator_bins");
  const std::size_t spb = cfg.count("question3", "samples_per_bin");
  const std::size_t min_visits = cfg.count("question3", "min_visits");
  const double x0 = cfg.real("question3", "x0");
  const double y0 = cfg.real("question3", "y0");
  const std::uint64_t seed = cfg.count("model", "seed");

  std::vector<Question3Row> rows(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    const double k = ks[i];
    const UlamOperator op = build_ulam(m.t2, m.h, k, op_bins, spb);
    const DensityOnI g =
        project(stationary_density(op, DensityOnI::uniform(op_bins)).density, n_bins);
    const CoupledOrbit o = simulate_coupled(m.t1, m.t2, k, x0, y0, n);
    const JointCounts jc = joint_counts(o, n_bins);
    const auto yc = jc.y_counts();
    const DensityOnI slave = DensityOnI::from_counts(yc);
    const ChainPath chain = simulate_chain(m.t2, m.h, k, y0, n_chain, derive_seed(seed, 100 + i));
    const DensityOnI chain_hist = DensityOnI::histogram(chain.ys, n_bins);
    rows[i] = {k,
               control && i + 1 == ks.size(),
               tv_distance(slave, chain_hist),
               tv_distance(slave, g),
               tv_distance(chain_hist, g),
               conditional_tv(jc, g, min_visits)};
  });

  const double floor = cfg.real("question3", "tv_floor");
  const double decay_floor = cfg.real("question3", "decay_floor");
  CsvWriter csv(ctx, "question3.csv",
                {"k", "control", "tv", "tv_operator", "tv_chain_operator", "tv_conditional"},
                {"length=" + std::to_string(n), "chain_length=" + std::to_string(n_chain),
                 "n_bins=" + std::to_string(n_bins), "tv_floor=" + format_real(floor)});
  for (const auto& r : rows) {
    csv.row({r.k, r.control ? 1 : 0, r.tv, r.tv_operator, r.tv_chain_operator, r.tv_conditional});
  }
  csv.close();

  double min_tv = INFINITY;
  double min_k = NAN;
  bool decreasing = true;
  double prev = INFINITY;
  std::size_t swept = 0;
  for (const auto& r : rows) {
    if (r.control) continue;
    ++swept;
    if (r.tv < min_tv) {
      min_tv = r.tv;
      min_k = r.k;
    }
    decreasing = decreasing && r.tv < prev;
    prev = r.tv;
  }
  const bool decays_to_zero = swept > 0 && decreasing && prev < decay_floor;
  Report rep(ctx, "summary.txt");
  rep.add("min_tv", min_tv);
  rep.add("min_tv_k", min_k);
  rep.add("tv_floor", floor);
  rep.add("above_floor", min_tv >= floor);
  rep.add("monotone_decay_below_decay_floor", decays_to_zero);
  rep.add("pass", min_tv >= floor && !decays_to_zero);
  rep.close();
  return kExitOk;
}

void spectrum_rows(CsvWriter& csv, double k, const char* role, const DimensionSpectrum& s) {
  for (std::size_t i = 0; i < s.q.size(); ++i) {
    const auto& f = s.fits[i];
    csv.row({k, role, s.q[i], f.reliable ? Cell(s.d[i]) : Cell("NA"), f.r_squared, f.correlation,
             f.r_min, f.r_max, f.reliable});
  }
}

int cmd_dimension(const ExperimentConfig& cfg, const RunContext& ctx) {
  const double r_min = cfg.real("dimension", "r_min");
  const double r_max = cfg.real("dimension", "r_max");
  if (r_max < r_min * std::pow(10.0, 1.5)) {
    throw ConfigError("dimension.r_max: must be at least 10^1.5 times dimension.r_min");
  }
  const QuadraticMap t1(cfg.real("model", "c1"));
  const QuadraticMap t2(cfg.real("model", "c2"));
  const auto ks = cfg.reals("dimension", "k_list");
  const auto q = cfg.reals("dimension", "q_grid");
  const auto r = geometric_grid(r_min, r_max, cfg.count("dimension", "r_count"));
  const std::size_t n = cfg.count("dimension", "length");
  const std::size_t burn = cfg.count("dimension", "burn_in");
  DimensionOptions opts;
  opts.min_correlation = cfg.real("dimension", "min_correlation");

  const std::vector<std::string> cols = {"k", "role", "q", "D_q", "fit_r2", "correlation",
                                         "r_min", "r_max", "reliable"};
  CsvWriter spectra(ctx, "spectra.csv", cols,
                    {"length=" + std::to_string(n),
                     "D_q is NA where the log-log fit correlation is below min_correlation"});
  CsvWriter delta(ctx, "delta.csv", {"k", "q", "delta", "reliable"},
                  {"delta_tol=" + format_real(cfg.real("dimension", "delta_tol"))});
  for (double k : ks) {
    const CoupledOrbit o = simulate_coupled(t1, t2, k, cfg.real("dimension", "x0"),
                                            cfg.real("dimension", "y0"), n + burn);
    const std::span<const double> xs(o.xs.data() + burn, n);
    const std::span<const double> ys(o.ys.data() + burn, n);
    const DimensionSpectrum master = dq_estimate(xs, q, r, opts);
    const DimensionSpectrum slave = dq_estimate(ys, q, r, opts);
    spectrum_rows(spectra, k, "master", master);
    spectrum_rows(spectra, k, "slave", slave);
    const auto dd = delta_dq(master, slave);
    for (std::size_t i = 0; i < dd.size(); ++i) {
      const bool ok = master.fits[i].reliable && slave.fits[i].reliable;
      delta.row({k, dd[i].first, ok ? Cell(dd[i].second) : Cell("NA"), ok});
    }
  }
  spectra.close();
  delta.close();

  if (cfg.flag("dimension", "self_test")) {
    Rng rng = make_rng(derive_seed(cfg.count("model", "seed"), 3));
    std::vector<double> u(n);
    for (double& v : u) v = 2.0 * uniform01(rng) - 1.0;
    const DimensionSpectrum s = dq_estimate(u, q, r, opts);
    const double tol = cfg.real("dimension", "self_test_tol");
    CsvWriter st(ctx, "selftest.csv", {"q", "D_q", "fit_r2", "reliable", "abs_error", "pass"},
                 {"uniform samples on [-1,1], expected D_q = 1", "tol=" + format_real(tol)});
    for (std::size_t i = 0; i < s.q.size(); ++i) {
      const double err = std::abs(s.d[i] - 1.0);
      st.row({s.q[i], s.fits[i].reliable ? Cell(s.d[i]) : Cell("NA"), s.fits[i].r_squared,
              s.fits[i].reliable, err, s.fits[i].reliable && err <= tol});
    }
    st.close();
  }
  return kExitOk;
}

int cmd_ulam_dump(const ExperimentConfig& cfg, const RunContext& ctx) {
  const Model m = load_model(cfg);
  const UlamOperator op = build_ulam(m.t2, m.h, cfg.real("ulam-dump", "k"),
                                     cfg.count("ulam-dump", "n_bins"),
                                     cfg.count("ulam-dump", "samples_per_bin"));
  const auto path = ctx.out_dir / "ulam.csv";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  write_ulam(out, op,
             {std::string("mslab ") + kToolVersion, "manifest " + ctx.manifest_hash,
              "columns row i = source bin, column j = target bin"});
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
  return kExitOk;
}

using Command = int (*)(const ExperimentConfig&, const RunContext&);

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table = {
      {"simulate", cmd_simulate},   {"stationary", cmd_stationary},
      {"certify", cmd_certify},     {"weaklimit", cmd_weaklimit},
      {"question3", cmd_question3}, {"dimension", cmd_dimension},
      {"ulam-dump", cmd_ulam_dump},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"simulate",  "stationary", "certify",
                                                 "weaklimit", "question3",  "dimension",
                                                 "ulam-dump"};
  return names;
}

int run_command(const std::string& command, const ExperimentConfig& cfg,
                const std::filesystem::path& out_dir) {
  const auto it = commands().find(command);
  if (it == commands().end()) throw ConfigError("unknown command " + command);
  set_thread_count(static_cast<unsigned>(cfg.count("model", "threads")));
  const RunContext ctx = write_manifest(out_dir, cfg.canonical(command));
  return it->second(cfg, ctx);
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Master-slave coupled map experiments"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "Config file");
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "Overrides model.seed");
    sub->add_option("--threads", threads, "Overrides model.threads");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig() : ExperimentConfig::load(config_path);
    if (seed) cfg.set("model", "seed", std::to_string(*seed));
    if (threads) cfg.set("model", "threads", std::to_string(*threads));
    const int code = run_command(command, cfg, out_dir);
    if (code == kExitOutOfRegime) err << "mslab: k outside the minorization regime, see certificate.txt\n";
    return code;
  } catch (const ConfigError& e) {
    err << "mslab: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    err << "mslab: no convergence: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const OutOfRegimeError& e) {
    err << "mslab: out of regime: " << e.what() << '\n';
    return kExitOutOfRegime;
  } catch (const std::exception& e) {
    err << "mslab: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace mslab::cli
