#include "vortmix/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include "io.hpp"
#include "vortmix/diagnostics.hpp"
#include "vortmix/girsanov.hpp"
#include "vortmix/mixing.hpp"
#include "vortmix/parallel.hpp"
#include "vortmix/partition.hpp"
#include "vortmix/reduction.hpp"

namespace fs = std::filesystem;

namespace vortmix {

namespace {

struct Context {
  const RunConfig& config;
  std::uint64_t seed;
  ParallelContext parallel;
  fs::path out;
  std::string kvector_file;
  RunResult result;

  std::string path(const std::string& name) {
    result.files.push_back(name);
    return (out / name).string();
  }
  void note(const std::string& key, const std::string& value) { result.summary.emplace_back(key, value); }
  void note(const std::string& key, double value) { note(key, format_double(value)); }
  void note(const std::string& key, bool value) { note(key, std::string(value ? "true" : "false")); }
  void note(const std::string& key, std::size_t value) { note(key, std::to_string(value)); }
};

SpectralGrid make_grid(const RunConfig& c) { return SpectralGrid(c.grid.kmax, c.grid.n_force); }

ForcingSpec make_spec(const RunConfig& c) {
  const auto spec = uniform_spec(make_grid(c), c.forcing.R);
  if (c.forcing.covariance_file.empty()) return spec;
  const auto path = c.resolve(c.forcing.covariance_file);
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "forcing.covariance_file: cannot open " + path);
  return apply_override(spec, in);
}

VorticityField rescaled(VorticityField w, double enstrophy) {
  const double current = l2_norm_sq(w);
  if (enstrophy == 0.0 || current == 0.0) return VorticityField(w.grid());
  w *= std::sqrt(enstrophy / current);
  return w;
}

VorticityField initial_field(const RunConfig& c, const InitialConfig& init, std::uint64_t seed,
                             std::uint64_t index, const std::string& field) {
  const auto grid = make_grid(c);
  VorticityField w(grid);
  if (!init.file.empty()) {
    const auto path = c.resolve(init.file);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kConfig, field + ".file: cannot open " + path);
    w = read_vort1(in);
    if (!(w.grid() == grid)) throw Error(ErrorCode::kConfig, field + ".file: grid differs from the config");
  } else if (init.enstrophy > 0.0) {
    Rng rng(derive_seed(seed, "initial", index));
    w = rescaled(sample_gaussian_field(grid, 1.0, rng), init.enstrophy);
  }
  if (init.high_enstrophy > 0.0) {
    Rng rng(derive_seed(seed, "initial_high", index));
    w += rescaled(project_high(sample_gaussian_field(grid, 1.0, rng)), init.high_enstrophy);
  }
  return w;
}

VorticityField random_high(const SpectralGrid& grid, double enstrophy, Rng& rng) {
  return rescaled(project_high(sample_gaussian_field(grid, 1.0, rng)), enstrophy);
}

std::size_t steps_of(double span, double dt) { return step_count(span, dt); }

void run_simulate(Context& ctx) {
  const auto& c = ctx.config;
  const auto spec = make_spec(c);
  const auto w0 = initial_field(c, c.initial, ctx.seed, 0, "initial");
  const double dt = c.integrator.dt;
  const std::size_t per_unit = static_cast<std::size_t>(steps_per_unit(dt));
  const std::size_t n = steps_of(c.integrator.t_end, dt);
  const std::size_t every = steps_of(c.simulate.output_interval, dt);

  if (c.simulate.snapshots) fs::create_directories(ctx.out / "snapshots");
  CsvWriter csv(ctx.path("trajectory.csv"), {"t", "enstrophy", "h1", "D_running"});
  double sup = 0.0;
  double dissipation = 0.0;
  std::size_t snapshots = 0;
  auto observe = [&](std::size_t step, const VorticityField& w, const VorticityField*) {
    const double enstrophy = l2_norm_sq(w);
    const double h1 = h1_seminorm_sq(w);
    if (step == 0) sup = 0.5 * enstrophy;
    sup = std::max(sup, 0.5 * enstrophy);
    const double t = static_cast<double>(step) / static_cast<double>(per_unit);
    if (step % every == 0 || step == n) csv.row({t, enstrophy, h1, sup + dissipation});
    if (step % per_unit == 0) {
      if (c.simulate.snapshots) {
        char name[40];
        std::snprintf(name, sizeof name, "snapshots/t%06zu.vort1", step / per_unit);
        std::ofstream out(ctx.path(name), std::ios::binary);
        write_vort1(out, w);
        ++snapshots;
      }
      // the interval ending here is closed; the next one starts from this state
      sup = 0.5 * enstrophy;
      dissipation = 0.0;
    }
    dissipation += h1 * dt;
  };
  RecordPolicy policy;
  policy.stride = std::max<std::size_t>(n, 1);
  Rng rng(derive_seed(ctx.seed, "simulate", 0));
  const auto traj = simulate(w0, spec, c.integrator.t_end, dt, rng, policy, observe);
  csv.close();
  ctx.note("steps", n);
  ctx.note("snapshots", snapshots);
  ctx.note("final_enstrophy", l2_norm_sq(traj.states.back()));
}

void run_couple(Context& ctx) {
  const auto& c = ctx.config;
  const auto spec = make_spec(c);
  const auto w1 = initial_field(c, c.initial, ctx.seed, 0, "initial");
  const auto w2 = initial_field(c, c.couple.second, ctx.seed, 1, "couple.second");
  const auto report =
      couple(w1, w2, spec, c.couple.t_end, c.integrator.dt, ctx.seed, c.couple.resamples);
  CsvWriter csv(ctx.path("coupling.csv"), {"t", "d_full", "d_low", "d_high"});
  for (std::size_t i = 0; i < report.times.size(); ++i) {
    csv.row({report.times[i], report.d_full[i], report.d_low[i], report.d_high[i]});
  }
  csv.close();
  const auto& fit = report.fit;
  CsvWriter summary(ctx.path("coupling_fit.csv"),
                    {"defined", "points", "rate", "ci_lower", "ci_upper", "pass"});
  const bool pass = fit.defined && fit.ci.upper < 0.0;
  summary.row({fit.defined, static_cast<std::int64_t>(fit.points), fit.rate, fit.ci.lower,
               fit.ci.upper, pass});
  summary.close();
  ctx.note("fit_defined", fit.defined);
  ctx.note("rate", fit.rate);
  ctx.note("rate_ci_lower", fit.ci.lower);
  ctx.note("rate_ci_upper", fit.ci.upper);
  ctx.note("pass", pass);
}

void run_reduce(Context& ctx) {
  const auto& c = ctx.config;
  const auto spec = make_spec(c);
  const auto& grid = spec.grid();
  const auto w0 = initial_field(c, c.initial, ctx.seed, 0, "initial");
  const double dt = c.integrator.dt;
  RecordPolicy policy;
  policy.stride = 1;
  Rng rng(derive_seed(ctx.seed, "reduce", 0));
  const auto s = extract_s_path(simulate(w0, spec, c.reduce.t_end, dt, rng, policy));
  const std::size_t steps = s.values.size() - 1;

  const std::size_t splits = static_cast<std::size_t>(c.reduce.splits);
  std::vector<double> residual(splits), l_norm(splits), t_mid(splits);
  std::vector<std::optional<TransformWorkspace>> spaces(static_cast<std::size_t>(ctx.parallel.workers));
  auto workspace = [&](int worker) -> TransformWorkspace& {
    auto& ws = spaces[static_cast<std::size_t>(worker)];
    if (!ws) ws.emplace(grid);
    return *ws;
  };
  parallel_for(splits, ctx.parallel, [&](std::size_t i, int worker) {
    Rng r(derive_seed(ctx.seed, "reduce_split", i));
    const auto l0 = random_high(grid, c.reduce.l_enstrophy, r);
    const std::size_t mid = r.below(steps + 1);
    l_norm[i] = norm(l0);
    t_mid[i] = s.time(mid);
    residual[i] = semigroup_check(s, l0, mid, workspace(worker));
  });
  CsvWriter semi(ctx.path("semigroup.csv"), {"split", "t_mid", "l0_norm", "residual", "bound", "pass"});
  double max_residual = 0.0;
  bool semigroup_pass = true;
  for (std::size_t i = 0; i < splits; ++i) {
    const double bound = 1e-12 * std::max(1.0, l_norm[i]);
    const bool pass = residual[i] <= bound;
    semigroup_pass = semigroup_pass && pass;
    max_residual = std::max(max_residual, residual[i]);
    semi.row({static_cast<std::int64_t>(i), t_mid[i], l_norm[i], residual[i], bound, pass});
  }
  semi.close();

  const double a = constant_a().value;
  const std::size_t pairs = static_cast<std::size_t>(c.reduce.pairs);
  std::vector<std::vector<ContractionRow>> rows(pairs);
  parallel_for(pairs, ctx.parallel, [&](std::size_t j, int worker) {
    Rng r(derive_seed(ctx.seed, "reduce_pair", j));
    const auto l1 = random_high(grid, c.reduce.l_enstrophy, r);
    const auto l2 = random_high(grid, c.reduce.l_enstrophy, r);
    rows[j] = contraction_report(s, l1, l2, a, workspace(worker));
  });
  CsvWriter con(ctx.path("contraction.csv"),
                {"pair", "t", "lhs", "rhs", "rhs_gronwall", "ratio", "pass"});
  bool contraction_pass = true;
  double max_ratio = 0.0;
  for (std::size_t j = 0; j < pairs; ++j) {
    for (const auto& row : rows[j]) {
      const bool pass = row.lhs <= row.rhs * (1.0 + c.reduce.slack);
      contraction_pass = contraction_pass && pass;
      max_ratio = std::max(max_ratio, row.ratio);
      con.row({static_cast<std::int64_t>(j), row.t, row.lhs, row.rhs, row.rhs_gronwall, row.ratio, pass});
    }
  }
  con.close();
  ctx.note("constant_a", a);
  ctx.note("semigroup_max_residual", max_residual);
  ctx.note("semigroup_pass", semigroup_pass);
  ctx.note("contraction_max_ratio", max_ratio);
  ctx.note("contraction_pass", contraction_pass);
}

void run_girsanov(Context& ctx) {
  const auto& c = ctx.config;
  const auto spec = make_spec(c);
  const auto w0 = initial_field(c, c.initial, ctx.seed, 0, "initial");
  const double dt = c.integrator.dt;
  GirsanovOptions opts;
  opts.clip = c.girsanov.clip;
  opts.keep_increments = false;
  const Observable enstrophy = [](const VorticityField& w) { return l2_norm_sq(w); };
  const auto samples =
      sample_weighted(w0, spec, c.girsanov.t_end, dt, c.girsanov.paths, enstrophy, ctx.seed,
                      ctx.parallel, opts);
  const auto est = reweighted_expectation(samples);

  CsvWriter paths(ctx.path("girsanov.csv"), {"path", "log_density", "enstrophy"});
  for (std::size_t i = 0; i < samples.size(); ++i) {
    paths.row({static_cast<std::int64_t>(i), samples[i].log_weight, samples[i].value});
  }
  paths.close();

  // Additivity on one recorded reference path, split in the middle.
  TransformWorkspace ws(spec.grid());
  Trajectory record;
  Rng rng(derive_seed(ctx.seed, "girsanov_additivity", 0));
  const auto ref = sample_reference_path(w0, spec, c.girsanov.t_end, dt, rng, ws, opts, &record);
  const std::size_t last = record.states.size() - 1;
  const std::size_t mid = last / 2;
  const auto whole = log_density(record, spec, ws, opts);
  const auto joined =
      concatenate(log_density(record, spec, ws, 0, mid, opts), log_density(record, spec, ws, mid, last, opts));
  const double additivity = std::abs(whole.total() - joined.total());
  const double streaming = std::abs(whole.total() - ref.log.total());

  const bool pass = std::abs(est.mean_weight - 1.0) <= 3.0 * est.weight_standard_error;
  CsvWriter summary(ctx.path("girsanov_summary.csv"),
                    {"paths", "mean_weight", "weight_standard_error", "enstrophy_estimate",
                     "enstrophy_standard_error", "ess", "low_ess", "clipped", "additivity_error",
                     "pass"});
  summary.row({static_cast<std::int64_t>(est.n), est.mean_weight, est.weight_standard_error,
               est.estimate, est.standard_error, est.ess, est.low_ess, opts.clip > 0.0,
               additivity, pass});
  summary.close();
  ctx.note("mean_weight", est.mean_weight);
  ctx.note("weight_standard_error", est.weight_standard_error);
  ctx.note("ess", est.ess);
  ctx.note("low_ess", est.low_ess);
  ctx.note("clipped", opts.clip > 0.0);
  ctx.note("additivity_error", additivity);
  ctx.note("streaming_error", streaming);
  ctx.note("pass", pass);
}

void run_diagnostics(Context& ctx) {
  const auto& c = ctx.config;
  const auto& d = c.diagnostics;
  const auto spec = make_spec(c);
  const auto w0 = initial_field(c, c.initial, ctx.seed, 0, "initial");
  const double dt = c.integrator.dt;
  const int per_unit = steps_per_unit(dt);
  const int horizon = std::max(d.moment_times.back(), d.t_prime);

  std::vector<std::vector<double>> dn(d.ensemble);
  std::vector<std::vector<double>> residual(d.ensemble);
  std::vector<std::vector<double>> residual_qv(d.ensemble);
  std::vector<std::vector<double>> enstrophy(d.moment_times.size(), std::vector<double>(d.ensemble));
  std::vector<std::optional<TransformWorkspace>> spaces(static_cast<std::size_t>(ctx.parallel.workers));
  parallel_for(d.ensemble, ctx.parallel, [&](std::size_t i, int worker) {
    auto& ws = spaces[static_cast<std::size_t>(worker)];
    if (!ws) ws.emplace(spec.grid());
    UnitIntervalAccumulator acc(spec.grid(), dt, spec.R(), true);
    auto observe = [&](std::size_t step, const VorticityField& w, const VorticityField* db) {
      acc.observe(step, w, db);
      if (step % static_cast<std::size_t>(per_unit) != 0) return;
      const int unit = static_cast<int>(step / static_cast<std::size_t>(per_unit));
      for (std::size_t j = 0; j < d.moment_times.size(); ++j) {
        if (d.moment_times[j] == unit) enstrophy[j][i] = l2_norm_sq(w);
      }
    };
    RecordPolicy policy;
    policy.stride = static_cast<std::size_t>(horizon * per_unit);
    Rng rng(derive_seed(ctx.seed, "diagnostics", i));
    simulate(w0, spec, horizon, dt, rng, policy, *ws, observe);
    auto series = acc.take();
    dn[i] = std::move(series.Dn);
    residual[i] = std::move(series.balance_residual);
    residual_qv[i] = std::move(series.balance_residual_qv);
  });

  const double R = spec.R();
  std::vector<double> thresholds;
  for (double x : d.thresholds) thresholds.push_back(x * R);
  CsvWriter moments(ctx.path("exp_moment.csv"),
                    {"t", "samples", "estimate", "ci_lower", "ci_upper", "bound", "pass"});
  CsvWriter tails(ctx.path("tails.csv"),
                  {"t", "threshold", "hits", "frequency", "frequency_lower", "bound", "pass"});
  bool moment_pass = true;
  for (std::size_t j = 0; j < d.moment_times.size(); ++j) {
    const int t = d.moment_times[j];
    Rng boot(derive_seed(ctx.seed, "diagnostics_bootstrap", j));
    const auto rep = exp_moment_check(enstrophy[j], l2_norm_sq(w0), R, t, thresholds, boot, d.resamples);
    moments.row({static_cast<std::int64_t>(t), static_cast<std::int64_t>(rep.samples), rep.estimate,
                 rep.ci.lower, rep.ci.upper, rep.bound, rep.pass});
    moment_pass = moment_pass && rep.pass;
    for (const auto& row : rep.tails) {
      tails.row({static_cast<std::int64_t>(t), row.threshold, static_cast<std::int64_t>(row.hits),
                 row.frequency, row.frequency_lower, row.bound, row.pass});
      moment_pass = moment_pass && row.pass;
    }
  }
  moments.close();
  tails.close();

  const auto sum = tail_sum_check(dn, R, d.t, d.t_prime, d.betas);
  CsvWriter tail_sum(ctx.path("tail_sum.csv"), {"beta", "hits", "frequency", "resolvable"});
  for (const auto& row : sum.rows) {
    tail_sum.row({row.beta, static_cast<std::int64_t>(row.hits), row.frequency, row.resolvable});
  }
  tail_sum.close();

  CsvWriter balance(ctx.path("balance.csv"),
                    {"interval", "mean_residual", "standard_error", "mean_residual_qv", "pass"});
  bool balance_pass = true;
  for (int n = 0; n < horizon; ++n) {
    RunningStats r, q;
    for (std::size_t i = 0; i < d.ensemble; ++i) {
      r.add(residual[i][static_cast<std::size_t>(n)]);
      q.add(residual_qv[i][static_cast<std::size_t>(n)]);
    }
    const double se = d.ensemble > 1 ? r.standard_error() : 0.0;
    const bool pass = std::abs(r.mean()) <= 3.0 * se;
    balance_pass = balance_pass && pass;
    balance.row({static_cast<std::int64_t>(n + 1), r.mean(), se, q.mean(), pass});
  }
  balance.close();

  ctx.note("exp_moment_pass", moment_pass);
  ctx.note("tail_sum_slope", sum.fit.slope);
  ctx.note("tail_sum_rate", sum.rate);
  ctx.note("tail_sum_pass", sum.pass);
  ctx.note("balance_pass", balance_pass);
}

void run_partition(Context& ctx) {
  const auto& c = ctx.config;
  PartitionParams params{c.partition.T, c.partition.beta, c.partition.beta_prime, c.forcing.R};
  params.validate();
  KVector kv;
  std::string source;
  const std::string file =
      !ctx.kvector_file.empty() ? ctx.kvector_file : c.resolve(c.partition.kvector_file);
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::kConfig, "cannot open k-vector file " + file);
    kv = read_kvector(in);
    source = "file";
  } else {
    const auto spec = make_spec(c);
    params.R = spec.R();
    const auto w0 = initial_field(c, c.initial, ctx.seed, 0, "initial");
    UnitIntervalAccumulator acc(spec.grid(), c.integrator.dt, spec.R(), false);
    RecordPolicy policy;
    policy.stride = std::max<std::size_t>(steps_of(c.integrator.t_end, c.integrator.dt), 1);
    Rng rng(derive_seed(ctx.seed, "partition", 0));
    simulate(w0, spec, c.integrator.t_end, c.integrator.dt, rng, policy,
             [&](std::size_t step, const VorticityField& w, const VorticityField* db) {
               acc.observe(step, w, db);
             });
    const auto dn = acc.take().Dn;
    kv = dominant_kvector(dn, spec.R());
    source = "simulation";
    CsvWriter dcsv(ctx.path("dn.csv"), {"n", "D_n", "k_n", "chi_factor"});
    for (std::size_t n = 0; n < dn.size(); ++n) {
      dcsv.row({static_cast<std::int64_t>(n + 1), dn[n], static_cast<std::int64_t>(kv.values[n]),
                phi(kv.values[n], dn[n], spec.R())});
    }
    dcsv.close();
    ctx.note("chi", chi(kv, dn, spec.R()));
  }
  if (kv.size() == 0 || kv.size() % params.T != 0) {
    throw Error(ErrorCode::kConfig, "k-vector length " + std::to_string(kv.size()) +
                                        " is not a positive multiple of partition.T");
  }
  const auto partition = classify(kv, params);
  {
    std::ofstream out(ctx.path("partition.txt"), std::ios::binary);
    write_partition(out, partition);
    if (!out) throw Error(ErrorCode::kIo, "cannot write partition.txt");
  }
  CsvWriter csv(ctx.path("partition.csv"), {"start", "end", "label"});
  std::size_t large = 0;
  for (const auto& b : partition.blocks) {
    csv.row({static_cast<std::int64_t>(b.span.start), static_cast<std::int64_t>(b.span.end),
             to_string(b.label)});
    if (b.label == BlockLabel::kLarge) ++large;
  }
  csv.close();
  const auto check = verify_block_properties(partition, kv, params);
  ctx.note("source", source);
  ctx.note("window", static_cast<std::size_t>(partition.window));
  ctx.note("blocks", partition.blocks.size());
  ctx.note("large_blocks", large);
  ctx.note("block_properties_hold", check.ok());
}

void run_mixing(Context& ctx) {
  const auto& c = ctx.config;
  const auto& m = c.mixing;
  const auto spec = make_spec(c);
  const auto w0 = initial_field(c, c.initial, ctx.seed, 0, "initial");
  StationaryOptions opts;
  opts.dt = c.integrator.dt;
  opts.burn_in = m.burn_in;
  opts.gap = m.gap;
  opts.samples = m.samples;
  const auto seeds = static_cast<std::size_t>(m.seeds);
  const std::size_t mode = *spec.grid().index_of({m.mode.first, m.mode.second});
  std::vector<std::vector<double>> enstrophy(seeds);
  std::vector<double> observable;
  parallel_for(seeds, ctx.parallel, [&](std::size_t j, int) {
    const auto states = stationary_sample(w0, spec, opts, derive_seed(ctx.seed, "mixing", j));
    for (const auto& w : states) enstrophy[j].push_back(l2_norm_sq(w));
    if (j == 0) {
      for (const auto& w : states) observable.push_back(w[mode].real());
    }
  });

  CsvWriter stat(ctx.path("stationary.csv"), {"seed_index", "samples", "mean", "standard_error"});
  std::vector<MeanEstimate> means;
  for (std::size_t j = 0; j < seeds; ++j) {
    means.push_back(batch_mean(enstrophy[j]));
    stat.row({static_cast<std::int64_t>(j), static_cast<std::int64_t>(means[j].samples), means[j].mean,
              means[j].standard_error});
  }
  stat.close();
  bool agree = true;
  for (std::size_t j = 1; j < seeds; ++j) {
    const double combined = std::hypot(means[0].standard_error, means[j].standard_error);
    agree = agree && std::abs(means[0].mean - means[j].mean) <= 3.0 * combined;
  }

  Rng rng(derive_seed(ctx.seed, "correlation", 0));
  const auto corr =
      autocovariance_report(observable, m.gap, m.lags, m.block_length, m.resamples, rng);
  CsvWriter cc(ctx.path("correlation.csv"), {"lag", "autocovariance", "standard_error"});
  for (std::size_t k = 0; k < corr.lags.size(); ++k) {
    cc.row({corr.lags[k], corr.autocovariance[k], corr.standard_error[k]});
  }
  cc.close();
  ctx.note("stationary_means_agree", agree);
  ctx.note("correlation_fit_defined", corr.fit.defined);
  ctx.note("correlation_rate", corr.fit.rate);
  ctx.note("correlation_rate_ci_lower", corr.fit.ci.lower);
  ctx.note("correlation_rate_ci_upper", corr.fit.ci.upper);
}

const std::map<std::string, std::function<void(Context&)>>& table() {
  static const std::map<std::string, std::function<void(Context&)>> runners{
      {"simulate", run_simulate},         {"couple", run_couple},
      {"reduce-check", run_reduce},       {"girsanov-check", run_girsanov},
      {"diagnostics", run_diagnostics},   {"partition", run_partition},
      {"mixing", run_mixing},
  };
  return runners;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"simulate",    "couple",    "reduce-check", "girsanov-check",
                                              "diagnostics", "partition", "mixing"};
  return names;
}

RunResult run_subcommand(const std::string& name, const RunConfig& config, const RunOptions& options) {
  const auto it = table().find(name);
  if (it == table().end()) throw Error(ErrorCode::kInvalidArgument, "unknown subcommand " + name);
  if (options.workers < 1) throw Error(ErrorCode::kInvalidArgument, "workers must be >= 1");

  config.check_times(name);
  RunConfig effective = config;
  if (options.seed) effective.master_seed = *options.seed;
  if (!options.out_dir.empty()) effective.output_dir = options.out_dir;
  if (!options.kvector_file.empty()) effective.partition.kvector_file = options.kvector_file;

  Context ctx{effective, effective.master_seed, ParallelContext{options.workers},
              fs::path(effective.output_dir), options.kvector_file, {}};
  std::error_code ec;
  fs::create_directories(ctx.out, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create output directory " + ctx.out.string());
  ctx.result.out_dir = ctx.out.string();
  write_manifest(ctx.path("manifest.txt"), name, effective, ctx.seed);
  it->second(ctx);
  write_summary(ctx.path("summary.txt"), ctx.result.summary);
  return ctx.result;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk:
      return 0;
    case ErrorCode::kConfig:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kAlignment:
    case ErrorCode::kGridTooLarge:
      return 1;
    case ErrorCode::kNonfiniteState:
      return 2;
    case ErrorCode::kIo:
      return 3;
    default:
      return 4;
  }
}

}  // namespace vortmix
