#include "vortmix/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vortmix/error.hpp"
#include "vortmix/integrator.hpp"
#include "vortmix/rng.hpp"
#include "vortmix/spectral.hpp"

namespace vortmix {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw Error(ErrorCode::kConfig, field + ": " + message);
}

// Reads the keys of one object, remembering which were consumed so the rest
// can be reported as unknown.
class Block {
 public:
  Block(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() || it->is_null() ? nullptr : &*it;
  }

  void read(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(field(key), "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) fail(field(key), "must be finite");
    }
  }

  void read(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(field(key), "expected an integer");
      const auto value = v->get<std::int64_t>();
      if (value < -1000000000 || value > 1000000000) fail(field(key), "out of range");
      out = static_cast<int>(value);
    }
  }

  void read(const std::string& key, std::size_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer() || v->get<std::int64_t>() < 0) {
        fail(field(key), "expected a nonnegative integer");
      }
      out = v->get<std::size_t>();
    }
  }

  void read(const std::string& key, std::uint64_t& out, bool) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(field(key), "expected a nonnegative integer");
      out = v->get<std::uint64_t>();
    }
  }

  void read(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(field(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  void read(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(field(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  template <typename T>
  void read(const std::string& key, std::vector<T>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(field(key), "expected an array");
      std::vector<T> values;
      for (const auto& item : *v) {
        const bool ok = std::is_integral_v<T> ? item.is_number_integer() : item.is_number();
        if (!ok) fail(field(key), std::is_integral_v<T> ? "expected integers" : "expected numbers");
        values.push_back(item.get<T>());
      }
      out = std::move(values);
    }
  }

  void read(const std::string& key, std::pair<int, int>& out) {
    std::vector<int> v;
    read(key, v);
    if (find(key)) {
      if (v.size() != 2) fail(field(key), "expected [k1, k2]");
      out = {v[0], v[1]};
    }
  }

  // Sub-block or nullopt when absent.
  std::optional<Block> child(const std::string& key) {
    if (const json* v = find(key)) return Block(*v, field(key));
    return std::nullopt;
  }

  void finish() const {
    for (const auto& item : node_.items()) {
      if (!seen_.count(item.key())) fail(field(item.key()), "unknown key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_initial(Block& b, InitialConfig& c) {
  b.read("enstrophy", c.enstrophy);
  b.read("high_enstrophy", c.high_enstrophy);
  b.read("file", c.file);
  if (c.enstrophy < 0.0) fail(b.field("enstrophy"), "must be >= 0");
  if (c.high_enstrophy < 0.0) fail(b.field("high_enstrophy"), "must be >= 0");
}

bool multiple_of(double x, double dt) {
  const double q = x / dt;
  return std::abs(q - std::round(q)) <= 1e-9 * std::max(1.0, q);
}

void require_time(const std::string& field, double t, double dt, bool positive) {
  if (positive ? !(t > 0.0) : t < 0.0) fail(field, positive ? "must be > 0" : "must be >= 0");
  if (!multiple_of(t, dt)) fail(field, "must be a multiple of integrator.dt");
}

void require_sign(const std::string& field, double t, bool positive) {
  if (positive ? !(t > 0.0) : t < 0.0) fail(field, positive ? "must be > 0" : "must be >= 0");
}

void validate(RunConfig& c) {
  if (c.grid.kmax < 1) fail("grid.kmax", "must be >= 1");
  if (c.grid.n_force < 1) fail("grid.n_force", "must be >= 1");
  try {
    SpectralGrid grid(c.grid.kmax, c.grid.n_force);
  } catch (const Error& e) {
    fail("grid", e.what());
  }
  if (!(c.forcing.R > 0.0)) fail("forcing.R", "must be > 0");

  const double dt = c.integrator.dt;
  if (!(dt > 0.0) || dt > 1.0) fail("integrator.dt", "must lie in (0, 1]");
  try {
    steps_per_unit(dt);
  } catch (const Error&) {
    fail("integrator.dt", "1/dt must be an integer");
  }
  require_sign("integrator.t_end", c.integrator.t_end, false);
  require_sign("simulate.output_interval", c.simulate.output_interval, true);
  require_sign("couple.t_end", c.couple.t_end, false);
  require_sign("reduce.t_end", c.reduce.t_end, true);
  require_sign("girsanov.t_end", c.girsanov.t_end, false);
  require_sign("mixing.burn_in", c.mixing.burn_in, false);
  require_sign("mixing.gap", c.mixing.gap, true);
  if (c.couple.resamples < 1) fail("couple.resamples", "must be >= 1");

  if (c.reduce.splits < 0) fail("reduce.splits", "must be >= 0");
  if (c.reduce.pairs < 0) fail("reduce.pairs", "must be >= 0");
  if (!(c.reduce.l_enstrophy > 0.0)) fail("reduce.l_enstrophy", "must be > 0");
  if (c.reduce.slack < 0.0) fail("reduce.slack", "must be >= 0");

  if (c.girsanov.paths < 1) fail("girsanov.paths", "must be >= 1");
  if (c.girsanov.clip < 0.0) fail("girsanov.clip", "must be >= 0");

  auto& d = c.diagnostics;
  if (d.ensemble < 1) fail("diagnostics.ensemble", "must be >= 1");
  if (d.moment_times.empty()) fail("diagnostics.moment_times", "must not be empty");
  for (std::size_t i = 0; i < d.moment_times.size(); ++i) {
    if (d.moment_times[i] < 1 || (i > 0 && d.moment_times[i] <= d.moment_times[i - 1])) {
      fail("diagnostics.moment_times", "must be increasing positive integers");
    }
  }
  for (double x : d.thresholds) {
    if (!(x > 0.0)) fail("diagnostics.thresholds", "must be > 0");
  }
  if (d.t < 1 || d.t_prime <= d.t) fail("diagnostics.t_prime", "need 1 <= t < t_prime");
  if (d.betas.empty()) fail("diagnostics.betas", "must not be empty");
  if (d.resamples < 1) fail("diagnostics.resamples", "must be >= 1");

  auto& p = c.partition;
  if (p.T < 1) fail("partition.T", "must be >= 1");
  if (!(p.beta_prime > 0.0 && p.beta_prime < p.beta)) {
    fail("partition.beta_prime", "need 0 < beta_prime < beta");
  }

  auto& m = c.mixing;
  if (m.seeds < 1) fail("mixing.seeds", "must be >= 1");
  if (m.block_length < 1) fail("mixing.block_length", "must be >= 1");
  if (m.resamples < 1) fail("mixing.resamples", "must be >= 1");
  for (double lag : m.lags) {
    if (lag < 0.0 || !multiple_of(lag, m.gap)) fail("mixing.lags", "must be multiples of mixing.gap");
  }
  const Wavevector k{m.mode.first, m.mode.second};
  if (!k.canonical() || !SpectralGrid(c.grid.kmax, c.grid.n_force).index_of(k)) {
    fail("mixing.mode", "must be a canonical wavevector inside the grid");
  }
}

json initial_json(const InitialConfig& c) {
  return {{"enstrophy", c.enstrophy}, {"high_enstrophy", c.high_enstrophy}, {"file", c.file}};
}

void flatten(const json& node, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  if (node.is_object()) {
    for (const auto& item : node.items()) {
      flatten(item.value(), prefix.empty() ? item.key() : prefix + "." + item.key(), out);
    }
  } else if (node.is_string()) {
    out.emplace_back(prefix, node.get<std::string>());
  } else {
    out.emplace_back(prefix, node.dump());
  }
}

json to_json(const RunConfig& c) {
  const auto& d = c.diagnostics;
  const auto& m = c.mixing;
  return {
      {"grid", {{"kmax", c.grid.kmax}, {"n_force", c.grid.n_force}}},
      {"forcing", {{"R", c.forcing.R}, {"covariance_file", c.forcing.covariance_file}}},
      {"integrator", {{"dt", c.integrator.dt}, {"t_end", c.integrator.t_end}}},
      {"initial", initial_json(c.initial)},
      {"simulate",
       {{"output_interval", c.simulate.output_interval}, {"snapshots", c.simulate.snapshots}}},
      {"couple",
       {{"t_end", c.couple.t_end},
        {"second", initial_json(c.couple.second)},
        {"resamples", c.couple.resamples}}},
      {"reduce",
       {{"t_end", c.reduce.t_end},
        {"splits", c.reduce.splits},
        {"pairs", c.reduce.pairs},
        {"l_enstrophy", c.reduce.l_enstrophy},
        {"slack", c.reduce.slack}}},
      {"girsanov",
       {{"t_end", c.girsanov.t_end}, {"paths", c.girsanov.paths}, {"clip", c.girsanov.clip}}},
      {"diagnostics",
       {{"ensemble", d.ensemble},
        {"moment_times", d.moment_times},
        {"thresholds", d.thresholds},
        {"t", d.t},
        {"t_prime", d.t_prime},
        {"betas", d.betas},
        {"resamples", d.resamples}}},
      {"partition",
       {{"T", c.partition.T},
        {"beta", c.partition.beta},
        {"beta_prime", c.partition.beta_prime},
        {"kvector_file", c.partition.kvector_file}}},
      {"mixing",
       {{"burn_in", m.burn_in},
        {"gap", m.gap},
        {"samples", m.samples},
        {"seeds", m.seeds},
        {"lags", m.lags},
        {"mode", {m.mode.first, m.mode.second}},
        {"block_length", m.block_length},
        {"resamples", m.resamples}}},
      {"master_seed", c.master_seed},
      {"output_dir", c.output_dir},
  };
}

}  // namespace

void RunConfig::check_times(const std::string& subcommand) const {
  const double dt = integrator.dt;
  if (subcommand == "simulate" || subcommand == "partition") {
    require_time("integrator.t_end", integrator.t_end, dt, false);
  }
  if (subcommand == "simulate") require_time("simulate.output_interval", simulate.output_interval, dt, true);
  if (subcommand == "couple") require_time("couple.t_end", couple.t_end, dt, false);
  if (subcommand == "reduce-check") require_time("reduce.t_end", reduce.t_end, dt, true);
  if (subcommand == "girsanov-check") require_time("girsanov.t_end", girsanov.t_end, dt, false);
  if (subcommand == "mixing") {
    require_time("mixing.burn_in", mixing.burn_in, dt, false);
    require_time("mixing.gap", mixing.gap, dt, true);
  }
}

std::string RunConfig::canonical_json() const { return to_json(*this).dump(); }

std::vector<std::pair<std::string, std::string>> RunConfig::flattened() const {
  std::vector<std::pair<std::string, std::string>> out;
  flatten(to_json(*this), "", out);
  return out;
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical_json()); }

std::string RunConfig::resolve(const std::string& path) const {
  if (path.empty() || base_dir.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(base_dir) / path).string();
}

RunConfig parse_config(const std::string& json_text, const std::string& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfig, std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  c.base_dir = base_dir;
  Block top(root, "");
  if (auto b = top.child("grid")) {
    b->read("kmax", c.grid.kmax);
    b->read("n_force", c.grid.n_force);
    b->finish();
  }
  if (auto b = top.child("forcing")) {
    b->read("R", c.forcing.R);
    b->read("covariance_file", c.forcing.covariance_file);
    b->finish();
  }
  if (auto b = top.child("integrator")) {
    b->read("dt", c.integrator.dt);
    b->read("t_end", c.integrator.t_end);
    b->finish();
  }
  if (auto b = top.child("initial")) {
    read_initial(*b, c.initial);
    b->finish();
  }
  if (auto b = top.child("simulate")) {
    b->read("output_interval", c.simulate.output_interval);
    b->read("snapshots", c.simulate.snapshots);
    b->finish();
  }
  if (auto b = top.child("couple")) {
    b->read("t_end", c.couple.t_end);
    if (auto s = b->child("second")) {
      read_initial(*s, c.couple.second);
      s->finish();
    }
    b->read("resamples", c.couple.resamples);
    b->finish();
  }
  if (auto b = top.child("reduce")) {
    b->read("t_end", c.reduce.t_end);
    b->read("splits", c.reduce.splits);
    b->read("pairs", c.reduce.pairs);
    b->read("l_enstrophy", c.reduce.l_enstrophy);
    b->read("slack", c.reduce.slack);
    b->finish();
  }
  if (auto b = top.child("girsanov")) {
    b->read("t_end", c.girsanov.t_end);
    b->read("paths", c.girsanov.paths);
    b->read("clip", c.girsanov.clip);
    b->finish();
  }
  if (auto b = top.child("diagnostics")) {
    auto& d = c.diagnostics;
    b->read("ensemble", d.ensemble);
    b->read("moment_times", d.moment_times);
    b->read("thresholds", d.thresholds);
    b->read("t", d.t);
    b->read("t_prime", d.t_prime);
    b->read("betas", d.betas);
    b->read("resamples", d.resamples);
    b->finish();
  }
  if (auto b = top.child("partition")) {
    b->read("T", c.partition.T);
    b->read("beta", c.partition.beta);
    b->read("beta_prime", c.partition.beta_prime);
    b->read("kvector_file", c.partition.kvector_file);
    b->finish();
  }
  if (auto b = top.child("mixing")) {
    auto& m = c.mixing;
    b->read("burn_in", m.burn_in);
    b->read("gap", m.gap);
    b->read("samples", m.samples);
    b->read("seeds", m.seeds);
    b->read("lags", m.lags);
    b->read("mode", m.mode);
    b->read("block_length", m.block_length);
    b->read("resamples", m.resamples);
    b->finish();
  }
  top.read("master_seed", c.master_seed, true);
  top.read("output_dir", c.output_dir);
  top.finish();
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), std::filesystem::path(path).parent_path().string());
}

}  // namespace vortmix
