#include "gct/scan.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>

#include "gct/exact.hpp"
#include "gct/floquet.hpp"
#include "gct/metrics.hpp"
#include "gct/parallel.hpp"
#include "gct/spinwave.hpp"
#include "json.hpp"

namespace gct {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<GridPoint> expand_grid(const ExperimentConfig& c) {
  std::vector<GridPoint> pts;
  const bool floq = c.engine == Engine::floquet;
  const std::vector<double> none{0.0};
  for (int d : c.lattice.dims) {
    std::vector<int> sizes = c.lattice.sizes;
    if (!c.lattice.sites.empty()) {
      sizes.clear();
      for (int n : c.lattice.sites) sizes.push_back(static_cast<int>(std::lround(std::pow(n, 1.0 / d))));
    }
    for (int L : sizes)
      for (double a : c.model.alpha)
        for (double chi : c.model.chi)
          for (double eps : c.disorder.epsilon)
            for (double delta : floq ? c.floquet.delta : none)
              for (double step : floq ? c.floquet.dt_step : none) {
                GridPoint p;
                p.id = static_cast<int>(pts.size());
                p.dim = d;
                p.L = L;
                p.alpha = a;
                p.chi = chi;
                p.epsilon = eps;
                p.delta = delta;
                p.dt_step = step;
                pts.push_back(p);
              }
  }
  return pts;
}

const std::vector<std::string>& observable_columns() {
  static const std::vector<std::string> cols{
      "t",        "Sx_mean",   "Sy_mean",     "Sz_mean",       "var_min",       "var_max",
      "theta_min", "xi2",      "qfi_sens",    "Sx_err",        "Sy_err",        "Sz_err",
      "var_min_err", "var_max_err", "theta_min_err", "xi2_err", "qfi_sens_err", "valid"};
  return cols;
}

namespace {

std::string fmt(double v) { return format_number(v); }

struct Instance {
  LatticeSpec spec;
  SiteSet sites;
  CouplingModel model;
  int N = 0;
};

double strength_epsilon(const ExperimentConfig& c, const GridPoint& p) {
  return c.disorder.kind == "strength" ? p.epsilon : 0.0;
}

double filling_epsilon(const ExperimentConfig& c, const GridPoint& p) {
  return c.disorder.kind == "filling" ? p.epsilon : c.lattice.filling_epsilon;
}

Instance build_instance(const ExperimentConfig& c, const GridPoint& p, int realization) {
  Instance in;
  in.spec = LatticeSpec::cube(p.dim, p.L, c.lattice.boundary);
  in.sites = build_lattice(in.spec);
  if (c.lattice.filling < 1 || filling_epsilon(c, p) > 0)
    in.sites = random_filling(in.sites, c.lattice.filling, filling_epsilon(c, p),
                              c.ensemble.seed + static_cast<std::uint64_t>(realization));
  in.N = in.sites.n_occupied();
  in.model = make_model(in.sites, in.spec, p.alpha, c.model.preset, p.chi, c.model.h);
  if (c.model.preset == Preset::custom) in.model.J = c.model.custom;
  return in;
}

std::vector<std::string> param_header(const ExperimentConfig& c) {
  std::vector<std::string> h{"point", "dim", "L", "N", "alpha", "chi", "epsilon", "realization"};
  if (c.engine == Engine::floquet) {
    h.push_back("delta");
    h.push_back("dt_step");
  }
  return h;
}

std::vector<std::string> param_cells(const ExperimentConfig& c, const GridPoint& p, int N, int realization) {
  std::vector<std::string> v{std::to_string(p.id), std::to_string(p.dim), std::to_string(p.L), std::to_string(N),
                             fmt(p.alpha),         fmt(p.chi),           fmt(p.epsilon),       std::to_string(realization)};
  if (c.engine == Engine::floquet) {
    v.push_back(fmt(p.delta));
    v.push_back(fmt(p.dt_step));
  }
  return v;
}

CsvTable observable_table(const ExperimentConfig& c) {
  CsvTable t;
  t.header = param_header(c);
  for (const auto& col : observable_columns()) t.header.push_back(col);
  return t;
}

void append_rows(CsvTable& t, const std::vector<std::string>& params, const std::vector<ObservableRow>& v,
                 const std::vector<ObservableRow>* err, bool valid) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    auto row = params;
    const auto& r = v[k];
    for (double x : {r.t, r.sx, r.sy, r.sz, r.var_min, r.var_max, r.theta_min, r.xi2, r.qfi_sens}) row.push_back(fmt(x));
    if (err) {
      const auto& e = (*err)[k];
      for (double x : {e.sx, e.sy, e.sz, e.var_min, e.var_max, e.theta_min, e.xi2, e.qfi_sens}) row.push_back(fmt(x));
    } else {
      for (int i = 0; i < 8; ++i) row.push_back("0");
    }
    row.push_back(valid ? "1" : "0");
    t.rows.push_back(std::move(row));
  }
}

Schedule build_schedule(const ExperimentConfig& c, const CouplingModel& m, double t_end) {
  if (c.schedule.type == "segments") {
    Schedule s;
    for (const auto& g : c.schedule.segments)
      s.segments.push_back({g.J ? *g.J : m.J, g.h, g.sign, g.duration, g.rotate_before});
    return s;
  }
  return Schedule::constant(m.J, m.h, t_end);
}

DtwaSettings dtwa_settings(const ExperimentConfig& c, const GridPoint& p, int realization, int workers) {
  DtwaSettings st;
  st.n_traj = c.ensemble.n_traj;
  st.seed = c.ensemble.seed + static_cast<std::uint64_t>(realization);
  st.dt_scale = c.ensemble.dt;
  st.workers = workers;
  st.batch = c.ensemble.batch;
  st.epsilon = strength_epsilon(c, p);
  st.backend = c.ensemble.backend;
  return st;
}

// Moments of an equal-weight mixture.
Moments mix(const std::vector<Moments>& parts) {
  Moments out;
  out.resize(parts.front().size());
  out.t = parts.front().t;
  const double w = 1.0 / parts.size();
  for (std::size_t k = 0; k < out.size(); ++k) {
    double sx = 0, sy = 0, sz = 0, xx = 0, yy = 0, xy = 0;
    for (const auto& m : parts) {
      sx += w * m.sx[k];
      sy += w * m.sy[k];
      sz += w * m.sz[k];
      xx += w * (m.vxx[k] + m.sx[k] * m.sx[k]);
      yy += w * (m.vyy[k] + m.sy[k] * m.sy[k]);
      xy += w * (m.cxy[k] + m.sx[k] * m.sy[k]);
    }
    out.sx[k] = sx;
    out.sy[k] = sy;
    out.sz[k] = sz;
    out.vxx[k] = xx - sx * sx;
    out.vyy[k] = yy - sy * sy;
    out.cxy[k] = xy - sx * sy;
  }
  return out;
}

std::vector<double> multipliers(double eps) {
  if (eps == 0) return {1.0};
  return {1 + eps, 1 - eps};
}

void run_dtwa(const ExperimentConfig& c, const GridPoint& p, int workers, PointOutput& out) {
  const bool echo = c.schedule.type == "echo";
  CsvTable table;
  if (echo) {
    table.header = param_header(c);
    for (const char* col : {"t", "phi0", "theta_min", "signal_minus", "signal_zero", "signal_plus", "signal_err",
                            "slope", "slope_err", "echo_sens", "null_signal"})
      table.header.push_back(col);
  } else {
    table = observable_table(c);
  }
  for (int r = 0; r < c.disorder.realizations; ++r) {
    const auto in = build_instance(c, p, r);
    const auto times = c.time.build(p.chi);
    const auto st = dtwa_settings(c, p, r, workers);
    const LatticeContext lc{&in.spec, &in.sites};
    const auto params = param_cells(c, p, in.N, r);
    if (echo) {
      const double phi0 = c.schedule.phi0_scale / in.N;
      for (double t : times) {
        if (t <= 0) continue;
        const auto e = echo_run(in.model, in.model.J, in.model.h, t, phi0, st, lc);
        auto row = params;
        for (double x : {t, phi0, e.theta_min, e.signal[0], e.signal[1], e.signal[2], e.signal_err[1], e.slope,
                         e.slope_err, e.sensitivity})
          row.push_back(fmt(x));
        row.push_back(e.null_signal ? "1" : "0");
        table.rows.push_back(std::move(row));
      }
      continue;
    }
    const auto sched = build_schedule(c, in.model, times.empty() ? 0.0 : times.back());
    const auto ens = run_ensemble(in.model, sched, times, st, lc);
    const auto bs = bootstrap(ens, in.N, c.ensemble.resamples, std::min(c.ensemble.resample_size, ens.n_traj),
                              c.ensemble.bootstrap_seed);
    if (!ens.valid()) {
      out.valid = false;
      out.note = std::to_string(ens.invalid.size()) + " trajectories exceeded the norm drift limit (first index " +
                 std::to_string(ens.invalid.front()) + ")";
    }
    append_rows(table, params, bs.value, &bs.error, ens.valid());
  }
  out.tables.emplace_back(echo ? "echo" : "dtwa", std::move(table));
}

void run_exact(const ExperimentConfig& c, const GridPoint& p, PointOutput& out) {
  if (c.schedule.type == "echo") throw ConfigError("the exact engine does not run echo schedules");
  CsvTable table = observable_table(c);
  for (int r = 0; r < c.disorder.realizations; ++r) {
    const auto in = build_instance(c, p, r);
    const auto times = c.time.build(p.chi);
    Moments m;
    if (c.model.preset == Preset::ct || c.model.preset == Preset::twist) {
      if (c.schedule.type != "constant") throw ConfigError("collective presets only support constant schedules");
      const auto preset = c.model.preset == Preset::ct ? CollectivePreset::ct : CollectivePreset::twist;
      m = collective_evolve(in.N, preset, p.chi, times, multipliers(strength_epsilon(c, p)));
    } else {
      if (in.N > 16) throw ConfigError("full exact evolution is limited to 16 spins");
      std::vector<Moments> parts;
      for (double mu : multipliers(strength_epsilon(c, p))) {
        auto model = in.model;
        model.kernel *= mu;
        parts.push_back(full_ed_evolve(model, build_schedule(c, model, times.empty() ? 0.0 : times.back()), times));
      }
      m = mix(parts);
    }
    append_rows(table, param_cells(c, p, in.N, r), observables(m, in.N), nullptr, true);
  }
  out.tables.emplace_back("exact", std::move(table));
}

void run_spinwave(const ExperimentConfig& c, const GridPoint& p, PointOutput& out) {
  if (c.lattice.boundary != Boundary::periodic) throw ConfigError("spin-wave dynamics need periodic boundaries");
  if (c.lattice.filling < 1 || filling_epsilon(c, p) > 0 || strength_epsilon(c, p) > 0)
    throw ConfigError("spin-wave dynamics need a full lattice");
  const auto in = build_instance(c, p, 0);
  const auto times = c.time.build(p.chi);
  // +z-polarized engines map onto the -z spin-wave frame with h -> -h
  const auto sw = dispersion(in.model.J, -in.model.h, momentum_grid(in.spec, p.alpha));
  const auto cv = collective_variances(sw, times);
  const auto params = param_cells(c, p, in.N, 0);
  CsvTable var;
  var.header = param_header(c);
  for (const char* col : {"t", "var_min", "var_max", "hp_valid"}) var.header.push_back(col);
  for (std::size_t k = 0; k < times.size(); ++k) {
    auto row = params;
    const auto v = hp_validity(sw, p.chi, times[k]);
    row.push_back(fmt(times[k]));
    row.push_back(fmt(cv.var_min[k]));
    row.push_back(fmt(cv.var_max[k]));
    row.push_back(v.time_ok && v.density_ok ? "1" : "0");
    var.rows.push_back(std::move(row));
  }
  out.tables.emplace_back("spinwave_variances", std::move(var));
  if (!c.spinwave.correlators) return;
  CsvTable cor;
  cor.header = param_header(c);
  for (const char* col : {"t", "r_x", "r_y", "C_min", "C_max"}) cor.header.push_back(col);
  for (double t : times) {
    const auto f = realspace_correlators(sw, t);
    const int Lx = in.spec.extent[0];
    const int Ly = in.spec.dim > 1 ? in.spec.extent[1] : 1;
    for (int x = 0; x <= Lx / 2; ++x)
      for (int y = 0; y <= Ly / 2; ++y) {
        auto row = params;
        row.push_back(fmt(t));
        row.push_back(std::to_string(x));
        row.push_back(std::to_string(y));
        row.push_back(fmt(f.at_min({x, y, 0})));
        row.push_back(fmt(f.at_max({x, y, 0})));
        cor.rows.push_back(std::move(row));
      }
  }
  out.tables.emplace_back("spinwave_correlators", std::move(cor));
}

void run_floquet(const ExperimentConfig& c, const GridPoint& p, int workers, PointOutput& out) {
  CsvTable table = observable_table(c);
  const auto times_cfg = c.time.build(p.chi);
  const double total = c.floquet.total_time > 0 ? c.floquet.total_time : (times_cfg.empty() ? 0.0 : times_cfg.back());
  const auto fs = build_sequence(p.delta, p.chi, p.dt_step, total);
  if (fs.rounded) out.note = "total time rounded down to " + std::to_string(fs.periods) + " periods";
  std::vector<double> times;
  for (int k = 0; k <= fs.periods; ++k) times.push_back(k * fs.period());
  for (int r = 0; r < c.disorder.realizations; ++r) {
    const auto in = build_instance(c, p, r);
    const auto st = dtwa_settings(c, p, r, workers);
    const LatticeContext lc{&in.spec, &in.sites};
    const auto ens = run_ensemble(in.model, fs.schedule, times, st, lc);
    const auto bs = bootstrap(ens, in.N, c.ensemble.resamples, std::min(c.ensemble.resample_size, ens.n_traj),
                              c.ensemble.bootstrap_seed);
    if (!ens.valid()) {
      out.valid = false;
      out.note = std::to_string(ens.invalid.size()) + " trajectories exceeded the norm drift limit";
    }
    append_rows(table, param_cells(c, p, in.N, r), bs.value, &bs.error, ens.valid());
  }
  out.tables.emplace_back("floquet", std::move(table));
}

}  // namespace

PointOutput run_point(const ExperimentConfig& c, const GridPoint& p, int workers) {
  PointOutput out;
  switch (c.engine) {
    case Engine::dtwa:
      run_dtwa(c, p, workers, out);
      break;
    case Engine::exact:
      run_exact(c, p, out);
      break;
    case Engine::spinwave:
      run_spinwave(c, p, out);
      break;
    case Engine::floquet:
      run_floquet(c, p, workers, out);
      break;
  }
  return out;
}

// -- manifest ----------------------------------------------------------------

std::string RunManifest::to_json() const {
  json j;
  j["config_hash"] = config_hash;
  j["code_version"] = code_version;
  j["complete"] = complete;
  j["workers"] = workers;
  j["wall_clock_seconds"] = wall_clock;
  j["outputs"] = outputs;
  json pts = json::array();
  for (const auto& p : points) pts.push_back({{"id", p.id}, {"status", p.status}, {"message", p.message}});
  j["points"] = pts;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  const auto j = json::parse(text);
  RunManifest m;
  m.config_hash = j.at("config_hash").get<std::string>();
  m.code_version = j.at("code_version").get<std::string>();
  m.complete = j.at("complete").get<bool>();
  m.workers = j.at("workers").get<int>();
  m.wall_clock = j.at("wall_clock_seconds").get<double>();
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  for (const auto& p : j.at("points"))
    m.points.push_back({p.at("id").get<int>(), p.at("status").get<std::string>(), p.at("message").get<std::string>()});
  return m;
}

std::string config_hash(const ExperimentConfig& c) {
  auto copy = c;
  copy.output.clear();
  return hex64(fnv1a(serialize_config(copy)));
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string point_stem(int id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "p%05d", id);
  return buf;
}

}  // namespace

RunManifest run(const ExperimentConfig& c, const RunOptions& opt) {
  c.validate();
  const auto start = std::chrono::steady_clock::now();
  const fs::path out(c.output);
  fs::create_directories(out);
  const auto hash = config_hash(c);
  const fs::path manifest_path = out / "manifest.json";
  if (fs::exists(manifest_path)) {
    try {
      auto prev = RunManifest::from_json(read_file(manifest_path));
      if (prev.config_hash == hash && prev.complete) {
        prev.skipped = true;
        return prev;
      }
    } catch (const std::exception&) {
      // unreadable manifest: rerun
    }
  }
  const fs::path pdir = out / "points" / hash;
  fs::create_directories(pdir);

  const auto grid = expand_grid(c);
  const int workers = opt.workers > 0 ? opt.workers : default_workers();
  std::vector<int> pending;
  for (const auto& p : grid) {
    const fs::path status = pdir / (point_stem(p.id) + ".status");
    if (fs::exists(status)) {
      const auto s = json::parse(read_file(status));
      if (s.at("status").get<std::string>() != "failed") continue;
    }
    pending.push_back(p.id);
  }
  const int outer = std::max(1, std::min(workers, static_cast<int>(pending.size())));
  const int inner = std::max(1, workers / outer);
  std::mutex log_mu;
  parallel_for(static_cast<int>(pending.size()), outer, [&](int task, int) {
    const auto& p = grid[pending[task]];
    json status;
    json tables = json::array();
    try {
      const auto res = run_point(c, p, inner);
      for (const auto& [name, table] : res.tables) {
        const auto file = point_stem(p.id) + "." + name + ".csv";
        write_atomic((pdir / file).string(), table.to_string());
        tables.push_back(name);
      }
      status["status"] = res.valid ? "ok" : "invalid";
      status["message"] = res.note;
    } catch (const std::exception& e) {
      status["status"] = "failed";
      status["message"] = e.what();
    }
    status["tables"] = tables;
    write_atomic((pdir / (point_stem(p.id) + ".status")).string(), status.dump() + "\n");
    if (opt.verbose) {
      std::lock_guard<std::mutex> lock(log_mu);
      std::cerr << "point " << p.id << ": " << status["status"].get<std::string>();
      if (!status["message"].get<std::string>().empty()) std::cerr << " (" << status["message"].get<std::string>() << ")";
      std::cerr << "\n";
    }
  });

  RunManifest m;
  m.config_hash = hash;
  m.code_version = GCT_VERSION;
  m.workers = workers;
  m.complete = true;
  std::vector<std::string> table_order;
  std::map<std::string, std::string> merged;
  for (const auto& p : grid) {
    const auto s = json::parse(read_file(pdir / (point_stem(p.id) + ".status")));
    PointStatus ps{p.id, s.at("status").get<std::string>(), s.at("message").get<std::string>()};
    if (ps.status != "ok") m.complete = false;
    for (const auto& name : s.at("tables")) {
      const auto n = name.get<std::string>();
      const auto text = read_file(pdir / (point_stem(p.id) + "." + n + ".csv"));
      const auto eol = text.find('\n');
      auto it = merged.find(n);
      if (it == merged.end()) {
        table_order.push_back(n);
        merged[n] = text;
      } else {
        if (it->second.compare(0, eol + 1, text, 0, eol + 1) != 0)
          throw std::runtime_error("point tables named '" + n + "' disagree on their columns");
        it->second += text.substr(eol + 1);
      }
    }
    m.points.push_back(ps);
  }
  for (const auto& n : table_order) {
    write_atomic((out / (n + ".csv")).string(), merged[n]);
    m.outputs.push_back(n + ".csv");
  }
  write_atomic((out / "config.json").string(), serialize_config(c));
  m.outputs.push_back("config.json");
  m.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_atomic(manifest_path.string(), m.to_json());
  return m;
}

// -- reports -----------------------------------------------------------------

Reducer parse_reducer(const std::string& s) {
  if (s == "optimal_over_time") return Reducer::optimal_over_time;
  if (s == "optimal_over_rate") return Reducer::optimal_over_rate;
  if (s == "scaling_fit") return Reducer::scaling_fit;
  throw std::invalid_argument("unknown reducer '" + s + "'");
}

namespace {

const std::vector<std::string> kParams{"dim", "L", "N", "alpha", "chi", "epsilon", "realization", "delta", "dt_step"};

struct Series {
  std::vector<std::string> key;  // parameter cells
  std::vector<double> t, y, err;
};

// Groups rows by the listed parameter columns, preserving first appearance.
std::vector<Series> group(const CsvTable& t, const std::vector<std::string>& keys, const std::string& metric) {
  std::vector<int> kc;
  for (const auto& k : keys) kc.push_back(t.column(k));
  const int tc = t.column("t"), mc = t.column(metric), ec = t.column(metric + "_err");
  if (mc < 0) throw std::invalid_argument("report: no column '" + metric + "'");
  std::vector<Series> out;
  std::map<std::vector<std::string>, std::size_t> index;
  for (const auto& row : t.rows) {
    std::vector<std::string> key;
    for (int c : kc) key.push_back(row[c]);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      out.push_back({key, {}, {}, {}});
    }
    auto& s = out[it->second];
    s.t.push_back(tc >= 0 ? parse_number(row[tc]) : 0.0);
    s.y.push_back(parse_number(row[mc]));
    s.err.push_back(ec >= 0 ? parse_number(row[ec]) : 0.0);
  }
  return out;
}

std::vector<std::string> present(const CsvTable& t, const std::vector<std::string>& exclude) {
  std::vector<std::string> out;
  for (const auto& p : kParams)
    if (t.column(p) >= 0 && std::find(exclude.begin(), exclude.end(), p) == exclude.end()) out.push_back(p);
  return out;
}

Optimum best(const Series& s) {
  if (s.t.size() == 1) return {s.t[0], s.y[0], 0, true};
  return optimal_over_time(s.t, s.y);
}

}  // namespace

CsvTable aggregate(const std::vector<CsvTable>& inputs, Reducer reducer, const ReportOptions& opt) {
  if (inputs.empty()) throw std::invalid_argument("report: no inputs");
  CsvTable all = inputs.front();
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    if (inputs[i].header != all.header) throw std::invalid_argument("report: inputs have different columns");
    all.rows.insert(all.rows.end(), inputs[i].rows.begin(), inputs[i].rows.end());
  }
  CsvTable out;
  if (reducer == Reducer::optimal_over_time) {
    if (all.column(opt.control) < 0) throw std::invalid_argument("report: no column '" + opt.control + "'");
    auto keys = present(all, {opt.control});
    keys.push_back(opt.control);
    out.header = keys;
    for (const char* c : {"sensitivity", "stderr", "t_opt"}) out.header.push_back(c);
    for (const auto& s : group(all, keys, opt.metric)) {
      const auto o = best(s);
      auto row = s.key;
      row.push_back(fmt(o.value));
      row.push_back(fmt(s.err[o.index]));
      row.push_back(fmt(o.t));
      out.rows.push_back(std::move(row));
    }
    return out;
  }
  if (reducer == Reducer::optimal_over_rate) {
    if (opt.jt.empty()) throw std::invalid_argument("report: optimal_over_rate needs a J_tot t grid");
    const auto keys = present(all, {"chi"});
    auto full = keys;
    full.push_back("chi");
    const auto series = group(all, full, opt.metric);
    std::map<std::vector<std::string>, std::vector<RateCurve>> curves;
    std::vector<std::vector<std::string>> order;
    for (const auto& s : series) {
      std::vector<std::string> k(s.key.begin(), s.key.end() - 1);
      if (!curves.count(k)) order.push_back(k);
      curves[k].push_back({parse_number(s.key.back()), s.t, s.y});
    }
    out.header = keys;
    for (const char* c : {"Jt", "chi_opt", "sensitivity"}) out.header.push_back(c);
    for (const auto& k : order)
      for (const auto& e : optimal_over_rate(curves[k], opt.jt)) {
        auto row = k;
        row.push_back(fmt(e.jt));
        row.push_back(fmt(e.chi_opt));
        row.push_back(fmt(e.value));
        out.rows.push_back(std::move(row));
      }
    return out;
  }
  // scaling_fit: per group, y(x) = optimum over time (or the single value)
  if (all.column(opt.x) < 0) throw std::invalid_argument("report: no column '" + opt.x + "'");
  const auto keys = present(all, {opt.x, opt.x == "L" ? "N" : "L"});
  auto full = keys;
  full.push_back(opt.x);
  std::map<std::vector<std::string>, std::pair<std::vector<double>, std::vector<double>>> pts;
  std::vector<std::vector<std::string>> order;
  for (const auto& s : group(all, full, opt.metric)) {
    std::vector<std::string> k(s.key.begin(), s.key.end() - 1);
    if (!pts.count(k)) order.push_back(k);
    pts[k].first.push_back(parse_number(s.key.back()));
    pts[k].second.push_back(best(s).value);
  }
  out.header = keys;
  for (const char* c : {"exponent", "exponent_err", "intercept", "points"}) out.header.push_back(c);
  for (const auto& k : order) {
    const auto& [x, y] = pts[k];
    if (x.size() < 2) continue;
    const auto f = scaling_fit(x, y);
    auto row = k;
    row.push_back(fmt(f.slope));
    row.push_back(fmt(f.slope_err));
    row.push_back(fmt(f.intercept));
    row.push_back(std::to_string(x.size()));
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace gct
