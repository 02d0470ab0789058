#include "gct/config.hpp"
#include "gct/floquet.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace gct {

using nlohmann::json;

Engine parse_engine(const std::string& s) {
  if (s == "dtwa") return Engine::dtwa;
  if (s == "exact") return Engine::exact;
  if (s == "spinwave") return Engine::spinwave;
  if (s == "floquet") return Engine::floquet;
  throw ConfigError("unknown engine '" + s + "'");
}

std::string to_string(Engine e) {
  switch (e) {
    case Engine::dtwa:
      return "dtwa";
    case Engine::exact:
      return "exact";
    case Engine::spinwave:
      return "spinwave";
    case Engine::floquet:
      return "floquet";
  }
  return "?";
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_number(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf" || s == "-infinity") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<double> TimeConfig::build(double chi) const {
  if (!values.empty()) return values;
  const double unit = (per_chi && std::isfinite(chi) && chi > 0) ? 1 / chi : 1.0;
  std::vector<double> t(points);
  for (int i = 0; i < points; ++i)
    t[i] = unit * (points == 1 ? t_max : t_min + (t_max - t_min) * i / (points - 1));
  return t;
}

namespace {

// -- reading ---------------------------------------------------------------

double num(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      return parse_number(j.get<std::string>());
    } catch (const ConfigError&) {
    }
  }
  throw ConfigError(where + ": expected a number");
}

std::vector<double> grid(const json& j, const std::string& where) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(num(v, where));
  } else {
    out.push_back(num(j, where));
  }
  if (out.empty()) throw ConfigError(where + ": empty grid");
  return out;
}

std::vector<int> int_grid(const json& j, const std::string& where) {
  std::vector<int> out;
  for (double v : grid(j, where)) {
    if (v != std::floor(v)) throw ConfigError(where + ": expected integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

int integer(const json& j, const std::string& where) {
  const double v = num(j, where);
  if (v != std::floor(v) || std::abs(v) > 2e9) throw ConfigError(where + ": expected an integer");
  return static_cast<int>(v);
}

std::uint64_t seed(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ConfigError(where + ": expected a non-negative integer");
  return j.get<std::uint64_t>();
}

std::string str(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string");
  return j.get<std::string>();
}

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

Anisotropy triple(const json& j, const std::string& where) {
  const auto v = grid(j, where);
  if (v.size() != 3) throw ConfigError(where + ": expected [Jx, Jy, Jz]");
  return {v[0], v[1], v[2]};
}

std::array<double, 3> axis(const json& j, const std::string& where) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "x") return {1, 0, 0};
    if (s == "y") return {0, 1, 0};
    if (s == "z") return {0, 0, 1};
    throw ConfigError(where + ": axis must be x, y, z or a unit vector");
  }
  const auto v = grid(j, where);
  if (v.size() != 3) throw ConfigError(where + ": axis must have three components");
  return {v[0], v[1], v[2]};
}

FieldBackend parse_backend(const std::string& s) {
  if (s == "auto") return FieldBackend::automatic;
  if (s == "dense") return FieldBackend::dense;
  if (s == "fft") return FieldBackend::fft;
  throw ConfigError("unknown field backend '" + s + "'");
}

std::string backend_name(FieldBackend b) {
  switch (b) {
    case FieldBackend::automatic:
      return "auto";
    case FieldBackend::dense:
      return "dense";
    case FieldBackend::fft:
      return "fft";
  }
  return "?";
}

ExperimentConfig from_json(const json& j) {
  ExperimentConfig c;
  allow_keys(j, "config",
             {"name", "engine", "lattice", "model", "schedule", "ensemble", "disorder", "time", "floquet", "spinwave",
              "output"});
  if (j.contains("name")) c.name = str(j["name"], "name");
  if (j.contains("engine")) c.engine = parse_engine(str(j["engine"], "engine"));
  if (j.contains("output")) c.output = str(j["output"], "output");
  if (j.contains("lattice")) {
    const auto& l = j["lattice"];
    allow_keys(l, "lattice", {"dim", "L", "N", "boundary", "filling", "filling_epsilon"});
    if (l.contains("dim")) c.lattice.dims = int_grid(l["dim"], "lattice.dim");
    if (l.contains("L")) c.lattice.sizes = int_grid(l["L"], "lattice.L");
    if (l.contains("N")) c.lattice.sites = int_grid(l["N"], "lattice.N");
    if (l.contains("boundary")) {
      try {
        c.lattice.boundary = parse_boundary(str(l["boundary"], "lattice.boundary"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    if (l.contains("filling")) c.lattice.filling = num(l["filling"], "lattice.filling");
    if (l.contains("filling_epsilon")) c.lattice.filling_epsilon = num(l["filling_epsilon"], "lattice.filling_epsilon");
  }
  if (j.contains("model")) {
    const auto& m = j["model"];
    allow_keys(m, "model", {"preset", "alpha", "chi", "chi_inv", "h", "J"});
    if (m.contains("preset")) {
      try {
        c.model.preset = parse_preset(str(m["preset"], "model.preset"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    if (m.contains("alpha")) c.model.alpha = grid(m["alpha"], "model.alpha");
    if (m.contains("chi") && m.contains("chi_inv")) throw ConfigError("model: give chi or chi_inv, not both");
    if (m.contains("chi")) c.model.chi = grid(m["chi"], "model.chi");
    if (m.contains("chi_inv")) {
      c.model.chi.clear();
      for (double v : grid(m["chi_inv"], "model.chi_inv"))
        c.model.chi.push_back(v == 0 ? std::numeric_limits<double>::infinity() : 1 / v);
    }
    if (m.contains("h")) c.model.h = num(m["h"], "model.h");
    if (m.contains("J")) c.model.custom = triple(m["J"], "model.J");
  }
  if (j.contains("schedule")) {
    const auto& s = j["schedule"];
    allow_keys(s, "schedule", {"type", "segments", "phi0_scale"});
    if (s.contains("type")) c.schedule.type = str(s["type"], "schedule.type");
    if (s.contains("phi0_scale")) c.schedule.phi0_scale = num(s["phi0_scale"], "schedule.phi0_scale");
    if (s.contains("segments")) {
      if (!s["segments"].is_array()) throw ConfigError("schedule.segments: expected a list");
      for (const auto& g : s["segments"]) {
        allow_keys(g, "schedule.segments[]", {"J", "h", "sign", "duration", "rotate"});
        SegmentConfig seg;
        if (g.contains("J")) seg.J = triple(g["J"], "segment.J");
        if (g.contains("h")) seg.h = num(g["h"], "segment.h");
        if (g.contains("sign")) seg.sign = integer(g["sign"], "segment.sign");
        if (g.contains("duration")) seg.duration = num(g["duration"], "segment.duration");
        if (g.contains("rotate")) {
          const auto& r = g["rotate"];
          allow_keys(r, "segment.rotate", {"axis", "angle"});
          Rotation rot;
          if (r.contains("axis")) rot.axis = axis(r["axis"], "segment.rotate.axis");
          if (r.contains("angle")) rot.angle = num(r["angle"], "segment.rotate.angle");
          seg.rotate_before = rot;
        }
        c.schedule.segments.push_back(seg);
      }
    }
  }
  if (j.contains("ensemble")) {
    const auto& e = j["ensemble"];
    allow_keys(e, "ensemble",
               {"n_traj", "seed", "dt", "batch", "resamples", "resample_size", "bootstrap_seed", "backend"});
    if (e.contains("n_traj")) c.ensemble.n_traj = integer(e["n_traj"], "ensemble.n_traj");
    if (e.contains("seed")) c.ensemble.seed = seed(e["seed"], "ensemble.seed");
    if (e.contains("dt")) c.ensemble.dt = num(e["dt"], "ensemble.dt");
    if (e.contains("batch")) c.ensemble.batch = integer(e["batch"], "ensemble.batch");
    if (e.contains("resamples")) c.ensemble.resamples = integer(e["resamples"], "ensemble.resamples");
    if (e.contains("resample_size")) c.ensemble.resample_size = integer(e["resample_size"], "ensemble.resample_size");
    if (e.contains("bootstrap_seed")) c.ensemble.bootstrap_seed = seed(e["bootstrap_seed"], "ensemble.bootstrap_seed");
    if (e.contains("backend")) c.ensemble.backend = parse_backend(str(e["backend"], "ensemble.backend"));
  }
  if (j.contains("disorder")) {
    const auto& d = j["disorder"];
    allow_keys(d, "disorder", {"epsilon", "realizations", "kind"});
    if (d.contains("kind")) c.disorder.kind = str(d["kind"], "disorder.kind");
    if (d.contains("epsilon")) c.disorder.epsilon = grid(d["epsilon"], "disorder.epsilon");
    if (d.contains("realizations")) c.disorder.realizations = integer(d["realizations"], "disorder.realizations");
  }
  if (j.contains("time")) {
    const auto& t = j["time"];
    allow_keys(t, "time", {"values", "min", "max", "points", "unit"});
    if (t.contains("values")) c.time.values = grid(t["values"], "time.values");
    if (t.contains("min")) c.time.t_min = num(t["min"], "time.min");
    if (t.contains("max")) c.time.t_max = num(t["max"], "time.max");
    if (t.contains("points")) c.time.points = integer(t["points"], "time.points");
    if (t.contains("unit")) {
      const auto u = str(t["unit"], "time.unit");
      if (u != "absolute" && u != "inverse_chi") throw ConfigError("time.unit must be absolute or inverse_chi");
      c.time.per_chi = u == "inverse_chi";
    }
  }
  if (j.contains("floquet")) {
    const auto& f = j["floquet"];
    allow_keys(f, "floquet", {"delta", "dt_step", "total_time"});
    if (f.contains("delta")) c.floquet.delta = grid(f["delta"], "floquet.delta");
    if (f.contains("dt_step")) c.floquet.dt_step = grid(f["dt_step"], "floquet.dt_step");
    if (f.contains("total_time")) c.floquet.total_time = num(f["total_time"], "floquet.total_time");
  }
  if (j.contains("spinwave")) {
    const auto& s = j["spinwave"];
    allow_keys(s, "spinwave", {"correlators"});
    if (s.contains("correlators")) {
      if (!s["correlators"].is_boolean()) throw ConfigError("spinwave.correlators: expected true or false");
      c.spinwave.correlators = s["correlators"].get<bool>();
    }
  }
  return c;
}

// -- writing ---------------------------------------------------------------

json jnum(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

json jgrid(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(jnum(x));
  return a;
}

json jtriple(const Anisotropy& J) { return json::array({jnum(J.x), jnum(J.y), jnum(J.z)}); }

json to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["engine"] = to_string(c.engine);
  j["output"] = c.output;
  j["lattice"] = {{"dim", c.lattice.dims},
                  {"L", c.lattice.sizes},
                  {"boundary", to_string(c.lattice.boundary)},
                  {"filling", jnum(c.lattice.filling)},
                  {"filling_epsilon", jnum(c.lattice.filling_epsilon)}};
  if (!c.lattice.sites.empty()) j["lattice"]["N"] = c.lattice.sites;
  j["model"] = {{"preset", to_string(c.model.preset)},
                {"alpha", jgrid(c.model.alpha)},
                {"chi", jgrid(c.model.chi)},
                {"h", jnum(c.model.h)},
                {"J", jtriple(c.model.custom)}};
  json segs = json::array();
  for (const auto& s : c.schedule.segments) {
    json g = {{"h", jnum(s.h)}, {"sign", s.sign}, {"duration", jnum(s.duration)}};
    if (s.J) g["J"] = jtriple(*s.J);
    if (s.rotate_before)
      g["rotate"] = {{"axis", json::array({jnum(s.rotate_before->axis[0]), jnum(s.rotate_before->axis[1]),
                                           jnum(s.rotate_before->axis[2])})},
                     {"angle", jnum(s.rotate_before->angle)}};
    segs.push_back(g);
  }
  j["schedule"] = {{"type", c.schedule.type}, {"segments", segs}, {"phi0_scale", jnum(c.schedule.phi0_scale)}};
  j["ensemble"] = {{"n_traj", c.ensemble.n_traj},
                   {"seed", c.ensemble.seed},
                   {"dt", jnum(c.ensemble.dt)},
                   {"batch", c.ensemble.batch},
                   {"resamples", c.ensemble.resamples},
                   {"resample_size", c.ensemble.resample_size},
                   {"bootstrap_seed", c.ensemble.bootstrap_seed},
                   {"backend", backend_name(c.ensemble.backend)}};
  j["disorder"] = {{"epsilon", jgrid(c.disorder.epsilon)}, {"realizations", c.disorder.realizations}};
  if (c.disorder.kind != "strength") j["disorder"]["kind"] = c.disorder.kind;
  json t = {{"min", jnum(c.time.t_min)},
            {"max", jnum(c.time.t_max)},
            {"points", c.time.points},
            {"unit", c.time.per_chi ? "inverse_chi" : "absolute"}};
  if (!c.time.values.empty()) t["values"] = jgrid(c.time.values);
  j["time"] = t;
  j["floquet"] = {{"delta", jgrid(c.floquet.delta)},
                  {"dt_step", jgrid(c.floquet.dt_step)},
                  {"total_time", jnum(c.floquet.total_time)}};
  j["spinwave"] = {{"correlators", c.spinwave.correlators}};
  return j;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (lattice.dims.empty() || lattice.sizes.empty()) throw ConfigError("lattice grids must not be empty");
  for (int d : lattice.dims)
    if (d < 1 || d > 3) throw ConfigError("lattice.dim must be 1, 2 or 3");
  for (int L : lattice.sizes)
    if (L < 2) throw ConfigError("lattice.L must be >= 2");
  for (int n : lattice.sites)
    for (int d : lattice.dims)
      if (std::lround(std::pow(n, 1.0 / d)) < 2) throw ConfigError("lattice.N too small for dimension");
  if (!(lattice.filling > 0 && lattice.filling <= 1)) throw ConfigError("lattice.filling must lie in (0, 1]");
  if (lattice.filling_epsilon < 0 || lattice.filling_epsilon >= 1)
    throw ConfigError("lattice.filling_epsilon must lie in [0, 1)");
  for (double a : model.alpha)
    if (!(a >= 0) || !std::isfinite(a)) throw ConfigError("model.alpha must be finite and >= 0");
  for (double c : model.chi)
    if (!(c >= 0)) throw ConfigError("model.chi must be >= 0");
  if (schedule.type != "constant" && schedule.type != "segments" && schedule.type != "echo")
    throw ConfigError("schedule.type must be constant, segments or echo");
  if (schedule.type == "segments" && schedule.segments.empty()) throw ConfigError("schedule.segments is empty");
  for (const auto& s : schedule.segments) {
    if (!(s.duration >= 0) || !std::isfinite(s.duration)) throw ConfigError("segment durations must be >= 0");
    if (s.sign != 1 && s.sign != -1) throw ConfigError("segment sign must be +1 or -1");
    if (s.rotate_before) {
      const auto& a = s.rotate_before->axis;
      if (std::abs(std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]) - 1) > 1e-9)
        throw ConfigError("rotation axis must be a unit vector");
    }
  }
  if (!(schedule.phi0_scale > 0 && schedule.phi0_scale <= 1)) throw ConfigError("schedule.phi0_scale must lie in (0, 1]");
  if (ensemble.n_traj < 2) throw ConfigError("ensemble.n_traj must be >= 2");
  if (!(ensemble.dt > 0)) throw ConfigError("ensemble.dt must be > 0");
  if (ensemble.batch < 1) throw ConfigError("ensemble.batch must be >= 1");
  if (ensemble.resamples < 2) throw ConfigError("ensemble.resamples must be >= 2");
  if (ensemble.resample_size < 2) throw ConfigError("ensemble.resample_size must be >= 2");
  if (disorder.epsilon.empty()) throw ConfigError("disorder.epsilon must not be empty");
  for (double e : disorder.epsilon)
    if (!(e >= 0 && e < 1)) throw ConfigError("disorder.epsilon must lie in [0, 1)");
  if (disorder.kind != "strength" && disorder.kind != "filling")
    throw ConfigError("disorder.kind must be strength or filling");
  if (disorder.realizations < 1) throw ConfigError("disorder.realizations must be >= 1");
  if (time.values.empty()) {
    if (time.points < 1) throw ConfigError("time.points must be >= 1");
    if (!(time.t_min >= 0 && time.t_max >= time.t_min)) throw ConfigError("time range must satisfy 0 <= min <= max");
  } else {
    for (std::size_t i = 0; i < time.values.size(); ++i) {
      if (!(time.values[i] >= 0) || !std::isfinite(time.values[i])) throw ConfigError("time values must be >= 0");
      if (i && time.values[i] < time.values[i - 1]) throw ConfigError("time values must be sorted");
    }
  }
  if (floquet.delta.empty() || floquet.dt_step.empty()) throw ConfigError("floquet grids must not be empty");
  for (double s : floquet.dt_step)
    if (!(s > 0) || !std::isfinite(s)) throw ConfigError("floquet.dt_step must be > 0");
  if (floquet.total_time < 0) throw ConfigError("floquet.total_time must be >= 0");
  if (engine == Engine::floquet)
    for (double d : floquet.delta) {
      if (d == 1) throw ConfigError("floquet.delta = 1 (isotropic) cannot be converted");
      for (double x : model.chi)
        if (x > chi_max(d)) throw ConfigError("chi exceeds the reachable maximum for floquet.delta " + format_number(d));
    }
  if (output.empty()) throw ConfigError("output must not be empty");
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  auto c = from_json(j);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) { return to_json(c).dump(2) + "\n"; }

}  // namespace gct
