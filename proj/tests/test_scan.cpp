#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gct/config.hpp"
#include "gct/csv.hpp"
#include "gct/scan.hpp"

using namespace gct;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("gct_test_" + name);
  fs::remove_all(p);
  return p;
}

const char* kSmallDtwa = R"({
  "name": "small",
  "engine": "dtwa",
  "lattice": {"dim": 1, "L": [6, 8], "boundary": "open"},
  "model": {"preset": "gct", "alpha": [3], "chi": [0.5, "inf"]},
  "time": {"min": 0, "max": 1, "points": 5},
  "ensemble": {"n_traj": 200, "seed": 3, "resamples": 10, "resample_size": 100}
})";

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double v : std::vector<double>{0.1, 1.0 / 3, 1e-300, 6.02214076e23, -2.5, 0.0, INFINITY, -INFINITY}) {
    CHECK(parse_number(format_number(v)) == v);
  }
  CHECK(format_number(INFINITY) == "inf");
  CHECK(std::isnan(parse_number(format_number(NAN))));
  CHECK_THROWS(parse_number("1.5x"));
  CHECK_THROWS(parse_number(""));
}

TEST_CASE("config parsing") {
  auto c = parse_config(kSmallDtwa);
  CHECK(c.engine == Engine::dtwa);
  CHECK(c.lattice.sizes == std::vector<int>{6, 8});
  CHECK(std::isinf(c.model.chi[1]));
  CHECK(c.ensemble.n_traj == 200);

  SUBCASE("round trip") {
    auto text = serialize_config(c);
    auto back = parse_config(text);
    CHECK(serialize_config(back) == text);
    CHECK(config_hash(back) == config_hash(c));
  }
  SUBCASE("output directory does not change the hash") {
    auto d = c;
    d.output = "elsewhere";
    CHECK(config_hash(d) == config_hash(c));
    d.ensemble.seed = 4;
    CHECK(config_hash(d) != config_hash(c));
  }
  SUBCASE("chi_inv") {
    auto k = parse_config(R"({"model": {"chi_inv": [0, 2, 10]}})");
    CHECK(std::isinf(k.model.chi[0]));
    CHECK(k.model.chi[1] == 0.5);
    CHECK(k.model.chi[2] == doctest::Approx(0.1));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(parse_config(R"({"lattise": {}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"engine": "magic"})"), ConfigError);
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": {"chi": [1], "chi_inv": [1]}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"ensemble": {"n_traj": "many"}})"), ConfigError);
    auto bad = c;
    bad.ensemble.n_traj = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  }
}

TEST_CASE("grid expansion") {
  auto c = parse_config(kSmallDtwa);
  auto g = expand_grid(c);
  CHECK(g.size() == 4);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i].id == static_cast<int>(i));
  auto f = parse_config(R"({"engine": "floquet", "model": {"chi": [0.1, 0.2]},
                            "floquet": {"delta": [0, "inf"], "dt_step": [0.1, 0.2, 0.4], "total_time": 2.4}})");
  CHECK(expand_grid(f).size() == 12);
  auto n = parse_config(R"({"engine": "dtwa", "lattice": {"dim": [1, 2, 3], "N": [1000]}})");
  auto gn = expand_grid(n);
  REQUIRE(gn.size() == 3);
  CHECK(gn[0].L == 1000);
  CHECK(gn[1].L == 32);
  CHECK(gn[2].L == 10);
  CHECK(serialize_config(parse_config(serialize_config(n))) == serialize_config(n));
}

TEST_CASE("filling disorder varies the occupied count") {
  auto c = parse_config(R"({"engine": "exact", "lattice": {"dim": 2, "L": 4, "boundary": "open", "filling": 0.5},
                            "model": {"alpha": 3, "chi": 1}, "time": {"values": [0, 0.5]},
                            "disorder": {"kind": "filling", "epsilon": [0, 0.25], "realizations": 4}})");
  auto out = run_point(c, expand_grid(c)[1], 1);
  const auto& t = out.tables.front().second;
  REQUIRE(t.rows.size() == 8);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double n = t.number(r, "N");
    CHECK((n == 6 || n == 10));
  }
  CHECK(run_point(c, expand_grid(c)[0], 1).tables.front().second.number(0, "N") == 8);
  CHECK_THROWS_AS(parse_config(R"({"disorder": {"kind": "sites"}})").validate(), ConfigError);
}

TEST_CASE("csv tables") {
  CsvTable t;
  t.header = {"a", "b"};
  t.rows = {{"1", "x"}, {"2.5", "inf"}};
  auto dir = scratch("csv");
  const auto path = (dir / "sub" / "t.csv").string();
  write_atomic(path, t.to_string());
  auto r = read_csv(path);
  CHECK(r.header == t.header);
  CHECK(r.rows == t.rows);
  CHECK(r.number(1, "a") == 2.5);
  CHECK(std::isinf(r.number(1, "b")));
  CHECK(r.column("zz") == -1);
  CHECK_FALSE(fs::exists(path + ".tmp"));
  CHECK_THROWS(read_csv((dir / "missing.csv").string()));
  fs::remove_all(dir);
}

TEST_CASE("sweep output, determinism and resumption") {
  auto c = parse_config(kSmallDtwa);
  auto a = scratch("run_a"), b = scratch("run_b");
  c.output = a.string();
  auto m1 = run(c, {1, false});
  CHECK(m1.complete);
  CHECK_FALSE(m1.skipped);
  CHECK(m1.points.size() == 4);
  REQUIRE(fs::exists(a / "dtwa.csv"));
  REQUIRE(fs::exists(a / "manifest.json"));

  auto table = read_csv((a / "dtwa.csv").string());
  std::vector<std::string> expect{"point", "dim", "L", "N", "alpha", "chi", "epsilon", "realization"};
  for (const auto& col : observable_columns()) expect.push_back(col);
  CHECK(table.header == expect);
  CHECK(table.rows.size() == 4 * 5);
  CHECK(table.number(0, "xi2") == doctest::Approx(1.0).epsilon(0.3));

  // other worker count, byte-identical tables
  c.output = b.string();
  auto m2 = run(c, {3, false});
  CHECK(slurp(a / "dtwa.csv") == slurp(b / "dtwa.csv"));
  {
    auto ca = parse_config(slurp(a / "config.json")), cb = parse_config(slurp(b / "config.json"));
    CHECK(ca.output != cb.output);
    cb.output = ca.output;
    CHECK(serialize_config(ca) == serialize_config(cb));
  }
  CHECK(m2.config_hash == m1.config_hash);

  // completed manifest: nothing runs
  auto again = run(c, {1, false});
  CHECK(again.skipped);

  // lose one point and the manifest: only that point reruns
  const auto pdir = b / "points" / m1.config_hash;
  const auto keep = fs::last_write_time(pdir / "p00000.status");
  fs::remove(pdir / "p00002.status");
  fs::remove(b / "manifest.json");
  auto m3 = run(c, {1, false});
  CHECK_FALSE(m3.skipped);
  CHECK(m3.complete);
  CHECK(fs::last_write_time(pdir / "p00000.status") == keep);
  CHECK(fs::exists(pdir / "p00002.status"));
  CHECK(slurp(a / "dtwa.csv") == slurp(b / "dtwa.csv"));

  auto back = RunManifest::from_json(slurp(b / "manifest.json"));
  CHECK(back.config_hash == m3.config_hash);
  CHECK(back.points.size() == 4);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("failed points mark the run incomplete") {
  // full ED beyond 16 spins fails at run time
  auto c = parse_config(R"({"engine": "exact", "lattice": {"dim": 1, "L": [8, 18], "boundary": "open"},
                            "model": {"alpha": [3], "chi": [1]}, "time": {"max": 1, "points": 3}})");
  auto dir = scratch("partial");
  c.output = dir.string();
  auto m = run(c, {1, false});
  CHECK_FALSE(m.complete);
  CHECK(m.points[0].status == "ok");
  CHECK(m.points[1].status == "failed");
  CHECK_FALSE(run(c, {1, false}).skipped);
  fs::remove_all(dir);
}

TEST_CASE("engines write their tables") {
  auto dir = scratch("engines");
  SUBCASE("collective exact") {
    auto c = parse_config(R"({"engine": "exact", "lattice": {"dim": 1, "L": [100]},
                              "model": {"preset": "ct", "alpha": [0], "chi": [1]},
                              "time": {"max": 3, "points": 31}})");
    c.output = dir.string();
    run(c, {1, false});
    auto t = read_csv((dir / "exact.csv").string());
    double best = 1e9;
    for (std::size_t i = 0; i < t.rows.size(); ++i) best = std::min(best, t.number(i, "xi2"));
    CHECK(best < 0.1);
  }
  SUBCASE("spin waves") {
    auto c = parse_config(R"({"engine": "spinwave", "lattice": {"dim": 2, "L": [16]},
                              "model": {"alpha": [3], "chi": [0.1]}, "time": {"values": [0, 1, 5]},
                              "spinwave": {"correlators": true}})");
    c.output = dir.string();
    run(c, {1, false});
    auto v = read_csv((dir / "spinwave_variances.csv").string());
    CHECK(v.column("var_min") >= 0);
    CHECK(v.column("hp_valid") >= 0);
    CHECK(v.number(0, "var_min") == doctest::Approx(64));
    auto k = read_csv((dir / "spinwave_correlators.csv").string());
    for (const char* col : {"t", "r_x", "r_y", "C_min", "C_max"}) CHECK(k.column(col) >= 0);
  }
  SUBCASE("floquet") {
    auto c = parse_config(R"({"engine": "floquet", "lattice": {"dim": 1, "L": [8], "boundary": "open"},
                              "model": {"alpha": [3], "chi": [0.2]},
                              "floquet": {"delta": ["inf"], "dt_step": [0.2], "total_time": 2.4},
                              "ensemble": {"n_traj": 64, "resamples": 5, "resample_size": 32}})");
    c.output = dir.string();
    run(c, {1, false});
    auto t = read_csv((dir / "floquet.csv").string());
    CHECK(t.column("delta") >= 0);
    CHECK(t.column("dt_step") >= 0);
    CHECK(t.rows.size() == 5);  // t = 0 and four period ends
  }
  SUBCASE("echo") {
    auto c = parse_config(R"({"engine": "dtwa", "lattice": {"dim": 1, "L": [10], "boundary": "open"},
                              "model": {"alpha": [1], "chi": [1]}, "schedule": {"type": "echo"},
                              "time": {"values": [0.5, 1]}, "ensemble": {"n_traj": 200, "resample_size": 100}})");
    c.output = dir.string();
    run(c, {1, false});
    auto t = read_csv((dir / "echo.csv").string());
    for (const char* col : {"phi0", "signal_zero", "slope", "echo_sens"}) CHECK(t.column(col) >= 0);
    CHECK(t.rows.size() == 2);
  }
  fs::remove_all(dir);
}

TEST_CASE("report reducers") {
  CsvTable t;
  t.header = {"point", "dim", "L", "N", "alpha", "chi", "epsilon", "realization", "t", "xi2", "xi2_err"};
  auto add = [&](int L, double chi, double tt, double y) {
    t.rows.push_back({"0", "1", std::to_string(L), std::to_string(L), "3", format_number(chi), "0", "0",
                      format_number(tt), format_number(y), "0.01"});
  };
  for (int L : {100, 400})
    for (double chi : {0.5, 2.0})
      for (double tt : {0.0, 1.0, 2.0, 3.0, 4.0}) add(L, chi, tt, (tt - 2) * (tt - 2) / chi + 10.0 / L);

  ReportOptions opt;
  auto o = aggregate({t}, Reducer::optimal_over_time, opt);
  CHECK(o.header.back() == "t_opt");
  CHECK(o.rows.size() == 4);
  CHECK(o.number(0, "t_opt") == doctest::Approx(2));
  CHECK(o.number(0, "sensitivity") == doctest::Approx(0.1));
  CHECK(o.number(0, "stderr") == doctest::Approx(0.01));

  opt.jt = {3, 12};
  auto r = aggregate({t}, Reducer::optimal_over_rate, opt);
  CHECK(r.header.back() == "sensitivity");
  CHECK(r.rows.size() == 4);

  auto s = aggregate({t}, Reducer::scaling_fit, opt);
  REQUIRE(s.rows.size() == 2);
  CHECK(s.number(0, "exponent") == doctest::Approx(-1));

  // chi_c style table without a time column
  CsvTable cc;
  cc.header = {"N", "alpha", "chi_c"};
  for (int N : {64, 256, 1024}) cc.rows.push_back({std::to_string(N), "3", format_number(5.0 / std::sqrt(N))});
  opt.metric = "chi_c";
  CHECK(aggregate({cc}, Reducer::scaling_fit, opt).number(0, "exponent") == doctest::Approx(-0.5));

  CsvTable other = t;
  other.header[9] = "qfi_sens";
  CHECK_THROWS(aggregate({t, other}, Reducer::optimal_over_time, {}));
  CHECK_THROWS(parse_reducer("median"));
}
