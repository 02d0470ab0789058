// gct-sim: command-line front end for the simulation engines.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gct/config.hpp"
#include "gct/exact.hpp"
#include "gct/floquet.hpp"
#include "gct/scan.hpp"
#include "gct/spinwave.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kConfigError = 2;
constexpr int kPartial = 3;

std::vector<double> number_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(gct::parse_number(item));
  }
  if (out.empty()) throw gct::ConfigError("empty list '" + s + "'");
  return out;
}

struct Common {
  std::string config;
  std::string out;
  int workers = 0;
  std::string dump_kernel;
  bool verbose = false;
};

void add_common(CLI::App* app, Common& c, bool config_required) {
  auto* opt = app->add_option("--config", c.config, "experiment configuration (JSON)");
  if (config_required) opt->required();
  app->add_option("--out", c.out, "output directory (overrides the config)");
  app->add_option("--workers", c.workers, "worker threads (default: GCT_WORKERS or all cores)")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--dump-kernel", c.dump_kernel, "write the first grid point's coupling kernel as CSV");
  app->add_flag("-v,--verbose", c.verbose, "per-point progress on stderr");
}

gct::ExperimentConfig base_config(const Common& c) {
  gct::ExperimentConfig cfg;
  if (!c.config.empty()) cfg = gct::load_config(c.config);
  if (!c.out.empty()) cfg.output = c.out;
  return cfg;
}

void dump_kernel(const gct::ExperimentConfig& cfg, const std::string& path) {
  const auto grid = gct::expand_grid(cfg);
  const auto& p = grid.front();
  const auto spec = gct::LatticeSpec::cube(p.dim, p.L, cfg.lattice.boundary);
  auto sites = gct::build_lattice(spec);
  if (cfg.lattice.filling < 1 || cfg.lattice.filling_epsilon > 0)
    sites = gct::random_filling(sites, cfg.lattice.filling, cfg.lattice.filling_epsilon, cfg.ensemble.seed);
  gct::write_kernel_csv(gct::build_coupling_kernel(sites, spec, p.alpha), path);
}

int execute(gct::ExperimentConfig cfg, const Common& c) {
  cfg.validate();
  if (!c.dump_kernel.empty()) dump_kernel(cfg, c.dump_kernel);
  gct::RunOptions opt;
  opt.workers = c.workers;
  opt.verbose = c.verbose;
  const auto m = gct::run(cfg, opt);
  if (m.skipped) {
    std::cout << cfg.output << ": already complete (config " << m.config_hash << ")\n";
    return kOk;
  }
  int failed = 0;
  for (const auto& p : m.points) {
    if (p.status == "ok") continue;
    ++failed;
    std::cerr << "point " << p.id << " " << p.status << ": " << p.message << "\n";
  }
  std::cout << cfg.output << ": " << m.points.size() - failed << "/" << m.points.size() << " points ok\n";
  return m.complete ? kOk : kPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gap-protected countertwisting simulations"};
  app.set_version_flag("--version", std::string(GCT_VERSION));
  app.require_subcommand(1);

  Common common;
  std::map<std::string, CLI::App*> engines;
  for (const char* name : {"dtwa", "exact", "scan"}) {
    auto* sub = app.add_subcommand(name, std::string("run a sweep with the ") + name + " engine");
    add_common(sub, common, true);
    engines[name] = sub;
  }
  engines["scan"]->description("run a sweep with the engine named in the config");

  std::string sw_alpha, sw_dims, sw_chi, sw_times;
  bool sw_corr = false;
  auto* sw = app.add_subcommand("spinwave", "linear spin-wave variances and correlators");
  add_common(sw, common, false);
  sw->add_option("--alpha", sw_alpha, "power-law exponent(s), comma separated");
  sw->add_option("--dims", sw_dims, "lattice extents, e.g. 64x64 (cubic)");
  sw->add_option("--chi", sw_chi, "gap protection rate(s), comma separated; inf allowed");
  sw->add_option("--times", sw_times, "observation times, comma separated");
  sw->add_flag("--correlators", sw_corr, "also write real-space correlators");

  std::string fl_delta, fl_chi, fl_step;
  double fl_total = 0;
  auto* fl = app.add_subcommand("floquet", "Trotterized H_gct from native XXZ couplings");
  add_common(fl, common, false);
  fl->add_option("--delta", fl_delta, "native anisotropy(s); inf for Ising");
  fl->add_option("--chi", fl_chi, "target rate(s)");
  fl->add_option("--dt-step", fl_step, "Trotter step(s)");
  fl->add_option("--total-time", fl_total, "evolution time (rounded down to whole periods)");

  std::string gap_N = "4,6,8,10,12,14,16,18,20,22,24,26,28,30,32,34,36,38,40", gap_alpha = "0,1,2,3,4,6",
              gap_out = "gap.csv";
  auto* gap = app.add_subcommand("gap", "Heisenberg gap versus the spin-wave estimate on periodic chains");
  gap->add_option("--N", gap_N, "chain lengths, comma separated (4..40)");
  gap->add_option("--alpha", gap_alpha, "power-law exponents, comma separated");
  gap->add_option("--out", gap_out, "output CSV path");

  std::string cr_dim = "1,2,3", cr_L = "16", cr_alpha = "0,1,2,3,4,5,6", cr_boundary = "periodic",
              cr_out = "chi_c.csv";
  auto* crit = app.add_subcommand("critical", "spin-wave critical rate chi_c per lattice");
  crit->add_option("--dim", cr_dim, "dimensions, comma separated");
  crit->add_option("--L", cr_L, "linear extents, comma separated");
  crit->add_option("--alpha", cr_alpha, "power-law exponents, comma separated");
  crit->add_option("--boundary", cr_boundary, "periodic | open");
  crit->add_option("--out", cr_out, "output CSV path");

  std::vector<std::string> rep_in;
  std::string rep_reducer = "optimal_over_time", rep_out = "report.csv", rep_jt;
  gct::ReportOptions rep;
  auto* report = app.add_subcommand("report", "reduce observable CSVs to a report");
  report->add_option("--input", rep_in, "observable CSV file(s)")->required();
  report->add_option("--reducer", rep_reducer, "optimal_over_time | optimal_over_rate | scaling_fit");
  report->add_option("--metric", rep.metric, "observable column (default xi2)");
  report->add_option("--control", rep.control, "control-parameter column (default chi)");
  report->add_option("--x", rep.x, "scaling_fit abscissa column (default N)");
  report->add_option("--jt", rep_jt, "J_tot t grid for optimal_over_rate, comma separated");
  report->add_option("--out", rep_out, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    for (const auto& [name, sub] : engines) {
      if (!sub->parsed()) continue;
      auto cfg = base_config(common);
      if (name != "scan") cfg.engine = gct::parse_engine(name);
      return execute(cfg, common);
    }
    if (sw->parsed()) {
      auto cfg = base_config(common);
      cfg.engine = gct::Engine::spinwave;
      if (!sw_alpha.empty()) cfg.model.alpha = number_list(sw_alpha);
      if (!sw_chi.empty()) cfg.model.chi = number_list(sw_chi);
      if (!sw_times.empty()) cfg.time.values = number_list(sw_times);
      if (sw_corr) cfg.spinwave.correlators = true;
      if (!sw_dims.empty()) {
        std::vector<int> ext;
        std::stringstream ss(sw_dims);
        std::string item;
        while (std::getline(ss, item, 'x')) ext.push_back(std::stoi(item));
        if (ext.empty() || ext.size() > 3) throw gct::ConfigError("--dims takes 1 to 3 extents");
        for (int e : ext)
          if (e != ext.front()) throw gct::ConfigError("--dims must describe a cubic lattice");
        cfg.lattice.dims = {static_cast<int>(ext.size())};
        cfg.lattice.sizes = {ext.front()};
      }
      cfg.lattice.boundary = gct::Boundary::periodic;
      return execute(cfg, common);
    }
    if (fl->parsed()) {
      auto cfg = base_config(common);
      cfg.engine = gct::Engine::floquet;
      if (!fl_delta.empty()) cfg.floquet.delta = number_list(fl_delta);
      if (!fl_chi.empty()) cfg.model.chi = number_list(fl_chi);
      if (!fl_step.empty()) cfg.floquet.dt_step = number_list(fl_step);
      if (fl_total > 0) cfg.floquet.total_time = fl_total;
      return execute(cfg, common);
    }
    if (gap->parsed()) {
      gct::CsvTable t;
      t.header = {"N", "alpha", "dE_gp", "dE_sw"};
      for (double a : number_list(gap_alpha))
        for (double n : number_list(gap_N)) {
          const int N = static_cast<int>(n);
          if (N != n || N < 4 || N > 40) throw gct::ConfigError("--N values must be integers in [4, 40]");
          const auto g = gct::heisenberg_gap(N, a);
          t.rows.push_back({std::to_string(N), gct::format_number(a), gct::format_number(g.gap),
                            gct::format_number(gct::spinwave_gap(N, a))});
        }
      gct::write_atomic(gap_out, t.to_string());
      std::cout << gap_out << ": " << t.rows.size() << " rows\n";
      return kOk;
    }
    if (crit->parsed()) {
      gct::CsvTable t;
      t.header = {"dim", "L", "N", "alpha", "chi_c"};
      const auto bc = gct::parse_boundary(cr_boundary);
      for (double d : number_list(cr_dim))
        for (double L : number_list(cr_L))
          for (double a : number_list(cr_alpha)) {
            if (d != 1 && d != 2 && d != 3) throw gct::ConfigError("--dim values must be 1, 2 or 3");
            if (L != static_cast<int>(L) || L < 2) throw gct::ConfigError("--L values must be integers >= 2");
            const auto spec = gct::LatticeSpec::cube(static_cast<int>(d), static_cast<int>(L), bc);
            t.rows.push_back({gct::format_number(d), gct::format_number(L),
                              gct::format_number(std::pow(L, d)), gct::format_number(a),
                              gct::format_number(gct::critical_rate(spec, a))});
          }
      gct::write_atomic(cr_out, t.to_string());
      std::cout << cr_out << ": " << t.rows.size() << " rows\n";
      return kOk;
    }
    if (report->parsed()) {
      std::vector<gct::CsvTable> inputs;
      for (const auto& p : rep_in) inputs.push_back(gct::read_csv(p));
      if (!rep_jt.empty()) rep.jt = number_list(rep_jt);
      const auto t = gct::aggregate(inputs, gct::parse_reducer(rep_reducer), rep);
      gct::write_atomic(rep_out, t.to_string());
      std::cout << rep_out << ": " << t.rows.size() << " rows\n";
      return kOk;
    }
  } catch (const gct::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
