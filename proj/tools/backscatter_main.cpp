// command-line front end: potential generation, kernel tables, transform
// runs, wave checks and the bounds verification suite
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bsc/backscatter.hpp"
#include "bsc/bounds.hpp"
#include "bsc/io.hpp"
#include "bsc/parallel.hpp"
#include "bsc/version.hpp"
#include "bsc/wave.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Cli {
  std::string config_path;
  std::string out_dir = "out";
  std::string table_path;
  int threads = 1;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

json load_config(const Cli& cli) {
  json cfg = json::object();
  if (!cli.config_path.empty()) {
    std::ifstream f(cli.config_path);
    if (!f) throw bsc::ConfigError("cannot open config: " + cli.config_path);
    cfg = json::parse(f);
  }
  return cfg;
}

std::string config_hash_hex(const json& cfg, std::uint64_t seed) {
  std::ostringstream s;
  s << cfg.dump() << "#" << seed;
  std::ostringstream hx;
  hx << std::hex << bsc::string_hash(s.str());
  return hx.str();
}

bsc::QuadratureSpec quad_from(const json& cfg) {
  bsc::QuadratureSpec q;
  if (!cfg.contains("quadrature")) return q;
  const json& j = cfg["quadrature"];
  q.abs_tol = j.value("abs_tol", q.abs_tol);
  q.rel_tol = j.value("rel_tol", q.rel_tol);
  q.max_subdivisions = j.value("max_subdivisions", q.max_subdivisions);
  q.oscillation_guard = j.value("oscillation_guard", q.oscillation_guard);
  return q;
}

bsc::PotentialSpec potential_from(const json& cfg, std::uint64_t seed) {
  bsc::PotentialSpec p;
  if (!cfg.contains("potential")) return p;
  const json& j = cfg["potential"];
  p.kind = j.value("kind", p.kind);
  if (p.kind != "gaussian" && p.kind != "bump" && p.kind != "trig_random" &&
      p.kind != "radial_tail")
    throw bsc::ConfigError("potential.kind must be gaussian|bump|trig_random|radial_tail");
  p.amplitude = j.value("amplitude", p.amplitude);
  p.width = j.value("width", p.width);
  p.support_radius = j.value("support_radius", p.support_radius);
  p.tail_exponent = j.value("tail_exponent", p.tail_exponent);
  p.modes = j.value("modes", p.modes);
  p.seed = j.value("seed", seed);
  return p;
}

void grid_from(const json& cfg, int& m, double& L) {
  m = 16;
  L = 4.0;
  if (cfg.contains("grid")) {
    m = cfg["grid"].value("m", m);
    L = cfg["grid"].value("box_halfwidth", L);
  }
}

void write_manifest(const std::string& dir, const std::string& name, json body,
                    const json& cfg, std::uint64_t seed) {
  body["library_version"] = bsc::kLibraryVersion;
  body["config_hash"] = config_hash_hex(cfg, seed);
  std::ofstream f(dir + "/" + name);
  if (!f) throw bsc::IoError("cannot write manifest in " + dir);
  f << body.dump(2) << "\n";
}

std::string default_table_path(const Cli& cli, int order) {
  if (!cli.table_path.empty()) return cli.table_path;
  const char* cache = std::getenv("BACKSCATTER_CACHE");
  const std::string dir = cache ? cache : cli.out_dir;
  fs::create_directories(dir);
  return dir + "/kernel_n" + std::to_string(order) + ".ktab";
}

int cmd_kernels(const Cli& cli, const json& cfg) {
  const json jt = cfg.value("kernel_table", json::object());
  const int order = jt.value("order", 2);
  const double r_max = jt.value("r_max", 16.0);
  const double step = jt.value("step", 0.05);
  bsc::QuadratureSpec q = quad_from(cfg);
  bsc::KernelTable t = bsc::KernelTable::build(order, r_max, step, q);
  const std::string path = default_table_path(cli, order);
  t.save(path);
  if (jt.value("export_csv", false)) t.export_csv(path + ".csv");
  std::ostringstream hx;
  hx << std::hex << t.content_hash;
  json man;
  man["table"] = path;
  man["order"] = order;
  man["step"] = step;
  man["r_max"] = t.max_radius();
  man["points_per_axis"] = t.n;
  man["hash"] = hx.str();
  if (step > 0.1) man["warning"] = "coarse radius step; interpolation error grows as step^4";
  write_manifest(cli.out_dir, "kernels_manifest.json", man, cfg, cli.seed);
  std::cout << "kernel table written to " << path << " (hash " << hx.str() << ")\n";
  return 0;
}

int cmd_b2(const Cli& cli, const json& cfg) {
  int m;
  double L;
  grid_from(cfg, m, L);
  bsc::QuadratureSpec q = quad_from(cfg);
  bsc::PotentialSpec ps = potential_from(cfg, cli.seed);
  bsc::GridPotential v = bsc::make_grid_potential(ps, m, L);
  const json jb = cfg.value("b2", json::object());
  double kr = jb.value("kernel_radius", 0.0);
  if (kr <= 0.0) kr = 2.0 * v.support_radius;
  bsc::TruncatedKernel k(2, kr);
  k.quad = q;
  bsc::KernelTable table;
  if (!cli.table_path.empty()) {
    table = bsc::KernelTable::load(cli.table_path);
    k.table = &table;
  }
  bsc::BornTermResult res = bsc::b2_fourier(v, k);
  bsc::save_field(res.field, cli.out_dir + "/b2_field");
  bsc::save_field(v.field, cli.out_dir + "/potential");

  json man;
  man["method"] = res.method;
  man["kernel_radius"] = kr;
  man["grid"] = {{"m", m}, {"box_halfwidth", L}};
  man["error_estimate"] = res.error_estimate;
  man["elapsed_seconds"] = res.elapsed_seconds;
  man["l2_norm"] = bsc::l2_norm(res.field);
  man["linf_norm"] = bsc::linf_norm(res.field);
  man["potential_l2"] = bsc::l2_norm(v.field);

  if (cfg.contains("smoothing")) {
    const double s = cfg["smoothing"].value("s", 0.5);
    const double eps = cfg["smoothing"].value("epsilon", 0.1);
    bsc::SmoothingReport rep = bsc::smoothing_report(v, k, s, eps);
    man["smoothing"] = {{"tail_exponent_v", rep.tail_exponent_v},
                        {"tail_exponent_b2", rep.tail_exponent_b2},
                        {"gain", rep.gain},
                        {"target_gain", rep.target_gain},
                        {"pass", rep.pass}};
    if (!rep.pass) {
      write_manifest(cli.out_dir, "b2_manifest.json", man, cfg, cli.seed);
      std::cerr << "smoothing check failed: gain " << rep.gain << " < "
                << rep.pass_threshold << "\n";
      return 3;
    }
  }

  // radial profile of the output as tidy CSV
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < m / 2; ++i) {
    const double r = i * res.field.spacing();
    int ix = m / 2 + i;
    rows.push_back({r, res.field.at(ix, m / 2, m / 2).real()});
  }
  bsc::write_csv(cli.out_dir + "/b2_profile.csv", {"radius", "value"}, rows);
  write_manifest(cli.out_dir, "b2_manifest.json", man, cfg, cli.seed);
  std::cout << "b2 done: |B2 v|_2 = " << man["l2_norm"] << ", error estimate "
            << res.error_estimate << "\n";
  return 0;
}

int cmd_radial(const Cli& cli, const json& cfg) {
  bsc::QuadratureSpec q = quad_from(cfg);
  const json jr = cfg.value("radial", json::object());
  const int order = jr.value("order", 2);
  const double amplitude = jr.value("amplitude", 1.0);
  const double width = jr.value("width", 0.5);
  const double support = jr.value("support_radius", 2.0);
  bsc::RadialPotential v = bsc::make_radial_gaussian(amplitude, width, support);
  std::vector<double> radii;
  if (jr.contains("out_radii"))
    radii = jr["out_radii"].get<std::vector<double>>();
  else
    for (int i = 0; i <= 24; ++i) radii.push_back(2.0 * support * i / 24.0);

  bsc::TruncatedKernel k(order, 2.0 * (order - 1) * support);
  k.quad = q;
  bsc::BornTermResult res;
  if (order == 2 && jr.value("method", "quad") == std::string("quad")) {
    res = bsc::b2_radial_quad(v, k, radii, q);
  } else {
    bsc::McSettings mc;
    mc.samples = cfg.value("mc", json::object()).value("samples", 20000L);
    mc.seed = cli.seed ? cli.seed : 1;
    mc.gamma = cfg.value("mc", json::object()).value("gamma", 0.0);
    res = bsc::bn_radial(v, order, radii, mc, k, q);
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < radii.size(); ++i)
    rows.push_back({radii[i], res.radial_values[i],
                    res.radial_std_err.empty() ? 0.0 : res.radial_std_err[i]});
  bsc::write_csv(cli.out_dir + "/radial_born.csv", {"radius", "value", "std_err"}, rows);
  json man;
  man["order"] = order;
  man["method"] = res.method;
  man["error_estimate"] = res.error_estimate;
  man["elapsed_seconds"] = res.elapsed_seconds;
  man["mc_samples"] = res.mc_samples;
  write_manifest(cli.out_dir, "radial_manifest.json", man, cfg, cli.seed);
  std::cout << "radial born term written (" << res.method << ")\n";
  return 0;
}

int cmd_wave(const Cli& cli, const json& cfg) {
  int m;
  double L;
  grid_from(cfg, m, L);
  bsc::QuadratureSpec q = quad_from(cfg);
  (void)q;
  const json jw = cfg.value("wave", json::object());
  const double t = jw.value("t", 1.0);
  double dt = jw.value("dt", 0.0);
  if (dt <= 0.0) dt = t / 1024.0;

  bsc::PotentialSpec fs_spec;
  fs_spec.kind = "bump";
  fs_spec.support_radius = jw.value("source_radius", 0.8);
  bsc::GridPotential f = bsc::make_grid_potential(fs_spec, m, L);

  json man;
  std::vector<std::vector<double>> rows;
  if (!cfg.contains("potential")) {
    // free run: solver against the exact spectral flow
    bsc::GridField zero(m, L);
    bsc::WaveState s = bsc::wave_solve(zero, f.field, t, dt);
    bsc::GridField u = bsc::free_propagate(f.field, t);
    bsc::GridField d = s.u;
    bsc::axpy(d, bsc::cplx(-1.0, 0.0), u);
    const double rel = bsc::l2_norm(d) / bsc::l2_norm(u);
    man["free_identity_rel_error"] = rel;
    man["pass"] = rel < 1e-9;
    rows.push_back({t, rel});
    bsc::write_csv(cli.out_dir + "/wave_free.csv", {"t", "rel_error"}, rows);
    write_manifest(cli.out_dir, "wave_manifest.json", man, cfg, cli.seed);
    std::cout << "free propagation identity: rel error " << rel << "\n";
    return rel < 1e-9 ? 0 : 3;
  }

  bsc::PotentialSpec ps = potential_from(cfg, cli.seed);
  bsc::GridPotential v = bsc::make_grid_potential(ps, m, L);
  bsc::WaveState ref = bsc::wave_solve(v.field, f.field, t, dt);
  bsc::GridField acc(m, L);
  const int steps = jw.value("born_steps", 24);
  double prev = bsc::l2_norm(ref.u);
  bool decreasing = true;
  for (int n = 0; n <= jw.value("born_orders", 3); ++n) {
    bsc::GridField term = bsc::born_term(v.field, f.field, n, t, steps);
    bsc::axpy(acc, bsc::cplx(n % 2 == 0 ? 1.0 : -1.0, 0.0), term);
    bsc::GridField d = acc;
    bsc::axpy(d, bsc::cplx(-1.0, 0.0), ref.u);
    const double res = bsc::l2_norm(d);
    rows.push_back({static_cast<double>(n), res});
    if (res >= prev) decreasing = false;
    prev = res;
  }
  bsc::write_csv(cli.out_dir + "/wave_series.csv", {"order", "residual"}, rows);
  man["series_residuals_decreasing"] = decreasing;
  write_manifest(cli.out_dir, "wave_manifest.json", man, cfg, cli.seed);
  std::cout << "born series residuals " << (decreasing ? "decrease" : "DO NOT decrease")
            << "\n";
  return decreasing ? 0 : 3;
}

int cmd_bounds(const Cli& cli, const json& cfg) {
  bsc::QuadratureSpec q = quad_from(cfg);
  const json jb = cfg.value("bounds", json::object());
  const double ceiling_conv = jb.value("hgamma_conv_ceiling", 120.0);
  const double ceiling_t2 = jb.value("t2_ceiling", 40.0);
  json man;
  std::vector<std::vector<double>> rows;
  bool ok = true;

  auto rep = bsc::check_hgamma_lemma(jb.value("lemma_samples", 100000L),
                                     cli.seed ? cli.seed : 2024);
  man["hgamma_lemma"] = {{"samples", rep.samples},
                         {"min_slack_basic", rep.min_slack_basic},
                         {"min_slack_shift", rep.min_slack_shift}};

  for (double rr : {0.0, 1.0, 3.0, 10.0})
    for (double s : {0.1, 0.4, 0.8}) {
      auto [lhs, rhs] = bsc::check_fs_bound(rr, 1.3, s, 3);
      rows.push_back({rr, s, lhs, rhs});
      if (lhs > rhs) ok = false;
    }
  bsc::write_csv(cli.out_dir + "/bounds_fs.csv", {"r", "s", "lhs", "rhs"}, rows);

  rows.clear();
  double cmin = 1e300, cmax = 0.0;
  for (double rho : {0.0, 1.0, 4.0, 16.0}) {
    auto res = bsc::check_hgamma_conv(1.0, rho, 0.7, 0.4, q);
    rows.push_back({rho, res.lhs, res.implied_c});
    cmin = std::min(cmin, res.implied_c);
    cmax = std::max(cmax, res.implied_c);
    if (res.implied_c > ceiling_conv) ok = false;
  }
  man["hgamma_conv"] = {{"implied_c_min", cmin}, {"implied_c_max", cmax},
                        {"ceiling", ceiling_conv}};
  bsc::write_csv(cli.out_dir + "/bounds_hgamma_conv.csv", {"rho", "lhs", "implied_c"}, rows);

  rows.clear();
  for (double xi : {0.0, 2.0, 8.0, 16.0}) {
    auto [lhs, env] = bsc::check_T2(1.0, xi, 0.4, 0.4, q);
    rows.push_back({xi, lhs, env, lhs / env});
    if (lhs / env > ceiling_t2) ok = false;
  }
  bsc::write_csv(cli.out_dir + "/bounds_t2.csv", {"xi", "lhs", "envelope", "implied_c"},
                 rows);

  man["pass"] = ok;
  write_manifest(cli.out_dir, "bounds_manifest.json", man, cfg, cli.seed);
  std::cout << "bounds lab " << (ok ? "passed" : "FAILED") << "\n";
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"truncated backscattering transforms for Schrodinger potentials in R^3"};
  app.require_subcommand(1);
  Cli cli;
  app.add_option("--config", cli.config_path, "JSON config file");
  app.add_option("--threads", cli.threads, "worker threads (results are thread-count independent)");
  app.add_option("--out", cli.out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", cli.seed, "seed override");
  app.add_option("--table", cli.table_path, "kernel table path");

  auto* c_kernels = app.add_subcommand("kernels", "tabulate the transformed kernel profile");
  auto* c_b2 = app.add_subcommand("b2", "quadratic transform term on a grid potential");
  auto* c_radial = app.add_subcommand("radial", "radial Born terms (quadrature or Monte-Carlo)");
  auto* c_wave = app.add_subcommand("wave", "wave solver and Born series checks");
  auto* c_bounds = app.add_subcommand("bounds", "estimate-chain verification suite");

  CLI11_PARSE(app, argc, argv);
  cli.seed_set = seed_opt->count() > 0;
  if (!cli.seed_set) cli.seed = 1;

  bsc::set_thread_count(cli.threads);
  try {
    fs::create_directories(cli.out_dir);
    json cfg = load_config(cli);
    if (c_kernels->parsed()) return cmd_kernels(cli, cfg);
    if (c_b2->parsed()) return cmd_b2(cli, cfg);
    if (c_radial->parsed()) return cmd_radial(cli, cfg);
    if (c_wave->parsed()) return cmd_wave(cli, cfg);
    if (c_bounds->parsed()) return cmd_bounds(cli, cfg);
  } catch (const bsc::QuadratureBudgetExceeded& e) {
    std::cerr << "quadrature failure: " << e.what() << "\n";
    return 2;
  } catch (const bsc::BoundViolated& e) {
    std::cerr << "bound violated: " << e.what() << "\n";
    return 3;
  } catch (const bsc::CounterexampleFound& e) {
    std::cerr << "counterexample: " << e.what() << "\n";
    return 3;
  } catch (const bsc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
