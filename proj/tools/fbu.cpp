// fbu: few-body universality solver suite
//
// Subcommands map one-to-one onto harness run modes so CLI runs and config
// runs produce identical files.

#include <CLI11.hpp>
#include <iostream>

#include "fbu/errors.hpp"
#include "fbu/harness/run.hpp"
#include "fbu/parallel.hpp"
#include "fbu/potential.hpp"
#include "fbu/simd/simd.hpp"

namespace {

struct CommonArgs {
  std::string out = "results";
  std::string name;
  std::vector<std::string> params;  // key=value shape parameters
};

fbu::PotentialShape::Params parse_params(const std::vector<std::string>& kv) {
  fbu::PotentialShape::Params p;
  for (const auto& s : kv) {
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw fbu::DomainError("--param expects key=value, got: " + s);
    p[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
  }
  return p;
}

void add_common(CLI::App* cmd, CommonArgs& c) {
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--name", c.name, "run name (file prefix)");
  cmd->add_option("--param", c.params, "shape parameter key=value");
}

int finish(fbu::RunConfig rc, const CommonArgs& c,
           const std::string& default_name) {
  rc.out_dir = c.out;
  rc.name = c.name.empty() ? default_name : c.name;
  if (!c.params.empty()) rc.shape_params = parse_params(c.params);
  const fbu::SweepReport rep = fbu::execute_run(rc, std::cout);
  for (const auto& [flag, val] : rep.flags)
    std::cout << flag << ": " << (val ? "pass" : "FAIL") << "\n";
  std::cout << "wrote " << rc.out_dir << "/" << rc.name << ".csv\n";
  return rep.all_ok() ? 0 : 1;
}

std::vector<double> geometric(double start, double factor, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) {
    v.push_back(start);
    start *= factor;
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"few-body universality solver suite"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads,
                 "worker threads (results are independent of this)");

  // run <config>
  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "execute a config file");
  run->add_option("config", config_path, "config file")->required();

  // shapes list
  CLI::App* shapes = app.add_subcommand("shapes", "potential shape catalog");
  CLI::App* shapes_list = shapes->add_subcommand("list", "print the catalog");

  // two-body solve/sweep
  CLI::App* twob = app.add_subcommand("two-body", "heavy-light pair solver");
  CommonArgs tb_c;
  std::string tb_shape;
  double tb_v0 = -0.5, tb_tol = 1e-10;
  int tb_grid = 400;
  CLI::App* tb_solve = twob->add_subcommand("solve", "single bound state");
  tb_solve->add_option("--shape", tb_shape)->required();
  tb_solve->add_option("--v0", tb_v0)->required();
  tb_solve->add_option("--grid-n", tb_grid);
  tb_solve->add_option("--tol", tb_tol);
  add_common(tb_solve, tb_c);

  CommonArgs tw_c;
  std::string tw_shape;
  double tw_start = -0.08, tw_factor = 0.5, tw_tol = 1e-10;
  int tw_count = 5, tw_grid = 400;
  CLI::App* tb_sweep = twob->add_subcommand("sweep", "halving-sequence sweep");
  tb_sweep->add_option("--shape", tw_shape)->required();
  tb_sweep->add_option("--v0-start", tw_start)->required();
  tb_sweep->add_option("--v0-factor", tw_factor);
  tb_sweep->add_option("--v0-count", tw_count);
  tb_sweep->add_option("--grid-n", tw_grid);
  tb_sweep->add_option("--tol", tw_tol);
  add_common(tb_sweep, tw_c);

  // three-body contact/finite/verify-proof
  CLI::App* threeb = app.add_subcommand("three-body", "three-body solvers");
  CommonArgs c3_c;
  std::vector<double> c3_alpha{1.0};
  std::string c3_parity = "even", c3_grid = "48,48", c3_wf;
  int c3_states = 2;
  double c3_tol = 1e-9;
  CLI::App* c3 = threeb->add_subcommand("contact", "scale-invariant spectrum");
  c3->add_option("--alpha", c3_alpha);
  c3->add_option("--parity", c3_parity);
  c3->add_option("--grid", c3_grid, "NP,NK");
  c3->add_option("--states", c3_states);
  c3->add_option("--tol", c3_tol);
  c3->add_option("--export-wf", c3_wf, "wave-function table file");
  add_common(c3, c3_c);

  CommonArgs f3_c;
  std::string f3_shape, f3_parity = "even", f3_grid = "48,48";
  std::vector<double> f3_v0;
  double f3_alpha = 1.0, f3_tol = 1e-9;
  int f3_states = 1;
  bool f3_sweep = false;
  CLI::App* f3 = threeb->add_subcommand("finite", "finite-range spectrum");
  f3->add_option("--shape", f3_shape)->required();
  f3->add_option("--v0", f3_v0, "one or more couplings")->required();
  f3->add_option("--alpha", f3_alpha);
  f3->add_option("--parity", f3_parity);
  f3->add_option("--grid", f3_grid, "NP,NK");
  f3->add_option("--states", f3_states);
  f3->add_option("--tol", f3_tol);
  f3->add_flag("--sweep", f3_sweep, "emit sweep CSV with contact gaps");
  add_common(f3, f3_c);

  CommonArgs vp_c;
  std::string vp_shape = "mexican-hat", vp_parity = "even", vp_grid = "40,40";
  double vp_q0_start = 0.2, vp_q0_factor = 0.5, vp_box = 5.0, vp_alpha = 1.0;
  int vp_q0_count = 5;
  CLI::App* vp = threeb->add_subcommand(
      "verify-proof", "iterated-kernel limit diagnostics");
  vp->add_option("--shape", vp_shape);
  vp->add_option("--q0-start", vp_q0_start);
  vp->add_option("--q0-factor", vp_q0_factor);
  vp->add_option("--q0-count", vp_q0_count);
  vp->add_option("--box", vp_box);
  vp->add_option("--alpha", vp_alpha);
  vp->add_option("--parity", vp_parity);
  vp->add_option("--grid", vp_grid, "NP,NK");
  add_common(vp, vp_c);

  // oracle two-body / three-body
  CLI::App* oracle = app.add_subcommand("oracle", "coordinate-space oracles");
  CommonArgs o2_c;
  std::string o2_shape;
  std::vector<double> o2_v0;
  double o2_hx = 0.01, o2_extent = 40.0;
  int o2_levels = 3;
  CLI::App* o2 = oracle->add_subcommand("two-body", "1D finite differences");
  o2->add_option("--shape", o2_shape)->required();
  o2->add_option("--v0", o2_v0)->required();
  o2->add_option("--hx", o2_hx);
  o2->add_option("--extent", o2_extent);
  o2->add_option("--levels", o2_levels);
  add_common(o2, o2_c);

  CommonArgs o3_c;
  std::string o3_shape;
  std::vector<double> o3_v0;
  double o3_hx = 0.1, o3_ex = 20.0, o3_ey = 20.0, o3_alpha = 1.0;
  int o3_levels = 2, o3_states = 1;
  CLI::App* o3 = oracle->add_subcommand("three-body", "2D finite differences");
  o3->add_option("--shape", o3_shape)->required();
  o3->add_option("--v0", o3_v0)->required();
  o3->add_option("--alpha", o3_alpha);
  o3->add_option("--hx", o3_hx);
  o3->add_option("--extent-x", o3_ex);
  o3->add_option("--extent-y", o3_ey);
  o3->add_option("--levels", o3_levels);
  o3->add_option("--states", o3_states);
  add_common(o3, o3_c);

  CLI11_PARSE(app, argc, argv);
  fbu::set_thread_count(threads);

  auto parse_grid = [](const std::string& s, int& np, int& nk) {
    const auto comma = s.find(',');
    np = std::stoi(s.substr(0, comma));
    nk = comma == std::string::npos ? np : std::stoi(s.substr(comma + 1));
  };

  try {
    if (run->parsed()) return fbu::run_config_file(config_path, std::cout);

    if (shapes_list->parsed() || shapes->parsed()) {
      std::printf("%-22s %-9s %-22s %s\n", "name", "kind", "F(0)", "params");
      for (const auto& name : fbu::PotentialShape::catalog_names()) {
        const auto s = fbu::PotentialShape::make(name);
        const auto F0 = s.transform(0.0);
        std::string params;
        for (const auto& [k, v] : s.params())
          params += k + "=" + std::to_string(v) + " ";
        std::printf("%-22s %-9s %-22.15g %s\n", name.c_str(),
                    fbu::kind_name(s.kind()), F0.real(), params.c_str());
      }
      std::printf("(simd backend: %s)\n",
                  fbu::simd::backend_name(fbu::simd::active_backend()));
      return 0;
    }

    fbu::RunConfig rc;
    if (tb_solve->parsed()) {
      rc.mode = "two-body";
      rc.shape = tb_shape;
      rc.v0_list = {tb_v0};
      rc.grid_n = tb_grid;
      rc.tol = tb_tol;
      return finish(rc, tb_c, "two-body-solve");
    }
    if (tb_sweep->parsed()) {
      rc.mode = "two-body-sweep";
      rc.shape = tw_shape;
      rc.v0_list = geometric(tw_start, tw_factor, tw_count);
      rc.grid_n = tw_grid;
      rc.tol = tw_tol;
      return finish(rc, tw_c, "two-body-sweep");
    }
    if (c3->parsed()) {
      rc.mode = "three-body-contact";
      rc.alpha_list = c3_alpha;
      rc.parity = c3_parity;
      parse_grid(c3_grid, rc.grid_np, rc.grid_nk);
      rc.states = c3_states;
      rc.tol = c3_tol;
      rc.export_wavefunction = c3_wf;
      return finish(rc, c3_c, "three-body-contact");
    }
    if (f3->parsed()) {
      rc.mode = f3_sweep || f3_v0.size() > 1 ? "three-body-sweep"
                                             : "three-body-finite";
      rc.shape = f3_shape;
      rc.v0_list = f3_v0;
      rc.alpha_list = {f3_alpha};
      rc.parity = f3_parity;
      parse_grid(f3_grid, rc.grid_np, rc.grid_nk);
      rc.states = f3_states;
      rc.tol = f3_tol;
      return finish(rc, f3_c, "three-body-finite");
    }
    if (vp->parsed()) {
      rc.mode = "verify-proof";
      rc.shape = vp_shape;
      rc.q0_list = geometric(vp_q0_start, vp_q0_factor, vp_q0_count);
      rc.alpha_list = {vp_alpha};
      rc.parity = vp_parity;
      rc.box = vp_box;
      parse_grid(vp_grid, rc.grid_np, rc.grid_nk);
      return finish(rc, vp_c, "verify-proof");
    }
    if (o2->parsed()) {
      rc.mode = "oracle-two-body";
      rc.shape = o2_shape;
      rc.v0_list = o2_v0;
      rc.oracle_hx = o2_hx;
      rc.oracle_extent_x = o2_extent;
      rc.oracle_levels = o2_levels;
      return finish(rc, o2_c, "oracle-two-body");
    }
    if (o3->parsed()) {
      rc.mode = "oracle-three-body";
      rc.shape = o3_shape;
      rc.v0_list = o3_v0;
      rc.alpha_list = {o3_alpha};
      rc.oracle_hx = o3_hx;
      rc.oracle_extent_x = o3_ex;
      rc.oracle_extent_y = o3_ey;
      rc.oracle_levels = o3_levels;
      rc.states = o3_states;
      return finish(rc, o3_c, "oracle-three-body");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "no subcommand selected\n";
  return 2;
}
