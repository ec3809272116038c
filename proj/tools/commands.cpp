#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "morkit/h2norm.hpp"
#include "morkit/models.hpp"
#include "morkit/serialize.hpp"

namespace morkit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

FrequencyGrid make_grid(const RunConfig& cfg) {
  return FrequencyGrid::logspace(cfg.grid_min, cfg.grid_max, cfg.grid_points);
}

fs::path prepare_out(const RunConfig& cfg) {
  const fs::path dir = cfg.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::IoError, "output directory " + dir.string() + " is not usable");
  }
  return dir;
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

template <class F>
double median_seconds(int repetitions, F&& f) {
  f();
  std::vector<double> t;
  for (int i = 0; i < repetitions; ++i) {
    const auto start = std::chrono::steady_clock::now();
    f();
    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  std::sort(t.begin(), t.end());
  const std::size_t k = t.size();
  return k % 2 == 1 ? t[k / 2] : 0.5 * (t[k / 2 - 1] + t[k / 2]);
}

json level_errors(const FirstOrderSystem& fo, const FullGramians& full, const ReducedSecondOrderSystem& rom,
                  std::string& failure) {
  try {
    const NormReport nr = norm_report(fo, linearize(rom), full);
    return to_json(nr);
  } catch (const Error& e) {
    failure += std::string(to_string(rom.level)) + " level: " + e.what() + "; ";
    return {{"error", e.what()}};
  }
}

}  // namespace

void RunConfig::validate() const {
  if (som_n1.has_value() == manifest.has_value()) {
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --som-n1 and --manifest");
  }
  if (som_n1 && *som_n1 < 1) throw Error(ErrorCode::InvalidArgument, "--som-n1 must be at least 1");
  if (r < 1) throw Error(ErrorCode::InvalidArgument, "--order must be at least 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "--tol must be positive");
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "--max-iter must be at least 1");
  if (init != "logspaced" && init != "random") {
    throw Error(ErrorCode::InvalidArgument, "--init must be logspaced or random");
  }
  if (repetitions < 1) throw Error(ErrorCode::InvalidArgument, "--repetitions must be at least 1");
  make_grid(*this);
}

SecondOrderSystem load_system(const RunConfig& cfg) {
  if (cfg.som_n1) {
    SomParams p;
    p.n1 = *cfg.som_n1;
    return build_som(p);
  }
  return load_dataset(fs::path(*cfg.manifest));
}

IrkaOptions irka_options(const RunConfig& cfg) {
  IrkaOptions o;
  o.r = cfg.r;
  o.tol = cfg.tol;
  o.max_iter = cfg.max_iter;
  o.seed = cfg.seed;
  o.init = cfg.init == "random" ? ShiftInit::SeededRandom : ShiftInit::LogSpaced;
  return o;
}

SpmorResult reduce_system(const RunConfig& cfg, const SecondOrderSystem& sos) {
  if (cfg.r >= sos.n()) {
    throw Error(ErrorCode::InvalidArgument, "--order " + std::to_string(cfg.r) + " must be below the model order " +
                                                std::to_string(sos.n()));
  }
  const IrkaOptions opts = irka_options(cfg);
  return sos.inputs() == 1 && sos.outputs() == 1 ? spmor_siso(sos, opts) : spmor_mimo(sos, opts);
}

int cmd_reduce(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const fs::path dir = prepare_out(cfg);
  const SecondOrderSystem sos = load_system(cfg);
  const SpmorResult res = reduce_system(cfg, sos);
  write_spmor_result(dir, res);
  out << json{{"command", "reduce"},
              {"n", sos.n()},
              {"r", cfg.r},
              {"iterations", res.report.iterations},
              {"converged", res.report.converged},
              {"warnings", res.report.warnings},
              {"out", dir.string()}}
             .dump(2)
      << '\n';
  return res.report.converged ? kOk : kNotConverged;
}

int cmd_sigma(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const fs::path dir = prepare_out(cfg);
  const FrequencyGrid grid = make_grid(cfg);
  const SecondOrderSystem sos = load_system(cfg);
  const SpmorResult res = reduce_system(cfg, sos);
  std::string csv = "omega,sigma_full,sigma_pos,sigma_vel,abs_err_pos,abs_err_vel,rel_err_pos,rel_err_vel\n";
  double worst_pos = 0.0, worst_vel = 0.0;
  for (const double w : grid.points()) {
    const Complex s(0.0, w);
    DenseMatrixC g, gp, gv;
    try {
      g = tf_eval(sos, s);
      gp = tf_eval(res.position_rom, s);
      gv = tf_eval(res.velocity_rom, s);
    } catch (const Error& e) {
      throw Error(e.code(), "at omega = " + std::to_string(w) + ": " + e.message());
    }
    const double sf = sigma_max(g);
    const double ep = sigma_max(g - gp);
    const double ev = sigma_max(g - gv);
    csv += csv_number(w) + "," + csv_number(sf) + "," + csv_number(sigma_max(gp)) + "," +
           csv_number(sigma_max(gv)) + "," + csv_number(ep) + "," + csv_number(ev) + ",";
    if (sf > 0.0) {
      csv += csv_number(ep / sf) + "," + csv_number(ev / sf);
      worst_pos = std::max(worst_pos, ep / sf);
      worst_vel = std::max(worst_vel, ev / sf);
    } else {
      csv += ",";
    }
    csv += "\n";
  }
  write_text_file(dir / "sigma.csv", csv);
  out << json{{"command", "sigma"},
              {"rows", grid.size()},
              {"converged", res.report.converged},
              {"max_rel_err_pos", worst_pos},
              {"max_rel_err_vel", worst_vel},
              {"out", (dir / "sigma.csv").string()}}
             .dump(2)
      << '\n';
  return res.report.converged ? kOk : kNotConverged;
}

int cmd_h2err(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  const fs::path dir = prepare_out(cfg);
  const SecondOrderSystem sos = load_system(cfg);
  const SpmorResult res = reduce_system(cfg, sos);
  const FirstOrderSystem fo = linearize(sos);
  const DenseLimits limits = default_limits();
  const FullGramians full = solve_full_gramians(fo, limits);
  const H2NormResult h2 = h2_norm_full(fo, full);
  std::string failure;
  const json pos = level_errors(fo, full, res.position_rom, failure);
  const json vel = level_errors(fo, full, res.velocity_rom, failure);
  auto pair = [](const json& level) -> json {
    if (level.contains("error")) return nullptr;
    return {{"P", level["h2_error_P"]}, {"Q", level["h2_error_Q"]}};
  };
  const json report = {{"h2_full", h2.norm},
                       {"h2_full_dual", h2.norm_dual},
                       {"h2_position_error", pair(pos)},
                       {"h2_velocity_error", pair(vel)},
                       {"position", pos},
                       {"velocity", vel},
                       {"residuals", full.residuals},
                       {"converged", res.report.converged},
                       {"iterations", res.report.iterations}};
  write_text_file(dir / "h2err.json", report.dump(2) + "\n");
  out << report.dump(2) << '\n';
  if (!failure.empty()) {
    err << "morkit: error: " << failure << '\n';
    return kError;
  }
  return res.report.converged ? kOk : kNotConverged;
}

int cmd_speedup(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const fs::path dir = prepare_out(cfg);
  const FrequencyGrid grid = make_grid(cfg);
  const SecondOrderSystem sos = load_system(cfg);
  const SpmorResult res = reduce_system(cfg, sos);
  const double t_full = median_seconds(cfg.repetitions, [&] { return sigma_sweep(sos, grid); });
  const double t_rom = median_seconds(cfg.repetitions, [&] { return sigma_sweep(res.position_rom, grid); });
  const json report = {{"dim_full", sos.n()},
                       {"dim_rom", res.position_rom.n()},
                       {"t_full", t_full},
                       {"t_rom", t_rom},
                       {"speedup", t_rom > 0.0 ? t_full / t_rom : 0.0},
                       {"grid_points", grid.size()},
                       {"repetitions", cfg.repetitions}};
  write_text_file(dir / "speedup.json", report.dump(2) + "\n");
  out << report.dump(2) << '\n';
  return res.report.converged ? kOk : kNotConverged;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structure-preserving H2-optimal model reduction of second-order systems"};
  app.require_subcommand(1, 1);
  RunConfig cfg;
  Index n1 = 0;
  std::string manifest;

  auto add_common = [&](CLI::App* sub, bool uses_grid) {
    auto* som = sub->add_option("--som-n1", n1, "Build the oscillator benchmark with n1 masses per chain");
    auto* man = sub->add_option("--manifest", manifest, "JSON manifest of M, D, K, H, L Matrix Market files");
    som->excludes(man);
    sub->add_option("-r,--order", cfg.r, "Reduced order")->required();
    sub->add_option("--tol", cfg.tol, "Relative shift-change tolerance")->capture_default_str();
    sub->add_option("--max-iter", cfg.max_iter, "Iteration limit")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Seed for --init random")->capture_default_str();
    sub->add_option("--init", cfg.init, "Initial shifts: logspaced or random")->capture_default_str();
    sub->add_option("--out", cfg.out, "Output directory")->capture_default_str();
    if (uses_grid) {
      sub->add_option("--grid-min", cfg.grid_min, "Lowest frequency (rad/s)")->capture_default_str();
      sub->add_option("--grid-max", cfg.grid_max, "Highest frequency (rad/s)")->capture_default_str();
      sub->add_option("--grid-points", cfg.grid_points, "Number of log-spaced frequencies")->capture_default_str();
    }
  };
  CLI::App* reduce = app.add_subcommand("reduce", "Reduce and write position/velocity models");
  add_common(reduce, false);
  CLI::App* sigma = app.add_subcommand("sigma", "Sigma plot data of the full and reduced models");
  add_common(sigma, true);
  CLI::App* h2err = app.add_subcommand("h2err", "H2 norms of the reduction errors");
  add_common(h2err, false);
  CLI::App* speedup = app.add_subcommand("speedup", "Time sigma sweeps of the full and reduced models");
  add_common(speedup, true);
  speedup->add_option("--repetitions", cfg.repetitions, "Timed repetitions (median reported)")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "morkit: " << e.what() << '\n';
    if (const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << sub->help();
    }
    return kError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  if (chosen->count("--som-n1") > 0) cfg.som_n1 = n1;
  if (chosen->count("--manifest") > 0) cfg.manifest = manifest;
  try {
    if (cfg.command == "reduce") return cmd_reduce(cfg, out);
    if (cfg.command == "sigma") return cmd_sigma(cfg, out);
    if (cfg.command == "h2err") return cmd_h2err(cfg, out, err);
    return cmd_speedup(cfg, out);
  } catch (const IrkaError& e) {
    err << "morkit: error in iteration " << e.iteration() << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "morkit: error: " << e.what() << '\n';
  }
  return kError;
}

}  // namespace morkit::cli
