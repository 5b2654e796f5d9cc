// Command line front end: solve / converge / periodic / oracle-check /
// simulate / couple, driven by a single JSON experiment config.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zdq/commands.hpp"
#include "zdq/parallel.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;  // overrides config when set
  std::int64_t seed = -1;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment config file")->required();
  cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
  cmd->add_option("--seed", args.seed, "seed override");
  cmd->add_option("--threads", args.threads, "worker threads (or ZDQ_THREADS)");
}

zdq::ExperimentConfig load(const CommonArgs& args) {
  zdq::ExperimentConfig cfg = zdq::load_config(args.config_path);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
  int threads = args.threads;
  if (threads == 0) {
    if (const char* env = std::getenv("ZDQ_THREADS")) threads = std::atoi(env);
  }
  zdq::set_thread_count(threads);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-delay quantizer design and evaluation"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string triplet_path;
  std::vector<double> epsilons;

  CLI::App* solve = app.add_subcommand("solve", "solve the average-cost problem");
  add_common(solve, args);

  CLI::App* converge = app.add_subcommand("converge", "finite-horizon gap per horizon");
  add_common(converge, args);
  converge->add_option("--triplet", triplet_path, "triplet file (default <out>/triplet.json)");

  CLI::App* periodic = app.add_subcommand("periodic", "periodic policy report");
  add_common(periodic, args);
  periodic->add_option("--triplet", triplet_path, "triplet file (default <out>/triplet.json)");
  periodic->add_option("--epsilon", epsilons, "target optimality gap (repeatable)")->required();

  CLI::App* oracle = app.add_subcommand("oracle-check", "belief DP vs exhaustive table search");
  add_common(oracle, args);

  CLI::App* simulate = app.add_subcommand("simulate", "run codec sessions");
  add_common(simulate, args);
  simulate->add_option("--triplet", triplet_path, "triplet file (default <out>/triplet.json)");

  CLI::App* couple = app.add_subcommand("couple", "coupling constants only");
  add_common(couple, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    zdq::ExperimentConfig cfg = load(args);
    const std::string out = cfg.out_dir;
    if (triplet_path.empty()) triplet_path = out + "/triplet.json";

    if (solve->parsed()) {
      zdq::cmd_solve(cfg, out);
    } else if (converge->parsed()) {
      zdq::CanonicalTriplet triplet = zdq::load_triplet(triplet_path);
      zdq::CouplingReport coupling = zdq::make_coupling_report(cfg.model, cfg.distortion);
      auto rows = zdq::cmd_converge(cfg, triplet, coupling, out);
      for (const auto& r : rows)
        std::cout << "T=" << r.horizon << " J_T=" << zdq::fmt_g12(r.value)
                  << " scaled_gap=" << zdq::fmt_g12(r.scaled_gap)
                  << " K=" << zdq::fmt_g12(r.k) << (r.monte_carlo ? " (mc)" : "") << "\n";
    } else if (periodic->parsed()) {
      zdq::CanonicalTriplet triplet = zdq::load_triplet(triplet_path);
      zdq::CouplingReport coupling = zdq::make_coupling_report(cfg.model, cfg.distortion);
      std::vector<zdq::PeriodicRow> rows;
      for (double eps : epsilons) {
        rows.push_back(zdq::cmd_periodic(cfg, triplet, coupling, eps));
        const auto& r = rows.back();
        std::cout << "epsilon=" << zdq::fmt_g12(r.epsilon) << " period=" << r.period
                  << " cost=" << zdq::fmt_g12(r.cost)
                  << " margin=" << zdq::fmt_g12(r.margin) << "\n";
      }
      zdq::write_periodic_csv(rows, out);
    } else if (oracle->parsed()) {
      zdq::cmd_oracle_check(cfg, out);
    } else if (simulate->parsed()) {
      zdq::CanonicalTriplet triplet = zdq::load_triplet(triplet_path);
      auto result = zdq::cmd_simulate(cfg, triplet, out);
      std::cout << "mean=" << zdq::fmt_g12(result.mean)
                << " se=" << zdq::fmt_g12(result.standard_error) << "\n";
    } else if (couple->parsed()) {
      zdq::cmd_couple(cfg, out);
    }
  } catch (const zdq::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
