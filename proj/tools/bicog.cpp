#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bicog/csvio.hpp"
#include "bicog/experiment.hpp"
#include "bicog/theory.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bi-consistency-guided ensemble self-training"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "machine"}));

  // run <config>
  auto* run_cmd = app.add_subcommand("run", "execute an experiment config");
  std::string config_path;
  std::string out_override;
  run_cmd->add_option("config", config_path, "config file (json)")->required();
  run_cmd->add_option("--out", out_override, "output directory override");

  // pac
  auto* pac_cmd = app.add_subcommand("pac", "PAC sample-complexity bound");
  double pac_eps = 0.1, pac_eta = 0.0, pac_delta = 0.05;
  long pac_f = 100;
  pac_cmd->add_option("--epsilon", pac_eps, "target error")->required();
  pac_cmd->add_option("--eta", pac_eta, "noise ratio")->required();
  pac_cmd->add_option("--hypotheses", pac_f, "|F|")->required();
  pac_cmd->add_option("--delta", pac_delta, "confidence")->required();

  // lemma
  auto* lemma_cmd = app.add_subcommand("lemma", "improvement condition check");
  double le_t = 0.1, le_prev = 0.2;
  long ll_t = 150, ll_prev = 100, l_labeled = 0;
  lemma_cmd->add_option("--e", le_t, "current vote error")->required();
  lemma_cmd->add_option("--e-prev", le_prev, "previous vote error")->required();
  lemma_cmd->add_option("--l", ll_t, "current pseudo-label count")->required();
  lemma_cmd->add_option("--l-prev", ll_prev, "previous count")->required();
  lemma_cmd->add_option("--labeled", l_labeled, "labeled count (for witnesses)");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo vote error");
  std::vector<double> sim_p;
  int sim_c = 2;
  long sim_trials = 100000;
  std::uint64_t sim_seed = 1;
  sim_cmd->add_option("--p", sim_p, "peer accuracies")->required();
  sim_cmd->add_option("--classes", sim_c, "number of classes")->required();
  sim_cmd->add_option("--trials", sim_trials, "trials");
  sim_cmd->add_option("--seed", sim_seed, "rng seed");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic dataset csv");
  bicog::GeneratorParams gp;
  std::string gen_out = "dataset.csv";
  std::uint64_t gen_seed = 1;
  gen_cmd->add_option("generator", gp.name, "blobs|rings|biased_blobs")->required();
  gen_cmd->add_option("--classes", gp.num_classes, "classes");
  gen_cmd->add_option("--dim", gp.dim, "feature dimension");
  gen_cmd->add_option("--per-class", gp.train_per_class, "pool size per class");
  gen_cmd->add_option("--test-per-class", gp.test_per_class, "test per class");
  gen_cmd->add_option("--separation", gp.separation, "class separation");
  gen_cmd->add_option("--noise", gp.noise, "within-class noise");
  gen_cmd->add_option("--bias-skew", gp.bias_skew, "class-0 size multiplier");
  gen_cmd->add_option("--seed", gen_seed, "rng seed");
  gen_cmd->add_option("--out", gen_out, "output csv path");

  // let --format appear after a subcommand name as well
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }
  const bool machine = format == "machine";

  try {
    if (*run_cmd) {
      bicog::ExperimentConfig cfg = bicog::ExperimentConfig::load(config_path);
      if (!out_override.empty()) {
        cfg.output_dir = out_override;
      } else if (const char* env = std::getenv("BICOG_OUT")) {
        cfg.output_dir = std::string(env) + "/" + cfg.output_dir;
      }
      cfg.validate();
      const bicog::ExperimentResult result = bicog::run_experiment(cfg, true);
      if (machine) {
        std::cout << result.aggregate_payload;
      } else {
        std::cout << "seeds: " << result.seeds.size() << "\n";
        for (const auto& s : result.seeds)
          std::cout << "  seed " << s.seed << ": baseline "
                    << fmt(s.baseline_accuracy) << " -> final "
                    << fmt(s.final_accuracy) << " (" << s.history.size()
                    << " rounds)\n";
        std::cout << "reports written to " << cfg.output_dir << "\n";
      }
      return kExitOk;
    }
    if (*pac_cmd) {
      const long m =
          bicog::theory::pac_sample_bound(pac_eps, pac_eta, pac_f, pac_delta);
      if (machine)
        std::cout << "{\"epsilon\":" << fmt(pac_eps) << ",\"eta\":"
                  << fmt(pac_eta) << ",\"hypotheses\":" << pac_f
                  << ",\"delta\":" << fmt(pac_delta) << ",\"m\":" << m << "}\n";
      else
        std::cout << "pac bound: epsilon=" << pac_eps << " eta=" << pac_eta
                  << " |F|=" << pac_f << " delta=" << pac_delta << " -> m = "
                  << m << "\n";
      return kExitOk;
    }
    if (*lemma_cmd) {
      const bool holds = bicog::theory::lemma1_holds(le_t, le_prev, ll_t, ll_prev);
      const auto suff = bicog::theory::sufficient_condition_holds(
          le_t, le_prev, ll_t, ll_prev, l_labeled);
      if (machine)
        std::cout << "{\"e\":" << fmt(le_t) << ",\"e_prev\":" << fmt(le_prev)
                  << ",\"l\":" << ll_t << ",\"l_prev\":" << ll_prev
                  << ",\"lemma1\":" << (holds ? "true" : "false")
                  << ",\"sufficient\":" << (suff.holds ? "true" : "false")
                  << ",\"witness_current\":" << fmt(suff.witness_current)
                  << ",\"witness_previous\":" << fmt(suff.witness_previous)
                  << "}\n";
      else
        std::cout << "lemma1(" << le_t << ", " << le_prev << ", " << ll_t
                  << ", " << ll_prev << ") -> "
                  << (holds ? "true" : "false") << " (sufficient condition: "
                  << (suff.holds ? "true" : "false") << ")\n";
      return kExitOk;
    }
    if (*sim_cmd) {
      const auto res =
          bicog::theory::mc_vote_error(sim_p, sim_c, sim_trials, sim_seed);
      if (machine)
        std::cout << "{\"trials\":" << res.trials << ",\"accepted\":"
                  << res.accepted << ",\"acceptance_rate\":"
                  << fmt(res.acceptance_rate) << ",\"conditional_error\":"
                  << fmt(res.conditional_error) << "}\n";
      else
        std::cout << "vote simulation: acceptance " << res.acceptance_rate
                  << ", conditional error " << res.conditional_error << " ("
                  << res.accepted << "/" << res.trials << " accepted)\n";
      return kExitOk;
    }
    if (*gen_cmd) {
      const bicog::GeneratedData data = bicog::generate_dataset(gp, gen_seed);
      bicog::write_csv(gen_out, data.pool, data.test);
      if (!machine)
        std::cout << "wrote " << data.pool.size() << " pool + "
                  << data.test.size() << " test rows to " << gen_out << "\n";
      return kExitOk;
    }
  } catch (const bicog::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const bicog::MissingColumn& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
