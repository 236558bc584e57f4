#include <iostream>

#include <CLI11.hpp>

#include "dilatree/cli.hpp"

int main(int argc, char** argv) {
  dilatree::CommandConfig cfg;
  CLI::App app{"Exact dilation toolkit and PARTITION gadget generator"};
  app.require_subcommand(1);

  auto precision = [&cfg](CLI::App* sub) {
    sub->add_option("--bits", cfg.start_bits, "starting precision in bits")->check(CLI::Range(8, 1 << 20));
    sub->add_option("--max-bits", cfg.max_bits, "precision cap (default 4096 or DILATREE_MAX_BITS)")
        ->check(CLI::Range(8, 1 << 20));
  };

  CLI::App* gen = app.add_subcommand("gen", "build the gadget for a PARTITION instance");
  gen->add_option("--alphas", cfg.alphas, "positive integers")->delimiter(',')->required();
  gen->add_option("--d-bits", cfg.d_bits, "accuracy of the d points (default k+8)");
  gen->add_option("-k", cfg.k, "fractional bits kept before scaling (default: smallest admissible)");
  gen->add_flag("--gadget", cfg.gadget, "write rational coordinates instead of the integer instance");
  gen->add_option("-o,--output", cfg.output, "output file (default stdout)");

  CLI::App* verify = app.add_subcommand("verify", "check the structural claims of a gadget or instance");
  verify->add_option("-i,--input", cfg.input)->required();
  verify->add_option("-o,--output", cfg.output, "JSON report");

  CLI::App* decide = app.add_subcommand("decide", "decide PARTITION through the gadget trees");
  decide->add_option("-i,--input", cfg.input)->required();
  decide->add_option("-o,--output", cfg.output, "solution file");
  precision(decide);

  CLI::App* dil = app.add_subcommand("dilation", "certified dilation of a tree");
  dil->add_option("-i,--input", cfg.input, "points file")->required();
  dil->add_option("-t,--tree", cfg.tree, "edges file")->required();
  dil->add_option("--threshold", cfg.threshold, "P/Q");
  dil->add_option("-o,--output", cfg.output, "JSON report");
  precision(dil);

  CLI::App* mdst = app.add_subcommand("mdst", "exact minimum-dilation tree, path or tour");
  mdst->add_option("-i,--input", cfg.input, "points file")->required();
  mdst->add_option("--mode", cfg.mode)->check(CLI::IsMember({"tree", "path", "tour"}));
  mdst->add_flag("--crossing-free", cfg.crossing_free);
  mdst->add_option("--require", cfg.required, "edges u-v that must be used")->delimiter(',');
  mdst->add_option("--max-points", cfg.max_points);
  mdst->add_flag("--no-bnb", cfg.no_branch_and_bound, "plain enumeration");
  mdst->add_option("-o,--output", cfg.output, "result file");
  precision(mdst);

  CLI::App* oracle = app.add_subcommand("oracle", "PARTITION by dynamic programming");
  oracle->add_option("--alphas", cfg.alphas)->delimiter(',')->required();
  oracle->add_option("-o,--output", cfg.output);

  CLI::App* w5 = app.add_subcommand("witness5", "search five-point sets whose best tree must cross");
  w5->add_option("--seed", cfg.seed);
  w5->add_option("--budget", cfg.budget, "candidate sets to try");
  w5->add_option("-o,--output", cfg.output);
  precision(w5);

  CLI::App* svg = app.add_subcommand("svg", "draw points and edges");
  svg->add_option("-i,--input", cfg.input, "points file")->required();
  svg->add_option("-t,--tree", cfg.tree, "edges file");
  svg->add_option("-o,--output", cfg.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : dilatree::kUsage;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  return dilatree::run(cfg, std::cout, std::cerr);
}
