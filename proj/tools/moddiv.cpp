// moddiv: community detection by divisive edge removal with modularity
// refinement. See README.md for the subcommands and output formats.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "moddiv/commands.hpp"

int main(int argc, char** argv) {
  using namespace moddiv;
  CLI::App app{"Divisive community detection (CCR / CCR-EBR)", "moddiv"};
  app.require_subcommand(1);

  RunManifest m;
  bool no_timestamps = false;
  auto common = [&](CLI::App* sub, bool with_algo) {
    sub->add_option("--input", m.input, "Input graph (detect, measures) or dataset directory (bench)");
    sub->add_option("--format", m.format, "gml or edgelist; default by file extension");
    if (with_algo) {
      sub->add_option("--algo", m.algorithm, "ccr or ccr-ebr");
      sub->add_option("--refine-max-passes", m.refine_max_passes, "Refinement pass limit");
    }
    sub->add_option("--measure", m.measure, "g3 or g4 (measures also takes betweenness)");
    sub->add_option("--out-dir", m.out_dir, "Directory for output files");
    sub->add_flag("--no-timestamps", no_timestamps, "Leave timestamps and timings out of output files");
  };

  auto* detect = app.add_subcommand("detect", "Detect communities in one graph");
  common(detect, true);
  auto* bench = app.add_subcommand("bench", "Run the reference datasets and compare Q");
  common(bench, true);
  bench->add_flag("--strict", m.strict, "Exit 4 unless every dataset is present and passes");
  auto* measures = app.add_subcommand("measures", "Dump per-edge scores as TSV");
  common(measures, false);

  auto* verify = app.add_subcommand("verify", "Check the fast code against the reference oracles");
  oracle::SuiteOptions opt;
  std::string fault;
  verify->add_option("--seed", opt.seed, "Seed for generated cases");
  verify->add_option("--inject-fault", fault, "Deliberately break a component (moveq-sign)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code::config_error;
  }
  m.timestamps = !no_timestamps;

  try {
    if (detect->parsed()) return cmd_detect(m, std::cout, std::cerr);
    if (bench->parsed()) return cmd_bench(m, std::cout, std::cerr);
    if (measures->parsed()) return cmd_measures(m, std::cout, std::cerr);
    if (verify->parsed()) {
      if (fault == "moveq-sign") {
        opt.flip_moveq_sign = true;
      } else if (!fault.empty()) {
        std::cerr << "error: unknown fault '" << fault << "'\n";
        return exit_code::config_error;
      }
      return cmd_verify(opt, std::cout, std::cerr);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::config_error;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::input_error;
  }
  return exit_code::failure;
}
