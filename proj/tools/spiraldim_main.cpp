// spiraldim: orbits, epsilon-neighbourhood dimensions and scenario checks
// for discrete spiral trajectories.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spiraldim/commands.hpp"
#include "spiraldim/errors.hpp"

using namespace spiraldim;

int main(int argc, char** argv) {
  CLI::App app{"Box dimension of spiral trajectories near Neimark-Sacker and Hopf points"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string format = "csv";
  bool quiet = false;

  app.add_option("-c,--config", config_path, "run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("-o,--out", out_dir, "output directory");
  app.add_option("--seed", seed, "MonteCarlo seed (overrides the config)");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "table format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("-q,--quiet", quiet, "do not list written files");

  auto* simulate = app.add_subcommand("simulate", "iterate the map, write the orbit");
  auto* boxdim = app.add_subcommand("boxdim", "epsilon-area ladder and dimension fit");
  auto* overlap = app.add_subcommand("overlap", "overlap sequences and ordering regime");
  auto* classify = app.add_subcommand("classify", "compare the estimate with the scenario");
  auto* cm = app.add_subcommand("centermanifold", "centre-manifold reduction of a planar map");
  auto* hopf = app.add_subcommand("hopfmap", "unit-time map of the Hopf flow");
  auto* sweep = app.add_subcommand("sweep", "orbits over a parameter family");
  // global options may come after the subcommand too
  app.fallthrough();

  CLI11_PARSE(app, argc, argv);

  CliOverrides o;
  o.seed = seed;
  o.threads = threads;
  o.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  o.out_dir = out_dir;

  std::optional<RunConfig> rc;
  try {
    rc = load_run_config(config_path, o);
    std::vector<std::string> files;
    if (simulate->parsed()) files = cmd_simulate(*rc);
    else if (boxdim->parsed()) files = cmd_boxdim(*rc);
    else if (overlap->parsed()) files = cmd_overlap(*rc);
    else if (classify->parsed()) files = cmd_classify(*rc);
    else if (cm->parsed()) files = cmd_centermanifold(*rc);
    else if (hopf->parsed()) files = cmd_hopfmap(*rc);
    else if (sweep->parsed()) files = cmd_sweep(*rc);
    if (!quiet)
      for (const auto& f : files) std::cout << f << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const RefusedError& e) {
    // cmd_classify already wrote the refusal; other commands have not
    if (rc && !classify->parsed()) write_refusal(*rc, e.what());
    std::cerr << "refused: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
