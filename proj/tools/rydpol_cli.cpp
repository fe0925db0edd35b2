#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rydpol/errors.hpp"
#include "rydpol/pipeline.hpp"

using namespace rydpol;

int main(int argc, char** argv) {
  CLI::App app{"Few-photon Rydberg polariton simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::optional<int> threads;
  std::optional<std::string> precision;
  std::optional<double> od;
  std::optional<int> grid;

  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads (default: RYDPOL_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--precision", precision, "binary field precision")->check(CLI::IsMember({"c64", "c128"}));
  app.add_option("--od", od, "override the optical depth")->check(CLI::NonNegativeNumber);
  app.add_option("--grid", grid, "override the number of grid points per axis")->check(CLI::Range(3, 4096));

  for (const auto& mode : run_modes()) app.add_subcommand(mode, "run the " + mode + " pipeline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    else cfg = parse_config(json::object());
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }

  cfg.mode = app.get_subcommands().front()->get_name();
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (precision) cfg.precision = parse_precision(*precision);
  if (od) cfg.medium.od = *od;
  if (grid) {
    cfg.n_points = *grid;
    cfg.scan.n_points = *grid;
  }
  if (threads) {
    cfg.threads = *threads;
  } else if (cfg.threads == 0) {
    if (const char* env = std::getenv("RYDPOL_THREADS")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v < 1) {
        std::cerr << "config error: RYDPOL_THREADS must be a positive integer\n";
        return kExitConfig;
      }
      cfg.threads = static_cast<int>(v);
    }
  }

  RunOutcome r = run(cfg);
  for (const auto& a : r.artifacts) std::cout << (cfg.out_dir / a).string() << '\n';
  if (r.exit_code != kExitOk) std::cerr << cfg.mode << ": " << r.message << '\n';
  return r.exit_code;
}
