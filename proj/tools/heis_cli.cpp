// Experiment CLI: runs the desk-scale verification sweeps and writes their
// reports as CSV. Exit code 0 when every row passes, 1 when any row fails,
// 2 on configuration errors.

#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <string>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "heis/heis.hpp"

namespace {

int run_and_emit(const heis::ExperimentConfig& cfg, const std::string& name,
                 const std::function<heis::ExperimentReport(const heis::ExperimentConfig&)>& runner,
                 const std::string& out_path) {
  const heis::ExperimentReport rep = runner(cfg);
  heis::emit_csv(rep, out_path);
  std::size_t failures = 0;
  for (const auto& row : rep.rows)
    if (!row.pass) ++failures;
  std::printf("%s: %zu rows, %zu failures, wrote %s (%s)\n", name.c_str(),
              rep.rows.size(), failures, out_path.c_str(), rep.provenance.c_str());
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heis - Heisenberg group harmonic analysis experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  int threads = 0;
  long long seed = -1;
  app.add_option("--config", config_path, "JSON config file (defaults used when absent)");
  app.add_option("--out", out_path, "output CSV path (overrides config output_path)");
  app.add_option("--threads", threads, "OpenMP thread count (0 = runtime default)");
  app.add_option("--seed", seed, "seed override for the test-field family");

  std::map<std::string, std::function<heis::ExperimentReport(const heis::ExperimentConfig&)>>
      runners = {
          {"plancherel", heis::run_plancherel},
          {"converge", heis::run_convergence},
          {"square-scaling", heis::run_square_scaling},
          {"kernel-decay", heis::run_kernel_decay},
          {"decomp", heis::run_decomposition},
          {"all", heis::run_all},
      };
  for (auto& [name, fn] : runners)
    app.add_subcommand(name, "run the " + name + " experiment");

  CLI11_PARSE(app, argc, argv);

  heis::ExperimentConfig cfg;
  try {
    cfg = config_path.empty() ? heis::ExperimentConfig::defaults()
                              : heis::load_config(config_path);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (!out_path.empty()) cfg.output_path = out_path;
    cfg.validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    return run_and_emit(cfg, name, runners.at(name), cfg.output_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  }
}
