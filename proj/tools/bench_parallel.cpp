// Benchmark of the OpenMP-parallel paths against their serial references:
// the blocked Monte Carlo interval-expectation kernel and the multi-seed
// experiment sweep. Both pairs must agree exactly; the table reports wall
// times and speedup.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "riskrl/harness/config.hpp"
#include "riskrl/harness/runner.hpp"
#include "riskrl/quantile_dist.hpp"

using namespace riskrl;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
#ifdef _OPENMP
  const int max_threads = omp_get_max_threads();
#else
  const int max_threads = 1;
#endif
  std::printf("hardware threads available: %d\n\n", max_threads);

  {
    Rng rng(1234);
    std::vector<double> values(8);
    for (auto& v : values) v = rng.uniform(-5.0, 5.0);
    const QuantileDistribution dist(std::move(values));
    const RiskInterval interval(0.1, 0.8);
    const std::size_t samples = 20'000'000;

    auto t0 = std::chrono::steady_clock::now();
    const double serial = mc_interval_expectation_blocked(dist, interval, samples, 99, false);
    const double serial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const double parallel = mc_interval_expectation_blocked(dist, interval, samples, 99, true);
    const double parallel_s = seconds_since(t0);

    std::printf("mc_interval_expectation_blocked, %zu samples\n", samples);
    std::printf("  serial   %8.3f s   estimate % .12f\n", serial_s, serial);
    std::printf("  openmp   %8.3f s   estimate % .12f\n", parallel_s, parallel);
    std::printf("  speedup  %8.2fx   bitwise equal: %s\n\n", serial_s / parallel_s,
                serial == parallel ? "yes" : "NO");
  }

  {
    harness::ExperimentConfig cfg;
    cfg.env = "kiting";
    cfg.risk_mode = "sched-neutral";
    cfg.schedule_steps = 2'000;
    cfg.eps_steps = 2'000;
    cfg.total_steps = 5'000;
    cfg.eval_interval = 2'500;
    cfg.eval_episodes = 8;
    cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8};
    cfg.write_checkpoints = false;

    const auto dir = std::filesystem::temp_directory_path() / "riskrl_bench";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);

    cfg.out_dir = (dir / "serial").string();
    cfg.threads = 1;
    auto t0 = std::chrono::steady_clock::now();
    harness::run_experiment(cfg);
    const double serial_s = seconds_since(t0);
    const std::string serial_csv = slurp(harness::csv_path(cfg));

    cfg.out_dir = (dir / "parallel").string();
    cfg.threads = 0;  // all hardware threads
    t0 = std::chrono::steady_clock::now();
    harness::run_experiment(cfg);
    const double parallel_s = seconds_since(t0);
    const std::string parallel_csv = slurp(harness::csv_path(cfg));

    std::printf("run_experiment sweep, %zu seeds x %llu steps (%s)\n", cfg.seeds.size(),
                static_cast<unsigned long long>(cfg.total_steps), cfg.env.c_str());
    std::printf("  serial   %8.3f s\n", serial_s);
    std::printf("  openmp   %8.3f s\n", parallel_s);
    std::printf("  speedup  %8.2fx   identical CSV: %s\n", serial_s / parallel_s,
                serial_csv == parallel_csv && !serial_csv.empty() ? "yes" : "NO");
    std::filesystem::remove_all(dir);
  }
  return 0;
}
