#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "json.hpp"

#include "conntest/tester.hpp"

namespace conntest {

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

// Wilson score interval for a binomial proportion (95% by default).
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

// Runs body(i) for i in [0, count) on `threads` workers (0 = hardware).
// Rethrows the first exception after all workers stop.
void parallel_for(std::uint64_t count, int threads, const std::function<void(std::uint64_t)>& body);

struct TrialSpec {
  std::shared_ptr<const PixelSource> source;
  double eps = 1.0 / 16;
  TesterConfig config;  // eps and seed are overwritten per trial
  std::uint64_t root_seed = 0;
  std::uint64_t trials = 1;
  int threads = 0;
  bool verify = true;
};

struct TrialRecord {
  Decision decision = Decision::Accept;
  std::uint64_t queries = 0;
  std::vector<std::uint64_t> per_level;
  bool budget_exhausted = false;
  bool certificate_sound = true;
};

struct TrialSummary {
  std::uint64_t trials = 0;
  std::uint64_t rejections = 0;
  double rejection_rate = 0.0;
  Interval rejection_ci;
  double mean_queries = 0.0;
  std::uint64_t max_queries = 0;
  std::uint64_t min_queries = 0;
  std::vector<double> per_level_mean;
  std::uint64_t certificates_checked = 0;
  std::uint64_t certificates_sound = 0;
  std::uint64_t budget_exhausted = 0;
  int padded_side = 0;
  Eps eps = Eps::from_log2_inverse(1);
  double wall_seconds = 0.0;
  std::vector<TrialRecord> records;  // by trial index
};

// Trial i uses seed derive_seed(root_seed, i), so results do not depend on
// scheduling.
TrialSummary run_trials(const TrialSpec& spec);

nlohmann::json to_json(const TrialSummary& summary);

}  // namespace conntest
