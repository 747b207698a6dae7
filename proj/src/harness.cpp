#include "conntest/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace conntest {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double center = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

void parallel_for(std::uint64_t count, int threads, const std::function<void(std::uint64_t)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), std::max<std::uint64_t>(count, 1)));
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

TrialSummary run_trials(const TrialSpec& spec) {
  const auto started = std::chrono::steady_clock::now();
  const auto norm = normalize(spec.source->side(), spec.eps);
  check_premise(norm.padded_side, norm.eps);
  const auto mode = spec.config.variant == Variant::Adaptive ? OracleMode::Adaptive : OracleMode::Nonadaptive;

  TrialSummary s;
  s.trials = spec.trials;
  s.padded_side = norm.padded_side;
  s.eps = norm.eps;
  s.records.resize(static_cast<std::size_t>(spec.trials));
  parallel_for(spec.trials, spec.threads, [&](std::uint64_t i) {
    PixelOracle oracle(spec.source, mode, norm.padded_side, LogPolicy::CountOnly);
    TesterConfig config = spec.config;
    config.eps = norm.eps;
    config.seed = derive_seed(spec.root_seed, i);
    const Verdict v = test_connectedness(oracle, config);
    auto& r = s.records[static_cast<std::size_t>(i)];
    r.decision = v.decision;
    r.queries = v.queries.total;
    r.per_level = v.queries.per_level;
    r.budget_exhausted = v.budget_exhausted;
    if (spec.verify && v.decision == Decision::Reject) r.certificate_sound = verify_certificate(*spec.source, v);
  });

  double sum = 0.0;
  s.per_level_mean.assign(static_cast<std::size_t>(norm.eps.levels()), 0.0);
  s.min_queries = s.records.empty() ? 0 : s.records.front().queries;
  for (const auto& r : s.records) {
    sum += static_cast<double>(r.queries);
    s.max_queries = std::max(s.max_queries, r.queries);
    s.min_queries = std::min(s.min_queries, r.queries);
    for (std::size_t l = 0; l < r.per_level.size(); ++l) s.per_level_mean[l] += static_cast<double>(r.per_level[l]);
    if (r.budget_exhausted) ++s.budget_exhausted;
    if (r.decision == Decision::Reject) {
      ++s.rejections;
      if (spec.verify) {
        ++s.certificates_checked;
        if (r.certificate_sound) ++s.certificates_sound;
      }
    }
  }
  const double trials = static_cast<double>(std::max<std::uint64_t>(spec.trials, 1));
  s.mean_queries = sum / trials;
  for (auto& v : s.per_level_mean) v /= trials;
  s.rejection_rate = static_cast<double>(s.rejections) / trials;
  s.rejection_ci = wilson_interval(s.rejections, spec.trials);
  s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return s;
}

nlohmann::json to_json(const TrialSummary& s) {
  return {{"trials", s.trials},
          {"rejections", s.rejections},
          {"rejectionRate", s.rejection_rate},
          {"rejectionWilson95", {s.rejection_ci.low, s.rejection_ci.high}},
          {"meanQueries", s.mean_queries},
          {"maxQueries", s.max_queries},
          {"minQueries", s.min_queries},
          {"perLevelMeanQueries", s.per_level_mean},
          {"certificatesChecked", s.certificates_checked},
          {"certificatesSound", s.certificates_sound},
          {"budgetExhausted", s.budget_exhausted},
          {"paddedSide", s.padded_side},
          {"eps", s.eps.to_string()}};
}

}  // namespace conntest
