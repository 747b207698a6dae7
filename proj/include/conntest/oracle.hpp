#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "conntest/image.hpp"

namespace conntest {

enum class OracleMode { Adaptive, Nonadaptive };

// Full keeps one log entry per answered query. CountOnly keeps the counter
// only; large sweeps use it because the log of a single run can reach
// hundreds of megabytes.
enum class LogPolicy { Full, CountOnly };

struct QueryRecord {
  PixelCoord pixel;
  bool black = false;
  friend bool operator==(const QueryRecord&, const QueryRecord&) = default;
};

// Query-counting access to a pixel source, optionally padded with white
// pixels up to `padded_side`. Every answered query is counted, repeats
// included. In Nonadaptive mode queries must be registered during the
// Collect phase; answers are only given after seal(), and only for
// registered pixels.
class PixelOracle {
 public:
  PixelOracle(std::shared_ptr<const PixelSource> target, OracleMode mode,
              int padded_side = 0, LogPolicy log_policy = LogPolicy::Full);

  int side() const noexcept { return side_; }
  int target_side() const noexcept { return target_->side(); }
  OracleMode mode() const noexcept { return mode_; }
  bool sealed() const noexcept { return sealed_; }
  LogPolicy log_policy() const noexcept { return log_policy_; }
  const PixelSource& target() const noexcept { return *target_; }

  // Collect phase (Nonadaptive only).
  void register_pixel(PixelCoord p);
  void register_rect(const PixelRect& r);
  void seal();
  std::uint64_t registered_count() const noexcept { return registered_count_; }

  bool query(PixelCoord p);
  // Answers every pixel of `r`, row-major, into `out` (size r.area()).
  void query_rect(const PixelRect& r, std::span<std::uint8_t> out);

  std::uint64_t count() const noexcept { return count_; }
  const std::vector<QueryRecord>& log() const noexcept { return log_; }

  // Answering beyond `limit` queries throws BudgetExhausted.
  void set_budget(std::optional<std::uint64_t> limit) noexcept { budget_ = limit; }

 private:
  void check_in_range(PixelCoord p) const;
  void check_rect(const PixelRect& r) const;
  void check_answerable(PixelCoord p) const;
  void check_answerable(const PixelRect& r) const;
  void charge(std::uint64_t n);

  std::shared_ptr<const PixelSource> target_;
  OracleMode mode_;
  int side_;
  LogPolicy log_policy_;
  bool sealed_ = false;
  std::vector<std::uint64_t> registered_pixels_;  // y * side + x, sorted at seal
  std::vector<PixelRect> registered_rects_;
  std::uint64_t registered_count_ = 0;
  std::uint64_t count_ = 0;
  std::optional<std::uint64_t> budget_;
  std::vector<QueryRecord> log_;
};

}  // namespace conntest
