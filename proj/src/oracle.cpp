#include "conntest/oracle.hpp"

#include <algorithm>
#include <string>

#include "conntest/errors.hpp"

namespace conntest {

PixelOracle::PixelOracle(std::shared_ptr<const PixelSource> target, OracleMode mode,
                         int padded_side, LogPolicy log_policy)
    : target_(std::move(target)),
      mode_(mode),
      side_(padded_side == 0 ? target_->side() : padded_side),
      log_policy_(log_policy) {
  if (side_ < target_->side()) throw OutOfRange("padded side smaller than the target image");
}

void PixelOracle::check_in_range(PixelCoord p) const {
  if (p.x < 0 || p.y < 0 || p.x >= side_ || p.y >= side_) {
    throw OutOfRange("pixel (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                     ") outside " + std::to_string(side_) + "x" + std::to_string(side_));
  }
}

void PixelOracle::check_rect(const PixelRect& r) const {
  if (r.width < 1 || r.height < 1) throw OutOfRange("empty rectangle");
  check_in_range({r.x0, r.y0});
  check_in_range({r.x0 + r.width - 1, r.y0 + r.height - 1});
}

void PixelOracle::register_pixel(PixelCoord p) {
  if (mode_ != OracleMode::Nonadaptive) throw PhaseViolation("registration is for nonadaptive oracles");
  if (sealed_) throw PhaseViolation("collect phase already sealed");
  check_in_range(p);
  registered_pixels_.push_back(static_cast<std::uint64_t>(p.y) * static_cast<std::uint64_t>(side_) +
                               static_cast<std::uint64_t>(p.x));
  ++registered_count_;
}

void PixelOracle::register_rect(const PixelRect& r) {
  if (mode_ != OracleMode::Nonadaptive) throw PhaseViolation("registration is for nonadaptive oracles");
  if (sealed_) throw PhaseViolation("collect phase already sealed");
  check_rect(r);
  registered_rects_.push_back(r);
  registered_count_ += r.area();
}

void PixelOracle::seal() {
  if (mode_ != OracleMode::Nonadaptive) throw PhaseViolation("only nonadaptive oracles are sealed");
  if (sealed_) throw PhaseViolation("collect phase already sealed");
  std::sort(registered_pixels_.begin(), registered_pixels_.end());
  sealed_ = true;
  if (log_policy_ == LogPolicy::Full) log_.reserve(registered_count_);
}

void PixelOracle::check_answerable(PixelCoord p) const {
  if (mode_ != OracleMode::Nonadaptive) return;
  if (!sealed_) throw PhaseViolation("answer requested during the collect phase");
  const std::uint64_t key = static_cast<std::uint64_t>(p.y) * static_cast<std::uint64_t>(side_) +
                            static_cast<std::uint64_t>(p.x);
  if (std::binary_search(registered_pixels_.begin(), registered_pixels_.end(), key)) return;
  for (const auto& r : registered_rects_) {
    if (r.contains(p)) return;
  }
  throw PhaseViolation("pixel (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                       ") was not registered");
}

void PixelOracle::check_answerable(const PixelRect& r) const {
  if (mode_ != OracleMode::Nonadaptive) return;
  if (!sealed_) throw PhaseViolation("answer requested during the collect phase");
  for (const auto& reg : registered_rects_) {
    if (reg.contains(r)) return;
  }
  for (int y = r.y0; y < r.y0 + r.height; ++y) {
    for (int x = r.x0; x < r.x0 + r.width; ++x) check_answerable(PixelCoord{x, y});
  }
}

void PixelOracle::charge(std::uint64_t n) {
  if (budget_ && count_ + n > *budget_) {
    throw BudgetExhausted("query budget of " + std::to_string(*budget_) + " reached");
  }
  count_ += n;
}

bool PixelOracle::query(PixelCoord p) {
  check_in_range(p);
  check_answerable(p);
  charge(1);
  const bool black = p.x < target_->side() && p.y < target_->side() && target_->black(p.x, p.y);
  if (log_policy_ == LogPolicy::Full) log_.push_back({p, black});
  return black;
}

void PixelOracle::query_rect(const PixelRect& r, std::span<std::uint8_t> out) {
  check_rect(r);
  if (out.size() != r.area()) throw OutOfRange("output span does not match rectangle area");
  check_answerable(r);
  charge(r.area());

  const int inner = target_->side();
  const auto width = static_cast<std::size_t>(r.width);
  for (int dy = 0; dy < r.height; ++dy) {
    const int y = r.y0 + dy;
    auto row = out.subspan(static_cast<std::size_t>(dy) * width, width);
    std::fill(row.begin(), row.end(), std::uint8_t{0});
    if (y < inner && r.x0 < inner) {
      const int visible = std::min(r.x0 + r.width, inner) - r.x0;
      target_->read_row(y, r.x0, row.first(static_cast<std::size_t>(visible)));
    }
    if (log_policy_ == LogPolicy::Full) {
      for (int dx = 0; dx < r.width; ++dx) {
        log_.push_back({PixelCoord{r.x0 + dx, y}, row[static_cast<std::size_t>(dx)] != 0});
      }
    }
  }
}

}  // namespace conntest
