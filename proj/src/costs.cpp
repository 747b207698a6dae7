#include "conntest/costs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <string>

#include "conntest/components.hpp"
#include "conntest/errors.hpp"

namespace conntest {
namespace {

struct MaskGeometry {
  int side;
  std::uint32_t all;
  std::uint32_t ring;
  std::uint32_t not_first_col;
  std::uint32_t not_last_col;
};

MaskGeometry mask_geometry(int side) {
  MaskGeometry g{side, 0, 0, 0, 0};
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const std::uint32_t bit = 1U << (y * side + x);
      g.all |= bit;
      if (x == 0 || y == 0 || x == side - 1 || y == side - 1) g.ring |= bit;
      if (x != 0) g.not_first_col |= bit;
      if (x != side - 1) g.not_last_col |= bit;
    }
  }
  return g;
}

std::uint32_t flood(const MaskGeometry& g, std::uint32_t seed, std::uint32_t mask) {
  std::uint32_t reach = seed & mask;
  for (;;) {
    std::uint32_t next = reach | ((reach << 1) & g.not_first_col) | ((reach >> 1) & g.not_last_col) |
                         (reach << g.side) | (reach >> g.side);
    next &= mask;
    if (next == reach) return reach;
    reach = next;
  }
}

bool mask_border_connected(const MaskGeometry& g, std::uint32_t mask) {
  return flood(g, g.ring, mask) == mask;
}

bool mask_connected(const MaskGeometry& g, std::uint32_t mask) {
  if (mask == 0) return true;
  return flood(g, mask & (~mask + 1), mask) == mask;
}

// Distance of every side x side image to the property, by breadth-first
// search over the hypercube from all members at once.
template <typename Member>
std::vector<std::uint8_t> distance_table(int side, Member member) {
  const auto g = mask_geometry(side);
  const std::size_t count = std::size_t{1} << (side * side);
  std::vector<std::uint8_t> dist(count, 0xFF);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    if (member(g, mask)) {
      dist[mask] = 0;
      queue.push_back(mask);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t cur = queue[head];
    for (int bit = 0; bit < side * side; ++bit) {
      const std::uint32_t next = cur ^ (1U << bit);
      if (dist[next] == 0xFF) {
        dist[next] = static_cast<std::uint8_t>(dist[cur] + 1);
        queue.push_back(next);
      }
    }
  }
  return dist;
}

enum class Property { BorderConnected, Connected };

int table_lookup(const Image& img, int max_side, Property property) {
  const int side = img.side();
  if (side > max_side || side > kBruteForceMaxSide) {
    throw TooLarge("brute force limited to side " + std::to_string(std::min(max_side, kBruteForceMaxSide)) +
                   ", got " + std::to_string(side));
  }
  static std::mutex mutex;
  static std::array<std::vector<std::uint8_t>, 2 * (kBruteForceMaxSide + 1)> tables;
  auto& table = tables[static_cast<std::size_t>(property == Property::Connected) * (kBruteForceMaxSide + 1) +
                       static_cast<std::size_t>(side)];
  {
    std::lock_guard lock(mutex);
    if (table.empty()) {
      table = property == Property::Connected ? distance_table(side, mask_connected)
                                              : distance_table(side, mask_border_connected);
    }
  }
  return table[img.to_mask()];
}

}  // namespace

int exact_dist_border_connected(const Image& sub, int max_side) {
  return table_lookup(sub, max_side, Property::BorderConnected);
}

int exact_dist_connected(const Image& img, int max_side) {
  return table_lookup(img, max_side, Property::Connected);
}

FixResult mod3_border_fix(const Image& sub) {
  const int k = sub.side();
  const auto black = static_cast<std::int64_t>(sub.black_count());
  const std::int64_t area = static_cast<std::int64_t>(k) * k;
  if (4 * black <= area) return {Image(k), black};

  std::array<std::int64_t, 3> whites{0, 0, 0};
  for (int y = 0; y < k; ++y) {
    for (int x = 0; x < k; ++x) {
      if (!sub.at(x, y)) ++whites[static_cast<std::size_t>(y % 3)];
    }
  }
  const auto best = static_cast<int>(std::min_element(whites.begin(), whites.end()) - whites.begin());
  Image out = sub;
  for (int y = best; y < k; y += 3) {
    for (int x = 0; x < k; ++x) out.set(x, y, true);
  }
  return {std::move(out), whites[static_cast<std::size_t>(best)]};
}

FixResult connectify_via_grid(const Image& img, Eps eps) {
  if (is_connected(img)) return {img, 0};
  const int n = img.side();
  const auto g = LevelGeometry::make(n, eps, 0);
  Image out = img;
  std::int64_t cost = 0;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      if ((x % g.pitch == 0 || y % g.pitch == 0) && !out.at(x, y)) {
        out.set(x, y, true);
        ++cost;
      }
    }
  }
  for (const auto& s : enumerate_squares(n, eps, 0)) {
    const auto fixed = mod3_border_fix(img.crop(s.u + 1, s.v + 1, s.k));
    for (int ly = 0; ly < s.k; ++ly) {
      for (int lx = 0; lx < s.k; ++lx) out.set(s.u + 1 + lx, s.v + 1 + ly, fixed.image.at(lx, ly));
    }
    cost += fixed.cost;
  }
  if (!is_connected(out)) throw OutputNotConnected("grid repair left a disconnected image");
  return {std::move(out), cost};
}

std::int64_t dot_local_cost(const Image& square) {
  const int k = square.side();
  std::int64_t dots = 0;
  for (int y = 0; y < k; ++y) {
    for (int x = 0; x < k; ++x) {
      if (!square.at(x, y)) continue;
      if (square.on_border({x, y})) {
        throw PatternViolation("dot on the ring at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
      }
      for (int dy = -2; dy <= 2; ++dy) {
        for (int dx = -2; dx <= 2; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const PixelCoord q{x + dx, y + dy};
          if (square.contains(q) && square.at(q)) {
            throw PatternViolation("dots closer than 3 at (" + std::to_string(x) + ", " +
                                   std::to_string(y) + ")");
          }
        }
      }
      ++dots;
    }
  }
  return dots;
}

std::int64_t BruteForceCostProvider::local_cost(const Image& square) const {
  if (square.side() > kBruteForceMaxSide) {
    throw CostUnavailable("no exact cost for side " + std::to_string(square.side()));
  }
  return exact_dist_border_connected(square);
}

std::int64_t DotCostProvider::local_cost(const Image& square) const {
  Image inner = square;
  const int k = square.side();
  for (int i = 0; i < k; ++i) {
    inner.set(i, 0, false);
    inner.set(i, k - 1, false);
    inner.set(0, i, false);
    inner.set(k - 1, i, false);
  }
  for (int y = 0; y < k; ++y) {
    for (int x = 0; x < k; ++x) {
      if (!square.at(x, y) || !square.on_border({x, y})) continue;
      for (int dy = -2; dy <= 2; ++dy) {
        for (int dx = -2; dx <= 2; ++dx) {
          const PixelCoord q{x + dx, y + dy};
          if ((dx != 0 || dy != 0) && square.contains(q) && square.at(q)) {
            throw PatternViolation("dots closer than 3 near the ring");
          }
        }
      }
    }
  }
  return dot_local_cost(inner);
}

CostRecord square_cost(const Image& img, const SquareRef& square, const CostProvider& provider) {
  CostRecord r;
  r.square = square;
  r.lc = provider.local_cost(img.crop(square.u + 1, square.v + 1, square.k));
  r.elc = std::min<std::int64_t>(2 * square.k, r.lc);
  r.provenance = provider.provenance();
  return r;
}

AuditReport structural_audit(const Image& img, Eps eps, const CostProvider& provider) {
  AuditReport report;
  const int n = img.side();
  for (int level = 0; level < eps.levels(); ++level) {
    std::int64_t sum = 0;
    for (const auto& s : enumerate_squares(n, eps, level)) sum += square_cost(img, s, provider).elc;
    report.per_level_sums.push_back(sum);
    report.grand_total += sum;
  }
  report.threshold = eps.value() * static_cast<double>(n) * static_cast<double>(n) / 2.0;
  const auto total = static_cast<double>(report.grand_total);
  report.passed = total >= report.threshold;
  report.near_threshold = std::abs(total - report.threshold) <= 0.02 * report.threshold;
  return report;
}

}  // namespace conntest
