#pragma once

#include <cstdint>
#include <vector>

#include "conntest/geometry.hpp"
#include "conntest/image.hpp"

namespace conntest {

// Largest side handled by the brute-force distances (2^16 candidates).
inline constexpr int kBruteForceMaxSide = 4;

// Minimum number of pixel flips that make `sub` border-connected. Exhaustive
// over all images of the same side; throws TooLarge above max_side.
int exact_dist_border_connected(const Image& sub, int max_side = kBruteForceMaxSide);

// Minimum number of pixel flips that make `img` connected.
int exact_dist_connected(const Image& img, int max_side = kBruteForceMaxSide);

struct FixResult {
  Image image;
  std::int64_t cost = 0;
};

// Whitens everything when at most a quarter of the pixels are black,
// otherwise blackens the row class y = r (mod 3) with the fewest white
// pixels (ties to the smallest r). The result is border-connected.
FixResult mod3_border_fix(const Image& sub);

// Returns `img` unchanged when connected. Otherwise blackens every level-0
// grid pixel and repairs each level-0 square with mod3_border_fix. Throws
// OutputNotConnected if the result is not connected.
FixResult connectify_via_grid(const Image& img, Eps eps);

// Local cost of a square whose black pixels are isolated dots: none on the
// ring, pairwise Chebyshev distance >= 3. Equals the number of dots. Throws
// PatternViolation otherwise.
std::int64_t dot_local_cost(const Image& square);

enum class CostProvenance { BruteForce, Analytic };

struct CostRecord {
  SquareRef square;
  std::int64_t lc = 0;
  std::int64_t elc = 0;  // min(2k, lc)
  CostProvenance provenance = CostProvenance::Analytic;
};

// Supplies the exact local cost of a k x k square's contents or throws
// CostUnavailable. Upper bounds are not acceptable answers.
class CostProvider {
 public:
  virtual ~CostProvider() = default;
  virtual std::int64_t local_cost(const Image& square) const = 0;
  virtual CostProvenance provenance() const noexcept = 0;
};

class BruteForceCostProvider final : public CostProvider {
 public:
  std::int64_t local_cost(const Image& square) const override;
  CostProvenance provenance() const noexcept override { return CostProvenance::BruteForce; }
};

// For images made of dots with pairwise Chebyshev distance >= 3. Dots on the
// ring of a square are already border-connected and are ignored.
class DotCostProvider final : public CostProvider {
 public:
  std::int64_t local_cost(const Image& square) const override;
  CostProvenance provenance() const noexcept override { return CostProvenance::Analytic; }
};

CostRecord square_cost(const Image& img, const SquareRef& square, const CostProvider& provider);

struct AuditReport {
  std::vector<std::int64_t> per_level_sums;  // sum of elc over the level
  std::int64_t grand_total = 0;
  double threshold = 0.0;  // eps * n^2 / 2
  bool passed = false;
  bool near_threshold = false;  // within 2% of the threshold
};

// Sums elc over every square of every level. `img` must be normalized.
AuditReport structural_audit(const Image& img, Eps eps, const CostProvider& provider);

}  // namespace conntest
