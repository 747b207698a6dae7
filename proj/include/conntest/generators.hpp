#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "conntest/image.hpp"

namespace conntest {

enum class ConnectedFamily {
  SpanningTreeBlob,  // random tree of corridors, then random thickening
  RectangleUnion,    // filled rectangles hanging off a horizontal spine
  Serpentine,        // width-1 rows joined at alternating ends
};

ConnectedFamily parse_family(const std::string& name);
const char* to_string(ConnectedFamily family) noexcept;

// Always connected; n = 1 gives a single black pixel.
Image gen_connected(int n, ConnectedFamily family, std::uint64_t seed);

enum class FarCertificate {
  // (components - 1) / 3 >= eps n^2: one recolouring merges at most four
  // components. Uses ceil(3 eps n^2) + 1 dots.
  ComponentBound,
  // Dots at Chebyshev distance >= 3 have disjoint closed neighbourhoods and
  // at most one of them may stay untouched, so Dist >= dots - 1. Uses
  // ceil(eps n^2) + 1 dots.
  NeighborhoodBound,
};

struct DotImage {
  Image image;
  std::int64_t dots = 0;
  int spacing = 3;  // dot coordinates are multiples of this
  FarCertificate certificate = FarCertificate::ComponentBound;
  double distance_lower_bound = 0.0;
  bool certified_far = false;
};

// Isolated dots on a random subset of the spacing-aligned positions at
// distance >= 2 from the image border. ComponentBound uses spacing 3 when
// there is room and spacing 2 otherwise; NeighborhoodBound always uses 3.
// Throws DensityInfeasible when the positions run out.
DotImage gen_dot_far(int n, double eps, std::uint64_t seed,
                     FarCertificate certificate = FarCertificate::ComponentBound);

// Procedural images of any side, for sizes that do not fit in memory.
class BlankSource final : public PixelSource {
 public:
  explicit BlankSource(int side) : side_(side) {}
  int side() const override { return side_; }
  bool black(int, int) const override { return false; }
  void read_row(int y, int x0, std::span<std::uint8_t> out) const override;

 private:
  int side_;
};

// Top row plus every `period`-th column; connected.
class CombSource final : public PixelSource {
 public:
  CombSource(int side, int period) : side_(side), period_(period) {}
  int side() const override { return side_; }
  bool black(int x, int y) const override { return y == 0 || x % period_ == 0; }

 private:
  int side_;
  int period_;
};

}  // namespace conntest
