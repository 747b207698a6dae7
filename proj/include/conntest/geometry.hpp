#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conntest/image.hpp"
#include "conntest/random.hpp"

namespace conntest {

// Proximity parameter restricted to eps = 2^-e, e >= 1.
class Eps {
 public:
  static Eps from_log2_inverse(int e);
  // Throws InvalidEps unless value is exactly a power of 1/2 in (0, 1).
  static Eps from_value(double value);
  // Largest power of 1/2 that is <= value; value in (0, 1).
  static Eps round_down(double value);
  // Accepts "1/16", "2^-4" or a decimal that is exactly dyadic ("0.0625").
  static Eps parse(const std::string& text);

  int log2_inverse() const noexcept { return e_; }
  std::int64_t inverse() const noexcept { return std::int64_t{1} << e_; }
  double value() const noexcept;
  // Levels 0 .. levels()-1 of the square partition.
  int levels() const noexcept { return e_; }
  std::string to_string() const;

  friend bool operator==(Eps, Eps) = default;

 private:
  explicit Eps(int e) : e_(e) {}
  int e_;
};

// k_i = (4/eps) * 2^-i - 1.
int level_side(Eps eps, int level);
int level_side(double eps, int level);

bool is_grid_pixel(Eps eps, int level, PixelCoord p);

struct LevelGeometry {
  Eps eps;
  int level;
  int k;                // square side
  int pitch;            // k + 1
  int squares_per_row;  // (n - 1) / pitch

  // Throws NotNormalized unless n - 1 is a power of two divisible by pitch.
  static LevelGeometry make(int n, Eps eps, int level);
};

// Square of one level: pixels (u+1 .. u+k) x (v+1 .. v+k); (u, v) lies on the
// grid. Local coordinates run 1..k in both directions.
struct SquareRef {
  int level = 0;
  int k = 0;
  int u = 0;
  int v = 0;

  PixelRect rect() const noexcept { return {u + 1, v + 1, k, k}; }
  bool contains(PixelCoord p) const noexcept { return rect().contains(p); }
  PixelCoord global(int lx, int ly) const noexcept { return {u + lx, v + ly}; }
  // Boundary pixels: those adjacent to the surrounding grid pixels.
  bool on_ring(PixelCoord p) const noexcept {
    return contains(p) && (p.x == u + 1 || p.x == u + k || p.y == v + 1 || p.y == v + k);
  }
  friend bool operator==(const SquareRef&, const SquareRef&) = default;
};

std::vector<SquareRef> enumerate_squares(int n, Eps eps, int level);
SquareRef sample_square(int n, Eps eps, int level, Rng& rng);

// Largest odd integer <= ceil(sqrt(k / log2 k)). k >= 2.
int lattice_pitch(int k);

// Number of lattice pixels of a k x k square with pitch m (m >= 1).
std::int64_t lattice_size(int k, int m);

bool is_power_of_two(std::int64_t v) noexcept;

}  // namespace conntest
