#include "conntest/geometry.hpp"

#include <cmath>
#include <regex>

#include "conntest/errors.hpp"

namespace conntest {

bool is_power_of_two(std::int64_t v) noexcept { return v > 0 && (v & (v - 1)) == 0; }

Eps Eps::from_log2_inverse(int e) {
  if (e < 1 || e > 40) throw InvalidEps("eps = 2^-" + std::to_string(e) + " out of range");
  return Eps(e);
}

Eps Eps::from_value(double value) {
  if (!(value > 0.0 && value < 1.0)) throw InvalidEps("eps must lie in (0, 1)");
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  if (mantissa != 0.5) throw InvalidEps("1/eps is not a power of two: " + std::to_string(value));
  return from_log2_inverse(1 - exponent);
}

Eps Eps::round_down(double value) {
  if (!(value > 0.0 && value < 1.0)) throw InvalidEps("eps must lie in (0, 1)");
  int exponent = 0;
  std::frexp(value, &exponent);  // value in [2^(exponent-1), 2^exponent)
  return from_log2_inverse(1 - exponent);
}

Eps Eps::parse(const std::string& text) {
  static const std::regex fraction(R"(\s*1\s*/\s*(\d+)\s*)");
  static const std::regex power(R"(\s*2\s*\^\s*-\s*(\d+)\s*)");
  std::smatch match;
  if (std::regex_match(text, match, fraction)) {
    const long long denom = std::stoll(match[1]);
    if (!is_power_of_two(denom) || denom < 2) throw InvalidEps("denominator must be a power of two >= 2: " + text);
    return from_log2_inverse(static_cast<int>(std::log2(static_cast<double>(denom))));
  }
  if (std::regex_match(text, match, power)) return from_log2_inverse(std::stoi(match[1]));
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return from_value(v);
  } catch (const std::logic_error&) {
  }
  throw InvalidEps("unrecognised eps '" + text + "' (use 1/16 or 2^-4)");
}

double Eps::value() const noexcept { return std::ldexp(1.0, -e_); }

std::string Eps::to_string() const { return "2^-" + std::to_string(e_); }

int level_side(Eps eps, int level) {
  if (level < 0 || level >= eps.levels()) {
    throw LevelOutOfRange("level " + std::to_string(level) + " not in [0, " +
                          std::to_string(eps.levels()) + ")");
  }
  return static_cast<int>((std::int64_t{4} << eps.log2_inverse()) >> level) - 1;
}

int level_side(double eps, int level) { return level_side(Eps::from_value(eps), level); }

bool is_grid_pixel(Eps eps, int level, PixelCoord p) {
  const int pitch = level_side(eps, level) + 1;
  return p.x % pitch == 0 || p.y % pitch == 0;
}

LevelGeometry LevelGeometry::make(int n, Eps eps, int level) {
  const int k = level_side(eps, level);
  const int pitch = k + 1;
  if (n < 2 || !is_power_of_two(n - 1) || (n - 1) % pitch != 0) {
    throw NotNormalized("side " + std::to_string(n) + " is not 2^j + 1 with pitch " +
                        std::to_string(pitch) + " dividing n - 1");
  }
  return {eps, level, k, pitch, (n - 1) / pitch};
}

std::vector<SquareRef> enumerate_squares(int n, Eps eps, int level) {
  const auto g = LevelGeometry::make(n, eps, level);
  std::vector<SquareRef> out;
  out.reserve(static_cast<std::size_t>(g.squares_per_row) * static_cast<std::size_t>(g.squares_per_row));
  for (int row = 0; row < g.squares_per_row; ++row) {
    for (int col = 0; col < g.squares_per_row; ++col) {
      out.push_back({level, g.k, col * g.pitch, row * g.pitch});
    }
  }
  return out;
}

SquareRef sample_square(int n, Eps eps, int level, Rng& rng) {
  const auto g = LevelGeometry::make(n, eps, level);
  const auto per_row = static_cast<std::uint64_t>(g.squares_per_row);
  const std::uint64_t index = rng.below(per_row * per_row);
  const int row = static_cast<int>(index / per_row);
  const int col = static_cast<int>(index % per_row);
  return {level, g.k, col * g.pitch, row * g.pitch};
}

int lattice_pitch(int k) {
  if (k < 2) throw OutOfRange("lattice pitch needs k >= 2");
  const double ratio = static_cast<double>(k) / std::log2(static_cast<double>(k));
  int c = static_cast<int>(std::ceil(std::sqrt(ratio)));
  return c % 2 == 1 ? c : c - 1;
}

std::int64_t lattice_size(int k, int m) {
  if (m <= 1) return static_cast<std::int64_t>(k) * k;
  // Count y in [1, k] with y = r (mod m).
  auto count_residue = [&](int r) -> std::int64_t {
    r = ((r % m) + m) % m;
    const int first = r == 0 ? m : r;
    return first > k ? 0 : (k - first) / m + 1;
  };
  std::int64_t total = 0;
  for (int x = 1; x <= k; ++x) {
    total += count_residue(-x) + count_residue(x);
    if (x % m == 0) total -= count_residue(0);
  }
  return total;
}

}  // namespace conntest
