#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "conntest/geometry.hpp"
#include "conntest/image.hpp"

namespace conntest {

// Parameters of the hard distribution: 1/eps = 2^(8m), m >= 2; levels
// low = log(1/eps)/8 .. high = log(1/eps)/4; cells of side a_i = 2^i and
// windows of side n_i = 16 sqrt(eps) n a_i.
struct HardParams {
  int n = 0;
  Eps eps = Eps::from_log2_inverse(16);
  int low = 0;
  int high = 0;

  int levels() const noexcept { return high - low + 1; }
  int cell_side(int level) const noexcept { return 1 << level; }
  int window_side(int level) const noexcept;
  int windows_per_row(int level) const noexcept { return n / window_side(level); }
  int cells_per_window_row(int level) const noexcept { return window_side(level) / cell_side(level); }
  int bridges_per_square(int level) const noexcept { return cell_side(level) / 2 - 1; }
  // White cells of a window outside its first column.
  int bridge_squares_per_window(int level) const noexcept;
  int canvas_side() const noexcept { return n + 1; }
};

// Throws InvalidParams listing every violated constraint.
HardParams make_hard_params(int n, Eps eps);

// Cell (row, col) of a window is black iff row + col is even.
struct BridgeSquare {
  int row = 0;
  int col = 0;
};

// Bridge squares of one window, row-major.
std::vector<BridgeSquare> bridge_squares(const HardParams& params, int level);

struct HardLayout {
  int level = 0;
  int window_row = 0;
  int window_col = 0;
  // Column offset (0 .. a-1) of the white pixel of every bridge, grouped by
  // bridge square in bridge_squares() order, bridges top to bottom.
  std::vector<std::uint16_t> disconnect;
};

struct HardInstance {
  HardParams params;
  HardLayout layout;
  std::uint64_t seed = 0;
  Image image;  // (n+1) x (n+1)
};

HardLayout sample_hard_layout(const HardParams& params, std::uint64_t seed);
Image render_hard(const HardParams& params, const HardLayout& layout);
HardInstance sample_hard(const HardParams& params, std::uint64_t seed);

// Canvas coordinates of a disconnecting pixel.
PixelCoord disconnecting_pixel(const HardParams& params, const HardLayout& layout,
                               std::size_t bridge_square, int bridge);

struct FarnessAudit {
  int component_count = 0;
  double distance_lower_bound = 0.0;  // (components - 1) / 3
  double threshold = 0.0;             // eps n^2
  bool eps_far = false;
};

FarnessAudit farness_audit(const Image& image, Eps eps, int n);
FarnessAudit farness_audit(const HardInstance& instance);

// Number of black checkerboard cells in the interesting window.
int black_cell_count(const HardParams& params, int level);

nlohmann::json to_json(const HardParams& params);
nlohmann::json to_json(const HardInstance& instance);

}  // namespace conntest
