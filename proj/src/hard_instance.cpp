#include "conntest/hard_instance.hpp"

#include <cmath>
#include <string>

#include "conntest/components.hpp"
#include "conntest/errors.hpp"
#include "conntest/random.hpp"

namespace conntest {

int HardParams::window_side(int level) const noexcept {
  const int shift = level + 4 - eps.log2_inverse() / 2;
  return shift >= 0 ? n << shift : n >> -shift;
}

int HardParams::bridge_squares_per_window(int level) const noexcept {
  const int c = cells_per_window_row(level);
  int count = 0;
  for (int r = 0; r < c; ++r) {
    for (int col = 1; col < c; ++col) count += (r + col) % 2;
  }
  return count;
}

HardParams make_hard_params(int n, Eps eps) {
  std::vector<std::string> problems;
  const int e = eps.log2_inverse();
  if (e % 8 != 0 || e < 16) problems.push_back("1/eps must be 2^(8m) with m >= 2, got " + eps.to_string());
  if (n < 1 || !is_power_of_two(n)) problems.push_back("n must be a power of two, got " + std::to_string(n));
  HardParams p;
  p.n = n;
  p.eps = eps;
  p.low = e / 8;
  p.high = e / 4;
  const double min_n = std::ldexp(1.0, 5 * e / 8 - 4);
  if (!(static_cast<double>(n) > min_n)) {
    problems.push_back("need n > (1/16) (1/eps)^(5/8) = " + std::to_string(min_n));
  }
  if (n >= 1 && is_power_of_two(n)) {
    for (int i = p.low; i <= p.high; ++i) {
      const int shift = i + 4 - e / 2;
      if (shift < 0 && (n >> -shift) << -shift != n) {
        problems.push_back("window side n_" + std::to_string(i) + " is not an integer");
      } else if (shift > 0 && static_cast<std::int64_t>(n) << shift > n) {
        problems.push_back("window side n_" + std::to_string(i) + " = " +
                           std::to_string(static_cast<std::int64_t>(n) << shift) + " exceeds n");
      } else if (p.window_side(i) < p.cell_side(i)) {
        problems.push_back("window side n_" + std::to_string(i) + " smaller than its cells");
      }
    }
    const std::int64_t n_low = e / 2 - 4 - p.low >= 0 ? n >> (e / 2 - 4 - p.low)
                                                      : static_cast<std::int64_t>(n) << (p.low + 4 - e / 2);
    if (!(p.cell_side(p.high) < n_low)) {
      problems.push_back("largest cell a_h = " + std::to_string(p.cell_side(p.high)) +
                         " is not smaller than the smallest window n_l = " + std::to_string(n_low));
    }
  }
  if (!problems.empty()) {
    std::string msg;
    for (const auto& s : problems) msg += (msg.empty() ? "" : "; ") + s;
    throw InvalidParams(msg);
  }
  return p;
}

std::vector<BridgeSquare> bridge_squares(const HardParams& params, int level) {
  const int c = params.cells_per_window_row(level);
  std::vector<BridgeSquare> out;
  for (int r = 0; r < c; ++r) {
    for (int col = 1; col < c; ++col) {
      if ((r + col) % 2 == 1) out.push_back({r, col});
    }
  }
  return out;
}

HardLayout sample_hard_layout(const HardParams& params, std::uint64_t seed) {
  Rng rng(seed);
  HardLayout layout;
  layout.level = params.low + static_cast<int>(rng.below(static_cast<std::uint64_t>(params.levels())));
  const auto per_row = static_cast<std::uint64_t>(params.windows_per_row(layout.level));
  const std::uint64_t w = rng.below(per_row * per_row);
  layout.window_row = static_cast<int>(w / per_row);
  layout.window_col = static_cast<int>(w % per_row);
  const int a = params.cell_side(layout.level);
  const auto count = static_cast<std::size_t>(params.bridge_squares_per_window(layout.level)) *
                     static_cast<std::size_t>(params.bridges_per_square(layout.level));
  layout.disconnect.resize(count);
  for (auto& d : layout.disconnect) d = static_cast<std::uint16_t>(rng.below(static_cast<std::uint64_t>(a)));
  return layout;
}

PixelCoord disconnecting_pixel(const HardParams& params, const HardLayout& layout,
                               std::size_t bridge_square, int bridge) {
  const int a = params.cell_side(layout.level);
  const int ni = params.window_side(layout.level);
  const auto squares = bridge_squares(params, layout.level);
  const auto& b = squares.at(bridge_square);
  const auto slot = bridge_square * static_cast<std::size_t>(params.bridges_per_square(layout.level)) +
                    static_cast<std::size_t>(bridge);
  return {layout.window_col * ni + b.col * a + layout.disconnect.at(slot),
          layout.window_row * ni + b.row * a + 2 * bridge + 1};
}

Image render_hard(const HardParams& params, const HardLayout& layout) {
  Image img(params.canvas_side());
  const int a = params.cell_side(layout.level);
  const int ni = params.window_side(layout.level);
  const int c = params.cells_per_window_row(layout.level);
  const int wx = layout.window_col * ni;
  const int wy = layout.window_row * ni;
  for (int r = 0; r < c; ++r) {
    for (int col = 0; col < c; ++col) {
      if ((r + col) % 2 != 0) continue;
      for (int y = 0; y < a; ++y) {
        for (int x = 0; x < a; ++x) img.set(wx + col * a + x, wy + r * a + y, true);
      }
    }
  }
  const int bridges = params.bridges_per_square(layout.level);
  const auto squares = bridge_squares(params, layout.level);
  for (std::size_t s = 0; s < squares.size(); ++s) {
    const int x0 = wx + squares[s].col * a;
    const int y0 = wy + squares[s].row * a;
    for (int b = 0; b < bridges; ++b) {
      const int gap = layout.disconnect[s * static_cast<std::size_t>(bridges) + static_cast<std::size_t>(b)];
      for (int x = 0; x < a; ++x) {
        if (x != gap) img.set(x0 + x, y0 + 2 * b + 1, true);
      }
    }
  }
  for (int y = wy; y < wy + ni; ++y) img.set(wx + ni, y, true);
  return img;
}

HardInstance sample_hard(const HardParams& params, std::uint64_t seed) {
  HardInstance inst;
  inst.params = params;
  inst.seed = seed;
  inst.layout = sample_hard_layout(params, seed);
  inst.image = render_hard(params, inst.layout);
  return inst;
}

FarnessAudit farness_audit(const Image& image, Eps eps, int n) {
  FarnessAudit out;
  out.component_count = connected_components(image).component_count;
  out.distance_lower_bound = out.component_count > 0 ? (out.component_count - 1) / 3.0 : 0.0;
  out.threshold = eps.value() * static_cast<double>(n) * static_cast<double>(n);
  out.eps_far = out.component_count > 0 && out.distance_lower_bound >= out.threshold;
  return out;
}

FarnessAudit farness_audit(const HardInstance& instance) {
  return farness_audit(instance.image, instance.params.eps, instance.params.n);
}

int black_cell_count(const HardParams& params, int level) {
  const int c = params.cells_per_window_row(level);
  return (c * c + 1) / 2;
}

nlohmann::json to_json(const HardParams& params) {
  nlohmann::json levels = nlohmann::json::array();
  for (int i = params.low; i <= params.high; ++i) {
    levels.push_back({{"level", i},
                      {"cellSide", params.cell_side(i)},
                      {"windowSide", params.window_side(i)},
                      {"windowsPerRow", params.windows_per_row(i)}});
  }
  return {{"n", params.n},
          {"eps", params.eps.to_string()},
          {"lowLevel", params.low},
          {"highLevel", params.high},
          {"levels", std::move(levels)}};
}

nlohmann::json to_json(const HardInstance& instance) {
  nlohmann::json pixels = nlohmann::json::array();
  const auto& params = instance.params;
  const auto& layout = instance.layout;
  const int a = params.cell_side(layout.level);
  const int ni = params.window_side(layout.level);
  const int bridges = params.bridges_per_square(layout.level);
  const auto squares = bridge_squares(params, layout.level);
  for (std::size_t s = 0; s < squares.size(); ++s) {
    for (int b = 0; b < bridges; ++b) {
      const auto gap = layout.disconnect[s * static_cast<std::size_t>(bridges) + static_cast<std::size_t>(b)];
      pixels.push_back({layout.window_col * ni + squares[s].col * a + gap,
                        layout.window_row * ni + squares[s].row * a + 2 * b + 1});
    }
  }
  return {{"params", to_json(params)},
          {"seed", instance.seed},
          {"level", layout.level},
          {"window", {layout.window_row, layout.window_col}},
          {"disconnectingPixels", std::move(pixels)}};
}

}  // namespace conntest
