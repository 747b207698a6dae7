#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "conntest/hard_instance.hpp"

namespace conntest {

// A deterministic nonadaptive algorithm, identified with its query set.
struct QueryStrategy {
  std::string name;
  std::vector<PixelCoord> pixels;  // distinct, sorted

  std::uint64_t size() const noexcept { return pixels.size(); }
};

// Deduplicates and sorts; throws OutOfRange for pixels off the canvas.
QueryStrategy make_strategy(std::string name, std::vector<PixelCoord> pixels, const HardParams& params);

// The first q pixels of a seeded random order of the n x n grid.
QueryStrategy uniform_strategy(const HardParams& params, std::uint64_t q, std::uint64_t seed);
// Whole bridge squares (all a_i^2 pixels) at random levels and windows,
// truncated to q pixels.
QueryStrategy bridge_focused_strategy(const HardParams& params, std::uint64_t q, std::uint64_t seed);
// Whole odd rows in random order, truncated to q pixels.
QueryStrategy grid_focused_strategy(const HardParams& params, std::uint64_t q, std::uint64_t seed);
// Every pixel of the first bridge square of every window of every level.
QueryStrategy full_bridge_square_strategy(const HardParams& params);
// Whitespace-separated "x y" pairs.
QueryStrategy read_strategy_file(const std::string& path, const HardParams& params);

// c (1/eps) log(1/eps), rounded down.
std::uint64_t claim5_budget(const HardParams& params, double c);

// Pr[E] computed exactly from the independence of the disconnecting pixels.
double revealing_probability_exact(const QueryStrategy& q, const HardParams& params);

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
};

// Samples layouts of the hard distribution and checks for a revealing set.
McEstimate revealing_probability_mc(const QueryStrategy& q, const HardParams& params,
                                    std::uint64_t trials, std::uint64_t seed);

struct CellRef {
  int level = 0;
  int row = 0;
  int col = 0;
  friend auto operator<=>(const CellRef&, const CellRef&) = default;
};

struct Association {
  CellRef window;  // level, row, col of the window
  CellRef cell;
};

struct LevelStats {
  int level = 0;
  int good_windows = 0;        // t_i
  int associated_windows = 0;  // g_i
  int covered_cells = 0;
  int maximal_cells = 0;
};

struct WindowStats {
  std::uint64_t q = 0;
  std::vector<LevelStats> levels;  // low .. high
  std::vector<Association> association;
  bool item1 = false;         // 8q >= sum a_i^2 g_i
  bool top_level = false;     // g_h = t_h
  bool lower_levels = false;  // g_i >= t_i - t_{i+1}
  bool inequality4 = false;   // 32q >= 3 sum 4^i t_i

  bool all_hold() const noexcept { return item1 && top_level && lower_levels && inequality4; }
};

WindowStats classify_windows(const QueryStrategy& q, const HardParams& params);

struct Threshold {
  bool reached = false;
  std::uint64_t q_star = 0;  // smallest q with Pr[E] >= 1/3
  double c_star = 0.0;       // q_star / ((1/eps) log(1/eps))
  double probability = 0.0;  // Pr[E] at q_star
};

// Binary search over q for nested strategy families (make(q) contains
// make(q') when q' < q), up to q_max.
Threshold find_threshold(const std::function<QueryStrategy(std::uint64_t)>& make, const HardParams& params,
                         std::uint64_t q_max);

nlohmann::json to_json(const WindowStats& stats);

}  // namespace conntest
