#include "conntest/lower_bound.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include "conntest/errors.hpp"
#include "conntest/random.hpp"

namespace conntest {
namespace {

std::vector<PixelCoord> take(std::vector<PixelCoord> pixels, std::uint64_t q) {
  if (pixels.size() > q) pixels.resize(static_cast<std::size_t>(q));
  return pixels;
}

// Random permutation prefix of [0, count) via a lazily materialised
// Fisher-Yates shuffle.
std::vector<std::uint64_t> random_prefix(std::uint64_t count, std::uint64_t q, std::uint64_t seed) {
  Rng rng(seed);
  std::unordered_map<std::uint64_t, std::uint64_t> swapped;
  auto value_at = [&](std::uint64_t i) {
    auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };
  std::vector<std::uint64_t> out;
  const std::uint64_t limit = std::min(count, q);
  out.reserve(static_cast<std::size_t>(limit));
  for (std::uint64_t i = 0; i < limit; ++i) {
    const std::uint64_t j = i + rng.below(count - i);
    const std::uint64_t vi = value_at(i);
    const std::uint64_t vj = value_at(j);
    swapped[j] = vi;
    out.push_back(vj);
  }
  return out;
}

}  // namespace

QueryStrategy make_strategy(std::string name, std::vector<PixelCoord> pixels, const HardParams& params) {
  const int side = params.canvas_side();
  for (const auto& p : pixels) {
    if (p.x < 0 || p.y < 0 || p.x >= side || p.y >= side) {
      throw OutOfRange("query (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") off the canvas");
    }
  }
  std::sort(pixels.begin(), pixels.end());
  pixels.erase(std::unique(pixels.begin(), pixels.end()), pixels.end());
  return {std::move(name), std::move(pixels)};
}

QueryStrategy uniform_strategy(const HardParams& params, std::uint64_t q, std::uint64_t seed) {
  const auto n = static_cast<std::uint64_t>(params.n);
  std::vector<PixelCoord> pixels;
  for (auto v : random_prefix(n * n, q, seed)) {
    pixels.push_back({static_cast<int>(v % n), static_cast<int>(v / n)});
  }
  return make_strategy("uniform", std::move(pixels), params);
}

QueryStrategy bridge_focused_strategy(const HardParams& params, std::uint64_t q, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PixelCoord> pixels;
  std::map<std::tuple<int, int, int>, bool> used;  // (level, global cell row, col)
  std::set<PixelCoord> taken;
  std::size_t available = 0;
  for (int level = params.low; level <= params.high; ++level) {
    available += static_cast<std::size_t>(params.windows_per_row(level)) * params.windows_per_row(level) *
                 static_cast<std::size_t>(params.bridge_squares_per_window(level));
  }
  while (pixels.size() < q && used.size() < available) {
    const int level = params.low + static_cast<int>(rng.below(static_cast<std::uint64_t>(params.levels())));
    const int a = params.cell_side(level);
    const int ni = params.window_side(level);
    const auto per_row = static_cast<std::uint64_t>(params.windows_per_row(level));
    const std::uint64_t w = rng.below(per_row * per_row);
    const auto squares = bridge_squares(params, level);
    const auto& b = squares[static_cast<std::size_t>(rng.below(squares.size()))];
    const int x0 = static_cast<int>(w % per_row) * ni + b.col * a;
    const int y0 = static_cast<int>(w / per_row) * ni + b.row * a;
    if (!used.emplace(std::make_tuple(level, y0, x0), true).second) continue;
    // Squares of different levels overlap; count each pixel once.
    for (int y = 0; y < a && pixels.size() < q; ++y) {
      for (int x = 0; x < a && pixels.size() < q; ++x) {
        if (taken.insert({x0 + x, y0 + y}).second) pixels.push_back({x0 + x, y0 + y});
      }
    }
  }
  return make_strategy("bridge-focused", std::move(pixels), params);
}

QueryStrategy grid_focused_strategy(const HardParams& params, std::uint64_t q, std::uint64_t seed) {
  const auto rows = static_cast<std::uint64_t>(params.n / 2);
  std::vector<PixelCoord> pixels;
  for (auto r : random_prefix(rows, q / static_cast<std::uint64_t>(params.n) + 1, seed)) {
    const int y = 2 * static_cast<int>(r) + 1;
    for (int x = 0; x < params.n; ++x) pixels.push_back({x, y});
  }
  return make_strategy("grid-focused", take(std::move(pixels), q), params);
}

QueryStrategy full_bridge_square_strategy(const HardParams& params) {
  std::vector<PixelCoord> pixels;
  for (int level = params.low; level <= params.high; ++level) {
    const int a = params.cell_side(level);
    const int ni = params.window_side(level);
    const auto first = bridge_squares(params, level).front();
    for (int wr = 0; wr < params.windows_per_row(level); ++wr) {
      for (int wc = 0; wc < params.windows_per_row(level); ++wc) {
        for (int y = 0; y < a; ++y) {
          for (int x = 0; x < a; ++x) pixels.push_back({wc * ni + first.col * a + x, wr * ni + first.row * a + y});
        }
      }
    }
  }
  return make_strategy("full-bridge-square", std::move(pixels), params);
}

QueryStrategy read_strategy_file(const std::string& path, const HardParams& params) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<PixelCoord> pixels;
  int x = 0;
  int y = 0;
  while (in >> x >> y) pixels.push_back({x, y});
  if (!in.eof()) throw InvalidParams("malformed query file " + path);
  return make_strategy("file", std::move(pixels), params);
}

std::uint64_t claim5_budget(const HardParams& params, double c) {
  const double l = params.eps.log2_inverse();
  return static_cast<std::uint64_t>(std::floor(c * static_cast<double>(params.eps.inverse()) * l));
}

double revealing_probability_exact(const QueryStrategy& q, const HardParams& params) {
  double total = 0.0;
  for (int level = params.low; level <= params.high; ++level) {
    const int a = params.cell_side(level);
    const int ni = params.window_side(level);
    const int per_row = params.windows_per_row(level);
    const int cells = params.cells_per_window_row(level);
    const int bridges = params.bridges_per_square(level);
    // (window, cell, bridge) -> queried pixels on that bridge row.
    std::map<std::uint64_t, int> hits;
    for (const auto& p : q.pixels) {
      if (p.x >= params.n || p.y >= params.n) continue;
      const int wr = p.y / ni;
      const int wc = p.x / ni;
      const int r = (p.y % ni) / a;
      const int c = (p.x % ni) / a;
      const int t = (p.y % ni) % a;
      if (c == 0 || (r + c) % 2 == 0 || t % 2 == 0 || t > a - 3) continue;
      const std::uint64_t window = static_cast<std::uint64_t>(wr) * per_row + wc;
      const std::uint64_t cell = static_cast<std::uint64_t>(r) * cells + c;
      const std::uint64_t key = (window * cells * cells + cell) * bridges + (t - 1) / 2;
      ++hits[key];
    }
    // Per bridge square: product over its bridges; per window: 1 - prod(1 - p_b).
    std::map<std::uint64_t, std::vector<std::pair<int, int>>> by_square;
    for (const auto& [key, count] : hits) {
      by_square[key / bridges].push_back({static_cast<int>(key % bridges), count});
    }
    std::map<std::uint64_t, double> window_miss;
    for (const auto& [square, list] : by_square) {
      if (static_cast<int>(list.size()) != bridges) continue;
      double reveal = 1.0;
      for (const auto& entry : list) reveal *= static_cast<double>(entry.second) / a;
      const std::uint64_t window = square / (static_cast<std::uint64_t>(cells) * cells);
      auto it = window_miss.try_emplace(window, 1.0).first;
      it->second *= 1.0 - reveal;
    }
    double level_sum = 0.0;
    for (const auto& entry : window_miss) level_sum += 1.0 - entry.second;
    total += level_sum / (static_cast<double>(per_row) * per_row);
  }
  return total / params.levels();
}

McEstimate revealing_probability_mc(const QueryStrategy& q, const HardParams& params,
                                    std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidParams("trials must be >= 1");
  const int side = params.canvas_side();
  std::vector<std::uint8_t> queried(static_cast<std::size_t>(side) * static_cast<std::size_t>(side), 0);
  for (const auto& p : q.pixels) queried[static_cast<std::size_t>(p.y) * side + p.x] = 1;
  std::vector<std::vector<BridgeSquare>> squares;
  for (int level = params.low; level <= params.high; ++level) squares.push_back(bridge_squares(params, level));

  McEstimate out;
  out.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto layout = sample_hard_layout(params, derive_seed(seed, t));
    const int a = params.cell_side(layout.level);
    const int ni = params.window_side(layout.level);
    const int bridges = params.bridges_per_square(layout.level);
    const auto& list = squares[static_cast<std::size_t>(layout.level - params.low)];
    bool revealed = false;
    for (std::size_t s = 0; s < list.size() && !revealed; ++s) {
      const int x0 = layout.window_col * ni + list[s].col * a;
      const int y0 = layout.window_row * ni + list[s].row * a;
      bool all = true;
      for (int b = 0; b < bridges && all; ++b) {
        const int x = x0 + layout.disconnect[s * static_cast<std::size_t>(bridges) + static_cast<std::size_t>(b)];
        all = queried[static_cast<std::size_t>(y0 + 2 * b + 1) * side + x] != 0;
      }
      revealed = all;
    }
    out.hits += revealed ? 1 : 0;
  }
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(trials);
  out.stderr_ = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(trials));
  return out;
}

WindowStats classify_windows(const QueryStrategy& q, const HardParams& params) {
  WindowStats stats;
  stats.q = q.size();
  const int n = params.n;
  const int levels = params.levels();
  // Per level: queries per cell, covered flags.
  std::vector<std::vector<std::int64_t>> counts(static_cast<std::size_t>(levels));
  for (int j = 0; j < levels; ++j) {
    const int per_row = n / params.cell_side(params.low + j);
    counts[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(per_row) * per_row, 0);
  }
  for (const auto& p : q.pixels) {
    if (p.x >= n || p.y >= n) continue;
    for (int j = 0; j < levels; ++j) {
      const int level = params.low + j;
      const int per_row = n >> level;
      ++counts[static_cast<std::size_t>(j)][static_cast<std::size_t>(p.y >> level) * per_row + (p.x >> level)];
    }
  }
  auto covered = [&](int level, int row, int col) {
    const auto a = static_cast<std::int64_t>(params.cell_side(level));
    const int per_row = n >> level;
    return 8 * counts[static_cast<std::size_t>(level - params.low)]
                     [static_cast<std::size_t>(row) * per_row + col] >= a * a;
  };

  stats.levels.resize(static_cast<std::size_t>(levels));
  std::vector<CellRef> maximal;
  for (int level = params.low; level <= params.high; ++level) {
    auto& ls = stats.levels[static_cast<std::size_t>(level - params.low)];
    ls.level = level;
    const int per_row = n >> level;
    for (int row = 0; row < per_row; ++row) {
      for (int col = 0; col < per_row; ++col) {
        if (!covered(level, row, col)) continue;
        ++ls.covered_cells;
        bool is_max = true;
        for (int up = level + 1; up <= params.high && is_max; ++up) {
          is_max = !covered(up, row >> (up - level), col >> (up - level));
        }
        if (is_max) {
          ++ls.maximal_cells;
          maximal.push_back({level, row, col});
        }
      }
    }
  }
  std::sort(maximal.begin(), maximal.end());

  // Window of level i holding a cell.
  auto window_of = [&](const CellRef& c, int level) {
    const int ni = params.window_side(level);
    const int a = params.cell_side(c.level);
    return std::make_pair(c.row * a / ni, c.col * a / ni);
  };
  std::vector<std::uint8_t> taken(maximal.size(), 0);
  for (int level = params.high; level >= params.low; --level) {
    auto& ls = stats.levels[static_cast<std::size_t>(level - params.low)];
    const int per_row = params.windows_per_row(level);
    // Good windows: contain a covered cell of level >= i. Covered cells of
    // level >= i always sit inside a maximal cell of level >= i.
    std::vector<std::vector<std::size_t>> inside(static_cast<std::size_t>(per_row) * per_row);
    for (std::size_t m = 0; m < maximal.size(); ++m) {
      if (maximal[m].level < level) continue;
      const auto [wr, wc] = window_of(maximal[m], level);
      inside[static_cast<std::size_t>(wr) * per_row + wc].push_back(m);
    }
    for (int wr = 0; wr < per_row; ++wr) {
      for (int wc = 0; wc < per_row; ++wc) {
        const auto& cand = inside[static_cast<std::size_t>(wr) * per_row + wc];
        if (cand.empty()) continue;
        ++ls.good_windows;
        if (std::any_of(cand.begin(), cand.end(), [&](std::size_t m) { return taken[m] != 0; })) continue;
        taken[cand.front()] = 1;
        ++ls.associated_windows;
        stats.association.push_back({{level, wr, wc}, maximal[cand.front()]});
      }
    }
  }

  double weighted_g = 0.0;
  double weighted_t = 0.0;
  stats.lower_levels = true;
  for (std::size_t j = 0; j < stats.levels.size(); ++j) {
    const auto& ls = stats.levels[j];
    const double a = params.cell_side(ls.level);
    weighted_g += a * a * ls.associated_windows;
    weighted_t += std::ldexp(1.0, 2 * ls.level) * ls.good_windows;
    if (j + 1 < stats.levels.size() &&
        ls.associated_windows < ls.good_windows - stats.levels[j + 1].good_windows) {
      stats.lower_levels = false;
    }
  }
  const auto& top = stats.levels.back();
  stats.top_level = top.associated_windows == top.good_windows;
  const auto qd = static_cast<double>(stats.q);
  stats.item1 = 8.0 * qd >= weighted_g;
  stats.inequality4 = 32.0 * qd >= 3.0 * weighted_t;
  return stats;
}

Threshold find_threshold(const std::function<QueryStrategy(std::uint64_t)>& make, const HardParams& params,
                         std::uint64_t q_max) {
  Threshold out;
  const double unit = static_cast<double>(params.eps.inverse()) * params.eps.log2_inverse();
  auto prob = [&](std::uint64_t q) { return revealing_probability_exact(make(q), params); };
  if (prob(q_max) < 1.0 / 3.0) return out;
  std::uint64_t lo = 0;  // Pr < 1/3
  std::uint64_t hi = q_max;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (prob(mid) >= 1.0 / 3.0 ? hi : lo) = mid;
  }
  out.reached = true;
  out.q_star = hi;
  out.c_star = static_cast<double>(hi) / unit;
  out.probability = prob(hi);
  return out;
}

nlohmann::json to_json(const WindowStats& stats) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& ls : stats.levels) {
    levels.push_back({{"level", ls.level},
                      {"goodWindows", ls.good_windows},
                      {"associatedWindows", ls.associated_windows},
                      {"coveredCells", ls.covered_cells},
                      {"maximalCells", ls.maximal_cells}});
  }
  return {{"q", stats.q},
          {"levels", std::move(levels)},
          {"associations", stats.association.size()},
          {"checks",
           {{"item1", stats.item1},
            {"topLevel", stats.top_level},
            {"lowerLevels", stats.lower_levels},
            {"inequality4", stats.inequality4}}}};
}

}  // namespace conntest
