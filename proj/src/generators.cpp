#include "conntest/generators.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "conntest/errors.hpp"
#include "conntest/random.hpp"

namespace conntest {
namespace {

constexpr int kDx[4] = {0, 0, -1, 1};
constexpr int kDy[4] = {-1, 1, 0, 0};

// Randomised Prim over cells at even coordinates; stops once half the cells
// are in the tree, then grows random black neighbours.
Image spanning_tree_blob(int n, Rng& rng) {
  Image img(n);
  const int cells = (n + 1) / 2;
  const auto total = static_cast<std::int64_t>(cells) * cells;
  const std::int64_t target = std::max<std::int64_t>(1, total / 2);
  std::vector<std::uint8_t> in_tree(static_cast<std::size_t>(total), 0);
  struct Edge {
    int from;
    int to;
  };
  std::vector<Edge> frontier;
  auto push_edges = [&](int c) {
    const int cx = c % cells;
    const int cy = c / cells;
    for (int d = 0; d < 4; ++d) {
      const int nx = cx + kDx[d];
      const int ny = cy + kDy[d];
      if (nx < 0 || ny < 0 || nx >= cells || ny >= cells) continue;
      const int nc = ny * cells + nx;
      if (!in_tree[static_cast<std::size_t>(nc)]) frontier.push_back({c, nc});
    }
  };
  const int start = static_cast<int>(rng.below(static_cast<std::uint64_t>(total)));
  in_tree[static_cast<std::size_t>(start)] = 1;
  img.set(2 * (start % cells), 2 * (start / cells), true);
  push_edges(start);
  std::int64_t grown = 1;
  while (grown < target && !frontier.empty()) {
    const auto pick = static_cast<std::size_t>(rng.below(frontier.size()));
    const Edge e = frontier[pick];
    frontier[pick] = frontier.back();
    frontier.pop_back();
    if (in_tree[static_cast<std::size_t>(e.to)]) continue;
    in_tree[static_cast<std::size_t>(e.to)] = 1;
    ++grown;
    const int ax = 2 * (e.from % cells);
    const int ay = 2 * (e.from / cells);
    const int bx = 2 * (e.to % cells);
    const int by = 2 * (e.to / cells);
    img.set((ax + bx) / 2, (ay + by) / 2, true);
    img.set(bx, by, true);
    push_edges(e.to);
  }
  const std::int64_t thicken = static_cast<std::int64_t>(n) * n / 8;
  for (std::int64_t t = 0; t < thicken; ++t) {
    const int x = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (img.at(x, y)) continue;
    for (int d = 0; d < 4; ++d) {
      const PixelCoord q{x + kDx[d], y + kDy[d]};
      if (img.contains(q) && img.at(q)) {
        img.set(x, y, true);
        break;
      }
    }
  }
  return img;
}

Image rectangle_union(int n, Rng& rng) {
  Image img(n);
  const int spine = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  for (int x = 0; x < n; ++x) img.set(x, spine, true);
  const int count = std::max(1, n / 8);
  for (int r = 0; r < count; ++r) {
    const int w = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, n / 6))));
    const int h = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, n / 6))));
    const int x0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - std::min(w, n) + 1)));
    const int y0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - std::min(h, n) + 1)));
    for (int y = y0; y < std::min(n, y0 + h); ++y) {
      for (int x = x0; x < std::min(n, x0 + w); ++x) img.set(x, y, true);
    }
    const int stem = x0 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(w, n - x0))));
    for (int y = std::min(spine, y0); y <= std::max(spine, y0); ++y) img.set(stem, y, true);
  }
  return img;
}

Image serpentine(int n, Rng& rng) {
  Image img(n);
  std::vector<int> rows;
  for (int y = static_cast<int>(rng.below(3)); y < n; y += 3 + static_cast<int>(rng.below(2))) {
    rows.push_back(y);
  }
  if (rows.empty()) rows.push_back(0);
  for (int y : rows) {
    for (int x = 0; x < n; ++x) img.set(x, y, true);
  }
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const int x = i % 2 == 0 ? n - 1 : 0;
    for (int y = rows[i]; y <= rows[i + 1]; ++y) img.set(x, y, true);
  }
  return img;
}

}  // namespace

ConnectedFamily parse_family(const std::string& name) {
  if (name == "blob" || name == "spanning-tree") return ConnectedFamily::SpanningTreeBlob;
  if (name == "rectangles") return ConnectedFamily::RectangleUnion;
  if (name == "serpentine") return ConnectedFamily::Serpentine;
  throw InvalidParams("unknown connected family '" + name + "' (blob, rectangles, serpentine)");
}

const char* to_string(ConnectedFamily family) noexcept {
  switch (family) {
    case ConnectedFamily::SpanningTreeBlob:
      return "blob";
    case ConnectedFamily::RectangleUnion:
      return "rectangles";
    case ConnectedFamily::Serpentine:
      return "serpentine";
  }
  return "unknown";
}

Image gen_connected(int n, ConnectedFamily family, std::uint64_t seed) {
  if (n < 1) throw InvalidParams("side must be >= 1");
  if (n == 1) return Image(1, true);
  Rng rng(seed);
  switch (family) {
    case ConnectedFamily::SpanningTreeBlob:
      return spanning_tree_blob(n, rng);
    case ConnectedFamily::RectangleUnion:
      return rectangle_union(n, rng);
    case ConnectedFamily::Serpentine:
      return serpentine(n, rng);
  }
  throw InvalidParams("unknown connected family");
}

DotImage gen_dot_far(int n, double eps, std::uint64_t seed, FarCertificate certificate) {
  if (n < 5) throw InvalidParams("dot images need n >= 5");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidEps("eps must lie in (0, 1)");
  const double area = static_cast<double>(n) * static_cast<double>(n);
  const double factor = certificate == FarCertificate::ComponentBound ? 3.0 : 1.0;
  const auto wanted = static_cast<std::int64_t>(std::ceil(factor * eps * area)) + 1;

  auto axis_positions = [n](int spacing) {
    std::vector<int> out;
    for (int c = 2; c <= n - 3; ++c) {
      if (c % spacing == 0) out.push_back(c);
    }
    return out;
  };
  int spacing = 3;
  auto axis = axis_positions(3);
  if (static_cast<std::int64_t>(axis.size()) * static_cast<std::int64_t>(axis.size()) < wanted &&
      certificate == FarCertificate::ComponentBound) {
    spacing = 2;
    axis = axis_positions(2);
  }
  const auto per_axis = static_cast<std::int64_t>(axis.size());
  if (per_axis * per_axis < wanted) {
    throw DensityInfeasible(std::to_string(wanted) + " dots requested but only " +
                            std::to_string(per_axis * per_axis) + " positions exist");
  }

  // Partial Fisher-Yates over the position indices.
  Rng rng(seed);
  std::vector<std::int32_t> slots(static_cast<std::size_t>(per_axis * per_axis));
  for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = static_cast<std::int32_t>(i);
  DotImage out;
  out.image = Image(n);
  for (std::int64_t i = 0; i < wanted; ++i) {
    const auto j = static_cast<std::size_t>(i) +
                   static_cast<std::size_t>(rng.below(slots.size() - static_cast<std::size_t>(i)));
    std::swap(slots[static_cast<std::size_t>(i)], slots[j]);
    const auto s = slots[static_cast<std::size_t>(i)];
    out.image.set(axis[static_cast<std::size_t>(s % per_axis)], axis[static_cast<std::size_t>(s / per_axis)], true);
  }
  out.dots = wanted;
  out.spacing = spacing;
  out.certificate = certificate;
  out.distance_lower_bound = certificate == FarCertificate::ComponentBound
                                 ? static_cast<double>(wanted - 1) / 3.0
                                 : static_cast<double>(wanted - 1);
  out.certified_far = out.distance_lower_bound >= eps * area;
  return out;
}

void BlankSource::read_row(int, int, std::span<std::uint8_t> out) const {
  std::fill(out.begin(), out.end(), std::uint8_t{0});
}

}  // namespace conntest
