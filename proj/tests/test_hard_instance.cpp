#include "doctest.h"

#include <set>
#include <vector>

#include "conntest/components.hpp"
#include "conntest/errors.hpp"
#include "conntest/hard_instance.hpp"

using namespace conntest;

namespace {

HardParams standard() { return make_hard_params(512, Eps::from_log2_inverse(16)); }

}  // namespace

TEST_CASE("parameters at n = 512, eps = 2^-16") {
  const auto p = standard();
  CHECK(p.low == 2);
  CHECK(p.high == 4);
  CHECK(p.levels() == 3);
  CHECK(p.canvas_side() == 513);
  const int windows[] = {128, 256, 512};
  const int per_row[] = {4, 2, 1};
  const int bridges[] = {1, 3, 7};
  for (int i = 2; i <= 4; ++i) {
    CHECK(p.cell_side(i) == (1 << i));
    CHECK(p.window_side(i) == windows[i - 2]);
    CHECK(p.windows_per_row(i) == per_row[i - 2]);
    CHECK(p.cells_per_window_row(i) == 32);
    CHECK(p.bridges_per_square(i) == bridges[i - 2]);
    // Odd cells of a 32 x 32 board, minus the 16 in column 0.
    CHECK(p.bridge_squares_per_window(i) == 496);
    CHECK(bridge_squares(p, i).size() == 496);
    CHECK(black_cell_count(p, i) == 512);
  }
  const auto j = to_json(p);
  CHECK(j["levels"].size() == 3);
  CHECK(j["levels"][0]["windowSide"] == 128);
}

TEST_CASE("invalid parameters are reported") {
  CHECK_THROWS_AS(make_hard_params(512, Eps::from_log2_inverse(8)), InvalidParams);
  CHECK_THROWS_AS(make_hard_params(512, Eps::from_log2_inverse(12)), InvalidParams);
  CHECK_THROWS_AS(make_hard_params(500, Eps::from_log2_inverse(16)), InvalidParams);
  CHECK_THROWS_AS(make_hard_params(64, Eps::from_log2_inverse(16)), InvalidParams);
  CHECK_NOTHROW(make_hard_params(1024, Eps::from_log2_inverse(16)));
  try {
    make_hard_params(500, Eps::from_log2_inverse(12));
    FAIL("expected InvalidParams");
  } catch (const InvalidParams& e) {
    const std::string what = e.what();
    CHECK(what.find("2^(8m)") != std::string::npos);
    CHECK(what.find("power of two") != std::string::npos);
  }
}

TEST_CASE("bridge squares are the white cells off the first column") {
  const auto p = standard();
  for (const auto& b : bridge_squares(p, 3)) {
    CHECK((b.row + b.col) % 2 == 1);
    CHECK(b.col >= 1);
  }
}

TEST_CASE("rendered instances have the expected structure") {
  const auto p = standard();
  std::set<int> levels;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto inst = sample_hard(p, seed);
    const auto& L = inst.layout;
    levels.insert(L.level);
    const int a = p.cell_side(L.level);
    const int ni = p.window_side(L.level);
    const int wx = L.window_col * ni;
    const int wy = L.window_row * ni;
    CHECK(inst.image.side() == 513);
    CHECK(wx % ni == 0);
    CHECK(wy % ni == 0);
    CHECK(L.disconnect.size() == 496u * static_cast<unsigned>(p.bridges_per_square(L.level)));

    // Black cells are solid; every bridge row has exactly one white pixel.
    int solid = 0;
    for (int r = 0; r < 32; ++r) {
      for (int c = 0; c < 32; ++c) {
        int black = 0;
        for (int y = 0; y < a; ++y) {
          for (int x = 0; x < a; ++x) black += inst.image.at(wx + c * a + x, wy + r * a + y);
        }
        if ((r + c) % 2 == 0) {
          solid += black == a * a ? 1 : 0;
        } else if (c == 0) {
          CHECK(black == 0);
        } else {
          CHECK(black == p.bridges_per_square(L.level) * (a - 1));
        }
      }
    }
    CHECK(solid == 512);
    const auto squares = bridge_squares(p, L.level);
    for (std::size_t s = 0; s < squares.size(); s += 37) {
      for (int b = 0; b < p.bridges_per_square(L.level); ++b) {
        const auto gap = disconnecting_pixel(p, L, s, b);
        CHECK_FALSE(inst.image.at(gap));
        const int y = wy + squares[s].row * a + 2 * b + 1;
        CHECK(gap.y == y);
        for (int x = wx + squares[s].col * a; x < wx + (squares[s].col + 1) * a; ++x) {
          CHECK(inst.image.at(x, y) == (x != gap.x));
        }
      }
    }
    // Nothing outside the window except the closing column.
    std::size_t outside = 0;
    for (int y = 0; y < 513; ++y) {
      for (int x = 0; x < 513; ++x) {
        const bool in = x >= wx && x < wx + ni && y >= wy && y < wy + ni;
        if (!in && inst.image.at(x, y)) ++outside;
      }
    }
    CHECK(outside == static_cast<std::size_t>(ni));

    // 512 cells, of which the 16 touching the closing column merge into one.
    const auto audit = farness_audit(inst);
    CHECK(audit.component_count == 497);
    CHECK(audit.distance_lower_bound == doctest::Approx(496.0 / 3));
    CHECK(audit.threshold == doctest::Approx(4.0));
    CHECK(audit.eps_far);
  }
  CHECK(levels.size() == 3);
}

TEST_CASE("sampling is deterministic and covers levels and windows uniformly") {
  const auto p = standard();
  CHECK(sample_hard(p, 42).image == sample_hard(p, 42).image);
  CHECK(to_json(sample_hard(p, 42)).dump() == to_json(sample_hard(p, 42)).dump());
  std::vector<int> per_level(3, 0);
  std::vector<int> level2_windows(16, 0);
  const int trials = 6000;
  for (int t = 0; t < trials; ++t) {
    const auto L = sample_hard_layout(p, static_cast<std::uint64_t>(t));
    ++per_level[static_cast<std::size_t>(L.level - 2)];
    if (L.level == 2) ++level2_windows[static_cast<std::size_t>(L.window_row * 4 + L.window_col)];
    for (auto d : L.disconnect) REQUIRE(d < p.cell_side(L.level));
  }
  for (int c : per_level) CHECK(std::abs(c - trials / 3) < 4 * 37);
  double chi2 = 0.0;
  const double expect = per_level[0] / 16.0;
  for (int h : level2_windows) chi2 += (h - expect) * (h - expect) / expect;
  CHECK(chi2 < 37.7);
}

TEST_CASE("instance json lists every disconnecting pixel") {
  const auto p = standard();
  const auto inst = sample_hard(p, 3);
  const auto j = to_json(inst);
  const auto& pixels = j["disconnectingPixels"];
  CHECK(pixels.size() == inst.layout.disconnect.size());
  const auto first = disconnecting_pixel(p, inst.layout, 0, 0);
  CHECK(pixels[0][0] == first.x);
  CHECK(pixels[0][1] == first.y);
  CHECK(j["level"] == inst.layout.level);
}
