#include "doctest.h"

#include <cmath>
#include <vector>

#include "conntest/components.hpp"
#include "conntest/errors.hpp"
#include "conntest/generators.hpp"

using namespace conntest;

TEST_CASE("family names") {
  for (auto f : {ConnectedFamily::SpanningTreeBlob, ConnectedFamily::RectangleUnion, ConnectedFamily::Serpentine}) {
    CHECK(parse_family(to_string(f)) == f);
  }
  CHECK_THROWS_AS(parse_family("spiral"), InvalidParams);
}

TEST_CASE("connected families are connected and non-trivial") {
  CHECK(gen_connected(1, ConnectedFamily::Serpentine, 0).black_count() == 1);
  for (auto f : {ConnectedFamily::SpanningTreeBlob, ConnectedFamily::RectangleUnion, ConnectedFamily::Serpentine}) {
    for (int n : {2, 3, 5, 17, 64, 129, 257}) {
      for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto img = gen_connected(n, f, seed);
        CHECK(img.side() == n);
        CHECK(is_connected(img));
        CHECK(img.black_count() >= 1);
        if (n >= 64) CHECK(img.black_count() >= static_cast<std::size_t>(n));
      }
    }
    CHECK(gen_connected(129, f, 4) == gen_connected(129, f, 4));
  }
  CHECK_FALSE(gen_connected(129, ConnectedFamily::SpanningTreeBlob, 1) ==
              gen_connected(129, ConnectedFamily::SpanningTreeBlob, 2));
}

TEST_CASE("dot images") {
  for (auto cert : {FarCertificate::ComponentBound, FarCertificate::NeighborhoodBound}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto d = gen_dot_far(513, 1.0 / 16, seed, cert);
      const double far = 513.0 * 513.0 / 16;
      const auto expected = static_cast<std::int64_t>(std::ceil((cert == FarCertificate::ComponentBound ? 3 : 1) * far)) + 1;
      CHECK(d.dots == expected);
      CHECK(static_cast<std::int64_t>(d.image.black_count()) == d.dots);
      const auto lab = connected_components(d.image);
      CHECK(lab.component_count == d.dots);
      for (int y = 0; y < 513; ++y) {
        for (int x = 0; x < 513; ++x) {
          if (!d.image.at(x, y)) continue;
          CHECK(x % d.spacing == 0);
          CHECK(y % d.spacing == 0);
          CHECK(x >= 2);
          CHECK(y >= 2);
          CHECK(x <= 510);
          CHECK(y <= 510);
        }
      }
      CHECK(d.certified_far);
      CHECK(d.distance_lower_bound >= far);
      if (cert == FarCertificate::NeighborhoodBound) {
        CHECK(d.spacing == 3);
        CHECK(d.distance_lower_bound == doctest::Approx(static_cast<double>(d.dots - 1)));
      } else {
        CHECK(d.distance_lower_bound == doctest::Approx((d.dots - 1) / 3.0));
      }
    }
  }
  // 3 eps n^2 dots do not fit at spacing 3 when eps = 1/16.
  CHECK(gen_dot_far(1025, 1.0 / 16, 0).spacing == 2);
  CHECK(gen_dot_far(1025, 1.0 / 64, 0).spacing == 3);
  CHECK(gen_dot_far(513, 1.0 / 16, 9).image == gen_dot_far(513, 1.0 / 16, 9).image);
  CHECK_THROWS_AS(gen_dot_far(513, 0.3, 0), DensityInfeasible);
  CHECK_THROWS_AS(gen_dot_far(513, 0.2, 0, FarCertificate::NeighborhoodBound), DensityInfeasible);
  CHECK_THROWS_AS(gen_dot_far(4, 0.1, 0), InvalidParams);
}

TEST_CASE("dot positions are uniform over the admissible slots") {
  // n = 12, spacing 3: slots 3, 6, 9 on each axis, nine in total.
  std::vector<int> hits(9, 0);
  const int trials = 9000;
  for (int t = 0; t < trials; ++t) {
    const auto d = gen_dot_far(12, 1.0 / 256, static_cast<std::uint64_t>(t), FarCertificate::NeighborhoodBound);
    REQUIRE(d.dots == 2);
    for (int y = 3; y <= 9; y += 3) {
      for (int x = 3; x <= 9; x += 3) hits[static_cast<std::size_t>((y / 3 - 1) * 3 + x / 3 - 1)] += d.image.at(x, y);
    }
  }
  double chi2 = 0.0;
  const double expect = 2.0 * trials / 9;
  for (int h : hits) chi2 += (h - expect) * (h - expect) / expect;
  CHECK(chi2 < 26.1);  // chi-square, 8 dof, p = 0.001
}

TEST_CASE("procedural sources") {
  const BlankSource blank(1 << 20);
  CHECK(blank.side() == (1 << 20));
  CHECK_FALSE(blank.black(123456, 654321));
  std::vector<std::uint8_t> row(16, 7);
  blank.read_row(5, 100, row);
  for (auto v : row) CHECK(v == 0);

  const CombSource comb(33, 4);
  Image img(33);
  for (int y = 0; y < 33; ++y) {
    for (int x = 0; x < 33; ++x) img.set(x, y, comb.black(x, y));
  }
  CHECK(is_connected(img));
  CHECK(comb.black(8, 20));
  CHECK_FALSE(comb.black(9, 20));
  CHECK(comb.black(9, 0));
  comb.read_row(3, 2, row);
  for (std::size_t i = 0; i < row.size(); ++i) CHECK(row[i] == ((2 + i) % 4 == 0 ? 1 : 0));
}
