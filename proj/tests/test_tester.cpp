#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "conntest/components.hpp"
#include "conntest/errors.hpp"
#include "conntest/generators.hpp"
#include "conntest/tester.hpp"
#include "conntest/verdict_json.hpp"

using namespace conntest;

namespace {

// The image restricted to a square, with the same local layout.
Image square_contents(const Image& img, const SquareRef& s) { return img.crop(s.u + 1, s.v + 1, s.k); }

Verdict run(const Image& img, Eps eps, Variant variant, std::uint64_t seed, DiagonalOptions diag = {}) {
  PixelOracle oracle(make_source(img),
                     variant == Variant::Adaptive ? OracleMode::Adaptive : OracleMode::Nonadaptive);
  TesterConfig config;
  config.eps = eps;
  config.variant = variant;
  config.seed = seed;
  config.diagonal = diag;
  return test_connectedness(oracle, config);
}

}  // namespace

TEST_CASE("normalization examples") {
  const auto a = normalize(10, 0.5);
  CHECK(a.padded_side == 17);
  CHECK(a.eps == Eps::from_log2_inverse(3));
  const auto b = normalize(513, 1.0 / 16);
  CHECK(b.padded_side == 513);
  CHECK(b.eps == Eps::from_log2_inverse(4));
  CHECK(normalize(2, 0.5).padded_side == 2);
  CHECK(normalize(3, 0.5).padded_side == 3);
  CHECK(normalize(4, 0.5).padded_side == 5);
  CHECK_THROWS_AS(normalize(1, 0.5), OutOfRange);
  CHECK_THROWS_AS(normalize(10, 1.0), InvalidEps);
  for (int n = 2; n < 3000; n += 7) {
    const auto r = normalize(n, 0.3);
    CHECK(r.padded_side >= n);
    CHECK(is_power_of_two(r.padded_side - 1));
    CHECK(r.padded_side - 1 < 2 * (n - 1));
    const double scaled = 0.3 * n * n / (static_cast<double>(r.padded_side) * r.padded_side);
    CHECK(r.eps.value() <= scaled);
    CHECK(2 * r.eps.value() > scaled);
  }
}

TEST_CASE("premise") {
  CHECK_NOTHROW(check_premise(513, Eps::from_log2_inverse(4)));
  CHECK_THROWS_AS(check_premise(257, Eps::from_log2_inverse(4)), PremiseViolated);
  CHECK_THROWS_AS(run(Image(129), Eps::from_log2_inverse(4), Variant::Adaptive, 1), PremiseViolated);
  CHECK_THROWS_AS(run(Image(600), Eps::from_log2_inverse(4), Variant::Adaptive, 1), NotNormalized);
}

TEST_CASE("stop sampler distribution") {
  const StopSampler stop(3969);
  CHECK(stop.pmf(1) == doctest::Approx(0.5));
  CHECK(stop.pmf(2) == doctest::Approx(1.0 / 6));
  CHECK(stop.pmf(3969) == doctest::Approx(1.0 / 3969));
  CHECK(stop.pmf(0) == 0.0);
  CHECK(stop.pmf(3970) == 0.0);
  double total = 0.0;
  for (std::int64_t j = 1; j <= 3969; ++j) total += stop.pmf(j);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  for (std::int64_t j : {1, 2, 7, 100, 3969}) CHECK(stop.tail(j) == doctest::Approx(1.0 / j));
  CHECK(stop.tail(3970) == 0.0);

  Rng rng(11);
  const int draws = 1000000;
  std::vector<std::int64_t> hist(3970, 0);
  for (int t = 0; t < draws; ++t) {
    const auto x = stop.sample(rng);
    REQUIRE(x >= 1);
    REQUIRE(x <= 3969);
    ++hist[static_cast<std::size_t>(x)];
  }
  // Dvoretzky-Kiefer-Wolfowitz band at alpha = 1e-3.
  const double band = std::sqrt(std::log(2.0 / 1e-3) / (2.0 * draws));
  double cdf = 0.0;
  double emp = 0.0;
  double worst = 0.0;
  for (std::int64_t j = 1; j <= 3969; ++j) {
    cdf += stop.pmf(j);
    emp += static_cast<double>(hist[static_cast<std::size_t>(j)]) / draws;
    worst = std::max(worst, std::abs(cdf - emp));
  }
  CHECK(worst < band);
  std::int64_t at_least7 = 0;
  for (std::size_t j = 7; j < hist.size(); ++j) at_least7 += hist[j];
  CHECK(static_cast<double>(at_least7) / draws == doctest::Approx(1.0 / 7).epsilon(0.002 * 7));
}

TEST_CASE("exhaustive square test examples") {
  const SquareRef s{0, 7, 0, 0};
  Image img(9);
  auto oracle = [&] { return PixelOracle(make_source(img), OracleMode::Adaptive); };
  {
    auto o = oracle();
    CHECK_FALSE(exhaustive_square_test(o, s).failed);
    CHECK(o.count() == 49);
  }
  img.set(4, 4, true);
  {
    auto o = oracle();
    const auto v = exhaustive_square_test(o, s);
    CHECK(v.failed);
    CHECK(v.kind == FailureKind::IsolatedComponent);
    CHECK(v.certificate == std::vector<PixelCoord>{{4, 4}});
  }
  for (int x = 1; x <= 4; ++x) img.set(x, 4, true);
  {
    auto o = oracle();
    CHECK_FALSE(exhaustive_square_test(o, s).failed);
  }
  // Grid pixels are outside the square and do not rescue it.
  img = Image(9);
  img.set(0, 4, true);
  img.set(2, 4, true);
  {
    auto o = oracle();
    const auto v = exhaustive_square_test(o, s);
    CHECK(v.failed);
    CHECK(v.certificate == std::vector<PixelCoord>{{2, 4}});
  }
}

TEST_CASE("exhaustive test agrees with border connectivity") {
  Rng rng(5);
  const SquareRef s{0, 7, 0, 0};
  for (int t = 0; t < 2000; ++t) {
    Image img(9);
    const double density = 0.1 + 0.6 * rng.unit();
    for (int y = 0; y < 9; ++y) {
      for (int x = 0; x < 9; ++x) img.set(x, y, rng.bernoulli(density));
    }
    PixelOracle o(make_source(img), OracleMode::Adaptive);
    const auto v = exhaustive_square_test(o, s);
    const auto local = square_contents(img, s);
    CHECK(v.failed == !is_border_connected(local));
    if (v.failed) {
      const auto lab = connected_components(local);
      const auto id = lab.label({v.certificate[0].x - 1, v.certificate[0].y - 1});
      CHECK(lab.sizes[static_cast<std::size_t>(id)] == static_cast<std::int64_t>(v.certificate.size()));
      CHECK_FALSE(lab.touches_border[static_cast<std::size_t>(id)]);
    }
  }
}

TEST_CASE("diagonal test on a blank square reads the lattice and little else") {
  const SquareRef s{0, 63, 0, 0};
  const auto lattice = lattice_size(63, 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PixelOracle o(make_source(Image(65)), OracleMode::Adaptive);
    Rng rng(seed);
    DiagonalTrace trace;
    CHECK_FALSE(diagonal_square_test(o, s, rng, {}, &trace).failed);
    CHECK(trace.lattice_queries == static_cast<std::uint64_t>(lattice));
    CHECK(o.count() >= static_cast<std::uint64_t>(lattice));
    CHECK(o.count() <= static_cast<std::uint64_t>(lattice) + 95);
    CHECK(trace.bfs_sizes.empty());
    CHECK_FALSE(trace.fell_back);
  }
}

TEST_CASE("diagonal test never re-queries a pixel within one call") {
  Rng pick(9);
  const SquareRef s{0, 63, 0, 0};
  for (int t = 0; t < 30; ++t) {
    Image img(65);
    for (int y = 1; y <= 63; ++y) {
      for (int x = 1; x <= 63; ++x) img.set(x, y, pick.bernoulli(0.55));
    }
    PixelOracle o(make_source(img), OracleMode::Adaptive);
    Rng rng(static_cast<std::uint64_t>(t));
    diagonal_square_test(o, s, rng);
    std::set<PixelCoord> distinct;
    for (const auto& r : o.log()) distinct.insert(r.pixel);
    CHECK(distinct.size() == o.log().size());
  }
}

TEST_CASE("centred dot is caught at the sampling rate") {
  // (32, 33) is off the lattice and its diamond misses the ring, so only a
  // direct hit in Step 4 can find it.
  Image img(65);
  img.set(32, 33, true);
  const SquareRef s{0, 63, 0, 0};
  const int trials = 20000;
  int fails = 0;
  for (int t = 0; t < trials; ++t) {
    PixelOracle o(make_source(img), OracleMode::Adaptive, 0, LogPolicy::CountOnly);
    Rng rng(derive_seed(77, static_cast<std::uint64_t>(t)));
    const auto v = diagonal_square_test(o, s, rng);
    if (v.failed) {
      ++fails;
      CHECK(v.certificate == std::vector<PixelCoord>{{32, 33}});
    }
  }
  const double p = 1.0 - std::pow(1.0 - 1.0 / (63.0 * 63.0), 95.0);
  const double sigma = std::sqrt(p * (1 - p) / trials);
  CHECK(std::abs(static_cast<double>(fails) / trials - p) < 3 * sigma);
}

TEST_CASE("small squares fall back to the exhaustive test") {
  Rng pick(21);
  const SquareRef s{0, 15, 0, 0};
  for (int t = 0; t < 200; ++t) {
    Image img(17);
    for (int y = 1; y <= 15; ++y) {
      for (int x = 1; x <= 15; ++x) img.set(x, y, pick.bernoulli(0.4));
    }
    PixelOracle a(make_source(img), OracleMode::Adaptive);
    PixelOracle b(make_source(img), OracleMode::Adaptive);
    Rng rng(1);
    DiagonalTrace trace;
    const auto va = diagonal_square_test(a, s, rng, {}, &trace);
    const auto vb = exhaustive_square_test(b, s);
    CHECK(trace.fell_back);
    CHECK(va.failed == vb.failed);
    CHECK(va.certificate == vb.certificate);
    CHECK(a.log() == b.log());
  }
}

TEST_CASE("an isolated dot on a B fence is only found when fences seed the search") {
  // (3, 3) local is a lattice pixel; every diamond around it reaches the ring
  // through the black pixel itself, so it sits on B fences only.
  Image img(65);
  img.set(3, 3, true);
  const SquareRef s{0, 63, 0, 0};
  int literal_fails = 0;
  int default_fails = 0;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    DiagonalOptions literal;
    literal.bfs_from_fence = false;
    PixelOracle a(make_source(img), OracleMode::Adaptive, 0, LogPolicy::CountOnly);
    PixelOracle b(make_source(img), OracleMode::Adaptive, 0, LogPolicy::CountOnly);
    Rng ra(static_cast<std::uint64_t>(t));
    Rng rb(static_cast<std::uint64_t>(t));
    literal_fails += diagonal_square_test(a, s, ra, literal).failed ? 1 : 0;
    default_fails += diagonal_square_test(b, s, rb).failed ? 1 : 0;
  }
  CHECK(literal_fails == 0);
  const double p = 1.0 - std::pow(1.0 - 1.0 / (63.0 * 63.0), 95.0);
  const double sigma = std::sqrt(p * (1 - p) / trials);
  CHECK(std::abs(static_cast<double>(default_fails) / trials - p) < 3 * sigma);
}

TEST_CASE("diagonal failures are sound on random squares") {
  Rng pick(31);
  const SquareRef s{0, 63, 0, 0};
  for (int t = 0; t < 300; ++t) {
    Image img(65);
    const double density = 0.05 + 0.6 * pick.unit();
    for (int y = 1; y <= 63; ++y) {
      for (int x = 1; x <= 63; ++x) img.set(x, y, pick.bernoulli(density));
    }
    PixelOracle o(make_source(img), OracleMode::Adaptive);
    Rng rng(static_cast<std::uint64_t>(t));
    const auto v = diagonal_square_test(o, s, rng);
    if (!v.failed) continue;
    const auto local = square_contents(img, s);
    const auto lab = connected_components(local);
    CHECK_FALSE(is_border_connected(local));
    for (const auto& p : v.certificate) {
      CHECK(img.at(p));
      const auto id = lab.label({p.x - 1, p.y - 1});
      CHECK_FALSE(lab.touches_border[static_cast<std::size_t>(id)]);
    }
  }
}

TEST_CASE("a large blob hanging from the ring by a thin stem never fails") {
  Image img(65);
  for (int y = 5; y <= 58; ++y) {
    for (int x = 5; x <= 58; ++x) img.set(x, y, true);
  }
  for (int y = 1; y < 5; ++y) img.set(30, y, true);
  const SquareRef s{0, 63, 0, 0};
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    PixelOracle o(make_source(img), OracleMode::Adaptive, 0, LogPolicy::CountOnly);
    Rng rng(seed);
    DiagonalOptions eager;
    eager.reject_after_closure = true;
    CHECK_FALSE(diagonal_square_test(o, s, rng).failed);
    CHECK_FALSE(diagonal_square_test(o, s, rng, eager).failed);
  }
}

TEST_CASE("connected images are always accepted") {
  const auto eps = Eps::from_log2_inverse(4);
  for (auto family : {ConnectedFamily::SpanningTreeBlob, ConnectedFamily::RectangleUnion,
                      ConnectedFamily::Serpentine}) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const Image img = gen_connected(513, family, seed);
      REQUIRE(is_connected(img));
      for (auto variant : {Variant::Nonadaptive, Variant::Adaptive}) {
        for (std::uint64_t run_seed = 0; run_seed < 3; ++run_seed) {
          CHECK(run(img, eps, variant, 100 * seed + run_seed).decision == Decision::Accept);
        }
      }
    }
  }
  // Blob inside a level-0 square, joined to the grid through one pixel.
  Image img(513);
  for (int x = 0; x < 513; ++x) img.set(x, 0, true);
  for (int y = 5; y <= 60; ++y) {
    for (int x = 5; x <= 60; ++x) img.set(x, y, true);
  }
  for (int y = 1; y < 5; ++y) img.set(30, y, true);
  REQUIRE(is_connected(img));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(run(img, eps, Variant::Adaptive, seed).decision == Decision::Accept);
    CHECK(run(img, eps, Variant::Nonadaptive, seed).decision == Decision::Accept);
  }
}

TEST_CASE("nonadaptive queries do not depend on the image") {
  const auto eps = Eps::from_log2_inverse(4);
  Image comb(513);
  for (int y = 0; y < 513; ++y) {
    for (int x = 0; x < 513; ++x) comb.set(x, y, y == 0 || x % 5 == 0);
  }
  const auto dots = gen_dot_far(513, 1.0 / 16, 3).image;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::vector<std::vector<PixelCoord>> logs;
    for (const Image* img : std::vector<const Image*>{&comb, &dots}) {
      PixelOracle o(make_source(*img), OracleMode::Nonadaptive);
      TesterConfig config;
      config.eps = eps;
      config.seed = seed;
      const auto v = test_connectedness(o, config);
      CHECK(v.queries.total == nonadaptive_query_count(eps));
      CHECK(o.registered_count() == nonadaptive_query_count(eps));
      std::vector<PixelCoord> pixels;
      for (const auto& r : o.log()) pixels.push_back(r.pixel);
      logs.push_back(std::move(pixels));
    }
    CHECK(logs[0] == logs[1]);
  }
  CHECK(nonadaptive_query_count(eps) == 128 + 2 * 3969 + 4 * 961 + 8 * 225 + 16 * 49);
}

TEST_CASE("rejections on far images carry sound certificates") {
  const auto eps = Eps::from_log2_inverse(4);
  int rejections = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto dots = gen_dot_far(513, 1.0 / 16, seed);
    REQUIRE(dots.certified_far);
    const ImageSource src(dots.image);
    for (auto variant : {Variant::Nonadaptive, Variant::Adaptive}) {
      const auto v = run(dots.image, eps, variant, seed);
      if (v.decision != Decision::Reject) continue;
      ++rejections;
      CHECK(verify_certificate(src, v));
      Verdict tampered = v;
      tampered.witness->outside_black = tampered.witness->certificate.front();
      CHECK_FALSE(verify_certificate(src, tampered));
    }
  }
  CHECK(rejections >= 15);
}

TEST_CASE("budget exhaustion accepts") {
  const auto dots = gen_dot_far(513, 1.0 / 16, 1);
  PixelOracle o(make_source(dots.image), OracleMode::Adaptive);
  TesterConfig config;
  config.eps = Eps::from_log2_inverse(4);
  config.variant = Variant::Adaptive;
  config.query_budget = 1000;
  const auto v = test_connectedness(o, config);
  CHECK(v.decision == Decision::Accept);
  CHECK(v.budget_exhausted);
  CHECK(v.queries.total <= 1000);
  CHECK_FALSE(v.witness);
  CHECK(o.query({0, 0}) == dots.image.at(0, 0));
}

TEST_CASE("variant and oracle mode must agree") {
  PixelOracle o(make_source(Image(513)), OracleMode::Nonadaptive);
  TesterConfig config;
  config.eps = Eps::from_log2_inverse(4);
  config.variant = Variant::Adaptive;
  CHECK_THROWS_AS(test_connectedness(o, config), PhaseViolation);
}

TEST_CASE("verdicts are reproducible from the seed") {
  const auto dots = gen_dot_far(513, 1.0 / 16, 4);
  for (auto variant : {Variant::Nonadaptive, Variant::Adaptive}) {
    const auto a = to_json(run(dots.image, Eps::from_log2_inverse(4), variant, 99));
    const auto b = to_json(run(dots.image, Eps::from_log2_inverse(4), variant, 99));
    CHECK(a.dump() == b.dump());
    CHECK(a["schemaVersion"] == kSchemaVersion);
    CHECK(a["seed"] == 99);
  }
}

TEST_CASE("expected adaptive cost is below the nonadaptive count for small eps") {
  for (int e = 7; e <= 12; ++e) {
    const auto eps = Eps::from_log2_inverse(e);
    CHECK(expected_adaptive_queries(eps) < static_cast<double>(nonadaptive_query_count(eps)));
  }
}
