#include "doctest.h"

#include <vector>

#include "conntest/errors.hpp"
#include "conntest/oracle.hpp"

using namespace conntest;

namespace {

std::shared_ptr<const PixelSource> filled(int side, bool black) { return make_source(Image(side, black)); }

}  // namespace

TEST_CASE("adaptive queries answer the bit and count once each") {
  PixelOracle white(filled(4, false), OracleMode::Adaptive);
  CHECK(white.count() == 0);
  CHECK_FALSE(white.query({0, 0}));
  CHECK(white.count() == 1);

  PixelOracle black(filled(4, true), OracleMode::Adaptive);
  CHECK(black.query({3, 3}));
}

TEST_CASE("repeated queries are counted and logged every time") {
  PixelOracle o(filled(4, true), OracleMode::Adaptive);
  for (int i = 0; i < 3; ++i) o.query({1, 1});
  CHECK(o.count() == 3);
  REQUIRE(o.log().size() == 3);
  CHECK(o.log()[2] == QueryRecord{{1, 1}, true});
}

TEST_CASE("out of range queries are rejected") {
  PixelOracle o(filled(4, false), OracleMode::Adaptive);
  CHECK_THROWS_AS(o.query({4, 0}), OutOfRange);
  CHECK_THROWS_AS(o.query({0, -1}), OutOfRange);
  CHECK(o.count() == 0);
}

TEST_CASE("nonadaptive phases") {
  PixelOracle o(filled(4, true), OracleMode::Nonadaptive);
  o.register_pixel({1, 2});
  CHECK_THROWS_AS(o.query({1, 2}), PhaseViolation);
  o.register_rect({0, 0, 2, 2});
  CHECK(o.registered_count() == 5);
  o.seal();
  CHECK(o.sealed());
  CHECK_THROWS_AS(o.seal(), PhaseViolation);
  CHECK_THROWS_AS(o.register_pixel({0, 3}), PhaseViolation);
  CHECK(o.query({1, 2}));
  CHECK(o.query({1, 1}));
  CHECK_THROWS_AS(o.query({3, 3}), PhaseViolation);
  std::vector<std::uint8_t> out(4);
  o.query_rect({0, 0, 2, 2}, out);
  CHECK(o.count() == 6);
  std::vector<std::uint8_t> bad(4);
  CHECK_THROWS_AS(o.query_rect({2, 2, 2, 2}, bad), PhaseViolation);
}

TEST_CASE("registration is refused on adaptive oracles") {
  PixelOracle o(filled(4, true), OracleMode::Adaptive);
  CHECK_THROWS_AS(o.register_pixel({0, 0}), PhaseViolation);
  CHECK_THROWS_AS(o.seal(), PhaseViolation);
}

TEST_CASE("padding answers white and is still counted") {
  PixelOracle o(filled(3, true), OracleMode::Adaptive, 5);
  CHECK(o.side() == 5);
  CHECK(o.query({2, 2}));
  CHECK_FALSE(o.query({3, 0}));
  CHECK_FALSE(o.query({4, 4}));
  CHECK(o.count() == 3);
  std::vector<std::uint8_t> out(25);
  o.query_rect({0, 0, 5, 5}, out);
  int black = 0;
  for (auto b : out) black += b;
  CHECK(black == 9);
  CHECK(o.count() == 28);
  CHECK(o.log().size() == 28);
}

TEST_CASE("count-only logging keeps the counter") {
  PixelOracle o(filled(4, true), OracleMode::Adaptive, 0, LogPolicy::CountOnly);
  o.query({0, 0});
  o.query({0, 0});
  CHECK(o.count() == 2);
  CHECK(o.log().empty());
}

TEST_CASE("identical query sequences give identical logs") {
  Image img(8);
  img.set(3, 4, true);
  img.set(7, 0, true);
  PixelOracle a(make_source(img), OracleMode::Adaptive);
  PixelOracle b(make_source(img), OracleMode::Adaptive);
  for (int i = 0; i < 64; ++i) {
    const PixelCoord p{(i * 5) % 8, (i * 3) % 8};
    a.query(p);
    b.query(p);
  }
  CHECK(a.log() == b.log());
  CHECK(a.count() == b.count());
}

TEST_CASE("budget stops answering") {
  PixelOracle o(filled(4, false), OracleMode::Adaptive);
  o.set_budget(2);
  o.query({0, 0});
  o.query({0, 1});
  CHECK_THROWS_AS(o.query({0, 2}), BudgetExhausted);
  CHECK(o.count() == 2);
  o.set_budget(std::nullopt);
  o.query({0, 2});
  CHECK(o.count() == 3);
}
