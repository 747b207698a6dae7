#include "conntest/tester.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "conntest/diamonds.hpp"
#include "conntest/errors.hpp"

namespace conntest {
namespace {

constexpr int kDx[4] = {0, 0, -1, 1};
constexpr int kDy[4] = {-1, 1, 0, 0};

// Per-thread scratch reused across subroutine calls. Generation stamps avoid
// clearing k^2-sized arrays on every call.
struct Workspace {
  std::vector<std::uint32_t> known;
  std::vector<std::uint8_t> color;
  std::vector<std::uint32_t> seen;
  std::vector<std::int32_t> queue;
  std::uint32_t known_gen = 0;
  std::uint32_t seen_gen = 0;

  void reserve(std::size_t area) {
    if (known.size() < area) {
      known.assign(area, 0);
      color.assign(area, 0);
      seen.assign(area, 0);
      known_gen = 0;
      seen_gen = 0;
    }
  }
  void next_square() {
    if (++known_gen == 0) {
      std::fill(known.begin(), known.end(), 0);
      known_gen = 1;
    }
  }
  void next_search() {
    if (++seen_gen == 0) {
      std::fill(seen.begin(), seen.end(), 0);
      seen_gen = 1;
    }
  }
};

Workspace& workspace() {
  thread_local Workspace ws;
  return ws;
}

// Local indices of one component that misses the ring, or empty when the
// k x k block is border-connected.
std::vector<std::int32_t> isolated_component(const std::uint8_t* cells, int k) {
  const auto area = static_cast<std::size_t>(k) * static_cast<std::size_t>(k);
  std::vector<std::uint8_t> reached(area, 0);
  std::vector<std::int32_t> queue;
  auto is_ring = [k](int x, int y) { return x == 0 || y == 0 || x == k - 1 || y == k - 1; };
  auto flood = [&](std::size_t first) {
    std::size_t head = first;
    while (head < queue.size()) {
      const std::int32_t idx = queue[head++];
      const int x = idx % k;
      const int y = idx / k;
      for (int d = 0; d < 4; ++d) {
        const int nx = x + kDx[d];
        const int ny = y + kDy[d];
        if (nx < 0 || ny < 0 || nx >= k || ny >= k) continue;
        const std::int32_t n = ny * k + nx;
        if (cells[n] && !reached[n]) {
          reached[n] = 1;
          queue.push_back(n);
        }
      }
    }
  };
  for (int y = 0; y < k; ++y) {
    for (int x = 0; x < k; ++x) {
      const std::int32_t idx = y * k + x;
      if (is_ring(x, y) && cells[idx] && !reached[idx]) {
        reached[idx] = 1;
        queue.push_back(idx);
      }
    }
  }
  flood(0);
  for (std::int32_t idx = 0; idx < static_cast<std::int32_t>(area); ++idx) {
    if (cells[idx] && !reached[idx]) {
      queue.clear();
      reached[idx] = 1;
      queue.push_back(idx);
      flood(0);
      return queue;
    }
  }
  return {};
}

SubVerdict isolated_verdict(const std::uint8_t* cells, const SquareRef& square) {
  SubVerdict out;
  const auto component = isolated_component(cells, square.k);
  if (component.empty()) return out;
  out.failed = true;
  out.kind = FailureKind::IsolatedComponent;
  out.certificate.reserve(component.size());
  for (auto idx : component) {
    out.certificate.push_back(square.global(idx % square.k + 1, idx / square.k + 1));
  }
  std::sort(out.certificate.begin(), out.certificate.end());
  return out;
}

double harmonic(double n) {
  if (n < 64) {
    double h = 0.0;
    for (int j = 1; j <= static_cast<int>(n); ++j) h += 1.0 / j;
    return h;
  }
  return std::log(n) + 0.5772156649015329 + 1.0 / (2 * n) - 1.0 / (12 * n * n);
}

void check_normalized(int n, Eps eps) {
  if (n < 2 || !is_power_of_two(n - 1)) {
    throw NotNormalized("side " + std::to_string(n) + " is not 2^j + 1");
  }
  check_premise(n, eps);
  LevelGeometry::make(n, eps, 0);
}

}  // namespace

Normalization normalize(int n, double eps) {
  if (n < 2) throw OutOfRange("normalization needs n >= 2");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidEps("eps must lie in (0, 1)");
  std::int64_t padded = 2;
  while (padded < n) padded = 2 * (padded - 1) + 1;
  if (padded > std::numeric_limits<int>::max()) throw OutOfRange("padded side overflows");
  const double scaled = eps * static_cast<double>(n) * static_cast<double>(n) /
                        (static_cast<double>(padded) * static_cast<double>(padded));
  return {n, static_cast<int>(padded), eps, Eps::round_down(scaled)};
}

void check_premise(int padded_side, Eps eps) {
  const double needed = 8.0 * std::pow(2.0, 1.5 * eps.log2_inverse());
  if (static_cast<double>(padded_side) < needed) {
    throw PremiseViolated("side " + std::to_string(padded_side) + " < 8 eps^(-3/2) = " +
                          std::to_string(needed) + " at eps = " + eps.to_string());
  }
}

NormalizedInstance open_instance(std::shared_ptr<const PixelSource> source, double eps,
                                 OracleMode mode, LogPolicy log_policy) {
  const auto norm = normalize(source->side(), eps);
  check_premise(norm.padded_side, norm.eps);
  return {norm, PixelOracle(std::move(source), mode, norm.padded_side, log_policy)};
}

StopSampler::StopSampler(std::int64_t k_squared) : k_squared_(k_squared) {
  if (k_squared < 1) throw OutOfRange("stop sampler support must be >= 1");
}

std::int64_t StopSampler::sample(Rng& rng) const {
  const double inv = 1.0 / rng.unit_open_closed();
  if (inv >= static_cast<double>(k_squared_)) return k_squared_;
  return static_cast<std::int64_t>(inv);
}

double StopSampler::tail(std::int64_t j) const {
  if (j <= 1) return 1.0;
  if (j > k_squared_) return 0.0;
  return 1.0 / static_cast<double>(j);
}

double StopSampler::pmf(std::int64_t j) const {
  if (j < 1 || j > k_squared_) return 0.0;
  if (j == k_squared_) return 1.0 / static_cast<double>(j);
  const double d = static_cast<double>(j);
  return 1.0 / (d * (d + 1.0));
}

SubVerdict exhaustive_square_test(PixelOracle& oracle, const SquareRef& square) {
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(square.k) * static_cast<std::size_t>(square.k));
  oracle.query_rect(square.rect(), cells);
  return isolated_verdict(cells.data(), square);
}

SubVerdict diagonal_square_test(PixelOracle& oracle, const SquareRef& square, Rng& rng,
                                const DiagonalOptions& options, DiagonalTrace* trace) {
  const int k = square.k;
  if (lattice_pitch(k) < 3) {
    if (trace) trace->fell_back = true;
    return exhaustive_square_test(oracle, square);
  }
  const auto dec = DiamondDecomposition::for_side(k);
  const int m = dec->pitch();
  const auto area = static_cast<std::size_t>(k) * static_cast<std::size_t>(k);

  Workspace& ws = workspace();
  ws.reserve(area);
  ws.next_square();
  auto black_at = [&](std::int32_t idx) {
    if (ws.known[idx] != ws.known_gen) {
      ws.known[idx] = ws.known_gen;
      ws.color[idx] = oracle.query(square.global(idx % k + 1, idx / k + 1)) ? 1 : 0;
    }
    return ws.color[idx] != 0;
  };
  auto fail_at = [&](std::int32_t idx) {
    SubVerdict out;
    out.failed = true;
    out.kind = FailureKind::UnreachableRegion;
    out.certificate.push_back(square.global(idx % k + 1, idx / k + 1));
    return out;
  };

  // Step 1: the whole lattice.
  const auto lattice = dec->lattice();
  for (auto idx : lattice) black_at(idx);
  if (trace) trace->lattice_queries += lattice.size();

  // Steps 2 and 3: B starts with the ring diamonds and absorbs every A
  // diamond reachable through a black shared fence pixel.
  const int diamonds = dec->diamond_count();
  std::vector<std::uint8_t> in_b(static_cast<std::size_t>(diamonds), 0);
  std::vector<std::int32_t> frontier;
  for (int d = 0; d < diamonds; ++d) {
    if (dec->touches_ring(d)) {
      in_b[d] = 1;
      frontier.push_back(d);
    }
  }
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    for (auto f : dec->fence(frontier[head])) {
      if (!ws.color[f]) continue;
      for (auto d2 : dec->diamonds_around(dec->lattice_ordinal(f))) {
        if (!in_b[d2]) {
          in_b[d2] = 1;
          frontier.push_back(d2);
        }
      }
    }
  }
  if (trace) {
    trace->diamonds_in_b = static_cast<int>(frontier.size());
    trace->diamonds_in_a = diamonds - trace->diamonds_in_b;
  }
  auto on_a_fence = [&](std::int32_t idx) {
    for (auto d : dec->diamonds_around(dec->lattice_ordinal(idx))) {
      if (!in_b[d]) return true;
    }
    return false;
  };

  if (options.reject_after_closure) {
    for (auto idx : lattice) {
      if (ws.color[idx] && on_a_fence(idx)) return fail_at(idx);
    }
  }

  // Step 4.
  const StopSampler stop(static_cast<std::int64_t>(area));
  const std::int64_t repeats = (static_cast<std::int64_t>(k) * m + 1) / 2;
  for (std::int64_t r = 0; r < repeats; ++r) {
    const auto p = static_cast<std::int32_t>(rng.below(area));
    if (!black_at(p)) continue;
    if (dec->is_lattice(p)) {
      if (on_a_fence(p)) return fail_at(p);
      if (!options.bfs_from_fence) continue;
    } else if (!in_b[dec->diamond_of(p)]) {
      return fail_at(p);
    }

    const std::int64_t x = stop.sample(rng);
    ws.next_search();
    ws.queue.assign(1, p);
    ws.seen[p] = ws.seen_gen;
    auto ring = [k](std::int32_t idx) {
      const int lx = idx % k;
      const int ly = idx / k;
      return lx == 0 || ly == 0 || lx == k - 1 || ly == k - 1;
    };
    bool reached_ring = ring(p);
    std::int64_t found = 1;
    std::size_t head = 0;
    while (!reached_ring && found <= x && head < ws.queue.size()) {
      const std::int32_t cur = ws.queue[head++];
      const int lx = cur % k;
      const int ly = cur / k;
      for (int d = 0; d < 4 && !reached_ring && found <= x; ++d) {
        const int nx = lx + kDx[d];
        const int ny = ly + kDy[d];
        if (nx < 0 || ny < 0 || nx >= k || ny >= k) continue;
        const std::int32_t n = ny * k + nx;
        if (ws.seen[n] == ws.seen_gen) continue;
        ws.seen[n] = ws.seen_gen;
        if (!black_at(n)) continue;
        ws.queue.push_back(n);
        ++found;
        reached_ring = ring(n);
      }
    }
    if (trace) trace->bfs_sizes.push_back(found);
    if (!reached_ring && found <= x) {
      SubVerdict out;
      out.failed = true;
      out.kind = FailureKind::IsolatedComponent;
      for (auto idx : ws.queue) out.certificate.push_back(square.global(idx % k + 1, idx / k + 1));
      std::sort(out.certificate.begin(), out.certificate.end());
      return out;
    }
  }
  return {};
}

Verdict test_connectedness(PixelOracle& oracle, const TesterConfig& config) {
  const int n = oracle.side();
  const Eps eps = config.eps;
  check_normalized(n, eps);
  const bool adaptive = config.variant == Variant::Adaptive;
  if ((oracle.mode() == OracleMode::Adaptive) != adaptive) {
    throw PhaseViolation("oracle mode does not match the tester variant");
  }
  if (!adaptive && oracle.sealed()) throw PhaseViolation("oracle already sealed");

  Verdict verdict;
  verdict.seed = config.seed;
  verdict.variant = config.variant;
  verdict.eps = eps;
  verdict.side = n;
  verdict.queries.per_level.assign(static_cast<std::size_t>(eps.levels()), 0);

  const std::uint64_t start = oracle.count();
  const auto step1_count = static_cast<std::uint64_t>(8 * eps.inverse());
  std::vector<PixelCoord> step1(step1_count);
  {
    Rng rng(derive_seed(config.seed, 1));
    const auto side = static_cast<std::uint64_t>(n);
    for (auto& p : step1) {
      p.x = static_cast<int>(rng.below(side));
      p.y = static_cast<int>(rng.below(side));
    }
  }
  std::vector<SquareRef> squares;
  {
    Rng rng(derive_seed(config.seed, 2));
    for (int level = 0; level < eps.levels(); ++level) {
      for (std::int64_t t = 0; t < (std::int64_t{2} << level); ++t) {
        squares.push_back(sample_square(n, eps, level, rng));
      }
    }
  }

  std::vector<PixelCoord> step1_black;
  auto outside_black = [&](const SquareRef& s) -> std::optional<PixelCoord> {
    for (const auto& p : step1_black) {
      if (!s.contains(p)) return p;
    }
    return std::nullopt;
  };
  auto record_reject = [&](const SquareRef& s, SubVerdict&& sub, PixelCoord outside) {
    verdict.decision = Decision::Reject;
    verdict.witness = Witness{s, sub.kind, std::move(sub.certificate), outside};
  };

  if (!adaptive) {
    for (const auto& p : step1) oracle.register_pixel(p);
    for (const auto& s : squares) oracle.register_rect(s.rect());
    oracle.seal();
    for (const auto& p : step1) {
      if (oracle.query(p)) step1_black.push_back(p);
    }
    verdict.queries.step1 = oracle.count() - start;
    std::vector<std::uint8_t> cells;
    for (const auto& s : squares) {
      cells.resize(static_cast<std::size_t>(s.k) * static_cast<std::size_t>(s.k));
      const std::uint64_t before = oracle.count();
      oracle.query_rect(s.rect(), cells);
      verdict.queries.per_level[static_cast<std::size_t>(s.level)] += oracle.count() - before;
      if (verdict.decision == Decision::Reject || step1_black.empty()) continue;
      auto sub = isolated_verdict(cells.data(), s);
      if (!sub.failed) continue;
      if (auto out = outside_black(s)) record_reject(s, std::move(sub), *out);
    }
    verdict.queries.total = oracle.count() - start;
    return verdict;
  }

  const std::uint64_t budget =
      config.query_budget.value_or(static_cast<std::uint64_t>(
          std::ceil(config.budget_multiplier * expected_adaptive_queries(eps))));
  oracle.set_budget(start + budget < start ? std::numeric_limits<std::uint64_t>::max()
                                           : start + budget);
  int level_in_progress = -1;
  std::uint64_t level_start = 0;
  try {
    for (const auto& p : step1) {
      if (oracle.query(p)) step1_black.push_back(p);
    }
    verdict.queries.step1 = oracle.count() - start;
    const std::uint64_t calls_root = derive_seed(config.seed, 3);
    DiagonalTrace trace;
    for (std::size_t j = 0; j < squares.size(); ++j) {
      const auto& s = squares[j];
      if (s.level != level_in_progress) {
        level_in_progress = s.level;
        level_start = oracle.count();
      }
      Rng rng(derive_seed(calls_root, j));
      const std::uint64_t before = oracle.count();
      auto sub = diagonal_square_test(oracle, s, rng, config.diagonal, &trace);
      verdict.queries.per_level[static_cast<std::size_t>(s.level)] += oracle.count() - before;
      if (!sub.failed) continue;
      if (auto out = outside_black(s)) {
        record_reject(s, std::move(sub), *out);
        break;
      }
    }
    verdict.queries.bfs_sizes = std::move(trace.bfs_sizes);
  } catch (const BudgetExhausted&) {
    verdict.decision = Decision::Accept;
    verdict.witness.reset();
    verdict.budget_exhausted = true;
    if (level_in_progress >= 0) {
      verdict.queries.per_level[static_cast<std::size_t>(level_in_progress)] =
          oracle.count() - level_start;
    } else {
      verdict.queries.step1 = oracle.count() - start;
    }
  }
  oracle.set_budget(std::nullopt);
  verdict.queries.total = oracle.count() - start;
  return verdict;
}

QueryReport query_report(const Verdict& verdict) {
  QueryReport r;
  r.total = verdict.queries.total;
  r.step1 = verdict.queries.step1;
  r.per_level = verdict.queries.per_level;
  r.bfs_runs = verdict.queries.bfs_sizes.size();
  r.budget_exhausted = verdict.budget_exhausted;
  if (!verdict.queries.bfs_sizes.empty()) {
    double sum = 0.0;
    for (auto s : verdict.queries.bfs_sizes) {
      sum += static_cast<double>(s);
      r.bfs_max_size = std::max(r.bfs_max_size, s);
    }
    r.bfs_mean_size = sum / static_cast<double>(r.bfs_runs);
  }
  return r;
}

std::uint64_t nonadaptive_query_count(Eps eps) {
  auto total = static_cast<std::uint64_t>(8 * eps.inverse());
  for (int level = 0; level < eps.levels(); ++level) {
    const auto k = static_cast<std::uint64_t>(level_side(eps, level));
    total += (std::uint64_t{2} << level) * k * k;
  }
  return total;
}

double expected_adaptive_queries(Eps eps) {
  double total = 8.0 * static_cast<double>(eps.inverse());
  for (int level = 0; level < eps.levels(); ++level) {
    const int k = level_side(eps, level);
    const int m = lattice_pitch(k);
    const double k2 = static_cast<double>(k) * k;
    double per_square = k2;
    if (m >= 3) {
      const double repeats = static_cast<double>((static_cast<std::int64_t>(k) * m + 1) / 2);
      per_square = static_cast<double>(lattice_size(k, m)) + repeats * (1.0 + 4.0 * harmonic(k2));
    }
    total += std::ldexp(per_square, level + 1);
  }
  return total;
}

bool verify_certificate(const PixelSource& image, const Verdict& verdict) {
  if (verdict.decision != Decision::Reject) return true;
  if (!verdict.witness) return false;
  const auto& w = verdict.witness.value();
  const auto& s = w.square;
  const int n = verdict.side;
  auto black = [&](PixelCoord p) {
    return p.x >= 0 && p.y >= 0 && p.x < image.side() && p.y < image.side() && image.black(p.x, p.y);
  };
  if (s.k < 1 || s.u < 0 || s.v < 0 || s.u + s.k >= n || s.v + s.k >= n) return false;
  if (w.certificate.empty()) return false;
  if (s.contains(w.outside_black) || !black(w.outside_black)) return false;

  const int k = s.k;
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(k) * static_cast<std::size_t>(k));
  for (int ly = 1; ly <= k; ++ly) {
    for (int lx = 1; lx <= k; ++lx) {
      cells[static_cast<std::size_t>((ly - 1) * k + (lx - 1))] = black(s.global(lx, ly)) ? 1 : 0;
    }
  }
  // Everything that reaches the ring, then check no certificate pixel is in it.
  std::vector<std::uint8_t> reached(cells.size(), 0);
  std::vector<std::int32_t> queue;
  for (std::int32_t idx = 0; idx < static_cast<std::int32_t>(cells.size()); ++idx) {
    const int x = idx % k;
    const int y = idx / k;
    if (cells[idx] && (x == 0 || y == 0 || x == k - 1 || y == k - 1)) {
      reached[idx] = 1;
      queue.push_back(idx);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int x = queue[head] % k;
    const int y = queue[head] / k;
    for (int d = 0; d < 4; ++d) {
      const int nx = x + kDx[d];
      const int ny = y + kDy[d];
      if (nx < 0 || ny < 0 || nx >= k || ny >= k) continue;
      const std::int32_t nidx = ny * k + nx;
      if (cells[nidx] && !reached[nidx]) {
        reached[nidx] = 1;
        queue.push_back(nidx);
      }
    }
  }
  for (const auto& p : w.certificate) {
    if (!s.contains(p)) return false;
    const auto idx = static_cast<std::size_t>((p.y - s.v - 1) * k + (p.x - s.u - 1));
    if (!cells[idx] || reached[idx]) return false;
  }
  return true;
}

const char* to_string(Variant v) noexcept {
  return v == Variant::Adaptive ? "adaptive" : "nonadaptive";
}

const char* to_string(Decision d) noexcept { return d == Decision::Reject ? "reject" : "accept"; }

const char* to_string(FailureKind k) noexcept {
  switch (k) {
    case FailureKind::IsolatedComponent:
      return "isolated-component";
    case FailureKind::UnreachableRegion:
      return "unreachable-region";
    case FailureKind::None:
      break;
  }
  return "none";
}

}  // namespace conntest
