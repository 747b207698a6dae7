#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "conntest/geometry.hpp"
#include "conntest/oracle.hpp"
#include "conntest/random.hpp"

namespace conntest {

enum class Variant { Nonadaptive, Adaptive };

// Knobs of the adaptive square subroutine.
struct DiagonalOptions {
  // Reject as soon as an A-diamond fence holds a black pixel after the
  // B-closure. Off by default.
  bool reject_after_closure = false;
  // Start the randomized BFS from black pixels on B fences as well as from
  // black pixels inside B diamonds. A component living entirely on B fences
  // is otherwise never examined.
  bool bfs_from_fence = true;
};

struct TesterConfig {
  Eps eps = Eps::from_log2_inverse(4);
  Variant variant = Variant::Nonadaptive;
  std::uint64_t seed = 0;
  // Adaptive only. Defaults to budget_multiplier x expected_adaptive_queries;
  // exhausting it accepts.
  std::optional<std::uint64_t> query_budget;
  double budget_multiplier = 8.0;
  DiagonalOptions diagonal;
};

// Padding of an n x n image to n' = 2^j + 1 and rounding of eps.
struct Normalization {
  int original_side = 0;
  int padded_side = 0;
  double requested_eps = 0.0;
  Eps eps = Eps::from_log2_inverse(1);
};

// n' is the smallest 2^j + 1 >= n; eps' is eps * n^2 / n'^2 rounded down to a
// power of 1/2. Requires n >= 2 and eps in (0, 1).
Normalization normalize(int n, double eps);

// n' >= 8 * eps'^(-3/2). Throws PremiseViolated otherwise.
void check_premise(int padded_side, Eps eps);

struct NormalizedInstance {
  Normalization normalization;
  PixelOracle oracle;
};

// Oracle over the virtually padded image; padding answers white.
NormalizedInstance open_instance(std::shared_ptr<const PixelSource> source, double eps,
                                 OracleMode mode, LogPolicy log_policy = LogPolicy::Full);

// Stop value x in [1, k^2] with Pr[x >= j] = 1/j, drawn by inverse transform:
// x = min(floor(1/u), k^2) for u uniform in (0, 1].
class StopSampler {
 public:
  explicit StopSampler(std::int64_t k_squared);
  std::int64_t support() const noexcept { return k_squared_; }
  std::int64_t sample(Rng& rng) const;
  double tail(std::int64_t j) const;  // Pr[x >= j]
  double pmf(std::int64_t j) const;   // Pr[x = j]

 private:
  std::int64_t k_squared_;
};

enum class FailureKind {
  None,
  IsolatedComponent,  // certificate is a whole component that misses the ring
  UnreachableRegion,  // certificate is one black pixel of an A diamond or fence
};

struct SubVerdict {
  bool failed = false;
  FailureKind kind = FailureKind::None;
  std::vector<PixelCoord> certificate;  // global coordinates
};

// Per-call bookkeeping of the adaptive subroutine.
struct DiagonalTrace {
  std::uint64_t lattice_queries = 0;
  int diamonds_in_b = 0;
  int diamonds_in_a = 0;
  std::vector<std::int64_t> bfs_sizes;  // black pixels discovered per BFS
  bool fell_back = false;               // lattice pitch < 3
};

// Reads all k^2 pixels; fails iff the square is not border-connected.
SubVerdict exhaustive_square_test(PixelOracle& oracle, const SquareRef& square);

// Lattice-based adaptive subroutine. Falls back to the exhaustive test when
// the lattice pitch of the square is below 3.
SubVerdict diagonal_square_test(PixelOracle& oracle, const SquareRef& square, Rng& rng,
                                const DiagonalOptions& options = {},
                                DiagonalTrace* trace = nullptr);

enum class Decision { Accept, Reject };

struct Witness {
  SquareRef square;
  FailureKind kind = FailureKind::None;
  std::vector<PixelCoord> certificate;
  PixelCoord outside_black;
};

struct QueryAccounting {
  std::uint64_t total = 0;
  std::uint64_t step1 = 0;
  std::vector<std::uint64_t> per_level;
  std::vector<std::int64_t> bfs_sizes;
};

struct Verdict {
  Decision decision = Decision::Accept;
  std::optional<Witness> witness;
  QueryAccounting queries;
  bool budget_exhausted = false;
  std::uint64_t seed = 0;
  Variant variant = Variant::Nonadaptive;
  Eps eps = Eps::from_log2_inverse(1);
  int side = 0;
};

// The top-level tester. `oracle` must cover a normalized instance
// (side 2^j + 1) satisfying check_premise; its mode must match the variant.
Verdict test_connectedness(PixelOracle& oracle, const TesterConfig& config);

struct QueryReport {
  std::uint64_t total = 0;
  std::uint64_t step1 = 0;
  std::vector<std::uint64_t> per_level;
  std::size_t bfs_runs = 0;
  double bfs_mean_size = 0.0;
  std::int64_t bfs_max_size = 0;
  bool budget_exhausted = false;
};

QueryReport query_report(const Verdict& verdict);

// 8/eps + sum_i 2^(i+1) k_i^2; every nonadaptive run makes exactly this many.
std::uint64_t nonadaptive_query_count(Eps eps);

// 8/eps + sum_i 2^(i+1) (|L_i| + ceil(k_i m_i / 2) (1 + 4 H(k_i^2))), with
// k_i^2 in place of the bracket for levels that fall back.
double expected_adaptive_queries(Eps eps);

// Re-checks a rejection with full knowledge of the image: the square is not
// border-connected, every certificate pixel is black and cut off from the
// ring, and the outside pixel is black and outside the square.
bool verify_certificate(const PixelSource& image, const Verdict& verdict);

const char* to_string(Variant v) noexcept;
const char* to_string(Decision d) noexcept;
const char* to_string(FailureKind k) noexcept;

}  // namespace conntest
