#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "conntest/image.hpp"

namespace conntest {

// Diagonal lattice of a k x k square and the diamonds it cuts out.
//
// Pixels are addressed in square-local coordinates (lx, ly) in [1, k]^2, or
// by their row-major local index (ly - 1) * k + (lx - 1). A pixel is a
// lattice pixel iff m | (lx + ly) or m | (lx - ly). Diamonds are the
// 4-connected components of the remaining pixels; the fence of a diamond is
// the set of lattice pixels with a 4-neighbour inside it.
class DiamondDecomposition {
 public:
  // Throws DegenerateLattice when lattice_pitch(k) < 3.
  explicit DiamondDecomposition(int k);

  // Shared, memoised per k. Thread-safe.
  static std::shared_ptr<const DiamondDecomposition> for_side(int k);

  int side() const noexcept { return k_; }
  int pitch() const noexcept { return m_; }

  std::int32_t local_index(int lx, int ly) const noexcept { return (ly - 1) * k_ + (lx - 1); }
  PixelCoord local_coord(std::int32_t index) const noexcept {
    return {index % k_ + 1, index / k_ + 1};
  }

  bool is_lattice(std::int32_t index) const noexcept { return labels_[index] < 0; }
  // Diamond id of a non-lattice pixel, -1 for lattice pixels.
  std::int32_t diamond_of(std::int32_t index) const noexcept {
    return labels_[index] >= 0 ? labels_[index] : -1;
  }
  // Position of a lattice pixel inside lattice().
  std::int32_t lattice_ordinal(std::int32_t index) const noexcept { return -1 - labels_[index]; }

  // Lattice pixels in row-major order.
  std::span<const std::int32_t> lattice() const noexcept { return lattice_; }
  // Diamonds whose fence contains the given lattice pixel (0 to 4 of them).
  std::span<const std::int32_t> diamonds_around(std::int32_t lattice_ordinal) const noexcept;

  int diamond_count() const noexcept { return static_cast<int>(touches_ring_.size()); }
  // True when the diamond contains a boundary pixel of the square.
  bool touches_ring(std::int32_t diamond) const noexcept { return touches_ring_[diamond] != 0; }
  std::span<const std::int32_t> fence(std::int32_t diamond) const noexcept;

  // Convenience views; linear in the square size.
  std::vector<std::int32_t> diamond_pixels(std::int32_t diamond) const;
  std::vector<std::int32_t> shared_fence(std::int32_t a, std::int32_t b) const;
  std::vector<std::pair<std::int32_t, std::int32_t>> adjacent_pairs() const;

 private:
  int k_;
  int m_;
  std::vector<std::int32_t> labels_;  // >= 0 diamond id, < 0 encodes -1 - lattice ordinal
  std::vector<std::int32_t> lattice_;
  std::vector<std::array<std::int32_t, 4>> around_;  // -1 padded
  std::vector<std::uint8_t> around_count_;
  std::vector<std::uint8_t> touches_ring_;
  std::vector<std::int32_t> fence_offsets_;
  std::vector<std::int32_t> fence_pixels_;
};

}  // namespace conntest
