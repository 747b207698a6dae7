#include "conntest/diamonds.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>
#include <string>

#include "conntest/errors.hpp"
#include "conntest/geometry.hpp"

namespace conntest {
namespace {

constexpr int kDx[4] = {0, 0, -1, 1};
constexpr int kDy[4] = {-1, 1, 0, 0};

}  // namespace

DiamondDecomposition::DiamondDecomposition(int k) : k_(k), m_(lattice_pitch(k)) {
  if (m_ < 3) {
    throw DegenerateLattice("k = " + std::to_string(k) + " gives lattice pitch " + std::to_string(m_));
  }
  const auto area = static_cast<std::size_t>(k) * static_cast<std::size_t>(k);
  constexpr std::int32_t kUnlabelled = std::numeric_limits<std::int32_t>::max();
  labels_.assign(area, kUnlabelled);

  for (int ly = 1; ly <= k; ++ly) {
    for (int lx = 1; lx <= k; ++lx) {
      if ((lx + ly) % m_ == 0 || (lx - ly) % m_ == 0) {
        const auto idx = local_index(lx, ly);
        labels_[idx] = -1 - static_cast<std::int32_t>(lattice_.size());
        lattice_.push_back(idx);
      }
    }
  }

  std::vector<std::int32_t> queue;
  std::int32_t next_id = 0;
  for (std::int32_t start = 0; start < static_cast<std::int32_t>(area); ++start) {
    if (labels_[start] != kUnlabelled) continue;
    const std::int32_t id = next_id++;
    bool ring = false;
    labels_[start] = id;
    queue.assign(1, start);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto [lx, ly] = local_coord(queue[head]);
      ring = ring || lx == 1 || ly == 1 || lx == k || ly == k;
      for (int d = 0; d < 4; ++d) {
        const int nx = lx + kDx[d];
        const int ny = ly + kDy[d];
        if (nx < 1 || ny < 1 || nx > k || ny > k) continue;
        const auto nidx = local_index(nx, ny);
        if (labels_[nidx] == kUnlabelled) {
          labels_[nidx] = id;
          queue.push_back(nidx);
        }
      }
    }
    touches_ring_.push_back(ring ? 1 : 0);
  }

  around_.assign(lattice_.size(), {-1, -1, -1, -1});
  around_count_.assign(lattice_.size(), 0);
  std::vector<std::int32_t> fence_sizes(touches_ring_.size(), 0);
  for (std::size_t ord = 0; ord < lattice_.size(); ++ord) {
    const auto [lx, ly] = local_coord(lattice_[ord]);
    for (int d = 0; d < 4; ++d) {
      const int nx = lx + kDx[d];
      const int ny = ly + kDy[d];
      if (nx < 1 || ny < 1 || nx > k || ny > k) continue;
      const std::int32_t dia = labels_[local_index(nx, ny)];
      if (dia < 0) continue;
      auto& slots = around_[ord];
      auto& count = around_count_[ord];
      if (std::find(slots.begin(), slots.begin() + count, dia) == slots.begin() + count) {
        slots[count++] = dia;
        ++fence_sizes[static_cast<std::size_t>(dia)];
      }
    }
  }

  fence_offsets_.assign(touches_ring_.size() + 1, 0);
  for (std::size_t d = 0; d < fence_sizes.size(); ++d) {
    fence_offsets_[d + 1] = fence_offsets_[d] + fence_sizes[d];
  }
  fence_pixels_.resize(static_cast<std::size_t>(fence_offsets_.back()));
  std::vector<std::int32_t> cursor(fence_offsets_.begin(), fence_offsets_.end() - 1);
  for (std::size_t ord = 0; ord < lattice_.size(); ++ord) {
    for (int j = 0; j < around_count_[ord]; ++j) {
      fence_pixels_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(around_[ord][j])]++)] =
          lattice_[ord];
    }
  }
}

std::shared_ptr<const DiamondDecomposition> DiamondDecomposition::for_side(int k) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const DiamondDecomposition>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[k];
  if (!slot) slot = std::make_shared<const DiamondDecomposition>(k);
  return slot;
}

std::span<const std::int32_t> DiamondDecomposition::diamonds_around(
    std::int32_t lattice_ordinal) const noexcept {
  const auto ord = static_cast<std::size_t>(lattice_ordinal);
  return {around_[ord].data(), around_count_[ord]};
}

std::span<const std::int32_t> DiamondDecomposition::fence(std::int32_t diamond) const noexcept {
  const auto d = static_cast<std::size_t>(diamond);
  return {fence_pixels_.data() + fence_offsets_[d],
          static_cast<std::size_t>(fence_offsets_[d + 1] - fence_offsets_[d])};
}

std::vector<std::int32_t> DiamondDecomposition::diamond_pixels(std::int32_t diamond) const {
  std::vector<std::int32_t> out;
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(labels_.size()); ++i) {
    if (labels_[i] == diamond) out.push_back(i);
  }
  return out;
}

std::vector<std::int32_t> DiamondDecomposition::shared_fence(std::int32_t a, std::int32_t b) const {
  std::vector<std::int32_t> out;
  for (auto pixel : fence(a)) {
    const auto around = diamonds_around(lattice_ordinal(pixel));
    if (std::find(around.begin(), around.end(), b) != around.end()) out.push_back(pixel);
  }
  return out;
}

std::vector<std::pair<std::int32_t, std::int32_t>> DiamondDecomposition::adjacent_pairs() const {
  std::vector<std::pair<std::int32_t, std::int32_t>> out;
  for (std::size_t ord = 0; ord < lattice_.size(); ++ord) {
    for (int i = 0; i < around_count_[ord]; ++i) {
      for (int j = i + 1; j < around_count_[ord]; ++j) {
        out.emplace_back(std::min(around_[ord][i], around_[ord][j]),
                         std::max(around_[ord][i], around_[ord][j]));
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace conntest
