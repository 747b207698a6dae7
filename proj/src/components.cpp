#include "conntest/components.hpp"

#include <algorithm>

namespace conntest {

ComponentLabeling connected_components(const Image& image) {
  ComponentLabeling out;
  const int n = image.side();
  out.side = n;
  out.labels.assign(image.bits().size(), -1);

  constexpr int kDx[4] = {0, 0, -1, 1};
  constexpr int kDy[4] = {-1, 1, 0, 0};
  std::vector<std::int32_t> queue;
  queue.reserve(1024);

  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const std::size_t start = image.index(x, y);
      if (!image.bits()[start] || out.labels[start] >= 0) continue;
      const std::int32_t id = out.component_count++;
      bool border = false;
      std::int64_t size = 0;
      queue.clear();
      queue.push_back(static_cast<std::int32_t>(start));
      out.labels[start] = id;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const int cx = queue[head] % n;
        const int cy = queue[head] / n;
        ++size;
        border = border || image.on_border({cx, cy});
        for (int d = 0; d < 4; ++d) {
          const int nx = cx + kDx[d];
          const int ny = cy + kDy[d];
          if (nx < 0 || ny < 0 || nx >= n || ny >= n) continue;
          const std::size_t idx = image.index(nx, ny);
          if (image.bits()[idx] && out.labels[idx] < 0) {
            out.labels[idx] = id;
            queue.push_back(static_cast<std::int32_t>(idx));
          }
        }
      }
      out.touches_border.push_back(border);
      out.sizes.push_back(size);
    }
  }
  return out;
}

bool is_connected(const Image& image) { return connected_components(image).component_count <= 1; }

bool is_border_connected(const Image& image) {
  const auto labeling = connected_components(image);
  return std::all_of(labeling.touches_border.begin(), labeling.touches_border.end(),
                     [](bool b) { return b; });
}

}  // namespace conntest
