#pragma once

#include <cstdint>
#include <vector>

#include "conntest/image.hpp"

namespace conntest {

// Components of the image graph (black pixels, 4-neighbour edges).
struct ComponentLabeling {
  int side = 0;
  std::vector<std::int32_t> labels;  // row-major; -1 for white pixels
  int component_count = 0;
  std::vector<bool> touches_border;  // per component
  std::vector<std::int64_t> sizes;   // per component

  std::int32_t label(PixelCoord p) const {
    return labels[static_cast<std::size_t>(p.y) * static_cast<std::size_t>(side) +
                  static_cast<std::size_t>(p.x)];
  }
};

// Breadth-first labeling. Ids follow first visit in a row-major scan, with
// neighbours expanded in the order up, down, left, right.
ComponentLabeling connected_components(const Image& image);

// A graph with at most one vertex is connected, so blank images are too.
bool is_connected(const Image& image);

// Every black pixel has a black path to the outermost ring of `image`.
bool is_border_connected(const Image& image);

}  // namespace conntest
