#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace conntest {

// (x, y) = (column, row), origin top-left.
struct PixelCoord {
  int x = 0;
  int y = 0;
  friend constexpr auto operator<=>(const PixelCoord&, const PixelCoord&) = default;
};

// Axis-aligned block of pixels, used to register and answer whole squares.
struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;

  constexpr bool contains(PixelCoord p) const noexcept {
    return p.x >= x0 && p.x < x0 + width && p.y >= y0 && p.y < y0 + height;
  }
  constexpr bool contains(const PixelRect& r) const noexcept {
    return r.x0 >= x0 && r.y0 >= y0 && r.x0 + r.width <= x0 + width &&
           r.y0 + r.height <= y0 + height;
  }
  constexpr std::uint64_t area() const noexcept {
    return static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
  }
  friend constexpr bool operator==(const PixelRect&, const PixelRect&) = default;
};

// Anything that can answer "is pixel (x, y) black?" for a side x side grid.
// Lets the testers run on procedurally defined images far larger than memory.
class PixelSource {
 public:
  virtual ~PixelSource() = default;
  virtual int side() const = 0;
  virtual bool black(int x, int y) const = 0;
  // Writes 0/1 for pixels (x0 .. x0+out.size()-1, y). Range must be in bounds.
  virtual void read_row(int y, int x0, std::span<std::uint8_t> out) const;
};

// Square binary image; true = black. Immutable once shared.
class Image {
 public:
  Image() = default;
  explicit Image(int side, bool black = false);

  int side() const noexcept { return side_; }
  bool contains(PixelCoord p) const noexcept {
    return p.x >= 0 && p.y >= 0 && p.x < side_ && p.y < side_;
  }
  bool on_border(PixelCoord p) const noexcept {
    return p.x == 0 || p.y == 0 || p.x == side_ - 1 || p.y == side_ - 1;
  }

  bool at(int x, int y) const noexcept { return bits_[index(x, y)] != 0; }
  bool at(PixelCoord p) const noexcept { return at(p.x, p.y); }
  void set(int x, int y, bool black) noexcept { bits_[index(x, y)] = black ? 1 : 0; }
  void set(PixelCoord p, bool black) noexcept { set(p.x, p.y, black); }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(side_) +
           static_cast<std::size_t>(x);
  }
  std::span<const std::uint8_t> row(int y) const noexcept {
    return {bits_.data() + index(0, y), static_cast<std::size_t>(side_)};
  }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  std::size_t black_count() const noexcept;
  // side x side sub-image with top-left corner (x0, y0); must fit.
  Image crop(int x0, int y0, int side) const;
  // Bit i of `mask` (row-major) is pixel i. side*side <= 64.
  static Image from_mask(int side, std::uint64_t mask);
  std::uint64_t to_mask() const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int side_ = 0;
  std::vector<std::uint8_t> bits_;
};

class ImageSource final : public PixelSource {
 public:
  explicit ImageSource(std::shared_ptr<const Image> image) : image_(std::move(image)) {}
  explicit ImageSource(Image image)
      : image_(std::make_shared<const Image>(std::move(image))) {}

  int side() const override { return image_->side(); }
  bool black(int x, int y) const override { return image_->at(x, y); }
  void read_row(int y, int x0, std::span<std::uint8_t> out) const override;
  const Image& image() const noexcept { return *image_; }

 private:
  std::shared_ptr<const Image> image_;
};

std::shared_ptr<const PixelSource> make_source(Image image);

}  // namespace conntest
