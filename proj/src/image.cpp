#include "conntest/image.hpp"

#include <algorithm>
#include <cstring>

#include "conntest/errors.hpp"

namespace conntest {

void PixelSource::read_row(int y, int x0, std::span<std::uint8_t> out) const {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = black(x0 + static_cast<int>(i), y) ? 1 : 0;
  }
}

Image::Image(int side, bool black) : side_(side) {
  if (side < 1) throw OutOfRange("image side must be >= 1");
  bits_.assign(static_cast<std::size_t>(side) * static_cast<std::size_t>(side),
               black ? 1 : 0);
}

std::size_t Image::black_count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

Image Image::crop(int x0, int y0, int side) const {
  if (x0 < 0 || y0 < 0 || side < 1 || x0 + side > side_ || y0 + side > side_) {
    throw OutOfRange("crop window outside image");
  }
  Image out(side);
  for (int y = 0; y < side; ++y) {
    std::memcpy(out.bits_.data() + out.index(0, y), bits_.data() + index(x0, y0 + y),
                static_cast<std::size_t>(side));
  }
  return out;
}

Image Image::from_mask(int side, std::uint64_t mask) {
  if (side * side > 64) throw OutOfRange("mask images are limited to 64 pixels");
  Image out(side);
  for (std::size_t i = 0; i < out.bits_.size(); ++i) out.bits_[i] = (mask >> i) & 1U;
  return out;
}

std::uint64_t Image::to_mask() const {
  if (side_ * side_ > 64) throw OutOfRange("mask images are limited to 64 pixels");
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) mask |= std::uint64_t{1} << i;
  }
  return mask;
}

void ImageSource::read_row(int y, int x0, std::span<std::uint8_t> out) const {
  std::memcpy(out.data(), image_->bits().data() + image_->index(x0, y), out.size());
}

std::shared_ptr<const PixelSource> make_source(Image image) {
  return std::make_shared<const ImageSource>(std::move(image));
}

}  // namespace conntest
