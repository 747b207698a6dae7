#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "conntest/image.hpp"

namespace conntest {

enum class PbmFormat { Ascii /* P1 */, Binary /* P4 */ };

// Reads P1 or P4. Bit 1 = black. Non-square images, bad headers and
// truncated rasters raise PbmError.
Image read_pbm(std::istream& in);
Image read_pbm(const std::filesystem::path& path);

void write_pbm(std::ostream& out, const Image& image, PbmFormat format = PbmFormat::Binary);
void write_pbm(const std::filesystem::path& path, const Image& image,
               PbmFormat format = PbmFormat::Binary);

}  // namespace conntest
