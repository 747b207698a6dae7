#include "conntest/pbm.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <vector>

#include "conntest/errors.hpp"

namespace conntest {
namespace {

void skip_space_and_comments(std::istream& in) {
  while (true) {
    int c = in.peek();
    if (c == '#') {
      in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_int(std::istream& in, const char* what) {
  skip_space_and_comments(in);
  if (!std::isdigit(in.peek())) throw PbmError(std::string("expected ") + what);
  long value = 0;
  while (std::isdigit(in.peek())) {
    value = value * 10 + (in.get() - '0');
    if (value > std::numeric_limits<int>::max()) throw PbmError(std::string(what) + " too large");
  }
  return static_cast<int>(value);
}

}  // namespace

Image read_pbm(std::istream& in) {
  char magic[2] = {0, 0};
  if (!in.read(magic, 2) || magic[0] != 'P' || (magic[1] != '1' && magic[1] != '4')) {
    throw PbmError("missing P1/P4 magic number");
  }
  const bool binary = magic[1] == '4';
  const int width = read_header_int(in, "width");
  const int height = read_header_int(in, "height");
  if (width < 1 || height < 1) throw PbmError("image dimensions must be positive");
  if (width != height) throw PbmError("only square images are supported");

  Image image(width);
  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    if (!std::isspace(in.get())) throw PbmError("malformed header terminator");
    const std::size_t row_bytes = (static_cast<std::size_t>(width) + 7) / 8;
    std::vector<unsigned char> row(row_bytes);
    for (int y = 0; y < height; ++y) {
      if (!in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row_bytes))) {
        throw PbmError("truncated P4 raster");
      }
      for (int x = 0; x < width; ++x) {
        image.set(x, y, (row[static_cast<std::size_t>(x) / 8] >> (7 - x % 8)) & 1U);
      }
    }
  } else {
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        skip_space_and_comments(in);
        const int c = in.get();
        if (c != '0' && c != '1') throw PbmError("truncated or invalid P1 raster");
        image.set(x, y, c == '1');
      }
    }
  }
  return image;
}

Image read_pbm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_pbm(in);
}

void write_pbm(std::ostream& out, const Image& image, PbmFormat format) {
  const int n = image.side();
  if (format == PbmFormat::Binary) {
    out << "P4\n" << n << ' ' << n << '\n';
    std::vector<unsigned char> row((static_cast<std::size_t>(n) + 7) / 8);
    for (int y = 0; y < n; ++y) {
      std::fill(row.begin(), row.end(), 0);
      for (int x = 0; x < n; ++x) {
        if (image.at(x, y)) row[static_cast<std::size_t>(x) / 8] |= 1U << (7 - x % 8);
      }
      out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
  } else {
    out << "P1\n" << n << ' ' << n << '\n';
    for (int y = 0; y < n; ++y) {
      // Lines stay under the 70-character limit.
      for (int x = 0; x < n; ++x) {
        out << (image.at(x, y) ? '1' : '0');
        if ((x + 1) % 64 == 0 || x + 1 == n) out << '\n';
      }
    }
  }
  if (!out) throw IoError("write failed");
}

void write_pbm(const std::filesystem::path& path, const Image& image, PbmFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_pbm(out, image, format);
}

}  // namespace conntest
