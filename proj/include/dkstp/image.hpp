#pragma once

#include "dkstp/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dkstp {

// 8-bit grayscale image.  Pixels are stored row-major; vectorization for
// measurement stacks columns (column-major), handled by the pipeline.
struct GrayImage {
  Index width = 0;
  Index height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, width*height entries

  std::uint8_t& at(Index x, Index y) { return pixels[y * width + x]; }
  std::uint8_t at(Index x, Index y) const { return pixels[y * width + x]; }
  bool same_shape(const GrayImage& o) const {
    return width == o.width && height == o.height;
  }
};

GrayImage make_image(Index width, Index height, std::uint8_t fill = 0);

// Binary PGM (P5), maxval 255 only.  Header comments are tolerated on read
// and never written; writes emit exactly "P5\n<w> <h>\n255\n" + payload.
GrayImage read_pgm(const std::string& path);
void write_pgm(const GrayImage& image, const std::string& path);

}  // namespace dkstp
