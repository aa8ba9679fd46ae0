#include "dkstp/image.hpp"

#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

namespace dkstp {

namespace {

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in, const std::string& path) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty())
    fail_invalid("read_pgm: truncated header in " + path);
  return tok;
}

Index parse_dim(const std::string& tok, const std::string& path,
                const char* what) {
  Index v = 0;
  for (char ch : tok) {
    if (ch < '0' || ch > '9')
      fail_invalid("read_pgm: bad " + std::string(what) + " '" + tok +
                   "' in " + path);
    v = v * 10 + (ch - '0');
    if (v > (Index{1} << 30)) fail_invalid("read_pgm: absurd dimension in " + path);
  }
  return v;
}

}  // namespace

GrayImage make_image(Index width, Index height, std::uint8_t fill) {
  require(width >= 1 && height >= 1, "make_image: empty dimensions");
  GrayImage img;
  img.width = width;
  img.height = height;
  img.pixels.assign(static_cast<std::size_t>(width * height), fill);
  return img;
}

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_invalid("read_pgm: cannot open " + path);

  const std::string magic = next_token(in, path);
  if (magic != "P5")
    fail_invalid("read_pgm: " + path + " is not binary PGM (magic '" + magic +
                 "', expected P5)");

  const Index w = parse_dim(next_token(in, path), path, "width");
  const Index h = parse_dim(next_token(in, path), path, "height");
  const Index maxval = parse_dim(next_token(in, path), path, "maxval");
  require(w >= 1 && h >= 1, "read_pgm: empty image in " + path);
  if (maxval != 255)
    fail_invalid("read_pgm: " + path + " has maxval " + std::to_string(maxval) +
                 ", only 255 supported");

  GrayImage img = make_image(w, h);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  const auto got = in.gcount();
  if (got != static_cast<std::streamsize>(img.pixels.size()))
    fail_invalid("read_pgm: " + path + " truncated: expected " +
                 std::to_string(img.pixels.size()) + " payload bytes, got " +
                 std::to_string(got));
  return img;
}

void write_pgm(const GrayImage& image, const std::string& path) {
  require(image.width >= 1 && image.height >= 1, "write_pgm: empty image");
  require(image.pixels.size() ==
              static_cast<std::size_t>(image.width * image.height),
          "write_pgm: pixel buffer size mismatch");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail_invalid("write_pgm: cannot open " + path + " for writing");
  out << "P5\n" << image.width << " " << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) fail_invalid("write_pgm: short write to " + path);
}

}  // namespace dkstp
