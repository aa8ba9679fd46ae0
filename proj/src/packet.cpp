#include "dkstp/packet.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

namespace dkstp {

namespace {

constexpr char kPacketMagic[4] = {'D', 'K', 'S', 'P'};
constexpr char kDescriptorMagic[4] = {'D', 'K', 'M', 'D'};
constexpr std::uint8_t kFormatVersion = 1;
constexpr std::size_t kPacketHeaderBytes = 42;
constexpr std::size_t kDescriptorBytes = 18;

void put_bytes(std::string& out, std::uint64_t v, int n) {
  for (int i = 0; i < n; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

void put_u8(std::string& out, std::uint8_t v) { put_bytes(out, v, 1); }
void put_u16(std::string& out, std::uint16_t v) { put_bytes(out, v, 2); }
void put_u32(std::string& out, std::uint32_t v) { put_bytes(out, v, 4); }
void put_u64(std::string& out, std::uint64_t v) { put_bytes(out, v, 8); }

void put_f64(std::string& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

class ByteReader {
public:
  ByteReader(const std::string& data, std::string what)
    : data_(data), what_(std::move(what)) {}

  std::uint64_t take(int n) {
    if (pos_ + static_cast<std::size_t>(n) > data_.size()) {
      std::ostringstream msg;
      msg << what_ << ": truncated, needed " << (pos_ + n)
        << " bytes but file has " << data_.size();
      throw std::invalid_argument(msg.str());
    }
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(
          static_cast<unsigned char>(data_[pos_ + i]))
        << (8 * i);
    }
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(take(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(take(4)); }
  std::uint64_t u64() { return take(8); }
  double f64() { return std::bit_cast<double>(take(8)); }

  void expect_magic(const char (&magic)[4]) {
    for (char expected : magic) {
      char got = static_cast<char>(take(1));
      if (got != expected) {
        throw std::invalid_argument(what_ + ": bad magic, not a " +
                      std::string(magic, 4) + " file");
      }
    }
  }

  std::size_t position() const { return pos_; }
  std::size_t size() const { return data_.size(); }

private:
  const std::string& data_;
  std::string what_;
  std::size_t pos_ = 0;
};

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument(std::string(what) + ": cannot open " +
                  path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) {
    throw std::invalid_argument(std::string(what) + ": read error on " +
                  path);
  }
  return std::move(buf).str();
}

void write_file(const std::string& path, const std::string& bytes,
        const char* what) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::invalid_argument(std::string(what) + ": cannot open " +
                  path + " for writing");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out.good()) {
    throw std::invalid_argument(std::string(what) + ": write error on " +
                  path);
  }
}

std::uint8_t method_code(Method m) { return static_cast<std::uint8_t>(m); }

Method method_from_code(std::uint8_t code, const std::string& what) {
  switch (code) {
    case 0: return Method::CS;
    case 1: return Method::STPCS;
    case 2: return Method::DKSTPCS;
    default:
      throw std::invalid_argument(what + ": unknown method code " +
                    std::to_string(int(code)));
  }
}

MatrixKind kind_from_code(std::uint8_t code, const std::string& what) {
  switch (code) {
    case 0: return MatrixKind::Gaussian;
    case 1: return MatrixKind::Bernoulli;
    case 2: return MatrixKind::Toeplitz;
    default:
      throw std::invalid_argument(what + ": unknown matrix kind code " +
                    std::to_string(int(code)));
  }
}

Scaling scaling_from_code(std::uint8_t code, const std::string& what) {
  switch (code) {
    case 0: return Scaling::Unit;
    case 1: return Scaling::InvSqrtRows;
    default:
      throw std::invalid_argument(what + ": unknown scaling code " +
                    std::to_string(int(code)));
  }
}

void append_descriptor(std::string& out, const MatrixDescriptor& d) {
  put_u8(out, static_cast<std::uint8_t>(d.kind));
  put_u32(out, d.rows);
  put_u32(out, d.cols);
  put_u64(out, d.seed);
  put_u8(out, static_cast<std::uint8_t>(d.scaling));
}

MatrixDescriptor take_descriptor(ByteReader& r, const std::string& what) {
  MatrixDescriptor d;
  d.kind = kind_from_code(r.u8(), what);
  d.rows = r.u32();
  d.cols = r.u32();
  d.seed = r.u64();
  d.scaling = scaling_from_code(r.u8(), what);
  if (d.rows == 0 || d.cols == 0) {
    throw std::invalid_argument(what + ": descriptor has zero dimension");
  }
  return d;
}

std::uint32_t checked_u32(Index v, const char* field) {
  if (v < 1 || v > static_cast<Index>(std::numeric_limits<std::uint32_t>::max())) {
    throw std::invalid_argument(std::string("packet: ") + field +
                  " out of range for serialization");
  }
  return static_cast<std::uint32_t>(v);
}

std::uint16_t checked_u16(Index v, const char* field) {
  if (v < 1 || v > static_cast<Index>(std::numeric_limits<std::uint16_t>::max())) {
    throw std::invalid_argument(std::string("packet: ") + field +
                  " out of range for serialization");
  }
  return static_cast<std::uint16_t>(v);
}

}  // namespace

void write_packet(const CompressedPacket& packet, const std::string& path) {
  const BlockLayout& layout = packet.layout;
  layout.validate();
  require(packet.format_version == kFormatVersion,
      "packet: unsupported format version");
  require(packet.blocks.rows() == packet.m,
      "packet: block matrix rows do not match measurement count");
  require(packet.blocks.cols() == layout.block_count(),
      "packet: block matrix columns do not match block count");

  std::string out;
  out.reserve(kPacketHeaderBytes +
        static_cast<std::size_t>(packet.blocks.size()) * 8);
  out.append(kPacketMagic, 4);
  put_u8(out, kFormatVersion);
  put_u8(out, method_code(packet.scheme.method));
  put_u16(out, checked_u16(packet.scheme.gamma, "gamma"));
  put_u16(out, checked_u16(layout.block_w, "block width"));
  put_u16(out, checked_u16(layout.block_h, "block height"));
  put_u32(out, checked_u32(layout.image_w, "image width"));
  put_u32(out, checked_u32(layout.image_h, "image height"));
  put_u32(out, checked_u32(packet.m, "measurement count"));
  append_descriptor(out, packet.scheme.descriptor);
  for (Index b = 0; b < packet.blocks.cols(); ++b) {
    for (Index i = 0; i < packet.blocks.rows(); ++i) {
      put_f64(out, packet.blocks(i, b));
    }
  }
  write_file(path, out, "packet");
}

CompressedPacket read_packet(const std::string& path) {
  const std::string bytes = read_file(path, "packet");
  ByteReader r(bytes, "packet " + path);
  r.expect_magic(kPacketMagic);
  const std::uint8_t version = r.u8();
  if (version != kFormatVersion) {
    throw std::invalid_argument("packet " + path +
                  ": unsupported format version " +
                  std::to_string(int(version)));
  }

  CompressedPacket packet;
  packet.format_version = version;
  packet.scheme.method = method_from_code(r.u8(), "packet " + path);
  packet.scheme.gamma = static_cast<Index>(r.u16());
  packet.layout.block_w = static_cast<Index>(r.u16());
  packet.layout.block_h = static_cast<Index>(r.u16());
  packet.layout.image_w = static_cast<Index>(r.u32());
  packet.layout.image_h = static_cast<Index>(r.u32());
  packet.m = static_cast<Index>(r.u32());
  packet.scheme.descriptor = take_descriptor(r, "packet " + path);
  packet.layout.validate();
  require(packet.scheme.gamma >= 1, "packet: gamma must be >= 1");
  require(packet.m >= 1, "packet: measurement count must be >= 1");

  const Index nblocks = packet.layout.block_count();
  const std::size_t expected =
    kPacketHeaderBytes +
    static_cast<std::size_t>(packet.m) * static_cast<std::size_t>(nblocks) * 8;
  if (bytes.size() != expected) {
    std::ostringstream msg;
    msg << "packet " << path << ": expected " << expected
      << " bytes for " << nblocks << " blocks of " << packet.m
      << " measurements, file has " << bytes.size();
    throw std::invalid_argument(msg.str());
  }

  packet.blocks.resize(packet.m, nblocks);
  for (Index b = 0; b < nblocks; ++b) {
    for (Index i = 0; i < packet.m; ++i) {
      packet.blocks(i, b) = r.f64();
    }
  }

  // Rebuild the scheme's derived fields and check the stored descriptor
  // agrees with the declared geometry.
  SensingScheme rebuilt = make_scheme(
    packet.scheme.method, packet.scheme.descriptor.kind,
    packet.scheme.gamma, packet.scheme.descriptor.seed,
    packet.scheme.descriptor.scaling, packet.layout.p(), packet.m);
  require(rebuilt.descriptor.rows == packet.scheme.descriptor.rows &&
        rebuilt.descriptor.cols == packet.scheme.descriptor.cols,
      "packet: stored matrix shape does not match declared geometry");
  packet.scheme = rebuilt;
  return packet;
}

void write_descriptor(const MatrixDescriptor& d, const std::string& path) {
  std::string out;
  out.reserve(4 + 1 + kDescriptorBytes);
  out.append(kDescriptorMagic, 4);
  put_u8(out, kFormatVersion);
  append_descriptor(out, d);
  write_file(path, out, "matrix descriptor");
}

MatrixDescriptor read_descriptor(const std::string& path) {
  const std::string bytes = read_file(path, "matrix descriptor");
  ByteReader r(bytes, "matrix descriptor " + path);
  r.expect_magic(kDescriptorMagic);
  const std::uint8_t version = r.u8();
  if (version != kFormatVersion) {
    throw std::invalid_argument("matrix descriptor " + path +
                  ": unsupported format version " +
                  std::to_string(int(version)));
  }
  MatrixDescriptor d = take_descriptor(r, "matrix descriptor " + path);
  if (r.position() != r.size()) {
    std::ostringstream msg;
    msg << "matrix descriptor " << path << ": expected " << r.position()
      << " bytes, file has " << r.size();
    throw std::invalid_argument(msg.str());
  }
  return d;
}

}  // namespace dkstp
