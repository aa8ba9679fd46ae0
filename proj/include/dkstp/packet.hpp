#pragma once

#include "dkstp/pipeline.hpp"

#include <string>

namespace dkstp {

// Packet file, all integers little-endian:
//   "DKSP" | version u8 (=1) | method u8 | gamma u16 | block_w u16 |
//   block_h u16 | image_w u32 | image_h u32 | m u32 |
//   descriptor { kind u8 | rows u32 | cols u32 | seed u64 | scaling u8 } |
//   blocks in column-major block order, each m little-endian f64.
// Round trips are bit-exact.
void write_packet(const CompressedPacket& packet, const std::string& path);
CompressedPacket read_packet(const std::string& path);

// Standalone descriptor file:
//   "DKMD" | version u8 (=1) | kind u8 | rows u32 | cols u32 | seed u64 |
//   scaling u8
void write_descriptor(const MatrixDescriptor& d, const std::string& path);
MatrixDescriptor read_descriptor(const std::string& path);

}  // namespace dkstp
