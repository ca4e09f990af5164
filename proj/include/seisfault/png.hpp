#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace seisfault {

// 8-bit PNG, channels 1 (gray) or 3 (RGB), rows top to bottom. Fixed filter
// and compression settings, so equal pixels always give equal bytes.
std::vector<unsigned char> encode_png(std::size_t width, std::size_t height, int channels,
                                      std::span<const std::uint8_t> pixels);

struct DecodedPng {
  std::size_t width = 0;
  std::size_t height = 0;
  int channels = 0;
  std::vector<std::uint8_t> pixels;
};

// Reads back what encode_png writes (unfiltered rows only).
DecodedPng decode_png(std::span<const unsigned char> bytes);

}  // namespace seisfault
