#include "seisfault/png.hpp"

#include <cstring>
#include <string>

#include <zlib.h>

#include "seisfault/error.hpp"

namespace seisfault {

namespace {

constexpr unsigned char kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

void put_u32be(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<unsigned char>((v >> s) & 0xFFu));
}

std::uint32_t get_u32be(const unsigned char* p) {
  return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
         (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}

void put_chunk(std::vector<unsigned char>& out, const char* type, const std::vector<unsigned char>& data) {
  put_u32be(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t type_at = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const uLong crc = crc32(0L, out.data() + type_at, static_cast<uInt>(4 + data.size()));
  put_u32be(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

std::vector<unsigned char> encode_png(std::size_t width, std::size_t height, int channels,
                                      std::span<const std::uint8_t> pixels) {
  if (channels != 1 && channels != 3) throw ValidationError("png: channels must be 1 or 3");
  if (width == 0 || height == 0) throw ValidationError("png: empty image");
  const std::size_t stride = width * static_cast<std::size_t>(channels);
  if (pixels.size() != stride * height) throw ValidationError("png: pixel buffer size mismatch");

  std::vector<unsigned char> raw;
  raw.reserve((stride + 1) * height);
  for (std::size_t r = 0; r < height; ++r) {
    raw.push_back(0);  // filter: none
    raw.insert(raw.end(), pixels.begin() + static_cast<long>(r * stride),
               pixels.begin() + static_cast<long>((r + 1) * stride));
  }
  uLongf packed_size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<unsigned char> packed(packed_size);
  if (compress2(packed.data(), &packed_size, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
    throw IoError("png: deflate failed");
  }
  packed.resize(packed_size);

  std::vector<unsigned char> ihdr;
  put_u32be(ihdr, static_cast<std::uint32_t>(width));
  put_u32be(ihdr, static_cast<std::uint32_t>(height));
  ihdr.push_back(8);                          // bit depth
  ihdr.push_back(channels == 1 ? 0 : 2);      // gray or truecolor
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);

  std::vector<unsigned char> out(kSignature, kSignature + 8);
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT", packed);
  put_chunk(out, "IEND", {});
  return out;
}

DecodedPng decode_png(std::span<const unsigned char> bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kSignature, 8) != 0) {
    throw ValidationError("png: bad signature");
  }
  DecodedPng img;
  std::vector<unsigned char> packed;
  std::size_t at = 8;
  while (at + 12 <= bytes.size()) {
    const std::uint32_t len = get_u32be(bytes.data() + at);
    const std::string type(reinterpret_cast<const char*>(bytes.data() + at + 4), 4);
    const unsigned char* data = bytes.data() + at + 8;
    if (at + 12 + len > bytes.size()) throw ValidationError("png: truncated chunk");
    if (type == "IHDR") {
      img.width = get_u32be(data);
      img.height = get_u32be(data + 4);
      img.channels = data[9] == 0 ? 1 : data[9] == 2 ? 3 : 0;
      if (data[8] != 8 || img.channels == 0) throw ValidationError("png: unsupported format");
    } else if (type == "IDAT") {
      packed.insert(packed.end(), data, data + len);
    } else if (type == "IEND") {
      break;
    }
    at += 12 + len;
  }
  const std::size_t stride = img.width * static_cast<std::size_t>(img.channels);
  std::vector<unsigned char> raw((stride + 1) * img.height);
  uLongf raw_size = static_cast<uLongf>(raw.size());
  if (uncompress(raw.data(), &raw_size, packed.data(), static_cast<uLong>(packed.size())) != Z_OK ||
      raw_size != raw.size()) {
    throw ValidationError("png: inflate failed");
  }
  img.pixels.reserve(stride * img.height);
  for (std::size_t r = 0; r < img.height; ++r) {
    if (raw[r * (stride + 1)] != 0) throw ValidationError("png: filtered rows not supported");
    const auto row = raw.begin() + static_cast<long>(r * (stride + 1) + 1);
    img.pixels.insert(img.pixels.end(), row, row + static_cast<long>(stride));
  }
  return img;
}

}  // namespace seisfault
