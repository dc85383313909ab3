#include "gfl/image_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

namespace gfl {

namespace {

std::vector<std::uint8_t> read_file(const std::string& path) {
  if (!std::filesystem::exists(path))
    fail(ErrorCode::FileNotFound, path);
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::IoError, "read failed for " + path);
  return bytes;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

Image from_bytes(const std::uint8_t* bytes, int height, int width,
                 int channels, bool interleaved) {
  Image img(height, width, channels);
  const std::size_t pixels = static_cast<std::size_t>(height) * width;
  for (int c = 0; c < channels; ++c) {
    double* plane = img.plane(c);
    for (std::size_t i = 0; i < pixels; ++i) {
      const std::uint8_t b =
          interleaved ? bytes[i * channels + c] : bytes[c * pixels + i];
      plane[i] = b / 255.0;
    }
  }
  return img;
}

// ---------------------------------------------------------------- PNM ----

bool is_pnm_space(int ch) {
  return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n';
}

// Reads one whitespace/comment-delimited unsigned integer from the header.
long pnm_next_int(const std::vector<std::uint8_t>& b, std::size_t& pos) {
  while (pos < b.size()) {
    if (b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
    } else if (is_pnm_space(b[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= b.size() || !std::isdigit(b[pos]))
    fail(ErrorCode::CorruptData, "malformed PNM header");
  long value = 0;
  while (pos < b.size() && std::isdigit(b[pos])) {
    value = value * 10 + (b[pos] - '0');
    if (value > 1 << 24) fail(ErrorCode::CorruptData, "PNM header value too large");
    ++pos;
  }
  return value;
}

Image load_pnm(const std::vector<std::uint8_t>& bytes) {
  const int channels = bytes[1] == '5' ? 1 : 3;
  std::size_t pos = 2;
  const long width = pnm_next_int(bytes, pos);
  const long height = pnm_next_int(bytes, pos);
  const long maxval = pnm_next_int(bytes, pos);
  if (maxval != 255)
    fail(ErrorCode::UnsupportedFormat, "only maxval 255 PNM is supported");
  if (pos >= bytes.size() || !is_pnm_space(bytes[pos]))
    fail(ErrorCode::CorruptData, "missing PNM header terminator");
  ++pos; // single whitespace byte before the raster
  const std::size_t expected =
      static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() - pos < expected)
    fail(ErrorCode::CorruptData, "truncated PNM raster");
  return from_bytes(bytes.data() + pos, static_cast<int>(height),
                    static_cast<int>(width), channels, /*interleaved=*/true);
}

void save_pnm(const Image& img, const std::string& path, int channels) {
  if (img.channels != channels)
    fail(ErrorCode::UnsupportedFormat,
         channels == 1 ? "PGM requires a 1-channel image"
                       : "PPM requires a 3-channel image");
  std::string header = channels == 1 ? "P5" : "P6";
  header += "\n" + std::to_string(img.width) + " " +
            std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const std::size_t pixels = static_cast<std::size_t>(img.height) * img.width;
  for (std::size_t i = 0; i < pixels; ++i) {
    for (int c = 0; c < channels; ++c) {
      out.push_back(quantize_sample(img.plane(c)[i]));
    }
  }
  write_file(path, out);
}

// ---------------------------------------------------------------- PNG ----

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G',
                                           0x0D, 0x0A, 0x1A, 0x0A};

std::uint32_t read_u32be(const std::uint8_t* p) {
  return (static_cast<std::uint32_t>(p[0]) << 24) |
         (static_cast<std::uint32_t>(p[1]) << 16) |
         (static_cast<std::uint32_t>(p[2]) << 8) |
         static_cast<std::uint32_t>(p[3]);
}

void push_u32be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::vector<std::uint8_t> zlib_inflate(const std::vector<std::uint8_t>& in,
                                       std::size_t expected_size) {
  std::vector<std::uint8_t> out(expected_size);
  uLongf out_len = static_cast<uLongf>(expected_size);
  const int rc = uncompress(out.data(), &out_len, in.data(),
                            static_cast<uLong>(in.size()));
  if (rc != Z_OK || out_len != expected_size)
    fail(ErrorCode::CorruptData, "PNG image data failed to decompress");
  return out;
}

std::vector<std::uint8_t> zlib_deflate(const std::vector<std::uint8_t>& in) {
  uLongf out_len = compressBound(static_cast<uLong>(in.size()));
  std::vector<std::uint8_t> out(out_len);
  const int rc = compress2(out.data(), &out_len, in.data(),
                           static_cast<uLong>(in.size()), 6);
  if (rc != Z_OK) fail(ErrorCode::IoError, "deflate failed");
  out.resize(out_len);
  return out;
}

int paeth_predictor(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a);
  const int pb = std::abs(p - b);
  const int pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

// Reverses the per-row PNG filters in place over the raw scanline stream.
std::vector<std::uint8_t> unfilter_scanlines(const std::vector<std::uint8_t>& raw,
                                             int height, int width, int bpp) {
  const std::size_t stride = static_cast<std::size_t>(width) * bpp;
  std::vector<std::uint8_t> out(static_cast<std::size_t>(height) * stride);
  for (int y = 0; y < height; ++y) {
    const std::uint8_t filter = raw[static_cast<std::size_t>(y) * (stride + 1)];
    const std::uint8_t* src = raw.data() + static_cast<std::size_t>(y) * (stride + 1) + 1;
    std::uint8_t* cur = out.data() + static_cast<std::size_t>(y) * stride;
    const std::uint8_t* up = y > 0 ? cur - stride : nullptr;
    for (std::size_t x = 0; x < stride; ++x) {
      const int left = x >= static_cast<std::size_t>(bpp) ? cur[x - bpp] : 0;
      const int above = up ? up[x] : 0;
      const int corner = (up && x >= static_cast<std::size_t>(bpp)) ? up[x - bpp] : 0;
      int v = src[x];
      switch (filter) {
        case 0: break;
        case 1: v += left; break;
        case 2: v += above; break;
        case 3: v += (left + above) / 2; break;
        case 4: v += paeth_predictor(left, above, corner); break;
        default: fail(ErrorCode::CorruptData, "unknown PNG filter type");
      }
      cur[x] = static_cast<std::uint8_t>(v & 0xFF);
    }
  }
  return out;
}

Image load_png(const std::vector<std::uint8_t>& bytes) {
  std::size_t pos = 8;
  bool seen_ihdr = false;
  int width = 0, height = 0, channels = 0;
  std::vector<std::uint8_t> idat;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t length = read_u32be(&bytes[pos]);
    if (pos + 12 + length > bytes.size())
      fail(ErrorCode::CorruptData, "truncated PNG chunk");
    const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
    const std::uint8_t* data = &bytes[pos + 8];

    std::uint32_t crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, &bytes[pos + 4], length + 4);
    if (crc != read_u32be(&bytes[pos + 8 + length]))
      fail(ErrorCode::CorruptData, "PNG chunk CRC mismatch");

    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (length != 13) fail(ErrorCode::CorruptData, "bad IHDR length");
      width = static_cast<int>(read_u32be(data));
      height = static_cast<int>(read_u32be(data + 4));
      const int bit_depth = data[8];
      const int color_type = data[9];
      const int interlace = data[12];
      if (bit_depth != 8)
        fail(ErrorCode::UnsupportedFormat, "only 8-bit PNG is supported");
      if (color_type == 3)
        fail(ErrorCode::UnsupportedFormat, "palette PNG is not supported");
      if (color_type == 4 || color_type == 6)
        fail(ErrorCode::UnsupportedFormat, "alpha PNG is not supported");
      if (color_type != 0 && color_type != 2)
        fail(ErrorCode::UnsupportedFormat, "unsupported PNG color type");
      if (interlace != 0)
        fail(ErrorCode::UnsupportedFormat, "interlaced PNG is not supported");
      if (width <= 0 || height <= 0)
        fail(ErrorCode::CorruptData, "bad PNG dimensions");
      channels = color_type == 0 ? 1 : 3;
      seen_ihdr = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      if (!seen_ihdr) fail(ErrorCode::CorruptData, "IDAT before IHDR");
      idat.insert(idat.end(), data, data + length);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    // Ancillary chunks are skipped.
    pos += 12 + length;
  }
  if (!seen_ihdr || idat.empty())
    fail(ErrorCode::CorruptData, "PNG missing IHDR or IDAT");

  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  const auto raw = zlib_inflate(idat, static_cast<std::size_t>(height) * (stride + 1));
  const auto pixels = unfilter_scanlines(raw, height, width, channels);
  return from_bytes(pixels.data(), height, width, channels, /*interleaved=*/true);
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  const std::vector<std::uint8_t>& data) {
  push_u32be(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t type_pos = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  std::uint32_t crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, &out[type_pos], static_cast<uInt>(4 + data.size()));
  push_u32be(out, crc);
}

void save_png(const Image& img, const std::string& path) {
  const int channels = img.channels;
  const std::size_t stride = static_cast<std::size_t>(img.width) * channels;
  std::vector<std::uint8_t> raw((stride + 1) * img.height);
  for (int y = 0; y < img.height; ++y) {
    std::uint8_t* row = raw.data() + static_cast<std::size_t>(y) * (stride + 1);
    row[0] = 0; // filter: none
    for (int x = 0; x < img.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * img.width + x;
      for (int c = 0; c < channels; ++c) {
        row[1 + static_cast<std::size_t>(x) * channels + c] =
            quantize_sample(img.plane(c)[i]);
      }
    }
  }

  std::vector<std::uint8_t> out(kPngSignature, kPngSignature + 8);
  std::vector<std::uint8_t> ihdr;
  push_u32be(ihdr, static_cast<std::uint32_t>(img.width));
  push_u32be(ihdr, static_cast<std::uint32_t>(img.height));
  ihdr.push_back(8);                          // bit depth
  ihdr.push_back(channels == 1 ? 0 : 2);      // color type
  ihdr.push_back(0);                          // compression
  ihdr.push_back(0);                          // filter method
  ihdr.push_back(0);                          // no interlace
  append_chunk(out, "IHDR", ihdr);
  append_chunk(out, "IDAT", zlib_deflate(raw));
  append_chunk(out, "IEND", {});
  write_file(path, out);
}

} // namespace

std::uint8_t quantize_sample(double v) {
  v = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

Image load_image(const std::string& path) {
  const auto bytes = read_file(path);
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSignature, 8) == 0)
    return load_png(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6'))
    return load_pnm(bytes);
  fail(ErrorCode::UnsupportedFormat,
       path + " is not a PNG, binary PGM, or binary PPM file");
}

void save_image(const Image& img, const std::string& path) {
  if (img.height <= 0 || img.width <= 0 ||
      (img.channels != 1 && img.channels != 3))
    fail(ErrorCode::InvalidImage, "cannot save an empty or odd-channel image");
  if (!all_finite(img))
    fail(ErrorCode::InvalidImage, "cannot save non-finite samples");
  std::string ext = std::filesystem::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".pgm") {
    save_pnm(img, path, 1);
  } else if (ext == ".ppm") {
    save_pnm(img, path, 3);
  } else {
    save_png(img, path);
  }
}

} // namespace gfl
