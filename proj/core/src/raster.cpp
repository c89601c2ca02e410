#include "bu/raster.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string_view>
#include <system_error>
#include <unistd.h>

namespace bu {

namespace {

constexpr double kPfmTolerance = 1e-9;
constexpr long kMaxSide = 1 << 16;

void check_range(std::span<const double> values, double lo, double hi, const char* type) {
  for (double v : values) {
    if (!(v >= lo && v <= hi)) {
      throw Error(ErrorCode::InvalidGrid, std::string(type) + " value out of range: " +
                                              format_real(v));
    }
  }
}

// Strict header tokenizer shared by PGM and PFM. Comments are rejected rather
// than skipped so that each grid has exactly one canonical encoding.
class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  static bool is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  }

  void skip_whitespace() {
    std::size_t start = pos_;
    while (pos_ < bytes_.size() && is_space(bytes_[pos_])) ++pos_;
    if (pos_ == start) fail("expected whitespace");
    if (pos_ < bytes_.size() && bytes_[pos_] == '#') fail("comments are not supported");
  }

  std::string_view token() {
    std::size_t start = pos_;
    while (pos_ < bytes_.size() && !is_space(bytes_[pos_])) {
      if (bytes_[pos_] == '#') fail("comments are not supported");
      ++pos_;
    }
    if (pos_ == start) fail("unexpected end of header");
    return {reinterpret_cast<const char*>(bytes_.data()) + start, pos_ - start};
  }

  long positive_int() {
    auto tok = token();
    long value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || value <= 0 || value > kMaxSide) {
      fail("invalid dimension '" + std::string(tok) + "'");
    }
    return value;
  }

  // Exactly one whitespace byte separates the header from the payload.
  std::span<const std::uint8_t> payload() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) fail("missing header terminator");
    return bytes_.subspan(pos_ + 1);
  }

  [[noreturn]] static void fail(const std::string& what) {
    throw Error(ErrorCode::BadHeader, what);
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;  // past the magic
};

bool has_magic(std::span<const std::uint8_t> bytes, char a, char b) {
  return bytes.size() >= 2 && bytes[0] == static_cast<std::uint8_t>(a) &&
         bytes[1] == static_cast<std::uint8_t>(b);
}

void append(Bytes& out, std::string_view text) { out.insert(out.end(), text.begin(), text.end()); }

Bytes encode_pfm(const Grid<double>& grid) {
  Bytes out;
  append(out, "Pf\n" + std::to_string(grid.width()) + " " + std::to_string(grid.height()) +
                  "\n-1.0\n");
  out.reserve(out.size() + grid.size() * 4);
  for (int y = grid.height() - 1; y >= 0; --y) {
    for (int x = 0; x < grid.width(); ++x) {
      auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(grid(x, y)));
      for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
    }
  }
  return out;
}

}  // namespace

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> data)
    : Grid<std::uint8_t>(width, height, std::move(data)) {
  for (auto v : this->data()) {
    if (v > 1) throw Error(ErrorCode::InvalidGrid, "mask label not in {0,1}");
  }
}

BinaryMask BinaryMask::filled(int width, int height, bool value) {
  return BinaryMask(width, height,
                    std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                                  static_cast<std::size_t>(std::max(height, 0)),
                                              value ? 1 : 0));
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(data().begin(), data().end(), std::uint8_t{1}));
}

ProbMap::ProbMap(int width, int height, std::vector<double> data)
    : Grid<double>(width, height, std::move(data)) {
  check_range(this->data(), 0.0, 1.0, "probability");
}

ProbMap ProbMap::filled(int width, int height, double value) {
  return ProbMap(width, height,
                 std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                         static_cast<std::size_t>(std::max(height, 0)),
                                     value));
}

GrayImage::GrayImage(int width, int height, std::vector<double> data)
    : Grid<double>(width, height, std::move(data)) {
  check_range(this->data(), 0.0, 1.0, "intensity");
}

DistanceMap::DistanceMap(int width, int height, std::vector<double> data)
    : Grid<double>(width, height, std::move(data)) {
  for (double v : this->data()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidGrid, "distance is not finite");
  }
}

ProbMap mask_to_prob(const BinaryMask& mask) {
  std::vector<double> out(mask.data().begin(), mask.data().end());
  return ProbMap(mask.width(), mask.height(), std::move(out));
}

BinaryMask complement(const BinaryMask& mask) {
  std::vector<std::uint8_t> out(mask.size());
  std::transform(mask.data().begin(), mask.data().end(), out.begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(v ^ 1U); });
  return BinaryMask(mask.width(), mask.height(), std::move(out));
}

bool is_subset(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b, "is_subset");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

BinaryMask read_mask_pgm(std::span<const std::uint8_t> bytes) {
  if (!has_magic(bytes, 'P', '5')) throw Error(ErrorCode::NotP5, "missing P5 magic");
  HeaderReader header(bytes);
  header.skip_whitespace();
  const long width = header.positive_int();
  header.skip_whitespace();
  const long height = header.positive_int();
  header.skip_whitespace();
  auto maxval = header.token();
  if (maxval != "255") HeaderReader::fail("maxval must be 255, got '" + std::string(maxval) + "'");
  auto payload = header.payload();

  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (payload.size() != n) {
    HeaderReader::fail("payload has " + std::to_string(payload.size()) + " bytes, expected " +
                       std::to_string(n));
  }
  std::vector<std::uint8_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (payload[i] == 0) {
      labels[i] = 0;
    } else if (payload[i] == 255) {
      labels[i] = 1;
    } else {
      throw Error(ErrorCode::NotBinary,
                  "sample " + std::to_string(payload[i]) + " at offset " + std::to_string(i));
    }
  }
  return BinaryMask(static_cast<int>(width), static_cast<int>(height), std::move(labels));
}

Bytes write_mask_pgm(const BinaryMask& mask) {
  Bytes out;
  append(out, "P5\n" + std::to_string(mask.width()) + " " + std::to_string(mask.height()) +
                  "\n255\n");
  out.reserve(out.size() + mask.size());
  for (auto v : mask.data()) out.push_back(v ? 255 : 0);
  return out;
}

ProbMap read_pfm(std::span<const std::uint8_t> bytes) {
  if (!has_magic(bytes, 'P', 'f')) throw Error(ErrorCode::NotPf, "missing Pf magic");
  HeaderReader header(bytes);
  header.skip_whitespace();
  const long width = header.positive_int();
  header.skip_whitespace();
  const long height = header.positive_int();
  header.skip_whitespace();
  auto scale_tok = header.token();
  double scale = 0.0;
  auto [ptr, ec] = std::from_chars(scale_tok.data(), scale_tok.data() + scale_tok.size(), scale);
  if (ec != std::errc{} || ptr != scale_tok.data() + scale_tok.size()) {
    HeaderReader::fail("invalid scale '" + std::string(scale_tok) + "'");
  }
  if (!(scale < 0.0)) HeaderReader::fail("only little-endian (negative scale) PFM is supported");
  auto payload = header.payload();

  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (payload.size() != n * 4) {
    HeaderReader::fail("payload has " + std::to_string(payload.size()) + " bytes, expected " +
                       std::to_string(n * 4));
  }
  std::vector<double> values(n);
  std::size_t offset = 0;
  for (long y = height - 1; y >= 0; --y) {
    for (long x = 0; x < width; ++x) {
      std::uint32_t bits = 0;
      for (int k = 0; k < 4; ++k) bits |= std::uint32_t{payload[offset + k]} << (8 * k);
      offset += 4;
      const double v = std::bit_cast<float>(bits);
      if (!(v >= -kPfmTolerance && v <= 1.0 + kPfmTolerance)) {
        throw Error(ErrorCode::OutOfRange, "value " + format_real(v) + " at (" +
                                               std::to_string(x) + "," + std::to_string(y) + ")");
      }
      values[static_cast<std::size_t>(y * width + x)] = std::clamp(v, 0.0, 1.0);
    }
  }
  return ProbMap(static_cast<int>(width), static_cast<int>(height), std::move(values));
}

Bytes write_pfm(const ProbMap& map) { return encode_pfm(map); }
Bytes write_pfm(const GrayImage& image) { return encode_pfm(image); }

GrayImage read_gray_pfm(std::span<const std::uint8_t> bytes) {
  auto map = read_pfm(bytes);
  return GrayImage(map.width(), map.height(), map.values());
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  Bytes out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::Io, "read failed for " + path.string());
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorCode::Io, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw Error(ErrorCode::Io, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

}  // namespace bu
