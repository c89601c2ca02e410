#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "bu/raster.hpp"
#include "oracles.hpp"

namespace bu {
namespace {

Bytes bytes_of(const std::string& header, std::initializer_list<std::uint8_t> payload) {
  Bytes out(header.begin(), header.end());
  out.insert(out.end(), payload);
  return out;
}

Bytes float_le(float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  return {static_cast<std::uint8_t>(bits), static_cast<std::uint8_t>(bits >> 8),
          static_cast<std::uint8_t>(bits >> 16), static_cast<std::uint8_t>(bits >> 24)};
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected bu::Error";
  return ErrorCode::Io;
}

TEST(Grid, RejectsBadShapes) {
  EXPECT_EQ(code_of([] { BinaryMask(0, 3, {}); }), ErrorCode::InvalidGrid);
  EXPECT_EQ(code_of([] { BinaryMask(2, 2, {0, 1, 1}); }), ErrorCode::InvalidGrid);
  EXPECT_EQ(code_of([] { BinaryMask(1, 1, {2}); }), ErrorCode::InvalidGrid);
  EXPECT_EQ(code_of([] { ProbMap(1, 1, {1.5}); }), ErrorCode::InvalidGrid);
  EXPECT_EQ(code_of([] { ProbMap(1, 1, {std::nan("")}); }), ErrorCode::InvalidGrid);
  EXPECT_EQ(code_of([] { DistanceMap(1, 1, {INFINITY}); }), ErrorCode::InvalidGrid);
  EXPECT_NO_THROW(DistanceMap(1, 2, {-3.0, 4.0}));
}

TEST(Pgm, ReadsRowMajor) {
  const auto mask = read_mask_pgm(bytes_of("P5\n2 2\n255\n", {0, 255, 255, 0}));
  EXPECT_EQ(mask.width(), 2);
  EXPECT_EQ(mask.height(), 2);
  EXPECT_EQ(mask(0, 0), 0);
  EXPECT_EQ(mask(1, 0), 1);
  EXPECT_EQ(mask(0, 1), 1);
  EXPECT_EQ(mask(1, 1), 0);
}

TEST(Pgm, RejectsNonBinarySample) {
  EXPECT_EQ(code_of([] { read_mask_pgm(bytes_of("P5\n1 1\n255\n", {128})); }), ErrorCode::NotBinary);
}

TEST(Pgm, HeaderErrors) {
  EXPECT_EQ(code_of([] { read_mask_pgm(bytes_of("P6\n1 1\n255\n", {0})); }), ErrorCode::NotP5);
  EXPECT_EQ(code_of([] { read_mask_pgm(bytes_of("", {})); }), ErrorCode::NotP5);
  EXPECT_EQ(code_of([] { read_mask_pgm(bytes_of("P5\n0 1\n255\n", {})); }), ErrorCode::BadHeader);
  EXPECT_EQ(code_of([] { read_mask_pgm(bytes_of("P5\n1 1\n65535\n", {0, 0})); }), ErrorCode::BadHeader);
  EXPECT_EQ(code_of([] { read_mask_pgm(bytes_of("P5\n2 2\n255\n", {0, 255, 0})); }), ErrorCode::BadHeader);
  EXPECT_EQ(code_of([] { read_mask_pgm(bytes_of("P5\n# c\n1 1\n255\n", {0})); }), ErrorCode::BadHeader);
  EXPECT_EQ(code_of([] { read_mask_pgm(bytes_of("P5\n1 1\n255", {})); }), ErrorCode::BadHeader);
}

TEST(Pgm, WritesCanonicalForm) {
  EXPECT_EQ(write_mask_pgm(BinaryMask(1, 1, {1})), bytes_of("P5\n1 1\n255\n", {255}));
  EXPECT_EQ(write_mask_pgm(BinaryMask(2, 1, {0, 1})), bytes_of("P5\n2 1\n255\n", {0, 255}));
}

TEST(Pgm, RoundTripProperty) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> side(1, 40);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto mask = oracle::random_mask(rng, side(rng), side(rng), 0.5);
    const auto encoded = write_mask_pgm(mask);
    const auto decoded = read_mask_pgm(encoded);
    ASSERT_EQ(decoded, mask);
    ASSERT_EQ(write_mask_pgm(decoded), encoded);
  }
}

TEST(Pgm, AnyNonBinarySampleIsRejected) {
  for (int v = 1; v < 255; ++v) {
    auto bytes = bytes_of("P5\n3 1\n255\n", {0, 255, 0});
    bytes.back() = static_cast<std::uint8_t>(v);
    ASSERT_THROW(read_mask_pgm(bytes), Error) << v;
  }
}

TEST(Pfm, EncodesSinglePixel) {
  auto expected = bytes_of("Pf\n1 1\n-1.0\n", {});
  const auto f = float_le(0.5f);
  expected.insert(expected.end(), f.begin(), f.end());
  EXPECT_EQ(write_pfm(ProbMap(1, 1, {0.5})), expected);
}

TEST(Pfm, RowsAreStoredBottomUp) {
  const ProbMap map(1, 2, {0.25, 0.75});  // top row 0.25
  const auto bytes = write_pfm(map);
  const auto header = std::string("Pf\n1 2\n-1.0\n");
  const auto first = float_le(0.75f);
  EXPECT_TRUE(std::equal(first.begin(), first.end(), bytes.begin() + static_cast<long>(header.size())));
  EXPECT_EQ(read_pfm(bytes), map);
}

TEST(Pfm, RejectsOutOfRange) {
  auto bytes = bytes_of("Pf\n1 1\n-1.0\n", {});
  const auto f = float_le(2.0f);
  bytes.insert(bytes.end(), f.begin(), f.end());
  EXPECT_EQ(code_of([&] { read_pfm(bytes); }), ErrorCode::OutOfRange);
}

TEST(Pfm, ClampsWithinTolerance) {
  auto bytes = bytes_of("Pf\n2 1\n-1.0\n", {});
  for (float v : {-1e-10f, 1.0f + 1e-10f}) {
    const auto f = float_le(v);
    bytes.insert(bytes.end(), f.begin(), f.end());
  }
  const auto map = read_pfm(bytes);
  EXPECT_EQ(map[0], 0.0);
  EXPECT_EQ(map[1], 1.0);
}

TEST(Pfm, HeaderErrors) {
  EXPECT_EQ(code_of([] { read_pfm(bytes_of("PF\n1 1\n-1.0\n", {0, 0, 0, 0})); }), ErrorCode::NotPf);
  EXPECT_EQ(code_of([] { read_pfm(bytes_of("Pf\n1 1\n1.0\n", {0, 0, 0, 0})); }), ErrorCode::BadHeader);
  EXPECT_EQ(code_of([] { read_pfm(bytes_of("Pf\n1 1\n-1.0\n", {0, 0, 0})); }), ErrorCode::BadHeader);
}

TEST(Pfm, RoundTripProperty) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> side(1, 30);
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  for (int trial = 0; trial < 1000; ++trial) {
    const int w = side(rng), h = side(rng);
    std::vector<double> values(static_cast<std::size_t>(w) * h);
    for (auto& v : values) v = static_cast<double>(unit(rng));  // exactly representable in float32
    const ProbMap map(w, h, values);
    const auto encoded = write_pfm(map);
    ASSERT_EQ(read_pfm(encoded), map);
    ASSERT_EQ(write_pfm(read_pfm(encoded)), encoded);
  }
}

TEST(MaskToProb, CastsLabels) {
  EXPECT_EQ(mask_to_prob(BinaryMask(2, 1, {0, 1})).values(), (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(mask_to_prob(BinaryMask::filled(3, 3, false)), ProbMap::filled(3, 3, 0.0));
}

TEST(FormatReal, ShortestRoundTrip) {
  EXPECT_EQ(format_real(0.5), "0.5");
  EXPECT_EQ(format_real(1.0), "1");
  EXPECT_EQ(std::stod(format_real(0.1 + 0.2)), 0.1 + 0.2);
}

}  // namespace
}  // namespace bu
