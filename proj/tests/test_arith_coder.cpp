#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "vlppm/arith_coder.hpp"

using namespace vlppm;

namespace {

constexpr double kFlushBits = 32.0;

double shannon(const std::vector<FreqSlice>& v) {
  double bits = 0;
  for (const auto& s : v) bits += std::log2(static_cast<double>(s.total) / s.width());
  return bits;
}

std::vector<std::uint8_t> encode_all(const std::vector<FreqSlice>& v) {
  ArithEncoder enc;
  for (const auto& s : v) enc.encode(s);
  return enc.finish();
}

std::vector<std::uint32_t> decode_all(const std::vector<std::uint8_t>& payload,
                                      const std::vector<FreqSlice>& v) {
  ArithDecoder dec(payload);
  std::vector<std::uint32_t> points;
  for (const auto& s : v) {
    const auto t = dec.decode_point(s.total);
    points.push_back(t);
    dec.consume(s);
  }
  return points;
}

std::vector<FreqSlice> random_slices(std::mt19937& rng, std::size_t n) {
  std::vector<FreqSlice> v;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t total = 1 + rng() % kMaxTotal;
    const std::uint32_t lo = rng() % total;
    const std::uint32_t hi = lo + 1 + rng() % (total - lo);
    v.push_back({lo, hi, total});
  }
  return v;
}

}  // namespace

TEST(ArithCoder, SliceBits) {
  EXPECT_DOUBLE_EQ(slice_bits({0, 1, 2}), 1.0);
  EXPECT_DOUBLE_EQ(slice_bits({3, 6, 8}), std::log2(8.0 / 3.0));
  EXPECT_DOUBLE_EQ(slice_bits({0, 5, 5}), 0.0);
}

TEST(ArithCoder, EmptyStreamIsFlushOnly) {
  ArithEncoder enc;
  EXPECT_EQ(enc.finish().size(), 4u);
}

TEST(ArithCoder, CertainSliceIsFree) {
  std::vector<FreqSlice> v(1000, FreqSlice{0, 1, 1});
  const auto p = encode_all(v);
  EXPECT_LE(p.size(), 5u);
  ArithDecoder dec(p);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(dec.decode_point(1), 0u);
    dec.consume({0, 1, 1});
  }
}

TEST(ArithCoder, UniformByteSymbolsMatchEntropy) {
  std::mt19937 rng(7);
  std::vector<FreqSlice> v;
  for (int i = 0; i < 1000; ++i) {
    const std::uint32_t s = rng() % 256;
    v.push_back({s, s + 1, 256});
  }
  const auto p = encode_all(v);
  EXPECT_NEAR(static_cast<double>(p.size()), 1000.0, 1000 * 0.001 + 8);
  EXPECT_EQ(decode_all(p, v).size(), v.size());
}

TEST(ArithCoder, HalfProbabilityCostsOneBit) {
  for (std::size_t n : {8u, 100u, 4096u}) {
    const std::vector<FreqSlice> v(n, FreqSlice{0, 1, 2});
    const auto p = encode_all(v);
    EXPECT_NEAR(8.0 * p.size() - kFlushBits, static_cast<double>(n), 2 + 8);
  }
}

TEST(ArithCoder, ThreeEighths) {
  const std::size_t n = 10000;
  const std::vector<FreqSlice> v(n, FreqSlice{3, 6, 8});
  const auto p = encode_all(v);
  const double expect = n * std::log2(8.0 / 3.0);
  EXPECT_NEAR(8.0 * p.size() - kFlushBits, expect, 16);
}

TEST(ArithCoder, EightEquiprobableSymbolsCostThreeBits) {
  std::vector<FreqSlice> v;
  for (int i = 0; i < 10000; ++i) {
    const std::uint32_t k = static_cast<std::uint32_t>(i % 8);
    v.push_back({k, k + 1, 8});
  }
  const auto p = encode_all(v);
  EXPECT_NEAR(8.0 * p.size() - kFlushBits, 30000.0, 16);
  const auto pts = decode_all(p, v);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(pts[i], v[i].cum_lo);
}

TEST(ArithCoder, InjectiveOnShortSequences) {
  // Skewed four-symbol alphabet {1,2,3,4}/10, every length-3 sequence.
  const FreqSlice sym[4] = {{0, 1, 10}, {1, 3, 10}, {3, 6, 10}, {6, 10, 10}};
  std::set<std::vector<std::uint8_t>> seen;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        const std::vector<FreqSlice> v{sym[a], sym[b], sym[c]};
        const auto p = encode_all(v);
        EXPECT_TRUE(seen.insert(p).second);
        const auto pts = decode_all(p, v);
        for (int i = 0; i < 3; ++i) {
          EXPECT_GE(pts[i], v[i].cum_lo);
          EXPECT_LT(pts[i], v[i].cum_hi);
        }
      }
  EXPECT_EQ(seen.size(), 64u);
}

TEST(ArithCoder, DecodePointContainment) {
  ArithEncoder enc;
  enc.encode({2, 5, 10});
  const auto p = enc.finish();
  ArithDecoder dec(p);
  const auto t = dec.decode_point(10);
  EXPECT_GE(t, 2u);
  EXPECT_LT(t, 5u);
}

TEST(ArithCoder, RandomRoundTrip) {
  std::mt19937 rng(12345);
  const auto v = random_slices(rng, 100000);
  const auto p = encode_all(v);
  ArithDecoder dec(p);
  for (const auto& s : v) {
    const auto t = dec.decode_point(s.total);
    ASSERT_GE(t, s.cum_lo);
    ASSERT_LT(t, s.cum_hi);
    dec.consume(s);
  }
  EXPECT_TRUE(dec.exhausted());
  EXPECT_NEAR(dec.ideal_bits(), shannon(v), 1e-6 * shannon(v));
}

TEST(ArithCoder, NearOptimalOnRandomSequences) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = random_slices(rng, 1 + rng() % 5000);
    const double h = shannon(v);
    const auto p = encode_all(v);
    EXPECT_LE(8.0 * p.size(), h * 1.001 + 64) << "trial " << trial;
  }
}

TEST(ArithCoder, IdealBitsTracked) {
  ArithEncoder enc;
  enc.encode({0, 1, 4});
  enc.encode({0, 1, 2});
  EXPECT_DOUBLE_EQ(enc.ideal_bits(), 3.0);
}

TEST(ArithCoder, Deterministic) {
  std::mt19937 rng(5);
  const auto v = random_slices(rng, 2000);
  EXPECT_EQ(encode_all(v), encode_all(v));
}

TEST(ArithCoder, RejectsInvalidSlices) {
  ArithEncoder enc;
  EXPECT_THROW(enc.encode({2, 2, 4}), std::invalid_argument);
  EXPECT_THROW(enc.encode({0, 5, 4}), std::invalid_argument);
  EXPECT_THROW(enc.encode({0, 1, kMaxTotal + 1}), std::invalid_argument);
}

TEST(ArithCoder, TruncatedPayloadThrows) {
  std::mt19937 rng(3);
  const auto v = random_slices(rng, 500);
  auto p = encode_all(v);
  p.resize(p.size() / 2);
  EXPECT_THROW(
      {
        ArithDecoder dec(p);
        for (const auto& s : v) {
          dec.decode_point(s.total);
          dec.consume(s);
        }
      },
      DecodeError);
}

TEST(ArithCoder, DecodePointTotalOneIsZero) {
  const std::vector<std::uint8_t> p{0, 0, 0, 0};
  ArithDecoder dec(p);
  EXPECT_EQ(dec.decode_point(1), 0u);
}
