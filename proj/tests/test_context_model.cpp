#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/reference_ppmc.hpp"
#include "support/test_util.hpp"
#include "vlppm/context_model.hpp"

using namespace vlppm;
using vlppm::testing::english_like;
using vlppm::testing::random_bytes;

namespace {

SymbolStats stats_of(std::initializer_list<std::pair<int, std::uint32_t>> init) {
  SymbolStats st;
  for (auto [s, c] : init) {
    st.entries.push_back({static_cast<std::uint16_t>(s), c});
    st.total += c;
  }
  return st;
}

std::vector<std::uint8_t> encode_seq(int order, std::span<const std::uint8_t> data) {
  ContextModel m({order});
  ArithEncoder enc;
  for (auto b : data) m.encode(b, enc);
  m.encode(kEofSymbol, enc);
  return enc.finish();
}

std::vector<std::uint8_t> decode_seq(int order, const std::vector<std::uint8_t>& payload) {
  ContextModel m({order});
  ArithDecoder dec(payload);
  std::vector<std::uint8_t> out;
  for (;;) {
    const int s = m.decode(dec);
    if (s == kEofSymbol) break;
    out.push_back(static_cast<std::uint8_t>(s));
  }
  return out;
}

double cost_of(ContextModel& m, int sym) {
  ArithEncoder enc;
  m.encode(sym, enc);
  return enc.ideal_bits();
}

}  // namespace

TEST(Distribution, MethodCTwoSymbols) {
  const auto st = stats_of({{'a', 2}, {'b', 1}});
  ExclusionSet none;
  const auto d = distribution(st, none);
  ASSERT_EQ(d.symbols.size(), 2u);
  EXPECT_EQ(d.symbols[0].second, (FreqSlice{0, 2, 5}));
  EXPECT_EQ(d.symbols[1].second, (FreqSlice{2, 3, 5}));
  EXPECT_EQ(d.escape, (FreqSlice{3, 5, 5}));
  EXPECT_FALSE(d.all_excluded);
}

TEST(Distribution, ExclusionRemovesSymbolAndEscapeMass) {
  const auto st = stats_of({{'a', 2}, {'b', 1}});
  ExclusionSet ex;
  ex.add('b');
  const auto d = distribution(st, ex);
  ASSERT_EQ(d.symbols.size(), 1u);
  EXPECT_EQ(d.symbols[0].second, (FreqSlice{0, 2, 3}));
  EXPECT_EQ(d.escape, (FreqSlice{2, 3, 3}));
}

TEST(Distribution, AllExcluded) {
  const auto st = stats_of({{'a', 5}});
  ExclusionSet ex;
  ex.add('a');
  const auto d = distribution(st, ex);
  EXPECT_TRUE(d.all_excluded);
  EXPECT_DOUBLE_EQ(slice_bits(d.escape), 0.0);
}

TEST(Distribution, WidthsSumToTotal) {
  std::mt19937 rng(1);
  for (int t = 0; t < 1000; ++t) {
    SymbolStats st;
    const int n = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      const auto c = 1 + rng() % 300;
      st.entries.push_back({static_cast<std::uint16_t>(i * 3), c});
      st.total += c;
    }
    ExclusionSet ex;
    for (int i = 0; i < n; ++i)
      if (rng() % 3 == 0) ex.add(i * 3);
    const auto d = distribution(st, ex);
    if (d.all_excluded) continue;
    std::uint32_t sum = d.escape.width();
    std::uint32_t expect_cum = 0;
    for (const auto& [s, sl] : d.symbols) {
      EXPECT_FALSE(ex.contains(s));
      EXPECT_EQ(sl.cum_lo, expect_cum);
      expect_cum = sl.cum_hi;
      sum += sl.width();
    }
    EXPECT_EQ(d.escape.width(), d.symbols.size());
    EXPECT_EQ(sum, d.escape.total);
  }
}

TEST(ExclusionSetTest, ClearAndSize) {
  ExclusionSet ex;
  ex.add(3);
  ex.add(3);
  ex.add(256);
  EXPECT_EQ(ex.size(), 2);
  ex.clear();
  EXPECT_EQ(ex.size(), 0);
  EXPECT_FALSE(ex.contains(3));
}

TEST(ContextModelTest, RejectsBadOrder) {
  EXPECT_THROW(ContextModel({-1}), std::invalid_argument);
  EXPECT_THROW(ContextModel({9}), std::invalid_argument);
  EXPECT_NO_THROW(ContextModel({0}));
  EXPECT_NO_THROW(ContextModel({8}));
}

TEST(ContextModelTest, EmptyModelIsUniform) {
  ContextModel m({2});
  ArithEncoder enc;
  EXPECT_EQ(m.encode('i', enc), -1);
  EXPECT_NEAR(enc.ideal_bits(), std::log2(257.0), 1e-12);
}

TEST(ContextModelTest, RepeatedWordGetsCheaper) {
  ContextModel m({2});
  double first = 0, second = 0;
  for (char c : std::string("inf")) first += cost_of(m, c);
  cost_of(m, ' ');
  for (char c : std::string("inf")) second += cost_of(m, c);
  EXPECT_LT(second, first);
}

TEST(ContextModelTest, DeterministicContextIsCheap) {
  ContextModel m({1});
  for (int i = 0; i < 10; ++i) {
    cost_of(m, 'a');
    cost_of(m, 'b');
  }
  cost_of(m, 'a');
  EXPECT_LE(cost_of(m, 'b'), 0.2);
}

TEST(ContextModelTest, CostNonIncreasingForRepeatedSymbol) {
  ContextModel m({1});
  double prev = 1e9;
  for (int i = 0; i < 50; ++i) {
    cost_of(m, 'x');
    const double c = cost_of(m, 'y');
    if (i > 1) EXPECT_LE(c, prev + 1e-12);
    prev = c;
  }
}

TEST(ContextModelTest, UpdateExclusion) {
  ContextModel m({2});
  for (char c : std::string("cabdab")) cost_of(m, c);
  const auto before = m.find_context("")->count_of('c').value();
  EXPECT_EQ(m.find_context("ab")->count_of('c'), std::nullopt);
  ArithEncoder enc;
  EXPECT_EQ(m.encode('c', enc), 0);
  EXPECT_EQ(m.find_context("ab")->count_of('c'), 1u);
  EXPECT_EQ(m.find_context("b")->count_of('c'), 1u);
  EXPECT_EQ(m.find_context("")->count_of('c'), before + 1);
  // 'a' was coded at order 1 ("c" context): order 0 is left alone.
  const auto a0 = m.find_context("")->count_of('a').value();
  for (char c : std::string("ca")) cost_of(m, c);
  EXPECT_EQ(m.find_context("")->count_of('a').value(), a0);
}

TEST(ContextModelTest, FirstSymbolCreatesOrderZero) {
  ContextModel m({0});
  cost_of(m, 'a');
  ASSERT_NE(m.find_context(""), nullptr);
  EXPECT_EQ(m.find_context("")->count_of('a'), 1u);
  EXPECT_EQ(m.context_count(), 1u);
}

TEST(ContextModelTest, RescaleHalvesWithFloorOne) {
  ContextModel m({0});
  ArithEncoder enc;
  for (int i = 0; i < 3; ++i) m.encode('b', enc);
  std::uint32_t prev_a = 0;
  for (;;) {
    m.encode('a', enc);
    const auto& st = *m.find_context("");
    const auto a = st.count_of('a').value();
    ASSERT_LE(st.total + st.distinct(), kMaxTotal);
    if (a < prev_a) {
      EXPECT_EQ(a, (prev_a + 1) / 2);
      EXPECT_EQ(st.count_of('b'), 1u);
      EXPECT_EQ(st.total, a + 1);
      break;
    }
    prev_a = a;
  }
}

TEST(ContextModelTest, StatsStayWithinCoderLimit) {
  ContextModel m({1});
  ArithEncoder enc;
  std::mt19937 rng(4);
  for (int i = 0; i < 300000; ++i) m.encode(rng() % 4 == 0 ? 'z' : 'y', enc);
  for (const char* c : {"", "y", "z"}) {
    const auto* st = m.find_context(c);
    ASSERT_NE(st, nullptr);
    EXPECT_LE(st->total + st->distinct(), kMaxTotal);
  }
}

TEST(ContextModelTest, FullExclusionSoundness) {
  // The coded order must be the highest order whose context already holds
  // the symbol; nothing above it may contain the symbol.
  const auto text = english_like(20000, 11);
  ContextModel m({3});
  ArithEncoder enc;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const int top = static_cast<int>(std::min<std::size_t>(3, i));
    int expect = -1;
    for (int k = top; k >= 0; --k) {
      const auto* st = m.find_context(std::string_view(text).substr(i - k, k));
      if (st && st->find(static_cast<unsigned char>(text[i])) >= 0) {
        expect = k;
        break;
      }
    }
    ASSERT_EQ(m.encode(static_cast<unsigned char>(text[i]), enc), expect) << "at " << i;
  }
}

TEST(ContextModelTest, RoundTrips) {
  std::vector<std::vector<std::uint8_t>> inputs;
  inputs.emplace_back();
  inputs.push_back(vlppm::testing::bytes(english_like(10000, 2)));
  std::vector<std::uint8_t> all(256);
  for (int i = 0; i < 256; ++i) all[i] = static_cast<std::uint8_t>(i);
  inputs.push_back(all);
  inputs.push_back(random_bytes(5000, 8));
  for (int order = 0; order <= 8; ++order)
    for (const auto& in : inputs) EXPECT_EQ(decode_seq(order, encode_seq(order, in)), in);
}

TEST(ContextModelTest, EncoderDecoderStateAgrees) {
  const auto in = vlppm::testing::bytes(english_like(30000, 3));
  ContextModel enc_m({3}), dec_m({3});
  ArithEncoder enc;
  for (auto b : in) enc_m.encode(b, enc);
  enc_m.encode(kEofSymbol, enc);
  const auto p = enc.finish();
  ArithDecoder dec(p);
  while (dec_m.decode(dec) != kEofSymbol) {
  }
  EXPECT_EQ(enc_m.state_hash(), dec_m.state_hash());
  EXPECT_EQ(enc_m.context_count(), dec_m.context_count());
  EXPECT_EQ(enc_m.entry_count(), dec_m.entry_count());
}

TEST(ContextModelTest, IncrementalHashMatchesRecompute) {
  ContextModel m({2});
  ArithEncoder enc;
  std::mt19937 rng(17);
  for (int i = 0; i < 200000; ++i) {
    // Small alphabet drives contexts through several rescales.
    m.encode(rng() % 3 == 0 ? 'q' : 'r', enc);
    if (i % 20000 == 0) ASSERT_EQ(m.state_hash(), m.recompute_state_hash());
  }
  EXPECT_EQ(m.state_hash(), m.recompute_state_hash());
  EXPECT_NE(m.state_hash(), 0u);
}

TEST(ContextModelTest, PrimeMatchesEncodeUpdate) {
  const auto text = english_like(5000, 21);
  ContextModel a({3}), b({3});
  ArithEncoder enc;
  for (char c : text) {
    a.encode(static_cast<unsigned char>(c), enc);
    b.prime(static_cast<unsigned char>(c));
  }
  EXPECT_EQ(a.state_hash(), b.state_hash());
}

TEST(ContextModelTest, MatchesNaiveReference) {
  std::vector<std::vector<std::uint8_t>> inputs{vlppm::testing::bytes(english_like(20000, 5)),
                                                random_bytes(3000, 6)};
  auto skewed = random_bytes(150000, 7);
  for (auto& b : skewed) b = static_cast<std::uint8_t>('a' + b % 3 / 2);  // rescale-heavy
  inputs.push_back(skewed);
  for (int order = 0; order <= 4; ++order) {
    for (const auto& in : inputs) {
      vlppm::testing::ReferencePpmc ref(order);
      ArithEncoder enc;
      for (auto b : in) ref.encode(b, enc);
      ref.encode(kEofSymbol, enc);
      EXPECT_EQ(enc.finish(), encode_seq(order, in)) << "order " << order;
    }
  }
}
