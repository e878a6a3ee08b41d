#include "vlppm/arith_coder.hpp"

#include <cmath>
#include <string>

namespace vlppm {

namespace {
constexpr std::uint32_t kTop = 1u << 24;
}

double slice_bits(const FreqSlice& s) {
  return std::log2(static_cast<double>(s.total) / static_cast<double>(s.width()));
}

void ArithEncoder::encode(const FreqSlice& s) {
  if (!s.valid()) {
    throw std::invalid_argument("invalid frequency slice (" + std::to_string(s.cum_lo) + "," +
                                std::to_string(s.cum_hi) + "," + std::to_string(s.total) + ")");
  }
  if (s.width() == s.total) return;  // certain event, zero bits
  const std::uint32_t r = range_ / s.total;
  low_ += static_cast<std::uint64_t>(r) * s.cum_lo;
  range_ = r * s.width();
  ideal_bits_ += slice_bits(s);
  while (range_ < kTop) {
    range_ <<= 8;
    shift_low();
  }
}

void ArithEncoder::shift_low() {
  if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
    const auto carry = static_cast<std::uint8_t>(low_ >> 32);
    if (have_cache_) {
      out_.push_back(static_cast<std::uint8_t>(cache_ + carry));
    }
    have_cache_ = true;
    for (; pending_ > 0; --pending_) out_.push_back(static_cast<std::uint8_t>(0xFF + carry));
    cache_ = static_cast<std::uint8_t>(low_ >> 24);
  } else {
    ++pending_;
  }
  low_ = (low_ & 0x00FFFFFFu) << 8;
}

std::vector<std::uint8_t> ArithEncoder::finish() {
  for (int i = 0; i < 5; ++i) shift_low();
  std::vector<std::uint8_t> payload = std::move(out_);
  *this = ArithEncoder{};
  return payload;
}

ArithDecoder::ArithDecoder(std::span<const std::uint8_t> payload) : payload_(payload) {
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
}

std::uint8_t ArithDecoder::next_byte() {
  if (pos_ >= payload_.size()) {
    throw DecodeError(DecodeError::Kind::kTruncated, "payload truncated");
  }
  return payload_[pos_++];
}

std::uint32_t ArithDecoder::decode_point(std::uint32_t total) {
  if (total == 0 || total > kMaxTotal) {
    throw std::invalid_argument("decode_point: total out of range");
  }
  if (total == 1) return 0;
  const std::uint32_t r = range_ / total;
  const std::uint32_t v = code_ / r;
  if (v >= total) {
    throw DecodeError(DecodeError::Kind::kCorrupt, "payload value outside coding interval");
  }
  return v;
}

void ArithDecoder::consume(const FreqSlice& s) {
  if (!s.valid()) throw std::invalid_argument("consume: invalid frequency slice");
  if (s.width() == s.total) return;
  const std::uint32_t r = range_ / s.total;
  code_ -= r * s.cum_lo;
  range_ = r * s.width();
  ideal_bits_ += slice_bits(s);
  while (range_ < kTop) {
    code_ = (code_ << 8) | next_byte();
    range_ <<= 8;
  }
}

}  // namespace vlppm
