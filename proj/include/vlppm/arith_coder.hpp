#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace vlppm {

/// Upper bound on the total of any frequency slice handed to the coder.
/// Models rescale their counts to stay at or below this value.
inline constexpr std::uint32_t kMaxTotal = 1u << 16;

/// A symbol's cumulative-frequency interval [cum_lo, cum_hi) under `total`.
struct FreqSlice {
  std::uint32_t cum_lo = 0;
  std::uint32_t cum_hi = 1;
  std::uint32_t total = 1;

  constexpr std::uint32_t width() const { return cum_hi - cum_lo; }
  constexpr bool valid() const {
    return cum_lo < cum_hi && cum_hi <= total && total <= kMaxTotal;
  }
  friend constexpr bool operator==(const FreqSlice&, const FreqSlice&) = default;
};

/// Thrown when a payload cannot be decoded (truncated or inconsistent).
class DecodeError : public std::runtime_error {
 public:
  enum class Kind { kBadMagic, kBadVersion, kBadHeader, kTruncated, kLengthMismatch, kCorrupt };

  DecodeError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Ideal code length of a slice in bits, -log2(width/total).
double slice_bits(const FreqSlice& s);

// 32-bit range coder, byte-wise renormalization, carry propagated through a
// cached byte plus a run of pending 0xFF bytes.
class ArithEncoder {
 public:
  ArithEncoder() = default;

  /// Narrows the interval to `s`. Throws std::invalid_argument on a bad slice.
  void encode(const FreqSlice& s);

  /// Flushes the final interval and returns the payload. The encoder is left
  /// empty and may be reused.
  std::vector<std::uint8_t> finish();

  /// Sum of ideal code lengths of every slice encoded so far.
  double ideal_bits() const { return ideal_bits_; }
  std::size_t bytes_so_far() const { return out_.size(); }

 private:
  void shift_low();

  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t pending_ = 0;  // bytes owed after cache_ (0xFF unless a carry arrives)
  bool have_cache_ = false;    // the very first shifted byte is always zero and is dropped
  double ideal_bits_ = 0.0;
  std::vector<std::uint8_t> out_;
};

class ArithDecoder {
 public:
  explicit ArithDecoder(std::span<const std::uint8_t> payload);

  /// Returns t in [0, total) identifying the slice the encoder chose.
  std::uint32_t decode_point(std::uint32_t total);

  /// Consumes slice `s`, which must contain the value returned by the last
  /// decode_point() call for the same total.
  void consume(const FreqSlice& s);

  double ideal_bits() const { return ideal_bits_; }
  /// True when every payload byte has been read.
  bool exhausted() const { return pos_ == payload_.size(); }

 private:
  std::uint8_t next_byte();

  std::span<const std::uint8_t> payload_;
  std::size_t pos_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint32_t code_ = 0;
  double ideal_bits_ = 0.0;
};

}  // namespace vlppm
