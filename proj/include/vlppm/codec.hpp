#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vlppm/arith_coder.hpp"
#include "vlppm/context_model.hpp"
#include "vlppm/dict_model.hpp"

namespace vlppm {

enum class Mode : std::uint8_t { kPpm = 0, kVlppm = 1 };

struct CodecConfig {
  int order = 3;
  int prefix_len = 3;
  Mode mode = Mode::kVlppm;

  void validate() const;
};

enum class FsmState { kS0, kS1, kS2 };

/// ASCII letters only; EOF and every other byte are word separators.
constexpr bool is_english(int sym) {
  return (sym >= 'A' && sym <= 'Z') || (sym >= 'a' && sym <= 'z');
}

/// Maximal run of letters starting at `pos` (possibly empty).
std::string_view read_suffix(std::span<const std::uint8_t> input, std::size_t pos);

// Container layout, little-endian:
//   "VLPM" | version u8 | mode u8 | order u8 | prefix_len u8 | original_len u64 | payload
inline constexpr std::size_t kHeaderSize = 16;
inline constexpr std::uint8_t kFormatVersion = 1;

struct ContainerHeader {
  Mode mode = Mode::kVlppm;
  int order = 3;
  int prefix_len = 3;
  std::uint64_t original_len = 0;

  friend bool operator==(const ContainerHeader&, const ContainerHeader&) = default;
};

std::vector<std::uint8_t> write_container(const ContainerHeader& header,
                                          std::span<const std::uint8_t> payload);
/// Throws DecodeError for short input, bad magic, unknown version or bad fields.
ContainerHeader parse_header(std::span<const std::uint8_t> container);

/// Emitted once per word (maximal letter run), after the character that ends
/// it has been coded. `bits` counts only the word's own slices.
struct WordTrace {
  std::size_t length = 0;
  double bits = 0.0;
  std::optional<SuffixOutcome> outcome;  // set when the dictionary step ran
  std::uint64_t context_hash = 0;
  std::uint64_t dict_hash = 0;
};

using WordObserver = std::function<void(const WordTrace&)>;

struct ModelFootprint {
  std::size_t contexts = 0;
  std::size_t context_entries = 0;
  std::size_t dictionaries = 0;
  std::size_t dict_entries = 0;
  std::size_t blacklist = 0;

  /// Memory proxy: symbol entries across all contexts plus dictionary entries.
  std::size_t total() const { return context_entries + dict_entries; }
};

class Compressor {
 public:
  explicit Compressor(CodecConfig cfg);

  /// Produces a complete container. Single use.
  std::vector<std::uint8_t> run(std::span<const std::uint8_t> input,
                                const WordObserver& observer = {});

  const ContextModel& context_model() const { return context_; }
  const DictStore& dict_store() const { return dict_; }
  ModelFootprint footprint() const;
  /// Sum of ideal code lengths of every slice coded by the last run().
  double ideal_bits() const { return ideal_bits_; }

 private:
  CodecConfig cfg_;
  double ideal_bits_ = 0.0;
  ContextModel context_;
  DictStore dict_;
};

class Decompressor {
 public:
  Decompressor() = default;

  /// Throws DecodeError on any container or payload inconsistency. Single use.
  std::vector<std::uint8_t> run(std::span<const std::uint8_t> container,
                                const WordObserver& observer = {});

  const ContextModel& context_model() const { return context_; }
  const DictStore& dict_store() const { return dict_; }

 private:
  ContextModel context_;
  DictStore dict_;
};

std::vector<std::uint8_t> compress(std::span<const std::uint8_t> input, const CodecConfig& cfg = {});
std::vector<std::uint8_t> decompress(std::span<const std::uint8_t> container);

inline std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace vlppm
