#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "vlppm/arith_coder.hpp"

namespace vlppm {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
};

template <typename V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

/// Suffixes observed after one fixed-length word prefix, with counts. The
/// escape slot is implicit: width 1, placed before every entry, so the escape
/// probability is 1 / (1 + sum of counts).
class Dictionary {
 public:
  struct Entry {
    std::string suffix;
    std::uint32_t count;
    std::uint64_t seed;  // digest of (prefix, suffix)
  };

  explicit Dictionary(std::string prefix);

  const std::string& prefix() const { return prefix_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::uint32_t count_sum() const { return count_sum_; }
  /// 1 + sum of counts.
  std::uint32_t total() const { return count_sum_ + 1; }

  /// Index of `suffix` in entries(), or -1.
  int find(std::string_view suffix) const;
  FreqSlice escape_slice() const { return FreqSlice{0, 1, total()}; }
  FreqSlice entry_slice(std::size_t index) const;

  /// Adds one occurrence of `suffix`, inserting it at the end if new. Counts
  /// are halved (floor 1) once 1 + sum would exceed kMaxTotal.
  void add(std::string_view suffix);
  /// Order-insensitive digest of (prefix, position, suffix, count) tuples.
  std::uint64_t digest() const { return digest_; }
  std::uint64_t recompute_digest() const;

 private:
  static std::uint64_t entry_tuple(std::size_t pos, const Entry& e);

  std::string prefix_;
  std::uint64_t prefix_hash_;
  std::vector<Entry> entries_;
  StringMap<std::uint32_t> index_;
  std::uint32_t count_sum_ = 0;
  std::uint64_t digest_ = 0;
};

struct SuffixDistribution {
  FreqSlice escape;
  std::vector<FreqSlice> entries;  // parallel to Dictionary::entries()
};

SuffixDistribution suffix_distribution(const Dictionary& dict);

enum class SuffixOutcome { kDictHit, kDictEscape, kNoDict };

struct LookupAbsent {};
struct LookupBlacklisted {};
using LookupResult = std::variant<const Dictionary*, LookupAbsent, LookupBlacklisted>;

/// Decoder-side result of a dictionary step.
struct DecodedSuffix {
  SuffixOutcome outcome;
  std::string suffix;  // set for kDictHit only
};

/// All dictionaries keyed by prefix, plus the blacklist of prefixes that have
/// occurred as complete words. A prefix is never both.
class DictStore {
 public:
  LookupResult lookup(std::string_view prefix) const;

  const Dictionary* find(std::string_view prefix) const;
  bool blacklisted(std::string_view prefix) const;

  SuffixOutcome encode_suffix(std::string_view prefix, std::string_view suffix,
                              ArithEncoder& coder) const;
  DecodedSuffix decode_suffix(std::string_view prefix, ArithDecoder& coder) const;

  /// Called once per completed word whose length reaches the prefix length.
  /// An empty suffix blacklists the prefix and drops its dictionary.
  void record_word(std::string_view prefix, std::string_view suffix);

  std::size_t dictionary_count() const { return dictionary_count_; }
  std::size_t entry_count() const { return entry_count_; }
  std::size_t blacklist_size() const { return blacklist_size_; }

  std::uint64_t state_hash() const { return hash_; }
  std::uint64_t recompute_state_hash() const;

 private:
  struct Slot {
    std::optional<Dictionary> dict;
    bool blacklisted = false;
  };

  static std::uint64_t blacklist_tuple(std::string_view prefix);

  StringMap<Slot> slots_;
  std::size_t dictionary_count_ = 0;
  std::size_t entry_count_ = 0;
  std::size_t blacklist_size_ = 0;
  std::uint64_t hash_ = 0;
};

}  // namespace vlppm
