#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vlppm/arith_coder.hpp"

namespace vlppm {

inline constexpr int kEofSymbol = 256;
inline constexpr int kAlphabetSize = 257;
inline constexpr int kMaxOrder = 8;

struct ModelConfig {
  int order = 3;
};

/// Adaptive counts for one context. Entries stay in first-seen order on both
/// encoder and decoder, which fixes the slice layout.
struct SymbolStats {
  struct Entry {
    std::uint16_t symbol;
    std::uint32_t count;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  std::vector<Entry> entries;
  std::uint32_t total = 0;

  std::size_t distinct() const { return entries.size(); }
  /// Index of `symbol` in entries, or -1.
  int find(int symbol) const;
  std::optional<std::uint32_t> count_of(int symbol) const;
};

/// Symbols ruled out while escaping down from higher orders for one symbol.
class ExclusionSet {
 public:
  ExclusionSet() { stamp_.fill(0); }

  void clear() {
    if (++generation_ == 0) {
      stamp_.fill(0);
      generation_ = 1;
    }
    size_ = 0;
  }
  bool contains(int symbol) const { return stamp_[symbol] == generation_; }
  void add(int symbol) {
    if (!contains(symbol)) {
      stamp_[symbol] = generation_;
      ++size_;
    }
  }
  int size() const { return size_; }

 private:
  std::array<std::uint32_t, kAlphabetSize> stamp_{};
  std::uint32_t generation_ = 1;
  int size_ = 0;
};

/// Escape-method-C distribution of one context under exclusions. Symbols that
/// survive exclusion get width = count; the escape slot comes last with width
/// equal to the number of surviving symbols.
struct Distribution {
  std::vector<std::pair<int, FreqSlice>> symbols;
  FreqSlice escape;
  bool all_excluded = false;  // nothing left to code here: escape costs no bits
};

Distribution distribution(const SymbolStats& stats, const ExclusionSet& excl);

/// Character-level PPMC model over bytes plus an EOF symbol. Full exclusion on
/// the escape chain, update exclusion, counts halved when a context nears
/// kMaxTotal. The model owns its history: every call to encode/decode/prime
/// appends one byte.
class ContextModel {
 public:
  explicit ContextModel(ModelConfig cfg = {});

  int order() const { return order_; }

  /// Codes `symbol` and updates. Returns the order it was coded at (-1 for the
  /// uniform fallback).
  int encode(int symbol, ArithEncoder& coder);
  /// Mirror of encode(). Returns the decoded symbol (kEofSymbol at end).
  int decode(ArithDecoder& coder);
  /// Updates statistics and history as if `byte` had been coded, emitting nothing.
  void prime(std::uint8_t byte);

  /// Stats for a context given as its bytes oldest-first ("ab" = 'a' then 'b').
  const SymbolStats* find_context(std::string_view context) const;

  std::uint64_t state_hash() const { return hash_; }
  /// Same digest as state_hash(), recomputed from scratch.
  std::uint64_t recompute_state_hash() const;

  std::size_t context_count() const { return stats_.size(); }
  std::size_t entry_count() const { return entry_count_; }

 private:
  std::uint64_t key_for(int k) const;
  int lookup(int k) const;
  int lookup_or_create(int k);
  int available_order() const;
  void update(int symbol, int coded_order);
  void bump(int k, std::uint64_t key, SymbolStats& st, int symbol);
  void push_history(int symbol);
  static std::uint64_t context_seed(int k, std::uint64_t key);
  static std::uint64_t entry_tuple(std::uint64_t seed, std::size_t pos, const SymbolStats::Entry& e);

  int order_;
  std::array<std::unordered_map<std::uint64_t, std::uint32_t>, kMaxOrder + 1> index_;
  std::vector<SymbolStats> stats_;
  std::vector<std::pair<int, std::uint64_t>> owner_;  // (order, key) of each stats_ slot
  std::array<int, kMaxOrder + 1> visited_{};
  ExclusionSet excl_;
  std::uint64_t history_ = 0;  // most recent byte in the low 8 bits
  int history_len_ = 0;
  std::uint64_t hash_ = 0;
  std::size_t entry_count_ = 0;
};

}  // namespace vlppm
