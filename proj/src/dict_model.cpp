#include "vlppm/dict_model.hpp"

#include <algorithm>

#include "vlppm/state_hash.hpp"

namespace vlppm {

Dictionary::Dictionary(std::string prefix)
    : prefix_(std::move(prefix)), prefix_hash_(hash_bytes(prefix_)) {}

int Dictionary::find(std::string_view suffix) const {
  const auto it = index_.find(suffix);
  return it == index_.end() ? -1 : static_cast<int>(it->second);
}

FreqSlice Dictionary::entry_slice(std::size_t index) const {
  std::uint32_t cum = 1;
  for (std::size_t i = 0; i < index; ++i) cum += entries_[i].count;
  return FreqSlice{cum, cum + entries_[index].count, total()};
}

std::uint64_t Dictionary::entry_tuple(std::size_t pos, const Entry& e) {
  return mix64(e.seed ^ (std::uint64_t{pos} << 24) ^ e.count);
}

void Dictionary::add(std::string_view suffix) {
  auto it = index_.find(suffix);
  if (it == index_.end()) {
    const auto pos = static_cast<std::uint32_t>(entries_.size());
    index_.emplace(std::string(suffix), pos);
    entries_.push_back({std::string(suffix), 1, hash_combine(prefix_hash_, hash_bytes(suffix))});
    digest_ ^= entry_tuple(pos, entries_.back());
  } else {
    auto& e = entries_[it->second];
    digest_ ^= entry_tuple(it->second, e);
    ++e.count;
    digest_ ^= entry_tuple(it->second, e);
  }
  ++count_sum_;
  if (count_sum_ + 1 > kMaxTotal) {
    count_sum_ = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      auto& e = entries_[i];
      digest_ ^= entry_tuple(i, e);
      e.count = std::max<std::uint32_t>(1, e.count / 2);
      digest_ ^= entry_tuple(i, e);
      count_sum_ += e.count;
    }
  }
}

std::uint64_t Dictionary::recompute_digest() const {
  std::uint64_t h = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    Entry e = entries_[i];
    e.seed = hash_combine(hash_bytes(prefix_), hash_bytes(e.suffix));
    h ^= entry_tuple(i, e);
  }
  return h;
}

SuffixDistribution suffix_distribution(const Dictionary& dict) {
  SuffixDistribution d;
  const std::uint32_t total = dict.total();
  d.escape = FreqSlice{0, 1, total};
  std::uint32_t cum = 1;
  d.entries.reserve(dict.entries().size());
  for (const auto& e : dict.entries()) {
    d.entries.push_back(FreqSlice{cum, cum + e.count, total});
    cum += e.count;
  }
  return d;
}

const Dictionary* DictStore::find(std::string_view prefix) const {
  const auto it = slots_.find(prefix);
  return it == slots_.end() || !it->second.dict ? nullptr : &*it->second.dict;
}

bool DictStore::blacklisted(std::string_view prefix) const {
  const auto it = slots_.find(prefix);
  return it != slots_.end() && it->second.blacklisted;
}

LookupResult DictStore::lookup(std::string_view prefix) const {
  const auto it = slots_.find(prefix);
  if (it == slots_.end()) return LookupAbsent{};
  if (it->second.blacklisted) return LookupBlacklisted{};
  if (it->second.dict) return &*it->second.dict;
  return LookupAbsent{};
}

SuffixOutcome DictStore::encode_suffix(std::string_view prefix, std::string_view suffix,
                                       ArithEncoder& coder) const {
  const Dictionary* dict = find(prefix);
  if (dict == nullptr) return SuffixOutcome::kNoDict;
  const int i = suffix.empty() ? -1 : dict->find(suffix);
  if (i < 0) {
    coder.encode(dict->escape_slice());
    return SuffixOutcome::kDictEscape;
  }
  coder.encode(dict->entry_slice(static_cast<std::size_t>(i)));
  return SuffixOutcome::kDictHit;
}

DecodedSuffix DictStore::decode_suffix(std::string_view prefix, ArithDecoder& coder) const {
  const Dictionary* dict = find(prefix);
  if (dict == nullptr) return {SuffixOutcome::kNoDict, {}};
  const std::uint32_t total = dict->total();
  const std::uint32_t t = coder.decode_point(total);
  if (t == 0) {
    coder.consume(dict->escape_slice());
    return {SuffixOutcome::kDictEscape, {}};
  }
  std::uint32_t cum = 1;
  for (const auto& e : dict->entries()) {
    if (t < cum + e.count) {
      coder.consume(FreqSlice{cum, cum + e.count, total});
      return {SuffixOutcome::kDictHit, e.suffix};
    }
    cum += e.count;
  }
  throw DecodeError(DecodeError::Kind::kCorrupt, "dictionary slice out of range");
}

std::uint64_t DictStore::blacklist_tuple(std::string_view prefix) {
  return hash_combine(0xB1AC4115ull, hash_bytes(prefix));
}

void DictStore::record_word(std::string_view prefix, std::string_view suffix) {
  auto it = slots_.find(prefix);
  if (suffix.empty()) {
    if (it == slots_.end()) it = slots_.emplace(std::string(prefix), Slot{}).first;
    Slot& slot = it->second;
    if (slot.dict) {
      hash_ ^= slot.dict->digest();
      entry_count_ -= slot.dict->entries().size();
      --dictionary_count_;
      slot.dict.reset();
    }
    if (!slot.blacklisted) {
      slot.blacklisted = true;
      ++blacklist_size_;
      hash_ ^= blacklist_tuple(prefix);
    }
    return;
  }
  if (it == slots_.end()) it = slots_.emplace(std::string(prefix), Slot{}).first;
  Slot& slot = it->second;
  if (slot.blacklisted) return;
  if (!slot.dict) {
    slot.dict.emplace(std::string(prefix));
    ++dictionary_count_;
  }
  Dictionary& d = *slot.dict;
  const std::size_t before = d.entries().size();
  hash_ ^= d.digest();
  d.add(suffix);
  hash_ ^= d.digest();
  entry_count_ += d.entries().size() - before;
}

std::uint64_t DictStore::recompute_state_hash() const {
  std::uint64_t h = 0;
  for (const auto& [prefix, slot] : slots_) {
    if (slot.dict) h ^= slot.dict->recompute_digest();
    if (slot.blacklisted) h ^= blacklist_tuple(prefix);
  }
  return h;
}

}  // namespace vlppm
