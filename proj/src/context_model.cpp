#include "vlppm/context_model.hpp"

#include <algorithm>
#include <stdexcept>

#include "vlppm/state_hash.hpp"

namespace vlppm {

int SymbolStats::find(int symbol) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].symbol == symbol) return static_cast<int>(i);
  }
  return -1;
}

std::optional<std::uint32_t> SymbolStats::count_of(int symbol) const {
  const int i = find(symbol);
  if (i < 0) return std::nullopt;
  return entries[static_cast<std::size_t>(i)].count;
}

Distribution distribution(const SymbolStats& stats, const ExclusionSet& excl) {
  Distribution d;
  std::uint32_t cum = 0;
  for (const auto& e : stats.entries) {
    if (excl.contains(e.symbol)) continue;
    d.symbols.emplace_back(e.symbol, FreqSlice{cum, cum + e.count, 0});
    cum += e.count;
  }
  const auto q = static_cast<std::uint32_t>(d.symbols.size());
  if (q == 0) {
    d.all_excluded = true;
    d.escape = FreqSlice{0, 1, 1};
    return d;
  }
  const std::uint32_t total = cum + q;
  for (auto& [sym, s] : d.symbols) s.total = total;
  d.escape = FreqSlice{cum, total, total};
  return d;
}

ContextModel::ContextModel(ModelConfig cfg) : order_(cfg.order) {
  if (order_ < 0 || order_ > kMaxOrder) {
    throw std::invalid_argument("context order must be in [0, 8]");
  }
}

std::uint64_t ContextModel::key_for(int k) const {
  if (k == 0) return 0;
  if (k >= 8) return history_;
  return history_ & ((std::uint64_t{1} << (8 * k)) - 1);
}

int ContextModel::available_order() const { return std::min(order_, history_len_); }

int ContextModel::lookup(int k) const {
  const auto& idx = index_[static_cast<std::size_t>(k)];
  const auto it = idx.find(key_for(k));
  return it == idx.end() ? -1 : static_cast<int>(it->second);
}

int ContextModel::lookup_or_create(int k) {
  const std::uint64_t key = key_for(k);
  auto [it, inserted] =
      index_[static_cast<std::size_t>(k)].try_emplace(key, static_cast<std::uint32_t>(stats_.size()));
  if (inserted) {
    stats_.emplace_back();
    owner_.emplace_back(k, key);
  }
  return static_cast<int>(it->second);
}

std::uint64_t ContextModel::context_seed(int k, std::uint64_t key) {
  return hash_combine(static_cast<std::uint64_t>(k), key);
}

std::uint64_t ContextModel::entry_tuple(std::uint64_t seed, std::size_t pos,
                                        const SymbolStats::Entry& e) {
  return mix64(seed ^ (std::uint64_t{pos} << 40) ^ (std::uint64_t{e.symbol} << 24) ^ e.count);
}

void ContextModel::bump(int k, std::uint64_t key, SymbolStats& st, int symbol) {
  const std::uint64_t seed = context_seed(k, key);
  const int i = st.find(symbol);
  if (i < 0) {
    st.entries.push_back({static_cast<std::uint16_t>(symbol), 1});
    hash_ ^= entry_tuple(seed, st.entries.size() - 1, st.entries.back());
    ++entry_count_;
  } else {
    auto& e = st.entries[static_cast<std::size_t>(i)];
    hash_ ^= entry_tuple(seed, static_cast<std::size_t>(i), e);
    ++e.count;
    hash_ ^= entry_tuple(seed, static_cast<std::size_t>(i), e);
  }
  ++st.total;
  if (st.total + st.distinct() > kMaxTotal) {
    st.total = 0;
    for (std::size_t j = 0; j < st.entries.size(); ++j) {
      auto& e = st.entries[j];
      hash_ ^= entry_tuple(seed, j, e);
      e.count = std::max<std::uint32_t>(1, e.count / 2);
      hash_ ^= entry_tuple(seed, j, e);
      st.total += e.count;
    }
  }
}

void ContextModel::update(int symbol, int coded_order) {
  // Update exclusion: the context that coded the symbol and every higher one.
  const int top = available_order();
  for (int k = std::max(coded_order, 0); k <= top; ++k) {
    int idx = visited_[static_cast<std::size_t>(k)];
    if (idx < 0) idx = lookup_or_create(k);
    bump(k, owner_[static_cast<std::size_t>(idx)].second, stats_[static_cast<std::size_t>(idx)],
         symbol);
  }
}

void ContextModel::push_history(int symbol) {
  history_ = (history_ << 8) | static_cast<std::uint8_t>(symbol);
  history_len_ = std::min(history_len_ + 1, kMaxOrder);
}

int ContextModel::encode(int symbol, ArithEncoder& coder) {
  if (symbol < 0 || symbol >= kAlphabetSize) throw std::invalid_argument("symbol out of range");
  excl_.clear();
  const int top = available_order();
  int coded = -1;
  for (int k = top; k >= 0; --k) {
    const int idx = lookup(k);
    visited_[static_cast<std::size_t>(k)] = idx;
    if (idx < 0) continue;
    const SymbolStats& st = stats_[static_cast<std::size_t>(idx)];
    std::uint32_t cum = 0, m = 0, q = 0, width = 0;
    for (const auto& e : st.entries) {
      if (excl_.contains(e.symbol)) continue;
      if (e.symbol == symbol) {
        cum = m;
        width = e.count;
      }
      m += e.count;
      ++q;
    }
    if (q == 0) continue;
    if (width != 0) {
      coder.encode(FreqSlice{cum, cum + width, m + q});
      coded = k;
      for (int j = k - 1; j >= 0; --j) visited_[static_cast<std::size_t>(j)] = -1;
      break;
    }
    coder.encode(FreqSlice{m, m + q, m + q});
    for (const auto& e : st.entries) excl_.add(e.symbol);
  }
  if (coded < 0) {
    std::uint32_t rank = 0;
    for (int s = 0; s < symbol; ++s) rank += excl_.contains(s) ? 0 : 1;
    const auto total = static_cast<std::uint32_t>(kAlphabetSize - excl_.size());
    coder.encode(FreqSlice{rank, rank + 1, total});
  }
  if (symbol != kEofSymbol) {
    update(symbol, coded);
    push_history(symbol);
  }
  return coded;
}

int ContextModel::decode(ArithDecoder& coder) {
  excl_.clear();
  const int top = available_order();
  int symbol = -1;
  int coded = -1;
  for (int k = top; k >= 0; --k) {
    const int idx = lookup(k);
    visited_[static_cast<std::size_t>(k)] = idx;
    if (idx < 0) continue;
    const SymbolStats& st = stats_[static_cast<std::size_t>(idx)];
    std::uint32_t m = 0, q = 0;
    for (const auto& e : st.entries) {
      if (excl_.contains(e.symbol)) continue;
      m += e.count;
      ++q;
    }
    if (q == 0) continue;
    const std::uint32_t total = m + q;
    const std::uint32_t t = coder.decode_point(total);
    if (t >= m) {
      coder.consume(FreqSlice{m, total, total});
      for (const auto& e : st.entries) excl_.add(e.symbol);
      continue;
    }
    std::uint32_t cum = 0;
    for (const auto& e : st.entries) {
      if (excl_.contains(e.symbol)) continue;
      if (t < cum + e.count) {
        coder.consume(FreqSlice{cum, cum + e.count, total});
        symbol = e.symbol;
        break;
      }
      cum += e.count;
    }
    coded = k;
    for (int j = k - 1; j >= 0; --j) visited_[static_cast<std::size_t>(j)] = -1;
    break;
  }
  if (symbol < 0) {
    const auto total = static_cast<std::uint32_t>(kAlphabetSize - excl_.size());
    const std::uint32_t t = coder.decode_point(total);
    std::uint32_t rank = 0;
    for (int s = 0; s < kAlphabetSize; ++s) {
      if (excl_.contains(s)) continue;
      if (rank == t) {
        symbol = s;
        break;
      }
      ++rank;
    }
    coder.consume(FreqSlice{t, t + 1, total});
  }
  if (symbol != kEofSymbol) {
    update(symbol, coded);
    push_history(symbol);
  }
  return symbol;
}

void ContextModel::prime(std::uint8_t byte) {
  const int top = available_order();
  int found = -1;
  for (int k = top; k >= 0; --k) {
    const int idx = lookup(k);
    visited_[static_cast<std::size_t>(k)] = idx;
    if (idx >= 0 && stats_[static_cast<std::size_t>(idx)].find(byte) >= 0) {
      found = k;
      break;
    }
  }
  update(byte, found);
  push_history(byte);
}

const SymbolStats* ContextModel::find_context(std::string_view context) const {
  const auto k = static_cast<int>(context.size());
  if (k > order_) return nullptr;
  std::uint64_t key = 0;
  for (unsigned char c : context) key = (key << 8) | c;
  const auto& idx = index_[static_cast<std::size_t>(k)];
  const auto it = idx.find(key);
  return it == idx.end() ? nullptr : &stats_[it->second];
}

std::uint64_t ContextModel::recompute_state_hash() const {
  std::uint64_t h = 0;
  for (std::size_t i = 0; i < stats_.size(); ++i) {
    const auto [k, key] = owner_[i];
    const std::uint64_t seed = context_seed(k, key);
    const auto& entries = stats_[i].entries;
    for (std::size_t j = 0; j < entries.size(); ++j) h ^= entry_tuple(seed, j, entries[j]);
  }
  return h;
}

}  // namespace vlppm
