#include "vlppm/codec.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace vlppm {

namespace {

constexpr std::uint8_t kMagic[4] = {'V', 'L', 'P', 'M'};

// Attributes coded bits to words. Bits spent on the separator that ends a word
// are not part of the word.
class WordTracker {
 public:
  explicit WordTracker(const WordObserver& observer) : observer_(observer) {}

  bool enabled() const { return static_cast<bool>(observer_); }

  void letters(std::size_t n, double bits_before, double bits_after) {
    if (!enabled()) return;
    if (!active_) {
      active_ = true;
      start_ = bits_before;
      length_ = 0;
      outcome_.reset();
    }
    length_ += n;
    end_ = bits_after;
  }

  void outcome(SuffixOutcome o) { outcome_ = o; }

  void separator(const ContextModel& ctx, const DictStore& dict) {
    if (!enabled() || !active_) return;
    active_ = false;
    observer_(WordTrace{length_, end_ - start_, outcome_, ctx.state_hash(), dict.state_hash()});
  }

 private:
  const WordObserver& observer_;
  bool active_ = false;
  std::size_t length_ = 0;
  double start_ = 0.0;
  double end_ = 0.0;
  std::optional<SuffixOutcome> outcome_;
};

}  // namespace

void CodecConfig::validate() const {
  if (order < 0 || order > kMaxOrder) throw std::invalid_argument("order must be in [0, 8]");
  if (prefix_len < 1 || prefix_len > 255) throw std::invalid_argument("prefix_len must be in [1, 255]");
  if (mode != Mode::kPpm && mode != Mode::kVlppm) throw std::invalid_argument("unknown mode");
}

std::string_view read_suffix(std::span<const std::uint8_t> input, std::size_t pos) {
  std::size_t end = pos;
  while (end < input.size() && is_english(input[end])) ++end;
  if (pos >= end) return {};
  return {reinterpret_cast<const char*>(input.data() + pos), end - pos};
}

std::vector<std::uint8_t> write_container(const ContainerHeader& header,
                                          std::span<const std::uint8_t> payload) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + payload.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(kFormatVersion);
  out.push_back(static_cast<std::uint8_t>(header.mode));
  out.push_back(static_cast<std::uint8_t>(header.order));
  out.push_back(static_cast<std::uint8_t>(header.prefix_len));
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(header.original_len >> (8 * i)));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

ContainerHeader parse_header(std::span<const std::uint8_t> container) {
  using Kind = DecodeError::Kind;
  if (container.size() < 4 || !std::equal(std::begin(kMagic), std::end(kMagic), container.begin())) {
    throw DecodeError(Kind::kBadMagic, "not a VLPM container");
  }
  if (container.size() < kHeaderSize) throw DecodeError(Kind::kTruncated, "container header truncated");
  if (container[4] != kFormatVersion) {
    throw DecodeError(Kind::kBadVersion, "unsupported container version " + std::to_string(container[4]));
  }
  ContainerHeader h;
  if (container[5] > 1) throw DecodeError(Kind::kBadHeader, "unknown mode byte");
  h.mode = static_cast<Mode>(container[5]);
  h.order = container[6];
  h.prefix_len = container[7];
  if (h.order > kMaxOrder) throw DecodeError(Kind::kBadHeader, "context order out of range");
  if (h.prefix_len < 1) throw DecodeError(Kind::kBadHeader, "prefix length must be positive");
  for (int i = 0; i < 8; ++i) h.original_len |= std::uint64_t{container[8 + static_cast<std::size_t>(i)]} << (8 * i);
  return h;
}

Compressor::Compressor(CodecConfig cfg) : cfg_(cfg), context_((cfg.validate(), ModelConfig{cfg.order})) {}

ModelFootprint Compressor::footprint() const {
  return ModelFootprint{context_.context_count(), context_.entry_count(), dict_.dictionary_count(),
                        dict_.entry_count(), dict_.blacklist_size()};
}

std::vector<std::uint8_t> Compressor::run(std::span<const std::uint8_t> input,
                                          const WordObserver& observer) {
  ArithEncoder coder;
  WordTracker words(observer);
  const auto prefix_len = static_cast<std::size_t>(cfg_.prefix_len);

  auto code_char = [&](std::uint8_t c) {
    const double before = coder.ideal_bits();
    context_.encode(c, coder);
    if (is_english(c)) {
      words.letters(1, before, coder.ideal_bits());
    } else {
      words.separator(context_, dict_);
    }
  };

  if (cfg_.mode == Mode::kPpm) {
    for (std::uint8_t c : input) code_char(c);
  } else {
    FsmState state = FsmState::kS0;
    std::string prefix;
    std::size_t i = 0;
    while (i < input.size()) {
      const std::uint8_t c = input[i++];
      code_char(c);
      switch (state) {
        case FsmState::kS0:
          if (is_english(c)) {
            prefix.assign(1, static_cast<char>(c));
            state = FsmState::kS1;
          }
          break;
        case FsmState::kS1:
          if (is_english(c)) {
            prefix.push_back(static_cast<char>(c));
          } else {
            state = FsmState::kS0;
          }
          break;
        case FsmState::kS2:
          break;
      }
      if (state == FsmState::kS1 && prefix.size() == prefix_len) state = FsmState::kS2;
      if (state != FsmState::kS2) continue;

      const std::string_view suffix = read_suffix(input, i);
      const double before = coder.ideal_bits();
      const SuffixOutcome outcome = dict_.encode_suffix(prefix, suffix, coder);
      if (outcome == SuffixOutcome::kDictHit) {
        for (char s : suffix) context_.prime(static_cast<std::uint8_t>(s));
      } else {
        for (char s : suffix) context_.encode(static_cast<std::uint8_t>(s), coder);
      }
      words.letters(suffix.size(), before, coder.ideal_bits());
      words.outcome(outcome);
      i += suffix.size();
      dict_.record_word(prefix, suffix);
      state = FsmState::kS0;
    }
  }
  context_.encode(kEofSymbol, coder);
  words.separator(context_, dict_);

  ideal_bits_ = coder.ideal_bits();
  const auto payload = coder.finish();
  return write_container(ContainerHeader{cfg_.mode, cfg_.order, cfg_.prefix_len, input.size()},
                         payload);
}

std::vector<std::uint8_t> Decompressor::run(std::span<const std::uint8_t> container,
                                            const WordObserver& observer) {
  using Kind = DecodeError::Kind;
  const ContainerHeader header = parse_header(container);
  context_ = ContextModel(ModelConfig{header.order});
  dict_ = DictStore{};
  ArithDecoder coder(container.subspan(kHeaderSize));
  WordTracker words(observer);
  const auto prefix_len = static_cast<std::size_t>(header.prefix_len);
  const bool vlppm = header.mode == Mode::kVlppm;

  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(header.original_len, 1u << 26)));
  auto check_length = [&] {
    if (out.size() > header.original_len) {
      throw DecodeError(Kind::kLengthMismatch, "decoded data exceeds declared length");
    }
  };

  FsmState state = FsmState::kS0;
  std::string prefix;
  std::string suffix;
  for (;;) {
    const double before = coder.ideal_bits();
    const int c = context_.decode(coder);
    if (c == kEofSymbol) {
      if (vlppm && state == FsmState::kS2) dict_.record_word(prefix, suffix);
      words.separator(context_, dict_);
      break;
    }
    out.push_back(static_cast<std::uint8_t>(c));
    check_length();
    const bool letter = is_english(c);
    if (letter) words.letters(1, before, coder.ideal_bits());
    if (!vlppm) {
      if (!letter) words.separator(context_, dict_);
      continue;
    }

    switch (state) {
      case FsmState::kS0:
        if (letter) {
          prefix.assign(1, static_cast<char>(c));
          state = FsmState::kS1;
        }
        break;
      case FsmState::kS1:
        if (letter) {
          prefix.push_back(static_cast<char>(c));
        } else {
          state = FsmState::kS0;
        }
        break;
      case FsmState::kS2:
        if (letter) {
          suffix.push_back(static_cast<char>(c));
        } else {
          dict_.record_word(prefix, suffix);
          state = FsmState::kS0;
        }
        break;
    }
    if (!letter) words.separator(context_, dict_);
    if (state != FsmState::kS1 || prefix.size() != prefix_len) continue;

    const double dict_before = coder.ideal_bits();
    DecodedSuffix decoded = dict_.decode_suffix(prefix, coder);
    words.outcome(decoded.outcome);
    if (decoded.outcome == SuffixOutcome::kDictHit) {
      for (char s : decoded.suffix) {
        out.push_back(static_cast<std::uint8_t>(s));
        context_.prime(static_cast<std::uint8_t>(s));
      }
      check_length();
      words.letters(decoded.suffix.size(), dict_before, coder.ideal_bits());
      dict_.record_word(prefix, decoded.suffix);
      state = FsmState::kS0;
    } else {
      words.letters(0, dict_before, coder.ideal_bits());
      suffix.clear();
      state = FsmState::kS2;
    }
  }

  if (out.size() != header.original_len) {
    throw DecodeError(Kind::kLengthMismatch, "decoded " + std::to_string(out.size()) +
                                                 " bytes, header declares " +
                                                 std::to_string(header.original_len));
  }
  if (!coder.exhausted()) throw DecodeError(Kind::kCorrupt, "trailing bytes after payload");
  return out;
}

std::vector<std::uint8_t> compress(std::span<const std::uint8_t> input, const CodecConfig& cfg) {
  return Compressor(cfg).run(input);
}

std::vector<std::uint8_t> decompress(std::span<const std::uint8_t> container) {
  return Decompressor().run(container);
}

}  // namespace vlppm
