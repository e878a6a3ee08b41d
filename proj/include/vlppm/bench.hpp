#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vlppm::bench {

/// Relative improvement of VLPPM over PPM in percent, measured against the
/// VLPPM figure: (ppm - vlppm) / vlppm * 100.
double gain_pct(double bpc_ppm, double bpc_vlppm);

struct FileResult {
  std::string name;
  std::size_t size_bytes = 0;
  int order = 0;
  double bpc_ppm = 0.0;
  double bpc_vlppm = 0.0;
  double gain_pct = 0.0;
  double seconds_ppm = 0.0;
  double seconds_vlppm = 0.0;
  std::size_t footprint_ppm = 0;  // context entries + dictionary entries
  std::size_t footprint_vlppm = 0;

  double time_ratio() const { return seconds_ppm > 0 ? seconds_vlppm / seconds_ppm : 0.0; }
  double mem_ratio() const {
    return footprint_ppm > 0 ? static_cast<double>(footprint_vlppm) / static_cast<double>(footprint_ppm) : 0.0;
  }
};

/// Mean of per-file values for one order; gain is taken between the means.
struct OrderAverage {
  int order = 0;
  std::size_t files = 0;
  std::size_t total_bytes = 0;
  double bpc_ppm = 0.0;
  double bpc_vlppm = 0.0;
  double gain_pct = 0.0;
  double time_ratio = 0.0;
  double mem_ratio = 0.0;
};

struct CorpusReport {
  std::vector<FileResult> rows;  // file-major, then order
  std::vector<OrderAverage> averages;
  std::vector<std::string> warnings;
};

struct BenchOptions {
  std::vector<int> orders{2, 3};
  int prefix_len = 3;
  int jobs = 1;
  int timing_repeats = 1;  // best-of-N wall time per mode
};

struct ManifestEntry {
  std::string name;
  std::optional<std::string> sha256;  // lowercase hex
};

inline constexpr const char* kManifestName = "MANIFEST.tsv";

/// One `filename<TAB>sha256?` line per file; blank lines and `#` comments skipped.
std::vector<ManifestEntry> parse_manifest(const std::string& text);
std::string sha256_hex(std::span<const std::uint8_t> bytes);

/// Benchmarks one in-memory file at one order in both modes. Throws
/// std::runtime_error if either mode fails to round-trip.
FileResult bench_file(const std::string& name, std::span<const std::uint8_t> data, int order,
                      const BenchOptions& opts);

/// Benchmarks every corpus file (manifest order if MANIFEST.tsv exists, else
/// all regular files by name). Unreadable, empty or hash-mismatched files are
/// skipped with a warning.
CorpusReport run_corpus(const std::filesystem::path& dir, const BenchOptions& opts);

std::vector<OrderAverage> summarize(const std::vector<FileResult>& rows);

struct WordLenRow {
  std::size_t count = 0;
  double mean_bits_ppm = 0.0;
  double mean_bits_vlppm = 0.0;
};

/// Keyed by word length in letters.
struct WordLenStats {
  std::map<std::size_t, WordLenRow> by_length;
};

WordLenStats word_length_profile(std::span<const std::uint8_t> data, int order, int prefix_len = 3);

/// Pearson correlation of mean PPM bits/word against length over
/// [min_len, max_len], using lengths with at least `min_count` occurrences.
std::optional<double> ppm_length_correlation(const WordLenStats& stats, std::size_t min_len,
                                             std::size_t max_len, std::size_t min_count);

enum class ReportFormat { kCsv, kMarkdown };

struct ReportOptions {
  bool include_timing = true;  // false blanks time_ratio so output is reproducible
};

/// Columns: file, size, order, bpc_ppm, bpc_vlppm, gain_pct, time_ratio, mem_ratio.
std::string emit_report(const CorpusReport& report, ReportFormat format, ReportOptions opts = {});
std::string emit_profile(const WordLenStats& stats, ReportFormat format);

}  // namespace vlppm::bench
