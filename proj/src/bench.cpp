#include "vlppm/bench.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vlppm/codec.hpp"

namespace vlppm::bench {

namespace {

struct ModeRun {
  std::size_t payload_bytes = 0;
  double seconds = 0.0;
  std::size_t footprint = 0;
};

ModeRun run_mode(const std::string& name, std::span<const std::uint8_t> data, CodecConfig cfg,
                 int repeats) {
  ModeRun r;
  std::vector<std::uint8_t> container;
  r.seconds = std::numeric_limits<double>::infinity();
  for (int i = 0; i < std::max(repeats, 1); ++i) {
    Compressor enc(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    container = enc.run(data);
    const auto t1 = std::chrono::steady_clock::now();
    r.seconds = std::min(r.seconds, std::chrono::duration<double>(t1 - t0).count());
    r.footprint = enc.footprint().total();
  }
  if (decompress(container) != std::vector<std::uint8_t>(data.begin(), data.end())) {
    throw std::runtime_error("roundtrip failed for " + name + " (mode " +
                             (cfg.mode == Mode::kPpm ? "ppm" : "vlppm") + ", order " +
                             std::to_string(cfg.order) + ")");
  }
  r.payload_bytes = container.size() - kHeaderSize;
  return r;
}

std::optional<std::vector<std::uint8_t>> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) return std::nullopt;
  return data;
}

std::string fixed(double v, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_field(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|' || c == '\\') out += '\\';
    out += (c == '\n' || c == '\r') ? ' ' : c;
  }
  return out;
}

std::string emit_table(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows, ReportFormat format) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    if (format == ReportFormat::kCsv) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_field(cells[i]);
      }
      out += "\r\n";
    } else {
      out += '|';
      for (const auto& c : cells) out += ' ' + md_field(c) + " |";
      out += '\n';
    }
  };
  line(header);
  if (format == ReportFormat::kMarkdown) {
    out += '|';
    for (std::size_t i = 0; i < header.size(); ++i) out += "---|";
    out += '\n';
  }
  for (const auto& r : rows) line(r);
  return out;
}

}  // namespace

double gain_pct(double bpc_ppm, double bpc_vlppm) {
  if (!(bpc_ppm > 0.0) || !(bpc_vlppm > 0.0)) throw std::invalid_argument("bpc must be positive");
  return (bpc_ppm - bpc_vlppm) / bpc_vlppm * 100.0;
}

std::vector<ManifestEntry> parse_manifest(const std::string& text) {
  std::vector<ManifestEntry> entries;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    ManifestEntry e;
    const auto tab = line.find('\t');
    e.name = line.substr(0, tab);
    if (tab != std::string::npos) {
      std::string hash = line.substr(tab + 1);
      std::transform(hash.begin(), hash.end(), hash.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (!hash.empty()) e.sha256 = hash;
    }
    if (!e.name.empty()) entries.push_back(std::move(e));
  }
  return entries;
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return os.str();
}

FileResult bench_file(const std::string& name, std::span<const std::uint8_t> data, int order,
                      const BenchOptions& opts) {
  if (data.empty()) throw std::invalid_argument("cannot benchmark an empty file");
  const ModeRun ppm = run_mode(name, data, CodecConfig{order, opts.prefix_len, Mode::kPpm}, opts.timing_repeats);
  const ModeRun vl = run_mode(name, data, CodecConfig{order, opts.prefix_len, Mode::kVlppm}, opts.timing_repeats);
  FileResult r;
  r.name = name;
  r.size_bytes = data.size();
  r.order = order;
  r.bpc_ppm = 8.0 * static_cast<double>(ppm.payload_bytes) / static_cast<double>(data.size());
  r.bpc_vlppm = 8.0 * static_cast<double>(vl.payload_bytes) / static_cast<double>(data.size());
  r.gain_pct = gain_pct(r.bpc_ppm, r.bpc_vlppm);
  r.seconds_ppm = ppm.seconds;
  r.seconds_vlppm = vl.seconds;
  r.footprint_ppm = ppm.footprint;
  r.footprint_vlppm = vl.footprint;
  return r;
}

std::vector<OrderAverage> summarize(const std::vector<FileResult>& rows) {
  std::map<int, OrderAverage> by_order;
  for (const auto& r : rows) {
    auto& a = by_order[r.order];
    a.order = r.order;
    ++a.files;
    a.total_bytes += r.size_bytes;
    a.bpc_ppm += r.bpc_ppm;
    a.bpc_vlppm += r.bpc_vlppm;
    a.time_ratio += r.time_ratio();
    a.mem_ratio += r.mem_ratio();
  }
  std::vector<OrderAverage> out;
  for (auto& [order, a] : by_order) {
    const auto n = static_cast<double>(a.files);
    a.bpc_ppm /= n;
    a.bpc_vlppm /= n;
    a.time_ratio /= n;
    a.mem_ratio /= n;
    a.gain_pct = gain_pct(a.bpc_ppm, a.bpc_vlppm);
    out.push_back(a);
  }
  return out;
}

CorpusReport run_corpus(const std::filesystem::path& dir, const BenchOptions& opts) {
  namespace fs = std::filesystem;
  CorpusReport report;
  if (!fs::is_directory(dir)) throw std::runtime_error("corpus directory not found: " + dir.string());

  std::vector<ManifestEntry> files;
  if (auto text = read_file(dir / kManifestName)) {
    files = parse_manifest(std::string(text->begin(), text->end()));
  } else {
    std::vector<std::string> names;
    for (const auto& de : fs::directory_iterator(dir)) {
      const std::string n = de.path().filename().string();
      if (!de.is_regular_file() || n == kManifestName || n.starts_with('.')) continue;
      names.push_back(n);
    }
    std::sort(names.begin(), names.end());
    for (auto& n : names) files.push_back({std::move(n), std::nullopt});
  }

  struct Loaded {
    std::string name;
    std::vector<std::uint8_t> data;
  };
  std::vector<Loaded> loaded;
  for (const auto& f : files) {
    auto data = read_file(dir / f.name);
    if (!data) {
      report.warnings.push_back("skipping unreadable file " + f.name);
      continue;
    }
    if (data->empty()) {
      report.warnings.push_back("skipping empty file " + f.name);
      continue;
    }
    if (f.sha256 && sha256_hex(*data) != *f.sha256) {
      report.warnings.push_back("skipping " + f.name + ": sha256 does not match manifest");
      continue;
    }
    loaded.push_back({f.name, std::move(*data)});
  }

  const std::size_t per_file = opts.orders.size();
  std::vector<FileResult> rows(loaded.size() * per_file);
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < rows.size();) {
      try {
        const auto& f = loaded[i / per_file];
        rows[i] = bench_file(f.name, f.data, opts.orders[i % per_file], opts);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, opts.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (err) std::rethrow_exception(err);

  report.rows = std::move(rows);
  report.averages = summarize(report.rows);
  return report;
}

WordLenStats word_length_profile(std::span<const std::uint8_t> data, int order, int prefix_len) {
  struct Acc {
    std::size_t count = 0;
    double bits = 0.0;
  };
  auto collect = [&](Mode mode) {
    std::map<std::size_t, Acc> acc;
    Compressor enc(CodecConfig{order, prefix_len, mode});
    enc.run(data, [&](const WordTrace& w) {
      auto& a = acc[w.length];
      ++a.count;
      a.bits += w.bits;
    });
    return acc;
  };
  const auto ppm = collect(Mode::kPpm);
  const auto vl = collect(Mode::kVlppm);
  WordLenStats stats;
  for (const auto& [len, a] : ppm) {
    const auto& b = vl.at(len);
    stats.by_length[len] = WordLenRow{a.count, a.bits / static_cast<double>(a.count),
                                      b.bits / static_cast<double>(b.count)};
  }
  return stats;
}

std::optional<double> ppm_length_correlation(const WordLenStats& stats, std::size_t min_len,
                                             std::size_t max_len, std::size_t min_count) {
  std::vector<double> xs, ys;
  for (const auto& [len, row] : stats.by_length) {
    if (len < min_len || len > max_len || row.count < min_count) continue;
    xs.push_back(static_cast<double>(len));
    ys.push_back(row.mean_bits_ppm);
  }
  if (xs.size() < 3) return std::nullopt;
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

std::string emit_report(const CorpusReport& report, ReportFormat format, ReportOptions opts) {
  const std::vector<std::string> header{"file",      "size",      "order",      "bpc_ppm",
                                        "bpc_vlppm", "gain_pct",  "time_ratio", "mem_ratio"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : report.rows) {
    rows.push_back({r.name, std::to_string(r.size_bytes), std::to_string(r.order), fixed(r.bpc_ppm, 4),
                    fixed(r.bpc_vlppm, 4), fixed(r.gain_pct, 2),
                    opts.include_timing ? fixed(r.time_ratio(), 3) : "", fixed(r.mem_ratio(), 3)});
  }
  for (const auto& a : report.averages) {
    rows.push_back({"Average", std::to_string(a.total_bytes), std::to_string(a.order), fixed(a.bpc_ppm, 4),
                    fixed(a.bpc_vlppm, 4), fixed(a.gain_pct, 2),
                    opts.include_timing ? fixed(a.time_ratio, 3) : "", fixed(a.mem_ratio, 3)});
  }
  return emit_table(header, rows, format);
}

std::string emit_profile(const WordLenStats& stats, ReportFormat format) {
  const std::vector<std::string> header{"length", "count", "bits_ppm", "bits_vlppm"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& [len, r] : stats.by_length) {
    rows.push_back({std::to_string(len), std::to_string(r.count), fixed(r.mean_bits_ppm, 3),
                    fixed(r.mean_bits_vlppm, 3)});
  }
  return emit_table(header, rows, format);
}

}  // namespace vlppm::bench
