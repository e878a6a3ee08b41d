// vlppm: compress, decompress, inspect and benchmark VLPPM containers.
//
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 corrupt container.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "vlppm/bench.hpp"
#include "vlppm/codec.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kCorrupt = 3 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path);
  return data;
}

// Output goes to a temporary sibling first so a failed run never leaves a
// partial file behind.
void write_atomically(const std::string& path, std::span<const std::uint8_t> data) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename output into place: " + path);
  }
}

void emit_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    write_atomically(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
  }
}

std::vector<int> parse_orders(const std::string& spec) {
  std::vector<int> orders;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = -1;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.empty() || v < 0 || v > vlppm::kMaxOrder) {
      throw CLI::ValidationError("--orders", "expected comma-separated orders in [0, 8], got '" + spec + "'");
    }
    orders.push_back(v);
  }
  if (orders.empty()) throw CLI::ValidationError("--orders", "no orders given");
  return orders;
}

const char* mode_name(vlppm::Mode m) { return m == vlppm::Mode::kPpm ? "ppm" : "vlppm"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VLPPM text compressor: PPMC with prefix-keyed word dictionaries"};
  app.require_subcommand(1);

  std::string input, output;
  int order = 3;
  int prefix_len = 3;
  std::string mode = "vlppm";

  auto* compress_cmd = app.add_subcommand("compress", "Compress a file into a VLPM container");
  compress_cmd->add_option("-i,--input", input, "Input file")->required();
  compress_cmd->add_option("-o,--output", output, "Output container")->required();
  compress_cmd->add_option("--order", order, "Context order")->check(CLI::Range(0, vlppm::kMaxOrder));
  compress_cmd->add_option("--mode", mode, "Codec mode")->check(CLI::IsMember({"vlppm", "ppm"}));
  compress_cmd->add_option("--prefix-len", prefix_len, "Dictionary prefix length")->check(CLI::Range(1, 255));

  auto* decompress_cmd = app.add_subcommand("decompress", "Restore the original bytes of a container");
  decompress_cmd->add_option("-i,--input", input, "Input container")->required();
  decompress_cmd->add_option("-o,--output", output, "Output file")->required();

  auto* inspect_cmd = app.add_subcommand("inspect", "Print container header fields");
  inspect_cmd->add_option("-i,--input", input, "Input container")->required();

  std::string corpus, orders_spec = "2,3", format = "markdown", profile_file;
  int jobs = 1, repeats = 1;
  auto* bench_cmd = app.add_subcommand("bench", "Benchmark PPM against VLPPM over a corpus directory");
  bench_cmd->add_option("--corpus", corpus, "Corpus directory")->required();
  bench_cmd->add_option("--orders", orders_spec, "Comma-separated context orders");
  bench_cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "markdown"}));
  bench_cmd->add_option("--profile-words", profile_file, "Also report mean bits per word length for FILE");
  bench_cmd->add_option("--prefix-len", prefix_len, "Dictionary prefix length")->check(CLI::Range(1, 255));
  bench_cmd->add_option("--jobs", jobs, "Files benchmarked in parallel")->check(CLI::Range(1, 256));
  bench_cmd->add_option("--repeats", repeats, "Best-of-N timing runs")->check(CLI::Range(1, 100));
  bench_cmd->add_option("-o,--output", output, "Report file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*compress_cmd) {
      const auto data = read_all(input);
      const vlppm::CodecConfig cfg{order, prefix_len, mode == "ppm" ? vlppm::Mode::kPpm : vlppm::Mode::kVlppm};
      write_atomically(output, vlppm::compress(data, cfg));
    } else if (*decompress_cmd) {
      const auto data = read_all(input);
      write_atomically(output, vlppm::decompress(data));
    } else if (*inspect_cmd) {
      const auto data = read_all(input);
      const auto h = vlppm::parse_header(data);
      const std::size_t payload = data.size() - vlppm::kHeaderSize;
      std::cout << "magic: VLPM\n"
                << "version: " << int{vlppm::kFormatVersion} << "\n"
                << "mode: " << mode_name(h.mode) << "\n"
                << "order: " << h.order << "\n"
                << "prefix_len: " << h.prefix_len << "\n"
                << "original_len: " << h.original_len << "\n"
                << "payload_bytes: " << payload << "\n";
      if (h.original_len > 0) {
        std::cout << "bpc: " << 8.0 * static_cast<double>(payload) / static_cast<double>(h.original_len) << "\n";
      }
    } else if (*bench_cmd) {
      vlppm::bench::BenchOptions opts;
      opts.orders = parse_orders(orders_spec);
      opts.prefix_len = prefix_len;
      opts.jobs = jobs;
      opts.timing_repeats = repeats;
      if (!fs::is_directory(corpus)) throw IoError("corpus directory not found: " + corpus);
      const auto fmt = format == "csv" ? vlppm::bench::ReportFormat::kCsv : vlppm::bench::ReportFormat::kMarkdown;
      const auto report = vlppm::bench::run_corpus(corpus, opts);
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
      std::string text = vlppm::bench::emit_report(report, fmt);
      if (!profile_file.empty()) {
        const auto data = read_all(profile_file);
        for (int o : opts.orders) {
          const auto stats = vlppm::bench::word_length_profile(data, o, prefix_len);
          text += "\n";
          if (fmt == vlppm::bench::ReportFormat::kMarkdown) {
            text += "Bits per word, " + fs::path(profile_file).filename().string() + ", order " +
                    std::to_string(o) + "\n\n";
          }
          text += vlppm::bench::emit_profile(stats, fmt);
        }
      }
      emit_text(output, text);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const vlppm::DecodeError& e) {
    std::cerr << "error: corrupt container: " << e.what() << "\n";
    return kCorrupt;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCorrupt;
  }
  return kOk;
}
