#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "vlppm/bench.hpp"
#include "vlppm/codec.hpp"

namespace py = pybind11;

namespace {

std::span<const std::uint8_t> view(const py::bytes& b, std::string& hold) {
  hold = b;
  return vlppm::as_bytes(hold);
}

py::bytes to_bytes(const std::vector<std::uint8_t>& v) {
  return {reinterpret_cast<const char*>(v.data()), v.size()};
}

vlppm::Mode parse_mode(const std::string& m) {
  if (m == "vlppm") return vlppm::Mode::kVlppm;
  if (m == "ppm") return vlppm::Mode::kPpm;
  throw py::value_error("mode must be 'vlppm' or 'ppm'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "VLPPM compressor bindings";

  py::register_exception<vlppm::DecodeError>(m, "DecodeError", PyExc_ValueError);

  m.def(
      "compress",
      [](const py::bytes& data, int order, const std::string& mode, int prefix_len) {
        std::string hold;
        const auto in = view(data, hold);
        const vlppm::CodecConfig cfg{order, prefix_len, parse_mode(mode)};
        std::vector<std::uint8_t> out;
        {
          py::gil_scoped_release release;
          out = vlppm::compress(in, cfg);
        }
        return to_bytes(out);
      },
      py::arg("data"), py::arg("order") = 3, py::arg("mode") = "vlppm", py::arg("prefix_len") = 3);

  m.def(
      "decompress",
      [](const py::bytes& data) {
        std::string hold;
        const auto in = view(data, hold);
        std::vector<std::uint8_t> out;
        {
          py::gil_scoped_release release;
          out = vlppm::decompress(in);
        }
        return to_bytes(out);
      },
      py::arg("data"));

  m.def(
      "inspect_header",
      [](const py::bytes& data) {
        std::string hold;
        const auto h = vlppm::parse_header(view(data, hold));
        py::dict d;
        d["mode"] = h.mode == vlppm::Mode::kPpm ? "ppm" : "vlppm";
        d["order"] = h.order;
        d["prefix_len"] = h.prefix_len;
        d["original_len"] = h.original_len;
        d["payload_bytes"] = hold.size() - vlppm::kHeaderSize;
        return d;
      },
      py::arg("data"));

  m.def("gain_pct", &vlppm::bench::gain_pct, py::arg("bpc_ppm"), py::arg("bpc_vlppm"));

  m.def(
      "word_length_profile",
      [](const py::bytes& data, int order, int prefix_len) {
        std::string hold;
        const auto stats = vlppm::bench::word_length_profile(view(data, hold), order, prefix_len);
        py::dict d;
        for (const auto& [len, row] : stats.by_length)
          d[py::int_(len)] = py::make_tuple(row.count, row.mean_bits_ppm, row.mean_bits_vlppm);
        return d;
      },
      py::arg("data"), py::arg("order") = 2, py::arg("prefix_len") = 3,
      "Map of word length -> (count, mean PPM bits, mean VLPPM bits).");

  m.attr("FORMAT_VERSION") = vlppm::kFormatVersion;
}
