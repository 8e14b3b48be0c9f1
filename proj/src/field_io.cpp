#include "gpvortex/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace gpvortex {

namespace {

static_assert(sizeof(double) == 8, "format assumes 64-bit IEEE doubles");

void put_u64(std::ofstream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ofstream& out, double d) { put_u64(out, std::bit_cast<std::uint64_t>(d)); }

std::uint64_t get_u64(std::ifstream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw std::runtime_error("read_field: truncated file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::ifstream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void write_field(const std::string& path, const ComplexField2D& f) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_field: cannot open " + path);
    put_f64(out, f.grid.extent);
    put_u64(out, static_cast<std::uint64_t>(f.grid.points));
    put_f64(out, f.time);
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(f.values.data()),
                  static_cast<std::streamsize>(sizeof(std::complex<double>) * f.values.size()));
    } else {
        for (const auto& v : f.values) {
            put_f64(out, v.real());
            put_f64(out, v.imag());
        }
    }
    if (!out) throw std::runtime_error("write_field: write failed for " + path);
    out.close();

    nlohmann::json sidecar = {
        {"extent", f.grid.extent},
        {"points_per_axis", f.grid.points},
        {"time", f.time},
        {"layout", "x-major complex128 little-endian"},
    };
    std::ofstream js(path + ".json", std::ios::trunc);
    if (!js) throw std::runtime_error("write_field: cannot open " + path + ".json");
    js << sidecar.dump(2) << "\n";
}

ComplexField2D read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_field: cannot open " + path);
    const double extent = get_f64(in);
    const std::uint64_t points = get_u64(in);
    const double time = get_f64(in);
    if (points == 0 || points > (1u << 16))
        throw std::runtime_error("read_field: implausible point count in header");
    ComplexField2D f(GridSpec(extent, static_cast<int>(points)), time);
    if constexpr (std::endian::native == std::endian::little) {
        in.read(reinterpret_cast<char*>(f.values.data()),
                static_cast<std::streamsize>(sizeof(std::complex<double>) * f.values.size()));
        if (!in) throw std::runtime_error("read_field: truncated payload in " + path);
    } else {
        for (auto& v : f.values) {
            const double re = get_f64(in);
            const double im = get_f64(in);
            v = {re, im};
        }
    }
    return f;
}

}  // namespace gpvortex
