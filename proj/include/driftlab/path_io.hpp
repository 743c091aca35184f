#pragma once
// Binary persistence for PathRecord and a CSV export for plotting.
//
// Layout (all integers and floats little-endian):
//   magic "DLAB" | version u16 | T f64 | dt f64 | N u64 | seed u64
//   | drift JSON length u32 | drift JSON bytes | (N+1) state values f64

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "driftlab/sde.hpp"

namespace driftlab {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr std::uint16_t path_format_version = 1;

template <typename T>
void put_le(std::string& out, T value) {
    static_assert(std::is_integral_v<T>);
    for (std::size_t i = 0; i < sizeof(T); ++i)
        out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
}

inline void put_f64(std::string& out, double value) {
    put_le(out, std::bit_cast<std::uint64_t>(value));
}

struct Reader {
    const std::string& buf;
    std::size_t pos = 0;

    void need(std::size_t n, const char* what) const {
        if (pos + n > buf.size())
            throw IoError(std::string("path file truncated while reading ") + what);
    }
    template <typename T>
    T get_le(const char* what) {
        need(sizeof(T), what);
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
        pos += sizeof(T);
        return static_cast<T>(v);
    }
    double get_f64(const char* what) {
        return std::bit_cast<double>(get_le<std::uint64_t>(what));
    }
};

} // namespace detail

inline void write_path(const PathRecord& path, const std::filesystem::path& file) {
    std::string out;
    const std::string drift_json = nlohmann::json(path.drift).dump();
    out.reserve(40 + drift_json.size() + 8 * path.x.size());
    out += "DLAB";
    detail::put_le<std::uint16_t>(out, detail::path_format_version);
    detail::put_f64(out, path.T);
    detail::put_f64(out, path.dt);
    detail::put_le<std::uint64_t>(out, path.steps());
    detail::put_le<std::uint64_t>(out, path.seed);
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(drift_json.size()));
    out += drift_json;
    for (double v : path.x) detail::put_f64(out, v);

    std::ofstream f(file, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + file.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw IoError("write failed: " + file.string());
}

inline PathRecord read_path(const std::filesystem::path& file) {
    std::ifstream f(file, std::ios::binary);
    if (!f) throw IoError("cannot open path file: " + file.string());
    std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    detail::Reader r{buf};
    r.need(4, "magic");
    if (buf.compare(0, 4, "DLAB") != 0)
        throw IoError("not a path file (bad magic): " + file.string());
    r.pos = 4;
    const auto version = r.get_le<std::uint16_t>("version");
    if (version != detail::path_format_version)
        throw IoError("unsupported path file version " + std::to_string(version) +
                      ": " + file.string());
    PathRecord p;
    p.T = r.get_f64("T");
    p.dt = r.get_f64("dt");
    const auto n = r.get_le<std::uint64_t>("N");
    p.seed = r.get_le<std::uint64_t>("seed");
    const auto jlen = r.get_le<std::uint32_t>("drift JSON length");
    r.need(jlen, "drift JSON");
    const std::string drift_json = buf.substr(r.pos, jlen);
    r.pos += jlen;
    p.drift = nlohmann::json::parse(drift_json).get<DriftSpec>();
    p.x.resize(n + 1);
    for (auto& v : p.x) v = r.get_f64("state values");
    p.validate();
    return p;
}

// Plain (t, x) CSV for plotting.
inline void export_path_csv(const PathRecord& path, const std::filesystem::path& file) {
    std::ofstream f(file, std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + file.string());
    f << "t,x\n";
    char line[64];
    for (std::size_t i = 0; i < path.x.size(); ++i) {
        std::snprintf(line, sizeof(line), "%.9g,%.17g\n",
                      static_cast<double>(i) * path.dt, path.x[i]);
        f << line;
    }
    if (!f) throw IoError("write failed: " + file.string());
}

} // namespace driftlab
