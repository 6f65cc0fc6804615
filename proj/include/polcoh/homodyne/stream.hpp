/**
 *  @file   stream.hpp
 *  @brief  Two-channel quadrature records and their file formats.
 *
 *  CSV: header `t,x1,x2`, t in ps, x1/x2 in raw detector units (multiply by
 *  lo_scale for the [q,p] = i convention). Binary: magic "PLCOHQST", version,
 *  lo_scale (f64), record count (u64), then (t, x1, x2) f64 triples, little-endian.
 */

#ifndef POLCOH_HOMODYNE_STREAM_HPP
#define POLCOH_HOMODYNE_STREAM_HPP

#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <string>
#include <string_view>
#include <vector>

#include "polcoh/error.hpp"
#include "polcoh/twa/archive.hpp"

namespace polcoh {

struct QuadratureRecord {
    double t = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;
};

struct QuadratureStream {
    std::vector<QuadratureRecord> records;
    double lo_scale = 1.0;

    std::size_t size() const { return records.size(); }

    void validate() const {
        if (!(lo_scale > 0.0)) throw DomainError("quadrature stream: lo_scale must be positive");
        for (std::size_t i = 1; i < records.size(); ++i) {
            if (records[i].t < records[i - 1].t) throw InvariantError("quadrature stream: timestamps decrease");
        }
    }
};

inline void write_stream_csv(const std::string& path, const QuadratureStream& s) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "t,x1,x2\n" << std::setprecision(17);
    for (const auto& r : s.records) out << r.t << ',' << r.x1 << ',' << r.x2 << '\n';
    if (!out) throw Error("write failed: " + path);
}

namespace detail {
inline double parse_double(std::string_view sv, const std::string& where) {
    while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) sv.remove_prefix(1);
    while (!sv.empty() && (sv.back() == ' ' || sv.back() == '\r')) sv.remove_suffix(1);
    double v = 0.0;
    const auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (res.ec != std::errc() || res.ptr != sv.data() + sv.size()) throw Error(where + ": malformed number");
    return v;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}
}  // namespace detail

/// Reads the CSV format; lo_scale is not part of the CSV and defaults to 1.
inline QuadratureStream read_stream_csv(const std::string& path, double lo_scale = 1.0) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    std::getline(in, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,x1,x2") throw Error(path + ": expected header t,x1,x2");
    QuadratureStream s;
    s.lo_scale = lo_scale;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = detail::split_csv(line);
        const std::string where = path + ":" + std::to_string(lineno);
        if (f.size() != 3) throw Error(where + ": expected 3 fields");
        s.records.push_back({detail::parse_double(f[0], where), detail::parse_double(f[1], where),
                             detail::parse_double(f[2], where)});
    }
    return s;
}

inline constexpr char kStreamMagic[8] = {'P', 'L', 'C', 'O', 'H', 'Q', 'S', 'T'};
inline constexpr std::uint64_t kStreamVersion = 1;

inline void write_stream_binary(const std::string& path, const QuadratureStream& s) {
    io::BinaryWriter w(path);
    w.bytes(kStreamMagic, 8);
    w.u64(kStreamVersion);
    w.f64(s.lo_scale);
    w.u64(s.records.size());
    static_assert(sizeof(QuadratureRecord) == 3 * sizeof(double));
    w.bytes(s.records.data(), s.records.size() * sizeof(QuadratureRecord));
    w.finish();
}

inline QuadratureStream read_stream_binary(const std::string& path) {
    io::BinaryReader r(path);
    char magic[8];
    r.bytes(magic, 8);
    if (std::memcmp(magic, kStreamMagic, 8) != 0) throw Error(path + ": not a quadrature stream file");
    if (r.u64() != kStreamVersion) throw Error(path + ": unsupported stream version");
    QuadratureStream s;
    s.lo_scale = r.f64();
    s.records.resize(r.u64());
    r.bytes(s.records.data(), s.records.size() * sizeof(QuadratureRecord));
    return s;
}

/// Dispatch on the file content: binary magic or CSV header.
inline QuadratureStream read_stream(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw Error("cannot open " + path);
    char head[8] = {};
    probe.read(head, 8);
    if (probe.gcount() == 8 && std::memcmp(head, kStreamMagic, 8) == 0) return read_stream_binary(path);
    return read_stream_csv(path);
}

}  // namespace polcoh

#endif  // POLCOH_HOMODYNE_STREAM_HPP
