/**
 *  @file   archive.hpp
 *  @brief  Little-endian binary container for trajectory ensembles.
 *
 *  Layout (all integers u64, all reals f64, little-endian):
 *    magic "PLCOHENS", version,
 *    grid: n_side, length,
 *    params: kinetic_coeff, gamma_c, gamma_r, R, g_c, g_r, hbar, vacuum_subtraction,
 *    pump: p0, width,
 *    config: dt, total_time, burn_in_fraction, snapshot_stride, seed, realizations, noise_substeps,
 *    trajectory count, failed count, failed indices,
 *    per trajectory: index, snapshot count, then per snapshot:
 *      time, clipped_cells, psi as (re, im) pairs, n_res.
 */

#ifndef POLCOH_TWA_ARCHIVE_HPP
#define POLCOH_TWA_ARCHIVE_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <string>

#include "polcoh/error.hpp"
#include "polcoh/twa/ensemble.hpp"

namespace polcoh {

static_assert(std::endian::native == std::endian::little, "archive I/O assumes a little-endian host");

namespace io {

class BinaryWriter {
  public:
    explicit BinaryWriter(const std::string& path) : out_(path, std::ios::binary | std::ios::trunc) {
        if (!out_) throw Error("cannot open " + path + " for writing");
    }
    void bytes(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void f64(double v) { bytes(&v, sizeof v); }
    void finish() {
        out_.flush();
        if (!out_) throw Error("write failed");
    }

  private:
    std::ofstream out_;
};

class BinaryReader {
  public:
    explicit BinaryReader(const std::string& path) : in_(path, std::ios::binary) {
        if (!in_) throw Error("cannot open " + path);
    }
    void bytes(void* p, std::size_t n) {
        in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (!in_) throw Error("truncated binary file");
    }
    std::uint64_t u64() {
        std::uint64_t v;
        bytes(&v, sizeof v);
        return v;
    }
    double f64() {
        double v;
        bytes(&v, sizeof v);
        return v;
    }

  private:
    std::ifstream in_;
};

}  // namespace io

namespace twa {

inline constexpr char kEnsembleMagic[8] = {'P', 'L', 'C', 'O', 'H', 'E', 'N', 'S'};
inline constexpr std::uint64_t kEnsembleVersion = 1;

inline void write_ensemble_archive(const std::string& path, const TrajectoryEnsemble& e) {
    io::BinaryWriter w(path);
    w.bytes(kEnsembleMagic, 8);
    w.u64(kEnsembleVersion);
    w.u64(e.grid.n_side);
    w.f64(e.grid.length);
    const ModelParams& p = e.params;
    for (double v : {p.kinetic_coeff, p.gamma_c, p.gamma_r, p.condensation_rate, p.g_c, p.g_r, p.hbar,
                     p.vacuum_subtraction}) {
        w.f64(v);
    }
    w.f64(e.pump.p0);
    w.f64(e.pump.width);
    const TrajectoryConfig& c = e.config;
    w.f64(c.dt);
    w.f64(c.total_time);
    w.f64(c.burn_in_fraction);
    w.u64(c.snapshot_stride);
    w.u64(c.seed);
    w.u64(c.realizations);
    w.u64(c.noise_substeps);
    w.u64(e.trajectories.size());
    w.u64(e.failed.size());
    for (auto f : e.failed) w.u64(f);
    for (const auto& t : e.trajectories) {
        w.u64(t.index);
        w.u64(t.snapshots.size());
        for (const auto& s : t.snapshots) {
            w.f64(s.time);
            w.u64(s.clipped_cells);
            w.bytes(s.psi.data(), s.psi.size() * sizeof(s.psi[0]));
            w.bytes(s.n_res.data(), s.n_res.size() * sizeof(double));
        }
    }
    w.finish();
}

inline TrajectoryEnsemble read_ensemble_archive(const std::string& path) {
    io::BinaryReader r(path);
    char magic[8];
    r.bytes(magic, 8);
    if (std::memcmp(magic, kEnsembleMagic, 8) != 0) throw Error(path + ": not an ensemble archive");
    if (r.u64() != kEnsembleVersion) throw Error(path + ": unsupported archive version");
    TrajectoryEnsemble e;
    e.grid.n_side = r.u64();
    e.grid.length = r.f64();
    e.grid.validate();
    ModelParams& p = e.params;
    for (double* v : {&p.kinetic_coeff, &p.gamma_c, &p.gamma_r, &p.condensation_rate, &p.g_c, &p.g_r, &p.hbar,
                      &p.vacuum_subtraction}) {
        *v = r.f64();
    }
    e.pump.p0 = r.f64();
    e.pump.width = r.f64();
    TrajectoryConfig& c = e.config;
    c.dt = r.f64();
    c.total_time = r.f64();
    c.burn_in_fraction = r.f64();
    c.snapshot_stride = r.u64();
    c.seed = r.u64();
    c.realizations = r.u64();
    c.noise_substeps = r.u64();
    const std::uint64_t ntraj = r.u64();
    const std::uint64_t nfail = r.u64();
    for (std::uint64_t i = 0; i < nfail; ++i) e.failed.push_back(r.u64());
    const std::size_t cells = e.grid.cells();
    e.trajectories.resize(ntraj);
    for (auto& t : e.trajectories) {
        t.index = r.u64();
        t.snapshots.resize(r.u64());
        for (auto& s : t.snapshots) {
            s.time = r.f64();
            s.clipped_cells = r.u64();
            s.psi.resize(cells);
            s.n_res.resize(cells);
            r.bytes(s.psi.data(), cells * sizeof(s.psi[0]));
            r.bytes(s.n_res.data(), cells * sizeof(double));
        }
    }
    return e;
}

/// One row per cell: x,y,re_psi,im_psi,density,n_res.
inline void export_snapshot_csv(const std::string& path, const FieldState& s, const SimulationGrid& g) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "x,y,re_psi,im_psi,density,n_res\n" << std::setprecision(17);
    for (std::size_t iy = 0; iy < g.n_side; ++iy) {
        for (std::size_t ix = 0; ix < g.n_side; ++ix) {
            const std::size_t i = iy * g.n_side + ix;
            out << g.coordinate(ix) << ',' << g.coordinate(iy) << ',' << s.psi[i].real() << ',' << s.psi[i].imag()
                << ',' << std::norm(s.psi[i]) << ',' << s.n_res[i] << '\n';
        }
    }
}

}  // namespace twa
}  // namespace polcoh

#endif  // POLCOH_TWA_ARCHIVE_HPP
