/**
 *  @file   fft.hpp
 *  @brief  Owning wrapper around a pair of 2D complex FFTW plans.
 */

#ifndef POLCOH_TWA_FFT_HPP
#define POLCOH_TWA_FFT_HPP

#include <complex>
#include <cstddef>
#include <cstring>
#include <mutex>
#include <new>
#include <span>
#include <vector>

#include <fftw3.h>

#include "polcoh/error.hpp"

namespace polcoh::twa {

/// Allocator returning fftw_malloc'ed (SIMD-aligned) storage.
template <class T>
struct FftwAllocator {
    using value_type = T;
    FftwAllocator() = default;
    template <class U>
    FftwAllocator(const FftwAllocator<U>&) noexcept {}
    T* allocate(std::size_t n) {
        void* p = fftw_malloc(n * sizeof(T));
        if (p == nullptr) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }
    template <class U>
    bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

using AlignedComplexVector = std::vector<std::complex<double>, FftwAllocator<std::complex<double>>>;

namespace detail {
// FFTW's planner is not reentrant.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

/// Unnormalized out-of-place forward / backward transform of an n x n row-major array.
class Fft2D {
  public:
    using cplx = std::complex<double>;

    explicit Fft2D(std::size_t n) : n_(n), in_(n * n), out_(n * n) {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        const int ni = static_cast<int>(n);
        // ESTIMATE keeps the plan (and hence the rounding) independent of timing.
        forward_ = fftw_plan_dft_2d(ni, ni, raw(in_.data()), raw(out_.data()), FFTW_FORWARD, FFTW_ESTIMATE);
        backward_ = fftw_plan_dft_2d(ni, ni, raw(in_.data()), raw(out_.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
        if (forward_ == nullptr || backward_ == nullptr) throw Error("Fft2D: planning failed");
    }
    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;
    ~Fft2D() {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }

    std::size_t side() const { return n_; }

    void forward(std::span<const cplx> in, std::span<cplx> out) { run(forward_, in, out); }
    void backward(std::span<const cplx> in, std::span<cplx> out) { run(backward_, in, out); }

  private:
    static fftw_complex* raw(const cplx* p) {
        return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p));
    }
    bool aligned(const cplx* p) const { return fftw_alignment_of(reinterpret_cast<double*>(const_cast<cplx*>(p))) == align_; }

    void run(fftw_plan plan, std::span<const cplx> in, std::span<cplx> out) {
        const std::size_t count = n_ * n_;
        if (in.size() != count || out.size() != count) throw DomainError("Fft2D: array size does not match plan");
        if (in.data() != out.data() && aligned(in.data()) && aligned(out.data())) {
            fftw_execute_dft(plan, raw(in.data()), raw(out.data()));
            return;
        }
        std::memcpy(in_.data(), in.data(), count * sizeof(cplx));
        fftw_execute_dft(plan, raw(in_.data()), raw(out_.data()));
        std::memcpy(out.data(), out_.data(), count * sizeof(cplx));
    }

    std::size_t n_;
    AlignedComplexVector in_;
    AlignedComplexVector out_;
    int align_ = fftw_alignment_of(reinterpret_cast<double*>(in_.data()));
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

}  // namespace polcoh::twa

#endif  // POLCOH_TWA_FFT_HPP
