#include "core/fft.hpp"

#include <mutex>

namespace conceft::fft {

namespace {
// FFTW plan creation/destruction is not thread-safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    // Out-of-place plans; execute() must be called with distinct buffers.
    auto* a = fftw_alloc_complex(n);
    auto* b = fftw_alloc_complex(n);
    fwd_ = fftw_plan_dft_1d(static_cast<int>(n), a, b, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_1d(static_cast<int>(n), a, b, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(b);
    fftw_free(a);
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
}

void Fft::forward(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void Fft::backward(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

Buffer::Buffer(std::size_t n) { ptr_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n)); }
Buffer::~Buffer() { fftw_free(ptr_); }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace conceft::fft
