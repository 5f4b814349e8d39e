#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <fftw3.h>

namespace conceft::fft {

// Thin RAII wrapper around FFTW complex transforms of one size. Plans are
// created with FFTW_ESTIMATE so plan selection (and therefore last-bit
// rounding) is deterministic run to run. Transforms are planned out-of-place:
// `in` and `out` must be distinct. Execution is safe from multiple threads
// with distinct buffers.
class Fft {
public:
    explicit Fft(std::size_t n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    std::size_t size() const { return n_; }

    // out = DFT(in), kernel exp(-2 pi i k m / n), unnormalized.
    void forward(const std::complex<double>* in, std::complex<double>* out) const;
    // out = sum_m in[m] exp(+2 pi i k m / n), unnormalized.
    void backward(const std::complex<double>* in, std::complex<double>* out) const;

private:
    std::size_t n_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

// Aligned scratch buffer for new-array execution.
class Buffer {
public:
    explicit Buffer(std::size_t n);
    ~Buffer();
    Buffer(const Buffer&) = delete;
    Buffer& operator=(const Buffer&) = delete;

    std::complex<double>* data() { return ptr_; }
    const std::complex<double>* data() const { return ptr_; }
    std::complex<double>& operator[](std::size_t i) { return ptr_[i]; }

private:
    std::complex<double>* ptr_;
};

std::size_t next_pow2(std::size_t n);

}  // namespace conceft::fft
