#pragma once

// Thin RAII layer over FFTW's multi-dimensional complex transforms.

#include <complex>
#include <cstddef>
#include <vector>

namespace response::spectral::detail {

/// fftw_malloc'd complex array, so every buffer shares the SIMD alignment
/// the cached plans were made with.
class FftBuffer {
public:
    explicit FftBuffer(std::size_t size);
    ~FftBuffer();
    FftBuffer(const FftBuffer&) = delete;
    FftBuffer& operator=(const FftBuffer&) = delete;

    std::complex<double>* data() noexcept { return data_; }
    std::size_t size() const noexcept { return size_; }
    void zero();

private:
    std::complex<double>* data_;
    std::size_t size_;
};

/// In-place unnormalized transform, sign −1 (forward) or +1 (backward).
/// Safe to call concurrently; plan creation is serialized internally.
void transform_inplace(FftBuffer& buffer, const std::vector<int>& extents, int sign);

}  // namespace response::spectral::detail
