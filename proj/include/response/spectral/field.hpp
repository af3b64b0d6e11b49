#pragma once

#include <complex>
#include <span>
#include <vector>

#include "response/spectral/lattice.hpp"

namespace response::spectral {

/// Weighted norm parameters: analyticity width ρ and Sobolev index m.
/// m is real so fractional spaces H^s can be measured; the solvers use
/// integer m.
struct NormSpec {
    double rho = 0.0;
    double m = 0.0;

    void validate() const;
};

/// Complex Fourier coefficients (one n-vector per lattice mode).
/// Layout: coeffs[mode * n + component].
class FourierField {
public:
    explicit FourierField(SpectralLattice lattice);
    FourierField(SpectralLattice lattice, std::vector<cplx> coeffs);

    const SpectralLattice& lattice() const noexcept { return lattice_; }
    std::span<cplx> coeffs() noexcept { return coeffs_; }
    std::span<const cplx> coeffs() const noexcept { return coeffs_; }

    cplx& at(std::size_t mode, int component = 0) { return coeffs_[mode * lattice_.n() + component]; }
    cplx at(std::size_t mode, int component = 0) const { return coeffs_[mode * lattice_.n() + component]; }
    std::span<cplx> mode(std::size_t m) { return {coeffs_.data() + m * lattice_.n(), static_cast<std::size_t>(lattice_.n())}; }
    std::span<const cplx> mode(std::size_t m) const {
        return {coeffs_.data() + m * lattice_.n(), static_cast<std::size_t>(lattice_.n())};
    }

    /// Sets the real cosine/sine term amp·cos(k·θ + j x) (or sin) on one component,
    /// writing both ±k coefficients.
    void add_cos(std::span<const int> k, int j, int component, double amplitude);
    void add_sin(std::span<const int> k, int j, int component, double amplitude);

    FourierField& operator+=(const FourierField& other);
    FourierField& operator-=(const FourierField& other);
    FourierField& operator*=(cplx s);

    /// max over modes of |c(−k) − conj(c(k))|; zero for a real-valued function.
    double hermitian_defect() const;
    double max_abs() const;
    /// max |c| over the j = 0 slice (PDE zero-average constraint).
    double zero_slice_max() const;

private:
    void require_same_lattice(const FourierField& other) const;

    SpectralLattice lattice_;
    std::vector<cplx> coeffs_;
};

FourierField operator+(FourierField a, const FourierField& b);
FourierField operator-(FourierField a, const FourierField& b);
FourierField operator*(cplx s, FourierField a);

/// Copies the modes shared by field's lattice and `target` (restriction or
/// zero padding).  ω and n must agree.
FourierField transfer(const FourierField& field, const SpectralLattice& target);

}  // namespace response::spectral
