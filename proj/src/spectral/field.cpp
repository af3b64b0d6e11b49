#include "response/spectral/field.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "response/common/error.hpp"

namespace response::spectral {

void NormSpec::validate() const {
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw InputError(fmt::format("rho must be ≥ 0, got {}", rho), "norm.rho");
    if (!(m >= 0.0) || !std::isfinite(m)) throw InputError(fmt::format("m must be ≥ 0, got {}", m), "norm.m");
}

FourierField::FourierField(SpectralLattice lattice)
    : lattice_(std::move(lattice)), coeffs_(lattice_.size(), cplx{}) {}

FourierField::FourierField(SpectralLattice lattice, std::vector<cplx> coeffs)
    : lattice_(std::move(lattice)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != lattice_.size()) {
        throw InputError(fmt::format("coefficient count {} does not match lattice size {}", coeffs_.size(),
                                     lattice_.size()));
    }
}

void FourierField::add_cos(std::span<const int> k, int j, int component, double amplitude) {
    if (component < 0 || component >= lattice_.n()) throw InputError("component out of range", "component");
    const std::size_t m = lattice_.index_of(k, j);
    const std::size_t mm = lattice_.mirror(m);
    if (m == mm) {
        at(m, component) += amplitude;
    } else {
        at(m, component) += 0.5 * amplitude;
        at(mm, component) += 0.5 * amplitude;
    }
}

void FourierField::add_sin(std::span<const int> k, int j, int component, double amplitude) {
    if (component < 0 || component >= lattice_.n()) throw InputError("component out of range", "component");
    const std::size_t m = lattice_.index_of(k, j);
    const std::size_t mm = lattice_.mirror(m);
    if (m == mm) return;  // sin(0) vanishes
    // sin φ = (e^{iφ} − e^{−iφ}) / 2i
    at(m, component) += cplx(0.0, -0.5 * amplitude);
    at(mm, component) += cplx(0.0, 0.5 * amplitude);
}

void FourierField::require_same_lattice(const FourierField& other) const {
    if (!(lattice_ == other.lattice_)) throw InputError("fields live on different lattices");
}

FourierField& FourierField::operator+=(const FourierField& other) {
    require_same_lattice(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

FourierField& FourierField::operator-=(const FourierField& other) {
    require_same_lattice(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

FourierField& FourierField::operator*=(cplx s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

double FourierField::hermitian_defect() const {
    double worst = 0.0;
    const int n = lattice_.n();
    for (std::size_t m = 0; m < lattice_.num_modes(); ++m) {
        const std::size_t mm = lattice_.mirror(m);
        for (int c = 0; c < n; ++c) worst = std::max(worst, std::abs(at(mm, c) - std::conj(at(m, c))));
    }
    return worst;
}

double FourierField::max_abs() const {
    double worst = 0.0;
    for (const auto& c : coeffs_) worst = std::max(worst, std::abs(c));
    return worst;
}

double FourierField::zero_slice_max() const {
    if (!lattice_.has_space()) return 0.0;
    double worst = 0.0;
    for (std::size_t m = 0; m < lattice_.num_modes(); ++m) {
        if (lattice_.j(m) != 0) continue;
        for (int c = 0; c < lattice_.n(); ++c) worst = std::max(worst, std::abs(at(m, c)));
    }
    return worst;
}

FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
FourierField operator*(cplx s, FourierField a) { return a *= s; }

FourierField transfer(const FourierField& field, const SpectralLattice& target) {
    const auto& src = field.lattice();
    if (src.omega() != target.omega() || src.n() != target.n() || src.has_space() != target.has_space()) {
        throw InputError("transfer requires matching ω, n and spatial layout");
    }
    FourierField out(target);
    const int n = src.n();
    for (std::size_t m = 0; m < src.num_modes(); ++m) {
        const auto k = src.k(m);
        const int j = src.j(m);
        if (!target.contains(k, j)) continue;
        const std::size_t t = target.index_of(k, j);
        for (int c = 0; c < n; ++c) out.at(t, c) = field.at(m, c);
    }
    return out;
}

}  // namespace response::spectral
