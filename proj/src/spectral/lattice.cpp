#include "response/spectral/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "response/common/error.hpp"

namespace response::spectral {

struct SpectralLattice::Tables {
    std::vector<double> omega;
    int K = 0;
    int J = 0;
    int n = 1;
    bool has_space = false;
    std::vector<int> extents;
    std::vector<std::size_t> strides;
    std::size_t num_modes = 0;

    std::vector<double> kdotw;
    std::vector<int> l1;
    std::vector<int> esq;
    NonResonance nonres;
};

namespace {

// Roundoff scale of a dot product k·ω with |k|₁ = l1.
double dot_roundoff(int l1, double omega_max) {
    return 8.0 * std::numeric_limits<double>::epsilon() * l1 * omega_max;
}

bool lexicographically_shorter(const std::vector<int>& a, const std::vector<int>& b) {
    auto l1 = [](const std::vector<int>& v) {
        return std::accumulate(v.begin(), v.end(), 0, [](int s, int x) { return s + std::abs(x); });
    };
    const int la = l1(a), lb = l1(b);
    if (la != lb) return la < lb;
    return a > b;
}

}  // namespace

NonResonance check_nonresonance(std::span<const double> omega, int l1_bound) {
    const int d = static_cast<int>(omega.size());
    if (d < 1) throw InputError("frequency vector is empty", "omega");
    if (l1_bound < 1) throw InputError("non-resonance bound must be ≥ 1");
    double omega_max = 0.0;
    for (double w : omega) {
        if (!std::isfinite(w)) throw InputError("non-finite frequency", "omega");
        omega_max = std::max(omega_max, std::abs(w));
    }

    NonResonance best;
    best.min_abs = std::numeric_limits<double>::infinity();

    // Odometer over the box |k_i| ≤ bound, pruned to |k|₁ ≤ bound.
    std::vector<int> k(d, -l1_bound);
    for (;;) {
        int l1 = 0;
        for (int x : k) l1 += std::abs(x);
        // Only half of the lattice: first nonzero component positive.
        const auto first = std::find_if(k.begin(), k.end(), [](int x) { return x != 0; });
        if (l1 > 0 && l1 <= l1_bound && *first > 0) {
            double dot = 0.0;
            for (int i = 0; i < d; ++i) dot += k[i] * omega[i];
            const double a = std::abs(dot);
            const bool tie = a == best.min_abs;
            if (a < best.min_abs || (tie && lexicographically_shorter(k, best.argmin))) {
                best.min_abs = a;
                best.argmin = k;
                best.resonant = a <= dot_roundoff(l1, omega_max);
            }
        }
        int i = d - 1;
        while (i >= 0 && k[i] == l1_bound) k[i--] = -l1_bound;
        if (i < 0) break;
        ++k[i];
    }
    return best;
}

SpectralLattice SpectralLattice::torus(std::vector<double> omega, int K, int n) {
    return SpectralLattice(std::move(omega), K, n, std::nullopt);
}

SpectralLattice SpectralLattice::torus_with_space(std::vector<double> omega, int K, int J) {
    return SpectralLattice(std::move(omega), K, 1, J);
}

SpectralLattice::SpectralLattice(std::vector<double> omega, int K, int n, std::optional<int> J) {
    const int d = static_cast<int>(omega.size());
    if (d < 1 || d > 4) throw InputError(fmt::format("d must be in [1, 4], got {}", d), "omega");
    if (K < 1) throw InputError(fmt::format("K must be ≥ 1, got {}", K), "K");
    if (n < 1) throw InputError(fmt::format("n must be ≥ 1, got {}", n), "n");
    if (J && *J < 1) throw InputError(fmt::format("J must be ≥ 1, got {}", *J), "J");

    auto t = std::make_shared<Tables>();
    t->omega = std::move(omega);
    t->K = K;
    t->J = J.value_or(0);
    t->n = n;
    t->has_space = J.has_value();

    t->nonres = check_nonresonance(t->omega, 2 * K);
    if (t->nonres.resonant) {
        throw ResonanceError(fmt::format("frequency vector is resonant on the working lattice: "
                                         "k = ({}) gives |k·ω| = {:.3e}",
                                         fmt::join(t->nonres.argmin, ", "), t->nonres.min_abs),
                             t->nonres.argmin);
    }

    t->extents.assign(d, 2 * K + 1);
    if (t->has_space) t->extents.push_back(2 * t->J + 1);
    const int rank = static_cast<int>(t->extents.size());
    t->strides.assign(rank, 1);
    for (int i = rank - 2; i >= 0; --i) t->strides[i] = t->strides[i + 1] * t->extents[i + 1];
    t->num_modes = t->strides[0] * t->extents[0];

    t->kdotw.resize(t->num_modes);
    t->l1.resize(t->num_modes);
    t->esq.resize(t->num_modes);
    std::vector<int> idx(rank, 0);
    for (std::size_t m = 0; m < t->num_modes; ++m) {
        double dot = 0.0;
        int l1 = 0, esq = 0;
        for (int i = 0; i < rank; ++i) {
            const int off = (i < d) ? K : t->J;
            const int ki = idx[i] - off;
            if (i < d) dot += ki * t->omega[i];
            l1 += std::abs(ki);
            esq += ki * ki;
        }
        t->kdotw[m] = dot;
        t->l1[m] = l1;
        t->esq[m] = esq;
        for (int i = rank - 1; i >= 0; --i) {
            if (++idx[i] < t->extents[i]) break;
            idx[i] = 0;
        }
    }
    tables_ = std::move(t);
}

int SpectralLattice::d() const noexcept { return static_cast<int>(tables_->omega.size()); }
int SpectralLattice::K() const noexcept { return tables_->K; }
int SpectralLattice::J() const noexcept { return tables_->J; }
int SpectralLattice::n() const noexcept { return tables_->n; }
bool SpectralLattice::has_space() const noexcept { return tables_->has_space; }
const std::vector<double>& SpectralLattice::omega() const noexcept { return tables_->omega; }
std::vector<int> SpectralLattice::extents() const { return tables_->extents; }
std::size_t SpectralLattice::num_modes() const noexcept { return tables_->num_modes; }
double SpectralLattice::k_dot_omega(std::size_t mode) const noexcept { return tables_->kdotw[mode]; }
int SpectralLattice::l1(std::size_t mode) const noexcept { return tables_->l1[mode]; }
int SpectralLattice::euclid_sq(std::size_t mode) const noexcept { return tables_->esq[mode]; }
const NonResonance& SpectralLattice::nonresonance() const noexcept { return tables_->nonres; }

int SpectralLattice::j(std::size_t mode) const noexcept {
    if (!tables_->has_space) return 0;
    return static_cast<int>(mode % tables_->extents.back()) - tables_->J;
}

std::vector<int> SpectralLattice::k(std::size_t mode) const {
    const int dd = d();
    std::vector<int> out(dd);
    for (int i = 0; i < dd; ++i) {
        out[i] = static_cast<int>((mode / tables_->strides[i]) % tables_->extents[i]) - tables_->K;
    }
    return out;
}

bool SpectralLattice::on_boundary(std::size_t mode) const {
    for (int ki : k(mode)) {
        if (std::abs(ki) == K()) return true;
    }
    return has_space() && std::abs(j(mode)) == J();
}

bool SpectralLattice::contains(std::span<const int> k, int j) const noexcept {
    if (static_cast<int>(k.size()) != d()) return false;
    for (int ki : k) {
        if (std::abs(ki) > K()) return false;
    }
    if (has_space()) return std::abs(j) <= J();
    return j == 0;
}

std::size_t SpectralLattice::index_of(std::span<const int> k, int j) const {
    if (!contains(k, j)) {
        throw InputError(fmt::format("wavevector ({}; j={}) lies outside the lattice (K={}, J={})",
                                     fmt::join(k, ", "), j, K(), J()));
    }
    std::size_t m = 0;
    for (int i = 0; i < d(); ++i) m += static_cast<std::size_t>(k[i] + K()) * tables_->strides[i];
    if (has_space()) m += static_cast<std::size_t>(j + J());
    return m;
}

SpectralLattice SpectralLattice::with_cutoff(int K, std::optional<int> J) const {
    std::optional<int> space;
    if (has_space()) space = J.value_or(this->J());
    return SpectralLattice(omega(), K, n(), space);
}

bool operator==(const SpectralLattice& a, const SpectralLattice& b) {
    if (a.tables_ == b.tables_) return true;
    return a.omega() == b.omega() && a.K() == b.K() && a.J() == b.J() && a.n() == b.n() &&
           a.has_space() == b.has_space();
}

}  // namespace response::spectral
