#include "response/multiplier/domain.hpp"

#include <cmath>

#include <fmt/format.h>

#include "response/common/error.hpp"

namespace response::multiplier {

EpsilonDomain EpsilonDomain::cone(double sigma, double mu) {
    EpsilonDomain d{Kind::complex_cone, sigma, mu};
    d.validate();
    return d;
}

EpsilonDomain EpsilonDomain::annulus(double sigma) {
    EpsilonDomain d{Kind::real_annulus, sigma, 0.0};
    d.validate();
    return d;
}

void EpsilonDomain::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InputError(fmt::format("sigma must be > 0, got {}", sigma), "domain.sigma");
    if (kind == Kind::complex_cone && (!(mu > 0.0) || !std::isfinite(mu))) {
        throw InputError(fmt::format("mu must be > 0, got {}", mu), "domain.mu");
    }
}

double EpsilonDomain::half_angle() const { return kind == Kind::complex_cone ? std::atan(1.0 / mu) : 0.0; }

bool EpsilonDomain::contains(cplx eps, double slack) const {
    const double r = std::abs(eps);
    if (r < sigma * (1 - slack) || r > 2 * sigma * (1 + slack)) return false;
    if (kind == Kind::real_annulus) return eps.imag() == 0.0;
    return eps.real() >= mu * std::abs(eps.imag()) - slack * r;
}

namespace {

std::vector<double> spread(double lo, double hi, int count) {
    std::vector<double> v;
    if (count == 1) return {0.5 * (lo + hi)};
    for (int i = 0; i < count; ++i) v.push_back(lo + (hi - lo) * i / (count - 1));
    return v;
}

}  // namespace

std::vector<cplx> sample_domain(const EpsilonDomain& dom, int count) {
    dom.validate();
    if (count < 1) throw InputError("sample count must be ≥ 1", "count");
    const double s = dom.sigma;
    std::vector<cplx> out;

    if (dom.kind == EpsilonDomain::Kind::real_annulus) {
        const int pos = (count + 1) / 2, neg = count - pos;
        auto p = spread(s, 2 * s, pos);
        auto q = neg > 0 ? spread(s, 2 * s, neg) : std::vector<double>{};
        for (int i = 0; i < pos; ++i) {
            out.emplace_back(p[i], 0.0);
            if (i < neg) out.emplace_back(-q[i], 0.0);
        }
        return out;
    }

    const double phi = dom.half_angle();
    const cplx up = std::polar(1.0, phi), down = std::polar(1.0, -phi);
    const std::vector<cplx> anchors{1.5 * s, 1.5 * s * up, 1.5 * s * down, s * up, s * down,
                                    2 * s * up, 2 * s * down, s, 2 * s};
    for (const auto& a : anchors) {
        if (static_cast<int>(out.size()) == count) return out;
        out.push_back(a);
    }
    const int rest = count - static_cast<int>(out.size());
    if (rest <= 0) return out;
    const int nr = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(rest))));
    const int na = (rest + nr - 1) / nr;
    // Interior polar grid, offset from the anchors.
    for (int i = 0; i < nr && static_cast<int>(out.size()) < count; ++i) {
        const double r = s * (1.0 + (i + 0.5) / nr);
        for (int j = 0; j < na && static_cast<int>(out.size()) < count; ++j) {
            const double t = -phi + 2 * phi * (j + 0.5) / na;
            out.push_back(std::polar(r, t));
        }
    }
    return out;
}

}  // namespace response::multiplier
