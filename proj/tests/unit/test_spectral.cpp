#include <doctest.h>

#include <cmath>
#include <numbers>

#include "response/common/error.hpp"
#include "response/spectral/norm.hpp"
#include "response/spectral/operators.hpp"
#include "response/spectral/transform.hpp"
#include "support.hpp"

using namespace response;
using namespace response::spectral;
using testing::max_diff;
using testing::random_field;

namespace {

const double sqrt2 = std::numbers::sqrt2;

std::vector<int> kv(std::initializer_list<int> k) { return k; }

}  // namespace

TEST_SUITE("lattice") {
    TEST_CASE("rational frequencies are rejected and the resonant vector is named") {
        const auto r = check_nonresonance(std::vector<double>{1.0, 0.5}, 4);
        CHECK(r.resonant);
        CHECK(r.min_abs == 0.0);
        CHECK(r.argmin == kv({1, -2}));
        CHECK_THROWS_AS(SpectralLattice::torus({1.0, 0.5}, 2), ResonanceError);
        try {
            SpectralLattice::torus({1.0, 0.5}, 4);
        } catch (const ResonanceError& e) {
            CHECK(e.k() == kv({1, -2}));
        }
    }

    TEST_CASE("sqrt2 scan matches an independent brute force") {
        const int bound = 16;
        const auto r = check_nonresonance(std::vector<double>{1.0, sqrt2}, bound);
        double best = 1e300;
        for (int a = -bound; a <= bound; ++a) {
            for (int b = -bound; b <= bound; ++b) {
                if ((a == 0 && b == 0) || std::abs(a) + std::abs(b) > bound) continue;
                best = std::min(best, std::abs(a + b * sqrt2));
            }
        }
        CHECK_FALSE(r.resonant);
        CHECK(r.min_abs > 0.0);
        CHECK(r.min_abs == doctest::Approx(best).epsilon(1e-12));
    }

    TEST_CASE("indexing and mirror") {
        const auto lat = SpectralLattice::torus_with_space({1.0, sqrt2}, 3, 2);
        CHECK(lat.num_modes() == 7u * 7u * 5u);
        for (std::size_t m = 0; m < lat.num_modes(); ++m) {
            auto k = lat.k(m);
            const int j = lat.j(m);
            CHECK(lat.index_of(k, j) == m);
            for (auto& v : k) v = -v;
            CHECK(lat.index_of(k, -j) == lat.mirror(m));
        }
        CHECK(lat.l1(lat.index_of(kv({1, -2}), 2)) == 5);
        CHECK(lat.euclid_sq(lat.index_of(kv({1, -2}), 2)) == 9);
        CHECK_THROWS_AS(SpectralLattice::torus({1.0}, 0), InputError);
        CHECK_THROWS_AS(SpectralLattice::torus({1.0, sqrt2, 1.1, 1.3, 1.7}, 1), InputError);
    }
}

TEST_SUITE("norm") {
    TEST_CASE("single mode closed form") {
        const auto lat = SpectralLattice::torus({1.0, sqrt2}, 4);
        FourierField u(lat);
        u.at(lat.index_of(kv({1, 0}))) = 1.0;
        CHECK(norm(u, {0.5, 2}) == doctest::Approx(2.0 * std::exp(0.5)).epsilon(1e-14));
        CHECK(norm(FourierField(lat), {0.3, 1}) == 0.0);
    }

    TEST_CASE("two-mode field against hand summation") {
        const auto lat = SpectralLattice::torus({1.0, sqrt2}, 4);
        for (int rep = 0; rep < 20; ++rep) {
            FourierField u(lat);
            const std::vector<int> k1{testing::uniform_int(-4, 4), testing::uniform_int(-4, 4)};
            std::vector<int> k2 = k1;
            k2[0] = k1[0] == 4 ? -4 : k1[0] + 1;
            const cplx c1(testing::uniform(-1, 1), testing::uniform(-1, 1));
            const cplx c2(testing::uniform(-1, 1), testing::uniform(-1, 1));
            u.at(lat.index_of(k1)) = c1;
            u.at(lat.index_of(k2)) = c2;
            const double rho = testing::uniform(0, 2), m = testing::uniform_int(0, 4);
            auto term = [&](const std::vector<int>& k, cplx c) {
                const double l1 = std::abs(k[0]) + std::abs(k[1]);
                const double e2 = k[0] * k[0] + k[1] * k[1];
                return std::norm(c) * std::exp(2 * rho * l1) * std::pow(e2 + 1, m);
            };
            const double expect = std::sqrt(term(k1, c1) + term(k2, c2));
            CHECK(norm(u, {rho, m}) == doctest::Approx(expect).epsilon(1e-14));
        }
    }

    TEST_CASE("homogeneity and triangle inequality") {
        const auto lat = SpectralLattice::torus({1.0, sqrt2}, 5, 2);
        for (int rep = 0; rep < 50; ++rep) {
            const auto u = random_field(lat, false), v = random_field(lat, false);
            const NormSpec s{testing::uniform(0, 1), static_cast<double>(testing::uniform_int(0, 3))};
            const cplx a(testing::uniform(-3, 3), testing::uniform(-3, 3));
            CHECK(norm(a * u, s) == doctest::Approx(std::abs(a) * norm(u, s)).epsilon(1e-13));
            CHECK(norm(u + v, s) <= (norm(u, s) + norm(v, s)) * (1 + 1e-14));
        }
    }

    TEST_CASE("large weights are summed in log space") {
        const auto lat = SpectralLattice::torus({1.0}, 400);
        FourierField u(lat);
        u.at(lat.index_of(kv({400}))) = 1e-300;
        u.at(lat.index_of(kv({399}))) = 1e-300;
        // e^{2·1·400} alone overflows a double, the product with 1e-600 does not.
        const double expect = std::exp(-300 * std::log(10.0) + 400) * std::sqrt(1 + std::exp(-2.0));
        CHECK(norm(u, {1.0, 0}) == doctest::Approx(expect).epsilon(1e-12));
        u.at(lat.index_of(kv({400}))) = 1.0;
        CHECK_THROWS_AS(norm(u, {2.0, 0}), OverflowError);
        CHECK_THROWS_AS(norm(u, {-1.0, 0}), InputError);
    }

    TEST_CASE("tail norm sees only the outer shell") {
        const auto lat = SpectralLattice::torus({1.0, sqrt2}, 3);
        FourierField u(lat);
        u.at(lat.index_of(kv({1, 1}))) = 1.0;
        CHECK(tail_norm(u, {}) == 0.0);
        u.at(lat.index_of(kv({3, 0}))) = 2.0;
        CHECK(tail_norm(u, {}) == doctest::Approx(2.0));
    }
}

TEST_SUITE("transform") {
    TEST_CASE("round trip is the identity") {
        for (auto lat : {SpectralLattice::torus({1.0, sqrt2}, 8, 2), SpectralLattice::torus_with_space({1.0}, 5, 7),
                         SpectralLattice::torus({1.0, sqrt2, std::sqrt(3.0)}, 3)}) {
            const auto u = random_field(lat, false);
            const auto back = analyze(synthesize(u, oversampled_grid(lat, 1)), lat);
            CHECK(max_diff(back, u) <= 1e-13 * u.max_abs());
        }
    }

    TEST_CASE("cos on eight nodes") {
        const auto lat = SpectralLattice::torus({1.0}, 2);
        FourierField u(lat);
        u.add_cos(kv({1}), 0, 0, 1.0);
        const auto g = synthesize(u, GridShape{{8}});
        for (int i = 0; i < 8; ++i) {
            CHECK(g.data[i].real() == doctest::Approx(std::cos(2 * std::numbers::pi * i / 8)));
            CHECK(std::abs(g.data[i].imag()) < 1e-15);
        }
    }

    TEST_CASE("refined grids give the same coefficients") {
        const auto lat = SpectralLattice::torus({1.0, sqrt2}, 6);
        const auto u = random_field(lat);
        const GridShape g1{{14, 14}}, g2{{28, 28}};
        CHECK(max_diff(analyze(synthesize(u, g1), lat), analyze(synthesize(u, g2), lat)) <= 1e-14);
    }

    TEST_CASE("undersized grids are refused") {
        const auto lat = SpectralLattice::torus({1.0}, 4);
        CHECK_THROWS_AS(synthesize(FourierField(lat), GridShape{{8}}), InputError);
    }

    TEST_CASE("point evaluation agrees with the grid") {
        const auto lat = SpectralLattice::torus({1.0, sqrt2}, 4);
        const auto u = random_field(lat);
        const auto g = synthesize(u, GridShape{{9, 10}});
        const std::vector<double> theta{2 * std::numbers::pi * 3 / 9, 2 * std::numbers::pi * 7 / 10};
        CHECK(std::abs(evaluate(u, theta)[0] - g.data[3 * 10 + 7]) < 1e-13);
    }
}

TEST_SUITE("operators") {
    TEST_CASE("single-mode and binomial products") {
        const auto lat = SpectralLattice::torus({1.0}, 4);
        FourierField e1(lat);
        e1.at(lat.index_of(kv({1}))) = 1.0;
        const auto sq = product(e1, e1);
        FourierField expect(lat);
        expect.at(lat.index_of(kv({2}))) = 1.0;
        CHECK(max_diff(sq, expect) < 1e-15);

        auto w = e1;
        w.at(lat.zero_mode()) = 1.0;
        expect.at(lat.zero_mode()) = 1.0;
        expect.at(lat.index_of(kv({1}))) = 2.0;
        CHECK(max_diff(product(w, w), expect) < 1e-15);
    }

    TEST_CASE("product equals a direct truncated convolution") {
        const auto lat = SpectralLattice::torus({1.0, sqrt2}, 8);
        const auto u = random_field(lat), v = random_field(lat);
        const auto p = product(u, v);
        FourierField conv(lat);
        for (std::size_t a = 0; a < lat.num_modes(); ++a) {
            const auto ka = lat.k(a);
            for (std::size_t b = 0; b < lat.num_modes(); ++b) {
                auto kb = lat.k(b);
                for (int i = 0; i < 2; ++i) kb[i] += ka[i];
                if (!lat.contains(kb)) continue;
                conv.at(lat.index_of(kb)) += u.at(a) * v.at(b);
            }
        }
        CHECK(max_diff(p, conv) <= 1e-12);
        CHECK(p.hermitian_defect() <= 1e-12);
    }

    TEST_CASE("product equals the zero-padded grid product") {
        const auto lat = SpectralLattice::torus({1.0, sqrt2}, 8);
        const auto u = random_field(lat), v = random_field(lat);
        const GridShape g{{2 * (2 * 8 + 1), 2 * (2 * 8 + 1)}};
        auto gu = synthesize(u, g);
        const auto gv = synthesize(v, g);
        for (std::size_t i = 0; i < gu.data.size(); ++i) gu.data[i] *= gv.data[i];
        CHECK(max_diff(product(u, v), analyze(gu, lat)) <= 1e-10);
    }

    TEST_CASE("compose: constants, cubic identity, piecewise per node") {
        const auto lat = SpectralLattice::torus({1.0}, 6);
        FourierField c(lat);
        c.at(lat.zero_mode()) = 0.7;
        const auto sq = compose(c, NonlinearitySpec::polynomial({{0, 0, 1}}));
        CHECK(std::abs(sq.at(lat.zero_mode()) - 0.49) < 1e-15);

        FourierField u(lat);
        u.add_cos(kv({1}), 0, 0, 1.0);
        FourierField expect(lat);
        expect.add_cos(kv({1}), 0, 0, 0.75);
        expect.add_cos(kv({3}), 0, 0, 0.25);
        CHECK(max_diff(compose(u, NonlinearitySpec::polynomial({{0, 0, 0, 1}})), expect) < 1e-15);

        PiecewiseLinear pw{{0.0}, {-0.05, 0.05}, 0.0};
        const auto g = NonlinearitySpec::piecewise({pw});
        const auto lat7 = SpectralLattice::torus({1.0}, 7);
        const auto r = random_field(lat7);
        const GridShape grid{{32}};
        auto values = synthesize(r, grid);
        for (auto& z : values.data) z = pw(z.real());
        const auto oracle = analyze(values, lat7);
        const auto got = compose(r, g, grid);
        CHECK(max_diff(got, oracle) <= 1e-14);
        CHECK(got.hermitian_defect() <= 1e-12);
    }

    TEST_CASE("compose refuses complex input to piecewise maps and non-finite output") {
        const auto lat = SpectralLattice::torus({1.0}, 4);
        const auto u = random_field(lat, false);
        CHECK_THROWS_AS(compose(u, NonlinearitySpec::piecewise({PiecewiseLinear{{0.0}, {0.0, 1.0}, 0.0}})),
                        InputError);
        auto bad = NonlinearitySpec::callable(
            1, [](std::span<const cplx> x, std::span<cplx> y) { y[0] = 1.0 / (x[0] - x[0]); }, nullptr, 1.0);
        CHECK_THROWS_AS(compose(random_field(lat), bad), NumericalError);
    }

    TEST_CASE("callable sine agrees with its Taylor polynomial on small data") {
        const auto lat = SpectralLattice::torus({1.0, sqrt2}, 5);
        auto u = random_field(lat, true, 1.0);
        u *= 1e-3 / u.max_abs();
        auto g = NonlinearitySpec::callable(
            1, [](std::span<const cplx> x, std::span<cplx> y) { y[0] = std::sin(x[0]) - x[0]; }, nullptr, 1.0);
        const auto taylor = NonlinearitySpec::polynomial({{0, 0, 0, -1.0 / 6, 0, 1.0 / 120}});
        CHECK(max_diff(compose(u, g), compose(u, taylor)) < 1e-17);
        CHECK(compose_aliasing(u, g) < 1e-15);
    }

    TEST_CASE("derivatives") {
        const auto lat = SpectralLattice::torus({1.0, sqrt2}, 3);
        FourierField u(lat);
        u.at(lat.index_of(kv({1, 0}))) = 1.0;
        CHECK(std::abs(directional_derivative(u).at(lat.index_of(kv({1, 0}))) - cplx(0, 1)) < 1e-15);
        FourierField w(lat);
        w.at(lat.index_of(kv({1, 1}))) = 1.0;
        const cplx d2 = directional_derivative(w, 2).at(lat.index_of(kv({1, 1})));
        CHECK(d2.real() == doctest::Approx(-(1 + sqrt2) * (1 + sqrt2)).epsilon(1e-15));
        CHECK_THROWS_AS(spatial_derivative(u, 2), InputError);

        const auto lx = SpectralLattice::torus_with_space({1.0}, 2, 3);
        FourierField ex(lx);
        ex.at(lx.index_of(kv({0}), 1)) = 1.0;
        CHECK(std::abs(spatial_derivative(ex, 2).at(lx.index_of(kv({0}), 1)) + 1.0) < 1e-15);

        const auto r = random_field(lx, true, 0.0, true);
        CHECK(directional_derivative(r, 3).hermitian_defect() <= 1e-12);
        CHECK(spatial_derivative(r, 4).zero_slice_max() == 0.0);
    }

    TEST_CASE("Cauchy decay fit") {
        const auto lat = SpectralLattice::torus({1.0, sqrt2}, 10);
        FourierField u(lat);
        for (std::size_t m = 0; m < lat.num_modes(); ++m) u.at(m) = std::exp(-0.7 * lat.l1(m));
        const auto fit = cauchy_decay_fit(u);
        CHECK(fit.rho == doctest::Approx(0.7).epsilon(1e-6));
        CHECK(fit.M == doctest::Approx(1.0).epsilon(1e-6));

        FourierField flat(lat);
        for (std::size_t m = 0; m < lat.num_modes(); ++m) flat.at(m) = 1.0;
        CHECK(std::abs(cauchy_decay_fit(flat).rho) < 1e-12);

        FourierField two(lat);
        two.at(0) = 1.0;
        two.at(1) = 1.0;
        CHECK_THROWS_AS(cauchy_decay_fit(two), InputError);
    }
}
