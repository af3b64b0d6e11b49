#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace response::spectral {

using cplx = std::complex<double>;

/// Continuous scalar piecewise-linear map.  slopes[i] applies left of
/// breakpoints[i]; the last slope applies right of the last breakpoint.
/// At a breakpoint the left slope is used (left-continuous derivative).
struct PiecewiseLinear {
    std::vector<double> breakpoints;
    std::vector<double> slopes;
    double value_at_zero = 0.0;

    void validate() const;
    double operator()(double x) const;
    double slope_at(double x) const;
    double lipschitz() const;
};

/// The nonlinear part ĝ of g(x) = A x + ĝ(x), acting pointwise on R^n.
///
/// Three kinds:
///  - polynomial: ĝ_c(x) = Σ_p coeffs[c][p] x_c^p (componentwise, holomorphic);
///  - callable: an arbitrary smooth map given as a function on C^n;
///  - piecewise_linear: componentwise, real arguments only.
///
/// lip_hat is the declared global Lipschitz constant M (∞ when ĝ is not
/// globally Lipschitz, e.g. a cubic).
class NonlinearitySpec {
public:
    enum class Kind { polynomial, callable, piecewise_linear };

    using PointMap = std::function<void(std::span<const cplx> x, std::span<cplx> out)>;
    /// Writes the n×n Jacobian row-major into `jac`.
    using PointJacobian = std::function<void(std::span<const cplx> x, std::span<cplx> jac)>;

    static NonlinearitySpec zero(int n);
    static NonlinearitySpec polynomial(std::vector<std::vector<double>> coeffs);
    static NonlinearitySpec polynomial(std::vector<std::vector<double>> coeffs, double lip_hat);
    static NonlinearitySpec callable(int n, PointMap map, PointJacobian jacobian, double lip_hat,
                                     std::string name = "callable");
    static NonlinearitySpec piecewise(std::vector<PiecewiseLinear> components);
    static NonlinearitySpec piecewise(std::vector<PiecewiseLinear> components, double lip_hat);

    Kind kind() const noexcept { return kind_; }
    int n() const noexcept { return n_; }
    const std::string& name() const noexcept { return name_; }
    double lip_hat() const noexcept { return lip_hat_; }
    int oversample() const noexcept { return oversample_; }
    void set_oversample(int factor);

    /// Highest power with a nonzero coefficient (polynomial kind only).
    int degree() const;
    bool is_zero() const noexcept;
    bool accepts_complex() const noexcept { return kind_ != Kind::piecewise_linear; }
    const std::vector<std::vector<double>>& coefficients() const noexcept { return poly_; }
    const std::vector<PiecewiseLinear>& pieces() const noexcept { return pwl_; }

    void apply(std::span<const cplx> x, std::span<cplx> out) const;
    void jacobian(std::span<const cplx> x, std::span<cplx> jac) const;

    /// ĝ(0) = 0 and Dĝ(0) = 0 (the local hypothesis).
    bool vanishes_to_second_order() const;

    /// Lipschitz constant over {|x_c| ≤ radius}; exact for polynomials,
    /// lip_hat otherwise.
    double lipschitz_on_ball(double radius) const;

private:
    NonlinearitySpec() = default;

    Kind kind_ = Kind::polynomial;
    int n_ = 1;
    std::string name_;
    double lip_hat_ = 0.0;
    int oversample_ = 4;
    std::vector<std::vector<double>> poly_;
    std::vector<PiecewiseLinear> pwl_;
    PointMap map_;
    PointJacobian jac_;
};

}  // namespace response::spectral
