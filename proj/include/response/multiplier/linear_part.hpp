#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace response::multiplier {

struct JordanBlock {
    double lambda = 0.0;
    int size = 1;
};

/// The linear part A of g(x) = A x + ĝ(x), with optional Jordan data.
///
/// Convention: J is block diagonal with lower-bidiagonal blocks (λ on the
/// diagonal, 1 below it) and the columns of Φ are generalized
/// eigenvectors, A Φ = Φ J.  Jordan data is never computed from A except
/// in the trivial diagonal case (Φ = I).
///
/// Construction checks the spectral hypothesis: eigenvalues real and
/// nonzero.
class LinearPart {
public:
    explicit LinearPart(Eigen::MatrixXd A);
    LinearPart(Eigen::MatrixXd A, std::vector<JordanBlock> blocks, std::optional<Eigen::MatrixXd> phi);

    static LinearPart scalar(double lambda) { return LinearPart(Eigen::MatrixXd::Constant(1, 1, lambda)); }

    int n() const noexcept { return static_cast<int>(A_.rows()); }
    const Eigen::MatrixXd& A() const noexcept { return A_; }

    bool has_jordan() const noexcept { return !blocks_.empty(); }
    const std::vector<JordanBlock>& blocks() const noexcept { return blocks_; }
    const Eigen::MatrixXd& phi() const noexcept { return phi_; }
    const Eigen::MatrixXd& phi_inverse() const noexcept { return phi_inv_; }
    /// 2-norm condition number of Φ (1 without Jordan data).
    double phi_condition() const noexcept { return phi_cond_; }
    Eigen::MatrixXd jordan_matrix() const;

    /// Real eigenvalues of A (from the Jordan data when present).
    const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }

    /// ‖A Φ − Φ J‖_max (0 without Jordan data).
    double jordan_defect() const;

private:
    void check_spectrum();
    void check_jordan(std::optional<Eigen::MatrixXd> phi);

    Eigen::MatrixXd A_;
    std::vector<JordanBlock> blocks_;
    Eigen::MatrixXd phi_, phi_inv_;
    double phi_cond_ = 1.0;
    std::vector<double> eigenvalues_;
};

}  // namespace response::multiplier
