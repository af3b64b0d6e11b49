#include "response/multiplier/linear_part.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "response/common/error.hpp"

namespace response::multiplier {

LinearPart::LinearPart(Eigen::MatrixXd A) : A_(std::move(A)) {
    if (A_.rows() < 1 || A_.rows() != A_.cols()) throw InputError("A must be a nonempty square matrix", "A");
    if (!A_.allFinite()) throw InputError("A has non-finite entries", "A");

    const bool diagonal = (A_ - Eigen::MatrixXd(A_.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
    if (diagonal) {
        // The only Jordan data derived automatically: Φ = I.
        for (int i = 0; i < n(); ++i) blocks_.push_back({A_(i, i), 1});
        check_jordan(Eigen::MatrixXd::Identity(n(), n()));
    } else {
        check_spectrum();
    }
}

LinearPart::LinearPart(Eigen::MatrixXd A, std::vector<JordanBlock> blocks, std::optional<Eigen::MatrixXd> phi)
    : A_(std::move(A)), blocks_(std::move(blocks)) {
    if (A_.rows() < 1 || A_.rows() != A_.cols()) throw InputError("A must be a nonempty square matrix", "A");
    if (!A_.allFinite()) throw InputError("A has non-finite entries", "A");
    if (blocks_.empty()) {
        check_spectrum();
        return;
    }
    check_jordan(std::move(phi));
}

Eigen::MatrixXd LinearPart::jordan_matrix() const {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n(), n());
    int at = 0;
    for (const auto& b : blocks_) {
        for (int r = 0; r < b.size; ++r) {
            J(at + r, at + r) = b.lambda;
            if (r > 0) J(at + r, at + r - 1) = 1.0;
        }
        at += b.size;
    }
    return J;
}

double LinearPart::jordan_defect() const {
    if (!has_jordan()) return 0.0;
    return (A_ * phi_ - phi_ * jordan_matrix()).cwiseAbs().maxCoeff();
}

void LinearPart::check_spectrum() {
    Eigen::EigenSolver<Eigen::MatrixXd> es(A_, false);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue computation for A failed");
    const double scale = std::max(1.0, A_.cwiseAbs().maxCoeff());
    eigenvalues_.clear();
    for (int i = 0; i < n(); ++i) {
        const auto z = es.eigenvalues()(i);
        // Defective eigenvalues split by O(sqrt(eps)) under perturbation.
        if (std::abs(z.imag()) > 1e-6 * scale) {
            throw InputError(fmt::format("A has a non-real eigenvalue {}{:+}i (spectrum must be real)", z.real(),
                                         z.imag()),
                             "A");
        }
        if (std::abs(z) <= 1e-12 * scale) throw InputError("A has a zero eigenvalue", "A");
        eigenvalues_.push_back(z.real());
    }
    std::sort(eigenvalues_.begin(), eigenvalues_.end());
}

void LinearPart::check_jordan(std::optional<Eigen::MatrixXd> phi) {
    int total = 0;
    eigenvalues_.clear();
    for (const auto& b : blocks_) {
        if (b.size < 1) throw InputError("Jordan block sizes must be ≥ 1", "jordan");
        if (!std::isfinite(b.lambda) || b.lambda == 0.0) {
            throw InputError(fmt::format("Jordan eigenvalue {} must be real and nonzero", b.lambda), "jordan");
        }
        total += b.size;
        for (int r = 0; r < b.size; ++r) eigenvalues_.push_back(b.lambda);
    }
    std::sort(eigenvalues_.begin(), eigenvalues_.end());
    if (total != n()) throw InputError(fmt::format("Jordan block sizes sum to {}, expected n = {}", total, n()), "jordan");

    if (phi) {
        phi_ = std::move(*phi);
    } else {
        phi_ = Eigen::MatrixXd::Identity(n(), n());
    }
    if (phi_.rows() != n() || phi_.cols() != n()) throw InputError("phi must be n×n", "phi");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(phi_);
    const auto& s = svd.singularValues();
    phi_cond_ = s(0) / s(n() - 1);
    if (!std::isfinite(phi_cond_) || phi_cond_ > 1e12) {
        throw InputError(fmt::format("phi is singular or ill-conditioned (cond = {:.3e})", phi_cond_), "phi");
    }
    phi_inv_ = phi_.inverse();

    const double defect = jordan_defect();
    const double scale = std::max(1.0, A_.cwiseAbs().maxCoeff()) * std::max(1.0, phi_.cwiseAbs().maxCoeff());
    if (defect > 1e-10 * scale) {
        throw InputError(fmt::format("A·phi − phi·J = {:.3e}: phi is not a Jordan basis for the declared blocks", defect),
                         phi ? "phi" : "jordan");
    }
}

}  // namespace response::multiplier
