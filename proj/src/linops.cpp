#include "tlurkit/linops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tlurkit/error.hpp"

namespace tlurkit {

namespace {

void require_finite(const ComplexMatrix& m, const char* what) {
    if (!m.allFinite()) {
        throw Error(ErrorCode::invalid_argument, std::string(what) + ": non-finite entries");
    }
}

void require_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw Error(ErrorCode::dimension_mismatch,
                    std::string(what) + ": expected a non-empty square matrix, got " +
                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

} // namespace

double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(max_abs(m), 1.0);
    return max_abs(m - m.adjoint()) <= tol * scale;
}

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
    require_square(m_, "HermitianOperator");
    require_finite(m_, "HermitianOperator");
    // Relative to the largest entry; an all-zero operator is trivially Hermitian.
    const double scale = max_abs(m_);
    if (max_abs(m_ - m_.adjoint()) > kValidationTol * scale) {
        throw Error(ErrorCode::invalid_argument, "HermitianOperator: matrix is not Hermitian");
    }
    m_ = 0.5 * (m_ + m_.adjoint()).eval();
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return HermitianOperator(ComplexMatrix::Zero(n, n));
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return HermitianOperator(ComplexMatrix::Identity(n, n));
}

HermitianOperator HermitianOperator::operator-() const {
    return HermitianOperator(-m_);
}

HermitianOperator operator*(double s, const HermitianOperator& op) {
    return HermitianOperator(s * op.m_);
}

DensityMatrix::DensityMatrix(std::size_t dimA, std::size_t dimB, ComplexMatrix m)
    : dimA_(dimA), dimB_(dimB), m_(std::move(m)) {
    if (dimA == 0 || dimB == 0) {
        throw Error(ErrorCode::dimension_mismatch, "DensityMatrix: local dimensions must be positive");
    }
    require_square(m_, "DensityMatrix");
    if (static_cast<std::size_t>(m_.rows()) != dimA * dimB) {
        throw Error(ErrorCode::dimension_mismatch,
                    "DensityMatrix: matrix size " + std::to_string(m_.rows()) + " does not match dims " +
                        std::to_string(dimA) + "x" + std::to_string(dimB));
    }
    require_finite(m_, "DensityMatrix");
    if (max_abs(m_ - m_.adjoint()) > kValidationTol) {
        throw Error(ErrorCode::invalid_state, "DensityMatrix: matrix is not Hermitian");
    }
    m_ = 0.5 * (m_ + m_.adjoint()).eval();
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > kValidationTol) {
        throw Error(ErrorCode::invalid_state, "DensityMatrix: trace is " + std::to_string(tr) + ", expected 1");
    }
    const double min_eig = eig_hermitian(m_).values(0);
    if (min_eig < -kValidationTol) {
        throw Error(ErrorCode::invalid_state,
                    "DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
    }
}

DensityMatrix DensityMatrix::single(ComplexMatrix m) {
    const auto d = static_cast<std::size_t>(m.rows());
    return DensityMatrix(d, 1, std::move(m));
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix partial_trace(const DensityMatrix& rho, Subsystem traced) {
    const auto dA = static_cast<Eigen::Index>(rho.dimA());
    const auto dB = static_cast<Eigen::Index>(rho.dimB());
    const ComplexMatrix& m = rho.matrix();
    if (traced == Subsystem::B) {
        ComplexMatrix out = ComplexMatrix::Zero(dA, dA);
        for (Eigen::Index i = 0; i < dA; ++i)
            for (Eigen::Index j = 0; j < dA; ++j)
                for (Eigen::Index k = 0; k < dB; ++k) out(i, j) += m(i * dB + k, j * dB + k);
        return out;
    }
    ComplexMatrix out = ComplexMatrix::Zero(dB, dB);
    for (Eigen::Index k = 0; k < dB; ++k)
        for (Eigen::Index l = 0; l < dB; ++l)
            for (Eigen::Index i = 0; i < dA; ++i) out(k, l) += m(i * dB + k, i * dB + l);
    return out;
}

ComplexMatrix partial_transpose(const DensityMatrix& rho, Subsystem transposed) {
    const auto dA = static_cast<Eigen::Index>(rho.dimA());
    const auto dB = static_cast<Eigen::Index>(rho.dimB());
    const ComplexMatrix& m = rho.matrix();
    ComplexMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < dA; ++i)
        for (Eigen::Index k = 0; k < dB; ++k)
            for (Eigen::Index j = 0; j < dA; ++j)
                for (Eigen::Index l = 0; l < dB; ++l) {
                    const Complex v = m(i * dB + k, j * dB + l);
                    if (transposed == Subsystem::B) {
                        out(i * dB + l, j * dB + k) = v;
                    } else {
                        out(j * dB + k, i * dB + l) = v;
                    }
                }
    return out;
}

ComplexMatrix realign(const DensityMatrix& rho) {
    const auto dA = static_cast<Eigen::Index>(rho.dimA());
    const auto dB = static_cast<Eigen::Index>(rho.dimB());
    const ComplexMatrix& m = rho.matrix();
    ComplexMatrix out(dA * dA, dB * dB);
    for (Eigen::Index i = 0; i < dA; ++i)
        for (Eigen::Index j = 0; j < dA; ++j)
            for (Eigen::Index k = 0; k < dB; ++k)
                for (Eigen::Index l = 0; l < dB; ++l) out(i * dA + j, k * dB + l) = m(i * dB + k, j * dB + l);
    return out;
}

namespace {

void require_same_dim(const HermitianOperator& op, const ComplexMatrix& rho) {
    if (static_cast<Eigen::Index>(op.dim()) != rho.rows() || rho.rows() != rho.cols()) {
        throw Error(ErrorCode::dimension_mismatch,
                    "operator of dimension " + std::to_string(op.dim()) + " applied to state of dimension " +
                        std::to_string(rho.rows()));
    }
}

} // namespace

double expectation(const HermitianOperator& op, const ComplexMatrix& rho) {
    require_same_dim(op, rho);
    // Tr(rho A) = sum_ij rho_ij A_ji
    return (rho.array() * op.matrix().transpose().array()).sum().real();
}

double expectation(const HermitianOperator& op, const DensityMatrix& rho) {
    return expectation(op, rho.matrix());
}

double variance(const HermitianOperator& op, const ComplexMatrix& rho) {
    require_same_dim(op, rho);
    const ComplexMatrix sq = op.matrix() * op.matrix();
    const double second = (rho.array() * sq.transpose().array()).sum().real();
    const double mean = expectation(op, rho);
    return std::max(0.0, second - mean * mean);
}

double variance(const HermitianOperator& op, const DensityMatrix& rho) {
    return variance(op, rho.matrix());
}

double purity(const ComplexMatrix& rho) {
    // Tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho.
    return rho.squaredNorm();
}

EigenDecomposition eig_hermitian(const ComplexMatrix& m) {
    require_square(m, "eig_hermitian");
    require_finite(m, "eig_hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::numerical_failure, "eig_hermitian: eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

SingularValueDecomposition svd(const ComplexMatrix& m) {
    require_finite(m, "svd");
    Eigen::JacobiSVD<ComplexMatrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::numerical_failure, "svd: decomposition did not converge");
    }
    return {solver.singularValues(), solver.matrixU(), solver.matrixV()};
}

double trace_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::numerical_failure, "trace_norm: decomposition did not converge");
    }
    return solver.singularValues().sum();
}

} // namespace tlurkit
