#pragma once

// Dense complex linear algebra for small bipartite systems.
//
// Composite basis index convention: |i_A, i_B> maps to i_A * dimB + i_B,
// i.e. subsystem B varies fastest. Every routine in this library that
// splits or joins a bipartite index uses this ordering.

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace tlurkit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Absolute tolerance on max-norm used when validating Hermiticity, trace and
/// positivity.
inline constexpr double kValidationTol = 1e-10;

enum class Subsystem { A, B };

/// Square matrix checked to be Hermitian at construction.
class HermitianOperator {
public:
    explicit HermitianOperator(ComplexMatrix m);

    static HermitianOperator zero(std::size_t dim);
    static HermitianOperator identity(std::size_t dim);

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    const ComplexMatrix& matrix() const { return m_; }

    HermitianOperator operator-() const;
    friend HermitianOperator operator*(double s, const HermitianOperator& op);

private:
    ComplexMatrix m_;
};

/// Validated bipartite mixed state on C^dimA (x) C^dimB.
class DensityMatrix {
public:
    DensityMatrix(std::size_t dimA, std::size_t dimB, ComplexMatrix m);

    /// Validates a single-system state by treating it as dim (x) 1.
    static DensityMatrix single(ComplexMatrix m);

    std::size_t dimA() const { return dimA_; }
    std::size_t dimB() const { return dimB_; }
    std::size_t dim() const { return dimA_ * dimB_; }
    const ComplexMatrix& matrix() const { return m_; }

private:
    std::size_t dimA_;
    std::size_t dimB_;
    ComplexMatrix m_;
};

struct EigenDecomposition {
    RealVector values;    // ascending
    ComplexMatrix vectors; // columns
};

struct SingularValueDecomposition {
    RealVector values; // descending, non-negative
    ComplexMatrix u;
    ComplexMatrix v; // m = u * diag(values) * v^dagger
};

double max_abs(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kValidationTol);

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out `traced` and returns the reduced state of the other subsystem.
ComplexMatrix partial_trace(const DensityMatrix& rho, Subsystem traced);
ComplexMatrix partial_transpose(const DensityMatrix& rho, Subsystem transposed);

/// R[(i,j),(k,l)] = rho[(i,k),(j,l)], a dimA^2 x dimB^2 matrix. Row index
/// (i,j) is the row-major vectorisation of an operator on A, column index
/// (k,l) the same for B.
ComplexMatrix realign(const DensityMatrix& rho);

double expectation(const HermitianOperator& op, const ComplexMatrix& rho);
double expectation(const HermitianOperator& op, const DensityMatrix& rho);

/// <op^2> - <op>^2, with round-off negatives clipped to zero.
double variance(const HermitianOperator& op, const ComplexMatrix& rho);
double variance(const HermitianOperator& op, const DensityMatrix& rho);

/// Tr(rho^2) for a Hermitian rho.
double purity(const ComplexMatrix& rho);

EigenDecomposition eig_hermitian(const ComplexMatrix& m);
SingularValueDecomposition svd(const ComplexMatrix& m);
double trace_norm(const ComplexMatrix& m);

} // namespace tlurkit
