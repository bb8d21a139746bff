#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tlurkit/error.hpp"
#include "tlurkit/linops.hpp"

namespace tlurkit {

enum class BoundMode { analytic, numeric };

struct BoundOptions {
    BoundMode mode = BoundMode::analytic;
    std::uint64_t seed = 0;
    std::size_t restarts = 32;
    double tolerance = 1e-10;      // relative improvement that ends a descent
    std::size_t max_iterations = 20000;
};

/// Subtracted from the best numeric minimum so optimizer error cannot turn a
/// bound into a non-bound.
inline constexpr double kNumericBoundSafetyMargin = 1e-6;

struct BoundProvenance {
    BoundMode mode = BoundMode::analytic;
    std::uint64_t seed = 0;
    std::size_t restarts = 0;
    double tolerance = 0.0;
    double raw_minimum = 0.0; // numeric mode: best value found, before the safety margin
};

struct UncertaintyBound {
    double value;
    BoundProvenance provenance;
};

/// Thrown when the restart that produced the best value did not converge.
class BoundConvergenceError : public Error {
public:
    BoundConvergenceError(double best_value, ComplexVector best_state)
        : Error(ErrorCode::non_convergence,
                "uncertainty_bound: numeric minimisation did not converge (best value " + std::to_string(best_value) + ")"),
          best_value_(best_value), best_state_(std::move(best_state)) {}

    double best_value() const { return best_value_; }
    const ComplexVector& best_state() const { return best_state_; }

private:
    double best_value_;
    ComplexVector best_state_;
};

/// Sum of variances of `ops` in the pure state psi.
double variance_sum(std::span<const HermitianOperator> ops, const ComplexVector& psi);
double variance_sum(std::span<const HermitianOperator> ops, const ComplexMatrix& rho);

/// Smallest variance sum over `samples` Haar-random pure states.
double sampled_min_variance_sum(std::span<const HermitianOperator> ops, std::size_t samples, std::uint64_t seed);

/// Lower bound on sum_k Var(A_k) over all states.
///
/// Analytic mode recognises three closed forms and throws invalid_argument
/// otherwise:
///   - pairwise commuting operators: 0 (shared eigenvector);
///   - d^2 operators with Tr(A_k A_l) = c delta_kl: c (d - 1);
///   - d^2 - 1 traceless operators with Tr(A_k A_l) = c delta_kl: c (d - 1).
/// Zero operators are ignored when matching a pattern.
///
/// Numeric mode runs multi-start projected gradient descent over unit
/// vectors and returns max(0, best - kNumericBoundSafetyMargin). Restarts
/// use seeds derived from options.seed and are reduced in index order.
UncertaintyBound uncertainty_bound(std::span<const HermitianOperator> ops, const BoundOptions& options = {});

/// Hilbert-Schmidt orthonormal basis of Hermitian operators, Tr(G_k G_l) =
/// delta_kl, with exactly d^2 elements.
class LooBasis {
public:
    explicit LooBasis(std::vector<HermitianOperator> ops);

    std::size_t dim() const { return dim_; }
    const std::vector<HermitianOperator>& ops() const { return ops_; }

private:
    std::size_t dim_;
    std::vector<HermitianOperator> ops_;
};

/// Paired local observables {A_k}, {B_k} with certified bounds U_A, U_B.
///
/// Construction checks the lists have equal length and consistent
/// dimensions, and samples Haar-random pure states to reject a declared
/// bound that a sampled state beats by more than 1e-8.
class LocalObservableSet {
public:
    LocalObservableSet(std::vector<HermitianOperator> opsA, std::vector<HermitianOperator> opsB, double boundA,
                       double boundB, BoundProvenance provenance = {});

    std::size_t size() const { return opsA_.size(); }
    std::size_t dimA() const { return opsA_.front().dim(); }
    std::size_t dimB() const { return opsB_.front().dim(); }
    const std::vector<HermitianOperator>& opsA() const { return opsA_; }
    const std::vector<HermitianOperator>& opsB() const { return opsB_; }
    double boundA() const { return boundA_; }
    double boundB() const { return boundB_; }
    const BoundProvenance& provenance() const { return provenance_; }

private:
    std::vector<HermitianOperator> opsA_;
    std::vector<HermitianOperator> opsB_;
    double boundA_;
    double boundB_;
    BoundProvenance provenance_;
};

/// Generalised Gell-Mann matrices, Tr(l_i l_j) = 2 delta_ij. Order: for each
/// pair j < k the symmetric then antisymmetric off-diagonal generator, then
/// the d - 1 diagonal ones.
std::vector<HermitianOperator> su_generators(std::size_t d);

/// su_generators(d) / sqrt(2) followed by I / sqrt(d).
LooBasis loo_basis(std::size_t d);

/// A_k = G^A_k, B_k = -G^B_k. The shorter list is zero-padded when the
/// dimensions differ. Bounds d_A - 1 and d_B - 1.
LocalObservableSet loo_pair(const LooBasis& a, const LooBasis& b);

/// Inverse of loo_pair: recovers (G^A, G^B) from a complete LOO pair,
/// dropping zero padding. Throws if either side is not a complete LOO basis.
std::pair<LooBasis, LooBasis> loo_bases_of(const LocalObservableSet& set);

/// G^A = {-sx, -sy, -sz, I}/sqrt(2), G^B = {sx, sy, sz, I}/sqrt(2), combined
/// as A_k = G^A_k, B_k = -G^B_k.
LocalObservableSet pauli_loo_pair();
std::pair<LooBasis, LooBasis> pauli_loo_bases();

enum class SuPairing {
    conjugate, // B_k = -conj(l_k)
    negate,    // B_k = -l_k
};

/// A_k = l_k on A paired with the B generators per `pairing`; zero-padded
/// if d_A != d_B.
LocalObservableSet su_pair(std::size_t dA, std::size_t dB, SuPairing pairing = SuPairing::conjugate,
                           const BoundOptions& bound = {});

/// rho = sum_k s_k G^A_k (x) G^B_k with s descending. The bases are
/// completed to full LOO bases: Schmidt operators first, then canonical
/// loo_basis elements orthogonalised against them.
struct OperatorSchmidt {
    RealVector coefficients; // min(dA^2, dB^2) values, descending
    std::size_t rank;
    LooBasis basisA;
    LooBasis basisB;
};

OperatorSchmidt operator_schmidt(const DensityMatrix& rho);

/// loo_pair of the completed operator Schmidt bases of rho.
LocalObservableSet schmidt_loo_pair(const DensityMatrix& rho);

/// Description of how to build an observable set, used by scans and the CLI.
struct ObservableSpec {
    std::string builder = "auto"; // auto, pauli_loo_pair, loo_pair, su_pair, schmidt_loo_pair, explicit
    SuPairing pairing = SuPairing::conjugate;
    BoundOptions bound;
    std::optional<LocalObservableSet> explicit_set;
};

const std::vector<std::string>& observable_builders();

/// True when the built set depends on the state (rebuilt per grid point).
bool is_state_dependent(const ObservableSpec& spec);

/// "auto" picks pauli_loo_pair for 2x2 states and loo_pair otherwise.
LocalObservableSet build_observables(const ObservableSpec& spec, const DensityMatrix& rho);

std::string_view to_string(BoundMode mode);
std::string_view to_string(SuPairing pairing);

} // namespace tlurkit
