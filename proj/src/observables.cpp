#include "tlurkit/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tlurkit/random.hpp"

namespace tlurkit {

namespace {

constexpr std::uint64_t kSanitySeed = 0x5eedb0d5ULL;
constexpr std::size_t kSanitySamples = 128;
constexpr double kSanityTol = 1e-8;

double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
    // Tr(A B) for Hermitian A, B is real.
    return (a.matrix().array() * b.matrix().transpose().array()).sum().real();
}

bool is_zero(const HermitianOperator& op) {
    return max_abs(op.matrix()) == 0.0;
}

std::vector<HermitianOperator> nonzero(std::span<const HermitianOperator> ops) {
    std::vector<HermitianOperator> out;
    for (const auto& op : ops)
        if (!is_zero(op)) out.push_back(op);
    return out;
}

std::size_t require_common_dim(std::span<const HermitianOperator> ops, const char* what) {
    if (ops.empty()) throw Error(ErrorCode::invalid_argument, std::string(what) + ": empty operator list");
    const std::size_t d = ops.front().dim();
    for (const auto& op : ops) {
        if (op.dim() != d) throw Error(ErrorCode::dimension_mismatch, std::string(what) + ": operators differ in dimension");
    }
    return d;
}

std::optional<double> closed_form_bound(std::span<const HermitianOperator> all_ops) {
    const std::size_t d = require_common_dim(all_ops, "uncertainty_bound");
    const auto ops = nonzero(all_ops);
    if (ops.empty()) return 0.0;

    bool commuting = true;
    for (std::size_t i = 0; i < ops.size() && commuting; ++i)
        for (std::size_t j = i + 1; j < ops.size() && commuting; ++j) {
            const ComplexMatrix c = ops[i].matrix() * ops[j].matrix() - ops[j].matrix() * ops[i].matrix();
            const double scale = std::max(1.0, max_abs(ops[i].matrix()) * max_abs(ops[j].matrix()));
            commuting = max_abs(c) <= 1e-12 * scale;
        }
    if (commuting) return 0.0;

    const double c = hs_inner(ops.front(), ops.front());
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = i; j < ops.size(); ++j) {
            const double expected = i == j ? c : 0.0;
            if (std::abs(hs_inner(ops[i], ops[j]) - expected) > 1e-10 * c) return std::nullopt;
        }
    const double dd = static_cast<double>(d);
    if (ops.size() == d * d) return c * (dd - 1.0);
    if (ops.size() + 1 == d * d) {
        for (const auto& op : ops)
            if (std::abs(op.matrix().trace()) > 1e-10 * std::sqrt(c)) return std::nullopt;
        return c * (dd - 1.0);
    }
    return std::nullopt;
}

struct DescentResult {
    double value;
    ComplexVector psi;
    bool converged;
};

double value_and_gradient(std::span<const HermitianOperator> ops, const ComplexVector& psi, ComplexVector* grad) {
    double f = 0.0;
    if (grad) grad->setZero(psi.size());
    for (const auto& op : ops) {
        const ComplexVector v = op.matrix() * psi;
        const double mean = psi.dot(v).real();
        f += v.squaredNorm() - mean * mean;
        if (grad) *grad += op.matrix() * v - 2.0 * mean * v;
    }
    return f;
}

DescentResult descend(std::span<const HermitianOperator> ops, ComplexVector psi, const BoundOptions& opt) {
    ComplexVector grad;
    double f = value_and_gradient(ops, psi, &grad);
    double step = 1.0;
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
        ComplexVector tangent = grad - psi * psi.dot(grad);
        const double gnorm2 = tangent.squaredNorm();
        if (gnorm2 < 1e-28) return {f, psi, true};

        step = std::min(1.0, 2.0 * step);
        ComplexVector trial;
        double f_trial = f;
        bool accepted = false;
        while (step > 1e-20) {
            trial = psi - step * tangent;
            trial.normalize();
            f_trial = value_and_gradient(ops, trial, nullptr);
            if (f_trial <= f - 1e-4 * step * gnorm2) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) return {f, psi, true};

        const double improvement = f - f_trial;
        psi = std::move(trial);
        f = value_and_gradient(ops, psi, &grad);
        if (improvement <= opt.tolerance * std::max(std::abs(f), 1.0)) return {f, psi, true};
    }
    return {f, psi, false};
}

} // namespace

double variance_sum(std::span<const HermitianOperator> ops, const ComplexVector& psi) {
    return value_and_gradient(ops, psi, nullptr);
}

double variance_sum(std::span<const HermitianOperator> ops, const ComplexMatrix& rho) {
    double s = 0.0;
    for (const auto& op : ops) s += variance(op, rho);
    return s;
}

double sampled_min_variance_sum(std::span<const HermitianOperator> ops, std::size_t samples, std::uint64_t seed) {
    const std::size_t d = require_common_dim(ops, "sampled_min_variance_sum");
    Rng rng(seed);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < samples; ++s) best = std::min(best, variance_sum(ops, haar_pure_state(d, rng)));
    return best;
}

UncertaintyBound uncertainty_bound(std::span<const HermitianOperator> ops, const BoundOptions& options) {
    const std::size_t d = require_common_dim(ops, "uncertainty_bound");
    if (options.mode == BoundMode::analytic) {
        const auto value = closed_form_bound(ops);
        if (!value) {
            throw Error(ErrorCode::invalid_argument,
                        "uncertainty_bound: no closed form for this operator set; use numeric mode");
        }
        return {*value, {BoundMode::analytic, 0, 0, 0.0, *value}};
    }

    if (options.restarts == 0) throw Error(ErrorCode::invalid_argument, "uncertainty_bound: restarts must be >= 1");
    std::optional<DescentResult> best;
    for (std::size_t r = 0; r < options.restarts; ++r) {
        Rng rng(derive_seed(options.seed, r));
        DescentResult res = descend(ops, haar_pure_state(d, rng), options);
        if (!best || res.value < best->value) best = std::move(res);
    }
    if (!best->converged) throw BoundConvergenceError(best->value, best->psi);
    const double value = std::max(0.0, best->value - kNumericBoundSafetyMargin);
    return {value, {BoundMode::numeric, options.seed, options.restarts, options.tolerance, best->value}};
}

LooBasis::LooBasis(std::vector<HermitianOperator> ops) : dim_(0), ops_(std::move(ops)) {
    dim_ = require_common_dim(ops_, "LooBasis");
    if (ops_.size() != dim_ * dim_) {
        throw Error(ErrorCode::invalid_argument, "LooBasis: expected " + std::to_string(dim_ * dim_) +
                                                     " operators, got " + std::to_string(ops_.size()));
    }
    for (std::size_t i = 0; i < ops_.size(); ++i)
        for (std::size_t j = i; j < ops_.size(); ++j) {
            const double expected = i == j ? 1.0 : 0.0;
            if (std::abs(hs_inner(ops_[i], ops_[j]) - expected) > 1e-10) {
                throw Error(ErrorCode::invalid_argument, "LooBasis: operators " + std::to_string(i) + " and " +
                                                             std::to_string(j) + " are not orthonormal");
            }
        }
}

LocalObservableSet::LocalObservableSet(std::vector<HermitianOperator> opsA, std::vector<HermitianOperator> opsB,
                                       double boundA, double boundB, BoundProvenance provenance)
    : opsA_(std::move(opsA)), opsB_(std::move(opsB)), boundA_(boundA), boundB_(boundB), provenance_(provenance) {
    if (opsA_.size() != opsB_.size()) {
        throw Error(ErrorCode::dimension_mismatch, "LocalObservableSet: lists have different lengths " +
                                                       std::to_string(opsA_.size()) + " and " +
                                                       std::to_string(opsB_.size()));
    }
    require_common_dim(opsA_, "LocalObservableSet (A)");
    require_common_dim(opsB_, "LocalObservableSet (B)");
    if (!(std::isfinite(boundA_) && boundA_ >= 0.0 && std::isfinite(boundB_) && boundB_ >= 0.0)) {
        throw Error(ErrorCode::invalid_bound, "LocalObservableSet: bounds must be finite and non-negative");
    }
    const double minA = sampled_min_variance_sum(opsA_, kSanitySamples, kSanitySeed);
    if (boundA_ > minA + kSanityTol) {
        throw Error(ErrorCode::invalid_bound, "LocalObservableSet: declared U_A = " + std::to_string(boundA_) +
                                                  " is beaten by a sampled pure state (" + std::to_string(minA) + ")");
    }
    const double minB = sampled_min_variance_sum(opsB_, kSanitySamples, derive_seed(kSanitySeed, 1));
    if (boundB_ > minB + kSanityTol) {
        throw Error(ErrorCode::invalid_bound, "LocalObservableSet: declared U_B = " + std::to_string(boundB_) +
                                                  " is beaten by a sampled pure state (" + std::to_string(minB) + ")");
    }
}

std::vector<HermitianOperator> su_generators(std::size_t d) {
    if (d < 2) throw Error(ErrorCode::invalid_argument, "su_generators: d must be >= 2");
    const auto n = static_cast<Eigen::Index>(d);
    std::vector<HermitianOperator> out;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = j + 1; k < n; ++k) {
            ComplexMatrix sym = ComplexMatrix::Zero(n, n);
            sym(j, k) = sym(k, j) = 1.0;
            out.emplace_back(std::move(sym));
            ComplexMatrix anti = ComplexMatrix::Zero(n, n);
            anti(j, k) = Complex(0.0, -1.0);
            anti(k, j) = Complex(0.0, 1.0);
            out.emplace_back(std::move(anti));
        }
    for (Eigen::Index l = 1; l < n; ++l) {
        ComplexMatrix diag = ComplexMatrix::Zero(n, n);
        for (Eigen::Index i = 0; i < l; ++i) diag(i, i) = 1.0;
        diag(l, l) = -static_cast<double>(l);
        diag *= std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
        out.emplace_back(std::move(diag));
    }
    return out;
}

LooBasis loo_basis(std::size_t d) {
    std::vector<HermitianOperator> ops;
    for (const auto& g : su_generators(d)) ops.push_back((1.0 / std::sqrt(2.0)) * g);
    ops.push_back((1.0 / std::sqrt(static_cast<double>(d))) * HermitianOperator::identity(d));
    return LooBasis(std::move(ops));
}

LocalObservableSet loo_pair(const LooBasis& a, const LooBasis& b) {
    const std::size_t n = std::max(a.ops().size(), b.ops().size());
    std::vector<HermitianOperator> opsA = a.ops();
    std::vector<HermitianOperator> opsB;
    for (const auto& g : b.ops()) opsB.push_back(-g);
    while (opsA.size() < n) opsA.push_back(HermitianOperator::zero(a.dim()));
    while (opsB.size() < n) opsB.push_back(HermitianOperator::zero(b.dim()));
    return LocalObservableSet(std::move(opsA), std::move(opsB), static_cast<double>(a.dim()) - 1.0,
                              static_cast<double>(b.dim()) - 1.0);
}

std::pair<LooBasis, LooBasis> loo_bases_of(const LocalObservableSet& set) {
    std::vector<HermitianOperator> ga = nonzero(set.opsA());
    std::vector<HermitianOperator> gb;
    for (const auto& op : nonzero(set.opsB())) gb.push_back(-op);
    try {
        return {LooBasis(std::move(ga)), LooBasis(std::move(gb))};
    } catch (const Error& e) {
        throw Error(ErrorCode::invalid_argument,
                    std::string("observable set is not a complete LOO pair: ") + e.what());
    }
}

std::pair<LooBasis, LooBasis> pauli_loo_bases() {
    const auto pauli = su_generators(2); // sx, sy, sz
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<HermitianOperator> ga;
    std::vector<HermitianOperator> gb;
    for (const auto& p : pauli) {
        ga.push_back(-s * p);
        gb.push_back(s * p);
    }
    ga.push_back(s * HermitianOperator::identity(2));
    gb.push_back(s * HermitianOperator::identity(2));
    return {LooBasis(std::move(ga)), LooBasis(std::move(gb))};
}

LocalObservableSet pauli_loo_pair() {
    const auto [ga, gb] = pauli_loo_bases();
    return loo_pair(ga, gb);
}

LocalObservableSet su_pair(std::size_t dA, std::size_t dB, SuPairing pairing, const BoundOptions& bound) {
    std::vector<HermitianOperator> opsA = su_generators(dA);
    std::vector<HermitianOperator> opsB;
    for (const auto& g : su_generators(dB)) {
        opsB.push_back(pairing == SuPairing::conjugate ? HermitianOperator(-g.matrix().conjugate()) : -g);
    }
    const std::size_t n = std::max(opsA.size(), opsB.size());
    while (opsA.size() < n) opsA.push_back(HermitianOperator::zero(dA));
    while (opsB.size() < n) opsB.push_back(HermitianOperator::zero(dB));

    BoundOptions optB = bound;
    optB.seed = derive_seed(bound.seed, 1);
    const UncertaintyBound uA = uncertainty_bound(opsA, bound);
    const UncertaintyBound uB = uncertainty_bound(opsB, optB);
    return LocalObservableSet(std::move(opsA), std::move(opsB), uA.value, uB.value, uA.provenance);
}

namespace {

// Columns are row-major vectorisations of the canonical LOO operators.
ComplexMatrix basis_columns(const LooBasis& basis) {
    const auto d = static_cast<Eigen::Index>(basis.dim());
    ComplexMatrix t(d * d, d * d);
    for (Eigen::Index mu = 0; mu < d * d; ++mu) {
        const ComplexMatrix& g = basis.ops()[static_cast<std::size_t>(mu)].matrix();
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) t(i * d + j, mu) = g(i, j);
    }
    return t;
}

// Leading `rank` columns kept, remainder filled by Gram-Schmidt over the unit vectors.
Eigen::MatrixXd complete_orthonormal(const Eigen::MatrixXd& leading, std::size_t rank) {
    const Eigen::Index n = leading.rows();
    Eigen::MatrixXd q(n, n);
    Eigen::Index filled = 0;
    for (; filled < static_cast<Eigen::Index>(rank); ++filled) q.col(filled) = leading.col(filled);
    for (Eigen::Index mu = 0; mu < n && filled < n; ++mu) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(n, mu);
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index k = 0; k < filled; ++k) v -= q.col(k).dot(v) * q.col(k);
        const double norm = v.norm();
        if (norm > 1e-6) q.col(filled++) = v / norm;
    }
    if (filled != n) throw Error(ErrorCode::numerical_failure, "operator_schmidt: basis completion failed");
    return q;
}

LooBasis basis_from_coordinates(const LooBasis& canonical, const Eigen::MatrixXd& coords, std::size_t rank) {
    std::vector<HermitianOperator> ops;
    const auto& g = canonical.ops();
    for (Eigen::Index k = 0; k < coords.cols(); ++k) {
        ComplexMatrix op = ComplexMatrix::Zero(static_cast<Eigen::Index>(canonical.dim()),
                                               static_cast<Eigen::Index>(canonical.dim()));
        for (Eigen::Index mu = 0; mu < coords.rows(); ++mu) op += coords(mu, k) * g[static_cast<std::size_t>(mu)].matrix();
        if (static_cast<std::size_t>(k) < rank) {
            const double residual = max_abs(op - op.adjoint());
            if (residual > 1e-8) {
                throw Error(ErrorCode::degenerate_decomposition,
                            "operator_schmidt: Schmidt operator " + std::to_string(k) +
                                " has Hermitian residual " + std::to_string(residual));
            }
        }
        op = 0.5 * (op + op.adjoint()).eval();
        op /= op.norm();
        ops.emplace_back(std::move(op));
    }
    return LooBasis(std::move(ops));
}

} // namespace

OperatorSchmidt operator_schmidt(const DensityMatrix& rho) {
    const LooBasis ga = loo_basis(std::max<std::size_t>(rho.dimA(), 2));
    const LooBasis gb = loo_basis(std::max<std::size_t>(rho.dimB(), 2));
    if (rho.dimA() < 2 || rho.dimB() < 2) {
        throw Error(ErrorCode::dimension_mismatch, "operator_schmidt: both local dimensions must be >= 2");
    }
    // Coefficients of rho in the product Hermitian basis: C = T_A^dagger R(rho) conj(T_B).
    const ComplexMatrix c_complex = basis_columns(ga).adjoint() * realign(rho) * basis_columns(gb).conjugate();
    const double imag = c_complex.imag().cwiseAbs().maxCoeff();
    if (imag > 1e-8) {
        throw Error(ErrorCode::degenerate_decomposition,
                    "operator_schmidt: non-real coefficient matrix (residual " + std::to_string(imag) + ")");
    }
    const Eigen::MatrixXd c = c_complex.real();
    Eigen::JacobiSVD<Eigen::MatrixXd> solver(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::numerical_failure, "operator_schmidt: SVD did not converge");
    }
    const RealVector s = solver.singularValues();
    std::size_t rank = 0;
    while (rank < static_cast<std::size_t>(s.size()) && s(static_cast<Eigen::Index>(rank)) > 1e-12) ++rank;

    const Eigen::MatrixXd qa = complete_orthonormal(solver.matrixU(), rank);
    const Eigen::MatrixXd qb = complete_orthonormal(solver.matrixV(), rank);
    return {s, rank, basis_from_coordinates(ga, qa, rank), basis_from_coordinates(gb, qb, rank)};
}

LocalObservableSet schmidt_loo_pair(const DensityMatrix& rho) {
    const OperatorSchmidt decomposition = operator_schmidt(rho);
    return loo_pair(decomposition.basisA, decomposition.basisB);
}

const std::vector<std::string>& observable_builders() {
    static const std::vector<std::string> names = {"auto", "pauli_loo_pair", "loo_pair", "su_pair", "schmidt_loo_pair",
                                                   "explicit"};
    return names;
}

bool is_state_dependent(const ObservableSpec& spec) {
    return spec.builder == "schmidt_loo_pair";
}

LocalObservableSet build_observables(const ObservableSpec& spec, const DensityMatrix& rho) {
    std::string builder = spec.builder;
    if (builder == "auto") builder = rho.dimA() == 2 && rho.dimB() == 2 ? "pauli_loo_pair" : "loo_pair";

    if (builder == "explicit") {
        if (!spec.explicit_set) throw Error(ErrorCode::invalid_argument, "explicit observable spec without operators");
        return *spec.explicit_set;
    }
    if (builder == "pauli_loo_pair") {
        if (rho.dimA() != 2 || rho.dimB() != 2) {
            throw Error(ErrorCode::dimension_mismatch, "pauli_loo_pair requires a 2x2 state");
        }
        return pauli_loo_pair();
    }
    if (builder == "loo_pair") return loo_pair(loo_basis(rho.dimA()), loo_basis(rho.dimB()));
    if (builder == "su_pair") return su_pair(rho.dimA(), rho.dimB(), spec.pairing, spec.bound);
    if (builder == "schmidt_loo_pair") return schmidt_loo_pair(rho);
    throw Error(ErrorCode::invalid_argument, "unknown observable builder '" + spec.builder + "'");
}

std::string_view to_string(BoundMode mode) {
    return mode == BoundMode::analytic ? "analytic" : "numeric";
}

std::string_view to_string(SuPairing pairing) {
    return pairing == SuPairing::conjugate ? "conjugate" : "negate";
}

} // namespace tlurkit
