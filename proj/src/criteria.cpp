#include "tlurkit/criteria.hpp"

#include <algorithm>
#include <cmath>

#include "tlurkit/error.hpp"

namespace tlurkit {

namespace {

void finish(CriterionReport& r) {
    r.detected = r.margin > kDetectionTol;
}

void require_dims(const DensityMatrix& rho, const LocalObservableSet& obs) {
    if (obs.dimA() != rho.dimA() || obs.dimB() != rho.dimB()) {
        throw Error(ErrorCode::dimension_mismatch,
                    "observables act on " + std::to_string(obs.dimA()) + "x" + std::to_string(obs.dimB()) +
                        " but the state is " + std::to_string(rho.dimA()) + "x" + std::to_string(rho.dimB()));
    }
}

// Local excess sum Var - U; round-off negatives are clipped, real negatives mean U is not a bound.
double excess(double variance_sum, double bound, const char* side) {
    const double e = variance_sum - bound;
    if (e < -kDetectionTol) {
        throw Error(ErrorCode::invalid_bound, std::string("local variance sum on ") + side + " (" +
                                                  std::to_string(variance_sum) + ") is below the declared bound (" +
                                                  std::to_string(bound) + ")");
    }
    return std::max(0.0, e);
}

struct LurStats {
    double joint = 0.0; // sum_k Var(A_k (x) 1 + 1 (x) B_k)
    double varA = 0.0;
    double varB = 0.0;
    double cov = 0.0; // sum_k <A_k (x) B_k> - <A_k><B_k>
    double UA = 0.0;
    double UB = 0.0;
    double excessA = 0.0;
    double excessB = 0.0;

    double root_product() const { return std::sqrt(excessA * excessB); }
    double M() const { return std::sqrt(excessA) - std::sqrt(excessB); }

    void fill(std::map<std::string, double>& c) const {
        c["sum_var_joint"] = joint;
        c["sum_var_A"] = varA;
        c["sum_var_B"] = varB;
        c["covariance_sum"] = cov;
        c["U_A"] = UA;
        c["U_B"] = UB;
        c["excess_A"] = excessA;
        c["excess_B"] = excessB;
    }
};

LurStats lur_stats(const DensityMatrix& rho, const LocalObservableSet& obs) {
    require_dims(rho, obs);
    const ComplexMatrix rhoA = partial_trace(rho, Subsystem::B);
    const ComplexMatrix rhoB = partial_trace(rho, Subsystem::A);
    const ComplexMatrix idA = ComplexMatrix::Identity(static_cast<Eigen::Index>(rho.dimA()), static_cast<Eigen::Index>(rho.dimA()));
    const ComplexMatrix idB = ComplexMatrix::Identity(static_cast<Eigen::Index>(rho.dimB()), static_cast<Eigen::Index>(rho.dimB()));

    LurStats s;
    s.UA = obs.boundA();
    s.UB = obs.boundB();
    for (std::size_t k = 0; k < obs.size(); ++k) {
        const HermitianOperator& a = obs.opsA()[k];
        const HermitianOperator& b = obs.opsB()[k];
        const HermitianOperator joint(tensor(a.matrix(), idB) + tensor(idA, b.matrix()));
        s.joint += variance(joint, rho);
        s.varA += variance(a, rhoA);
        s.varB += variance(b, rhoB);
        const double ab = (rho.matrix().array() * tensor(a.matrix(), b.matrix()).transpose().array()).sum().real();
        s.cov += ab - expectation(a, rhoA) * expectation(b, rhoB);
    }
    s.excessA = excess(s.varA, s.UA, "A");
    s.excessB = excess(s.varB, s.UB, "B");
    return s;
}

struct LooStats {
    double correlation = 0.0; // sum_k <G^A_k (x) G^B_k>
    double squared_means = 0.0; // sum_k <G^A_k (x) 1 - 1 (x) G^B_k>^2
    double purityA = 0.0;
    double purityB = 0.0;
};

LooStats loo_stats(const DensityMatrix& rho, const LooBasis& looA, const LooBasis& looB) {
    if (looA.dim() != rho.dimA() || looB.dim() != rho.dimB()) {
        throw Error(ErrorCode::dimension_mismatch, "LOO bases do not match the state's local dimensions");
    }
    const ComplexMatrix rhoA = partial_trace(rho, Subsystem::B);
    const ComplexMatrix rhoB = partial_trace(rho, Subsystem::A);
    LooStats s;
    const std::size_t n = std::max(looA.ops().size(), looB.ops().size());
    for (std::size_t k = 0; k < n; ++k) {
        const bool hasA = k < looA.ops().size();
        const bool hasB = k < looB.ops().size();
        const double meanA = hasA ? expectation(looA.ops()[k], rhoA) : 0.0;
        const double meanB = hasB ? expectation(looB.ops()[k], rhoB) : 0.0;
        if (hasA && hasB) {
            const ComplexMatrix ab = tensor(looA.ops()[k].matrix(), looB.ops()[k].matrix());
            s.correlation += (rho.matrix().array() * ab.transpose().array()).sum().real();
        }
        s.squared_means += (meanA - meanB) * (meanA - meanB);
    }
    s.purityA = purity(rhoA);
    s.purityB = purity(rhoB);
    return s;
}

CriterionReport witness_report(const char* name, const DensityMatrix& rho, const LooBasis& looA, const LooBasis& looB,
                               bool with_purity) {
    const LooStats s = loo_stats(rho, looA, looB);
    const double mixA = std::sqrt(std::max(0.0, 1.0 - s.purityA));
    const double mixB = std::sqrt(std::max(0.0, 1.0 - s.purityB));
    const double purity_term = 0.5 * (mixA - mixB) * (mixA - mixB);

    CriterionReport r;
    r.criterion = name;
    r.lhs = 1.0 - s.correlation - 0.5 * s.squared_means - (with_purity ? purity_term : 0.0);
    r.rhs = 0.0;
    r.margin = r.rhs - r.lhs;
    r.components = {{"correlation_sum", s.correlation},
                    {"squared_mean_sum", s.squared_means},
                    {"purity_A", s.purityA},
                    {"purity_B", s.purityB},
                    {"purity_term", purity_term}};
    finish(r);
    return r;
}

} // namespace

CriterionReport eval_lur(const DensityMatrix& rho, const LocalObservableSet& obs) {
    const LurStats s = lur_stats(rho, obs);
    CriterionReport r;
    r.criterion = "lur";
    r.lhs = s.joint;
    r.rhs = s.UA + s.UB;
    r.margin = r.rhs - r.lhs;
    s.fill(r.components);
    finish(r);
    return r;
}

CriterionReport eval_tlur(const DensityMatrix& rho, const LocalObservableSet& obs) {
    const LurStats s = lur_stats(rho, obs);
    const double m = s.M();
    CriterionReport r;
    r.criterion = "tlur";
    r.lhs = s.joint;
    r.rhs = s.UA + s.UB + m * m;
    r.margin = r.rhs - r.lhs;
    s.fill(r.components);
    r.components["M"] = m;
    finish(r);
    return r;
}

CriterionReport eval_tlur_dual(const DensityMatrix& rho, const LocalObservableSet& obs) {
    const LurStats s = lur_stats(rho, obs);
    const double p = std::sqrt(s.excessA) + std::sqrt(s.excessB);
    CriterionReport r;
    r.criterion = "tlur_dual";
    r.lhs = s.joint;
    r.rhs = s.UA + s.UB + p * p;
    r.margin = r.lhs - r.rhs;
    s.fill(r.components);
    r.components["P"] = p;
    finish(r);
    return r;
}

CriterionReport eval_lemma1(const DensityMatrix& rho, const LocalObservableSet& obs) {
    const LurStats s = lur_stats(rho, obs);
    const double root = s.root_product();
    CriterionReport r;
    r.criterion = "lemma1";
    r.lhs = root;
    r.rhs = std::abs(s.cov);
    r.margin = r.rhs - r.lhs;
    s.fill(r.components);
    r.components["value_plus"] = root + s.cov;
    r.components["value_minus"] = root - s.cov;
    // Squared form: excess_A * excess_B >= cov^2.
    r.components["squared_gap"] = s.excessA * s.excessB - s.cov * s.cov;
    finish(r);
    return r;
}

CriterionReport eval_corollary1(const DensityMatrix& rho, const LooBasis& looA, const LooBasis& looB) {
    return witness_report("corollary1", rho, looA, looB, true);
}

CriterionReport eval_nonlinear_witness(const DensityMatrix& rho, const LooBasis& looA, const LooBasis& looB) {
    return witness_report("nonlinear_witness", rho, looA, looB, false);
}

CriterionReport eval_ppt(const DensityMatrix& rho) {
    const double min_eig = eig_hermitian(partial_transpose(rho, Subsystem::B)).values(0);
    CriterionReport r;
    r.criterion = "ppt";
    r.lhs = min_eig;
    r.rhs = 0.0;
    r.margin = r.rhs - r.lhs;
    r.components["min_eigenvalue"] = min_eig;
    finish(r);
    return r;
}

CriterionReport eval_ccnr(const DensityMatrix& rho) {
    const double tn = trace_norm(realign(rho));
    CriterionReport r;
    r.criterion = "ccnr";
    r.lhs = tn;
    r.rhs = 1.0;
    r.margin = r.lhs - r.rhs;
    r.components["realignment_trace_norm"] = tn;
    finish(r);
    return r;
}

EntanglementMeasures entanglement_measures(const DensityMatrix& rho, const LocalObservableSet& obs) {
    const LurStats s = lur_stats(rho, obs);
    const double total = s.UA + s.UB;
    if (!(total > 0.0)) throw Error(ErrorCode::invalid_bound, "entanglement_measures: U_A + U_B must be positive");
    const double m = s.M();
    return {1.0 - s.joint / total, 1.0 - (s.joint - m * m) / total};
}

const std::vector<std::string>& criterion_names() {
    static const std::vector<std::string> names = {"lur",        "tlur",           "tlur_dual", "lemma1",
                                                   "corollary1", "nonlinear_witness", "ppt",     "ccnr"};
    return names;
}

bool uses_observables(const std::string& criterion) {
    return criterion != "ppt" && criterion != "ccnr";
}

CriterionReport evaluate(const std::string& criterion, const DensityMatrix& rho, const LocalObservableSet& obs) {
    if (criterion == "lur") return eval_lur(rho, obs);
    if (criterion == "tlur") return eval_tlur(rho, obs);
    if (criterion == "tlur_dual") return eval_tlur_dual(rho, obs);
    if (criterion == "lemma1") return eval_lemma1(rho, obs);
    if (criterion == "corollary1" || criterion == "nonlinear_witness") {
        const auto [ga, gb] = loo_bases_of(obs);
        return criterion == "corollary1" ? eval_corollary1(rho, ga, gb) : eval_nonlinear_witness(rho, ga, gb);
    }
    if (criterion == "ppt") return eval_ppt(rho);
    if (criterion == "ccnr") return eval_ccnr(rho);
    throw Error(ErrorCode::invalid_argument, "unknown criterion '" + criterion + "'");
}

} // namespace tlurkit
