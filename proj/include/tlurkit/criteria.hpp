#pragma once

#include <map>
#include <string>
#include <vector>

#include "tlurkit/linops.hpp"
#include "tlurkit/observables.hpp"

namespace tlurkit {

/// Deadband on margins: a criterion detects entanglement iff margin > this.
inline constexpr double kDetectionTol = 1e-9;

/// Result of one separability test.
///
/// `margin` is oriented so that margin > 0 means the separable-state
/// inequality is violated, whatever the inequality's direction. `components`
/// holds the named intermediate scalars lhs and rhs were assembled from.
struct CriterionReport {
    std::string criterion;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool detected = false;
    std::map<std::string, double> components;
};

/// sum_k Var(A_k (x) 1 + 1 (x) B_k) >= U_A + U_B.
CriterionReport eval_lur(const DensityMatrix& rho, const LocalObservableSet& obs);

/// LUR with U_A + U_B + M^2 on the right, where
/// M = sqrt(sum Var_A(A_k) - U_A) - sqrt(sum Var_B(B_k) - U_B).
CriterionReport eval_tlur(const DensityMatrix& rho, const LocalObservableSet& obs);

/// Upper companion: lhs <= U_A + U_B + (sqrt(excess_A) + sqrt(excess_B))^2.
CriterionReport eval_tlur_dual(const DensityMatrix& rho, const LocalObservableSet& obs);

/// sqrt(excess_A * excess_B) +/- sum_k Cov(A_k, B_k) >= 0 for both signs.
/// lhs = sqrt term, rhs = |covariance sum|.
CriterionReport eval_lemma1(const DensityMatrix& rho, const LocalObservableSet& obs);

/// 1 - sum <G^A (x) G^B> - 1/2 sum <G^A (x) 1 - 1 (x) G^B>^2
///   - 1/2 (sqrt(1 - Tr rho_A^2) - sqrt(1 - Tr rho_B^2))^2 >= 0.
/// lhs = value, rhs = 0.
CriterionReport eval_corollary1(const DensityMatrix& rho, const LooBasis& looA, const LooBasis& looB);

/// The same expression without the purity term.
CriterionReport eval_nonlinear_witness(const DensityMatrix& rho, const LooBasis& looA, const LooBasis& looB);

/// lhs = smallest eigenvalue of the partial transpose, rhs = 0.
CriterionReport eval_ppt(const DensityMatrix& rho);

/// lhs = trace norm of the realigned matrix, rhs = 1.
CriterionReport eval_ccnr(const DensityMatrix& rho);

struct EntanglementMeasures {
    double c_lur;
    double c_tlur;
};

/// C_LUR = 1 - lhs / (U_A + U_B), C_TLUR = 1 - (lhs - M^2) / (U_A + U_B).
EntanglementMeasures entanglement_measures(const DensityMatrix& rho, const LocalObservableSet& obs);

/// Criterion names accepted by evaluate(): lur, tlur, tlur_dual, lemma1,
/// corollary1, nonlinear_witness, ppt, ccnr.
const std::vector<std::string>& criterion_names();

/// Dispatch by name. corollary1 and nonlinear_witness read their LOO
/// bases from `obs` via loo_bases_of.
CriterionReport evaluate(const std::string& criterion, const DensityMatrix& rho, const LocalObservableSet& obs);

/// Whether `criterion` uses local observables at all.
bool uses_observables(const std::string& criterion);

} // namespace tlurkit
