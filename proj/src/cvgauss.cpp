#include "tlurkit/cvgauss.hpp"

#include <cmath>
#include <numbers>

#include "tlurkit/error.hpp"
#include "tlurkit/random.hpp"

namespace tlurkit {

namespace {

constexpr double kPhysicalTol = 1e-9;

Matrix4 symplectic_form() {
    Matrix4 omega = Matrix4::Zero();
    omega(0, 1) = 1.0;
    omega(1, 0) = -1.0;
    omega(2, 3) = 1.0;
    omega(3, 2) = -1.0;
    return omega;
}

void require_nonzero(double a) {
    if (!(std::isfinite(a) && a != 0.0)) {
        throw Error(ErrorCode::invalid_argument, "parameter 'a' must be a finite nonzero real");
    }
}

Vector4 u_coeffs(double a) {
    return {std::abs(a), 0.0, 1.0 / a, 0.0};
}

Vector4 v_coeffs(double a) {
    return {0.0, std::abs(a), 0.0, -1.0 / a};
}

} // namespace

GaussianState::GaussianState(Vector4 mean, Matrix4 cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
    if (!mean_.allFinite() || !cov_.allFinite()) {
        throw Error(ErrorCode::unphysical_state, "GaussianState: non-finite entries");
    }
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > kPhysicalTol) {
        throw Error(ErrorCode::unphysical_state, "GaussianState: covariance matrix is not symmetric");
    }
    cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
    const Eigen::Matrix4cd test = cov_.cast<Complex>() + Complex(0.0, 0.5) * symplectic_form().cast<Complex>();
    const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd>(test).eigenvalues()(0);
    if (min_eig < -kPhysicalTol) {
        throw Error(ErrorCode::unphysical_state,
                    "GaussianState: cov + (i/2) Omega has negative eigenvalue " + std::to_string(min_eig));
    }
    for (int mode = 1; mode <= 2; ++mode) {
        if (mode_uncertainty(mode) < 1.0 - kPhysicalTol) {
            throw Error(ErrorCode::unphysical_state,
                        "GaussianState: mode " + std::to_string(mode) + " violates Var(x) + Var(p) >= 1");
        }
    }
}

double GaussianState::mode_uncertainty(int mode) const {
    if (mode != 1 && mode != 2) throw Error(ErrorCode::invalid_argument, "mode must be 1 or 2");
    const int i = 2 * (mode - 1);
    return cov_(i, i) + cov_(i + 1, i + 1);
}

GaussianState vacuum() {
    return GaussianState(Vector4::Zero(), 0.5 * Matrix4::Identity());
}

GaussianState tmsv(double r) {
    if (!std::isfinite(r)) throw Error(ErrorCode::invalid_argument, "tmsv: squeezing must be finite");
    const double c = 0.5 * std::cosh(2.0 * r);
    const double s = 0.5 * std::sinh(2.0 * r);
    Matrix4 cov = c * Matrix4::Identity();
    cov(0, 2) = cov(2, 0) = -s;
    cov(1, 3) = cov(3, 1) = s;
    return GaussianState(Vector4::Zero(), cov);
}

GaussianState thermal(double n1, double n2) {
    if (!(n1 >= 0.0 && n2 >= 0.0 && std::isfinite(n1) && std::isfinite(n2))) {
        throw Error(ErrorCode::parameter_out_of_range, "thermal: occupations must be finite and >= 0");
    }
    Vector4 diag(n1 + 0.5, n1 + 0.5, n2 + 0.5, n2 + 0.5);
    return GaussianState(Vector4::Zero(), diag.asDiagonal());
}

GaussianState displaced(const GaussianState& state, const Vector4& shift) {
    return GaussianState(state.mean() + shift, state.cov());
}

GaussianState random_separable_gaussian(std::uint64_t seed) {
    Rng rng(seed);
    Matrix4 cov = Matrix4::Zero();
    for (int mode = 0; mode < 2; ++mode) {
        const double n = 2.0 * rng.uniform();
        const double squeeze = 1.5 * (rng.uniform() - 0.5);
        const double theta = std::numbers::pi * rng.uniform();
        Eigen::Matrix2d rot;
        rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
        const Eigen::Matrix2d d = Eigen::Vector2d(std::exp(-2.0 * squeeze), std::exp(2.0 * squeeze)).asDiagonal();
        cov.block<2, 2>(2 * mode, 2 * mode) = (n + 0.5) * rot * d * rot.transpose();
    }
    // Classical mixing over displacements adds an arbitrary PSD matrix.
    Matrix4 l;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) l(i, j) = 0.5 * rng.normal();
    cov += l * l.transpose();
    Vector4 mean;
    for (int i = 0; i < 4; ++i) mean(i) = rng.normal();
    return GaussianState(mean, cov);
}

double combo_variance(const GaussianState& state, const Vector4& coeffs) {
    return coeffs.dot(state.cov() * coeffs);
}

CriterionReport eval_duan(const GaussianState& state, double a) {
    require_nonzero(a);
    const double var_u = combo_variance(state, u_coeffs(a));
    const double var_v = combo_variance(state, v_coeffs(a));
    CriterionReport r;
    r.criterion = "duan";
    r.lhs = var_u + var_v;
    r.rhs = a * a + 1.0 / (a * a);
    r.margin = r.rhs - r.lhs;
    r.detected = r.margin > kDetectionTol;
    r.components = {{"var_u", var_u}, {"var_v", var_v}, {"a", a}};
    return r;
}

CriterionReport eval_corollary2(const GaussianState& state, double a) {
    require_nonzero(a);
    const double abs_a = std::abs(a);
    const double sum1 = state.mode_uncertainty(1);
    const double sum2 = state.mode_uncertainty(2);
    const double m = abs_a * std::sqrt(std::max(0.0, sum1 - 1.0)) - std::sqrt(std::max(0.0, sum2 - 1.0)) / abs_a;
    CriterionReport r = eval_duan(state, a);
    r.criterion = "corollary2";
    r.rhs += m * m;
    r.margin = r.rhs - r.lhs;
    r.detected = r.margin > kDetectionTol;
    r.components["mode1_uncertainty"] = sum1;
    r.components["mode2_uncertainty"] = sum2;
    r.components["M"] = m;
    return r;
}

} // namespace tlurkit
