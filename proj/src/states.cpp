#include "tlurkit/states.hpp"

#include <cmath>
#include <limits>

#include "tlurkit/error.hpp"
#include "tlurkit/random.hpp"

namespace tlurkit {

namespace {

ComplexVector basis_ket(std::size_t dimA, std::size_t dimB, std::size_t i, std::size_t j) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dimA * dimB));
    v(static_cast<Eigen::Index>(i * dimB + j)) = 1.0;
    return v;
}

ComplexMatrix projector(const ComplexVector& v) {
    return v * v.adjoint();
}

void require_range(std::string_view name, double value, double lo, double hi, bool open_lo, bool open_hi) {
    const bool ok = std::isfinite(value) && (open_lo ? value > lo : value >= lo) && (open_hi ? value < hi : value <= hi);
    if (!ok) {
        throw Error(ErrorCode::parameter_out_of_range,
                    "parameter '" + std::string(name) + "' = " + std::to_string(value) + " outside " +
                        (open_lo ? "(" : "[") + std::to_string(lo) + ", " + std::to_string(hi) +
                        (open_hi ? ")" : "]"));
    }
}

} // namespace

DensityMatrix horodecki33(double a) {
    require_range("a", a, 0.0, 1.0, true, true);
    const double norm = 1.0 + 8.0 * a;
    const double w_product = a / norm;
    const double w_max = 3.0 * a / norm;
    const double w_pi = 1.0 / norm;
    // 5 product terms, |E_max>, |Pi>
    if (std::abs(5.0 * w_product + w_max + w_pi - 1.0) > 1e-15) {
        throw Error(ErrorCode::numerical_failure, "horodecki33: weights do not sum to one");
    }

    constexpr std::size_t d = 3;
    ComplexMatrix m = ComplexMatrix::Zero(9, 9);
    // |-1;0>, |-1;+1>, |0;-1>, |0;+1>, |+1;0>
    const std::size_t product_terms[5][2] = {{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 1}};
    for (const auto& t : product_terms) m += w_product * projector(basis_ket(d, d, t[0], t[1]));

    const ComplexVector e_max = (basis_ket(d, d, 0, 0) + basis_ket(d, d, 1, 1) + basis_ket(d, d, 2, 2)) / std::sqrt(3.0);
    m += w_max * projector(e_max);

    const ComplexVector pi =
        std::sqrt((1.0 + a) / 2.0) * basis_ket(d, d, 2, 0) + std::sqrt((1.0 - a) / 2.0) * basis_ket(d, d, 2, 2);
    m += w_pi * projector(pi);
    return DensityMatrix(d, d, std::move(m));
}

DensityMatrix white_noise_mix(const DensityMatrix& rho, double p) {
    require_range("p", p, 0.0, 1.0, false, false);
    const auto n = static_cast<Eigen::Index>(rho.dim());
    ComplexMatrix m = p * rho.matrix() + ((1.0 - p) / static_cast<double>(n)) * ComplexMatrix::Identity(n, n);
    return DensityMatrix(rho.dimA(), rho.dimB(), std::move(m));
}

DensityMatrix singlet() {
    const ComplexVector psi = (basis_ket(2, 2, 0, 1) - basis_ket(2, 2, 1, 0)) / std::sqrt(2.0);
    return pure_state(2, 2, psi);
}

DensityMatrix noisy_singlet(double p) {
    require_range("p", p, 0.0, 1.0, false, false);
    const ComplexVector psi = (basis_ket(2, 2, 0, 1) - basis_ket(2, 2, 1, 0)) / std::sqrt(2.0);
    ComplexMatrix sep = ComplexMatrix::Zero(4, 4);
    sep(0, 0) = 2.0 / 3.0;
    sep(1, 1) = 1.0 / 3.0;
    ComplexMatrix m = p * projector(psi) + (1.0 - p) * sep;
    return DensityMatrix(2, 2, std::move(m));
}

DensityMatrix maximally_mixed(std::size_t dimA, std::size_t dimB) {
    const auto n = static_cast<Eigen::Index>(dimA * dimB);
    return DensityMatrix(dimA, dimB, ComplexMatrix::Identity(n, n) / static_cast<double>(n));
}

DensityMatrix product_state(const ComplexMatrix& rhoA, const ComplexMatrix& rhoB) {
    return DensityMatrix(static_cast<std::size_t>(rhoA.rows()), static_cast<std::size_t>(rhoB.rows()),
                         tensor(rhoA, rhoB));
}

DensityMatrix pure_state(std::size_t dimA, std::size_t dimB, const ComplexVector& psi) {
    if (static_cast<std::size_t>(psi.size()) != dimA * dimB) {
        throw Error(ErrorCode::dimension_mismatch, "pure_state: vector length does not match dims");
    }
    const double n = psi.norm();
    if (!(n > 0.0)) throw Error(ErrorCode::invalid_argument, "pure_state: zero vector");
    return DensityMatrix(dimA, dimB, projector(psi / n));
}

DensityMatrix random_separable(std::size_t dimA, std::size_t dimB, std::size_t n_terms, std::uint64_t seed) {
    if (n_terms == 0) throw Error(ErrorCode::invalid_argument, "random_separable: n_terms must be >= 1");
    if (dimA == 0 || dimB == 0) throw Error(ErrorCode::dimension_mismatch, "random_separable: zero dimension");
    Rng rng(seed);
    std::vector<double> weights(n_terms);
    double total = 0.0;
    for (auto& w : weights) {
        w = rng.exponential();
        total += w;
    }
    const auto n = static_cast<Eigen::Index>(dimA * dimB);
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (std::size_t t = 0; t < n_terms; ++t) {
        const ComplexVector a = haar_pure_state(dimA, rng);
        const ComplexVector b = haar_pure_state(dimB, rng);
        m += (weights[t] / total) * tensor(projector(a), projector(b));
    }
    return DensityMatrix(dimA, dimB, std::move(m));
}

DensityMatrix random_pure(std::size_t dimA, std::size_t dimB, std::uint64_t seed) {
    Rng rng(seed);
    return pure_state(dimA, dimB, haar_pure_state(dimA * dimB, rng));
}

DensityMatrix random_mixed(std::size_t dimA, std::size_t dimB, std::size_t rank, std::uint64_t seed) {
    if (rank == 0) throw Error(ErrorCode::invalid_argument, "random_mixed: rank must be >= 1");
    Rng rng(seed);
    const auto n = static_cast<Eigen::Index>(dimA * dimB);
    ComplexMatrix g(n, static_cast<Eigen::Index>(rank));
    for (Eigen::Index j = 0; j < g.cols(); ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            const double re = rng.normal();
            const double im = rng.normal();
            g(i, j) = Complex(re, im);
        }
    ComplexMatrix m = g * g.adjoint();
    m /= m.trace().real();
    return DensityMatrix(dimA, dimB, std::move(m));
}

const std::vector<FamilyInfo>& state_families() {
    static const std::vector<FamilyInfo> families = {
        {"horodecki33",
         "Horodecki 3x3 bound entangled state mixed with white noise: p*rho(a) + (1-p)*I/9",
         {{"a", 0.0, true, "(0,1)"}, {"p", 1.0, false, "[0,1]"}}},
        {"noisy_singlet", "p*|psi_s><psi_s| + (1-p)*(2/3|00><00| + 1/3|01><01|)", {{"p", 0.0, true, "[0,1]"}}},
        {"singlet", "(|01> - |10>)/sqrt(2)", {}},
        {"maximally_mixed", "I/(dA*dB)", {{"dA", 2.0, false, "integer >= 1"}, {"dB", 2.0, false, "integer >= 1"}}},
        {"random_separable",
         "mixture of Haar-random pure product states with Dirichlet(1,...,1) weights",
         {{"dA", 2.0, false, "integer >= 1"},
          {"dB", 2.0, false, "integer >= 1"},
          {"n_terms", 4.0, false, "integer >= 1"},
          {"seed", 0.0, false, "integer >= 0"}}},
    };
    return families;
}

namespace {

std::size_t as_count(std::string_view name, double v, double min) {
    if (!std::isfinite(v) || v < min || v != std::floor(v) || v > 9.0e15) {
        throw Error(ErrorCode::parameter_out_of_range,
                    "parameter '" + std::string(name) + "' must be an integer >= " + std::to_string(static_cast<int>(min)));
    }
    return static_cast<std::size_t>(v);
}

} // namespace

DensityMatrix instantiate(const StateFamily& family) {
    const FamilyInfo* info = nullptr;
    for (const auto& f : state_families()) {
        if (f.name == family.name) info = &f;
    }
    if (info == nullptr) {
        throw Error(ErrorCode::invalid_argument, "unknown state family '" + family.name + "'");
    }
    ParamMap values;
    for (const auto& p : info->params) {
        auto it = family.params.find(p.name);
        if (it == family.params.end()) {
            if (p.required) {
                throw Error(ErrorCode::invalid_argument,
                            "family '" + family.name + "' requires parameter '" + p.name + "'");
            }
            values[p.name] = p.default_value;
        } else {
            values[p.name] = it->second;
        }
    }
    for (const auto& [name, _] : family.params) {
        if (!values.count(name)) {
            throw Error(ErrorCode::invalid_argument,
                        "family '" + family.name + "' has no parameter '" + name + "'");
        }
    }

    if (family.name == "horodecki33") return white_noise_mix(horodecki33(values["a"]), values["p"]);
    if (family.name == "noisy_singlet") return noisy_singlet(values["p"]);
    if (family.name == "singlet") return singlet();
    if (family.name == "maximally_mixed") {
        return maximally_mixed(as_count("dA", values["dA"], 1), as_count("dB", values["dB"], 1));
    }
    // random_separable
    return random_separable(as_count("dA", values["dA"], 1), as_count("dB", values["dB"], 1),
                            as_count("n_terms", values["n_terms"], 1), as_count("seed", values["seed"], 0));
}

} // namespace tlurkit
