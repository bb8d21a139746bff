#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "tlurkit/error.hpp"
#include "tlurkit/observables.hpp"
#include "tlurkit/random.hpp"
#include "tlurkit/states.hpp"

using namespace tlurkit;

namespace {

ComplexMatrix pauli(char which) {
    ComplexMatrix m(2, 2);
    if (which == 'x') m << 0, 1, 1, 0;
    if (which == 'y') m << 0, Complex(0, -1), Complex(0, 1), 0;
    if (which == 'z') m << 1, 0, 0, -1;
    return m;
}

double hs(const HermitianOperator& a, const HermitianOperator& b) { return (a.matrix() * b.matrix()).trace().real(); }

BoundOptions numeric(std::uint64_t seed = 1) {
    BoundOptions o;
    o.mode = BoundMode::numeric;
    o.seed = seed;
    return o;
}

} // namespace

TEST_CASE("su generators") {
    const auto g2 = su_generators(2);
    REQUIRE(g2.size() == 3);
    CHECK(g2[0].matrix().isApprox(pauli('x')));
    CHECK(g2[1].matrix().isApprox(pauli('y')));
    CHECK(g2[2].matrix().isApprox(pauli('z')));

    const auto g3 = su_generators(3);
    REQUIRE(g3.size() == 8);
    ComplexMatrix casimir = ComplexMatrix::Zero(3, 3);
    for (const auto& g : g3) casimir += g.matrix() * g.matrix();
    CHECK(max_abs(casimir - ComplexMatrix::Identity(3, 3) * (16.0 / 3.0)) < 1e-12);

    for (std::size_t d = 2; d <= 5; ++d) {
        const auto g = su_generators(d);
        CHECK(g.size() == d * d - 1);
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(std::abs(g[i].matrix().trace()) < 1e-12);
            for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(hs(g[i], g[j]) - (i == j ? 2.0 : 0.0)) < 1e-12);
        }
    }
    CHECK_THROWS_AS(su_generators(1), Error);
}

TEST_CASE("loo basis") {
    const auto b2 = loo_basis(2);
    REQUIRE(b2.ops().size() == 4);
    CHECK(b2.ops()[0].matrix().isApprox(pauli('x') / std::sqrt(2.0)));
    CHECK(b2.ops()[3].matrix().isApprox(ComplexMatrix::Identity(2, 2) / std::sqrt(2.0)));

    for (std::size_t d = 2; d <= 4; ++d) {
        const auto basis = loo_basis(d);
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const DensityMatrix rho = random_mixed(d, 1, 1 + seed % d, seed);
            double sq = 0.0;
            double second = 0.0;
            for (const auto& g : basis.ops()) {
                sq += std::pow(expectation(g, rho), 2);
                second += (rho.matrix() * g.matrix() * g.matrix()).trace().real();
            }
            CHECK(std::abs(sq - purity(rho.matrix())) < 1e-10);
            CHECK(std::abs(second - static_cast<double>(d)) < 1e-10);
        }
    }

    const auto full = loo_basis(2).ops();
    std::vector<HermitianOperator> short_list(full.begin(), full.begin() + 3);
    CHECK_THROWS_AS(LooBasis{short_list}, Error);
    std::vector<HermitianOperator> scaled;
    for (const auto& g : full) scaled.push_back(2.0 * g);
    CHECK_THROWS_AS(LooBasis{scaled}, Error);
}

TEST_CASE("pauli loo pair") {
    const auto set = pauli_loo_pair();
    CHECK(set.size() == 4);
    CHECK(set.boundA() == 1.0);
    CHECK(set.boundB() == 1.0);
    CHECK(set.provenance().mode == BoundMode::analytic);
    // A_k = G^A_k = -sigma/sqrt2, B_k = -G^B_k = -sigma/sqrt2.
    CHECK(set.opsA()[0].matrix().isApprox(-pauli('x') / std::sqrt(2.0)));
    CHECK(set.opsB()[0].matrix().isApprox(-pauli('x') / std::sqrt(2.0)));
    CHECK(set.opsA()[3].matrix().isApprox(ComplexMatrix::Identity(2, 2) / std::sqrt(2.0)));
    CHECK(set.opsB()[3].matrix().isApprox(-ComplexMatrix::Identity(2, 2) / std::sqrt(2.0)));

    auto joint_sum = [&](const DensityMatrix& rho) {
        double s = 0.0;
        for (std::size_t k = 0; k < set.size(); ++k) {
            const ComplexMatrix j = tensor(set.opsA()[k].matrix(), ComplexMatrix::Identity(2, 2)) +
                                    tensor(ComplexMatrix::Identity(2, 2), set.opsB()[k].matrix());
            s += oracle::variance(j, rho.matrix());
        }
        return s;
    };
    CHECK(std::abs(joint_sum(singlet())) < 1e-14);
    CHECK(joint_sum(maximally_mixed(2, 2)) == doctest::Approx(3.0).epsilon(1e-14));

    const auto [ga, gb] = loo_bases_of(set);
    CHECK(ga.ops()[1].matrix().isApprox(-pauli('y') / std::sqrt(2.0)));
    CHECK(gb.ops()[2].matrix().isApprox(pauli('z') / std::sqrt(2.0)));
}

TEST_CASE("loo pair with unequal dimensions") {
    const auto set = loo_pair(loo_basis(2), loo_basis(3));
    CHECK(set.size() == 9);
    CHECK(set.boundA() == 1.0);
    CHECK(set.boundB() == 2.0);
    CHECK(max_abs(set.opsA()[8].matrix()) == 0.0);
    const auto [ga, gb] = loo_bases_of(set);
    CHECK(ga.dim() == 2);
    CHECK(gb.dim() == 3);
    CHECK(gb.ops().size() == 9);
}

TEST_CASE("observable set validation") {
    std::vector<HermitianOperator> a{HermitianOperator(pauli('z'))};
    std::vector<HermitianOperator> b{HermitianOperator(pauli('z')), HermitianOperator(pauli('x'))};
    CHECK_THROWS_AS(LocalObservableSet(a, b, 0.0, 0.0), Error);
    std::vector<HermitianOperator> mixed_dims{HermitianOperator(pauli('z')), HermitianOperator::identity(3)};
    CHECK_THROWS_AS(LocalObservableSet(mixed_dims, mixed_dims, 0.0, 0.0), Error);
    CHECK_THROWS_AS(LocalObservableSet(a, a, -1.0, 0.0), Error);

    // {sx, sz} has minimum variance sum 1; claiming 1.5 must be rejected.
    std::vector<HermitianOperator> xz{HermitianOperator(pauli('x')), HermitianOperator(pauli('z'))};
    try {
        LocalObservableSet bad(xz, xz, 1.5, 1.0);
        FAIL("bound accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_bound);
    }
    CHECK_NOTHROW(LocalObservableSet(xz, xz, 1.0, 1.0));
}

TEST_CASE("analytic uncertainty bounds") {
    std::vector<HermitianOperator> z{HermitianOperator(pauli('z'))};
    CHECK(uncertainty_bound(z).value == 0.0);
    CHECK(uncertainty_bound(loo_basis(3).ops()).value == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(uncertainty_bound(su_generators(3)).value == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(uncertainty_bound(su_generators(2)).value == doctest::Approx(2.0).epsilon(1e-14));

    std::vector<HermitianOperator> xz{HermitianOperator(pauli('x')), HermitianOperator(pauli('z'))};
    try {
        uncertainty_bound(xz);
        FAIL("no closed form expected");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_argument);
    }
    CHECK_THROWS_AS(uncertainty_bound(std::vector<HermitianOperator>{}), Error);
}

TEST_CASE("numeric uncertainty bounds") {
    std::vector<HermitianOperator> z{HermitianOperator(pauli('z'))};
    CHECK(uncertainty_bound(z, numeric()).value == 0.0);

    std::vector<HermitianOperator> xz{HermitianOperator(pauli('x')), HermitianOperator(pauli('z'))};
    const auto b = uncertainty_bound(xz, numeric());
    CHECK(b.value <= 1.0);
    CHECK(b.value >= 1.0 - 2e-6);
    CHECK(b.provenance.mode == BoundMode::numeric);
    CHECK(b.provenance.restarts == 32);

    const auto b3 = uncertainty_bound(su_generators(3), numeric(5));
    CHECK(b3.value <= 4.0);
    CHECK(b3.value >= 4.0 - 2e-6);

    // Reproducible for a fixed seed.
    CHECK(uncertainty_bound(su_generators(3), numeric(5)).value == b3.value);

    BoundOptions starved = numeric();
    starved.max_iterations = 1;
    starved.restarts = 2;
    starved.tolerance = 0.0;
    try {
        uncertainty_bound(xz, starved);
        FAIL("expected non-convergence");
    } catch (const BoundConvergenceError& e) {
        CHECK(e.code() == ErrorCode::non_convergence);
        CHECK(e.best_state().size() == 2);
        CHECK(std::isfinite(e.best_value()));
    }
}

TEST_CASE("numeric bounds hold on random pure and mixed states") {
    Rng rng(123);
    for (int trial = 0; trial < 3; ++trial) {
        // Random Hermitian set of 3 operators on C^3.
        std::vector<HermitianOperator> ops;
        for (int k = 0; k < 3; ++k) {
            ComplexMatrix m(3, 3);
            for (Eigen::Index i = 0; i < 3; ++i)
                for (Eigen::Index j = 0; j < 3; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
            ops.emplace_back(ComplexMatrix((m + m.adjoint()) / 2.0));
        }
        const double bound = uncertainty_bound(ops, numeric(static_cast<std::uint64_t>(trial))).value;
        CHECK(sampled_min_variance_sum(ops, 10000, 77 + static_cast<std::uint64_t>(trial)) >= bound - 1e-9);
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const DensityMatrix rho = random_mixed(3, 1, 1 + seed % 3, seed);
            CHECK(variance_sum(ops, rho.matrix()) >= bound - 1e-9);
        }
    }
}

TEST_CASE("su pair") {
    const auto c = su_pair(3, 3, SuPairing::conjugate);
    CHECK(c.size() == 8);
    CHECK(c.boundA() == doctest::Approx(4.0));
    CHECK(c.opsB()[1].matrix().isApprox(-c.opsA()[1].matrix().conjugate()));
    const auto n = su_pair(3, 3, SuPairing::negate);
    CHECK(n.opsB()[1].matrix().isApprox(-n.opsA()[1].matrix()));
    const auto u = su_pair(2, 3);
    CHECK(u.size() == 8);
    CHECK(u.boundA() == doctest::Approx(2.0));
    CHECK(u.boundB() == doctest::Approx(4.0));

    BoundOptions num = numeric(3);
    const auto sn = su_pair(2, 2, SuPairing::conjugate, num);
    CHECK(sn.boundA() <= 2.0);
    CHECK(sn.boundA() >= 2.0 - 2e-6);
    CHECK(sn.provenance().mode == BoundMode::numeric);
}

TEST_CASE("operator schmidt decomposition") {
    const auto s = operator_schmidt(singlet());
    CHECK(s.rank == 4);
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(s.coefficients(i) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.coefficients.sum() == doctest::Approx(2.0).epsilon(1e-12));
    // Agrees with the independent singular value oracle.
    const auto ref = oracle::singular_values(realign(singlet()));
    for (std::size_t i = 0; i < 4; ++i) CHECK(s.coefficients(static_cast<Eigen::Index>(i)) == doctest::Approx(ref[i]).epsilon(1e-9));

    ComplexMatrix p00 = ComplexMatrix::Zero(4, 4);
    p00(0, 0) = 1.0;
    const auto sp = operator_schmidt(DensityMatrix(2, 2, p00));
    CHECK(sp.rank == 1);
    CHECK(sp.coefficients(0) == doctest::Approx(1.0).epsilon(1e-12));

    const auto sm = operator_schmidt(maximally_mixed(3, 3));
    CHECK(sm.rank == 1);
    CHECK(sm.coefficients(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    const ComplexMatrix g0 = sm.basisA.ops()[0].matrix();
    CHECK(max_abs(g0 * g0(0, 0).real() / std::abs(g0(0, 0).real()) - ComplexMatrix::Identity(3, 3) / std::sqrt(3.0)) < 1e-12);

    SUBCASE("reconstruction on random states") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const DensityMatrix rho = random_mixed(2 + seed % 2, 3, 3, seed);
            const auto sch = operator_schmidt(rho);
            ComplexMatrix rec = ComplexMatrix::Zero(static_cast<Eigen::Index>(rho.dim()), static_cast<Eigen::Index>(rho.dim()));
            for (Eigen::Index k = 0; k < sch.coefficients.size(); ++k) {
                rec += sch.coefficients(k) * tensor(sch.basisA.ops()[static_cast<std::size_t>(k)].matrix(),
                                                    sch.basisB.ops()[static_cast<std::size_t>(k)].matrix());
            }
            CHECK(max_abs(rec - rho.matrix()) < 1e-10);
            CHECK(sch.coefficients.sum() == doctest::Approx(trace_norm(realign(rho))).epsilon(1e-9));
        }
    }

    const auto set = schmidt_loo_pair(horodecki33(0.5));
    CHECK(set.size() == 9);
    CHECK(set.boundA() == 2.0);
    CHECK(set.boundB() == 2.0);
}

TEST_CASE("observable specs") {
    ObservableSpec spec;
    CHECK(build_observables(spec, singlet()).size() == 4);
    CHECK(build_observables(spec, horodecki33(0.5)).size() == 9);
    spec.builder = "schmidt_loo_pair";
    CHECK(is_state_dependent(spec));
    spec.builder = "su_pair";
    CHECK_FALSE(is_state_dependent(spec));
    CHECK(build_observables(spec, horodecki33(0.5)).size() == 8);
    spec.builder = "pauli_loo_pair";
    CHECK_THROWS_AS(build_observables(spec, horodecki33(0.5)), Error);
    spec.builder = "bogus";
    CHECK_THROWS_AS(build_observables(spec, singlet()), Error);
    CHECK(to_string(BoundMode::numeric) == "numeric");
    CHECK(to_string(SuPairing::conjugate) == "conjugate");
}
