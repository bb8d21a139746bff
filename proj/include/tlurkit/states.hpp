#pragma once

// State catalogue. Spin labels |-1>, |0>, |+1> of the 3x3 example map to
// computational indices 0, 1, 2.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tlurkit/linops.hpp"

namespace tlurkit {

using ParamMap = std::map<std::string, double>;

/// Horodecki 3x3 bound entangled state, 0 < a < 1. Real symmetric, PPT.
DensityMatrix horodecki33(double a);

/// p * rho + (1 - p) * I / (dimA dimB), 0 <= p <= 1.
DensityMatrix white_noise_mix(const DensityMatrix& rho, double p);

/// p |psi_s><psi_s| + (1 - p)(2/3 |00><00| + 1/3 |01><01|), with
/// |psi_s> = (|01> - |10>)/sqrt(2).
DensityMatrix noisy_singlet(double p);

DensityMatrix singlet();
DensityMatrix maximally_mixed(std::size_t dimA, std::size_t dimB);
DensityMatrix product_state(const ComplexMatrix& rhoA, const ComplexMatrix& rhoB);
DensityMatrix pure_state(std::size_t dimA, std::size_t dimB, const ComplexVector& psi);

/// Convex mixture of n_terms Haar-random pure product states with
/// Dirichlet(1,...,1) weights. Bit-identical for a fixed seed.
DensityMatrix random_separable(std::size_t dimA, std::size_t dimB, std::size_t n_terms, std::uint64_t seed);

/// Haar-random pure state on the joint space (generically entangled).
DensityMatrix random_pure(std::size_t dimA, std::size_t dimB, std::uint64_t seed);

/// Ginibre-induced mixed state G G^dagger / Tr with G of size d x rank.
DensityMatrix random_mixed(std::size_t dimA, std::size_t dimB, std::size_t rank, std::uint64_t seed);

struct FamilyParam {
    std::string name;
    double default_value;
    bool required;
    std::string range;
};

struct FamilyInfo {
    std::string name;
    std::string description;
    std::vector<FamilyParam> params;
};

const std::vector<FamilyInfo>& state_families();

/// A named family plus its parameter assignment.
struct StateFamily {
    std::string name;
    ParamMap params;
};

/// Instantiates a family, filling defaults. Unknown families, unknown or
/// missing parameters, and out-of-range values throw tlurkit::Error naming
/// the offending parameter.
DensityMatrix instantiate(const StateFamily& family);

} // namespace tlurkit
