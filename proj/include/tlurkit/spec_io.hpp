#pragma once

// JSON formats.
//
// State spec:       {"family": "horodecki33", "params": {"a": 0.5, "p": 1}}
//                   {"dims": [dA, dB], "matrix": [[[re, im], ...], ...]}
//                   (matrix entries may also be plain reals)
// Observable spec:  "pauli_loo_pair" or {"builder": name, "params": {...}}
//                   {"opsA": [matrix...], "opsB": [matrix...], "boundA": x, "boundB": y}
// Gaussian spec:    {"mean": [4], "cov": [[4]x4]}, {"tmsv": r},
//                   {"thermal": n or [n1, n2]}, {"vacuum": {}}
// Parse failures throw tlurkit::Error(parse_error) naming the offending field.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "json.hpp"

#include "tlurkit/criteria.hpp"
#include "tlurkit/cvgauss.hpp"
#include "tlurkit/observables.hpp"
#include "tlurkit/states.hpp"

namespace tlurkit {

using Json = nlohmann::json;

/// Either a named family or an explicit matrix.
using StateSpec = std::variant<StateFamily, DensityMatrix>;

ComplexMatrix parse_matrix(const Json& j, const std::string& field);

StateSpec parse_state_spec(const Json& j);
DensityMatrix resolve_state(const StateSpec& spec);

/// `seed` is used for numeric bounds unless params carry their own "seed".
ObservableSpec parse_observable_spec(const Json& j, std::uint64_t seed = 0);

GaussianState parse_gaussian_spec(const Json& j);

/// Accepts inline JSON text, or "@path" to read the JSON from a file.
Json load_json_argument(const std::string& text, const std::string& field);

Json to_json(const CriterionReport& report);
Json to_json(const ComplexMatrix& m);

} // namespace tlurkit
