#include "tlurkit/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "tlurkit/error.hpp"

namespace tlurkit {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw Error(ErrorCode::parse_error, "field '" + field + "': " + message);
}

double number(const Json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
}

std::uint64_t count(const Json& j, const std::string& field) {
    if (!j.is_number_integer() && !(j.is_number() && j.get<double>() == static_cast<double>(j.get<std::int64_t>()))) {
        fail(field, "expected an integer");
    }
    const auto v = j.get<std::int64_t>();
    if (v < 0) fail(field, "expected a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

Complex entry(const Json& j, const std::string& field) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    fail(field, "expected a number or [re, im]");
}

const Json& member(const Json& j, const std::string& key, const std::string& field) {
    auto it = j.find(key);
    if (it == j.end()) fail(field + "." + key, "missing");
    return *it;
}

} // namespace

ComplexMatrix parse_matrix(const Json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) fail(field, "expected a non-empty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) fail(field + "[0]", "expected a non-empty row");
    const std::size_t cols = j[0].size();
    ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string row_field = field + "[" + std::to_string(r) + "]";
        if (!j[r].is_array() || j[r].size() != cols) fail(row_field, "expected a row of length " + std::to_string(cols));
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                entry(j[r][c], row_field + "[" + std::to_string(c) + "]");
        }
    }
    return m;
}

StateSpec parse_state_spec(const Json& j) {
    if (!j.is_object()) fail("state", "expected an object");
    if (j.contains("family")) {
        const Json& name = j["family"];
        if (!name.is_string()) fail("state.family", "expected a string");
        StateFamily family{name.get<std::string>(), {}};
        if (j.contains("params")) {
            const Json& params = j["params"];
            if (!params.is_object()) fail("state.params", "expected an object");
            for (const auto& [key, value] : params.items()) {
                family.params[key] = number(value, "state.params." + key);
            }
        }
        return family;
    }
    if (j.contains("matrix")) {
        const Json& dims = member(j, "dims", "state");
        if (!dims.is_array() || dims.size() != 2) fail("state.dims", "expected [dA, dB]");
        const auto dA = count(dims[0], "state.dims[0]");
        const auto dB = count(dims[1], "state.dims[1]");
        ComplexMatrix m = parse_matrix(j["matrix"], "state.matrix");
        try {
            return DensityMatrix(dA, dB, std::move(m));
        } catch (const Error& e) {
            fail("state.matrix", e.what());
        }
    }
    fail("state", "expected either 'family' or 'dims' + 'matrix'");
}

DensityMatrix resolve_state(const StateSpec& spec) {
    if (const auto* family = std::get_if<StateFamily>(&spec)) return instantiate(*family);
    return std::get<DensityMatrix>(spec);
}

ObservableSpec parse_observable_spec(const Json& j, std::uint64_t seed) {
    ObservableSpec spec;
    spec.bound.seed = seed;
    if (j.is_string()) {
        spec.builder = j.get<std::string>();
    } else if (j.is_object() && j.contains("builder")) {
        if (!j["builder"].is_string()) fail("obs.builder", "expected a string");
        spec.builder = j["builder"].get<std::string>();
        if (j.contains("params")) {
            const Json& params = j["params"];
            if (!params.is_object()) fail("obs.params", "expected an object");
            for (const auto& [key, value] : params.items()) {
                const std::string field = "obs.params." + key;
                if (key == "pairing") {
                    const auto s = value.is_string() ? value.get<std::string>() : std::string();
                    if (s == "conjugate") spec.pairing = SuPairing::conjugate;
                    else if (s == "negate") spec.pairing = SuPairing::negate;
                    else fail(field, "expected \"conjugate\" or \"negate\"");
                } else if (key == "bound") {
                    const auto s = value.is_string() ? value.get<std::string>() : std::string();
                    if (s == "analytic") spec.bound.mode = BoundMode::analytic;
                    else if (s == "numeric") spec.bound.mode = BoundMode::numeric;
                    else fail(field, "expected \"analytic\" or \"numeric\"");
                } else if (key == "restarts") {
                    spec.bound.restarts = count(value, field);
                } else if (key == "seed") {
                    spec.bound.seed = count(value, field);
                } else {
                    fail(field, "unknown parameter");
                }
            }
        }
    } else if (j.is_object() && j.contains("opsA")) {
        auto ops = [&](const char* key) {
            const Json& list = member(j, key, "obs");
            if (!list.is_array() || list.empty()) fail(std::string("obs.") + key, "expected a non-empty array");
            std::vector<HermitianOperator> out;
            for (std::size_t k = 0; k < list.size(); ++k) {
                const std::string field = std::string("obs.") + key + "[" + std::to_string(k) + "]";
                try {
                    out.emplace_back(parse_matrix(list[k], field));
                } catch (const Error& e) {
                    if (e.code() == ErrorCode::parse_error) throw;
                    fail(field, e.what());
                }
            }
            return out;
        };
        auto opsA = ops("opsA");
        auto opsB = ops("opsB");
        const double boundA = number(member(j, "boundA", "obs"), "obs.boundA");
        const double boundB = number(member(j, "boundB", "obs"), "obs.boundB");
        spec.builder = "explicit";
        try {
            spec.explicit_set.emplace(std::move(opsA), std::move(opsB), boundA, boundB);
        } catch (const Error& e) {
            fail("obs", e.what());
        }
        return spec;
    } else {
        fail("obs", "expected a builder name, {\"builder\": ...} or explicit opsA/opsB");
    }

    const auto& names = observable_builders();
    if (std::find(names.begin(), names.end(), spec.builder) == names.end() || spec.builder == "explicit") {
        fail("obs.builder", "unknown builder '" + spec.builder + "'");
    }
    return spec;
}

GaussianState parse_gaussian_spec(const Json& j) {
    if (!j.is_object()) fail("state", "expected an object");
    try {
        if (j.contains("tmsv")) return tmsv(number(j["tmsv"], "state.tmsv"));
        if (j.contains("thermal")) {
            const Json& n = j["thermal"];
            if (n.is_number()) return thermal(n.get<double>(), n.get<double>());
            if (n.is_array() && n.size() == 2) {
                return thermal(number(n[0], "state.thermal[0]"), number(n[1], "state.thermal[1]"));
            }
            fail("state.thermal", "expected a number or [n1, n2]");
        }
        if (j.contains("vacuum")) return vacuum();
        if (j.contains("cov")) {
            Matrix4 cov;
            const Json& c = j["cov"];
            if (!c.is_array() || c.size() != 4) fail("state.cov", "expected a 4x4 array");
            for (int r = 0; r < 4; ++r) {
                const std::string row = "state.cov[" + std::to_string(r) + "]";
                if (!c[r].is_array() || c[r].size() != 4) fail(row, "expected 4 entries");
                for (int k = 0; k < 4; ++k) cov(r, k) = number(c[r][k], row + "[" + std::to_string(k) + "]");
            }
            Vector4 mean = Vector4::Zero();
            if (j.contains("mean")) {
                const Json& m = j["mean"];
                if (!m.is_array() || m.size() != 4) fail("state.mean", "expected 4 entries");
                for (int k = 0; k < 4; ++k) mean(k) = number(m[k], "state.mean[" + std::to_string(k) + "]");
            }
            return GaussianState(mean, cov);
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::parse_error) throw;
        throw Error(e.code(), std::string("field 'state': ") + e.what());
    }
    fail("state", "expected one of 'cov', 'tmsv', 'thermal', 'vacuum'");
}

Json load_json_argument(const std::string& text, const std::string& field) {
    std::string content = text;
    if (!text.empty() && text.front() == '@') {
        std::ifstream in(text.substr(1));
        if (!in) fail(field, "cannot read file '" + text.substr(1) + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        content = ss.str();
    }
    try {
        return Json::parse(content);
    } catch (const Json::parse_error&) {
        // A bare builder name is accepted as a string.
        if (!content.empty() && content.find_first_of("{[\"") == std::string::npos) return Json(content);
        fail(field, "invalid JSON");
    }
}

Json to_json(const CriterionReport& report) {
    Json components = Json::object();
    for (const auto& [k, v] : report.components) components[k] = v;
    return Json{{"criterion", report.criterion},
                {"lhs", report.lhs},
                {"rhs", report.rhs},
                {"margin", report.margin},
                {"detected", report.detected},
                {"components", components}};
}

Json to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

} // namespace tlurkit
