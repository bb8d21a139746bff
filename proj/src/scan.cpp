#include "tlurkit/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <optional>
#include <functional>
#include <sstream>
#include <thread>

#include "tlurkit/error.hpp"

namespace tlurkit {

std::vector<double> Axis::values() const {
    if (!std::isfinite(min) || !std::isfinite(max) || !std::isfinite(step)) {
        throw Error(ErrorCode::invalid_argument, "axis '" + param + "': non-finite bounds");
    }
    if (max < min) throw Error(ErrorCode::invalid_argument, "axis '" + param + "': max < min");
    if (max == min) return {min};
    if (!(step > 0.0)) throw Error(ErrorCode::invalid_argument, "axis '" + param + "': step must be positive");
    const auto n = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::min(max, min + static_cast<double>(i) * step);
    return out;
}

Axis parse_axis(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 4 || parts[0].empty()) {
        throw Error(ErrorCode::parse_error, "axis '" + text + "': expected name:min:max:step");
    }
    Axis axis;
    axis.param = parts[0];
    try {
        axis.min = std::stod(parts[1]);
        axis.max = std::stod(parts[2]);
        axis.step = std::stod(parts[3]);
    } catch (const std::exception&) {
        throw Error(ErrorCode::parse_error, "axis '" + text + "': bounds must be numbers");
    }
    axis.values();
    return axis;
}

std::size_t resolve_thread_count(std::size_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("TLURKIT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

bool needs_observables(const std::vector<std::string>& criteria) {
    for (const auto& c : criteria)
        if (uses_observables(c)) return true;
    return false;
}

void require_criteria(const std::vector<std::string>& criteria) {
    if (criteria.empty()) throw Error(ErrorCode::invalid_argument, "at least one criterion is required");
    const auto& known = criterion_names();
    for (const auto& c : criteria) {
        if (std::find(known.begin(), known.end(), c) == known.end()) {
            throw Error(ErrorCode::invalid_argument, "unknown criterion '" + c + "'");
        }
    }
}

std::string describe(const ParamMap& params) {
    std::string s;
    for (const auto& [k, v] : params) s += (s.empty() ? "" : ", ") + k + "=" + format_double(v);
    return "{" + s + "}";
}

// Evaluates criteria on one parameter point; `fixed` is used unless the builder is state-dependent.
std::vector<CriterionReport> evaluate_point(const StateFamily& family, const std::vector<std::string>& criteria,
                                            const ObservableSpec& obs, const std::optional<LocalObservableSet>& fixed) {
    const DensityMatrix rho = instantiate(family);
    std::optional<LocalObservableSet> built;
    const LocalObservableSet* set = fixed ? &*fixed : nullptr;
    if (needs_observables(criteria) && !set) {
        built.emplace(build_observables(obs, rho));
        set = &*built;
    }
    std::vector<CriterionReport> out;
    for (const auto& c : criteria) {
        if (uses_observables(c)) {
            out.push_back(evaluate(c, rho, *set));
        } else {
            out.push_back(c == "ppt" ? eval_ppt(rho) : eval_ccnr(rho));
        }
    }
    return out;
}

std::optional<LocalObservableSet> fixed_observables(const StateFamily& first, const std::vector<std::string>& criteria,
                                                    const ObservableSpec& obs) {
    if (!needs_observables(criteria) || is_state_dependent(obs)) return std::nullopt;
    return build_observables(obs, instantiate(first));
}

StateFamily with_param(const StateFamily& base, const std::string& param, double value) {
    StateFamily f = base;
    f.params[param] = value;
    return f;
}

} // namespace

ScanResult sweep(const StateFamily& base, const std::vector<Axis>& axes, const std::vector<std::string>& criteria,
                 const ObservableSpec& obs, std::size_t threads) {
    require_criteria(criteria);
    if (axes.empty()) throw Error(ErrorCode::invalid_argument, "sweep requires at least one axis");

    std::vector<std::vector<double>> values;
    std::size_t total = 1;
    for (const auto& axis : axes) {
        values.push_back(axis.values());
        total *= values.back().size();
    }

    ScanResult result;
    result.family = base.name;
    result.base_params = base.params;
    result.axes = axes;
    result.criteria = criteria;
    result.observables = obs.builder;
    result.cells.resize(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        ParamMap params = base.params;
        std::size_t rem = idx;
        for (std::size_t a = axes.size(); a-- > 0;) {
            params[axes[a].param] = values[a][rem % values[a].size()];
            rem /= values[a].size();
        }
        result.cells[idx].params = std::move(params);
    }

    std::optional<LocalObservableSet> fixed;
    try {
        fixed = fixed_observables({base.name, result.cells.front().params}, criteria, obs);
    } catch (const Error& e) {
        throw Error(e.code(), "at " + describe(result.cells.front().params) + ": " + e.what());
    }

    std::vector<std::exception_ptr> errors(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t idx = next++; idx < total; idx = next++) {
            ScanCell& cell = result.cells[idx];
            try {
                for (const auto& r : evaluate_point({base.name, cell.params}, criteria, obs, fixed)) {
                    cell.results.push_back({r.lhs, r.rhs, r.margin, r.detected});
                }
            } catch (const Error& e) {
                errors[idx] = std::make_exception_ptr(Error(e.code(), "at " + describe(cell.params) + ": " + e.what()));
            } catch (...) {
                errors[idx] = std::current_exception();
            }
        }
    };
    const std::size_t n_threads = std::min(resolve_thread_count(threads), total);
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return result;
}

BisectResult bisect_verdict(const std::function<bool(double)>& detected, double lo, double hi, double tol,
                            const std::string& label) {
    if (!(lo < hi)) throw Error(ErrorCode::invalid_argument, "bisect: require lo < hi");
    if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "bisect: tol must be positive");

    std::size_t evaluations = 0;
    auto verdict = [&](double x) {
        ++evaluations;
        return detected(x);
    };
    const bool at_lo = verdict(lo);
    const bool at_hi = verdict(hi);
    if (at_lo == at_hi) {
        throw Error(ErrorCode::no_crossing, "bisect: " + label + " gives the same verdict (" +
                                                (at_lo ? "detected" : "not detected") + ") at " + format_double(lo) +
                                                " and " + format_double(hi));
    }

    // Single-crossing spot check on the verdicts.
    std::vector<double> xs(kMonotonicitySamples);
    std::vector<bool> verdicts(kMonotonicitySamples);
    for (std::size_t i = 0; i < kMonotonicitySamples; ++i) {
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(kMonotonicitySamples - 1);
        verdicts[i] = i == 0 ? at_lo : i + 1 == kMonotonicitySamples ? at_hi : verdict(xs[i]);
    }
    std::size_t changes = 0;
    for (std::size_t i = 1; i < kMonotonicitySamples; ++i) {
        if (verdicts[i] != verdicts[i - 1] && ++changes > 1) {
            throw Error(ErrorCode::non_monotone, "bisect: verdict of " + label +
                                                     " changes more than once; second change between " +
                                                     format_double(xs[i - 1]) + " and " + format_double(xs[i]));
        }
    }

    double a = lo;
    double b = hi;
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        if (verdict(mid) == at_lo) a = mid;
        else b = mid;
    }
    return {0.5 * (a + b), a, b, at_hi, evaluations};
}

BisectResult bisect_threshold(const StateFamily& base, const std::string& param, double lo, double hi,
                              const std::string& criterion, const ObservableSpec& obs, double tol) {
    require_criteria({criterion});
    if (!(lo < hi)) throw Error(ErrorCode::invalid_argument, "bisect: require lo < hi");
    const std::vector<std::string> criteria{criterion};
    const auto fixed = fixed_observables(with_param(base, param, lo), criteria, obs);
    auto detected = [&](double x) {
        return evaluate_point(with_param(base, param, x), criteria, obs, fixed).front().detected;
    };
    return bisect_verdict(detected, lo, hi, tol, "'" + criterion + "' over " + param);
}

ScanResult scan(const StateFamily& base, const Axis& axis, const std::vector<std::string>& criteria,
                const ObservableSpec& obs, double tol, std::size_t threads) {
    ScanResult result = sweep(base, {axis}, criteria, obs, threads);
    for (std::size_t c = 0; c < criteria.size(); ++c) {
        for (std::size_t i = 1; i < result.cells.size(); ++i) {
            if (result.cells[i].results[c].detected != result.cells[i - 1].results[c].detected) {
                const double lo = result.cells[i - 1].params.at(axis.param);
                const double hi = result.cells[i].params.at(axis.param);
                // Within one grid interval the crossing is unique by construction of the bracket.
                const std::vector<std::string> one{criteria[c]};
                const auto fixed = fixed_observables(with_param(base, axis.param, lo), one, obs);
                const bool at_lo = result.cells[i - 1].results[c].detected;
                double a = lo;
                double b = hi;
                while (b - a > tol) {
                    const double mid = 0.5 * (a + b);
                    if (evaluate_point(with_param(base, axis.param, mid), one, obs, fixed).front().detected == at_lo) a = mid;
                    else b = mid;
                }
                result.thresholds[criteria[c]] = 0.5 * (a + b);
                break;
            }
        }
    }
    return result;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const ScanResult& result) {
    std::vector<std::string> names;
    if (!result.cells.empty())
        for (const auto& [k, _] : result.cells.front().params) names.push_back(k);

    std::string out = "family";
    for (const auto& n : names) out += "," + n;
    out += ",criterion,lhs,rhs,margin,detected\n";
    for (const auto& cell : result.cells) {
        for (std::size_t c = 0; c < result.criteria.size(); ++c) {
            const CellSummary& s = cell.results[c];
            out += result.family;
            for (const auto& n : names) out += "," + format_double(cell.params.at(n));
            out += "," + result.criteria[c] + "," + format_double(s.lhs) + "," + format_double(s.rhs) + "," +
                   format_double(s.margin) + "," + (s.detected ? "1" : "0") + "\n";
        }
    }
    return out;
}

Json to_json(const ScanResult& result) {
    Json axes = Json::array();
    for (const auto& a : result.axes) axes.push_back({{"param", a.param}, {"min", a.min}, {"max", a.max}, {"step", a.step}});
    Json cells = Json::array();
    for (const auto& cell : result.cells) {
        Json params = Json::object();
        for (const auto& [k, v] : cell.params) params[k] = v;
        Json results = Json::object();
        for (std::size_t c = 0; c < result.criteria.size(); ++c) {
            const CellSummary& s = cell.results[c];
            results[result.criteria[c]] = {{"lhs", s.lhs}, {"rhs", s.rhs}, {"margin", s.margin}, {"detected", s.detected}};
        }
        cells.push_back({{"params", params}, {"results", results}});
    }
    Json base = Json::object();
    for (const auto& [k, v] : result.base_params) base[k] = v;
    Json thresholds = Json::object();
    for (const auto& [k, v] : result.thresholds) thresholds[k] = v;
    return Json{{"family", result.family}, {"base_params", base},  {"axes", axes},         {"criteria", result.criteria},
                {"observables", result.observables}, {"cells", cells}, {"thresholds", thresholds}};
}

} // namespace tlurkit
