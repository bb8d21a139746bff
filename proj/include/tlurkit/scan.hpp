#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tlurkit/criteria.hpp"
#include "tlurkit/observables.hpp"
#include "tlurkit/spec_io.hpp"
#include "tlurkit/states.hpp"

namespace tlurkit {

/// Grid axis: min, min + step, ... up to max (inclusive within 1e-9 steps).
struct Axis {
    std::string param;
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;

    std::vector<double> values() const;
};

/// Parses "name:min:max:step".
Axis parse_axis(const std::string& text);

struct CellSummary {
    double lhs;
    double rhs;
    double margin;
    bool detected;
};

struct ScanCell {
    ParamMap params;                  // full parameter assignment for this point
    std::vector<CellSummary> results; // aligned with ScanResult::criteria
};

struct ScanResult {
    std::string family;
    ParamMap base_params;
    std::vector<Axis> axes;
    std::vector<std::string> criteria;
    std::string observables;
    std::vector<ScanCell> cells; // row-major over axes, first axis slowest
    std::map<std::string, double> thresholds;
};

/// requested > 0 wins, then TLURKIT_THREADS, then hardware concurrency.
std::size_t resolve_thread_count(std::size_t requested = 0);

/// Evaluates every criterion at every grid point. State-dependent
/// observable builders are rebuilt per point; fixed ones are built once from
/// the first grid point. Output order is independent of the worker count.
ScanResult sweep(const StateFamily& base, const std::vector<Axis>& axes, const std::vector<std::string>& criteria,
                 const ObservableSpec& obs, std::size_t threads = 0);

struct BisectResult {
    double threshold;
    double lo; // final bracket
    double hi;
    bool detected_at_hi;
    std::size_t evaluations;
};

inline constexpr std::size_t kMonotonicitySamples = 16;

/// Bisection on an arbitrary verdict function, with the checks described below.
BisectResult bisect_verdict(const std::function<bool(double)>& detected, double lo, double hi, double tol,
                            const std::string& label);

/// Locates the parameter value where `criterion` changes verdict on [lo, hi].
/// The verdicts at lo and hi must differ (no_crossing otherwise) and 16
/// evenly spaced samples must show a single verdict change (non_monotone
/// otherwise). Returns the midpoint of a final bracket of width <= tol.
BisectResult bisect_threshold(const StateFamily& base, const std::string& param, double lo, double hi,
                              const std::string& criterion, const ObservableSpec& obs, double tol = 1e-4);

/// One-axis sweep followed by bisection inside the first grid interval where
/// each criterion's verdict flips.
ScanResult scan(const StateFamily& base, const Axis& axis, const std::vector<std::string>& criteria,
                const ObservableSpec& obs, double tol = 1e-4, std::size_t threads = 0);

/// One row per (grid point, criterion): family, params..., criterion, lhs,
/// rhs, margin, detected.
std::string to_csv(const ScanResult& result);
Json to_json(const ScanResult& result);

/// Fixed-format rendering used by every CSV writer ("%.17g").
std::string format_double(double v);

} // namespace tlurkit
