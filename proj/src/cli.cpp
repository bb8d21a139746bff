#include "tlurkit/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "tlurkit/criteria.hpp"
#include "tlurkit/cvgauss.hpp"
#include "tlurkit/error.hpp"
#include "tlurkit/scan.hpp"
#include "tlurkit/spec_io.hpp"
#include "tlurkit/states.hpp"

namespace tlurkit {

namespace {

struct CommonOptions {
    std::string format = "json";
    std::string out_path;
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--format", opts.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", opts.out_path, "Write output to FILE instead of stdout");
    cmd->add_option("--seed", opts.seed, "Seed for every randomised path");
}

void emit(const CommonOptions& opts, const std::string& text, std::ostream& out) {
    if (opts.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(opts.out_path, std::ios::binary);
    if (!file) throw Error(ErrorCode::invalid_argument, "cannot open output file '" + opts.out_path + "'");
    file << text;
}

std::vector<std::string> expand_criteria(const std::vector<std::string>& requested) {
    if (requested.size() == 1 && requested.front() == "all") return criterion_names();
    return requested;
}

// Threads --seed into seeded families that were not given an explicit seed.
StateFamily with_seed(StateFamily family, std::uint64_t seed) {
    for (const auto& info : state_families()) {
        if (info.name != family.name) continue;
        for (const auto& p : info.params)
            if (p.name == "seed" && !family.params.count("seed")) family.params["seed"] = static_cast<double>(seed);
    }
    return family;
}

StateFamily parse_family(const std::string& name, const std::string& params_text, std::uint64_t seed) {
    StateFamily family{name, {}};
    if (!params_text.empty()) {
        const Json params = load_json_argument(params_text, "params");
        if (!params.is_object()) throw Error(ErrorCode::parse_error, "field 'params': expected an object");
        for (const auto& [key, value] : params.items()) {
            if (!value.is_number()) throw Error(ErrorCode::parse_error, "field 'params." + key + "': expected a number");
            family.params[key] = value.get<double>();
        }
    }
    return with_seed(std::move(family), seed);
}

std::string reports_csv(const std::vector<CriterionReport>& reports) {
    std::string s = "criterion,lhs,rhs,margin,detected\n";
    for (const auto& r : reports) {
        s += r.criterion + "," + format_double(r.lhs) + "," + format_double(r.rhs) + "," + format_double(r.margin) + "," +
             (r.detected ? "1" : "0") + "\n";
    }
    return s;
}

std::string reports_json(const std::vector<CriterionReport>& reports) {
    if (reports.size() == 1) return to_json(reports.front()).dump(2) + "\n";
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr.dump(2) + "\n";
}

void write_error(std::ostream& err, std::string_view kind, const std::string& message) {
    err << Json{{"error", kind}, {"message", message}}.dump() << "\n";
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entanglement detection with local uncertainty relations", "tlurkit"};
    app.require_subcommand(1);

    CommonOptions common;
    std::size_t threads = 0;

    // evaluate
    std::string state_text;
    std::string obs_text = "auto";
    std::vector<std::string> criteria{"all"};
    bool measures = false;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate criteria on one state");
    evaluate_cmd->add_option("--state", state_text, "State spec JSON (or @file)")->required();
    evaluate_cmd->add_option("--obs", obs_text, "Observable spec JSON, builder name, or @file");
    evaluate_cmd->add_option("--criterion", criteria, "Criterion name(s), or 'all'");
    evaluate_cmd->add_flag("--measures", measures, "Also report C_LUR and C_TLUR");
    add_common(evaluate_cmd, common);

    // sweep / scan
    std::string family_name;
    std::string params_text;
    std::vector<std::string> axis_texts;
    double tol = 1e-4;
    auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate criteria over a parameter grid");
    auto* scan_cmd = app.add_subcommand("scan", "One-axis sweep with per-criterion threshold refinement");
    for (auto* cmd : {sweep_cmd, scan_cmd}) {
        cmd->add_option("--family", family_name, "State family")->required();
        cmd->add_option("--params", params_text, "Fixed family parameters as a JSON object");
        cmd->add_option("--axis", axis_texts, "name:min:max:step (repeatable)")->required();
        cmd->add_option("--criterion", criteria, "Criterion name(s), or 'all'")->required();
        cmd->add_option("--obs", obs_text, "Observable spec");
        cmd->add_option("--threads", threads, "Worker count (default TLURKIT_THREADS or hardware)");
        add_common(cmd, common);
    }
    scan_cmd->add_option("--tol", tol, "Threshold tolerance");

    // bisect
    std::string param_name;
    double lo = 0.0;
    double hi = 1.0;
    std::string criterion;
    auto* bisect_cmd = app.add_subcommand("bisect", "Locate the detection threshold of one criterion");
    bisect_cmd->add_option("--family", family_name, "State family")->required();
    bisect_cmd->add_option("--params", params_text, "Fixed family parameters as a JSON object");
    bisect_cmd->add_option("--param", param_name, "Parameter to bisect")->required();
    bisect_cmd->add_option("--lo", lo, "Lower end");
    bisect_cmd->add_option("--hi", hi, "Upper end");
    bisect_cmd->add_option("--criterion", criterion, "Criterion name")->required();
    bisect_cmd->add_option("--obs", obs_text, "Observable spec");
    bisect_cmd->add_option("--tol", tol, "Bracket width");
    add_common(bisect_cmd, common);

    // cv-evaluate
    double a = 1.0;
    std::vector<std::string> cv_criteria{"all"};
    auto* cv_cmd = app.add_subcommand("cv-evaluate", "Evaluate Gaussian two-mode criteria");
    cv_cmd->add_option("--state", state_text, "Gaussian spec JSON (or @file)")->required();
    cv_cmd->add_option("--a", a, "Weight a in u = |a| x1 + x2/a, v = |a| p1 - p2/a");
    cv_cmd->add_option("--criterion", cv_criteria, "duan, corollary2, or all");
    add_common(cv_cmd, common);

    auto* list_states_cmd = app.add_subcommand("list-states", "List state families");
    auto* list_criteria_cmd = app.add_subcommand("list-criteria", "List criteria and observable builders");
    add_common(list_states_cmd, common);
    add_common(list_criteria_cmd, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
            return 0;
        }
        write_error(err, "usage", e.what());
        return 2;
    }

    try {
        if (evaluate_cmd->parsed()) {
            StateSpec spec = parse_state_spec(load_json_argument(state_text, "state"));
            if (auto* family = std::get_if<StateFamily>(&spec)) *family = with_seed(std::move(*family), common.seed);
            const DensityMatrix rho = resolve_state(spec);
            const auto names = expand_criteria(criteria);
            for (const auto& c : names) {
                const auto& known = criterion_names();
                if (std::find(known.begin(), known.end(), c) == known.end()) {
                    throw Error(ErrorCode::invalid_argument, "unknown criterion '" + c + "'");
                }
            }
            std::optional<LocalObservableSet> obs;
            for (const auto& c : names) {
                if (uses_observables(c) && !obs) {
                    obs = build_observables(parse_observable_spec(load_json_argument(obs_text, "obs"), common.seed), rho);
                }
            }
            if (measures && !obs) {
                obs = build_observables(parse_observable_spec(load_json_argument(obs_text, "obs"), common.seed), rho);
            }
            std::vector<CriterionReport> reports;
            for (const auto& c : names) {
                if (!uses_observables(c)) reports.push_back(c == "ppt" ? eval_ppt(rho) : eval_ccnr(rho));
                else reports.push_back(evaluate(c, rho, *obs));
            }
            std::string text;
            if (measures) {
                const auto m = entanglement_measures(rho, *obs);
                if (common.format == "csv") {
                    text = reports_csv(reports) + "c_lur," + format_double(m.c_lur) + "\nc_tlur," + format_double(m.c_tlur) + "\n";
                } else {
                    Json arr = Json::array();
                    for (const auto& r : reports) arr.push_back(to_json(r));
                    text = Json{{"reports", arr}, {"measures", {{"c_lur", m.c_lur}, {"c_tlur", m.c_tlur}}}}.dump(2) + "\n";
                }
            } else {
                text = common.format == "csv" ? reports_csv(reports) : reports_json(reports);
            }
            emit(common, text, out);
            return 0;
        }

        if (sweep_cmd->parsed() || scan_cmd->parsed()) {
            const StateFamily family = parse_family(family_name, params_text, common.seed);
            const ObservableSpec obs = parse_observable_spec(load_json_argument(obs_text, "obs"), common.seed);
            std::vector<Axis> axes;
            for (const auto& t : axis_texts) axes.push_back(parse_axis(t));
            const auto names = expand_criteria(criteria);
            ScanResult result;
            if (scan_cmd->parsed()) {
                if (axes.size() != 1) throw Error(ErrorCode::invalid_argument, "scan takes exactly one --axis");
                result = scan(family, axes.front(), names, obs, tol, threads);
            } else {
                result = sweep(family, axes, names, obs, threads);
            }
            emit(common, common.format == "csv" ? to_csv(result) : to_json(result).dump(2) + "\n", out);
            return 0;
        }

        if (bisect_cmd->parsed()) {
            const StateFamily family = parse_family(family_name, params_text, common.seed);
            const ObservableSpec obs = parse_observable_spec(load_json_argument(obs_text, "obs"), common.seed);
            const BisectResult r = bisect_threshold(family, param_name, lo, hi, criterion, obs, tol);
            std::string text;
            if (common.format == "csv") {
                text = "family,param,criterion,threshold,lo,hi,detected_at_hi,evaluations\n" + family.name + "," + param_name +
                       "," + criterion + "," + format_double(r.threshold) + "," + format_double(r.lo) + "," +
                       format_double(r.hi) + "," + (r.detected_at_hi ? "1" : "0") + "," + std::to_string(r.evaluations) + "\n";
            } else {
                text = Json{{"family", family.name},
                            {"param", param_name},
                            {"criterion", criterion},
                            {"threshold", r.threshold},
                            {"lo", r.lo},
                            {"hi", r.hi},
                            {"detected_at_hi", r.detected_at_hi},
                            {"evaluations", r.evaluations}}
                           .dump(2) +
                       "\n";
            }
            emit(common, text, out);
            return 0;
        }

        if (cv_cmd->parsed()) {
            const GaussianState state = parse_gaussian_spec(load_json_argument(state_text, "state"));
            std::vector<std::string> names = cv_criteria;
            if (names.size() == 1 && names.front() == "all") names = {"duan", "corollary2"};
            std::vector<CriterionReport> reports;
            for (const auto& c : names) {
                if (c == "duan") reports.push_back(eval_duan(state, a));
                else if (c == "corollary2") reports.push_back(eval_corollary2(state, a));
                else throw Error(ErrorCode::invalid_argument, "unknown CV criterion '" + c + "'");
            }
            emit(common, common.format == "csv" ? reports_csv(reports) : reports_json(reports), out);
            return 0;
        }

        if (list_states_cmd->parsed()) {
            std::string text;
            if (common.format == "csv") {
                text = "family,params,description\n";
                for (const auto& f : state_families()) {
                    std::string params;
                    for (const auto& p : f.params) params += (params.empty() ? "" : " ") + p.name;
                    text += f.name + "," + params + ",\"" + f.description + "\"\n";
                }
            } else {
                Json arr = Json::array();
                for (const auto& f : state_families()) {
                    Json params = Json::array();
                    for (const auto& p : f.params) {
                        Json entry = {{"name", p.name}, {"required", p.required}, {"range", p.range}};
                        if (!p.required) entry["default"] = p.default_value;
                        params.push_back(entry);
                    }
                    arr.push_back({{"name", f.name}, {"description", f.description}, {"params", params}});
                }
                text = arr.dump(2) + "\n";
            }
            emit(common, text, out);
            return 0;
        }

        if (list_criteria_cmd->parsed()) {
            std::vector<std::string> cv{"duan", "corollary2"};
            std::string text;
            if (common.format == "csv") {
                text = "name,kind\n";
                for (const auto& c : criterion_names()) text += c + ",discrete\n";
                for (const auto& c : cv) text += c + ",gaussian\n";
                for (const auto& b : observable_builders()) text += b + ",observable_builder\n";
            } else {
                text = Json{{"discrete", criterion_names()}, {"gaussian", cv}, {"observable_builders", observable_builders()}}
                           .dump(2) +
                       "\n";
            }
            emit(common, text, out);
            return 0;
        }
    } catch (const Error& e) {
        write_error(err, to_string(e.code()), e.what());
        return is_numerical(e.code()) ? 1 : 2;
    } catch (const std::exception& e) {
        write_error(err, "internal", e.what());
        return 1;
    }
    return 0;
}

} // namespace tlurkit
