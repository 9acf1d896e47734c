#pragma once

/**
 * @file experiment.hpp
 * @brief Run configuration, single runs, scheme comparison and refinement
 *        sweeps, with CSV / JSON output.
 *
 * Configuration is a JSON object:
 *
 *   {"problem": "plane_beta2", "K": 200, "J": 2000, "T": 20, "scheme": "both"}
 *
 * `problem` is either a builtin name or an object
 * {"base": name, "alpha": .., "gamma": .., "theta": .., "lambda": .., "beta": ..,
 *  "x_l": .., "x_r": .., "T": ..} overriding fields of the builtin.
 */

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlsw/diagnostics.hpp"
#include "nlsw/ep_scheme.hpp"
#include "nlsw/error.hpp"
#include "nlsw/mi_scheme.hpp"
#include "nlsw/problems.hpp"
#include "nlsw/solver.hpp"

namespace nlsw {

enum class SchemeChoice { mi, wang, both };

inline std::string to_string(SchemeChoice s) {
    switch (s) {
        case SchemeChoice::mi: return "mi";
        case SchemeChoice::wang: return "wang";
        case SchemeChoice::both: return "both";
    }
    return "mi";
}

struct RunConfig {
    ProblemSpec problem;
    nlohmann::json problem_source;  ///< as given, echoed into meta.json
    std::size_t K = 0;
    std::size_t J = 0;
    std::optional<double> T;
    SchemeChoice scheme = SchemeChoice::mi;
    SolverConfig solver;
    std::size_t snapshot_stride = 100;
    std::filesystem::path output_dir = "nlsw_out";

    GridSpec grid() const { return problem_grid(problem, K, J, T); }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <class T>
T get_field(const nlohmann::json& obj, const char* key) {
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("field '") + key + "' is missing or has the wrong type");
    }
}

inline std::size_t get_count(const nlohmann::json& obj, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError(std::string("field '") + key + "' must be a non-negative integer");
    }
    return static_cast<std::size_t>(v.get<long long>());
}

inline ProblemSpec resolve_problem(const nlohmann::json& src) {
    if (src.is_string()) {
        try {
            return builtin_problem(src.get<std::string>());
        } catch (const UsageError& e) {
            throw ConfigError(std::string("field 'problem': ") + e.what());
        }
    }
    if (!src.is_object()) throw ConfigError("field 'problem' must be a name or an object");
    reject_unknown_keys(src, {"base", "alpha", "gamma", "theta", "lambda", "beta", "x_l", "x_r", "T"}, "problem");
    if (!src.contains("base")) throw ConfigError("field 'problem.base' is required");

    ProblemSpec p = resolve_problem(src.at("base"));
    bool changed = false;
    const auto override_value = [&](const char* key, double& slot) {
        if (!src.contains(key)) return;
        const auto& v = src.at(key);
        if (!v.is_number()) throw ConfigError(std::string("field 'problem.") + key + "' must be a number");
        const double value = v.get<double>();
        if (value != slot) changed = true;
        slot = value;
    };
    override_value("alpha", p.params.alpha);
    override_value("gamma", p.params.gamma);
    override_value("theta", p.params.theta);
    override_value("lambda", p.params.lambda);
    override_value("beta", p.params.beta);
    override_value("x_l", p.x_l);
    override_value("x_r", p.x_r);
    if (src.contains("T")) {
        const auto& v = src.at("T");
        if (!v.is_number()) throw ConfigError("field 'problem.T' must be a number");
        p.default_T = v.get<double>();
    }
    if (changed) {
        p.name = p.name + "*";
        validate(p.params);
        if (p.exactness == Exactness::verified && !(exact_residual_sup(p) < residual_gate_tol)) {
            p.exact = {};
            p.exactness = Exactness::none;
            p.note = "overrides break the base exact solution; no error metrics";
        }
    }
    validate(p);
    return p;
}

}  // namespace detail

/// Parses and validates a JSON configuration document.
inline RunConfig parse_config(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    detail::reject_unknown_keys(doc,
                                {"problem", "K", "J", "T", "scheme", "bootstrap_mode", "fp_tol", "fp_max_iter",
                                 "snapshot_stride", "output_dir"},
                                "configuration");
    for (const char* key : {"problem", "K", "J"}) {
        if (!doc.contains(key)) throw ConfigError(std::string("field '") + key + "' is required");
    }

    RunConfig c;
    c.problem_source = doc.at("problem");
    c.problem = detail::resolve_problem(c.problem_source);
    c.K = detail::get_count(doc, "K");
    c.J = detail::get_count(doc, "J");
    if (doc.contains("T")) c.T = detail::get_field<double>(doc, "T");
    if (doc.contains("scheme")) {
        const auto s = detail::get_field<std::string>(doc, "scheme");
        if (s == "mi") c.scheme = SchemeChoice::mi;
        else if (s == "wang") c.scheme = SchemeChoice::wang;
        else if (s == "both") c.scheme = SchemeChoice::both;
        else throw ConfigError("field 'scheme' must be one of mi, wang, both");
    }
    if (doc.contains("bootstrap_mode")) {
        c.solver.bootstrap = bootstrap_from_string(detail::get_field<std::string>(doc, "bootstrap_mode"));
    }
    if (doc.contains("fp_tol")) c.solver.fp_tol = detail::get_field<double>(doc, "fp_tol");
    if (doc.contains("fp_max_iter")) c.solver.fp_max_iter = static_cast<int>(detail::get_count(doc, "fp_max_iter"));
    if (doc.contains("snapshot_stride")) c.snapshot_stride = detail::get_count(doc, "snapshot_stride");
    if (doc.contains("output_dir")) c.output_dir = detail::get_field<std::string>(doc, "output_dir");

    (void)c.grid();
    validate(c.solver);
    if (c.solver.bootstrap == BootstrapMode::exact && !c.problem.has_exact()) {
        throw ConfigError("bootstrap_mode 'exact' needs a problem with an exact solution");
    }
    return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read configuration file " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

/// Shortest text that reads back as the same double.
inline std::string format_double(double v) {
    char buf[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

namespace detail {

inline std::string csv_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

}  // namespace detail

inline void write_series_csv(const Trajectory& tr, const std::filesystem::path& path) {
    auto out = detail::open_output(path);
    out << "step,t,energy_mi,mass_mi,energy_gap,mass_gap,energy_wang,err_max,e_infty_sq,mod_err,fp_iters\n";
    for (const auto& r : tr.rows) {
        out << r.step << ',' << format_double(r.t) << ',' << format_double(r.energy_mi) << ','
            << format_double(r.mass_mi) << ',' << detail::csv_optional(r.energy_gap) << ','
            << detail::csv_optional(r.mass_gap) << ',' << detail::csv_optional(r.energy_wang) << ','
            << detail::csv_optional(r.err_max) << ',' << detail::csv_optional(r.e_infty_sq) << ','
            << detail::csv_optional(r.mod_err) << ',' << r.fp_iters << '\n';
    }
}

inline void write_snapshots_csv(const Trajectory& tr, const GridSpec& grid, const std::filesystem::path& path) {
    auto out = detail::open_output(path);
    out << "t,x,re_u,im_u,abs_u\n";
    for (const auto& s : tr.snapshots) {
        for (std::size_t k = 0; k < s.u.size(); ++k) {
            out << format_double(s.t) << ',' << format_double(grid.node(k)) << ',' << format_double(s.u[k].real())
                << ',' << format_double(s.u[k].imag()) << ',' << format_double(std::abs(s.u[k])) << '\n';
        }
    }
}

/// Largest relative departures from the first level pair, plus final errors.
struct TrajectorySummary {
    double energy_drift = 0.0;
    double mass_drift = 0.0;
    double max_energy_gap = 0.0;  ///< relative to |E^{j+1/2}|
    double max_mass_gap = 0.0;    ///< relative to |Q^{j+1/2}|
    std::optional<double> energy_wang_drift;
    std::optional<double> energy_wang_single_drift;
    std::optional<ErrorMetrics> final_errors;
    int max_fp_iters = 0;
};

inline double relative_change(double value, double reference) {
    const double scale = std::abs(reference);
    return scale > 0.0 ? std::abs(value - reference) / scale : std::abs(value - reference);
}

inline TrajectorySummary summarize(const Trajectory& tr, const ProblemSpec& problem, const GridSpec& grid) {
    TrajectorySummary s;
    for (const auto& r : tr.rows) {
        s.energy_drift = std::max(s.energy_drift, relative_change(r.energy_mi, tr.energy_initial));
        s.mass_drift = std::max(s.mass_drift, relative_change(r.mass_mi, tr.mass_initial));
        if (r.energy_gap) s.max_energy_gap = std::max(s.max_energy_gap, std::abs(*r.energy_gap) / std::abs(r.energy_mi));
        if (r.mass_gap) s.max_mass_gap = std::max(s.max_mass_gap, std::abs(*r.mass_gap) / std::abs(r.mass_mi));
        if (r.energy_wang) {
            s.energy_wang_drift =
                std::max(s.energy_wang_drift.value_or(0.0), relative_change(*r.energy_wang, *tr.energy_wang_initial));
            s.energy_wang_single_drift =
                std::max(s.energy_wang_single_drift.value_or(0.0),
                         relative_change(*r.energy_wang_single, *tr.energy_wang_single_initial));
        }
        s.max_fp_iters = std::max(s.max_fp_iters, r.fp_iters);
    }
    if (problem.has_exact()) {
        const auto exact = MeshFunction::sample(grid, [&](double x) { return problem.exact(x, grid.time(grid.J)); });
        s.final_errors = error_metrics(tr.u_final, exact);
    }
    return s;
}

namespace detail {

inline nlohmann::json to_json(const IdentityConstants& c) {
    return {{"energy", c.energy}, {"mass_cross", c.mass_cross}, {"mass_square", c.mass_square}};
}

inline nlohmann::json oracle_json() {
    const auto& v = identity_validation();
    return {{"grid", "K=8, three steps, two parameter sets"},
            {"nominal", to_json(v.nominal)},
            {"validated", to_json(v.validated)},
            {"fitted_energy", v.fitted_energy},
            {"fitted_mass_cross", v.fitted_mass_cross},
            {"max_spread", v.max_spread},
            {"energy_matches_nominal", v.energy_matches_nominal},
            {"mass_matches_nominal", v.mass_matches_nominal},
            {"ok", v.ok},
            {"summary", v.summary},
            {"mass_norm", "half-point norm in the alpha term of Q"}};
}

inline nlohmann::json summary_json(const TrajectorySummary& s, const Trajectory& tr) {
    nlohmann::json j{{"energy_mi_initial", tr.energy_initial},
                     {"mass_mi_initial", tr.mass_initial},
                     {"energy_mi_max_rel_drift", s.energy_drift},
                     {"mass_mi_max_rel_drift", s.mass_drift},
                     {"max_fp_iters", s.max_fp_iters},
                     {"total_fp_iters", tr.total_fp_iters},
                     {"snapshots", tr.snapshots.size()},
                     {"rows", tr.rows.size()}};
    if (tr.scheme == "mi") {
        j["energy_gap_max_rel"] = s.max_energy_gap;
        j["mass_gap_max_rel"] = s.max_mass_gap;
    }
    if (s.energy_wang_drift) {
        j["energy_wang_initial"] = *tr.energy_wang_initial;
        j["energy_wang_max_rel_drift"] = *s.energy_wang_drift;
        j["energy_wang_single_initial"] = *tr.energy_wang_single_initial;
        j["energy_wang_single_max_rel_drift"] = *s.energy_wang_single_drift;
    }
    if (s.final_errors) {
        const auto& e = *s.final_errors;
        j["final_errors"] = {{"err_max", e.err_max},   {"e_infty_sq", e.e_infty_sq}, {"mod_err", e.mod_err},
                             {"err_re", e.err_re},     {"err_im", e.err_im}};
    }
    return j;
}

inline nlohmann::json problem_json(const RunConfig& c, const GridSpec& g) {
    const auto& p = c.problem;
    return {{"name", p.name},
            {"source", c.problem_source},
            {"params",
             {{"alpha", p.params.alpha},
              {"gamma", p.params.gamma},
              {"theta", p.params.theta},
              {"lambda", p.params.lambda},
              {"beta", p.params.beta}}},
            {"domain", {p.x_l, p.x_r}},
            {"exactness", to_string(p.exactness)},
            {"note", p.note},
            {"grid", {{"K", g.K}, {"J", g.J}, {"T", g.T}, {"h", g.h}, {"tau", g.tau}}}};
}

inline nlohmann::json config_json(const RunConfig& c) {
    nlohmann::json j{{"problem", c.problem_source},
                     {"K", c.K},
                     {"J", c.J},
                     {"scheme", to_string(c.scheme)},
                     {"bootstrap_mode", to_string(c.solver.bootstrap)},
                     {"fp_tol", c.solver.fp_tol},
                     {"fp_max_iter", c.solver.fp_max_iter},
                     {"snapshot_stride", c.snapshot_stride},
                     {"output_dir", c.output_dir.string()}};
    if (c.T) j["T"] = *c.T;
    return j;
}

inline void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
    auto out = open_output(path);
    out << j.dump(2) << '\n';
}

}  // namespace detail

struct ExperimentReport {
    GridSpec grid;
    std::optional<Trajectory> mi;
    std::optional<Trajectory> wang;
    std::optional<TrajectorySummary> mi_summary;
    std::optional<TrajectorySummary> wang_summary;
    nlohmann::json meta;
};

/// Throws IdentityOracleError if the oracle did not produce clean constants.
inline const IdentityValidation& require_identity_oracle() {
    const auto& v = identity_validation();
    if (!v.ok) throw IdentityOracleError("identity-constant oracle failed: " + v.summary);
    return v;
}

/// Runs the configured scheme(s) and writes series / snapshots / meta.json
/// into config.output_dir.  With scheme = both the files get _mi / _wang
/// suffixes.
inline ExperimentReport run_experiment(const RunConfig& config) {
    require_identity_oracle();
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport rep;
    rep.grid = config.grid();
    std::filesystem::create_directories(config.output_dir);

    const bool both = config.scheme == SchemeChoice::both;
    const auto file = [&](const char* stem, const char* scheme) {
        return config.output_dir / (std::string(stem) + (both ? std::string("_") + scheme : "") + ".csv");
    };

    nlohmann::json schemes = nlohmann::json::object();
    if (config.scheme != SchemeChoice::wang) {
        rep.mi = run_mi(config.problem, rep.grid, config.solver, config.snapshot_stride);
        rep.mi_summary = summarize(*rep.mi, config.problem, rep.grid);
        write_series_csv(*rep.mi, file("series", "mi"));
        write_snapshots_csv(*rep.mi, rep.grid, file("snapshots", "mi"));
        schemes["mi"] = detail::summary_json(*rep.mi_summary, *rep.mi);
    }
    if (config.scheme != SchemeChoice::mi) {
        rep.wang = run_wang(config.problem, rep.grid, config.solver, config.snapshot_stride);
        rep.wang_summary = summarize(*rep.wang, config.problem, rep.grid);
        write_series_csv(*rep.wang, file("series", "wang"));
        write_snapshots_csv(*rep.wang, rep.grid, file("snapshots", "wang"));
        schemes["wang"] = detail::summary_json(*rep.wang_summary, *rep.wang);
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep.meta = {{"config", detail::config_json(config)},
                {"problem", detail::problem_json(config, rep.grid)},
                {"bootstrap_mode", to_string(config.solver.bootstrap)},
                {"identity_oracle", detail::oracle_json()},
                {"schemes", schemes},
                {"wall_time_s", wall}};
    detail::write_json(rep.meta, config.output_dir / "meta.json");
    return rep;
}

enum class SweepAxis { space, time };

inline SweepAxis sweep_axis_from_string(const std::string& s) {
    if (s == "space") return SweepAxis::space;
    if (s == "time") return SweepAxis::time;
    throw UsageError("sweep axis must be 'space' or 'time', got '" + s + "'");
}

struct ConvergenceLevel {
    std::size_t level = 0;
    std::size_t K = 0;
    std::size_t J = 0;
    double mesh_param = 0.0;  ///< h for space sweeps, tau for time sweeps
    double err_max = 0.0;
    std::optional<double> fitted_order;  ///< least squares over levels 0..level
};

struct ConvergenceReport {
    SweepAxis axis = SweepAxis::space;
    std::vector<ConvergenceLevel> levels;
    double order = 0.0;
};

/// Doubles K (space) or J (time) `levels - 1` times starting from the
/// configured values; errors are err_max of the MI scheme at the final time.
inline ConvergenceReport run_convergence(const RunConfig& config, SweepAxis axis, std::size_t levels,
                                         bool write_files = true) {
    if (levels < 2) throw UsageError("a convergence sweep needs at least two levels");
    if (config.problem.exactness != Exactness::verified) {
        throw ConfigError("problem '" + config.problem.name + "' has no verified exact solution to converge to");
    }
    require_identity_oracle();

    ConvergenceReport rep;
    rep.axis = axis;
    std::vector<std::pair<double, double>> samples;
    for (std::size_t l = 0; l < levels; ++l) {
        ConvergenceLevel lv;
        lv.level = l;
        lv.K = axis == SweepAxis::space ? config.K << l : config.K;
        lv.J = axis == SweepAxis::time ? config.J << l : config.J;
        const GridSpec grid = problem_grid(config.problem, lv.K, lv.J, config.T);
        const MiStepper stepper(config.problem.params, grid);
        auto [u0, u1] = bootstrap(config.problem.f0, config.problem.f1, config.problem.params, grid,
                                  config.solver.bootstrap, config.problem.exact);
        StateWindow w{std::move(u0), std::move(u1), grid.time(1)};
        for (std::size_t j = 1; j < grid.J; ++j) {
            StepResult r;
            try {
                r = stepper.step(w, config.solver);
            } catch (const StepFailure& e) {
                throw StepFailure(e.what(), e.last_update(), static_cast<long>(j));
            }
            w.u_prev = std::move(w.u_cur);
            w.u_cur = std::move(r.u_next);
        }
        const auto exact = MeshFunction::sample(grid, [&](double x) { return config.problem.exact(x, grid.T); });
        lv.mesh_param = axis == SweepAxis::space ? grid.h : grid.tau;
        lv.err_max = error_metrics(w.u_cur, exact).err_max;
        samples.emplace_back(lv.mesh_param, lv.err_max);
        if (l > 0) lv.fitted_order = convergence_order(samples);
        rep.levels.push_back(lv);
    }
    rep.order = *rep.levels.back().fitted_order;

    if (write_files) {
        std::filesystem::create_directories(config.output_dir);
        auto out = detail::open_output(config.output_dir / "orders.csv");
        out << "level,mesh_param,err_max,fitted_order\n";
        for (const auto& lv : rep.levels) {
            out << lv.level << ',' << format_double(lv.mesh_param) << ',' << format_double(lv.err_max) << ','
                << detail::csv_optional(lv.fitted_order) << '\n';
        }
    }
    return rep;
}

/// error.json in the output directory (best effort) for a failed run.
inline void write_error_record(const std::filesystem::path& dir, const std::string& kind, const std::string& message,
                               std::optional<long> step = std::nullopt,
                               std::optional<double> last_update = std::nullopt) {
    nlohmann::json j{{"error", kind}, {"message", message}};
    if (step) j["step"] = *step;
    if (last_update) j["last_update"] = *last_update;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::ofstream out(dir / "error.json", std::ios::binary);
    if (out) out << j.dump(2) << '\n';
}

}  // namespace nlsw
