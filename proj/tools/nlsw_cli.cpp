// Command-line front end: run, converge, compare, list-problems.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nlsw/nlsw.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_solver = 3;
constexpr int exit_oracle = 4;

struct Options {
    std::string config;
    std::string output_dir;
    std::string axis = "space";
    std::size_t levels = 4;
};

nlsw::RunConfig load(const Options& o) {
    auto c = nlsw::load_config(o.config);
    if (!o.output_dir.empty()) c.output_dir = o.output_dir;
    return c;
}

void print_run(const nlsw::ExperimentReport& rep, const nlsw::RunConfig& c) {
    const auto line = [](const char* name, const nlsw::TrajectorySummary& s) {
        std::printf("%-5s energy drift %.3e  mass drift %.3e  max fp iters %d", name, s.energy_drift, s.mass_drift,
                    s.max_fp_iters);
        if (s.energy_wang_drift) {
            std::printf("  wang energy drift %.3e (single-level form %.3e)", *s.energy_wang_drift,
                        *s.energy_wang_single_drift);
        }
        if (s.final_errors) std::printf("  err_max %.3e  e_infty_sq %.3e", s.final_errors->err_max,
                                        s.final_errors->e_infty_sq);
        std::printf("\n");
    };
    if (rep.mi_summary) line("mi", *rep.mi_summary);
    if (rep.wang_summary) line("wang", *rep.wang_summary);
    std::printf("wrote %s\n", c.output_dir.string().c_str());
}

int dispatch(const std::string& command, const Options& o) {
    std::optional<nlsw::RunConfig> cfg;
    try {
        if (command == "list-problems") {
            for (const auto& name : nlsw::builtin_problem_names()) {
                const auto p = nlsw::builtin_problem(name);
                std::printf("%-16s alpha=%g gamma=%g theta=%g lambda=%g beta=%g  [%g, %g]  T=%g  exact: %s\n",
                            name.c_str(), p.params.alpha, p.params.gamma, p.params.theta, p.params.lambda,
                            p.params.beta, p.x_l, p.x_r, p.default_T, nlsw::to_string(p.exactness).c_str());
            }
            return 0;
        }
        cfg = load(o);
        if (command == "compare") cfg->scheme = nlsw::SchemeChoice::both;
        if (command == "converge") {
            const auto rep = nlsw::run_convergence(*cfg, nlsw::sweep_axis_from_string(o.axis), o.levels);
            for (const auto& lv : rep.levels) {
                std::printf("level %zu  K=%zu J=%zu  mesh %.6g  err_max %.6e", lv.level, lv.K, lv.J, lv.mesh_param,
                            lv.err_max);
                if (lv.fitted_order) std::printf("  order %.3f", *lv.fitted_order);
                std::printf("\n");
            }
            std::printf("wrote %s\n", (cfg->output_dir / "orders.csv").string().c_str());
            return 0;
        }
        print_run(nlsw::run_experiment(*cfg), *cfg);
        return 0;
    } catch (const nlsw::IdentityOracleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        if (cfg) nlsw::write_error_record(cfg->output_dir, "identity_oracle", e.what());
        return exit_oracle;
    } catch (const nlsw::StepFailure& e) {
        std::cerr << "error: step " << e.step() << ": " << e.what() << '\n';
        if (cfg) nlsw::write_error_record(cfg->output_dir, "step_failure", e.what(), e.step(), e.last_update());
        return exit_solver;
    } catch (const nlsw::SingularSystemError& e) {
        std::cerr << "error: " << e.what() << '\n';
        if (cfg) nlsw::write_error_record(cfg->output_dir, "singular_system", e.what());
        return exit_solver;
    } catch (const nlsw::ConsistencyError& e) {
        std::cerr << "error: " << e.what() << '\n';
        if (cfg) nlsw::write_error_record(cfg->output_dir, "consistency", e.what());
        return exit_solver;
    } catch (const nlsw::NonFiniteError& e) {
        std::cerr << "error: " << e.what() << '\n';
        if (cfg) nlsw::write_error_record(cfg->output_dir, "non_finite", e.what());
        return exit_solver;
    } catch (const nlsw::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        if (cfg) nlsw::write_error_record(cfg->output_dir, "config", e.what());
        return exit_config;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wave-operator Schrodinger solver: multisymplectic and energy-preserving schemes"};
    app.require_subcommand(1);
    Options o;

    auto* run = app.add_subcommand("run", "Integrate one configuration");
    auto* compare = app.add_subcommand("compare", "Run both schemes on one configuration");
    auto* converge = app.add_subcommand("converge", "Refinement sweep against the exact solution");
    auto* list = app.add_subcommand("list-problems", "Show the builtin problems");
    (void)list;
    for (auto* sub : {run, compare, converge}) {
        sub->add_option("config", o.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("-o,--output-dir", o.output_dir, "Override output_dir");
    }
    converge->add_option("--axis", o.axis, "space or time")->check(CLI::IsMember({"space", "time"}));
    converge->add_option("--levels", o.levels, "Number of refinement levels")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }
    return dispatch(app.get_subcommands().front()->get_name(), o);
}
