#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "erlangcev/config.hpp"
#include "erlangcev/nonzero_rate.hpp"
#include "erlangcev/simulator.hpp"
#include "erlangcev/zero_rate.hpp"

namespace {

using namespace erlangcev;

constexpr double kZeroRateEps = 1e-12;  // |r| below this selects the r = 0 solver

// Unified view over the two solvers; r = 0 configs get r forced to an
// exact zero so the closed-form module's precondition holds.
class SolverHandle {
public:
    explicit SolverHandle(const ProblemConfig& config, double grid_step = 0.0) {
        if (std::abs(config.params.r) < kZeroRateEps) {
            ModelParams p = config.params;
            p.r = 0.0;
            zero_.emplace(p, config.claim, config.phases);
        } else {
            nonzero_.emplace(config.params, config.phases, config.claim, grid_step);
        }
    }

    bool is_zero_rate() const { return zero_.has_value(); }
    int n() const { return zero_ ? zero_->n() : nonzero_->n(); }
    const ModelParams& params() const { return zero_ ? zero_->params() : nonzero_->params(); }

    double psi(double t, int phase) const {
        return zero_ ? zero_->psi(t, phase) : nonzero_->psi(t, phase);
    }
    double value(double t, double x, double s, int phase) const {
        return zero_ ? zero_->value(t, x, s, phase) : nonzero_->value(t, x, s, phase);
    }
    double strategy(double t, double s) const {
        return zero_ ? zero_rate::strategy(zero_->params(), t, s)
                     : nonzero_rate::strategy(nonzero_->params(), t, s);
    }

private:
    std::optional<zero_rate::Solution> zero_;
    std::optional<nonzero_rate::Solution> nonzero_;
};

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << std::setprecision(17);
    return out;
}

void print_conditions(std::ostream& os, const ConditionReport& report, bool zero_rate) {
    const char* gamma_name = zero_rate ? "Gamma" : "iota";
    os << std::setprecision(10);
    os << "case: " << (zero_rate ? "zero-rate (r = 0)" : "nonzero-rate (r > 0)") << "\n";
    os << gamma_name << " = " << report.gamma_value << "\n";
    os << "threshold = " << report.threshold << "\n";
    os << "condition1 = " << (report.condition1 ? "holds" : "fails") << "\n";
    os << "gamma1 = " << report.gamma1 << "\n";
    if (report.condition2_applicable) {
        os << "gamma2 = " << report.gamma2 << "\n";
        os << "arccot_bound = " << report.arccot_bound << "\n";
        os << "condition2 = " << (report.condition2 ? "holds" : "fails") << "\n";
    } else {
        os << "condition2 = inapplicable (beta = 0 or bound undefined)\n";
    }
    os << "verification = " << (report.any() ? "satisfied" : "NOT satisfied") << "\n";
}

int cmd_verify(const std::string& config_path) {
    const ProblemConfig config = load_config(config_path);
    const auto validation = validate(config.params, config.claim, config.phases);
    for (const auto& check : validation.checks)
        std::cout << "check " << check.name << ": " << (check.passed ? "pass" : "FAIL")
                  << " (" << check.detail << ")\n";

    const bool zero = std::abs(config.params.r) < kZeroRateEps;
    ModelParams p = config.params;
    if (zero) p.r = 0.0;
    const ConditionReport report =
        zero ? zero_rate::verify_conditions(p) : nonzero_rate::verify_conditions(p);
    print_conditions(std::cout, report, zero);
    return report.any() ? 0 : 2;
}

int cmd_solve(const std::string& config_path, int grid_points, const std::string& out_path) {
    const ProblemConfig config = load_config(config_path);
    const SolverHandle solver(config, config.params.T / grid_points);
    auto out = open_output(out_path);
    out << "t";
    for (int i = 1; i <= solver.n(); ++i) out << ",psi_" << i;
    out << "\n";
    const double T = solver.params().T;
    for (int j = 0; j <= grid_points; ++j) {
        const double t = T * j / grid_points;
        out << t;
        for (int i = 1; i <= solver.n(); ++i) out << "," << solver.psi(t, i);
        out << "\n";
    }
    return 0;
}

int cmd_value(const std::string& config_path, double t, double x, double s) {
    const ProblemConfig config = load_config(config_path);
    const SolverHandle solver(config);
    std::cout << std::setprecision(17) << "phase,value\n";
    for (int i = 1; i <= solver.n(); ++i)
        std::cout << i << "," << solver.value(t, x, s, i) << "\n";
    return 0;
}

int cmd_strategy(const std::string& config_path, double t, double s) {
    const ProblemConfig config = load_config(config_path);
    const SolverHandle solver(config);
    std::cout << std::setprecision(17) << solver.strategy(t, s) << "\n";
    return 0;
}

Strategy make_strategy(const SolverHandle& solver, const std::string& selector) {
    if (selector == "astar")
        return {"astar", [&](double t, double, double s, int) { return solver.strategy(t, s); }};
    if (selector == "zero") return {"zero", [](double, double, double, int) { return 0.0; }};
    if (selector.rfind("scale:", 0) == 0) {
        const double factor = std::stod(selector.substr(6));
        return {selector, [&solver, factor](double t, double, double s, int) {
                    return factor * solver.strategy(t, s);
                }};
    }
    throw std::invalid_argument("unknown strategy selector: " + selector);
}

int cmd_simulate(const std::string& config_path, const std::string& selector,
                 std::size_t n_paths, double dt, std::uint64_t seed, double t0, double x0,
                 double s0, int phase, const std::string& out_path) {
    const ProblemConfig config = load_config(config_path);
    const SolverHandle solver(config);
    const Strategy strategy = make_strategy(solver, selector);
    const PathState initial{t0, x0, s0, phase};
    const SimulationResult result = estimate_utility(
        config.params, config.phases, config.claim, strategy, initial, dt, n_paths, seed);
    const double analytic = solver.value(t0, x0, s0, phase);

    std::cout << std::setprecision(10);
    std::cout << "strategy = " << strategy.label << "\n";
    std::cout << "paths = " << result.n_paths << ", dt = " << result.dt
              << ", seed = " << result.seed << "\n";
    std::cout << "mc_mean = " << result.mean << "\n";
    std::cout << "std_error = " << result.std_error << "\n";
    std::cout << "ci99 = [" << result.ci_low << ", " << result.ci_high << "]\n";
    std::cout << "analytic_value = " << analytic << "\n";

    if (!out_path.empty()) {
        auto out = open_output(out_path);
        out << "label,paths,dt,seed,mean,std_error,ci_low,ci_high,analytic\n";
        out << strategy.label << "," << result.n_paths << "," << result.dt << ","
            << result.seed << "," << result.mean << "," << result.std_error << ","
            << result.ci_low << "," << result.ci_high << "," << analytic << "\n";
    }
    return 0;
}

struct SweepSpec {
    std::string quantity = "value";  // value | strategy
    std::string var = "t";           // t | s | x
    double from = 0.0;
    double to = 1.0;
    int points = 50;
    double t = 0.0;
    double s = 1.0;
    double x = 0.0;
    bool surface = false;  // strategy only: (t, s) lattice
};

int cmd_sweep(const std::string& config_path, const SweepSpec& spec,
              const std::string& out_path) {
    const ProblemConfig config = load_config(config_path);
    const SolverHandle solver(config);
    auto out = open_output(out_path);

    auto grid_point = [&](int j) {
        return spec.from + (spec.to - spec.from) * j / (spec.points - 1);
    };

    if (spec.quantity == "strategy") {
        if (spec.surface) {
            out << "t,s,a_star\n";
            for (int jt = 0; jt < spec.points; ++jt) {
                const double t = solver.params().T * jt / (spec.points - 1);
                for (int js = 0; js < spec.points; ++js) {
                    const double s = grid_point(js);
                    out << t << "," << s << "," << solver.strategy(t, s) << "\n";
                }
            }
            return 0;
        }
        out << spec.var << ",a_star\n";
        for (int j = 0; j < spec.points; ++j) {
            const double v = grid_point(j);
            const double t = spec.var == "t" ? v : spec.t;
            const double s = spec.var == "s" ? v : spec.s;
            out << v << "," << solver.strategy(t, s) << "\n";
        }
        return 0;
    }

    out << spec.var;
    for (int i = 1; i <= solver.n(); ++i) out << ",V_" << i;
    out << "\n";
    for (int j = 0; j < spec.points; ++j) {
        const double v = grid_point(j);
        const double t = spec.var == "t" ? v : spec.t;
        const double s = spec.var == "s" ? v : spec.s;
        const double x = spec.var == "x" ? v : spec.x;
        out << v;
        for (int i = 1; i <= solver.n(); ++i) out << "," << solver.value(t, x, s, i);
        out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal investment for an insurer with Erlang(n) interclaim times "
                 "under a CEV risky asset"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;

    auto* verify = app.add_subcommand("verify", "check model assumptions and the "
                                                "verification-theorem conditions");
    verify->add_option("--config", config_path)->required();

    auto* solve = app.add_subcommand("solve", "emit the psi grid as CSV");
    int grid_points = 2000;
    solve->add_option("--config", config_path)->required();
    solve->add_option("--grid", grid_points, "grid point count");
    solve->add_option("--out", out_path)->required();

    auto* value = app.add_subcommand("value", "value function at one state");
    double opt_t = 0.0, opt_x = 0.0, opt_s = 1.0;
    value->add_option("--config", config_path)->required();
    value->add_option("-t,--t", opt_t)->required();
    value->add_option("-x,--x", opt_x)->required();
    value->add_option("-s,--s", opt_s)->required();

    auto* strategy = app.add_subcommand("strategy", "optimal investment amount");
    strategy->add_option("--config", config_path)->required();
    strategy->add_option("-t,--t", opt_t)->required();
    strategy->add_option("-s,--s", opt_s)->required();

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo utility estimate");
    std::string selector = "astar";
    std::size_t n_paths = 10000;
    double dt = 1e-3;
    std::uint64_t seed = 1;
    int phase = 1;
    simulate->add_option("--config", config_path)->required();
    simulate->add_option("--strategy", selector, "astar | zero | scale:F");
    simulate->add_option("--paths", n_paths);
    simulate->add_option("--dt", dt);
    simulate->add_option("--seed", seed);
    simulate->add_option("--t0", opt_t);
    simulate->add_option("--x0", opt_x);
    simulate->add_option("--s0", opt_s);
    simulate->add_option("--phase", phase);
    simulate->add_option("--out", out_path);

    auto* sweep = app.add_subcommand("sweep", "emit a parameter sweep as CSV");
    SweepSpec spec;
    sweep->add_option("--config", config_path)->required();
    sweep->add_option("--quantity", spec.quantity, "value | strategy");
    sweep->add_option("--var", spec.var, "t | s | x");
    sweep->add_option("--from", spec.from)->required();
    sweep->add_option("--to", spec.to)->required();
    sweep->add_option("--points", spec.points);
    sweep->add_option("--t", spec.t);
    sweep->add_option("--s", spec.s);
    sweep->add_option("--x", spec.x);
    sweep->add_flag("--surface", spec.surface, "strategy (t, s) lattice");
    sweep->add_option("--out", out_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(config_path);
        if (solve->parsed()) return cmd_solve(config_path, grid_points, out_path);
        if (value->parsed()) return cmd_value(config_path, opt_t, opt_x, opt_s);
        if (strategy->parsed()) return cmd_strategy(config_path, opt_t, opt_s);
        if (simulate->parsed())
            return cmd_simulate(config_path, selector, n_paths, dt, seed, opt_t, opt_x,
                                opt_s, phase, out_path);
        if (sweep->parsed()) return cmd_sweep(config_path, spec, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
