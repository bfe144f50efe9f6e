// Acceptance suite: one pass/fail line per criterion, exit 0 only if all pass.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "erlangcev/model.hpp"
#include "erlangcev/nonzero_rate.hpp"
#include "erlangcev/ode_oracle.hpp"
#include "erlangcev/phase_system.hpp"
#include "erlangcev/simulator.hpp"
#include "erlangcev/zero_rate.hpp"

using namespace erlangcev;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& label, bool passed,
            const std::string& detail) {
    std::cout << (passed ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": "
              << label;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!passed) ++g_failures;
}

ModelParams reference_params(double r) { return {0.2, r, 0.3, 1.0, 2.5, 1.0, 2.0}; }

const PhaseIntensities kPhases{{0.5, 2.0}};
const ClaimDistribution kUniform = UniformClaim{0.0, 1.0};
const ClaimDistribution kExponential = ExponentialClaim{2.0};

std::vector<PhaseIntensities> phase_cases() {
    return {PhaseIntensities{{0.8}}, PhaseIntensities{{0.5, 2.0}},
            PhaseIntensities{{0.5, 2.0, 1.0}}};
}

std::filesystem::path scratch_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "erlangcev-acceptance";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string write_config(const std::string& name, double r, const std::string& claim_kind) {
    std::ostringstream body;
    body << "{\"mu\": 0.2, \"r\": " << r
         << ", \"sigma\": 0.3, \"beta\": 1.0, \"c\": 2.5, \"m\": 1.0, \"T\": 2.0, "
            "\"lambdas\": [0.5, 2.0], \"claim\": ";
    if (claim_kind == "uniform")
        body << "{\"kind\": \"uniform\", \"params\": {\"a\": 0.0, \"b\": 1.0}}";
    else
        body << "{\"kind\": \"exponential\", \"params\": {\"kappa\": 2.0}}";
    body << "}";
    const auto path = scratch_dir() / name;
    std::ofstream out(path);
    out << body.str();
    return path.string();
}

struct CliResult {
    int exit_code;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string command = std::string(ERLANGCEV_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string output;
    char buffer[4096];
    while (std::size_t got = std::fread(buffer, 1, sizeof buffer, pipe))
        output.append(buffer, got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

bool parse_metric(const std::string& text, const std::string& key, double& out) {
    const auto pos = text.find(key);
    if (pos == std::string::npos) return false;
    out = std::stod(text.substr(pos + key.size()));
    return true;
}

bool contains(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

std::vector<std::vector<double>> read_csv(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) row.push_back(std::stod(field));
        if (!row.empty()) rows.push_back(row);
    }
    return rows;
}

ode_oracle::LinearSystem oracle_system_zero(const ModelParams& params,
                                            const PhaseIntensities& phases, double zeta) {
    const double terminal = std::exp(-zero_rate::integrating_factor(params, params.T));
    const Eigen::MatrixXd q = build_q_hat(phases, zeta);
    return {phases.n(), [q](double) { return q; }, params.T,
            Eigen::VectorXd::Constant(phases.n(), terminal)};
}

ode_oracle::LinearSystem oracle_system_nonzero(const ModelParams& params,
                                               const PhaseIntensities& phases,
                                               const ClaimDistribution& dist) {
    const double terminal = std::exp(-nonzero_rate::integrating_factor(params, params.T));
    return {phases.n(),
            [=](double t) { return build_q_t(phases, z_of_t(dist, params, t)); },
            params.T, Eigen::VectorXd::Constant(phases.n(), terminal)};
}

void criterion1() {
    double worst = 0.0;
    for (const auto& dist : {kUniform, kExponential}) {
        const zero_rate::Solution zero(reference_params(0.0), dist, kPhases);
        const auto nonzero =
            nonzero_rate::picard_solve(reference_params(0.18), kPhases, dist);
        for (int i = 1; i <= 2; ++i) {
            worst = std::max(worst, std::abs(zero.psi(2.0, i) - 1.0));
            worst = std::max(worst, std::abs(nonzero.psi(2.0, i) - 1.0));
        }
    }
    std::ostringstream detail;
    detail << "max |psi(T) - 1| = " << worst;
    report(1, "boundary exactness psi(T) = 1", worst <= 1e-12, detail.str());
}

void criterion2() {
    double min_phi = 1.0;
    for (const auto& dist : {kUniform, kExponential}) {
        const zero_rate::Solution zero(reference_params(0.0), dist, kPhases);
        const auto nonzero =
            nonzero_rate::picard_solve(reference_params(0.18), kPhases, dist);
        for (int k = 0; k <= 199; ++k) {
            const double t = 2.0 * k / 199.0;
            min_phi = std::min(min_phi, zero.phi(t).minCoeff());
            for (int i = 1; i <= 2; ++i) min_phi = std::min(min_phi, nonzero.phi(t, i));
        }
    }
    std::ostringstream detail;
    detail << "min phi over 200-node grids = " << min_phi;
    report(2, "phi positivity", min_phi >= -1e-12, detail.str());
}

void criterion3() {
    double worst_zero = 0.0, worst_nonzero = 0.0;
    const std::vector<double> probes = {0.0, 0.31, 1.0, 1.73, 1.97};
    for (const auto& phases : phase_cases()) {
        for (const auto& dist : {kUniform, kExponential}) {
            const ModelParams p0 = reference_params(0.0);
            const zero_rate::Solution zero(p0, dist, phases);
            const auto sys0 = oracle_system_zero(p0, phases, zero.zeta());
            const ModelParams p1 = reference_params(0.18);
            const auto nonzero = nonzero_rate::picard_solve(p1, phases, dist);
            const auto sys1 = oracle_system_nonzero(p1, phases, dist);
            for (double t : probes) {
                const auto want0 = ode_oracle::integrate_backward(sys0, t, 1e-4);
                const auto phi0 = zero.phi(t);
                worst_zero = std::max(worst_zero,
                                      (phi0 - want0).cwiseAbs().maxCoeff() /
                                          want0.cwiseAbs().maxCoeff());
                const auto want1 = ode_oracle::integrate_backward(sys1, t, 1e-4);
                for (int i = 1; i <= phases.n(); ++i)
                    worst_nonzero = std::max(worst_nonzero,
                                             std::abs(nonzero.phi(t, i) - want1(i - 1)) /
                                                 want1.cwiseAbs().maxCoeff());
            }
        }
    }
    std::ostringstream detail;
    detail << "max rel err: matrix-exp " << worst_zero << ", picard " << worst_nonzero;
    report(3, "oracle equivalence for n in {1,2,3}",
           worst_zero <= 1e-8 && worst_nonzero <= 1e-6, detail.str());
}

void criterion4() {
    const auto cfg_r = write_config("verify_r.json", 0.18, "uniform");
    const auto cfg_0 = write_config("verify_0.json", 0.0, "uniform");
    const auto res_r = run_cli("verify --config " + cfg_r);
    const auto res_0 = run_cli("verify --config " + cfg_0);

    double iota = 0, threshold = 0, bound = 0;
    bool ok = res_r.exit_code == 0 && res_0.exit_code == 0;
    ok = ok && parse_metric(res_r.output, "iota = ", iota) &&
         parse_metric(res_r.output, "threshold = ", threshold) &&
         parse_metric(res_0.output, "arccot_bound = ", bound);
    ok = ok && std::abs(iota - 0.0177778) <= 1e-3 &&
         std::abs(threshold - 0.2222222) <= 1e-3 &&
         contains(res_r.output, "condition1 = holds");
    ok = ok && std::abs(bound - 2.0508) <= 1e-3 && bound > 2.0 &&
         contains(res_0.output, "condition2 = holds");
    std::ostringstream detail;
    detail << "iota = " << iota << ", threshold = " << threshold
           << ", arccot bound = " << bound;
    report(4, "verification conditions via the CLI", ok, detail.str());
}

void criterion5() {
    ModelParams near = reference_params(1e-6);
    ModelParams zero = reference_params(0.0);
    double worst_rel = 0.0;
    for (int jt = 0; jt < 5; ++jt) {
        for (int js = 0; js < 4; ++js) {
            const double t = 2.0 * jt / 4.0;
            const double s = 0.5 + js;
            const double a = nonzero_rate::strategy(near, t, s);
            const double a0 = zero_rate::strategy(zero, t, s);
            worst_rel = std::max(worst_rel, std::abs(a - a0) / std::abs(a0));
        }
    }
    const double a_ref = zero_rate::strategy(zero, 1.0, 1.0);
    const double frozen_err = std::abs(a_ref - 0.24 / 0.09);
    std::ostringstream detail;
    detail << "lattice rel err = " << worst_rel << ", |a*(1,1) - 0.24/0.09| = "
           << frozen_err;
    report(5, "strategy limits", worst_rel <= 1e-4 && frozen_err <= 1e-12, detail.str());
}

void criterion6() {
    bool ok = true;
    double worst_margin = 0.0;
    for (const auto& phases : phase_cases()) {
        for (const auto& dist : {kUniform, kExponential}) {
            const auto solution =
                nonzero_rate::picard_solve(reference_params(0.18), phases, dist);
            const double bound = std::pow(0.6, phases.n());
            for (const auto& sub : solution.report().subintervals) {
                ok = ok && sub.max_ratio <= bound;
                worst_margin = std::max(worst_margin, sub.max_ratio / bound);
            }
        }
    }
    std::ostringstream detail;
    detail << "worst ratio / 0.6^n = " << worst_margin;
    report(6, "Picard contraction", ok, detail.str());
}

void criterion7() {
    bool ok = true;
    std::ostringstream detail;
    int run = 0;
    for (double r : {0.18, 0.0}) {
        const ModelParams params = reference_params(r);
        for (const auto& dist : {kUniform, kExponential}) {
            std::optional<zero_rate::Solution> zero;
            std::optional<nonzero_rate::Solution> nonzero;
            if (r == 0.0)
                zero.emplace(params, dist, kPhases);
            else
                nonzero.emplace(nonzero_rate::picard_solve(params, kPhases, dist));
            const Strategy astar{
                "astar", [&params, r](double t, double, double s, int) {
                    return r == 0.0 ? zero_rate::strategy(params, t, s)
                                    : nonzero_rate::strategy(params, t, s);
                }};
            for (int phase = 1; phase <= 2; ++phase) {
                const double analytic = zero ? zero->value(0.0, 2.0, 1.0, phase)
                                             : nonzero->value(0.0, 2.0, 1.0, phase);
                const auto result =
                    estimate_utility(params, kPhases, dist, astar, {0.0, 2.0, 1.0, phase},
                                     1e-3, 100000, 20240819 + run);
                const double gap = std::abs(result.mean - analytic);
                const bool within = gap <= 3.0 * result.std_error;
                ok = ok && within;
                if (!within)
                    detail << " run " << run << ": gap " << gap << " vs 3 SE "
                           << 3.0 * result.std_error << ";";
                ++run;
            }
        }
    }
    if (ok) detail << "8 runs, all |MC mean - V| <= 3 SE";
    report(7, "Monte Carlo consistency", ok, detail.str());
}

void criterion8() {
    const ModelParams params = reference_params(0.18);
    auto a_star = [&params](double t, double, double s, int) {
        return nonzero_rate::strategy(params, t, s);
    };
    std::vector<Strategy> strategies = {{"astar", a_star},
                                        {"zero", [](double, double, double, int) { return 0.0; }}};
    for (double factor : {0.5, 2.0}) {
        strategies.push_back({"scaled", [&params, factor](double t, double, double s, int) {
                                  return factor * nonzero_rate::strategy(params, t, s);
                              }});
    }
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> shift(-1.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const double offset = shift(rng);
        const double tilt = shift(rng);
        strategies.push_back(
            {"perturbed", [&params, offset, tilt](double t, double, double s, int) {
                 return nonzero_rate::strategy(params, t, s) + offset + tilt * t / 2.0;
             }});
    }

    const auto utilities = common_utilities(params, kPhases, kUniform, strategies,
                                            {0.0, 2.0, 1.0, 1}, 1e-3, 30000, 77);
    const auto& base = utilities[0];
    const std::size_t n = base.size();
    bool ok = true;
    double worst = 0.0;
    for (std::size_t s = 1; s < utilities.size(); ++s) {
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = base[j] - utilities[s][j];
            sum += d;
            sumsq += d * d;
        }
        const double mean = sum / n;
        const double se = std::sqrt((sumsq / n - mean * mean) / (n - 1));
        // a* beaten only if the paired difference is below -3 SE
        const double margin = se > 0.0 ? mean / se : 0.0;
        worst = std::min(worst, margin);
        ok = ok && mean >= -3.0 * se;
    }
    std::ostringstream detail;
    detail << "23 alternatives, worst paired mean/SE = " << worst;
    report(8, "optimality ranking under common random numbers", ok, detail.str());
}

bool strictly_monotone(const std::vector<std::vector<double>>& rows, int col,
                       bool decreasing) {
    for (std::size_t j = 1; j < rows.size(); ++j) {
        const double diff = rows[j][col] - rows[j - 1][col];
        if (decreasing ? diff >= 0.0 : diff <= 0.0) return false;
    }
    return true;
}

void criterion9() {
    const auto cfg_u = write_config("trend_uniform.json", 0.18, "uniform");
    const auto cfg_e = write_config("trend_exp.json", 0.18, "exponential");
    const auto dir = scratch_dir();
    bool ok = true;
    std::ostringstream detail;

    auto sweep = [&](const std::string& cfg, const std::string& args,
                     const std::string& file) {
        const auto out = (dir / file).string();
        const auto res = run_cli("sweep --config " + cfg + " " + args + " --out " + out);
        if (res.exit_code != 0) {
            ok = false;
            detail << " sweep failed: " << file << ";";
            return std::vector<std::vector<double>>{};
        }
        return read_csv(out);
    };

    const auto a_of_s =
        sweep(cfg_u, "--quantity strategy --var s --from 0.5 --to 3 --points 40 --t 1", "a_s.csv");
    if (!strictly_monotone(a_of_s, 1, true)) {
        ok = false;
        detail << " a* not strictly decreasing in s;";
    }
    const auto a_of_t =
        sweep(cfg_u, "--quantity strategy --var t --from 0 --to 2 --points 40 --s 1", "a_t.csv");
    if (!strictly_monotone(a_of_t, 1, false)) {
        ok = false;
        detail << " a* not increasing in t;";
    }
    const auto v_of_t =
        sweep(cfg_u, "--quantity value --var t --from 0 --to 2 --points 40 --s 1 --x 2", "v_t.csv");
    if (!strictly_monotone(v_of_t, 1, true) || !strictly_monotone(v_of_t, 2, true)) {
        ok = false;
        detail << " V not decreasing in t;";
    }
    // at t = T both phases equal the terminal utility, so compare with a
    // relative slack
    for (const auto& row : v_of_t)
        if (row[1] < row[2] - 1e-12 * std::abs(row[2])) {
            ok = false;
            detail << " V_1 < V_2 at t = " << row[0] << ";";
            break;
        }
    const auto v_of_s_u =
        sweep(cfg_u, "--quantity value --var s --from 0.5 --to 3 --points 40 --t 1 --x 2", "v_s_u.csv");
    if (!strictly_monotone(v_of_s_u, 1, true) || !strictly_monotone(v_of_s_u, 2, true)) {
        ok = false;
        detail << " V not decreasing in s;";
    }
    const auto v_of_s_e =
        sweep(cfg_e, "--quantity value --var s --from 0.5 --to 3 --points 40 --t 1 --x 2", "v_s_e.csv");
    if (v_of_s_e.size() != v_of_s_u.size()) {
        ok = false;
    } else {
        for (std::size_t j = 0; j < v_of_s_u.size(); ++j)
            for (int col : {1, 2})
                if (v_of_s_e[j][col] > v_of_s_u[j][col] + 1e-15) {
                    ok = false;
                    detail << " exponential V above uniform V at s = " << v_of_s_u[j][0]
                           << ";";
                    j = v_of_s_u.size() - 1;
                    break;
                }
    }
    if (ok) detail << "all figure trends reproduced";
    report(9, "trend reproduction via emitted sweeps", ok, detail.str());
}

void criterion10() {
    const std::size_t n = 10000;
    const auto samples = sample_interclaim_times(kPhases, n, 424242);
    auto sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = generalized_erlang_cdf(kPhases, sorted[i]);
        ks = std::max(ks, std::abs(f - double(i + 1) / n));
        ks = std::max(ks, std::abs(f - double(i) / n));
    }
    double sum = 0.0, sumsq = 0.0;
    for (double t : samples) {
        sum += t;
        sumsq += t * t;
    }
    const double mean = sum / n;
    const double sd = std::sqrt((sumsq - n * mean * mean) / (n - 1));
    const double se = sd / std::sqrt(double(n));
    const double crit = 1.628 / std::sqrt(double(n));
    const bool ok = ks < crit && std::abs(mean - 2.5) <= 3.0 * se;
    std::ostringstream detail;
    detail << "KS = " << ks << " (crit " << crit << "), mean = " << mean << " +- " << se;
    report(10, "generalized Erlang interclaim law", ok, detail.str());
}

}  // namespace

int main() {
    std::cout.precision(6);
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    if (g_failures == 0) {
        std::cout << "all criteria passed" << std::endl;
        return 0;
    }
    std::cout << g_failures << " criteria failed" << std::endl;
    return 1;
}
