#include "erlangcev/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

namespace erlangcev {

namespace {

constexpr double kPriceFloor = 1e-12;
constexpr double kQuantile99 = 2.5758293035489004;  // two-sided 99%

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t path_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 1));
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double sample_claim(const ClaimDistribution& dist, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return std::visit(
        Overloaded{[&](const ExponentialClaim& e) {
                       return -std::log1p(-unif(rng)) / e.kappa;
                   },
                   [&](const UniformClaim& u) { return u.a + (u.b - u.a) * unif(rng); },
                   [&](const DeterministicClaim& d) { return d.y; },
                   [&](const TableClaim& tbl) {
                       // inverse of the trapezoid CDF of the tabulated density
                       const std::size_t m = tbl.y.size();
                       std::vector<double> cdf(m, 0.0);
                       for (std::size_t i = 1; i < m; ++i)
                           cdf[i] = cdf[i - 1] + (tbl.y[i] - tbl.y[i - 1]) *
                                                     (tbl.pdf[i] + tbl.pdf[i - 1]) / 2.0;
                       const double u = unif(rng) * cdf.back();
                       const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
                       const auto i = std::max<std::size_t>(1, it - cdf.begin());
                       const double seg = cdf[i] - cdf[i - 1];
                       const double w = seg > 0 ? (u - cdf[i - 1]) / seg : 0.0;
                       return tbl.y[i - 1] + w * (tbl.y[i] - tbl.y[i - 1]);
                   }},
        dist);
}

// One path advanced for all strategies at once on shared randomness:
// the price, Brownian increments, jump times and claims do not depend
// on the control, so the draw sequence is strategy-independent.
struct MultiOutcome {
    std::vector<double> terminal_wealth;
    PathState terminal;
};

MultiOutcome run_path(const ModelParams& params, const PhaseIntensities& phases,
                      const ClaimDistribution& dist,
                      const std::vector<Strategy>& strategies, const PathState& initial,
                      double dt, std::mt19937_64& rng) {
    const double T = params.T;
    const auto k = strategies.size();
    std::vector<double> wealth(k, initial.x);
    double price = initial.s;
    double t = initial.t;
    int phase = initial.phase;

    std::exponential_distribution<double> unit_exp(1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    double next_jump = t + unit_exp(rng) / phases.lambdas[phase - 1];
    long grid_index = 0;

    while (t < T - 1e-15) {
        const double grid_next = std::min(initial.t + (grid_index + 1) * dt, T);
        const bool jump = next_jump < grid_next;
        const double t_end = jump ? next_jump : grid_next;
        const double dtau = t_end - t;
        if (dtau > 0) {
            const double dw = normal(rng) * std::sqrt(dtau);
            const double s_pos = std::max(price, 0.0);
            const double s_beta = std::pow(s_pos, params.beta);  // full truncation
            for (std::size_t j = 0; j < k; ++j) {
                const double a = strategies[j].invest(t, wealth[j], price, phase);
                wealth[j] += (params.r * wealth[j] + (params.mu - params.r) * a + params.c) * dtau +
                             params.sigma * s_beta * a * dw;
            }
            price += price * params.mu * dtau + params.sigma * s_beta * s_pos * dw;
            if (price < kPriceFloor) price = kPriceFloor;
        }
        t = t_end;
        if (jump) {
            if (phase == phases.n()) {
                const double y = sample_claim(dist, rng);
                for (double& x : wealth) x -= y;
                phase = 1;
            } else {
                ++phase;
            }
            next_jump = t + unit_exp(rng) / phases.lambdas[phase - 1];
        } else {
            ++grid_index;
        }
    }
    return {std::move(wealth), {T, 0.0, price, phase}};
}

void parallel_paths(std::size_t n_paths, const std::function<void(std::size_t)>& body) {
    const unsigned workers =
        std::max(1u, std::min(std::thread::hardware_concurrency(),
                              static_cast<unsigned>(n_paths)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n_paths; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n_paths; i += workers) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

std::pair<double, double> mean_and_se(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double se = xs.size() > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
    return {mean, se};
}

}  // namespace

PathOutcome simulate_path(const ModelParams& params, const PhaseIntensities& phases,
                          const ClaimDistribution& dist, const Strategy& strategy,
                          const PathState& initial, double dt, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto outcome = run_path(params, phases, dist, {strategy}, initial, dt, rng);
    PathState terminal = outcome.terminal;
    terminal.x = outcome.terminal_wealth[0];
    const double utility = -std::exp(-params.m * terminal.x) / params.m;
    return {terminal, utility};
}

std::vector<std::vector<double>> common_utilities(const ModelParams& params,
                                                  const PhaseIntensities& phases,
                                                  const ClaimDistribution& dist,
                                                  const std::vector<Strategy>& strategies,
                                                  const PathState& initial, double dt,
                                                  std::size_t n_paths, std::uint64_t seed) {
    std::vector<std::vector<double>> utilities(strategies.size(),
                                               std::vector<double>(n_paths));
    parallel_paths(n_paths, [&](std::size_t i) {
        std::mt19937_64 rng(path_seed(seed, i));
        const auto outcome = run_path(params, phases, dist, strategies, initial, dt, rng);
        for (std::size_t j = 0; j < strategies.size(); ++j)
            utilities[j][i] = -std::exp(-params.m * outcome.terminal_wealth[j]) / params.m;
    });
    return utilities;
}

SimulationResult estimate_utility(const ModelParams& params, const PhaseIntensities& phases,
                                  const ClaimDistribution& dist, const Strategy& strategy,
                                  const PathState& initial, double dt, std::size_t n_paths,
                                  std::uint64_t seed) {
    if (n_paths < 2) throw std::invalid_argument("need at least two paths");
    auto utilities =
        common_utilities(params, phases, dist, {strategy}, initial, dt, n_paths, seed);
    SimulationResult result;
    result.utilities = std::move(utilities[0]);
    const auto [mean, se] = mean_and_se(result.utilities);
    result.mean = mean;
    result.std_error = se;
    result.ci_low = mean - kQuantile99 * se;
    result.ci_high = mean + kQuantile99 * se;
    result.n_paths = n_paths;
    result.dt = dt;
    result.seed = seed;
    return result;
}

StrategyComparison compare_strategies(const ModelParams& params,
                                      const PhaseIntensities& phases,
                                      const ClaimDistribution& dist,
                                      const std::vector<Strategy>& strategies,
                                      const PathState& initial, double dt,
                                      std::size_t n_paths, std::uint64_t seed) {
    if (strategies.empty()) throw std::invalid_argument("need at least one strategy");
    const auto utilities =
        common_utilities(params, phases, dist, strategies, initial, dt, n_paths, seed);
    StrategyComparison comparison;
    for (std::size_t j = 0; j < strategies.size(); ++j) {
        const auto [mean, se] = mean_and_se(utilities[j]);
        comparison.rows.push_back({strategies[j].label, mean, se, 0});
    }
    std::vector<std::size_t> order(comparison.rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return comparison.rows[a].mean > comparison.rows[b].mean;
    });
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        comparison.rows[order[pos]].rank = static_cast<int>(pos) + 1;
    return comparison;
}

std::vector<double> sample_interclaim_times(const PhaseIntensities& phases,
                                            std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> unit_exp(1.0);
    std::vector<double> times(count);
    for (auto& t : times) {
        double total = 0.0;
        for (double lambda : phases.lambdas) total += unit_exp(rng) / lambda;
        t = total;
    }
    return times;
}

double generalized_erlang_cdf(const PhaseIntensities& phases, double t) {
    if (t <= 0) return 0.0;
    const auto& l = phases.lambdas;
    const auto n = l.size();
    if (n == 1) return -std::expm1(-l[0] * t);
    double tail = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double coeff = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double diff = l[j] - l[i];
            if (std::abs(diff) < 1e-12 * std::max(l[j], l[i]))
                throw std::invalid_argument("generalized Erlang CDF needs distinct rates");
            coeff *= l[j] / diff;
        }
        tail += coeff * std::exp(-l[i] * t);
    }
    return 1.0 - tail;
}

}  // namespace erlangcev
