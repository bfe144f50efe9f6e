#include "erlangcev/nonzero_rate.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace erlangcev::nonzero_rate {

namespace {

constexpr double kBetaLimit = 1e-8;     // below this, analytic beta->0 limits
constexpr double kPicardTol = 1e-12;    // sup-norm stop
constexpr int kPicardCap = 200;

// integral_{t_j}^{t_K} e^{-lambda (s - t_j)} w(s) ds on local nodes j..K:
// composite Simpson, with one trapezoid panel when an odd interval is
// left over. decay[d] = e^{-lambda d h}.
double tail_integral(const std::vector<double>& w, const std::vector<double>& decay,
                     int j, int last, double h) {
    const int intervals = last - j;
    if (intervals <= 0) return 0.0;
    auto f = [&](int idx) { return decay[idx - j] * w[idx]; };
    double total = 0.0;
    const int pairs = intervals / 2;
    for (int p = 0; p < pairs; ++p) {
        const int idx = j + 2 * p;
        total += h / 3.0 * (f(idx) + 4.0 * f(idx + 1) + f(idx + 2));
    }
    if (intervals % 2 == 1) total += h / 2.0 * (f(last - 1) + f(last));
    return total;
}

}  // namespace

double integrating_factor(const ModelParams& params, double t) {
    if (params.r <= 0) throw std::invalid_argument("nonzero-rate factor requires r > 0");
    const double r = params.r;
    const double premium =
        params.c * params.m / r * std::exp(r * params.T) * (-std::expm1(-r * t));
    if (params.beta < kBetaLimit) return premium;  // remaining terms cancel as beta -> 0
    const double excess = (params.mu - r) * (params.mu - r);
    const double coeff = (2.0 * params.beta + 1.0) * excess;
    const double linear = coeff * t / (4.0 * r);
    const double elastic = coeff / (8.0 * params.beta * r * r) *
                           std::exp(-2.0 * params.beta * r * params.T) *
                           (-std::expm1(2.0 * params.beta * r * t));
    return premium + linear + elastic;
}

double strategy(const ModelParams& params, double t, double s) {
    if (s <= 0) throw std::invalid_argument("price must be positive");
    if (params.r <= 0) throw std::invalid_argument("nonzero-rate strategy requires r > 0");
    const double excess = params.mu - params.r;
    // (1 - e^{2 b r (t-T)}) = -expm1(2 b r (t-T)), accurate for small r
    const double bracket = -std::expm1(2.0 * params.beta * params.r * (t - params.T));
    const double numerator = excess + bracket * excess * excess / (2.0 * params.r);
    return numerator / (params.sigma * params.sigma * std::pow(s, 2.0 * params.beta) *
                        params.m * std::exp(params.r * (params.T - t)));
}

ConditionReport verify_conditions(const ModelParams& params) {
    const double excess = params.mu - params.r;
    const double iota = 4.0 * excess * excess / (params.sigma * params.sigma);
    return evaluate_conditions(params, iota);
}

Solution::Solution(ModelParams params, PhaseIntensities phases, ClaimDistribution dist,
                   double grid_step)
    : params_(params), phases_(std::move(phases)), dist_(std::move(dist)) {
    if (params_.r <= 0) throw std::invalid_argument("Picard solver requires r > 0");
    if (phases_.n() < 1) throw std::invalid_argument("need at least one phase");
    if (grid_step <= 0) grid_step = params_.T / 2000.0;

    // z is nonincreasing in t, so its sup over [0, T] sits at t = 0.
    const double zbar = z_of_t(dist_, params_, 0.0);
    const double lbar = phases_.max_lambda();
    const int subintervals =
        std::max<int>(1, static_cast<int>(std::ceil(params_.T * 2.0 * zbar * lbar)));
    const int per = std::max<int>(2, static_cast<int>(std::llround(
                                         params_.T / subintervals / grid_step)));
    const int nodes = subintervals * per;
    step_ = params_.T / nodes;
    grid_.resize(nodes + 1);
    for (int j = 0; j <= nodes; ++j) grid_[j] = step_ * j;
    grid_.back() = params_.T;

    z_.resize(nodes + 1);
    for (int j = 0; j <= nodes; ++j) z_[j] = z_of_t(dist_, params_, grid_[j]);

    report_.subinterval_count = subintervals;
    report_.delta = params_.T / subintervals;
    report_.zbar = zbar;
    report_.lambdabar = lbar;

    phi_.assign(phases_.n(), std::vector<double>(nodes + 1, 0.0));
    solve_grid();
}

void Solution::solve_grid() {
    const int n = phases_.n();
    const int nodes = static_cast<int>(grid_.size()) - 1;
    const int sub_count = report_.subinterval_count;
    const int per = nodes / sub_count;

    const double phi_terminal = std::exp(-integrating_factor(params_, params_.T));
    for (int i = 0; i < n; ++i) phi_[i][nodes] = phi_terminal;

    // e^{-lambda_i d h} for local node distances d = 0..per
    std::vector<std::vector<double>> decay(n, std::vector<double>(per + 1));
    for (int i = 0; i < n; ++i)
        for (int d = 0; d <= per; ++d)
            decay[i][d] = std::exp(-phases_.lambdas[i] * d * step_);

    std::vector<double> guess(per + 1), weighted(per + 1);
    std::vector<std::vector<double>> local(n, std::vector<double>(per + 1));

    // backward over subintervals; the right boundary of each is the left
    // boundary of the previously solved one
    for (int k = 1; k <= sub_count; ++k) {
        const int right = nodes - (k - 1) * per;
        const int left = right - per;

        std::fill(guess.begin(), guess.end(), phi_[0][right]);
        SubintervalStats stats{0, 0.0, 0.0};
        double prev_delta = -1.0;
        bool converged = false;

        for (int iter = 1; iter <= kPicardCap; ++iter) {
            // last equation carries z and the current guess for phi_1
            for (int l = 0; l <= per; ++l) weighted[l] = z_[left + l] * guess[l];
            for (int l = 0; l <= per; ++l)
                local[n - 1][l] =
                    decay[n - 1][per - l] * phi_[n - 1][right] +
                    phases_.lambdas[n - 1] *
                        tail_integral(weighted, decay[n - 1], l, per, step_);
            for (int i = n - 2; i >= 0; --i)
                for (int l = 0; l <= per; ++l)
                    local[i][l] =
                        decay[i][per - l] * phi_[i][right] +
                        phases_.lambdas[i] *
                            tail_integral(local[i + 1], decay[i], l, per, step_);

            double delta = 0.0;
            for (int l = 0; l <= per; ++l)
                delta = std::max(delta, std::abs(local[0][l] - guess[l]));
            if (prev_delta > 10.0 * kPicardTol)  // above round-off noise
                stats.max_ratio = std::max(stats.max_ratio, delta / prev_delta);
            guess = local[0];
            stats.iterations = iter;
            stats.final_delta = delta;
            if (delta < kPicardTol) {
                converged = true;
                break;
            }
            prev_delta = delta;
        }
        if (!converged)
            throw NoConvergence("Picard iteration cap reached; check grid step and delta");

        for (int i = 0; i < n; ++i)
            for (int l = 0; l <= per; ++l) phi_[i][left + l] = local[i][l];
        report_.subintervals.push_back(stats);
    }
}

double Solution::phi_node(std::size_t node, int phase) const {
    return phi_[phase - 1][node];
}

double Solution::phi_derivative(std::size_t node, int phase) const {
    const int i = phase - 1;
    const int n = phases_.n();
    const double lam = phases_.lambdas[i];
    const double next =
        (i + 1 < n) ? phi_[i + 1][node] : z_[node] * phi_[0][node];
    return lam * phi_[i][node] - lam * next;
}

double Solution::phi(double t, int phase) const {
    if (phase < 1 || phase > phases_.n()) throw std::invalid_argument("phase out of range");
    const double T = params_.T;
    if (t < -1e-9 || t > T + 1e-9) throw std::invalid_argument("time out of [0, T]");
    t = std::clamp(t, 0.0, T);
    const auto nodes = grid_.size() - 1;
    auto j = std::min<std::size_t>(nodes - 1, static_cast<std::size_t>(t / step_));
    const double u = (t - grid_[j]) / step_;
    if (u == 0.0) return phi_[phase - 1][j];

    // cubic Hermite with ODE-consistent node derivatives
    const double p0 = phi_[phase - 1][j];
    const double p1 = phi_[phase - 1][j + 1];
    const double m0 = step_ * phi_derivative(j, phase);
    const double m1 = step_ * phi_derivative(j + 1, phase);
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * m0 +
           (-2 * u3 + 3 * u2) * p1 + (u3 - u2) * m1;
}

double Solution::psi(double t, int phase) const {
    return std::exp(integrating_factor(params_, t)) * phi(t, phase);
}

double Solution::value(double t, double x, double s, int phase) const {
    if (s <= 0) throw std::invalid_argument("price must be positive");
    const double r = params_.r;
    const double excess = params_.mu - r;
    const double s_pow = std::pow(s, -2.0 * params_.beta);
    double elastic;
    if (params_.beta < kBetaLimit) {
        elastic = -excess * excess * (params_.T - t) /
                  (2.0 * params_.sigma * params_.sigma) * s_pow;
    } else {
        // -[1 - e^{2br(t-T)}] / (4 sigma^2 b r) = expm1(2br(t-T)) / (4 sigma^2 b r)
        elastic = excess * excess *
                  std::expm1(2.0 * params_.beta * r * (t - params_.T)) /
                  (4.0 * params_.sigma * params_.sigma * params_.beta * r) * s_pow;
    }
    const double exponent = -params_.m * x * std::exp(r * (params_.T - t)) + elastic;
    return -std::exp(exponent) / params_.m * psi(t, phase);
}

Solution picard_solve(const ModelParams& params, const PhaseIntensities& phases,
                      const ClaimDistribution& dist, double grid_step) {
    return Solution(params, phases, dist, grid_step);
}

}  // namespace erlangcev::nonzero_rate
