#include "erlangcev/ode_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace erlangcev::ode_oracle {

namespace {

Eigen::VectorXd rk4_step(const LinearSystem& system, double t, const Eigen::VectorXd& y,
                         double h) {
    // h is signed; backward integration uses h < 0
    const Eigen::VectorXd k1 = system.matrix(t) * y;
    const Eigen::VectorXd k2 = system.matrix(t + h / 2) * (y + h / 2 * k1);
    const Eigen::VectorXd k3 = system.matrix(t + h / 2) * (y + h / 2 * k2);
    const Eigen::VectorXd k4 = system.matrix(t + h) * (y + h * k3);
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Eigen::VectorXd sweep(const LinearSystem& system, double t_from, double t_to,
                      const Eigen::VectorXd& start, double step) {
    const double span = t_from - t_to;
    if (span <= 0) return start;
    const auto full = static_cast<long>(span / step);
    Eigen::VectorXd y = start;
    double t = t_from;
    for (long k = 0; k < full; ++k) {
        y = rk4_step(system, t, y, -step);
        t -= step;
    }
    const double rest = t - t_to;
    if (rest > 1e-14 * std::max(1.0, std::abs(t_from))) y = rk4_step(system, t, y, -rest);
    return y;
}

}  // namespace

Eigen::VectorXd integrate_backward(const LinearSystem& system, double t_target,
                                   double step) {
    if (step <= 0) throw std::invalid_argument("step must be positive");
    if (t_target > system.horizon) throw std::invalid_argument("target beyond horizon");
    return sweep(system, system.horizon, t_target, system.terminal, step);
}

std::vector<Eigen::VectorXd> integrate_backward_grid(const LinearSystem& system,
                                                     const std::vector<double>& times,
                                                     int substeps) {
    if (substeps < 1) throw std::invalid_argument("need at least one substep");
    std::vector<Eigen::VectorXd> out(times.size());
    Eigen::VectorXd y = system.terminal;
    double t = system.horizon;
    for (std::size_t idx = times.size(); idx-- > 0;) {
        const double target = times[idx];
        const double span = t - target;
        if (span > 0) {
            const double h = span / substeps;
            for (int k = 0; k < substeps; ++k) y = rk4_step(system, t - k * h, y, -h);
        }
        t = target;
        out[idx] = y;
    }
    return out;
}

OrderEstimate convergence_order(const LinearSystem& system, double t_target,
                                const std::vector<double>& steps) {
    if (steps.size() < 3) throw std::invalid_argument("need at least three step sizes");
    double finest = steps[0];
    for (double s : steps) finest = std::min(finest, s);
    const Eigen::VectorXd reference = integrate_backward(system, t_target, finest);
    const double scale = std::max(reference.norm(), 1e-300);

    std::vector<double> log_h, log_e;
    for (double s : steps) {
        if (s == finest) continue;
        const double err =
            (integrate_backward(system, t_target, s) - reference).norm() / scale;
        if (err > 1e-15) {
            log_h.push_back(std::log(s));
            log_e.push_back(std::log(err));
        }
    }
    if (log_h.size() < 2) return {0.0, true};

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(log_h.size());
    for (std::size_t i = 0; i < log_h.size(); ++i) {
        sx += log_h[i];
        sy += log_e[i];
        sxx += log_h[i] * log_h[i];
        sxy += log_h[i] * log_e[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, false};
}

}  // namespace erlangcev::ode_oracle
