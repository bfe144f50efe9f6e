#include "erlangcev/verification.hpp"

#include <cmath>
#include <numbers>

namespace erlangcev {

double arccot(double x) { return std::numbers::pi / 2.0 - std::atan(x); }

ConditionReport evaluate_conditions(const ModelParams& params, double gamma_value) {
    ConditionReport report{};
    report.gamma_value = gamma_value;
    report.threshold = params.mu * params.mu / (2.0 * params.sigma * params.sigma);
    report.condition1 = gamma_value <= report.threshold;
    report.gamma1 = params.mu * params.beta;

    // radicand = 4 beta^2 (2 sigma^2 gamma - mu^2); positive exactly when
    // gamma exceeds the threshold and beta > 0.
    const double radicand = -4.0 * params.mu * params.mu * params.beta * params.beta +
                            8.0 * params.beta * params.beta * params.sigma * params.sigma *
                                gamma_value;
    report.condition2_applicable = params.beta > 0 && radicand > 0;
    if (report.condition2_applicable) {
        report.gamma2 = std::sqrt(radicand) / 2.0;
        report.arccot_bound = arccot(-report.gamma1 / report.gamma2) / report.gamma2;
        report.condition2 = params.T < report.arccot_bound;
    }
    return report;
}

}  // namespace erlangcev
