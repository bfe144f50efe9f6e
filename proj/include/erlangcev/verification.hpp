#pragma once

#include "erlangcev/model.hpp"

namespace erlangcev {

/// Outcome of the verification-theorem conditions. gamma_value is the
/// Gamma constant in the zero-rate case and iota in the nonzero-rate
/// case; both are compared against mu^2/(2 sigma^2). Condition 2 uses
/// the horizon bound T < arccot(-gamma1/gamma2)/gamma2 with arccot
/// ranging in (0, pi). For beta = 0 the bound is undefined and
/// condition 2 is reported as inapplicable.
struct ConditionReport {
    double gamma_value;
    double threshold;  // mu^2 / (2 sigma^2)
    bool condition1;   // gamma_value <= threshold (equality counts)
    double gamma1;     // mu * beta
    bool condition2_applicable;
    double gamma2;        // 0 when inapplicable
    double arccot_bound;  // 0 when inapplicable
    bool condition2;

    bool any() const { return condition1 || condition2; }
};

/// arccot with range (0, pi): negative arguments map to (pi/2, pi).
double arccot(double x);

/// Shared evaluation of both theorems' conditions given the relevant
/// Gamma/iota constant.
ConditionReport evaluate_conditions(const ModelParams& params, double gamma_value);

}  // namespace erlangcev
