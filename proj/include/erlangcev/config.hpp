#pragma once

#include <string>

#include "erlangcev/model.hpp"

namespace erlangcev {

struct ProblemConfig {
    ModelParams params;
    ClaimDistribution claim;
    PhaseIntensities phases;
};

/// Parses a JSON document with keys mu, r, sigma, beta, c, m, T,
/// lambdas and claim.{kind, params}. Claim kinds: "exponential"
/// {kappa}, "uniform" {a, b}, "deterministic" {y}, "table" {y, pdf}.
ProblemConfig parse_config(const std::string& json_text);

/// Reads and parses a config file.
ProblemConfig load_config(const std::string& path);

}  // namespace erlangcev
