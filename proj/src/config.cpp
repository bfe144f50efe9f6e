#include "erlangcev/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace erlangcev {

namespace {

ClaimDistribution parse_claim(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const auto& p = j.at("params");
    if (kind == "exponential") return ExponentialClaim{p.at("kappa").get<double>()};
    if (kind == "uniform")
        return UniformClaim{p.at("a").get<double>(), p.at("b").get<double>()};
    if (kind == "deterministic") return DeterministicClaim{p.at("y").get<double>()};
    if (kind == "table")
        return TableClaim{p.at("y").get<std::vector<double>>(),
                          p.at("pdf").get<std::vector<double>>()};
    throw std::invalid_argument("unknown claim kind: " + kind);
}

}  // namespace

ProblemConfig parse_config(const std::string& json_text) {
    const nlohmann::json j = nlohmann::json::parse(json_text);
    ProblemConfig config;
    config.params.mu = j.at("mu").get<double>();
    config.params.r = j.at("r").get<double>();
    config.params.sigma = j.at("sigma").get<double>();
    config.params.beta = j.at("beta").get<double>();
    config.params.c = j.at("c").get<double>();
    config.params.m = j.at("m").get<double>();
    config.params.T = j.at("T").get<double>();
    config.phases.lambdas = j.at("lambdas").get<std::vector<double>>();
    config.claim = parse_claim(j.at("claim"));
    return config;
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace erlangcev
