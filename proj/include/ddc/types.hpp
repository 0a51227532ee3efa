#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace ddc {

// Thrown when an input fails schema/invariant validation (CLI exit 2).
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when a contract configuration has no analytic formula here and the
// caller should fall back to Monte Carlo (CLI exit 3).
struct unsupported_config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a quantity is analytically degenerate, e.g. a fair premium with
// a vanishing denominator (CLI exit 4).
struct degenerate_contract_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Models: log-price X_t is a spectrally negative Levy process.

// X_t = mu t + sigma B_t
struct LinearBrownian {
    double mu = 0.0;
    double sigma = 0.0;
};

// X_t = mu_hat t - sum_{i<=N_t} eta_i, eta_i ~ Exp(rho), N_t Poisson(beta).
// beta == 0 degenerates to a pure drift; the simulator accepts it, the scale
// functions do not.
struct CramerLundberg {
    double mu_hat = 0.0;
    double beta = 0.0;
    double rho = 0.0;
};

using ModelSpec = std::variant<LinearBrownian, CramerLundberg>;

void validate(const ModelSpec& model);
bool is_brownian(const ModelSpec& model);
double gaussian_sigma(const ModelSpec& model);  // sigma, 0 for CL

// ---------------------------------------------------------------------------
// Reward alpha(.) paid at the drawdown epoch, evaluated at D >= a.

struct ConstantReward {
    double alpha = 0.0;
};
struct LinearReward {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
};
struct ExponentialReward {
    double omega = 0.0;
    double kappa = 0.0;
};

using RewardSpec = std::variant<ConstantReward, LinearReward, ExponentialReward>;

double reward_at(const RewardSpec& reward, double x);
// E[alpha(a + e_rho)], e_rho ~ Exp(rho); closed form per variant.
double reward_mean_at_exp_overshoot(const RewardSpec& reward, double a, double rho);
// Checks alpha >= 0 on [a, inf) and the CL admissibility kappa < rho.
void validate_reward(const RewardSpec& reward, const ModelSpec& model, double a);

// ---------------------------------------------------------------------------
// Termination fee c(.). The c1/c2/c3 families are parameterised by the
// contract's (p, r, a) at evaluation time.

struct ConstantPenalty {
    double c = 0.0;
};
struct LinearPenaltyC1 {};     // c1(d) = p/(r a) (a-d) on [0,a)
struct QuadraticPenaltyC2 {};  // c2(d) = p/(r a^2) (a-d)^2 on [0,a)
struct LinearPenaltyC3 {       // c3(d) = ((c_end - p/r)/a) d + p/r on [0,a)
    double c_end = 0.0;
};

using PenaltySpec = std::variant<ConstantPenalty, LinearPenaltyC1, QuadraticPenaltyC2, LinearPenaltyC3>;

double penalty_value(const PenaltySpec& pen, double p, double r, double a, double d);
double penalty_deriv1(const PenaltySpec& pen, double p, double r, double a, double d);
double penalty_deriv2(const PenaltySpec& pen, double p, double r, double a, double d);
void validate_penalty(const PenaltySpec& pen, double p, double r, double a);

// ---------------------------------------------------------------------------
// Contract geometry. b is present for drawup-contingent contracts only.

struct ContractSpec {
    double a = 0.0;                 // drawdown trigger level, > 0
    std::optional<double> b;        // drawup trigger level, 0 < b <= a
    double r = 0.0;                 // discount rate
    double p = 0.0;                 // premium intensity
    double d = 0.0;                 // initial drawdown, in [0, a]
    std::optional<double> u;        // initial drawup, in [0, b]
};

void validate(const ContractSpec& contract);

// ---------------------------------------------------------------------------

struct ConditionCheck {
    bool holds = false;
    double margin = 0.0;  // signed distance to the boundary of the condition
};

using ConditionMap = std::map<std::string, ConditionCheck>;

struct QuoteResult {
    double value = 0.0;
    std::optional<double> fair_premium;
    std::optional<double> theta_star;
    bool theta_interior = false;
    ConditionMap conditions;
};

}  // namespace ddc
