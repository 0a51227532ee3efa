#pragma once

#include <memory>

#include "ddc/drawdown.hpp"
#include "ddc/levy.hpp"
#include "ddc/types.hpp"

namespace ddc {

// Discounted transforms of the race between tau_D^+(a) and tau_U^+(b):
//   lambda = E[e^{-r tau_U}; tau_U < tau_D]   (drawup first, contract expires)
//   nu     = E[e^{-r tau_D}; tau_D < tau_U]   (drawdown first)
//   n      = E[e^{-r tau_D} alpha(D); tau_D < tau_U]
struct DrawupTransforms {
    double lambda = 0.0;
    double nu = 0.0;
    double n = 0.0;
};

// Closed forms exist for b == a (either model) and for b < a under linear
// Brownian motion with a constant reward; anything else throws
// unsupported_config_error and should be routed to the Monte Carlo oracle.
DrawupTransforms lambda_nu_n(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward);

// Equal-levels case b == a, any supported model, any admissible reward.
DrawupTransforms lambda_nu_n_equal_levels(const ModelSpec& model, double r, double a, double d, double u,
                                          const RewardSpec& reward);

// b < a under linear Brownian motion, constant reward; two regimes glued at
// d + u == a, the lower one written with the dual (-mu) scale functions.
DrawupTransforms lambda_nu_bm_unequal(const ModelSpec& model, double r, double a, double b, double d,
                                      double u, const RewardSpec& reward);

// k(d,u,p) = (p/r)(nu + lambda) + n - p/r
double value_k(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward);

// p*(d,u) = r n / (1 - lambda - nu)
double fair_premium_drawup(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward);

// k~(d,u,p) = -k(d,u,p) - c(d)
double k_tilde(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
               const PenaltySpec& penalty);

// Surplus of cancelling at tau^+_{d-theta}, theta in (d+u-b, d]. theta may be
// negative: the stop then happens once the price has risen d-theta above the
// running maximum seed.
double h_surplus(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
                 const PenaltySpec& penalty, double theta);

ThetaResult find_theta_star_drawup(const ModelSpec& model, const ContractSpec& contract,
                                   const RewardSpec& reward, const PenaltySpec& penalty);

QuoteResult value_K(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
                    const PenaltySpec& penalty);

ConditionMap check_conditions_drawup(const ModelSpec& model, const ContractSpec& contract,
                                     const RewardSpec& reward, const PenaltySpec& penalty,
                                     std::optional<double> theta_star, int grid_n = 200);

// Value of the (assum_additional2) jump integral at one d (CL models).
double assum_additional2_integral(const ModelSpec& model, const ContractSpec& contract,
                                  const RewardSpec& reward, const PenaltySpec& penalty,
                                  double theta_star, double d);

// Evaluator bound to one (model, a, b, r, p, reward); avoids re-deriving the
// scale constants on every call in grid sweeps and Monte Carlo payoffs.
class DrawupEvaluator {
  public:
    DrawupEvaluator(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward);
    ~DrawupEvaluator();
    DrawupEvaluator(DrawupEvaluator&&) noexcept;

    DrawupTransforms transforms(double d, double u) const;
    double k(double d, double u) const;
    double ktilde(double d, double u, const PenaltySpec& penalty) const;
    double h(double d, double u, double theta, const PenaltySpec& penalty) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace ddc
