#pragma once

#include "ddc/levy.hpp"
#include "ddc/types.hpp"

namespace ddc {

// E_{|d}[e^{-r tau_D^+(a)}] = Z(a-d) - r W(a-d) W(a)/W'(a)
double xi(const ModelSpec& model, double r, double a, double d);

// Overloads bound to a prebuilt ScaleFns, for callers evaluating on grids.
double xi_at(const ScaleFns& s, double a, double d);
double reward_transform_at(const ScaleFns& s, double a, double d, const RewardSpec& reward);

// Discounted reward Xi(d) = E_{|d}[e^{-r tau_D^+(a)} alpha(D at the epoch)].
// BM: alpha(a) sigma^2/2 [W'(a-d) - W(a-d) W''(a)/W'(a)] (creeping only);
// CL: E[alpha(a + e_rho)] xi(d).
double reward_transform(const ModelSpec& model, double r, double a, double d, const RewardSpec& reward);

// f(d,p) = (p/r) xi(d) - p/r + Xi(d); rejects r = 0 with p > 0.
double value_f(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward);

// p*(d) = r Xi(d) / (1 - xi(d)); throws degenerate_contract_error as d -> a.
double fair_premium(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward);

// f~(d,p) = -f(d,p) - c(d)
double f_tilde(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
               const PenaltySpec& penalty);

// Surplus of stopping at tau_D^-(theta): f~(theta,p) W(a-d)/W(a-theta) for
// d > theta, f~(d,p) for d <= theta.
double g_surplus(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
                 const PenaltySpec& penalty, double theta);

struct ThetaResult {
    std::optional<double> theta_star;  // absent when early termination is never profitable
    bool interior = false;             // first-order condition satisfied at theta*
    double criterion = 0.0;            // maximised value of f~(theta)/W(a-theta)
};

// Maximises the d-independent criterion f~(theta,p)/W(a-theta) over (0,a):
// coarse grid then golden-section refinement.
ThetaResult find_theta_star(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
                            const PenaltySpec& penalty);

// F = f + G with the never-stop clamp G >= 0; conditions attached.
QuoteResult value_F(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
                    const PenaltySpec& penalty);

ConditionMap check_conditions_drawdown(const ModelSpec& model, const ContractSpec& contract,
                                       const RewardSpec& reward, const PenaltySpec& penalty,
                                       std::optional<double> theta_star, int grid_n = 200);

// Generator inequality on the fee alone:
//   -r c - mu c' + sigma^2/2 c'' + int (c(d+z) - c(d) - z c'(d) 1_{z<1}) Pi(-dz) >= -p
// checked on a grid of [0, a); shared by both cancellable contracts.
ConditionCheck war1_check(const ModelSpec& model, const PenaltySpec& penalty, double p, double r, double a,
                          int grid_n = 200);

// Value of the (assum_additional) jump integral at one d (CL models; zero
// for Brownian motion). Used by the condition checker and the figure data.
double assum_additional_integral(const ModelSpec& model, const ContractSpec& contract,
                                 const RewardSpec& reward, const PenaltySpec& penalty, double theta_star,
                                 double d);

// f~ continued past the trigger: for x > a the contract has already paid, so
// the continuation value is -alpha(x). Used by the jump-condition integrals.
double f_tilde_extended(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
                        const PenaltySpec& penalty, double x);

}  // namespace ddc
