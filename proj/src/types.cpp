#include "ddc/types.hpp"

#include <cmath>

namespace ddc {

void validate(const ModelSpec& model) {
    if (const auto* bm = std::get_if<LinearBrownian>(&model)) {
        if (!(bm->sigma > 0.0)) throw validation_error("LinearBrownian: sigma must be > 0");
        if (!std::isfinite(bm->mu) || !std::isfinite(bm->sigma))
            throw validation_error("LinearBrownian: parameters must be finite");
        return;
    }
    const auto& cl = std::get<CramerLundberg>(model);
    if (!(cl.mu_hat > 0.0)) throw validation_error("CramerLundberg: mu_hat must be > 0");
    if (!(cl.beta >= 0.0)) throw validation_error("CramerLundberg: beta must be >= 0");
    if (!(cl.rho > 0.0)) throw validation_error("CramerLundberg: rho must be > 0");
}

bool is_brownian(const ModelSpec& model) { return std::holds_alternative<LinearBrownian>(model); }

double gaussian_sigma(const ModelSpec& model) {
    if (const auto* bm = std::get_if<LinearBrownian>(&model)) return bm->sigma;
    return 0.0;
}

double reward_at(const RewardSpec& reward, double x) {
    if (const auto* c = std::get_if<ConstantReward>(&reward)) return c->alpha;
    if (const auto* l = std::get_if<LinearReward>(&reward)) return l->alpha1 + l->alpha2 * x;
    const auto& e = std::get<ExponentialReward>(reward);
    return e.omega * std::exp(e.kappa * x);
}

double reward_mean_at_exp_overshoot(const RewardSpec& reward, double a, double rho) {
    if (const auto* c = std::get_if<ConstantReward>(&reward)) return c->alpha;
    if (const auto* l = std::get_if<LinearReward>(&reward)) return l->alpha1 + l->alpha2 * (a + 1.0 / rho);
    const auto& e = std::get<ExponentialReward>(reward);
    if (e.kappa >= rho)
        throw validation_error("ExponentialReward: kappa must be < rho for the reward transform to exist");
    return e.omega * std::exp(e.kappa * a) * rho / (rho - e.kappa);
}

void validate_reward(const RewardSpec& reward, const ModelSpec& model, double a) {
    if (const auto* c = std::get_if<ConstantReward>(&reward)) {
        if (c->alpha < 0.0) throw validation_error("ConstantReward: alpha must be >= 0");
    } else if (const auto* l = std::get_if<LinearReward>(&reward)) {
        // alpha(x) >= 0 on [a, inf) forces a non-negative slope when the
        // intercept alone cannot carry it.
        if (l->alpha1 + l->alpha2 * a < 0.0 || (l->alpha2 < 0.0))
            throw validation_error("LinearReward: alpha(x) must be >= 0 for x >= a");
    } else {
        const auto& e = std::get<ExponentialReward>(reward);
        if (e.omega < 0.0) throw validation_error("ExponentialReward: omega must be >= 0");
        if (const auto* cl = std::get_if<CramerLundberg>(&model)) {
            if (e.kappa >= cl->rho)
                throw validation_error("ExponentialReward: kappa >= rho, reward transform diverges");
        }
    }
    (void)a;
}

double penalty_value(const PenaltySpec& pen, double p, double r, double a, double d) {
    if (const auto* c = std::get_if<ConstantPenalty>(&pen)) return c->c;
    if (d < 0.0 || d >= a) return 0.0;
    if (std::holds_alternative<LinearPenaltyC1>(pen)) return p / (r * a) * (a - d);
    if (std::holds_alternative<QuadraticPenaltyC2>(pen)) return p / (r * a * a) * (a - d) * (a - d);
    const auto& c3 = std::get<LinearPenaltyC3>(pen);
    return (c3.c_end - p / r) / a * d + p / r;
}

double penalty_deriv1(const PenaltySpec& pen, double p, double r, double a, double d) {
    if (std::holds_alternative<ConstantPenalty>(pen)) return 0.0;
    if (d < 0.0 || d >= a) return 0.0;
    if (std::holds_alternative<LinearPenaltyC1>(pen)) return -p / (r * a);
    if (std::holds_alternative<QuadraticPenaltyC2>(pen)) return -2.0 * p / (r * a * a) * (a - d);
    const auto& c3 = std::get<LinearPenaltyC3>(pen);
    return (c3.c_end - p / r) / a;
}

double penalty_deriv2(const PenaltySpec& pen, double p, double r, double a, double d) {
    if (std::holds_alternative<QuadraticPenaltyC2>(pen) && d >= 0.0 && d < a) return 2.0 * p / (r * a * a);
    return 0.0;
}

void validate_penalty(const PenaltySpec& pen, double p, double r, double a) {
    (void)a;
    if (const auto* c = std::get_if<ConstantPenalty>(&pen)) {
        if (c->c < 0.0) throw validation_error("ConstantPenalty: c must be >= 0");
        return;
    }
    if (!(r > 0.0)) throw validation_error("penalty families c1/c2/c3 need r > 0");
    if (const auto* c3 = std::get_if<LinearPenaltyC3>(&pen)) {
        if (!(c3->c_end < p / r)) throw validation_error("LinearPenaltyC3: c_end must be < p/r");
        if (c3->c_end < 0.0) throw validation_error("LinearPenaltyC3: c_end must be >= 0");
    }
}

void validate(const ContractSpec& contract) {
    if (!(contract.a > 0.0)) throw validation_error("ContractSpec: a must be > 0");
    if (!(contract.r >= 0.0)) throw validation_error("ContractSpec: r must be >= 0");
    if (!(contract.p >= 0.0)) throw validation_error("ContractSpec: p must be >= 0");
    if (contract.d < 0.0 || contract.d > contract.a)
        throw validation_error("ContractSpec: d must lie in [0, a]");
    if (contract.b) {
        if (!(*contract.b > 0.0) || *contract.b > contract.a)
            throw validation_error("ContractSpec: b must lie in (0, a]");
        const double u = contract.u.value_or(0.0);
        if (u < 0.0 || u > *contract.b) throw validation_error("ContractSpec: u must lie in [0, b]");
    } else if (contract.u && *contract.u != 0.0) {
        throw validation_error("ContractSpec: u requires a drawup level b");
    }
}

}  // namespace ddc
