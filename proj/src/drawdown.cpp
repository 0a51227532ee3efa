#include "ddc/drawdown.hpp"

#include <cmath>
#include <vector>

#include "ddc/quad.hpp"
#include "ddc/roots.hpp"

namespace ddc {

namespace {

double xi_from(const ScaleFns& s, double a, double d) {
    if (d < 0.0 || d > a) throw std::domain_error("xi: d must lie in [0, a]");
    return s.Z(a - d) - s.rate() * s.W(a - d) * s.W(a) / s.W(a, 1);
}

double xi_deriv_from(const ScaleFns& s, double a, double d) {
    const double r = s.rate();
    return -r * s.W(a - d) + r * s.W(a - d, 1) * s.W(a) / s.W(a, 1);
}

double reward_transform_from(const ScaleFns& s, double a, double d, const RewardSpec& reward) {
    const ModelSpec& model = s.model();
    validate_reward(reward, model, a);
    if (const auto* bm = std::get_if<LinearBrownian>(&model)) {
        const double half_s2 = 0.5 * bm->sigma * bm->sigma;
        return reward_at(reward, a) * half_s2 * (s.W(a - d, 1) - s.W(a - d) * s.W(a, 2) / s.W(a, 1));
    }
    const auto& cl = std::get<CramerLundberg>(model);
    return reward_mean_at_exp_overshoot(reward, a, cl.rho) * xi_from(s, a, d);
}

double reward_transform_deriv_from(const ScaleFns& s, double a, double d, const RewardSpec& reward) {
    const ModelSpec& model = s.model();
    if (const auto* bm = std::get_if<LinearBrownian>(&model)) {
        const double half_s2 = 0.5 * bm->sigma * bm->sigma;
        return reward_at(reward, a) * half_s2 * (-s.W(a - d, 2) + s.W(a - d, 1) * s.W(a, 2) / s.W(a, 1));
    }
    const auto& cl = std::get<CramerLundberg>(model);
    return reward_mean_at_exp_overshoot(reward, a, cl.rho) * xi_deriv_from(s, a, d);
}

void require_discounting(const ContractSpec& c) {
    if (c.r == 0.0 && c.p > 0.0)
        throw validation_error("r = 0 with p > 0: the perpetual premium leg has no finite value");
}

double value_f_from(const ScaleFns& s, const ContractSpec& c, const RewardSpec& reward, double d) {
    require_discounting(c);
    const double rt = reward_transform_from(s, c.a, d, reward);
    if (c.p == 0.0) return rt;
    return c.p / c.r * (xi_from(s, c.a, d) - 1.0) + rt;
}

double f_tilde_from(const ScaleFns& s, const ContractSpec& c, const RewardSpec& reward,
                    const PenaltySpec& pen, double d) {
    return -value_f_from(s, c, reward, d) - penalty_value(pen, c.p, c.r, c.a, d);
}

double f_tilde_ext_from(const ScaleFns& s, const ContractSpec& c, const RewardSpec& reward,
                        const PenaltySpec& pen, double x) {
    if (x > c.a) return -reward_at(reward, x);
    return f_tilde_from(s, c, reward, pen, x);
}

double f_tilde_deriv_from(const ScaleFns& s, const ContractSpec& c, const RewardSpec& reward,
                          const PenaltySpec& pen, double d) {
    double fprime = reward_transform_deriv_from(s, c.a, d, reward);
    if (c.p > 0.0) fprime += c.p / c.r * xi_deriv_from(s, c.a, d);
    return -fprime - penalty_deriv1(pen, c.p, c.r, c.a, d);
}

double g_surplus_from(const ScaleFns& s, const ContractSpec& c, const RewardSpec& reward,
                      const PenaltySpec& pen, double theta, double d) {
    if (!(theta > 0.0 && theta < c.a)) throw std::domain_error("g_surplus: theta must lie in (0, a)");
    if (d <= theta) return f_tilde_from(s, c, reward, pen, d);
    return f_tilde_from(s, c, reward, pen, theta) * s.W(c.a - d) / s.W(c.a - theta);
}

// Levy-measure drift compensation: mu = mu_hat + int_{(0,1)} z Pi(-dz) for CL.
double triplet_drift(const ModelSpec& model) {
    if (const auto* bm = std::get_if<LinearBrownian>(&model)) return bm->mu;
    const auto& cl = std::get<CramerLundberg>(model);
    const double small_jump_mean = cl.beta * (1.0 / cl.rho - std::exp(-cl.rho) * (1.0 + 1.0 / cl.rho));
    return cl.mu_hat + small_jump_mean;
}

}  // namespace

double xi(const ModelSpec& model, double r, double a, double d) {
    if (a <= 0.0) throw std::domain_error("xi: a must be > 0");
    if (r == 0.0) {
        if (d < 0.0 || d > a) throw std::domain_error("xi: d must lie in [0, a]");
        return 1.0;  // tau_D^+(a) < infinity a.s.
    }
    return xi_from(ScaleFns(model, r), a, d);
}

double xi_at(const ScaleFns& s, double a, double d) { return xi_from(s, a, d); }

double reward_transform_at(const ScaleFns& s, double a, double d, const RewardSpec& reward) {
    return reward_transform_from(s, a, d, reward);
}

double reward_transform(const ModelSpec& model, double r, double a, double d, const RewardSpec& reward) {
    if (a <= 0.0) throw std::domain_error("reward_transform: a must be > 0");
    if (d < 0.0 || d > a) throw std::domain_error("reward_transform: d must lie in [0, a]");
    return reward_transform_from(ScaleFns(model, r), a, d, reward);
}

double value_f(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward) {
    validate(contract);
    if (contract.b) throw validation_error("value_f: pure drawdown contract must not carry b");
    require_discounting(contract);
    return value_f_from(ScaleFns(model, contract.r), contract, reward, contract.d);
}

double fair_premium(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward) {
    validate(contract);
    if (!(contract.r > 0.0)) throw validation_error("fair_premium: r must be > 0");
    ScaleFns s(model, contract.r);
    const double x = xi_from(s, contract.a, contract.d);
    const double denom = 1.0 - x;
    if (denom < 1e-12)
        throw degenerate_contract_error("fair_premium: 1 - xi(d) vanishes (drawdown triggers immediately)");
    return contract.r * reward_transform_from(s, contract.a, contract.d, reward) / denom;
}

double f_tilde(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
               const PenaltySpec& penalty) {
    validate(contract);
    validate_penalty(penalty, contract.p, contract.r, contract.a);
    return f_tilde_from(ScaleFns(model, contract.r), contract, reward, penalty, contract.d);
}

double f_tilde_extended(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
                        const PenaltySpec& penalty, double x) {
    return f_tilde_ext_from(ScaleFns(model, contract.r), contract, reward, penalty, x);
}

double g_surplus(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
                 const PenaltySpec& penalty, double theta) {
    validate(contract);
    validate_penalty(penalty, contract.p, contract.r, contract.a);
    return g_surplus_from(ScaleFns(model, contract.r), contract, reward, penalty, theta, contract.d);
}

ThetaResult find_theta_star(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
                            const PenaltySpec& penalty) {
    validate(contract);
    validate_penalty(penalty, contract.p, contract.r, contract.a);
    ScaleFns s(model, contract.r);
    const double a = contract.a;
    const double eps = 1e-6 * a;

    // g_>(d,p,theta) = B(theta) W(a-d), so the maximiser of B is the
    // d-independent optimal threshold.
    const auto criterion = [&](double th) {
        return f_tilde_from(s, contract, reward, penalty, th) / s.W(a - th);
    };

    const int n = 10000;
    const double lo = eps, hi = a - eps;
    double best = -std::numeric_limits<double>::infinity();
    int best_i = 0;
    std::vector<double> vals(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double th = lo + (hi - lo) * i / n;
        vals[i] = criterion(th);
        if (vals[i] > best) {
            best = vals[i];
            best_i = i;
        }
    }
    ThetaResult out;
    if (!(best > 0.0)) return out;  // f~ <= 0 everywhere: never terminate

    // Plateau tie-break: smallest grid theta attaining the max within 1e-9.
    const double plateau_tol = 1e-9 * std::max(1.0, std::abs(best));
    for (int i = 0; i <= n; ++i) {
        if (vals[i] >= best - plateau_tol) {
            best_i = i;
            break;
        }
    }
    const double step = (hi - lo) / n;
    const double bl = std::max(lo, lo + (best_i - 1) * step);
    const double bh = std::min(hi, lo + (best_i + 1) * step);
    double th_star = golden_max(criterion, bl, bh, 1e-8);
    if (criterion(lo) >= criterion(th_star)) th_star = lo;  // boundary plateau guard

    // First-order condition of (gprime_theta): d/dtheta f~ + f~ W'(a-th)/W(a-th).
    const double resid = f_tilde_deriv_from(s, contract, reward, penalty, th_star) +
                         f_tilde_from(s, contract, reward, penalty, th_star) * s.W(a - th_star, 1) / s.W(a - th_star);
    const double scale = std::abs(f_tilde_from(s, contract, reward, penalty, th_star)) *
                             s.W(a - th_star, 1) / s.W(a - th_star) +
                         1e-300;
    out.theta_star = th_star;
    out.criterion = criterion(th_star);
    out.interior = std::abs(resid) <= 1e-4 * scale && th_star > lo + step && th_star < hi - step;
    return out;
}

ConditionCheck war1_check(const ModelSpec& model, const PenaltySpec& penalty, double p, double r, double a,
                          int grid_n) {
    const auto cval = [&](double d) { return penalty_value(penalty, p, r, a, d); };
    const auto cd1 = [&](double d) { return penalty_deriv1(penalty, p, r, a, d); };
    const auto cd2 = [&](double d) { return penalty_deriv2(penalty, p, r, a, d); };
    const double mu = triplet_drift(model);
    const double sigma = gaussian_sigma(model);
    double margin = std::numeric_limits<double>::infinity();
    const auto* cl = std::get_if<CramerLundberg>(&model);
    const double zmax = cl ? 27.7 / cl->rho : 0.0;  // e^{-rho z} < 1e-12 beyond
    for (int i = 0; i < grid_n; ++i) {
        const double d = a * i / grid_n;
        double lhs = -r * cval(d) - mu * cd1(d) + 0.5 * sigma * sigma * cd2(d);
        if (cl) {
            const auto integrand = [&](double z) {
                const double comp = (z < 1.0) ? z * cd1(d) : 0.0;
                return (cval(d + z) - cval(d) - comp) * cl->beta * cl->rho * std::exp(-cl->rho * z);
            };
            lhs += quad_gk_segmented(integrand, 0.0, zmax, {1.0, a - d}, 1e-11, 1e-11);
        }
        margin = std::min(margin, lhs + p);
    }
    return {margin >= -1e-9, margin};
}

ConditionMap check_conditions_drawdown(const ModelSpec& model, const ContractSpec& contract,
                                       const RewardSpec& reward, const PenaltySpec& penalty,
                                       std::optional<double> theta_star, int grid_n) {
    validate(contract);
    ScaleFns s(model, contract.r);
    const double a = contract.a, p = contract.p, r = contract.r;
    ConditionMap out;
    const double tol = 1e-9;

    out["war1"] = war1_check(model, penalty, p, r, a, grid_n);

    // (mainzalozenia): some theta with f~(theta,p) > 0
    {
        double best = -std::numeric_limits<double>::infinity();
        for (int i = 0; i <= grid_n; ++i) {
            const double d = a * i / grid_n * (1.0 - 1e-9);
            best = std::max(best, f_tilde_from(s, contract, reward, penalty, d));
        }
        out["mainzalozenia"] = {best > 0.0, best};
    }

    // (assum_additional): int_{theta*-d}^inf f~(d+z,p) Pi(-dz) >= 0 on [0, theta*)
    {
        ConditionCheck cc{true, 0.0};
        if (std::holds_alternative<CramerLundberg>(model) && theta_star && *theta_star > 0.0) {
            const double th = *theta_star;
            double margin = std::numeric_limits<double>::infinity();
            for (int i = 0; i < grid_n; ++i) {
                const double d = th * i / grid_n;
                margin = std::min(margin,
                                  assum_additional_integral(model, contract, reward, penalty, th, d));
            }
            cc = {margin >= -tol, margin};
        }
        out["assum_additional"] = cc;
    }

    if (theta_star) {
        const double th = *theta_star;
        const auto g_above = [&](double d) { return g_surplus_from(s, contract, reward, penalty, th, std::max(d, th)); };
        const auto f_below = [&](double d) { return f_tilde_from(s, contract, reward, penalty, d); };

        // continuous fit: value gap at theta*
        const double gap = std::abs(g_above(th) - f_below(th));
        out["continuous_fit"] = {gap <= 1e-8, 1e-8 - gap};

        // smooth fit: one-sided derivatives, sigma > 0 models only
        if (gaussian_sigma(model) > 0.0) {
            const double h = 1e-6 * a;
            const double right = (g_above(th + h) - g_above(th)) / h;
            const double left = (f_below(th) - f_below(th - h)) / h;
            const double rel = std::abs(right - left) / std::max(std::abs(left), 1e-12);
            out["smooth_fit"] = {rel <= 1e-3, 1e-3 - rel};
        }
    }

    return out;
}

double assum_additional_integral(const ModelSpec& model, const ContractSpec& contract,
                                 const RewardSpec& reward, const PenaltySpec& penalty, double theta_star,
                                 double d) {
    const auto* cl = std::get_if<CramerLundberg>(&model);
    if (!cl) return 0.0;
    ScaleFns s(model, contract.r);
    const double a = contract.a;
    const double zmax = 27.7 / cl->rho;
    const auto integrand = [&](double z) {
        return f_tilde_ext_from(s, contract, reward, penalty, d + z) * cl->beta * cl->rho *
               std::exp(-cl->rho * z);
    };
    return quad_gk_segmented(integrand, theta_star - d, a - d + zmax, {a - d}, 1e-11, 1e-11);
}

QuoteResult value_F(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
                    const PenaltySpec& penalty) {
    validate(contract);
    validate_penalty(penalty, contract.p, contract.r, contract.a);
    ScaleFns s(model, contract.r);
    const double f = value_f_from(s, contract, reward, contract.d);
    const ThetaResult tr = find_theta_star(model, contract, reward, penalty);

    QuoteResult q;
    q.theta_star = tr.theta_star;
    q.theta_interior = tr.interior;
    double G = 0.0;
    if (tr.theta_star) {
        const double th = *tr.theta_star;
        const double candidate = contract.d <= th
                                     ? f_tilde_from(s, contract, reward, penalty, contract.d)
                                     : g_surplus_from(s, contract, reward, penalty, th, contract.d);
        G = std::max(0.0, candidate);
    }
    q.value = f + G;
    q.conditions = check_conditions_drawdown(model, contract, reward, penalty, tr.theta_star);
    return q;
}

}  // namespace ddc
