#include "ddc/drawup.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "ddc/quad.hpp"
#include "ddc/roots.hpp"

namespace ddc {

namespace {

struct Ctx {
    ModelSpec model;
    ScaleFns s;
    std::optional<ScaleFns> dual;  // scale functions of -X, BM b<a regime
    double a, b, r, p;
    RewardSpec reward;
    bool equal_levels;

    Ctx(const ModelSpec& m, const ContractSpec& c, const RewardSpec& rw)
        : model(m), s(m, c.r), a(c.a), b(0.0), r(c.r), p(c.p), reward(rw) {
        validate(c);
        if (!c.b) throw validation_error("drawup contract requires a drawup level b");
        b = *c.b;
        if (!(r > 0.0)) throw validation_error("drawup pricing requires r > 0");
        validate_reward(reward, model, a);
        equal_levels = (b == a);
        if (!equal_levels) {
            if (!is_brownian(model))
                throw unsupported_config_error(
                    "b < a with jumps has no closed form here; use the Monte Carlo estimator");
            if (!std::holds_alternative<ConstantReward>(reward))
                throw unsupported_config_error(
                    "b < a is solved for constant rewards only; use the Monte Carlo estimator");
            dual.emplace(dual_model(model), r);
        }
    }

    DrawupTransforms transforms(double d, double u) const {
        return equal_levels ? equal(d, u) : unequal(d, u);
    }

    DrawupTransforms equal(double d, double u) const {
        if (d < 0.0 || d > a || u < 0.0 || u > a)
            throw std::domain_error("lambda_nu_n: (d,u) must lie in [0,a]^2");
        const double wad = s.W(a - d);
        const double lo = std::min(a - d, u), hi = std::max(a - d, u);
        const double arg = a - u + lo;
        const double wp_over_w2 = s.W(a, 1) / (s.W(a) * s.W(a));
        const double zgap = s.Z(hi) - s.Z(u);
        DrawupTransforms t;
        t.lambda = wad / s.W(arg) - zgap * wp_over_w2 / r;
        t.nu = s.Z(lo) - s.Z(arg) * wad / s.W(arg) + s.Z(a) * wp_over_w2 * zgap / r;
        t.n = reward_transform_at(s, a, d, reward) -
              t.lambda * reward_transform_at(s, a, std::max(d + u - a, 0.0), reward);
        return t;
    }

    DrawupTransforms unequal(double d, double u) const {
        if (d < 0.0 || d > a || u < 0.0 || u > b)
            throw std::domain_error("lambda_nu_n: d in [0,a], u in [0,b] required");
        const double alpha = reward_at(reward, a);
        DrawupTransforms t;
        if (d + u >= a) {
            t.lambda = s.W(a - d) / s.W(a + b - d - u);
            t.nu = s.Z(a - d) - s.Z(a + b - d - u) * t.lambda;
            t.n = alpha * t.nu;
            return t;
        }
        const ScaleFns& D = *dual;
        const double sigma = gaussian_sigma(model);
        const double wb = D.W(b), wpb = D.W(b, 1), wppb = D.W(b, 2);
        const double khat = wpb / wb;
        const double q = 0.5 * sigma * sigma * (wpb * wpb / wb - wppb);
        double lam = s.W(u) / s.W(b);
        if (b > d) lam += q / (r * wb) * (D.Z(std::min(b, a - u)) - D.Z(d)) * std::exp(-(a - b) * khat);
        if (a > u + b)
            lam += wb / wpb * q * (std::exp(-u * khat) - std::exp(-(a - std::max(b, d)) * khat));
        double nu = D.W(b - u) / wpb * q * std::exp(-(a - std::max(b, d + u)) * khat) * s.Z(b);
        if (b > d + u) nu -= q / (r * wb) * (D.Z(b - u) - D.Z(d)) * std::exp(-(a - b) * khat) * s.Z(b);
        t.lambda = lam;
        t.nu = nu;
        t.n = alpha * nu;
        return t;
    }

    double k(double d, double u) const {
        const DrawupTransforms t = transforms(d, u);
        return p / r * (t.nu + t.lambda) + t.n - p / r;
    }

    double ktilde(double d, double u, const PenaltySpec& pen) const {
        return -k(d, u) - penalty_value(pen, p, r, a, d);
    }

    // Continuation past the drawdown trigger (used by the jump integrals).
    double ktilde_ext(double d, double u, const PenaltySpec& pen) const {
        if (d > a) return -reward_at(reward, d);
        return ktilde(d, std::min(u, b), pen);
    }

    double h_at(double d, double u, double theta, const PenaltySpec& pen) const {
        if (theta >= d) return ktilde(d, u, pen);
        if (!(theta > d + u - b)) throw std::domain_error("h_surplus: theta must lie in (d+u-b, d]");
        const double gap = d - theta;
        const double th_pos = std::max(theta, 0.0);
        const double ymax_dd = a - std::max(gap, d);  // a - (d-theta) v d
        const double y0 = std::min(u, ymax_dd);
        double val = ktilde(th_pos, d - theta + u, pen) * s.W(y0) / s.W(gap + y0);
        const double ul = std::min(b + theta - d, ymax_dd);
        if (ul > u) {
            const auto integrand = [&](double y) {
                const double wg = s.W(gap + y);
                const double ratio_deriv = (s.W(y, 1) * wg - s.W(y) * s.W(gap + y, 1)) / (wg * wg);
                return ktilde(th_pos, gap + y, pen) * ratio_deriv;
            };
            // regime kinks of k~ along y
            std::vector<double> brk = {a - th_pos - gap, a - b - gap, b - th_pos - gap};
            val += quad_gk_segmented(integrand, u, ul, brk, 1e-10, 1e-10);
        }
        return val;
    }
};

double require_u(const ContractSpec& c) { return c.u.value_or(0.0); }

}  // namespace

DrawupTransforms lambda_nu_n_equal_levels(const ModelSpec& model, double r, double a, double d, double u,
                                          const RewardSpec& reward) {
    ContractSpec c;
    c.a = a;
    c.b = a;
    c.r = r;
    c.d = d;
    c.u = u;
    return Ctx(model, c, reward).equal(d, u);
}

DrawupTransforms lambda_nu_bm_unequal(const ModelSpec& model, double r, double a, double b, double d,
                                      double u, const RewardSpec& reward) {
    ContractSpec c;
    c.a = a;
    c.b = b;
    c.r = r;
    c.d = d;
    c.u = u;
    Ctx ctx(model, c, reward);
    if (ctx.equal_levels) throw std::domain_error("lambda_nu_bm_unequal: needs b < a");
    return ctx.unequal(d, u);
}

DrawupTransforms lambda_nu_n(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward) {
    Ctx ctx(model, contract, reward);
    return ctx.transforms(contract.d, require_u(contract));
}

double value_k(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward) {
    Ctx ctx(model, contract, reward);
    return ctx.k(contract.d, require_u(contract));
}

double fair_premium_drawup(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward) {
    Ctx ctx(model, contract, reward);
    const DrawupTransforms t = ctx.transforms(contract.d, require_u(contract));
    const double denom = 1.0 - t.lambda - t.nu;
    if (denom < 1e-12)
        throw degenerate_contract_error("fair_premium_drawup: 1 - lambda - nu vanishes");
    return contract.r * t.n / denom;
}

double k_tilde(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
               const PenaltySpec& penalty) {
    validate_penalty(penalty, contract.p, contract.r, contract.a);
    Ctx ctx(model, contract, reward);
    return ctx.ktilde(contract.d, require_u(contract), penalty);
}

double h_surplus(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
                 const PenaltySpec& penalty, double theta) {
    validate_penalty(penalty, contract.p, contract.r, contract.a);
    Ctx ctx(model, contract, reward);
    const double u = require_u(contract);
    if (theta > contract.d || theta <= contract.d + u - ctx.b)
        throw std::domain_error("h_surplus: theta must lie in (d+u-b, d]");
    return ctx.h_at(contract.d, u, theta, penalty);
}

ThetaResult find_theta_star_drawup(const ModelSpec& model, const ContractSpec& contract,
                                   const RewardSpec& reward, const PenaltySpec& penalty) {
    validate_penalty(penalty, contract.p, contract.r, contract.a);
    Ctx ctx(model, contract, reward);
    const double d = contract.d, u = require_u(contract);
    const double lo_open = d + u - ctx.b;

    ThetaResult out;
    // (war2): some reachable (d0, u0), d0 < d, u0 > u, with k~ > 0.
    {
        bool found = false;
        const int m = 60;
        for (int i = 0; i < m && !found; ++i) {
            const double d0 = d * i / m;
            for (int j = 1; j <= m && !found; ++j) {
                const double u0 = u + (ctx.b - u) * j / m;
                if (ctx.ktilde(d0, std::min(u0, ctx.b), penalty) > 0.0) found = true;
            }
        }
        if (!found) return out;
    }

    const double eps = std::max(1e-6 * contract.a, 1e-9);
    const double lo = lo_open + eps, hi = d;
    if (!(hi > lo)) return out;
    const auto h = [&](double th) { return ctx.h_at(d, u, th, penalty); };

    const int n = 4000;
    std::vector<double> vals(n + 1);
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
        const double th = lo + (hi - lo) * i / n;
        vals[i] = h(th);
        best = std::max(best, vals[i]);
    }
    if (!(best > 0.0)) return out;  // never profitable to terminate

    int best_i = 0;
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
    double th_star = golden_max(h, bl, bh, 1e-8);
    if (h(d) >= h(th_star)) th_star = d;  // boundary: stop immediately

    out.theta_star = th_star;
    out.criterion = h(th_star);
    out.interior = th_star > lo + step && th_star < d - step;
    return out;
}

ConditionMap check_conditions_drawup(const ModelSpec& model, const ContractSpec& contract,
                                     const RewardSpec& reward, const PenaltySpec& penalty,
                                     std::optional<double> theta_star, int grid_n) {
    Ctx ctx(model, contract, reward);
    const double d = contract.d, u = require_u(contract);
    const double a = ctx.a, p = ctx.p, r = ctx.r;
    const double tol = 1e-9;
    ConditionMap out;

    out["war1"] = war1_check(model, penalty, p, r, a, grid_n);

    {
        double best = -std::numeric_limits<double>::infinity();
        const int m = 60;
        for (int i = 0; i < m; ++i) {
            const double d0 = d * i / m;
            for (int j = 1; j <= m; ++j) {
                const double u0 = u + (ctx.b - u) * j / m;
                best = std::max(best, ctx.ktilde(d0, std::min(u0, ctx.b), penalty));
            }
        }
        out["war2"] = {best > 0.0, best};
    }

    // (assum_additional2): int_{(theta*-d)^+}^inf k~(d+z, (u-z) v 0, p) Pi(-dz) >= 0
    {
        ConditionCheck cc{true, 0.0};
        if (std::holds_alternative<CramerLundberg>(model) && theta_star && *theta_star > 0.0) {
            const double th = *theta_star;
            double margin = std::numeric_limits<double>::infinity();
            for (int i = 0; i < grid_n; ++i) {
                const double dd = th * i / grid_n;
                margin = std::min(margin, assum_additional2_integral(model, contract, reward, penalty,
                                                                     th, dd));
            }
            cc = {margin >= -tol, margin};
        }
        out["assum_additional2"] = cc;
    }

    if (theta_star) {
        const double th = *theta_star;
        if (th > 0.0 && th < d) {
            const double gap0 = std::abs(ctx.h_at(th, u, th, penalty) - ctx.ktilde(th, u, penalty));
            out["continuous_fit"] = {gap0 <= 1e-8, 1e-8 - gap0};
            if (gaussian_sigma(model) > 0.0) {
                const double h_fd = 1e-6 * a;
                const double right = (ctx.h_at(th + h_fd, u, th, penalty) - ctx.h_at(th, u, th, penalty)) / h_fd;
                const double left = (ctx.ktilde(th, u, penalty) - ctx.ktilde(th - h_fd, u, penalty)) / h_fd;
                const double rel = std::abs(right - left) / std::max(std::abs(left), 1e-12);
                out["smooth_fit"] = {rel <= 1e-2, 1e-2 - rel};
            }
        } else {
            // theta* at the stop-now boundary or negative: pasting happens at
            // the contract point itself.
            const double gap0 =
                std::abs(ctx.h_at(d, u, d - 1e-7 * a, penalty) - ctx.ktilde(d, u, penalty));
            out["continuous_fit"] = {gap0 <= 1e-6, 1e-6 - gap0};
        }
    }
    return out;
}

QuoteResult value_K(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
                    const PenaltySpec& penalty) {
    validate_penalty(penalty, contract.p, contract.r, contract.a);
    Ctx ctx(model, contract, reward);
    const double d = contract.d, u = require_u(contract);
    const ThetaResult tr = find_theta_star_drawup(model, contract, reward, penalty);

    QuoteResult q;
    q.theta_star = tr.theta_star;
    q.theta_interior = tr.interior;
    double H = 0.0;
    if (tr.theta_star) {
        const double th = *tr.theta_star;
        H = th < d ? std::max(0.0, ctx.h_at(d, u, th, penalty))
                   : std::max(0.0, ctx.ktilde(d, u, penalty));
    }
    q.value = ctx.k(d, u) + H;
    q.conditions = check_conditions_drawup(model, contract, reward, penalty, tr.theta_star);
    return q;
}

double assum_additional2_integral(const ModelSpec& model, const ContractSpec& contract,
                                  const RewardSpec& reward, const PenaltySpec& penalty,
                                  double theta_star, double d) {
    const auto* cl = std::get_if<CramerLundberg>(&model);
    if (!cl) return 0.0;
    Ctx ctx(model, contract, reward);
    const double u = contract.u.value_or(0.0);
    const double zmax = 27.7 / cl->rho;
    const auto integrand = [&](double z) {
        return ctx.ktilde_ext(d + z, std::max(u - z, 0.0), penalty) * cl->beta * cl->rho *
               std::exp(-cl->rho * z);
    };
    return quad_gk_segmented(integrand, std::max(theta_star - d, 0.0), ctx.a - d + zmax,
                             {u, ctx.a - d}, 1e-11, 1e-11);
}

struct DrawupEvaluator::Impl {
    Ctx ctx;
    Impl(const ModelSpec& m, const ContractSpec& c, const RewardSpec& rw) : ctx(m, c, rw) {}
};

DrawupEvaluator::DrawupEvaluator(const ModelSpec& model, const ContractSpec& contract,
                                 const RewardSpec& reward)
    : impl_(std::make_unique<Impl>(model, contract, reward)) {}
DrawupEvaluator::~DrawupEvaluator() = default;
DrawupEvaluator::DrawupEvaluator(DrawupEvaluator&&) noexcept = default;

DrawupTransforms DrawupEvaluator::transforms(double d, double u) const { return impl_->ctx.transforms(d, u); }
double DrawupEvaluator::k(double d, double u) const { return impl_->ctx.k(d, u); }
double DrawupEvaluator::ktilde(double d, double u, const PenaltySpec& penalty) const {
    return impl_->ctx.ktilde(d, u, penalty);
}
double DrawupEvaluator::h(double d, double u, double theta, const PenaltySpec& penalty) const {
    return impl_->ctx.h_at(d, u, theta, penalty);
}

}  // namespace ddc
