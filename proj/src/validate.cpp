#include "ddc/validate.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "ddc/drawdown.hpp"
#include "ddc/drawup.hpp"
#include "ddc/levy.hpp"

namespace ddc {

namespace {

using Kind = McTarget::Kind;
using Clock = std::chrono::steady_clock;

struct BatchPlan {
    ModelSpec model;
    ContractSpec geom;
    RewardSpec reward;
    std::optional<PenaltySpec> penalty;
    std::vector<McScenario> scenarios;
    std::vector<std::string> names;
    std::vector<double> analytic;
    double time_step = 1e-3;
};

McConfig base_config(const SuiteOptions& o, double time_step) {
    McConfig cfg;
    cfg.n_paths = o.n_paths;
    cfg.seed = o.seed;
    cfg.time_step = time_step;
    cfg.model_override = o.mc_model_override;
    return cfg;
}

void run_plan(SuiteReport& rep, const BatchPlan& plan, const SuiteOptions& o) {
    McConfig cfg = base_config(o, plan.time_step);
    const auto est = mc_estimate_batch(plan.model, plan.geom, plan.reward, plan.penalty,
                                       plan.scenarios, cfg);
    for (std::size_t i = 0; i < est.size(); ++i) {
        ValueRow row;
        row.name = plan.names[i];
        row.analytic = plan.analytic[i];
        row.mc = est[i].mean;
        row.se = est[i].std_error;
        row.z = est[i].std_error > 0.0 ? (est[i].mean - plan.analytic[i]) / est[i].std_error : 0.0;
        row.bias_bound = est[i].truncation_bias_bound;
        row.pass = std::abs(row.z) <= o.z_max;
        rep.rows.push_back(row);
    }
    if (o.run_gates && is_brownian(plan.model) &&
        (!o.mc_model_override || is_brownian(*o.mc_model_override))) {
        McConfig fine = cfg;
        fine.n_paths = o.gate_paths;
        fine.time_step = plan.time_step / 4.0;
        const auto est4 = mc_estimate_batch(plan.model, plan.geom, plan.reward, plan.penalty,
                                            plan.scenarios, fine);
        for (std::size_t i = 0; i < est.size(); ++i) {
            GateRow g;
            g.name = plan.names[i] + " [dt/4]";
            g.coarse = est[i].mean;
            g.fine = est4[i].mean;
            g.diff = std::abs(g.coarse - g.fine);
            g.allowed = 2.0 * std::sqrt(est[i].std_error * est[i].std_error +
                                        est4[i].std_error * est4[i].std_error);
            g.pass = g.diff <= g.allowed;
            rep.gates.push_back(g);
        }
    }
}

void check(SuiteReport& rep, const std::string& name, bool pass, double margin) {
    rep.checks.push_back({name, pass, margin});
}

// ---------------------------------------------------------------------------
// Fixed parameter sets from the worked examples.

const ModelSpec kBm{LinearBrownian{0.03, 0.4}};
const ModelSpec kCl{CramerLundberg{0.05, 0.1, 2.5}};
const ModelSpec kBmK{LinearBrownian{0.04, 0.3}};   // cancellable drawup figures
const ModelSpec kClK{CramerLundberg{0.04, 0.1, 2.5}};
constexpr double kRate = 0.01;

void suite_exit(SuiteReport& rep, const SuiteOptions& o, bool brownian) {
    const ModelSpec& model = brownian ? kBm : kCl;
    const std::vector<std::pair<double, double>> pts =
        brownian ? std::vector<std::pair<double, double>>{{1.0, 2.0}, {0.9, 2.0}, {1.2, 2.0}, {0.5, 1.0}, {0.7, 1.4}}
                 : std::vector<std::pair<double, double>>{{2.0, 10.0}, {5.0, 10.0}, {8.0, 10.0}, {1.0, 4.0}, {3.0, 4.0}};
    for (const auto& [x, a] : pts) {
        BatchPlan plan;
        plan.model = model;
        plan.geom = ContractSpec{.a = a, .b = {}, .r = kRate, .p = 0.0, .d = 0.0, .u = {}};
        plan.reward = ConstantReward{1.0};
        char buf[96];
        std::snprintf(buf, sizeof buf, "exit up   x=%.2f a=%.1f", x, a);
        plan.scenarios.push_back({0.0, 0.0, 0.0, {Kind::TwoSidedUp, x, 0, 0}});
        plan.names.emplace_back(buf);
        plan.analytic.push_back(two_sided_up(model, kRate, x, a));
        std::snprintf(buf, sizeof buf, "exit down x=%.2f a=%.1f", x, a);
        plan.scenarios.push_back({0.0, 0.0, 0.0, {Kind::TwoSidedDown, x, 0, 0}});
        plan.names.emplace_back(buf);
        plan.analytic.push_back(two_sided_down(model, kRate, x, a));
        run_plan(rep, plan, o);
    }
}

void suite_drawdown(SuiteReport& rep, const SuiteOptions& o, bool brownian) {
    const ModelSpec& model = brownian ? kBm : kCl;
    const RewardSpec reward =
        brownian ? RewardSpec{ConstantReward{100.0}} : RewardSpec{LinearReward{100.0, 10.0}};
    const double a = 10.0;
    ContractSpec c0{.a = a, .b = {}, .r = kRate, .p = 0.0, .d = 0.0, .u = {}};
    const double p_star0 = fair_premium(model, c0, reward);

    BatchPlan plan;
    plan.model = model;
    plan.geom = c0;
    plan.reward = reward;
    char buf[96];
    for (double d : {1.0, 3.0, 5.0, 7.0, 9.0}) {
        ContractSpec cd = c0;
        cd.d = d;
        const double p_star_d = fair_premium(model, cd, reward);
        std::snprintf(buf, sizeof buf, "xi(%.0f)", d);
        plan.scenarios.push_back({d, 0.0, 0.0, {Kind::Xi, 0, 0, 0}});
        plan.names.emplace_back(buf);
        plan.analytic.push_back(xi(model, kRate, a, d));
        std::snprintf(buf, sizeof buf, "Xi(%.0f)", d);
        plan.scenarios.push_back({d, 0.0, 0.0, {Kind::RewardTransform, 0, 0, 0}});
        plan.names.emplace_back(buf);
        plan.analytic.push_back(reward_transform(model, kRate, a, d, reward));
        std::snprintf(buf, sizeof buf, "f(%.0f, p*(0))", d);
        plan.scenarios.push_back({d, 0.0, p_star0, {Kind::ValueF, 0, 0, 0}});
        plan.names.emplace_back(buf);
        ContractSpec cf = cd;
        cf.p = p_star0;
        plan.analytic.push_back(value_f(model, cf, reward));
        std::snprintf(buf, sizeof buf, "f(%.0f, p*(%.0f)) = 0", d, d);
        plan.scenarios.push_back({d, 0.0, p_star_d, {Kind::ValueF, 0, 0, 0}});
        plan.names.emplace_back(buf);
        plan.analytic.push_back(0.0);
    }
    run_plan(rep, plan, o);

    // fair premium re-solve via the ratio estimator
    {
        McConfig cfg = base_config(o, 1e-3);
        cfg.n_paths = o.ratio_paths;
        const McEstimate ps = mc_fair_premium(model, c0, reward, cfg);
        ValueRow row;
        row.name = "p*(0) ratio estimate";
        row.analytic = p_star0;
        row.mc = ps.mean;
        row.se = ps.std_error;
        row.z = (ps.mean - p_star0) / ps.std_error;
        row.bias_bound = ps.truncation_bias_bound;
        row.pass = std::abs(row.z) <= o.z_max && !ps.warning;
        rep.rows.push_back(row);
    }

    // analytic fairness fixed point
    double worst = 0.0;
    for (int i = 0; i <= 19; ++i) {
        const double d = 0.95 * a * i / 19;
        ContractSpec cd = c0;
        cd.d = d;
        cd.p = fair_premium(model, cd, reward);
        const double resid = std::abs(value_f(model, cd, reward));
        worst = std::max(worst, resid / (1.0 + std::abs(reward_transform(model, kRate, a, d, reward))));
    }
    check(rep, "fairness |f(d,p*(d))| <= 1e-10 (grid)", worst <= 1e-10, 1e-10 - worst);
}

void suite_cancellable(SuiteReport& rep, const SuiteOptions& o, bool brownian) {
    const ModelSpec& model = brownian ? kBm : kCl;
    const RewardSpec reward =
        brownian ? RewardSpec{ConstantReward{100.0}} : RewardSpec{LinearReward{100.0, 10.0}};
    const PenaltySpec pen = LinearPenaltyC1{};
    const double a = 10.0;
    const double p = brownian ? 0.2 : 0.1;
    ContractSpec c{.a = a, .b = {}, .r = kRate, .p = p, .d = 6.0, .u = {}};

    const ThetaResult tr = find_theta_star(model, c, reward, pen);
    if (!tr.theta_star) throw std::runtime_error("cancellable suite: theta* not found");
    const double th = *tr.theta_star;

    // theta* does not depend on the probing drawdown
    {
        double spread = 0.0;
        const double probe[3] = {0.5 * a, 0.7 * a, 0.9 * a};
        for (double d : probe) {
            // argmax over theta of g_>(d, theta) located by the same search on
            // the d-dependent surface
            double best = -1e308, best_th = 0.0;
            for (int i = 1; i < 4000; ++i) {
                const double t = d * i / 4000.0;
                ContractSpec cd = c;
                cd.d = d;
                const double g = g_surplus(model, cd, reward, pen, t);
                if (g > best) {
                    best = g;
                    best_th = t;
                }
            }
            // refine
            ContractSpec cd = c;
            cd.d = d;
            const auto g1 = [&](double t) { return g_surplus(model, cd, reward, pen, t); };
            double lo = std::max(1e-6 * a, best_th - d / 4000.0), hi = std::min(d - 1e-9, best_th + d / 4000.0);
            for (int it = 0; it < 80; ++it) {
                const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
                if (g1(m1) < g1(m2)) lo = m1; else hi = m2;
            }
            spread = std::max(spread, std::abs(0.5 * (lo + hi) - th));
        }
        check(rep, "theta* d-invariance <= 1e-6", spread <= 1e-6, 1e-6 - spread);
    }

    const ConditionMap cm = check_conditions_drawdown(model, c, reward, pen, th);
    check(rep, "war1", cm.at("war1").holds, cm.at("war1").margin);
    check(rep, "mainzalozenia", cm.at("mainzalozenia").holds, cm.at("mainzalozenia").margin);
    check(rep, "assum_additional", cm.at("assum_additional").holds, cm.at("assum_additional").margin);
    check(rep, "continuous fit gap <= 1e-8", cm.at("continuous_fit").holds, cm.at("continuous_fit").margin);
    if (brownian) check(rep, "smooth fit rel gap <= 1e-3", cm.at("smooth_fit").holds, cm.at("smooth_fit").margin);

    // domination g_{tau*} >= f~ - 1e-9 on a 500-point grid
    {
        double margin = 1e308;
        for (int i = 0; i <= 500; ++i) {
            const double d = a * i / 500.0 * (1.0 - 1e-12);
            ContractSpec cd = c;
            cd.d = d;
            const double g = d <= th ? f_tilde(model, cd, reward, pen)
                                     : g_surplus(model, cd, reward, pen, th);
            margin = std::min(margin, g - f_tilde(model, cd, reward, pen) + 1e-9);
        }
        check(rep, "domination g_{tau*} >= f~ - 1e-9", margin >= 0.0, margin);
    }

    BatchPlan plan;
    plan.model = model;
    plan.geom = ContractSpec{.a = a, .b = {}, .r = kRate, .p = 0.0, .d = 0.0, .u = {}};
    plan.reward = reward;
    plan.penalty = pen;
    char buf[96];
    for (double probe_th : {2.0, th}) {
        std::snprintf(buf, sizeof buf, "g(d=6, theta=%.3f)", probe_th);
        plan.scenarios.push_back({6.0, 0.0, p, {Kind::GSurplus, probe_th, 0, 0}});
        plan.names.emplace_back(buf);
        plan.analytic.push_back(g_surplus(model, c, reward, pen, probe_th));
    }
    for (double d : {6.0, 8.0}) {
        std::snprintf(buf, sizeof buf, "F(d=%.0f) under tau_D^-(theta*)", d);
        plan.scenarios.push_back({d, 0.0, p, {Kind::ValueFStopped, th, 0, 0}});
        plan.names.emplace_back(buf);
        ContractSpec cd = c;
        cd.d = d;
        plan.analytic.push_back(value_F(model, cd, reward, pen).value);
    }
    run_plan(rep, plan, o);
}

void suite_drawup(SuiteReport& rep, const SuiteOptions& o, bool brownian) {
    const ModelSpec& model = brownian ? kBm : kCl;
    const RewardSpec reward =
        brownian ? RewardSpec{ConstantReward{100.0}} : RewardSpec{LinearReward{100.0, 10.0}};
    const double a = 10.0;
    const double b = brownian ? 8.0 : 10.0;
    const double p = 0.1;
    ContractSpec geom{.a = a, .b = b, .r = kRate, .p = 0.0, .d = 0.0, .u = 0.0};

    const std::vector<std::pair<double, double>> pts =
        brownian ? std::vector<std::pair<double, double>>{{4, 2}, {2, 6}, {5, 5}, {1, 1}, {3, 4}}
                 : std::vector<std::pair<double, double>>{{5, 3}, {2, 8}, {8, 2}, {3, 4}, {6, 6}};

    BatchPlan plan;
    plan.model = model;
    plan.geom = geom;
    plan.reward = reward;
    plan.time_step = brownian ? 5e-4 : 1e-3;
    char buf[96];
    for (const auto& [d, u] : pts) {
        ContractSpec c = geom;
        c.d = d;
        c.u = u;
        const DrawupTransforms t = lambda_nu_n(model, c, reward);
        std::snprintf(buf, sizeof buf, "lambda(%.0f,%.0f)", d, u);
        plan.scenarios.push_back({d, u, 0.0, {Kind::Lambda, 0, 0, 0}});
        plan.names.emplace_back(buf);
        plan.analytic.push_back(t.lambda);
        std::snprintf(buf, sizeof buf, "nu(%.0f,%.0f)", d, u);
        plan.scenarios.push_back({d, u, 0.0, {Kind::Nu, 0, 0, 0}});
        plan.names.emplace_back(buf);
        plan.analytic.push_back(t.nu);
        std::snprintf(buf, sizeof buf, "N(%.0f,%.0f)", d, u);
        plan.scenarios.push_back({d, u, 0.0, {Kind::BigN, 0, 0, 0}});
        plan.names.emplace_back(buf);
        plan.analytic.push_back(t.n);
        std::snprintf(buf, sizeof buf, "k(%.0f,%.0f)", d, u);
        ContractSpec ck = c;
        ck.p = p;
        plan.scenarios.push_back({d, u, p, {Kind::ValueK, 0, 0, 0}});
        plan.names.emplace_back(buf);
        plan.analytic.push_back(value_k(model, ck, reward));
    }
    run_plan(rep, plan, o);

    // fair premium ratio estimate at the first point
    {
        ContractSpec c = geom;
        c.d = pts[0].first;
        c.u = pts[0].second;
        McConfig cfg = base_config(o, plan.time_step);
        cfg.n_paths = o.ratio_paths;
        const double ps = fair_premium_drawup(model, c, reward);
        const McEstimate est = mc_fair_premium(model, c, reward, cfg);
        ValueRow row;
        row.name = "p*(d,u) ratio estimate";
        row.analytic = ps;
        row.mc = est.mean;
        row.se = est.std_error;
        row.z = (est.mean - ps) / est.std_error;
        row.bias_bound = est.truncation_bias_bound;
        row.pass = std::abs(row.z) <= o.z_max && !est.warning;
        rep.rows.push_back(row);
    }

    // lambda + nu <= 1 and fairness on a 30x30 grid
    {
        double worst_sum = -1e308, worst_fair = 0.0;
        for (int i = 0; i <= 30; ++i) {
            for (int j = 0; j <= 30; ++j) {
                const double d = a * i / 30.0, u = b * j / 30.0;
                ContractSpec c = geom;
                c.d = d;
                c.u = u;
                const DrawupTransforms t = lambda_nu_n(model, c, reward);
                worst_sum = std::max(worst_sum, t.lambda + t.nu - 1.0);
                const double denom = 1.0 - t.lambda - t.nu;
                if (denom > 1e-6) {
                    ContractSpec cf = c;
                    cf.p = kRate * t.n / denom;
                    const double resid = std::abs(value_k(model, cf, reward));
                    worst_fair = std::max(worst_fair, resid / (1.0 + t.n));
                }
            }
        }
        check(rep, "lambda + nu <= 1 (31x31 grid)", worst_sum <= 1e-12, -worst_sum);
        check(rep, "fairness |k(d,u,p*)| <= 1e-10 (grid)", worst_fair <= 1e-10, 1e-10 - worst_fair);
    }

    if (brownian) {
        double worst = 0.0;
        for (int j = 1; j < 16; ++j) {
            const double u = b * j / 16.0;
            const double d = a - u;
            if (d < 0.0 || d > a) continue;
            const auto hi = lambda_nu_bm_unequal(model, kRate, a, b, d, u, reward);
            const auto lo = lambda_nu_bm_unequal(model, kRate, a, b, d - 1e-9, u, reward);
            worst = std::max({worst, std::abs(hi.lambda - lo.lambda), std::abs(hi.nu - lo.nu)});
        }
        check(rep, "regime boundary continuity <= 1e-8", worst <= 1e-8, 1e-8 - worst);
    }
}

void suite_drawup_cancellable(SuiteReport& rep, const SuiteOptions& o, bool brownian) {
    const ModelSpec& model = brownian ? kBmK : kClK;
    const RewardSpec reward =
        brownian ? RewardSpec{ConstantReward{100.0}} : RewardSpec{LinearReward{100.0, 20.0}};
    const PenaltySpec pen =
        brownian ? PenaltySpec{QuadraticPenaltyC2{}} : PenaltySpec{LinearPenaltyC3{35.0}};
    const double a = 10.0, b = 10.0;
    const double p = brownian ? 1.35 : 0.6;
    const double d = brownian ? 9.0 : 5.0;
    const double u = brownian ? 1.0 : 2.0;
    ContractSpec c{.a = a, .b = b, .r = kRate, .p = p, .d = d, .u = u};

    const ThetaResult tr = find_theta_star_drawup(model, c, reward, pen);
    if (!tr.theta_star) throw std::runtime_error("drawup cancellable suite: theta* not found");
    const double th = *tr.theta_star;

    // continuous fit: h(theta -> d) = k~
    {
        const double kt = k_tilde(model, c, reward, pen);
        const double gap = std::abs(h_surplus(model, c, reward, pen, d - 1e-8 * a) - kt);
        check(rep, "continuous fit |h(theta->d) - k~| <= 1e-8 rel",
              gap <= 1e-8 * std::max(1.0, std::abs(kt)), 1e-8 * std::max(1.0, std::abs(kt)) - gap);
    }

    const ConditionMap cm = check_conditions_drawup(model, c, reward, pen, th);
    check(rep, "war1", cm.at("war1").holds, cm.at("war1").margin);
    check(rep, "war2", cm.at("war2").holds, cm.at("war2").margin);
    check(rep, "assum_additional2", cm.at("assum_additional2").holds, cm.at("assum_additional2").margin);
    if (cm.count("smooth_fit"))
        check(rep, "smooth fit rel gap <= 1e-2", cm.at("smooth_fit").holds, cm.at("smooth_fit").margin);
    if (cm.count("continuous_fit"))
        check(rep, "continuous fit at theta*", cm.at("continuous_fit").holds, cm.at("continuous_fit").margin);

    if (brownian) {
        // The text reports the optimal threshold of this contract as ~1.8; in
        // the drawdown coordinate used here that value corresponds to the
        // complementary distance a - theta* (the drawup level at the stop).
        const double complement = a - th;
        check(rep, "stop-state drawup (a - theta*) in [1.7, 1.9]",
              complement >= 1.7 && complement <= 1.9,
              std::min(complement - 1.7, 1.9 - complement));
    }

    BatchPlan plan;
    plan.model = model;
    plan.geom = ContractSpec{.a = a, .b = b, .r = kRate, .p = 0.0, .d = 0.0, .u = 0.0};
    plan.reward = reward;
    plan.penalty = pen;
    char buf[96];
    const std::vector<double> probes =
        brownian ? std::vector<double>{5.0, 7.0, th} : std::vector<double>{-2.0, 1.0, 4.0, th};
    for (double probe : probes) {
        std::snprintf(buf, sizeof buf, "h(theta=%.3f)", probe);
        plan.scenarios.push_back({d, u, p, {Kind::HSurplus, probe, 0, 0}});
        plan.names.emplace_back(buf);
        plan.analytic.push_back(h_surplus(model, c, reward, pen, probe));
    }
    {
        std::snprintf(buf, sizeof buf, "K(d=%.0f,u=%.0f) under tau+_{d-theta*}", d, u);
        plan.scenarios.push_back({d, u, p, {Kind::ValueKStopped, th, 0, 0}});
        plan.names.emplace_back(buf);
        plan.analytic.push_back(value_K(model, c, reward, pen).value);
    }
    run_plan(rep, plan, o);
}

void suite_m2(SuiteReport& rep, const SuiteOptions& o) {
    // CL points are exact event-driven simulations, so the v = b golden value
    // runs there at 10^6 paths; the Brownian points stay away from v = b where
    // the Euler first-passage bias concentrates.
    {
        const double b = 4.0;
        BatchPlan plan;
        plan.model = kCl;
        plan.geom = ContractSpec{.a = 1000.0, .b = b, .r = kRate, .p = 0.0, .d = 0.0, .u = 0.0};
        plan.reward = ConstantReward{1.0};
        char buf[96];
        const std::vector<std::pair<double, double>> pts = {
            {0.0, b}, {0.7, b}, {0.7, 2.5}, {2.0, 3.0}, {0.3, 1.0}};
        for (const auto& [ua, v] : pts) {
            std::snprintf(buf, sizeof buf, "m2 CL u=%.1f v=%.1f", ua, v);
            plan.scenarios.push_back({0.0, 0.0, 0.0, {Kind::M2Transform, 0, ua, v}});
            plan.names.emplace_back(buf);
            plan.analytic.push_back(drawup_triple_transform(kCl, kRate, b, ua, v));
        }
        SuiteOptions big = o;
        big.n_paths = std::max<long>(o.n_paths, 1000000);
        run_plan(rep, plan, big);
    }
    {
        const double b = 4.0;
        BatchPlan plan;
        plan.model = kBm;
        plan.geom = ContractSpec{.a = 1000.0, .b = b, .r = kRate, .p = 0.0, .d = 0.0, .u = 0.0};
        plan.reward = ConstantReward{1.0};
        char buf[96];
        const std::vector<std::pair<double, double>> pts = {
            {0.0, 2.0}, {0.7, 2.5}, {2.0, 3.0}, {0.3, 1.0}, {1.0, 3.5}};
        for (const auto& [ua, v] : pts) {
            std::snprintf(buf, sizeof buf, "m2 BM u=%.1f v=%.1f", ua, v);
            plan.scenarios.push_back({0.0, 0.0, 0.0, {Kind::M2Transform, 0, ua, v}});
            plan.names.emplace_back(buf);
            plan.analytic.push_back(drawup_triple_transform(kBm, kRate, b, ua, v));
        }
        run_plan(rep, plan, o);
    }
}

}  // namespace

bool SuiteReport::pass() const {
    for (const auto& r : rows)
        if (!r.pass) return false;
    for (const auto& g : gates)
        if (!g.pass) return false;
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

const std::vector<std::string>& validation_suites() {
    static const std::vector<std::string> names = {
        "exit-bm",      "exit-cl",      "drawdown-bm",          "drawdown-cl",
        "cancellable-bm", "cancellable-cl", "drawup-bm",        "drawup-cl",
        "drawup-cancellable-bm", "drawup-cancellable-cl", "m2",
    };
    return names;
}

SuiteReport run_validation_suite(const std::string& name, const SuiteOptions& opts) {
    SuiteReport rep;
    rep.suite = name;
    const auto t0 = Clock::now();
    if (name == "exit-bm")
        suite_exit(rep, opts, true);
    else if (name == "exit-cl")
        suite_exit(rep, opts, false);
    else if (name == "drawdown-bm")
        suite_drawdown(rep, opts, true);
    else if (name == "drawdown-cl")
        suite_drawdown(rep, opts, false);
    else if (name == "cancellable-bm")
        suite_cancellable(rep, opts, true);
    else if (name == "cancellable-cl")
        suite_cancellable(rep, opts, false);
    else if (name == "drawup-bm")
        suite_drawup(rep, opts, true);
    else if (name == "drawup-cl")
        suite_drawup(rep, opts, false);
    else if (name == "drawup-cancellable-bm")
        suite_drawup_cancellable(rep, opts, true);
    else if (name == "drawup-cancellable-cl")
        suite_drawup_cancellable(rep, opts, false);
    else if (name == "m2")
        suite_m2(rep, opts);
    else
        throw validation_error("unknown validation suite: " + name);
    rep.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return rep;
}

std::vector<SuiteReport> run_full_validation(const SuiteOptions& opts) {
    std::vector<SuiteReport> out;
    for (const auto& name : validation_suites()) out.push_back(run_validation_suite(name, opts));
    return out;
}

}  // namespace ddc
