#include "ddc/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>
#include <ostream>
#include <thread>

#include "ddc/drawdown.hpp"
#include "ddc/drawup.hpp"
#include "ddc/rng.hpp"

namespace ddc {

namespace {

constexpr double kInf = 1e300;  // finite sentinel: kernels compile under -ffast-math

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}
std::uint64_t fnv1a_d(std::uint64_t h, double v) { return fnv1a(h, &v, sizeof v); }
std::uint64_t fnv1a_u(std::uint64_t h, std::uint64_t v) { return fnv1a(h, &v, sizeof v); }

// Engine-side scenario: watches + payoff recipe.
struct Sc {
    double d = 0.0, u = 0.0, p = 0.0;
    bool w_dd = false;        // tau_D^+(a)
    bool w_du = false;        // tau_U^+(b)
    bool w_th = false;        // tau^+_{level}: X up-crosses th_level
    bool w_dc = false;        // tau_D^-(theta_dc)
    double th_level = 0.0;
    double theta_dc = 0.0;

    McTarget::Kind kind = McTarget::Kind::Xi;
    bool fair_legs = false;   // collect (reward leg, discount leg) pair
    double u_arg = 0.0, v = 0.0;
    double const_at_theta = 0.0;      // f~(theta) for GSurplus
    double const_immediate = 0.0;     // value when the rule fires at t = 0
    std::function<double(double)> ktilde_of_u;  // HSurplus: U at stop -> k~
    double payoff_cap = 1.0;          // remaining-value bound per capped path
};

struct Batch {
    ModelSpec sim_model;  // model the paths are drawn from (may be overridden)
    double a = 0.0;
    double b = 0.0;  // 0: no drawup level
    double r = 0.0;
    double dt = 1e-3;
    double horizon = 0.0;
    bool antithetic = false;
    std::vector<Sc> sc;
    const RewardSpec* reward = nullptr;
    const PenaltySpec* penalty = nullptr;  // may be null
};

// ---------------------------------------------------------------------------
// Per-path monitor bookkeeping shared by both kernels.

struct PathMon {
    const Batch* batch = nullptr;
    std::vector<int> dd_order;  // scenarios watching drawdown, d descending
    std::vector<int> du_order;  // scenarios watching drawup,   u descending
    std::vector<int> th_order;  // x-threshold watchers, level ascending
    std::vector<int> dc_list;   // tau_D^- watchers
    std::vector<char> resolved;
    std::vector<PathEvent> ev;
    int remaining = 0;
    std::size_t hdd = 0, hdu = 0, hth = 0;
    double Ldd = -kInf, Ldu = kInf, Lth = kInf, Ldc = kInf, Lup = kInf;

    void init_orders(const Batch& b) {
        batch = &b;
        const int n = static_cast<int>(b.sc.size());
        resolved.assign(n, 0);
        ev.assign(n, PathEvent{});
        for (int i = 0; i < n; ++i) {
            if (b.sc[i].w_dd) dd_order.push_back(i);
            if (b.sc[i].w_du) du_order.push_back(i);
            if (b.sc[i].w_th) th_order.push_back(i);
            if (b.sc[i].w_dc) dc_list.push_back(i);
        }
        std::sort(dd_order.begin(), dd_order.end(),
                  [&](int x, int y) { return b.sc[x].d > b.sc[y].d; });
        std::sort(du_order.begin(), du_order.end(),
                  [&](int x, int y) { return b.sc[x].u > b.sc[y].u; });
        std::sort(th_order.begin(), th_order.end(),
                  [&](int x, int y) { return b.sc[x].th_level < b.sc[y].th_level; });
    }

    void reset() {
        std::fill(resolved.begin(), resolved.end(), 0);
        remaining = static_cast<int>(resolved.size());
        hdd = hdu = hth = 0;
    }

    void finish(int i, EventKind kind, double t, double dd, double du, double xmin, double xmax) {
        resolved[i] = 1;
        --remaining;
        ev[i] = PathEvent{kind, t, dd, du, xmin, xmax};
    }

    void refresh_levels(double M, double m) {
        const Batch& b = *batch;
        while (hdd < dd_order.size() && resolved[dd_order[hdd]]) ++hdd;
        while (hdu < du_order.size() && resolved[du_order[hdu]]) ++hdu;
        while (hth < th_order.size() && resolved[th_order[hth]]) ++hth;
        Ldd = hdd < dd_order.size() ? std::max(M, b.sc[dd_order[hdd]].d) - b.a : -kInf;
        Ldu = hdu < du_order.size() ? std::min(m, -b.sc[du_order[hdu]].u) + b.b : kInf;
        Lth = hth < th_order.size() ? b.sc[th_order[hth]].th_level : kInf;
        Ldc = kInf;
        for (int i : dc_list)
            if (!resolved[i]) Ldc = std::min(Ldc, std::max(M, b.sc[i].d) - b.sc[i].theta_dc);
        Lup = std::min(std::min(Ldu, Lth), Ldc);
    }

    inline void on_new_max(double M) {
        const Batch& b = *batch;
        if (hdd < dd_order.size()) Ldd = std::max(M, b.sc[dd_order[hdd]].d) - b.a;
        if (!dc_list.empty()) {
            Ldc = kInf;
            for (int i : dc_list)
                if (!resolved[i]) Ldc = std::min(Ldc, std::max(M, b.sc[i].d) - b.sc[i].theta_dc);
            Lup = std::min(std::min(Ldu, Lth), Ldc);
        }
    }

    inline void on_new_min(double m) {
        const Batch& b = *batch;
        if (hdu < du_order.size()) {
            Ldu = std::min(m, -b.sc[du_order[hdu]].u) + b.b;
            Lup = std::min(std::min(Ldu, Lth), Ldc);
        }
    }

    // t = 0 immediate triggers, in the priority drawdown, drawup, threshold.
    void resolve_initial(double M0, double m0) {
        const Batch& b = *batch;
        for (std::size_t i = 0; i < b.sc.size(); ++i) {
            const Sc& s = b.sc[i];
            if (s.w_dd && s.d >= b.a)
                finish(static_cast<int>(i), EventKind::DrawdownHit, 0.0, s.d, s.u, m0, M0);
            else if (s.w_du && s.u >= b.b)
                finish(static_cast<int>(i), EventKind::DrawupHit, 0.0, s.d, s.u, m0, M0);
            else if (s.w_th && 0.0 >= s.th_level)
                finish(static_cast<int>(i), EventKind::ThresholdHit, 0.0, s.d, s.u, m0, M0);
            else if (s.w_dc && s.d <= s.theta_dc)
                finish(static_cast<int>(i), EventKind::ThresholdHit, 0.0, s.d, s.u, m0, M0);
        }
    }

    // Slow path: x rose to xn; resolve every up-watch whose level was crossed.
    void resolve_up(double xn, double t, double M, double m) {
        const Batch& b = *batch;
        while (remaining > 0 && xn > Lup) {
            int who = -1;
            double lvl = kInf;
            EventKind kind = EventKind::ThresholdHit;
            if (Ldu <= Lth && Ldu <= Ldc) {
                who = du_order[hdu];
                lvl = Ldu;
                kind = EventKind::DrawupHit;
            } else if (Lth <= Ldc) {
                who = th_order[hth];
                lvl = Lth;
                kind = EventKind::ThresholdHit;
            } else {
                for (int i : dc_list)
                    if (!resolved[i] && std::max(M, b.sc[i].d) - b.sc[i].theta_dc <= Ldc) {
                        who = i;
                        lvl = std::max(M, b.sc[i].d) - b.sc[i].theta_dc;
                        kind = EventKind::ThresholdHit;
                    }
            }
            // within the chosen scenario, the lowest of its own up-levels fired
            const Sc& s = b.sc[who];
            double own = lvl;
            EventKind own_kind = kind;
            if (s.w_du) {
                const double l = std::min(m, -s.u) + b.b;
                if (l < own) {
                    own = l;
                    own_kind = EventKind::DrawupHit;
                }
            }
            if (s.w_th && s.th_level < own) {
                own = s.th_level;
                own_kind = EventKind::ThresholdHit;
            }
            if (s.w_dc) {
                const double l = std::max(M, s.d) - s.theta_dc;
                if (l < own) {
                    own = l;
                    own_kind = EventKind::ThresholdHit;
                }
            }
            const double x_cross = own;
            double dd_at, du_at;
            if (own_kind == EventKind::DrawupHit) {
                du_at = b.b;
                dd_at = std::max(0.0, std::max(M, s.d) - x_cross);
            } else {
                dd_at = std::max(0.0, std::max(M, s.d) - x_cross);
                du_at = std::max(0.0, x_cross - std::min(m, -s.u));
            }
            finish(who, own_kind, t, dd_at, du_at, m, std::max(M, x_cross));
            refresh_levels(M, m);
        }
    }

    void resolve_down(double xn, double t, double M, double m, bool brownian) {
        const Batch& b = *batch;
        while (remaining > 0 && xn < Ldd) {
            const int who = dd_order[hdd];
            const Sc& s = b.sc[who];
            const double x_cross = std::max(M, s.d) - b.a;
            const double dd_at = brownian ? b.a : std::max(M, s.d) - xn;
            const double du_at = std::max(0.0, x_cross - std::min(m, -s.u));
            finish(who, EventKind::DrawdownHit, t, dd_at, du_at, std::min(m, xn), M);
            refresh_levels(M, m);
        }
    }
};

// ---------------------------------------------------------------------------
// Brownian kernel: Euler steps, per-step extreme tracking.

void run_path_bm(const LinearBrownian& bm, const Batch& b, PathMon& mon, NormalStream& ns, double sign) {
    mon.reset();
    mon.resolve_initial(0.0, 0.0);
    double x = 0.0, M = 0.0, m = 0.0;
    mon.refresh_levels(M, m);
    if (mon.remaining == 0) return;

    // Extremes update before the trigger checks: events are judged on the
    // end-of-step state (the lockstep engine uses the same convention).
    const double mu_dt = bm.mu * b.dt;
    const double sig_sqdt = bm.sigma * std::sqrt(b.dt) * sign;
    const long n_steps = static_cast<long>(std::ceil(b.horizon / b.dt));
    for (long k = 0; k < n_steps; ++k) {
        const double xn = x + mu_dt + sig_sqdt * ns.next();
        if (xn > x) {
            if (xn > M) {
                M = xn;
                mon.on_new_max(M);
            }
            if (xn > mon.Lup) {
                mon.resolve_up(xn, (k + 1) * b.dt, M, m);
                if (mon.remaining == 0) return;
            }
        } else {
            if (xn < m) {
                m = xn;
                mon.on_new_min(m);
            }
            if (xn < mon.Ldd) {
                mon.resolve_down(xn, (k + 1) * b.dt, M, m, true);
                if (mon.remaining == 0) return;
            }
        }
        x = xn;
    }
    // horizon cap
    for (std::size_t i = 0; i < b.sc.size(); ++i)
        if (!mon.resolved[i]) {
            const Sc& s = b.sc[i];
            mon.finish(static_cast<int>(i), EventKind::HorizonCapped, b.horizon,
                       std::max(M, s.d) - x, std::max(0.0, x - std::min(m, -s.u)), m, M);
        }
}

// ---------------------------------------------------------------------------
// Cramer-Lundberg kernel: exact event-driven simulation. Between jumps X
// rises at rate mu_hat, so every up-crossing time solves a linear equation.

void run_path_cl(const CramerLundberg& cl, const Batch& b, PathMon& mon, UniformStream& us) {
    mon.reset();
    mon.resolve_initial(0.0, 0.0);
    double x = 0.0, M = 0.0, m = 0.0, t = 0.0;
    if (mon.remaining == 0) return;

    const double mh = cl.mu_hat;
    while (mon.remaining > 0 && t < b.horizon) {
        const double seg = cl.beta > 0.0 ? -std::log(us.next()) / cl.beta : kInf;
        double seg_end = std::min(t + seg, b.horizon);
        // up-crossings within the drift segment, earliest first
        while (mon.remaining > 0) {
            int who = -1;
            EventKind kind = EventKind::ThresholdHit;
            double best_lvl = kInf;
            for (std::size_t i = 0; i < b.sc.size(); ++i) {
                if (mon.resolved[i]) continue;
                const Sc& s = b.sc[i];
                if (s.w_du) {
                    const double l = std::min(m, -s.u) + b.b;
                    if (l < best_lvl && l >= x) {
                        best_lvl = l;
                        who = static_cast<int>(i);
                        kind = EventKind::DrawupHit;
                    }
                }
                if (s.w_th && s.th_level < best_lvl && s.th_level >= x) {
                    best_lvl = s.th_level;
                    who = static_cast<int>(i);
                    kind = EventKind::ThresholdHit;
                }
                if (s.w_dc) {
                    const double l = std::max(M, s.d) - s.theta_dc;
                    if (l < best_lvl && l >= x) {
                        best_lvl = l;
                        who = static_cast<int>(i);
                        kind = EventKind::ThresholdHit;
                    }
                }
            }
            if (who < 0) break;
            const double t_cross = t + (best_lvl - x) / mh;
            if (t_cross > seg_end) break;
            const Sc& s = b.sc[who];
            double dd_at, du_at;
            if (kind == EventKind::DrawupHit) {
                du_at = b.b;
                dd_at = std::max(0.0, std::max(M, s.d) - best_lvl);
            } else {
                dd_at = std::max(0.0, std::max(M, s.d) - best_lvl);
                du_at = std::max(0.0, best_lvl - std::min(m, -s.u));
            }
            x = best_lvl;
            t = t_cross;
            M = std::max(M, x);
            mon.finish(who, kind, t_cross, dd_at, du_at, m, std::max(M, best_lvl));
        }
        if (mon.remaining == 0) return;
        // advance to segment end
        x += mh * (seg_end - t);
        M = std::max(M, x);
        t = seg_end;
        if (t >= b.horizon) break;
        // jump
        const double eta = -std::log(us.next()) / cl.rho;
        x -= eta;
        m = std::min(m, x);
        for (std::size_t i = 0; i < b.sc.size(); ++i) {
            if (mon.resolved[i] || !b.sc[i].w_dd) continue;
            const Sc& s = b.sc[i];
            const double dd_after = std::max(M, s.d) - x;
            if (dd_after > b.a)
                mon.finish(static_cast<int>(i), EventKind::DrawdownHit, t, dd_after,
                           std::max(0.0, x - std::min(m, -s.u)), m, M);
        }
    }
    for (std::size_t i = 0; i < b.sc.size(); ++i)
        if (!mon.resolved[i]) {
            const Sc& s = b.sc[i];
            mon.finish(static_cast<int>(i), EventKind::HorizonCapped, b.horizon,
                       std::max(M, s.d) - x, std::max(0.0, x - std::min(m, -s.u)), m, M);
        }
}

// ---------------------------------------------------------------------------

struct PayoffPair {
    double y = 0.0, z = 0.0;
    bool capped = false;
};

PayoffPair payoff(const Batch& b, const Sc& s, const PathEvent& e) {
    using K = McTarget::Kind;
    PayoffPair out;
    out.capped = e.kind == EventKind::HorizonCapped;
    const double disc = std::exp(-b.r * e.time);
    const double prem = s.p > 0.0 ? s.p / b.r * (disc - 1.0) : 0.0;
    const bool dd = e.kind == EventKind::DrawdownHit;
    const bool du = e.kind == EventKind::DrawupHit;
    const bool th = e.kind == EventKind::ThresholdHit;
    if (s.fair_legs) {
        out.y = dd ? disc * reward_at(*b.reward, e.drawdown_at_event) : 0.0;
        out.z = (dd || du) ? disc : 0.0;
        return out;
    }
    switch (s.kind) {
        case K::Xi:
            out.y = dd ? disc : 0.0;
            break;
        case K::RewardTransform:
            out.y = dd ? disc * reward_at(*b.reward, e.drawdown_at_event) : 0.0;
            break;
        case K::ValueF:
        case K::ValueK:
            out.y = prem + (dd ? disc * reward_at(*b.reward, e.drawdown_at_event) : 0.0);
            break;
        case K::GSurplus:
            out.y = th ? disc * (e.time == 0.0 ? s.const_immediate : s.const_at_theta) : 0.0;
            break;
        case K::ValueFStopped:
        case K::ValueKStopped:
            out.y = prem;
            if (dd)
                out.y += disc * reward_at(*b.reward, e.drawdown_at_event);
            else if (th)
                out.y -= disc * penalty_value(*b.penalty, s.p, b.r, b.a, e.drawdown_at_event);
            break;
        case K::Lambda:
            out.y = du ? disc : 0.0;
            break;
        case K::Nu:
            out.y = dd ? disc : 0.0;
            break;
        case K::BigN:
            out.y = dd ? disc * reward_at(*b.reward, e.drawdown_at_event) : 0.0;
            break;
        case K::HSurplus:
            out.y = th ? disc * (e.time == 0.0 ? s.const_immediate : s.ktilde_of_u(e.drawup_at_event))
                       : 0.0;
            break;
        case K::M2Transform:
            out.y = du && e.x_max < s.v ? disc * std::exp(s.u_arg * e.x_min) : 0.0;
            break;
        case K::TwoSidedUp:
            out.y = th ? disc : 0.0;
            break;
        case K::TwoSidedDown:
            out.y = dd ? disc : 0.0;
            break;
    }
    return out;
}

struct BlockSums {
    double sy = 0, sy2 = 0, sz = 0, sz2 = 0, syz = 0;
    long ncap = 0;
};

// One lockstep step over 8 lanes; returns nonzero when any lane triggered.
// Kept out-of-line: the isolated loop vectorises to a single 512-bit pass.
struct LaneArrays {
    alignas(64) double x[8], mx[8], mn[8], sleft[8];
    alignas(64) double dh[8], ca[8], uh[8], cb[8], lth[8], dcd[8], dct[8];
    alignas(64) double trig[8];
};

__attribute__((noinline)) double lane_sweep(LaneArrays* __restrict la, const double* __restrict z,
                                            double mu_dt, double sig_dt) {
    for (int l = 0; l < 8; ++l) {
        const double xn = la->x[l] + mu_dt + sig_dt * z[l];
        const double Mn = std::max(la->mx[l], xn);
        const double mnn = std::min(la->mn[l], xn);
        const double ldd = std::max(Mn, la->dh[l]) - la->ca[l];
        double lup = std::min(mnn, la->uh[l]) + la->cb[l];
        lup = std::min(lup, la->lth[l]);
        lup = std::min(lup, std::max(Mn, la->dcd[l]) - la->dct[l]);
        const double sl = la->sleft[l] - 1.0;
        la->x[l] = xn;
        la->mx[l] = Mn;
        la->mn[l] = mnn;
        la->sleft[l] = sl;
        la->trig[l] = (xn < ldd || xn > lup || sl <= 0.0) ? 1.0 : 0.0;
    }
    return la->trig[0] + la->trig[1] + la->trig[2] + la->trig[3] + la->trig[4] + la->trig[5] +
           la->trig[6] + la->trig[7];
}

double pairwise(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise(v, lo, mid) + pairwise(v, mid, hi);
}

// ---------------------------------------------------------------------------
// Lane-lockstep Brownian engine: 8 paths advance together through plain
// arrays the vectoriser likes; triggers and monitor bookkeeping drop to the
// shared PathMon slow path. Job = one sample (an antithetic pair or a path).

class LockstepBm {
  public:
    static constexpr int W = 8;
    static constexpr int kWin = 256;

    LockstepBm(const Batch& b, const McConfig& cfg)
        : b_(b), cfg_(cfg), bm_(std::get<LinearBrownian>(b.sim_model)) {
        mu_dt_ = bm_.mu * b.dt;
        sig_dt_ = bm_.sigma * std::sqrt(b.dt);
        n_steps_ = static_cast<double>(static_cast<long>(std::ceil(b.horizon / b.dt)));
        S_ = b.sc.size();
        for (int l = 0; l < W; ++l) {
            mons_[l].init_orders(b);
            pend_y_[l].assign(S_, 0.0);
            pend_z_[l].assign(S_, 0.0);
            pend_capped_[l].assign(S_, 0);
        }
    }

    void run_block(long job_lo, long job_hi, BlockSums* sums) {
        next_job_ = job_lo;
        job_hi_ = job_hi;
        sums_ = sums;
        live_ = 0;
        for (int l = 0; l < W; ++l) {
            lane_job_[l] = -1;
            phase1_pending_[l] = false;
            kill_lane(l);
            try_load(l);
        }
        while (live_ > 0) {
            for (int l = 0; l < W; ++l)
                if (lane_job_[l] >= 0) refill_lane(l);
            for (int pos = 0; pos < kWin && live_ > 0; ++pos) {
                const double* z = zbuf_ + static_cast<std::size_t>(pos) * W;
                const double any = lane_sweep(&la_, z, mu_dt_, sig_dt_);
                if (any != 0.0) {
                    for (int l = 0; l < W; ++l)
                        if (la_.trig[l] != 0.0 && lane_job_[l] >= 0) slow(l);
                }
            }
            for (int l = 0; l < W; ++l)
                if (lane_job_[l] == kDrained) try_load(l);
        }
    }

  private:
    static constexpr long kDrained = -2;

    const Batch& b_;
    const McConfig& cfg_;
    const LinearBrownian& bm_;
    double mu_dt_ = 0.0, sig_dt_ = 0.0, n_steps_ = 0.0;
    std::size_t S_ = 0;

    LaneArrays la_;
    alignas(64) double zbuf_[kWin * W];
    PathMon mons_[W];
    std::uint64_t key_[W];
    std::uint64_t norm_idx_[W];
    long lane_job_[W];
    bool phase1_pending_[W];
    bool negate_[W];
    std::vector<double> pend_y_[W], pend_z_[W];
    std::vector<int> pend_capped_[W];

    long next_job_ = 0, job_hi_ = 0;
    BlockSums* sums_ = nullptr;
    int live_ = 0;

    void kill_lane(int l) {
        la_.x[l] = la_.mx[l] = la_.mn[l] = 0.0;
        la_.sleft[l] = kInf;
        la_.dh[l] = -kInf;
        la_.ca[l] = kInf;
        la_.uh[l] = kInf;
        la_.cb[l] = kInf;
        la_.lth[l] = kInf;
        la_.dcd[l] = -kInf;
        la_.dct[l] = -kInf;
    }

    void refill_lane(int l) {
        double tmp[kWin];
        fill_normals(key_[l], norm_idx_[l], kWin, tmp, negate_[l]);
        norm_idx_[l] += kWin;
        for (int i = 0; i < kWin; ++i) zbuf_[static_cast<std::size_t>(i) * W + l] = tmp[i];
    }

    void load_caches(int l) {
        PathMon& mon = mons_[l];
        const Batch& b = b_;
        mon.refresh_levels(la_.mx[l], la_.mn[l]);
        if (mon.hdd < mon.dd_order.size()) {
            la_.dh[l] = b.sc[mon.dd_order[mon.hdd]].d;
            la_.ca[l] = b.a;
        } else {
            la_.dh[l] = -kInf;
            la_.ca[l] = kInf;
        }
        if (mon.hdu < mon.du_order.size()) {
            la_.uh[l] = -b.sc[mon.du_order[mon.hdu]].u;
            la_.cb[l] = b.b;
        } else {
            la_.uh[l] = kInf;
            la_.cb[l] = kInf;
        }
        la_.lth[l] = mon.hth < mon.th_order.size() ? b.sc[mon.th_order[mon.hth]].th_level : kInf;
        la_.dcd[l] = -kInf;
        la_.dct[l] = -kInf;
        double best = kInf;
        for (int i : mon.dc_list)
            if (!mon.resolved[i]) {
                const double lvl = std::max(la_.mx[l], b.sc[i].d) - b.sc[i].theta_dc;
                if (lvl < best) {
                    best = lvl;
                    la_.dcd[l] = b.sc[i].d;
                    la_.dct[l] = b.sc[i].theta_dc;
                }
            }
    }

    void slow(int l) {
        PathMon& mon = mons_[l];
        if (la_.sleft[l] <= 0.0) {
            for (std::size_t i = 0; i < S_; ++i)
                if (!mon.resolved[i]) {
                    const Sc& s = b_.sc[i];
                    mon.finish(static_cast<int>(i), EventKind::HorizonCapped, b_.horizon,
                               std::max(la_.mx[l], s.d) - la_.x[l],
                               std::max(0.0, la_.x[l] - std::min(la_.mn[l], -s.u)), la_.mn[l], la_.mx[l]);
                }
            complete(l);
            return;
        }
        const double t_now = (n_steps_ - la_.sleft[l]) * b_.dt;
        mon.refresh_levels(la_.mx[l], la_.mn[l]);
        if (la_.x[l] < mon.Ldd) mon.resolve_down(la_.x[l], t_now, la_.mx[l], la_.mn[l], true);
        if (la_.x[l] > mon.Lup) mon.resolve_up(la_.x[l], t_now, la_.mx[l], la_.mn[l]);
        if (mon.remaining == 0) {
            complete(l);
            return;
        }
        load_caches(l);
    }

    void complete(int l) {
        PathMon& mon = mons_[l];
        const bool anti = b_.antithetic;
        if (anti && !negate_[l]) {
            for (std::size_t i = 0; i < S_; ++i) {
                const PayoffPair pp = payoff(b_, b_.sc[i], mon.ev[i]);
                pend_y_[l][i] = pp.y;
                pend_z_[l][i] = pp.z;
                pend_capped_[l][i] = pp.capped ? 1 : 0;
            }
            phase1_pending_[l] = true;
        } else {
            for (std::size_t i = 0; i < S_; ++i) {
                const PayoffPair pp = payoff(b_, b_.sc[i], mon.ev[i]);
                const double y = anti ? 0.5 * (pend_y_[l][i] + pp.y) : pp.y;
                const double zz = anti ? 0.5 * (pend_z_[l][i] + pp.z) : pp.z;
                BlockSums& bs = sums_[i];
                bs.sy += y;
                bs.sy2 += y * y;
                bs.sz += zz;
                bs.sz2 += zz * zz;
                bs.syz += y * zz;
                bs.ncap += (pp.capped ? 1 : 0) + (anti ? pend_capped_[l][i] : 0);
            }
        }
        lane_job_[l] = kDrained;
        kill_lane(l);
        --live_;
    }

    void try_load(int l) {
        for (;;) {
            long job;
            bool negate;
            if (phase1_pending_[l]) {
                phase1_pending_[l] = false;
                job = pend_job_[l];
                negate = true;
            } else if (next_job_ < job_hi_) {
                job = next_job_++;
                negate = false;
            } else {
                lane_job_[l] = -1;
                return;
            }
            pend_job_[l] = job;
            // set up the lane
            PathMon& mon = mons_[l];
            mon.reset();
            mon.resolve_initial(0.0, 0.0);
            la_.x[l] = la_.mx[l] = la_.mn[l] = 0.0;
            la_.sleft[l] = n_steps_;
            key_[l] = stream_key(cfg_.seed, static_cast<std::uint64_t>(job) *
                                                static_cast<std::uint64_t>(cfg_.stream_stride));
            norm_idx_[l] = 0;
            negate_[l] = negate;
            lane_job_[l] = job;
            ++live_;
            if (mon.remaining == 0) {
                complete(l);  // resolved at t = 0; keep cycling
                continue;
            }
            load_caches(l);
            return;
        }
    }

    long pend_job_[W];
};


}  // namespace

int mc_thread_count() {
    if (const char* env = std::getenv("DDC_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

void validate_config(const McConfig& cfg, double r) {
    if (cfg.n_paths < 100) throw validation_error("McConfig: n_paths must be >= 100");
    if (cfg.stream_stride < 1) throw validation_error("McConfig: stream_stride must be >= 1");
    if (!(cfg.time_step > 0.0)) throw validation_error("McConfig: time_step must be > 0");
    if (cfg.horizon_cap == 0.0 && r <= 0.0)
        throw validation_error("McConfig: horizon_cap required when r = 0");
    if (cfg.horizon_cap > 0.0 && r > 0.0 && std::exp(-r * cfg.horizon_cap) > 1e-6 + 1e-12)
        throw validation_error("McConfig: horizon_cap too small, e^{-r T} must be <= 1e-6");
}

double derived_horizon(const McConfig& cfg, double r) {
    if (cfg.horizon_cap > 0.0) return cfg.horizon_cap;
    return -std::log(1e-6) / r;
}

std::uint64_t fingerprint(const ModelSpec& m, const Batch& b, const std::vector<McScenario>& scs,
                          const McConfig& cfg) {
    std::uint64_t h = 1469598103934665603ull;
    h = fnv1a_u(h, std::holds_alternative<LinearBrownian>(m) ? 1 : 2);
    if (const auto* bm = std::get_if<LinearBrownian>(&m)) {
        h = fnv1a_d(h, bm->mu);
        h = fnv1a_d(h, bm->sigma);
    } else {
        const auto& cl = std::get<CramerLundberg>(m);
        h = fnv1a_d(h, cl.mu_hat);
        h = fnv1a_d(h, cl.beta);
        h = fnv1a_d(h, cl.rho);
    }
    h = fnv1a_d(h, b.a);
    h = fnv1a_d(h, b.b);
    h = fnv1a_d(h, b.r);
    h = fnv1a_d(h, b.dt);
    h = fnv1a_d(h, b.horizon);
    h = fnv1a_u(h, static_cast<std::uint64_t>(b.antithetic));
    for (const auto& s : scs) {
        h = fnv1a_d(h, s.d);
        h = fnv1a_d(h, s.u);
        h = fnv1a_d(h, s.p);
        h = fnv1a_u(h, static_cast<std::uint64_t>(s.target.kind));
        h = fnv1a_d(h, s.target.theta);
        h = fnv1a_d(h, s.target.u_arg);
        h = fnv1a_d(h, s.target.v);
    }
    h = fnv1a_u(h, static_cast<std::uint64_t>(cfg.n_paths));
    h = fnv1a_u(h, cfg.seed);
    h = fnv1a_u(h, static_cast<std::uint64_t>(cfg.stream_stride));
    return h;
}

Batch build_batch(const ModelSpec& model, const ContractSpec& geometry, const RewardSpec& reward,
                  const std::optional<PenaltySpec>& penalty, const std::vector<McScenario>& scenarios,
                  const McConfig& cfg, bool fair_legs) {
    validate(model);
    if (cfg.model_override) validate(*cfg.model_override);
    validate_config(cfg, geometry.r);

    Batch b;
    b.sim_model = cfg.model_override ? *cfg.model_override : model;
    b.a = geometry.a;
    b.b = geometry.b.value_or(0.0);
    b.r = geometry.r;
    b.dt = cfg.time_step;
    b.horizon = derived_horizon(cfg, geometry.r);
    b.antithetic = cfg.antithetic && is_brownian(b.sim_model);
    b.reward = &reward;
    b.penalty = penalty ? &*penalty : nullptr;

    const double alpha_cap = [&] {
        if (const auto* cl = std::get_if<CramerLundberg>(&model))
            return reward_mean_at_exp_overshoot(reward, b.a, cl->rho);
        return reward_at(reward, b.a);
    }();

    using K = McTarget::Kind;
    for (const auto& in : scenarios) {
        Sc s;
        s.d = in.d;
        s.u = in.u;
        s.p = in.p;
        s.kind = in.target.kind;
        s.fair_legs = fair_legs;
        s.u_arg = in.target.u_arg;
        s.v = in.target.v;
        const double theta = in.target.theta;
        ContractSpec local = geometry;
        local.d = in.d;
        local.u = geometry.b ? std::optional<double>(in.u) : std::nullopt;
        local.p = in.p;
        switch (s.kind) {
            case K::Xi:
            case K::RewardTransform:
                s.w_dd = true;
                s.payoff_cap = s.kind == K::Xi ? 1.0 : alpha_cap;
                break;
            case K::ValueF:
                s.w_dd = true;
                s.payoff_cap = s.p / b.r + alpha_cap;
                break;
            case K::GSurplus: {
                s.w_dd = true;
                s.w_dc = true;
                s.theta_dc = theta;
                if (!penalty) throw validation_error("GSurplus target requires a penalty");
                s.const_at_theta = [&] {
                    ContractSpec c2 = local;
                    c2.d = theta;
                    c2.b.reset();
                    c2.u.reset();
                    return f_tilde(model, c2, reward, *penalty);
                }();
                s.const_immediate = [&] {
                    ContractSpec c2 = local;
                    c2.b.reset();
                    c2.u.reset();
                    return f_tilde(model, c2, reward, *penalty);
                }();
                s.payoff_cap = std::max(std::abs(s.const_at_theta), std::abs(s.const_immediate));
                break;
            }
            case K::ValueFStopped:
                s.w_dd = true;
                s.w_dc = true;
                s.theta_dc = theta;
                if (!penalty) throw validation_error("ValueFStopped target requires a penalty");
                s.payoff_cap =
                    s.p / b.r + alpha_cap + penalty_value(*penalty, s.p, b.r, b.a, 0.0);
                break;
            case K::Lambda:
            case K::Nu:
            case K::BigN:
            case K::ValueK:
                if (!geometry.b) throw validation_error("drawup targets require b");
                s.w_dd = true;
                s.w_du = true;
                s.payoff_cap = (s.kind == K::ValueK ? s.p / b.r : 0.0) +
                               (s.kind == K::Lambda || s.kind == K::Nu ? 1.0 : alpha_cap);
                break;
            case K::HSurplus:
            case K::ValueKStopped: {
                if (!geometry.b) throw validation_error("drawup targets require b");
                if (!penalty) throw validation_error("cancellable targets require a penalty");
                s.w_dd = true;
                s.w_du = true;
                s.w_th = true;
                s.th_level = in.d - theta;
                if (s.kind == K::HSurplus) {
                    const double th_pos = std::max(theta, 0.0);
                    const PenaltySpec pen = *penalty;
                    auto shared = std::make_shared<DrawupEvaluator>(model, local, reward);
                    s.ktilde_of_u = [shared, th_pos, pen](double uu) {
                        return shared->ktilde(th_pos, uu, pen);
                    };
                    s.const_immediate = s.ktilde_of_u(in.u);
                }
                s.payoff_cap =
                    s.p / b.r + alpha_cap + penalty_value(*penalty, s.p, b.r, b.a, 0.0);
                break;
            }
            case K::M2Transform:
                if (!geometry.b) throw validation_error("M2Transform requires b");
                if (in.d != 0.0 || in.u != 0.0)
                    throw validation_error("M2Transform is defined for a fresh start d = u = 0");
                s.w_du = true;
                s.payoff_cap = 1.0;
                break;
            case K::TwoSidedUp:
            case K::TwoSidedDown: {
                // X from x exits [0, a]: down-crossing is the drawdown watch
                // seeded at d = a - x (the running max cannot pass d before the
                // upper threshold fires), up-crossing is the x-threshold a - x.
                const double start = in.target.theta;
                if (start < 0.0 || start > b.a)
                    throw validation_error("two-sided targets need x in [0, a]");
                s.d = b.a - start;
                s.u = 0.0;
                s.w_dd = true;
                s.w_th = true;
                s.th_level = b.a - start;
                s.payoff_cap = 1.0;
                break;
            }
        }
        if (fair_legs) {
            s.w_dd = true;
            if (geometry.b) s.w_du = true;
            s.payoff_cap = alpha_cap + 1.0;
        }
        b.sc.push_back(std::move(s));
    }
    return b;
}

struct RunOutput {
    std::vector<BlockSums> totals;  // per scenario
    long n_samples = 0;             // pairs when antithetic, else paths
};

RunOutput run_batch(const Batch& b, const McConfig& cfg) {
    const long n_paths = cfg.n_paths;
    const bool anti = b.antithetic;
    const long unit = anti ? 2 : 1;
    const long n_samples = n_paths / unit;
    constexpr long kBlock = 2048;  // samples per block
    const long n_blocks = (n_samples + kBlock - 1) / kBlock;
    const std::size_t S = b.sc.size();

    // per block, per scenario partial sums
    std::vector<BlockSums> block_sums(static_cast<std::size_t>(n_blocks) * S);

    std::atomic<long> next_block{0};
    const int n_threads = std::min<long>(mc_thread_count(), n_blocks);
    const bool brownian = is_brownian(b.sim_model);

    auto worker = [&]() {
        if (brownian) {
            LockstepBm engine(b, cfg);
            for (;;) {
                const long blk = next_block.fetch_add(1, std::memory_order_relaxed);
                if (blk >= n_blocks) break;
                BlockSums* sums = &block_sums[static_cast<std::size_t>(blk) * S];
                const long lo = blk * kBlock, hi = std::min(n_samples, lo + kBlock);
                engine.run_block(lo, hi, sums);
            }
            return;
        }
        PathMon mon;
        mon.init_orders(b);
        std::optional<UniformStream> us;
        for (;;) {
            const long blk = next_block.fetch_add(1, std::memory_order_relaxed);
            if (blk >= n_blocks) break;
            BlockSums* sums = &block_sums[static_cast<std::size_t>(blk) * S];
            const long lo = blk * kBlock, hi = std::min(n_samples, lo + kBlock);
            for (long samp = lo; samp < hi; ++samp) {
                const std::uint64_t stream =
                    static_cast<std::uint64_t>(samp) * static_cast<std::uint64_t>(cfg.stream_stride);
                const auto& cl = std::get<CramerLundberg>(b.sim_model);
                us.emplace(cfg.seed ^ 0x9e3779b97f4a7c15ull, stream);
                run_path_cl(cl, b, mon, *us);
                for (std::size_t i = 0; i < S; ++i) {
                    const PayoffPair pp = payoff(b, b.sc[i], mon.ev[i]);
                    BlockSums& bs = sums[i];
                    bs.sy += pp.y;
                    bs.sy2 += pp.y * pp.y;
                    bs.sz += pp.z;
                    bs.sz2 += pp.z * pp.z;
                    bs.syz += pp.y * pp.z;
                    bs.ncap += pp.capped ? 1 : 0;
                }
            }
        }
    };

    if (b.sc.size() > 64) throw validation_error("mc_estimate_batch: at most 64 scenarios per batch");
    std::vector<std::thread> pool;
    for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    // fixed-order pairwise reduction over blocks
    RunOutput out;
    out.n_samples = n_samples;
    out.totals.resize(S);
    std::vector<double> tmp(n_blocks);
    for (std::size_t i = 0; i < S; ++i) {
        BlockSums tot;
        const auto reduce_field = [&](double BlockSums::*f) {
            for (long blk = 0; blk < n_blocks; ++blk)
                tmp[blk] = block_sums[static_cast<std::size_t>(blk) * S + i].*f;
            return pairwise(tmp, 0, static_cast<std::size_t>(n_blocks));
        };
        tot.sy = reduce_field(&BlockSums::sy);
        tot.sy2 = reduce_field(&BlockSums::sy2);
        tot.sz = reduce_field(&BlockSums::sz);
        tot.sz2 = reduce_field(&BlockSums::sz2);
        tot.syz = reduce_field(&BlockSums::syz);
        for (long blk = 0; blk < n_blocks; ++blk)
            tot.ncap += block_sums[static_cast<std::size_t>(blk) * S + i].ncap;
        out.totals[i] = tot;
    }
    return out;
}

McEstimate finalize(const Batch& b, const Sc& s, const BlockSums& t, long n_samples, long n_paths,
                    std::uint64_t fp) {
    McEstimate e;
    e.n_paths = n_paths;
    e.config_fingerprint = fp;
    const double n = static_cast<double>(n_samples);
    e.mean = t.sy / n;
    const double var = std::max(0.0, (t.sy2 - n * e.mean * e.mean) / std::max(1.0, n - 1.0));
    e.std_error = std::sqrt(var / n);
    const double frac_capped =
        static_cast<double>(t.ncap) / static_cast<double>(n_paths);
    e.truncation_bias_bound = frac_capped * std::exp(-b.r * b.horizon) * s.payoff_cap;
    return e;
}

}  // namespace

std::vector<McEstimate> mc_estimate_batch(const ModelSpec& model, const ContractSpec& geometry,
                                          const RewardSpec& reward,
                                          const std::optional<PenaltySpec>& penalty,
                                          const std::vector<McScenario>& scenarios,
                                          const McConfig& config) {
    const Batch b = build_batch(model, geometry, reward, penalty, scenarios, config, false);
    const std::uint64_t fp = fingerprint(b.sim_model, b, scenarios, config);
    const RunOutput ro = run_batch(b, config);
    std::vector<McEstimate> out;
    out.reserve(scenarios.size());
    for (std::size_t i = 0; i < scenarios.size(); ++i)
        out.push_back(finalize(b, b.sc[i], ro.totals[i], ro.n_samples, config.n_paths, fp));
    return out;
}

McEstimate mc_estimate(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
                       const std::optional<PenaltySpec>& penalty, const McTarget& target,
                       const McConfig& config) {
    McScenario sc;
    sc.d = contract.d;
    sc.u = contract.u.value_or(0.0);
    sc.p = contract.p;
    sc.target = target;
    return mc_estimate_batch(model, contract, reward, penalty, {sc}, config)[0];
}

McEstimate mc_fair_premium(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
                           const McConfig& config) {
    McScenario sc;
    sc.d = contract.d;
    sc.u = contract.u.value_or(0.0);
    sc.p = 0.0;
    sc.target.kind = McTarget::Kind::RewardTransform;
    const Batch b = build_batch(model, contract, reward, std::nullopt, {sc}, config, true);
    const std::uint64_t fp = fingerprint(b.sim_model, b, {sc}, config) ^ 0x5851f42d4c957f2dull;
    const RunOutput ro = run_batch(b, config);
    const BlockSums& t = ro.totals[0];
    const double n = static_cast<double>(ro.n_samples);
    const double A = t.sy / n, B = t.sz / n;
    const double vA = std::max(0.0, (t.sy2 - n * A * A) / std::max(1.0, n - 1.0));
    const double vB = std::max(0.0, (t.sz2 - n * B * B) / std::max(1.0, n - 1.0));
    const double cAB = (t.syz - n * A * B) / std::max(1.0, n - 1.0);
    const double denom = 1.0 - B;
    McEstimate e;
    e.n_paths = config.n_paths;
    e.config_fingerprint = fp;
    const double se_B = std::sqrt(vB / n);
    if (denom <= 3.0 * se_B) {
        e.warning = true;
        e.mean = 0.0;
        e.std_error = std::numeric_limits<double>::infinity();
        return e;
    }
    const double r = contract.r;
    e.mean = r * A / denom;
    const double gA = r / denom;
    const double gB = r * A / (denom * denom);
    const double var = gA * gA * vA + gB * gB * vB + 2.0 * gA * gB * cAB;
    e.std_error = std::sqrt(std::max(0.0, var) / n);
    const double cap_term = std::exp(-b.r * b.horizon) * (static_cast<double>(t.ncap) / config.n_paths);
    e.truncation_bias_bound = (gA * b.sc[0].payoff_cap + std::abs(gB)) * cap_term;
    return e;
}

void dump_path_events(std::ostream& os, const ModelSpec& model, const ContractSpec& contract,
                      const McConfig& config) {
    McScenario sc;
    sc.d = contract.d;
    sc.u = contract.u.value_or(0.0);
    sc.p = contract.p;
    sc.target.kind = contract.b ? McTarget::Kind::Nu : McTarget::Kind::Xi;
    RewardSpec rw = ConstantReward{0.0};
    const Batch b = build_batch(model, contract, rw, std::nullopt, {sc}, config, false);
    os << "path_index,kind,time,drawdown_at_event,drawup_at_event\n";
    PathMon mon;
    mon.init_orders(b);
    NormalStream ns(config.seed, 0);
    const bool brownian = is_brownian(b.sim_model);
    const long unit = b.antithetic ? 2 : 1;
    for (long i = 0; i < config.n_paths; ++i) {
        const std::uint64_t stream = static_cast<std::uint64_t>(i / unit) *
                                     static_cast<std::uint64_t>(config.stream_stride);
        if (brownian) {
            ns.reset(config.seed, stream);
            run_path_bm(std::get<LinearBrownian>(b.sim_model), b, mon, ns,
                        (b.antithetic && (i & 1)) ? -1.0 : 1.0);
        } else {
            UniformStream us(config.seed ^ 0x9e3779b97f4a7c15ull, stream);
            run_path_cl(std::get<CramerLundberg>(b.sim_model), b, mon, us);
        }
        const PathEvent& e = mon.ev[0];
        const char* kind = e.kind == EventKind::DrawdownHit    ? "DrawdownHit"
                           : e.kind == EventKind::DrawupHit    ? "DrawupHit"
                           : e.kind == EventKind::ThresholdHit ? "ThresholdHit"
                                                               : "HorizonCapped";
        os << i << ',' << kind << ',' << e.time << ',' << e.drawdown_at_event << ','
           << e.drawup_at_event << '\n';
    }
}

}  // namespace ddc
