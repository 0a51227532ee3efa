#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ddc/types.hpp"

namespace ddc {

struct McConfig {
    long n_paths = 100000;
    std::uint64_t seed = 1;
    double time_step = 1e-3;   // BM Euler step; ignored for CL (event-driven, exact)
    double horizon_cap = 0.0;  // 0: derived as -ln(1e-6)/r; required explicitly when r = 0
    int stream_stride = 1;     // substream spacing: path i draws from stream i*stride
    bool antithetic = true;    // BM increment sign-flip pairs; ignored for CL
    std::optional<ModelSpec> model_override;  // simulate under a different model (sensitivity fixture)
};

enum class EventKind { DrawdownHit, DrawupHit, ThresholdHit, HorizonCapped };

struct PathEvent {
    EventKind kind = EventKind::HorizonCapped;
    double time = 0.0;
    double drawdown_at_event = 0.0;  // a exactly for BM hits, a + overshoot for CL
    double drawup_at_event = 0.0;
    double x_min = 0.0;
    double x_max = 0.0;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n_paths = 0;
    double truncation_bias_bound = 0.0;
    std::uint64_t config_fingerprint = 0;
    bool warning = false;
};

struct McTarget {
    enum class Kind {
        Xi,             // E[e^{-r tau_D}]
        RewardTransform,// E[e^{-r tau_D} alpha(D)]
        ValueF,         // premium leg + reward
        GSurplus,       // rule tau_D^-(theta), payoff f~(theta)
        ValueFStopped,  // full cancellable contract under tau_D^-(theta)
        Lambda,         // E[e^{-r tau_U}; tau_U < tau_D]
        Nu,             // E[e^{-r tau_D}; tau_D < tau_U]
        BigN,           // E[e^{-r tau_D} alpha(D); tau_D < tau_U]
        ValueK,         // premium leg + reward, drawup contingency
        HSurplus,       // rule tau^+_{d-theta}, payoff k~(theta^+, U)
        ValueKStopped,  // full cancellable drawup contract under tau^+_{d-theta}
        M2Transform,    // E[e^{-r tau_U + u_arg min X}; max X < v], fresh start
        TwoSidedUp,     // E_x[e^{-r tau_a^+}; tau_a^+ < tau_0^-], theta = x
        TwoSidedDown,   // E_x[e^{-r tau_0^-}; tau_0^- < tau_a^+], theta = x
    };
    Kind kind = Kind::Xi;
    double theta = 0.0;
    double u_arg = 0.0;
    double v = 0.0;
};

// One monitored contract instance sharing the batch's geometry (a, b, r).
struct McScenario {
    double d = 0.0;
    double u = 0.0;
    double p = 0.0;
    McTarget target;
};

// Estimates every scenario on one shared set of simulated paths. All
// scenarios must agree on (a, b, r); they may differ in (d, u, p, target).
std::vector<McEstimate> mc_estimate_batch(const ModelSpec& model, const ContractSpec& geometry,
                                          const RewardSpec& reward,
                                          const std::optional<PenaltySpec>& penalty,
                                          const std::vector<McScenario>& scenarios,
                                          const McConfig& config);

McEstimate mc_estimate(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
                       const std::optional<PenaltySpec>& penalty, const McTarget& target,
                       const McConfig& config);

// Ratio estimator of the fair premium with a delta-method standard error;
// works for both the pure drawdown and the drawup-contingent contract.
McEstimate mc_fair_premium(const ModelSpec& model, const ContractSpec& contract, const RewardSpec& reward,
                           const McConfig& config);

// Raw per-path event dump: header + one CSV record per path.
void dump_path_events(std::ostream& os, const ModelSpec& model, const ContractSpec& contract,
                      const McConfig& config);

// Worker count: DDC_THREADS environment override, else hardware concurrency.
int mc_thread_count();

}  // namespace ddc
