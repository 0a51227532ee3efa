#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <sstream>

#include "ddc/drawdown.hpp"
#include "ddc/drawup.hpp"
#include "ddc/levy.hpp"
#include "ddc/mc.hpp"
#include "ddc/rng.hpp"

using namespace ddc;

namespace {
const ModelSpec kBm{LinearBrownian{0.03, 0.4}};
const ModelSpec kCl{CramerLundberg{0.05, 0.1, 2.5}};
constexpr double kR = 0.01;

McConfig small_config(long n = 4000) {
    McConfig cfg;
    cfg.n_paths = n;
    cfg.seed = 11;
    return cfg;
}
}  // namespace

TEST_CASE("counter stream reference values") {
    // splitmix64 sequence from a zero key
    CHECK(stream_word(0, 0) == 0xe220a8397b1dcdafull);
    CHECK(stream_word(0, 1) == 0x6e789e6aa1b965f4ull);
    CHECK(stream_word(0, 2) == 0x06c45d188009454full);
    CHECK(stream_word(0, 3) == 0xf88bb8a8724c81ecull);
    // word i depends only on (key, i)
    const std::uint64_t key = stream_key(42, 7);
    CHECK(stream_word(key, 5) == stream_word(key, 5));
    CHECK(stream_word(key, 5) != stream_word(key, 6));
    CHECK(stream_key(42, 7) != stream_key(42, 8));
    CHECK(stream_key(42, 7) != stream_key(43, 7));
}

TEST_CASE("normal sequence is buffer independent") {
    const std::uint64_t key = stream_key(9, 3);
    double a[64], b[64];
    fill_normals(key, 0, 64, a);
    fill_normals(key, 0, 32, b);
    fill_normals(key, 32, 32, b + 32);
    for (int i = 0; i < 64; ++i) CHECK(a[i] == b[i]);
    // moments sanity on a larger block
    double sum = 0.0, sum2 = 0.0;
    const int n = 1 << 16;
    std::vector<double> big(n);
    fill_normals(key, 0, n, big.data());
    for (double v : big) {
        sum += v;
        sum2 += v * v;
    }
    CHECK(std::abs(sum / n) < 0.02);
    CHECK(std::abs(sum2 / n - 1.0) < 0.02);
}

TEST_CASE("estimates are bit-reproducible across thread counts") {
    ContractSpec c{.a = 2.0, .b = {}, .r = kR, .p = 0.0, .d = 0.5, .u = {}};
    const McTarget xi_target{McTarget::Kind::Xi, 0, 0, 0};
    McConfig cfg = small_config(6000);

    setenv("DDC_THREADS", "1", 1);
    const McEstimate one = mc_estimate(kBm, c, ConstantReward{1.0}, std::nullopt, xi_target, cfg);
    setenv("DDC_THREADS", "2", 1);
    const McEstimate two = mc_estimate(kBm, c, ConstantReward{1.0}, std::nullopt, xi_target, cfg);
    unsetenv("DDC_THREADS");
    CHECK(one.mean == two.mean);
    CHECK(one.std_error == two.std_error);
    CHECK(one.config_fingerprint == two.config_fingerprint);

    // same seed, same numbers; different seed, different numbers
    const McEstimate again = mc_estimate(kBm, c, ConstantReward{1.0}, std::nullopt, xi_target, cfg);
    CHECK(again.mean == one.mean);
    McConfig cfg2 = cfg;
    cfg2.seed = 12;
    const McEstimate other = mc_estimate(kBm, c, ConstantReward{1.0}, std::nullopt, xi_target, cfg2);
    CHECK(other.mean != one.mean);
    CHECK(other.config_fingerprint != one.config_fingerprint);
}

TEST_CASE("drift-only jump model crossings are exact") {
    const ModelSpec drift = CramerLundberg{0.05, 0.0, 2.5};
    ContractSpec c{.a = 10.0, .b = 3.0, .r = kR, .p = 0.0, .d = 0.0, .u = 1.0};
    McConfig cfg = small_config(200);
    const McEstimate est =
        mc_estimate(drift, c, ConstantReward{1.0}, std::nullopt, {McTarget::Kind::Lambda, 0, 0, 0}, cfg);
    // the drawup fires exactly when the drift covers b - u
    const double t_hit = (3.0 - 1.0) / 0.05;
    CHECK(est.mean == doctest::Approx(std::exp(-kR * t_hit)).epsilon(1e-12));
    CHECK(est.std_error == 0.0);
}

TEST_CASE("immediate events at the start") {
    ContractSpec c{.a = 5.0, .b = {}, .r = kR, .p = 0.0, .d = 5.0, .u = {}};
    const McEstimate at_d =
        mc_estimate(kCl, c, ConstantReward{1.0}, std::nullopt, {McTarget::Kind::Xi, 0, 0, 0},
                    small_config(500));
    CHECK(at_d.mean == 1.0);
    CHECK(at_d.std_error == 0.0);
    ContractSpec cu{.a = 5.0, .b = 4.0, .r = kR, .p = 0.0, .d = 0.0, .u = 4.0};
    const McEstimate at_u =
        mc_estimate(kBm, cu, ConstantReward{1.0}, std::nullopt, {McTarget::Kind::Lambda, 0, 0, 0},
                    small_config(500));
    CHECK(at_u.mean == 1.0);
}

TEST_CASE("race legs add up to the combined transform") {
    ContractSpec c{.a = 4.0, .b = 3.0, .r = kR, .p = 0.0, .d = 1.0, .u = 1.0};
    McConfig cfg = small_config(20000);
    std::vector<McScenario> scs = {
        {1.0, 1.0, 0.0, {McTarget::Kind::Lambda, 0, 0, 0}},
        {1.0, 1.0, 0.0, {McTarget::Kind::Nu, 0, 0, 0}},
        {1.0, 1.0, 0.0, {McTarget::Kind::BigN, 0, 0, 0}},
    };
    const auto est = mc_estimate_batch(kCl, c, ConstantReward{1.0}, std::nullopt, scs, cfg);
    // with a unit reward the reward leg is the drawdown-first leg
    CHECK(est[2].mean == doctest::Approx(est[1].mean).epsilon(1e-14));
    // every path ends in at most one leg
    const DrawupTransforms t = lambda_nu_n_equal_levels(kCl, kR, 4.0, 1.0, 1.0, ConstantReward{1.0});
    const double se = std::sqrt(est[0].std_error * est[0].std_error +
                                est[1].std_error * est[1].std_error);
    CHECK(est[0].mean + est[1].mean <= 1.0 + 1e-12);
    CHECK(std::abs(est[0].mean + est[1].mean - (t.lambda + t.nu)) <= 4.0 * se);
}

TEST_CASE("two-sided exits match the scale-function transforms") {
    for (const ModelSpec& m : {kBm, kCl}) {
        const double a = is_brownian(m) ? 2.0 : 6.0;
        const double x = 0.5 * a;
        ContractSpec c{.a = a, .b = {}, .r = kR, .p = 0.0, .d = 0.0, .u = {}};
        McConfig cfg = small_config(20000);
        cfg.seed = 29;
        std::vector<McScenario> scs = {
            {0.0, 0.0, 0.0, {McTarget::Kind::TwoSidedUp, x, 0, 0}},
            {0.0, 0.0, 0.0, {McTarget::Kind::TwoSidedDown, x, 0, 0}},
        };
        const auto est = mc_estimate_batch(m, c, ConstantReward{1.0}, std::nullopt, scs, cfg);
        const double up = two_sided_up(m, kR, x, a), down = two_sided_down(m, kR, x, a);
        CHECK(std::abs(est[0].mean - up) <= 4.0 * est[0].std_error);
        CHECK(std::abs(est[1].mean - down) <= 4.0 * est[1].std_error);
    }
}

TEST_CASE("fair premium ratio estimator") {
    ContractSpec c{.a = 4.0, .b = {}, .r = kR, .p = 0.0, .d = 1.0, .u = {}};
    McConfig cfg = small_config(20000);
    const McEstimate est = mc_fair_premium(kCl, c, LinearReward{10.0, 1.0}, cfg);
    const double ps = fair_premium(kCl, c, LinearReward{10.0, 1.0});
    CHECK_FALSE(est.warning);
    CHECK(std::abs(est.mean - ps) <= 4.0 * est.std_error);
    // degenerate at the trigger
    ContractSpec cd = c;
    cd.d = 4.0;
    const McEstimate bad = mc_fair_premium(kCl, cd, LinearReward{10.0, 1.0}, small_config(500));
    CHECK(bad.warning);
}

TEST_CASE("configuration validation") {
    ContractSpec c{.a = 2.0, .b = {}, .r = kR, .p = 0.0, .d = 0.5, .u = {}};
    McConfig cfg = small_config(50);  // too few paths
    CHECK_THROWS_AS(mc_estimate(kBm, c, ConstantReward{1.0}, std::nullopt, {McTarget::Kind::Xi, 0, 0, 0}, cfg),
                    validation_error);
    McConfig shallow = small_config(500);
    shallow.horizon_cap = 100.0;  // e^{-rT} too big
    CHECK_THROWS_AS(
        mc_estimate(kBm, c, ConstantReward{1.0}, std::nullopt, {McTarget::Kind::Xi, 0, 0, 0}, shallow),
        validation_error);
    ContractSpec r0 = c;
    r0.r = 0.0;
    McConfig nocap = small_config(500);
    CHECK_THROWS_AS(
        mc_estimate(kBm, r0, ConstantReward{1.0}, std::nullopt, {McTarget::Kind::Xi, 0, 0, 0}, nocap),
        validation_error);
    // r = 0 works once the horizon is explicit
    nocap.horizon_cap = 500.0;
    CHECK_NOTHROW(
        mc_estimate(kBm, r0, ConstantReward{1.0}, std::nullopt, {McTarget::Kind::Xi, 0, 0, 0}, nocap));
}

TEST_CASE("truncation accounting") {
    // a barely-reachable drawdown leaves most paths capped, with the bound
    // reflecting the cap share
    ContractSpec c{.a = 30.0, .b = {}, .r = 0.05, .p = 0.0, .d = 0.0, .u = {}};
    McConfig cfg = small_config(400);
    cfg.seed = 3;
    const McEstimate est =
        mc_estimate(kBm, c, ConstantReward{1.0}, std::nullopt, {McTarget::Kind::Xi, 0, 0, 0}, cfg);
    CHECK(est.truncation_bias_bound > 0.0);
    CHECK(est.truncation_bias_bound <= std::exp(-0.05 * (-std::log(1e-6) / 0.05)) + 1e-9);
}

TEST_CASE("event dump format") {
    ContractSpec c{.a = 2.0, .b = 1.5, .r = kR, .p = 0.0, .d = 0.5, .u = 0.5};
    McConfig cfg = small_config(120);
    std::ostringstream os;
    dump_path_events(os, kCl, c, cfg);
    std::istringstream in(os.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "path_index,kind,time,drawdown_at_event,drawup_at_event");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 4);
        ++rows;
    }
    CHECK(rows == 120);
}

TEST_CASE("batched and solo estimates agree path for path") {
    ContractSpec c{.a = 2.0, .b = {}, .r = kR, .p = 0.0, .d = 0.5, .u = {}};
    McConfig cfg = small_config(2048);  // exactly one block
    std::vector<McScenario> multi = {
        {0.5, 0.0, 0.0, {McTarget::Kind::Xi, 0, 0, 0}},
        {1.0, 0.0, 0.0, {McTarget::Kind::Xi, 0, 0, 0}},
    };
    const auto batch = mc_estimate_batch(kBm, c, ConstantReward{1.0}, std::nullopt, multi, cfg);
    ContractSpec c1 = c;
    const auto solo_a = mc_estimate(kBm, c1, ConstantReward{1.0}, std::nullopt, {McTarget::Kind::Xi, 0, 0, 0}, cfg);
    c1.d = 1.0;
    const auto solo_b = mc_estimate(kBm, c1, ConstantReward{1.0}, std::nullopt, {McTarget::Kind::Xi, 0, 0, 0}, cfg);
    CHECK(batch[0].mean == doctest::Approx(solo_a.mean).epsilon(1e-13));
    CHECK(batch[1].mean == doctest::Approx(solo_b.mean).epsilon(1e-13));
}
