// Command-line front end: prices the four contracts, solves fair premiums,
// sweeps curves behind the worked examples to CSV, and runs the
// Monte-Carlo-vs-analytic validation suite.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ddc/drawdown.hpp"
#include "ddc/drawup.hpp"
#include "ddc/levy.hpp"
#include "ddc/mc.hpp"
#include "ddc/types.hpp"
#include "ddc/validate.hpp"

using nlohmann::json;

namespace {

enum ExitCode : int {
    kOk = 0,
    kBadUsage = 1,
    kValidation = 2,
    kUnsupported = 3,
    kDegenerate = 4,
    kValidateFailed = 5,
};

// shortest round-trip decimal representation
std::string num(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct RunConfig {
    std::string kind;  // drawdown | drawdown-cancellable | drawup | drawup-cancellable
    ddc::ModelSpec model = ddc::LinearBrownian{0.0, 1.0};
    ddc::ContractSpec contract;
    bool has_premium = false;
    ddc::RewardSpec reward = ddc::ConstantReward{0.0};
    std::optional<ddc::PenaltySpec> penalty;
    bool solve_premium = false;
    // mc block
    std::optional<ddc::McConfig> mc;
    long gate_paths = 5000;
    long ratio_paths = 10000;
    std::string suite = "full";
    std::optional<ddc::ModelSpec> mc_model_override;
    // sweep block
    std::optional<std::string> sweep_variable;
    double sweep_from = 0.0, sweep_to = 0.0;
    int sweep_points = 0;
    // output block
    std::optional<std::string> out_path;
    std::string out_format = "csv";
};

[[noreturn]] void fail(const std::string& msg) { throw ddc::validation_error(msg); }

double need_number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) fail(std::string("missing numeric field '") + key + "'");
    return j.at(key).get<double>();
}

ddc::ModelSpec parse_model(const json& j) {
    if (!j.is_object() || !j.contains("type")) fail("model block must carry a 'type'");
    const std::string type = j.at("type").get<std::string>();
    if (type == "bm" || type == "brownian") {
        ddc::LinearBrownian bm{need_number(j, "mu"), need_number(j, "sigma")};
        ddc::ModelSpec m = bm;
        ddc::validate(m);
        return m;
    }
    if (type == "cl" || type == "cramer-lundberg") {
        ddc::CramerLundberg cl{need_number(j, "mu_hat"), need_number(j, "beta"), need_number(j, "rho")};
        ddc::ModelSpec m = cl;
        ddc::validate(m);
        return m;
    }
    fail("model.type must be 'bm' or 'cl'");
}

ddc::RewardSpec parse_reward(const json& j) {
    if (!j.is_object() || !j.contains("type")) fail("reward block must carry a 'type'");
    const std::string type = j.at("type").get<std::string>();
    if (type == "constant") return ddc::ConstantReward{need_number(j, "alpha")};
    if (type == "linear") return ddc::LinearReward{need_number(j, "alpha1"), need_number(j, "alpha2")};
    if (type == "exponential") return ddc::ExponentialReward{need_number(j, "omega"), need_number(j, "kappa")};
    fail("reward.type must be 'constant', 'linear' or 'exponential'");
}

ddc::PenaltySpec parse_penalty(const json& j) {
    if (!j.is_object() || !j.contains("type")) fail("penalty block must carry a 'type'");
    const std::string type = j.at("type").get<std::string>();
    if (type == "constant") return ddc::ConstantPenalty{need_number(j, "c")};
    if (type == "linear_c1") return ddc::LinearPenaltyC1{};
    if (type == "quadratic_c2") return ddc::QuadraticPenaltyC2{};
    if (type == "linear_c3") return ddc::LinearPenaltyC3{need_number(j, "c_end")};
    fail("penalty.type must be 'constant', 'linear_c1', 'quadratic_c2' or 'linear_c3'");
}

RunConfig parse_config(const json& j) {
    RunConfig rc;
    if (!j.is_object()) fail("config must be a JSON object");
    if (!j.contains("model")) fail("config requires a model block");
    rc.model = parse_model(j.at("model"));
    if (!j.contains("contract") || !j.at("contract").is_object()) fail("config requires a contract block");
    const json& c = j.at("contract");
    rc.kind = c.value("kind", std::string("drawdown"));
    rc.contract.a = need_number(c, "a");
    rc.contract.r = need_number(c, "r");
    if (c.contains("b")) rc.contract.b = c.at("b").get<double>();
    if (c.contains("p")) {
        rc.contract.p = c.at("p").get<double>();
        rc.has_premium = true;
    }
    rc.contract.d = c.value("d", 0.0);
    if (c.contains("u")) rc.contract.u = c.at("u").get<double>();
    if (!j.contains("reward")) fail("config requires a reward block");
    rc.reward = parse_reward(j.at("reward"));
    if (j.contains("penalty")) rc.penalty = parse_penalty(j.at("penalty"));
    rc.solve_premium = j.value("solve_premium", false);

    const bool cancellable = rc.kind == "drawdown-cancellable" || rc.kind == "drawup-cancellable";
    const bool drawup = rc.kind == "drawup" || rc.kind == "drawup-cancellable";
    if (rc.kind != "drawdown" && rc.kind != "drawdown-cancellable" && rc.kind != "drawup" &&
        rc.kind != "drawup-cancellable")
        fail("contract.kind must be one of drawdown, drawdown-cancellable, drawup, drawup-cancellable");
    if (cancellable && !rc.penalty) fail("cancellable contracts require a penalty block");
    if (drawup && !rc.contract.b) fail("drawup contracts require the drawup level b");
    if (!drawup && rc.contract.b) fail("pure drawdown contracts must not carry b");
    if (cancellable && rc.solve_premium)
        fail("solve_premium is defined for the non-cancellable contracts only");
    if (!rc.has_premium && !rc.solve_premium && !cancellable)
        rc.solve_premium = true;  // premium omitted: quote the fair one
    ddc::validate(rc.contract);
    if (rc.penalty) ddc::validate_penalty(*rc.penalty, rc.contract.p, rc.contract.r, rc.contract.a);
    ddc::validate_reward(rc.reward, rc.model, rc.contract.a);

    if (j.contains("mc")) {
        const json& m = j.at("mc");
        ddc::McConfig cfg;
        cfg.n_paths = static_cast<long>(m.value("n_paths", 100000.0));
        cfg.seed = static_cast<std::uint64_t>(m.value("seed", 1.0));
        cfg.time_step = m.value("time_step", 1e-3);
        cfg.horizon_cap = m.value("horizon_cap", 0.0);
        cfg.stream_stride = static_cast<int>(m.value("stream_stride", 1.0));
        cfg.antithetic = m.value("antithetic", true);
        if (m.contains("model_override")) cfg.model_override = parse_model(m.at("model_override"));
        rc.mc = cfg;
        rc.gate_paths = static_cast<long>(m.value("gate_paths", 5000.0));
        rc.ratio_paths = static_cast<long>(m.value("ratio_paths", 10000.0));
        rc.suite = m.value("suite", std::string("full"));
        rc.mc_model_override = cfg.model_override;
    }
    if (j.contains("sweep")) {
        const json& sw = j.at("sweep");
        rc.sweep_variable = sw.value("variable", std::string());
        rc.sweep_from = need_number(sw, "from");
        rc.sweep_to = need_number(sw, "to");
        rc.sweep_points = static_cast<int>(need_number(sw, "points"));
        if (rc.sweep_points < 2) fail("sweep.points must be >= 2");
    }
    if (j.contains("output")) {
        const json& out = j.at("output");
        if (out.contains("path")) rc.out_path = out.at("path").get<std::string>();
        rc.out_format = out.value("format", std::string("csv"));
        if (rc.out_format != "csv" && rc.out_format != "json") fail("output.format must be csv or json");
    }
    return rc;
}

json load_json(const std::string& config_path) {
    json j;
    try {
        if (config_path.empty() || config_path == "-") {
            j = json::parse(std::cin);
        } else {
            std::ifstream in(config_path);
            if (!in) fail("cannot open config file: " + config_path);
            j = json::parse(in);
        }
    } catch (const json::parse_error& e) {
        fail(std::string("config is not valid JSON: ") + e.what());
    }
    return j;
}

void write_output(const RunConfig& rc, const std::string& text) {
    if (rc.out_path) {
        std::ofstream out(*rc.out_path, std::ios::binary);
        if (!out) fail("cannot open output file: " + *rc.out_path);
        out << text;
    } else {
        std::cout << text;
    }
}

// ---------------------------------------------------------------------------
// price

int cmd_price(const RunConfig& rc) {
    json report;
    std::ostringstream txt;
    ddc::QuoteResult q;
    std::optional<double> fair;

    if (rc.kind == "drawdown") {
        if (rc.solve_premium) fair = ddc::fair_premium(rc.model, rc.contract, rc.reward);
        ddc::ContractSpec c = rc.contract;
        if (!rc.has_premium && fair) c.p = *fair;
        q.value = ddc::value_f(rc.model, c, rc.reward);
    } else if (rc.kind == "drawup") {
        if (rc.solve_premium) fair = ddc::fair_premium_drawup(rc.model, rc.contract, rc.reward);
        ddc::ContractSpec c = rc.contract;
        if (!rc.has_premium && fair) c.p = *fair;
        q.value = ddc::value_k(rc.model, c, rc.reward);
    } else if (rc.kind == "drawdown-cancellable") {
        q = ddc::value_F(rc.model, rc.contract, rc.reward, *rc.penalty);
    } else {
        q = ddc::value_K(rc.model, rc.contract, rc.reward, *rc.penalty);
    }

    txt << "kind: " << rc.kind << "\n";
    txt << "value: " << num(q.value) << "\n";
    report["kind"] = rc.kind;
    report["value"] = q.value;
    if (fair) {
        txt << "fair_premium: " << num(*fair) << "\n";
        report["fair_premium"] = *fair;
    }
    if (q.theta_star) {
        txt << "theta_star: " << num(*q.theta_star) << (q.theta_interior ? " (interior)" : " (boundary)")
            << "\n";
        report["theta_star"] = *q.theta_star;
        report["theta_interior"] = q.theta_interior;
    }
    if (!q.conditions.empty()) {
        txt << "conditions:\n";
        for (const auto& [name, cc] : q.conditions) {
            txt << "  " << name << ": " << (cc.holds ? "holds" : "FAILS") << " (margin " << num(cc.margin)
                << ")\n";
            report["conditions"][name] = {{"holds", cc.holds}, {"margin", cc.margin}};
        }
    }
    if (rc.out_path && rc.out_format == "json")
        write_output(rc, report.dump(2) + "\n");
    else if (rc.out_path)
        write_output(rc, txt.str());
    std::cout << txt.str();
    return kOk;
}

// ---------------------------------------------------------------------------
// sweep

using Series = std::pair<std::string, std::function<std::optional<double>(double)>>;

std::string emit_csv(const std::string& xlabel, const std::vector<double>& xs,
                     const std::vector<Series>& series) {
    std::ostringstream os;
    os << xlabel;
    for (const auto& s : series) os << ',' << s.first;
    os << '\n';
    for (double x : xs) {
        os << num(x);
        for (const auto& s : series) {
            os << ',';
            std::optional<double> v;
            try {
                v = s.second(x);
            } catch (const std::exception& e) {
                std::cerr << "note: " << s.first << " at " << xlabel << "=" << num(x)
                          << " is degenerate: " << e.what() << "\n";
            }
            if (v && std::isfinite(*v)) os << num(*v);
            else if (v)
                std::cerr << "note: " << s.first << " at " << num(x) << " is not finite\n";
        }
        os << '\n';
    }
    return os.str();
}

std::vector<double> grid(double from, double to, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = from + (to - from) * i / (n - 1);
    return xs;
}

std::string run_preset(const std::string& name);

int cmd_sweep(const RunConfig& rc, const std::string& preset) {
    if (!preset.empty()) {
        const std::string csv = run_preset(preset);
        write_output(rc, csv);
        return kOk;
    }
    if (!rc.sweep_variable || rc.sweep_variable->empty()) fail("sweep requires a sweep block or --preset");
    const std::string var = *rc.sweep_variable;
    const std::vector<double> xs = grid(rc.sweep_from, rc.sweep_to, rc.sweep_points);

    const auto with = [&](double x) {
        RunConfig v = rc;
        if (var == "d") v.contract.d = x;
        else if (var == "u") v.contract.u = x;
        else if (var == "p") v.contract.p = x;
        else if (var == "alpha") v.reward = ddc::ConstantReward{x};
        else fail("sweep.variable must be one of d, u, p, alpha, theta");
        ddc::validate(v.contract);
        return v;
    };

    std::vector<Series> series;
    if (var == "theta") {
        if (rc.kind == "drawdown-cancellable")
            series.push_back({"g_surplus", [&](double th) -> std::optional<double> {
                                  return ddc::g_surplus(rc.model, rc.contract, rc.reward, *rc.penalty, th);
                              }});
        else if (rc.kind == "drawup-cancellable")
            series.push_back({"h_surplus", [&](double th) -> std::optional<double> {
                                  return ddc::h_surplus(rc.model, rc.contract, rc.reward, *rc.penalty, th);
                              }});
        else
            fail("sweep over theta requires a cancellable contract kind");
    } else if (rc.kind == "drawdown") {
        series.push_back({"value", [&](double x) -> std::optional<double> {
                              return ddc::value_f(rc.model, with(x).contract, with(x).reward);
                          }});
        series.push_back({"fair_premium", [&](double x) -> std::optional<double> {
                              return ddc::fair_premium(rc.model, with(x).contract, with(x).reward);
                          }});
    } else if (rc.kind == "drawup") {
        series.push_back({"value", [&](double x) -> std::optional<double> {
                              return ddc::value_k(rc.model, with(x).contract, with(x).reward);
                          }});
        series.push_back({"fair_premium", [&](double x) -> std::optional<double> {
                              return ddc::fair_premium_drawup(rc.model, with(x).contract, with(x).reward);
                          }});
    } else if (rc.kind == "drawdown-cancellable") {
        series.push_back({"value", [&](double x) -> std::optional<double> {
                              return ddc::value_F(rc.model, with(x).contract, with(x).reward, *rc.penalty).value;
                          }});
    } else {
        series.push_back({"value", [&](double x) -> std::optional<double> {
                              return ddc::value_K(rc.model, with(x).contract, with(x).reward, *rc.penalty).value;
                          }});
    }
    write_output(rc, emit_csv(var, xs, series));
    return kOk;
}

// ---------------------------------------------------------------------------
// figure presets

const ddc::ModelSpec kBm{ddc::LinearBrownian{0.03, 0.4}};
const ddc::ModelSpec kCl{ddc::CramerLundberg{0.05, 0.1, 2.5}};
const ddc::ModelSpec kBmK{ddc::LinearBrownian{0.04, 0.3}};
const ddc::ModelSpec kClK{ddc::CramerLundberg{0.04, 0.1, 2.5}};

std::string run_preset(const std::string& name) {
    using ddc::ConstantReward;
    using ddc::LinearReward;
    const double r = 0.01, a = 10.0;

    const auto dd_contract = [&](const double p, double d) {
        return ddc::ContractSpec{.a = a, .b = {}, .r = r, .p = p, .d = d, .u = {}};
    };

    if (name == "p_star_bm") {
        std::vector<Series> series;
        for (double alpha : {50.0, 100.0, 150.0})
            series.push_back({"p_star_alpha" + num(alpha), [=](double d) -> std::optional<double> {
                                  return ddc::fair_premium(kBm, dd_contract(0.0, d), ConstantReward{alpha});
                              }});
        return emit_csv("d", grid(0.0, 9.9, 199), series);
    }
    if (name == "f_bm") {
        std::vector<Series> series;
        for (double d0 : {0.0, 5.0, 6.0, 7.0}) {
            const double p = ddc::fair_premium(kBm, dd_contract(0.0, d0), ConstantReward{100.0});
            series.push_back({"f_p_star_" + num(d0), [=](double d) -> std::optional<double> {
                                  return ddc::value_f(kBm, dd_contract(p, d), ConstantReward{100.0});
                              }});
        }
        return emit_csv("d", grid(0.0, 10.0, 201), series);
    }
    if (name == "p_star_cl") {
        std::vector<Series> series;
        for (double slope : {0.0, 10.0, 20.0})
            series.push_back({"p_star_slope" + num(slope), [=](double d) -> std::optional<double> {
                                  return ddc::fair_premium(kCl, dd_contract(0.0, d), LinearReward{100.0, slope});
                              }});
        return emit_csv("d", grid(0.0, 9.9, 199), series);
    }
    if (name == "f_cl") {
        std::vector<Series> series;
        for (double d0 : {0.0, 7.5}) {
            const double p = ddc::fair_premium(kCl, dd_contract(0.0, d0), LinearReward{100.0, 10.0});
            series.push_back({"f_p_star_" + num(d0), [=](double d) -> std::optional<double> {
                                  return ddc::value_f(kCl, dd_contract(p, d), LinearReward{100.0, 10.0});
                              }});
        }
        return emit_csv("d", grid(0.0, 10.0, 201), series);
    }
    if (name == "f_tilde_bm" || name == "f_tilde_cl") {
        const bool bm = name == "f_tilde_bm";
        const ddc::ModelSpec& m = bm ? kBm : kCl;
        const ddc::RewardSpec rw =
            bm ? ddc::RewardSpec{ConstantReward{100.0}} : ddc::RewardSpec{LinearReward{100.0, 10.0}};
        std::vector<Series> series;
        for (double p : {0.1, 0.2, 0.3}) {
            series.push_back({"c1_p" + num(p), [=](double d) -> std::optional<double> {
                                  return ddc::f_tilde(m, dd_contract(p, d), rw, ddc::LinearPenaltyC1{});
                              }});
            series.push_back({"c2_p" + num(p), [=](double d) -> std::optional<double> {
                                  return ddc::f_tilde(m, dd_contract(p, d), rw, ddc::QuadraticPenaltyC2{});
                              }});
        }
        return emit_csv("d", grid(0.0, 9.95, 200), series);
    }
    if (name == "g_bm" || name == "g_cl") {
        const bool bm = name == "g_bm";
        const ddc::ModelSpec& m = bm ? kBm : kCl;
        const double p = bm ? 0.2 : 0.1;
        const ddc::RewardSpec rw =
            bm ? ddc::RewardSpec{ConstantReward{100.0}} : ddc::RewardSpec{LinearReward{100.0, 10.0}};
        std::vector<Series> series;
        for (double d : {5.0, 7.0, 9.0}) {
            series.push_back({"c1_d" + num(d), [=](double th) -> std::optional<double> {
                                  return ddc::g_surplus(m, dd_contract(p, d), rw, ddc::LinearPenaltyC1{}, th);
                              }});
            series.push_back({"c2_d" + num(d), [=](double th) -> std::optional<double> {
                                  return ddc::g_surplus(m, dd_contract(p, d), rw, ddc::QuadraticPenaltyC2{}, th);
                              }});
        }
        return emit_csv("theta", grid(0.05, 9.95, 199), series);
    }
    if (name == "g_cl_condition") {
        const ddc::RewardSpec rw = LinearReward{100.0, 10.0};
        std::vector<Series> series;
        for (const auto& [label, pen] :
             std::vector<std::pair<std::string, ddc::PenaltySpec>>{{"c1", ddc::LinearPenaltyC1{}},
                                                                   {"c2", ddc::QuadraticPenaltyC2{}}}) {
            const auto tr = ddc::find_theta_star(kCl, dd_contract(0.1, 5.0), rw, pen);
            if (!tr.theta_star) continue;
            const double th = *tr.theta_star;
            series.push_back({"assum_additional_" + label, [=](double d) -> std::optional<double> {
                                  if (d >= th) return std::nullopt;
                                  return ddc::assum_additional_integral(kCl, dd_contract(0.1, 5.0), rw,
                                                                        pen, th, d);
                              }});
        }
        return emit_csv("d", grid(0.0, 4.0, 161), series);
    }
    if (name == "k_bm" || name == "k_cl") {
        const bool bm = name == "k_bm";
        const ddc::ModelSpec& m = bm ? kBm : kCl;
        const double b = bm ? 8.0 : 10.0;
        const double u = 2.0;
        const ddc::RewardSpec rw =
            bm ? ddc::RewardSpec{ConstantReward{100.0}} : ddc::RewardSpec{LinearReward{100.0, 10.0}};
        std::vector<Series> series;
        for (double p : {0.05, 0.1, 0.2})
            series.push_back({"k_p" + num(p), [=](double d) -> std::optional<double> {
                                  ddc::ContractSpec c{.a = a, .b = b, .r = r, .p = p, .d = d, .u = u};
                                  return ddc::value_k(m, c, rw);
                              }});
        return emit_csv("d", grid(0.0, 10.0, 201), series);
    }
    if (name == "p_star_k_bm_d" || name == "p_star_k_cl_d" || name == "p_star_k_bm_u" ||
        name == "p_star_k_cl_u") {
        const bool bm = name[9] == 'b';
        const bool over_d = name.back() == 'd';
        const ddc::ModelSpec& m = bm ? kBm : kCl;
        const double b = bm ? 8.0 : 10.0;
        const ddc::RewardSpec rw =
            bm ? ddc::RewardSpec{ConstantReward{100.0}} : ddc::RewardSpec{LinearReward{100.0, 10.0}};
        std::vector<Series> series;
        for (double other : {0.0, 2.0, 4.0, 6.0}) {
            const std::string label = std::string("p_star_") + (over_d ? "u" : "d") + num(other);
            series.push_back({label, [=](double x) -> std::optional<double> {
                                  const double d = over_d ? x : other;
                                  const double uu = over_d ? other : x;
                                  if (uu > b) return std::nullopt;
                                  ddc::ContractSpec c{.a = a, .b = b, .r = r, .p = 0.0, .d = d, .u = uu};
                                  return ddc::fair_premium_drawup(m, c, rw);
                              }});
        }
        return emit_csv(over_d ? "d" : "u", grid(0.0, over_d ? 9.9 : std::min(b, 9.9), 100), series);
    }
    if (name == "h_bm") {
        const ddc::RewardSpec rw = ConstantReward{100.0};
        ddc::ContractSpec c{.a = a, .b = a, .r = r, .p = 1.35, .d = 9.0, .u = 1.0};
        std::vector<Series> series;
        const std::vector<std::pair<std::string, ddc::PenaltySpec>> pens = {
            {"constant20", ddc::ConstantPenalty{20.0}},
            {"c1", ddc::LinearPenaltyC1{}},
            {"c2", ddc::QuadraticPenaltyC2{}}};
        for (const auto& [label, pen] : pens)
            series.push_back({"h_" + label, [=](double th) -> std::optional<double> {
                                  return ddc::h_surplus(kBmK, c, rw, pen, th);
                              }});
        return emit_csv("theta", grid(0.05, 9.0, 180), series);
    }
    if (name == "smooth_bm") {
        const ddc::RewardSpec rw = ConstantReward{100.0};
        const ddc::PenaltySpec pen = ddc::QuadraticPenaltyC2{};
        ddc::ContractSpec c{.a = a, .b = a, .r = r, .p = 1.35, .d = 9.0, .u = 1.0};
        const auto tr = ddc::find_theta_star_drawup(kBmK, c, rw, pen);
        const double th = tr.theta_star.value_or(5.0);
        std::vector<Series> series = {
            {"continuation_h", [=](double d) -> std::optional<double> {
                 if (d <= th) return std::nullopt;
                 ddc::ContractSpec cd = c;
                 cd.d = d;
                 return ddc::h_surplus(kBmK, cd, rw, pen, th);
             }},
            {"stopping_ktilde", [=](double d) -> std::optional<double> {
                 if (d > th) return std::nullopt;
                 ddc::ContractSpec cd = c;
                 cd.d = d;
                 return ddc::k_tilde(kBmK, cd, rw, pen);
             }}};
        return emit_csv("d", grid(std::max(0.05, th - 2.0), std::min(9.0, th + 0.7), 161), series);
    }
    if (name == "h_cl") {
        const ddc::RewardSpec rw = LinearReward{100.0, 20.0};
        ddc::ContractSpec c{.a = a, .b = a, .r = r, .p = 0.6, .d = 5.0, .u = 2.0};
        std::vector<Series> series;
        for (double fee : {20.0, 35.0, 50.0})
            series.push_back({"h_c3_" + num(fee), [=](double th) -> std::optional<double> {
                                  return ddc::h_surplus(kClK, c, rw, ddc::LinearPenaltyC3{fee}, th);
                              }});
        return emit_csv("theta", grid(-2.95, 5.0, 160), series);
    }
    if (name == "h_cl_condition") {
        const ddc::RewardSpec rw = LinearReward{100.0, 20.0};
        ddc::ContractSpec c{.a = a, .b = a, .r = r, .p = 0.6, .d = 5.0, .u = 2.0};
        const ddc::PenaltySpec pen = ddc::LinearPenaltyC3{35.0};
        const auto tr = ddc::find_theta_star_drawup(kClK, c, rw, pen);
        if (!tr.theta_star) fail("h_cl_condition: no stopping threshold");
        const double th = *tr.theta_star;
        std::vector<Series> series = {{"assum_additional2", [=](double d) -> std::optional<double> {
                                           if (d >= th) return std::nullopt;
                                           return ddc::assum_additional2_integral(kClK, c, rw, pen, th, d);
                                       }}};
        return emit_csv("d", grid(0.0, std::max(0.0, th - 1e-6), 121), series);
    }
    if (name == "smooth_cl") {
        const ddc::RewardSpec rw = LinearReward{100.0, 20.0};
        const ddc::PenaltySpec pen = ddc::LinearPenaltyC3{35.0};
        ddc::ContractSpec c{.a = a, .b = a, .r = r, .p = 0.6, .d = 5.0, .u = 2.0};
        const auto tr = ddc::find_theta_star_drawup(kClK, c, rw, pen);
        const double th = tr.theta_star.value_or(2.0);
        std::vector<Series> series = {
            {"continuation_h", [=](double d) -> std::optional<double> {
                 if (d <= th) return std::nullopt;
                 ddc::ContractSpec cd = c;
                 cd.d = d;
                 return ddc::h_surplus(kClK, cd, rw, pen, th);
             }},
            {"stopping_ktilde", [=](double d) -> std::optional<double> {
                 if (d > th) return std::nullopt;
                 ddc::ContractSpec cd = c;
                 cd.d = d;
                 return ddc::k_tilde(kClK, cd, rw, pen);
             }}};
        return emit_csv("d", grid(std::max(0.05, th - 2.0), std::min(5.0, th + 2.0), 161), series);
    }
    fail("unknown preset: " + name);
}

// ---------------------------------------------------------------------------
// validate

int cmd_validate(const RunConfig& rc) {
    if (!rc.mc) fail("validate requires an mc block");
    ddc::SuiteOptions opts;
    opts.seed = rc.mc->seed;
    opts.n_paths = rc.mc->n_paths;
    opts.gate_paths = rc.gate_paths;
    opts.ratio_paths = rc.ratio_paths;
    opts.mc_model_override = rc.mc_model_override;

    std::vector<ddc::SuiteReport> reports;
    if (rc.suite == "full")
        reports = ddc::run_full_validation(opts);
    else
        reports.push_back(ddc::run_validation_suite(rc.suite, opts));

    bool all_pass = true;
    double total = 0.0;
    std::printf("%-34s %14s %14s %12s %8s  %s\n", "target", "analytic", "mc", "se", "z", "status");
    for (const auto& rep : reports) {
        std::printf("-- suite %s (%.1fs)\n", rep.suite.c_str(), rep.seconds);
        total += rep.seconds;
        for (const auto& row : rep.rows) {
            std::printf("%-34s %14.8g %14.8g %12.3g %8.2f  %s\n", row.name.c_str(), row.analytic, row.mc,
                        row.se, row.z, row.pass ? "ok" : "FAIL");
            all_pass = all_pass && row.pass;
        }
        for (const auto& g : rep.gates) {
            std::printf("%-34s %14.8g %14.8g %12.3g %8s  %s\n", g.name.c_str(), g.coarse, g.fine, g.diff,
                        "", g.pass ? "ok" : "FAIL");
            all_pass = all_pass && g.pass;
        }
        for (const auto& c : rep.checks) {
            std::printf("%-34s %44s margin=%-10.3g  %s\n", c.name.c_str(), "", c.margin,
                        c.pass ? "ok" : "FAIL");
            all_pass = all_pass && c.pass;
        }
    }
    std::printf("total %.1fs on %d worker threads: %s\n", total, ddc::mc_thread_count(),
                all_pass ? "ALL OK" : "FAILURES");
    return all_pass ? kOk : kValidateFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"drawdown/drawup insurance contract pricer"};
    app.require_subcommand(1);

    std::string config_path, preset, out_path;
    long long seed_override = -1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config path ('-' or omitted: stdin)");
        cmd->add_option("--out", out_path, "output file (default stdout)");
        cmd->add_option("--seed-override", seed_override, "override mc.seed");
    };
    CLI::App* price = app.add_subcommand("price", "price one contract");
    add_common(price);
    CLI::App* sweep = app.add_subcommand("sweep", "emit a CSV curve");
    add_common(sweep);
    sweep->add_option("--preset", preset, "named figure preset");
    CLI::App* validate = app.add_subcommand("validate", "Monte Carlo vs analytic cross-check");
    add_common(validate);

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig rc;
        if (sweep->parsed() && !preset.empty() && config_path.empty()) {
            // presets need no config document
            rc.out_format = "csv";
        } else {
            rc = parse_config(load_json(config_path));
        }
        if (!out_path.empty()) rc.out_path = out_path;
        if (seed_override >= 0 && rc.mc) rc.mc->seed = static_cast<std::uint64_t>(seed_override);

        if (price->parsed()) return cmd_price(rc);
        if (sweep->parsed()) return cmd_sweep(rc, preset);
        return cmd_validate(rc);
    } catch (const ddc::validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const ddc::unsupported_config_error& e) {
        std::cerr << "unsupported analytic configuration: " << e.what() << "\n"
                  << "hint: only b = a (either model) and b < a under linear Brownian motion with a "
                     "constant reward have closed forms; use the Monte Carlo estimator for anything else\n";
        return kUnsupported;
    } catch (const ddc::degenerate_contract_error& e) {
        std::cerr << "degenerate contract: " << e.what() << "\n";
        return kDegenerate;
    } catch (const std::domain_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadUsage;
    }
}
