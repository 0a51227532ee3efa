#pragma once

#include <string>
#include <vector>

#include "ddc/mc.hpp"
#include "ddc/types.hpp"

namespace ddc {

// Options for the analytic-vs-Monte-Carlo validation suites.
struct SuiteOptions {
    std::uint64_t seed = 97571;
    long n_paths = 100000;      // main comparison runs
    long gate_paths = 5000;     // dt/4 refinement gates (BM only)
    long ratio_paths = 10000;   // fair-premium ratio estimators
    double z_max = 3.0;
    bool run_gates = true;
    std::optional<ModelSpec> mc_model_override;  // corrupted-parameter fixture
};

struct ValueRow {
    std::string name;
    double analytic = 0.0;
    double mc = 0.0;
    double se = 0.0;
    double z = 0.0;
    double bias_bound = 0.0;
    bool pass = false;
};

struct GateRow {
    std::string name;
    double coarse = 0.0;
    double fine = 0.0;
    double diff = 0.0;
    double allowed = 0.0;
    bool pass = false;
};

struct CheckRow {
    std::string name;
    bool pass = false;
    double margin = 0.0;
};

struct SuiteReport {
    std::string suite;
    std::vector<ValueRow> rows;
    std::vector<GateRow> gates;
    std::vector<CheckRow> checks;
    double seconds = 0.0;
    bool pass() const;
};

const std::vector<std::string>& validation_suites();
SuiteReport run_validation_suite(const std::string& name, const SuiteOptions& opts);
std::vector<SuiteReport> run_full_validation(const SuiteOptions& opts);

}  // namespace ddc
