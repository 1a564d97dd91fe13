#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fiberlp/bundle.hpp"
#include "fiberlp/evolution.hpp"
#include "fiberlp/grid.hpp"
#include "fiberlp/report.hpp"

namespace fiberlp {

// Scenario config, parsed strictly from JSON: unknown keys anywhere are a
// ConfigError naming the offending path. Missing sections fall back to the
// documented defaults so small configs stay small.
struct GridSpec {
    Topology topology = Topology::interval;
    double a = 0.0, b = 1.0; // interval
    double length = 1.0;     // circle
    std::size_t n = 65;
};

struct BundleSpecConfig {
    std::string kind = "scalar_poly"; // constant | scalar_poly | matrix_poly | tabulated | random_stable
    Matrix matrix;                    // constant
    cvector coeffs;                   // scalar_poly
    std::vector<Matrix> matrix_coeffs; // matrix_poly
    std::string path;                 // tabulated
    std::size_t dim = 4;              // random_stable
    double stability_m = 1.0;
    double stability_omega = -1.0;
};

struct TimeFamilyConfig {
    std::string kind = "constant"; // constant | scalar_poly | commuting | tabulated
    Matrix matrix;                 // constant / commuting factor
    cvector coeffs;                // scalar_poly / commuting profile
    std::vector<double> times;     // tabulated
    std::vector<Matrix> values;    // tabulated
};

struct EvolutionConfig {
    double length = 1.0;
    std::size_t n = 64;
    double base_step = 0.0; // 0 -> grid spacing
    std::size_t steps = 16; // trajectory length for the evolve command
};

struct InitialSpec {
    std::string kind = "sin"; // constant | sin | csv
    cvector value;            // constant
    int harmonic = 1;         // sin
    cvector direction = {cplx{1.0, 0.0}};
    std::string path; // csv
};

struct OutputSpec {
    std::string path;
    std::string format = "json";
};

struct ScenarioConfig {
    GridSpec grid;
    BundleSpecConfig bundle;
    TimeFamilyConfig time_family;
    EvolutionConfig evolution;
    InitialSpec initial;
    OutputSpec output;
    double p = 2.0;
    std::uint64_t seed = 0;
    std::vector<std::string> suites; // empty -> all registered suites
    std::map<std::string, double> tolerances; // overrides of the named defaults

    static ScenarioConfig parse(const nlohmann::json& j);
    static ScenarioConfig load(const std::string& path);

    // canonical echo with defaults filled in; embedded in reports
    nlohmann::ordered_json echo() const;
};

// Named tolerance defaults used by the verification suites.
const std::map<std::string, double>& tolerance_defaults();

// Realize the configured objects.
GridPtr make_grid(const GridSpec& spec);
BundlePtr make_bundle(const ScenarioConfig& cfg, GridPtr grid);
TimeFamily make_time_family(const TimeFamilyConfig& cfg);
FiberFunction make_initial(const InitialSpec& spec, GridPtr grid, double p);

// Run the selected suites in name order and assemble the report. Numerical
// failures inside a suite become failing checks, not exceptions.
VerificationReport run_scenario(const ScenarioConfig& cfg);

} // namespace fiberlp
