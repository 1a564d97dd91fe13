#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fiberlp/bundle.hpp"
#include "fiberlp/evolution.hpp"
#include "fiberlp/report.hpp"

namespace fiberlp {

// Everything a verification suite needs from the scenario.
struct SuiteContext {
    GridPtr grid;
    BundlePtr bundle;
    std::shared_ptr<const TimeFamily> time_family;
    GridPtr evolution_grid;
    double evolution_base_step = 0.0;
    double p = 2.0;
    std::uint64_t seed = 0;
    std::function<double(const std::string&)> tolerance;
};

using SuiteFn = std::function<std::vector<CheckRecord>(const SuiteContext&)>;

// Registered suites, keyed by the name used in configs and --suite flags.
const std::map<std::string, SuiteFn>& suite_registry();
std::vector<std::string> suite_names();

} // namespace fiberlp
