#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace fiberlp {

// One entry of a convergence table: mesh/step parameter, observed error and
// the order estimated against the previous row (NaN on the first row).
struct ConvergencePoint {
    double h = 0.0;
    double error = 0.0;
    double observed_order = 0.0;
};

struct CheckRecord {
    std::string suite;
    std::string name;
    std::string reference; // the identity or contract being checked, in plain math
    double observed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double runtime_s = 0.0;
    std::vector<ConvergencePoint> convergence;
    std::string note;
};

// Structured result of a verification run. Serialization is deterministic:
// everything except the generated_at stamp and the runtime map depends only
// on the config and seed, and those two live in the meta header so reports
// can be compared byte for byte after dropping them.
class VerificationReport {
public:
    void add(CheckRecord record) { checks_.push_back(std::move(record)); }

    const std::vector<CheckRecord>& checks() const noexcept { return checks_; }
    std::vector<CheckRecord>& checks() noexcept { return checks_; }

    std::size_t total() const noexcept { return checks_.size(); }
    std::size_t passed() const noexcept;
    std::size_t failed() const noexcept { return total() - passed(); }
    bool all_pass() const noexcept { return passed() == total(); }

    void set_seed(std::uint64_t seed) noexcept { seed_ = seed; }
    std::uint64_t seed() const noexcept { return seed_; }
    void set_config_echo(nlohmann::ordered_json echo) { config_echo_ = std::move(echo); }
    void stamp_now();

    nlohmann::ordered_json to_json() const;
    static VerificationReport from_json(const nlohmann::json& j);

    std::string to_csv() const;
    std::string to_text() const;

private:
    std::vector<CheckRecord> checks_;
    std::uint64_t seed_ = 0;
    nlohmann::ordered_json config_echo_ = nlohmann::ordered_json::object();
    std::string generated_at_; // RFC 3339; excluded from determinism contract
};

enum class ReportFormat { json, csv, text };

ReportFormat parse_report_format(const std::string& name);
void emit_report(const VerificationReport& report, ReportFormat format, const std::string& path);

// Serialized bytes with the timing header (generated_at + runtime map)
// removed; two runs with identical config and seed must agree on this.
std::string deterministic_bytes(const VerificationReport& report);

} // namespace fiberlp
