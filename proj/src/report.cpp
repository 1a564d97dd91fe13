#include "fiberlp/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace fiberlp {

using nlohmann::ordered_json;

std::size_t VerificationReport::passed() const noexcept {
    std::size_t n = 0;
    for (const auto& c : checks_)
        if (c.pass) ++n;
    return n;
}

void VerificationReport::stamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    generated_at_ = buf;
}

namespace {

ordered_json convergence_json(const std::vector<ConvergencePoint>& table) {
    ordered_json rows = ordered_json::array();
    for (const auto& pt : table) {
        ordered_json row;
        row["h"] = pt.h;
        row["error"] = pt.error;
        if (std::isfinite(pt.observed_order))
            row["observed_order"] = pt.observed_order;
        else
            row["observed_order"] = nullptr;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string check_id(const CheckRecord& c) { return c.suite + "/" + c.name; }

} // namespace

ordered_json VerificationReport::to_json() const {
    ordered_json j;
    ordered_json meta;
    meta["tool"] = "fiberlp";
    meta["version"] = "0.1.0";
    meta["generated_at"] = generated_at_;
    meta["seed"] = seed_;
    meta["config"] = config_echo_;
    ordered_json runtime;
    double total_runtime = 0.0;
    for (const auto& c : checks_) {
        runtime[check_id(c)] = c.runtime_s;
        total_runtime += c.runtime_s;
    }
    runtime["total"] = total_runtime;
    meta["runtime_s"] = std::move(runtime);
    j["meta"] = std::move(meta);

    ordered_json checks = ordered_json::array();
    for (const auto& c : checks_) {
        ordered_json cj;
        cj["suite"] = c.suite;
        cj["name"] = c.name;
        cj["reference"] = c.reference;
        cj["observed"] = c.observed;
        cj["tolerance"] = c.tolerance;
        cj["pass"] = c.pass;
        if (!c.convergence.empty()) cj["convergence"] = convergence_json(c.convergence);
        if (!c.note.empty()) cj["note"] = c.note;
        checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);

    ordered_json summary;
    summary["total"] = total();
    summary["passed"] = passed();
    summary["failed"] = failed();
    summary["pass"] = all_pass();
    j["summary"] = std::move(summary);
    return j;
}

VerificationReport VerificationReport::from_json(const nlohmann::json& j) {
    VerificationReport r;
    const auto& meta = j.at("meta");
    r.seed_ = meta.value("seed", std::uint64_t{0});
    r.generated_at_ = meta.value("generated_at", std::string{});
    if (meta.contains("config")) r.config_echo_ = meta.at("config");
    for (const auto& cj : j.at("checks")) {
        CheckRecord c;
        c.suite = cj.at("suite").get<std::string>();
        c.name = cj.at("name").get<std::string>();
        c.reference = cj.value("reference", std::string{});
        c.observed = cj.at("observed").get<double>();
        c.tolerance = cj.at("tolerance").get<double>();
        c.pass = cj.at("pass").get<bool>();
        c.note = cj.value("note", std::string{});
        if (cj.contains("convergence")) {
            for (const auto& row : cj.at("convergence")) {
                ConvergencePoint pt;
                pt.h = row.at("h").get<double>();
                pt.error = row.at("error").get<double>();
                pt.observed_order = row.at("observed_order").is_null()
                                        ? std::nan("")
                                        : row.at("observed_order").get<double>();
                c.convergence.push_back(pt);
            }
        }
        if (meta.contains("runtime_s") && meta.at("runtime_s").contains(check_id(c)))
            c.runtime_s = meta.at("runtime_s").at(check_id(c)).get<double>();
        r.checks_.push_back(std::move(c));
    }
    return r;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string VerificationReport::to_csv() const {
    std::ostringstream os;
    os << "suite,name,reference,observed,tolerance,pass,runtime_s,convergence\n";
    for (const auto& c : checks_) {
        std::string conv;
        for (const auto& pt : c.convergence) {
            if (!conv.empty()) conv += '|';
            conv += fmt_double(pt.h) + ":" + fmt_double(pt.error) + ":" +
                    (std::isfinite(pt.observed_order) ? fmt_double(pt.observed_order) : std::string("-"));
        }
        os << csv_escape(c.suite) << ',' << csv_escape(c.name) << ',' << csv_escape(c.reference) << ','
           << fmt_double(c.observed) << ',' << fmt_double(c.tolerance) << ',' << (c.pass ? "true" : "false")
           << ',' << fmt_double(c.runtime_s) << ',' << csv_escape(conv) << '\n';
    }
    return os.str();
}

std::string VerificationReport::to_text() const {
    std::ostringstream os;
    os << "fiberlp verification report (seed " << seed_ << ")\n";
    std::string suite;
    for (const auto& c : checks_) {
        if (c.suite != suite) {
            suite = c.suite;
            os << "\n[" << suite << "]\n";
        }
        os << "  " << (c.pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(44) << c.name
           << "  observed " << std::scientific << std::setprecision(3) << c.observed << "  tol "
           << std::setprecision(1) << c.tolerance << std::defaultfloat;
        if (!c.reference.empty()) os << "   [" << c.reference << "]";
        os << '\n';
        if (!c.convergence.empty()) {
            os << "        " << std::setw(14) << "h" << std::setw(16) << "error" << std::setw(12)
               << "order" << '\n';
            for (const auto& pt : c.convergence) {
                os << "        " << std::setw(14) << std::scientific << std::setprecision(4) << pt.h
                   << std::setw(16) << pt.error << std::defaultfloat;
                if (std::isfinite(pt.observed_order))
                    os << std::setw(12) << std::fixed << std::setprecision(3) << pt.observed_order
                       << std::defaultfloat;
                os << '\n';
            }
        }
        if (!c.note.empty()) os << "        note: " << c.note << '\n';
    }
    os << "\nsummary: " << passed() << "/" << total() << " checks passed\n";
    return os.str();
}

ReportFormat parse_report_format(const std::string& name) {
    if (name == "json") return ReportFormat::json;
    if (name == "csv") return ReportFormat::csv;
    if (name == "text") return ReportFormat::text;
    throw std::invalid_argument("unknown report format: " + name);
}

void emit_report(const VerificationReport& report, ReportFormat format, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_report: cannot open " + path);
    switch (format) {
        case ReportFormat::json: out << report.to_json().dump(2) << '\n'; break;
        case ReportFormat::csv: out << report.to_csv(); break;
        case ReportFormat::text: out << report.to_text(); break;
    }
    if (!out) throw std::runtime_error("emit_report: write failed for " + path);
}

std::string deterministic_bytes(const VerificationReport& report) {
    ordered_json j = report.to_json();
    j["meta"].erase("generated_at");
    j["meta"].erase("runtime_s");
    return j.dump(2);
}

} // namespace fiberlp
