#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fiberlp/report.hpp"

using namespace fiberlp;

namespace {

VerificationReport sample_report() {
    VerificationReport rep;
    rep.set_seed(7);
    CheckRecord a;
    a.suite = "alpha";
    a.name = "first";
    a.reference = "x = y";
    a.observed = 1.5e-12;
    a.tolerance = 1e-10;
    a.pass = true;
    a.runtime_s = 0.25;
    rep.add(a);

    CheckRecord b;
    b.suite = "beta";
    b.name = "second";
    b.reference = "order 2";
    b.observed = 0.2;
    b.tolerance = 0.5;
    b.pass = true;
    b.runtime_s = 0.5;
    b.convergence = {{0.1, 1e-3, std::nan("")}, {0.05, 2.5e-4, 2.0}};
    b.note = "fit note";
    rep.add(b);
    return rep;
}

} // namespace

TEST_CASE("json round trip preserves the report") {
    const VerificationReport rep = sample_report();
    const auto j = rep.to_json();
    const VerificationReport back = VerificationReport::from_json(j);

    REQUIRE(back.total() == 2);
    CHECK(back.seed() == 7);
    CHECK(back.checks()[0].suite == "alpha");
    CHECK(back.checks()[0].observed == rep.checks()[0].observed);
    CHECK(back.checks()[0].runtime_s == rep.checks()[0].runtime_s);
    CHECK(back.checks()[1].convergence.size() == 2);
    CHECK(back.checks()[1].convergence[1].observed_order == 2.0);
    CHECK(std::isnan(back.checks()[1].convergence[0].observed_order));
    CHECK(back.checks()[1].note == "fit note");
    CHECK(back.all_pass());
}

TEST_CASE("summary counts failures") {
    VerificationReport rep = sample_report();
    CheckRecord c;
    c.suite = "gamma";
    c.name = "third";
    c.pass = false;
    rep.add(c);
    CHECK(rep.total() == 3);
    CHECK(rep.passed() == 2);
    CHECK(rep.failed() == 1);
    CHECK(!rep.all_pass());
    const auto j = rep.to_json();
    CHECK(j["summary"]["pass"] == false);
}

TEST_CASE("csv has one row per check plus header") {
    const std::string csv = sample_report().to_csv();
    std::istringstream is(csv);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3);
    CHECK(csv.find("suite,name,reference") == 0);
    // the convergence cell carries h:error:order triples
    CHECK(csv.find(":0.001:-") != std::string::npos);
}

TEST_CASE("text format prints pass lines and convergence tables") {
    const std::string text = sample_report().to_text();
    CHECK(text.find("PASS") != std::string::npos);
    CHECK(text.find("first") != std::string::npos);
    CHECK(text.find("order") != std::string::npos);
    CHECK(text.find("2/2 checks passed") != std::string::npos);
}

TEST_CASE("deterministic bytes ignore the timing header") {
    VerificationReport a = sample_report();
    VerificationReport b = sample_report();
    a.stamp_now();
    b.checks()[0].runtime_s = 99.0; // timings differ run to run
    CHECK(deterministic_bytes(a) == deterministic_bytes(b));

    // but any payload change shows up
    VerificationReport c = sample_report();
    c.checks()[0].observed = 2e-12;
    CHECK(deterministic_bytes(a) != deterministic_bytes(c));
}

TEST_CASE("emit_report writes all three formats") {
    const VerificationReport rep = sample_report();
    for (const auto& [name, fmt] :
         std::vector<std::pair<std::string, ReportFormat>>{{"json", ReportFormat::json},
                                                           {"csv", ReportFormat::csv},
                                                           {"text", ReportFormat::text}}) {
        const std::string path = "report_test_out." + name;
        emit_report(rep, fmt, path);
        std::ifstream in(path);
        REQUIRE(in.good());
        std::stringstream content;
        content << in.rdbuf();
        CHECK(!content.str().empty());
        if (fmt == ReportFormat::json) {
            const auto parsed = nlohmann::json::parse(content.str());
            CHECK(parsed["summary"]["total"] == 2);
        }
        std::remove(path.c_str());
    }
}

TEST_CASE("empty report round-trips in every format") {
    VerificationReport rep;
    CHECK(rep.all_pass());
    CHECK(rep.to_csv().find("suite,") == 0);
    CHECK(!rep.to_text().empty());
    const VerificationReport back = VerificationReport::from_json(rep.to_json());
    CHECK(back.total() == 0);
}

TEST_CASE("format names parse") {
    CHECK(parse_report_format("json") == ReportFormat::json);
    CHECK(parse_report_format("csv") == ReportFormat::csv);
    CHECK(parse_report_format("text") == ReportFormat::text);
    CHECK_THROWS_AS(parse_report_format("xml"), std::invalid_argument);
}
