#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fiberlp/errors.hpp"
#include "fiberlp/extrapolation.hpp"
#include "fiberlp/scenario.hpp"
#include "fiberlp/suites.hpp"

namespace {

using namespace fiberlp;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string format = "json";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::vector<std::string> suites;
};

ScenarioConfig load_config(const CommonOpts& opts) {
    ScenarioConfig cfg =
        opts.config_path.empty() ? ScenarioConfig{} : ScenarioConfig::load(opts.config_path);
    if (opts.seed_set) cfg.seed = opts.seed;
    if (!opts.suites.empty()) {
        for (const auto& name : opts.suites)
            if (suite_registry().find(name) == suite_registry().end())
                throw ConfigError("unknown suite '" + name + "'", "--suite");
        cfg.suites = opts.suites;
    }
    return cfg;
}

int run_verify(const CommonOpts& opts) {
    const ScenarioConfig cfg = load_config(opts);
    const VerificationReport report = run_scenario(cfg);
    std::cout << report.to_text();

    std::string out = !opts.out_path.empty() ? opts.out_path : cfg.output.path;
    if (!out.empty()) {
        const std::string format = !opts.out_path.empty() ? opts.format : cfg.output.format;
        emit_report(report, parse_report_format(format), out);
        std::cout << "report written to " << out << "\n";
    }
    return report.all_pass() ? 0 : 1;
}

int run_evolve(const CommonOpts& opts) {
    const ScenarioConfig cfg = load_config(opts);
    const auto grid = std::make_shared<GridMeasure>(
        GridMeasure::circle(cfg.evolution.length, cfg.evolution.n));
    const TimeFamily family = make_time_family(cfg.time_family);
    const double base_step = cfg.evolution.base_step > 0.0 ? cfg.evolution.base_step : grid->spacing();
    const EvolutionFamily ev(family, base_step);

    FiberFunction f = make_initial(cfg.initial, grid, cfg.p);
    if (f.dim() != family.dim)
        throw ConfigError("initial function dimension does not match the time family", "/initial");

    const std::string out = !opts.out_path.empty() ? opts.out_path : "trajectory.csv";
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot open " + out);
    os << "t,s";
    for (std::size_t j = 0; j < f.dim(); ++j) os << ",re" << j << ",im" << j;
    os << '\n';
    os.precision(17);

    const double dt = grid->spacing();
    for (std::size_t step = 0; step <= cfg.evolution.steps; ++step) {
        const double t = dt * static_cast<double>(step);
        for (std::size_t i = 0; i < f.nodes(); ++i) {
            os << t << ',' << grid->node(i);
            const auto v = f.node_value(i);
            for (std::size_t j = 0; j < f.dim(); ++j) os << ',' << v[j].real() << ',' << v[j].imag();
            os << '\n';
        }
        if (step < cfg.evolution.steps) f = evolution_semigroup_apply(ev, dt, f);
    }
    std::cout << "trajectory written to " << out << " (" << cfg.evolution.steps << " steps of " << dt
              << ")\n";
    return 0;
}

int run_identify(const std::string& input, const CommonOpts& opts) {
    const ScenarioConfig cfg = load_config(opts);
    const GridPtr grid = make_grid(cfg.grid);
    const BundlePtr bundle = make_bundle(cfg, grid);
    const FiberFunction f =
        FiberFunction::read_csv(input, grid, cfg.p, NormMode::extrapolation);

    const IdentificationResult res = identify_extrapolation(*bundle, f);
    const double tol = cfg.tolerances.count("roundtrip") ? cfg.tolerances.at("roundtrip")
                                                         : tolerance_defaults().at("roundtrip");
    std::cout << "isometry defect:       " << res.isometry_defect << "\n"
              << "reconstruction defect: " << res.reconstruction_defect << "\n"
              << "tolerance:             " << tol << "\n";
    if (!opts.out_path.empty()) {
        res.base.write_csv(opts.out_path);
        std::cout << "base function written to " << opts.out_path << "\n";
    }
    return (res.isometry_defect <= tol && res.reconstruction_defect <= tol) ? 0 : 1;
}

int run_report(const std::string& input, const CommonOpts& opts) {
    std::ifstream in(input);
    if (!in) throw std::runtime_error("cannot open " + input);
    nlohmann::json j;
    in >> j;
    const VerificationReport report = VerificationReport::from_json(j);
    const ReportFormat format = parse_report_format(opts.format);
    if (!opts.out_path.empty()) {
        emit_report(report, format, opts.out_path);
        std::cout << "report written to " << opts.out_path << "\n";
    } else {
        switch (format) {
            case ReportFormat::json: std::cout << report.to_json().dump(2) << '\n'; break;
            case ReportFormat::csv: std::cout << report.to_csv(); break;
            case ReportFormat::text: std::cout << report.to_text(); break;
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"L^p fiber space and multiplication semigroup verification harness"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string identify_input, report_input;

    auto add_common = [&opts](CLI::App* cmd, bool with_suites) {
        cmd->add_option("--config", opts.config_path, "scenario config file (JSON)");
        cmd->add_option("--out", opts.out_path, "output file path");
        cmd->add_option("--format", opts.format, "output format: json, csv or text")
            ->check(CLI::IsMember({"json", "csv", "text"}));
        cmd->add_option("--seed", opts.seed, "override the config seed")
            ->each([&opts](const std::string&) { opts.seed_set = true; });
        if (with_suites)
            cmd->add_option("--suite", opts.suites, "suite to run (repeatable; default: all)");
    };

    CLI::App* verify = app.add_subcommand("verify", "run the verification suites");
    add_common(verify, true);

    CLI::App* evolve = app.add_subcommand("evolve", "dump an evolution semigroup trajectory as CSV");
    add_common(evolve, false);

    CLI::App* identify =
        app.add_subcommand("identify", "run the extrapolation identification round trip on a function file");
    identify->add_option("input", identify_input, "function CSV (extrapolation mode)")->required();
    add_common(identify, false);

    CLI::App* report = app.add_subcommand("report", "reformat a JSON report");
    report->add_option("input", report_input, "report JSON file")->required();
    add_common(report, false);

    try {
        app.parse(argc, argv);
        if (verify->parsed()) return run_verify(opts);
        if (evolve->parsed()) return run_evolve(opts);
        if (identify->parsed()) return run_identify(identify_input, opts);
        if (report->parsed()) return run_report(report_input, opts);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const fiberlp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
