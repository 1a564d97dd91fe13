#include "fiberlp/scenario.hpp"

#include <algorithm>
#include <fstream>

#include "fiberlp/errors.hpp"
#include "fiberlp/fiber_function.hpp"
#include "fiberlp/suites.hpp"

namespace fiberlp {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError("expected an object", path);
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&key](const char* a) { return key == a; }) == allowed.end())
            throw ConfigError("unknown key '" + key + "'", path);
    }
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError("expected a number", path);
    return j.get<double>();
}

std::size_t get_count(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw ConfigError("expected a nonnegative integer", path);
    return j.get<std::size_t>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError("expected a string", path);
    return j.get<std::string>();
}

cplx parse_cplx(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError("expected a [re, im] pair", path);
    return {get_number(j[0], path + "[0]"), get_number(j[1], path + "[1]")};
}

cvector parse_cvector(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError("expected an array of [re, im] pairs", path);
    cvector v;
    for (std::size_t i = 0; i < j.size(); ++i)
        v.push_back(parse_cplx(j[i], path + "[" + std::to_string(i) + "]"));
    return v;
}

Matrix parse_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError("expected a matrix (array of rows)", path);
    const std::size_t d = j.size();
    Matrix m(d);
    for (std::size_t i = 0; i < d; ++i) {
        const std::string row_path = path + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != d)
            throw ConfigError("matrix rows must be square", row_path);
        for (std::size_t k = 0; k < d; ++k)
            m(i, k) = parse_cplx(j[i][k], row_path + "[" + std::to_string(k) + "]");
    }
    return m;
}

ordered_json cplx_json(const cplx& z) { return ordered_json::array({z.real(), z.imag()}); }

ordered_json cvector_json(const cvector& v) {
    ordered_json a = ordered_json::array();
    for (const auto& z : v) a.push_back(cplx_json(z));
    return a;
}

ordered_json matrix_json(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(cplx_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

GridSpec parse_grid(const json& j) {
    check_keys(j, "/grid", {"topology", "a", "b", "length", "n"});
    GridSpec g;
    if (j.contains("topology")) {
        const std::string topo = get_string(j["topology"], "/grid/topology");
        if (topo == "interval")
            g.topology = Topology::interval;
        else if (topo == "circle")
            g.topology = Topology::circle;
        else
            throw ConfigError("topology must be 'interval' or 'circle'", "/grid/topology");
    }
    if (j.contains("a")) g.a = get_number(j["a"], "/grid/a");
    if (j.contains("b")) g.b = get_number(j["b"], "/grid/b");
    if (j.contains("length")) g.length = get_number(j["length"], "/grid/length");
    if (j.contains("n")) g.n = get_count(j["n"], "/grid/n");
    return g;
}

BundleSpecConfig parse_bundle(const json& j) {
    check_keys(j, "/bundle",
               {"kind", "matrix", "coeffs", "path", "dim", "stability_m", "stability_omega"});
    BundleSpecConfig b;
    if (j.contains("kind")) b.kind = get_string(j["kind"], "/bundle/kind");
    if (b.kind == "constant") {
        if (!j.contains("matrix")) throw ConfigError("constant bundle needs 'matrix'", "/bundle");
        b.matrix = parse_matrix(j["matrix"], "/bundle/matrix");
    } else if (b.kind == "scalar_poly") {
        if (j.contains("coeffs"))
            b.coeffs = parse_cvector(j["coeffs"], "/bundle/coeffs");
        else
            b.coeffs = {cplx{-1.0}, cplx{-1.0}}; // m(s) = -(1+s)
    } else if (b.kind == "matrix_poly") {
        if (!j.contains("coeffs")) throw ConfigError("matrix_poly bundle needs 'coeffs'", "/bundle");
        if (!j["coeffs"].is_array()) throw ConfigError("expected an array of matrices", "/bundle/coeffs");
        for (std::size_t i = 0; i < j["coeffs"].size(); ++i)
            b.matrix_coeffs.push_back(
                parse_matrix(j["coeffs"][i], "/bundle/coeffs[" + std::to_string(i) + "]"));
    } else if (b.kind == "tabulated") {
        if (!j.contains("path")) throw ConfigError("tabulated bundle needs 'path'", "/bundle");
        b.path = get_string(j["path"], "/bundle/path");
    } else if (b.kind == "random_stable") {
        if (j.contains("dim")) b.dim = get_count(j["dim"], "/bundle/dim");
        if (b.dim == 0 || b.dim > 64) throw ConfigError("dim must be in [1, 64]", "/bundle/dim");
    } else {
        throw ConfigError("unknown bundle kind '" + b.kind + "'", "/bundle/kind");
    }
    if (j.contains("stability_m")) b.stability_m = get_number(j["stability_m"], "/bundle/stability_m");
    if (j.contains("stability_omega"))
        b.stability_omega = get_number(j["stability_omega"], "/bundle/stability_omega");
    if (b.stability_m < 1.0) throw ConfigError("stability_m must be >= 1", "/bundle/stability_m");
    return b;
}

TimeFamilyConfig parse_time_family(const json& j) {
    check_keys(j, "/time_family", {"kind", "matrix", "coeffs", "times", "values"});
    TimeFamilyConfig t;
    if (j.contains("kind")) t.kind = get_string(j["kind"], "/time_family/kind");
    if (t.kind == "constant") {
        if (j.contains("matrix"))
            t.matrix = parse_matrix(j["matrix"], "/time_family/matrix");
        else {
            t.matrix = Matrix(1);
            t.matrix(0, 0) = -1.0;
        }
    } else if (t.kind == "scalar_poly") {
        if (!j.contains("coeffs")) throw ConfigError("scalar_poly time family needs 'coeffs'", "/time_family");
        t.coeffs = parse_cvector(j["coeffs"], "/time_family/coeffs");
    } else if (t.kind == "commuting") {
        if (!j.contains("coeffs") || !j.contains("matrix"))
            throw ConfigError("commuting time family needs 'coeffs' and 'matrix'", "/time_family");
        t.coeffs = parse_cvector(j["coeffs"], "/time_family/coeffs");
        t.matrix = parse_matrix(j["matrix"], "/time_family/matrix");
    } else if (t.kind == "tabulated") {
        if (!j.contains("times") || !j.contains("values"))
            throw ConfigError("tabulated time family needs 'times' and 'values'", "/time_family");
        for (std::size_t i = 0; i < j["times"].size(); ++i)
            t.times.push_back(get_number(j["times"][i], "/time_family/times[" + std::to_string(i) + "]"));
        for (std::size_t i = 0; i < j["values"].size(); ++i)
            t.values.push_back(
                parse_matrix(j["values"][i], "/time_family/values[" + std::to_string(i) + "]"));
    } else {
        throw ConfigError("unknown time family kind '" + t.kind + "'", "/time_family/kind");
    }
    return t;
}

} // namespace

const std::map<std::string, double>& tolerance_defaults() {
    static const std::map<std::string, double> defaults = {
        {"triangle", 1e-12},
        {"homogeneity", 1e-12},
        {"isometry", 1e-10},
        {"roundtrip", 1e-10},
        {"corollary", 1e-12},
        {"resolvent-identity", 1e-10},
        {"resolvent-inversion", 1e-10},
        {"approx-identity-final", 1e-2},
        {"semigroup-law", 1e-10},
        {"extrap-semigroup-law", 1e-10},
        {"commutation", 1e-11},
        {"generator-order", 0.1},
        {"generator-taylor", 0.1},
        {"growth-ratio-slack", 1e-6},
        {"laplace", 1e-6},
        {"evolution-linear-value", 1e-12},
        {"evolution-order-window", 0.5},
        {"evolution-cocycle", 1e-12},
        {"evolution-semigroup-law", 1e-9},
        {"evolution-generator-order", 0.9},
    };
    return defaults;
}

ScenarioConfig ScenarioConfig::parse(const json& j) {
    check_keys(j, "/",
               {"grid", "bundle", "time_family", "evolution", "initial", "output", "p", "seed", "suites",
                "tolerances"});
    ScenarioConfig cfg;
    if (j.contains("grid")) cfg.grid = parse_grid(j["grid"]);
    if (j.contains("bundle")) cfg.bundle = parse_bundle(j["bundle"]);
    if (j.contains("time_family")) cfg.time_family = parse_time_family(j["time_family"]);
    if (j.contains("evolution")) {
        const auto& e = j["evolution"];
        check_keys(e, "/evolution", {"length", "n", "base_step", "steps"});
        if (e.contains("length")) cfg.evolution.length = get_number(e["length"], "/evolution/length");
        if (e.contains("n")) cfg.evolution.n = get_count(e["n"], "/evolution/n");
        if (e.contains("base_step"))
            cfg.evolution.base_step = get_number(e["base_step"], "/evolution/base_step");
        if (e.contains("steps")) cfg.evolution.steps = get_count(e["steps"], "/evolution/steps");
        if (cfg.evolution.n < 2) throw ConfigError("need at least 2 nodes", "/evolution/n");
        if (!(cfg.evolution.length > 0.0)) throw ConfigError("length must be positive", "/evolution/length");
    }
    if (j.contains("initial")) {
        const auto& f = j["initial"];
        check_keys(f, "/initial", {"kind", "value", "harmonic", "direction", "path"});
        if (f.contains("kind")) cfg.initial.kind = get_string(f["kind"], "/initial/kind");
        if (cfg.initial.kind == "constant") {
            if (!f.contains("value")) throw ConfigError("constant initial needs 'value'", "/initial");
            cfg.initial.value = parse_cvector(f["value"], "/initial/value");
        } else if (cfg.initial.kind == "sin") {
            if (f.contains("harmonic"))
                cfg.initial.harmonic = static_cast<int>(get_count(f["harmonic"], "/initial/harmonic"));
            if (f.contains("direction"))
                cfg.initial.direction = parse_cvector(f["direction"], "/initial/direction");
        } else if (cfg.initial.kind == "csv") {
            if (!f.contains("path")) throw ConfigError("csv initial needs 'path'", "/initial");
            cfg.initial.path = get_string(f["path"], "/initial/path");
        } else {
            throw ConfigError("unknown initial kind '" + cfg.initial.kind + "'", "/initial/kind");
        }
    }
    if (j.contains("output")) {
        const auto& o = j["output"];
        check_keys(o, "/output", {"path", "format"});
        if (o.contains("path")) cfg.output.path = get_string(o["path"], "/output/path");
        if (o.contains("format")) {
            cfg.output.format = get_string(o["format"], "/output/format");
            try {
                parse_report_format(cfg.output.format);
            } catch (const std::invalid_argument&) {
                throw ConfigError("format must be json, csv or text", "/output/format");
            }
        }
    }
    if (j.contains("p")) {
        cfg.p = get_number(j["p"], "/p");
        if (!(cfg.p >= 1.0)) throw ConfigError("p must be >= 1", "/p");
    }
    if (j.contains("seed")) cfg.seed = j["seed"].is_number_unsigned()
                                           ? j["seed"].get<std::uint64_t>()
                                           : static_cast<std::uint64_t>(get_count(j["seed"], "/seed"));
    if (j.contains("suites")) {
        if (!j["suites"].is_array()) throw ConfigError("expected an array of suite names", "/suites");
        for (std::size_t i = 0; i < j["suites"].size(); ++i) {
            const std::string name = get_string(j["suites"][i], "/suites[" + std::to_string(i) + "]");
            if (suite_registry().find(name) == suite_registry().end())
                throw ConfigError("unknown suite '" + name + "'", "/suites[" + std::to_string(i) + "]");
            cfg.suites.push_back(name);
        }
    }
    if (j.contains("tolerances")) {
        if (!j["tolerances"].is_object()) throw ConfigError("expected an object", "/tolerances");
        for (const auto& [key, value] : j["tolerances"].items()) {
            if (tolerance_defaults().find(key) == tolerance_defaults().end())
                throw ConfigError("unknown tolerance '" + key + "'", "/tolerances");
            const double v = get_number(value, "/tolerances/" + key);
            if (!(v > 0.0)) throw ConfigError("tolerances must be positive", "/tolerances/" + key);
            cfg.tolerances[key] = v;
        }
    }
    return cfg;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'", "/");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what(), "/");
    }
    return parse(j);
}

ordered_json ScenarioConfig::echo() const {
    ordered_json j;
    {
        ordered_json g;
        g["topology"] = grid.topology == Topology::interval ? "interval" : "circle";
        if (grid.topology == Topology::interval) {
            g["a"] = grid.a;
            g["b"] = grid.b;
        } else {
            g["length"] = grid.length;
        }
        g["n"] = grid.n;
        j["grid"] = std::move(g);
    }
    {
        ordered_json b;
        b["kind"] = bundle.kind;
        if (bundle.kind == "constant") b["matrix"] = matrix_json(bundle.matrix);
        if (bundle.kind == "scalar_poly") b["coeffs"] = cvector_json(bundle.coeffs);
        if (bundle.kind == "matrix_poly") {
            ordered_json coeffs = ordered_json::array();
            for (const auto& m : bundle.matrix_coeffs) coeffs.push_back(matrix_json(m));
            b["coeffs"] = std::move(coeffs);
        }
        if (bundle.kind == "tabulated") b["path"] = bundle.path;
        if (bundle.kind == "random_stable") b["dim"] = bundle.dim;
        b["stability_m"] = bundle.stability_m;
        b["stability_omega"] = bundle.stability_omega;
        j["bundle"] = std::move(b);
    }
    {
        ordered_json t;
        t["kind"] = time_family.kind;
        if (time_family.kind == "constant" && time_family.matrix.dim() == 0) {
            Matrix minus_one(1);
            minus_one(0, 0) = -1.0;
            t["matrix"] = matrix_json(minus_one);
        } else if (time_family.kind == "constant" || time_family.kind == "commuting")
            t["matrix"] = matrix_json(time_family.matrix);
        if (time_family.kind == "scalar_poly" || time_family.kind == "commuting")
            t["coeffs"] = cvector_json(time_family.coeffs);
        if (time_family.kind == "tabulated") {
            t["times"] = time_family.times;
            ordered_json vals = ordered_json::array();
            for (const auto& m : time_family.values) vals.push_back(matrix_json(m));
            t["values"] = std::move(vals);
        }
        j["time_family"] = std::move(t);
    }
    {
        ordered_json e;
        e["length"] = evolution.length;
        e["n"] = evolution.n;
        e["base_step"] = evolution.base_step;
        e["steps"] = evolution.steps;
        j["evolution"] = std::move(e);
    }
    j["p"] = p;
    j["seed"] = seed;
    j["suites"] = suites.empty() ? suite_names() : suites;
    {
        ordered_json t = ordered_json::object();
        for (const auto& [key, value] : tolerances) t[key] = value;
        j["tolerances"] = std::move(t);
    }
    return j;
}

GridPtr make_grid(const GridSpec& spec) {
    if (spec.topology == Topology::interval)
        return std::make_shared<GridMeasure>(GridMeasure::interval(spec.a, spec.b, spec.n));
    return std::make_shared<GridMeasure>(GridMeasure::circle(spec.length, spec.n));
}

BundlePtr make_bundle(const ScenarioConfig& cfg, GridPtr grid) {
    BundleOptions options;
    options.stability_m = cfg.bundle.stability_m;
    options.stability_omega = cfg.bundle.stability_omega;
    if (cfg.bundle.kind == "random_stable") {
        SplitMix64 rng = derived_rng(cfg.seed, "config-bundle");
        return std::make_shared<FiberOperatorFamily>(
            random_stable_bundle(std::move(grid), cfg.bundle.dim, rng));
    }
    FamilySpec spec = ScalarPolyFamily{cfg.bundle.coeffs.empty() ? cvector{cplx{-1.0}, cplx{-1.0}}
                                                                 : cfg.bundle.coeffs};
    if (cfg.bundle.kind == "constant") spec = ConstantFamily{cfg.bundle.matrix};
    if (cfg.bundle.kind == "matrix_poly") spec = MatrixPolyFamily{cfg.bundle.matrix_coeffs};
    if (cfg.bundle.kind == "tabulated") spec = load_family_csv(cfg.bundle.path, *grid);
    return build_bundle_ptr(spec, std::move(grid), options);
}

TimeFamily make_time_family(const TimeFamilyConfig& cfg) {
    if (cfg.kind == "constant") {
        if (cfg.matrix.dim() == 0) {
            Matrix minus_one(1);
            minus_one(0, 0) = -1.0;
            return TimeFamily::constant(minus_one);
        }
        return TimeFamily::constant(cfg.matrix);
    }
    if (cfg.kind == "scalar_poly") return TimeFamily::scalar_poly(cfg.coeffs);
    if (cfg.kind == "commuting") return TimeFamily::commuting(cfg.coeffs, cfg.matrix);
    return TimeFamily::tabulated(cfg.times, cfg.values);
}

FiberFunction make_initial(const InitialSpec& spec, GridPtr grid, double p) {
    if (spec.kind == "constant") return FiberFunction::constant(std::move(grid), spec.value, p);
    if (spec.kind == "csv") return FiberFunction::read_csv(spec.path, std::move(grid), p);
    const double two_pi_k = 2.0 * 3.14159265358979323846 * static_cast<double>(spec.harmonic);
    const double length = grid->measure();
    const cvector dir = spec.direction;
    return FiberFunction::sample(
        grid, dir.size(),
        [two_pi_k, length, dir](double s) {
            cvector v = dir;
            const double amp = std::sin(two_pi_k * s / length);
            for (auto& c : v) c *= amp;
            return v;
        },
        p);
}

VerificationReport run_scenario(const ScenarioConfig& cfg) {
    SuiteContext ctx;
    ctx.grid = make_grid(cfg.grid);
    ctx.bundle = make_bundle(cfg, ctx.grid);
    ctx.time_family = std::make_shared<TimeFamily>(make_time_family(cfg.time_family));
    ctx.evolution_grid =
        std::make_shared<GridMeasure>(GridMeasure::circle(cfg.evolution.length, cfg.evolution.n));
    ctx.evolution_base_step = cfg.evolution.base_step;
    ctx.p = cfg.p;
    ctx.seed = cfg.seed;
    ctx.tolerance = [overrides = cfg.tolerances](const std::string& name) {
        if (const auto it = overrides.find(name); it != overrides.end()) return it->second;
        const auto it = tolerance_defaults().find(name);
        if (it == tolerance_defaults().end())
            throw std::logic_error("unregistered tolerance '" + name + "'");
        return it->second;
    };

    std::vector<std::string> selection = cfg.suites.empty() ? suite_names() : cfg.suites;
    std::sort(selection.begin(), selection.end());
    selection.erase(std::unique(selection.begin(), selection.end()), selection.end());

    VerificationReport report;
    report.set_seed(cfg.seed);
    report.set_config_echo(cfg.echo());
    for (const auto& name : selection) {
        const SuiteFn& fn = suite_registry().at(name);
        try {
            for (auto& check : fn(ctx)) report.add(std::move(check));
        } catch (const std::exception& e) {
            CheckRecord c;
            c.suite = name;
            c.name = "suite-error";
            c.reference = "suite completes without numerical failure";
            c.observed = 1.0;
            c.tolerance = 0.0;
            c.pass = false;
            c.note = e.what();
            report.add(c);
        }
    }
    report.stamp_now();
    return report;
}

} // namespace fiberlp
