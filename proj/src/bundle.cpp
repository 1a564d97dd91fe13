#include "fiberlp/bundle.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fiberlp/errors.hpp"
#include "fiberlp/kernels.hpp"

namespace fiberlp {

double LatticeSet::spacing() const noexcept { return std::ldexp(1.0, -level); }

cvector LatticeSet::snap(const cvector& x) const {
    const double scale = std::ldexp(1.0, level);
    const double inv_scale = spacing();
    cvector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        // rint: ties to even under the default rounding mode
        out[i] = cplx{std::rint(x[i].real() * scale) * inv_scale, std::rint(x[i].imag() * scale) * inv_scale};
    }
    return out;
}

std::vector<cvector> LatticeSet::generators() const {
    std::vector<cvector> gens(dim, cvector(dim, cplx{0.0}));
    for (std::size_t i = 0; i < dim; ++i) gens[i][i] = 1.0;
    return gens;
}

std::size_t family_dim(const FamilySpec& spec) {
    return std::visit(
        [](const auto& fam) -> std::size_t {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ConstantFamily>) return fam.value.dim();
            if constexpr (std::is_same_v<T, ScalarPolyFamily>) return 1;
            if constexpr (std::is_same_v<T, MatrixPolyFamily>)
                return fam.coeffs.empty() ? 0 : fam.coeffs[0].dim();
            if constexpr (std::is_same_v<T, TabulatedFamily>)
                return fam.per_node.empty() ? 0 : fam.per_node[0].dim();
        },
        spec);
}

Matrix eval_family(const FamilySpec& spec, double s) {
    if (std::holds_alternative<ConstantFamily>(spec)) return std::get<ConstantFamily>(spec).value;
    if (std::holds_alternative<ScalarPolyFamily>(spec)) {
        const auto& coeffs = std::get<ScalarPolyFamily>(spec).coeffs;
        cplx v = 0.0;
        for (std::size_t j = coeffs.size(); j-- > 0;) v = v * s + coeffs[j];
        Matrix m(1);
        m(0, 0) = v;
        return m;
    }
    if (std::holds_alternative<MatrixPolyFamily>(spec)) {
        const auto& coeffs = std::get<MatrixPolyFamily>(spec).coeffs;
        if (coeffs.empty()) throw std::invalid_argument("eval_family: empty matrix polynomial");
        Matrix m(coeffs[0].dim());
        double sp = 1.0;
        for (const auto& c : coeffs) {
            Matrix term = c;
            term *= cplx{sp};
            m += term;
            sp *= s;
        }
        return m;
    }
    throw std::invalid_argument("eval_family: tabulated families are node-addressed");
}

TabulatedFamily load_family_csv(const std::string& path, const GridMeasure& grid) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_family_csv: cannot open " + path);

    TabulatedFamily fam;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> cells;
        bool numeric = true;
        while (std::getline(ls, cell, ',')) {
            try {
                cells.push_back(std::stod(cell));
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (row == 0) continue; // header
            throw std::runtime_error("load_family_csv: non-numeric row in " + path);
        }
        if (cells.size() < 3 || (cells.size() - 1) % 2 != 0)
            throw std::runtime_error("load_family_csv: bad column count in " + path);
        const std::size_t d2 = (cells.size() - 1) / 2;
        const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(d2))));
        if (d * d != d2) throw std::runtime_error("load_family_csv: entries are not a square matrix");
        if (row >= grid.size()) throw std::runtime_error("load_family_csv: more rows than grid nodes");
        if (std::abs(cells[0] - grid.node(row)) > 1e-12 * std::max(1.0, std::abs(grid.node(row))))
            throw std::runtime_error("load_family_csv: node column does not match the grid");
        Matrix m(d);
        for (std::size_t k = 0; k < d2; ++k)
            m.entries()[k] = cplx{cells[1 + 2 * k], cells[2 + 2 * k]};
        fam.per_node.push_back(std::move(m));
        ++row;
    }
    if (fam.per_node.size() != grid.size())
        throw std::runtime_error("load_family_csv: row count does not match the grid");
    return fam;
}

FiberOperatorFamily::FiberOperatorFamily(GridPtr grid, std::vector<Matrix> fibers, BundleOptions options)
    : grid_(std::move(grid)), fibers_(std::move(fibers)), options_(options) {
    if (!grid_ || fibers_.size() != grid_->size())
        throw std::invalid_argument("FiberOperatorFamily: fiber count must match the grid");
    if (fibers_.empty()) throw std::invalid_argument("FiberOperatorFamily: empty family");
    dim_ = fibers_[0].dim();

    inverses_.resize(fibers_.size());
    conditions_.resize(fibers_.size());
    for (std::size_t i = 0; i < fibers_.size(); ++i) {
        if (fibers_[i].dim() != dim_)
            throw std::invalid_argument("FiberOperatorFamily: inconsistent fiber dimensions");
        if (!fibers_[i].is_finite())
            throw NodeSingularError("build_bundle: non-finite fiber operator", i,
                                    std::numeric_limits<double>::infinity());
        const LuFactors f = lu_factor(fibers_[i]);
        const double cond = condition_estimate(fibers_[i], f);
        if (!(cond <= options_.cond_cap))
            throw NodeSingularError("build_bundle: singular fiber operator at node " + std::to_string(i), i,
                                    cond);
        inverses_[i] = lu_inverse(f);
        conditions_[i] = cond;
    }
}

const Matrix& FiberOperatorFamily::fiber(std::size_t node) const {
    if (node >= fibers_.size()) throw std::out_of_range("FiberOperatorFamily::fiber: node out of range");
    return fibers_[node];
}

const Matrix& FiberOperatorFamily::inverse(std::size_t node) const {
    if (node >= inverses_.size()) throw std::out_of_range("FiberOperatorFamily::inverse: node out of range");
    return inverses_[node];
}

double FiberOperatorFamily::condition(std::size_t node) const {
    if (node >= conditions_.size())
        throw std::out_of_range("FiberOperatorFamily::condition: node out of range");
    return conditions_[node];
}

double FiberOperatorFamily::extrap_norm(std::size_t node, const cvector& x) const {
    if (x.size() != dim_) throw std::invalid_argument("extrap_norm: dimension mismatch");
    return norm2(inverse(node) * x);
}

FiberOperatorFamily build_bundle(const FamilySpec& spec, GridPtr grid, BundleOptions options) {
    if (!grid) throw std::invalid_argument("build_bundle: null grid");
    std::vector<Matrix> fibers;
    fibers.reserve(grid->size());
    if (std::holds_alternative<TabulatedFamily>(spec)) {
        const auto& tab = std::get<TabulatedFamily>(spec);
        if (tab.per_node.size() != grid->size())
            throw std::invalid_argument("build_bundle: tabulated family does not match the grid");
        fibers = tab.per_node;
    } else {
        for (std::size_t i = 0; i < grid->size(); ++i) fibers.push_back(eval_family(spec, grid->node(i)));
    }
    return FiberOperatorFamily(std::move(grid), std::move(fibers), options);
}

BundlePtr build_bundle_ptr(const FamilySpec& spec, GridPtr grid, BundleOptions options) {
    return std::make_shared<FiberOperatorFamily>(build_bundle(spec, std::move(grid), options));
}

const Matrix& eval_fiber_operator(const FiberOperatorFamily& bundle, std::size_t node) {
    return bundle.fiber(node);
}

FiberOperatorFamily random_stable_bundle(GridPtr grid, std::size_t dim, SplitMix64& rng, double c,
                                         double rho) {
    if (!(rho < c)) throw std::invalid_argument("random_stable_bundle: need rho < c");
    std::vector<Matrix> fibers;
    fibers.reserve(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
        Matrix k = random_matrix(rng, dim);
        const double n = op_norm(k);
        if (n > 0.0) k *= cplx{rho / n};
        Matrix m = Matrix::identity(dim);
        m *= cplx{-c};
        m += k;
        fibers.push_back(std::move(m));
    }
    BundleOptions options;
    options.stability_m = 1.0 + 2.0 * rho; // coarse certificate, not used numerically
    options.stability_omega = rho - c;
    return FiberOperatorFamily(std::move(grid), std::move(fibers), options);
}

VerificationReport validate_bundle(const FiberOperatorFamily& bundle, ValidateOptions options) {
    VerificationReport report;
    report.set_seed(options.seed);
    const std::size_t n = bundle.size();
    const std::size_t d = bundle.dim();

    {
        CheckRecord c;
        c.suite = "bundle-validate";
        c.name = "fiber-invertibility";
        c.reference = "cond(M(s)) <= cap at every node";
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, bundle.condition(i));
        c.observed = worst;
        c.tolerance = bundle.cond_cap();
        c.pass = worst <= bundle.cond_cap();
        report.add(c);
    }
    {
        CheckRecord c;
        c.suite = "bundle-validate";
        c.name = "cached-inverse-quality";
        c.reference = "|M(s) M(s)^{-1} - I| <= 1e-10";
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Matrix r = bundle.fiber(i) * bundle.inverse(i);
            r -= Matrix::identity(d);
            worst = std::max(worst, op_norm(r));
        }
        c.observed = worst;
        c.tolerance = 1e-10;
        c.pass = worst <= c.tolerance;
        report.add(c);
    }
    {
        // measurability surrogate: s -> |M(s)^{-1} b| finite for every lattice generator
        CheckRecord c;
        c.suite = "bundle-validate";
        c.name = "lattice-finite-evaluation";
        c.reference = "s -> |M(s)^{-1} b| finite for all generators b";
        const LatticeSet lattice{d, options.lattice_level};
        bool all_finite = true;
        double worst = 0.0;
        for (const auto& b : lattice.generators()) {
            for (std::size_t i = 0; i < n; ++i) {
                const double v = bundle.extrap_norm(i, b);
                if (!std::isfinite(v)) all_finite = false;
                worst = std::max(worst, v);
            }
        }
        c.observed = all_finite ? 0.0 : 1.0;
        c.tolerance = 0.0;
        c.pass = all_finite;
        c.note = "largest generator norm " + std::to_string(worst);
        report.add(c);
    }
    {
        CheckRecord pos, hom, tri;
        pos.suite = hom.suite = tri.suite = "bundle-validate";
        pos.name = "norm-positivity";
        pos.reference = "x != 0 => |x|_{-1,s} > 0";
        hom.name = "norm-homogeneity";
        hom.reference = "|a x|_{-1,s} = |a| |x|_{-1,s}";
        tri.name = "norm-triangle";
        tri.reference = "|x+y|_{-1,s} <= |x|_{-1,s} + |y|_{-1,s}";
        SplitMix64 rng = derived_rng(options.seed, "validate-bundle");
        bool positive = true;
        double worst_hom = 0.0, worst_tri = 0.0;
        for (std::size_t k = 0; k < options.random_triples; ++k) {
            const auto node = static_cast<std::size_t>(rng.below(n));
            const cvector x = random_cvector(rng, d);
            const cvector y = random_cvector(rng, d);
            const cplx alpha = rng.unit_square();
            const double nx = bundle.extrap_norm(node, x);
            const double ny = bundle.extrap_norm(node, y);
            if (norm2(x) > 0.0 && !(nx > 0.0)) positive = false;
            worst_hom = std::max(worst_hom,
                                 std::abs(bundle.extrap_norm(node, scaled(alpha, x)) - std::abs(alpha) * nx));
            worst_tri = std::max(worst_tri, bundle.extrap_norm(node, add(x, y)) - (nx + ny));
        }
        pos.observed = positive ? 1.0 : 0.0;
        pos.tolerance = 0.0;
        pos.pass = positive;
        hom.observed = worst_hom;
        hom.tolerance = options.norm_axiom_slack;
        hom.pass = worst_hom <= hom.tolerance;
        tri.observed = worst_tri;
        tri.tolerance = options.norm_axiom_slack;
        tri.pass = worst_tri <= tri.tolerance;
        report.add(pos);
        report.add(hom);
        report.add(tri);
    }
    return report;
}

VerificationReport validate_family(const FamilySpec& spec, const GridMeasure& grid, double cond_cap) {
    VerificationReport report;
    CheckRecord c;
    c.suite = "bundle-validate";
    c.name = "family-invertibility";
    c.reference = "0 in rho(M(s)) at every node";
    c.tolerance = cond_cap;
    double worst = 0.0;
    std::size_t bad_node = grid.size();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Matrix m = std::holds_alternative<TabulatedFamily>(spec) ? std::get<TabulatedFamily>(spec).per_node[i]
                                                                 : eval_family(spec, grid.node(i));
        const LuFactors f = lu_factor(m);
        const double cond = condition_estimate(m, f);
        worst = std::max(worst, cond);
        if (!(cond <= cond_cap) && bad_node == grid.size()) bad_node = i;
    }
    c.observed = worst;
    c.pass = bad_node == grid.size();
    if (!c.pass) c.note = "singular or ill-conditioned fiber at node " + std::to_string(bad_node);
    report.add(c);
    return report;
}

} // namespace fiberlp
