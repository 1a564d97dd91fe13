#include "fiberlp/mult_operator.hpp"

#include <cmath>
#include <stdexcept>

#include "fiberlp/kernels.hpp"

namespace fiberlp {

namespace {

void require_match(const FiberOperatorFamily& bundle, const FiberFunction& f) {
    if (bundle.size() != f.nodes() || bundle.dim() != f.dim())
        throw std::invalid_argument("MultOperator: function does not match the bundle");
}

DomainVerdict verdict_from_sequence(std::vector<double> norms, std::span<const double> levels) {
    DomainVerdict v;
    v.norm_sequence = std::move(norms);
    const std::size_t n = v.norm_sequence.size();
    if (n < 2) throw std::invalid_argument("domain_membership: need at least two refinement levels");

    const double prev = v.norm_sequence[n - 2];
    const double last = v.norm_sequence[n - 1];
    v.last_relative_increase = prev > 0.0 ? (last - prev) / prev : (last > 0.0 ? 1.0 : 0.0);
    v.member = v.last_relative_increase <= kDomainIncreaseTolerance;

    // least-squares slope of log |Mf| against log level
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(v.norm_sequence[i] > 0.0) || !(levels[i] > 0.0)) continue;
        const double x = std::log(levels[i]);
        const double y = std::log(v.norm_sequence[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    v.growth_exponent = (m >= 2 && denom != 0.0) ? (static_cast<double>(m) * sxy - sx * sy) / denom : 0.0;
    return v;
}

double mult_norm_on_grid(const FamilySpec& family, const std::function<cvector(double)>& profile, double p,
                         GridPtr grid) {
    const auto bundle = build_bundle_ptr(family, grid);
    const FiberFunction f = FiberFunction::sample(grid, bundle->dim(), profile, p);
    MultOperator op(bundle, p);
    return lp_fiber_norm(op.apply(f));
}

} // namespace

MultOperator::MultOperator(BundlePtr bundle, double p) : bundle_(std::move(bundle)), p_(p) {
    if (!bundle_) throw std::invalid_argument("MultOperator: null bundle");
    if (!(p_ >= 1.0)) throw std::invalid_argument("MultOperator: p must be >= 1");
}

FiberFunction MultOperator::apply(const FiberFunction& f) const {
    require_match(*bundle_, f);
    FiberFunction g(f.grid_ptr(), f.dim(), p_, NormMode::base);
    kernels::apply_family(bundle_->fibers(), f.values(), g.values());
    return g;
}

FiberFunction MultOperator::resolvent_apply(cplx lambda, const FiberFunction& f) const {
    require_match(*bundle_, f);
    FiberFunction g(f.grid_ptr(), f.dim(), p_, f.mode());
    kernels::apply_resolvent(bundle_->fibers(), lambda, f.values(), g.values(), bundle_->cond_cap());
    return g;
}

std::vector<double> MultOperator::resolvent_approx_identity(const FiberFunction& f,
                                                            std::span<const double> lambdas) const {
    std::vector<double> errors;
    errors.reserve(lambdas.size());
    for (double lambda : lambdas) {
        if (!(lambda > bundle_->stability_omega()))
            throw std::invalid_argument("resolvent_approx_identity: lambda must exceed the growth bound");
        FiberFunction g = resolvent_apply(cplx{lambda}, f);
        g *= cplx{lambda};
        errors.push_back(lp_fiber_norm(g - f, f.mode() == NormMode::extrapolation ? bundle_.get() : nullptr));
    }
    return errors;
}

DomainVerdict domain_membership_truncation(const FamilySpec& family,
                                           const std::function<cvector(double)>& profile, double p,
                                           std::span<const double> radii, std::size_t nodes_per_unit) {
    std::vector<double> norms;
    norms.reserve(radii.size());
    for (double r : radii) {
        if (!(r > 0.0)) throw std::invalid_argument("domain_membership: radii must be positive");
        const auto n = static_cast<std::size_t>(std::ceil(r * static_cast<double>(nodes_per_unit))) + 1;
        norms.push_back(mult_norm_on_grid(family, profile, p,
                                          std::make_shared<GridMeasure>(GridMeasure::interval(0.0, r, n))));
    }
    return verdict_from_sequence(std::move(norms), radii);
}

DomainVerdict domain_membership_refine(const FamilySpec& family,
                                       const std::function<cvector(double)>& profile, double p, double a,
                                       double b, std::span<const std::size_t> node_counts) {
    std::vector<double> norms;
    std::vector<double> levels;
    norms.reserve(node_counts.size());
    for (std::size_t n : node_counts) {
        norms.push_back(mult_norm_on_grid(family, profile, p,
                                          std::make_shared<GridMeasure>(GridMeasure::interval(a, b, n))));
        levels.push_back(static_cast<double>(n));
    }
    return verdict_from_sequence(std::move(norms), levels);
}

} // namespace fiberlp
