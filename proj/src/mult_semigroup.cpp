#include "fiberlp/mult_semigroup.hpp"

#include <cmath>
#include <stdexcept>

#include "fiberlp/kernels.hpp"

namespace fiberlp {

MultSemigroup::MultSemigroup(BundlePtr bundle, double p) : bundle_(std::move(bundle)), p_(p) {
    if (!bundle_) throw std::invalid_argument("MultSemigroup: null bundle");
    if (!(p_ >= 1.0)) throw std::invalid_argument("MultSemigroup: p must be >= 1");
}

FiberFunction MultSemigroup::apply(double t, const FiberFunction& f) const {
    if (!(t >= 0.0)) throw std::invalid_argument("MultSemigroup::apply: t must be >= 0");
    if (bundle_->size() != f.nodes() || bundle_->dim() != f.dim())
        throw std::invalid_argument("MultSemigroup::apply: function does not match the bundle");
    FiberFunction g(f.grid_ptr(), f.dim(), p_, f.mode());
    kernels::apply_exp_family(bundle_->fibers(), t, f.values(), g.values());
    return g;
}

std::pair<double, double> growth_bound_estimate(const FiberOperatorFamily& bundle,
                                                std::span<const double> t_list) {
    if (t_list.size() < 2)
        throw std::invalid_argument("growth_bound_estimate: need at least two sample times");

    std::vector<Matrix> exps(bundle.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double t : t_list) {
        if (!(t > 0.0)) throw std::invalid_argument("growth_bound_estimate: times must be positive");
        kernels::exp_family(bundle.fibers(), t, exps);
        double gamma = 0.0;
        for (const auto& e : exps) gamma = std::max(gamma, op_norm(e));
        const double y = std::log(gamma);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
    }
    const auto n = static_cast<double>(t_list.size());
    const double denom = n * sxx - sx * sx;
    const double omega = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - omega * sx) / n;
    return {std::exp(intercept), omega};
}

std::vector<double> generator_fd_check(const MultSemigroup& sg, const FiberFunction& f,
                                       std::span<const double> h_list) {
    const MultOperator op(sg.bundle_ptr(), f.p());
    const FiberFunction mf = op.apply(f).with_mode(f.mode());
    const FiberOperatorFamily* b = f.mode() == NormMode::extrapolation ? &sg.bundle() : nullptr;

    std::vector<double> errors;
    errors.reserve(h_list.size());
    for (double h : h_list) {
        if (!(h > 0.0)) throw std::invalid_argument("generator_fd_check: h must be positive");
        FiberFunction quotient = sg.apply(h, f) - f;
        quotient *= cplx{1.0 / h};
        errors.push_back(lp_fiber_norm(quotient - mf, b));
    }
    return errors;
}

} // namespace fiberlp
