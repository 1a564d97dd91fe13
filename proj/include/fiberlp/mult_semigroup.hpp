#pragma once

#include <span>
#include <utility>
#include <vector>

#include "fiberlp/bundle.hpp"
#include "fiberlp/fiber_function.hpp"
#include "fiberlp/mult_operator.hpp"

namespace fiberlp {

// The multiplication semigroup acting fiberwise, (T(t) f)(s) = exp(t M(s)) f(s).
class MultSemigroup {
public:
    explicit MultSemigroup(BundlePtr bundle, double p = 2.0);

    const FiberOperatorFamily& bundle() const noexcept { return *bundle_; }
    BundlePtr bundle_ptr() const noexcept { return bundle_; }

    // t >= 0; throws std::range_error on exponential overflow
    FiberFunction apply(double t, const FiberFunction& f) const;

private:
    BundlePtr bundle_;
    double p_;
};

// Least-squares fit of log max_s |exp(t M(s))| against t over the sample
// times; returns (M_hat, omega_hat) with |T(t)| <= M_hat e^{omega_hat t} as
// the fitted bound.
std::pair<double, double> growth_bound_estimate(const FiberOperatorFamily& bundle,
                                                std::span<const double> t_list);

// Forward-quotient generator check: e_h = |(T(h)f - f)/h - M f|_p per h.
// First-order in h for f in the domain surrogate.
std::vector<double> generator_fd_check(const MultSemigroup& sg, const FiberFunction& f,
                                       std::span<const double> h_list);

} // namespace fiberlp
