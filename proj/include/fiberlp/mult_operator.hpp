#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fiberlp/bundle.hpp"
#include "fiberlp/fiber_function.hpp"

namespace fiberlp {

// The operator-valued multiplication operator (M f)(s) = M(s) f(s) together
// with its resolvent calculus. All applications are per-node maps.
class MultOperator {
public:
    explicit MultOperator(BundlePtr bundle, double p = 2.0);

    const FiberOperatorFamily& bundle() const noexcept { return *bundle_; }
    BundlePtr bundle_ptr() const noexcept { return bundle_; }
    double p() const noexcept { return p_; }

    // g(s) = M(s) f(s), tagged base mode
    FiberFunction apply(const FiberFunction& f) const;

    // g(s) = (lambda I - M(s))^{-1} f(s). Throws NodeSingularError when
    // lambda sits in the numerical spectrum of some fiber.
    FiberFunction resolvent_apply(cplx lambda, const FiberFunction& f) const;

    // e_n = |lambda_n R(lambda_n) f - f|_p for each lambda in the list
    std::vector<double> resolvent_approx_identity(const FiberFunction& f,
                                                  std::span<const double> lambdas) const;

private:
    BundlePtr bundle_;
    double p_;
};

// Boundedness verdict for the domain surrogate: the norm sequence over the
// refinement levels, a log-log growth exponent fit, and membership decided by
// the relative increase across the last two levels.
struct DomainVerdict {
    bool member = false;
    std::vector<double> norm_sequence;
    double growth_exponent = 0.0;
    double last_relative_increase = 0.0;
};

inline constexpr double kDomainIncreaseTolerance = 0.05;

// Probe (s -> M(s) f(s)) in L^p over growing truncations [0, R]: the family
// and profile are resampled on each truncated grid at fixed node density.
DomainVerdict domain_membership_truncation(const FamilySpec& family,
                                           const std::function<cvector(double)>& profile, double p,
                                           std::span<const double> radii, std::size_t nodes_per_unit = 64);

// Same verdict under mesh refinement on a fixed interval [a, b]; used for
// families that are bounded on a compact domain.
DomainVerdict domain_membership_refine(const FamilySpec& family,
                                       const std::function<cvector(double)>& profile, double p, double a,
                                       double b, std::span<const std::size_t> node_counts);

} // namespace fiberlp
