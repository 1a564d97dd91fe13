#pragma once

#include <cstdint>
#include <optional>

#include "fiberlp/bundle.hpp"
#include "fiberlp/fiber_function.hpp"
#include "fiberlp/report.hpp"

namespace fiberlp {

// A function measured in extrapolation norms, optionally carrying the base
// witness g with f = M(.) g. The witness turns the existential in the space
// description into a checkable data invariant.
struct ExtrapolatedFunction {
    FiberFunction value;                  // mode = extrapolation
    std::optional<FiberFunction> witness; // mode = base, value(s) = M(s) witness(s)
};

// Total extension of the multiplication operator: f(s) = M(s) g(s), tagged
// with the extrapolation norm and carrying g as witness. Defined on all of
// the base space; preserves the norm exactly at the level of per-node values.
ExtrapolatedFunction extrapolated_apply(const FiberOperatorFamily& bundle, const FiberFunction& g);

// (S(t) f)(s) = exp(t M(s)) f(s) measured in extrapolation norms; the witness
// is advanced through the base semigroup when present.
ExtrapolatedFunction extrapolated_semigroup_apply(const FiberOperatorFamily& bundle, double t,
                                                  const ExtrapolatedFunction& f);

struct IdentificationResult {
    FiberFunction base; // g(s) = M(s)^{-1} f(s)
    double isometry_defect = 0.0;
    double reconstruction_defect = 0.0;
};

// The identification map between the extrapolated space and the fiber space
// of extrapolation norms: recovers g with f = M(.) g and reports the isometry
// and reconstruction defects (both relative).
IdentificationResult identify_extrapolation(const FiberOperatorFamily& bundle, const FiberFunction& f);

// Constant-fiber special case M(s) = A: for sampled random f, the
// extrapolation-mode norm must equal the base norm of s -> A^{-1} f(s).
VerificationReport constant_fiber_corollary_check(const Matrix& a, GridPtr grid, double p,
                                                  std::size_t sample_count, std::uint64_t seed,
                                                  double tolerance = 1e-12);

} // namespace fiberlp
