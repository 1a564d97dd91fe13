#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "fiberlp/grid.hpp"
#include "fiberlp/linalg.hpp"
#include "fiberlp/matrix.hpp"
#include "fiberlp/report.hpp"
#include "fiberlp/rng.hpp"

namespace fiberlp {

enum class NormMode { base, extrapolation };

// Countable dyadic lattice over the standard basis: vectors whose real and
// imaginary parts are integer multiples of 2^-level. Dense enough for the
// simple-function approximation machinery while staying exactly
// representable in binary floating point.
struct LatticeSet {
    std::size_t dim = 1;
    int level = 20;

    double spacing() const noexcept;
    // nearest lattice point, componentwise; ties round to even
    cvector snap(const cvector& x) const;
    // the generator vectors (standard basis)
    std::vector<cvector> generators() const;
};

// Built-in fiber family shapes. Scalar polynomial: m(s) = sum c_j s^j on a
// one-dimensional fiber. Matrix polynomial: M(s) = sum s^j C_j.
struct ConstantFamily {
    Matrix value;
};
struct ScalarPolyFamily {
    cvector coeffs;
};
struct MatrixPolyFamily {
    std::vector<Matrix> coeffs;
};
struct TabulatedFamily {
    std::vector<Matrix> per_node; // one matrix per grid node, in node order
};

using FamilySpec = std::variant<ConstantFamily, ScalarPolyFamily, MatrixPolyFamily, TabulatedFamily>;

std::size_t family_dim(const FamilySpec& spec);
// Evaluate the family at a point. Tabulated families are index-addressed and
// cannot be evaluated off-grid; use the node overload for those.
Matrix eval_family(const FamilySpec& spec, double s);

// Load a tabulated family from CSV rows: node, then row-major entries as
// re,im pairs. The node column must match the grid it is used with.
TabulatedFamily load_family_csv(const std::string& path, const GridMeasure& grid);

struct BundleOptions {
    double cond_cap = kDefaultConditionCap;
    // claimed uniform stability certificate |T_s(t)| <= M e^{omega t}
    double stability_m = 1.0;
    double stability_omega = 0.0;
};

// The fiber operator family M(s) sampled on a grid, with cached inverses and
// per-node condition numbers. Immutable after build; per-node reads are safe
// to run concurrently.
class FiberOperatorFamily {
public:
    FiberOperatorFamily(GridPtr grid, std::vector<Matrix> fibers, BundleOptions options);

    const GridMeasure& grid() const noexcept { return *grid_; }
    GridPtr grid_ptr() const noexcept { return grid_; }
    std::size_t size() const noexcept { return fibers_.size(); }
    std::size_t dim() const noexcept { return dim_; }

    const Matrix& fiber(std::size_t node) const;
    const Matrix& inverse(std::size_t node) const;
    double condition(std::size_t node) const;
    std::span<const Matrix> fibers() const noexcept { return fibers_; }
    std::span<const Matrix> inverses() const noexcept { return inverses_; }

    double cond_cap() const noexcept { return options_.cond_cap; }
    double stability_m() const noexcept { return options_.stability_m; }
    double stability_omega() const noexcept { return options_.stability_omega; }

    // extrapolation norm at a node: |M(s)^{-1} x|
    double extrap_norm(std::size_t node, const cvector& x) const;

private:
    GridPtr grid_;
    std::size_t dim_ = 0;
    std::vector<Matrix> fibers_;
    std::vector<Matrix> inverses_;
    std::vector<double> conditions_;
    BundleOptions options_;
};

using BundlePtr = std::shared_ptr<const FiberOperatorFamily>;

// Sample the family on the grid and cache the inverses. Throws
// NodeSingularError naming the first node whose fiber is singular or beyond
// the condition cap.
FiberOperatorFamily build_bundle(const FamilySpec& spec, GridPtr grid, BundleOptions options = {});
BundlePtr build_bundle_ptr(const FamilySpec& spec, GridPtr grid, BundleOptions options = {});

const Matrix& eval_fiber_operator(const FiberOperatorFamily& bundle, std::size_t node);

// Random uniformly-stable bundle: M(s) = -c I + K(s) with |K(s)| = rho < c,
// so every fiber is invertible with condition at most (c+rho)/(c-rho) and
// spectral abscissa at most rho - c.
FiberOperatorFamily random_stable_bundle(GridPtr grid, std::size_t dim, SplitMix64& rng, double c = 2.0,
                                         double rho = 1.5);

struct ValidateOptions {
    std::size_t random_triples = 1000;
    std::uint64_t seed = 0;
    int lattice_level = 20;
    double norm_axiom_slack = 1e-12;
};

// Structural checks on a built bundle: per-node invertibility/conditioning,
// finite evaluation of s -> |M(s)^{-1} b| over the lattice generators, cached
// inverse quality, and norm-axiom spot checks on random triples. Failures are
// recorded in the report, not thrown.
VerificationReport validate_bundle(const FiberOperatorFamily& bundle, ValidateOptions options = {});

// Pre-build screening: evaluates the family on the grid and reports per-node
// invertibility without constructing the cached bundle, so a singular fiber is
// flagged (with its node) instead of thrown.
VerificationReport validate_family(const FamilySpec& spec, const GridMeasure& grid,
                                   double cond_cap = kDefaultConditionCap);

} // namespace fiberlp
