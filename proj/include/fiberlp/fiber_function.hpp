#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fiberlp/bundle.hpp"
#include "fiberlp/grid.hpp"
#include "fiberlp/matrix.hpp"

namespace fiberlp {

// One vector value of dimension d per grid node, tagged with the norm mode it
// is measured in and the integrability exponent p in [1, inf). The discrete
// stand-in for an element of an L^p fiber space. Values are flat, node-major.
class FiberFunction {
public:
    FiberFunction() = default;
    FiberFunction(GridPtr grid, std::size_t dim, double p = 2.0, NormMode mode = NormMode::base);

    static FiberFunction from_values(GridPtr grid, std::size_t dim, cvector values, double p = 2.0,
                                     NormMode mode = NormMode::base);
    static FiberFunction sample(GridPtr grid, std::size_t dim,
                                const std::function<cvector(double)>& profile, double p = 2.0,
                                NormMode mode = NormMode::base);
    static FiberFunction constant(GridPtr grid, const cvector& value, double p = 2.0,
                                  NormMode mode = NormMode::base);

    const GridMeasure& grid() const noexcept { return *grid_; }
    GridPtr grid_ptr() const noexcept { return grid_; }
    std::size_t nodes() const noexcept { return grid_ ? grid_->size() : 0; }
    std::size_t dim() const noexcept { return dim_; }
    double p() const noexcept { return p_; }
    NormMode mode() const noexcept { return mode_; }

    std::span<const cplx> values() const noexcept { return values_; }
    std::span<cplx> values() noexcept { return values_; }
    std::span<const cplx> node_value(std::size_t node) const;
    cvector node_vector(std::size_t node) const;
    void set_node_value(std::size_t node, const cvector& v);

    // same data, reinterpreted under another norm mode / exponent
    FiberFunction with_mode(NormMode mode) const;
    FiberFunction with_p(double p) const;

    FiberFunction& operator+=(const FiberFunction& rhs);
    FiberFunction& operator-=(const FiberFunction& rhs);
    FiberFunction& operator*=(cplx alpha);

    // pointwise indicator multiplication 1_E f for a node-index set E
    FiberFunction masked(const std::vector<std::size_t>& keep_nodes) const;

    // FNV-1a over dims, p, mode and the raw value bits; stable across runs
    std::uint64_t content_hash() const noexcept;

    void write_csv(const std::string& path) const;
    static FiberFunction read_csv(const std::string& path, GridPtr grid, double p = 2.0,
                                  NormMode mode = NormMode::base);

private:
    GridPtr grid_;
    std::size_t dim_ = 0;
    cvector values_;
    NormMode mode_ = NormMode::base;
    double p_ = 2.0;
};

FiberFunction operator+(FiberFunction lhs, const FiberFunction& rhs);
FiberFunction operator-(FiberFunction lhs, const FiberFunction& rhs);
FiberFunction operator*(cplx alpha, FiberFunction f);

// L^p fiber norm: (sum_i w_i |f(s_i)|_{s_i}^p)^{1/p}. The bundle supplies the
// per-node norms in extrapolation mode and may be omitted in base mode.
double lp_fiber_norm(const FiberFunction& f, const FiberOperatorFamily* bundle = nullptr);

// per-node fiber norm values (no weights), mode-aware
std::vector<double> node_norms(const FiberFunction& f, const FiberOperatorFamily* bundle = nullptr);

// Measurable simple function: disjoint node-index parts, one lattice value
// per part. Nodes outside every part take the value zero.
struct SimpleFunction {
    std::size_t dim = 0;
    std::vector<std::vector<std::size_t>> parts;
    std::vector<cvector> values;

    const cvector& value_at(std::size_t node, const cvector& zero) const;
    std::size_t part_count() const noexcept { return parts.size(); }
};

struct SimpleApproximation {
    SimpleFunction simple;
    double error = 0.0; // max over nodes of the selected fiber norm of f - f_k
};

// Canonical level-k approximant: values snapped to the dyadic lattice,
// adjacent equal-valued nodes merged into one part.
SimpleApproximation simple_approximation(const FiberFunction& f, int level,
                                         const FiberOperatorFamily* bundle = nullptr);

// Equality up to the discrete null sets: true iff the per-node (base) fiber
// norm of f-g is within tol at every node carrying positive weight.
bool almost_everywhere_equal(const FiberFunction& f, const FiberFunction& g, double tol);

} // namespace fiberlp
