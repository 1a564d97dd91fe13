#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fiberlp {

enum class Topology { interval, circle };

// Composite trapezoid weights for an ordered (possibly non-uniform) node set.
std::vector<double> trapezoid_weights(std::span<const double> nodes);

// Uniform weights length/n for n equispaced nodes on a circle.
std::vector<double> circle_weights(double length, std::size_t n);

// Discretized measure space: nodes with quadrature weights on an interval
// [a,b] or a circle of given length. Weights are nonnegative and sum to the
// total measure.
class GridMeasure {
public:
    static GridMeasure interval(double a, double b, std::size_t n);
    static GridMeasure interval_nodes(std::vector<double> nodes);
    static GridMeasure circle(double length, std::size_t n);
    // Explicit weights, e.g. to place zero-weight (null) nodes. The weight sum
    // must still equal the measure of the underlying set.
    static GridMeasure custom(Topology topology, std::vector<double> nodes, std::vector<double> weights,
                              double measure);

    Topology topology() const noexcept { return topology_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    double node(std::size_t i) const { return nodes_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> weights() const noexcept { return weights_; }
    double measure() const noexcept { return measure_; }

    bool uniform() const noexcept { return uniform_; }
    // node spacing; only meaningful for uniform grids
    double spacing() const noexcept { return spacing_; }

    // ordered, weighted sum of per-node values
    double integrate(std::span<const double> values) const;

private:
    GridMeasure() = default;

    Topology topology_ = Topology::interval;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    double measure_ = 0.0;
    double spacing_ = 0.0;
    bool uniform_ = false;
};

using GridPtr = std::shared_ptr<const GridMeasure>;

} // namespace fiberlp
