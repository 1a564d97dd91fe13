#include "fiberlp/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace fiberlp {

namespace {

void require_strictly_increasing(std::span<const double> nodes) {
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw std::invalid_argument("GridMeasure: nodes must be strictly increasing");
}

} // namespace

std::vector<double> trapezoid_weights(std::span<const double> nodes) {
    const std::size_t n = nodes.size();
    if (n < 2) throw std::invalid_argument("trapezoid_weights: need at least 2 nodes");
    require_strictly_increasing(nodes);
    std::vector<double> w(n, 0.0);
    w[0] = 0.5 * (nodes[1] - nodes[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) w[i] = 0.5 * (nodes[i + 1] - nodes[i - 1]);
    w[n - 1] = 0.5 * (nodes[n - 1] - nodes[n - 2]);
    return w;
}

std::vector<double> circle_weights(double length, std::size_t n) {
    if (n == 0) throw std::invalid_argument("circle_weights: need at least 1 node");
    if (!(length > 0.0)) throw std::invalid_argument("circle_weights: length must be positive");
    return std::vector<double>(n, length / static_cast<double>(n));
}

GridMeasure GridMeasure::interval(double a, double b, std::size_t n) {
    if (!(b > a)) throw std::invalid_argument("GridMeasure::interval: need b > a");
    if (n < 2) throw std::invalid_argument("GridMeasure::interval: need at least 2 nodes");
    std::vector<double> nodes(n);
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = a + h * static_cast<double>(i);
    nodes[n - 1] = b; // endpoint exact

    GridMeasure g;
    g.topology_ = Topology::interval;
    g.weights_ = trapezoid_weights(nodes);
    g.nodes_ = std::move(nodes);
    g.measure_ = b - a;
    g.spacing_ = h;
    g.uniform_ = true;
    return g;
}

GridMeasure GridMeasure::interval_nodes(std::vector<double> nodes) {
    if (nodes.size() < 2) throw std::invalid_argument("GridMeasure::interval_nodes: need at least 2 nodes");
    GridMeasure g;
    g.topology_ = Topology::interval;
    g.weights_ = trapezoid_weights(nodes);
    g.measure_ = nodes.back() - nodes.front();
    g.nodes_ = std::move(nodes);
    g.spacing_ = 0.0;
    g.uniform_ = false;
    return g;
}

GridMeasure GridMeasure::circle(double length, std::size_t n) {
    GridMeasure g;
    g.weights_ = circle_weights(length, n);
    g.nodes_.resize(n);
    const double h = length / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) g.nodes_[i] = h * static_cast<double>(i);
    g.topology_ = Topology::circle;
    g.measure_ = length;
    g.spacing_ = h;
    g.uniform_ = true;
    return g;
}

GridMeasure GridMeasure::custom(Topology topology, std::vector<double> nodes, std::vector<double> weights,
                                double measure) {
    if (nodes.empty() || nodes.size() != weights.size())
        throw std::invalid_argument("GridMeasure::custom: node/weight size mismatch");
    require_strictly_increasing(nodes);
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("GridMeasure::custom: negative weight");
        sum += w;
    }
    if (std::abs(sum - measure) > 1e-10 * std::max(1.0, std::abs(measure)))
        throw std::invalid_argument("GridMeasure::custom: weights do not sum to the measure");

    GridMeasure g;
    g.topology_ = topology;
    g.nodes_ = std::move(nodes);
    g.weights_ = std::move(weights);
    g.measure_ = measure;
    g.spacing_ = 0.0;
    g.uniform_ = false;
    return g;
}

double GridMeasure::integrate(std::span<const double> values) const {
    if (values.size() != weights_.size())
        throw std::invalid_argument("GridMeasure::integrate: value count mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += weights_[i] * values[i];
    return s;
}

} // namespace fiberlp
