#include "fiberlp/fiber_function.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fiberlp/kernels.hpp"
#include "fiberlp/rng.hpp"

namespace fiberlp {

namespace {

void require_compatible(const FiberFunction& a, const FiberFunction& b) {
    const bool same_grid =
        a.grid_ptr().get() == b.grid_ptr().get() ||
        (a.nodes() == b.nodes() && a.grid().topology() == b.grid().topology() &&
         std::equal(a.grid().nodes().begin(), a.grid().nodes().end(), b.grid().nodes().begin()));
    if (!same_grid) throw std::invalid_argument("FiberFunction: grid mismatch");
    if (a.dim() != b.dim()) throw std::invalid_argument("FiberFunction: dimension mismatch");
}

} // namespace

FiberFunction::FiberFunction(GridPtr grid, std::size_t dim, double p, NormMode mode)
    : grid_(std::move(grid)), dim_(dim), mode_(mode), p_(p) {
    if (!grid_) throw std::invalid_argument("FiberFunction: null grid");
    if (dim_ == 0) throw std::invalid_argument("FiberFunction: dimension must be positive");
    if (!(p_ >= 1.0)) throw std::invalid_argument("FiberFunction: p must be >= 1");
    values_.assign(grid_->size() * dim_, cplx{0.0});
}

FiberFunction FiberFunction::from_values(GridPtr grid, std::size_t dim, cvector values, double p,
                                         NormMode mode) {
    FiberFunction f(std::move(grid), dim, p, mode);
    if (values.size() != f.values_.size())
        throw std::invalid_argument("FiberFunction::from_values: value count mismatch");
    if (!is_finite(values)) throw std::invalid_argument("FiberFunction::from_values: non-finite values");
    f.values_ = std::move(values);
    return f;
}

FiberFunction FiberFunction::sample(GridPtr grid, std::size_t dim,
                                    const std::function<cvector(double)>& profile, double p, NormMode mode) {
    FiberFunction f(std::move(grid), dim, p, mode);
    for (std::size_t i = 0; i < f.nodes(); ++i) {
        const cvector v = profile(f.grid().node(i));
        if (v.size() != dim) throw std::invalid_argument("FiberFunction::sample: profile dimension mismatch");
        f.set_node_value(i, v);
    }
    return f;
}

FiberFunction FiberFunction::constant(GridPtr grid, const cvector& value, double p, NormMode mode) {
    FiberFunction f(std::move(grid), value.size(), p, mode);
    for (std::size_t i = 0; i < f.nodes(); ++i) f.set_node_value(i, value);
    return f;
}

std::span<const cplx> FiberFunction::node_value(std::size_t node) const {
    if (node >= nodes()) throw std::out_of_range("FiberFunction::node_value: node out of range");
    return {values_.data() + node * dim_, dim_};
}

cvector FiberFunction::node_vector(std::size_t node) const {
    const auto v = node_value(node);
    return {v.begin(), v.end()};
}

void FiberFunction::set_node_value(std::size_t node, const cvector& v) {
    if (node >= nodes()) throw std::out_of_range("FiberFunction::set_node_value: node out of range");
    if (v.size() != dim_) throw std::invalid_argument("FiberFunction::set_node_value: dimension mismatch");
    std::copy(v.begin(), v.end(), values_.begin() + static_cast<std::ptrdiff_t>(node * dim_));
}

FiberFunction FiberFunction::with_mode(NormMode mode) const {
    FiberFunction f = *this;
    f.mode_ = mode;
    return f;
}

FiberFunction FiberFunction::with_p(double p) const {
    if (!(p >= 1.0)) throw std::invalid_argument("FiberFunction::with_p: p must be >= 1");
    FiberFunction f = *this;
    f.p_ = p;
    return f;
}

FiberFunction& FiberFunction::operator+=(const FiberFunction& rhs) {
    require_compatible(*this, rhs);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += rhs.values_[k];
    return *this;
}

FiberFunction& FiberFunction::operator-=(const FiberFunction& rhs) {
    require_compatible(*this, rhs);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= rhs.values_[k];
    return *this;
}

FiberFunction& FiberFunction::operator*=(cplx alpha) {
    for (auto& v : values_) v *= alpha;
    return *this;
}

FiberFunction FiberFunction::masked(const std::vector<std::size_t>& keep_nodes) const {
    FiberFunction f(grid_, dim_, p_, mode_);
    for (std::size_t node : keep_nodes) {
        if (node >= nodes()) throw std::out_of_range("FiberFunction::masked: node out of range");
        std::copy(values_.begin() + static_cast<std::ptrdiff_t>(node * dim_),
                  values_.begin() + static_cast<std::ptrdiff_t>((node + 1) * dim_),
                  f.values_.begin() + static_cast<std::ptrdiff_t>(node * dim_));
    }
    return f;
}

std::uint64_t FiberFunction::content_hash() const noexcept {
    std::uint64_t h = 0xCBF29CE484222325ull;
    auto mix = [&h](const void* data, std::size_t bytes) {
        h = fnv1a({static_cast<const char*>(data), bytes}, h);
    };
    const std::uint64_t dims[2] = {nodes(), dim_};
    mix(dims, sizeof(dims));
    mix(&p_, sizeof(p_));
    const std::uint32_t mode_tag = mode_ == NormMode::base ? 0u : 1u;
    mix(&mode_tag, sizeof(mode_tag));
    if (!values_.empty()) mix(values_.data(), values_.size() * sizeof(cplx));
    return h;
}

FiberFunction operator+(FiberFunction lhs, const FiberFunction& rhs) { return lhs += rhs; }
FiberFunction operator-(FiberFunction lhs, const FiberFunction& rhs) { return lhs -= rhs; }
FiberFunction operator*(cplx alpha, FiberFunction f) { return f *= alpha; }

namespace {

std::vector<double> norm_terms_for(const FiberFunction& f, const FiberOperatorFamily* bundle, double p,
                                   bool weighted) {
    const std::size_t n = f.nodes();
    std::vector<double> terms(n);
    std::vector<double> ones;
    std::span<const double> w;
    if (weighted) {
        w = f.grid().weights();
    } else {
        ones.assign(n, 1.0);
        w = ones;
    }
    if (f.mode() == NormMode::extrapolation) {
        if (bundle == nullptr)
            throw std::invalid_argument("lp_fiber_norm: extrapolation mode requires a bundle");
        if (bundle->size() != n || bundle->dim() != f.dim())
            throw std::invalid_argument("lp_fiber_norm: bundle does not match the function");
        kernels::weighted_norm_terms(bundle->inverses(), w, f.values(), f.dim(), p, terms);
    } else {
        kernels::norm_terms(w, f.values(), f.dim(), p, terms);
    }
    return terms;
}

} // namespace

double lp_fiber_norm(const FiberFunction& f, const FiberOperatorFamily* bundle) {
    const std::vector<double> terms = norm_terms_for(f, bundle, f.p(), true);
    const double sum = kernels::ordered_sum(terms);
    if (f.p() == 1.0) return sum;
    if (f.p() == 2.0) return std::sqrt(sum);
    return std::pow(sum, 1.0 / f.p());
}

std::vector<double> node_norms(const FiberFunction& f, const FiberOperatorFamily* bundle) {
    // p = 1 on unit weights yields the plain per-node fiber norms
    return norm_terms_for(f, bundle, 1.0, false);
}

const cvector& SimpleFunction::value_at(std::size_t node, const cvector& zero) const {
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::size_t idx : parts[i])
            if (idx == node) return values[i];
    return zero;
}

SimpleApproximation simple_approximation(const FiberFunction& f, int level,
                                         const FiberOperatorFamily* bundle) {
    if (level < 0) throw std::invalid_argument("simple_approximation: level must be nonnegative");
    const LatticeSet lattice{f.dim(), level};
    const std::size_t n = f.nodes();

    SimpleApproximation out;
    out.simple.dim = f.dim();

    FiberFunction snapped(f.grid_ptr(), f.dim(), f.p(), f.mode());
    for (std::size_t i = 0; i < n; ++i) {
        const cvector v = lattice.snap(f.node_vector(i));
        snapped.set_node_value(i, v);
        // merge adjacent nodes with the same snapped value into one part
        if (!out.simple.values.empty() && v == out.simple.values.back())
            out.simple.parts.back().push_back(i);
        else {
            out.simple.parts.push_back({i});
            out.simple.values.push_back(v);
        }
    }

    const FiberFunction diff = f - snapped;
    const std::vector<double> norms = node_norms(diff, bundle);
    double worst = 0.0;
    for (double v : norms) worst = std::max(worst, v);
    out.error = worst;
    return out;
}

bool almost_everywhere_equal(const FiberFunction& f, const FiberFunction& g, double tol) {
    require_compatible(f, g);
    const FiberFunction diff = f - g;
    const std::vector<double> norms = node_norms(diff.with_mode(NormMode::base), nullptr);
    for (std::size_t i = 0; i < norms.size(); ++i)
        if (f.grid().weight(i) > 0.0 && norms[i] > tol) return false;
    return true;
}

void FiberFunction::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("FiberFunction::write_csv: cannot open " + path);
    out << "s";
    for (std::size_t j = 0; j < dim_; ++j) out << ",re" << j << ",im" << j;
    out << '\n';
    out.precision(17);
    for (std::size_t i = 0; i < nodes(); ++i) {
        out << grid_->node(i);
        const auto v = node_value(i);
        for (std::size_t j = 0; j < dim_; ++j) out << ',' << v[j].real() << ',' << v[j].imag();
        out << '\n';
    }
    if (!out) throw std::runtime_error("FiberFunction::write_csv: write failed for " + path);
}

FiberFunction FiberFunction::read_csv(const std::string& path, GridPtr grid, double p, NormMode mode) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("FiberFunction::read_csv: cannot open " + path);
    std::string line;
    std::vector<std::vector<double>> rows;
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
            if (rows.empty()) continue; // header
            throw std::runtime_error("FiberFunction::read_csv: non-numeric row in " + path);
        }
        rows.push_back(std::move(cells));
    }
    if (!grid) throw std::invalid_argument("FiberFunction::read_csv: null grid");
    if (rows.size() != grid->size())
        throw std::runtime_error("FiberFunction::read_csv: row count does not match the grid");
    if (rows.empty() || rows[0].size() < 3 || (rows[0].size() - 1) % 2 != 0)
        throw std::runtime_error("FiberFunction::read_csv: bad column count");
    const std::size_t dim = (rows[0].size() - 1) / 2;

    FiberFunction f(grid, dim, p, mode);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != 1 + 2 * dim)
            throw std::runtime_error("FiberFunction::read_csv: ragged row");
        if (std::abs(rows[i][0] - grid->node(i)) > 1e-12 * std::max(1.0, std::abs(grid->node(i))))
            throw std::runtime_error("FiberFunction::read_csv: node column does not match the grid");
        cvector v(dim);
        for (std::size_t j = 0; j < dim; ++j) v[j] = cplx{rows[i][1 + 2 * j], rows[i][2 + 2 * j]};
        f.set_node_value(i, v);
    }
    return f;
}

} // namespace fiberlp
