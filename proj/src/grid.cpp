#include "holonorm/grid.hpp"

#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>

#include "holonorm/error.hpp"

namespace holonorm {

namespace {

std::string describe(const NodeIndex& node, const GridFunction& u) {
    std::ostringstream os;
    os << "node (";
    for (std::size_t a = 0; a < node.space.size(); ++a) os << (a ? "," : "") << node.space[a];
    if (u.is_parabolic()) os << "; t-index " << node.time;
    os << ")";
    return os.str();
}

bool is_integral(double v, double tol) { return std::abs(v - std::round(v)) <= tol * std::max(1.0, std::abs(v)); }

std::optional<double> apply_along(const GridFunction& u, const NodeIndex& node, const ParabolicShift& H,
                                  const Stencil& stencil) {
    const LatticeShift d = u.to_lattice(H);
    if (!u.contains(node)) throw InputError("base " + describe(node, u) + " lies outside the grid");
    NodeIndex last = node;
    for (std::size_t a = 0; a < u.dim(); ++a) last.space[a] += stencil.span() * d.space[a];
    last.time += stencil.span() * d.time;
    if (!u.contains(last)) return std::nullopt;
    return stencil.apply(u.values().data() + u.flat(node), u.flat_offset(d));
}

Stencil build_difference(int k, bool remainder) {
    std::vector<std::int64_t> w(static_cast<std::size_t>(k) + 1);
    for (int i = 0; i <= k; ++i) {
        const auto c = static_cast<std::int64_t>(binomial(k, i));
        if (remainder) {
            w[i] = i == 0 ? 0 : ((i % 2 == 1) ? c : -c);
        } else {
            w[i] = ((k - i) % 2 == 0) ? c : -c;
        }
    }
    return Stencil(w);
}

}  // namespace

double Domain::volume() const {
    double v = 1.0;
    for (std::size_t a = 0; a < dim(); ++a) v *= upper[a] - lower[a];
    return is_parabolic() ? v * T : v;
}

void Domain::validate() const {
    if (lower.empty()) throw InputError("domain must have at least one spatial dimension");
    if (lower.size() != upper.size()) throw InputError("domain lower/upper dimension mismatch");
    if (lower.size() + 1 > kMaxAxes)
        throw InputError("spatial dimension " + std::to_string(lower.size()) + " exceeds the supported maximum " +
                         std::to_string(kMaxAxes - 1));
    for (std::size_t a = 0; a < lower.size(); ++a) {
        if (!std::isfinite(lower[a]) || !std::isfinite(upper[a]) || !(lower[a] < upper[a]))
            throw InputError("domain axis x" + std::to_string(a + 1) + " requires finite lower < upper");
    }
    if (!std::isfinite(T) || T < 0.0) throw InputError("time horizon T must be finite and nonnegative");
}

Domain Domain::unit_box(std::size_t dim, double T) {
    return Domain{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0), T};
}

Resolution Resolution::uniform(std::size_t dim, std::size_t steps, std::size_t time_steps) {
    return Resolution{std::vector<std::size_t>(dim, steps), time_steps};
}

bool LatticeShift::is_zero() const {
    if (time != 0) return false;
    for (auto s : space)
        if (s != 0) return false;
    return true;
}

double plength(const ParabolicShift& H) {
    double sq = 0.0;
    for (double h : H.h) sq += h * h;
    return std::sqrt(sq) + std::sqrt(std::abs(H.dt));
}

ParabolicShift dilate(const ParabolicShift& H, double lambda) {
    if (!(lambda > 0.0)) throw InputError("dilation factor must be positive");
    ParabolicShift out = H;
    for (double& h : out.h) h *= lambda;
    out.dt *= lambda * lambda;
    return out;
}

int MultiIndex::order() const { return std::accumulate(beta.begin(), beta.end(), 0); }

std::vector<MultiIndex> multi_indices(std::size_t dim, int order) {
    std::vector<MultiIndex> out;
    if (dim == 0 || order < 0) return out;
    MultiIndex cur{std::vector<int>(dim, 0)};
    // first component descends from `order`; remaining components recurse
    std::function<void(std::size_t, int)> fill = [&](std::size_t axis, int left) {
        if (axis + 1 == dim) {
            cur.beta[axis] = left;
            out.push_back(cur);
            return;
        }
        for (int b = left; b >= 0; --b) {
            cur.beta[axis] = b;
            fill(axis + 1, left - b);
        }
    };
    fill(0, order);
    return out;
}

GridFunction::GridFunction(Domain domain, Resolution resolution, std::vector<double> values)
    : domain_(std::move(domain)), resolution_(std::move(resolution)), values_(std::move(values)) {
    domain_.validate();
    const std::size_t n = domain_.dim();
    if (resolution_.spatial_steps.size() != n)
        throw InputError("resolution has " + std::to_string(resolution_.spatial_steps.size()) +
                         " spatial axes, domain has " + std::to_string(n));
    if (domain_.is_parabolic() && resolution_.time_steps == 0)
        throw InputError("parabolic domain (T > 0) needs at least one time step");
    if (!domain_.is_parabolic() && resolution_.time_steps != 0)
        throw InputError("elliptic domain (T = 0) takes no time steps");

    double total = 1.0;
    std::ptrdiff_t stride = 1;
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t steps = resolution_.spatial_steps[a];
        if (steps == 0) throw InputError("axis x" + std::to_string(a + 1) + " needs at least one step");
        extents_[a] = steps + 1;
        strides_[a] = stride;
        spans_[a] = domain_.upper[a] - domain_.lower[a];
        spacings_[a] = spans_[a] / static_cast<double>(steps);
        stride *= static_cast<std::ptrdiff_t>(extents_[a]);
        total *= static_cast<double>(extents_[a]);
    }
    extents_[n] = resolution_.time_steps + 1;
    strides_[n] = stride;
    spans_[n] = domain_.T;
    spacings_[n] = domain_.is_parabolic() ? domain_.T / static_cast<double>(resolution_.time_steps) : 0.0;
    total *= static_cast<double>(extents_[n]);

    if (total > static_cast<double>(kMaxGridValues))
        throw InputError("grid would hold " + std::to_string(static_cast<long double>(total)) +
                         " values; the limit is 1e8");
    if (values_.size() != static_cast<std::size_t>(total))
        throw InputError("grid expects " + std::to_string(static_cast<std::size_t>(total)) + " values, got " +
                         std::to_string(values_.size()));
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) throw InputError("non-finite value at " + describe(node(i), *this));
    }
}

bool GridFunction::contains(const NodeIndex& node) const {
    if (node.space.size() != dim()) return false;
    for (std::size_t a = 0; a < dim(); ++a) {
        if (node.space[a] < 0 || node.space[a] >= static_cast<std::int64_t>(extents_[a])) return false;
    }
    return node.time >= 0 && node.time < static_cast<std::int64_t>(extents_[dim()]);
}

std::size_t GridFunction::flat(const NodeIndex& node) const {
    if (!contains(node)) throw InputError(describe(node, *this) + " is outside the grid");
    std::ptrdiff_t f = node.time * strides_[dim()];
    for (std::size_t a = 0; a < dim(); ++a) f += node.space[a] * strides_[a];
    return static_cast<std::size_t>(f);
}

NodeIndex GridFunction::node(std::size_t flat) const {
    NodeIndex out;
    out.space.resize(dim());
    for (std::size_t a = 0; a < dim(); ++a) {
        out.space[a] = static_cast<std::int64_t>(flat % extents_[a]);
        flat /= extents_[a];
    }
    out.time = static_cast<std::int64_t>(flat);
    return out;
}

std::vector<double> GridFunction::position(const NodeIndex& node) const {
    std::vector<double> x(dim());
    for (std::size_t a = 0; a < dim(); ++a) x[a] = domain_.lower[a] + length(a, node.space[a]);
    return x;
}

double GridFunction::time(const NodeIndex& node) const { return length(dim(), node.time); }

LatticeShift GridFunction::to_lattice(const ParabolicShift& H) const {
    if (H.h.size() != dim())
        throw InputError("shift has " + std::to_string(H.h.size()) + " spatial components, grid has " +
                         std::to_string(dim()));
    LatticeShift d;
    d.space.resize(dim());
    for (std::size_t a = 0; a < dim(); ++a) {
        const double steps = H.h[a] / spacings_[a];
        if (!std::isfinite(steps) || !is_integral(steps, 1e-9))
            throw InputError("shift component h" + std::to_string(a + 1) + " is not a multiple of the grid step");
        d.space[a] = static_cast<std::int64_t>(std::llround(steps));
    }
    if (!is_parabolic()) {
        if (H.dt != 0.0) throw InputError("elliptic grid admits no time shift");
        d.time = 0;
    } else {
        const double steps = H.dt / spacings_[dim()];
        if (!std::isfinite(steps) || !is_integral(steps, 1e-9))
            throw InputError("time shift is not a multiple of the time step");
        d.time = static_cast<std::int64_t>(std::llround(steps));
    }
    return d;
}

ParabolicShift GridFunction::to_physical(const LatticeShift& d) const {
    ParabolicShift H;
    H.h.resize(dim());
    for (std::size_t a = 0; a < dim(); ++a) H.h[a] = length(a, d.space[a]);
    H.dt = length(dim(), d.time);
    return H;
}

std::ptrdiff_t GridFunction::flat_offset(const LatticeShift& d) const {
    std::ptrdiff_t off = d.time * strides_[dim()];
    for (std::size_t a = 0; a < dim(); ++a) off += d.space[a] * strides_[a];
    return off;
}

GridFunction GridFunction::with_values(std::vector<double> values) const {
    return GridFunction(domain_, resolution_, std::move(values));
}

GridFunction make_grid_function(const Domain& domain, const Resolution& resolution, const SampleFn& f) {
    domain.validate();
    // size check before sampling; the constructor repeats it for direct callers
    double total = static_cast<double>(resolution.time_steps + 1);
    for (auto s : resolution.spatial_steps) total *= static_cast<double>(s + 1);
    if (total > static_cast<double>(kMaxGridValues)) throw InputError("grid exceeds the 1e8 value limit");

    GridFunction shape(domain, resolution, std::vector<double>(static_cast<std::size_t>(total), 0.0));
    std::vector<double> values(shape.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const NodeIndex node = shape.node(i);
        const std::vector<double> x = shape.position(node);
        const double v = f(x, shape.time(node));
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "non-finite sample at x=(";
            for (std::size_t a = 0; a < x.size(); ++a) os << (a ? "," : "") << x[a];
            os << ")";
            if (domain.is_parabolic()) os << ", t=" << shape.time(node);
            throw InputError(os.str());
        }
        values[i] = v;
    }
    return shape.with_values(std::move(values));
}

std::optional<double> shift_eval(const GridFunction& u, const NodeIndex& node, const ParabolicShift& H,
                                 int multiplier) {
    const LatticeShift d = u.to_lattice(H);
    NodeIndex target = node;
    if (target.space.size() != u.dim()) throw InputError("node dimension does not match the grid");
    for (std::size_t a = 0; a < u.dim(); ++a) target.space[a] += multiplier * d.space[a];
    target.time += multiplier * d.time;
    if (!u.contains(target)) return std::nullopt;
    return u.at(target);
}

std::optional<double> kth_difference(const GridFunction& u, const NodeIndex& node, const ParabolicShift& H, int k) {
    return apply_along(u, node, H, difference_stencil(k));
}

std::optional<double> telescoping_remainder(const GridFunction& u, const NodeIndex& node, const ParabolicShift& H,
                                            int k) {
    return apply_along(u, node, H, remainder_stencil(k));
}

GridFunction parabolic_dilate(const GridFunction& u, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("dilation factor must be positive and finite");
    Domain d = u.domain();
    for (auto& v : d.lower) v *= lambda;
    for (auto& v : d.upper) v *= lambda;
    d.T *= lambda * lambda;
    return GridFunction(d, u.resolution(), std::vector<double>(u.values().begin(), u.values().end()));
}

GridFunction scaled(const GridFunction& u, double s) {
    std::vector<double> v(u.values().begin(), u.values().end());
    for (double& x : v) x *= s;
    return u.with_values(std::move(v));
}

GridFunction combine(double a, const GridFunction& u, double b, const GridFunction& v) {
    if (u.domain().lower != v.domain().lower || u.domain().upper != v.domain().upper || u.domain().T != v.domain().T ||
        u.resolution().spatial_steps != v.resolution().spatial_steps ||
        u.resolution().time_steps != v.resolution().time_steps)
        throw InputError("combine requires identical grid geometry");
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * u.values()[i] + b * v.values()[i];
    return u.with_values(std::move(out));
}

GridFunction subsample(const GridFunction& u, std::size_t stride) {
    if (stride == 0) throw InputError("subsample stride must be positive");
    Resolution r = u.resolution();
    for (auto& s : r.spatial_steps) {
        if (s % stride != 0) throw InputError("spatial steps not divisible by the subsample stride");
        s /= stride;
    }
    if (r.time_steps % stride != 0) throw InputError("time steps not divisible by the subsample stride");
    r.time_steps /= stride;
    GridFunction shape(u.domain(), r, std::vector<double>([&] {
                           std::size_t n = r.time_steps + 1;
                           for (auto s : r.spatial_steps) n *= s + 1;
                           return n;
                       }(), 0.0));
    std::vector<double> values(shape.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        NodeIndex node = shape.node(i);
        for (auto& c : node.space) c *= static_cast<std::int64_t>(stride);
        node.time *= static_cast<std::int64_t>(stride);
        values[i] = u.at(node);
    }
    return shape.with_values(std::move(values));
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return std::round(c);
}

Stencil::Stencil(std::span<const std::int64_t> weights) {
    span_ = weights.empty() ? 0 : static_cast<int>(weights.size()) - 1;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const std::int64_t w = weights[i];
        const double sign = w < 0 ? -1.0 : 1.0;
        std::uint64_t mag = static_cast<std::uint64_t>(w < 0 ? -w : w);
        // highest bit first keeps the partial sums growing monotonically
        for (int bit = 62; bit >= 0; --bit) {
            if (mag & (std::uint64_t{1} << bit)) terms_.push_back({static_cast<int>(i), sign * std::ldexp(1.0, bit)});
        }
    }
}

const Stencil& difference_stencil(int k) {
    if (k < 1 || k > kMaxDifferenceOrder)
        throw InputError("difference order must lie in [1, " + std::to_string(kMaxDifferenceOrder) + "]");
    static std::once_flag once;
    static std::vector<Stencil> table;
    std::call_once(once, [] {
        table.resize(kMaxDifferenceOrder + 1);
        for (int j = 1; j <= kMaxDifferenceOrder; ++j) table[j] = build_difference(j, false);
    });
    return table[k];
}

const Stencil& remainder_stencil(int k) {
    if (k < 1 || k > kMaxDifferenceOrder)
        throw InputError("difference order must lie in [1, " + std::to_string(kMaxDifferenceOrder) + "]");
    static std::once_flag once;
    static std::vector<Stencil> table;
    std::call_once(once, [] {
        table.resize(kMaxDifferenceOrder + 1);
        for (int j = 1; j <= kMaxDifferenceOrder; ++j) table[j] = build_difference(j, true);
    });
    return table[k];
}

}  // namespace holonorm
