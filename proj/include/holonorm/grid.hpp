#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace holonorm {

/// Spatial axes plus the time axis.
inline constexpr std::size_t kMaxAxes = 8;
inline constexpr std::size_t kMaxGridValues = 100'000'000;
/// Largest difference order with exactly representable binomial weights.
inline constexpr int kMaxDifferenceOrder = 30;

/**
 * Axis-aligned space-time box [lower, upper] x [0, T].
 *
 * T == 0 is the elliptic (purely spatial) case.
 */
struct Domain {
    std::vector<double> lower;
    std::vector<double> upper;
    double T = 0.0;

    std::size_t dim() const { return lower.size(); }
    bool is_parabolic() const { return T > 0.0; }
    double volume() const;  // spatial volume times T when parabolic

    /// Throws InputError when the box is empty, inverted or non-finite.
    void validate() const;

    static Domain unit_box(std::size_t dim, double T = 0.0);
};

/// Steps per spatial axis (nodes = steps + 1) and time steps (0 when elliptic).
struct Resolution {
    std::vector<std::size_t> spatial_steps;
    std::size_t time_steps = 0;

    static Resolution uniform(std::size_t dim, std::size_t steps, std::size_t time_steps = 0);
};

struct NodeIndex {
    std::vector<std::int64_t> space;
    std::int64_t time = 0;

    bool operator==(const NodeIndex&) const = default;
};

/// Shift measured in grid steps.
struct LatticeShift {
    std::vector<std::int64_t> space;
    std::int64_t time = 0;

    bool is_zero() const;
    bool operator==(const LatticeShift&) const = default;
};

/// Space-time shift H = (h, dt) in physical units.
struct ParabolicShift {
    std::vector<double> h;
    double dt = 0.0;
};

/// Anisotropic length |h| + |dt|^(1/2).
double plength(const ParabolicShift& H);

/// Image of H under x -> lambda x, t -> lambda^2 t.
ParabolicShift dilate(const ParabolicShift& H, double lambda);

struct MultiIndex {
    std::vector<int> beta;

    int order() const;
    bool operator==(const MultiIndex&) const = default;
};

/// All multi-indices of dimension `dim` with |beta| == order, lexicographically.
std::vector<MultiIndex> multi_indices(std::size_t dim, int order);

/**
 * Function values on a uniform lattice over a Domain.
 *
 * Axis `a < dim()` is spatial, axis `dim()` is time. Values are stored with
 * axis 0 varying fastest and time slowest, so each time slice is contiguous.
 * Immutable after construction.
 */
class GridFunction {
public:
    GridFunction(Domain domain, Resolution resolution, std::vector<double> values);

    const Domain& domain() const { return domain_; }
    const Resolution& resolution() const { return resolution_; }
    std::size_t dim() const { return domain_.dim(); }
    std::size_t axes() const { return dim() + 1; }
    std::size_t time_axis() const { return dim(); }
    bool is_parabolic() const { return domain_.is_parabolic(); }

    /// Number of nodes along an axis (1 for the time axis when elliptic).
    std::size_t extent(std::size_t axis) const { return extents_[axis]; }
    std::ptrdiff_t stride(std::size_t axis) const { return strides_[axis]; }
    /// Step length along an axis; 0 for the elliptic time axis.
    double spacing(std::size_t axis) const { return spacings_[axis]; }
    /// Physical length of `steps` grid steps along an axis, rounded once.
    double length(std::size_t axis, std::int64_t steps) const {
        return extents_[axis] > 1 ? static_cast<double>(steps) * spans_[axis] / static_cast<double>(extents_[axis] - 1)
                                  : 0.0;
    }
    std::size_t nodes_per_slice() const { return static_cast<std::size_t>(strides_[dim()]); }

    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    bool contains(const NodeIndex& node) const;
    std::size_t flat(const NodeIndex& node) const;
    NodeIndex node(std::size_t flat) const;
    std::vector<double> position(const NodeIndex& node) const;
    double time(const NodeIndex& node) const;
    double at(const NodeIndex& node) const { return values_[flat(node)]; }

    /// Throws InputError if H is not an integer multiple of the grid steps.
    LatticeShift to_lattice(const ParabolicShift& H) const;
    ParabolicShift to_physical(const LatticeShift& d) const;
    std::ptrdiff_t flat_offset(const LatticeShift& d) const;

    GridFunction with_values(std::vector<double> values) const;

private:
    Domain domain_;
    Resolution resolution_;
    std::vector<double> values_;
    std::array<std::size_t, kMaxAxes> extents_{};
    std::array<std::ptrdiff_t, kMaxAxes> strides_{};
    std::array<double, kMaxAxes> spacings_{};
    std::array<double, kMaxAxes> spans_{};
};

using SampleFn = std::function<double(std::span<const double> x, double t)>;

/// Samples f at every node; rejects non-finite samples naming the node.
GridFunction make_grid_function(const Domain& domain, const Resolution& resolution, const SampleFn& f);

/// u at node + multiplier * H, or nullopt when that node leaves the box.
std::optional<double> shift_eval(const GridFunction& u, const NodeIndex& node,
                                 const ParabolicShift& H, int multiplier);

/// Forward difference of order k along H; nullopt if any translate leaves the box.
std::optional<double> kth_difference(const GridFunction& u, const NodeIndex& node,
                                     const ParabolicShift& H, int k);

/// sum_{i=1..k} (-1)^(i+1) C(k,i) u(node + i H): the part of u(node) not
/// carried by the k-th difference, u = (-1)^k Delta^k u + remainder.
std::optional<double> telescoping_remainder(const GridFunction& u, const NodeIndex& node,
                                            const ParabolicShift& H, int k);

GridFunction parabolic_dilate(const GridFunction& u, double lambda);
GridFunction scaled(const GridFunction& u, double s);
/// a * u + b * v on identical geometry.
GridFunction combine(double a, const GridFunction& u, double b, const GridFunction& v);
/// Every `stride`-th node along every axis; steps must be divisible by stride.
GridFunction subsample(const GridFunction& u, std::size_t stride);

double binomial(int n, int k);

/**
 * Integer-weighted sum  sum_i w_i * base[i * step]  evaluated with
 * error-free transformations: every weight is split into powers of two so
 * each product is exact, and the partial sums carry their rounding error.
 * The result is the exact sum rounded once, up to O(eps^2) terms.
 */
class Stencil {
public:
    struct Term {
        int index;
        double factor;  // signed power of two
    };

    Stencil() = default;
    explicit Stencil(std::span<const std::int64_t> weights);

    int span() const { return span_; }

    double apply(const double* base, std::ptrdiff_t step) const {
        // one or two exact products: the compensated sum is the plain rounded sum
        if (terms_.size() == 1) return terms_[0].factor * base[terms_[0].index * step];
        if (terms_.size() == 2)
            return terms_[0].factor * base[terms_[0].index * step] + terms_[1].factor * base[terms_[1].index * step];
        double sum = 0.0;
        double carry = 0.0;
        for (const Term& term : terms_) {
            const double p = term.factor * base[term.index * step];
            const double s = sum + p;
            const double z = s - sum;
            carry += (sum - (s - z)) + (p - z);
            sum = s;
        }
        return sum + carry;
    }

private:
    std::vector<Term> terms_;
    int span_ = 0;
};

/// Weights (-1)^(k-i) C(k,i), i = 0..k. Cached; k in [1, kMaxDifferenceOrder].
const Stencil& difference_stencil(int k);
/// Weights 0, then (-1)^(i+1) C(k,i) for i = 1..k.
const Stencil& remainder_stencil(int k);

}  // namespace holonorm
