#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "holonorm/grid.hpp"

namespace holonorm {

/**
 * Controls the supremum scans behind every seminorm.
 *
 * A scan is exhaustive when the number of admissible pairs is at most
 * `exhaustive_limit`. Otherwise it examines every nearest-neighbour pair
 * plus `random_pairs` seeded random pairs, spread evenly over separation
 * bands [2^b, 2^(b+1)) measured in grid steps.
 */
struct ScanOptions {
    std::uint64_t seed = 0x5eed;
    std::uint64_t exhaustive_limit = 10'000'000;
    std::uint64_t random_pairs = 1'000'000;
    unsigned threads = 0;  // 0: worker_count()
};

/// Regularity exponent l = m + alpha.
struct HoelderIndex {
    double l = 0.0;
    int m = 0;
    double alpha = 0.0;

    /// Any l >= 0; integer l yields alpha == 0.
    static HoelderIndex of(double l);
    /// Rejects integer l: seminorms need alpha in (0,1).
    static HoelderIndex noninteger(double l);

    bool is_integer() const { return alpha == 0.0; }
};

/// Difference orders for the k-th-difference seminorm: k > l, l_t > l/2.
struct DiffSeminormSpec {
    int k = 1;
    int l_t = 1;

    /// Smallest valid orders: k = floor(l) + 1, l_t = floor(l/2) + 1.
    static DiffSeminormSpec defaults(const HoelderIndex& l);
    void validate(const HoelderIndex& l) const;
};

/// Joint space-time shifts measured by |h| + |dt|^(1/2), or separate
/// spatial and temporal suprema.
enum class DiffForm { Joint, Split };

enum class NormKind {
    Sup,
    Lp,
    SupTimeLp,
    HolderSpace,
    HolderTime,
    HolderSeminorm,
    Parabolic,
    Elliptic,
    IntegerOrder,
    DiffQuotient,
};

std::string to_string(NormKind kind);

/// Argument achieving a reported supremum; value == numerator / denominator.
struct Witness {
    NodeIndex node;
    LatticeShift shift;
    int order = 0;  // 0 for pointwise maxima
    double numerator = 0.0;
    double denominator = 1.0;
};

struct Sampling {
    bool exhaustive = true;
    std::uint64_t seed = 0;
    std::uint64_t count = 0;  // random pairs drawn
};

struct NormTerm {
    std::string label;
    double value = 0.0;
    std::optional<Witness> witness;
};

struct NormReport {
    NormKind kind = NormKind::Sup;
    double value = 0.0;
    std::string index_name;  // "l", "p", "alpha", ... ; empty when unindexed
    double index = 0.0;
    std::uint64_t pairs_examined = 0;
    Sampling sampling;
    std::optional<Witness> witness;  // absent for sums of several suprema
    std::vector<NormTerm> terms;     // breakdown of composite norms, each with its own witness
};

/// max |u| over all nodes.
NormReport sup_norm(const GridFunction& u);

/// (integral |u|^p)^(1/p) by the tensor trapezoidal rule, over space-time when parabolic.
NormReport lp_norm(const GridFunction& u, double p);

/// max over time levels of the spatial L_p norm of the slice. Parabolic only.
NormReport sup_t_lp_norm(const GridFunction& u, double p);

/**
 * Discrete D_t^lt D_x^beta u on the same lattice: second-order central
 * differences inside, second-order one-sided stencils on the boundary,
 * composed once per derivative order.
 */
std::vector<double> derivative_field(const GridFunction& u, const MultiIndex& beta, int lt);

/// Euclidean length of the spatial part of a lattice shift.
double lattice_distance(const GridFunction& u, const LatticeShift& d);

/// sup over same-time node pairs of |w(x)-w(y)| / |x-y|^alpha, w = D_t^lt D_x^beta u.
NormReport holder_seminorm_space(const GridFunction& u, double alpha, const MultiIndex& beta, int lt,
                                 const ScanOptions& opts = {});

/// sup over same-x node pairs of |w(x,t)-w(x,s)| / |t-s|^exponent. Parabolic only.
NormReport holder_seminorm_time(const GridFunction& u, double exponent, const MultiIndex& beta, int lt,
                                const ScanOptions& opts = {});

/// Derivative-based seminorm <u>^(l): top-order spatial quotients, plus the
/// time quotients of every D_t^j D_x^beta u with 0 <= m-|beta|-2j <= 1 when parabolic.
NormReport holder_seminorm(const GridFunction& u, const HoelderIndex& l, const ScanOptions& opts = {});

/// |u|^(l) on a space-time box. Rejects integer l and elliptic grids.
NormReport parabolic_norm(const GridFunction& u, const HoelderIndex& l, const ScanOptions& opts = {});

/// |u|^(l) on a spatial box. Rejects integer l and parabolic grids.
NormReport elliptic_norm(const GridFunction& u, const HoelderIndex& l, const ScanOptions& opts = {});

/// Either of the above by geometry; integer l gives the C^m norm (maxima only).
NormReport holder_norm(const GridFunction& u, const HoelderIndex& l, const ScanOptions& opts = {});

/// sup |Delta^k_H u| / |H|^l over nodes and grid shifts with every translate inside the box.
NormReport diff_quotient_seminorm(const GridFunction& u, const HoelderIndex& l, const DiffSeminormSpec& spec,
                                  DiffForm form = DiffForm::Joint, const ScanOptions& opts = {});

}  // namespace holonorm
