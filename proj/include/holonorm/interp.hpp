#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "holonorm/grid.hpp"
#include "holonorm/norms.hpp"

namespace holonorm {

/**
 * The interpolation inequalities, keyed by their conventional labels:
 *
 *   2.1     |u|^(l)   <= C (|u|^(l2))^w (|u|^(l1))^(1-w)   elliptic,  w = (l-l1)/(l2-l1)
 *   2.2     same on a space-time box
 *   2.3.1   sup|u|    <= C (|u|^(l2))^w ||u||_p^(1-w),                w = (N+2)/(p l2+N+2)
 *   2.3.3   sup|u|    <= C (|u|^(l2))^s (sup_t||u||_p)^(1-s),         s = N/(p l2+N)
 *   2.10    |u|^(l1)  <= C (|u|^(l2))^w ||u||_p^(1-w),                w = (p l1+N+2)/(p l2+N+2)
 *   2.10.1  |u|^(l1)  <= C (|u|^(l2))^s (sup_t||u||_p)^(1-s),         s = (p l1+N)/(p l2+N)
 *   2.11    |u|^(l1)  <= C (|u|^(l2))^w ||u||_p^(1-w)   elliptic,     w = (p l1+N)/(p l2+N)
 */
enum class Variant {
    HolderHolderElliptic,
    HolderHolderParabolic,
    SupVsLp,
    SupVsSupLp,
    GeneralParabolic,
    GeneralSupLp,
    Elliptic,
};

inline constexpr Variant kAllVariants[] = {
    Variant::HolderHolderElliptic, Variant::HolderHolderParabolic, Variant::SupVsLp,  Variant::SupVsSupLp,
    Variant::GeneralParabolic,     Variant::GeneralSupLp,          Variant::Elliptic,
};

std::string_view label(Variant v);  // "2.3.1", ...
std::string_view name(Variant v);   // "sup_vs_lp_parabolic", ...
/// Accepts either the label or the name.
Variant parse_variant(std::string_view text);
bool is_parabolic(Variant v);
bool uses_lebesgue(Variant v);

struct InterpSpec {
    Variant variant = Variant::SupVsLp;
    double l1 = 0.0;  // 0 for the sup-norm variants
    double l = 0.0;   // intermediate index, Hoelder-Hoelder variants only
    double l2 = 0.5;
    double p = 2.0;
    std::size_t N = 1;

    /// Throws InputError naming the violated constraint.
    void validate() const;
};

/// The variant's interpolation exponent (omega or sigma).
double exponent(const InterpSpec& spec);

/// Which quantity raises to the exponent on the "high" side: the full norm
/// |u|^(l2), or the k-th difference seminorm <u>^(l2) the bound is built from.
enum class HighNorm { Full, Seminorm };

enum class CheckStatus {
    Ok,
    TriviallySatisfied,  // sup|u| below the zero tolerance
    Violation,           // right side vanishes while the left does not
    UnboundedBalance,    // seminorm vanishes: the balancing scale runs to infinity
};

std::string to_string(CheckStatus s);

struct CheckOptions {
    HighNorm high = HighNorm::Full;
    std::optional<double> exponent_override;
    double zero_tolerance = 1e-14;
    ScanOptions scan;
};

struct CheckReport {
    InterpSpec spec;
    double omega = 0.0;
    double lhs = 0.0;
    double factor_high = 0.0;  // high norm ^ omega
    double factor_low = 0.0;   // low norm ^ (1 - omega)
    std::optional<double> ratio;  // empirical constant; absent unless Ok or trivial
    CheckStatus status = CheckStatus::Ok;
    Resolution resolution;
    NormReport lhs_norm;
    NormReport high_norm;
    NormReport low_norm;
};

CheckReport check(const InterpSpec& spec, const GridFunction& u, const CheckOptions& opts = {});

/// Hoelder-Hoelder interpolation |u|^(l) against |u|^(l2) and |u|^(l1), on either geometry.
CheckReport check_holder_interp(const GridFunction& u, double l1, double l, double l2, const CheckOptions& opts = {});

/// A eps^l + B eps^(-q): the bound on sup|u| after averaging over a region of size eps.
struct TwoTermBound {
    double A = 0.0;
    double B = 0.0;
    double l = 1.0;
    double q = 1.0;

    /// Space-time cylinder averaging: q = (N+2)/p.
    static TwoTermBound cylinder(double A, double B, double l, double p, std::size_t N);
    /// Spatial ball averaging (sup-in-time or elliptic): q = N/p.
    static TwoTermBound ball(double A, double B, double l, double p, std::size_t N);
};

double two_term_value(const TwoTermBound& b, double eps);

/// eps where both terms agree, (B/A)^(1/(l+q)); nullopt when A == 0, the
/// branch where eps -> infinity forces sup|u| = 0.
std::optional<double> balancing_epsilon(const TwoTermBound& b);

/// q / (l + q): the exponent on A in the balanced value 2 A^w B^(1-w).
double balanced_exponent(const TwoTermBound& b);

/// A from the k-th difference seminorm, B from the matching Lebesgue norm.
TwoTermBound two_term_bound(const GridFunction& u, const HoelderIndex& l, double p, bool sup_in_time,
                            const ScanOptions& opts = {});

/**
 * <u>^(l) |H|^l + sum_{i=1..k} C(k,i) |u(node + iH)|, an upper bound for
 * |u(node)| built from u = (-1)^k Delta^k_H u + remainder. Throws when a
 * translate leaves the box.
 */
double pointwise_reconstruction_bound(const GridFunction& u, double seminorm, const HoelderIndex& l, int k,
                                      const NodeIndex& node, const ParabolicShift& H);

/// As above, computing the seminorm with difference order k.
double pointwise_reconstruction_bound(const GridFunction& u, const HoelderIndex& l, int k, const NodeIndex& node,
                                      const ParabolicShift& H, const ScanOptions& opts = {});

/// Time seminorm against the spatial seminorm plus the top time derivative's quotient.
struct TimeSeminormBound {
    double time_seminorm = 0.0;      // <u>_t^(l)
    double space_seminorm = 0.0;     // <u>_x^(l)
    double top_time_quotient = 0.0;  // <D_t^[m/2] u>_t^((m-2[m/2]+alpha)/2)
    std::optional<double> ratio;     // lhs / rhs when rhs > 0
};

TimeSeminormBound time_seminorm_bound(const GridFunction& u, const HoelderIndex& l, const ScanOptions& opts = {});

}  // namespace holonorm
