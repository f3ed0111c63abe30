#include "holonorm/interp.hpp"

#include <cmath>
#include <sstream>

#include "holonorm/error.hpp"

namespace holonorm {

namespace {

struct VariantInfo {
    Variant variant;
    std::string_view label;
    std::string_view name;
    bool parabolic;
    bool lebesgue;
};

constexpr VariantInfo kVariants[] = {
    {Variant::HolderHolderElliptic, "2.1", "holder_holder_elliptic", false, false},
    {Variant::HolderHolderParabolic, "2.2", "holder_holder_parabolic", true, false},
    {Variant::SupVsLp, "2.3.1", "sup_vs_lp_parabolic", true, true},
    {Variant::SupVsSupLp, "2.3.3", "sup_vs_suplp", true, true},
    {Variant::GeneralParabolic, "2.10", "general_parabolic", true, true},
    {Variant::GeneralSupLp, "2.10.1", "general_suplp", true, true},
    {Variant::Elliptic, "2.11", "elliptic", false, true},
};

const VariantInfo& info(Variant v) {
    for (const auto& i : kVariants)
        if (i.variant == v) return i;
    throw InputError("unknown variant");
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

bool is_integral(double v) { return std::abs(v - std::round(v)) <= 1e-12; }

bool sup_variant(Variant v) { return v == Variant::SupVsLp || v == Variant::SupVsSupLp; }

bool holder_holder(Variant v) { return v == Variant::HolderHolderElliptic || v == Variant::HolderHolderParabolic; }

bool sup_in_time(Variant v) { return v == Variant::SupVsSupLp || v == Variant::GeneralSupLp; }

}  // namespace

std::string_view label(Variant v) { return info(v).label; }
std::string_view name(Variant v) { return info(v).name; }
bool is_parabolic(Variant v) { return info(v).parabolic; }
bool uses_lebesgue(Variant v) { return info(v).lebesgue; }

Variant parse_variant(std::string_view text) {
    for (const auto& i : kVariants)
        if (i.label == text || i.name == text) return i.variant;
    throw InputError("unknown variant '" + std::string(text) + "' (expected 2.1, 2.2, 2.3.1, 2.3.3, 2.10, 2.10.1, 2.11)");
}

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Ok: return "ok";
        case CheckStatus::TriviallySatisfied: return "trivially_satisfied";
        case CheckStatus::Violation: return "violation";
        case CheckStatus::UnboundedBalance: return "unbounded_balance";
    }
    return "unknown";
}

void InterpSpec::validate() const {
    const std::string tag = "variant " + std::string(label(variant)) + ": ";
    if (N < 1 || N + 1 > kMaxAxes) throw InputError(tag + "dimension N must lie in [1, " + std::to_string(kMaxAxes - 1) + "]");
    if (!(l2 > 0.0) || !std::isfinite(l2)) throw InputError(tag + "l2 must be positive");
    if (is_integral(l2)) throw InputError(tag + "l2 must be noninteger, got " + fmt(l2));
    if (!(l1 >= 0.0)) throw InputError(tag + "l1 must be nonnegative");
    if (!(l1 < l2)) throw InputError(tag + "l1 < l2 violated (l1=" + fmt(l1) + ", l2=" + fmt(l2) + ")");
    if (sup_variant(variant) && l1 != 0.0) throw InputError(tag + "the sup-norm variants take l1 = 0");
    if (holder_holder(variant)) {
        if (!(l1 < l && l < l2))
            throw InputError(tag + "l1 < l < l2 violated (l1=" + fmt(l1) + ", l=" + fmt(l) + ", l2=" + fmt(l2) + ")");
    } else if (!(p > 1.0) || !std::isfinite(p)) {
        throw InputError(tag + "p must be finite and > 1, got " + fmt(p));
    }
    const double w = exponent(*this);
    if (!(w > 0.0 && w < 1.0)) throw InputError(tag + "exponent " + fmt(w) + " outside (0,1)");
}

double exponent(const InterpSpec& s) {
    const double n = static_cast<double>(s.N);
    switch (s.variant) {
        case Variant::HolderHolderElliptic:
        case Variant::HolderHolderParabolic: return (s.l - s.l1) / (s.l2 - s.l1);
        case Variant::SupVsLp: return (n + 2.0) / (s.l2 * s.p + n + 2.0);
        case Variant::SupVsSupLp: return n / (s.l2 * s.p + n);
        case Variant::GeneralParabolic: return (s.p * s.l1 + n + 2.0) / (s.p * s.l2 + n + 2.0);
        case Variant::GeneralSupLp:
        case Variant::Elliptic: return (s.p * s.l1 + n) / (s.p * s.l2 + n);
    }
    return 0.0;
}

CheckReport check(const InterpSpec& spec, const GridFunction& u, const CheckOptions& opts) {
    spec.validate();
    if (u.dim() != spec.N)
        throw InputError("variant " + std::string(label(spec.variant)) + " was set up for N=" + std::to_string(spec.N) +
                         " but the grid has dimension " + std::to_string(u.dim()));
    if (is_parabolic(spec.variant) && !u.is_parabolic())
        throw InputError("variant " + std::string(label(spec.variant)) + " needs a parabolic grid (T > 0)");
    if (!is_parabolic(spec.variant) && u.is_parabolic())
        throw InputError("variant " + std::string(label(spec.variant)) + " needs an elliptic grid (T = 0)");

    CheckReport rep;
    rep.spec = spec;
    rep.resolution = u.resolution();
    rep.omega = opts.exponent_override.value_or(exponent(spec));

    const HoelderIndex high_index = HoelderIndex::noninteger(spec.l2);
    if (holder_holder(spec.variant)) {
        rep.lhs_norm = holder_norm(u, HoelderIndex::of(spec.l), opts.scan);
        rep.low_norm = holder_norm(u, HoelderIndex::of(spec.l1), opts.scan);
    } else {
        rep.lhs_norm = sup_variant(spec.variant) ? sup_norm(u) : holder_norm(u, HoelderIndex::of(spec.l1), opts.scan);
        rep.low_norm = sup_in_time(spec.variant) ? sup_t_lp_norm(u, spec.p) : lp_norm(u, spec.p);
    }
    rep.high_norm = opts.high == HighNorm::Full
                        ? holder_norm(u, high_index, opts.scan)
                        : diff_quotient_seminorm(u, high_index, DiffSeminormSpec::defaults(high_index),
                                                 DiffForm::Joint, opts.scan);

    rep.lhs = rep.lhs_norm.value;
    rep.factor_high = std::pow(rep.high_norm.value, rep.omega);
    rep.factor_low = std::pow(rep.low_norm.value, 1.0 - rep.omega);
    const double product = rep.factor_high * rep.factor_low;

    if (sup_norm(u).value <= opts.zero_tolerance) {
        rep.status = CheckStatus::TriviallySatisfied;
        rep.ratio = product > 0.0 ? rep.lhs / product : 0.0;
    } else if (product > 0.0) {
        rep.status = CheckStatus::Ok;
        rep.ratio = rep.lhs / product;
    } else if (opts.high == HighNorm::Seminorm && rep.high_norm.value == 0.0) {
        rep.status = CheckStatus::UnboundedBalance;
    } else {
        rep.status = CheckStatus::Violation;
    }
    return rep;
}

CheckReport check_holder_interp(const GridFunction& u, double l1, double l, double l2, const CheckOptions& opts) {
    InterpSpec spec;
    spec.variant = u.is_parabolic() ? Variant::HolderHolderParabolic : Variant::HolderHolderElliptic;
    spec.l1 = l1;
    spec.l = l;
    spec.l2 = l2;
    spec.N = u.dim();
    return check(spec, u, opts);
}

TwoTermBound TwoTermBound::cylinder(double A, double B, double l, double p, std::size_t N) {
    return TwoTermBound{A, B, l, (static_cast<double>(N) + 2.0) / p};
}

TwoTermBound TwoTermBound::ball(double A, double B, double l, double p, std::size_t N) {
    return TwoTermBound{A, B, l, static_cast<double>(N) / p};
}

double two_term_value(const TwoTermBound& b, double eps) {
    if (!(eps > 0.0)) throw InputError("epsilon must be positive, got " + fmt(eps));
    return b.A * std::pow(eps, b.l) + b.B * std::pow(eps, -b.q);
}

std::optional<double> balancing_epsilon(const TwoTermBound& b) {
    if (b.A < 0.0 || b.B < 0.0) throw InputError("two-term coefficients must be nonnegative");
    if (b.A == 0.0) return std::nullopt;
    return std::pow(b.B / b.A, 1.0 / (b.l + b.q));
}

double balanced_exponent(const TwoTermBound& b) { return b.q / (b.l + b.q); }

TwoTermBound two_term_bound(const GridFunction& u, const HoelderIndex& l, double p, bool sup_in_time,
                            const ScanOptions& opts) {
    const double A = diff_quotient_seminorm(u, l, DiffSeminormSpec::defaults(l), DiffForm::Joint, opts).value;
    if (!u.is_parabolic()) return TwoTermBound::ball(A, lp_norm(u, p).value, l.l, p, u.dim());
    if (sup_in_time) return TwoTermBound::ball(A, sup_t_lp_norm(u, p).value, l.l, p, u.dim());
    return TwoTermBound::cylinder(A, lp_norm(u, p).value, l.l, p, u.dim());
}

double pointwise_reconstruction_bound(const GridFunction& u, double seminorm, const HoelderIndex& l, int k,
                                      const NodeIndex& node, const ParabolicShift& H) {
    if (seminorm < 0.0) throw InputError("seminorm must be nonnegative");
    double tail = 0.0;
    for (int i = 1; i <= k; ++i) {
        const auto v = shift_eval(u, node, H, i);
        if (!v) throw InputError("translate " + std::to_string(i) + "H leaves the grid");
        tail += binomial(k, i) * std::abs(*v);
    }
    return seminorm * std::pow(plength(H), l.l) + tail;
}

double pointwise_reconstruction_bound(const GridFunction& u, const HoelderIndex& l, int k, const NodeIndex& node,
                                      const ParabolicShift& H, const ScanOptions& opts) {
    DiffSeminormSpec spec = DiffSeminormSpec::defaults(l);
    spec.k = k;
    const double s = diff_quotient_seminorm(u, l, spec, DiffForm::Joint, opts).value;
    return pointwise_reconstruction_bound(u, s, l, k, node, H);
}

TimeSeminormBound time_seminorm_bound(const GridFunction& u, const HoelderIndex& l, const ScanOptions& opts) {
    if (!u.is_parabolic()) throw InputError("time seminorm bound needs a parabolic grid");
    if (l.is_integer() || l.l <= 0.0) throw InputError("time seminorm bound needs a positive noninteger index");
    TimeSeminormBound out;
    const int m = l.m;
    for (int j = 0; 2 * j <= m; ++j) {
        if (m - 2 * j >= 0)
            for (const MultiIndex& beta : multi_indices(u.dim(), m - 2 * j))
                out.space_seminorm += holder_seminorm_space(u, l.alpha, beta, j, opts).value;
        for (int order = std::max(0, m - 2 * j - 1); order <= m - 2 * j; ++order) {
            const double e = (m - order - 2 * j + l.alpha) / 2.0;
            for (const MultiIndex& beta : multi_indices(u.dim(), order))
                out.time_seminorm += holder_seminorm_time(u, e, beta, j, opts).value;
        }
    }
    const int top = m / 2;
    out.top_time_quotient =
        holder_seminorm_time(u, (m - 2 * top + l.alpha) / 2.0, MultiIndex{std::vector<int>(u.dim(), 0)}, top, opts)
            .value;
    const double rhs = out.space_seminorm + out.top_time_quotient;
    if (rhs > 0.0) out.ratio = out.time_seminorm / rhs;
    return out;
}

}  // namespace holonorm
