#include "holonorm/norms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "holonorm/error.hpp"
#include "pair_scan.hpp"

namespace holonorm {

namespace {

constexpr double kIntegerTolerance = 1e-12;

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string derivative_label(const MultiIndex& beta, int lt) {
    std::ostringstream os;
    if (lt > 0) os << "D_t^" << lt << " ";
    if (beta.order() > 0) {
        os << "D_x^(";
        for (std::size_t i = 0; i < beta.beta.size(); ++i) os << (i ? "," : "") << beta.beta[i];
        os << ") ";
    }
    os << "u";
    return os.str();
}

void check_p(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw InputError("L_p exponent must be finite and > 1, got " + fmt(p));
}

/// First derivative along one axis, applied in place through a scratch line.
void differentiate_axis(const GridFunction& u, std::vector<double>& field, std::size_t axis) {
    const std::size_t n = u.extent(axis);
    const std::string name = axis == u.time_axis() ? "t" : "x" + std::to_string(axis + 1);
    if (axis == u.time_axis() && !u.is_parabolic()) throw InputError("time derivative requested on an elliptic grid");
    if (n < 3)
        throw InputError("derivative along " + name + " needs at least 2 steps (3 nodes); grid has " +
                         std::to_string(n - 1) + " step(s)");
    const double two_h = 2.0 * u.spacing(axis);
    const std::ptrdiff_t stride = u.stride(axis);
    const std::size_t total = field.size();
    std::vector<double> line(n);
    std::vector<double> out(n);
    for (std::size_t start = 0; start < total; ++start) {
        // a line starts where this axis' index is zero
        if ((start / static_cast<std::size_t>(stride)) % n != 0) continue;
        for (std::size_t i = 0; i < n; ++i) line[i] = field[start + i * stride];
        out[0] = (-3.0 * line[0] + 4.0 * line[1] - line[2]) / two_h;
        out[n - 1] = (3.0 * line[n - 1] - 4.0 * line[n - 2] + line[n - 3]) / two_h;
        for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (line[i + 1] - line[i - 1]) / two_h;
        for (std::size_t i = 0; i < n; ++i) field[start + i * stride] = out[i];
    }
}

NormReport from_scan(NormKind kind, const GridFunction& u, const detail::ScanResult& r, int order) {
    NormReport rep;
    rep.kind = kind;
    rep.value = r.value;
    rep.pairs_examined = r.pairs;
    rep.sampling = r.sampling;
    if (r.found) {
        rep.witness = Witness{u.node(r.base), detail::to_shift(u, r.offset), order, r.numerator, r.denominator};
    }
    return rep;
}

/// Caches derivative fields within one composite norm evaluation.
class DerivativeCache {
public:
    explicit DerivativeCache(const GridFunction& u) : u_(u) {}

    const std::vector<double>& get(const MultiIndex& beta, int lt) {
        std::vector<int> key = beta.beta;
        key.push_back(lt);
        auto it = cache_.find(key);
        if (it == cache_.end()) it = cache_.emplace(key, derivative_field(u_, beta, lt)).first;
        return it->second;
    }

private:
    const GridFunction& u_;
    std::map<std::vector<int>, std::vector<double>> cache_;
};

detail::ScanResult space_scan(const GridFunction& u, std::span<const double> w, double alpha,
                              const ScanOptions& opts) {
    detail::ScanSpec spec;
    spec.grid = &u;
    spec.field = w;
    for (std::size_t a = 0; a < u.dim(); ++a) spec.active[a] = true;
    spec.stencil = &difference_stencil(1);
    spec.half_space = true;
    spec.denominator = [&u, alpha](const detail::Offset& d) {
        return std::pow(lattice_distance(u, detail::to_shift(u, d)), alpha);
    };
    return detail::scan_sup(spec, opts);
}

detail::ScanResult time_scan(const GridFunction& u, std::span<const double> w, double exponent,
                             const ScanOptions& opts) {
    detail::ScanSpec spec;
    spec.grid = &u;
    spec.field = w;
    spec.active[u.time_axis()] = true;
    spec.stencil = &difference_stencil(1);
    spec.half_space = true;
    const std::size_t ta = u.time_axis();
    spec.denominator = [&u, ta, exponent](const detail::Offset& d) {
        return std::pow(std::abs(u.length(ta, d[ta])), exponent);
    };
    return detail::scan_sup(spec, opts);
}

void check_space_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("spatial Hoelder exponent must lie in (0,1), got " + fmt(alpha));
}

void check_time_exponent(double e) {
    if (!(e > 0.0 && e <= 1.0)) throw InputError("time Hoelder exponent must lie in (0,1], got " + fmt(e));
}

void check_beta(const GridFunction& u, const MultiIndex& beta, int lt) {
    if (beta.beta.size() != u.dim())
        throw InputError("multi-index has " + std::to_string(beta.beta.size()) + " components, grid dimension is " +
                         std::to_string(u.dim()));
    for (int b : beta.beta)
        if (b < 0) throw InputError("multi-index components must be nonnegative");
    if (lt < 0) throw InputError("time derivative order must be nonnegative");
}

/// Accumulates terms of a composite norm.
struct Composite {
    NormReport rep;

    void add(const std::string& label, const NormReport& part) {
        rep.terms.push_back({label, part.value, part.witness});
        rep.value += part.value;
        rep.pairs_examined += part.pairs_examined;
        if (!part.sampling.exhaustive) {
            rep.sampling.exhaustive = false;
            rep.sampling.seed = part.sampling.seed;
            rep.sampling.count += part.sampling.count;
        }
    }
};

NormReport max_abs(NormKind kind, const GridFunction& u, std::span<const double> w) {
    NormReport rep;
    rep.kind = kind;
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double v = std::abs(w[i]);
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    rep.value = best;
    rep.pairs_examined = w.size();
    rep.witness = Witness{u.node(arg), LatticeShift{std::vector<std::int64_t>(u.dim(), 0), 0}, 0, best, 1.0};
    return rep;
}

/// Maxima of D_t^j D_x^beta u with |beta| + 2j <= m (j = 0 when elliptic).
void add_lower_order(Composite& c, const GridFunction& u, int m, DerivativeCache& cache) {
    const int max_j = u.is_parabolic() ? m / 2 : 0;
    for (int j = 0; j <= max_j; ++j) {
        for (int order = 0; order + 2 * j <= m; ++order) {
            for (const MultiIndex& beta : multi_indices(u.dim(), order)) {
                const auto& w = cache.get(beta, j);
                c.add("max|" + derivative_label(beta, j) + "|", max_abs(NormKind::Sup, u, w));
            }
        }
    }
}

void add_seminorm_terms(Composite& c, const GridFunction& u, const HoelderIndex& l, DerivativeCache& cache,
                        const ScanOptions& opts) {
    const int m = l.m;
    const int max_j = u.is_parabolic() ? m / 2 : 0;
    // spatial quotients of the top-order derivatives |beta| + 2j == m
    for (int j = 0; j <= max_j; ++j) {
        const int order = m - 2 * j;
        for (const MultiIndex& beta : multi_indices(u.dim(), order)) {
            const auto& w = cache.get(beta, j);
            NormReport part = from_scan(NormKind::HolderSpace, u, space_scan(u, w, l.alpha, opts), 1);
            c.add("<" + derivative_label(beta, j) + ">_x^(" + fmt(l.alpha) + ")", part);
        }
    }
    if (!u.is_parabolic()) return;
    // time quotients with exponent (m - |beta| - 2j + alpha)/2 for 0 <= m-|beta|-2j <= 1
    for (int j = 0; 2 * j <= m; ++j) {
        for (int order = std::max(0, m - 2 * j - 1); order <= m - 2 * j; ++order) {
            const double exponent = (m - order - 2 * j + l.alpha) / 2.0;
            for (const MultiIndex& beta : multi_indices(u.dim(), order)) {
                const auto& w = cache.get(beta, j);
                NormReport part = from_scan(NormKind::HolderTime, u, time_scan(u, w, exponent, opts), 1);
                c.add("<" + derivative_label(beta, j) + ">_t^(" + fmt(exponent) + ")", part);
            }
        }
    }
}

}  // namespace

std::string to_string(NormKind kind) {
    switch (kind) {
        case NormKind::Sup: return "sup";
        case NormKind::Lp: return "lp";
        case NormKind::SupTimeLp: return "sup_t_lp";
        case NormKind::HolderSpace: return "holder_space";
        case NormKind::HolderTime: return "holder_time";
        case NormKind::HolderSeminorm: return "holder_seminorm";
        case NormKind::Parabolic: return "parabolic";
        case NormKind::Elliptic: return "elliptic";
        case NormKind::IntegerOrder: return "integer_order";
        case NormKind::DiffQuotient: return "diff_quotient";
    }
    return "unknown";
}

HoelderIndex HoelderIndex::of(double l) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw InputError("regularity index must be finite and >= 0, got " + fmt(l));
    HoelderIndex idx;
    idx.l = l;
    const double r = std::round(l);
    if (std::abs(l - r) <= kIntegerTolerance) {
        idx.m = static_cast<int>(r);
        idx.alpha = 0.0;
    } else {
        idx.m = static_cast<int>(std::floor(l));
        idx.alpha = l - idx.m;
    }
    return idx;
}

HoelderIndex HoelderIndex::noninteger(double l) {
    HoelderIndex idx = of(l);
    if (idx.is_integer() || l <= 0.0)
        throw InputError("regularity index must be positive and noninteger, got " + fmt(l));
    return idx;
}

DiffSeminormSpec DiffSeminormSpec::defaults(const HoelderIndex& l) {
    return DiffSeminormSpec{static_cast<int>(std::floor(l.l)) + 1, static_cast<int>(std::floor(l.l / 2.0)) + 1};
}

void DiffSeminormSpec::validate(const HoelderIndex& l) const {
    if (!(k > l.l)) throw InputError("difference order k=" + std::to_string(k) + " must exceed l=" + fmt(l.l));
    if (!(l_t > l.l / 2.0))
        throw InputError("time difference order l_t=" + std::to_string(l_t) + " must exceed l/2=" + fmt(l.l / 2.0));
    if (k > kMaxDifferenceOrder || l_t > kMaxDifferenceOrder)
        throw InputError("difference orders are limited to " + std::to_string(kMaxDifferenceOrder));
}

NormReport sup_norm(const GridFunction& u) { return max_abs(NormKind::Sup, u, u.values()); }

namespace {

/// Trapezoidal weight of node index i on an axis with n nodes and step h.
double trapezoid_weight(std::int64_t i, std::size_t n, double h) {
    return (i == 0 || i == static_cast<std::int64_t>(n) - 1) ? 0.5 * h : h;
}

/// sum w |u|^p over the nodes of one time slice, spatial weights only.
double slice_integral(const GridFunction& u, std::size_t slice, double p) {
    const std::size_t per = u.nodes_per_slice();
    const double* v = u.values().data() + slice * per;
    double total = 0.0;
    std::vector<std::int64_t> idx(u.dim(), 0);
    for (std::size_t i = 0; i < per; ++i) {
        double w = 1.0;
        for (std::size_t a = 0; a < u.dim(); ++a) w *= trapezoid_weight(idx[a], u.extent(a), u.spacing(a));
        total += w * std::pow(std::abs(v[i]), p);
        for (std::size_t a = 0; a < u.dim(); ++a) {
            if (++idx[a] < static_cast<std::int64_t>(u.extent(a))) break;
            idx[a] = 0;
        }
    }
    return total;
}

}  // namespace

NormReport lp_norm(const GridFunction& u, double p) {
    check_p(p);
    NormReport rep;
    rep.kind = NormKind::Lp;
    rep.index_name = "p";
    rep.index = p;
    double total = 0.0;
    const std::size_t levels = u.extent(u.time_axis());
    for (std::size_t j = 0; j < levels; ++j) {
        const double wt = u.is_parabolic()
                              ? trapezoid_weight(static_cast<std::int64_t>(j), levels, u.spacing(u.time_axis()))
                              : 1.0;
        total += wt * slice_integral(u, j, p);
    }
    rep.value = std::pow(total, 1.0 / p);
    rep.pairs_examined = u.size();
    return rep;
}

NormReport sup_t_lp_norm(const GridFunction& u, double p) {
    check_p(p);
    if (!u.is_parabolic()) throw InputError("sup-in-time L_p norm needs a parabolic grid (T > 0)");
    NormReport rep;
    rep.kind = NormKind::SupTimeLp;
    rep.index_name = "p";
    rep.index = p;
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t j = 0; j < u.extent(u.time_axis()); ++j) {
        const double v = std::pow(slice_integral(u, j, p), 1.0 / p);
        if (v > best) {
            best = v;
            arg = j;
        }
    }
    rep.value = best;
    rep.pairs_examined = u.size();
    NodeIndex node{std::vector<std::int64_t>(u.dim(), 0), static_cast<std::int64_t>(arg)};
    rep.witness = Witness{node, LatticeShift{std::vector<std::int64_t>(u.dim(), 0), 0}, 0, best, 1.0};
    return rep;
}

std::vector<double> derivative_field(const GridFunction& u, const MultiIndex& beta, int lt) {
    check_beta(u, beta, lt);
    std::vector<double> field(u.values().begin(), u.values().end());
    for (std::size_t a = 0; a < u.dim(); ++a)
        for (int r = 0; r < beta.beta[a]; ++r) differentiate_axis(u, field, a);
    for (int r = 0; r < lt; ++r) differentiate_axis(u, field, u.time_axis());
    return field;
}

double lattice_distance(const GridFunction& u, const LatticeShift& d) {
    double sq = 0.0;
    for (std::size_t a = 0; a < u.dim(); ++a) {
        const double h = u.length(a, d.space[a]);
        sq += h * h;
    }
    return std::sqrt(sq);
}

NormReport holder_seminorm_space(const GridFunction& u, double alpha, const MultiIndex& beta, int lt,
                                 const ScanOptions& opts) {
    check_space_alpha(alpha);
    const std::vector<double> w = derivative_field(u, beta, lt);
    NormReport rep = from_scan(NormKind::HolderSpace, u, space_scan(u, w, alpha, opts), 1);
    rep.index_name = "alpha";
    rep.index = alpha;
    return rep;
}

NormReport holder_seminorm_time(const GridFunction& u, double exponent, const MultiIndex& beta, int lt,
                                const ScanOptions& opts) {
    check_time_exponent(exponent);
    if (!u.is_parabolic()) throw InputError("time Hoelder seminorm needs a parabolic grid (T > 0)");
    const std::vector<double> w = derivative_field(u, beta, lt);
    NormReport rep = from_scan(NormKind::HolderTime, u, time_scan(u, w, exponent, opts), 1);
    rep.index_name = "exponent";
    rep.index = exponent;
    return rep;
}

NormReport holder_seminorm(const GridFunction& u, const HoelderIndex& l, const ScanOptions& opts) {
    if (l.is_integer() || l.l <= 0.0) throw InputError("Hoelder seminorm needs a positive noninteger index");
    DerivativeCache cache(u);
    Composite c;
    c.rep.kind = NormKind::HolderSeminorm;
    c.rep.index_name = "l";
    c.rep.index = l.l;
    add_seminorm_terms(c, u, l, cache, opts);
    return c.rep;
}

NormReport parabolic_norm(const GridFunction& u, const HoelderIndex& l, const ScanOptions& opts) {
    if (!u.is_parabolic()) throw InputError("parabolic norm needs a parabolic grid (T > 0)");
    if (l.is_integer() || l.l <= 0.0) throw InputError("parabolic Hoelder norm needs a positive noninteger index");
    return holder_norm(u, l, opts);
}

NormReport elliptic_norm(const GridFunction& u, const HoelderIndex& l, const ScanOptions& opts) {
    if (u.is_parabolic()) throw InputError("elliptic norm needs an elliptic grid (T = 0)");
    if (l.is_integer() || l.l <= 0.0) throw InputError("elliptic Hoelder norm needs a positive noninteger index");
    return holder_norm(u, l, opts);
}

NormReport holder_norm(const GridFunction& u, const HoelderIndex& l, const ScanOptions& opts) {
    DerivativeCache cache(u);
    Composite c;
    c.rep.kind = l.is_integer() ? NormKind::IntegerOrder : (u.is_parabolic() ? NormKind::Parabolic : NormKind::Elliptic);
    c.rep.index_name = "l";
    c.rep.index = l.l;
    add_lower_order(c, u, l.m, cache);
    if (!l.is_integer()) add_seminorm_terms(c, u, l, cache, opts);
    return c.rep;
}

NormReport diff_quotient_seminorm(const GridFunction& u, const HoelderIndex& l, const DiffSeminormSpec& spec,
                                  DiffForm form, const ScanOptions& opts) {
    if (l.is_integer() || l.l <= 0.0) throw InputError("difference seminorm needs a positive noninteger index");
    spec.validate(l);

    auto run = [&](bool space, bool time, int order, double power, bool parabolic_length) {
        detail::ScanSpec s;
        s.grid = &u;
        s.field = u.values();
        for (std::size_t a = 0; a < u.dim(); ++a) s.active[a] = space;
        s.active[u.time_axis()] = time;
        s.stencil = &difference_stencil(order);
        s.half_space = order == 1;
        s.denominator = [&u, power, parabolic_length](const detail::Offset& d) {
            const LatticeShift shift = detail::to_shift(u, d);
            const ParabolicShift H = u.to_physical(shift);
            // split form: each part moves along space only or time only
            const double len = parabolic_length ? plength(H) : lattice_distance(u, shift) + std::abs(H.dt);
            return std::pow(len, power);
        };
        const detail::ScanResult r = detail::scan_sup(s, opts);
        if (!r.found)
            throw InputError("no admissible shift: every axis needs at least " + std::to_string(order) +
                             " steps for a difference of order " + std::to_string(order));
        return from_scan(NormKind::DiffQuotient, u, r, order);
    };

    NormReport rep;
    if (form == DiffForm::Joint || !u.is_parabolic()) {
        rep = run(true, u.is_parabolic(), spec.k, l.l, true);
    } else {
        const NormReport xs = run(true, false, spec.k, l.l, false);
        const NormReport ts = run(false, true, spec.l_t, l.l / 2.0, false);
        rep = xs;
        rep.value = xs.value + ts.value;
        rep.pairs_examined = xs.pairs_examined + ts.pairs_examined;
        if (!ts.sampling.exhaustive) {
            rep.sampling.exhaustive = false;
            rep.sampling.seed = ts.sampling.seed;
            rep.sampling.count += ts.sampling.count;
        }
        rep.terms = {{"space k=" + std::to_string(spec.k), xs.value, xs.witness},
                     {"time l_t=" + std::to_string(spec.l_t), ts.value, ts.witness}};
        rep.witness.reset();
    }
    rep.index_name = "l";
    rep.index = l.l;
    return rep;
}

}  // namespace holonorm
