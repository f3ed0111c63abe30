#include "holonorm/search.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include "holonorm/error.hpp"
#include "holonorm/expr.hpp"

namespace holonorm {

namespace {

std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, res.ptr);
    return v < 0.0 ? "(" + s + ")" : s;
}

std::string var(std::size_t i) { return "x" + std::to_string(i + 1); }

void check_bounds(const ParamBounds& b, const char* what) {
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi)
        throw InputError(std::string("family ") + what + " bounds must be finite with lo <= hi");
}

ParamBounds gamma_bounds(const Family& f, const InterpSpec& spec) {
    if (f.gamma) return *f.gamma;
    const double frac = spec.l2 - std::floor(spec.l2);
    return {frac, frac + 1.0};
}

Domain resolved_domain(const InterpSpec& spec, const Domain& d) {
    if (d.dim() != 0) return d;
    return Domain::unit_box(spec.N, is_parabolic(spec.variant) ? 1.0 : 0.0);
}

Domain resolved_domain(const InterpSpec& spec, const SearchOptions& o) { return resolved_domain(spec, o.domain); }

std::vector<double> draw(const std::vector<ParamInfo>& layout, std::uint64_t seed, std::uint64_t index,
                         std::uint64_t attempt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      static_cast<std::uint32_t>(attempt)};
    std::mt19937_64 rng(seq);
    std::vector<double> p;
    p.reserve(layout.size());
    for (const ParamInfo& info : layout) {
        if (info.bounds.lo == info.bounds.hi) {
            p.push_back(info.bounds.lo);
            continue;
        }
        p.push_back(std::uniform_real_distribution<double>(info.bounds.lo, info.bounds.hi)(rng));
    }
    return p;
}

struct Evaluation {
    bool degenerate = false;
    bool flagged = false;  // violation or unbounded balance
    double ratio = 0.0;
};

Evaluation evaluate(const std::string& text, const InterpSpec& spec, const SearchOptions& o) {
    Evaluation e;
    std::optional<GridFunction> u;
    try {
        u.emplace(sample_expression(text, spec, o));
    } catch (const InputError&) {
        e.degenerate = true;
        return e;
    }
    if (sup_norm(*u).value <= o.amplitude_tolerance) {
        e.degenerate = true;
        return e;
    }
    const CheckReport rep = check(spec, *u, o.check);
    if (rep.status == CheckStatus::Ok && rep.ratio) {
        e.ratio = *rep.ratio;
    } else {
        e.flagged = true;
    }
    return e;
}

}  // namespace

std::string to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::Trig: return "trig";
        case FamilyKind::Bump: return "bump";
        case FamilyKind::Rough: return "rough";
    }
    return "unknown";
}

FamilyKind parse_family(std::string_view text) {
    if (text == "trig") return FamilyKind::Trig;
    if (text == "bump") return FamilyKind::Bump;
    if (text == "rough") return FamilyKind::Rough;
    throw InputError("unknown family '" + std::string(text) + "' (expected trig, bump or rough)");
}

void Family::validate() const {
    if (terms < 1 || terms > 16) throw InputError("family terms must lie in [1, 16]");
    check_bounds(amplitude, "amplitude");
    check_bounds(frequency, "frequency");
    check_bounds(phase, "phase");
    check_bounds(decay, "decay");
    check_bounds(center, "center");
    check_bounds(width, "width");
    if (!(width.lo > 0.0)) throw InputError("family widths must be positive");
    if (gamma) {
        check_bounds(*gamma, "gamma");
        if (!(gamma->lo > 0.0)) throw InputError("family gamma must be positive");
    }
}

std::vector<ParamInfo> param_layout(const Family& f, const InterpSpec& spec) {
    const bool parabolic = is_parabolic(spec.variant);
    std::vector<ParamInfo> out;
    for (std::size_t j = 0; j < f.terms; ++j) {
        const std::string sfx = "_" + std::to_string(j + 1);
        out.push_back({"a" + sfx, f.amplitude});
        switch (f.kind) {
            case FamilyKind::Trig:
                for (std::size_t i = 0; i < spec.N; ++i) out.push_back({"w" + sfx + "_" + var(i), f.frequency});
                out.push_back({"phi" + sfx, f.phase});
                break;
            case FamilyKind::Bump:
                for (std::size_t i = 0; i < spec.N; ++i) out.push_back({"c" + sfx + "_" + var(i), f.center});
                for (std::size_t i = 0; i < spec.N; ++i) out.push_back({"r" + sfx + "_" + var(i), f.width});
                break;
            case FamilyKind::Rough:
                for (std::size_t i = 0; i < spec.N; ++i) out.push_back({"c" + sfx + "_" + var(i), f.center});
                out.push_back({"gamma" + sfx, gamma_bounds(f, spec)});
                break;
        }
        if (parabolic) out.push_back({"mu" + sfx, f.decay});
    }
    return out;
}

std::string member_expression(const Family& f, const InterpSpec& spec, const Domain& given,
                              const std::vector<double>& params) {
    const Domain domain = resolved_domain(spec, given);
    if (domain.dim() != spec.N)
        throw InputError("member domain has dimension " + std::to_string(domain.dim()) + " but N=" +
                         std::to_string(spec.N));
    const auto layout = param_layout(f, spec);
    if (params.size() != layout.size())
        throw InputError("expected " + std::to_string(layout.size()) + " parameters, got " +
                         std::to_string(params.size()));
    const bool parabolic = is_parabolic(spec.variant);
    const std::size_t N = spec.N;
    auto at = [&](double frac, std::size_t i) { return domain.lower[i] + frac * (domain.upper[i] - domain.lower[i]); };
    auto len = [&](double frac, std::size_t i) { return frac * (domain.upper[i] - domain.lower[i]); };

    std::string out;
    std::size_t k = 0;
    for (std::size_t j = 0; j < f.terms; ++j) {
        std::string term = num(params[k++]);
        switch (f.kind) {
            case FamilyKind::Trig: {
                std::string arg;
                for (std::size_t i = 0; i < N; ++i) arg += num(params[k++]) + "*" + var(i) + "+";
                arg += num(params[k++]);
                term += "*sin(" + arg + ")";
                break;
            }
            case FamilyKind::Bump: {
                std::vector<double> c(N);
                for (std::size_t i = 0; i < N; ++i) c[i] = at(params[k++], i);
                for (std::size_t i = 0; i < N; ++i)
                    term += "*max(0,1-((" + var(i) + "-" + num(c[i]) + ")/" + num(len(params[k++], i)) + ")^2)^4";
                break;
            }
            case FamilyKind::Rough: {
                std::vector<double> c(N);
                for (std::size_t i = 0; i < N; ++i) c[i] = at(params[k++], i);
                const double g = params[k++];
                if (N == 1) {
                    term += "*abs(x1-" + num(c[0]) + ")^" + num(g);
                } else {
                    std::string r2;
                    for (std::size_t i = 0; i < N; ++i)
                        r2 += (i ? "+(" : "(") + var(i) + "-" + num(c[i]) + ")^2";
                    term += "*(" + r2 + ")^" + num(g / 2.0);
                }
                break;
            }
        }
        if (parabolic) term += "*exp(" + num(-params[k++]) + "*t)";
        out += (j ? "+" : "") + term;
    }
    return out;
}

GridFunction sample_expression(const std::string& text, const InterpSpec& spec, const SearchOptions& o) {
    const Domain domain = resolved_domain(spec, o);
    const bool parabolic = domain.is_parabolic();
    const std::size_t tres = parabolic ? (o.time_resolution ? o.time_resolution : o.resolution) : 0;
    const expr::Expr e = expr::Expr::parse(text, domain.dim());
    return make_grid_function(domain, Resolution::uniform(domain.dim(), o.resolution, tres),
                              [&](std::span<const double> x, double t) { return e(x, t); });
}

std::optional<double> evaluate_expression(const std::string& text, const InterpSpec& spec,
                                          const SearchOptions& options) {
    const Evaluation e = evaluate(text, spec, options);
    if (e.degenerate || e.flagged) return std::nullopt;
    return e.ratio;
}

SearchResult random_search(const InterpSpec& spec, const Family& family, std::uint64_t budget, std::uint64_t seed,
                           const SearchOptions& options) {
    spec.validate();
    family.validate();
    if (budget < 1) throw InputError("search budget must be at least 1");

    SearchResult r;
    r.spec = spec;
    r.family = family;
    r.options = options;
    r.options.domain = resolved_domain(spec, options);
    r.seed = seed;
    if (r.options.domain.dim() != spec.N)
        throw InputError("search domain dimension does not match N=" + std::to_string(spec.N));

    bool have_best = false;
    auto offer = [&](double ratio, const std::string& text, const std::vector<double>& params) {
        if (!have_best || ratio > r.best_ratio) {
            have_best = true;
            r.best_ratio = ratio;
            r.best_expression = text;
            r.best_params = params;
        }
    };

    if (options.include_constant_probe) {
        const Evaluation e = evaluate("1", spec, r.options);
        ++r.evaluations;
        if (e.flagged) ++r.violations;
        if (!e.degenerate && !e.flagged) {
            r.constant_probe_ratio = e.ratio;
            offer(e.ratio, "1", {});
        }
        r.history.push_back(r.best_ratio);
    }

    const auto layout = param_layout(family, spec);
    bool have_member = false;
    for (std::uint64_t i = 0; i < budget; ++i) {
        for (int attempt = 0; attempt <= options.max_resamples; ++attempt) {
            const std::vector<double> params = draw(layout, seed, i, static_cast<std::uint64_t>(attempt));
            const std::string text = member_expression(family, spec, r.options.domain, params);
            const Evaluation e = evaluate(text, spec, r.options);
            if (e.degenerate) continue;
            if (e.flagged) {
                ++r.violations;
                break;
            }
            if (!have_member || e.ratio > r.member_ratio) {
                have_member = true;
                r.member_ratio = e.ratio;
                r.member_expression = text;
                r.member_params = params;
            }
            offer(e.ratio, text, params);
            break;
        }
        ++r.evaluations;
        r.history.push_back(r.best_ratio);
    }
    if (!have_member && r.violations == 0)
        throw InputError("family is degenerate: every sampled member is below the amplitude tolerance");
    return r;
}

SearchResult refine_search(const SearchResult& start, std::uint64_t steps, double step_scale, std::uint64_t seed) {
    SearchResult r = start;
    if (steps == 0 || r.member_params.empty()) return r;
    if (!(step_scale > 0.0) || !std::isfinite(step_scale)) throw InputError("step scale must be positive");

    const auto layout = param_layout(r.family, r.spec);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x7ef1u};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, 1.0);

    for (std::uint64_t s = 0; s < steps; ++s) {
        const std::size_t c = static_cast<std::size_t>(s % layout.size());
        const ParamBounds b = layout[c].bounds;
        std::vector<double> params = r.member_params;
        params[c] = std::clamp(params[c] + step_scale * (b.hi - b.lo) * gauss(rng), b.lo, b.hi);
        ++r.evaluations;
        if (params[c] != r.member_params[c]) {
            const std::string text = member_expression(r.family, r.spec, r.options.domain, params);
            const Evaluation e = evaluate(text, r.spec, r.options);
            if (e.flagged) ++r.violations;
            if (!e.degenerate && !e.flagged && e.ratio > r.member_ratio) {
                r.member_ratio = e.ratio;
                r.member_expression = text;
                r.member_params = params;
                if (e.ratio > r.best_ratio) {
                    r.best_ratio = e.ratio;
                    r.best_expression = text;
                    r.best_params = params;
                }
            }
        }
        r.history.push_back(r.best_ratio);
    }
    return r;
}

}  // namespace holonorm
