#include "holonorm/report_json.hpp"

namespace holonorm {

using nlohmann::json;

namespace {

json bounds(const ParamBounds& b) { return json::array({b.lo, b.hi}); }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const Domain& d) {
    return json{{"lower", d.lower}, {"upper", d.upper}, {"T", d.T}};
}

json to_json(const Resolution& r) {
    return json{{"spatial_steps", r.spatial_steps}, {"time_steps", r.time_steps}};
}

json to_json(const Witness& w) {
    return json{{"node", {{"space", w.node.space}, {"time", w.node.time}}},
                {"shift", {{"space", w.shift.space}, {"time", w.shift.time}}},
                {"order", w.order},
                {"numerator", w.numerator},
                {"denominator", w.denominator}};
}

json to_json(const NormReport& r) {
    json j{{"kind", to_string(r.kind)},
           {"value", r.value},
           {"pairs_examined", r.pairs_examined},
           {"sampling",
            {{"mode", r.sampling.exhaustive ? "exhaustive" : "sampled"},
             {"seed", r.sampling.seed},
             {"count", r.sampling.count}}},
           {"witness", r.witness ? to_json(*r.witness) : json(nullptr)}};
    j["index"] = r.index_name.empty() ? json(nullptr) : json{{"name", r.index_name}, {"value", r.index}};
    if (!r.terms.empty()) {
        json terms = json::array();
        for (const NormTerm& t : r.terms)
            terms.push_back({{"label", t.label},
                             {"value", t.value},
                             {"witness", t.witness ? to_json(*t.witness) : json(nullptr)}});
        j["terms"] = std::move(terms);
    }
    return j;
}

json to_json(const InterpSpec& s) {
    json j{{"variant", std::string(label(s.variant))},
           {"name", std::string(name(s.variant))},
           {"l1", s.l1},
           {"l2", s.l2},
           {"N", s.N}};
    if (s.variant == Variant::HolderHolderElliptic || s.variant == Variant::HolderHolderParabolic)
        j["l"] = s.l;
    else
        j["p"] = s.p;
    return j;
}

json to_json(const CheckReport& r) {
    json j = to_json(r.spec);
    j["omega"] = r.omega;
    j["lhs"] = r.lhs;
    j["factor_high"] = r.factor_high;
    j["factor_low"] = r.factor_low;
    j["ratio"] = optional_number(r.ratio);
    j["status"] = to_string(r.status);
    j["resolution"] = to_json(r.resolution);
    j["norms"] = {{"lhs", to_json(r.lhs_norm)}, {"high", to_json(r.high_norm)}, {"low", to_json(r.low_norm)}};
    return j;
}

json to_json(const Family& f) {
    json j{{"kind", to_string(f.kind)},    {"terms", f.terms},           {"amplitude", bounds(f.amplitude)},
           {"frequency", bounds(f.frequency)}, {"phase", bounds(f.phase)}, {"decay", bounds(f.decay)},
           {"center", bounds(f.center)},   {"width", bounds(f.width)}};
    j["gamma"] = f.gamma ? bounds(*f.gamma) : json(nullptr);
    return j;
}

json to_json(const SearchResult& r) {
    const auto layout = param_layout(r.family, r.spec);
    auto named = [&](const std::vector<double>& p) {
        json out = json::object();
        for (std::size_t i = 0; i < p.size() && i < layout.size(); ++i) out[layout[i].name] = p[i];
        return out;
    };
    return json{{"spec", to_json(r.spec)},
                {"family", to_json(r.family)},
                {"domain", to_json(r.options.domain)},
                {"resolution", r.options.resolution},
                {"time_resolution", r.options.domain.is_parabolic()
                                        ? (r.options.time_resolution ? r.options.time_resolution : r.options.resolution)
                                        : 0},
                {"seed", r.seed},
                {"evaluations", r.evaluations},
                {"violations", r.violations},
                {"best_ratio", r.best_ratio},
                {"best_expression", r.best_expression},
                {"best_params", named(r.best_params)},
                {"member_ratio", r.member_ratio},
                {"member_expression", r.member_expression},
                {"member_params", named(r.member_params)},
                {"constant_probe_ratio", optional_number(r.constant_probe_ratio)}};
}

}  // namespace holonorm
