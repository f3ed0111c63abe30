#include <doctest.h>

#include <cmath>

#include "holonorm/error.hpp"
#include "holonorm/report_json.hpp"
#include "holonorm/search.hpp"

using namespace holonorm;

namespace {

InterpSpec spec(Variant v, double l1, double l2, double p, std::size_t N) {
    InterpSpec s;
    s.variant = v;
    s.l1 = l1;
    s.l2 = l2;
    s.p = p;
    s.N = N;
    return s;
}

SearchOptions small(std::size_t res = 32) {
    SearchOptions o;
    o.resolution = res;
    return o;
}

}  // namespace

TEST_CASE("family layouts and expressions") {
    const InterpSpec par = spec(Variant::SupVsLp, 0.0, 1.5, 2.0, 2);
    Family f;
    f.terms = 2;
    CHECK(param_layout(f, par).size() == 2 * (1 + 2 + 1 + 1));
    f.kind = FamilyKind::Bump;
    CHECK(param_layout(f, par).size() == 2 * (1 + 2 + 2 + 1));
    f.kind = FamilyKind::Rough;
    const auto rough = param_layout(f, par);
    CHECK(rough.size() == 2 * (1 + 2 + 1 + 1));
    CHECK(rough[3].bounds.lo == doctest::Approx(0.5));
    CHECK_THROWS_AS(member_expression(f, par, Domain::unit_box(2, 1.0), {1.0}), InputError);
    const std::vector<double> params(rough.size(), 0.5);
    CHECK(member_expression(f, par, Domain{}, params) == member_expression(f, par, Domain::unit_box(2, 1.0), params));
    CHECK_THROWS_AS(member_expression(f, par, Domain::unit_box(3, 1.0), params), InputError);
    CHECK(parse_family("bump") == FamilyKind::Bump);
    CHECK_THROWS_AS(parse_family("wave"), InputError);
}

TEST_CASE("budget 1 gives the single evaluation") {
    const InterpSpec s = spec(Variant::SupVsLp, 0.0, 1.5, 2.0, 1);
    const SearchResult r = random_search(s, Family{}, 1, 99, small());
    CHECK(r.evaluations == 1);
    REQUIRE(r.history.size() == 1);
    CHECK(r.history[0] == r.best_ratio);
    CHECK(*evaluate_expression(r.best_expression, s, r.options) == r.best_ratio);
    CHECK_THROWS_AS(random_search(s, Family{}, 0, 99, small()), InputError);
}

TEST_CASE("search is deterministic and sound") {
    const InterpSpec s = spec(Variant::GeneralParabolic, 0.5, 1.5, 2.0, 1);
    for (FamilyKind kind : {FamilyKind::Trig, FamilyKind::Bump, FamilyKind::Rough}) {
        Family f;
        f.kind = kind;
        const SearchResult a = random_search(s, f, 12, 7, small());
        const SearchResult b = random_search(s, f, 12, 7, small());
        CHECK(to_json(a).dump() == to_json(b).dump());
        CHECK(a.history == b.history);
        for (std::size_t i = 1; i < a.history.size(); ++i) CHECK(a.history[i] >= a.history[i - 1]);
        const auto again = evaluate_expression(a.best_expression, s, a.options);
        REQUIRE(again);
        CHECK(*again == a.best_ratio);
        const SearchResult c = random_search(s, f, 12, 8, small());
        CHECK(c.best_expression != a.best_expression);
    }
}

TEST_CASE("constant probe on the elliptic variant") {
    const InterpSpec s = spec(Variant::Elliptic, 0.0, 1.5, 2.0, 1);
    SearchOptions o = small(64);
    o.include_constant_probe = true;
    const SearchResult r = random_search(s, Family{}, 20, 3, o);
    REQUIRE(r.constant_probe_ratio);
    CHECK(*r.constant_probe_ratio == 1.0);
    CHECK(r.best_ratio >= 1.0);
    CHECK(r.evaluations == 21);
}

TEST_CASE("refinement never loses ground") {
    const InterpSpec s = spec(Variant::SupVsLp, 0.0, 1.5, 2.0, 1);
    const SearchResult start = random_search(s, Family{}, 10, 11, small());
    CHECK(to_json(refine_search(start, 0, 0.1, 1)).dump() == to_json(start).dump());
    const SearchResult r = refine_search(start, 60, 0.1, 1);
    CHECK(r.best_ratio >= start.best_ratio);
    CHECK(r.member_ratio >= start.member_ratio);
    CHECK(r.evaluations == start.evaluations + 60);
    for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] >= r.history[i - 1]);
    CHECK(*evaluate_expression(r.best_expression, s, r.options) == r.best_ratio);
    CHECK(to_json(refine_search(start, 60, 0.1, 1)).dump() == to_json(r).dump());
}

TEST_CASE("refinement fixture on the sup variant") {
    const InterpSpec s = spec(Variant::SupVsLp, 0.0, 1.5, 2.0, 1);
    const SearchResult start = random_search(s, Family{}, 20, 2024, small(64));
    const SearchResult r = refine_search(start, 200, 0.1, 2024);
    CHECK(start.best_ratio == doctest::Approx(0.56029020882329184).epsilon(1e-9));
    CHECK(r.best_ratio == doctest::Approx(0.80469913200389853).epsilon(1e-9));
    CHECK(r.best_ratio > start.best_ratio);
}

TEST_CASE("default trig search on the elliptic variant reaches the constant") {
    const InterpSpec s = spec(Variant::Elliptic, 0.0, 1.5, 2.0, 1);
    SearchOptions o;
    o.include_constant_probe = true;
    const SearchResult r = random_search(s, Family{}, 500, 1, o);
    CHECK(r.evaluations == 501);
    CHECK(r.best_ratio >= 1.0);
}

TEST_CASE("degenerate family is rejected") {
    Family f;
    f.amplitude = {0.0, 0.0};
    CHECK_THROWS_AS(random_search(spec(Variant::Elliptic, 0.0, 1.5, 2.0, 1), f, 3, 1, small()), InputError);
}

TEST_CASE("JSON reports") {
    const InterpSpec s = spec(Variant::SupVsLp, 0.0, 1.5, 2.0, 1);
    const GridFunction u = sample_expression("x1*t", s, small(16));
    const nlohmann::json j = to_json(check(s, u));
    CHECK(j["variant"] == "2.3.1");
    CHECK(j["status"] == "ok");
    CHECK(j["norms"]["high"]["kind"] == "parabolic");
    CHECK(j["norms"]["lhs"]["witness"]["node"]["space"][0] == 16);
    const nlohmann::json z = to_json(check(s, sample_expression("0", s, small(16))));
    CHECK(z["status"] == "trivially_satisfied");
    const nlohmann::json n = to_json(sup_norm(u));
    CHECK(n["sampling"]["mode"] == "exhaustive");
    CHECK(n["index"].is_null());
}
