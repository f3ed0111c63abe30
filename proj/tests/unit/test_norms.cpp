#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "holonorm/error.hpp"
#include "holonorm/expr.hpp"
#include "holonorm/interp.hpp"
#include "holonorm/norms.hpp"
#include "oracles.hpp"

using namespace holonorm;

namespace {

GridFunction from_expr(const std::string& src, std::size_t dim, std::size_t steps, double T = 0.0,
                       std::size_t tsteps = 0) {
    const expr::Expr e = expr::Expr::parse(src, dim);
    return make_grid_function(Domain::unit_box(dim, T), Resolution::uniform(dim, steps, T > 0.0 ? tsteps : 0),
                              [&](std::span<const double> x, double t) { return e(x, t); });
}

GridFunction random_grid(std::size_t dim, std::size_t steps, std::size_t tsteps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    return make_grid_function(Domain::unit_box(dim, tsteps ? 1.0 : 0.0), Resolution::uniform(dim, steps, tsteps),
                              [&](std::span<const double>, double) { return dist(rng); });
}

const MultiIndex kZero1{{0}};

/// Every sup-based quantity a grid function has, for the property checks.
std::vector<double> all_quantities(const GridFunction& u) {
    std::vector<double> q;
    q.push_back(sup_norm(u).value);
    q.push_back(lp_norm(u, 2.0).value);
    q.push_back(lp_norm(u, 3.5).value);
    const MultiIndex zero{std::vector<int>(u.dim(), 0)};
    q.push_back(holder_seminorm_space(u, 0.4, zero, 0).value);
    q.push_back(holder_norm(u, HoelderIndex::of(0.7)).value);
    q.push_back(holder_norm(u, HoelderIndex::of(1.3)).value);
    q.push_back(diff_quotient_seminorm(u, HoelderIndex::of(0.7), {1, 1}).value);
    q.push_back(diff_quotient_seminorm(u, HoelderIndex::of(1.5), {2, 1}).value);
    if (u.is_parabolic()) {
        q.push_back(sup_t_lp_norm(u, 2.0).value);
        q.push_back(holder_seminorm_time(u, 0.5, zero, 0).value);
        q.push_back(diff_quotient_seminorm(u, HoelderIndex::of(1.5), {2, 1}, DiffForm::Split).value);
    }
    return q;
}

}  // namespace

TEST_CASE("HoelderIndex and DiffSeminormSpec") {
    const HoelderIndex l = HoelderIndex::of(2.25);
    CHECK(l.m == 2);
    CHECK(l.alpha == 0.25);
    CHECK(HoelderIndex::of(2.0).is_integer());
    CHECK_THROWS_AS(HoelderIndex::noninteger(1.0), InputError);
    CHECK_THROWS_AS(HoelderIndex::of(-0.5), InputError);
    const DiffSeminormSpec d = DiffSeminormSpec::defaults(HoelderIndex::of(2.5));
    CHECK(d.k == 3);
    CHECK(d.l_t == 2);
    CHECK_THROWS_AS((DiffSeminormSpec{2, 2}.validate(HoelderIndex::of(2.5))), InputError);
    CHECK_THROWS_AS((DiffSeminormSpec{3, 1}.validate(HoelderIndex::of(2.5))), InputError);
}

TEST_CASE("sup norm") {
    CHECK(sup_norm(from_expr("0", 1, 8)).value == 0.0);
    const NormReport r = sup_norm(from_expr("x1", 1, 8));
    CHECK(r.value == 1.0);
    REQUIRE(r.witness);
    CHECK(r.witness->node.space[0] == 8);
    const GridFunction s = from_expr("sin(3*x1)", 1, 256);
    CHECK(sup_norm(s).value == oracle::sup_abs(s));
    CHECK(sup_norm(s).value < 1.0);
    CHECK(sup_norm(s).value >= std::sin(3.0 * std::round(std::numbers::pi / 6 * 256) / 256));
}

TEST_CASE("Lp norms") {
    CHECK(lp_norm(from_expr("1", 1, 16), 2.0).value == doctest::Approx(1.0).epsilon(1e-15));
    const GridFunction c = make_grid_function(Domain{{0.0, -1.0}, {2.0, 2.0}, 0.5}, Resolution{{4, 6}, 2},
                                              [](std::span<const double>, double) { return -3.0; });
    CHECK(lp_norm(c, 2.5).value == doctest::Approx(3.0 * std::pow(3.0, 1.0 / 2.5)).epsilon(1e-14));
    const GridFunction s = from_expr("sin(pi*x1)", 1, 64);
    CHECK(lp_norm(s, 2.0).value == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    const GridFunction r = random_grid(2, 5, 4, 11);
    CHECK(lp_norm(r, 3.0).value == doctest::Approx(oracle::lp(r, 3.0)).epsilon(1e-13));
    CHECK_THROWS_AS(lp_norm(r, 1.0), InputError);
}

TEST_CASE("sup-in-time Lp norm") {
    const GridFunction g = from_expr("sin(pi*x1)+x1", 1, 32, 1.0, 8);
    const GridFunction g0 = from_expr("sin(pi*x1)+x1", 1, 32);
    CHECK(sup_t_lp_norm(g, 2.0).value == doctest::Approx(lp_norm(g0, 2.0).value).epsilon(1e-15));
    const NormReport t = sup_t_lp_norm(from_expr("t", 1, 16, 1.0, 16), 2.0);
    CHECK(t.value == doctest::Approx(1.0).epsilon(1e-15));
    REQUIRE(t.witness);
    CHECK(t.witness->node.time == 16);
    const NormReport e = sup_t_lp_norm(from_expr("sin(pi*x1)*exp(-t)", 1, 64, 1.0, 8), 2.0);
    CHECK(e.witness->node.time == 0);
    CHECK(e.value == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK_THROWS_AS(sup_t_lp_norm(g0, 2.0), InputError);
}

TEST_CASE("spatial Hoelder seminorm") {
    CHECK(holder_seminorm_space(from_expr("4", 1, 16), 0.3, kZero1, 0).value == 0.0);
    const GridFunction x = from_expr("x1", 1, 16);
    const NormReport r = holder_seminorm_space(x, 0.5, kZero1, 0);
    CHECK(r.value == oracle::holder_space(x, std::vector<double>(x.values().begin(), x.values().end()), 0.5));
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.sampling.exhaustive);
    REQUIRE(r.witness);
    CHECK(r.witness->numerator / r.witness->denominator == r.value);
    CHECK(holder_seminorm_space(x, 0.5, MultiIndex{{1}}, 0).value < 1e-12);
    CHECK_THROWS_AS(holder_seminorm_space(x, 1.0, kZero1, 0), InputError);
    CHECK_THROWS_AS(holder_seminorm_space(from_expr("x1", 1, 1), 0.5, MultiIndex{{1}}, 0), InputError);
}

TEST_CASE("temporal Hoelder seminorm") {
    CHECK(holder_seminorm_time(from_expr("x1", 1, 8, 1.0, 8), 0.5, kZero1, 0).value == 0.0);
    const GridFunction t = from_expr("t", 1, 8, 1.0, 16);
    CHECK(holder_seminorm_time(t, 0.5, kZero1, 0).value == doctest::Approx(1.0).epsilon(1e-15));
    const GridFunction xt = from_expr("x1*t", 1, 8, 1.0, 16);
    const NormReport r = holder_seminorm_time(xt, 0.5, kZero1, 0);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.witness->node.space[0] == 8);
    CHECK(r.value == oracle::holder_time(xt, std::vector<double>(xt.values().begin(), xt.values().end()), 0.5));
    CHECK_THROWS_AS(holder_seminorm_time(from_expr("x1", 1, 8), 0.5, kZero1, 0), InputError);
}

TEST_CASE("composite Hoelder norms") {
    CHECK(parabolic_norm(from_expr("2.5", 1, 8, 1.0, 8), HoelderIndex::of(1.5)).value ==
          doctest::Approx(2.5).epsilon(1e-13));
    const NormReport p = parabolic_norm(from_expr("x1", 1, 16, 1.0, 16), HoelderIndex::of(1.5));
    CHECK(p.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(p.terms.size() >= 4);

    CHECK(elliptic_norm(from_expr("0", 1, 8), HoelderIndex::of(0.5)).value == 0.0);
    CHECK(elliptic_norm(from_expr("x1", 1, 32), HoelderIndex::of(0.5)).value == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(elliptic_norm(from_expr("x1", 1, 32), HoelderIndex::of(1.5)).value == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(parabolic_norm(from_expr("x1", 1, 8), HoelderIndex::of(0.5)), InputError);
    CHECK_THROWS_AS(elliptic_norm(from_expr("x1", 1, 8, 1.0, 8), HoelderIndex::of(0.5)), InputError);
    CHECK_THROWS_AS(parabolic_norm(from_expr("x1", 1, 8, 1.0, 8), HoelderIndex::of(1.0)), InputError);
    const NormReport c1 = holder_norm(from_expr("x1^2", 1, 32), HoelderIndex::of(1.0));
    CHECK(c1.kind == NormKind::IntegerOrder);
    CHECK(c1.value == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("difference-quotient seminorm") {
    const GridFunction lin = from_expr("3*x1-1", 1, 16);
    CHECK(diff_quotient_seminorm(lin, HoelderIndex::of(1.5), {2, 1}).value < 1e-12);
    CHECK(diff_quotient_seminorm(from_expr("7", 1, 8, 1.0, 8), HoelderIndex::of(0.5), {1, 1}).value == 0.0);

    const GridFunction cusp = from_expr("abs(x1-0.5)^0.5", 1, 64);
    const NormReport r = diff_quotient_seminorm(cusp, HoelderIndex::of(0.5), {1, 1});
    CHECK(r.value == oracle::diff_quotient(cusp, 0.5, 1));
    CHECK(r.value >= 1.0);
    CHECK(r.value <= std::sqrt(2.0) + 1e-12);

    const GridFunction coarse = from_expr("x1", 1, 2, 1.0, 2);
    CHECK_THROWS_AS(diff_quotient_seminorm(coarse, HoelderIndex::of(2.5), {3, 2}), InputError);
}

TEST_CASE("optimized scans agree with the pair oracle") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const GridFunction u = random_grid(1, 9, 7, seed);
        const std::vector<double> w(u.values().begin(), u.values().end());
        CHECK(holder_seminorm_space(u, 0.3, kZero1, 0).value == oracle::holder_space(u, w, 0.3));
        CHECK(holder_seminorm_time(u, 0.8, kZero1, 0).value == oracle::holder_time(u, w, 0.8));
        for (int k = 1; k <= 3; ++k)
            CHECK(diff_quotient_seminorm(u, HoelderIndex::of(k - 0.5), {k, k}).value ==
                  oracle::diff_quotient(u, k - 0.5, k));
        const std::vector<double> d = derivative_field(u, MultiIndex{{1}}, 0);
        CHECK(holder_seminorm_space(u, 0.6, MultiIndex{{1}}, 0).value == oracle::holder_space(u, d, 0.6));
    }
    const GridFunction e = random_grid(2, 6, 0, 8);
    CHECK(diff_quotient_seminorm(e, HoelderIndex::of(0.5), {1, 1}).value == oracle::diff_quotient(e, 0.5, 1));
}

TEST_CASE("sampled scans are reproducible and flagged") {
    const GridFunction u = from_expr("sin(5*x1)*cos(3*x2)*exp(-t)", 2, 24, 1.0, 24);
    ScanOptions opts;
    opts.exhaustive_limit = 1000;
    opts.random_pairs = 20000;
    const NormReport a = diff_quotient_seminorm(u, HoelderIndex::of(0.5), {1, 1}, DiffForm::Joint, opts);
    const NormReport b = diff_quotient_seminorm(u, HoelderIndex::of(0.5), {1, 1}, DiffForm::Joint, opts);
    CHECK_FALSE(a.sampling.exhaustive);
    CHECK(a.sampling.seed == opts.seed);
    CHECK(a.sampling.count == 20000);
    CHECK(a.value == b.value);
    CHECK(a.witness->node == b.witness->node);
    ScanOptions all;
    all.exhaustive_limit = 1'000'000'000;
    const NormReport full = diff_quotient_seminorm(u, HoelderIndex::of(0.5), {1, 1}, DiffForm::Joint, all);
    CHECK(full.sampling.exhaustive);
    CHECK(a.value <= full.value);
    CHECK(a.value >= 0.5 * full.value);
    opts.threads = 3;
    CHECK(diff_quotient_seminorm(u, HoelderIndex::of(0.5), {1, 1}, DiffForm::Joint, opts).value == a.value);
}

TEST_CASE("witnesses re-evaluate to the reported value") {
    const GridFunction u = random_grid(1, 10, 10, 21);
    const NormReport r = diff_quotient_seminorm(u, HoelderIndex::of(1.5), {2, 1});
    REQUIRE(r.witness);
    const ParabolicShift H = u.to_physical(r.witness->shift);
    const double num = std::abs(*kth_difference(u, r.witness->node, H, 2));
    CHECK(num / std::pow(plength(H), 1.5) == r.value);
}

TEST_CASE("homogeneity, triangle inequality, coarsening") {
    const GridFunction u = random_grid(1, 8, 8, 31);
    const GridFunction v = from_expr("sin(4*x1)*exp(-t)", 1, 8, 1.0, 8);
    const auto qu = all_quantities(u);
    const auto qv = all_quantities(v);
    for (double s : {-3.0, 1e-4, 7.0}) {
        const auto qs = all_quantities(scaled(u, s));
        for (std::size_t i = 0; i < qu.size(); ++i)
            CHECK(qs[i] == doctest::Approx(std::abs(s) * qu[i]).epsilon(1e-13));
    }
    const auto qw = all_quantities(combine(1.0, u, 1.0, v));
    for (std::size_t i = 0; i < qu.size(); ++i) CHECK(qw[i] <= (qu[i] + qv[i]) * (1.0 + 1e-12));

    const GridFunction fine = random_grid(1, 16, 16, 41);
    const GridFunction coarse = subsample(fine, 2);
    const MultiIndex z{{0}};
    CHECK(sup_norm(coarse).value <= sup_norm(fine).value);
    CHECK(holder_seminorm_space(coarse, 0.5, z, 0).value <= holder_seminorm_space(fine, 0.5, z, 0).value);
    CHECK(holder_seminorm_time(coarse, 0.5, z, 0).value <= holder_seminorm_time(fine, 0.5, z, 0).value);
    for (double l : {0.5, 1.5})
        CHECK(diff_quotient_seminorm(coarse, HoelderIndex::of(l), DiffSeminormSpec::defaults(HoelderIndex::of(l)))
                  .value <=
              diff_quotient_seminorm(fine, HoelderIndex::of(l), DiffSeminormSpec::defaults(HoelderIndex::of(l)))
                  .value);
}

TEST_CASE("dilation covariance") {
    const GridFunction u = random_grid(2, 6, 5, 51);
    const GridFunction e = random_grid(2, 6, 0, 52);
    const double lambda = 2.0;
    for (double l : {0.5, 1.5, 2.5}) {
        const HoelderIndex idx = HoelderIndex::of(l);
        const auto spec = DiffSeminormSpec::defaults(idx);
        CHECK(diff_quotient_seminorm(parabolic_dilate(u, lambda), idx, spec).value ==
              doctest::Approx(std::pow(lambda, -l) * diff_quotient_seminorm(u, idx, spec).value).epsilon(1e-12));
        CHECK(diff_quotient_seminorm(parabolic_dilate(e, lambda), idx, spec).value ==
              doctest::Approx(std::pow(lambda, -l) * diff_quotient_seminorm(e, idx, spec).value).epsilon(1e-12));
    }
    CHECK(sup_norm(parabolic_dilate(u, lambda)).value == sup_norm(u).value);
    CHECK(lp_norm(parabolic_dilate(u, lambda), 3.0).value ==
          doctest::Approx(std::pow(lambda, 4.0 / 3.0) * lp_norm(u, 3.0).value).epsilon(1e-13));
    CHECK(lp_norm(parabolic_dilate(e, lambda), 3.0).value ==
          doctest::Approx(std::pow(lambda, 2.0 / 3.0) * lp_norm(e, 3.0).value).epsilon(1e-13));
}

TEST_CASE("difference and derivative seminorms stay comparable under refinement") {
    for (const char* src : {"sin(3*x1)*exp(-t)", "exp(-((x1-0.3-0.4*t)/0.15)^2)"}) {
        std::vector<double> ratios;
        for (std::size_t n : {16, 32, 64}) {
            const GridFunction u = from_expr(src, 1, n, 1.0, n);
            const HoelderIndex l = HoelderIndex::of(1.5);
            ratios.push_back(diff_quotient_seminorm(u, l, DiffSeminormSpec::defaults(l)).value /
                             holder_seminorm(u, l).value);
        }
        for (std::size_t i = 1; i < ratios.size(); ++i)
            CHECK_MESSAGE(std::abs(ratios[i] / ratios[i - 1] - 1.0) < 0.2, src);
    }
}

TEST_CASE("time seminorm is controlled by the spatial and top time quotients") {
    for (const char* src : {"sin(3*x1)*exp(-t)", "exp(-((x1-0.3-0.4*t)/0.15)^2)"}) {
        std::vector<double> ratios;
        for (std::size_t n : {16, 32, 64}) {
            const TimeSeminormBound b = time_seminorm_bound(from_expr(src, 1, n, 1.0, n), HoelderIndex::of(1.5));
            REQUIRE(b.ratio);
            ratios.push_back(*b.ratio);
        }
        for (std::size_t i = 1; i < ratios.size(); ++i)
            CHECK_MESSAGE(std::abs(ratios[i] / ratios[i - 1] - 1.0) < 0.2, src);
    }
}
