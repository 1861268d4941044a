#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bosonic/hardy.hpp"
#include "bosonic/serialize.hpp"

#include <cmath>

using namespace bosonic;

namespace {

PolyXU expr(const std::string& s, int m = 3) { return parse_expression(s, m); }

ProductMeasure atom_measure(int m, int k, const std::string& h, std::vector<Atom> atoms) {
    ProductMeasure mu;
    mu.m = m;
    mu.k = k;
    mu.atoms = std::move(atoms);
    mu.h = expr(h, m);
    return mu;
}

ProductMeasure sigma_measure(int m, int k, const std::string& h) {
    ProductMeasure mu;
    mu.m = m;
    mu.k = k;
    mu.density1 = poly_constant(m, 1);
    mu.h = expr(h, m);
    return mu;
}

}  // namespace

TEST_CASE("slice norms of simple polynomials") {
    const auto rule = quad_rule(3, 12);
    for (double r1 : {0.0, 0.4, 1.0})
        for (double r2 : {0.3, 1.0}) {
            CHECK(slice_norm(expr("u1"), r1, r2, 2, *rule, *rule) == doctest::Approx(r2 / std::sqrt(3.0)).epsilon(1e-13));
            CHECK(slice_norm(expr("1"), r1, r2, 2, *rule, *rule) == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(slice_norm(expr("x1*u1"), r1, r2, 2, *rule, *rule) ==
                  doctest::Approx(r1 * r2 / 3).epsilon(1e-12).scale(1e-14));
        }
    const Evaluable f = [](const double*, const double* v) { return v[0]; };
    CHECK(slice_norm(f, 0.5, 0.7, 2, *rule, *rule) == doctest::Approx(0.7 / std::sqrt(3.0)).epsilon(1e-13));
    CHECK(slice_norm(expr("u1"), 1, 1, INFINITY, *abs_rule(3), *abs_rule(3)) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_THROWS_AS(slice_norm(expr("u1"), 1, 1, 0.5, *rule, *rule), std::invalid_argument);
    CHECK(slice_distance(expr("u1"), expr("u1"), 1, 1, 2, *rule, *rule) == doctest::Approx(0.0));
}

TEST_CASE("total variation") {
    const std::vector<double> e1{1, 0, 0};
    auto mu = atom_measure(3, 1, "u1", {{e1, 2.0}});
    CHECK(total_variation(mu) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(total_variation(mu.scaled(-3)) == doctest::Approx(3.0).epsilon(1e-4));
    CHECK(total_variation(sigma_measure(3, 0, "1")) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("measure validation and json") {
    auto mu = atom_measure(3, 1, "u1", {{{0, 0, 2}, 0.5}});
    CHECK_THROWS_AS(mu.validate(), std::invalid_argument);
    json j = {{"m", 3}, {"k", 1}, {"atoms", {{{"zeta", {0, 0, 2}}, {"w", 0.5}}}}, {"density2", "u1"}};
    auto parsed = measure_from_json(j, 3, 1);
    CHECK(parsed.atoms.at(0).zeta[2] == 1.0);
    auto back = measure_from_json(to_json(parsed), 3, 1);
    CHECK(back.atoms.at(0).w == 0.5);
    CHECK(back.h == parsed.h);
    json bad = {{"density2", "u1^2"}};
    CHECK_THROWS(measure_from_json(bad, 3, 1));
    json wrong_k = {{"atoms", {{{"zeta", {1, 0, 0}}, {"w", 1}}}}, {"density2", "u1"}};
    CHECK_THROWS(measure_from_json(wrong_k, 3, 2));
    CHECK_THROWS(measure_from_json(json{{"density2", "u1"}}, 3, 1));
}

TEST_CASE("Poisson integrals of measures") {
    PoissonKernel K(*calibrated_spec(OperatorParams(3, 1)));
    const double x[3] = {0.2, -0.1, 0.3}, v[3] = {0.4, 0.5, -0.2}, zero[3] = {0, 0, 0};

    // sigma x u1 dsigma reproduces v1
    CHECK(poisson_integral(sigma_measure(3, 1, "u1"), K, x, v) == doctest::Approx(0.4).epsilon(1e-10));

    // a point mass at e1 with h = u1 gives -3 v1 at the center
    auto atom = atom_measure(3, 1, "u1", {{{1, 0, 0}, 1.0}});
    CHECK(poisson_integral(atom, K, zero, v) == doctest::Approx(-3 * 0.4).epsilon(1e-13));
    CHECK_THROWS_AS(poisson_integral(atom, K, std::vector<double>{1, 0, 0}.data(), v), std::domain_error);

    // linearity in the measure
    auto two = atom;
    two.atoms.push_back({{0, 1, 0}, -0.5});
    MeasurePoisson f(two, K);
    auto second = atom_measure(3, 1, "u1", {{{0, 1, 0}, -0.5}});
    CHECK(f(x, v) == doctest::Approx(poisson_integral(atom, K, x, v) + poisson_integral(second, K, x, v)));
}

TEST_CASE("growth report for boundary functions") {
    OperatorParams p31(3, 1);
    auto rep = growth_report(expr("u1"), p31, 1);
    CHECK(rep.constant == 3);
    CHECK(rep.reference == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(rep.violations == 0);
    CHECK(rep.monotone_violations == 0);
    CHECK(rep.grid.size() == 36);
    // f = v1, so the norm only depends on r2
    CHECK(rep.values.back() == doctest::Approx(0.99 * rep.reference).epsilon(1e-12));

    auto rep2 = growth_report(expr("x1*x2*u3 + x1*u1"), p31, 2);
    CHECK(rep2.violations == 0);
    CHECK(rep2.trend_decreasing);
    CHECK(rep2.trend.back() < rep2.trend.front());
    const std::string csv = to_csv(rep2);
    CHECK(csv.rfind("r1,r2,norm,bound,ok\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 37);

    CHECK_THROWS_AS(growth_report(expr("u1^2"), p31, 1), std::invalid_argument);
    CHECK_THROWS_AS(growth_report(expr("x1*x2*x3*u1", 4), OperatorParams(4, 1), 1), std::domain_error);
}

TEST_CASE("growth report for a measure") {
    PoissonKernel K(*calibrated_spec(OperatorParams(3, 1)));
    auto mu = atom_measure(3, 1, "u1", {{{1, 0, 0}, 1.0}});
    auto rep = growth_report(mu, K, {0.0, 0.5, 0.9});
    CHECK(rep.reference == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(rep.violations == 0);
    // r1 = 0: |f| = 3 |v1| r2
    CHECK(rep.values[2] == doctest::Approx(3 * 0.9 * 0.5).epsilon(1e-3));
}

TEST_CASE("pointwise growth") {
    OperatorParams p31(3, 1);
    std::vector<PointSample> samples;
    for (double r : {0.0, 0.5, 0.9})
        samples.push_back({{r, 0, 0}, {0.6, 0.8, 0}});
    auto rep = point_growth_check(expr("x1*u1 + u2"), p31, 2, samples);
    CHECK(rep.violations == 0);
    CHECK(rep.worst_ratio < 1);
    CHECK(rep.constant == doctest::Approx(3 * 3 * std::pow(omega(3), 0.0)));
}

TEST_CASE("ball norms") {
    CHECK_NOTHROW(check_lp_exponent(3, 1.4));
    CHECK_THROWS_AS(check_lp_exponent(3, 1.6), std::invalid_argument);
    CHECK_THROWS_AS(check_lp_exponent(3, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(check_lp_exponent(4, 0.9), std::invalid_argument);

    PoissonKernel K(*calibrated_spec(OperatorParams(3, 1)));
    CHECK(lp_ball_norm(sigma_measure(3, 1, "u1"), K, 1) == doctest::Approx(8 * M_PI * M_PI / 3).epsilon(1e-3));

    std::vector<ProductMeasure> family;
    for (double t : {0.0, 1.0}) {
        const double c = std::cos(t), s = std::sin(t);
        family.push_back(atom_measure(3, 1, "u1", {{{c, s, 0}, 1.0}}));
    }
    auto rep = lp_ratio_report(family, K, 1.2);
    CHECK(rep.norms.size() == 2);
    CHECK(std::isfinite(rep.max_ratio));
    CHECK(rep.ratios[0] == doctest::Approx(rep.ratios[1]).epsilon(0.05));
}

TEST_CASE("weak* convergence") {
    PoissonKernel K1(*calibrated_spec(OperatorParams(3, 1)));
    PoissonKernel K0(*calibrated_spec(OperatorParams(3, 0)));
    auto gap = [](const ProductMeasure& mu, const std::string& g, const PoissonKernel& K) {
        std::vector<double> out;
        for (double r : {0.5, 0.9, 0.99}) out.push_back(weak_star_gap(mu, expr(g), r, r, K));
        return out;
    };
    auto check_decreasing = [](const std::vector<double>& g) {
        CHECK(g[1] < g[0]);
        CHECK(g[2] < g[1]);
        CHECK(g[2] < 0.05);
    };
    check_decreasing(gap(atom_measure(3, 1, "u1", {{{1, 0, 0}, 1.0}}), "x1*u1", K1));
    check_decreasing(gap(atom_measure(3, 0, "1", {{{1, 0, 0}, 1.0}}), "x1^2", K0));
    check_decreasing(gap(atom_measure(3, 1, "u1", {{{1, 0, 0}, 0.5}, {{0, 1, 0}, -0.3}}), "x1*u1 + x2*u2", K1));
    auto smooth = gap(sigma_measure(3, 1, "u1"), "u1*(1 + x1^2)", K1);
    CHECK(smooth[2] < smooth[0]);
}

TEST_CASE("the Poisson integral is a null solution") {
    OperatorParams p31(3, 1);
    PoissonKernel K(*calibrated_spec(p31));
    const double a[3] = {0.1, 0.2, -0.1}, v[3] = {0.3, -0.5, 0.6};
    auto mu = atom_measure(3, 1, "u1", {{{0, 0, 1}, 1.0}});
    MeasurePoisson f(mu, K);
    const Evaluable fe = [&](const double* x, const double* w) { return f(x, w); };
    CHECK(std::abs(dk_residual(fe, p31, a, v)) < 1e-5);

    const NumericPolyXU bad(expr("x1^2*u1"));
    const Evaluable be = [&](const double* x, const double* w) { return bad({x, w}); };
    CHECK(std::abs(dk_residual(be, p31, a, v)) > 0.1);
}

TEST_CASE("mean value inequality") {
    OperatorParams p31(3, 1);
    PoissonKernel K(*calibrated_spec(p31));
    auto mu = atom_measure(3, 1, "u1", {{{1, 0, 0}, 1.0}});
    MeasurePoisson f(mu, K);
    const Evaluable fe = [&](const double* x, const double* w) { return f(x, w); };
    const double a[3] = {0.2, 0.1, 0}, v[3] = {0.6, 0.8, 0};
    for (double p : {1.0, 2.0}) {
        auto rep = mean_value_check(fe, p31, a, v, 0.3, p, 4000, 7);
        CHECK(rep.ok);
        CHECK(rep.stderr_rhs > 0);
    }
    CHECK_THROWS_AS(mean_value_check(fe, p31, a, v, 0.9, 1, 10, 1), std::domain_error);
}
