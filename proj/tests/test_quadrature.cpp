#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bosonic/moments.hpp"
#include "bosonic/quadrature.hpp"

#include <cmath>

using namespace bosonic;

namespace {

double integrate(const QuadRule& r, const std::vector<int>& a) {
    double s = 0;
    for (size_t i = 0; i < r.size(); ++i) {
        double v = r.weights[i];
        for (int c = 0; c < r.m; ++c) v *= std::pow(r.node(i)[c], a[c]);
        s += v;
    }
    return s;
}

}  // namespace

TEST_CASE("Gauss rules") {
    std::vector<double> t, w;
    gauss_symmetric(5, 0.0, t, w);
    double s = 0;
    for (size_t i = 0; i < t.size(); ++i) s += w[i] * std::pow(t[i], 8);
    CHECK(s == doctest::Approx(1.0 / 9).epsilon(1e-14));
    gauss_symmetric(4, 0.5, t, w);
    s = 0;
    for (size_t i = 0; i < t.size(); ++i) s += w[i] * t[i] * t[i];
    CHECK(s == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("sphere rule examples") {
    auto r = quad_rule(3, 8);
    CHECK(r->validated);
    CHECK(std::abs(integrate(*r, {0, 0, 0}) - 1) < 1e-14);
    CHECK(std::abs(integrate(*r, {2, 0, 0}) - 1.0 / 3) < 1e-13);
    CHECK(std::abs(integrate(*r, {4, 0, 0}) - 1.0 / 5) < 1e-13);
    CHECK(std::abs(integrate(*r, {1, 2, 0})) < 1e-15);
}

TEST_CASE("validated rules up to degree 30") {
    for (int m = 3; m <= 5; ++m)
        for (int d : {0, 1, 7, 16, 30}) {
            auto r = quad_rule(m, d);
            CHECK(validate_rule(*r, d) <= 1e-12);
        }
    CHECK_THROWS_AS(quad_rule(6, 4), std::invalid_argument);
    CHECK_THROWS_AS(quad_rule(3, 31), std::invalid_argument);
    // one degree beyond the exactness limit is generally not integrated
    CHECK(validate_rule(sphere_rule(3, 5), 6) > 1e-6);
}

TEST_CASE("peaked rule") {
    for (int m = 3; m <= 5; ++m) {
        std::vector<double> pole(m, 0.0);
        pole[0] = 0.6;
        pole[m - 1] = -0.8;
        QuadRule r = peaked_rule(m, pole.data(), 0.01, 16, 12);
        double s = 0;
        for (double w : r.weights) s += w;
        CHECK(std::abs(s - 1) < 1e-13);
        CHECK(validate_rule(r, 10) < 1e-11);
        for (double rad : {0.5, 0.9, 0.99}) {
            double p = 0;
            for (size_t i = 0; i < r.size(); ++i) {
                const double h = r.half_chord[i];
                const double d2 = (1 - rad) * (1 - rad) + 4 * rad * h * h;
                p += r.weights[i] * (1 - rad * rad) / std::pow(d2, 0.5 * m);
            }
            CHECK(std::abs(p - 1) < 1e-11);
        }
    }
}

TEST_CASE("pairwise summation is order stable") {
    std::vector<double> v(1000);
    for (size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (i + 1);
    CHECK(pairwise_sum(v.data(), v.size()) == pairwise_sum(v.data(), v.size()));
    CHECK(std::abs(pairwise_sum(v.data(), v.size()) - 7.485470860550345) < 1e-12);
}

TEST_CASE("Monte Carlo rule") {
    QuadRule a = monte_carlo_rule(3, 20000, 7), b = monte_carlo_rule(3, 20000, 7);
    CHECK(a.nodes == b.nodes);
    CHECK(std::abs(integrate(a, {2, 0, 0}) - 1.0 / 3) < 0.02);
}
