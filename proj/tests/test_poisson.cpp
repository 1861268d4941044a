#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bosonic/poisson.hpp"

#include <cmath>
#include <random>

using namespace bosonic;

namespace {

std::vector<double> scaled(std::vector<double> p, double r) {
    for (auto& c : p) c *= r;
    return p;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

TEST_CASE("reflection") {
    const double a[3] = {0.3, -1.2, 0.5}, v[3] = {0.1, 0.7, -0.4};
    double w[3], back[3];
    reflect(3, a, v, w);
    reflect(3, a, w, back);
    for (int i = 0; i < 3; ++i) CHECK(back[i] == doctest::Approx(v[i]).epsilon(1e-15));
    CHECK(w[0] * w[0] + w[1] * w[1] + w[2] * w[2] == doctest::Approx(0.66).epsilon(1e-14));
    const double e1[3] = {1, 0, 0};
    reflect(3, e1, e1, w);
    CHECK(w[0] == -1);
}

TEST_CASE("classical Poisson kernel") {
    const double x[3] = {0.6, 0, 0}, z[3] = {1, 0, 0};
    CHECK(classical_poisson(3, x, z) == doctest::Approx(0.64 / 0.064));
    CHECK(classical_poisson_hc(3, 0.6, 0.0) == doctest::Approx(0.64 / 0.064));
}

TEST_CASE("calibration") {
    for (int m = 3; m <= 5; ++m) {
        auto s0 = calibrate_cmk(OperatorParams(m, 0));
        CHECK(std::abs(s0.numeric - 1) < 1e-10);
        CHECK(std::abs(s0.c_half() * omega(m) - 1) < 1e-10);
        for (int k = 0; k <= 2; ++k) {
            auto s = calibrated_spec(OperatorParams(m, k));
            CHECK(s->c_mk == ScaledRational(2 * (m + 2 * k - 2), m - 2, -1));
            CHECK(s->residual < 1e-12);
        }
    }
    CHECK(calibrated_spec(OperatorParams(3, 1))->scale() == doctest::Approx(3.0));
}

TEST_CASE("Poisson integral of x-independent data") {
    OperatorParams p31(3, 1);
    PoissonKernel K(*calibrated_spec(p31));
    PolyXU u1 = parse_expression("u1", 3);
    auto samples = kernel_samples(3, 0.0, 6, 11);
    for (size_t i = 0; i < samples.size(); ++i) {
        auto x = scaled(samples[i].zeta, 0.15 * i);
        const auto& v = samples[i].v;
        CHECK(std::abs(poisson_integral_poly(u1, K, x.data(), v.data()) - v[0]) < 1e-12);
        CHECK(std::abs(poisson_integral_poly(u1, K, x.data(), v.data(), PoissonMethod::Full) - v[0]) < 1e-12);
    }
    PoissonKernel K0(*calibrated_spec(OperatorParams(4, 0)));
    const double x[4] = {0.2, -0.5, 0.1, 0.6}, v[4] = {0, 0, 0, 0};
    CHECK(std::abs(poisson_integral_poly(poly_constant(4, ScaledRational(1)), K0, x, v) - 1) < 1e-12);
    const double out[3] = {1, 0, 0}, vv[3] = {0, 0, 0};
    CHECK_THROWS_AS(poisson_integral_poly(u1, K, out, vv), std::domain_error);
}

TEST_CASE("Poisson integrals match Dirichlet polynomials") {
    std::mt19937_64 rng(7);
    const int cfg[][3] = {{3, 0, 4}, {3, 1, 4}, {3, 2, 3}, {4, 0, 3}, {4, 1, 2}};
    for (const auto& c : cfg) {
        OperatorParams prm(c[0], c[1]);
        PoissonKernel K(*calibrated_spec(prm));
        PolyXU f(c[0]);
        for (int l = 0; l <= c[2]; ++l) f += random_plhk(prm, l, rng);
        NumericPolyXU exact(dirichlet_poly(f, prm).P);
        auto samples = kernel_samples(c[0], 0.0, 20, 3);
        for (size_t i = 0; i < samples.size(); ++i) {
            auto x = scaled(samples[i].zeta, 0.05 + 0.85 * i / 19.0);
            const auto& v = samples[i].v;
            const double got = poisson_integral_poly(f, K, x.data(), v.data());
            CHECK(std::abs(got - exact({x.data(), v.data()})) < 1e-8);
            if (i % 7 == 0)
                CHECK(std::abs(poisson_integral_poly(f, K, x.data(), v.data(), PoissonMethod::Full) - got) < 1e-10);
        }
    }
}

TEST_CASE("singular Dirichlet map at m = 4: Poisson integral differs by a kernel element") {
    std::mt19937_64 rng(5);
    OperatorParams p41(4, 1);
    PoissonKernel K(*calibrated_spec(p41));
    PolyXU f = random_plhk(p41, 3, rng);
    NumericPolyXU exact(dirichlet_poly(f, p41).P);
    auto samples = kernel_samples(4, 0.0, 6, 8);
    std::vector<double> ratios;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double r = 0.2 + 0.1 * i;
        auto x = scaled(samples[i].zeta, r);
        const auto& v = samples[i].v;
        const double diff = poisson_integral_poly(f, K, x.data(), v.data()) - exact({x.data(), v.data()});
        ratios.push_back(diff / ((1 - r * r) * dot(x, v)));
    }
    CHECK(std::abs(ratios[0]) > 1e-3);
    for (double q : ratios) CHECK(q == doctest::Approx(ratios[0]).epsilon(1e-9));
}

TEST_CASE("Poisson series gap") {
    OperatorParams p30(3, 0), p31(3, 1);
    PoissonKernel K0(*calibrated_spec(p30)), K1(*calibrated_spec(p31));
    CHECK(poisson_series_gap(p30, K0, 0, kernel_samples(3, 0.0, 20, 1)) < 1e-15);
    auto s = kernel_samples(3, 0.3, 100, 2);
    double prev = 1;
    for (int L = 1; L <= 8; ++L) {
        const double g = poisson_series_gap(p30, K0, L, s);
        CHECK(g <= prev + 1e-12);
        prev = g;
    }
    CHECK(prev < 1e-5);
    // for k >= 1 the partial sums do not approach the kernel, even at x = 0
    CHECK(poisson_series_gap(p31, K1, 0, kernel_samples(3, 0.0, 20, 1)) > 1e-2);
    CHECK(poisson_series_gap(p31, K1, 6, s) > 1e-2);
}

TEST_CASE("diagonal values of J") {
    const double w2 = omega(3) * omega(3);
    for (int k = 0; k <= 1; ++k)
        for (int l = 0; l <= 2; ++l) {
            OperatorParams prm(3, k);
            const double d = static_cast<double>(bl_basis_shared(prm, l)->dim());
            for (double t : {1.0, 0.3, 0.0}) CHECK(jlk_diagonal(prm, l, t) * w2 == doctest::Approx(d).epsilon(1e-12));
        }
    OperatorParams p32(3, 2);
    CHECK(jlk_diagonal(p32, 2, 1.0) * w2 != doctest::Approx(jlk_diagonal(p32, 2, 0.0) * w2));
}
