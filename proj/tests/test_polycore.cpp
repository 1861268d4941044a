#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bosonic/linalg.hpp"
#include "bosonic/polynomial.hpp"
#include "bosonic/serialize.hpp"

#include <cmath>
#include <random>

using namespace bosonic;

namespace {

PolyXU P(const std::string& s, int m = 3) { return parse_expression(s, m); }

PolyXU random_poly(std::mt19937_64& rng, int m, int maxdeg) {
    std::uniform_int_distribution<int> e(0, maxdeg), c(-9, 9), d(1, 7), n(1, 6);
    PolyXU p(m);
    int terms = n(rng);
    for (int t = 0; t < terms; ++t) {
        MultiIndex a(m), b(m);
        for (int i = 0; i < m; ++i) {
            a[i] = e(rng) / 2;
            b[i] = e(rng) / 2;
        }
        p += poly_monomial(m, a, b, ScaledRational(c(rng), d(rng)));
    }
    return p;
}

}  // namespace

TEST_CASE("scaled rational canonical form") {
    ScaledRational z(mpq_class(0), 3);
    CHECK(z.omega_pow() == 0);
    ScaledRational a(6, 4, 1);
    CHECK(a.value() == mpq_class(3, 2));
    CHECK(a.omega_pow() == 1);
    CHECK((a * ScaledRational(1, 1, -1)).omega_pow() == 0);
    CHECK_THROWS_AS(a + ScaledRational(1, 1, 2), std::domain_error);
    CHECK((a + ScaledRational()) == a);
    CHECK_THROWS(ScaledRational::parse("1", "0", 0));
}

TEST_CASE("ring operations") {
    CHECK((P("x1*u1") + P("-x1*u1")).is_zero());
    CHECK(P("x1") * P("u1") == P("x1*u1"));
    CHECK(P("x1^2") * ScaledRational(3, 2) == P("3/2*x1^2"));
    CHECK_THROWS_AS(P("x1") + parse_expression("x1", 4), std::invalid_argument);
    CHECK_THROWS_AS(P("x1") + P("w*x1"), std::domain_error);
}

TEST_CASE("partial derivatives") {
    CHECK(partial_derivative(P("x1^2*u1"), X, 1) == P("2*x1*u1"));
    CHECK(partial_derivative(P("x1^2*u1"), U, 2).is_zero());
    CHECK(partial_derivative(dot_xu(3), U, 1) == P("x1"));
    CHECK_THROWS_AS(partial_derivative(P("x1"), X, 4), std::out_of_range);
    CHECK_THROWS_AS(partial_derivative(P("x1"), X, 0), std::out_of_range);
}

TEST_CASE("derivatives commute") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 30; ++t) {
        PolyXU p = random_poly(rng, 3, 6);
        for (int bi = 0; bi < 2; ++bi)
            for (int bj = 0; bj < 2; ++bj)
                for (int i = 1; i <= 3; ++i)
                    for (int j = 1; j <= 3; ++j) {
                        Block a = static_cast<Block>(bi), b = static_cast<Block>(bj);
                        CHECK(partial_derivative(partial_derivative(p, a, i), b, j) ==
                              partial_derivative(partial_derivative(p, b, j), a, i));
                    }
    }
}

TEST_CASE("homogeneous parts") {
    CHECK(homogeneous_part(P("x1^2 + x1"), X, 2) == P("x1^2"));
    CHECK(homogeneous_part(P("x1^2*u1"), U, 1) == P("x1^2*u1"));
    CHECK(homogeneous_part(P("|x|^2*u1 + u1"), X, 0) == P("u1"));
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        PolyXU p = random_poly(rng, 4, 5);
        for (Block b : {X, U}) {
            PolyXU sum(4);
            for (int d = 0; d <= std::max(p.degree(b), 0); ++d) sum += homogeneous_part(p, b, d);
            CHECK(sum == p);
        }
    }
}

TEST_CASE("evaluation") {
    std::vector<mpq_class> e1{1, 0, 0}, two{2, 0, 0}, half{mpq_class(1, 2), mpq_class(1, 2), 0};
    CHECK(evaluate(P("x1*u1"), e1, two) == ScaledRational(2));
    CHECK(evaluate(norm_sq(3, X), half, e1) == ScaledRational(1, 2));
    PolyXU c = poly_constant(3, ScaledRational(1, 3, 2));
    double v = evaluate(c, std::vector<double>{0, 0, 0}, std::vector<double>{0, 0, 0});
    CHECK(v == doctest::Approx(16 * M_PI * M_PI / 3).epsilon(1e-14));
    CHECK(std::abs(v - 52.6379) < 1e-4);
}

TEST_CASE("numeric evaluation matches exact") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        PolyXU p = random_poly(rng, 3, 6);
        NumericPolyXU np(p);
        std::vector<double> x{0.3, -0.2, 0.5}, u{-0.7, 0.1, 0.4};
        double a = np({x.data(), u.data()});
        double b = evaluate(p, x, u);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("reflections") {
    std::vector<mpq_class> e1{1, 0, 0};
    CHECK(reflect_u(P("u1"), e1) == P("-u1"));
    std::vector<mpq_class> a{1, 1, 0};
    CHECK(reflect_u(norm_sq(3, U), a) == norm_sq(3, U));
    CHECK(reflect_u(reflect_u(P("u1*u2"), a), a) == P("u1*u2"));
    CHECK_THROWS_AS(reflect_u(P("u1"), std::vector<mpq_class>{0, 0, 0}), std::invalid_argument);

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> c(-4, 4), d(1, 3);
    for (int t = 0; t < 15; ++t) {
        PolyXU p = random_poly(rng, 3, 6);
        std::vector<mpq_class> dir(3);
        do {
            for (auto& q : dir) q = mpq_class(c(rng), d(rng));
        } while (sgn(dir[0]) == 0 && sgn(dir[1]) == 0 && sgn(dir[2]) == 0);
        for (auto& q : dir) q.canonicalize();
        PolyXU r = reflect_u(p, dir);
        CHECK(reflect_u(r, dir) == p);
        CHECK(r.degree(U) == p.degree(U));
        CHECK(reflect_u(norm_sq(3, U) * p, dir) == norm_sq(3, U) * r);
    }
}

TEST_CASE("json round trip") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 25; ++t) {
        PolyXU p = random_poly(rng, 3, 6) * ScaledRational(1, 1, t % 3 - 1);
        CHECK(poly_from_json(to_json(p)) == p);
        CHECK(to_json(p).dump() == to_json(poly_from_json(to_json(p))).dump());
    }
    auto j = json::parse(R"({"m":3,"terms":[{"x":[2,0,0],"u":[0,1,0],"num":"1","den":"1","omega":0}]})");
    CHECK(poly_from_json(j) == P("x1^2*u2"));
    CHECK_THROWS(poly_from_json(json::parse(R"({"m":3,"terms":[{"x":[2,0],"u":[0,1,0]}]})")));
}

TEST_CASE("expression round trip") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 40; ++t) {
        PolyXU p = random_poly(rng, 4, 6) * ScaledRational(1, 1, t % 5 - 2);
        CHECK(parse_expression(to_expression(p), 4) == p);
    }
    CHECK(to_expression(PolyXU(3)) == "0");
    CHECK(parse_expression("0", 3).is_zero());
    CHECK(P("|x|^2*u1") == P("x1^2*u1 + x2^2*u1 + x3^2*u1"));
    CHECK(P("<x,u>^2") == dot_xu(3) * dot_xu(3));
    CHECK(P("(x1 + u2)^2") == P("x1^2 + 2*x1*u2 + u2^2"));
    CHECK(P("3*w^-2") == poly_constant(3, ScaledRational(3, 1, -2)));
    CHECK(P("|x|^2u1") == P("|x|^2*u1"));
    CHECK(load_poly("|x|²u₁", 3) == P("|x|^2*u1"));
    CHECK(load_poly("<|x|^2*u1>", 3) == P("|x|^2*u1"));
    CHECK_THROWS(P("x4"));
    CHECK_THROWS(P("|x|^3"));
    CHECK_THROWS(P("x1 +"));
    CHECK_THROWS(P("x1^-1"));
}

TEST_CASE("exact linear algebra") {
    QMatrix a{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
    CHECK(rank(a, 3) == 2);
    auto ns = nullspace(a, 3);
    REQUIRE(ns.size() == 1);
    auto z = mat_vec(a, ns[0]);
    for (const auto& q : z) CHECK(sgn(q) == 0);

    QMatrix b{{2, 1}, {1, mpq_class(1, 3)}};
    auto inv = inverse(b);
    CHECK(inv[0][0] == -1);
    CHECK(inv[0][1] == 3);
    CHECK(inv[1][1] == -6);
    CHECK_THROWS_AS(inverse(QMatrix{{1, 2}, {2, 4}}), std::domain_error);

    CHECK(leading_minors_positive(QMatrix{{2, 1}, {1, 2}}));
    CHECK_FALSE(leading_minors_positive(QMatrix{{1, 2}, {2, 1}}));

    std::mt19937_64 rng(19);
    std::uniform_int_distribution<int> c(-5, 5), d(1, 4);
    for (int t = 0; t < 10; ++t) {
        const int n = 6;
        QMatrix m(n, QVector(n));
        for (auto& row : m)
            for (auto& q : row) {
                q = mpq_class(c(rng), d(rng));
                q.canonicalize();
            }
        if (rank(m, n) < n) continue;
        auto mi = inverse(m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                mpq_class s = 0;
                for (int k = 0; k < n; ++k) s += m[i][k] * mi[k][j];
                CHECK(s == (i == j ? 1 : 0));
            }
    }
}
