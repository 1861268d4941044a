#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bosonic/kernels.hpp"

#include <random>

using namespace bosonic;

namespace {

PolyXU P(const std::string& s, int m = 3) { return parse_expression(s, m); }

Poly4 uv_dot(int m, const ScaledRational& c) {
    Poly4 p(m);
    for (int i = 0; i < m; ++i) {
        Poly4::Key key(4 * m, 0);
        key[U4 * m + i] = 1;
        key[V4 * m + i] = 1;
        p.add_term(key, c);
    }
    return p;
}

}  // namespace

TEST_CASE("moments") {
    CHECK(moment({2, 0, 0}, 3, Domain::Sphere) == ScaledRational(1, 3, 1));
    CHECK(moment({4, 0, 0}, 3, Domain::Sphere) == ScaledRational(1, 5, 1));
    CHECK(moment({1, 2, 0}, 3, Domain::Sphere).is_zero());
    CHECK(moment({0, 0, 0}, 3, Domain::Ball) == ScaledRational(1, 3, 1));
    CHECK(moment({2, 0, 0}, 3, Domain::Ball) == ScaledRational(1, 15, 1));
}

TEST_CASE("inner products") {
    CHECK(inner_ss(P("u1"), P("u1")) == ScaledRational(1, 3, 2));
    CHECK(inner_ss(P("u1"), P("u2")).is_zero());
    CHECK(inner_ss(P("x1*u1"), P("x1*u1")) == ScaledRational(1, 9, 2));
    CHECK(inner_bb(P("1"), P("1")) == ScaledRational(1, 9, 2));
    CHECK(inner_bb(P("u1"), P("u1")) == ScaledRational(1, 45, 2));
    CHECK(inner_bb(P("x1"), P("u1")).is_zero());
    PolyXU f = P("x1^2*u1 + 2*x2*u3 - |x|^2*u1"), g = P("x1*u2 + 3*x1^2*u1");
    CHECK(inner_ss(f, g) == inner_ss(g, f));
}

TEST_CASE("Gram matrices") {
    for (int k = 0; k <= 2; ++k)
        for (int l = 0; l <= 3; ++l) {
            OperatorParams prm(3, k);
            auto b = bl_basis_shared(prm, l);
            for (auto tag : {InnerTag::SS, InnerTag::BB}) {
                Gram g = gram(b, tag);
                CHECK(g.symmetric());
                CHECK(g.positive_definite());
                for (size_t i = 0; i < b->dim(); i += 3)
                    for (size_t j = 0; j < b->dim(); j += 2)
                        CHECK(g.entries[i][j] == inner(b->vectors[i], b->vectors[j],
                                                       tag == InnerTag::SS ? Domain::Sphere : Domain::Ball));
            }
        }
}

TEST_CASE("reproducing kernel examples") {
    auto j00 = jlk_kernel(OperatorParams(3, 0), 0);
    CHECK(j00->poly() == Poly4::constant(3, ScaledRational(1, 1, -2)));
    auto j10 = jlk_kernel(OperatorParams(3, 1), 0);
    CHECK(j10->poly() == uv_dot(3, ScaledRational(3, 1, -2)));
}

TEST_CASE("reproducing property and structure") {
    for (int m = 3; m <= 4; ++m)
        for (int k = 0; k <= 2; ++k)
            for (int l = 0; l <= 2; ++l) {
                OperatorParams prm(m, k);
                auto J = jlk_kernel(prm, l);
                auto b = bl_basis_shared(prm, l);
                for (const auto& f : b->vectors) CHECK(J->contract(f, Domain::Sphere) == f);
                CHECK(J->symmetric());
                CHECK(J->trace() == ScaledRational(static_cast<long>(b->dim())));
                for (const auto& [key, c] : J->poly().terms()) CHECK(c.omega_pow() == -2);
            }
}

TEST_CASE("signed permutation invariance") {
    const int m = 3;
    std::vector<std::vector<mpq_class>> T{{0, -1, 0}, {0, 0, 1}, {1, 0, 0}};
    std::vector<std::vector<mpq_class>> Tinv(3, std::vector<mpq_class>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) Tinv[i][j] = T[j][i];
    for (int k = 0; k <= 2; ++k)
        for (int l = 0; l <= 2; ++l) {
            const Poly4& J = jlk_kernel(OperatorParams(m, k), l)->poly();
            Poly4 left = J.linear_substitute(Zeta, T).linear_substitute(U4, T);
            Poly4 right = J.linear_substitute(X4, Tinv).linear_substitute(V4, Tinv);
            CHECK(left == right);
        }
}

TEST_CASE("orthogonality across harmonic degree and parity") {
    const int m = 3;
    int checks = 0;
    for (int k1 = 0; k1 <= 2; ++k1)
        for (int k2 = 0; k2 <= 2; ++k2)
            for (int s = 0; s <= 3; ++s)
                for (int t = 0; t <= 3; ++t) {
                    if (k1 == k2 && (s - t) % 2 == 0) continue;
                    for (const auto& f : bl_basis_shared(OperatorParams(m, k1), s)->vectors)
                        for (const auto& g : bl_basis_shared(OperatorParams(m, k2), t)->vectors) {
                            CHECK(inner_ss(f, g).is_zero());
                            ++checks;
                        }
                }
    CHECK(checks > 500);
    // classical case: harmonics of different degree
    for (int s = 0; s <= 3; ++s)
        for (int t = s + 2; t <= 4; t += 2)
            for (const auto& f : bl_basis_shared(OperatorParams(4, 0), s)->vectors)
                for (const auto& g : bl_basis_shared(OperatorParams(4, 0), t)->vectors) CHECK(inner_ss(f, g).is_zero());
}

TEST_CASE("null spaces of equal parity are not orthogonal for k >= 1") {
    OperatorParams p31(3, 1);
    PolyXU f2 = P("(x1^2 + 1/5*|x|^2)*u1"), f0 = P("u1");
    CHECK(apply_Dk(f2, p31).is_zero());
    CHECK(inner_ss(f2, f0) == ScaledRational(8, 45, 2));
    CHECK_FALSE(inner_ss(dot_xu(4), norm_sq(4, X) * dot_xu(4)).is_zero());
}

TEST_CASE("projection onto null spaces") {
    OperatorParams p31(3, 1);
    PolyXU f = P("x1^2*u1");
    CHECK(project_Bl(f, p31, 2).poly ==
          P("14/15*x1^2*u1 + 1/15*x2^2*u1 + 1/15*x3^2*u1 - 2/15*x1*x2*u2 - 2/15*x1*x3*u3"));
    CHECK(project_Bl(f, p31, 0).poly == P("1/3*u1"));
    CHECK(project_Bl(f, p31, 1).poly.is_zero());
    std::mt19937_64 rng(41);
    for (int k = 0; k <= 2; ++k)
        for (int s = 0; s <= 3; ++s) {
            OperatorParams prm(3, k);
            PolyXU g = random_plhk(prm, s, rng);
            for (int l = 0; l <= s; ++l) {
                PolyXU pr = project_Bl(g, prm, l).poly;
                CHECK((pr.is_zero() || pr.is_homogeneous(X, l)));
                CHECK(apply_Dk(pr, prm).is_zero());
                // residual is orthogonal to B_l
                for (const auto& b : bl_basis_shared(prm, l)->vectors) CHECK(inner_ss(g - pr, b).is_zero());
                if ((s - l) % 2 != 0) CHECK(pr.is_zero());
            }
            // for k = 0 the projections are the Fischer components
            if (k == 0) {
                auto fd = fischer_decompose(g, prm);
                for (const auto& [j, fj] : fd.components) CHECK(project_Bl(g, prm, j).poly == fj);
            }
        }
}

TEST_CASE("Bergman projection examples") {
    OperatorParams p31(3, 1);
    CHECK(bergman_project(P("u1"), p31).route_a == P("u1"));
    CHECK(bergman_project(P("x1*x2*u3"), p31).route_a == P("x1*x2*u3"));
    auto r = bergman_routes(P("x1^2*u1"), p31);
    CHECK(r.route_b == P("(x1^2 + 1/5*|x|^2)*u1 - 3/25*u1"));
    CHECK(r.route_a == P("1/5*u1 + 14/15*x1^2*u1 + 1/15*x2^2*u1 + 1/15*x3^2*u1 - 2/15*x1*x2*u2 - 2/15*x1*x3*u3"));
    CHECK(bergman_routes(P("|x|^2*u1"), p31).route_b == P("3/5*u1"));
    CHECK_THROWS_AS(bergman_project(P("|x|^2*u1"), p31), std::logic_error);
    CHECK_THROWS_AS(bergman_project(P("x1^2*u1 + u1"), p31), std::invalid_argument);
}

TEST_CASE("Bergman routes") {
    std::mt19937_64 rng(43);
    for (int k = 0; k <= 2; ++k)
        for (int s = 0; s <= 3; ++s) {
            OperatorParams prm(3, k);
            for (int t = 0; t < 5; ++t) {
                auto r = bergman_routes(random_plhk(prm, s, rng), prm);
                // single Fischer component or classical harmonics: the routes coincide
                if (k == 0 || s <= 1) CHECK(r.agree());
                CHECK(apply_Dk(r.route_a, prm).is_zero());
                CHECK(apply_Dk(r.route_b, prm).is_zero());
            }
        }
}

TEST_CASE("truncated Bergman kernel") {
    auto b0 = bergman_kernel_truncated(OperatorParams(3, 0), 0);
    CHECK(b0.poly() == Poly4::constant(3, ScaledRational(9, 1, -2)));
    OperatorParams p31(3, 1);
    auto b1 = bergman_kernel_truncated(p31, 1);
    for (int s = 0; s <= 1; ++s)
        for (const auto& f : bl_basis_shared(p31, s)->vectors) CHECK(b1.contract(f, Domain::Ball) == f);
    auto b3 = bergman_kernel_truncated(p31, 3);
    Poly4 tail = jlk_kernel(p31, 2)->poly() * ScaledRational(7 * 5) + jlk_kernel(p31, 3)->poly() * ScaledRational(9 * 5);
    CHECK(b3.poly() - b1.poly() == tail);
    // B_0 and B_2 overlap, so the degree 2 term does not annihilate u1
    CHECK(b3.contract(P("u1"), Domain::Ball) != P("u1"));
    CHECK(bergman_kernel_truncated(OperatorParams(3, 0), 3).contract(P("1"), Domain::Ball) == P("1"));
}

TEST_CASE("kernel JSON round trip") {
    auto J = jlk_kernel(OperatorParams(3, 1), 1);
    Kernel4 back = kernel4_from_json(json::parse(to_json(*J).dump()));
    CHECK(back.poly() == J->poly());
    CHECK(back.l() == 1);
    CHECK(back.kind() == Kernel4::Kind::Reproducing);
}
