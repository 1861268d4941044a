#pragma once

#include "bosonic/moments.hpp"
#include "bosonic/operator.hpp"
#include "bosonic/serialize.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace bosonic {

// Raw integral of x^alpha over the sphere or the ball; omega grade 1.
ScaledRational moment(const MultiIndex& alpha, int m, Domain domain);

// Double integral of f*g over S x S (resp. B x B) in both blocks; grade 2.
ScaledRational inner(const PolyXU& f, const PolyXU& g, Domain domain);
ScaledRational inner_ss(const PolyXU& f, const PolyXU& g);
ScaledRational inner_bb(const PolyXU& f, const PolyXU& g);

enum class InnerTag { SS, BB };

struct Gram {
    std::shared_ptr<const SubspaceBasis> basis;
    InnerTag tag = InnerTag::SS;
    std::vector<std::vector<ScaledRational>> entries;

    bool symmetric() const;
    bool positive_definite() const;
};

Gram gram(std::shared_ptr<const SubspaceBasis> basis, InnerTag tag);

enum Block4 : int { Zeta = 0, X4 = 1, U4 = 2, V4 = 3 };
using Poly4 = Polynomial<4>;

/**
 * Kernel in the blocks (zeta, x, u, v). Integration always runs over
 * (zeta, u) and leaves a polynomial in (x, v).
 */
class Kernel4 {
public:
    enum class Kind { Reproducing, Bergman, Custom };

    Kernel4() = default;
    Kernel4(int m, int k, int l, Kind kind, Poly4 poly);

    int m() const { return m_; }
    int k() const { return k_; }
    int l() const { return l_; }
    Kind kind() const { return kind_; }
    const Poly4& poly() const { return poly_; }

    PolyXU contract(const PolyXU& f, Domain domain) const;
    // Integral of K(x, x, u, u) over S x S.
    ScaledRational trace() const;
    // K(zeta, x, u, v) == K(x, zeta, v, u)
    bool symmetric() const;
    double evaluate(const double* zeta, const double* x, const double* u, const double* v) const;

    Kernel4 operator+(const Kernel4& o) const;
    Kernel4 operator*(const ScaledRational& s) const;

private:
    struct Group {
        PolyXU::Key zu;  // exponents of (zeta, u)
        unsigned xmask, umask;
        PolyXU xv;
    };

    int m_ = 0, k_ = 0, l_ = 0;
    Kind kind_ = Kind::Custom;
    Poly4 poly_;
    std::vector<Group> groups_;
    std::shared_ptr<const NumericPoly<4>> numeric_;
};

std::string kind_name(Kernel4::Kind kind);
json to_json(const Kernel4& k);
Kernel4 kernel4_from_json(const json& j);

std::shared_ptr<const Kernel4> jlk_kernel(const OperatorParams& params, int l);

HkValued project_Bl(const PolyXU& f, const OperatorParams& params, int l);

struct BergmanRoutes {
    PolyXU route_a;  // series of reproducing kernels against ball moments
    PolyXU route_b;  // weighted Fischer components
    bool agree() const { return route_a == route_b; }
};

// Both routes, without comparing them.
BergmanRoutes bergman_routes(const PolyXU& f, const OperatorParams& params);
// Throws std::logic_error when the routes disagree.
BergmanRoutes bergman_project(const PolyXU& f, const OperatorParams& params);

Kernel4 bergman_kernel_truncated(const OperatorParams& params, int L);

}  // namespace bosonic
