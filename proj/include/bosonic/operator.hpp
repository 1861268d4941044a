#pragma once

#include "bosonic/harmonic.hpp"

#include <memory>
#include <random>
#include <utility>
#include <vector>

namespace bosonic {

struct OperatorParams {
    int m;
    int k;

    OperatorParams(int m_, int k_);
};

// A polynomial whose u-dependence lies in H_k.
struct HkValued {
    PolyXU poly;
    int k;

    static HkValued make(PolyXU p, int k);
};

bool is_hk_valued(const PolyXU& p, int k);
void require_hk_valued(const PolyXU& p, int k);

PolyXU apply_Dk(const PolyXU& f, const OperatorParams& params);
HkValued apply_Dk(const HkValued& f, const OperatorParams& params);

SubspaceBasis bl_basis(const OperatorParams& params, int l);
std::shared_ptr<const SubspaceBasis> bl_basis_shared(const OperatorParams& params, int l);

// Basis of P_l (x) H_k given by products x^alpha * phi_j.
SubspaceBasis plhk_basis(const OperatorParams& params, int l);

struct DirichletResult {
    PolyXU g;
    PolyXU P;
};

/**
 * Solves D_k((1-|x|^2) g) = -D_k f for g of x-degree at most l-2. The
 * operator T: g -> D_k((1-|x|^2) g) is assembled and row reduced once per
 * (m, k, l), blockwise over the parity classes it preserves.
 *
 * When T is singular (m = 4, k >= 1, l >= k + 2) a consistent system is
 * solved with all free coordinates set to zero and unique() is false; an
 * inconsistent one throws std::domain_error.
 */
class DirichletSolver {
public:
    DirichletSolver(const OperatorParams& params, int l);

    DirichletResult solve(const PolyXU& f) const;
    int degree() const { return l_; }
    bool unique() const { return kernel_dim_ == 0; }
    int kernel_dim() const { return kernel_dim_; }

private:
    struct ClassBlock {
        std::vector<std::pair<MultiIndex, int>> coords;
        std::vector<int> pivots;  // pivot coordinate of each solve row
        QMatrix solve_rows;       // g[pivots[i]] = solve_rows[i] . rhs
        QMatrix constraints;      // rhs must be orthogonal to these
    };

    OperatorParams params_;
    int l_;
    int kernel_dim_ = 0;
    std::vector<ClassBlock> blocks_;
};

std::shared_ptr<const DirichletSolver> dirichlet_solver(const OperatorParams& params, int l);

DirichletResult dirichlet_poly(const PolyXU& f, const OperatorParams& params);

struct FischerDecomposition {
    int l = 0;
    bool unique = true;  // false when the Dirichlet operator is singular
    std::vector<std::pair<int, PolyXU>> components;  // (j, f_j) for j = l, l-2, ...

    PolyXU component(int j) const;
    PolyXU reconstruct() const;
};

FischerDecomposition fischer_decompose(const PolyXU& f, const OperatorParams& params);

bool check_nonvanishing(const PolyXU& f, const OperatorParams& params);

// Random element of P_l (x) H_k with small rational coefficients.
PolyXU random_plhk(const OperatorParams& params, int l, std::mt19937_64& rng);

}  // namespace bosonic
