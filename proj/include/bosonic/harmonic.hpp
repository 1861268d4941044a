#pragma once

#include "bosonic/linalg.hpp"
#include "bosonic/polynomial.hpp"

#include <memory>
#include <vector>

namespace bosonic {

enum class SpaceTag { Hk, PlHk, Bl };

struct SubspaceBasis {
    int m = 0;
    int k = 0;
    int l = -1;  // -1 for pure H_k bases
    SpaceTag tag = SpaceTag::Hk;
    std::vector<PolyXU> vectors;

    size_t dim() const { return vectors.size(); }
};

mpz_class binomial(long n, long k);

// dim H_k in m variables.
long dim_hk(int m, int k);

PolyXU laplacian(const PolyXU& p, Block b);

// Harmonic component h of a u-homogeneous p = h + |u|^2 q.
PolyXU harmonic_project_u(const PolyXU& p, int k);

SubspaceBasis hk_basis(int m, int k);

/**
 * H_k basis with coordinate data. Each vector has coefficient 1 on its
 * lead monomial and 0 on every other lead, so the coordinates of an
 * element of H_k are its coefficients on the lead monomials.
 */
struct HkData {
    SubspaceBasis basis;
    std::vector<MultiIndex> lead;
    std::vector<unsigned> parity;  // bit i set when u_i appears to an odd power
};

std::shared_ptr<const HkData> hk_data(int m, int k);

unsigned parity_mask(const int* exps, int m);

// Zonal kernel in blocks (u, v), reproducing against normalized measure.
PolyXU zonal_kernel(int m, int k);       // Gegenbauer route
PolyXU zonal_kernel_gram(int m, int k);  // Gram-inverse route

// Coefficients of the Gegenbauer polynomial C_n^lambda, lowest degree first.
std::vector<mpq_class> gegenbauer(int n, const mpq_class& lambda);

}  // namespace bosonic
