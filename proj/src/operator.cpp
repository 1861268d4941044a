#include "bosonic/operator.hpp"

#include "bosonic/cache.hpp"

#include <map>
#include <stdexcept>

namespace bosonic {

OperatorParams::OperatorParams(int m_, int k_) : m(m_), k(k_) {
    if (m < 3) throw std::invalid_argument("m < 3 is not supported");
    if (k < 0) throw std::invalid_argument("k must be non-negative");
}

bool is_hk_valued(const PolyXU& p, int k) {
    return p.is_homogeneous(U, k) && laplacian(p, U).is_zero();
}

void require_hk_valued(const PolyXU& p, int k) {
    if (!p.is_homogeneous(U, k)) throw std::invalid_argument("polynomial is not u-homogeneous of degree k");
    if (!laplacian(p, U).is_zero()) throw std::invalid_argument("polynomial is not harmonic in u");
}

HkValued HkValued::make(PolyXU p, int k) {
    require_hk_valued(p, k);
    return HkValued{std::move(p), k};
}

namespace {

// sum_j d/du_j d/dx_j
PolyXU mixed_divergence(const PolyXU& f) {
    PolyXU r(f.dim());
    for (int j = 0; j < f.dim(); ++j) r += f.derivative(U, j).derivative(X, j);
    return r;
}

PolyXU unit_shift(const PolyXU& p, Block b, int i) {
    PolyXU::Key k(2 * p.dim(), 0);
    k[b * p.dim() + i] = 1;
    return p.shift(k);
}

PolyXU apply_unchecked(const PolyXU& f, const OperatorParams& prm) {
    const int m = prm.m, k = prm.k;
    PolyXU lap = laplacian(f, X);
    if (k == 0) return lap;
    PolyXU a = mixed_divergence(f);
    PolyXU b(m);
    for (int i = 0; i < m; ++i) b += unit_shift(a.derivative(X, i), U, i);
    PolyXU c = mixed_divergence(a);
    PolyXU e = norm_sq(m, U) * c;
    const long d1 = m + 2 * k - 2, d2 = m + 2 * k - 4;
    return lap - b * ScaledRational(4, d1) + e * ScaledRational(4, d1 * d2);
}

// Coordinates of H_k-valued polynomials: (x-exponent, H_k basis index).
struct Coordinates {
    int m;
    std::shared_ptr<const HkData> hk;
    std::map<MultiIndex, int> lead_index;

    Coordinates(int m_, int k) : m(m_), hk(hk_data(m_, k)) {
        for (size_t j = 0; j < hk->lead.size(); ++j) lead_index[hk->lead[j]] = static_cast<int>(j);
    }

    unsigned parity(const MultiIndex& alpha, int j) const {
        return parity_mask(alpha.data(), m) ^ hk->parity[j];
    }

    PolyXU element(const MultiIndex& alpha, int j) const {
        return hk->basis.vectors[j].shift(make_key(alpha, MultiIndex(m, 0)));
    }

    // Only valid for H_k-valued input.
    std::map<std::pair<MultiIndex, int>, mpq_class> extract(const PolyXU& p) const {
        std::map<std::pair<MultiIndex, int>, mpq_class> out;
        for (const auto& [key, c] : p.terms()) {
            auto it = lead_index.find(u_part(key, m));
            if (it == lead_index.end()) continue;
            if (c.omega_pow() != 0) throw std::invalid_argument("coordinate extraction needs grade 0");
            out[{x_part(key, m), it->second}] = c.value();
        }
        return out;
    }
};

}  // namespace

PolyXU apply_Dk(const PolyXU& f, const OperatorParams& params) {
    if (f.dim() != params.m) throw std::invalid_argument("dimension mismatch");
    if (!f.is_zero()) require_hk_valued(f, params.k);
    PolyXU r = apply_unchecked(f, params);
    if (!laplacian(r, U).is_zero()) throw std::logic_error("operator output left H_k");
    return r;
}

HkValued apply_Dk(const HkValued& f, const OperatorParams& params) {
    if (f.k != params.k) throw std::invalid_argument("spin degree mismatch");
    return HkValued{apply_Dk(f.poly, params), f.k};
}

SubspaceBasis plhk_basis(const OperatorParams& params, int l) {
    Coordinates co(params.m, params.k);
    SubspaceBasis b;
    b.m = params.m;
    b.k = params.k;
    b.l = l;
    b.tag = SpaceTag::PlHk;
    for (const auto& alpha : monomials_of_degree(params.m, l))
        for (size_t j = 0; j < co.hk->lead.size(); ++j) b.vectors.push_back(co.element(alpha, static_cast<int>(j)));
    return b;
}

std::shared_ptr<const SubspaceBasis> bl_basis_shared(const OperatorParams& params, int l) {
    if (l < 0) throw std::invalid_argument("degree must be non-negative");
    static Memo<std::tuple<int, int, int>, SubspaceBasis> memo;
    return memo.get({params.m, params.k, l}, [&] {
        const int m = params.m;
        Coordinates co(m, params.k);
        const int dk = static_cast<int>(co.hk->lead.size());
        const auto top = monomials_of_degree(m, l);
        const auto low = monomials_of_degree(m, l - 2);

        std::map<unsigned, std::vector<std::pair<MultiIndex, int>>> cols, rows;
        for (const auto& a : top)
            for (int j = 0; j < dk; ++j) cols[co.parity(a, j)].push_back({a, j});
        for (const auto& a : low)
            for (int j = 0; j < dk; ++j) rows[co.parity(a, j)].push_back({a, j});

        SubspaceBasis b;
        b.m = m;
        b.k = params.k;
        b.l = l;
        b.tag = SpaceTag::Bl;
        for (const auto& [mask, cs] : cols) {
            const auto& rs = rows[mask];
            std::map<std::pair<MultiIndex, int>, int> row_of;
            for (size_t r = 0; r < rs.size(); ++r) row_of[rs[r]] = static_cast<int>(r);
            QMatrix a(rs.size(), QVector(cs.size()));
            std::vector<PolyXU> elems;
            for (size_t c = 0; c < cs.size(); ++c) {
                elems.push_back(co.element(cs[c].first, cs[c].second));
                for (const auto& [coord, v] : co.extract(apply_unchecked(elems.back(), params)))
                    a[row_of.at(coord)][c] = v;
            }
            for (const auto& v : nullspace(a, static_cast<int>(cs.size()))) {
                PolyXU p(m);
                for (size_t c = 0; c < cs.size(); ++c)
                    if (sgn(v[c]) != 0) p += elems[c] * ScaledRational(v[c]);
                b.vectors.push_back(std::move(p));
            }
        }
        return b;
    });
}

SubspaceBasis bl_basis(const OperatorParams& params, int l) { return *bl_basis_shared(params, l); }

DirichletSolver::DirichletSolver(const OperatorParams& params, int l) : params_(params), l_(l) {
    if (l < 2) return;
    const int m = params.m;
    Coordinates co(m, params.k);
    const int dk = static_cast<int>(co.hk->lead.size());
    std::map<unsigned, std::vector<std::pair<MultiIndex, int>>> classes;
    for (int d = 0; d <= l - 2; ++d)
        for (const auto& a : monomials_of_degree(m, d))
            for (int j = 0; j < dk; ++j) classes[co.parity(a, j)].push_back({a, j});
    const PolyXU damp = poly_constant(m, ScaledRational(1)) - norm_sq(m, X);
    for (auto& [mask, coords] : classes) {
        std::map<std::pair<MultiIndex, int>, int> index;
        for (size_t i = 0; i < coords.size(); ++i) index[coords[i]] = static_cast<int>(i);
        QMatrix t(coords.size(), QVector(coords.size()));
        for (size_t c = 0; c < coords.size(); ++c) {
            PolyXU img = apply_unchecked(damp * co.element(coords[c].first, coords[c].second), params);
            for (const auto& [coord, v] : co.extract(img)) t[index.at(coord)][c] = v;
        }
        const int n = static_cast<int>(coords.size());
        QMatrix aug(n, QVector(2 * n));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) aug[i][j] = t[i][j];
            aug[i][n + i] = 1;
        }
        Echelon e = row_reduce(aug, 2 * n);
        ClassBlock blk;
        for (size_t i = 0; i < e.pivots.size(); ++i) {
            QVector right(e.rref[i].begin() + n, e.rref[i].end());
            if (e.pivots[i] < n) {
                blk.pivots.push_back(e.pivots[i]);
                blk.solve_rows.push_back(std::move(right));
            } else {
                blk.constraints.push_back(std::move(right));
            }
        }
        kernel_dim_ += n - static_cast<int>(blk.pivots.size());
        blk.coords = std::move(coords);
        blocks_.push_back(std::move(blk));
    }
}

DirichletResult DirichletSolver::solve(const PolyXU& f) const {
    const int m = params_.m;
    if (f.dim() != m) throw std::invalid_argument("dimension mismatch");
    if (f.degree(X) > l_) throw std::invalid_argument("x-degree exceeds solver degree");
    if (!f.is_zero()) require_hk_valued(f, params_.k);
    DirichletResult res{PolyXU(m), f};
    if (l_ < 2 || f.is_zero()) return res;

    Coordinates co(m, params_.k);
    PolyXU rhs_poly = -apply_unchecked(f, params_);
    auto rhs = co.extract(rhs_poly);
    size_t used = 0;
    for (const auto& blk : blocks_) {
        QVector r(blk.coords.size());
        bool any = false;
        for (size_t i = 0; i < blk.coords.size(); ++i) {
            auto it = rhs.find(blk.coords[i]);
            if (it == rhs.end()) continue;
            r[i] = it->second;
            any = true;
            ++used;
        }
        if (!any) continue;
        for (const auto& v : mat_vec(blk.constraints, r))
            if (sgn(v) != 0) throw std::domain_error("no polynomial Dirichlet solution for this data");
        QVector g = mat_vec(blk.solve_rows, r);
        for (size_t i = 0; i < g.size(); ++i) {
            if (sgn(g[i]) == 0) continue;
            const auto& [alpha, j] = blk.coords[blk.pivots[i]];
            res.g += co.element(alpha, j) * ScaledRational(g[i]);
        }
    }
    if (used != rhs.size()) throw std::logic_error("right-hand side outside the solver space");
    res.P = (poly_constant(m, ScaledRational(1)) - norm_sq(m, X)) * res.g + f;
    if (!apply_unchecked(res.P, params_).is_zero()) throw std::logic_error("Dirichlet solution is not a null solution");
    return res;
}

std::shared_ptr<const DirichletSolver> dirichlet_solver(const OperatorParams& params, int l) {
    static Memo<std::tuple<int, int, int>, DirichletSolver> memo;
    return memo.get({params.m, params.k, l}, [&] { return DirichletSolver(params, l); });
}

DirichletResult dirichlet_poly(const PolyXU& f, const OperatorParams& params) {
    return dirichlet_solver(params, std::max(f.degree(X), 0))->solve(f);
}

PolyXU FischerDecomposition::component(int j) const {
    for (const auto& [d, p] : components)
        if (d == j) return p;
    throw std::out_of_range("no component of that degree");
}

PolyXU FischerDecomposition::reconstruct() const {
    if (components.empty()) throw std::logic_error("empty decomposition");
    const int m = components.front().second.dim();
    PolyXU r(m);
    const PolyXU r2 = norm_sq(m, X);
    for (const auto& [j, p] : components) {
        PolyXU t = p;
        for (int s = 0; s < (l - j) / 2; ++s) t = t * r2;
        r += t;
    }
    return r;
}

FischerDecomposition fischer_decompose(const PolyXU& f, const OperatorParams& params) {
    if (f.is_zero()) throw std::invalid_argument("zero input has no degree");
    const int l = f.degree(X);
    if (!f.is_homogeneous(X, l)) throw std::invalid_argument("input is not x-homogeneous");
    auto solver = dirichlet_solver(params, l);
    FischerDecomposition out;
    out.l = l;
    out.unique = solver->unique();
    DirichletResult d = solver->solve(f);
    for (int j = l; j >= 0; j -= 2) {
        PolyXU fj = homogeneous_part(d.P, X, j);
        if (!apply_unchecked(fj, params).is_zero()) throw std::logic_error("Fischer component is not a null solution");
        out.components.push_back({j, std::move(fj)});
    }
    for (int j = l - 1; j >= 0; j -= 2)
        if (!homogeneous_part(d.P, X, j).is_zero()) throw std::logic_error("wrong-parity component is nonzero");
    return out;
}

bool check_nonvanishing(const PolyXU& f, const OperatorParams& params) {
    if (f.is_zero()) throw std::invalid_argument("input must be nonzero");
    return !apply_Dk(norm_sq(params.m, X) * f, params).is_zero();
}

PolyXU random_plhk(const OperatorParams& params, int l, std::mt19937_64& rng) {
    Coordinates co(params.m, params.k);
    std::uniform_int_distribution<int> num(-6, 6), den(1, 4), keep(0, 2);
    PolyXU p(params.m);
    for (const auto& alpha : monomials_of_degree(params.m, l))
        for (size_t j = 0; j < co.hk->lead.size(); ++j) {
            if (keep(rng) == 0) continue;
            int n = num(rng), d = den(rng);
            if (n == 0) continue;
            p += co.element(alpha, static_cast<int>(j)) * ScaledRational(n, d);
        }
    if (p.is_zero()) p = co.element(monomials_of_degree(params.m, l).front(), 0);
    return p;
}

}  // namespace bosonic
