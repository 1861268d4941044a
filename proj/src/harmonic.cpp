#include "bosonic/harmonic.hpp"

#include "bosonic/cache.hpp"
#include "bosonic/moments.hpp"

#include <algorithm>
#include <map>

namespace bosonic {

mpz_class binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

long dim_hk(int m, int k) {
    if (k < 0) return 0;
    mpz_class d = binomial(m + k - 1, k) - binomial(m + k - 3, k - 2);
    return d.get_si();
}

unsigned parity_mask(const int* exps, int m) {
    unsigned mask = 0;
    for (int i = 0; i < m; ++i)
        if (exps[i] & 1) mask |= 1u << i;
    return mask;
}

PolyXU laplacian(const PolyXU& p, Block b) {
    PolyXU r(p.dim());
    for (int i = 0; i < p.dim(); ++i) r += p.derivative(b, i).derivative(b, i);
    return r;
}

namespace {

struct RadialSystem {
    std::vector<MultiIndex> monos;  // degree k-2 monomials in u
    std::map<MultiIndex, int> index;
    QMatrix inv;                    // inverse of q -> Delta_u(|u|^2 q)
};

std::shared_ptr<const RadialSystem> radial_system(int m, int k) {
    static Memo<std::pair<int, int>, RadialSystem> memo;
    return memo.get({m, k}, [&] {
        RadialSystem s;
        s.monos = monomials_of_degree(m, k - 2);
        for (size_t i = 0; i < s.monos.size(); ++i) s.index[s.monos[i]] = static_cast<int>(i);
        const size_t n = s.monos.size();
        QMatrix a(n, QVector(n));
        const MultiIndex zero(m, 0);
        const PolyXU r2 = norm_sq(m, U);
        for (size_t j = 0; j < n; ++j) {
            PolyXU img = laplacian(r2 * poly_monomial(m, zero, s.monos[j]), U);
            for (const auto& [key, c] : img.terms()) a[s.index.at(u_part(key, m))][j] = c.value();
        }
        s.inv = inverse(a);
        return s;
    });
}

}  // namespace

PolyXU harmonic_project_u(const PolyXU& p, int k) {
    const int m = p.dim();
    if (!p.is_homogeneous(U, k)) throw std::invalid_argument("input is not u-homogeneous of degree k");
    if (k < 2) return p;
    auto sys = radial_system(m, k);
    const PolyXU r2 = norm_sq(m, U);

    // Group u-slices by x-exponent and omega grade.
    std::map<std::pair<MultiIndex, int>, PolyXU> slices;
    for (const auto& [key, c] : p.terms()) {
        auto [it, ins] = slices.try_emplace({x_part(key, m), c.omega_pow()}, PolyXU(m));
        it->second.add_term(make_key(MultiIndex(m, 0), u_part(key, m)), ScaledRational(c.value()));
    }
    PolyXU out(m);
    for (const auto& [tag, slice] : slices) {
        const auto& [alpha, grade] = tag;
        QVector rhs(sys->monos.size());
        const PolyXU lap = laplacian(slice, U);
        for (const auto& [key, c] : lap.terms())
            rhs[sys->index.at(u_part(key, m))] = c.value();
        QVector q = mat_vec(sys->inv, rhs);
        PolyXU qp(m);
        for (size_t i = 0; i < q.size(); ++i)
            if (sgn(q[i]) != 0) qp.add_term(make_key(MultiIndex(m, 0), sys->monos[i]), ScaledRational(q[i]));
        PolyXU h = slice - r2 * qp;
        out += h.shift(make_key(alpha, MultiIndex(m, 0))) * ScaledRational(mpq_class(1), grade);
    }
    return out;
}

std::shared_ptr<const HkData> hk_data(int m, int k) {
    if (m < 3) throw std::invalid_argument("m < 3 is not supported");
    if (k < 0) throw std::invalid_argument("k must be non-negative");
    static Memo<std::pair<int, int>, HkData> memo;
    return memo.get({m, k}, [&] {
        const auto top = monomials_of_degree(m, k);
        const auto low = monomials_of_degree(m, k - 2);
        std::map<unsigned, std::vector<int>> top_by, low_by;
        for (size_t i = 0; i < top.size(); ++i) top_by[parity_mask(top[i].data(), m)].push_back(static_cast<int>(i));
        for (size_t i = 0; i < low.size(); ++i) low_by[parity_mask(low[i].data(), m)].push_back(static_cast<int>(i));

        struct Item {
            int lead;
            unsigned parity;
            PolyXU poly;
        };
        std::vector<Item> items;
        const MultiIndex zero(m, 0);
        for (const auto& [mask, cols] : top_by) {
            const auto& rows = low_by[mask];
            std::map<MultiIndex, int> row_of;
            for (size_t r = 0; r < rows.size(); ++r) row_of[low[rows[r]]] = static_cast<int>(r);
            QMatrix a(rows.size(), QVector(cols.size()));
            for (size_t c = 0; c < cols.size(); ++c) {
                PolyXU img = laplacian(poly_monomial(m, zero, top[cols[c]]), U);
                for (const auto& [key, coef] : img.terms()) a[row_of.at(u_part(key, m))][c] = coef.value();
            }
            std::vector<int> free;
            QMatrix ns = nullspace(a, static_cast<int>(cols.size()), &free);
            for (size_t q = 0; q < ns.size(); ++q) {
                PolyXU p(m);
                for (size_t c = 0; c < cols.size(); ++c)
                    if (sgn(ns[q][c]) != 0) p.add_term(make_key(zero, top[cols[c]]), ScaledRational(ns[q][c]));
                items.push_back({cols[free[q]], mask, std::move(p)});
            }
        }
        std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.lead < b.lead; });
        HkData d;
        d.basis.m = m;
        d.basis.k = k;
        d.basis.tag = SpaceTag::Hk;
        for (auto& it : items) {
            d.lead.push_back(top[it.lead]);
            d.parity.push_back(it.parity);
            d.basis.vectors.push_back(std::move(it.poly));
        }
        if (static_cast<long>(d.basis.vectors.size()) != dim_hk(m, k))
            throw std::logic_error("harmonic basis has wrong dimension");
        return d;
    });
}

SubspaceBasis hk_basis(int m, int k) { return hk_data(m, k)->basis; }

std::vector<mpq_class> gegenbauer(int n, const mpq_class& lambda) {
    std::vector<mpq_class> prev{1};
    if (n == 0) return prev;
    std::vector<mpq_class> cur{0, 2 * lambda};
    for (int j = 2; j <= n; ++j) {
        std::vector<mpq_class> next(j + 1);
        for (size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2 * (j + lambda - 1) * cur[i];
        for (size_t i = 0; i < prev.size(); ++i) next[i] -= (j + 2 * lambda - 2) * prev[i];
        for (auto& c : next) c /= j;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

PolyXU zonal_kernel(int m, int k) {
    if (m < 3) throw std::invalid_argument("m < 3 is not supported");
    if (k < 0) throw std::invalid_argument("k must be non-negative");
    const mpq_class lambda(m - 2, 2);
    auto c = gegenbauer(k, lambda);
    const mpq_class scale(2 * k + m - 2, m - 2);
    const PolyXU t = dot_xu(m);
    const PolyXU rr = norm_sq(m, X) * norm_sq(m, U);
    PolyXU out(m);
    for (int p = k; p >= 0; p -= 2) {
        if (sgn(c[p]) == 0) continue;
        PolyXU term = poly_constant(m, ScaledRational(mpq_class(scale * c[p])));
        for (int i = 0; i < p; ++i) term = term * t;
        for (int i = 0; i < (k - p) / 2; ++i) term = term * rr;
        out += term;
    }
    return out;
}

PolyXU zonal_kernel_gram(int m, int k) {
    auto d = hk_data(m, k);
    const auto& phi = d->basis.vectors;
    const size_t n = phi.size();
    QMatrix g(n, QVector(n));
    std::vector<int> e(m);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) {
            mpq_class s = 0;
            for (const auto& [ka, ca] : phi[i].terms())
                for (const auto& [kb, cb] : phi[j].terms()) {
                    for (int t = 0; t < m; ++t) e[t] = ka[m + t] + kb[m + t];
                    mpq_class mo = moment_ratio(e.data(), m, Domain::Sphere);
                    if (sgn(mo) != 0) s += ca.value() * cb.value() * mo;
                }
            g[i][j] = g[j][i] = s;
        }
    QMatrix inv = inverse(g);
    PolyXU out(m);
    for (size_t i = 0; i < n; ++i) {
        PolyXU left = phi[i].permute_blocks({1, 0});
        PolyXU right(m);
        for (size_t j = 0; j < n; ++j)
            if (sgn(inv[i][j]) != 0) right += phi[j] * ScaledRational(inv[i][j]);
        out += left * right;
    }
    return out;
}

}  // namespace bosonic
