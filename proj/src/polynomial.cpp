#include "bosonic/polynomial.hpp"

namespace bosonic {

namespace {

void fill_monomials(int m, int d, int pos, MultiIndex& cur, std::vector<MultiIndex>& out) {
    if (pos == m - 1) {
        cur[pos] = d;
        out.push_back(cur);
        return;
    }
    for (int e = d; e >= 0; --e) {
        cur[pos] = e;
        fill_monomials(m, d - e, pos + 1, cur, out);
    }
}

}  // namespace

std::vector<MultiIndex> monomials_of_degree(int m, int d) {
    std::vector<MultiIndex> out;
    if (d < 0) return out;
    MultiIndex cur(m, 0);
    fill_monomials(m, d, 0, cur, out);
    return out;
}

PolyXU poly_constant(int m, const ScaledRational& c) { return PolyXU::constant(m, c); }

PolyXU poly_var(int m, Block b, int index) { return PolyXU::variable(m, b, index); }

PolyXU::Key make_key(const MultiIndex& alpha, const MultiIndex& beta) {
    if (alpha.size() != beta.size()) throw std::invalid_argument("multi-index length mismatch");
    PolyXU::Key k(alpha);
    k.insert(k.end(), beta.begin(), beta.end());
    return k;
}

PolyXU poly_monomial(int m, const MultiIndex& alpha, const MultiIndex& beta,
                     const ScaledRational& c) {
    if (static_cast<int>(alpha.size()) != m || static_cast<int>(beta.size()) != m)
        throw std::invalid_argument("multi-index length does not match dimension");
    return PolyXU::monomial(m, make_key(alpha, beta), c);
}

MultiIndex x_part(const PolyXU::Key& key, int m) {
    return MultiIndex(key.begin(), key.begin() + m);
}

MultiIndex u_part(const PolyXU::Key& key, int m) {
    return MultiIndex(key.begin() + m, key.end());
}

PolyXU norm_sq(int m, Block b) {
    PolyXU p(m);
    for (int i = 0; i < m; ++i) {
        PolyXU::Key k(2 * m, 0);
        k[b * m + i] = 2;
        p.add_term(k, ScaledRational(1));
    }
    return p;
}

PolyXU dot_xu(int m) {
    PolyXU p(m);
    for (int i = 0; i < m; ++i) {
        PolyXU::Key k(2 * m, 0);
        k[i] = 1;
        k[m + i] = 1;
        p.add_term(k, ScaledRational(1));
    }
    return p;
}

PolyXU partial_derivative(const PolyXU& p, Block b, int index) {
    if (index < 1 || index > p.dim()) throw std::out_of_range("variable index out of range");
    return p.derivative(b, index - 1);
}

PolyXU homogeneous_part(const PolyXU& p, Block b, int degree) {
    return p.homogeneous_part(b, degree);
}

ScaledRational evaluate(const PolyXU& p, const std::vector<mpq_class>& x,
                        const std::vector<mpq_class>& u) {
    return p.evaluate(std::array<std::vector<mpq_class>, 2>{x, u});
}

double evaluate(const PolyXU& p, const std::vector<double>& x, const std::vector<double>& u) {
    return p.evaluate(std::array<std::vector<double>, 2>{x, u});
}

PolyXU reflect_u(const PolyXU& p, const std::vector<mpq_class>& a) {
    const int m = p.dim();
    if (static_cast<int>(a.size()) != m) throw std::invalid_argument("direction dimension mismatch");
    mpq_class n2 = 0;
    for (const auto& ai : a) n2 += ai * ai;
    if (sgn(n2) == 0) throw std::invalid_argument("zero reflection direction");
    std::vector<std::vector<mpq_class>> M(m, std::vector<mpq_class>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            M[i][j] = -2 * a[i] * a[j] / n2;
            if (i == j) M[i][j] += 1;
        }
    return p.linear_substitute(U, M);
}

}  // namespace bosonic
