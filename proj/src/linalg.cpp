#include "bosonic/linalg.hpp"

#include <stdexcept>

namespace bosonic {

namespace {

using ZMatrix = std::vector<std::vector<mpz_class>>;

ZMatrix integer_rows(const QMatrix& a, int cols) {
    ZMatrix z(a.size(), std::vector<mpz_class>(cols));
    for (size_t i = 0; i < a.size(); ++i) {
        if (static_cast<int>(a[i].size()) != cols) throw std::invalid_argument("ragged matrix");
        mpz_class l = 1;
        for (const auto& q : a[i]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
        for (int j = 0; j < cols; ++j) z[i][j] = a[i][j].get_num() * (l / a[i][j].get_den());
    }
    return z;
}

// Fraction-free forward elimination; returns pivot columns, rows reordered.
std::vector<int> bareiss(ZMatrix& z, int cols) {
    const int rows = static_cast<int>(z.size());
    std::vector<int> piv;
    mpz_class prev = 1;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = r;
        while (p < rows && sgn(z[p][c]) == 0) ++p;
        if (p == rows) continue;
        std::swap(z[p], z[r]);
        for (int i = r + 1; i < rows; ++i) {
            if (sgn(z[i][c]) == 0) {
                if (prev != 1)
                    for (int j = c + 1; j < cols; ++j) {
                        z[i][j] *= z[r][c];
                        mpz_divexact(z[i][j].get_mpz_t(), z[i][j].get_mpz_t(), prev.get_mpz_t());
                    }
                else
                    for (int j = c + 1; j < cols; ++j) z[i][j] *= z[r][c];
                continue;
            }
            for (int j = c + 1; j < cols; ++j) {
                z[i][j] = z[r][c] * z[i][j] - z[i][c] * z[r][j];
                mpz_divexact(z[i][j].get_mpz_t(), z[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            z[i][c] = 0;
        }
        prev = z[r][c];
        piv.push_back(c);
        ++r;
    }
    return piv;
}

}  // namespace

Echelon row_reduce(const QMatrix& a, int cols) {
    ZMatrix z = integer_rows(a, cols);
    std::vector<int> piv = bareiss(z, cols);
    const int r = static_cast<int>(piv.size());
    Echelon e;
    e.pivots = piv;
    e.rref.assign(r, QVector(cols));
    for (int i = 0; i < r; ++i) {
        const mpz_class& d = z[i][piv[i]];
        for (int j = 0; j < cols; ++j)
            if (sgn(z[i][j]) != 0) e.rref[i][j] = mpq_class(z[i][j], d);
        for (int j = 0; j < cols; ++j) e.rref[i][j].canonicalize();
    }
    for (int i = r - 1; i >= 0; --i) {
        const int c = piv[i];
        for (int h = 0; h < i; ++h) {
            if (sgn(e.rref[h][c]) == 0) continue;
            mpq_class f = e.rref[h][c];
            for (int j = c; j < cols; ++j)
                if (sgn(e.rref[i][j]) != 0) e.rref[h][j] -= f * e.rref[i][j];
        }
    }
    return e;
}

int rank(const QMatrix& a, int cols) {
    ZMatrix z = integer_rows(a, cols);
    return static_cast<int>(bareiss(z, cols).size());
}

QMatrix nullspace(const QMatrix& a, int cols, std::vector<int>* free_cols) {
    Echelon e = row_reduce(a, cols);
    std::vector<char> is_pivot(cols, 0);
    for (int c : e.pivots) is_pivot[c] = 1;
    QMatrix out;
    for (int f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        if (free_cols) free_cols->push_back(f);
        QVector v(cols);
        v[f] = 1;
        for (size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.rref[i][f];
        out.push_back(std::move(v));
    }
    return out;
}

QMatrix inverse(const QMatrix& a) {
    const int n = static_cast<int>(a.size());
    QMatrix aug(n, QVector(2 * n));
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(a[i].size()) != n) throw std::invalid_argument("matrix not square");
        for (int j = 0; j < n; ++j) aug[i][j] = a[i][j];
        aug[i][n + i] = 1;
    }
    Echelon e = row_reduce(aug, 2 * n);
    if (static_cast<int>(e.pivots.size()) < n || e.pivots[n - 1] != n - 1)
        throw std::domain_error("singular matrix");
    QMatrix inv(n, QVector(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv[i][j] = e.rref[i][n + j];
    return inv;
}

bool leading_minors_positive(const QMatrix& a) {
    const int n = static_cast<int>(a.size());
    mpz_class l = 1;
    for (const auto& row : a)
        for (const auto& q : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    ZMatrix z(n, std::vector<mpz_class>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z[i][j] = a[i][j].get_num() * (l / a[i][j].get_den());
    mpz_class prev = 1;
    for (int r = 0; r < n; ++r) {
        if (sgn(z[r][r]) <= 0) return false;
        for (int i = r + 1; i < n; ++i) {
            for (int j = r + 1; j < n; ++j) {
                z[i][j] = z[r][r] * z[i][j] - z[i][r] * z[r][j];
                mpz_divexact(z[i][j].get_mpz_t(), z[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            z[i][r] = 0;
        }
        prev = z[r][r];
    }
    return true;
}

QVector mat_vec(const QMatrix& a, const QVector& v) {
    QVector out(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j)
            if (sgn(a[i][j]) != 0 && sgn(v[j]) != 0) out[i] += a[i][j] * v[j];
    return out;
}

}  // namespace bosonic
