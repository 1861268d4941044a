#pragma once

#include "bosonic/scalar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bosonic {

using MultiIndex = std::vector<int>;

inline int total_degree(const MultiIndex& a) {
    int s = 0;
    for (int e : a) s += e;
    return s;
}

// All multi-indices of length m and total degree d, in graded-lex order
// (x1^d first).
std::vector<MultiIndex> monomials_of_degree(int m, int d);

/**
 * Sparse polynomial in Blocks vector variables of dimension m each.
 *
 * A key stores the exponents of all blocks back to back. Keys are ordered
 * blockwise: lower total degree first, then lexicographically larger
 * exponent vectors first.
 */
template <int Blocks>
class Polynomial {
public:
    using Key = std::vector<int>;

    struct KeyLess {
        bool operator()(const Key& a, const Key& b) const {
            const size_t m = a.size() / Blocks;
            for (size_t blk = 0; blk < Blocks; ++blk) {
                int da = 0, db = 0;
                for (size_t i = 0; i < m; ++i) {
                    da += a[blk * m + i];
                    db += b[blk * m + i];
                }
                if (da != db) return da < db;
                for (size_t i = 0; i < m; ++i) {
                    int ea = a[blk * m + i], eb = b[blk * m + i];
                    if (ea != eb) return ea > eb;
                }
            }
            return false;
        }
    };

    using Terms = std::map<Key, ScaledRational, KeyLess>;

    Polynomial() = default;
    explicit Polynomial(int m) : m_(m) {
        if (m < 1) throw std::invalid_argument("dimension must be positive");
    }

    static Polynomial constant(int m, const ScaledRational& c) {
        Polynomial p(m);
        p.add_term(Key(static_cast<size_t>(Blocks * m), 0), c);
        return p;
    }

    // The coordinate function (block, index), index 0-based.
    static Polynomial variable(int m, int block, int index) {
        Polynomial p(m);
        p.check_slot(block, index);
        Key k(static_cast<size_t>(Blocks * m), 0);
        k[block * m + index] = 1;
        p.add_term(k, ScaledRational(1));
        return p;
    }

    static Polynomial monomial(int m, const Key& key, const ScaledRational& c) {
        Polynomial p(m);
        p.add_term(key, c);
        return p;
    }

    int dim() const { return m_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }

    void add_term(const Key& key, const ScaledRational& c) {
        if (static_cast<int>(key.size()) != Blocks * m_)
            throw std::invalid_argument("multi-index length does not match dimension");
        for (int e : key)
            if (e < 0) throw std::invalid_argument("negative exponent");
        if (c.is_zero()) return;
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(key, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    ScaledRational coefficient(const Key& key) const {
        auto it = terms_.find(key);
        return it == terms_.end() ? ScaledRational() : it->second;
    }

    static int block_degree(const Key& key, int m, int block) {
        int s = 0;
        for (int i = 0; i < m; ++i) s += key[block * m + i];
        return s;
    }

    // Maximum block degree over terms; -1 for the zero polynomial.
    int degree(int block) const {
        int d = -1;
        for (const auto& [k, c] : terms_) d = std::max(d, block_degree(k, m_, block));
        return d;
    }

    int min_degree(int block) const {
        int d = -1;
        for (const auto& [k, c] : terms_) {
            int b = block_degree(k, m_, block);
            d = d < 0 ? b : std::min(d, b);
        }
        return d;
    }

    bool is_homogeneous(int block, int d) const {
        for (const auto& [k, c] : terms_)
            if (block_degree(k, m_, block) != d) return false;
        return true;
    }

    Polynomial homogeneous_part(int block, int d) const {
        Polynomial r(m_);
        for (const auto& [k, c] : terms_)
            if (block_degree(k, m_, block) == d) r.terms_.emplace_hint(r.terms_.end(), k, c);
        return r;
    }

    Polynomial derivative(int block, int index) const {
        check_slot(block, index);
        Polynomial r(m_);
        const int slot = block * m_ + index;
        for (const auto& [k, c] : terms_) {
            if (k[slot] == 0) continue;
            Key nk = k;
            nk[slot] -= 1;
            r.add_term(nk, c * ScaledRational(k[slot]));
        }
        return r;
    }

    // Multiplies by the monomial whose exponents are given by key.
    Polynomial shift(const Key& key) const {
        Polynomial r(m_);
        for (const auto& [k, c] : terms_) {
            Key nk = k;
            for (size_t i = 0; i < nk.size(); ++i) nk[i] += key[i];
            r.terms_.emplace(std::move(nk), c);
        }
        return r;
    }

    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto& [k, c] : r.terms_) c = -c;
        return r;
    }

    Polynomial& operator+=(const Polynomial& o) {
        check_same(o);
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        check_same(o);
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }
    Polynomial& operator*=(const ScaledRational& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, c] : terms_) c *= s;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const ScaledRational& s) { return a *= s; }
    friend Polynomial operator*(const ScaledRational& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_same(b);
        Polynomial r(a.m_);
        Key nk(static_cast<size_t>(Blocks * a.m_));
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                for (size_t i = 0; i < nk.size(); ++i) nk[i] = ka[i] + kb[i];
                r.add_term(nk, ca * cb);
            }
        return r;
    }

    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    bool operator==(const Polynomial& o) const { return m_ == o.m_ && terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    // Exact evaluation; points[b] is the value of block b.
    ScaledRational evaluate(const std::array<std::vector<mpq_class>, Blocks>& points) const {
        for (const auto& p : points)
            if (static_cast<int>(p.size()) != m_) throw std::invalid_argument("point dimension mismatch");
        ScaledRational sum;
        for (const auto& [k, c] : terms_) {
            mpq_class t = 1;
            for (int b = 0; b < Blocks; ++b)
                for (int i = 0; i < m_; ++i) {
                    int e = k[b * m_ + i];
                    for (int j = 0; j < e; ++j) t *= points[b][i];
                }
            sum += c * ScaledRational(t);
        }
        return sum;
    }

    double evaluate(const std::array<std::vector<double>, Blocks>& points) const {
        for (const auto& p : points)
            if (static_cast<int>(p.size()) != m_) throw std::invalid_argument("point dimension mismatch");
        double sum = 0;
        for (const auto& [k, c] : terms_) {
            double t = c.to_double(m_);
            for (int b = 0; b < Blocks; ++b)
                for (int i = 0; i < m_; ++i) {
                    int e = k[b * m_ + i];
                    if (e) t *= std::pow(points[b][i], e);
                }
            sum += t;
        }
        return sum;
    }

    /**
     * Substitutes block variable y_i -> sum_j M[i][j] y_j.
     */
    Polynomial linear_substitute(int block, const std::vector<std::vector<mpq_class>>& M) const {
        if (static_cast<int>(M.size()) != m_) throw std::invalid_argument("substitution size mismatch");
        std::vector<Polynomial> forms;
        for (int i = 0; i < m_; ++i) {
            Polynomial f(m_);
            for (int j = 0; j < m_; ++j) {
                Key k(static_cast<size_t>(Blocks * m_), 0);
                k[block * m_ + j] = 1;
                f.add_term(k, ScaledRational(M[i][j]));
            }
            forms.push_back(std::move(f));
        }
        std::vector<std::vector<Polynomial>> powers(m_);
        auto power = [&](int i, int e) -> const Polynomial& {
            auto& pw = powers[i];
            if (pw.empty()) pw.push_back(constant(m_, ScaledRational(1)));
            while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * forms[i]);
            return pw[e];
        };
        Polynomial r(m_);
        for (const auto& [k, c] : terms_) {
            Key rest = k;
            for (int i = 0; i < m_; ++i) rest[block * m_ + i] = 0;
            Polynomial t = monomial(m_, rest, c);
            for (int i = 0; i < m_; ++i) {
                int e = k[block * m_ + i];
                if (e) t = t * power(i, e);
            }
            r += t;
        }
        return r;
    }

    // Moves block b of every key to position perm[b].
    Polynomial permute_blocks(const std::array<int, Blocks>& perm) const {
        Polynomial r(m_);
        for (const auto& [k, c] : terms_) {
            Key nk(k.size());
            for (int b = 0; b < Blocks; ++b)
                for (int i = 0; i < m_; ++i) nk[perm[b] * m_ + i] = k[b * m_ + i];
            r.terms_.emplace(std::move(nk), c);
        }
        return r;
    }

private:
    void check_same(const Polynomial& o) const {
        if (m_ != o.m_) throw std::invalid_argument("dimension mismatch");
    }
    void check_slot(int block, int index) const {
        if (block < 0 || block >= Blocks) throw std::out_of_range("block out of range");
        if (index < 0 || index >= m_) throw std::out_of_range("variable index out of range");
    }

    int m_ = 0;
    Terms terms_;
};

enum Block : int { X = 0, U = 1 };

using PolyXU = Polynomial<2>;

PolyXU poly_constant(int m, const ScaledRational& c);
PolyXU poly_var(int m, Block b, int index);
PolyXU poly_monomial(int m, const MultiIndex& alpha, const MultiIndex& beta,
                     const ScaledRational& c = ScaledRational(1));
PolyXU norm_sq(int m, Block b);   // |x|^2 or |u|^2
PolyXU dot_xu(int m);             // <x,u>

// Exact partial derivative; index is 1-based as in the mathematical notation.
PolyXU partial_derivative(const PolyXU& p, Block b, int index);
PolyXU homogeneous_part(const PolyXU& p, Block b, int degree);

ScaledRational evaluate(const PolyXU& p, const std::vector<mpq_class>& x,
                        const std::vector<mpq_class>& u);
double evaluate(const PolyXU& p, const std::vector<double>& x, const std::vector<double>& u);

// u -> u - 2<a,u>a/|a|^2.
PolyXU reflect_u(const PolyXU& p, const std::vector<mpq_class>& a);

MultiIndex x_part(const PolyXU::Key& key, int m);
MultiIndex u_part(const PolyXU::Key& key, int m);
PolyXU::Key make_key(const MultiIndex& alpha, const MultiIndex& beta);

/**
 * Floating-point copy of a polynomial for fast repeated evaluation.
 */
template <int Blocks>
class NumericPoly {
public:
    NumericPoly() = default;
    explicit NumericPoly(const Polynomial<Blocks>& p) : m_(p.dim()) {
        max_exp_ = 0;
        for (const auto& [k, c] : p.terms()) {
            keys_.insert(keys_.end(), k.begin(), k.end());
            coeffs_.push_back(c.to_double(m_));
            for (int e : k) max_exp_ = std::max(max_exp_, e);
        }
    }

    int dim() const { return m_; }
    size_t size() const { return coeffs_.size(); }

    // pts[b] points to m doubles for block b.
    double operator()(const std::array<const double*, Blocks>& pts) const {
        const int stride = max_exp_ + 1;
        double table[Blocks * 8 * 32];
        double* pw = table;
        std::vector<double> heap;
        if (Blocks * m_ * stride > static_cast<int>(sizeof(table) / sizeof(double))) {
            heap.resize(static_cast<size_t>(Blocks * m_ * stride));
            pw = heap.data();
        }
        for (int b = 0; b < Blocks; ++b)
            for (int i = 0; i < m_; ++i) {
                double* row = pw + (b * m_ + i) * stride;
                row[0] = 1.0;
                for (int e = 1; e < stride; ++e) row[e] = row[e - 1] * pts[b][i];
            }
        const size_t n = Blocks * m_;
        double sum = 0;
        for (size_t t = 0; t < coeffs_.size(); ++t) {
            const int* k = keys_.data() + t * n;
            double v = coeffs_[t];
            for (size_t s = 0; s < n; ++s)
                if (k[s]) v *= pw[s * stride + k[s]];
            sum += v;
        }
        return sum;
    }

private:
    int m_ = 0;
    int max_exp_ = 0;
    std::vector<int> keys_;
    std::vector<double> coeffs_;
};

using NumericPolyXU = NumericPoly<2>;

}  // namespace bosonic
