#include "bosonic/quadrature.hpp"

#include "bosonic/cache.hpp"
#include "bosonic/moments.hpp"
#include "bosonic/polynomial.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bosonic {

double pairwise_sum(const double* v, size_t n) {
    if (n <= 16) {
        double s = 0;
        for (size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

void gauss_symmetric(int n, double a, std::vector<double>& t, std::vector<double>& w) {
    if (n < 1) throw std::invalid_argument("rule needs at least one node");
    if (a <= -1) throw std::invalid_argument("weight exponent must exceed -1");
    const double mu = a + 0.5;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(std::max(n - 1, 0));
    for (int j = 1; j < n; ++j) {
        const double beta = j * (j + 2 * mu - 1) / (4 * (j + mu) * (j + mu - 1));
        sub(j - 1) = std::sqrt(beta);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw std::runtime_error("tridiagonal eigensolver failed");
    t.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        t[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        w[i] = v0 * v0;
    }
    // exact symmetry about 0
    for (int i = 0; i < n / 2; ++i) {
        const double tt = 0.5 * (t[n - 1 - i] - t[i]);
        t[i] = -tt;
        t[n - 1 - i] = tt;
        const double ww = 0.5 * (w[i] + w[n - 1 - i]);
        w[i] = w[n - 1 - i] = ww;
    }
    if (n % 2) t[n / 2] = 0;
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= s;
}

QuadRule sphere_rule(int m, int degree) {
    if (m < 2) throw std::invalid_argument("sphere rules need m >= 2");
    if (degree < 0) throw std::invalid_argument("negative degree");
    QuadRule r;
    r.m = m;
    r.degree = degree;
    if (m == 2) {
        const int n = degree + 1;
        for (int j = 0; j < n; ++j) {
            const double a = 2 * M_PI * (j + 0.5) / n;
            r.nodes.push_back(std::cos(a));
            r.nodes.push_back(std::sin(a));
            r.weights.push_back(1.0 / n);
        }
        return r;
    }
    std::vector<double> t, w;
    gauss_symmetric(degree / 2 + 1, 0.5 * (m - 3), t, w);
    QuadRule sub = sphere_rule(m - 1, degree);
    for (size_t i = 0; i < t.size(); ++i) {
        const double s = std::sqrt(std::max(0.0, 1 - t[i] * t[i]));
        for (size_t j = 0; j < sub.size(); ++j) {
            const double* y = sub.node(j);
            for (int c = 0; c < m - 1; ++c) r.nodes.push_back(s * y[c]);
            r.nodes.push_back(t[i]);
            r.weights.push_back(w[i] * sub.weights[j]);
        }
    }
    return r;
}

namespace {

// All monomials of degree d when there are few, otherwise the pure powers
// plus a fixed pseudo-random sample.
std::vector<MultiIndex> test_monomials(int m, int d, int samples) {
    const double count = std::tgamma(d + m) / (std::tgamma(d + 1) * std::tgamma(m));
    if (count <= 80) return monomials_of_degree(m, d);
    std::vector<MultiIndex> out;
    for (int c = 0; c < m; ++c) {
        MultiIndex a(m, 0);
        a[c] = d;
        out.push_back(a);
    }
    std::mt19937_64 rng(1000 * m + d);
    std::uniform_int_distribution<int> cut(0, d);
    for (int s = 0; s < samples; ++s) {
        std::vector<int> bars(m - 1);
        for (auto& b : bars) b = cut(rng);
        std::sort(bars.begin(), bars.end());
        MultiIndex a(m);
        int prev = 0;
        for (int c = 0; c < m - 1; ++c) {
            a[c] = bars[c] - prev;
            prev = bars[c];
        }
        a[m - 1] = d - prev;
        out.push_back(a);
    }
    return out;
}

}  // namespace

double validate_rule(const QuadRule& rule, int degree) {
    const int m = rule.m;
    const size_t n = rule.size();
    // powers[(node * m + c) * (degree + 1) + e]
    std::vector<double> powers(n * m * (degree + 1));
    for (size_t i = 0; i < n; ++i)
        for (int c = 0; c < m; ++c) {
            double* row = powers.data() + (i * m + c) * (degree + 1);
            row[0] = 1;
            for (int e = 1; e <= degree; ++e) row[e] = row[e - 1] * rule.node(i)[c];
        }
    double worst = 0;
    std::vector<double> terms(n);
    const int samples = static_cast<int>(std::clamp<size_t>(600000 / std::max<size_t>(n, 1), 8, 60));
    for (int d = 0; d <= degree; ++d) {
        for (const auto& a : test_monomials(m, d, samples)) {
            for (size_t i = 0; i < n; ++i) {
                double v = rule.weights[i];
                for (int c = 0; c < m; ++c) v *= powers[(i * m + c) * (degree + 1) + a[c]];
                terms[i] = v;
            }
            const double got = pairwise_sum(terms.data(), n);
            const double want = moment_ratio(a, m, Domain::Sphere).get_d();
            const double err = want != 0 ? std::abs(got - want) / std::abs(want) : std::abs(got) * 1e2;
            worst = std::max(worst, err);
        }
    }
    return worst;
}

std::shared_ptr<const QuadRule> quad_rule(int m, int degree) {
    if (m < 3 || m > 5) throw std::invalid_argument("validated rules exist for m in {3,4,5}");
    if (degree < 0 || degree > 30) throw std::invalid_argument("validated rules exist for degree <= 30");
    static Memo<std::pair<int, int>, QuadRule> memo;
    return memo.get({m, degree}, [&] {
        QuadRule r = sphere_rule(m, degree);
        const double err = validate_rule(r, degree);
        if (err > 1e-12) throw std::runtime_error("quadrature validation failed: error " + std::to_string(err));
        r.validated = true;
        return r;
    });
}

QuadRule peaked_rule(int m, const double* pole, double width, int order, int ring_degree) {
    if (m < 3) throw std::invalid_argument("peaked rules need m >= 3");
    if (!(width > 0)) throw std::invalid_argument("width must be positive");
    double norm = 0;
    for (int c = 0; c < m; ++c) norm += pole[c] * pole[c];
    norm = std::sqrt(norm);
    if (norm == 0) throw std::invalid_argument("pole must be nonzero");
    std::vector<double> p(m);
    for (int c = 0; c < m; ++c) p[c] = pole[c] / norm;

    // orthonormal basis of the complement of p
    std::vector<std::vector<double>> basis;
    int skip = 0;
    for (int c = 1; c < m; ++c)
        if (std::abs(p[c]) > std::abs(p[skip])) skip = c;
    for (int c = 0; c < m && static_cast<int>(basis.size()) < m - 1; ++c) {
        if (c == skip) continue;
        std::vector<double> e(m, 0.0);
        e[c] = 1;
        for (int pass = 0; pass < 2; ++pass) {
            double d = 0;
            for (int i = 0; i < m; ++i) d += e[i] * p[i];
            for (int i = 0; i < m; ++i) e[i] -= d * p[i];
            for (const auto& b : basis) {
                double db = 0;
                for (int i = 0; i < m; ++i) db += e[i] * b[i];
                for (int i = 0; i < m; ++i) e[i] -= db * b[i];
            }
        }
        double en = 0;
        for (double x : e) en += x * x;
        en = std::sqrt(en);
        for (auto& x : e) x /= en;
        basis.push_back(std::move(e));
    }

    std::vector<double> edges{0.0};
    double h = width / 4;
    while (edges.back() + h < M_PI) {
        edges.push_back(edges.back() + h);
        if (edges.size() > 2) h *= 2;
    }
    edges.push_back(M_PI);

    std::vector<double> gt, gw;
    gauss_symmetric(order, 0.0, gt, gw);
    QuadRule ring = sphere_rule(m - 1, ring_degree);
    const double total = std::sqrt(M_PI) * std::tgamma(0.5 * (m - 1)) / std::tgamma(0.5 * m);

    QuadRule r;
    r.m = m;
    r.degree = ring_degree;
    for (size_t j = 0; j + 1 < edges.size(); ++j) {
        const double a = edges[j], b = edges[j + 1];
        for (int q = 0; q < order; ++q) {
            const double th = 0.5 * (a + b) + 0.5 * (b - a) * gt[q];
            const double wth = (b - a) * gw[q] * std::pow(std::sin(th), m - 2) / total;
            const double ct = std::cos(th), st = std::sin(th), hc = std::sin(0.5 * th);
            for (size_t i = 0; i < ring.size(); ++i) {
                const double* y = ring.node(i);
                for (int c = 0; c < m; ++c) {
                    double v = ct * p[c];
                    for (int s = 0; s < m - 1; ++s) v += st * y[s] * basis[s][c];
                    r.nodes.push_back(v);
                }
                r.weights.push_back(wth * ring.weights[i]);
                r.half_chord.push_back(hc);
            }
        }
    }
    return r;
}

QuadRule monte_carlo_rule(int m, size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    QuadRule r;
    r.m = m;
    for (size_t i = 0; i < n; ++i) {
        std::vector<double> v(m);
        double s = 0;
        for (auto& x : v) {
            x = g(rng);
            s += x * x;
        }
        s = std::sqrt(s);
        for (double x : v) r.nodes.push_back(x / s);
        r.weights.push_back(1.0 / n);
    }
    return r;
}

}  // namespace bosonic
