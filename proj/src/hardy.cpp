#include "bosonic/hardy.hpp"

#include "bosonic/cache.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bosonic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm2(int m, const double* p) {
    double s = 0;
    for (int i = 0; i < m; ++i) s += p[i] * p[i];
    return std::sqrt(s);
}

double constant_for(int m, int k) { return static_cast<double>(m + 2 * k - 2) / (m - 2); }

PolyXU poly_field(const json& j, int m) {
    if (j.is_string()) return parse_expression(j.get<std::string>(), m);
    return poly_from_json(j);
}

// Monomial values c_t * node^exps for one block, one row per node.
struct BlockTable {
    Eigen::MatrixXd values;  // nodes x terms
    std::vector<int> degree;
};

BlockTable block_table(const PolyXU& f, int block, const QuadRule& rule, bool with_coeff) {
    const int m = f.dim();
    BlockTable t;
    t.values.resize(static_cast<Eigen::Index>(rule.size()), static_cast<Eigen::Index>(f.terms().size()));
    int col = 0;
    for (const auto& [key, c] : f.terms()) {
        const double coeff = with_coeff ? c.to_double(m) : 1.0;
        int d = 0;
        for (int i = 0; i < m; ++i) d += key[block * m + i];
        t.degree.push_back(d);
        for (size_t n = 0; n < rule.size(); ++n) {
            const double* p = rule.node(n);
            double v = coeff;
            for (int i = 0; i < m; ++i)
                for (int e = 0; e < key[block * m + i]; ++e) v *= p[i];
            t.values(static_cast<Eigen::Index>(n), col) = v;
        }
        ++col;
    }
    return t;
}

// f(r1 x, r2 v) = (A B^T)(x, v) over the node sets.
struct SliceFactors {
    Eigen::MatrixXd A, B;
};

SliceFactors slice_factors(const PolyXU& f, double r1, double r2, const QuadRule& rx, const QuadRule& rv) {
    BlockTable a = block_table(f, X, rx, true);
    BlockTable b = block_table(f, U, rv, false);
    for (Eigen::Index t = 0; t < a.values.cols(); ++t)
        a.values.col(t) *= std::pow(r1, a.degree[t]) * std::pow(r2, b.degree[t]);
    return {std::move(a.values), std::move(b.values)};
}

// Sum over a block of rows of w_x w_v |F|^p, or the max of |F| for p = infinity.
double partial_norm(const Eigen::MatrixXd& F, double p, const double* wx, const QuadRule& rv) {
    if (std::isinf(p)) return F.size() ? F.cwiseAbs().maxCoeff() : 0.0;
    const Eigen::Map<const Eigen::VectorXd> wr(wx, F.rows());
    const Eigen::Map<const Eigen::VectorXd> wv(rv.weights.data(), static_cast<Eigen::Index>(rv.size()));
    if (p == 1) return wr.dot(F.cwiseAbs() * wv);
    if (p == 2) return wr.dot(F.cwiseAbs2() * wv);
    return wr.dot(F.cwiseAbs().array().pow(p).matrix() * wv);
}

double finish_norm(double acc, double p) { return std::isinf(p) ? acc : std::pow(acc, 1 / p); }

double factor_norm(const SliceFactors& f, double p, const QuadRule& rx, const QuadRule& rv) {
    constexpr Eigen::Index chunk = 256;
    double acc = 0;
    for (Eigen::Index i0 = 0; i0 < f.A.rows(); i0 += chunk) {
        const Eigen::Index n = std::min(chunk, f.A.rows() - i0);
        const Eigen::MatrixXd F = f.A.middleRows(i0, n) * f.B.transpose();
        const double part = partial_norm(F, p, rx.weights.data() + i0, rv);
        acc = std::isinf(p) ? std::max(acc, part) : acc + part;
    }
    return finish_norm(acc, p);
}

double integrate(const QuadRule& rule, const std::function<double(const double*)>& f) {
    std::vector<double> t(rule.size());
    for (size_t i = 0; i < rule.size(); ++i) t[i] = rule.weights[i] * f(rule.node(i));
    return pairwise_sum(t.data(), t.size());
}

QuadRule light_rule(int m) { return sphere_rule(m, m == 3 ? 40 : (m == 4 ? 20 : 12)); }

/**
 * Integral over sigma(xi) of F(xi) where F may peak like the Poisson kernel
 * at r * xi near each atom. A partition of unity built from the atom
 * kernels assigns each piece to a rule refined around its atom.
 */
double peaked_sphere_integral(const ProductMeasure& mu, double r, const std::function<double(const double*)>& F,
                              int order = 12, int ring = 16) {
    const int m = mu.m;
    std::vector<std::vector<double>> poles;
    for (const auto& a : mu.atoms)
        if (a.w != 0) poles.push_back(a.zeta);
    const bool smooth = mu.density1.has_value() || poles.empty();
    const double width = std::max(1 - r, 1e-3);
    auto share = [&](const double* xi, int piece) {
        if (poles.size() + (smooth ? 1 : 0) == 1) return 1.0;
        std::vector<double> x(m);
        for (int i = 0; i < m; ++i) x[i] = r * xi[i];
        double total = smooth ? 1.0 : 0.0, mine = (piece < 0) ? 1.0 : 0.0;
        for (size_t j = 0; j < poles.size(); ++j) {
            const double a = std::abs(mu.atoms[j].w) * classical_poisson(m, x.data(), poles[j].data());
            total += a;
            if (static_cast<int>(j) == piece) mine = a;
        }
        return mine / total;
    };
    double sum = 0;
    for (size_t j = 0; j < poles.size(); ++j) {
        QuadRule rule = peaked_rule(m, poles[j].data(), width, order, ring);
        sum += integrate(rule, [&](const double* xi) { return share(xi, static_cast<int>(j)) * F(xi); });
    }
    if (smooth) sum += integrate(light_rule(m), [&](const double* xi) { return share(xi, -1) * F(xi); });
    return sum;
}

}  // namespace

void ProductMeasure::validate() const {
    if (m < 3) throw std::invalid_argument("m < 3 is not supported");
    if (h.dim() != m) throw std::invalid_argument("density2 has the wrong dimension");
    if (h.degree(X) > 0) throw std::invalid_argument("density2 must not depend on x");
    require_hk_valued(h, k);
    if (density1) {
        if (density1->dim() != m) throw std::invalid_argument("density1 has the wrong dimension");
        if (density1->degree(U) > 0) throw std::invalid_argument("density1 must not depend on u");
    }
    for (const auto& a : atoms) {
        if (static_cast<int>(a.zeta.size()) != m) throw std::invalid_argument("atom has the wrong dimension");
        if (std::abs(norm2(m, a.zeta.data()) - 1) > 1e-12) throw std::invalid_argument("atom must lie on the sphere");
    }
}

ProductMeasure ProductMeasure::scaled(double c) const {
    ProductMeasure out = *this;
    for (auto& a : out.atoms) a.w *= c;
    if (out.density1) {
        const mpq_class q(c);
        *out.density1 = *out.density1 * ScaledRational(q);
    } else if (out.atoms.empty()) {
        throw std::invalid_argument("measure has no mass to scale");
    }
    return out;
}

json to_json(const ProductMeasure& mu) {
    json j;
    j["m"] = mu.m;
    j["k"] = mu.k;
    json atoms = json::array();
    for (const auto& a : mu.atoms) atoms.push_back({{"zeta", a.zeta}, {"w", a.w}});
    j["atoms"] = atoms;
    if (mu.density1) j["density1"] = to_json(*mu.density1);
    j["density2"] = to_json(mu.h);
    return j;
}

ProductMeasure measure_from_json(const json& j, int m, int k) {
    ProductMeasure mu;
    mu.m = j.value("m", m);
    mu.k = j.value("k", k);
    if (mu.m != m || mu.k != k) throw std::invalid_argument("measure parameters do not match");
    if (j.contains("atoms"))
        for (const auto& a : j.at("atoms")) {
            Atom atom;
            atom.zeta = a.at("zeta").get<std::vector<double>>();
            atom.w = a.at("w").get<double>();
            const double n = norm2(m, atom.zeta.data());
            if (n == 0) throw std::invalid_argument("atom at the origin");
            for (auto& c : atom.zeta) c /= n;
            mu.atoms.push_back(std::move(atom));
        }
    if (j.contains("density1")) mu.density1 = poly_field(j.at("density1"), m);
    if (!j.contains("density2")) throw std::invalid_argument("measure needs density2");
    mu.h = poly_field(j.at("density2"), m);
    if (!mu.density1 && mu.atoms.empty()) throw std::invalid_argument("measure needs atoms or density1");
    mu.validate();
    return mu;
}

std::shared_ptr<const QuadRule> abs_rule(int m) {
    static Memo<int, QuadRule> memo;
    return memo.get(m, [&] { return sphere_rule(m, m == 3 ? 80 : (m == 4 ? 30 : 16)); });
}

double total_variation(const ProductMeasure& mu) {
    mu.validate();
    const auto rule = abs_rule(mu.m);
    std::vector<double> zero(mu.m, 0.0);
    double n1 = 0;
    for (const auto& a : mu.atoms) n1 += std::abs(a.w);
    if (mu.density1) {
        const NumericPolyXU d(*mu.density1);
        n1 += integrate(*rule, [&](const double* z) { return std::abs(d({z, zero.data()})); });
    }
    const NumericPolyXU h(mu.h);
    const double n2 = integrate(*rule, [&](const double* u) { return std::abs(h({zero.data(), u})); });
    return n1 * n2;
}

PoissonExtension::PoissonExtension(const PolyXU& g, const PoissonKernel& kernel) : g_(g), kernel_(&kernel) {
    const OperatorParams prm(kernel.m(), kernel.k());
    if (g.is_zero()) {
        poly_ = g;
    } else if (dirichlet_solver(prm, std::max(g.degree(X), 0))->unique()) {
        poly_ = dirichlet_poly(g, prm).P;
    } else {
        require_hk_valued(g, kernel.k());
    }
    if (poly_) numeric_.emplace(*poly_);
}

double PoissonExtension::operator()(const double* x, const double* v) const {
    if (numeric_) return (*numeric_)({x, v});
    return poisson_integral_poly(g_, *kernel_, x, v);
}

MeasurePoisson::MeasurePoisson(const ProductMeasure& mu, const PoissonKernel& kernel)
    : mu_(mu), kernel_(&kernel), h_(mu.h) {
    mu.validate();
    if (mu.m != kernel.m() || mu.k != kernel.k()) throw std::invalid_argument("measure does not match the kernel");
    if (mu.density1) density_.emplace(*mu.density1 * mu.h, kernel);
}

double MeasurePoisson::atoms_part(const double* x, const double* v) const {
    const int m = mu_.m;
    if (norm2(m, x) >= 1) throw std::domain_error("evaluation point must lie inside the unit ball");
    std::vector<double> a(m), w(m), zero(m, 0.0);
    double s = 0;
    for (const auto& at : mu_.atoms) {
        for (int i = 0; i < m; ++i) a[i] = x[i] - at.zeta[i];
        reflect(m, a.data(), v, w.data());
        s += at.w * classical_poisson(m, x, at.zeta.data()) * h_({zero.data(), w.data()});
    }
    return kernel_->spec().scale() * s;
}

double MeasurePoisson::operator()(const double* x, const double* v) const {
    double s = atoms_part(x, v);
    if (density_) s += (*density_)(x, v);
    return s;
}

double poisson_integral(const ProductMeasure& mu, const PoissonKernel& kernel, const double* x, const double* v) {
    return MeasurePoisson(mu, kernel)(x, v);
}

double slice_norm(const Evaluable& f, double r1, double r2, double p, const QuadRule& rx, const QuadRule& rv) {
    if (!(p >= 1)) throw std::invalid_argument("p must be at least 1");
    const int m = rx.m;
    std::vector<double> x(m), v(m);
    Eigen::MatrixXd row(1, static_cast<Eigen::Index>(rv.size()));
    double acc = 0;
    for (size_t i = 0; i < rx.size(); ++i) {
        for (int c = 0; c < m; ++c) x[c] = r1 * rx.node(i)[c];
        for (size_t j = 0; j < rv.size(); ++j) {
            for (int c = 0; c < m; ++c) v[c] = r2 * rv.node(j)[c];
            row(0, static_cast<Eigen::Index>(j)) = f(x.data(), v.data());
        }
        const double part = partial_norm(row, p, rx.weights.data() + i, rv);
        acc = std::isinf(p) ? std::max(acc, part) : acc + part;
    }
    return finish_norm(acc, p);
}

double slice_norm(const PolyXU& f, double r1, double r2, double p, const QuadRule& rx, const QuadRule& rv) {
    if (!(p >= 1)) throw std::invalid_argument("p must be at least 1");
    if (f.is_zero()) return 0;
    return factor_norm(slice_factors(f, r1, r2, rx, rv), p, rx, rv);
}

double slice_distance(const PolyXU& f, const PolyXU& g, double r1, double r2, double p, const QuadRule& rx,
                      const QuadRule& rv) {
    if (!(p >= 1)) throw std::invalid_argument("p must be at least 1");
    SliceFactors a = slice_factors(f, r1, r2, rx, rv), b = slice_factors(g, 1, 1, rx, rv);
    SliceFactors d;
    d.A.resize(a.A.rows(), a.A.cols() + b.A.cols());
    d.A << a.A, -b.A;
    d.B.resize(a.B.rows(), a.B.cols() + b.B.cols());
    d.B << a.B, b.B;
    if (d.A.cols() == 0) return 0;
    return factor_norm(d, p, rx, rv);
}

std::vector<double> default_radius_grid() { return {0, 0.25, 0.5, 0.75, 0.9, 0.99}; }

double SliceNormReport::max_value() const {
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

namespace {

void finish_report(SliceNormReport& rep, const std::vector<double>& radii) {
    const double slack = 1e-9 * std::max(1.0, rep.bound);
    for (double v : rep.values) {
        rep.ok.push_back(v <= rep.bound + slack);
        if (!rep.ok.back()) ++rep.violations;
    }
    const size_t n = radii.size();
    for (size_t a = 0; a < rep.grid.size(); ++a)
        for (size_t b = 0; b < rep.grid.size(); ++b) {
            if (a == b) continue;
            if (rep.grid[a].first > rep.grid[b].first || rep.grid[a].second > rep.grid[b].second) continue;
            ++rep.monotone_checked;
            if (rep.values[a] > rep.constant * rep.values[b] + 1e-9 * std::max(1.0, rep.values[b]))
                ++rep.monotone_violations;
        }
    (void)n;
}

}  // namespace

SliceNormReport growth_report(const PolyXU& g, const OperatorParams& params, double p,
                              const std::vector<double>& radii) {
    if (!(p >= 1)) throw std::invalid_argument("p must be at least 1");
    const int m = params.m;
    if (g.dim() != m) throw std::invalid_argument("dimension mismatch");
    require_hk_valued(g, params.k);
    PoissonKernel kernel(*calibrated_spec(params));
    PoissonExtension ext(g, kernel);
    if (!ext.exact())
        throw std::domain_error("growth reports need an invertible Dirichlet map (m = 4, k >= 1 is singular here)");
    const QuadRule& rx = *abs_rule(m);
    const QuadRule& rv = *abs_rule(m);

    SliceNormReport rep;
    rep.p = p;
    rep.constant = constant_for(m, params.k);
    rep.reference = slice_norm(g, 1, 1, p, rx, rv);
    rep.bound = rep.constant * rep.reference;
    for (double r1 : radii)
        for (double r2 : radii) {
            rep.grid.emplace_back(r1, r2);
            rep.values.push_back(slice_norm(ext.poly(), r1, r2, p, rx, rv));
        }
    finish_report(rep, radii);
    if (!std::isinf(p)) {
        for (double r : radii) rep.trend.push_back(slice_distance(ext.poly(), g, r, r, p, rx, rv));
        for (size_t i = 1; i < rep.trend.size(); ++i)
            if (rep.trend[i] > rep.trend[i - 1] + 1e-12) rep.trend_decreasing = false;
    }
    rep.note = "boundary function; f = P[g] is the exact Dirichlet polynomial";
    return rep;
}

SliceNormReport growth_report(const ProductMeasure& mu, const PoissonKernel& kernel, const std::vector<double>& radii) {
    MeasurePoisson f(mu, kernel);
    const int m = mu.m;
    const QuadRule rv = light_rule(m);
    SliceNormReport rep;
    rep.p = 1;
    rep.constant = constant_for(m, mu.k);
    rep.reference = total_variation(mu);
    rep.bound = rep.constant * rep.reference;
    std::vector<double> v(m), x(m), t(rv.size());
    for (double r1 : radii)
        for (double r2 : radii) {
            rep.grid.emplace_back(r1, r2);
            const double val = peaked_sphere_integral(mu, r1, [&](const double* xi) {
                for (int c = 0; c < m; ++c) x[c] = r1 * xi[c];
                for (size_t j = 0; j < rv.size(); ++j) {
                    for (int c = 0; c < m; ++c) v[c] = r2 * rv.node(j)[c];
                    t[j] = rv.weights[j] * std::abs(f(x.data(), v.data()));
                }
                return pairwise_sum(t.data(), t.size());
            });
            rep.values.push_back(val);
        }
    finish_report(rep, radii);
    const double top = rep.max_value();
    rep.note = std::string("measure; lower bound ||mu|| <= sup_r ||f_r||_1 ") +
               (top >= rep.reference * (1 - 1e-6) ? "holds" : "not reached") + " on this grid (grid maximum is a lower bound for the supremum)";
    return rep;
}

std::string to_csv(const SliceNormReport& report) {
    std::ostringstream os;
    os << "r1,r2,norm,bound,ok\n";
    for (size_t i = 0; i < report.values.size(); ++i)
        os << format_double(report.grid[i].first) << ',' << format_double(report.grid[i].second) << ','
           << format_double(report.values[i]) << ',' << format_double(report.bound) << ','
           << (report.ok[i] ? "true" : "false") << '\n';
    return os.str();
}

PointGrowthReport point_growth_check(const PolyXU& g, const OperatorParams& params, double p,
                                     const std::vector<PointSample>& samples) {
    const int m = params.m;
    SliceNormReport rep = growth_report(g, params, p);
    PoissonKernel kernel(*calibrated_spec(params));
    PoissonExtension ext(g, kernel);
    PointGrowthReport out;
    out.p = p;
    const double w = omega(m);
    const double raw_scale = std::isinf(p) ? 1.0 : std::pow(w, 2 / p);
    out.hp_norm = raw_scale * rep.max_value();
    const double wexp = std::isinf(p) ? 1.0 : (p - 2) / p;
    out.constant = constant_for(m, params.k) * std::pow(w, wexp) * static_cast<double>(dim_hk(m, params.k));
    for (const auto& s : samples) {
        const double r = norm2(m, s.x.data());
        if (r >= 1) throw std::domain_error("sample must lie inside the unit ball");
        const double growth = std::isinf(p) ? 1.0 : std::pow((1 + r) / std::pow(1 - r, m - 1), 1 / p);
        const double val = std::abs(ext(s.x.data(), s.v.data()));
        const double bound = out.constant * growth * out.hp_norm;
        out.values.push_back(val);
        out.bounds.push_back(bound);
        if (val > bound * (1 + 1e-9) + 1e-12) ++out.violations;
        if (bound > 0) out.worst_ratio = std::max(out.worst_ratio, val / bound);
    }
    return out;
}

void check_lp_exponent(int m, double p) {
    if (!(p >= 1) || !(p < static_cast<double>(m) / (m - 1)))
        throw std::invalid_argument("exponent outside 1 <= p < m/(m-1)");
}

double lp_ball_norm(const ProductMeasure& mu, const PoissonKernel& kernel, double p, int radial_nodes) {
    const int m = mu.m;
    check_lp_exponent(m, p);
    MeasurePoisson f(mu, kernel);
    const QuadRule rv = light_rule(m);
    const double beta = (m - 1) * (1 - p);
    const double q = mu.atoms.empty() ? 1.0 : 1 / (beta + 1);
    std::vector<double> gt, gw;
    gauss_symmetric(radial_nodes, 0.0, gt, gw);
    std::vector<double> x(m), t(rv.size()), radial(gt.size());

    // One atom: |P[mu](x, v)| = C |w| Pois(x, zeta) |h(R v)| and R is orthogonal.
    const bool single = mu.atoms.size() == 1 && !mu.density1;
    double h_mass = 0;
    if (single) {
        const NumericPolyXU hn(mu.h);
        std::vector<double> zero(m, 0.0);
        h_mass = std::pow(kernel.spec().scale() * std::abs(mu.atoms[0].w), p) *
                 integrate(*abs_rule(m), [&](const double* u) { return std::pow(std::abs(hn({zero.data(), u})), p); });
    }
    for (size_t n = 0; n < gt.size(); ++n) {
        const double s = 0.5 * (gt[n] + 1);  // gw sums to 1 = length of [0, 1]
        const double r = 1 - std::pow(s, q);
        const double jac = q * std::pow(s, q - 1);
        double inner;
        if (single) {
            const QuadRule rule = peaked_rule(m, mu.atoms[0].zeta.data(), std::max(1 - r, 1e-6), 16, 2);
            std::vector<double> terms(rule.size());
            for (size_t i = 0; i < rule.size(); ++i)
                terms[i] = rule.weights[i] * std::pow(classical_poisson_hc(m, r, rule.half_chord[i]), p);
            inner = h_mass * pairwise_sum(terms.data(), terms.size());
        } else {
            inner = peaked_sphere_integral(mu, r, [&](const double* xi) {
                for (int c = 0; c < m; ++c) x[c] = r * xi[c];
                for (size_t j = 0; j < rv.size(); ++j)
                    t[j] = rv.weights[j] * std::pow(std::abs(f(x.data(), rv.node(j))), p);
                return pairwise_sum(t.data(), t.size());
            });
        }
        radial[n] = gw[n] * jac * std::pow(r, m - 1) * inner;
    }
    const double w = omega(m);
    return std::pow(w * w * pairwise_sum(radial.data(), radial.size()), 1 / p);
}

LpReport lp_ratio_report(const std::vector<ProductMeasure>& family, const PoissonKernel& kernel, double p) {
    LpReport rep;
    rep.p = p;
    for (const auto& mu : family) {
        rep.norms.push_back(lp_ball_norm(mu, kernel, p));
        rep.variations.push_back(total_variation(mu));
        rep.ratios.push_back(rep.norms.back() / rep.variations.back());
        rep.max_ratio = std::max(rep.max_ratio, rep.ratios.back());
    }
    return rep;
}

double weak_star_gap(const ProductMeasure& mu, const PolyXU& g, double r1, double r2, const PoissonKernel& kernel) {
    const int m = mu.m;
    mu.validate();
    if (g.dim() != m) throw std::invalid_argument("dimension mismatch");
    const NumericPolyXU gn(g), hn(mu.h);
    const int dx = std::max(g.degree(X), 0), du = std::max(g.degree(U), 0);
    const auto ur = quad_rule(m, std::min(30, du + mu.k));
    std::vector<double> zero(m, 0.0), a(m), w(m), x(m), v(m), t(ur->size());

    // limit side: int int g dmu
    double limit = 0;
    for (const auto& at : mu.atoms)
        limit += at.w * integrate(*ur, [&](const double* u) { return gn({at.zeta.data(), u}) * hn({zero.data(), u}); });

    double lhs = 0;
    const double scale = kernel.spec().scale();
    for (const auto& at : mu.atoms) {
        if (at.w == 0) continue;
        QuadRule xr = peaked_rule(m, at.zeta.data(), std::max(1 - r1, 1e-3));
        lhs += at.w * scale * integrate(xr, [&](const double* xi) {
            for (int c = 0; c < m; ++c) {
                x[c] = r1 * xi[c];
                a[c] = x[c] - at.zeta[c];
            }
            for (size_t j = 0; j < ur->size(); ++j) {
                for (int c = 0; c < m; ++c) v[c] = r2 * ur->node(j)[c];
                reflect(m, a.data(), v.data(), w.data());
                t[j] = ur->weights[j] * hn({zero.data(), w.data()}) * gn({xi, ur->node(j)});
            }
            return classical_poisson(m, x.data(), at.zeta.data()) * pairwise_sum(t.data(), t.size());
        });
    }
    if (mu.density1) {
        const PolyXU data = *mu.density1 * mu.h;
        PoissonExtension ext(data, kernel);
        const NumericPolyXU dn(data);
        const auto pr = quad_rule(m, std::min(30, std::max(data.degree(X), 0) + dx));
        const auto qr = quad_rule(m, std::min(30, std::max(data.degree(U), 0) + du));
        std::vector<double> rows(pr->size()), cols(qr->size());
        for (size_t i = 0; i < pr->size(); ++i) {
            for (size_t j = 0; j < qr->size(); ++j) cols[j] = qr->weights[j] * dn({pr->node(i), qr->node(j)}) * gn({pr->node(i), qr->node(j)});
            rows[i] = pr->weights[i] * pairwise_sum(cols.data(), cols.size());
        }
        limit += pairwise_sum(rows.data(), rows.size());
        if (!ext.exact()) throw std::domain_error("weak* check needs an invertible Dirichlet map for densities");
        const PolyXU prod = ext.poly();
        const auto px = quad_rule(m, std::min(30, std::max(prod.degree(X), 0) + dx));
        const auto pv = quad_rule(m, std::min(30, std::max(prod.degree(U), 0) + du));
        const SliceFactors sf = slice_factors(prod, r1, r2, *px, *pv);
        const Eigen::MatrixXd F = sf.A * sf.B.transpose();
        for (size_t i = 0; i < px->size(); ++i) {
            std::vector<double> c2(pv->size());
            for (size_t j = 0; j < pv->size(); ++j)
                c2[j] = pv->weights[j] * F(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * gn({px->node(i), pv->node(j)});
            lhs += px->weights[i] * pairwise_sum(c2.data(), c2.size());
        }
    }
    return std::abs(lhs - limit);
}

MeanValueReport mean_value_check(const Evaluable& f, const OperatorParams& params, const double* a, const double* v,
                                 double radius, double p, int samples, std::uint64_t seed) {
    const int m = params.m;
    if (norm2(m, a) + radius >= 1) throw std::domain_error("ball must lie inside the unit ball");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> unif(0, 1);
    std::vector<double> d(m), x(m), w(m);
    double sum = 0, sum2 = 0;
    for (int s = 0; s < samples; ++s) {
        double n = 0;
        for (auto& c : d) {
            c = g(rng);
            n += c * c;
        }
        const double rho = radius * std::pow(unif(rng), 1.0 / m) / std::sqrt(n);
        for (int c = 0; c < m; ++c) {
            d[c] *= rho;
            x[c] = a[c] + d[c];
        }
        reflect(m, d.data(), v, w.data());
        const double val = std::pow(std::abs(f(x.data(), w.data())), p);
        sum += val;
        sum2 += val * val;
    }
    const double C = std::pow(constant_for(m, params.k), p);
    const double mean = sum / samples;
    const double var = std::max(0.0, sum2 / samples - mean * mean);
    MeanValueReport rep;
    rep.lhs = std::pow(std::abs(f(a, v)), p);
    rep.rhs = C * mean;
    rep.stderr_rhs = C * std::sqrt(var / samples);
    rep.ok = rep.lhs <= rep.rhs + 3 * rep.stderr_rhs + 1e-12;
    return rep;
}

double dk_residual(const Evaluable& f, const OperatorParams& params, const double* a, const double* v, double step) {
    const int m = params.m;
    const auto hk = hk_data(m, params.k);
    const auto& phi = hk->basis.vectors;
    const size_t nb = phi.size();
    std::vector<NumericPolyXU> phin(phi.begin(), phi.end());

    // sample directions for the fit in H_k
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> g;
    const size_t ns = 2 * nb + 2;
    std::vector<std::vector<double>> vs(ns, std::vector<double>(m));
    std::vector<double> zero(m, 0.0);
    Eigen::MatrixXd A(static_cast<Eigen::Index>(ns), static_cast<Eigen::Index>(nb));
    for (size_t s = 0; s < ns; ++s) {
        double n = 0;
        for (auto& c : vs[s]) {
            c = g(rng);
            n += c * c;
        }
        for (auto& c : vs[s]) c /= std::sqrt(n);
        for (size_t j = 0; j < nb; ++j) A(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)) = phin[j]({zero.data(), vs[s].data()});
    }
    const auto qr = A.colPivHouseholderQr();

    auto at = [&](const std::vector<std::pair<int, int>>& shifts, const std::vector<double>& vv) {
        std::vector<double> x(a, a + m);
        for (const auto& [dir, n] : shifts) x[dir] += n * step;
        return f(x.data(), vv.data());
    };
    // derivative of order 0, 1 or 2 in x at a, for one direction sample
    auto deriv = [&](int i, int j, const std::vector<double>& vv) {
        const double h = step;
        if (i < 0) return at({}, vv);
        if (j < 0)
            return (-at({{i, 2}}, vv) + 8 * at({{i, 1}}, vv) - 8 * at({{i, -1}}, vv) + at({{i, -2}}, vv)) / (12 * h);
        if (i == j)
            return (-at({{i, 2}}, vv) + 16 * at({{i, 1}}, vv) - 30 * at({}, vv) + 16 * at({{i, -1}}, vv) - at({{i, -2}}, vv)) /
                   (12 * h * h);
        auto mixed = [&](int s) {
            return (at({{i, s}, {j, s}}, vv) - at({{i, s}, {j, -s}}, vv) - at({{i, -s}, {j, s}}, vv) +
                    at({{i, -s}, {j, -s}}, vv)) /
                   (4.0 * s * s * h * h);
        };
        return (4 * mixed(1) - mixed(2)) / 3;
    };

    // Taylor model in y = x - a with H_k coefficients
    PolyXU model(m);
    auto add = [&](int i, int j) {
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(ns));
        for (size_t s = 0; s < ns; ++s) rhs(static_cast<Eigen::Index>(s)) = deriv(i, j, vs[s]);
        const Eigen::VectorXd c = qr.solve(rhs);
        PolyXU::Key key(2 * m, 0);
        double fact = 1;
        if (i >= 0) ++key[i];
        if (j >= 0) ++key[j];
        if (i >= 0 && i == j) fact = 0.5;
        PolyXU mono(m);
        mono.add_term(key, ScaledRational(1));
        for (size_t b = 0; b < nb; ++b) {
            const double coef = fact * c(static_cast<Eigen::Index>(b));
            if (coef != 0) model += mono * phi[b] * ScaledRational(mpq_class(coef));
        }
    };
    add(-1, -1);
    for (int i = 0; i < m; ++i) {
        add(i, -1);
        for (int j = i; j < m; ++j) add(i, j);
    }
    const PolyXU dk = apply_Dk(model, params);
    return NumericPolyXU(dk)({zero.data(), v});
}

}  // namespace bosonic
