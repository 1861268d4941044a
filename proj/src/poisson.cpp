#include "bosonic/poisson.hpp"

#include "bosonic/cache.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace bosonic {

namespace {

// Best rational approximation of x with denominator at most max_den.
mpq_class snap_rational(double x, long max_den) {
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        const double a = std::floor(r);
        const long ai = static_cast<long>(a);
        const long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const double frac = r - a;
        if (std::abs(static_cast<double>(p1) / q1 - x) <= 1e-14 * std::abs(x) || frac < 1e-15) break;
        r = 1 / frac;
    }
    return mpq_class(p1, q1);
}

std::vector<std::vector<double>> calibration_directions(int m) {
    std::vector<std::vector<double>> out;
    for (int j = 0; j < 4; ++j) {
        std::vector<double> v(m);
        double n = 0;
        for (int i = 0; i < m; ++i) {
            v[i] = std::cos(1.3 * (i + 1) + 0.7 * j) + (i == j % m ? 0.5 : 0.0);
            n += v[i] * v[i];
        }
        for (auto& x : v) x /= std::sqrt(n);
        out.push_back(std::move(v));
    }
    return out;
}

double dot(int m, const double* a, const double* b) {
    double s = 0;
    for (int i = 0; i < m; ++i) s += a[i] * b[i];
    return s;
}

double eval_xu(const NumericPolyXU& f, const double* x, const double* u) { return f({x, u}); }

}  // namespace

double PoissonKernelSpec::scale() const { return c_mk.to_double(m) * omega(m) / 2; }

double PoissonKernelSpec::c_half() const { return c_mk.to_double(m) / 2; }

double classical_poisson(int m, const double* x, const double* zeta) {
    double xx = 0, d2 = 0;
    for (int i = 0; i < m; ++i) {
        xx += x[i] * x[i];
        d2 += (x[i] - zeta[i]) * (x[i] - zeta[i]);
    }
    return (1 - xx) / std::pow(d2, 0.5 * m);
}

double classical_poisson_hc(int m, double r, double half_chord) {
    const double d2 = (1 - r) * (1 - r) + 4 * r * half_chord * half_chord;
    return (1 - r) * (1 + r) / std::pow(d2, 0.5 * m);
}

void reflect(int m, const double* a, const double* v, double* out) {
    const double aa = dot(m, a, a);
    const double av = dot(m, a, v);
    for (int i = 0; i < m; ++i) out[i] = v[i] - 2 * av * a[i] / aa;
}

PoissonKernel::PoissonKernel(const PoissonKernelSpec& spec) : spec_(spec), zonal_(zonal_kernel(spec.m, spec.k)) {}

double PoissonKernel::zonal(const double* a, const double* b) const { return zonal_({a, b}); }

double PoissonKernel::normalized(const double* zeta, const double* x, const double* u, const double* v) const {
    const int m = spec_.m;
    std::vector<double> a(m), eta(m);
    for (int i = 0; i < m; ++i) a[i] = x[i] - zeta[i];
    reflect(m, a.data(), u, eta.data());
    return spec_.scale() * classical_poisson(m, x, zeta) * zonal(eta.data(), v);
}

double PoissonKernel::raw(const double* zeta, const double* x, const double* u, const double* v) const {
    const double w = omega(spec_.m);
    return normalized(zeta, x, u, v) / (w * w);
}

namespace {

// Integral of Z(R_{x - zeta} u, v) h(u) against the kernel with unit scale.
double unit_scale_integral(const PoissonKernel& K, const NumericPolyXU& h, const double* x, const double* v,
                           const QuadRule& zr, const QuadRule& ur) {
    const int m = K.m();
    std::vector<double> a(m), eta(m), zero(m, 0.0);
    std::vector<double> outer(zr.size());
    std::vector<double> inner(ur.size());
    for (size_t i = 0; i < zr.size(); ++i) {
        const double* z = zr.node(i);
        for (int c = 0; c < m; ++c) a[c] = x[c] - z[c];
        for (size_t j = 0; j < ur.size(); ++j) {
            reflect(m, a.data(), ur.node(j), eta.data());
            inner[j] = ur.weights[j] * K.zonal(eta.data(), v) * eval_xu(h, zero.data(), ur.node(j));
        }
        outer[i] = zr.weights[i] * classical_poisson(m, x, z) * pairwise_sum(inner.data(), inner.size());
    }
    return pairwise_sum(outer.data(), outer.size());
}

}  // namespace

PoissonKernelSpec calibrate_cmk(const OperatorParams& params) {
    const int m = params.m, k = params.k;
    if (m > 5) throw std::invalid_argument("calibration supports m <= 5");
    PoissonKernelSpec spec;
    spec.m = m;
    spec.k = k;
    spec.c_mk = ScaledRational(2, 1, -1);
    PoissonKernel unit(spec);
    const NumericPolyXU h(hk_basis(m, k).vectors.front());
    std::vector<double> zero(m, 0.0);

    // at x = 0 the integrand is a polynomial of degree 2k in zeta and in u
    auto exact = quad_rule(m, 2 * k);
    double num = 0, den = 0;
    for (const auto& v : calibration_directions(m)) {
        const double j = unit_scale_integral(unit, h, zero.data(), v.data(), *exact, *exact);
        const double target = eval_xu(h, zero.data(), v.data());
        num += target * j;
        den += j * j;
    }
    if (den == 0) throw std::runtime_error("calibration equation is degenerate");
    spec.numeric = num / den;
    const mpq_class s = snap_rational(spec.numeric, 10000);
    if (std::abs(s.get_d() - spec.numeric) > 1e-10 * std::abs(spec.numeric))
        throw std::runtime_error("calibration constant is not a small rational");
    spec.c_mk = ScaledRational(mpq_class(2 * s), -1);

    // off-center check with the snapped constant
    PoissonKernel K(spec);
    const PolyXU hx = hk_basis(m, k).vectors.front();
    std::vector<double> x(m, 0.0);
    x[0] = 0.3;
    double worst = 0;
    for (const auto& v : calibration_directions(m)) {
        const double got = poisson_integral_poly(hx, K, x.data(), v.data(), PoissonMethod::Reduced);
        worst = std::max(worst, std::abs(got - eval_xu(h, zero.data(), v.data())));
    }
    spec.residual = worst;
    if (worst > 1e-8)
        throw std::runtime_error("calibration residual " + std::to_string(worst) + " above tolerance");
    return spec;
}

std::shared_ptr<const PoissonKernelSpec> calibrated_spec(const OperatorParams& params) {
    static Memo<std::pair<int, int>, PoissonKernelSpec> memo;
    return memo.get({params.m, params.k}, [&] { return calibrate_cmk(params); });
}

QuadRule zeta_rule(int m, const double* x) {
    double r = 0;
    for (int i = 0; i < m; ++i) r += x[i] * x[i];
    r = std::sqrt(r);
    if (r >= 1) throw std::domain_error("evaluation point must lie inside the unit ball");
    if (r == 0) return *quad_rule(m, 30);
    return peaked_rule(m, x, std::max(1 - r, 1e-3), 16, m >= 5 ? 16 : 24);
}

double poisson_integral_poly(const PolyXU& f, const PoissonKernel& kernel, const double* x, const double* v,
                             PoissonMethod method) {
    const int m = kernel.m();
    if (f.dim() != m) throw std::invalid_argument("dimension mismatch");
    require_hk_valued(f, kernel.k());
    const NumericPolyXU fn(f);
    const QuadRule zr = zeta_rule(m, x);
    double r = 0;
    for (int i = 0; i < m; ++i) r += x[i] * x[i];
    r = std::sqrt(r);
    const bool peaked = !zr.half_chord.empty();

    std::vector<double> a(m), w(m);
    std::vector<double> terms(zr.size());
    std::shared_ptr<const QuadRule> ur;
    std::vector<double> inner;
    if (method == PoissonMethod::Full) {
        int du = 0;
        for (const auto& [key, c] : f.terms()) {
            int d = 0;
            for (int i = 0; i < m; ++i) d += key[m + i];
            du = std::max(du, d);
        }
        ur = quad_rule(m, std::min(30, du + kernel.k()));
        inner.resize(ur->size());
    }
    for (size_t i = 0; i < zr.size(); ++i) {
        const double* z = zr.node(i);
        const double pois = peaked ? classical_poisson_hc(m, r, zr.half_chord[i]) : classical_poisson(m, x, z);
        for (int c = 0; c < m; ++c) a[c] = x[c] - z[c];
        double val;
        if (method == PoissonMethod::Reduced) {
            reflect(m, a.data(), v, w.data());
            val = fn({z, w.data()});
        } else {
            for (size_t j = 0; j < ur->size(); ++j) {
                reflect(m, a.data(), ur->node(j), w.data());
                inner[j] = ur->weights[j] * kernel.zonal(w.data(), v) * fn({z, ur->node(j)});
            }
            val = pairwise_sum(inner.data(), inner.size());
        }
        terms[i] = zr.weights[i] * pois * val;
    }
    return kernel.spec().scale() * pairwise_sum(terms.data(), terms.size());
}

std::vector<KernelSample> kernel_samples(int m, double radius, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> unif(0, 1);
    auto unit = [&] {
        std::vector<double> p(m);
        double n = 0;
        for (auto& c : p) {
            c = g(rng);
            n += c * c;
        }
        for (auto& c : p) c /= std::sqrt(n);
        return p;
    };
    std::vector<KernelSample> out;
    for (int s = 0; s < count; ++s) {
        KernelSample ks;
        ks.zeta = unit();
        ks.x = unit();
        for (auto& c : ks.x) c *= radius;
        ks.u = unit();
        ks.v = unit();
        const double rv = std::pow(unif(rng), 1.0 / m);
        for (auto& c : ks.v) c *= rv;
        out.push_back(std::move(ks));
    }
    return out;
}

double poisson_series_gap(const OperatorParams& params, const PoissonKernel& kernel, int L,
                          const std::vector<KernelSample>& samples) {
    if (kernel.m() != params.m || kernel.k() != params.k) throw std::invalid_argument("kernel does not match parameters");
    std::vector<std::shared_ptr<const Kernel4>> J;
    for (int l = 0; l <= L; ++l) J.push_back(jlk_kernel(params, l));
    double worst = 0;
    for (const auto& s : samples) {
        double series = 0;
        for (const auto& j : J) series += j->evaluate(s.zeta.data(), s.x.data(), s.u.data(), s.v.data());
        const double direct = kernel.raw(s.zeta.data(), s.x.data(), s.u.data(), s.v.data());
        worst = std::max(worst, std::abs(direct - series));
    }
    return worst;
}

double jlk_diagonal(const OperatorParams& params, int l, double t) {
    const int m = params.m;
    std::vector<double> x(m, 0.0), u(m, 0.0);
    x[0] = 1;
    u[0] = t;
    u[1] = std::sqrt(std::max(0.0, 1 - t * t));
    return jlk_kernel(params, l)->evaluate(x.data(), x.data(), u.data(), u.data());
}

}  // namespace bosonic
