#pragma once

#include "bosonic/poisson.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bosonic {

struct Atom {
    std::vector<double> zeta;
    double w = 0;
};

/**
 * mu = mu1 x mu2 on S x S with mu1 = sum w_i delta_{zeta_i} + density1 dsigma
 * and dmu2 = h dsigma, h in H_k. All measures are relative to the
 * normalized sigma.
 */
struct ProductMeasure {
    int m = 0;
    int k = 0;
    std::vector<Atom> atoms;
    std::optional<PolyXU> density1;  // polynomial in the x block
    PolyXU h;                        // element of H_k in the u block

    void validate() const;
    ProductMeasure scaled(double c) const;
};

json to_json(const ProductMeasure& mu);
ProductMeasure measure_from_json(const json& j, int m, int k);

using Evaluable = std::function<double(const double* x, const double* v)>;

// Dense product rule for integrands that are continuous but not smooth.
std::shared_ptr<const QuadRule> abs_rule(int m);

double total_variation(const ProductMeasure& mu);

/**
 * Poisson extension of polynomial boundary data: the exact Dirichlet
 * polynomial when the Dirichlet map is invertible, quadrature otherwise.
 */
class PoissonExtension {
public:
    PoissonExtension(const PolyXU& g, const PoissonKernel& kernel);

    double operator()(const double* x, const double* v) const;
    bool exact() const { return poly_.has_value(); }
    const PolyXU& boundary() const { return g_; }
    // Requires exact().
    const PolyXU& poly() const { return *poly_; }

private:
    PolyXU g_;
    const PoissonKernel* kernel_;
    std::optional<PolyXU> poly_;
    std::optional<NumericPolyXU> numeric_;
};

class MeasurePoisson {
public:
    MeasurePoisson(const ProductMeasure& mu, const PoissonKernel& kernel);

    double operator()(const double* x, const double* v) const;
    double atoms_part(const double* x, const double* v) const;
    const ProductMeasure& measure() const { return mu_; }
    const PoissonKernel& kernel() const { return *kernel_; }
    const std::optional<PoissonExtension>& density_part() const { return density_; }

private:
    ProductMeasure mu_;
    const PoissonKernel* kernel_;
    NumericPolyXU h_;
    std::optional<PoissonExtension> density_;
};

double poisson_integral(const ProductMeasure& mu, const PoissonKernel& kernel, const double* x, const double* v);

// ||f_{r1,r2}||_p over sigma x sigma; p = infinity takes the max over nodes.
double slice_norm(const Evaluable& f, double r1, double r2, double p, const QuadRule& rx, const QuadRule& rv);
// Same for a polynomial, evaluated as a matrix product over the node sets.
double slice_norm(const PolyXU& f, double r1, double r2, double p, const QuadRule& rx, const QuadRule& rv);
// ||f_{r1,r2} - g||_p for polynomials.
double slice_distance(const PolyXU& f, const PolyXU& g, double r1, double r2, double p, const QuadRule& rx,
                      const QuadRule& rv);

std::vector<double> default_radius_grid();

struct SliceNormReport {
    double p = 1;
    std::vector<std::pair<double, double>> grid;
    std::vector<double> values;
    std::vector<bool> ok;
    double reference = 0;  // ||g||_p or ||mu||
    double constant = 1;   // (m+2k-2)/(m-2)
    double bound = 0;      // constant * reference
    int violations = 0;
    // ||f_{r}||_p <= constant * ||f_{s}||_p for grid pairs r <= s
    int monotone_checked = 0;
    int monotone_violations = 0;
    // ||f_{r,r} - g||_p along the diagonal of the grid
    std::vector<double> trend;
    bool trend_decreasing = true;
    std::string note;

    double max_value() const;
};

// Case 2: boundary function g(zeta, u), f = P[g].
SliceNormReport growth_report(const PolyXU& g, const OperatorParams& params, double p,
                              const std::vector<double>& radii = default_radius_grid());
// Case 1: measure, p = 1.
SliceNormReport growth_report(const ProductMeasure& mu, const PoissonKernel& kernel,
                              const std::vector<double>& radii = default_radius_grid());

std::string to_csv(const SliceNormReport& report);

struct PointSample {
    std::vector<double> x, v;
};

struct PointGrowthReport {
    double p = 1;
    double constant = 0;  // c_{m,k,p}
    double hp_norm = 0;   // grid maximum, raw measures
    std::vector<double> values, bounds;
    int violations = 0;
    double worst_ratio = 0;
};

PointGrowthReport point_growth_check(const PolyXU& g, const OperatorParams& params, double p,
                                     const std::vector<PointSample>& samples);

// Throws std::invalid_argument unless 1 <= p < m/(m-1).
void check_lp_exponent(int m, double p);

// (int_B int_S |P[mu](x,v)|^p dS(v) dx)^(1/p), raw measures.
double lp_ball_norm(const ProductMeasure& mu, const PoissonKernel& kernel, double p, int radial_nodes = 24);

struct LpReport {
    double p = 1;
    std::vector<double> norms, variations, ratios;
    double max_ratio = 0;
};

LpReport lp_ratio_report(const std::vector<ProductMeasure>& family, const PoissonKernel& kernel, double p);

// |int int P[mu]_{r1,r2} g dsigma dsigma - int int g dmu|
double weak_star_gap(const ProductMeasure& mu, const PolyXU& g, double r1, double r2, const PoissonKernel& kernel);

struct MeanValueReport {
    double lhs = 0;  // |f(a,v)|^p
    double rhs = 0;  // constant^p * mean of |f(x, R_{x-a} v)|^p over B(a, r)
    double stderr_rhs = 0;
    bool ok = true;
};

MeanValueReport mean_value_check(const Evaluable& f, const OperatorParams& params, const double* a, const double* v,
                                 double radius, double p, int samples, std::uint64_t seed);

/**
 * D_k applied to f at (a, v). f(x, .) must lie in H_k; the u-dependence is
 * fitted exactly and x-derivatives use fourth-order central differences.
 */
double dk_residual(const Evaluable& f, const OperatorParams& params, const double* a, const double* v,
                   double step = 1e-2);

}  // namespace bosonic
