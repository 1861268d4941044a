#pragma once

#include "bosonic/kernels.hpp"
#include "bosonic/quadrature.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace bosonic {

/**
 * Calibrated Poisson kernel constant. c_mk carries omega grade -1;
 * scale() is (c_mk / 2) * omega_m, the factor in front of the kernel when
 * both integrations use the normalized measure.
 */
struct PoissonKernelSpec {
    int m = 0;
    int k = 0;
    ScaledRational c_mk;
    double numeric = 0;   // (c_mk / 2) * omega before snapping
    double residual = 0;  // off-center reproduction error after snapping

    double scale() const;
    double c_half() const;  // c_mk / 2 as a double
};

// (1 - |x|^2) / |x - zeta|^m
double classical_poisson(int m, const double* x, const double* zeta);
// Same kernel from the radius of x and the half chord sin(theta/2) to zeta.
double classical_poisson_hc(int m, double r, double half_chord);

// v - 2 <a,v> a / |a|^2; the sandwich a v a / |a|^2 with e_i^2 = -1.
void reflect(int m, const double* a, const double* v, double* out);

// Fits c_mk so that constant-in-x data h(u) in H_k is reproduced.
PoissonKernelSpec calibrate_cmk(const OperatorParams& params);
std::shared_ptr<const PoissonKernelSpec> calibrated_spec(const OperatorParams& params);

class PoissonKernel {
public:
    explicit PoissonKernel(const PoissonKernelSpec& spec);

    int m() const { return spec_.m; }
    int k() const { return spec_.k; }
    const PoissonKernelSpec& spec() const { return spec_; }

    // Kernel against dS(u) dS(zeta).
    double raw(const double* zeta, const double* x, const double* u, const double* v) const;
    // Kernel against dsigma(u) dsigma(zeta); omega^2 times raw.
    double normalized(const double* zeta, const double* x, const double* u, const double* v) const;
    // Normalized zonal kernel of H_k.
    double zonal(const double* a, const double* b) const;

private:
    PoissonKernelSpec spec_;
    NumericPolyXU zonal_;
};

enum class PoissonMethod { Full, Reduced };

// Integration rule in zeta adapted to the evaluation point x.
QuadRule zeta_rule(int m, const double* x);

/**
 * Poisson integral of boundary data f(zeta, u), f(zeta, .) in H_k, at
 * (x, v). Full integrates the kernel in both variables; Reduced uses the
 * reproducing property of the zonal kernel in u.
 */
double poisson_integral_poly(const PolyXU& f, const PoissonKernel& kernel, const double* x, const double* v,
                             PoissonMethod method = PoissonMethod::Reduced);

struct KernelSample {
    std::vector<double> zeta, x, u, v;
};

// zeta, u on the sphere, |x| = radius, v in the closed ball.
std::vector<KernelSample> kernel_samples(int m, double radius, int count, std::uint64_t seed);

// Largest |P - sum_{l <= L} J_{l,k}| over the samples, in raw units.
double poisson_series_gap(const OperatorParams& params, const PoissonKernel& kernel, int L,
                          const std::vector<KernelSample>& samples);

// J_{l,k}(x, x, u, u) at unit x, u with <x, u> = t.
double jlk_diagonal(const OperatorParams& params, int l, double t);

}  // namespace bosonic
