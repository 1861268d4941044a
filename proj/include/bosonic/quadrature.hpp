#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

namespace bosonic {

/**
 * Cubature on S^{m-1} for the normalized surface measure (weights sum to 1).
 *
 * half_chord is filled for peaked rules: sin(theta/2) where theta is the
 * angle to the pole, so |r*pole - node|^2 = (1-r)^2 + 4 r half_chord^2
 * without cancellation.
 */
struct QuadRule {
    int m = 0;
    int degree = 0;
    bool validated = false;
    std::vector<double> nodes;  // m entries per node
    std::vector<double> weights;
    std::vector<double> half_chord;

    size_t size() const { return weights.size(); }
    const double* node(size_t i) const { return nodes.data() + i * m; }
};

// Gauss rule for the weight (1-t^2)^a on [-1,1], weights normalized to 1.
void gauss_symmetric(int n, double a, std::vector<double>& t, std::vector<double>& w);

// Recursive product rule exact through the given degree; not validated.
QuadRule sphere_rule(int m, int degree);

// Validated rule, m in {3,4,5}, degree <= 30. Cached.
std::shared_ptr<const QuadRule> quad_rule(int m, int degree);

// Largest relative deviation from the exact monomial moments up to degree.
double validate_rule(const QuadRule& rule, int degree);

/**
 * Rule refined around a pole: graded panels in the polar angle, starting at
 * width/4 and doubling, with an order-`order` Gauss-Legendre rule per panel
 * and a degree-`ring_degree` rule on the orthogonal sphere.
 */
QuadRule peaked_rule(int m, const double* pole, double width, int order = 16, int ring_degree = 24);

// Uniform random points on the sphere with equal weights.
QuadRule monte_carlo_rule(int m, size_t n, std::uint64_t seed);

// Pairwise sum of v[i] over [0, n).
double pairwise_sum(const double* v, size_t n);

}  // namespace bosonic
