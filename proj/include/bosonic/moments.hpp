#pragma once

#include "bosonic/polynomial.hpp"

namespace bosonic {

enum class Domain { Sphere, Ball };

/**
 * Integral of x^alpha over the sphere (resp. ball) divided by omega_m.
 * Zero when any exponent is odd.
 */
mpq_class moment_ratio(const MultiIndex& alpha, int m, Domain domain);

// Same, for a slice of a longer exponent array.
mpq_class moment_ratio(const int* alpha, int m, Domain domain);

}  // namespace bosonic
