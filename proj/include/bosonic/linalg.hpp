#pragma once

#include <gmpxx.h>

#include <vector>

namespace bosonic {

using QVector = std::vector<mpq_class>;
using QMatrix = std::vector<QVector>;

struct Echelon {
    QMatrix rref;             // reduced row echelon form, zero rows dropped
    std::vector<int> pivots;  // pivot column of each row
};

/**
 * Reduced row echelon form. Forward elimination is fraction-free (Bareiss)
 * on an integer scaling of each row; the pivot in each column is the first
 * nonzero row at or below the current one.
 */
Echelon row_reduce(const QMatrix& a, int cols);

int rank(const QMatrix& a, int cols);

// Basis of {v : a v = 0}; one vector per free column, which carries a 1.
QMatrix nullspace(const QMatrix& a, int cols, std::vector<int>* free_cols = nullptr);

// Inverse of a square matrix; throws std::domain_error when singular.
QMatrix inverse(const QMatrix& a);

// True when every leading principal minor is positive.
bool leading_minors_positive(const QMatrix& a);

QVector mat_vec(const QMatrix& a, const QVector& v);

}  // namespace bosonic
