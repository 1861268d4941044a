#include "bosonic/moments.hpp"

namespace bosonic {

mpq_class moment_ratio(const int* alpha, int m, Domain domain) {
    int total = 0;
    mpz_class num = 1;
    for (int i = 0; i < m; ++i) {
        if (alpha[i] % 2) return 0;
        total += alpha[i];
        for (int j = alpha[i] - 1; j > 1; j -= 2) num *= j;
    }
    mpz_class den = 1;
    for (int j = 0; j < total / 2; ++j) den *= m + 2 * j;
    if (domain == Domain::Ball) den *= m + total;
    mpq_class r(num, den);
    r.canonicalize();
    return r;
}

mpq_class moment_ratio(const MultiIndex& alpha, int m, Domain domain) {
    if (static_cast<int>(alpha.size()) != m) throw std::invalid_argument("multi-index length mismatch");
    return moment_ratio(alpha.data(), m, domain);
}

}  // namespace bosonic
