#pragma once

#include <gmpxx.h>

#include <concepts>
#include <string>

namespace bosonic {

// Surface area of the unit sphere S^{m-1}.
double omega(int m);

/**
 * Exact rational times an integer power of omega_m.
 *
 * Zero is canonical: a zero value always carries grade 0, so it can be
 * added to a scalar of any grade.
 */
class ScaledRational {
public:
    ScaledRational() = default;
    ScaledRational(long v);  // NOLINT(google-explicit-constructor)
    explicit ScaledRational(mpq_class v, int omega_pow = 0);
    template <std::integral A, std::integral B>
    ScaledRational(A num, B den, int omega_pow = 0) : ScaledRational(frac(num, den, omega_pow)) {}

    static ScaledRational frac(long num, long den, int omega_pow = 0);
    static ScaledRational parse(const std::string& num, const std::string& den,
                                int omega_pow);

    const mpq_class& value() const { return value_; }
    int omega_pow() const { return omega_pow_; }
    bool is_zero() const { return sgn(value_) == 0; }

    mpz_class num() const { return value_.get_num(); }
    mpz_class den() const { return value_.get_den(); }

    double to_double(int m) const;
    std::string to_string() const;

    ScaledRational operator-() const;
    ScaledRational& operator+=(const ScaledRational& o);
    ScaledRational& operator-=(const ScaledRational& o);
    ScaledRational& operator*=(const ScaledRational& o);
    ScaledRational& operator/=(const ScaledRational& o);

    friend ScaledRational operator+(ScaledRational a, const ScaledRational& b) { return a += b; }
    friend ScaledRational operator-(ScaledRational a, const ScaledRational& b) { return a -= b; }
    friend ScaledRational operator*(ScaledRational a, const ScaledRational& b) { return a *= b; }
    friend ScaledRational operator/(ScaledRational a, const ScaledRational& b) { return a /= b; }

    bool operator==(const ScaledRational& o) const {
        return omega_pow_ == o.omega_pow_ && value_ == o.value_;
    }
    bool operator!=(const ScaledRational& o) const { return !(*this == o); }

private:
    void canonicalize();

    mpq_class value_{0};
    int omega_pow_ = 0;
};

}  // namespace bosonic
