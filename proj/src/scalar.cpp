#include "bosonic/scalar.hpp"

#include <cmath>
#include <stdexcept>

namespace bosonic {

double omega(int m) {
    return 2.0 * std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m);
}

ScaledRational::ScaledRational(long v) : value_(v) {}

ScaledRational::ScaledRational(mpq_class v, int omega_pow)
    : value_(std::move(v)), omega_pow_(omega_pow) {
    canonicalize();
}

ScaledRational ScaledRational::frac(long num, long den, int omega_pow) {
    if (den == 0) throw std::domain_error("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return ScaledRational(mpq_class(num, static_cast<unsigned long>(den)), omega_pow);
}

ScaledRational ScaledRational::parse(const std::string& num, const std::string& den,
                                     int omega_pow) {
    mpz_class n, d;
    if (n.set_str(num, 10) != 0 || d.set_str(den, 10) != 0)
        throw std::invalid_argument("malformed rational " + num + "/" + den);
    if (d <= 0) throw std::invalid_argument("denominator must be positive");
    return ScaledRational(mpq_class(n, d), omega_pow);
}

void ScaledRational::canonicalize() {
    value_.canonicalize();
    if (sgn(value_) == 0) omega_pow_ = 0;
}

double ScaledRational::to_double(int m) const {
    double v = value_.get_d();
    if (omega_pow_ != 0) v *= std::pow(omega(m), omega_pow_);
    return v;
}

std::string ScaledRational::to_string() const {
    std::string s = value_.get_str();
    if (omega_pow_ == 1) s += "*w";
    else if (omega_pow_ != 0) s += "*w^" + std::to_string(omega_pow_);
    return s;
}

ScaledRational ScaledRational::operator-() const {
    ScaledRational r = *this;
    r.value_ = -r.value_;
    return r;
}

ScaledRational& ScaledRational::operator+=(const ScaledRational& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (omega_pow_ != o.omega_pow_) throw std::domain_error("omega grade mismatch on add");
    value_ += o.value_;
    canonicalize();
    return *this;
}

ScaledRational& ScaledRational::operator-=(const ScaledRational& o) {
    return *this += -o;
}

ScaledRational& ScaledRational::operator*=(const ScaledRational& o) {
    value_ *= o.value_;
    omega_pow_ += o.omega_pow_;
    canonicalize();
    return *this;
}

ScaledRational& ScaledRational::operator/=(const ScaledRational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    value_ /= o.value_;
    omega_pow_ -= o.omega_pow_;
    canonicalize();
    return *this;
}

}  // namespace bosonic
