#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>

#include "padicds/errors.hpp"

namespace padicds {

using Int = mpz_class;

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator. The universal scalar of the library: measures, radii and
/// approximation-function values are all exact Rationals.
class Rational {
  public:
    Rational() : q_(0) {}
    Rational(long long n) : q_(static_cast<long>(n)) {} // NOLINT(google-explicit-constructor)
    Rational(const Int& n) : q_(n) {}                   // NOLINT(google-explicit-constructor)

    Rational(const Int& num, const Int& den) {
        if (den == 0) throw InvalidInput("Rational: zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }

    Rational(long long num, long long den)
        : Rational(Int(static_cast<long>(num)), Int(static_cast<long>(den))) {}

    // Accepts "num/den" or a plain integer string.
    static Rational parse(const std::string& text) {
        auto slash = text.find('/');
        try {
            if (slash == std::string::npos) return Rational(Int(text));
            return Rational(Int(text.substr(0, slash)), Int(text.substr(slash + 1)));
        } catch (const std::invalid_argument&) {
            throw InvalidInput("Rational: cannot parse \"" + text + "\"");
        }
    }

    Int num() const { return q_.get_num(); }
    Int den() const { return q_.get_den(); }

    bool is_zero() const { return q_ == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw InvalidInput("Rational: division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.q_, b.q_);
        if (c < 0) return std::strong_ordering::less;
        if (c > 0) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    /// Largest integer <= *this.
    Int floor() const {
        Int f;
        mpz_fdiv_q(f.get_mpz_t(), q_.get_num().get_mpz_t(), q_.get_den().get_mpz_t());
        return f;
    }

    /// Canonical "num/den" rendering (den kept even when it is 1).
    std::string str() const {
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

    /// Human rendering: "num" when integral, "num/den" otherwise.
    std::string pretty() const {
        if (is_integer()) return q_.get_num().get_str();
        return str();
    }

  private:
    explicit Rational(mpq_class q) : q_(std::move(q)) {}

    mpq_class q_; // canonical by construction
};

inline Int pow_int(const Int& base, unsigned long exp) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

inline Int pow_int(long long base, unsigned long exp) {
    return pow_int(Int(static_cast<long>(base)), exp);
}

/// p^e as a Rational, with e allowed to be negative.
inline Rational pow_rational(long long base, long e) {
    if (e >= 0) return Rational(pow_int(base, static_cast<unsigned long>(e)));
    return Rational(Int(1), pow_int(base, static_cast<unsigned long>(-e)));
}

} // namespace padicds
