#include "padicds/padic.hpp"

#include "padicds/errors.hpp"

namespace padicds {

std::optional<long> valuation(long long p, const Rational& q) {
    if (p < 2) throw InvalidInput("valuation: p must be >= 2");
    if (q.is_zero()) return std::nullopt;
    long v = 0;
    Int t = q.num();
    if (t < 0) t = -t;
    Int pz(static_cast<long>(p));
    while (t % pz == 0) {
        t /= pz;
        ++v;
    }
    Int d = q.den();
    while (d % pz == 0) {
        d /= pz;
        --v;
    }
    return v;
}

Int mod_inverse_prime_power(const Int& a, long long p, int precision) {
    if (precision < 1) throw InvalidInput("mod_inverse_prime_power: precision >= 1 required");
    Int m = pow_int(p, static_cast<unsigned long>(precision));
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw NotInvertible("mod_inverse_prime_power: p divides a");
    return inv;
}

Int residue_mod_prime_power(long long p, const Rational& q, int precision) {
    Int m = pow_int(p, static_cast<unsigned long>(precision));
    Int d = q.den();
    if (mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(p)))
        throw NotPAdicInteger("residue_mod_prime_power: denominator divisible by p");
    Int dinv;
    mpz_invert(dinv.get_mpz_t(), d.get_mpz_t(), m.get_mpz_t());
    Int r = q.num() * dinv;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
    return r;
}

DigitVector digit_expand(long long p, const Rational& q, int precision) {
    if (precision < 0) throw InvalidInput("digit_expand: precision >= 0 required");
    DigitVector out;
    out.prime = p;
    Int d = q.den();
    if (mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(p)))
        throw NotPAdicInteger("digit_expand: denominator divisible by p");
    if (precision == 0) return out;
    Int r = residue_mod_prime_power(p, q, precision);
    out.digits.reserve(static_cast<size_t>(precision));
    Int pz(static_cast<long>(p));
    for (int i = 0; i < precision; ++i) {
        Int digit = r % pz;
        out.digits.push_back(static_cast<int>(digit.get_si()));
        r /= pz;
    }
    return out;
}

PAdicBall PAdicBall::residue_class(long long p, const Int& residue, int depth) {
    if (depth < 0) throw InvalidInput("PAdicBall: depth >= 0 required");
    Int m = pow_int(p, static_cast<unsigned long>(depth));
    Int c;
    mpz_mod(c.get_mpz_t(), residue.get_mpz_t(), m.get_mpz_t());
    return PAdicBall(p, Kind::Class, {}, c, depth);
}

Rational PAdicBall::measure() const {
    if (kind_ != Kind::Class) return Rational(0);
    return pow_rational(prime_, -static_cast<long>(depth_));
}

DigitVector PAdicBall::class_digits() const {
    if (kind_ != Kind::Class) throw DegenerateBall("class_digits: not a class ball");
    DigitVector d;
    d.prime = prime_;
    Int r = residue_;
    Int pz(static_cast<long>(prime_));
    for (int i = 0; i < depth_; ++i) {
        Int digit = r % pz;
        d.digits.push_back(static_cast<int>(digit.get_si()));
        r /= pz;
    }
    return d;
}

std::string PAdicBall::str() const {
    switch (kind_) {
    case Kind::Empty:
        return "{}";
    case Kind::Singleton:
        return "{" + center_.pretty() + "}";
    default:
        return residue_.get_str() + " + " + std::to_string(prime_) + "^" +
               std::to_string(depth_) + "Z";
    }
}

int depth_for_radius(long long p, const Rational& r) {
    if (r.sign() <= 0) throw InvalidRadius("depth_for_radius: radius must be > 0");
    // Smallest M with p^M >= 1/r, i.e. r * p^M >= 1.
    int m = 0;
    Rational scaled = r;
    Rational pr((long long)p);
    Rational one(1);
    if (scaled >= one) {
        while (scaled / pr >= one) {
            scaled /= pr;
            --m;
        }
        return m;
    }
    while (scaled < one) {
        scaled *= pr;
        ++m;
    }
    return m;
}

PAdicBall ball_intersect_Zp(long long p, const Rational& center, const Rational& radius) {
    if (radius.sign() < 0) throw InvalidRadius("ball_intersect_Zp: radius must be >= 0");
    auto v = valuation(p, center);
    bool center_in_Zp = !v.has_value() || *v >= 0;
    if (radius.is_zero()) {
        if (!center_in_Zp) return PAdicBall::empty_ball(p);
        return PAdicBall::singleton(p, center);
    }
    int m = depth_for_radius(p, radius);
    if (m <= 0) {
        // Radius >= 1: the ball swallows Z_p entirely, or misses it entirely.
        bool center_reaches = !v.has_value() || *v >= m;
        return center_reaches ? PAdicBall::residue_class(p, 0, 0) : PAdicBall::empty_ball(p);
    }
    if (!center_in_Zp) return PAdicBall::empty_ball(p);
    return PAdicBall::residue_class(p, residue_mod_prime_power(p, center, m), m);
}

Interval iota_inverse_ball(const PAdicBall& ball) {
    if (!ball.is_class()) throw DegenerateBall("iota_inverse_ball: class ball required");
    long long p = ball.prime();
    DigitVector d = ball.class_digits();
    Rational lo(0);
    for (int m = 0; m < d.precision(); ++m)
        lo += Rational(d.digits[static_cast<size_t>(m)]) * pow_rational(p, -m);
    Rational len = pow_rational(p, 1 - static_cast<long>(ball.depth()));
    return {lo, lo + len};
}

PAdicBall invert_unit_ball(const PAdicBall& ball) {
    if (!ball.is_class() || ball.depth() < 1)
        throw NotAUnitBall("invert_unit_ball: class of depth >= 1 required");
    if (mpz_divisible_ui_p(ball.residue().get_mpz_t(), static_cast<unsigned long>(ball.prime())))
        throw NotAUnitBall("invert_unit_ball: ball touches pZ_p");
    Int inv = mod_inverse_prime_power(ball.residue(), ball.prime(), ball.depth());
    return PAdicBall::residue_class(ball.prime(), inv, ball.depth());
}

} // namespace padicds
