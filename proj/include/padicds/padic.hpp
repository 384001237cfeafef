#pragma once

#include <optional>
#include <string>
#include <vector>

#include "padicds/rational.hpp"

namespace padicds {

/// nu_p(q) for a rational q. Returns nullopt for q = 0 (valuation +infinity);
/// that is a defined result, not an error.
std::optional<long> valuation(long long p, const Rational& q);

/// Base-p digits d_0..d_{M-1} of a p-adic integer, least significant first.
struct DigitVector {
    long long prime = 2;
    std::vector<int> digits;

    int precision() const { return static_cast<int>(digits.size()); }

    /// The residue sum(d_m p^m) mod p^precision.
    Int residue() const {
        Int r = 0;
        for (size_t m = digits.size(); m-- > 0;) r = r * static_cast<long>(prime) + digits[m];
        return r;
    }
};

/// Digits of q mod p^precision. Requires den(q) coprime to p; negative q is
/// represented by its nonnegative residue. Throws NotPAdicInteger otherwise.
DigitVector digit_expand(long long p, const Rational& q, int precision);

/// b in [0, p^precision) with a*b ≡ 1 (mod p^precision). Throws NotInvertible
/// when p divides a.
Int mod_inverse_prime_power(const Int& a, long long p, int precision);

/// Reduce a rational with nu_p >= 0 to its residue mod p^precision.
Int residue_mod_prime_power(long long p, const Rational& q, int precision);

/// A closed ball of Q_p intersected with Z_p, in canonical form: either empty,
/// a single point, or a residue class c + p^M Z_p with c in [0, p^M).
class PAdicBall {
  public:
    enum class Kind { Empty, Singleton, Class };

    static PAdicBall empty_ball(long long p) { return PAdicBall(p, Kind::Empty, {}, 0, 0); }
    static PAdicBall singleton(long long p, Rational center) {
        return PAdicBall(p, Kind::Singleton, std::move(center), 0, 0);
    }
    static PAdicBall residue_class(long long p, const Int& residue, int depth);

    Kind kind() const { return kind_; }
    long long prime() const { return prime_; }
    bool is_empty() const { return kind_ == Kind::Empty; }
    bool is_class() const { return kind_ == Kind::Class; }

    /// Center of a Singleton.
    const Rational& center() const { return center_; }
    /// Residue in [0, p^depth) of a Class.
    const Int& residue() const { return residue_; }
    int depth() const { return depth_; }

    /// Haar measure: p^{-depth} for a class, 0 otherwise.
    Rational measure() const;

    DigitVector class_digits() const;

    bool operator==(const PAdicBall& o) const = default;

    std::string str() const;

  private:
    PAdicBall(long long p, Kind k, Rational center, Int residue, int depth)
        : prime_(p), kind_(k), center_(std::move(center)), residue_(std::move(residue)),
          depth_(depth) {}

    long long prime_;
    Kind kind_;
    Rational center_; // Singleton only
    Int residue_;     // Class only
    int depth_ = 0;   // Class only
};

/// Smallest integer M with p^{-M} <= r, for r > 0. Exact comparisons only.
int depth_for_radius(long long p, const Rational& r);

/// B_{Q_p}(center, radius) ∩ Z_p in canonical form. Radius 0 yields a
/// singleton (or the empty set when the center is not a p-adic integer).
/// Throws InvalidRadius for radius < 0.
PAdicBall ball_intersect_Zp(long long p, const Rational& center, const Rational& radius);

/// Half-open real interval [lo, hi) with rational endpoints.
struct Interval {
    Rational lo;
    Rational hi;
    Rational length() const { return hi - lo; }
};

/// Preimage of a class ball under the digit-mirroring map: the half-open
/// interval sum(b_m p^{-m}) + [0, p^{1-M}), of length p times the ball
/// measure. Throws DegenerateBall for Empty/Singleton input.
Interval iota_inverse_ball(const PAdicBall& ball);

/// Image of a unit class ball under x -> 1/x: a class of the same depth.
/// Throws NotAUnitBall unless the ball is Class(c, M) with M >= 1, gcd(c,p)=1.
PAdicBall invert_unit_ball(const PAdicBall& ball);

} // namespace padicds
