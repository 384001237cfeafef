#include <doctest.h>

#include <random>
#include <set>

#include "padicds/errors.hpp"
#include "padicds/padic.hpp"

using namespace padicds;

namespace {

// Extended-gcd modular inverse, independent of the library path.
long long egcd_inverse(long long a, long long m) {
    long long old_r = a % m, r = m;
    long long old_s = 1, s = 0;
    while (r != 0) {
        long long q = old_r / r;
        long long t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    return ((old_s % m) + m) % m;
}

Rational rat(long long n, long long d) { return Rational(n, d); }

} // namespace

TEST_CASE("rational canonical form and parsing") {
    CHECK(Rational(6, 4) == Rational(3, 2));
    CHECK(Rational(-6, 4) == Rational(-3, 2));
    CHECK(Rational(6, -4) == Rational(-3, 2));
    CHECK(Rational(3, 2).str() == "3/2");
    CHECK(Rational(-3, 2).den() == 2);
    CHECK(Rational::parse("10/9") == Rational(10, 9));
    CHECK(Rational::parse("-7") == Rational(-7));
    CHECK(Rational(7, 2).floor() == 3);
    CHECK(Rational(-7, 2).floor() == -4);
    CHECK_THROWS_AS(Rational(1, 0), InvalidInput);
    CHECK_THROWS_AS(Rational(1) / Rational(0), InvalidInput);
}

TEST_CASE("valuation on rationals") {
    CHECK(valuation(2, Rational(8)) == 3);
    CHECK(valuation(3, rat(10, 9)) == -2);
    CHECK(valuation(5, Rational(7)) == 0);
    CHECK(!valuation(7, Rational(0)).has_value()); // nu_p(0) = +infinity
}

TEST_CASE("valuation is additive over products") {
    std::mt19937 rng(20240811);
    std::uniform_int_distribution<long long> num(-200, 200);
    std::uniform_int_distribution<long long> den(1, 200);
    for (long long p : {2, 3, 5, 7}) {
        for (int i = 0; i < 200; ++i) {
            long long a = num(rng), b = num(rng);
            if (a == 0 || b == 0) continue;
            Rational q = rat(a, den(rng));
            Rational r = rat(b, den(rng));
            CHECK(*valuation(p, q * r) == *valuation(p, q) + *valuation(p, r));
        }
    }
}

TEST_CASE("digit expansion") {
    CHECK(digit_expand(3, Rational(5), 2).digits == std::vector<int>{2, 1});
    // 1/2 mod 9: the independent inverse oracle gives 2^{-1} = 5, digits 2,1.
    CHECK(egcd_inverse(2, 9) == 5);
    CHECK(digit_expand(3, rat(1, 2), 2).digits == std::vector<int>{2, 1});
    CHECK(digit_expand(2, Rational(-1), 3).digits == std::vector<int>{1, 1, 1});
    CHECK_THROWS_AS(digit_expand(3, rat(1, 3), 2), NotPAdicInteger);
    CHECK(digit_expand(5, rat(7, 2), 3).residue() ==
          Int(static_cast<long>((7 * egcd_inverse(2, 125)) % 125)));
}

TEST_CASE("modular inverse mod prime powers") {
    CHECK(mod_inverse_prime_power(2, 3, 2) == 5);
    CHECK(mod_inverse_prime_power(1, 5, 3) == 1);
    CHECK(mod_inverse_prime_power(3, 5, 1) == 2);
    CHECK_THROWS_AS(mod_inverse_prime_power(10, 5, 2), NotInvertible);
    for (long long a : {1, 2, 4, 7, 11, 124}) {
        CHECK(mod_inverse_prime_power(Int(static_cast<long>(a)), 5, 3).get_si() ==
              egcd_inverse(a, 125));
    }
}

TEST_CASE("radius to depth conversion uses exact comparisons") {
    CHECK(depth_for_radius(2, rat(1, 2)) == 1);
    CHECK(depth_for_radius(2, rat(1, 3)) == 2);
    CHECK(depth_for_radius(2, rat(1, 4)) == 2); // boundary r = p^{-M} exactly
    CHECK(depth_for_radius(2, rat(1, 48)) == 6);
    CHECK(depth_for_radius(3, Rational(1)) == 0);
    CHECK(depth_for_radius(3, Rational(3)) == -1);
    CHECK(depth_for_radius(3, rat(3, 2)) == 0);
    CHECK_THROWS_AS(depth_for_radius(3, Rational(0)), InvalidRadius);
}

TEST_CASE("ball intersect Z_p") {
    PAdicBall b1 = ball_intersect_Zp(3, Rational(5), rat(1, 3));
    CHECK(b1.is_class());
    CHECK(b1.residue() == 2);
    CHECK(b1.depth() == 1);

    CHECK(ball_intersect_Zp(3, rat(1, 3), rat(1, 9)).is_empty());

    PAdicBall b3 = ball_intersect_Zp(2, rat(7, 3), Rational(1));
    CHECK(b3.is_class());
    CHECK(b3.depth() == 0);
    CHECK(b3.measure() == Rational(1));

    PAdicBall s = ball_intersect_Zp(3, rat(1, 2), Rational(0));
    CHECK(s.kind() == PAdicBall::Kind::Singleton);
    CHECK(s.measure() == Rational(0));
    CHECK(ball_intersect_Zp(3, rat(1, 3), Rational(0)).is_empty());

    CHECK_THROWS_AS(ball_intersect_Zp(3, Rational(1), Rational(-1)), InvalidRadius);
}

TEST_CASE("ball measure bounded by radius and center reduces into the class") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long long> num(-50, 50);
    std::uniform_int_distribution<long long> den(1, 50);
    for (long long p : {2, 3, 5}) {
        for (int i = 0; i < 300; ++i) {
            Rational center = rat(num(rng), den(rng));
            Rational radius = rat(den(rng), den(rng) * 3);
            PAdicBall b = ball_intersect_Zp(p, center, radius);
            Rational cap = radius * Rational(p);
            CHECK(b.measure() <= (cap < Rational(1) ? cap : Rational(1)));
            if (b.is_class() && b.depth() > 0) {
                auto v = valuation(p, center);
                REQUIRE((!v.has_value() || *v >= 0));
                CHECK(residue_mod_prime_power(p, center, b.depth()) == b.residue());
            }
        }
    }
}

TEST_CASE("interval preimage of a class ball") {
    Interval i0 = iota_inverse_ball(PAdicBall::residue_class(3, 0, 0));
    CHECK(i0.lo == Rational(0));
    CHECK(i0.hi == Rational(3));

    Interval i1 = iota_inverse_ball(PAdicBall::residue_class(2, 1, 1));
    CHECK(i1.lo == Rational(1));
    CHECK(i1.hi == Rational(2));

    Interval i2 = iota_inverse_ball(PAdicBall::residue_class(5, 7, 2));
    CHECK(i2.lo == rat(11, 5));
    CHECK(i2.hi == rat(12, 5));

    CHECK_THROWS_AS(iota_inverse_ball(PAdicBall::singleton(3, Rational(1))), DegenerateBall);
}

TEST_CASE("interval length is p times the ball measure") {
    std::mt19937 rng(99);
    for (long long p : {2, 3, 5, 7}) {
        std::uniform_int_distribution<int> depth(0, 10);
        for (int i = 0; i < 100; ++i) {
            int m = depth(rng);
            long long pm = 1;
            for (int j = 0; j < m; ++j) pm *= p;
            std::uniform_int_distribution<long long> res(0, pm - 1);
            PAdicBall b = PAdicBall::residue_class(p, Int(static_cast<long>(res(rng))), m);
            CHECK(iota_inverse_ball(b).length() == Rational(p) * b.measure());
        }
    }
}

TEST_CASE("unit ball inversion") {
    PAdicBall b1 = invert_unit_ball(PAdicBall::residue_class(3, 2, 1));
    CHECK(b1.residue() == 2);
    PAdicBall b2 = invert_unit_ball(PAdicBall::residue_class(2, 1, 1));
    CHECK(b2.residue() == 1);
    PAdicBall b3 = invert_unit_ball(PAdicBall::residue_class(5, 3, 1));
    CHECK(b3.residue() == 2);
    CHECK_THROWS_AS(invert_unit_ball(PAdicBall::residue_class(3, 3, 2)), NotAUnitBall);
    CHECK_THROWS_AS(invert_unit_ball(PAdicBall::residue_class(3, 0, 0)), NotAUnitBall);
}

TEST_CASE("inversion is an involution and matches elementwise inversion") {
    for (long long p : {2, 3, 5}) {
        for (int m = 1; m <= 3; ++m) {
            long long pm = 1;
            for (int i = 0; i < m; ++i) pm *= p;
            for (long long c = 1; c < pm; ++c) {
                if (c % p == 0) continue;
                PAdicBall b = PAdicBall::residue_class(p, Int(static_cast<long>(c)), m);
                PAdicBall inv = invert_unit_ball(b);
                CHECK(inv.depth() == m);
                CHECK(invert_unit_ball(inv) == b);
                CHECK(inv.measure() == b.measure());
                // Exhaustive oracle at precision m+2: inverses of all lifts
                // of the class land in exactly one residue class mod p^m.
                long long pm2 = pm * p * p;
                std::set<long long> images;
                for (long long x = c; x < pm2; x += pm) {
                    if (x % p == 0) continue;
                    images.insert(egcd_inverse(x, pm2) % pm);
                }
                CHECK(images.size() == 1);
                CHECK(*images.begin() == inv.residue().get_si());
            }
        }
    }
}
