#include <doctest.h>

#include <numeric>
#include <set>

#include "padicds/errors.hpp"
#include "padicds/stage_sets.hpp"

using namespace padicds;

namespace {

long long egcd_inverse(long long a, long long m) {
    long long old_r = ((a % m) + m) % m, r = m;
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

// Residue-enumeration oracle: distinct classes mod p^M of the fractions
// num/den (den coprime to p), with inverses from the extended gcd.
std::set<long long> center_classes(long long p, int M,
                                   const std::vector<std::pair<long long, long long>>& fracs) {
    long long pm = 1;
    for (int i = 0; i < M; ++i) pm *= p;
    std::set<long long> out;
    for (auto [num, den] : fracs) {
        long long n0 = ((num % pm) + pm) % pm;
        out.insert((n0 * egcd_inverse(den, pm)) % pm);
    }
    return out;
}

std::set<long long> trie_classes_at(const BallSet& s, int M) {
    std::set<long long> out;
    long long pm = 1;
    for (int i = 0; i < M; ++i) pm *= s.prime();
    for (const auto& [res, depth] : s.classes()) {
        REQUIRE(depth <= M);
        long long step = 1;
        for (int i = 0; i < depth; ++i) step *= s.prime();
        for (long long x = res.get_si(); x < pm; x += step) out.insert(x);
    }
    return out;
}

} // namespace

TEST_CASE("reduced-fraction stage sets") {
    // centers ±1/3, ±2/3 with radius 1/2 cover both residues mod 2
    CHECK(stage_set_a(2, 3, Rational(3, 2)).is_full());
    // all centers a/3 have negative 3-adic valuation
    CHECK(stage_set_a(3, 3, Rational(1, 3)).is_empty());
    CHECK(stage_set_a(3, 2, Rational(2, 3)) == BallSet::shell(3, 0));

    // oracle for the first case: depth 1 classes of ±1/3, ±2/3
    auto oracle = center_classes(2, 1, {{1, 3}, {-1, 3}, {2, 3}, {-2, 3}});
    CHECK(oracle == std::set<long long>{0, 1});
}

TEST_CASE("inverted-fraction stage sets") {
    BallSet c = stage_set_c(3, 5, Rational(5, 3));
    CHECK(c == BallSet::shell(3, 0));
    auto oracle = center_classes(3, 1, {{5, 1}, {-5, 1}, {5, 2}, {-5, 2}, {5, 4}, {-5, 4}});
    CHECK(oracle == std::set<long long>{1, 2});
    CHECK(trie_classes_at(c, 1) == oracle);

    for (long long p : {2, 3, 5}) {
        CHECK(stage_set_c(p, 1, Rational(7)).is_empty());
    }

    CHECK(stage_set_c(3, 5, Rational(0)).measure() == Rational(0));
    BallSet kept = stage_set_c(3, 5, Rational(0), true);
    CHECK(kept.contains(Rational(5)));      // center 5/1
    CHECK(kept.contains(Rational(-5, 2)));  // center 5/(-2)
    CHECK(!kept.contains(Rational(7)));
}

TEST_CASE("combined stage set is the union of the two parts") {
    CHECK(stage_set_b(3, 2, Rational(2, 3)) == BallSet::shell(3, 0));
    CHECK(stage_set_b(3, 1, Rational(1, 2)) == stage_set_a(3, 1, Rational(1, 2)));
    for (long long n : {2, 5, 6, 12}) {
        Rational psi(n, 3);
        CHECK(stage_set_b(5, n, psi) ==
              set_union(stage_set_a(5, n, psi), stage_set_c(5, n, psi)));
    }
}

TEST_CASE("divisor-pair stage sets") {
    BallSet k = stage_set_frak_k(2, 4, Rational(1, 2));
    CHECK(k.measure() == Rational(3, 8));
    auto oracle = center_classes(2, 3, {{1, 1}, {-1, 1}, {4, 1}, {-4, 1}}); // ±1/4 is empty
    CHECK(trie_classes_at(k, 3) == oracle);

    BallSet one = stage_set_frak_k(3, 1, Rational(1, 3), true);
    CHECK(one == stage_set_frak_a(3, 1, Rational(1, 3), true)); // only divisor 1: ±1

    BallSet f5 = stage_set_frak_k(3, 5, Rational(5, 3));
    CHECK(f5 == BallSet::shell(3, 0));
}

TEST_CASE("unitary-split stage sets") {
    // q ≡ 5 mod 8, psi = q/8: centers ±q^{±1} give {3, 5} mod 8
    for (long long q : {5, 13, 29}) {
        BallSet s = stage_set_frak_a(2, q, Rational(q, 8));
        BallSet expect(2);
        expect.insert(PAdicBall::residue_class(2, 3, 3));
        expect.insert(PAdicBall::residue_class(2, 5, 3));
        CHECK(s == expect);
        CHECK(s.measure() == Rational(1, 4));
    }

    // n = 12: surviving centers ±4/3, ±12 at depth 6; the oracle decides
    // distinctness (4 distinct classes mod 64 -> measure 1/16).
    BallSet s12 = stage_set_frak_a(2, 12, Rational(1, 4));
    auto oracle = center_classes(2, 6, {{4, 3}, {-4, 3}, {12, 1}, {-12, 1}});
    CHECK(oracle.size() == 4);
    CHECK(trie_classes_at(s12, 6) == oracle);
    CHECK(s12.measure() == Rational(4) * pow_rational(2, -6));
    CHECK(s12.measure() == Rational(1, 16));

    BallSet ones = stage_set_frak_a(5, 1, Rational(0), true);
    CHECK(ones.measure() == Rational(0));
    CHECK(ones.contains(Rational(1)));
    CHECK(ones.contains(Rational(-1)));
}

TEST_CASE("unitary splits are a subset of divisor pairs") {
    for (long long p : {2, 3, 5}) {
        for (long long n : {1, 4, 6, 12, 30, 45}) {
            for (Rational psi : {Rational(1, 4), Rational(n, 3), Rational(2)}) {
                CHECK(is_subset(stage_set_frak_a(p, n, psi), stage_set_frak_k(p, n, psi)));
            }
        }
    }
}

TEST_CASE("stage sets shrink when psi shrinks") {
    for (long long p : {2, 3}) {
        for (long long n : {2, 5, 9, 12}) {
            Rational psi(n, 2);
            for (Rational x : {Rational(1, 2), Rational(1, 3), Rational(1)}) {
                Rational scaled = psi * x;
                CHECK(is_subset(stage_set_a(p, n, scaled), stage_set_a(p, n, psi)));
                CHECK(is_subset(stage_set_c(p, n, scaled), stage_set_c(p, n, psi)));
                CHECK(is_subset(stage_set_frak_k(p, n, scaled), stage_set_frak_k(p, n, psi)));
            }
        }
    }
}

TEST_CASE("small-radius inverted-fraction stages stay inside their shell") {
    for (long long p : {2, 3}) {
        for (int k : {0, 1}) {
            long long pk = 1;
            for (int i = 0; i < k; ++i) pk *= p;
            for (long long m : {1, 5, 7}) {
                if (m % p == 0) continue;
                long long n = pk * m;
                // psi(n)/n <= p^{-k-2}
                Rational psi = Rational(n) * pow_rational(p, -(k + 2));
                BallSet s = stage_set_c(p, n, psi);
                CHECK(is_subset(s, BallSet::shell(p, k)));
            }
        }
    }
}

TEST_CASE("tail unions") {
    PsiRule shell0 = PsiRule::shell_digits(3, SpectrumDigits(3, {1}));
    TailReport rep = tail_union(Family::C, 3, shell0, 1, 50);
    CHECK(rep.set == BallSet::shell(3, 0));
    CHECK(rep.measure == Rational(2, 3));
    CHECK(rep.series > rep.measure);

    TailReport zero = tail_union(Family::C, 3, PsiRule::zero(), 1, 100);
    CHECK(zero.measure == Rational(0));
    CHECK(zero.stages == 0);

    ResidueSchedule sched = build_residue_schedule(2, Rational(1, 4), 6);
    PsiRule rule = PsiRule::schedule(sched, 1000000);
    TailReport fa = tail_union(Family::FrakA, 2, rule, 1, 200);
    CHECK(fa.measure == Rational(1, 4));

    // measure <= min(1, series)
    CHECK(fa.measure <= fa.series);
    CHECK(fa.measure <= Rational(1));

    // monotone in the range
    TailReport narrower = tail_union(Family::FrakA, 2, rule, 6, 200);
    TailReport shorter = tail_union(Family::FrakA, 2, rule, 1, 100);
    CHECK(narrower.measure <= fa.measure);
    CHECK(shorter.measure <= fa.measure);
}

TEST_CASE("parallel tail unions match the serial result") {
    PsiRule rule = PsiRule::shell_digits(3, SpectrumDigits(3, {1, 0, 1}));
    TailReport serial = tail_union(Family::C, 3, rule, 1, 120, 1);
    for (int workers : {2, 4}) {
        TailReport par = tail_union(Family::C, 3, rule, 1, 120, workers);
        CHECK(par.set == serial.set);
        CHECK(par.series == serial.series);
        CHECK(par.measure == serial.measure);
    }
}

TEST_CASE("tail report serialization") {
    PsiRule rule = PsiRule::shell_digits(3, SpectrumDigits(3, {1}));
    TailReport rep = tail_union(Family::C, 3, rule, 1, 10);
    auto j = rep.to_json();
    CHECK(j["family"] == "c");
    CHECK(j["p"] == 3);
    CHECK(j["range"] == nlohmann::json({1, 10}));
    CHECK(j["measure"] == "2/3");
    CHECK(j["union"]["classes"].size() == 2);
}
