#include <doctest.h>

#include <random>
#include <set>

#include "padicds/ball_set.hpp"
#include "padicds/errors.hpp"

using namespace padicds;

namespace {

BallSet random_trie(long long p, std::mt19937& rng, int balls = 6, int max_depth = 4) {
    BallSet s(p);
    std::uniform_int_distribution<int> depth(0, max_depth);
    for (int i = 0; i < balls; ++i) {
        int m = depth(rng);
        long long pm = 1;
        for (int j = 0; j < m; ++j) pm *= p;
        std::uniform_int_distribution<long long> res(0, pm - 1);
        s.insert(PAdicBall::residue_class(p, Int(static_cast<long>(res(rng))), m));
    }
    return s;
}

// Extensional oracle: the residues mod p^D covered by the set.
std::set<long long> residues_covered(const BallSet& s, int D) {
    std::set<long long> out;
    long long pd = 1;
    for (int i = 0; i < D; ++i) pd *= s.prime();
    for (const auto& [res, depth] : s.classes()) {
        long long step = 1;
        for (int i = 0; i < depth; ++i) step *= s.prime();
        for (long long x = res.get_si(); x < pd; x += step) out.insert(x);
    }
    return out;
}

} // namespace

TEST_CASE("insert and measure") {
    BallSet s(3);
    CHECK(s.measure() == Rational(0));
    s.insert(PAdicBall::residue_class(3, 2, 1));
    CHECK(s.measure() == Rational(1, 3));

    s.insert(PAdicBall::residue_class(3, 1, 1));
    s.insert(PAdicBall::residue_class(3, 0, 1));
    CHECK(s.is_full()); // three depth-1 classes collapse
    CHECK(s.measure() == Rational(1));

    BallSet t(3);
    t.insert(PAdicBall::singleton(3, Rational(1, 2)));
    CHECK(t.measure() == Rational(0));
    CHECK(t.is_empty());

    BallSet kept(3, true);
    kept.insert(PAdicBall::singleton(3, Rational(1, 2)));
    CHECK(kept.measure() == Rational(0));
    CHECK(kept.contains(Rational(1, 2)));
    CHECK(!kept.contains(Rational(2)));

    CHECK_THROWS_AS(s.insert(PAdicBall::residue_class(5, 1, 1)), PrimeMismatch);
}

TEST_CASE("four disjoint depth-1 classes at p=13") {
    BallSet s(13);
    for (long long c : {1, 5, 8, 12}) s.insert(PAdicBall::residue_class(13, Int(static_cast<long>(c)), 1));
    CHECK(s.measure() == Rational(4, 13));
}

TEST_CASE("disjoint dyadic classes") {
    BallSet s(2);
    s.insert(PAdicBall::residue_class(2, 1, 2));
    s.insert(PAdicBall::residue_class(2, 3, 3));
    CHECK(s.measure() == Rational(3, 8));
}

TEST_CASE("boolean operations") {
    BallSet a(3);
    a.insert(PAdicBall::residue_class(3, 0, 1));
    BallSet comp = set_complement(a);
    CHECK(comp.measure() == Rational(2, 3));
    CHECK(comp == BallSet::shell(3, 0));

    BallSet deep(3);
    deep.insert(PAdicBall::residue_class(3, 2, 2));
    CHECK(set_intersect(comp, deep) == deep);
    CHECK(set_intersect(comp, deep).measure() == Rational(1, 9));

    std::mt19937 rng(5);
    for (int i = 0; i < 50; ++i) {
        BallSet r = random_trie(3, rng);
        CHECK(set_union(r, set_complement(r)).is_full());
        CHECK(set_intersect(r, set_complement(r)).is_empty());
    }
}

TEST_CASE("inclusion-exclusion on random tries") {
    std::mt19937 rng(17);
    for (long long p : {2, 3, 5}) {
        for (int i = 0; i < 60; ++i) {
            BallSet a = random_trie(p, rng);
            BallSet b = random_trie(p, rng);
            CHECK(set_union(a, b).measure() + set_intersect(a, b).measure() ==
                  a.measure() + b.measure());
        }
    }
}

TEST_CASE("normalization is idempotent and insert is monotone") {
    std::mt19937 rng(23);
    for (int i = 0; i < 40; ++i) {
        BallSet a = random_trie(3, rng);
        BallSet before = a;
        for (const auto& [res, depth] : before.classes()) {
            a.insert(PAdicBall::residue_class(3, res, depth));
        }
        CHECK(a == before);
    }
}

TEST_CASE("trie equality is extensional equality on residues") {
    std::mt19937 rng(31);
    const int D = 3;
    for (long long p : {2, 3}) {
        for (int i = 0; i < 80; ++i) {
            BallSet a = random_trie(p, rng, 4, D);
            // Rebuilding from the class list in reverse order gives the same
            // canonical trie.
            BallSet b(p);
            auto cls = a.classes();
            for (auto it = cls.rbegin(); it != cls.rend(); ++it)
                b.insert(PAdicBall::residue_class(p, it->first, it->second));
            CHECK(a == b);

            BallSet c = random_trie(p, rng, 4, D);
            CHECK((a == c) == (residues_covered(a, D) == residues_covered(c, D)));
            auto ra = residues_covered(a, D);
            auto rc = residues_covered(c, D);
            ra.insert(rc.begin(), rc.end());
            CHECK(residues_covered(set_union(a, c), D) == ra);
        }
    }
}

TEST_CASE("shell measures and containment") {
    BallSet full = BallSet::full(3);
    CHECK(full.shell_measure(0) == Rational(2, 3));
    CHECK(full.shell_measure(1) == Rational(2, 9));
    CHECK(full.shell_measure(2) == Rational(2, 27));
    CHECK(full.contains_shell(0));
    CHECK(full.contains_shell(5));

    BallSet units = BallSet::shell(3, 0);
    CHECK(units.shell_measure(0) == Rational(2, 3));
    CHECK(units.shell_measure(1) == Rational(0));
    CHECK(units.contains_shell(0));
    CHECK(!units.contains_shell(1));

    BallSet part(3);
    part.insert(PAdicBall::residue_class(3, 1, 1));
    CHECK(!part.contains_shell(0)); // misses 2 + 3Z_3

    BallSet deep(3);
    deep.insert(PAdicBall::residue_class(3, 3, 2)); // 3 = 3*1: unit part 1
    CHECK(deep.shell_measure(1) == Rational(1, 9));
}

TEST_CASE("membership queries descend the trie") {
    BallSet s(3);
    s.insert(PAdicBall::residue_class(3, 5, 2)); // 5 + 9Z_3
    CHECK(s.contains(Rational(5)));
    CHECK(s.contains(Rational(14)));
    CHECK(s.contains(Rational(1, 2))); // 1/2 = 5 mod 9
    CHECK(!s.contains(Rational(1)));
    CHECK(!s.contains(Rational(1, 3))); // not a 3-adic integer
}

TEST_CASE("canonical JSON serialization") {
    BallSet s(3);
    s.insert(PAdicBall::residue_class(3, 2, 1));
    s.insert(PAdicBall::residue_class(3, 4, 2));
    CHECK(s.to_json().dump() == R"({"classes":[[4,2],[2,1]],"p":3})");
    // digit order: 4 = digit 1 then 1 -> path (1,1); 2 -> path (2): DFS emits
    // the digit-1 branch before digit-2.
    BallSet f = BallSet::full(5);
    CHECK(f.to_json().dump() == R"({"classes":[[0,0]],"p":5})");
    CHECK(BallSet(7).to_json().dump() == R"({"classes":[],"p":7})");
}

TEST_CASE("subset checks") {
    BallSet a(3);
    a.insert(PAdicBall::residue_class(3, 4, 2));
    BallSet b(3);
    b.insert(PAdicBall::residue_class(3, 1, 1));
    CHECK(is_subset(a, b));
    CHECK(!is_subset(b, a));
}
