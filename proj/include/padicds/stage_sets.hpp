#pragma once

#include <utility>
#include <vector>

#include <json.hpp>

#include "padicds/ball_set.hpp"
#include "padicds/family.hpp"
#include "padicds/psi_rules.hpp"

namespace padicds {

/// Union of balls at reduced fractions a/n, |a| <= n, radius psi_n/n.
BallSet stage_set_a(long long p, long long n, const Rational& psi_n,
                    bool keep_singletons = false);

/// Union of balls at n/a for |a| < n with gcd(a, pn) = 1; empty for n = 1.
BallSet stage_set_c(long long p, long long n, const Rational& psi_n,
                    bool keep_singletons = false);

BallSet stage_set_b(long long p, long long n, const Rational& psi_n,
                    bool keep_singletons = false);

/// Union over divisor pairs: balls at ±a/(n/a) for every positive a | n.
BallSet stage_set_frak_k(long long p, long long n, const Rational& psi_n,
                         bool keep_singletons = false);

/// Union over the 2^omega(n) unitary splits n = u*v, gcd(u, v) = 1: balls at
/// ±u/v. For n = 1 the single split gives ±1.
BallSet stage_set_frak_a(long long p, long long n, const Rational& psi_n,
                         bool keep_singletons = false);

BallSet stage_set(Family family, long long p, long long n, const Rational& psi_n,
                  bool keep_singletons = false);

/// Finite tail of a limsup set: the union of stage sets over a support range,
/// together with the stage-measure series for Borel-Cantelli bookkeeping.
struct TailReport {
    Family family = Family::C;
    long long p = 2;
    long long range_lo = 1;
    long long range_hi = 1;
    BallSet set = BallSet(2);
    Rational measure;
    Rational series;
    long long stages = 0;

    nlohmann::json to_json() const;
};

/// Union of the family's stage sets for all support points of psi in [N, T].
/// parallelism > 1 computes stage sets concurrently; the merge is associative
/// and the result identical for any degree.
TailReport tail_union(Family family, long long p, const PsiRule& psi, long long N, long long T,
                      int parallelism = 1);

/// Same, over an explicit support list (entries need not come from a rule).
TailReport tail_union_over(Family family, long long p,
                           const std::vector<std::pair<long long, Rational>>& entries,
                           int parallelism = 1);

} // namespace padicds
