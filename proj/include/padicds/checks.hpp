#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "padicds/ball_set.hpp"
#include "padicds/padic.hpp"
#include "padicds/psi_rules.hpp"
#include "padicds/stage_sets.hpp"

namespace padicds {

/// Machine-readable outcome of one executable identity check. A failing
/// identity carries the offending data in `witness`.
struct CheckReport {
    std::string name;
    nlohmann::json params = nlohmann::json::object();
    bool pass = false;
    nlohmann::json witness = nlohmann::json::object();
    nlohmann::json quantities = nlohmann::json::object();

    nlohmann::json to_json() const {
        return {{"check", name},
                {"params", params},
                {"verdict", pass ? "pass" : "fail"},
                {"witness", witness},
                {"quantities", quantities}};
    }
};

/// psi(n) > 4^omega(n) forces the stage set of family C to contain the whole
/// shell p^{nu_p(n)} Z_p^x. Throws PreconditionFailed when the hypothesis
/// does not hold (not a falsification, the check just does not apply).
CheckReport large_psi_shell_check(long long p, long long n, const Rational& psi_n);

struct PairCount {
    long long direct = 0;
    long long moebius = 0;
    std::optional<bool> bound_ok; // #A > 2^omega(n), when the psi premise applies
};

/// Counts a with |a| < n, gcd(a, n) = 1, a ≡ b (mod p^{N - nu_p(n)}) two
/// ways: directly, and through the Moebius inversion over divisors of the
/// p-free part. When psi_n is supplied and psi_n > 4^omega(n) with
/// psi_n/n < p^{-nu_p(n)}, also evaluates the lower bound #A > 2^omega(n).
PairCount count_coprime_residues(long long n, long long p, int N, long long b,
                                 const std::optional<Rational>& psi_n = {});

CheckReport count_pair_check(long long n, long long p, int N, long long b);

/// Digit shift on units: drops digit 0 and bumps the new leading digit to 1
/// when it would vanish. Input precision must be >= 2 and digit 0 nonzero.
DigitVector tau1_digits(const DigitVector& b);

/// Ball form of the composed map p^k b -> p^k / tau1(b): sends a class of
/// depth M >= k+2 inside p^k Z_p^x to a class of depth M-1.
PAdicBall tau2_ball(const PAdicBall& ball);

/// Interval length of the digit-mirroring preimage equals p times the ball
/// measure, for every sampled ball.
CheckReport iota_pushforward_check(long long p, const std::vector<PAdicBall>& sample);

/// Exact residue verification of every disjointness/measure identity the
/// schedule's case relies on: orbit sizes (2 vs 4), additivity of the full
/// ball family, the fixed-generator congruences for p in {2, 3, 5}, and the
/// digit caps of the small-prime cases.
CheckReport schedule_identity_checks(const ResidueSchedule& s);

/// Lebesgue measure of the union of [0, x + 1/q] ∩ [0, 1] over primes
/// q >= Q: returns (exact measure, limit value x). The measure is
/// min(1, x + 1/q0) with q0 the smallest prime >= Q.
std::pair<Rational, Rational> real_interval_tail(const Rational& x, long long Q);

struct ShellReport {
    std::vector<std::pair<int, Rational>> shells; // (k, mu(set ∩ p^k Z_p^x))
    Rational residual;                            // mass inside p^{k_max+1} Z_p

    nlohmann::json to_json() const;
};

/// Exact shell decomposition of a set: measures of the intersections with
/// p^k Z_p^x for k <= k_max plus the residual deep mass; rows sum to the
/// total measure.
ShellReport shell_report(const BallSet& set, int k_max);

/// Runs the family-C tail union of a rule and reports, per shell k <= k_max,
/// whether the stage measure is exactly 0 or exactly (p-1)/p^{k+1}.
CheckReport zero_full_shell_diagnostic(long long p, const PsiRule& rule, long long T, int k_max);

/// A support bound that includes, for every supported shell, one prime large
/// enough that the family-C stage set covers its whole shell.
long long covering_support_bound(long long p, const PsiRule& rule);

} // namespace padicds
