#include "padicds/checks.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "padicds/errors.hpp"
#include "padicds/number_theory.hpp"

namespace padicds {

namespace {

long long pow_ll(long long b, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

long long floor_div(long long a, long long b) {
    long long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

// #{l : |l| < L, l ≡ c (mod m)} for 0 <= c < m, L >= 1.
long long count_in_ap(long long L, long long c, long long m) {
    return floor_div(L - 1 - c, m) + floor_div(L - 1 + c, m) + 1;
}

} // namespace

CheckReport large_psi_shell_check(long long p, long long n, const Rational& psi_n) {
    if (n <= 1) throw PreconditionFailed("large_psi_shell_check: n > 1 required");
    int w = arith_functions(n).omega;
    Rational threshold(pow_int(4, static_cast<unsigned long>(w)));
    if (!(psi_n > threshold))
        throw PreconditionFailed("large_psi_shell_check: psi(n) > 4^omega(n) required");
    int k = valuation_int(p, n);
    BallSet set = stage_set_c(p, n, psi_n);
    CheckReport rep;
    rep.name = "lemma-haynes";
    rep.params = {{"p", p}, {"n", n}, {"psi", psi_n.str()}, {"k", k}};
    rep.pass = set.contains_shell(k);
    rep.quantities = {{"stage_measure", set.measure().str()},
                      {"shell_measure", set.shell_measure(k).str()}};
    if (!rep.pass) rep.witness = {{"missing_shell", k}};
    return rep;
}

PairCount count_coprime_residues(long long n, long long p, int N, long long b,
                                 const std::optional<Rational>& psi_n) {
    if (n < 1) throw InvalidInput("count_coprime_residues: n >= 1 required");
    int k = valuation_int(p, n);
    if (N <= k) throw PreconditionFailed("count_coprime_residues: N > nu_p(n) required");
    int j = N - k;
    long long m = pow_ll(p, j);
    long long b0 = ((b % m) + m) % m;
    if (std::gcd(b0, p) != 1) throw InvalidResidue("count_coprime_residues: b must be a unit");

    PairCount out;
    // Direct: walk the progression b0 + mZ through (-n, n).
    long long a = b0 - m * floor_div(b0 + n - 1, m);
    for (; a <= n - 1; a += m) {
        long long abs_a = a < 0 ? -a : a;
        if (std::gcd(abs_a, n) == 1) ++out.direct;
    }
    // Moebius route over divisors of the p-free part.
    long long n_free = n / pow_ll(p, k);
    Factorization f = factorize(n_free);
    long long total = 0;
    for_each_squarefree_divisor(f, [&](long long d, int mu) {
        long long dinv = mod_inverse_prime_power(Int(static_cast<long>(d % m)), p, j).get_si();
        long long c = static_cast<long long>((static_cast<__int128>(b0) * dinv) % m);
        total += mu * count_in_ap(n / d, c, m);
    });
    out.moebius = total;

    if (psi_n.has_value()) {
        ArithValues av = arith_functions(n);
        Rational four_pow(pow_int(4, static_cast<unsigned long>(av.omega)));
        int w_free = arith_functions(n_free).omega;
        // Entry point of the counting chain: #A > 2 p^k phi(n) psi(n)/n -
        // 2^{omega(n/p^k)}. Only when that inequality is instantiated does
        // the chain force #A > 2^{omega(n)}.
        Rational entry = Rational(2) * pow_rational(p, k) * Rational(av.phi) * *psi_n /
                             Rational(n) -
                         Rational(1LL << w_free);
        if (*psi_n > four_pow && Rational(out.direct) > entry)
            out.bound_ok = out.direct > (1LL << av.omega);
    }
    return out;
}

CheckReport count_pair_check(long long n, long long p, int N, long long b) {
    PairCount c = count_coprime_residues(n, p, N, b);
    CheckReport rep;
    rep.name = "moebius-count";
    rep.params = {{"n", n}, {"p", p}, {"N", N}, {"b", b}};
    rep.pass = c.direct == c.moebius;
    rep.quantities = {{"direct", c.direct}, {"moebius", c.moebius}};
    if (!rep.pass) rep.witness = rep.params;
    return rep;
}

DigitVector tau1_digits(const DigitVector& b) {
    if (b.precision() < 2) throw InvalidInput("tau1_digits: precision >= 2 required");
    if (b.digits[0] == 0) throw NotAUnit("tau1_digits: digit 0 must be nonzero");
    DigitVector out;
    out.prime = b.prime;
    out.digits.assign(b.digits.begin() + 1, b.digits.end());
    if (out.digits[0] == 0) out.digits[0] = 1;
    return out;
}

PAdicBall tau2_ball(const PAdicBall& ball) {
    if (!ball.is_class()) throw NotAUnitBall("tau2_ball: class ball required");
    long long p = ball.prime();
    Int c = ball.residue();
    if (c == 0) throw NotAUnitBall("tau2_ball: ball not inside any shell p^k Z_p^x");
    int k = 0;
    Int pz(static_cast<long>(p));
    Int u = c;
    while (u % pz == 0) {
        u /= pz;
        ++k;
    }
    int m = ball.depth();
    if (m < k + 2) throw NotAUnitBall("tau2_ball: depth must be >= nu_p(center) + 2");
    // Unit part at precision m-k, shifted by tau1, then inverted (inversion
    // keeps the depth), then scaled back by p^k.
    DigitVector ud;
    ud.prime = p;
    Int t = u;
    for (int i = 0; i < m - k; ++i) {
        Int digit = t % pz;
        ud.digits.push_back(static_cast<int>(digit.get_si()));
        t /= pz;
    }
    DigitVector shifted = tau1_digits(ud);
    Int inv = mod_inverse_prime_power(shifted.residue(), p, m - k - 1);
    Int res = pow_int(p, static_cast<unsigned long>(k)) * inv;
    return PAdicBall::residue_class(p, res, m - 1);
}

CheckReport iota_pushforward_check(long long p, const std::vector<PAdicBall>& sample) {
    CheckReport rep;
    rep.name = "iota-pushforward";
    rep.params = {{"p", p}, {"samples", sample.size()}};
    rep.pass = true;
    for (const PAdicBall& ball : sample) {
        Interval iv = iota_inverse_ball(ball);
        if (!(iv.length() == Rational(p) * ball.measure())) {
            rep.pass = false;
            rep.witness = {{"ball", ball.str()},
                           {"interval_length", iv.length().str()},
                           {"p_times_measure", (Rational(p) * ball.measure()).str()}};
            break;
        }
    }
    return rep;
}

CheckReport schedule_identity_checks(const ResidueSchedule& s) {
    CheckReport rep;
    rep.name = "case-identities";
    rep.params = {{"p", s.p}, {"x", s.x.str()}, {"depth", s.depth}, {"g", s.g}};
    rep.pass = true;
    auto fail = [&](nlohmann::json w) {
        rep.pass = false;
        if (rep.witness.empty()) rep.witness = std::move(w);
    };
    long long p = s.p;

    auto inv1 = [&](long long m) {
        return mod_inverse_prime_power(Int(static_cast<long>(m)), p, 1).get_si();
    };

    if (s.kind == ScheduleCase::P1Mod4) {
        // Four distinct center residues for the interior orbit exponents,
        // two for the poles i = 0 and i = (p-1)/4, which glue crosswise.
        long long quarter = (p - 1) / 4;
        long long gq = mod_pow(s.g, quarter, p);
        if ((gq + inv1(gq)) % p != 0) fail({{"identity", "g^((p-1)/4) = -g^(-(p-1)/4)"}});
        for (long long i = 1; i < quarter; ++i) {
            long long gi = mod_pow(s.g, i, p);
            std::set<long long> orbit{gi, p - gi, inv1(gi), p - inv1(gi)};
            if (orbit.size() != 4) fail({{"identity", "4-orbit"}, {"i", i}});
        }
        for (long long j : {0LL, quarter}) {
            long long gj = mod_pow(s.g, j, p);
            std::set<long long> orbit{gj, p - gj, inv1(gj), p - inv1(gj)};
            if (orbit.size() != 2) fail({{"identity", "2-orbit"}, {"j", j}});
        }
    }

    if (p == 2) {
        for (int i = 1; i <= s.depth; ++i) {
            long long mod = pow_ll(2, i + 1);
            long long c = (1 + pow_ll(2, i)) % mod;
            if (mod_inverse_prime_power(Int(static_cast<long>(c)), 2, i + 1).get_si() != c)
                fail({{"identity", "(1+2^i)^{-1} = 1+2^i mod 2^{i+1}"}, {"i", i}});
        }
    }
    if (p == 3) {
        for (const ScheduleRow& row : s.rows)
            if (row.b[0] != 0) fail({{"identity", "b_{k,1} = 0 at p = 3"}});
        for (int i = 2; i <= s.depth; ++i) {
            for (long long bp = 1; bp <= 2; ++bp) {
                long long mod = pow_ll(3, i + 1);
                long long c = (2 + bp * pow_ll(3, i)) % mod;
                long long ci =
                    mod_inverse_prime_power(Int(static_cast<long>(c)), 3, i + 1).get_si();
                if (c % 9 != 2 || (mod - c) % 9 != 7 || ci % 9 != 5 || (mod - ci) % 9 != 4)
                    fail({{"identity", "p=3 depth-2 inclusion table"}, {"i", i}, {"b'", bp}});
            }
        }
    }
    if (p == 5) {
        for (const ScheduleRow& row : s.rows)
            if (row.b[0] > 1) fail({{"identity", "b_{k,1} <= 1 at p = 5"}});
        for (int i = 1; i <= s.depth; ++i) {
            for (long long bp = 1; bp <= 4; ++bp) {
                if (i == 1 && bp > 1) continue; // digit cap keeps b' <= 1 here
                long long a = (i == 1) ? bp : 0;
                long long mod = pow_ll(5, i + 1);
                long long c = (3 + bp * pow_ll(5, i)) % mod;
                long long ci =
                    mod_inverse_prime_power(Int(static_cast<long>(c)), 5, i + 1).get_si();
                bool ok = c % 25 == (3 + a * 5) % 25 && (mod - c) % 25 == (2 + (4 - a) * 5) % 25 &&
                          ci % 25 == (2 + (3 + a) * 5) % 25 &&
                          (mod - ci) % 25 == (3 + (1 - a) * 5) % 25;
                if (!ok) fail({{"identity", "p=5 depth-2 inclusion table"}, {"i", i}, {"b'", bp}});
            }
        }
        for (long long a : {0LL, 1LL}) {
            long long v = (s.g + a * 5) % 25;
            if (v == 7 || v == 18) fail({{"identity", "g + a*5 != ±7 mod 25"}, {"a", a}});
        }
    }

    // Measure additivity of the whole ball family of each row: 4/p^{l+1} per
    // interior (i, b') group, 2/p per pole, and pairwise disjointness overall.
    for (int k = 0; k <= s.k_max; ++k) {
        const ScheduleRow& row = s.rows[static_cast<size_t>(k)];
        BallSet all(p);
        Rational expected_sum(0);
        std::set<long long> shallow;
        for (long long m : row.orbit_seeds) {
            shallow.insert(m % p);
            shallow.insert((p - m % p) % p);
            shallow.insert(inv1(m));
            shallow.insert((p - inv1(m)) % p);
        }
        // the enumerated orbit mass must match the case's floor formula
        long long a = row.x_digit;
        long long formula = 0;
        switch (s.kind) {
        case ScheduleCase::P1Mod4:
            formula = (a == p - 1) ? p - 1 : 4 * (a / 4);
            break;
        case ScheduleCase::P3Mod4:
            formula = (a == p - 1) ? p - 1 : (a >= 2 ? 4 * ((a - 2) / 4) + 2 : 0);
            break;
        case ScheduleCase::P2:
            formula = (a == 1) ? 1 : 0;
            break;
        case ScheduleCase::P3or5:
            formula = (a == p - 1) ? p - 1 : 2 * (a / 2);
            break;
        }
        if (static_cast<long long>(shallow.size()) != formula)
            fail({{"identity", "orbit mass formula"},
                  {"k", k},
                  {"enumerated", shallow.size()},
                  {"formula", formula}});
        for (long long r : shallow) {
            all.insert(PAdicBall::residue_class(p, Int(static_cast<long>(r)), 1));
            expected_sum += pow_rational(p, -1);
        }
        for (int i = 1; i <= s.depth; ++i) {
            for (int bp = 1; bp <= row.b[static_cast<size_t>(i - 1)]; ++bp) {
                long long mod = pow_ll(p, i + 1);
                long long c = (s.g + bp * pow_ll(p, i)) % mod;
                long long ci =
                    mod_inverse_prime_power(Int(static_cast<long>(c)), p, i + 1).get_si();
                std::set<long long> centers{c, (mod - c) % mod, ci, (mod - ci) % mod};
                size_t expected_count = (p == 2) ? 2 : 4;
                if (centers.size() != expected_count)
                    fail({{"identity", "center group size"}, {"i", i}, {"b'", bp}});
                for (long long r : centers) {
                    all.insert(PAdicBall::residue_class(p, Int(static_cast<long>(r)), i + 1));
                    expected_sum += pow_rational(p, -(i + 1));
                }
            }
        }
        if (!(all.measure() == expected_sum))
            fail({{"identity", "pairwise disjointness"},
                  {"k", k},
                  {"measure", all.measure().str()},
                  {"sum", expected_sum.str()}});
    }
    rep.quantities = {{"realized", s.realized_value().str()}};
    return rep;
}

std::pair<Rational, Rational> real_interval_tail(const Rational& x, long long Q) {
    if (x.sign() < 0 || x > Rational(1))
        throw OutOfRange("real_interval_tail: x must be in [0, 1]");
    if (Q < 2) throw InvalidInput("real_interval_tail: Q >= 2 required");
    // Union of the nested intervals [0, min(1, x + 1/q)]: scan a few primes
    // and keep the largest right endpoint.
    Rational sup(0);
    long long q = next_prime_at_least(Q);
    for (int i = 0; i < 8; ++i) {
        Rational hi = x + Rational(1, q);
        if (hi > Rational(1)) hi = Rational(1);
        if (hi > sup) sup = hi;
        q = next_prime_at_least(q + 1);
    }
    return {sup, x};
}

nlohmann::json ShellReport::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [k, m] : shells) rows.push_back({{"k", k}, {"measure", m.str()}});
    return {{"shells", rows}, {"residual", residual.str()}};
}

ShellReport shell_report(const BallSet& set, int k_max) {
    ShellReport rep;
    for (int k = 0; k <= k_max; ++k) rep.shells.emplace_back(k, set.shell_measure(k));
    BallSet deep(set.prime());
    deep.insert(PAdicBall::residue_class(set.prime(), 0, k_max + 1));
    rep.residual = set_intersect(set, deep).measure();
    return rep;
}

long long covering_support_bound(long long p, const PsiRule& rule) {
    long long cap = rule.prime_cap();
    switch (rule.kind()) {
    case PsiRule::Kind::Schedule: {
        const ResidueSchedule& s = *rule.schedule_data();
        long long bound = 2;
        long long pk = 1;
        for (int k = 0; k <= s.k_max; ++k, pk *= p) {
            const ScheduleRow& row = s.rows[static_cast<size_t>(k)];
            long long q_cover = 0;
            if (!row.orbit_seeds.empty()) {
                // Depth-1 classes: any support prime >= p+1 covers the shell.
                for (int idx = 1; q_cover == 0; ++idx) {
                    long long q = dirichlet_prime(row.orbit_seeds[0], p, idx, cap);
                    if (q > p) q_cover = q;
                }
            } else {
                for (int i = 1; i <= s.depth && q_cover == 0; ++i) {
                    if (row.b[static_cast<size_t>(i - 1)] == 0) continue;
                    long long mod = pow_ll(p, i + 1);
                    long long cls = (s.g + pow_ll(p, i)) % mod;
                    for (int idx = 1; q_cover == 0; ++idx) {
                        long long q = dirichlet_prime(cls, mod, idx, cap);
                        if (q > mod) q_cover = q;
                    }
                }
            }
            if (q_cover > 0) bound = std::max(bound, pk * q_cover);
        }
        return bound;
    }
    case PsiRule::Kind::ShellDigits: {
        // One admissible prime q > p per supported shell.
        long long q = next_prime_at_least(p + 1);
        long long bound = 2;
        long long pk = 1;
        for (int k = 0; k < 16; ++k, pk *= p)
            if (!rule.evaluate(pk).is_zero() || !rule.evaluate(pk * q).is_zero())
                bound = std::max(bound, pk * q);
        return bound;
    }
    default:
        return 64;
    }
}

CheckReport zero_full_shell_diagnostic(long long p, const PsiRule& rule, long long T, int k_max) {
    TailReport tail = tail_union(Family::C, p, rule, 1, T);
    ShellReport shells = shell_report(tail.set, k_max);
    CheckReport rep;
    rep.name = "shell-zero-full";
    rep.params = {{"p", p}, {"T", T}, {"k_max", k_max}};
    rep.pass = true;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [k, m] : shells.shells) {
        Rational full = Rational(p - 1) * pow_rational(p, -(k + 1));
        bool ok = m.is_zero() || m == full;
        rows.push_back({{"k", k}, {"measure", m.str()}, {"zero_or_full", ok}});
        if (!ok) {
            rep.pass = false;
            if (rep.witness.empty())
                rep.witness = {{"k", k}, {"measure", m.str()}, {"full", full.str()}};
        }
    }
    rep.quantities = {{"rows", rows}, {"total", tail.measure.str()}};
    return rep;
}

} // namespace padicds
