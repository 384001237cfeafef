#include "padicds/stage_sets.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <thread>

#include "padicds/errors.hpp"
#include "padicds/number_theory.hpp"

namespace padicds {

namespace {

long long mul_mod_ll(long long a, long long b, long long m) {
    return static_cast<long long>((static_cast<__int128>(a) * b) % m);
}

long long inv_mod_ll(long long a, long long m) {
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

// p^M as int64 when it fits comfortably, 0 otherwise.
long long pow_fits(long long p, int M) {
    long long v = 1;
    for (int i = 0; i < M; ++i) {
        if (v > (1LL << 60) / p) return 0;
        v *= p;
    }
    return v;
}

} // namespace

BallSet stage_set_a(long long p, long long n, const Rational& psi_n, bool keep_singletons) {
    if (n < 1) throw InvalidInput("stage_set_a: n >= 1 required");
    BallSet out(p, keep_singletons);
    Rational radius = psi_n / Rational(n);

    int M = radius.sign() > 0 ? depth_for_radius(p, radius) : 0;
    long long pM = radius.sign() > 0 && M >= 1 ? pow_fits(p, M) : 0;
    if (pM != 0) {
        // centers a/n = (a / p^e) / n0 with n = p^e n0; machine arithmetic
        long long pe = 1, n0 = n;
        while (n0 % p == 0) {
            n0 /= p;
            pe *= p;
        }
        long long n0_inv = inv_mod_ll(n0 % pM, pM);
        std::set<long long> residues;
        for (long long a = -n; a <= n; ++a) {
            if (std::gcd(a < 0 ? -a : a, n) != 1) continue;
            if (a % pe != 0) continue; // nu_p(a/n) < 0
            long long shifted = ((a / pe) % pM + pM) % pM;
            residues.insert(mul_mod_ll(shifted, n0_inv, pM));
        }
        for (long long r : residues)
            out.insert(PAdicBall::residue_class(p, Int(static_cast<long>(r)), M));
        return out;
    }
    for (long long a = -n; a <= n; ++a) {
        if (std::gcd(a < 0 ? -a : a, n) != 1) continue;
        out.insert(ball_intersect_Zp(p, Rational(a, n), radius));
    }
    return out;
}

BallSet stage_set_c(long long p, long long n, const Rational& psi_n, bool keep_singletons) {
    if (n < 1) throw InvalidInput("stage_set_c: n >= 1 required");
    BallSet out(p, keep_singletons);
    Rational radius = psi_n / Rational(n);

    int M = radius.sign() > 0 ? depth_for_radius(p, radius) : 0;
    if (radius.sign() > 0 && M <= 0) {
        // radius >= 1 and every center n/a lies in Z_p
        for (long long a = 1; a <= n - 1; ++a) {
            if (a % p == 0 || std::gcd(a, n) != 1) continue;
            out.insert(PAdicBall::residue_class(p, 0, 0));
            return out;
        }
        return out;
    }
    long long pM = radius.sign() > 0 ? pow_fits(p, M) : 0;
    if (pM != 0) {
        long long n_mod = ((n % pM) + pM) % pM;
        std::set<long long> residues;
        for (long long a = 1; a <= n - 1; ++a) {
            if (a % p == 0 || std::gcd(a, n) != 1) continue;
            long long inv = inv_mod_ll(a % pM, pM);
            residues.insert(mul_mod_ll(n_mod, inv, pM));
            residues.insert(mul_mod_ll(n_mod, pM - inv, pM));
        }
        for (long long r : residues)
            out.insert(PAdicBall::residue_class(p, Int(static_cast<long>(r)), M));
        return out;
    }
    for (long long a = -(n - 1); a <= n - 1; ++a) {
        if (a == 0) continue; // gcd(0, pn) = pn > 1
        long long abs_a = a < 0 ? -a : a;
        if (abs_a % p == 0 || std::gcd(abs_a, n) != 1) continue;
        out.insert(ball_intersect_Zp(p, Rational(n, a), radius));
    }
    return out;
}

BallSet stage_set_b(long long p, long long n, const Rational& psi_n, bool keep_singletons) {
    return set_union(stage_set_a(p, n, psi_n, keep_singletons),
                     stage_set_c(p, n, psi_n, keep_singletons));
}

BallSet stage_set_frak_k(long long p, long long n, const Rational& psi_n, bool keep_singletons) {
    if (n < 1) throw InvalidInput("stage_set_frak_k: n >= 1 required");
    BallSet out(p, keep_singletons);
    Rational radius = psi_n / Rational(n);
    for (long long a : divisors(factorize(n))) {
        // a / (n/a) = a^2 / n
        Rational center(Int(static_cast<long>(a)) * Int(static_cast<long>(a)),
                        Int(static_cast<long>(n)));
        out.insert(ball_intersect_Zp(p, center, radius));
        out.insert(ball_intersect_Zp(p, -center, radius));
    }
    return out;
}

BallSet stage_set_frak_a(long long p, long long n, const Rational& psi_n, bool keep_singletons) {
    if (n < 1) throw InvalidInput("stage_set_frak_a: n >= 1 required");
    BallSet out(p, keep_singletons);
    Rational radius = psi_n / Rational(n);
    Factorization f = factorize(n);
    int w = f.omega();
    for (unsigned mask = 0; mask < (1u << w); ++mask) {
        Int u(1);
        for (int i = 0; i < w; ++i)
            if (mask & (1u << i))
                u *= pow_int(f.factors[static_cast<size_t>(i)].first,
                             static_cast<unsigned long>(f.factors[static_cast<size_t>(i)].second));
        // u / (n/u) = u^2 / n
        Rational center(u * u, Int(static_cast<long>(n)));
        out.insert(ball_intersect_Zp(p, center, radius));
        out.insert(ball_intersect_Zp(p, -center, radius));
    }
    return out;
}

BallSet stage_set(Family family, long long p, long long n, const Rational& psi_n,
                  bool keep_singletons) {
    switch (family) {
    case Family::A: return stage_set_a(p, n, psi_n, keep_singletons);
    case Family::C: return stage_set_c(p, n, psi_n, keep_singletons);
    case Family::B: return stage_set_b(p, n, psi_n, keep_singletons);
    case Family::FrakA: return stage_set_frak_a(p, n, psi_n, keep_singletons);
    case Family::FrakK: return stage_set_frak_k(p, n, psi_n, keep_singletons);
    }
    throw InvalidInput("stage_set: bad family");
}

nlohmann::json TailReport::to_json() const {
    return {{"family", family_name(family)},
            {"p", p},
            {"range", {range_lo, range_hi}},
            {"stages", stages},
            {"measure", measure.str()},
            {"series", series.str()},
            {"union", set.to_json()}};
}

TailReport tail_union_over(Family family, long long p,
                           const std::vector<std::pair<long long, Rational>>& entries,
                           int parallelism) {
    TailReport rep;
    rep.family = family;
    rep.p = p;
    rep.set = BallSet(p);
    rep.stages = static_cast<long long>(entries.size());
    if (!entries.empty()) {
        rep.range_lo = entries.front().first;
        rep.range_hi = entries.back().first;
    }

    size_t workers = parallelism < 1 ? 1 : static_cast<size_t>(parallelism);
    workers = std::min(workers, entries.empty() ? size_t{1} : entries.size());

    std::vector<BallSet> partial(workers, BallSet(p));
    std::vector<Rational> partial_series(workers, Rational(0));

    auto run = [&](size_t w) {
        for (size_t i = w; i < entries.size(); i += workers) {
            BallSet s = stage_set(family, p, entries[i].first, entries[i].second);
            partial_series[w] += s.measure();
            partial[w] = set_union(partial[w], s);
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    rep.series = Rational(0);
    for (size_t w = 0; w < workers; ++w) {
        rep.set = set_union(rep.set, partial[w]);
        rep.series += partial_series[w];
    }
    rep.measure = rep.set.measure();
    return rep;
}

TailReport tail_union(Family family, long long p, const PsiRule& psi, long long N, long long T,
                      int parallelism) {
    if (N < 1 || T < N) throw InvalidInput("tail_union: need 1 <= N <= T");
    std::vector<std::pair<long long, Rational>> entries;
    for (const auto& e : psi.support(N, T)) entries.emplace_back(e.n, e.value);
    TailReport rep = tail_union_over(family, p, entries, parallelism);
    rep.range_lo = N;
    rep.range_hi = T;
    return rep;
}

} // namespace padicds
