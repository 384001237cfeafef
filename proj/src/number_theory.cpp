#include "padicds/number_theory.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>

#include "padicds/errors.hpp"

namespace padicds {

namespace {

uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return r;
}

} // namespace

bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = static_cast<uint64_t>(n - 1);
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Sufficient witness set for all 64-bit integers.
    for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        uint64_t x = pow_mod(a, d, static_cast<uint64_t>(n));
        if (x == 1 || x == static_cast<uint64_t>(n - 1)) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, static_cast<uint64_t>(n));
            if (x == static_cast<uint64_t>(n - 1)) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

long long next_prime_at_least(long long n) {
    if (n <= 2) return 2;
    if (n % 2 == 0) ++n;
    while (!is_prime(n)) n += 2;
    return n;
}

Factorization factorize(long long n) {
    if (n <= 0) throw InvalidInput("factorize: n must be >= 1");
    Factorization f;
    for (long long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.factors.emplace_back(p, e);
    }
    if (n > 1) f.factors.emplace_back(n, 1);
    return f;
}

ArithValues arith_functions(long long n) {
    Factorization f = factorize(n);
    long long phi = 1;
    int mu = 1;
    for (auto [p, e] : f.factors) {
        phi *= (p - 1);
        for (int i = 1; i < e; ++i) phi *= p;
        mu = (e > 1) ? 0 : -mu;
    }
    return {phi, mu, f.omega()};
}

long long primitive_root(long long p) {
    if (p < 3 || !is_prime(p)) throw InvalidInput("primitive_root: p must be an odd prime");
    Factorization f = factorize(p - 1);
    for (long long g = 2; g < p; ++g) {
        bool generates = true;
        for (auto [q, e] : f.factors) {
            (void)e;
            if (pow_mod(static_cast<uint64_t>(g), static_cast<uint64_t>((p - 1) / q),
                        static_cast<uint64_t>(p)) == 1) {
                generates = false;
                break;
            }
        }
        if (generates) return g;
    }
    throw InvalidInput("primitive_root: no generator found"); // unreachable for prime p
}

long long dirichlet_prime(long long a, long long b, int index, long long cap) {
    if (b < 1 || index < 1) throw InvalidInput("dirichlet_prime: b >= 1 and index >= 1 required");
    long long a0 = ((a % b) + b) % b;
    if (std::gcd(a0, b) != 1) throw InvalidInput("dirichlet_prime: gcd(a, b) must be 1");
    int found = 0;
    // b = 1: every prime qualifies, start the scan at 2.
    long long q = (b == 1) ? 2 : (a0 == 0 ? b : a0);
    if (q < 2) q += b;
    for (; q <= cap; q += (b == 1 ? 1 : b)) {
        if (is_prime(q) && ++found == index) return q;
    }
    throw SearchCapExceeded("dirichlet_prime: fewer than " + std::to_string(index) +
                            " primes ≡ " + std::to_string(a0) + " mod " + std::to_string(b) +
                            " below " + std::to_string(cap));
}

std::vector<long long> divisors(const Factorization& f) {
    std::vector<long long> ds{1};
    for (auto [p, e] : f.factors) {
        size_t base = ds.size();
        long long pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < base; ++j) ds.push_back(ds[j] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

int valuation_int(long long p, long long n) {
    if (n == 0) throw InvalidInput("valuation_int: n must be nonzero");
    if (n < 0) n = -n;
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

long long mod_pow(long long base, long long exp, long long mod) {
    return static_cast<long long>(pow_mod(static_cast<uint64_t>(((base % mod) + mod) % mod),
                                          static_cast<uint64_t>(exp),
                                          static_cast<uint64_t>(mod)));
}

} // namespace padicds
