#pragma once

#include <utility>
#include <vector>

#include "padicds/rational.hpp"

namespace padicds {

/// Exact prime factorization, primes strictly increasing, exponents >= 1.
/// The factorization of 1 is the empty list.
struct Factorization {
    std::vector<std::pair<long long, int>> factors;

    long long value() const {
        long long n = 1;
        for (auto [p, e] : factors)
            for (int i = 0; i < e; ++i) n *= p;
        return n;
    }
    int omega() const { return static_cast<int>(factors.size()); }
};

Factorization factorize(long long n); // n >= 1, InvalidInput otherwise

struct ArithValues {
    long long phi;
    int mu;
    int omega;
};

/// Euler totient, Moebius value and number of distinct prime divisors of n.
ArithValues arith_functions(long long n);

/// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime(long long n);

long long next_prime_at_least(long long n);

/// Smallest g >= 2 generating (Z/pZ)^x, for odd prime p.
long long primitive_root(long long p);

/// The index-th prime q ≡ a (mod b) with q <= cap, by increasing size.
/// Throws SearchCapExceeded when fewer than index such primes exist below cap.
long long dirichlet_prime(long long a, long long b, int index, long long cap);

/// All positive divisors of n (from its factorization), increasing.
std::vector<long long> divisors(const Factorization& f);

/// Calls fn(d, mu(d)) for every squarefree divisor d of f's value.
template <typename Fn>
void for_each_squarefree_divisor(const Factorization& f, Fn&& fn) {
    int w = f.omega();
    for (unsigned mask = 0; mask < (1u << w); ++mask) {
        long long d = 1;
        int mu = 1;
        for (int i = 0; i < w; ++i) {
            if (mask & (1u << i)) {
                d *= f.factors[static_cast<size_t>(i)].first;
                mu = -mu;
            }
        }
        fn(d, mu);
    }
}

/// p-adic valuation of a nonzero integer.
int valuation_int(long long p, long long n);

long long mod_pow(long long base, long long exp, long long mod);

} // namespace padicds
