#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "padicds/family.hpp"
#include "padicds/rational.hpp"

namespace padicds {

/// Base-p digit sequence x_0, x_1, ... encoding x = sum x_k p^{-k-1}.
/// The stored list is finite; digits beyond it are zero.
class SpectrumDigits {
  public:
    SpectrumDigits(long long p, std::vector<int> digits);

    /// Canonical (no trailing p-1 tail) digits of x in [0, 1). Throws
    /// OutOfRange for x outside [0, 1), InvalidDigits when the expansion does
    /// not terminate within max_len digits.
    static SpectrumDigits from_rational(long long p, const Rational& x, int max_len = 64);

    long long prime() const { return prime_; }
    int digit(int k) const {
        return (k >= 0 && k < static_cast<int>(digits_.size())) ? digits_[static_cast<size_t>(k)]
                                                                : 0;
    }
    int length() const { return static_cast<int>(digits_.size()); }
    const std::vector<int>& digits() const { return digits_; }

    bool is_binary() const;

    /// x = sum x_k p^{-k-1}.
    Rational value() const;

  private:
    long long prime_;
    std::vector<int> digits_;
};

/// sum x_k (p-1) p^{-k-1}: the measure realized by the shell-digit rule.
Rational spectrum_target_value(const SpectrumDigits& d);

struct SpectrumMembership {
    bool member = false;
    std::vector<int> digits;   // digits of x/(p-1), one period when periodic
    bool periodic = false;
    std::string reason;
};

/// Decides whether x lies in the attainable-measure spectrum of the given
/// family (C: x = sum x_k (p-1) p^{-k-1} with binary x_k; B: additionally
/// x_0 = 0, or x = 1). Exact greedy digit extraction with cycle detection.
SpectrumMembership spectrum_membership(long long p, const Rational& x, Family family);

enum class ScheduleCase {
    P1Mod4, // p > 5, p ≡ 1 (mod 4)
    P3Mod4, // p > 5, p ≡ 3 (mod 4)
    P2,     // p = 2, fixed g = 1, digits taken from r/2
    P3or5,  // p in {3, 5}, fixed g, support extends one shell further
};

/// Per-shell data of a residue schedule: the seed set I for depth-1 classes,
/// the remainder r routed through deeper classes, and the digit schedule b
/// (b[i-1] is the digit at class depth i+1), truncated at the build depth.
struct ScheduleRow {
    int x_digit = 0;
    std::vector<long long> orbit_seeds; // subset of {1, .., p-1}, increasing
    Rational r;
    std::vector<int> b;
};

/// Everything needed to evaluate the prime-supported rule that realizes a
/// prescribed measure x for the unitary-split family: case tag, generator,
/// first free shell K, and one row per supported shell.
struct ResidueSchedule {
    long long p = 2;
    ScheduleCase kind = ScheduleCase::P2;
    long long g = 1;
    int K = 0;
    int k_max = 0; // K, or K+1 for the P3or5 case
    int depth = 8; // b-schedule truncation depth D
    Rational x;
    std::vector<ScheduleRow> rows; // rows[k], 0 <= k <= k_max

    /// The measure the truncated schedule realizes: x minus the mass of the
    /// b-digits beyond the truncation depth.
    Rational realized_value() const;
};

/// Builds the schedule for x in [0, 1). Throws RepresentsOne for x = 1.
ResidueSchedule build_residue_schedule(long long p, const Rational& x, int depth = 8);

/// An approximation function N -> Q≥0, evaluable anywhere and enumerable on
/// its support. Immutable value; copies share rule data.
class PsiRule {
  public:
    enum class Kind { Zero, Table, ShellDigits, Schedule, PrimeLinear };

    static PsiRule zero();
    static PsiRule table(std::map<long long, Rational> entries);
    /// psi(n) = x_{nu_p(n)} * n / p^{nu_p(n)+1} for binary digits x.
    /// Throws InvalidDigits unless all digits are 0/1.
    static PsiRule shell_digits(long long p, SpectrumDigits digits);
    static PsiRule schedule(ResidueSchedule sched, long long prime_cap);
    /// psi(q) = q*x on primes, 0 elsewhere; x in [0, 1] (OutOfRange otherwise).
    static PsiRule prime_linear(const Rational& x);

    /// The strict-to-nonstrict bridge: multiplies psi(n) by p exactly when
    /// psi(n) = n / p^k for some integer k.
    PsiRule with_prime_power_adjustment(long long p) const;

    Kind kind() const { return kind_; }

    Rational evaluate(long long n) const;

    struct SupportEntry {
        long long n;
        Rational value;
        std::string part; // which branch of the rule produced the value
    };

    /// All (n, psi(n)) with psi(n) > 0 and N <= n <= T, increasing in n.
    std::vector<SupportEntry> support(long long N, long long T) const;

    /// Smallest k with psi(n)/n >= p^{-k} for infinitely many n in p^k N,
    /// rendered as a string ("inf" when none exists). Informational.
    std::string shell_cutoff_l(long long p) const;

    const ResidueSchedule* schedule_data() const { return sched_.get(); }
    long long prime_cap() const { return prime_cap_; }

  private:
    PsiRule() = default;

    Kind kind_ = Kind::Zero;
    long long prime_ = 2;                     // ShellDigits
    std::shared_ptr<const SpectrumDigits> digits_;
    std::shared_ptr<const ResidueSchedule> sched_;
    std::shared_ptr<const std::map<long long, Rational>> table_;
    Rational linear_x_;
    long long prime_cap_ = 10'000'000;
    std::optional<long long> adjust_prime_;   // psi' transform
};

} // namespace padicds
