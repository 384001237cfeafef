#include "padicds/psi_rules.hpp"

#include <algorithm>
#include <set>

#include "padicds/errors.hpp"
#include "padicds/number_theory.hpp"
#include "padicds/padic.hpp"

namespace padicds {

namespace {

// Digit stream of x in [0, 1): digit k and the running remainder
// rem_{k+1} = p^{k+1} (x - sum_{l<=k} x_l p^{-l-1}), which equals the tail
// sum_{l>k} x_l p^{k-l}.
struct DigitStream {
    long long p;
    Rational rem;
    std::vector<int> digits;
    std::vector<Rational> tails; // tails[k] = remainder after digit k

    explicit DigitStream(long long p_, Rational x) : p(p_), rem(std::move(x)) {}

    void ensure(int k) {
        while (static_cast<int>(digits.size()) <= k) {
            rem *= Rational(p);
            Int d = rem.floor();
            rem -= Rational(d);
            digits.push_back(static_cast<int>(d.get_si()));
            tails.push_back(rem);
        }
    }
    int digit(int k) {
        ensure(k);
        return digits[static_cast<size_t>(k)];
    }
    Rational tail(int k) {
        ensure(k);
        return tails[static_cast<size_t>(k)];
    }
};

std::vector<int> base_digits(long long p, Rational y, int depth) {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(depth));
    for (int i = 0; i < depth; ++i) {
        y *= Rational(p);
        Int d = y.floor();
        y -= Rational(d);
        out.push_back(static_cast<int>(d.get_si()));
    }
    return out;
}

long long pow_ll(long long b, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

long long inv_mod(long long a, long long p, int precision) {
    Int r = mod_inverse_prime_power(Int(static_cast<long>(a)), p, precision);
    return r.get_si();
}

} // namespace

SpectrumDigits::SpectrumDigits(long long p, std::vector<int> digits)
    : prime_(p), digits_(std::move(digits)) {
    if (p < 2) throw InvalidInput("SpectrumDigits: p must be >= 2");
    for (int d : digits_)
        if (d < 0 || d >= p) throw InvalidDigits("SpectrumDigits: digit out of range");
}

SpectrumDigits SpectrumDigits::from_rational(long long p, const Rational& x, int max_len) {
    if (x.sign() < 0 || x >= Rational(1)) throw OutOfRange("SpectrumDigits: x must be in [0, 1)");
    DigitStream s(p, x);
    std::vector<int> ds;
    for (int k = 0; k < max_len; ++k) {
        if (k > 0 && s.tail(k - 1).is_zero()) break;
        ds.push_back(s.digit(k));
    }
    if (!s.rem.is_zero())
        throw InvalidDigits("SpectrumDigits: expansion does not terminate within " +
                            std::to_string(max_len) + " digits");
    while (!ds.empty() && ds.back() == 0) ds.pop_back();
    return SpectrumDigits(p, std::move(ds));
}

bool SpectrumDigits::is_binary() const {
    return std::all_of(digits_.begin(), digits_.end(), [](int d) { return d == 0 || d == 1; });
}

Rational SpectrumDigits::value() const {
    Rational v(0);
    for (int k = 0; k < length(); ++k)
        v += Rational(digit(k)) * pow_rational(prime_, -(k + 1));
    return v;
}

Rational spectrum_target_value(const SpectrumDigits& d) {
    return d.value() * Rational(d.prime() - 1);
}

SpectrumMembership spectrum_membership(long long p, const Rational& x, Family family) {
    if (family != Family::C && family != Family::B)
        throw InvalidInput("spectrum_membership: family must be c or b");
    if (x.sign() < 0 || x > Rational(1))
        throw OutOfRange("spectrum_membership: x must be in [0, 1]");

    SpectrumMembership out;
    if (x == Rational(1)) {
        out.member = true;
        out.digits = {1};
        out.periodic = true;
        out.reason = (family == Family::B) ? "x = 1" : "all digits 1";
        return out;
    }

    Rational y = x / Rational(p - 1);

    if (p == 2) {
        // Every base-2 digit sequence is binary: family C admits all of
        // [0, 1]; family B admits exactly [0, 1/2] (digit 0 forced to 0).
        if (family == Family::C) {
            out.member = true;
            out.reason = "binary expansion always exists at p = 2";
        } else {
            out.member = (x <= Rational(1, 2));
            out.reason = out.member ? "x <= 1/2 with leading digit 0"
                                    : "x > 1/2 requires leading digit 1";
        }
        out.digits = base_digits(2, y, 16);
        while (!out.digits.empty() && out.digits.back() == 0) out.digits.pop_back();
        return out;
    }

    // Greedy canonical digits of y with cycle detection: rationals have
    // eventually periodic expansions, so the remainder must repeat.
    std::map<Rational, size_t> seen;
    Rational r = y;
    while (!r.is_zero()) {
        auto it = seen.find(r);
        if (it != seen.end()) {
            out.periodic = true;
            break;
        }
        seen.emplace(r, out.digits.size());
        r *= Rational(p);
        Int d = r.floor();
        r -= Rational(d);
        out.digits.push_back(static_cast<int>(d.get_si()));
    }
    bool binary =
        std::all_of(out.digits.begin(), out.digits.end(), [](int d) { return d <= 1; });
    if (!binary) {
        out.member = false;
        out.reason = "expansion of x/(p-1) needs a digit >= 2";
        return out;
    }
    if (family == Family::B && !out.digits.empty() && out.digits[0] != 0) {
        out.member = false;
        out.reason = "digit x_0 = 1 but the family requires x_0 = 0 (or x = 1)";
        return out;
    }
    out.member = true;
    out.reason = "binary expansion found";
    return out;
}

Rational ResidueSchedule::realized_value() const {
    Rational total(0);
    for (int k = 0; k <= k_max; ++k) {
        const ScheduleRow& row = rows[static_cast<size_t>(k)];
        std::set<long long> shallow;
        for (long long m : row.orbit_seeds) {
            long long mi = inv_mod(m, p, 1);
            shallow.insert(m % p);
            shallow.insert((p - m % p) % p);
            shallow.insert(mi);
            shallow.insert((p - mi) % p);
        }
        Rational stage =
            Rational(static_cast<long long>(shallow.size())) / Rational(p);
        for (int i = 1; i <= depth; ++i) {
            int bi = row.b[static_cast<size_t>(i - 1)];
            for (int bp = 1; bp <= bi; ++bp) {
                long long mod = pow_ll(p, i + 1);
                long long c = (g + bp * pow_ll(p, i)) % mod;
                long long ci = inv_mod(c, p, i + 1);
                std::set<long long> centers{c, mod - c, ci, (mod - ci) % mod};
                stage += Rational(static_cast<long long>(centers.size())) /
                         Rational(Int(static_cast<long>(mod)));
            }
        }
        total += pow_rational(p, -k) * stage;
    }
    return total;
}

ResidueSchedule build_residue_schedule(long long p, const Rational& x, int depth) {
    if (!is_prime(p)) throw InvalidInput("build_residue_schedule: p must be prime");
    if (depth < 1) throw InvalidInput("build_residue_schedule: depth >= 1 required");
    if (x.sign() < 0 || x > Rational(1))
        throw OutOfRange("build_residue_schedule: x must be in [0, 1]");
    if (x == Rational(1))
        throw RepresentsOne("build_residue_schedule: x = 1 (every digit is p-1)");

    ResidueSchedule s;
    s.p = p;
    s.depth = depth;
    s.x = x;
    if (p == 2) {
        s.kind = ScheduleCase::P2;
        s.g = 1;
    } else if (p == 3) {
        s.kind = ScheduleCase::P3or5;
        s.g = 2;
    } else if (p == 5) {
        s.kind = ScheduleCase::P3or5;
        s.g = 3;
    } else if (p % 4 == 1) {
        s.kind = ScheduleCase::P1Mod4;
        s.g = primitive_root(p);
    } else {
        s.kind = ScheduleCase::P3Mod4;
        s.g = primitive_root(p);
    }

    DigitStream ds(p, x);
    int K = 0;
    while (ds.digit(K) == p - 1) ++K; // terminates: x < 1
    s.K = K;
    s.k_max = (s.kind == ScheduleCase::P3or5) ? K + 1 : K;

    auto seeds_for = [&](int a) {
        std::set<long long> seeds;
        if (a == p - 1) {
            for (long long m = 1; m < p; ++m) seeds.insert(m);
        } else if (s.kind == ScheduleCase::P1Mod4 || s.kind == ScheduleCase::P2) {
            if (a >= 4) {
                seeds.insert(1);
                seeds.insert(mod_pow(s.g, (p - 1) / 4, p));
                for (int i = 2; i <= a / 4; ++i) seeds.insert(mod_pow(s.g, i, p));
            }
        } else {
            if (a >= 2) {
                seeds.insert(1);
                for (int i = 2; i <= (a + 2) / 4; ++i) seeds.insert(mod_pow(s.g, i, p));
            }
        }
        return std::vector<long long>(seeds.begin(), seeds.end());
    };

    for (int k = 0; k <= s.k_max; ++k) {
        ScheduleRow row;
        row.x_digit = ds.digit(k);
        row.orbit_seeds = seeds_for(row.x_digit);
        int xk = row.x_digit;
        switch (s.kind) {
        case ScheduleCase::P1Mod4:
        case ScheduleCase::P2:
            row.r = (xk == p - 1) ? Rational(0)
                                  : Rational(xk - 4 * (xk / 4)) + ds.tail(k);
            break;
        case ScheduleCase::P3Mod4:
            if (xk == p - 1)
                row.r = Rational(0);
            else if (xk < 2)
                row.r = Rational(xk) + ds.tail(k);
            else
                row.r = Rational(xk) + ds.tail(k) - Rational(4 * ((xk - 2) / 4) + 2);
            break;
        case ScheduleCase::P3or5:
            if (k == K) {
                // tail over l >= K+2 only: peel the digit at K+1 off the tail
                Rational deep_tail = ds.tail(K) - Rational(ds.digit(K + 1), p);
                row.r = Rational(xk - 2 * (xk / 2)) + deep_tail;
            } else {
                row.r = Rational(xk - 2 * (xk / 2));
            }
            break;
        }
        if (row.r.sign() < 0 || row.r > Rational(4))
            throw Error("build_residue_schedule: r_k out of [0, 4]");
        Rational y = (s.kind == ScheduleCase::P2) ? row.r / Rational(2) : row.r / Rational(4);
        row.b = base_digits(p, y, depth);
        if (p == 3 && row.b[0] != 0)
            throw Error("build_residue_schedule: p=3 requires b_{k,1} = 0");
        if (p == 5 && row.b[0] > 1)
            throw Error("build_residue_schedule: p=5 requires b_{k,1} <= 1");
        s.rows.push_back(std::move(row));
    }
    return s;
}

PsiRule PsiRule::zero() { return PsiRule(); }

PsiRule PsiRule::table(std::map<long long, Rational> entries) {
    for (const auto& [n, v] : entries) {
        if (n < 1) throw InvalidInput("PsiRule::table: keys must be >= 1");
        if (v.sign() < 0) throw InvalidInput("PsiRule::table: psi values must be >= 0");
    }
    PsiRule r;
    r.kind_ = Kind::Table;
    r.table_ = std::make_shared<const std::map<long long, Rational>>(std::move(entries));
    return r;
}

PsiRule PsiRule::shell_digits(long long p, SpectrumDigits digits) {
    if (digits.prime() != p) throw PrimeMismatch("PsiRule::shell_digits: digit prime differs");
    if (!digits.is_binary()) throw InvalidDigits("PsiRule::shell_digits: digits must be 0/1");
    PsiRule r;
    r.kind_ = Kind::ShellDigits;
    r.prime_ = p;
    r.digits_ = std::make_shared<const SpectrumDigits>(std::move(digits));
    return r;
}

PsiRule PsiRule::schedule(ResidueSchedule sched, long long prime_cap) {
    PsiRule r;
    r.kind_ = Kind::Schedule;
    r.prime_ = sched.p;
    r.sched_ = std::make_shared<const ResidueSchedule>(std::move(sched));
    r.prime_cap_ = prime_cap;
    return r;
}

PsiRule PsiRule::prime_linear(const Rational& x) {
    if (x.sign() < 0 || x > Rational(1))
        throw OutOfRange("PsiRule::prime_linear: x must be in [0, 1]");
    PsiRule r;
    r.kind_ = Kind::PrimeLinear;
    r.linear_x_ = x;
    return r;
}

PsiRule PsiRule::with_prime_power_adjustment(long long p) const {
    if (p < 2) throw InvalidInput("with_prime_power_adjustment: p must be >= 2");
    PsiRule r = *this;
    r.adjust_prime_ = p;
    return r;
}

namespace {

bool is_power_of(Int v, long long p) {
    if (v <= 0) return false;
    Int pz(static_cast<long>(p));
    while (v % pz == 0) v /= pz;
    return v == 1;
}

// psi(n) = n / p^k for some integer k (positive or negative)?
bool is_shifted_by_p_power(long long n, const Rational& v, long long p) {
    Rational ratio = Rational(n) / v;
    Int num = ratio.num(), den = ratio.den();
    return (num == 1 || is_power_of(num, p)) && (den == 1 || is_power_of(den, p));
}

Rational schedule_value(const ResidueSchedule& s, int k, long long q, std::string* part) {
    const ScheduleRow& row = s.rows[static_cast<size_t>(k)];
    long long qm = q % s.p;
    if (std::binary_search(row.orbit_seeds.begin(), row.orbit_seeds.end(), qm)) {
        if (part) *part = "I(m=" + std::to_string(qm) + ")";
        return Rational(q, s.p);
    }
    long long diff = q - s.g;
    if (diff == 0) return Rational(0);
    int i = valuation_int(s.p, diff);
    if (i < 1 || i > s.depth) return Rational(0);
    long long mod = pow_ll(s.p, i + 1);
    long long res = ((diff % mod) + mod) % mod;
    long long bp = res / pow_ll(s.p, i);
    if (bp >= 1 && bp <= row.b[static_cast<size_t>(i - 1)]) {
        if (part) *part = "b(i=" + std::to_string(i) + ",b'=" + std::to_string(bp) + ")";
        return Rational(Int(static_cast<long>(q)), pow_int(s.p, static_cast<unsigned long>(i + 1)));
    }
    return Rational(0);
}

template <typename Fn>
void for_primes_in_class(long long residue, long long modulus, long long lo, long long hi,
                         Fn&& fn) {
    if (hi < lo) return;
    long long r = ((residue % modulus) + modulus) % modulus;
    long long q = r;
    if (q < lo) q += modulus * ((lo - q + modulus - 1) / modulus);
    for (; q <= hi; q += modulus)
        if (q >= 2 && is_prime(q)) fn(q);
}

} // namespace

Rational PsiRule::evaluate(long long n) const {
    if (n < 1) throw InvalidInput("PsiRule::evaluate: n must be >= 1");
    Rational v(0);
    switch (kind_) {
    case Kind::Zero:
        break;
    case Kind::Table: {
        auto it = table_->find(n);
        if (it != table_->end()) v = it->second;
        break;
    }
    case Kind::ShellDigits: {
        int k = 0;
        long long m = n;
        while (m % prime_ == 0) {
            m /= prime_;
            ++k;
        }
        if (digits_->digit(k) == 1)
            v = Rational(Int(static_cast<long>(n)),
                         pow_int(prime_, static_cast<unsigned long>(k + 1)));
        break;
    }
    case Kind::Schedule: {
        int k = 0;
        long long q = n;
        while (q % prime_ == 0) {
            q /= prime_;
            ++k;
        }
        if (k <= sched_->k_max && q > 1 && is_prime(q)) v = schedule_value(*sched_, k, q, nullptr);
        break;
    }
    case Kind::PrimeLinear:
        if (is_prime(n)) v = Rational(n) * linear_x_;
        break;
    }
    if (adjust_prime_ && v.sign() > 0 && is_shifted_by_p_power(n, v, *adjust_prime_))
        v *= Rational(*adjust_prime_);
    return v;
}

std::vector<PsiRule::SupportEntry> PsiRule::support(long long N, long long T) const {
    std::vector<SupportEntry> out;
    if (N < 1) N = 1;
    if (T < N) return out;
    switch (kind_) {
    case Kind::Zero:
        break;
    case Kind::Table:
        for (auto it = table_->lower_bound(N); it != table_->end() && it->first <= T; ++it)
            if (it->second.sign() > 0) out.push_back({it->first, it->second, "table"});
        break;
    case Kind::ShellDigits:
        for (long long n = N; n <= T; ++n) {
            int k = 0;
            long long m = n;
            while (m % prime_ == 0) {
                m /= prime_;
                ++k;
            }
            if (digits_->digit(k) == 1)
                out.push_back({n,
                               Rational(Int(static_cast<long>(n)),
                                        pow_int(prime_, static_cast<unsigned long>(k + 1))),
                               "shell(k=" + std::to_string(k) + ")"});
        }
        break;
    case Kind::Schedule: {
        const ResidueSchedule& s = *sched_;
        long long pk = 1;
        for (int k = 0; k <= s.k_max && pk <= T; ++k, pk *= s.p) {
            long long qhi = std::min(prime_cap_, T / pk);
            long long qlo = (N + pk - 1) / pk;
            if (qlo < 2) qlo = 2;
            const ScheduleRow& row = s.rows[static_cast<size_t>(k)];
            auto emit = [&](long long q) {
                std::string part;
                Rational v = schedule_value(s, k, q, &part);
                if (v.sign() > 0) out.push_back({pk * q, v, part});
            };
            for (long long m : row.orbit_seeds) for_primes_in_class(m, s.p, qlo, qhi, emit);
            for (int i = 1; i <= s.depth; ++i) {
                int bi = row.b[static_cast<size_t>(i - 1)];
                long long mod = pow_ll(s.p, i + 1);
                for (int bp = 1; bp <= bi; ++bp)
                    for_primes_in_class(s.g + bp * pow_ll(s.p, i), mod, qlo, qhi, emit);
            }
        }
        break;
    }
    case Kind::PrimeLinear:
        if (linear_x_.sign() > 0)
            for (long long n = std::max(N, 2LL); n <= T; ++n)
                if (is_prime(n)) out.push_back({n, Rational(n) * linear_x_, "prime"});
        break;
    }
    std::sort(out.begin(), out.end(),
              [](const SupportEntry& a, const SupportEntry& b) { return a.n < b.n; });
    if (adjust_prime_)
        for (SupportEntry& e : out)
            if (is_shifted_by_p_power(e.n, e.value, *adjust_prime_))
                e.value *= Rational(*adjust_prime_);
    return out;
}

std::string PsiRule::shell_cutoff_l(long long p) const {
    switch (kind_) {
    case Kind::PrimeLinear: {
        if (linear_x_.is_zero()) return "inf";
        int m = depth_for_radius(p, linear_x_);
        return std::to_string(std::max(0, m));
    }
    // Finite tables have finite support; the built-in rules keep
    // psi(n)/n <= p^{-nu_p(n)-1} < p^{-k} on every shell.
    default:
        return "inf";
    }
}

} // namespace padicds
