// Command-line front end: exact construction, measurement and verification
// of p-adic approximation sets. Rationals cross this boundary only as
// "num/den" strings; output is byte-stable across runs and parallelism.

#include <cstdlib>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "padicds/checks.hpp"
#include "padicds/errors.hpp"
#include "padicds/number_theory.hpp"
#include "padicds/psi_rules.hpp"
#include "padicds/stage_sets.hpp"

using namespace padicds;
using nlohmann::json;

namespace {

long long default_cap() {
    if (const char* env = std::getenv("PADIC_DS_CAP")) {
        long long v = std::atoll(env);
        if (v > 0) return v;
    }
    return 10'000'000;
}

struct RuleSpec {
    std::string name = "zero";
    std::string x_text;
    std::string digits_text;
    std::vector<std::string> entries;
    int depth = 8;
    long long cap = default_cap();
    bool prime_adjust = false;
};

std::vector<int> parse_digit_string(const std::string& s) {
    std::vector<int> out;
    for (char c : s) {
        if (c < '0' || c > '9') throw InvalidInput("digits must be characters 0-9");
        out.push_back(c - '0');
    }
    return out;
}

PsiRule build_rule(const RuleSpec& spec, long long p) {
    PsiRule rule = PsiRule::zero();
    if (spec.name == "zero") {
        rule = PsiRule::zero();
    } else if (spec.name == "table") {
        std::map<long long, Rational> entries;
        for (const std::string& e : spec.entries) {
            auto eq = e.find('=');
            if (eq == std::string::npos) throw InvalidInput("--entry expects n=num/den");
            entries[std::stoll(e.substr(0, eq))] = Rational::parse(e.substr(eq + 1));
        }
        rule = PsiRule::table(std::move(entries));
    } else if (spec.name == "theorem1") {
        std::vector<int> digits;
        if (!spec.digits_text.empty())
            digits = parse_digit_string(spec.digits_text);
        else if (!spec.x_text.empty()) {
            // interpret x as the target measure sum x_k (p-1) p^{-k-1}
            Rational x = Rational::parse(spec.x_text);
            SpectrumMembership m = spectrum_membership(p, x, Family::C);
            if (!m.member || m.periodic)
                throw InvalidInput("x is not a finite binary spectrum value; pass --digits");
            digits = m.digits;
        }
        rule = PsiRule::shell_digits(p, SpectrumDigits(p, digits));
    } else if (spec.name == "theorem2") {
        if (spec.x_text.empty()) throw InvalidInput("--rule theorem2 requires --x");
        Rational x = Rational::parse(spec.x_text);
        if (x == Rational(1)) {
            // full-measure target: radius-1 balls at every prime
            rule = PsiRule::prime_linear(Rational(1));
        } else {
            rule = PsiRule::schedule(build_residue_schedule(p, x, spec.depth), spec.cap);
        }
    } else if (spec.name == "realprime") {
        if (spec.x_text.empty()) throw InvalidInput("--rule realprime requires --x");
        rule = PsiRule::prime_linear(Rational::parse(spec.x_text));
    } else {
        throw InvalidInput("unknown rule \"" + spec.name +
                           "\" (expected zero|table|theorem1|theorem2|realprime)");
    }
    if (spec.prime_adjust) rule = rule.with_prime_power_adjustment(p);
    return rule;
}

void add_rule_flags(CLI::App* cmd, RuleSpec& spec) {
    cmd->add_option("--rule", spec.name, "zero|table|theorem1|theorem2|realprime");
    cmd->add_option("--x", spec.x_text, "target value as num/den");
    cmd->add_option("--digits", spec.digits_text, "digit string, e.g. 101");
    cmd->add_option("--entry", spec.entries, "table entry n=num/den (repeatable)");
    cmd->add_option("--depth", spec.depth, "schedule truncation depth D")->capture_default_str();
    cmd->add_option("--cap", spec.cap, "prime search cap")->capture_default_str();
    cmd->add_flag("--prime-adjust", spec.prime_adjust,
                  "apply the strict-inequality bridge psi'(n) = p*psi(n) on p-power ratios");
}

std::pair<long long, long long> parse_range(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw InvalidInput("--range expects N:T");
    return {std::stoll(text.substr(0, colon)), std::stoll(text.substr(colon + 1))};
}

std::string approx_decimal(const Rational& r) {
    double v = std::strtod(r.num().get_str().c_str(), nullptr) /
               std::strtod(r.den().get_str().c_str(), nullptr);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// construct

int cmd_construct(long long p, bool p_infinite, const RuleSpec& spec,
                  const std::string& format, bool approx) {
    PsiRule rule = build_rule(spec, p_infinite ? 2 : p);
    auto support = rule.support(1, spec.cap);
    if (format == "csv") {
        std::cout << "n,psi_num,psi_den,part\n";
        for (const auto& e : support)
            std::cout << e.n << "," << e.value.num().get_str() << ","
                      << e.value.den().get_str() << "," << e.part << "\n";
    } else if (format == "json") {
        json rows = json::array();
        for (const auto& e : support) {
            json row = {{"n", e.n}, {"psi", e.value.str()}, {"part", e.part}};
            if (approx) row["psi_approx"] = approx_decimal(e.value);
            rows.push_back(row);
        }
        std::cout << json({{"rule", spec.name}, {"support", rows}}).dump() << "\n";
    } else {
        for (const auto& e : support) {
            std::cout << "psi(" << e.n << ") = " << e.value.pretty();
            if (approx) std::cout << " ~ " << approx_decimal(e.value);
            std::cout << "  [" << e.part << "]\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// measure

int cmd_measure(long long p, bool p_infinite, Family family, const RuleSpec& spec,
                long long range_lo, long long range_hi, int shells, int parallel,
                const std::string& format, bool approx) {
    if (p_infinite) {
        if (spec.name != "realprime" && spec.name != "zero")
            throw InvalidInput("measure with --p inf supports --rule realprime|zero");
        Rational x = spec.x_text.empty() ? Rational(0) : Rational::parse(spec.x_text);
        auto [measure, limit] = real_interval_tail(x, std::max(2LL, range_lo));
        json out = {{"p", "inf"},
                    {"measure", measure.str()},
                    {"limit", limit.str()},
                    {"range", {range_lo, range_hi}}};
        if (format == "json") {
            std::cout << out.dump() << "\n";
        } else {
            std::cout << "measure = " << measure.pretty() << "\nlimit   = " << limit.pretty()
                      << "\n";
        }
        return 0;
    }
    PsiRule rule = build_rule(spec, p);
    TailReport rep = tail_union(family, p, rule, range_lo, range_hi, parallel);
    ShellReport sh = shell_report(rep.set, shells);
    if (format == "json") {
        json out = rep.to_json();
        out["shells"] = sh.to_json();
        out["l"] = rule.shell_cutoff_l(p);
        if (approx) out["measure_approx"] = approx_decimal(rep.measure);
        std::cout << out.dump() << "\n";
    } else {
        std::cout << "family   " << family_name(family) << "\np        " << p << "\nrange    "
                  << range_lo << ":" << range_hi << "\nstages   " << rep.stages << "\nmeasure  "
                  << rep.measure.str();
        if (approx) std::cout << " ~ " << approx_decimal(rep.measure);
        std::cout << "\nseries   " << rep.series.str();
        if (approx) std::cout << " ~ " << approx_decimal(rep.series);
        std::cout << "\nl        " << rule.shell_cutoff_l(p) << "\n";
        for (const auto& [k, m] : sh.shells)
            std::cout << "shell " << k << "  " << m.str() << "\n";
        std::cout << "residual " << sh.residual.str() << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyParams {
    long long p = 3;
    bool p_set = false;
    long long n = 0;
    std::string psi_text;
    long long max_n = 0;
    std::string x_text;
    int depth = 6;
    int samples = 100;
    long long min_q = 2;
    long long cap = default_cap();
};

std::vector<CheckReport> run_check(const std::string& name, const VerifyParams& pr) {
    std::vector<CheckReport> out;
    if (name == "lemma-haynes") {
        if (pr.n > 0) {
            Rational psi = pr.psi_text.empty()
                               ? Rational(pow_int(4, static_cast<unsigned long>(
                                                         arith_functions(pr.n).omega))) +
                                     Rational(1)
                               : Rational::parse(pr.psi_text);
            out.push_back(large_psi_shell_check(pr.p, pr.n, psi));
        } else {
            long long hi = pr.max_n > 0 ? pr.max_n : 200;
            bool all = true;
            long long count = 0;
            json first_fail = json::object();
            for (long long p : {2, 3, 5})
                for (long long n = 2; n <= hi; ++n) {
                    Rational psi = Rational(pow_int(4, static_cast<unsigned long>(
                                                           arith_functions(n).omega))) +
                                   Rational(1);
                    CheckReport rep = large_psi_shell_check(p, n, psi);
                    ++count;
                    if (!rep.pass && all) {
                        all = false;
                        first_fail = rep.to_json();
                    }
                }
            CheckReport summary;
            summary.name = "lemma-haynes";
            summary.params = {{"max_n", hi}, {"p", {2, 3, 5}}};
            summary.pass = all;
            summary.witness = first_fail;
            summary.quantities = {{"instances", count}};
            out.push_back(summary);
        }
    } else if (name == "moebius-count") {
        long long hi = pr.max_n > 0 ? pr.max_n : 500;
        long long mismatches = 0, instances = 0;
        json first_fail = json::object();
        for (long long p : {2, 3, 5}) {
            for (long long n = 1; n <= hi; ++n) {
                int k = valuation_int(p, n);
                long long m = 1;
                for (int j = 1; j <= 3; ++j) {
                    m *= p;
                    for (long long b = 1; b < m; ++b) {
                        if (b % p == 0) continue;
                        PairCount c = count_coprime_residues(n, p, k + j, b);
                        ++instances;
                        if (c.direct != c.moebius) {
                            if (mismatches == 0)
                                first_fail = {{"n", n}, {"p", p}, {"N", k + j}, {"b", b}};
                            ++mismatches;
                        }
                    }
                }
            }
        }
        CheckReport summary;
        summary.name = "moebius-count";
        summary.params = {{"max_n", hi}, {"p", {2, 3, 5}}, {"max_j", 3}};
        summary.pass = mismatches == 0;
        summary.witness = first_fail;
        summary.quantities = {{"instances", instances}, {"mismatches", mismatches}};
        out.push_back(summary);
    } else if (name == "iota-pushforward") {
        std::mt19937 rng(424242);
        for (long long p : {2, 3, 5, 7}) {
            std::vector<PAdicBall> sample;
            std::uniform_int_distribution<int> depth(0, 10);
            for (int i = 0; i < pr.samples; ++i) {
                int m = depth(rng);
                long long pm = 1;
                for (int j = 0; j < m; ++j) pm *= p;
                std::uniform_int_distribution<long long> res(0, pm - 1);
                sample.push_back(
                    PAdicBall::residue_class(p, Int(static_cast<long>(res(rng))), m));
            }
            out.push_back(iota_pushforward_check(p, sample));
        }
    } else if (name == "unit-inversion") {
        for (long long p : {2, 3, 5, 7}) {
            CheckReport rep;
            rep.name = "unit-inversion";
            rep.params = {{"p", p}, {"max_depth", 5}};
            rep.pass = true;
            for (int m = 1; m <= 5 && rep.pass; ++m) {
                long long pm = 1;
                for (int i = 0; i < m; ++i) pm *= p;
                std::set<long long> domain, image;
                for (long long c = 1; c < pm; ++c) {
                    if (c % p == 0) continue;
                    PAdicBall b = PAdicBall::residue_class(p, Int(static_cast<long>(c)), m);
                    PAdicBall inv = invert_unit_ball(b);
                    domain.insert(c);
                    image.insert(inv.residue().get_si());
                    if (!(invert_unit_ball(inv) == b) || !(inv.measure() == b.measure())) {
                        rep.pass = false;
                        rep.witness = {{"depth", m}, {"residue", c}};
                        break;
                    }
                }
                if (rep.pass && domain != image) {
                    rep.pass = false;
                    rep.witness = {{"depth", m}, {"reason", "not a bijection"}};
                }
            }
            out.push_back(rep);
        }
    } else if (name == "tau-scaling") {
        std::mt19937 rng(777);
        CheckReport rep;
        rep.name = "tau-scaling";
        rep.params = {{"samples", pr.samples}};
        rep.pass = true;
        int done = 0;
        while (done < pr.samples) {
            long long ps[] = {2, 3, 5};
            long long p = ps[done % 3];
            std::uniform_int_distribution<int> kd(0, 2);
            int k = kd(rng);
            long long pk = 1;
            for (int i = 0; i < k; ++i) pk *= p;
            std::uniform_int_distribution<long long> ud(1, p * p - 1);
            long long u = ud(rng);
            if (u % p == 0) continue;
            BallSet a(p);
            std::vector<PAdicBall> members;
            std::uniform_int_distribution<int> coin(0, 1);
            for (long long d = 0; d < p; ++d) {
                if (coin(rng) == 0) continue;
                PAdicBall child = PAdicBall::residue_class(
                    p, Int(static_cast<long>(pk * u + d * pk * p * p)), k + 3);
                a.insert(child);
                members.push_back(child);
            }
            if (members.empty()) continue;
            BallSet image(p);
            for (const PAdicBall& b : members) image.insert(tau2_ball(b));
            if (!(image.measure() == Rational(p) * a.measure())) {
                rep.pass = false;
                rep.witness = {{"p", p}, {"k", k}, {"u", u}};
                break;
            }
            ++done;
        }
        out.push_back(rep);
    } else if (name == "case-identities") {
        Rational x = pr.x_text.empty() ? Rational(1, 4) : Rational::parse(pr.x_text);
        out.push_back(schedule_identity_checks(
            build_residue_schedule(pr.p_set ? pr.p : 2, x, pr.depth)));
    } else if (name == "real-tail") {
        Rational x = pr.x_text.empty() ? Rational(1, 2) : Rational::parse(pr.x_text);
        auto [measure, limit] = real_interval_tail(x, pr.min_q);
        long long q0 = next_prime_at_least(pr.min_q);
        Rational want = x + Rational(1, q0);
        if (want > Rational(1)) want = Rational(1);
        CheckReport rep;
        rep.name = "real-tail";
        rep.params = {{"x", x.str()}, {"min_q", pr.min_q}};
        rep.pass = measure == want && limit == x;
        rep.quantities = {{"measure", measure.str()}, {"limit", limit.str()}};
        out.push_back(rep);
    } else if (name == "shell-zero-full") {
        std::vector<long long> ps = pr.p_set ? std::vector<long long>{pr.p}
                                             : std::vector<long long>{2, 3, 5};
        for (long long p : ps) {
            for (auto digits :
                 {std::vector<int>{1}, {0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 0, 1}}) {
                PsiRule rule = PsiRule::shell_digits(p, SpectrumDigits(p, digits));
                out.push_back(
                    zero_full_shell_diagnostic(p, rule, covering_support_bound(p, rule), 4));
            }
            if (!pr.x_text.empty()) {
                PsiRule rule = PsiRule::schedule(
                    build_residue_schedule(p, Rational::parse(pr.x_text), pr.depth), pr.cap);
                out.push_back(
                    zero_full_shell_diagnostic(p, rule, covering_support_bound(p, rule), 4));
            }
        }
    } else if (name == "arith-identities") {
        long long hi = pr.max_n > 0 ? pr.max_n : 10000;
        CheckReport rep;
        rep.name = "arith-identities";
        rep.params = {{"max_n", hi}};
        rep.pass = true;
        for (long long n = 1; n <= hi; ++n) {
            Factorization f = factorize(n);
            long long mu_sum = 0, phi_sum = 0;
            for_each_squarefree_divisor(f, [&](long long d, int mu) {
                mu_sum += mu;
                phi_sum += mu * (n / d);
            });
            long long phi = arith_functions(n).phi;
            Rational prod(1);
            for (auto [q, e] : f.factors) prod *= Rational(q - 1, q);
            if (mu_sum != (n == 1 ? 1 : 0) || phi_sum != phi || !(Rational(phi, n) == prod)) {
                rep.pass = false;
                rep.witness = {{"n", n}};
                break;
            }
        }
        out.push_back(rep);
    } else {
        throw InvalidInput("unknown check \"" + name + "\"");
    }
    return out;
}

int cmd_verify(const std::string& check, const VerifyParams& pr) {
    std::vector<std::string> names;
    if (check == "all") {
        names = {"lemma-haynes",   "moebius-count",   "iota-pushforward",
                 "unit-inversion", "tau-scaling",     "case-identities",
                 "real-tail",      "shell-zero-full", "arith-identities"};
    } else {
        names = {check};
    }
    json reports = json::array();
    bool all_pass = true;
    for (const std::string& name : names) {
        for (const CheckReport& rep : run_check(name, pr)) {
            all_pass = all_pass && rep.pass;
            reports.push_back(rep.to_json());
        }
    }
    std::cout << json({{"pass", all_pass}, {"reports", reports}}).dump() << "\n";
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// spectrum

int cmd_spectrum(long long p, const std::string& x_text, const std::string& family_text) {
    Family family = parse_family(family_text);
    Rational x = Rational::parse(x_text);
    SpectrumMembership m = spectrum_membership(p, x, family);
    json digits = json::array();
    for (int d : m.digits) digits.push_back(d);
    std::cout << json({{"p", p},
                       {"x", x.str()},
                       {"family", family_name(family)},
                       {"member", m.member},
                       {"digits", digits},
                       {"periodic", m.periodic},
                       {"reason", m.reason}})
                     .dump()
              << "\n";
    return m.member ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact p-adic approximation-set toolkit"};
    app.require_subcommand(1);

    std::string p_text = "2";
    RuleSpec spec;
    bool approx = false;

    auto* construct = app.add_subcommand("construct", "emit the support table of a rule");
    construct->add_option("--p", p_text, "prime, or inf")->capture_default_str();
    add_rule_flags(construct, spec);
    std::string construct_format = "csv";
    construct->add_option("--format", construct_format, "csv|json|table")->capture_default_str();
    construct->add_flag("--approx", approx, "add decimal approximations");

    auto* measure = app.add_subcommand("measure", "tail union measure of a family");
    std::string family_text = "c";
    std::string range_text = "1:1000";
    int shells = 4;
    int parallel = 1;
    measure->add_option("--p", p_text, "prime, or inf")->capture_default_str();
    measure->add_option("--family", family_text, "a|c|b|fa|fk")->capture_default_str();
    measure->add_option("--range", range_text, "stage range N:T")->capture_default_str();
    measure->add_option("--shells", shells, "shell rows to report")->capture_default_str();
    measure->add_option("--parallel", parallel, "worker threads")->capture_default_str();
    add_rule_flags(measure, spec);
    std::string measure_format = "table";
    measure->add_option("--format", measure_format, "json|table")->capture_default_str();
    measure->add_flag("--approx", approx, "add decimal approximations");

    auto* verify = app.add_subcommand("verify", "run identity checks, JSON report");
    std::string check = "all";
    VerifyParams vp;
    verify->add_option("--check", check, "check name or all")->capture_default_str();
    auto* popt = verify->add_option("--p", vp.p, "prime parameter");
    verify->add_option("--n", vp.n, "single n");
    verify->add_option("--psi", vp.psi_text, "psi(n) as num/den");
    verify->add_option("--max-n", vp.max_n, "suite bound");
    verify->add_option("--x", vp.x_text, "target value as num/den");
    verify->add_option("--depth", vp.depth, "schedule depth")->capture_default_str();
    verify->add_option("--samples", vp.samples, "sample count")->capture_default_str();
    verify->add_option("--min-q", vp.min_q, "smallest prime for the real tail")
        ->capture_default_str();
    verify->add_option("--cap", vp.cap, "prime search cap")->capture_default_str();

    auto* spectrum = app.add_subcommand("spectrum", "membership in the attainable spectrum");
    std::string sx = "1/2", sfam = "c";
    spectrum->add_option("--p", p_text, "prime")->capture_default_str();
    spectrum->add_option("--x", sx, "value as num/den")->required();
    spectrum->add_option("--family", sfam, "c|b")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        bool p_infinite = (p_text == "inf");
        long long p = p_infinite ? 0 : std::stoll(p_text);
        if (construct->parsed())
            return cmd_construct(p, p_infinite, spec, construct_format, approx);
        if (measure->parsed()) {
            auto [lo, hi] = parse_range(range_text);
            return cmd_measure(p, p_infinite, parse_family(family_text), spec, lo, hi, shells,
                               parallel, measure_format, approx);
        }
        if (verify->parsed()) {
            vp.p_set = popt->count() > 0;
            return cmd_verify(check, vp);
        }
        if (spectrum->parsed()) return cmd_spectrum(p, sx, sfam);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
