#pragma once

#include <vector>

#include <json.hpp>

#include "padicds/padic.hpp"
#include "padicds/rational.hpp"

namespace padicds {

/// A finite union of residue-class balls in Z_p, stored as a normalized
/// radix-p trie. Normalization: no node has p Full children or p Empty
/// children, so structural equality is extensional equality (modulo retained
/// singletons, which are null sets kept aside for membership queries only).
class BallSet {
  public:
    explicit BallSet(long long p, bool keep_singletons = false);

    static BallSet empty_set(long long p) { return BallSet(p); }
    static BallSet full(long long p);
    /// The shell p^k Z_p^x = p^k Z_p \ p^{k+1} Z_p.
    static BallSet shell(long long p, int k);

    long long prime() const { return prime_; }
    bool is_empty() const;
    bool is_full() const;

    /// Union with one ball. Classes go into the trie; singletons go to the
    /// side list when keep_singletons is set, and are dropped otherwise.
    void insert(const PAdicBall& ball);

    /// Exact Haar measure. Retained singletons contribute nothing.
    Rational measure() const;

    /// mu_p(this ∩ p^k Z_p^x).
    Rational shell_measure(int k) const;

    /// True iff p^k Z_p^x is contained in this set.
    bool contains_shell(int k) const;

    /// Point membership, including retained singletons. The point must be a
    /// p-adic integer; non-integers are never members.
    bool contains(const Rational& x) const;

    int max_depth() const;

    const std::vector<Rational>& singleton_centers() const { return singletons_; }

    /// Disjoint classes covering the trie, in depth-first digit order.
    std::vector<std::pair<Int, int>> classes() const;

    nlohmann::json to_json() const;

    friend BallSet set_union(const BallSet& a, const BallSet& b);
    friend BallSet set_intersect(const BallSet& a, const BallSet& b);
    friend BallSet set_complement(const BallSet& a);

    bool operator==(const BallSet& o) const;

  private:
    struct Node {
        // state: 0 = empty, 1 = full, 2 = split (then kids.size() == p)
        int state = 0;
        std::vector<Node> kids;

        bool operator==(const Node& o) const = default;
    };

    static Node node_union(const Node& a, const Node& b, long long p);
    static Node node_intersect(const Node& a, const Node& b, long long p);
    static Node node_complement(const Node& a, long long p);
    static void normalize(Node& n);
    void check_prime(long long p) const;

    long long prime_;
    bool keep_singletons_;
    Node root_;
    std::vector<Rational> singletons_; // sorted, unique
};

BallSet set_union(const BallSet& a, const BallSet& b);
BallSet set_intersect(const BallSet& a, const BallSet& b);
BallSet set_complement(const BallSet& a);

/// True iff a ⊆ b as subsets of Z_p (null sets ignored).
bool is_subset(const BallSet& a, const BallSet& b);

} // namespace padicds
