#include "padicds/ball_set.hpp"

#include <algorithm>

#include "padicds/errors.hpp"

namespace padicds {

BallSet::BallSet(long long p, bool keep_singletons)
    : prime_(p), keep_singletons_(keep_singletons) {
    if (p < 2) throw InvalidInput("BallSet: p must be >= 2");
}

BallSet BallSet::full(long long p) {
    BallSet s(p);
    s.root_.state = 1;
    return s;
}

BallSet BallSet::shell(long long p, int k) {
    if (k < 0) throw InvalidInput("BallSet::shell: k >= 0 required");
    // Descend k zero-digits, then everything except the zero child.
    BallSet s(p);
    Node* cur = &s.root_;
    for (int d = 0; d < k; ++d) {
        cur->state = 2;
        cur->kids.assign(static_cast<size_t>(p), Node{});
        cur = &cur->kids[0];
    }
    cur->state = 2;
    cur->kids.assign(static_cast<size_t>(p), Node{.state = 1, .kids = {}});
    cur->kids[0] = Node{};
    return s;
}

void BallSet::check_prime(long long p) const {
    if (p != prime_) throw PrimeMismatch("BallSet: operation mixes different primes");
}

void BallSet::normalize(Node& n) {
    if (n.state != 2) {
        n.kids.clear();
        return;
    }
    bool all_full = true, all_empty = true;
    for (const Node& k : n.kids) {
        if (k.state != 1) all_full = false;
        if (k.state != 0) all_empty = false;
    }
    if (all_full) {
        n.state = 1;
        n.kids.clear();
    } else if (all_empty) {
        n.state = 0;
        n.kids.clear();
    }
}

void BallSet::insert(const PAdicBall& ball) {
    check_prime(ball.prime());
    if (ball.is_empty()) return;
    if (ball.kind() == PAdicBall::Kind::Singleton) {
        if (!keep_singletons_) return;
        auto it = std::lower_bound(singletons_.begin(), singletons_.end(), ball.center());
        if (it == singletons_.end() || !(*it == ball.center()))
            singletons_.insert(it, ball.center());
        return;
    }
    DigitVector digits = ball.class_digits();
    // Walk the digit path, splitting as needed; stop early inside a Full node.
    std::vector<Node*> path;
    Node* cur = &root_;
    for (int m = 0; m < ball.depth(); ++m) {
        if (cur->state == 1) return; // already covered
        if (cur->state == 0) {
            cur->state = 2;
            cur->kids.assign(static_cast<size_t>(prime_), Node{});
        }
        path.push_back(cur);
        cur = &cur->kids[static_cast<size_t>(digits.digits[static_cast<size_t>(m)])];
    }
    cur->state = 1;
    cur->kids.clear();
    for (size_t i = path.size(); i-- > 0;) normalize(*path[i]);
}

BallSet::Node BallSet::node_union(const Node& a, const Node& b, long long p) {
    if (a.state == 1 || b.state == 1) return Node{.state = 1, .kids = {}};
    if (a.state == 0) return b;
    if (b.state == 0) return a;
    Node out;
    out.state = 2;
    out.kids.reserve(static_cast<size_t>(p));
    for (size_t i = 0; i < static_cast<size_t>(p); ++i)
        out.kids.push_back(node_union(a.kids[i], b.kids[i], p));
    normalize(out);
    return out;
}

BallSet::Node BallSet::node_intersect(const Node& a, const Node& b, long long p) {
    if (a.state == 0 || b.state == 0) return Node{};
    if (a.state == 1) return b;
    if (b.state == 1) return a;
    Node out;
    out.state = 2;
    out.kids.reserve(static_cast<size_t>(p));
    for (size_t i = 0; i < static_cast<size_t>(p); ++i)
        out.kids.push_back(node_intersect(a.kids[i], b.kids[i], p));
    normalize(out);
    return out;
}

BallSet::Node BallSet::node_complement(const Node& a, long long p) {
    if (a.state == 0) return Node{.state = 1, .kids = {}};
    if (a.state == 1) return Node{};
    Node out;
    out.state = 2;
    out.kids.reserve(static_cast<size_t>(p));
    for (size_t i = 0; i < static_cast<size_t>(p); ++i)
        out.kids.push_back(node_complement(a.kids[i], p));
    // Complement of a normalized split node is never collapsible, but keep
    // the invariant mechanical.
    normalize(out);
    return out;
}

BallSet set_union(const BallSet& a, const BallSet& b) {
    a.check_prime(b.prime_);
    BallSet out(a.prime_, a.keep_singletons_ || b.keep_singletons_);
    out.root_ = BallSet::node_union(a.root_, b.root_, a.prime_);
    out.singletons_ = a.singletons_;
    for (const Rational& s : b.singletons_) {
        auto it = std::lower_bound(out.singletons_.begin(), out.singletons_.end(), s);
        if (it == out.singletons_.end() || !(*it == s)) out.singletons_.insert(it, s);
    }
    return out;
}

BallSet set_intersect(const BallSet& a, const BallSet& b) {
    a.check_prime(b.prime_);
    BallSet out(a.prime_);
    out.root_ = BallSet::node_intersect(a.root_, b.root_, a.prime_);
    return out;
}

BallSet set_complement(const BallSet& a) {
    BallSet out(a.prime_);
    out.root_ = BallSet::node_complement(a.root_, a.prime_);
    return out;
}

bool is_subset(const BallSet& a, const BallSet& b) {
    return set_intersect(a, set_complement(b)).is_empty();
}

bool BallSet::is_empty() const { return root_.state == 0; }
bool BallSet::is_full() const { return root_.state == 1; }

Rational BallSet::measure() const {
    // Depth-first sum of p^{-depth} over Full nodes.
    struct Walker {
        long long p;
        Rational total = Rational(0);
        void walk(const Node& n, long depth) {
            if (n.state == 1) {
                total += pow_rational(p, -depth);
                return;
            }
            if (n.state != 2) return;
            for (const Node& k : n.kids) walk(k, depth + 1);
        }
    } w{prime_};
    w.walk(root_, 0);
    return w.total;
}

Rational BallSet::shell_measure(int k) const {
    return set_intersect(*this, shell(prime_, k)).measure();
}

bool BallSet::contains_shell(int k) const {
    BallSet sh = shell(prime_, k);
    return set_intersect(*this, sh) == sh;
}

bool BallSet::contains(const Rational& x) const {
    auto v = valuation(prime_, x);
    if (v.has_value() && *v < 0) return false;
    const Node* cur = &root_;
    int depth = 0;
    while (cur->state == 2) {
        ++depth;
        DigitVector d = digit_expand(prime_, x, depth);
        cur = &cur->kids[static_cast<size_t>(d.digits[static_cast<size_t>(depth - 1)])];
    }
    if (cur->state == 1) return true;
    return std::binary_search(singletons_.begin(), singletons_.end(), x);
}

int BallSet::max_depth() const {
    struct Walker {
        int best = 0;
        void walk(const Node& n, int depth) {
            if (n.state != 2) {
                best = std::max(best, depth);
                return;
            }
            for (const Node& k : n.kids) walk(k, depth + 1);
        }
    } w;
    w.walk(root_, 0);
    return w.best;
}

std::vector<std::pair<Int, int>> BallSet::classes() const {
    std::vector<std::pair<Int, int>> out;
    struct Walker {
        long long p;
        std::vector<std::pair<Int, int>>& out;
        void walk(const Node& n, const Int& residue, const Int& scale, int depth) {
            if (n.state == 1) {
                out.emplace_back(residue, depth);
                return;
            }
            if (n.state != 2) return;
            for (size_t d = 0; d < static_cast<size_t>(p); ++d)
                walk(n.kids[d], residue + scale * static_cast<long>(d),
                     Int(scale * static_cast<long>(p)), depth + 1);
        }
    } w{prime_, out};
    w.walk(root_, Int(0), Int(1), 0);
    return out;
}

nlohmann::json BallSet::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [residue, depth] : classes()) {
        if (residue.fits_ulong_p()) {
            arr.push_back({residue.get_ui(), depth});
        } else {
            arr.push_back({residue.get_str(), depth});
        }
    }
    return {{"p", prime_}, {"classes", arr}};
}

bool BallSet::operator==(const BallSet& o) const {
    return prime_ == o.prime_ && root_ == o.root_ && singletons_ == o.singletons_;
}

} // namespace padicds
