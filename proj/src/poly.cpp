#include "qbounds/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace qbounds {

Poly Poly::from_roots(std::span<const Rational> roots) {
    Poly out = constant(rat(1));
    for (const auto& r : roots) out = out * linear_root(r);
    return out;
}

const Rational& Poly::coeff(int i) const {
    static const Rational zero{};
    if (i < 0 || i >= static_cast<int>(c_.size())) return zero;
    return c_[static_cast<size_t>(i)];
}

Rational Poly::eval(const Rational& x) const {
    Rational acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

BigFloat Poly::eval(const BigFloat& x) const {
    BigFloat acc(0.0, x.precision_bits());
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + BigFloat(*it, x.precision_bits());
    return acc;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly{};
    std::vector<Rational> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * rat(static_cast<long>(i));
    return Poly(std::move(d));
}

Poly Poly::operator-() const {
    std::vector<Rational> d(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) d[i] = -c_[i];
    return Poly(std::move(d));
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rational> d(std::max(a.c_.size(), b.c_.size()));
    for (size_t i = 0; i < a.c_.size(); ++i) d[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) d[i] += b.c_[i];
    return Poly(std::move(d));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly{};
    std::vector<Rational> d(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (size_t j = 0; j < b.c_.size(); ++j) d[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(d));
}

Poly operator*(const Poly& a, const Rational& s) {
    std::vector<Rational> d(a.c_.size());
    for (size_t i = 0; i < a.c_.size(); ++i) d[i] = a.c_[i] * s;
    return Poly(std::move(d));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("division by zero polynomial");
    std::vector<Rational> rem = a.c_;
    const int db = b.degree();
    std::vector<Rational> quot(a.degree() >= db ? a.degree() - db + 1 : 0);
    for (int k = static_cast<int>(rem.size()) - 1; k >= db; --k) {
        if (rem[static_cast<size_t>(k)] == 0) continue;
        Rational c = rem[static_cast<size_t>(k)] / b.leading();
        quot[static_cast<size_t>(k - db)] = c;
        for (int i = 0; i <= db; ++i) rem[static_cast<size_t>(k - db + i)] -= c * b.coeff(i);
    }
    return {Poly(std::move(quot)), Poly(std::move(rem))};
}

Poly Poly::primitive() const {
    if (is_zero()) return *this;
    Int den_lcm = 1, num_gcd = 0;
    for (const auto& c : c_) {
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
    }
    if (num_gcd == 0) num_gcd = 1;
    Rational scale(den_lcm, num_gcd);
    scale.canonicalize();
    return *this * scale;
}

Poly gcd(const Poly& a, const Poly& b) {
    Poly x = a.primitive(), y = b.primitive();
    while (!y.is_zero()) {
        auto [q, r] = Poly::divmod(x, y);
        x = y;
        y = r.primitive();
    }
    return x;
}

Poly squarefree_part(const Poly& p) {
    if (p.degree() <= 1) return p;
    Poly g = gcd(p, p.derivative());
    if (g.degree() <= 0) return p;
    return Poly::divmod(p, g).first;
}

SturmChain::SturmChain(const Poly& p) {
    Poly sf = squarefree_part(p).primitive();
    chain_.push_back(sf);
    if (sf.degree() >= 1) {
        chain_.push_back(sf.derivative().primitive());
        while (chain_.back().degree() >= 1) {
            auto [q, r] = Poly::divmod(chain_[chain_.size() - 2], chain_.back());
            if (r.is_zero()) break;  // squarefree input makes this unreachable
            chain_.push_back((-r).primitive());
        }
    }
    changes_at_one_ = sign_changes(rat(1));
}

int SturmChain::sign_changes(const Rational& x) const {
    int changes = 0, prev = 0;
    for (const auto& p : chain_) {
        const Rational v = p.eval(x);
        const int s = sgn(v);
        if (s == 0) continue;  // zero-skip convention: counts roots in (a, b]
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

int SturmChain::count(const Rational& lo, const Rational& hi) const {
    if (!(lo < hi)) return 0;
    const int at_hi = (hi == 1 && changes_at_one_ >= 0) ? changes_at_one_ : sign_changes(hi);
    return sign_changes(lo) - at_hi;
}

int SturmChain::total_real_roots() const {
    const Rational b = root_magnitude_bound(chain_.front());
    return count(-b, b);
}

int sturm_count(const Poly& p, const Rational& lo, const Rational& hi) {
    if (!(lo < hi)) throw std::invalid_argument("sturm_count needs lo < hi");
    return SturmChain(p).count(lo, hi);
}

Rational root_magnitude_bound(const Poly& p) {
    if (p.degree() < 1) return rat(1);
    Rational m;
    for (int i = 0; i < p.degree(); ++i) {
        Rational a = abs(p.coeff(i) / p.leading());
        if (a > m) m = a;
    }
    return m + 1;
}

namespace {

std::optional<Rational> exact_small_degree_root(const Poly& p, const Rational& hint_hi) {
    // Largest rational root for degree <= 2; nullopt when irrational or absent.
    if (p.degree() == 1) {
        Rational r = -p.coeff(0) / p.coeff(1);
        if (r <= hint_hi) return r;
        return std::nullopt;
    }
    if (p.degree() == 2) {
        const Rational &a = p.coeff(2), &b = p.coeff(1), &c = p.coeff(0);
        Rational disc = b * b - rat(4) * a * c;
        if (disc < 0) return std::nullopt;
        // rational iff disc is a square of a rational
        Int num_root, den_root;
        if (mpz_perfect_square_p(disc.get_num_mpz_t()) && mpz_perfect_square_p(disc.get_den_mpz_t())) {
            mpz_sqrt(num_root.get_mpz_t(), disc.get_num_mpz_t());
            mpz_sqrt(den_root.get_mpz_t(), disc.get_den_mpz_t());
            Rational sq(num_root, den_root);
            sq.canonicalize();
            Rational r1 = (-b + sq) / (rat(2) * a);
            Rational r2 = (-b - sq) / (rat(2) * a);
            if (r1 < r2) std::swap(r1, r2);
            if (r1 <= hint_hi) return r1;
            if (r2 <= hint_hi) return r2;
        }
        return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

RootBracket greatest_root(const Poly& p, const Rational& hint_hi) {
    if (p.degree() < 1) throw std::domain_error("greatest_root of a constant");
    if (auto r = exact_small_degree_root(p, hint_hi)) return RootBracket{*r, *r, 1};
    if (p.eval(hint_hi) == 0) return RootBracket{hint_hi, hint_hi, 1};

    SturmChain chain(p);
    Rational lo = -root_magnitude_bound(p);
    Rational hi = hint_hi;
    int c = chain.count(lo, hi);
    if (c == 0) throw std::domain_error("no real root below hint");
    while (c > 1) {
        Rational mid = (lo + hi) / 2;
        if (p.eval(mid) == 0) {
            // mid might not be the top root; keep the upper half if occupied
            int above = chain.count(mid, hi);
            if (above >= 1) {
                lo = mid;
                c = above;
            } else {
                return RootBracket{mid, mid, 1};
            }
        } else {
            int above = chain.count(mid, hi);
            if (above >= 1) {
                lo = mid;
                c = above;
            } else {
                hi = mid;
                c = chain.count(lo, hi);
            }
        }
    }
    return RootBracket{lo, hi, 1};
}

RootBracket refine_bracket(const Poly& p, RootBracket b, const Rational& width) {
    if (b.exact()) return b;
    SturmChain chain(p);
    while (b.hi - b.lo > width) {
        Rational mid = (b.lo + b.hi) / 2;
        if (p.eval(mid) == 0) return RootBracket{mid, mid, 1};
        if (chain.count(mid, b.hi) >= 1)
            b.lo = mid;
        else
            b.hi = mid;
    }
    return b;
}

GridLocation locate_in_grid(const Poly& p, const RootBracket& bracket,
                            std::span<const Rational> nodes) {
    if (bracket.count != 1) throw std::invalid_argument("locate_in_grid needs a count-1 bracket");
    if (bracket.exact()) {
        // exact rational root: either a node or strictly inside a cell
        for (size_t j = 0; j < nodes.size(); ++j) {
            if (nodes[j] == bracket.lo) return {static_cast<int>(j), true};
            if (nodes[j] > bracket.lo) return {static_cast<int>(j), false};
        }
        throw std::domain_error("root beyond grid");
    }
    // candidate node range overlapping (lo, hi]
    size_t first = 0;
    while (first < nodes.size() && nodes[first] <= bracket.lo) ++first;
    // nodes[first..] are > lo; scan while <= hi
    int sign_prev = sgn(p.eval(bracket.lo));
    Rational prev = bracket.lo;
    for (size_t j = first; j < nodes.size() && nodes[j] < bracket.hi; ++j) {
        const Rational v = p.eval(nodes[j]);
        if (v == 0) return {static_cast<int>(j), true};
        const int s = sgn(v);
        if (sign_prev != 0 && s != sign_prev) return {static_cast<int>(j), false};
        if (sign_prev == 0 || s == sign_prev) {
            // Same sign on both cell walls: certify emptiness before moving on.
            if (sturm_count(p, prev, nodes[j]) > 0) return {static_cast<int>(j), false};
        }
        prev = nodes[j];
        sign_prev = s;
    }
    // root lies in the cell ending at the first node >= hi
    size_t j = first;
    while (j < nodes.size() && nodes[j] < bracket.hi) ++j;
    if (j >= nodes.size()) throw std::domain_error("root beyond grid");
    if (p.eval(nodes[j]) == 0 && bracket.hi == nodes[j]) return {static_cast<int>(j), true};
    return {static_cast<int>(j), false};
}

}  // namespace qbounds
