#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qbounds/bigfloat.hpp"
#include "qbounds/rational.hpp"

namespace qbounds {

/// Dense univariate polynomial over Rational, coefficients indexed by power.
/// The zero polynomial has degree -1.  All arithmetic is exact.
class Poly {
  public:
    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Poly constant(const Rational& v) { return Poly({v}); }
    /// Monic linear factor t - root.
    static Poly linear_root(const Rational& root) { return Poly({-root, rat(1)}); }
    static Poly from_roots(std::span<const Rational> roots);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const Rational& coeff(int i) const;
    const Rational& leading() const { return c_.back(); }
    const std::vector<Rational>& coeffs() const { return c_; }

    Rational eval(const Rational& x) const;
    BigFloat eval(const BigFloat& x) const;
    Poly derivative() const;

    Poly operator-() const;
    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Rational& s);
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    /// Exact Euclidean division: a = q*b + r with deg r < deg b.
    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);

    /// Scaled copy with coprime integer coefficients, sign preserved.
    /// Scaling by a positive rational; safe inside sign-based algorithms.
    Poly primitive() const;

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

Poly gcd(const Poly& a, const Poly& b);
Poly squarefree_part(const Poly& p);

/// Certified enclosure of real roots: exactly `count` roots of the bracketed
/// polynomial lie in (lo, hi]; lo == hi encodes an exact rational root.
struct RootBracket {
    Rational lo;
    Rational hi;
    int count = 0;
    bool exact() const { return lo == hi; }
};

/// Sturm chain of the squarefree part, held as primitive integer polynomials.
class SturmChain {
  public:
    explicit SturmChain(const Poly& p);
    /// Number of distinct real roots in (lo, hi].
    int count(const Rational& lo, const Rational& hi) const;
    int total_real_roots() const;
    const Poly& squarefree() const { return chain_.front(); }

  private:
    int sign_changes(const Rational& x) const;
    std::vector<Poly> chain_;
    int changes_at_one_ = -1;  // memoized sign changes at x = 1
};

/// Distinct real roots of p in (lo, hi].
int sturm_count(const Poly& p, const Rational& lo, const Rational& hi);

/// All coefficients-based bound B with every real root in (-B, B).
Rational root_magnitude_bound(const Poly& p);

/// Bracket around the largest real root <= hint_hi (count = 1).  Rational
/// roots of degree <= 2 factors and bisection hits collapse to exact form.
/// Throws std::domain_error when no root lies at or below hint_hi.
RootBracket greatest_root(const Poly& p, const Rational& hint_hi);

/// Halve the bracket width until <= width; nested and certified at each step.
RootBracket refine_bracket(const Poly& p, RootBracket b, const Rational& width);

struct GridLocation {
    int cell_hi = 0;        // root in (nodes[cell_hi-1], nodes[cell_hi])
    bool exact_hit = false; // root equals nodes[cell_hi]
};

/// Locate a single bracketed root relative to increasing grid nodes, by exact
/// sign evaluation plus Sturm counts whenever a bracket spans several cells.
GridLocation locate_in_grid(const Poly& p, const RootBracket& bracket,
                            std::span<const Rational> nodes);

}  // namespace qbounds
