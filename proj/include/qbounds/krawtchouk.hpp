#pragma once

#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <vector>

#include "qbounds/poly.hpp"
#include "qbounds/rational.hpp"

namespace qbounds {

/// The q-ary Hamming space parameters shared by every computation.
struct Space {
    int n;  // codelength, >= 2
    int q;  // alphabet size, >= 2

    Space(int n_, int q_) : n(n_), q(q_) {
        if (n < 2 || q < 2) throw std::invalid_argument("Space needs n >= 2 and q >= 2");
    }
    friend bool operator==(const Space&, const Space&) = default;
};

/// The inner-product grid t_i = -1 + 2i/n, i = 0..n, and the distance maps
/// d = n(1-t)/2, t = 1 - 2d/n.
class Grid {
  public:
    explicit Grid(Space space);
    const Space& space() const { return space_; }
    int node_count() const { return space_.n + 1; }
    const Rational& node(int i) const { return nodes_.at(static_cast<size_t>(i)); }
    const std::vector<Rational>& nodes() const { return nodes_; }
    Rational t_of_d(const Rational& d) const;
    Rational d_of_t(const Rational& t) const;
    /// Node index when t is exactly on the grid.
    std::optional<int> index_of(const Rational& t) const;
    bool contains(const Rational& t) const { return index_of(t).has_value(); }

  private:
    Space space_;
    std::vector<Rational> nodes_;
};

/// Exact Krawtchouk values K_i^{(n,q)}(d) through the three-term recurrence,
/// with integer-argument values and the normalizers r_i = (q-1)^i C(n,i)
/// cached per space.  Concurrent reads are safe.
class KrawtchoukTable {
  public:
    explicit KrawtchoukTable(Space space) : space_(space) {}
    const Space& space() const { return space_; }
    Rational k(int i, const Rational& d) const;
    Rational r(int i) const;

  private:
    Space space_;
    mutable std::vector<Rational> r_cache_;
    mutable std::vector<std::vector<Rational>> k_int_cache_;  // [d][i] for integer d in [0, n]
    mutable std::shared_mutex mutex_;
};

Rational k_eval(const KrawtchoukTable& table, int i, const Rational& d);
/// Binomial-sum definition; test oracle for the recurrence.
Rational k_eval_sum(Space space, int i, const Rational& d);
/// Normalized value Q_i^{(n,q)}(t) = K_i(n(1-t)/2)/r_i; requires i <= n.
Rational q_eval(const KrawtchoukTable& table, int i, const Rational& t);

/// The four polynomial systems of the Levenshtein framework: the plain
/// normalized Krawtchouk system plus the three shifted-space ones.
enum class AdjacentKind { plain, one_zero, one_one, zero_one };

/// Exact Q_i^{(a,b,n,q)}(t); evaluated in the full-space variable t.
Rational adjacent_eval(Space space, AdjacentKind kind, int i, const Rational& t);
/// Same system as a dense polynomial in t (cached per (space, kind, i)).
Poly adjacent_poly(Space space, AdjacentKind kind, int i);
/// K_i^{(n,q)}(n(1-t)/2) as a polynomial in t.
Poly kraw_poly(Space space, int i);
Poly normalized_kraw_poly(Space space, int i);

/// Krawtchouk expansion coefficients f_0..f_m of a polynomial of degree m <= n.
struct Expansion {
    std::vector<Rational> coeffs;
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    const Rational& operator[](size_t i) const { return coeffs[i]; }
};

/// Triangular change-of-basis solve (the production path).
Expansion expand(Space space, const Poly& p);
/// Orthogonality-sum route f_i = q^{-n} sum_z C(n,z)(q-1)^z p(t(z)) K_i(z);
/// independent oracle, exponential in n, for tests with n <= ~20.
Expansion expand_by_orthogonality(Space space, const Poly& p);

Poly grid_annihilator(Space space);

/// Shared immutable grid per space; safe for concurrent readers.
const Grid& shared_grid(Space space);
/// Remainder of p modulo prod_{i=0..n}(t - t_i); agrees with p on the grid.
Poly reduce_mod_grid(Space space, const Poly& p);

inline GridLocation locate_in_grid(const Poly& p, const RootBracket& bracket, const Grid& grid) {
    return locate_in_grid(p, bracket, std::span<const Rational>(grid.nodes()));
}

}  // namespace qbounds
