#pragma once

#include <variant>
#include <vector>

#include "qbounds/krawtchouk.hpp"

namespace qbounds {

/// Resolved Levenshtein regime for (q, n, s): the degree m = 2k - 1 + eps and
/// certified evidence that s lies in I_m = [t_{k-1+eps}^{1,1-eps}, t_k^{1,eps}).
struct Frame {
    int m = 0;
    int k = 0;
    int eps = 0;
    RootBracket left_end;   // t_{k-1+eps}^{1,1-eps}
    RootBracket right_end;  // t_k^{1,eps}
    bool s_on_grid = true;
    bool certified = true;
};

/// One located root of the Levenshtein polynomial.
struct LocatedRoot {
    std::variant<Rational, RootBracket> value;
    int multiplicity = 2;   // interior roots are double; s and -1 are simple
    int cell_hi = 0;        // root in (t_{cell_hi-1}, t_{cell_hi}), or == t_{cell_hi}
    bool grid_hit = false;
};

/// Roots -1 <= a_0 < ... < a_{k-1+eps} = s, each tagged with its grid cell.
struct RootProfile {
    std::vector<LocatedRoot> alphas;  // ascending; last one is s
    Rational s;
    int eps = 0;
};

/// S_1 = sqrt(q^2 + 4(q-1)(n-2)), S_2 = sqrt(q^2 + 4(q-1)(n-3)) and the
/// derived j-ranges J_3 = [0, (S_1 - q)/2) and J_4 = [(S_1-q)/2, (S_2+q)/2 - 1).
/// Membership tests compare squares, so they are exact.
struct RangeParams {
    Space space;
    Int s1_sq;
    Int s2_sq;

    explicit RangeParams(Space sp);
    bool in_j3(long j) const;
    bool in_j4(long j) const;
    /// Certified enclosures of irrational S_1, S_2 (width <= requested).
    RootBracket s1_bracket(const Rational& width) const;
    RootBracket s2_bracket(const Rational& width) const;
};

/// Locate s in the interval partition {I_m}.  Walks k upward with cached
/// Sturm chains of the adjacent systems; every comparison is exact.
Frame classify(Space space, const Rational& s);

/// The Levenshtein bound L_m(n,s;q) of the frame, from the adjacent systems:
/// L_m = (1 - Q_{k-1+eps}^{(1,0)}(s) / Q_k^{(0,eps)}(s)) * sum_{j<=k-1+eps} r_j.
Rational lev_bound(const Frame& frame, Space space, const Rational& s);

/// Roots of (t+1)^eps [P_k(t) P_{k-1}(s) - P_k(s) P_{k-1}(t)], located in grid
/// cells.  Closed forms cover m = 3 and m = 4; certified isolation beyond.
RootProfile lev_roots(const Frame& frame, Space space, const Rational& s);

/// j = q(n-1-d) - (n-2), the reparametrized distance of d = n-1 - (n-2+j)/q.
long j_of_d(Space space, long d);

/// Closed-form root of the m = 3 equation: a_0 = -1 + 2j(n-1)/(nq(j+q-1)).
Rational alpha0_m3(Space space, long j);
/// Closed-form interior root for m = 4: a_1 = -(n-2)(j(q-2)+2(q-1))/(nqj).
Rational alpha1_m4(Space space, long j);

}  // namespace qbounds
