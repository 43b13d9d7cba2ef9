#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qbounds/levenshtein.hpp"

namespace qbounds {

/// Grid nodes g_1 <= ... <= g_{2k-1} replacing the Levenshtein roots
/// (g_{2k-1} = s); eps adds the simple factor (t+1).
struct SnapPlan {
    std::vector<Rational> gammas;  // ascending, last entry is s
    int eps = 0;
    bool tie_break = false;  // one of the roots hit a node exactly
    bool collapsed = false;  // duplicate (t+1) factor dropped
};

enum class Feasibility { feasible, infeasible, uncertified };

/// The snapped polynomial with its Krawtchouk expansion and both
/// feasibility conditions of the polynomial method checked exactly.
struct ImprovedPolynomial {
    Poly poly;
    Expansion expansion;
    Feasibility verdict = Feasibility::uncertified;
    std::vector<int> negative_indices;  // (A2) violations
    bool a1_ok = false;
    std::vector<long> root_distances;  // distinct integer distances where poly vanishes
    SnapPlan plan;
};

enum class Method { levenshtein, refined, closed3, closed4, lp };

/// A computed bound: the exact rational f(1)/f_0 plus the integer bound on
/// A_q(n,s) it implies (its floor).
struct BoundReport {
    explicit BoundReport(Space sp) : space(sp) {}
    Space space;
    long d = 0;
    Rational s;
    Method method = Method::refined;
    Rational value;
    Int code_bound;
    Frame frame;
    std::optional<ImprovedPolynomial> polynomial;
    bool fell_back_to_levenshtein = false;
    Rational levenshtein_value;
    std::string diagnostic;
};

/// Replacement plans per the snapping rule; exact node hits fork into the
/// two admissible replacements (one-sided at the grid edges).
std::vector<SnapPlan> snap(const RootProfile& profile, const Grid& grid);

/// Construct (t+1)^eps prod(t - gamma_i), reduce mod the grid annihilator
/// when the degree exceeds n, expand, and check (A1)/(A2) exactly.
ImprovedPolynomial build(const SnapPlan& plan, Space space);

/// classify -> lev_roots -> snap -> build -> f(1)/f_0, taking the smallest
/// feasible candidate over all plans (and over the collapsed variant when a
/// duplicated (t+1) factor arises).  Falls back to the Levenshtein bound
/// with a diagnostic when no candidate is feasible.
BoundReport refined_bound(Space space, long d);

/// Same pipeline at an arbitrary s in [-1, 1).  Off-grid s is accepted for
/// research use (interval endpoints, asymptotics); the value then bounds the
/// framework objective, not A_q(n,s) of any code.
BoundReport refined_bound_at(Space space, const Rational& s);

/// Levenshtein bound packaged the same way.
BoundReport levenshtein_report(Space space, long d);

/// Parameters of the right-hand side of the m = 3 closed-form bound.
struct ClosedForm3 {
    long j = 0;
    Rational e, r, d0, a, A, B, C, D, E;
    Rational f0, f1, f2, f3;
};

/// Closed-form m = 3 refined bound a(a+q)dq / (a^2(2-q-j) + Da + E);
/// throws std::domain_error when j = j_of_d(d) lies outside J_3.
std::pair<BoundReport, ClosedForm3> closed3(Space space, long d);

struct ClosedForm4 {
    long j = 0;
    Rational e, d0;
    long b = 0;  // d0 + e, integral
    Rational C1, C2;
};

/// Closed-form m = 4 refined bound q^3 b(b-1)(n(q-1)-j-q+2) /
/// ((1-j)q^2b^2 + C_1 q b - C_2); conditional on (A2), which is checked
/// through build.  Throws std::domain_error when j lies outside J_4.
std::pair<BoundReport, ClosedForm4> closed4(Space space, long d);

/// Asymptotic estimates as exact coefficient/power terms so tests can check
/// coefficients and evaluate ratios without rounding.
struct AsymptoticEstimate {
    struct Term {
        Rational coefficient;
        Rational n_power;
    };
    std::vector<Term> terms;
    /// Exact value when all powers are integral; throws otherwise.
    Rational eval_exact(long n) const;
    double eval(double n) const;
};

/// Main terms of the m = 3 asymptotics for j = c n^alpha in J_3:
/// alpha in [0,1/5), [1/5,1/2), and the two-term alpha = 1/2 form.
AsymptoticEstimate asympt3(int q, const Rational& j, const Rational& alpha, const Rational& c);

/// The m = 4 asymptotic estimate q(q-1)^2 n^2 / (2(q-c)) for
/// c in [0, (q-1)(1 - 2/(S1+S2))).
AsymptoticEstimate asympt4(int q, const Rational& c);

/// Admissible-c interval test at a concrete n (the interval depends on n
/// through S1, S2; callers flag c values that leave it as n varies).
bool asympt4_c_admissible(Space space, const Rational& c);

}  // namespace qbounds
