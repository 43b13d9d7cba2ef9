#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qbounds/kkt.hpp"

namespace qbounds {

/// The full Delsarte linear program: minimize x_1 + ... + x_n subject to
/// sum_l K_l(i)/r_l x_l <= -1 for i = d..n, x >= 0.
struct LPInstance {
    Space space;
    long d = 0;
    std::vector<std::vector<Rational>> rows;  // n entries each, for i = d..n
};

struct LPSolution {
    std::vector<Rational> x;      // optimal x_1..x_n
    Rational objective;           // sum x_l
    Rational bound;               // 1 + objective = g*(0)/g_0
    std::vector<Rational> dual;   // one multiplier per row
    bool optimal = false;
};

LPInstance lp_build(Space space, long d);

/// Exact primal simplex, two phases, Bland's least-index rule.  The solution
/// is certified by substituting x* into every row and by exact dual
/// feasibility / strong duality before it is returned.
LPSolution lp_solve(const LPInstance& instance);

struct CompareRecord {
    Rational refined;
    Rational lp;
    bool equal = false;
    Verdict certificate = Verdict::inconclusive;
};

/// Refined bound vs. LP optimum vs. KKT certificate on one instance.
CompareRecord lp_compare(Space space, long d);

struct SqScanResult {
    Rational s_q;              // first failing grid s, or the scan's right end
    bool failure_found = false;
    long scanned = 0;
};

/// Ascending scan of grid values s: the largest sigma with refined == LP for
/// every grid s in [-1, sigma).  Stops at the first failure.
SqScanResult sq_scan(Space space, std::optional<Rational> s_max = std::nullopt);

/// Text dump of the instance in an LP-interchange layout, rationals as "p/q".
std::string lp_dump(const LPInstance& instance);

}  // namespace qbounds
