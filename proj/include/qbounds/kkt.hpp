#pragma once

#include <map>
#include <optional>
#include <vector>

#include "qbounds/refine.hpp"

namespace qbounds {

/// The five parameters of the closed-form m = 3 dual weights, positive on
/// the whole range (distinct from the ClosedForm3 parameters of the same
/// names).
struct DualWeightParams {
    Rational A, B, C, D, E;
};

enum class Verdict { lp_optimal, not_optimal, inconclusive };

/// KKT data for the refined polynomial: dual weights mu at the integer
/// distance roots, multipliers lambda_1..lambda_n, and the verdict.
struct Certificate {
    std::map<long, Rational> mu;
    std::vector<Rational> lambda;  // lambda[l-1] for l = 1..n
    Verdict verdict = Verdict::inconclusive;
    std::optional<long> witness;  // negative multiplier index (distance or degree)
    std::string diagnostic;
};

DualWeightParams dual_weight_params(Space space, long d);

struct Weights3 {
    long d = 0;
    long b = 0;  // d0 + e
    Rational mu_d, mu_b_minus_1, mu_b;
};

/// Closed-form solution of the 3x3 dual system for the m = 3 refinement.
Weights3 weights3_closed(Space space, long d);

/// Exact solution of sum_i mu_i K_l(i)/r_l = -1 for l = 1..m over the given
/// integer distance roots (|roots| = m).  Throws on a singular system.
std::map<long, Rational> weights_solve(Space space, const std::vector<long>& roots, int m);

/// lambda_l = 1 + sum_i mu_i K_l(i)/r_l for l = 1..n.
std::vector<Rational> lambdas(Space space, const std::map<long, Rational>& mu);

/// Full optimality certificate for the refined bound at distance d.
Certificate certify(Space space, long d);

}  // namespace qbounds
