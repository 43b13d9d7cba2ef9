#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbounds/refine.hpp"

namespace qbounds {

/// A putative bound-attaining code: asserted cardinality M (the integral
/// refined bound), the inner products prescribed by the improving
/// polynomial's roots, and the forced per-point distance distribution.
struct PutativeCode {
    Space space;
    long d = 0;
    Int M;
    std::vector<Rational> inner_products;       // ascending
    std::map<long, Rational> distribution;      // distance -> A_delta
};

/// One row of the attainment table.
struct Table2Row {
    int q = 0;
    int n = 0;
    long d = 0;
    Rational lev_value;                        // the applicable L_m(n,s)
    Int refined;                               // integral refined bound
    std::array<Rational, 3> inner_products;    // ascending
    std::array<Rational, 3> distribution;      // ordered by inner product
    bool integrality_pass = false;
    bool positive = false;
    std::optional<std::string> brouwer_note;
};

/// Unique solution of sum_{delta} A_delta K_l(delta) = -K_l(0), l = 1..m
/// (the per-point moment identities of a strength-m design).
std::map<long, Rational> distance_distribution(Space space, const Int& M,
                                               const std::vector<long>& distances);

/// Assemble the putative attaining code for (q, n, d): requires the refined
/// bound to be integral; the inner products are the improving polynomial's
/// roots and the distribution is forced by the moment identities.
PutativeCode putative_code(Space space, long d);

bool integrality_test(const std::map<long, Rational>& distribution);

struct CandidateCounts {
    long candidates = 0;
    long passing = 0;
};

/// Attainment candidates of the degree-3 refinement for q in qs, n <= n_max.
/// A candidate is a (q,n,d) whose refined improving polynomial has exactly
/// three distinct on-grid roots, strictly improves the Levenshtein bound
/// (the unsnapped root is off-grid), is feasible, and has an integral value.
/// Rows are emitted for candidates whose forced distribution is integral and
/// positive, sorted by (q, n, d).
std::vector<Table2Row> enumerate_candidates(const std::vector<int>& qs, int n_max,
                                            std::map<int, CandidateCounts>* counts = nullptr);

/// Reference annotations from the literature values cited alongside the
/// table (no network access; a small embedded list).
std::optional<std::string> brouwer_cross_note(const Table2Row& row);

/// Rows where the published table disagrees with the exact computation
/// (sign slips, digit transpositions, a malformed entry).  The annotation
/// describes the discrepancy; our computed values are emitted either way.
std::optional<std::string> published_table_discrepancy(int q, int n, long d);

std::string table2_csv(const std::vector<Table2Row>& rows);
std::string table2_json(const std::vector<Table2Row>& rows);

}  // namespace qbounds
