#include "qbounds/codes.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qbounds {

std::map<long, Rational> distance_distribution(Space space, const Int& M,
                                               const std::vector<long>& distances) {
    if (M < 2) throw std::invalid_argument("distance_distribution needs M >= 2");
    const int m = static_cast<int>(distances.size());
    KrawtchoukTable table(space);
    std::vector<std::vector<Rational>> a(static_cast<size_t>(m),
                                         std::vector<Rational>(static_cast<size_t>(m) + 1));
    for (int l = 1; l <= m; ++l) {
        for (int c = 0; c < m; ++c) a[l - 1][static_cast<size_t>(c)] = table.k(l, rat(distances[static_cast<size_t>(c)]));
        a[l - 1][static_cast<size_t>(m)] = -table.k(l, rat(0));
    }
    for (int col = 0; col < m; ++col) {
        int pivot = -1;
        for (int row = col; row < m; ++row)
            if (a[static_cast<size_t>(row)][static_cast<size_t>(col)] != 0) {
                pivot = row;
                break;
            }
        if (pivot < 0) throw std::domain_error("singular moment system (degenerate distance set)");
        std::swap(a[static_cast<size_t>(col)], a[static_cast<size_t>(pivot)]);
        const Rational pv = a[static_cast<size_t>(col)][static_cast<size_t>(col)];
        for (auto& v : a[static_cast<size_t>(col)]) v /= pv;
        for (int row = 0; row < m; ++row) {
            if (row == col) continue;
            const Rational f = a[static_cast<size_t>(row)][static_cast<size_t>(col)];
            if (f == 0) continue;
            for (int c = 0; c <= m; ++c)
                a[static_cast<size_t>(row)][static_cast<size_t>(c)] -=
                    f * a[static_cast<size_t>(col)][static_cast<size_t>(c)];
        }
    }
    std::map<long, Rational> out;
    for (int c = 0; c < m; ++c) out[distances[static_cast<size_t>(c)]] = a[static_cast<size_t>(c)][static_cast<size_t>(m)];
    return out;
}

PutativeCode putative_code(Space space, long d) {
    const BoundReport report = refined_bound(space, d);
    if (!is_integer(report.value) || report.value <= 1)
        throw std::domain_error("refined bound is not an integral cardinality");
    if (!report.polynomial) throw std::domain_error("no improving polynomial for this instance");
    PutativeCode code{space, d, report.value.get_num(), {}, {}};
    const Grid& grid = shared_grid(space);
    code.distribution = distance_distribution(space, code.M, report.polynomial->root_distances);
    for (long dist : report.polynomial->root_distances)
        code.inner_products.push_back(grid.t_of_d(rat(dist)));
    std::sort(code.inner_products.begin(), code.inner_products.end());
    Rational sum;
    for (const auto& [dist, count] : code.distribution) sum += count;
    if (sum != Rational(code.M) - 1)
        throw std::logic_error("distribution does not sum to M - 1");
    return code;
}

bool integrality_test(const std::map<long, Rational>& distribution) {
    for (const auto& [dist, value] : distribution)
        if (!is_integer(value) || value < 0) return false;
    return true;
}

std::vector<Table2Row> enumerate_candidates(const std::vector<int>& qs, int n_max,
                                            std::map<int, CandidateCounts>* counts) {
    std::vector<Table2Row> rows;
    for (int q : qs) {
        CandidateCounts tally;
        for (int n = 3; n <= n_max; ++n) {
            Space space(n, q);
            const Grid& grid = shared_grid(space);
            for (long d = 2; d < n; ++d) {
                const long j = j_of_d(space, d);
                if (j < 0) continue;
                RangeParams ranges(space);
                if (!ranges.in_j3(j) && !ranges.in_j4(j)) continue;

                BoundReport report = refined_bound(space, d);
                if (report.fell_back_to_levenshtein || !report.polynomial) continue;
                const ImprovedPolynomial& ip = *report.polynomial;
                if (ip.poly.degree() != 3 || ip.root_distances.size() != 3) continue;
                // strict improvement only: the unsnapped Levenshtein root must
                // lie off the grid, otherwise this is the classical bound
                const RootProfile profile = lev_roots(report.frame, space, report.s);
                bool interior_hit = false;
                for (const auto& root : profile.alphas)
                    if (root.multiplicity == 2 && root.grid_hit) interior_hit = true;
                if (interior_hit) continue;
                if (!is_integer(report.value) || report.value <= 0) continue;

                ++tally.candidates;
                Table2Row row;
                row.q = q;
                row.n = n;
                row.d = d;
                row.lev_value = report.levenshtein_value;
                row.refined = report.value.get_num();
                auto dist = distance_distribution(space, row.refined, ip.root_distances);
                // ascending inner product = descending distance
                std::vector<long> by_ip(ip.root_distances);
                std::sort(by_ip.rbegin(), by_ip.rend());
                for (size_t i = 0; i < 3; ++i) {
                    row.inner_products[i] = grid.t_of_d(rat(by_ip[i]));
                    row.distribution[i] = dist[by_ip[i]];
                }
                row.integrality_pass = integrality_test(dist);
                row.positive = std::all_of(dist.begin(), dist.end(),
                                           [](const auto& kv) { return kv.second > 0; });
                if (row.integrality_pass && row.positive) {
                    ++tally.passing;
                    row.brouwer_note = brouwer_cross_note(row);
                    if (auto flag = published_table_discrepancy(q, n, d)) {
                        row.brouwer_note =
                            row.brouwer_note ? *row.brouwer_note + "; " + *flag : *flag;
                    }
                    rows.push_back(std::move(row));
                }
            }
        }
        if (counts) (*counts)[q] = tally;
    }
    std::sort(rows.begin(), rows.end(), [](const Table2Row& a, const Table2Row& b) {
        return std::tie(a.q, a.n, a.d) < std::tie(b.q, b.n, b.d);
    });
    return rows;
}

std::optional<std::string> published_table_discrepancy(int q, int n, long d) {
    struct Entry {
        int q, n;
        long d;
        const char* note;
    };
    static const Entry entries[] = {
        {2, 12, 5, "published table flips the sign of the inner product s = 1/6"},
        {4, 42, 30, "published table prints s = -1/7; s = 1 - 2d/n = -3/7"},
        {4, 49, 35, "published table prints s = -1/7; s = 1 - 2d/n = -3/7"},
        {5, 6, 4, "published distribution reads 44,24,60; the moment system forces 40,24,60"},
        {5, 16, 12, "published inner-product list is malformed (-1/ -7/8, -1/2)"},
        {5, 25, 18, "published refinement 3645 exceeds L_3 = 3621; the exact value is 3465"},
        {5, 45, 34, "published L_3 = 3649; the exact value is 3349"},
    };
    for (const auto& e : entries)
        if (e.q == q && e.n == n && e.d == d) return std::string(e.note);
    return std::nullopt;
}

std::optional<std::string> brouwer_cross_note(const Table2Row& row) {
    // parameter sets whose best known upper bound from the reference tables
    // coincides with the refinement (asterisk rows), plus cited lower bounds
    struct Entry {
        int q, n;
        long d;
        const char* note;
    };
    static const Entry entries[] = {
        {3, 4, 2, "*"},   {4, 5, 3, "*"},  {4, 11, 7, "*; best known lower bound 128"},
        {5, 4, 2, "*"},   {5, 5, 3, "*"},  {5, 6, 4, "*"},
        {5, 11, 8, "*"},
    };
    for (const auto& e : entries)
        if (e.q == row.q && e.n == row.n && e.d == row.d) return std::string(e.note);
    return std::nullopt;
}

std::string table2_csv(const std::vector<Table2Row>& rows) {
    std::ostringstream out;
    out << "q,n,d,L_m,refined,ip1,ip2,ip3,dist1,dist2,dist3,integral,note\n";
    for (const auto& row : rows) {
        out << row.q << ',' << row.n << ',' << row.d << ',' << to_pq(row.lev_value) << ','
            << row.refined.get_str() << ',' << to_pq(row.inner_products[0]) << ','
            << to_pq(row.inner_products[1]) << ',' << to_pq(row.inner_products[2]) << ','
            << to_pq(row.distribution[0]) << ',' << to_pq(row.distribution[1]) << ','
            << to_pq(row.distribution[2]) << ',' << (row.integrality_pass ? 1 : 0) << ','
            << (row.brouwer_note ? *row.brouwer_note : "") << '\n';
    }
    return out.str();
}

std::string table2_json(const std::vector<Table2Row>& rows) {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json r;
        r["q"] = row.q;
        r["n"] = row.n;
        r["d"] = row.d;
        r["L_m"] = to_pq(row.lev_value);
        r["refined"] = row.refined.get_str();
        r["inner_products"] = {to_pq(row.inner_products[0]), to_pq(row.inner_products[1]),
                               to_pq(row.inner_products[2])};
        r["distribution"] = {to_pq(row.distribution[0]), to_pq(row.distribution[1]),
                             to_pq(row.distribution[2])};
        r["integral"] = row.integrality_pass;
        if (row.brouwer_note) r["note"] = *row.brouwer_note;
        doc["rows"].push_back(std::move(r));
    }
    return doc.dump(2) + "\n";
}

}  // namespace qbounds
