// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
//
// Each criterion pins exact expected values or tolerances in code; nothing
// here is calibrated at runtime.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "golden_table2.hpp"
#include "qbounds/codes.hpp"
#include "qbounds/delsarte_lp.hpp"

using namespace qbounds;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using clock_type = std::chrono::steady_clock;

#define REQUIRE_EQ(lhs, rhs)                                                              \
    do {                                                                                  \
        if (!((lhs) == (rhs))) {                                                          \
            out.pass = false;                                                             \
            out.detail += std::string(" [") + #lhs " != " #rhs "]";                       \
        }                                                                                 \
    } while (0)

#define REQUIRE_TRUE(cond)                                                                \
    do {                                                                                  \
        if (!(cond)) {                                                                    \
            out.pass = false;                                                             \
            out.detail += std::string(" [") + #cond "]";                                  \
        }                                                                                 \
    } while (0)

// 1. headline exact values, each under one second
Outcome criterion1() {
    Outcome out;
    struct Row {
        int q, n;
        long d;
        long code_bound;
        Rational lev;
    };
    const std::vector<Row> rows = {{3, 14, 8, 237, rat(513, 2)},
                                   {4, 11, 7, 320, rat(364)},
                                   {5, 11, 8, 250, rat(265)}};
    for (const auto& row : rows) {
        const auto t0 = clock_type::now();
        const BoundReport report = refined_bound(Space(row.n, row.q), row.d);
        const double secs = std::chrono::duration<double>(clock_type::now() - t0).count();
        REQUIRE_EQ(report.code_bound, row.code_bound);
        REQUIRE_EQ(report.levenshtein_value, row.lev);
        REQUIRE_TRUE(secs < 1.0);
    }
    return out;
}

// 2. the worked quaternary expansion, exactly
Outcome criterion2() {
    Outcome out;
    const BoundReport report = refined_bound(Space(11, 4), 7);
    REQUIRE_TRUE(report.polynomial.has_value());
    const auto& f = report.polynomial->expansion;
    REQUIRE_EQ(f.coeffs.size(), 4u);
    REQUIRE_EQ(f[0], rat(63, 5324));
    REQUIRE_EQ(f[1], rat(117, 484));
    REQUIRE_EQ(f[2], rat(45, 44));
    REQUIRE_EQ(f[3], rat(1215, 484));
    return out;
}

// 3. full table reproduction, byte-stable, with the discrepancies annotated
Outcome criterion3() {
    Outcome out;
    std::map<int, CandidateCounts> counts;
    const auto rows = enumerate_candidates({2, 3, 4, 5}, 100, &counts);
    const std::string csv = table2_csv(rows);
    REQUIRE_EQ(csv, std::string(kGoldenTable2Csv));
    REQUIRE_EQ(rows.size(), 37u);
    REQUIRE_EQ(counts[2].passing, 4);
    REQUIRE_EQ(counts[3].passing, 8);
    REQUIRE_EQ(counts[4].passing, 10);
    REQUIRE_EQ(counts[5].passing, 15);
    int annotated = 0;
    for (const auto& row : rows)
        if (published_table_discrepancy(row.q, row.n, row.d)) ++annotated;
    REQUIRE_EQ(annotated, 7);
    // the specific discrepancies are detected with our exact values
    for (const auto& row : rows) {
        if (row.q == 2 && row.n == 12 && row.d == 5) REQUIRE_EQ(row.inner_products[2], rat(1, 6));
        if (row.q == 5 && row.n == 25 && row.d == 18) {
            REQUIRE_EQ(row.refined, 3465);
            REQUIRE_EQ(row.lev_value, rat(3621));
            REQUIRE_TRUE(Rational(row.refined) <= row.lev_value);
        }
        if (row.q == 5 && row.n == 16 && row.d == 12) {
            REQUIRE_EQ(row.inner_products[0], rat(-1));
            REQUIRE_EQ(row.inner_products[1], rat(-7, 8));
            REQUIRE_EQ(row.inner_products[2], rat(-1, 2));
        }
    }
    return out;
}

// 4. integrality pass counts at n <= 300: exact numerators; denominators
//    reported with our documented candidate criterion
Outcome criterion4() {
    Outcome out;
    std::map<int, CandidateCounts> counts;
    enumerate_candidates({2, 3, 4, 5}, 300, &counts);
    REQUIRE_EQ(counts[2].passing, 7);
    REQUIRE_EQ(counts[3].passing, 14);
    REQUIRE_EQ(counts[4].passing, 20);
    REQUIRE_EQ(counts[5].passing, 18);
    std::ostringstream note;
    note << " candidates(our criterion)=" << counts[2].candidates << "/" << counts[3].candidates
         << "/" << counts[4].candidates << "/" << counts[5].candidates
         << " vs published 38/54/47/39 (criterion caveat documented)";
    out.detail += note.str();
    return out;
}

// 5. KKT exception set over q in 3..10, n <= 100, L_3-range d
Outcome criterion5() {
    Outcome out;
    std::set<std::pair<int, int>> failing;
    for (int q = 3; q <= 10; ++q) {
        for (int n = std::max(3, q); n <= 100; ++n) {
            const Space space(n, q);
            const RangeParams ranges(space);
            for (long d = 2; d <= n; ++d) {
                if (d >= n || j_of_d(space, d) < 0 || !ranges.in_j3(j_of_d(space, d))) continue;
                const Certificate cert = certify(space, d);
                if (cert.verdict != Verdict::lp_optimal) failing.insert({q, n});
            }
        }
    }
    const std::set<std::pair<int, int>> expected = {{3, 5}, {3, 7}, {3, 8}, {3, 9}};
    if (!(failing == expected)) {
        out.pass = false;
        std::ostringstream os;
        for (auto [q, n] : failing) os << " (" << q << "," << n << ")";
        out.detail += " failing set:" + os.str();
    }
    return out;
}

// 6. passing certificate implies exact LP equality (q <= 5, n <= 16)
Outcome criterion6() {
    Outcome out;
    long checked = 0;
    for (int q : {2, 3, 4, 5}) {
        for (int n = std::max(3, q); n <= 16; ++n) {
            const Space space(n, q);
            const RangeParams ranges(space);
            for (long d = 2; d < n; ++d) {
                if (j_of_d(space, d) < 0 || !ranges.in_j3(j_of_d(space, d))) continue;
                if (certify(space, d).verdict != Verdict::lp_optimal) continue;
                const Rational lp = lp_solve(lp_build(space, d)).bound;
                const Rational refined = refined_bound(space, d).value;
                REQUIRE_EQ(lp, refined);
                ++checked;
            }
        }
    }
    out.detail += " instances=" + std::to_string(checked);
    REQUIRE_TRUE(checked >= 30);
    return out;
}

// 7. closed forms match the generic pipeline exactly
Outcome criterion7() {
    Outcome out;
    std::mt19937 rng(20240809);
    std::uniform_int_distribution<int> qd(2, 10);
    std::uniform_int_distribution<int> nd(5, 200);
    int checked3 = 0;
    while (checked3 < 500 && out.pass) {
        const int q = qd(rng), n = nd(rng);
        if (n < q) continue;
        const Space space(n, q);
        const RangeParams ranges(space);
        std::vector<long> ds;
        for (long d = 2; d < n; ++d)
            if (ranges.in_j3(j_of_d(space, d))) ds.push_back(d);
        if (ds.empty()) continue;
        const long d = ds[std::uniform_int_distribution<size_t>(0, ds.size() - 1)(rng)];
        const auto [report, cf] = closed3(space, d);
        const BoundReport generic = refined_bound(space, d);
        if (generic.fell_back_to_levenshtein) continue;
        REQUIRE_EQ(report.value, generic.value);
        ++checked3;
    }
    int checked4 = 0;
    for (int n = 5; n <= 200 && checked4 < 200; ++n) {
        for (int q = 2; q <= 10 && checked4 < 200; ++q) {
            if (n < q + 1) continue;
            const Space space(n, q);
            const RangeParams ranges(space);
            for (long d = 2; d < n && checked4 < 200; ++d) {
                if (!ranges.in_j4(j_of_d(space, d))) continue;
                const auto [report, cf] = closed4(space, d);
                if (!report.polynomial || report.polynomial->verdict != Feasibility::feasible)
                    continue;
                const BoundReport generic = refined_bound(space, d);
                if (generic.polynomial && generic.polynomial->plan.collapsed) {
                    // degree-lowered variant won; the quartic still matches its
                    // closed form and can only lose to the chosen polynomial
                    REQUIRE_TRUE(generic.value <= report.value);
                } else {
                    REQUIRE_EQ(report.value, generic.value);
                }
                ++checked4;
            }
        }
    }
    out.detail += " closed3=" + std::to_string(checked3) + " closed4=" + std::to_string(checked4);
    REQUIRE_TRUE(checked4 >= 200);
    return out;
}

// 8. feasibility sweeps: m = 3 coefficient positivity and the m = 5 scan
Outcome criterion8() {
    Outcome out;
    long coeff_cases = 0;
    for (int q = 2; q <= 10; ++q) {
        for (int n = std::max(3, q); n <= 200; ++n) {
            const Space space(n, q);
            const RangeParams ranges(space);
            for (long d = 2; d < n; ++d) {
                if (!ranges.in_j3(j_of_d(space, d))) continue;
                const auto cf = closed3(space, d).second;
                REQUIRE_TRUE(cf.f1 > 0);
                REQUIRE_TRUE(cf.f2 > 0);
                REQUIRE_TRUE(cf.f3 > 0);
                REQUIRE_TRUE(cf.f0 > 0);
                ++coeff_cases;
            }
            if (!out.pass) return out;
        }
    }
    long m5_cases = 0, m5_violations = 0;
    for (int n = 6; n <= 2000; ++n) {
        const Space space(n, 3);
        Grid grid(space);
        // membership in the m = 5 interval [t_2^{1,1}, t_3^{1,0}) needs two
        // greatest-zero comparisons; the chains are reused across the walk
        const SturmChain left_chain(adjacent_poly(space, AdjacentKind::one_one, 2));
        const SturmChain right_chain(adjacent_poly(space, AdjacentKind::one_zero, 3));
        for (long d = n; d >= 1; --d) {
            const Rational s = grid.t_of_d(rat(d));
            if (left_chain.count(s, rat(1)) > 0) continue;  // s < t_2^{1,1}: m <= 4
            if (right_chain.count(s, rat(1)) == 0) break;   // s >= t_3^{1,0}: m >= 6
            const BoundReport report = refined_bound(space, d);
            if (report.frame.m != 5) {
                ++m5_violations;
                continue;
            }
            ++m5_cases;
            if (report.fell_back_to_levenshtein ||
                report.polynomial->verdict != Feasibility::feasible)
                ++m5_violations;
        }
    }
    out.detail += " coeff_cases=" + std::to_string(coeff_cases) +
                  " m5_cases=" + std::to_string(m5_cases);
    REQUIRE_EQ(m5_violations, 0);
    REQUIRE_TRUE(m5_cases > 1000);
    return out;
}

// 9. the n = 1000 binary rate row within +-0.002
Outcome criterion9() {
    Outcome out;
    const Space space(1000, 2);
    const std::vector<std::pair<long, double>> targets = {
        {250, 0.386}, {300, 0.281}, {350, 0.188}, {400, 0.110}, {450, 0.047}};
    double prev = 1.0;
    for (const auto& [d, target] : targets) {
        const BoundReport report = refined_bound(space, d);
        const double rate = BigFloat(report.value).log2().to_double() / 1000.0;
        const double lev_rate = BigFloat(report.levenshtein_value).log2().to_double() / 1000.0;
        std::ostringstream os;
        os << " d=" << d << ":" << rate;
        out.detail += os.str();
        REQUIRE_TRUE(std::abs(rate - target) <= 0.002);
        REQUIRE_TRUE(rate <= lev_rate);
        REQUIRE_TRUE(rate < prev);
        prev = rate;
    }
    return out;
}

// 10. m = 3 asymptotics: ratio against the fixed-j main term
Outcome criterion10() {
    Outcome out;
    for (int q : {2, 3}) {
        for (long j : {1L, 2L}) {
            double prev_gap = 1.0;
            for (long base : {100L, 1000L, 10000L}) {
                long n = base;
                // nearest codelength with an integral d for this j
                while (true) {
                    const long numer = static_cast<long>(q) * (n - 1) - (n - 2 + j);
                    if (numer % q == 0) {
                        const long d = numer / q;
                        const Space space(static_cast<int>(n), q);
                        if (d >= 2 && d < n && j_of_d(space, d) == j &&
                            RangeParams(space).in_j3(j))
                            break;
                    }
                    ++n;
                }
                const long d = (static_cast<long>(q) * (n - 1) - (n - 2 + j)) / q;
                const Space space(static_cast<int>(n), q);
                const Rational value = closed3(space, d).first.value;
                const AsymptoticEstimate est = asympt3(q, rat(j), rat(0), rat(0));
                const double ratio = to_double(value / est.eval_exact(n));
                const double gap = std::abs(ratio - 1.0);
                // improving, with equality allowed once the bound hits the
                // main term exactly (the j = 1 family)
                REQUIRE_TRUE(gap <= prev_gap);
                prev_gap = gap;
            }
            REQUIRE_TRUE(prev_gap <= 0.01);
        }
    }
    return out;
}

// 11. kernel properties, zero tolerance
Outcome criterion11() {
    Outcome out;
    // Krawtchouk orthogonality, n <= 12
    for (int q : {2, 3, 4, 5}) {
        const int n = 12;
        const Space space(n, q);
        KrawtchoukTable table(space);
        const Rational qn = Rational(int_pow(Int(q), static_cast<unsigned long>(n)));
        for (int i = 0; i <= n && out.pass; ++i) {
            for (int jj = i; jj <= n; ++jj) {
                Rational sum;
                for (int z = 0; z <= n; ++z) {
                    const Rational w = Rational(
                        binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(z)) *
                        int_pow(Int(q - 1), static_cast<unsigned long>(z)));
                    sum += w * table.k(i, rat(z)) * table.k(jj, rat(z));
                }
                const Rational expected = (i == jj) ? Rational(qn * table.r(i)) : Rational(0);
                REQUIRE_EQ(sum, expected);
            }
        }
    }
    // expansion round-trip at grid nodes
    {
        const Space space(10, 3);
        Grid grid(space);
        KrawtchoukTable table(space);
        const Poly p = Poly::from_roots(std::vector<Rational>{rat(-4, 5), rat(-1, 5), rat(2, 5)});
        const Expansion f = expand(space, p);
        for (int z = 0; z <= space.n; ++z) {
            Rational sum;
            for (int i = 0; i <= f.degree(); ++i)
                sum += f[static_cast<size_t>(i)] * q_eval(table, i, grid.node(z));
            REQUIRE_EQ(sum, p.eval(grid.node(z)));
        }
    }
    // randomized Sturm additivity and divmod round-trips
    std::mt19937 rng(99);
    std::uniform_int_distribution<long> coeff(-9, 9);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Rational> ca(7), cb(4);
        for (auto& c : ca) c = rat(coeff(rng), 1 + std::abs(coeff(rng)));
        for (auto& c : cb) c = rat(coeff(rng), 1 + std::abs(coeff(rng)));
        if (ca.back() == 0) ca.back() = rat(1);
        if (cb.back() == 0) cb.back() = rat(1);
        const Poly a(ca), b(cb);
        const auto [quot, rem] = Poly::divmod(a, b);
        REQUIRE_TRUE(quot * b + rem == a);
        const Rational mid = rat(coeff(rng), 17);
        if (a.eval(mid) != 0) {
            const int total = sturm_count(a, rat(-20), rat(20));
            const int split = sturm_count(a, rat(-20), mid) + sturm_count(a, mid, rat(20));
            REQUIRE_EQ(total, split);
        }
    }
    return out;
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Entry> entries = {
        {1, "headline exact values (237 / 320 / 250; L = 513/2, 364, 265)", criterion1},
        {2, "worked expansion (63/5324, 117/484, 45/44, 1215/484)", criterion2},
        {3, "attainment table reproduction, byte-stable, anomalies annotated", criterion3},
        {4, "integrality pass counts at n <= 300 (7 / 14 / 20 / 18)", criterion4},
        {5, "KKT exception set: q = 3, n in {5,7,8,9} only", criterion5},
        {6, "passing certificate implies LP equality (n <= 16)", criterion6},
        {7, "closed3/closed4 equal the generic pipeline (500 + 200 instances)", criterion7},
        {8, "feasibility sweeps: coefficient positivity and m = 5 scan to n = 2000", criterion8},
        {9, "binary rate row at n = 1000 within 0.002", criterion9},
        {10, "fixed-j asymptotic ratio converges to 1", criterion10},
        {11, "kernel properties: orthogonality, round-trips, Sturm additivity", criterion11},
    };
    bool all_pass = true;
    for (const auto& entry : entries) {
        const auto t0 = clock_type::now();
        Outcome out;
        try {
            out = entry.run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string(" exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(clock_type::now() - t0).count();
        std::cout << "criterion " << entry.id << " (" << entry.name << "): "
                  << (out.pass ? "PASS" : "FAIL") << " [" << secs << "s]" << out.detail << "\n"
                  << std::flush;
        all_pass = all_pass && out.pass;
    }
    return all_pass ? 0 : 1;
}
