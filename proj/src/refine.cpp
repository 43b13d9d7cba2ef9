#include "qbounds/refine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qbounds {

std::vector<SnapPlan> snap(const RootProfile& profile, const Grid& grid) {
    const int n = grid.space().n;
    std::vector<SnapPlan> plans(1);
    plans[0].eps = profile.eps;
    bool any_tie = false;

    auto extend_all = [&](const std::vector<std::vector<Rational>>& choices) {
        std::vector<SnapPlan> next;
        for (const auto& plan : plans) {
            for (const auto& choice : choices) {
                SnapPlan np = plan;
                np.gammas.insert(np.gammas.end(), choice.begin(), choice.end());
                next.push_back(std::move(np));
            }
        }
        plans = std::move(next);
        if (plans.size() > 64) throw std::runtime_error("implausible number of snap plans");
    };

    for (const auto& root : profile.alphas) {
        if (root.multiplicity == 1) continue;  // s and the eps-root stay as they are
        if (root.grid_hit) {
            any_tie = true;
            // an exact hit admits two replacements, (t_{j-1}, t_j) or (t_j, t_{j+1});
            // grid edges leave only one
            std::vector<std::vector<Rational>> choices;
            const int j = root.cell_hi;
            if (j - 1 >= 0) choices.push_back({grid.node(j - 1), grid.node(j)});
            if (j + 1 <= n) choices.push_back({grid.node(j), grid.node(j + 1)});
            if (choices.empty()) throw std::logic_error("grid hit with no admissible replacement");
            extend_all(choices);
        } else {
            const int j = root.cell_hi;
            if (j - 1 < 0 || j > n) throw std::logic_error("interior root cell out of grid");
            extend_all({{grid.node(j - 1), grid.node(j)}});
        }
    }
    for (auto& plan : plans) {
        plan.gammas.push_back(profile.s);
        std::sort(plan.gammas.begin(), plan.gammas.end());
        plan.tie_break = any_tie;
    }
    return plans;
}

namespace {

// Distinct integer distances where the snapped polynomial vanishes.  The
// roots are the plan's grid nodes (plus -1 for eps = 1); grid values are
// unchanged by the mod-annihilator reduction, so this also covers deg > n.
std::vector<long> distinct_root_distances(const SnapPlan& plan, const Grid& grid) {
    std::vector<long> out;
    if (plan.eps == 1) out.push_back(grid.space().n);
    for (const auto& gamma : plan.gammas) {
        const Rational d = grid.d_of_t(gamma);
        if (is_integer(d)) out.push_back(d.get_num().get_si());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

ImprovedPolynomial build(const SnapPlan& plan, Space space) {
    const Grid& grid = shared_grid(space);
    ImprovedPolynomial out;
    out.plan = plan;

    Poly poly = Poly::from_roots(plan.gammas);
    for (int e = 0; e < plan.eps; ++e) poly = poly * Poly::linear_root(rat(-1));
    if (plan.collapsed) {
        auto [quot, rem] = Poly::divmod(poly, Poly::linear_root(rat(-1)));
        if (!rem.is_zero()) throw std::logic_error("collapse without duplicated (t+1) factor");
        poly = quot;
    }
    if (poly.degree() > space.n) poly = reduce_mod_grid(space, poly);
    out.poly = poly;

    const Rational& s = plan.gammas.back();
    out.a1_ok = true;
    for (int i = 0; i <= space.n && !(grid.node(i) > s); ++i) {
        if (poly.eval(grid.node(i)) > 0) {
            out.a1_ok = false;
            break;
        }
    }
    out.expansion = expand(space, poly);
    bool a2 = out.expansion[0] > 0;
    if (!a2) out.negative_indices.push_back(0);
    for (size_t i = 1; i < out.expansion.coeffs.size(); ++i) {
        if (out.expansion[i] < 0) {
            out.negative_indices.push_back(static_cast<int>(i));
            a2 = false;
        }
    }
    out.verdict = (a2 && out.a1_ok) ? Feasibility::feasible : Feasibility::infeasible;
    out.root_distances = distinct_root_distances(plan, grid);
    return out;
}

BoundReport levenshtein_report(Space space, long d) {
    if (d < 1 || d > space.n) throw std::invalid_argument("distance out of range");
    const Grid& grid = shared_grid(space);
    BoundReport report{space};
    report.d = d;
    report.s = grid.t_of_d(rat(d));
    report.method = Method::levenshtein;
    report.frame = classify(space, report.s);
    report.value = lev_bound(report.frame, space, report.s);
    report.levenshtein_value = report.value;
    report.code_bound = floor_int(report.value);
    return report;
}

BoundReport refined_bound(Space space, long d) {
    if (d < 1 || d > space.n) throw std::invalid_argument("distance out of range");
    return refined_bound_at(space, shared_grid(space).t_of_d(rat(d)));
}

BoundReport refined_bound_at(Space space, const Rational& s) {
    const Grid& grid = shared_grid(space);
    BoundReport report{space};
    const Rational d_exact = grid.d_of_t(s);
    report.d = is_integer(d_exact) ? d_exact.get_num().get_si() : 0;
    report.s = s;
    report.method = Method::refined;
    report.frame = classify(space, report.s);
    report.levenshtein_value = lev_bound(report.frame, space, report.s);

    const RootProfile profile = lev_roots(report.frame, space, report.s);
    std::vector<SnapPlan> plans = snap(profile, grid);
    // A duplicated (t+1) factor (eps = 1 and a snapped node at t_0 = -1)
    // admits a degree-lowered variant; try it alongside the canonical one.
    const size_t plain_count = plans.size();
    for (size_t i = 0; i < plain_count; ++i) {
        if (plans[i].eps == 1 &&
            std::find(plans[i].gammas.begin(), plans[i].gammas.end(), rat(-1)) != plans[i].gammas.end()) {
            SnapPlan collapsed = plans[i];
            collapsed.collapsed = true;
            plans.push_back(std::move(collapsed));
        }
    }

    std::optional<ImprovedPolynomial> best;
    Rational best_value;
    for (const auto& plan : plans) {
        ImprovedPolynomial candidate = build(plan, space);
        if (candidate.verdict != Feasibility::feasible) continue;
        const Rational value = candidate.poly.eval(rat(1)) / candidate.expansion[0];
        if (!best || value < best_value) {
            best = std::move(candidate);
            best_value = value;
        }
    }
    if (!best) {
        report.fell_back_to_levenshtein = true;
        report.value = report.levenshtein_value;
        report.code_bound = floor_int(report.value);
        report.diagnostic = "no feasible snapped polynomial; reporting the Levenshtein bound";
        if (!plans.empty()) {
            ImprovedPolynomial witness = build(plans.front(), space);
            report.polynomial = std::move(witness);
        }
        return report;
    }
    report.value = best_value;
    report.code_bound = floor_int(best_value);
    report.polynomial = std::move(best);
    return report;
}

std::pair<BoundReport, ClosedForm3> closed3(Space space, long d) {
    const long n = space.n, q = space.q;
    if (n < q) throw std::domain_error("closed3 requires n >= q");
    const long j = j_of_d(space, d);
    RangeParams ranges(space);
    if (!ranges.in_j3(j)) throw std::domain_error("j outside J_3");

    ClosedForm3 cf;
    cf.j = j;
    const Rational modulus = rat(q) * rat(j + q - 1);
    Int r_int = Int(j) * (n - 1);
    mpz_mod(r_int.get_mpz_t(), r_int.get_mpz_t(), modulus.get_num_mpz_t());
    if (r_int == 0) r_int = modulus.get_num();
    cf.r = Rational(r_int);
    cf.e = cf.r / modulus;
    cf.d0 = rat(n) - rat(j) * rat(n - 1) / modulus;

    cf.A = rat(-j * j) + (rat(2) * cf.e * q - 1) * rat(j) + rat(q - 1) * (rat(2 * n + q - 4) + rat(2) * cf.e * q);
    cf.B = (rat(j * (j - 2) - n * (q - 1)) + rat(q, 2) * rat(3 * j + q - 1)) / rat(j + q - 1);
    cf.C = rat(-j * j + (2 - q) * j + (3 * n - 2) * (q - 1)) - rat(q * q, 4);
    cf.D = rat(j + q - 1) * rat(2 * n * (q - 1) - q) + q;
    cf.E = -rat(n) * rat(n - 1) * rat((q - 1) * (q - 1)) * rat(j + q);
    cf.a = rat(n - 1) * rat(q - 1) * rat(q + j) / rat(q + j - 1) + cf.e * q;

    const Rational n2 = rat(n) * rat(n);
    cf.f3 = rat(8) * rat((q - 1) * (q - 1) * (q - 1)) * rat(n - 2) * rat(n - 1) / (rat(q * q * q) * n2);
    cf.f2 = rat(8) * rat((q - 1) * (q - 1)) * rat(n - 1) * cf.A / (rat(q * q * q) * n2 * rat(q + j - 1));
    const Rational eqb = cf.e * q - cf.B;
    cf.f1 = rat(8) * rat(q - 1) * (eqb * eqb + cf.C) / (rat(q * q * q) * n2);
    cf.f0 = rat(8) * (cf.a * cf.a * rat(2 - q - j) + cf.D * cf.a + cf.E) / (rat(q * q * q) * n2 * rat(n));

    BoundReport report{space};
    report.d = d;
    report.s = rat(1) - rat(2 * d, n);
    report.method = Method::closed3;
    report.frame = classify(space, report.s);
    report.levenshtein_value = lev_bound(report.frame, space, report.s);
    report.value = cf.a * (cf.a + q) * rat(d) * rat(q) / (cf.a * cf.a * rat(2 - q - j) + cf.D * cf.a + cf.E);
    report.code_bound = floor_int(report.value);
    return {std::move(report), std::move(cf)};
}

std::pair<BoundReport, ClosedForm4> closed4(Space space, long d) {
    const long n = space.n, q = space.q;
    const long j = j_of_d(space, d);
    RangeParams ranges(space);
    if (!ranges.in_j4(j)) throw std::domain_error("j outside J_4");

    ClosedForm4 cf;
    cf.j = j;
    cf.d0 = rat(n - 1) - rat(j - q + 1) * rat(n - 2) / (rat(q) * rat(j));
    const Int fl = floor_int(cf.d0);
    cf.e = cf.d0 == Rational(fl) ? rat(1) : Rational(fl) + 1 - cf.d0;
    const Rational b_rat = cf.d0 + cf.e;
    if (!is_integer(b_rat)) throw std::logic_error("b = d0 + e must be integral");
    cf.b = b_rat.get_num().get_si();
    cf.C1 = rat(j) * rat(q - 1) * rat(2 * n - 1) + rat(j - q);
    cf.C2 = rat(q - 1) * rat(n - 1) * (rat((q - 1) * (j + 1)) * rat(n) + rat(2 * (j - q + 1)));

    BoundReport report{space};
    report.d = d;
    report.s = rat(1) - rat(2 * d, n);
    report.method = Method::closed4;
    report.frame = classify(space, report.s);
    report.levenshtein_value = lev_bound(report.frame, space, report.s);
    const Rational num = rat(q * q * q) * rat(cf.b) * rat(cf.b - 1) * rat(n * (q - 1) - j - q + 2);
    const Rational den = rat(1 - j) * rat(q * q) * rat(cf.b) * rat(cf.b) + cf.C1 * rat(q) * rat(cf.b) - cf.C2;
    report.value = num / den;
    report.code_bound = floor_int(report.value);

    // the closed form is conditional on feasibility; check it on the quartic
    SnapPlan plan;
    plan.eps = 1;
    const Grid& grid = shared_grid(space);
    plan.gammas = {grid.t_of_d(rat(cf.b)), grid.t_of_d(rat(cf.b - 1)), report.s};
    std::sort(plan.gammas.begin(), plan.gammas.end());
    ImprovedPolynomial ip = build(plan, space);
    if (ip.verdict != Feasibility::feasible) {
        report.diagnostic = "expansion has a negative coefficient; the closed form is not applicable";
    } else if (ip.poly.eval(rat(1)) / ip.expansion[0] != report.value) {
        throw std::logic_error("closed-form m=4 value disagrees with its own polynomial");
    }
    report.polynomial = std::move(ip);
    return {std::move(report), std::move(cf)};
}

Rational AsymptoticEstimate::eval_exact(long n) const {
    Rational total;
    for (const auto& term : terms) {
        if (!is_integer(term.n_power)) throw std::domain_error("non-integral power; use eval()");
        const long p = term.n_power.get_num().get_si();
        if (p < 0) throw std::domain_error("negative power");
        Rational np = 1;
        for (long i = 0; i < p; ++i) np *= n;
        total += term.coefficient * np;
    }
    return total;
}

double AsymptoticEstimate::eval(double n) const {
    double total = 0;
    for (const auto& term : terms)
        total += to_double(term.coefficient) * std::pow(n, to_double(term.n_power));
    return total;
}

AsymptoticEstimate asympt3(int q, const Rational& j, const Rational& alpha, const Rational& c) {
    if (alpha < 0 || alpha > rat(1, 2)) throw std::invalid_argument("alpha in [0, 1/2]");
    AsymptoticEstimate est;
    if (alpha < rat(1, 5)) {
        // [(q-1)n - (j+q-2)](j+q) + j(j+q-1)^2
        est.terms.push_back({rat(q - 1) * (j + q), rat(1)});
        est.terms.push_back({-(j + q - 2) * (j + q) + j * (j + q - 1) * (j + q - 1), rat(0)});
    } else if (alpha < rat(1, 2)) {
        // (q-1)(q+j)n + j^3 + c^5 n^{5a-1}/(q-1)
        est.terms.push_back({rat(q - 1) * (q + j), rat(1)});
        est.terms.push_back({j * j * j, rat(0)});
        est.terms.push_back({c * c * c * c * c / rat(q - 1), rat(5) * alpha - 1});
    } else {
        if (c * c >= rat(q - 1))
            throw std::domain_error("alpha = 1/2 estimate pole: c^2 >= q - 1");
        const Rational den = rat(q - 1) - c * c;
        est.terms.push_back({c * rat((q - 1) * (q - 1)) / den, rat(3, 2)});
        const Rational c2 = c * c, c4 = c2 * c2;
        est.terms.push_back(
            {rat(q - 1) * (c4 - rat(q - 1) * (rat(3) * c2 - rat(q * q - q))) / (den * den), rat(1)});
    }
    return est;
}

AsymptoticEstimate asympt4(int q, const Rational& c) {
    if (c < 0 || c >= rat(q - 1)) throw std::domain_error("c must lie in [0, q-1)");
    AsymptoticEstimate est;
    est.terms.push_back({rat(q) * rat((q - 1) * (q - 1)) / (rat(2) * (rat(q) - c)), rat(2)});
    return est;
}

bool asympt4_c_admissible(Space space, const Rational& c) {
    if (c < 0) return false;
    // c < (q-1)(1 - 2/(S1+S2))  <=>  S1 + S2 > 2(q-1)/(q-1-c)
    RangeParams ranges(space);
    const Rational w = rat(1, 1000000);
    const Rational s1 = ranges.s1_bracket(w).lo;
    const Rational s2 = ranges.s2_bracket(w).lo;
    if (c >= rat(space.q - 1)) return false;
    return s1 + s2 > rat(2) * rat(space.q - 1) / (rat(space.q - 1) - c);
}

}  // namespace qbounds
