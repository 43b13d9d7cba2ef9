#include "qbounds/delsarte_lp.hpp"

#include <sstream>
#include <stdexcept>

namespace qbounds {

LPInstance lp_build(Space space, long d) {
    if (d < 1 || d > space.n) throw std::invalid_argument("distance out of range");
    KrawtchoukTable table(space);
    LPInstance instance{space, d, {}};
    for (long i = d; i <= space.n; ++i) {
        std::vector<Rational> row;
        row.reserve(static_cast<size_t>(space.n));
        for (int l = 1; l <= space.n; ++l) row.push_back(table.k(l, rat(i)) / table.r(l));
        instance.rows.push_back(std::move(row));
    }
    return instance;
}

namespace {

// Dense tableau simplex in equality form with Bland's rule.  Column layout:
// [x_1..x_n | surplus_1..m | artificial_1..m | rhs].
class Tableau {
  public:
    Tableau(const LPInstance& instance)
        : nv_(instance.space.n), m_(static_cast<int>(instance.rows.size())) {
        rows_.assign(static_cast<size_t>(m_),
                     std::vector<Rational>(static_cast<size_t>(nv_ + 2 * m_ + 1)));
        basis_.resize(static_cast<size_t>(m_));
        for (int r = 0; r < m_; ++r) {
            auto& row = rows_[static_cast<size_t>(r)];
            // original row: sum a_l x_l <= -1; negated to sum (-a_l) x_l >= 1
            for (int c = 0; c < nv_; ++c) row[static_cast<size_t>(c)] = -instance.rows[static_cast<size_t>(r)][static_cast<size_t>(c)];
            row[static_cast<size_t>(nv_ + r)] = rat(-1);       // surplus
            row[static_cast<size_t>(nv_ + m_ + r)] = rat(1);   // artificial
            row.back() = rat(1);
            basis_[static_cast<size_t>(r)] = nv_ + m_ + r;
        }
    }

    // Minimize cost over columns [0, limit); returns false on unboundedness.
    bool minimize(const std::vector<Rational>& cost, int limit) {
        while (true) {
            int entering = -1;
            for (int c = 0; c < limit; ++c) {
                if (is_basic(c)) continue;
                if (reduced_cost(cost, c) < 0) {
                    entering = c;  // Bland: first improving index
                    break;
                }
            }
            if (entering < 0) return true;
            int leaving = -1;
            Rational best_ratio;
            for (int r = 0; r < m_; ++r) {
                const Rational& a = rows_[static_cast<size_t>(r)][static_cast<size_t>(entering)];
                if (a > 0) {
                    Rational ratio = rows_[static_cast<size_t>(r)].back() / a;
                    if (leaving < 0 || ratio < best_ratio ||
                        (ratio == best_ratio && basis_[static_cast<size_t>(r)] < basis_[static_cast<size_t>(leaving)])) {
                        best_ratio = ratio;
                        leaving = r;
                    }
                }
            }
            if (leaving < 0) return false;
            pivot(leaving, entering);
        }
    }

    Rational objective(const std::vector<Rational>& cost) const {
        Rational v;
        for (int r = 0; r < m_; ++r)
            v += cost[static_cast<size_t>(basis_[static_cast<size_t>(r)])] * rows_[static_cast<size_t>(r)].back();
        return v;
    }

    void drive_out_artificials() {
        for (int r = 0; r < m_; ++r) {
            if (basis_[static_cast<size_t>(r)] < nv_ + m_) continue;
            for (int c = 0; c < nv_ + m_; ++c) {
                if (rows_[static_cast<size_t>(r)][static_cast<size_t>(c)] != 0) {
                    pivot(r, c);
                    break;
                }
            }
        }
    }

    std::vector<Rational> primal() const {
        std::vector<Rational> x(static_cast<size_t>(nv_));
        for (int r = 0; r < m_; ++r)
            if (basis_[static_cast<size_t>(r)] < nv_)
                x[static_cast<size_t>(basis_[static_cast<size_t>(r)])] = rows_[static_cast<size_t>(r)].back();
        return x;
    }

    // y^T = c_B^T B^{-1}; B^{-1} lives in the artificial columns.
    std::vector<Rational> dual(const std::vector<Rational>& cost) const {
        std::vector<Rational> y(static_cast<size_t>(m_));
        for (int i = 0; i < m_; ++i) {
            Rational v;
            for (int r = 0; r < m_; ++r)
                v += cost[static_cast<size_t>(basis_[static_cast<size_t>(r)])] *
                     rows_[static_cast<size_t>(r)][static_cast<size_t>(nv_ + m_ + i)];
            y[static_cast<size_t>(i)] = v;
        }
        return y;
    }

    int nv() const { return nv_; }
    int m() const { return m_; }

  private:
    bool is_basic(int c) const {
        for (int r = 0; r < m_; ++r)
            if (basis_[static_cast<size_t>(r)] == c) return true;
        return false;
    }

    Rational reduced_cost(const std::vector<Rational>& cost, int c) const {
        Rational z;
        for (int r = 0; r < m_; ++r)
            z += cost[static_cast<size_t>(basis_[static_cast<size_t>(r)])] *
                 rows_[static_cast<size_t>(r)][static_cast<size_t>(c)];
        return cost[static_cast<size_t>(c)] - z;
    }

    void pivot(int r, int c) {
        auto& prow = rows_[static_cast<size_t>(r)];
        const Rational pv = prow[static_cast<size_t>(c)];
        for (auto& v : prow) v /= pv;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            auto& row = rows_[static_cast<size_t>(i)];
            const Rational f = row[static_cast<size_t>(c)];
            if (f == 0) continue;
            for (size_t j = 0; j < row.size(); ++j) row[j] -= f * prow[j];
        }
        basis_[static_cast<size_t>(r)] = c;
    }

    int nv_, m_;
    std::vector<std::vector<Rational>> rows_;
    std::vector<int> basis_;
};

}  // namespace

LPSolution lp_solve(const LPInstance& instance) {
    Tableau tableau(instance);
    const int nv = tableau.nv(), m = tableau.m();
    std::vector<Rational> phase1(static_cast<size_t>(nv + 2 * m));
    for (int i = 0; i < m; ++i) phase1[static_cast<size_t>(nv + m + i)] = rat(1);
    if (!tableau.minimize(phase1, nv + 2 * m)) throw std::runtime_error("phase-1 unbounded");
    if (tableau.objective(phase1) != 0) throw std::runtime_error("LP infeasible (cannot happen here)");
    tableau.drive_out_artificials();

    std::vector<Rational> phase2(static_cast<size_t>(nv + 2 * m));
    for (int i = 0; i < nv; ++i) phase2[static_cast<size_t>(i)] = rat(1);
    if (!tableau.minimize(phase2, nv + m))
        throw std::runtime_error("Delsarte LP unbounded: internal inconsistency");

    LPSolution solution;
    solution.x = tableau.primal();
    for (const auto& v : solution.x) solution.objective += v;
    solution.bound = solution.objective + 1;
    solution.dual = tableau.dual(phase2);

    // exact certification: primal feasibility, dual signs, strong duality
    for (size_t r = 0; r < instance.rows.size(); ++r) {
        Rational lhs;
        for (int l = 0; l < nv; ++l) lhs += instance.rows[r][static_cast<size_t>(l)] * solution.x[static_cast<size_t>(l)];
        if (!(lhs <= rat(-1))) throw std::logic_error("LP solution violates a constraint");
    }
    for (const auto& v : solution.x)
        if (v < 0) throw std::logic_error("LP solution violates nonnegativity");
    Rational dual_obj;
    for (const auto& y : solution.dual) {
        if (y < 0) throw std::logic_error("dual sign violated");
        dual_obj += y;
    }
    if (dual_obj != solution.objective) throw std::logic_error("strong duality violated");
    for (int l = 0; l < nv; ++l) {
        Rational lhs;
        for (size_t r = 0; r < instance.rows.size(); ++r)
            lhs += solution.dual[r] * -instance.rows[r][static_cast<size_t>(l)];
        if (!(lhs <= rat(1))) throw std::logic_error("dual feasibility violated");
    }
    solution.optimal = true;
    return solution;
}

CompareRecord lp_compare(Space space, long d) {
    CompareRecord record;
    BoundReport refined = refined_bound(space, d);
    record.refined = refined.value;
    record.lp = lp_solve(lp_build(space, d)).bound;
    record.equal = record.refined == record.lp;
    record.certificate = certify(space, d).verdict;
    return record;
}

SqScanResult sq_scan(Space space, std::optional<Rational> s_max) {
    Grid grid(space);
    SqScanResult result;
    Rational limit = s_max.value_or(grid.node(space.n - 1));  // s = 1 - 2/n, d = 1
    for (int i = 0; i <= space.n; ++i) {
        const Rational& s = grid.node(i);
        if (s > limit) break;
        const long d = space.n - i;
        if (d < 1) break;
        ++result.scanned;
        CompareRecord record = lp_compare(space, d);
        if (!record.equal) {
            result.failure_found = true;
            result.s_q = s;
            return result;
        }
        result.s_q = grid.node(i + 1 <= space.n ? i + 1 : i);
    }
    return result;
}

std::string lp_dump(const LPInstance& instance) {
    std::ostringstream out;
    out << "\\ Delsarte LP, q=" << instance.space.q << " n=" << instance.space.n
        << " d=" << instance.d << " (rationals as p/q)\n";
    out << "Minimize\n obj:";
    for (int l = 1; l <= instance.space.n; ++l) out << (l == 1 ? " " : " + ") << "x" << l;
    out << "\nSubject To\n";
    for (size_t r = 0; r < instance.rows.size(); ++r) {
        out << " c" << instance.d + static_cast<long>(r) << ":";
        for (int l = 1; l <= instance.space.n; ++l) {
            const Rational& a = instance.rows[r][static_cast<size_t>(l - 1)];
            if (a == 0) continue;
            out << " " << (a > 0 ? "+" : "-") << " " << to_pq(abs(a)) << " x" << l;
        }
        out << " <= -1\n";
    }
    out << "Bounds\n";
    for (int l = 1; l <= instance.space.n; ++l) out << " x" << l << " >= 0\n";
    out << "End\n";
    return out.str();
}

}  // namespace qbounds
