#include "qbounds/kkt.hpp"

#include <stdexcept>

namespace qbounds {

namespace {

struct Params3 {
    long j;
    Rational e;
    Rational d0;
};

Params3 m3_params(Space space, long d) {
    const long n = space.n, q = space.q;
    const long j = j_of_d(space, d);
    const Int modulus = Int(q) * (j + q - 1);
    Int r = Int(j) * (n - 1);
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), modulus.get_mpz_t());
    if (r == 0) r = modulus;
    Rational e = Rational(r) / Rational(modulus);
    Rational d0 = rat(n) - rat(j) * rat(n - 1) / Rational(modulus);
    return {j, e, d0};
}

}  // namespace

DualWeightParams dual_weight_params(Space space, long d) {
    const long n = space.n, q = space.q;
    const auto [j, e, d0] = m3_params(space, d);
    DualWeightParams p;
    const Rational eq1 = e * q * rat(j + q - 1);
    p.A = -rat(q + j - 2) * eq1 * eq1 +
          rat(n - 1) * rat(q - 1) * rat(j + q) * (rat(n) * rat(q - 1) - rat(j) * rat(q + j - 2)) +
          eq1 * (rat(q * q + j * q - q - 2 * j) * rat(q + j - 2) + rat(2 * n) * rat(q - 1));
    p.B = rat(n - 2 + j) * rat(q - 1) + rat(j) * rat(j - 1) + eq1;
    p.C = rat(n - 1) * rat(q - 1) * rat(j + q) + eq1;
    const Rational half = rat(n - 1) * rat(q - 1) + (rat(2) * e - 1) * rat(j + q - 1) * rat(q, 2);
    p.D = half * half + rat(j + q - 1) * rat(j + q - 1) * (rat(n - 1) * rat(q - 1) - rat(q * q, 4));
    p.E = rat(j + q - 1) * rat(j + q - 1) * rat(j + q - 1) * (rat(n - 1) * rat(q - 2) + rat(n - j));
    return p;
}

Weights3 weights3_closed(Space space, long d) {
    const long n = space.n, q = space.q;
    const auto [j, e, d0] = m3_params(space, d);
    const DualWeightParams p = dual_weight_params(space, d);
    const Rational shift = rat(q) * rat(j + q - 1);
    if (p.B == 0 || p.A == 0 || p.B + shift == 0)
        throw std::domain_error("degenerate weight system (n = q = 2, e = j = 0 family)");
    Weights3 w;
    w.d = d;
    const Rational b_rat = d0 + e;
    if (!is_integer(b_rat)) throw std::logic_error("d0 + e must be integral");
    w.b = b_rat.get_num().get_si();
    w.mu_d = rat(n) * rat(q - 1) * p.C * p.D * (p.C + shift) / (p.A * p.B * (p.B + shift));
    w.mu_b_minus_1 = e * rat(n) * rat(q - 1) * p.E * (p.C + shift) / (p.A * p.B);
    w.mu_b = (rat(1) - e) * rat(n) * rat(q - 1) * p.C * p.E / (p.A * (p.B + shift));
    return w;
}

std::map<long, Rational> weights_solve(Space space, const std::vector<long>& roots, int m) {
    if (static_cast<int>(roots.size()) != m)
        throw std::invalid_argument("weights_solve needs |roots| = m");
    KrawtchoukTable table(space);
    // rows l = 1..m of sum_i mu_i K_l(i)/r_l = -1
    std::vector<std::vector<Rational>> a(static_cast<size_t>(m),
                                         std::vector<Rational>(static_cast<size_t>(m) + 1));
    for (int l = 1; l <= m; ++l) {
        for (int c = 0; c < m; ++c)
            a[l - 1][static_cast<size_t>(c)] = table.k(l, rat(roots[static_cast<size_t>(c)])) / table.r(l);
        a[l - 1][static_cast<size_t>(m)] = rat(-1);
    }
    for (int col = 0; col < m; ++col) {
        int pivot = -1;
        for (int row = col; row < m; ++row)
            if (a[row][static_cast<size_t>(col)] != 0) {
                pivot = row;
                break;
            }
        if (pivot < 0) throw std::domain_error("singular dual weight system");
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
    std::map<long, Rational> mu;
    for (int c = 0; c < m; ++c) mu[roots[static_cast<size_t>(c)]] = a[static_cast<size_t>(c)][static_cast<size_t>(m)];
    return mu;
}

std::vector<Rational> lambdas(Space space, const std::map<long, Rational>& mu) {
    KrawtchoukTable table(space);
    std::vector<Rational> out;
    out.reserve(static_cast<size_t>(space.n));
    for (int l = 1; l <= space.n; ++l) {
        Rational v = 1;
        for (const auto& [i, m] : mu) v += m * table.k(l, rat(i)) / table.r(l);
        out.push_back(v);
    }
    return out;
}

Certificate certify(Space space, long d) {
    Certificate cert;
    BoundReport report = refined_bound(space, d);
    if (report.fell_back_to_levenshtein || !report.polynomial ||
        report.polynomial->verdict != Feasibility::feasible) {
        cert.verdict = Verdict::inconclusive;
        cert.diagnostic = "refined polynomial infeasible; KKT bookkeeping unavailable";
        return cert;
    }
    const ImprovedPolynomial& ip = *report.polynomial;
    const int m = ip.poly.degree();
    for (int i = 0; i <= m; ++i) {
        if (!(ip.expansion[static_cast<size_t>(i)] > 0)) {
            cert.verdict = Verdict::inconclusive;
            cert.diagnostic = "zero expansion coefficient f_" + std::to_string(i) +
                              "; complementary slackness cannot pin the lambdas";
            return cert;
        }
    }
    if (static_cast<int>(ip.root_distances.size()) != m) {
        cert.verdict = Verdict::inconclusive;
        cert.diagnostic = "polynomial does not have m distinct integer-distance roots";
        return cert;
    }
    cert.mu = weights_solve(space, ip.root_distances, m);
    for (const auto& [dist, weight] : cert.mu) {
        if (weight < 0) {
            cert.verdict = Verdict::not_optimal;
            cert.witness = dist;
        }
    }
    cert.lambda = lambdas(space, cert.mu);
    for (int l = 1; l <= m; ++l) {
        if (cert.lambda[static_cast<size_t>(l - 1)] != 0)
            throw std::logic_error("complementary slackness violated for l <= m");
    }
    if (cert.verdict != Verdict::not_optimal) {
        cert.verdict = Verdict::lp_optimal;
        for (int l = m + 1; l <= space.n; ++l) {
            if (cert.lambda[static_cast<size_t>(l - 1)] < 0) {
                cert.verdict = Verdict::not_optimal;
                cert.witness = l;
                break;
            }
        }
    }
    return cert;
}

}  // namespace qbounds
