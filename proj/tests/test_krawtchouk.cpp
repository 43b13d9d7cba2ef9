#include "doctest.h"
#include "qbounds/krawtchouk.hpp"
#include "qbounds/levenshtein.hpp"

using namespace qbounds;

TEST_CASE("grid") {
    Grid grid(Space(12, 2));
    CHECK(grid.node_count() == 13);
    CHECK(grid.node(0) == rat(-1));
    CHECK(grid.node(12) == rat(1));
    CHECK(grid.t_of_d(rat(5)) == rat(1, 6));
    CHECK(grid.d_of_t(rat(1, 6)) == rat(5));
    CHECK(grid.index_of(rat(1, 6)).value() == 7);
    CHECK_FALSE(grid.index_of(rat(1, 5)).has_value());
}

TEST_CASE("k_eval") {
    KrawtchoukTable t11(Space(11, 4));
    CHECK(t11.k(0, rat(7)) == 1);

    KrawtchoukTable t12(Space(12, 2));
    CHECK(t12.k(1, rat(5)) == 2);

    // K_2^{(11,4)}(7) against the hand-expanded binomial sum 9*6 - 3*28 + 21
    CHECK(t11.k(2, rat(7)) == -9);
    CHECK(k_eval_sum(Space(11, 4), 2, rat(7)) == -9);
}

TEST_CASE("recurrence equals binomial sum") {
    for (int q : {2, 3, 4, 5}) {
        for (int n : {6, 9, 12}) {
            KrawtchoukTable table(Space(n, q));
            for (int i = 0; i <= n; ++i)
                for (int z = 0; z <= n; ++z)
                    CHECK(table.k(i, rat(z)) == k_eval_sum(Space(n, q), i, rat(z)));
        }
    }
}

TEST_CASE("q_eval") {
    KrawtchoukTable t12(Space(12, 2));
    for (int i : {0, 1, 2, 5, 12}) CHECK(q_eval(t12, i, rat(1)) == 1);
    CHECK(q_eval(t12, 1, rat(1, 6)) == rat(1, 6));  // Q_1 = t for q = 2

    KrawtchoukTable t11(Space(11, 4));
    CHECK(q_eval(t11, 2, rat(-3, 11)) == rat(-1, 55));
    CHECK_THROWS(q_eval(t11, 12, rat(0)));
}

TEST_CASE("adjacent_eval") {
    // (0,1) system: K_1^{(10,4)}(7) / (C(10,1) * 3) = 2/30
    CHECK(adjacent_eval(Space(11, 4), AdjacentKind::zero_one, 1, rat(-3, 11)) == rat(1, 15));

    // degree-0 normalization
    for (int q : {2, 3, 5}) {
        CHECK(adjacent_eval(Space(9, q), AdjacentKind::one_one, 0, rat(1, 3)) == 1);
        CHECK(adjacent_eval(Space(9, q), AdjacentKind::one_one, 0, rat(-2, 3)) == 1);
    }

    // all adjacent systems are normalized to 1 at t = 1
    for (auto kind : {AdjacentKind::one_zero, AdjacentKind::one_one, AdjacentKind::zero_one}) {
        for (int i : {0, 1, 2, 3, 4})
            CHECK(adjacent_eval(Space(10, 3), kind, i, rat(1)) == 1);
    }
}

TEST_CASE("adjacent_poly matches adjacent_eval") {
    for (auto kind : {AdjacentKind::plain, AdjacentKind::one_zero, AdjacentKind::one_one,
                      AdjacentKind::zero_one}) {
        for (int i : {0, 1, 2, 3}) {
            const Poly p = adjacent_poly(Space(9, 3), kind, i);
            for (long num = -9; num <= 9; num += 3)
                CHECK(p.eval(rat(num, 9)) == adjacent_eval(Space(9, 3), kind, i, rat(num, 9)));
        }
    }
}

TEST_CASE("expand") {
    const Space space(11, 4);
    // the worked quaternary example: (t+9/11)(t+7/11)(t+3/11)
    const Poly p = Poly::from_roots(std::vector<Rational>{rat(-9, 11), rat(-7, 11), rat(-3, 11)});
    const Expansion f = expand(space, p);
    REQUIRE(f.coeffs.size() == 4);
    CHECK(f[0] == rat(63, 5324));
    CHECK(f[1] == rat(117, 484));
    CHECK(f[2] == rat(45, 44));
    CHECK(f[3] == rat(1215, 484));

    // basis element reproduces itself
    const Expansion basis = expand(space, normalized_kraw_poly(space, 2));
    CHECK(basis[0] == 0);
    CHECK(basis[1] == 0);
    CHECK(basis[2] == 1);

    const Expansion constant = expand(space, Poly::constant(rat(1)));
    CHECK(constant[0] == 1);
}

TEST_CASE("expand equals orthogonality-sum oracle") {
    for (int q : {2, 3, 4}) {
        const Space space(10, q);
        const Poly p = Poly::from_roots(std::vector<Rational>{rat(-3, 5), rat(-1, 5), rat(2, 5)}) *
                       Poly::linear_root(rat(4, 5));
        const Expansion a = expand(space, p);
        const Expansion b = expand_by_orthogonality(space, p);
        REQUIRE(a.coeffs.size() == b.coeffs.size());
        for (size_t i = 0; i < a.coeffs.size(); ++i) CHECK(a[i] == b[i]);
    }
}

TEST_CASE("expansion reconstructs the polynomial at all grid nodes") {
    const Space space(9, 3);
    Grid grid(space);
    KrawtchoukTable table(space);
    const Poly p = Poly::from_roots(std::vector<Rational>{rat(-7, 9), rat(-1, 3), rat(1, 9)});
    const Expansion f = expand(space, p);
    for (int z = 0; z <= space.n; ++z) {
        Rational sum;
        for (int i = 0; i <= f.degree(); ++i) sum += f[static_cast<size_t>(i)] * q_eval(table, i, grid.node(z));
        CHECK(sum == p.eval(grid.node(z)));
    }
}

TEST_CASE("reduce_mod_grid") {
    const Space space(4, 2);
    Grid grid(space);
    const Poly low = Poly::from_roots(std::vector<Rational>{rat(0), rat(1, 2)});
    CHECK(reduce_mod_grid(space, low) == low);

    CHECK(reduce_mod_grid(space, grid_annihilator(space)).is_zero());

    // t^5 agrees with its remainder at all five nodes
    const Poly t5(std::vector<Rational>{rat(0), rat(0), rat(0), rat(0), rat(0), rat(1)});
    const Poly r = reduce_mod_grid(space, t5);
    CHECK(r.degree() <= 4);
    for (int i = 0; i <= 4; ++i) CHECK(r.eval(grid.node(i)) == t5.eval(grid.node(i)));
}

TEST_CASE("orthogonality exact for n <= 12") {
    for (int q : {2, 3, 4, 5}) {
        for (int n : {8, 12}) {
            const Space space(n, q);
            KrawtchoukTable table(space);
            const Rational qn = Rational(int_pow(Int(q), static_cast<unsigned long>(n)));
            for (int i = 0; i <= n; ++i) {
                for (int j = i; j <= n; ++j) {
                    Rational sum;
                    for (int z = 0; z <= n; ++z) {
                        const Rational w =
                            Rational(binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(z)) *
                                     int_pow(Int(q - 1), static_cast<unsigned long>(z)));
                        sum += w * table.k(i, rat(z)) * table.k(j, rat(z));
                    }
                    CHECK(sum == (i == j ? qn * table.r(i) : Rational(0)));
                }
            }
        }
    }
}

TEST_CASE("adjacent greatest zeros interlace") {
    // t_{k-1}^{1,1} < t_k^{1,0} < t_k^{1,1}, certified through disjoint brackets
    auto disjoint_below = [](const Poly& pa, RootBracket a, const Poly& pb, RootBracket b) {
        Rational w = rat(1, 1024);
        for (int round = 0; round < 40 && !(a.hi < b.lo); ++round) {
            a = refine_bracket(pa, a, w);
            b = refine_bracket(pb, b, w);
            w /= 16;
        }
        return a.hi < b.lo || (a.exact() && b.exact() && a.lo < b.lo);
    };
    for (int q : {2, 3, 4, 5}) {
        for (int n : {10, 20, 30}) {
            const Space space(n, q);
            for (int k = 1; k <= 6; ++k) {
                const Poly p11prev = k >= 2 ? adjacent_poly(space, AdjacentKind::one_one, k - 1) : Poly{};
                const Poly p10 = adjacent_poly(space, AdjacentKind::one_zero, k);
                const Poly p11 = adjacent_poly(space, AdjacentKind::one_one, k);
                RootBracket prev11 = k >= 2 ? greatest_root(p11prev, rat(1)) : RootBracket{rat(-1), rat(-1), 1};
                RootBracket t10 = greatest_root(p10, rat(1));
                RootBracket t11 = greatest_root(p11, rat(1));
                CHECK(disjoint_below(k >= 2 ? p11prev : p10, prev11, p10, t10));
                CHECK(disjoint_below(p10, t10, p11, t11));
            }
        }
    }
}
