#include "qbounds/levenshtein.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>

namespace qbounds {

namespace {

// Sturm chains of adjacent polynomials, shared across classify/lev_roots calls.
const SturmChain& adjacent_chain(Space space, AdjacentKind kind, int i) {
    static std::map<std::tuple<int, int, int, int>, std::unique_ptr<SturmChain>> cache;
    static std::shared_mutex mutex;
    const auto key = std::make_tuple(space.n, space.q, static_cast<int>(kind), i);
    {
        std::shared_lock lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return *it->second;
    }
    auto chain = std::make_unique<SturmChain>(adjacent_poly(space, kind, i));
    std::unique_lock lock(mutex);
    auto [it, inserted] = cache.emplace(key, std::move(chain));
    return *it->second;
}

// s < greatest zero of the adjacent polynomial?  Adjacent systems equal 1 at
// t = 1, so every zero lies below 1 and count(s, 1] does the comparison.
bool below_greatest_zero(Space space, AdjacentKind kind, int i, const Rational& s) {
    return adjacent_chain(space, kind, i).count(s, rat(1)) > 0;
}

const RootBracket& greatest_zero_bracket(Space space, AdjacentKind kind, int i) {
    static std::map<std::tuple<int, int, int, int>, RootBracket> cache;
    static std::shared_mutex mutex;
    const auto key = std::make_tuple(space.n, space.q, static_cast<int>(kind), i);
    {
        std::shared_lock lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    RootBracket bracket = greatest_root(adjacent_poly(space, kind, i), rat(1));
    std::unique_lock lock(mutex);
    auto [it, inserted] = cache.emplace(key, bracket);
    return it->second;
}

Rational square_bracket_bound(const Int& value_sq, const Rational& width, bool upper) {
    Rational lo = 0, hi = Rational(value_sq) + 1;
    while (hi - lo > width) {
        Rational mid = (lo + hi) / 2;
        if (mid * mid <= Rational(value_sq))
            lo = mid;
        else
            hi = mid;
    }
    return upper ? hi : lo;
}

}  // namespace

RangeParams::RangeParams(Space sp) : space(sp) {
    const long n = sp.n, q = sp.q;
    s1_sq = Int(q) * q + Int(4) * (q - 1) * (n - 2);
    s2_sq = Int(q) * q + Int(4) * (q - 1) * (n - 3);
}

bool RangeParams::in_j3(long j) const {
    if (j < 0) return false;
    Int v = Int(2 * j + space.q);
    return v * v < s1_sq;
}

bool RangeParams::in_j4(long j) const {
    if (j < 0) return false;
    Int lo = Int(2 * j + space.q);
    if (lo * lo < s1_sq) return false;
    Int hi = Int(2 * j + 2 - space.q);
    if (hi < 0) return true;
    return hi * hi < s2_sq;
}

RootBracket RangeParams::s1_bracket(const Rational& width) const {
    return RootBracket{square_bracket_bound(s1_sq, width, false),
                       square_bracket_bound(s1_sq, width, true), 1};
}

RootBracket RangeParams::s2_bracket(const Rational& width) const {
    return RootBracket{square_bracket_bound(s2_sq, width, false),
                       square_bracket_bound(s2_sq, width, true), 1};
}

long j_of_d(Space space, long d) {
    if (d < 1 || d > space.n) throw std::invalid_argument("distance out of range");
    return static_cast<long>(space.q) * (space.n - 1 - d) - (space.n - 2);
}

Rational alpha0_m3(Space space, long j) {
    return rat(-1) + rat(2) * rat(j) * rat(space.n - 1) /
                         (rat(space.n) * rat(space.q) * rat(j + space.q - 1));
}

Rational alpha1_m4(Space space, long j) {
    if (j == 0) throw std::invalid_argument("alpha1_m4 needs j >= 1");
    return -rat(space.n - 2) * rat(j * (space.q - 2) + 2 * (space.q - 1)) /
           (rat(space.n) * rat(space.q) * rat(j));
}

Frame classify(Space space, const Rational& s) {
    if (s < -1 || s >= 1) throw std::invalid_argument("classify needs s in [-1, 1)");
    const Grid& grid = shared_grid(space);
    Frame frame;
    frame.s_on_grid = grid.contains(s);
    for (int m = 1; m <= 2 * space.n - 1; ++m) {
        const int k = (m + 1) / 2;
        const int eps = (m + 1) % 2;
        const AdjacentKind right_kind = eps == 0 ? AdjacentKind::one_zero : AdjacentKind::one_one;
        if (k == space.n && eps == 0) {
            frame.right_end = RootBracket{rat(1), rat(1), 1};  // sentinel t_n^{1,0} = 1
        } else if (below_greatest_zero(space, right_kind, k, s)) {
            frame.right_end = greatest_zero_bracket(space, right_kind, k);
        } else {
            continue;
        }
        frame.m = m, frame.k = k, frame.eps = eps;
        const AdjacentKind left_kind = eps == 0 ? AdjacentKind::one_one : AdjacentKind::one_zero;
        const int left_deg = k - 1 + eps;
        frame.left_end = left_deg == 0 ? RootBracket{rat(-1), rat(-1), 1}  // t_0^{1,1} = -1
                                       : greatest_zero_bracket(space, left_kind, left_deg);
        return frame;
    }
    throw std::logic_error("interval partition exhausted");
}

Rational lev_bound(const Frame& frame, Space space, const Rational& s) {
    const int k = frame.k, eps = frame.eps;
    const Rational num = adjacent_eval(space, AdjacentKind::one_zero, k - 1 + eps, s);
    const Rational den =
        adjacent_eval(space, eps == 0 ? AdjacentKind::plain : AdjacentKind::zero_one, k, s);
    if (den == 0) throw std::domain_error("interval boundary: denominator system vanishes at s");
    Int total = 0;
    for (int j = 0; j <= k - 1 + eps; ++j)
        total += binomial(static_cast<unsigned long>(space.n), static_cast<unsigned long>(j)) *
                 int_pow(Int(space.q - 1), static_cast<unsigned long>(j));
    return (rat(1) - num / den) * Rational(total);
}

namespace {

LocatedRoot locate_rational_root(const Grid& grid, const Rational& alpha, int multiplicity) {
    LocatedRoot root;
    root.value = alpha;
    root.multiplicity = multiplicity;
    if (auto idx = grid.index_of(alpha)) {
        root.grid_hit = true;
        root.cell_hi = *idx;
        return root;
    }
    int lo = 0, hi = grid.space().n;
    while (lo + 1 < hi) {
        const int mid = (lo + hi) / 2;
        if (grid.node(mid) < alpha)
            lo = mid;
        else
            hi = mid;
    }
    root.cell_hi = hi;
    return root;
}

// The reduced root equation A(t) = [P_k(t)P_{k-1}(s) - P_k(s)P_{k-1}(t)] / (t - s).
Poly reduced_root_equation(Space space, int k, int eps, const Rational& s) {
    const AdjacentKind kind = eps == 0 ? AdjacentKind::one_zero : AdjacentKind::one_one;
    const Poly pk = adjacent_poly(space, kind, k);
    const Poly pk1 = adjacent_poly(space, kind, k - 1);
    const Poly equation = pk * pk1.eval(s) - pk1 * pk.eval(s);
    auto [reduced, remainder] = Poly::divmod(equation, Poly::linear_root(s));
    if (!remainder.is_zero()) throw std::logic_error("s is not a root of the root equation");
    return reduced;
}

// Every interior double root of the frame, isolated into grid cells.
std::vector<LocatedRoot> isolate_interior_roots(Space space, const Grid& grid, const Poly& reduced,
                                                const Rational& s) {
    const int expected = reduced.degree();
    if (expected <= 0) return {};
    if (gcd(reduced, reduced.derivative()).degree() > 0)
        throw std::runtime_error("root multiplicity anomaly in Levenshtein root equation");
    if (expected == 1)
        return {locate_rational_root(grid, -reduced.coeff(0) / reduced.coeff(1), 2)};

    SturmChain chain(reduced);
    const Rational below = -root_magnitude_bound(reduced);
    const int total = chain.count(below, s);
    if (total != expected)
        throw std::runtime_error("interior roots escaped [-1, s]; root count anomaly");

    // Exact sign pass over the nodes; a mismatch against the global count
    // triggers the certified per-cell pass.
    std::vector<LocatedRoot> found;
    std::vector<std::pair<Rational, Rational>> quiet_cells;
    Rational prev = below;
    int prev_sign = sgn(reduced.eval(prev));
    for (int idx = 0;
         idx <= space.n && !(grid.node(idx) > s) && static_cast<int>(found.size()) < total; ++idx) {
        const Rational& node = grid.node(idx);
        const Rational v = reduced.eval(node);
        if (v == 0) {
            LocatedRoot root;
            root.value = node;
            root.multiplicity = 2;
            root.grid_hit = true;
            root.cell_hi = idx;
            found.push_back(root);
            prev = node;
            prev_sign = 0;
            continue;
        }
        const int sign = sgn(v);
        if (prev_sign != 0 && sign != prev_sign) {
            LocatedRoot root;
            root.value = RootBracket{prev, node, 1};
            root.multiplicity = 2;
            root.cell_hi = idx;
            found.push_back(root);
        } else {
            quiet_cells.emplace_back(prev, node);
        }
        prev = node;
        prev_sign = sign;
    }
    if (static_cast<int>(found.size()) < total) {
        for (const auto& [lo, hi] : quiet_cells) {
            const int c = chain.count(lo, hi) - (reduced.eval(hi) == 0 ? 1 : 0);
            for (int r = 0; r < c; ++r) {
                LocatedRoot root;
                root.value = RootBracket{lo, hi, c};
                root.multiplicity = 2;
                root.cell_hi = grid.index_of(hi) ? *grid.index_of(hi) : 0;
                found.push_back(root);
            }
        }
        std::sort(found.begin(), found.end(),
                  [](const LocatedRoot& a, const LocatedRoot& b) { return a.cell_hi < b.cell_hi; });
    }
    if (static_cast<int>(found.size()) != total)
        throw std::runtime_error("failed to isolate all interior roots");
    return found;
}

}  // namespace

RootProfile lev_roots(const Frame& frame, Space space, const Rational& s) {
    const int k = frame.k, eps = frame.eps;
    const Grid& grid = shared_grid(space);
    RootProfile profile;
    profile.s = s;
    profile.eps = eps;

    if (eps == 1) profile.alphas.push_back(locate_rational_root(grid, rat(-1), 1));

    const Rational d = grid.d_of_t(s);
    const bool grid_s = is_integer(d);
    if (grid_s && frame.m == 3) {
        const Rational alpha = alpha0_m3(space, j_of_d(space, d.get_num().get_si()));
        profile.alphas.push_back(locate_rational_root(grid, alpha, 2));
    } else if (grid_s && frame.m == 4) {
        const Rational alpha = alpha1_m4(space, j_of_d(space, d.get_num().get_si()));
        profile.alphas.push_back(locate_rational_root(grid, alpha, 2));
    } else if (k - 1 >= 1) {
        const Poly reduced = reduced_root_equation(space, k, eps, s);
        for (auto& root : isolate_interior_roots(space, grid, reduced, s))
            profile.alphas.push_back(std::move(root));
    }

    LocatedRoot last;
    last.value = s;
    last.multiplicity = 1;
    if (auto idx = grid.index_of(s)) {
        last.grid_hit = true;
        last.cell_hi = *idx;
    }
    profile.alphas.push_back(std::move(last));
    return profile;
}

}  // namespace qbounds
