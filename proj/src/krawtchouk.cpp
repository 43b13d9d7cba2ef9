#include "qbounds/krawtchouk.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>

namespace qbounds {

Grid::Grid(Space space) : space_(space) {
    nodes_.reserve(static_cast<size_t>(space_.n) + 1);
    for (int i = 0; i <= space_.n; ++i) nodes_.push_back(rat(-1) + rat(2 * i, space_.n));
}

Rational Grid::t_of_d(const Rational& d) const { return rat(1) - rat(2) * d / rat(space_.n); }

Rational Grid::d_of_t(const Rational& t) const { return rat(space_.n) * (rat(1) - t) / rat(2); }

std::optional<int> Grid::index_of(const Rational& t) const {
    Rational idx = (t + 1) * rat(space_.n) / rat(2);
    if (!is_integer(idx)) return std::nullopt;
    long i = idx.get_num().get_si();
    if (i < 0 || i > space_.n) return std::nullopt;
    return static_cast<int>(i);
}

namespace {

// One recurrence step: K_{i+1}(d) from K_i, K_{i-1} in space (n, q).
Rational kraw_step(int n, int q, int i, const Rational& d, const Rational& ki, const Rational& kim1) {
    Rational a = rat(i + (q - 1) * (n - i)) - rat(q) * d;
    return (a * ki - rat((q - 1) * (n - i + 1)) * kim1) / rat(i + 1);
}

Rational kraw_value(int n, int q, int i, const Rational& d) {
    if (i == 0) return rat(1);
    Rational km1 = rat(1);
    Rational kc = rat(n * (q - 1)) - rat(q) * d;
    for (int ii = 1; ii < i; ++ii) {
        Rational kn = kraw_step(n, q, ii, d, kc, km1);
        km1 = kc;
        kc = kn;
    }
    return kc;
}

}  // namespace

Rational KrawtchoukTable::k(int i, const Rational& d) const {
    if (i < 0) throw std::invalid_argument("negative Krawtchouk degree");
    const int n = space_.n, q = space_.q;
    if (is_integer(d) && d >= 0 && d <= n) {
        const size_t di = static_cast<size_t>(d.get_num().get_si());
        {
            std::shared_lock lock(mutex_);
            if (di < k_int_cache_.size() && static_cast<size_t>(i) < k_int_cache_[di].size())
                return k_int_cache_[di][static_cast<size_t>(i)];
        }
        std::unique_lock lock(mutex_);
        if (k_int_cache_.size() <= di) k_int_cache_.resize(static_cast<size_t>(n) + 1);
        auto& col = k_int_cache_[di];
        if (col.empty()) col.push_back(rat(1));
        if (col.size() == 1 && i >= 1) col.push_back(rat(n * (q - 1)) - rat(q) * d);
        while (static_cast<int>(col.size()) <= i) {
            const int ii = static_cast<int>(col.size()) - 1;
            col.push_back(kraw_step(n, q, ii, d, col[col.size() - 1], col[col.size() - 2]));
        }
        return col[static_cast<size_t>(i)];
    }
    return kraw_value(n, q, i, d);
}

Rational KrawtchoukTable::r(int i) const {
    if (i < 0 || i > space_.n) throw std::invalid_argument("r_i needs 0 <= i <= n");
    {
        std::shared_lock lock(mutex_);
        if (static_cast<size_t>(i) < r_cache_.size()) return r_cache_[static_cast<size_t>(i)];
    }
    std::unique_lock lock(mutex_);
    while (static_cast<int>(r_cache_.size()) <= i) {
        const int k = static_cast<int>(r_cache_.size());
        r_cache_.push_back(Rational(int_pow(Int(space_.q - 1), static_cast<unsigned long>(k)) *
                                    binomial(static_cast<unsigned long>(space_.n), static_cast<unsigned long>(k))));
    }
    return r_cache_[static_cast<size_t>(i)];
}

Rational k_eval(const KrawtchoukTable& table, int i, const Rational& d) { return table.k(i, d); }

Rational k_eval_sum(Space space, int i, const Rational& d) {
    Rational total;
    for (int j = 0; j <= i; ++j) {
        // generalized binomials C(d, j), C(n - d, i - j)
        Rational cd = rat(1), cnd = rat(1);
        for (int u = 0; u < j; ++u) cd *= (d - u);
        for (int u = 1; u <= j; ++u) cd /= rat(u);
        for (int u = 0; u < i - j; ++u) cnd *= (rat(space.n) - d - u);
        for (int u = 1; u <= i - j; ++u) cnd /= rat(u);
        Rational term = cd * cnd * Rational(int_pow(Int(space.q - 1), static_cast<unsigned long>(i - j)));
        total += (j % 2 == 0) ? term : -term;
    }
    return total;
}

Rational q_eval(const KrawtchoukTable& table, int i, const Rational& t) {
    if (i > table.space().n) throw std::invalid_argument("normalized degree beyond codelength");
    const Rational d = rat(table.space().n) * (rat(1) - t) / rat(2);
    return table.k(i, d) / table.r(i);
}

namespace {

// K_i^{(n_red, q)}(n_full(1-t)/2 - shift), as a dense polynomial in t.
Poly kraw_poly_shifted(int n_red, int q, int i, int shift, int n_full) {
    const Rational half_n = rat(n_full, 2);
    // q*d = q*n/2 - q*shift - (q*n/2) t
    Poly qd(std::vector<Rational>{rat(q) * half_n - rat(q * shift), -rat(q) * half_n});
    Poly k0 = Poly::constant(rat(1));
    if (i == 0) return k0;
    Poly k1 = Poly::constant(rat(n_red * (q - 1))) - qd;
    for (int ii = 1; ii < i; ++ii) {
        Poly lin = Poly::constant(rat(ii + (q - 1) * (n_red - ii))) - qd;
        Poly kn = (lin * k1 - k0 * rat((q - 1) * (n_red - ii + 1))) * rat(1, ii + 1);
        k0 = k1;
        k1 = kn;
    }
    return k1;
}

Rational adjacent_denominator(Space space, AdjacentKind kind, int i) {
    const int n = space.n, q = space.q;
    switch (kind) {
        case AdjacentKind::plain:
            return Rational(int_pow(Int(q - 1), static_cast<unsigned long>(i)) *
                            binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(i)));
        case AdjacentKind::one_zero: {
            Int s = 0;
            for (int j = 0; j <= i; ++j)
                s += binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(j)) *
                     int_pow(Int(q - 1), static_cast<unsigned long>(j));
            return Rational(s);
        }
        case AdjacentKind::one_one: {
            Int s = 0;
            for (int j = 0; j <= i; ++j)
                s += binomial(static_cast<unsigned long>(n - 1), static_cast<unsigned long>(j)) *
                     int_pow(Int(q - 1), static_cast<unsigned long>(j));
            return Rational(s);
        }
        case AdjacentKind::zero_one:
            return Rational(int_pow(Int(q - 1), static_cast<unsigned long>(i)) *
                            binomial(static_cast<unsigned long>(n - 1), static_cast<unsigned long>(i)));
    }
    throw std::logic_error("unreachable");
}

void check_adjacent_args(Space space, AdjacentKind kind, int i) {
    if (i < 0) throw std::invalid_argument("negative adjacent degree");
    const int min_n = (kind == AdjacentKind::one_one) ? 3 : 2;
    if (space.n < min_n) throw std::invalid_argument("space too small for adjacent system");
}

}  // namespace

Rational adjacent_eval(Space space, AdjacentKind kind, int i, const Rational& t) {
    check_adjacent_args(space, kind, i);
    const int n = space.n, q = space.q;
    const Rational d = rat(n) * (rat(1) - t) / rat(2);
    Rational num;
    switch (kind) {
        case AdjacentKind::plain: num = kraw_value(n, q, i, d); break;
        case AdjacentKind::one_zero: num = kraw_value(n - 1, q, i, d - 1); break;
        case AdjacentKind::one_one: num = kraw_value(n - 2, q, i, d - 1); break;
        case AdjacentKind::zero_one: num = kraw_value(n - 1, q, i, d); break;
    }
    return num / adjacent_denominator(space, kind, i);
}

Poly adjacent_poly(Space space, AdjacentKind kind, int i) {
    check_adjacent_args(space, kind, i);
    static std::map<std::tuple<int, int, int, int>, Poly> cache;
    static std::shared_mutex cache_mutex;
    const auto key = std::make_tuple(space.n, space.q, static_cast<int>(kind), i);
    {
        std::shared_lock lock(cache_mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const int n = space.n, q = space.q;
    Poly base;
    switch (kind) {
        case AdjacentKind::plain: base = kraw_poly_shifted(n, q, i, 0, n); break;
        case AdjacentKind::one_zero: base = kraw_poly_shifted(n - 1, q, i, 1, n); break;
        case AdjacentKind::one_one: base = kraw_poly_shifted(n - 2, q, i, 1, n); break;
        case AdjacentKind::zero_one: base = kraw_poly_shifted(n - 1, q, i, 0, n); break;
    }
    Poly out = base * (rat(1) / adjacent_denominator(space, kind, i));
    std::unique_lock lock(cache_mutex);
    cache.emplace(key, out);
    return out;
}

Poly kraw_poly(Space space, int i) { return kraw_poly_shifted(space.n, space.q, i, 0, space.n); }

Poly normalized_kraw_poly(Space space, int i) { return adjacent_poly(space, AdjacentKind::plain, i); }

Expansion expand(Space space, const Poly& p) {
    const int m = p.degree();
    if (m > space.n) throw std::invalid_argument("expand needs deg(p) <= n; reduce mod the grid first");
    if (m < 0) return Expansion{{}};
    std::vector<Rational> f(static_cast<size_t>(m) + 1);
    Poly rem = p;
    for (int i = m; i >= 0; --i) {
        Poly qi = normalized_kraw_poly(space, i);
        Rational c = rem.coeff(i) / qi.coeff(i);
        f[static_cast<size_t>(i)] = c;
        if (c != 0) rem = rem - qi * c;
    }
    if (!rem.is_zero()) throw std::logic_error("triangular expansion left a remainder");
    return Expansion{std::move(f)};
}

Expansion expand_by_orthogonality(Space space, const Poly& p) {
    const int n = space.n, q = space.q, m = p.degree();
    if (m > n) throw std::invalid_argument("expand needs deg(p) <= n");
    KrawtchoukTable table(space);
    const Rational qn = Rational(int_pow(Int(q), static_cast<unsigned long>(n)));
    std::vector<Rational> f(static_cast<size_t>(std::max(m, 0)) + 1);
    for (int i = 0; i <= m; ++i) {
        Rational total;
        for (int z = 0; z <= n; ++z) {
            Rational w = Rational(binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(z)) *
                                  int_pow(Int(q - 1), static_cast<unsigned long>(z)));
            total += w * p.eval(rat(n - 2 * z, n)) * table.k(i, rat(z));
        }
        f[static_cast<size_t>(i)] = total / qn;
    }
    return Expansion{std::move(f)};
}

Poly grid_annihilator(Space space) {
    return Poly::from_roots(shared_grid(space).nodes());
}

const Grid& shared_grid(Space space) {
    static std::map<std::pair<int, int>, std::unique_ptr<Grid>> cache;
    static std::shared_mutex mutex;
    const auto key = std::make_pair(space.n, space.q);
    {
        std::shared_lock lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return *it->second;
    }
    auto grid = std::make_unique<Grid>(space);
    std::unique_lock lock(mutex);
    auto [it, inserted] = cache.emplace(key, std::move(grid));
    return *it->second;
}

Poly reduce_mod_grid(Space space, const Poly& p) {
    if (p.degree() <= space.n) return p;
    return Poly::divmod(p, grid_annihilator(space)).second;
}

}  // namespace qbounds
