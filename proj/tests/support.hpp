#ifndef SCHROEDER_TEST_SUPPORT_HPP
#define SCHROEDER_TEST_SUPPORT_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <schroeder/schroeder.hpp>

namespace testing_support
{

using namespace schroeder;

inline Scalar q(long num, long den = 1)
{
    return Scalar::frac(num, den);
}

inline Jet jet(std::size_t n, unsigned truncation, std::initializer_list<std::pair<MultiIndex, Scalar>> terms)
{
    Jet f(n, truncation);
    for (const auto &[m, c] : terms) {
        f.set(m, c);
    }
    return f;
}

// phi = (z1/2, z2/4 + z1^2/16)
inline PolyMap s_ex0(unsigned truncation = 2)
{
    return PolyMap({jet(2, truncation, {{{1, 0}, q(1, 2)}}),
                    jet(2, truncation, {{{0, 1}, q(1, 4)}, {{2, 0}, q(1, 16)}})});
}

// phi = (z1/2, z2/4)
inline PolyMap r_ex2(unsigned truncation = 2)
{
    return PolyMap({jet(2, truncation, {{{1, 0}, q(1, 2)}}), jet(2, truncation, {{{0, 1}, q(1, 4)}})});
}

// phi = (z1/2, z2/4 + z3/8 + z1^2/8, z3/4, z4/8)
inline PolyMap c_e1(unsigned truncation = 2)
{
    return PolyMap({jet(4, truncation, {{{1, 0, 0, 0}, q(1, 2)}}),
                    jet(4, truncation, {{{0, 1, 0, 0}, q(1, 4)}, {{0, 0, 1, 0}, q(1, 8)}, {{2, 0, 0, 0}, q(1, 8)}}),
                    jet(4, truncation, {{{0, 0, 1, 0}, q(1, 4)}}),
                    jet(4, truncation, {{{0, 0, 0, 1}, q(1, 8)}})});
}

// The solution printed for c_e1: (z1, z2, z3/8 + z1^2/8, z4). It intertwines
// phi with c_e1_jordan_matrix(), not with phi'(0).
inline PolyMap c_e1_solution(unsigned truncation = 2)
{
    return PolyMap({jet(4, truncation, {{{1, 0, 0, 0}, q(1)}}),
                    jet(4, truncation, {{{0, 1, 0, 0}, q(1)}}),
                    jet(4, truncation, {{{0, 0, 1, 0}, q(1, 8)}, {{2, 0, 0, 0}, q(1, 8)}}),
                    jet(4, truncation, {{{0, 0, 0, 1}, q(1)}})});
}

// Upper Jordan form of c_e1's linear part: the 1/8 coupling becomes 1.
inline ExactMatrix c_e1_jordan_matrix()
{
    ExactMatrix m = ExactMatrix::diagonal({q(1, 2), q(1, 4), q(1, 4), q(1, 8)});
    m(1, 2) = q(1);
    return m;
}

// Linear part with transpose [[1/4, 0], [1, 1/4]] (one Jordan block) plus a
// quadratic term.
inline PolyMap jordan_block_map(unsigned truncation = 2)
{
    return PolyMap({jet(2, truncation, {{{1, 0}, q(1, 4)}, {{0, 1}, q(1)}}),
                    jet(2, truncation, {{{0, 1}, q(1, 4)}, {{2, 0}, q(1, 3)}})});
}

// phi(z) = z/2 + z^2/4
inline PolyMap one_variable_map(unsigned truncation = 2)
{
    return PolyMap({jet(1, truncation, {{{1}, q(1, 2)}, {{2}, q(1, 4)}})});
}

// Corner block J_3(1/4) fed into a quadratic 1/2-block through z4*z5: the
// projected kernel is full, yet no solution with invertible derivative exists.
inline PolyMap gained_block_map(unsigned truncation = 2)
{
    return PolyMap({jet(5, truncation, {{{1, 0, 0, 0, 0}, q(1, 4)}, {{0, 1, 0, 0, 0}, q(1)}}),
                    jet(5, truncation, {{{0, 1, 0, 0, 0}, q(1, 4)}, {{0, 0, 1, 0, 0}, q(1)}}),
                    jet(5, truncation, {{{0, 0, 1, 0, 0}, q(1, 4)}, {{0, 0, 0, 1, 1}, q(1)}}),
                    jet(5, truncation, {{{0, 0, 0, 1, 0}, q(1, 2)}, {{0, 0, 0, 0, 1}, q(1)}}),
                    jet(5, truncation, {{{0, 0, 0, 0, 1}, q(1, 2)}})});
}

class Random
{
public:
    explicit Random(std::uint64_t seed) : rng_(seed) {}

    long integer(long lo, long hi)
    {
        return std::uniform_int_distribution<long>(lo, hi)(rng_);
    }
    bool coin(double p = 0.5)
    {
        return std::bernoulli_distribution(p)(rng_);
    }
    template <class T> const T &pick(const std::vector<T> &v)
    {
        return v[static_cast<std::size_t>(integer(0, static_cast<long>(v.size()) - 1))];
    }

    Scalar rational_scalar(long span = 3, long max_den = 4)
    {
        return Scalar::frac(integer(-span, span), integer(1, max_den));
    }
    Scalar gaussian(long span = 2, long max_den = 3)
    {
        return Scalar::frac(integer(-span, span), integer(1, max_den), integer(-span, span), integer(1, max_den));
    }

    // Lower-triangular matrix whose diagonal repeats values from a small pool
    // so that nontrivial Jordan structure shows up.
    ExactMatrix lower_triangular(std::size_t n, double fill = 0.5)
    {
        const std::vector<Scalar> pool{q(1, 2), q(-1, 3), q(2), Scalar::frac(1, 2, 1, 2)};
        const std::size_t distinct = static_cast<std::size_t>(integer(1, 3));
        ExactMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = pool[static_cast<std::size_t>(integer(0, static_cast<long>(distinct) - 1))];
            for (std::size_t j = 0; j < i; ++j) {
                if (coin(fill)) {
                    m(i, j) = coin(0.7) ? Scalar(integer(-2, 2)) : gaussian();
                }
            }
        }
        return m;
    }

    Jet random_jet(std::size_t n, unsigned truncation, unsigned max_degree, double fill = 0.4, bool constant = false)
    {
        Jet f(n, truncation);
        for (unsigned d = constant ? 0 : 1; d <= max_degree; ++d) {
            for (const auto &m : monomials_of_degree(n, d)) {
                if (coin(fill)) {
                    f.set(m, coin(0.8) ? rational_scalar() : gaussian());
                }
            }
        }
        return f;
    }

    // A map fixing 0 with upper-triangular linear part whose diagonal is drawn
    // from eigs; higher terms are random.
    PolyMap triangular_map(std::size_t n, const std::vector<Scalar> &eigs, unsigned max_degree, unsigned truncation,
                           double fill = 0.3)
    {
        std::vector<Jet> comps;
        for (std::size_t j = 0; j < n; ++j) {
            Jet c = random_jet(n, truncation, max_degree, fill);
            for (std::size_t i = 0; i < n; ++i) {
                const MultiIndex e = MultiIndex::unit(n, i);
                if (i == j) {
                    c.set(e, pick(eigs));
                } else if (i < j || !coin(0.5)) {
                    c.set(e, Scalar());
                } else {
                    c.set(e, Scalar(integer(-1, 1)));
                }
            }
            comps.push_back(std::move(c));
        }
        return PolyMap(std::move(comps));
    }

    std::mt19937_64 &engine()
    {
        return rng_;
    }

private:
    std::mt19937_64 rng_;
};

// Dense one-variable polynomial arithmetic on plain coefficient vectors,
// kept separate from Jet so it can serve as an oracle.
using Poly1 = std::vector<rational>;

inline Poly1 poly_mul(const Poly1 &a, const Poly1 &b, std::size_t keep)
{
    Poly1 c(keep + 1, rational(0));
    for (std::size_t i = 0; i < a.size() && i <= keep; ++i) {
        for (std::size_t j = 0; j < b.size() && i + j <= keep; ++j) {
            c[i + j] += a[i] * b[j];
        }
    }
    return c;
}

// Classical Koenigs recursion for sigma o phi = a sigma with sigma'(0) = 1:
// b_m (a - a^m) = sum_{j<m} b_j [z^m] phi^j.
inline Poly1 koenigs_series(const Poly1 &phi, std::size_t degree)
{
    const rational a = phi.at(1);
    std::vector<Poly1> powers{Poly1{rational(1)}};
    for (std::size_t j = 1; j <= degree; ++j) {
        powers.push_back(poly_mul(powers.back(), phi, degree));
    }
    Poly1 b(degree + 1, rational(0));
    b[1] = 1;
    rational am = a;
    for (std::size_t m = 2; m <= degree; ++m) {
        am *= a;
        rational s = 0;
        for (std::size_t j = 1; j < m; ++j) {
            if (m < powers[j].size()) {
                s += b[j] * powers[j][m];
            }
        }
        b[m] = s / (a - am);
    }
    return b;
}

// Exhaustive convolution over all pairs of stored terms.
inline std::map<std::vector<MultiIndex::exponent_type>, Scalar> brute_product(const Jet &f, const Jet &g,
                                                                              unsigned truncation)
{
    std::map<std::vector<MultiIndex::exponent_type>, Scalar> out;
    for (const auto &[a, ca] : f.terms()) {
        for (const auto &[b, cb] : g.terms()) {
            const MultiIndex s = a + b;
            if (s.degree() <= truncation) {
                out[s.exponents()] += ca * cb;
            }
        }
    }
    std::erase_if(out, [](const auto &kv) { return kv.second.is_zero(); });
    return out;
}

inline std::vector<std::size_t> sorted_desc(std::vector<std::size_t> v)
{
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

// Rank of the stacked coefficient vectors of the map's components.
inline std::size_t component_rank(const PolyMap &f)
{
    const MonomialBasis basis(f.dimension(), f.truncation());
    std::vector<Vector> rows;
    for (const auto &c : f.components()) {
        rows.push_back(coefficients_on(c, basis));
    }
    return vector_rank(rows, basis.size());
}

inline bool spans_equal(const std::vector<Jet> &a, const std::vector<Jet> &b)
{
    if (a.empty() || b.empty()) {
        return a.empty() && b.empty();
    }
    const MonomialBasis basis(a.front().dimension(), a.front().truncation());
    std::vector<Vector> ra;
    std::vector<Vector> rb;
    for (const auto &f : a) {
        ra.push_back(coefficients_on(f, basis));
    }
    for (const auto &f : b) {
        rb.push_back(coefficients_on(f, basis));
    }
    std::vector<Vector> both = ra;
    both.insert(both.end(), rb.begin(), rb.end());
    const std::size_t r = vector_rank(both, basis.size());
    return r == vector_rank(ra, basis.size()) && r == vector_rank(rb, basis.size());
}

} // namespace testing_support

#endif
