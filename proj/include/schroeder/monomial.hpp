#ifndef SCHROEDER_MONOMIAL_HPP
#define SCHROEDER_MONOMIAL_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <schroeder/errors.hpp>

namespace schroeder
{

// Exponent vector of a monomial z^alpha in n variables.
class MultiIndex
{
public:
    using exponent_type = std::uint32_t;

    MultiIndex() = default;
    explicit MultiIndex(std::size_t n) : exps_(n, 0) {}
    explicit MultiIndex(std::vector<exponent_type> exps) : exps_(std::move(exps))
    {
        degree_ = std::accumulate(exps_.begin(), exps_.end(), 0U);
    }
    MultiIndex(std::initializer_list<exponent_type> exps) : MultiIndex(std::vector<exponent_type>(exps)) {}

    static MultiIndex unit(std::size_t n, std::size_t i)
    {
        MultiIndex m(n);
        m.exps_[i] = 1;
        m.degree_ = 1;
        return m;
    }

    std::size_t size() const
    {
        return exps_.size();
    }
    unsigned degree() const
    {
        return degree_;
    }
    exponent_type operator[](std::size_t i) const
    {
        return exps_[i];
    }
    const std::vector<exponent_type> &exponents() const
    {
        return exps_;
    }

    MultiIndex operator+(const MultiIndex &o) const
    {
        if (o.size() != size()) {
            throw dimension_mismatch("multi-index dimension mismatch");
        }
        MultiIndex r(*this);
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            r.exps_[i] += o.exps_[i];
        }
        r.degree_ += o.degree_;
        return r;
    }

    // this - e_i; requires exps_[i] > 0.
    MultiIndex decremented(std::size_t i) const
    {
        MultiIndex r(*this);
        --r.exps_[i];
        --r.degree_;
        return r;
    }

    friend bool operator==(const MultiIndex &a, const MultiIndex &b)
    {
        return a.exps_ == b.exps_;
    }

    std::string to_string() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            if (i != 0) {
                s += ",";
            }
            s += std::to_string(exps_[i]);
        }
        return s + ")";
    }

    // Human-readable monomial, e.g. "z1^2*z3"; the constant monomial prints as "1".
    std::string monomial_string() const
    {
        std::string s;
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            if (exps_[i] == 0) {
                continue;
            }
            if (!s.empty()) {
                s += "*";
            }
            s += "z" + std::to_string(i + 1);
            if (exps_[i] > 1) {
                s += "^" + std::to_string(exps_[i]);
            }
        }
        return s.empty() ? "1" : s;
    }

    friend std::ostream &operator<<(std::ostream &os, const MultiIndex &m)
    {
        return os << m.to_string();
    }

private:
    std::vector<exponent_type> exps_;
    unsigned degree_ = 0;
};

// Graded order: lower total degree first; within a degree, the first
// differing exponent decides and the LARGER exponent comes first, giving
// z1, z2, z1^2, z1*z2, z2^2, ...
inline std::strong_ordering compare_monomials(const MultiIndex &a, const MultiIndex &b)
{
    if (a.size() != b.size()) {
        throw dimension_mismatch("cannot compare monomials of different dimension");
    }
    if (a.degree() != b.degree()) {
        return a.degree() <=> b.degree();
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) {
            return b[i] <=> a[i];
        }
    }
    return std::strong_ordering::equal;
}

struct MonomialLess {
    bool operator()(const MultiIndex &a, const MultiIndex &b) const
    {
        return compare_monomials(a, b) < 0;
    }
};

namespace detail
{

inline void append_degree(std::size_t n, unsigned d, std::vector<MultiIndex::exponent_type> &cur,
                          std::vector<MultiIndex> &out)
{
    const std::size_t pos = cur.size();
    if (pos + 1 == n) {
        cur.push_back(d);
        out.emplace_back(cur);
        cur.pop_back();
        return;
    }
    for (unsigned e = d + 1; e-- > 0;) {
        cur.push_back(e);
        append_degree(n, d - e, cur, out);
        cur.pop_back();
    }
}

} // namespace detail

// All monomials of exactly degree d, in graded order.
inline std::vector<MultiIndex> monomials_of_degree(std::size_t n, unsigned d)
{
    std::vector<MultiIndex> out;
    if (n == 0) {
        return out;
    }
    std::vector<MultiIndex::exponent_type> cur;
    cur.reserve(n);
    detail::append_degree(n, d, cur, out);
    return out;
}

// Monomials with 1 <= |alpha| <= max_degree in graded order. The constant
// monomial is omitted: maps fixing the origin never touch it.
inline std::vector<MultiIndex> enumerate_monomials(std::size_t n, unsigned max_degree)
{
    std::vector<MultiIndex> out;
    for (unsigned d = 1; d <= max_degree; ++d) {
        auto slice = monomials_of_degree(n, d);
        out.insert(out.end(), std::make_move_iterator(slice.begin()), std::make_move_iterator(slice.end()));
    }
    return out;
}

// C(n + K, n) - 1, the number of nonconstant monomials of degree <= K.
inline std::size_t monomial_count(std::size_t n, unsigned max_degree)
{
    // C(n+K, n) computed incrementally; every intermediate is an exact binomial.
    std::size_t c = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        c = c * (max_degree + i) / i;
    }
    return c - 1;
}

// Ordered basis of nonconstant monomials up to a degree, with position lookup.
class MonomialBasis
{
public:
    MonomialBasis() = default;
    MonomialBasis(std::size_t n, unsigned max_degree)
        : n_(n), max_degree_(max_degree), monomials_(enumerate_monomials(n, max_degree))
    {
        for (std::size_t i = 0; i < monomials_.size(); ++i) {
            index_.emplace(monomials_[i], i);
        }
    }

    std::size_t dimension() const
    {
        return n_;
    }
    unsigned max_degree() const
    {
        return max_degree_;
    }
    std::size_t size() const
    {
        return monomials_.size();
    }
    const MultiIndex &operator[](std::size_t i) const
    {
        return monomials_[i];
    }
    const std::vector<MultiIndex> &monomials() const
    {
        return monomials_;
    }

    // Zero-based position, or size() when the monomial is not in the basis.
    std::size_t position(const MultiIndex &m) const
    {
        const auto it = index_.find(m);
        return it == index_.end() ? monomials_.size() : it->second;
    }

private:
    std::size_t n_ = 0;
    unsigned max_degree_ = 0;
    std::vector<MultiIndex> monomials_;
    std::map<MultiIndex, std::size_t, MonomialLess> index_;
};

} // namespace schroeder

#endif
