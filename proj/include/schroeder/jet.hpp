#ifndef SCHROEDER_JET_HPP
#define SCHROEDER_JET_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <schroeder/errors.hpp>
#include <schroeder/monomial.hpp>
#include <schroeder/scalar.hpp>

namespace schroeder
{

// Multivariate power series known through total degree `truncation`.
// Sparse and canonical: no stored zeros, no stored keys above the truncation.
class Jet
{
public:
    using term_map = std::map<MultiIndex, Scalar, MonomialLess>;

    Jet() = default;
    Jet(std::size_t n, unsigned truncation) : n_(n), truncation_(truncation) {}

    static Jet monomial(const MultiIndex &alpha, unsigned truncation, Scalar coeff = Scalar(1))
    {
        Jet j(alpha.size(), truncation);
        j.set(alpha, std::move(coeff));
        return j;
    }
    static Jet variable(std::size_t n, std::size_t i, unsigned truncation)
    {
        return monomial(MultiIndex::unit(n, i), truncation);
    }
    static Jet constant(std::size_t n, unsigned truncation, Scalar c)
    {
        return monomial(MultiIndex(n), truncation, std::move(c));
    }

    std::size_t dimension() const
    {
        return n_;
    }
    unsigned truncation() const
    {
        return truncation_;
    }
    const term_map &terms() const
    {
        return terms_;
    }
    std::size_t term_count() const
    {
        return terms_.size();
    }
    bool is_zero() const
    {
        return terms_.empty();
    }

    Scalar coefficient(const MultiIndex &alpha) const
    {
        check_dim(alpha);
        const auto it = terms_.find(alpha);
        return it == terms_.end() ? Scalar() : it->second;
    }

    // Terms above the truncation are dropped silently; zero removes the term.
    void set(const MultiIndex &alpha, Scalar c)
    {
        check_dim(alpha);
        if (alpha.degree() > truncation_) {
            return;
        }
        if (c.is_zero()) {
            terms_.erase(alpha);
        } else {
            terms_.insert_or_assign(alpha, std::move(c));
        }
    }

    void add_to(const MultiIndex &alpha, const Scalar &c)
    {
        check_dim(alpha);
        if (alpha.degree() > truncation_ || c.is_zero()) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(alpha, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }

    // Lowest degree carrying a nonzero coefficient; truncation()+1 for the zero jet.
    unsigned order() const
    {
        return terms_.empty() ? truncation_ + 1 : terms_.begin()->first.degree();
    }

    unsigned max_degree() const
    {
        unsigned d = 0;
        for (const auto &[m, c] : terms_) {
            d = std::max(d, m.degree());
        }
        return d;
    }

    // Lowering drops terms; raising declares the missing coefficients zero,
    // which is exact only for jets that represent polynomials.
    Jet with_truncation(unsigned k) const
    {
        Jet r(n_, k);
        for (const auto &[m, c] : terms_) {
            if (m.degree() <= k) {
                r.terms_.emplace_hint(r.terms_.end(), m, c);
            }
        }
        return r;
    }

    // Homogeneous part of degree d.
    Jet homogeneous_part(unsigned d) const
    {
        Jet r(n_, truncation_);
        for (const auto &[m, c] : terms_) {
            if (m.degree() == d) {
                r.terms_.emplace_hint(r.terms_.end(), m, c);
            }
        }
        return r;
    }

    Jet &operator+=(const Jet &o)
    {
        combine(o, Scalar(1));
        return *this;
    }
    Jet &operator-=(const Jet &o)
    {
        combine(o, Scalar(-1));
        return *this;
    }
    Jet &operator*=(const Scalar &s)
    {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto &[m, c] : terms_) {
            c *= s;
        }
        return *this;
    }

    // this += s * o, truncated to this jet's truncation.
    void axpy(const Scalar &s, const Jet &o)
    {
        if (o.n_ != n_) {
            throw dimension_mismatch("jet dimension mismatch");
        }
        if (s.is_zero()) {
            return;
        }
        for (const auto &[m, c] : o.terms_) {
            if (m.degree() > truncation_) {
                break;
            }
            add_to(m, s * c);
        }
    }

    friend Jet operator+(Jet a, const Jet &b)
    {
        return a += b;
    }
    friend Jet operator-(Jet a, const Jet &b)
    {
        return a -= b;
    }
    friend Jet operator*(Jet a, const Scalar &s)
    {
        return a *= s;
    }
    friend Jet operator*(const Scalar &s, Jet a)
    {
        return a *= s;
    }
    friend Jet operator-(Jet a)
    {
        return a *= Scalar(-1);
    }

    // Equality compares the truncation as well as the coefficients.
    friend bool operator==(const Jet &a, const Jet &b)
    {
        return a.n_ == b.n_ && a.truncation_ == b.truncation_ && a.terms_ == b.terms_;
    }

    // Coefficient equality through degree k, ignoring truncation bookkeeping.
    bool agrees_through(const Jet &o, unsigned k) const
    {
        return with_truncation(k).terms_ == o.with_truncation(k).terms_;
    }

    std::string to_string() const
    {
        if (terms_.empty()) {
            return "0";
        }
        std::string s;
        for (const auto &[m, c] : terms_) {
            if (!s.empty()) {
                s += " + ";
            }
            s += "(" + c.to_string() + ")";
            if (m.degree() != 0) {
                s += "*" + m.monomial_string();
            }
        }
        return s;
    }

    friend std::ostream &operator<<(std::ostream &os, const Jet &j)
    {
        return os << j.to_string() << " + O(" << j.truncation_ + 1 << ")";
    }

private:
    void check_dim(const MultiIndex &alpha) const
    {
        if (alpha.size() != n_) {
            throw dimension_mismatch("monomial has " + std::to_string(alpha.size()) + " variables, jet has "
                                     + std::to_string(n_));
        }
    }

    void combine(const Jet &o, const Scalar &sign)
    {
        if (o.n_ != n_) {
            throw dimension_mismatch("jet dimension mismatch");
        }
        const unsigned k = std::min(truncation_, o.truncation_);
        if (k < truncation_) {
            *this = with_truncation(k);
        }
        axpy(sign, o);
    }

    std::size_t n_ = 0;
    unsigned truncation_ = 0;
    term_map terms_;
};

// Truncated product; the result is known through the smaller truncation.
inline Jet jet_mul(const Jet &f, const Jet &g)
{
    if (f.dimension() != g.dimension()) {
        throw dimension_mismatch("jet_mul: dimension mismatch");
    }
    const unsigned k = std::min(f.truncation(), g.truncation());
    Jet r(f.dimension(), k);
    for (const auto &[a, ca] : f.terms()) {
        if (a.degree() > k) {
            break;
        }
        for (const auto &[b, cb] : g.terms()) {
            if (a.degree() + b.degree() > k) {
                break;
            }
            r.add_to(a + b, ca * cb);
        }
    }
    return r;
}

inline Jet operator*(const Jet &f, const Jet &g)
{
    return jet_mul(f, g);
}

} // namespace schroeder

#endif
