#ifndef SCHROEDER_POLY_MAP_HPP
#define SCHROEDER_POLY_MAP_HPP

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <schroeder/errors.hpp>
#include <schroeder/jet.hpp>
#include <schroeder/matrix.hpp>
#include <schroeder/monomial.hpp>
#include <schroeder/scalar.hpp>

namespace schroeder
{

// An n-tuple of jets in n variables with a common truncation: a self-map
// phi, a conjugated map, or a candidate solution F.
class PolyMap
{
public:
    PolyMap() = default;
    PolyMap(std::size_t n, unsigned truncation) : n_(n), truncation_(truncation), components_(n, Jet(n, truncation)) {}

    // Components are cut to the smallest truncation among them.
    explicit PolyMap(std::vector<Jet> components) : n_(components.size())
    {
        if (components.empty()) {
            throw dimension_mismatch("a map needs at least one component");
        }
        truncation_ = components.front().truncation();
        for (const auto &c : components) {
            if (c.dimension() != n_) {
                throw dimension_mismatch("component in " + std::to_string(c.dimension()) + " variables, map has "
                                         + std::to_string(n_) + " components");
            }
            truncation_ = std::min(truncation_, c.truncation());
        }
        components_.reserve(n_);
        for (auto &c : components) {
            components_.push_back(c.truncation() == truncation_ ? std::move(c) : c.with_truncation(truncation_));
        }
    }

    static PolyMap identity(std::size_t n, unsigned truncation)
    {
        PolyMap m(n, truncation);
        for (std::size_t j = 0; j < n; ++j) {
            m.components_[j] = Jet::variable(n, j, truncation);
        }
        return m;
    }

    // z -> M z.
    static PolyMap linear(const ExactMatrix &m, unsigned truncation)
    {
        if (!m.is_square()) {
            throw dimension_mismatch("linear map needs a square matrix");
        }
        const std::size_t n = m.rows();
        PolyMap out(n, truncation);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                out.components_[j].set(MultiIndex::unit(n, i), m(j, i));
            }
        }
        return out;
    }

    std::size_t dimension() const
    {
        return n_;
    }
    unsigned truncation() const
    {
        return truncation_;
    }
    const Jet &operator[](std::size_t j) const
    {
        return components_[j];
    }
    const std::vector<Jet> &components() const
    {
        return components_;
    }

    void set_component(std::size_t j, const Jet &f)
    {
        if (f.dimension() != n_) {
            throw dimension_mismatch("component dimension mismatch");
        }
        components_[j] = f.with_truncation(truncation_);
    }

    bool fixes_origin() const
    {
        const MultiIndex zero(n_);
        return std::all_of(components_.begin(), components_.end(),
                           [&](const Jet &c) { return c.coefficient(zero).is_zero(); });
    }

    PolyMap with_truncation(unsigned k) const
    {
        PolyMap r(n_, k);
        for (std::size_t j = 0; j < n_; ++j) {
            r.components_[j] = components_[j].with_truncation(k);
        }
        return r;
    }

    friend bool operator==(const PolyMap &a, const PolyMap &b)
    {
        return a.n_ == b.n_ && a.truncation_ == b.truncation_ && a.components_ == b.components_;
    }

    friend std::ostream &operator<<(std::ostream &os, const PolyMap &m)
    {
        for (std::size_t j = 0; j < m.n_; ++j) {
            os << "  [" << j + 1 << "] " << m.components_[j].to_string() << "\n";
        }
        return os;
    }

private:
    std::size_t n_ = 0;
    unsigned truncation_ = 0;
    std::vector<Jet> components_;
};

// Entry (j, i) is the coefficient of z_i in component j.
inline ExactMatrix linear_part(const PolyMap &phi)
{
    const std::size_t n = phi.dimension();
    ExactMatrix a(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            a(j, i) = phi[j].coefficient(MultiIndex::unit(n, i));
        }
    }
    return a;
}

inline Vector grad0(const Jet &f)
{
    const std::size_t n = f.dimension();
    Vector g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = f.coefficient(MultiIndex::unit(n, i));
    }
    return g;
}

// Memoized products phi^alpha = prod_j phi_j^{alpha_j}, truncated to a fixed degree.
class PowerCache
{
public:
    PowerCache(const PolyMap &phi, unsigned truncation) : truncation_(truncation)
    {
        if (!phi.fixes_origin()) {
            throw invalid_map("map has a nonzero constant term");
        }
        if (phi.truncation() < truncation) {
            throw precondition_violation("map known through degree " + std::to_string(phi.truncation())
                                         + ", needed through " + std::to_string(truncation));
        }
        components_.reserve(phi.dimension());
        for (const auto &c : phi.components()) {
            components_.push_back(c.with_truncation(truncation));
        }
    }

    std::size_t dimension() const
    {
        return components_.size();
    }
    unsigned truncation() const
    {
        return truncation_;
    }

    const Jet &power(const MultiIndex &alpha)
    {
        if (alpha.size() != components_.size()) {
            throw dimension_mismatch("monomial dimension does not match the map");
        }
        if (const auto it = cache_.find(alpha); it != cache_.end()) {
            return it->second;
        }
        if (alpha.degree() == 0) {
            return cache_.emplace(alpha, Jet::constant(alpha.size(), truncation_, Scalar(1))).first->second;
        }
        std::size_t j = 0;
        while (alpha[j] == 0) {
            ++j;
        }
        Jet p = jet_mul(power(alpha.decremented(j)), components_[j]);
        return cache_.emplace(alpha, std::move(p)).first->second;
    }

private:
    unsigned truncation_;
    std::vector<Jet> components_;
    std::map<MultiIndex, Jet, MonomialLess> cache_;
};

inline Jet compose(const Jet &f, PowerCache &powers)
{
    if (f.dimension() != powers.dimension()) {
        throw dimension_mismatch("compose: jet in " + std::to_string(f.dimension()) + " variables, map in "
                                 + std::to_string(powers.dimension()));
    }
    const unsigned k = std::min(f.truncation(), powers.truncation());
    Jet r(f.dimension(), k);
    for (const auto &[alpha, c] : f.terms()) {
        if (alpha.degree() > k) {
            break;
        }
        r.axpy(c, powers.power(alpha));
    }
    return r;
}

// f o phi through the shared truncation degree.
inline Jet compose(const Jet &f, const PolyMap &phi)
{
    if (f.dimension() != phi.dimension()) {
        throw dimension_mismatch("compose: jet in " + std::to_string(f.dimension()) + " variables, map in "
                                 + std::to_string(phi.dimension()));
    }
    PowerCache powers(phi, std::min(f.truncation(), phi.truncation()));
    return compose(f, powers);
}

// outer o inner, componentwise.
inline PolyMap compose(const PolyMap &outer, const PolyMap &inner)
{
    if (outer.dimension() != inner.dimension()) {
        throw dimension_mismatch("compose: maps of different dimension");
    }
    PowerCache powers(inner, std::min(outer.truncation(), inner.truncation()));
    std::vector<Jet> out;
    out.reserve(outer.dimension());
    for (const auto &c : outer.components()) {
        out.push_back(compose(c, powers));
    }
    return PolyMap(std::move(out));
}

inline Jet monomial_power(const PolyMap &phi, const MultiIndex &alpha)
{
    PowerCache powers(phi, phi.truncation());
    return powers.power(alpha);
}

// (M F)_j = sum_i M(j, i) F_i.
inline PolyMap apply_linear(const ExactMatrix &m, const PolyMap &f)
{
    if (m.cols() != f.dimension() || m.rows() != f.dimension()) {
        throw dimension_mismatch("apply_linear: matrix does not match map dimension");
    }
    std::vector<Jet> out;
    out.reserve(m.rows());
    for (std::size_t j = 0; j < m.rows(); ++j) {
        Jet c(f.dimension(), f.truncation());
        for (std::size_t i = 0; i < m.cols(); ++i) {
            c.axpy(m(j, i), f[i]);
        }
        out.push_back(std::move(c));
    }
    return PolyMap(std::move(out));
}

// F(M z).
inline PolyMap precompose_linear(const PolyMap &f, const ExactMatrix &m)
{
    return compose(f, PolyMap::linear(m, f.truncation()));
}

// D o phi o D^{-1}.
inline PolyMap conjugate_map(const PolyMap &phi, const ExactMatrix &d)
{
    if (!d.is_square() || d.rows() != phi.dimension()) {
        throw dimension_mismatch("conjugator must be " + std::to_string(phi.dimension()) + "x"
                                 + std::to_string(phi.dimension()));
    }
    const ExactMatrix d_inv = inverse(d);
    return apply_linear(d, precompose_linear(phi, d_inv));
}

// Floating-point evaluation, used only for the advisory self-map sampling check.
inline std::complex<double> evaluate(const Jet &f, const std::vector<std::complex<double>> &z)
{
    std::complex<double> sum = 0.0;
    for (const auto &[alpha, c] : f.terms()) {
        std::complex<double> term(c.re().get_d(), c.im().get_d());
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            for (unsigned e = 0; e < alpha[i]; ++e) {
                term *= z[i];
            }
        }
        sum += term;
    }
    return sum;
}

} // namespace schroeder

#endif
