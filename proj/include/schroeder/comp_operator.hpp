#ifndef SCHROEDER_COMP_OPERATOR_HPP
#define SCHROEDER_COMP_OPERATOR_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <schroeder/errors.hpp>
#include <schroeder/jet.hpp>
#include <schroeder/matrix.hpp>
#include <schroeder/monomial.hpp>
#include <schroeder/poly_map.hpp>
#include <schroeder/scalar.hpp>

namespace schroeder
{

// The composition operator f -> f o phi compressed to monomials of degree 1..K.
struct TruncatedCompOp {
    MonomialBasis basis;
    ExactMatrix u;
    unsigned degree = 0;

    std::size_t dimension() const
    {
        return basis.dimension();
    }
    std::size_t size() const
    {
        return basis.size();
    }
};

inline void check_spectrum(const std::vector<Scalar> &eigs)
{
    if (eigs.empty()) {
        throw unsupported_spectrum("empty spectrum");
    }
    for (const auto &l : eigs) {
        const rational m = abs_sq(l);
        if (sgn(m) == 0) {
            throw unsupported_spectrum("eigenvalue 0");
        }
        if (m >= 1) {
            throw unsupported_spectrum("eigenvalue " + l.to_string() + " is not inside the unit disk");
        }
    }
}

// Smallest B with (max |lambda|^2)^B < min |lambda|^2: no product of more than
// B eigenvalues can reach the spectrum again.
inline unsigned magnitude_bound(const std::vector<Scalar> &eigs)
{
    check_spectrum(eigs);
    rational lo = abs_sq(eigs.front());
    rational hi = lo;
    for (const auto &l : eigs) {
        const rational m = abs_sq(l);
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    unsigned b = 1;
    rational p = hi;
    while (p >= lo) {
        p *= hi;
        ++b;
    }
    return b;
}

// Calls visit(product, total_degree) for every product prod lambda_i^{k_i}
// over the distinct eigenvalues with 1 <= sum k_i <= max_total.
inline void for_each_spectral_product(const std::vector<Scalar> &eigs, unsigned max_total,
                                      const std::function<void(const Scalar &, unsigned)> &visit)
{
    std::vector<Scalar> distinct;
    for (const auto &l : eigs) {
        if (std::find(distinct.begin(), distinct.end(), l) == distinct.end()) {
            distinct.push_back(l);
        }
    }
    const std::function<void(std::size_t, const Scalar &, unsigned)> walk = [&](std::size_t i, const Scalar &prod,
                                                                               unsigned total) {
        if (i == distinct.size()) {
            if (total >= 1) {
                visit(prod, total);
            }
            return;
        }
        Scalar p = prod;
        for (unsigned k = 0; total + k <= max_total; ++k) {
            walk(i + 1, p, total + k);
            p *= distinct[i];
        }
    };
    walk(0, Scalar(1), 0);
}

inline bool in_spectrum(const std::vector<Scalar> &eigs, const Scalar &s)
{
    return std::find(eigs.begin(), eigs.end(), s) != eigs.end();
}

// Largest total degree of a product of eigenvalues that is again an
// eigenvalue; at least 1.
inline unsigned truncation_degree(const std::vector<Scalar> &eigs)
{
    const unsigned bound = magnitude_bound(eigs);
    unsigned k = 1;
    for_each_spectral_product(eigs, bound, [&](const Scalar &p, unsigned total) {
        if (total > k && in_spectrum(eigs, p)) {
            k = total;
        }
    });
    return k;
}

// Column j holds the coefficients of phi^{alpha_j} on the basis.
inline TruncatedCompOp build(const PolyMap &phi, unsigned k)
{
    if (k == 0) {
        throw precondition_violation("truncation degree must be at least 1");
    }
    if (phi.truncation() < k) {
        throw precondition_violation("map known through degree " + std::to_string(phi.truncation())
                                     + ", operator needs degree " + std::to_string(k));
    }
    TruncatedCompOp op{MonomialBasis(phi.dimension(), k), {}, k};
    const std::size_t n_big = op.basis.size();
    op.u = ExactMatrix(n_big, n_big);
    PowerCache powers(phi, k);
    for (std::size_t col = 0; col < n_big; ++col) {
        for (const auto &[beta, c] : powers.power(op.basis[col]).terms()) {
            const std::size_t row = op.basis.position(beta);
            if (row < n_big) {
                op.u(row, col) = c;
            }
        }
    }
    return op;
}

inline Vector project_first_n(const Vector &v, std::size_t n)
{
    if (v.size() < n) {
        throw dimension_mismatch("vector shorter than the projection");
    }
    return Vector(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
}

// Coefficient vector of a jet on a monomial basis (terms outside are dropped).
inline Vector coefficients_on(const Jet &f, const MonomialBasis &basis)
{
    Vector v(basis.size());
    for (const auto &[alpha, c] : f.terms()) {
        const std::size_t pos = basis.position(alpha);
        if (pos < basis.size()) {
            v[pos] = c;
        }
    }
    return v;
}

inline Jet jet_from_coefficients(const Vector &v, const MonomialBasis &basis, unsigned truncation)
{
    Jet f(basis.dimension(), truncation);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        f.set(basis[i], v[i]);
    }
    return f;
}

} // namespace schroeder

#endif
