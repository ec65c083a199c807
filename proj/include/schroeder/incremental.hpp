#ifndef SCHROEDER_INCREMENTAL_HPP
#define SCHROEDER_INCREMENTAL_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <schroeder/errors.hpp>
#include <schroeder/jordan.hpp>
#include <schroeder/matrix.hpp>
#include <schroeder/scalar.hpp>

namespace schroeder
{

// A block of the protected corner: rows/cols [start, start + size).
struct CornerBlock {
    Scalar eigenvalue;
    std::size_t start = 0;
    std::size_t size = 0;
};

inline std::vector<CornerBlock> corner_blocks(const ExactMatrix &u, std::size_t n)
{
    if (n > u.rows() || !u.is_square()) {
        throw precondition_violation("corner larger than the matrix");
    }
    std::vector<CornerBlock> out;
    std::size_t s = 0;
    for (const auto &b : read_jordan_blocks(u.block(0, 0, n, n))) {
        out.push_back({b.eigenvalue, s, b.size});
        s += b.size;
    }
    return out;
}

namespace detail
{

inline Scalar dot_prefix(const Vector &row, const Vector &v, std::size_t len)
{
    Scalar s;
    for (std::size_t i = 0; i < len; ++i) {
        if (!row[i].is_zero() && !v[i].is_zero()) {
            s += row[i] * v[i];
        }
    }
    return s;
}

inline bool zero_on_corner(const std::vector<Vector> &vs, std::size_t n)
{
    for (const auto &v : vs) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!v[i].is_zero()) {
                return false;
            }
        }
    }
    return true;
}

} // namespace detail

// Jordan basis of a lower-triangular U whose leading n x n corner is already
// in lower Jordan form. The corner's own chains are the starting basis; rows
// n..N-1 are then appended one at a time. Appending row r (entries a, diagonal
// mu) makes w = e_r a new mu-eigenvector, and every chain v_1..v_k is shifted
// by multiples of w:
//   lambda != mu:  c_1 = -b_1/(mu - lambda),  c_j = (c_{j-1} - b_j)/(mu - lambda)
//   lambda == mu:  c_{j-1} = b_j,  c_k = 0, leaving (U - mu) v_1 = b_1 w
// with b_j = a . v_j. Among the mu-chains left with b_1 != 0 the longest one
// absorbs w as its new eigenvector and the others subtract a multiple of it;
// if there is none, w starts a chain of its own.
inline JordanBasis incremental_jordanize(const ExactMatrix &u, std::size_t n)
{
    if (!u.is_square() || !u.is_lower_triangular()) {
        throw precondition_violation("incremental Jordanization needs a lower-triangular square matrix");
    }
    const std::size_t big_n = u.rows();
    const auto blocks = corner_blocks(u, n);

    JordanBasis basis;
    basis.dimension = big_n;
    std::vector<std::optional<std::size_t>> origin;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        JordanChain c{blocks[j].eigenvalue, {}};
        for (std::size_t i = blocks[j].size; i-- > 0;) {
            Vector v(big_n);
            v[blocks[j].start + i] = Scalar(1);
            c.vectors.push_back(std::move(v));
        }
        basis.chains.push_back(std::move(c));
        origin.push_back(j);
    }

    for (std::size_t r = n; r < big_n; ++r) {
        const Vector a = u.row(r);
        const Scalar mu = a[r];
        struct Eligible {
            std::size_t chain;
            Scalar beta;
        };
        std::vector<Eligible> eligible;

        for (std::size_t ci = 0; ci < basis.chains.size(); ++ci) {
            auto &chain = basis.chains[ci];
            const std::size_t k = chain.length();
            std::vector<Scalar> b(k);
            for (std::size_t j = 0; j < k; ++j) {
                b[j] = detail::dot_prefix(a, chain.vectors[j], r);
            }
            std::vector<Scalar> c(k);
            if (chain.eigenvalue != mu) {
                const Scalar inv = scalar_inv(mu - chain.eigenvalue);
                c[0] = -b[0] * inv;
                for (std::size_t j = 1; j < k; ++j) {
                    c[j] = (c[j - 1] - b[j]) * inv;
                }
            } else {
                for (std::size_t j = 1; j < k; ++j) {
                    c[j - 1] = b[j];
                }
                if (!b[0].is_zero()) {
                    eligible.push_back({ci, b[0]});
                }
            }
            for (std::size_t j = 0; j < k; ++j) {
                chain.vectors[j][r] = c[j];
            }
        }

        if (eligible.empty()) {
            Vector w(big_n);
            w[r] = Scalar(1);
            basis.chains.push_back({mu, {std::move(w)}});
            origin.push_back(std::nullopt);
            continue;
        }

        // Absorber: longest; ties prefer chains invisible on the corner, then
        // chains not extending an original block, then the earliest.
        std::size_t best = 0;
        const auto rank_key = [&](const Eligible &e) {
            const auto &ch = basis.chains[e.chain];
            return std::tuple(ch.length(), detail::zero_on_corner(ch.vectors, n), !origin[e.chain].has_value());
        };
        for (std::size_t e = 1; e < eligible.size(); ++e) {
            if (rank_key(eligible[e]) > rank_key(eligible[best])) {
                best = e;
            }
        }
        const std::size_t absorber = eligible[best].chain;
        const Scalar beta_l = eligible[best].beta;
        const auto &lv = basis.chains[absorber].vectors;
        for (std::size_t e = 0; e < eligible.size(); ++e) {
            if (e == best) {
                continue;
            }
            auto &iv = basis.chains[eligible[e].chain].vectors;
            const Scalar f = eligible[e].beta / beta_l;
            for (std::size_t j = 0; j < iv.size(); ++j) {
                for (std::size_t x = 0; x <= r; ++x) {
                    if (!lv[j][x].is_zero()) {
                        iv[j][x] -= f * lv[j][x];
                    }
                }
            }
        }
        Vector w(big_n);
        w[r] = beta_l;
        auto &av = basis.chains[absorber].vectors;
        av.insert(av.begin(), std::move(w));
    }

    for (std::size_t ci = 0; ci < basis.chains.size(); ++ci) {
        if (origin[ci]) {
            basis.provenance.emplace(*origin[ci], ci);
        }
    }
    return basis;
}

// For each original block j with provenance chain of length d, the top n_j
// chain vectors restricted to block j's coordinates reproduce the original
// corner chain.
inline bool projection_invariant_holds(const JordanBasis &basis, const std::vector<CornerBlock> &blocks)
{
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        const auto it = basis.provenance.find(j);
        if (it == basis.provenance.end()) {
            return false;
        }
        const auto &chain = basis.chains[it->second];
        const std::size_t nj = blocks[j].size;
        const std::size_t d = chain.length();
        if (d < nj || chain.eigenvalue != blocks[j].eigenvalue) {
            return false;
        }
        for (std::size_t i = 1; i <= nj; ++i) {
            const Vector &v = chain.vectors[d - nj + i - 1];
            for (std::size_t x = 0; x < nj; ++x) {
                const bool expected_one = x == nj - i;
                const Scalar &coord = v[blocks[j].start + x];
                if (expected_one ? !coord.is_one() : !coord.is_zero()) {
                    return false;
                }
            }
        }
    }
    return true;
}

} // namespace schroeder

#endif
