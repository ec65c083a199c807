#ifndef SCHROEDER_JORDAN_HPP
#define SCHROEDER_JORDAN_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include <schroeder/errors.hpp>
#include <schroeder/matrix.hpp>
#include <schroeder/scalar.hpp>

namespace schroeder
{

// vectors[0] is the eigenvector; (M - eigenvalue) vectors[j] = vectors[j-1].
struct JordanChain {
    Scalar eigenvalue;
    std::vector<Vector> vectors;

    std::size_t length() const
    {
        return vectors.size();
    }
};

struct JordanBlock {
    Scalar eigenvalue;
    std::size_t size = 0;

    friend bool operator==(const JordanBlock &, const JordanBlock &) = default;
};

// Chains spanning the whole space. provenance maps an original corner block
// to the chain that extends it (only filled by incremental_jordanize).
struct JordanBasis {
    std::size_t dimension = 0;
    std::vector<JordanChain> chains;
    std::map<std::size_t, std::size_t> provenance;

    // Columns are the chain vectors, chain by chain, eigenvector first.
    ExactMatrix transition() const
    {
        std::vector<Vector> cols;
        for (const auto &c : chains) {
            cols.insert(cols.end(), c.vectors.begin(), c.vectors.end());
        }
        return ExactMatrix::from_columns(cols, dimension);
    }

    std::vector<std::size_t> block_sizes(const Scalar &lambda) const
    {
        std::vector<std::size_t> sizes;
        for (const auto &c : chains) {
            if (c.eigenvalue == lambda) {
                sizes.push_back(c.length());
            }
        }
        std::sort(sizes.begin(), sizes.end(), std::greater<>());
        return sizes;
    }
};

inline bool chain_is_valid(const ExactMatrix &m, const JordanChain &chain)
{
    if (chain.vectors.empty()) {
        return false;
    }
    const ExactMatrix shifted = m.shifted(chain.eigenvalue);
    for (std::size_t j = 0; j < chain.vectors.size(); ++j) {
        if (is_zero_vector(chain.vectors[j])) {
            return false;
        }
        const Vector image = mat_vec(shifted, chain.vectors[j]);
        if (j == 0 ? !is_zero_vector(image) : image != chain.vectors[j - 1]) {
            return false;
        }
    }
    return true;
}

// Distinct diagonal entries in order of first appearance.
inline std::vector<Scalar> distinct_diagonal(const ExactMatrix &m)
{
    std::vector<Scalar> out;
    for (const auto &d : m.diagonal()) {
        if (std::find(out.begin(), out.end(), d) == out.end()) {
            out.push_back(d);
        }
    }
    return out;
}

// dim ker (M - lambda)^p for p = 1..size.
inline std::vector<std::size_t> rank_sequence_oracle(const ExactMatrix &m, const Scalar &lambda)
{
    if (!m.is_square()) {
        throw dimension_mismatch("rank_sequence_oracle: matrix not square");
    }
    const std::size_t n = m.rows();
    const ExactMatrix shifted = m.shifted(lambda);
    std::vector<std::size_t> dims;
    ExactMatrix power = ExactMatrix::identity(n);
    for (std::size_t p = 1; p <= n; ++p) {
        power = power * shifted;
        dims.push_back(n - rank(power));
    }
    return dims;
}

// Block sizes (descending) read off kernel dimensions: the number of blocks
// of size >= p is d_p - d_{p-1}.
inline std::vector<std::size_t> block_sizes_from_ranks(const std::vector<std::size_t> &dims)
{
    std::vector<std::size_t> at_least(dims.size() + 2, 0);
    for (std::size_t p = 1; p <= dims.size(); ++p) {
        at_least[p] = dims[p - 1] - (p >= 2 ? dims[p - 2] : 0);
    }
    std::vector<std::size_t> sizes;
    for (std::size_t p = dims.size(); p >= 1; --p) {
        for (std::size_t c = at_least[p] - at_least[p + 1]; c > 0; --c) {
            sizes.push_back(p);
        }
    }
    return sizes;
}

namespace detail
{

inline std::size_t leading_index(const Vector &v)
{
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_zero()) {
            return i;
        }
    }
    return v.size();
}

// Reduces v against rows already in reduced echelon form (pivot -> row) and
// returns the remainder.
inline Vector reduce(Vector v, const std::vector<std::pair<std::size_t, Vector>> &echelon)
{
    for (const auto &[pivot, row] : echelon) {
        if (v[pivot].is_zero()) {
            continue;
        }
        const Scalar f = v[pivot];
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!row[i].is_zero()) {
                v[i] -= f * row[i];
            }
        }
    }
    return v;
}

inline void insert_echelon(Vector v, std::vector<std::pair<std::size_t, Vector>> &echelon)
{
    v = reduce(std::move(v), echelon);
    const std::size_t p = leading_index(v);
    if (p == v.size()) {
        return;
    }
    const Scalar inv = scalar_inv(v[p]);
    for (auto &x : v) {
        x *= inv;
    }
    for (auto &[pivot, row] : echelon) {
        if (row[p].is_zero()) {
            continue;
        }
        const Scalar f = row[p];
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (!v[i].is_zero()) {
                row[i] -= f * v[i];
            }
        }
    }
    echelon.emplace_back(p, std::move(v));
}

} // namespace detail

// A maximal independent family of lambda-chains of a square matrix whose
// eigenvalues are in the field (triangular input in practice). Generators
// are chosen top-down from the kernel of each power, reduced modulo what the
// longer chains and the lower kernel already cover; each eigenvector is then
// scaled to have first nonzero coordinate 1.
inline std::vector<JordanChain> jordan_chains_triangular(const ExactMatrix &m, const Scalar &lambda)
{
    if (!m.is_square()) {
        throw dimension_mismatch("jordan_chains_triangular: matrix not square");
    }
    const std::size_t n = m.rows();
    const ExactMatrix shifted = m.shifted(lambda);

    std::vector<std::vector<Vector>> kernels{{}};
    ExactMatrix power = ExactMatrix::identity(n);
    while (true) {
        power = power * shifted;
        auto basis = kernel_basis(power);
        if (basis.size() == kernels.back().size()) {
            break;
        }
        kernels.push_back(std::move(basis));
        if (kernels.back().size() == n) {
            break;
        }
    }
    const std::size_t top = kernels.size() - 1;

    std::vector<std::pair<std::size_t, Vector>> generators;
    // images[p] holds (M - lambda)^{q-p} g for every generator g of level q > p.
    std::vector<std::vector<Vector>> images(top + 1);
    for (std::size_t p = top; p >= 1; --p) {
        std::vector<std::pair<std::size_t, Vector>> covered;
        for (const auto &v : kernels[p - 1]) {
            detail::insert_echelon(v, covered);
        }
        for (const auto &v : images[p]) {
            detail::insert_echelon(v, covered);
        }
        for (const auto &candidate : kernels[p]) {
            Vector g = detail::reduce(candidate, covered);
            if (is_zero_vector(g)) {
                continue;
            }
            detail::insert_echelon(g, covered);
            generators.emplace_back(p, g);
            Vector img = g;
            for (std::size_t q = p; q > 1; --q) {
                img = mat_vec(shifted, img);
                images[q - 1].push_back(img);
            }
        }
    }

    std::vector<JordanChain> chains;
    for (auto &[level, g] : generators) {
        std::vector<Vector> up{g};
        for (std::size_t q = 1; q < level; ++q) {
            up.push_back(mat_vec(shifted, up.back()));
        }
        const Vector &eig = up.back();
        const Scalar scale = scalar_inv(eig[detail::leading_index(eig)]);
        JordanChain c{lambda, {}};
        for (auto it = up.rbegin(); it != up.rend(); ++it) {
            Vector v = *it;
            for (auto &x : v) {
                x *= scale;
            }
            c.vectors.push_back(std::move(v));
        }
        chains.push_back(std::move(c));
    }
    return chains;
}

// Lower Jordan form: eigenvalue on the diagonal, ones just below it inside a block.
inline ExactMatrix jordan_matrix(const std::vector<JordanBlock> &blocks)
{
    std::size_t n = 0;
    for (const auto &b : blocks) {
        n += b.size;
    }
    ExactMatrix j(n, n);
    std::size_t s = 0;
    for (const auto &b : blocks) {
        for (std::size_t i = 0; i < b.size; ++i) {
            j(s + i, s + i) = b.eigenvalue;
            if (i + 1 < b.size) {
                j(s + i + 1, s + i) = Scalar(1);
            }
        }
        s += b.size;
    }
    return j;
}

// Splits a lower Jordan-form matrix into its blocks; throws if it is not one.
inline std::vector<JordanBlock> read_jordan_blocks(const ExactMatrix &j)
{
    if (!j.is_square()) {
        throw precondition_violation("Jordan form must be square");
    }
    const std::size_t n = j.rows();
    std::vector<JordanBlock> blocks;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const bool diag = r == c;
            const bool sub = r == c + 1;
            if (!diag && !sub && !j(r, c).is_zero()) {
                throw precondition_violation("not in lower Jordan form: entry (" + std::to_string(r) + ","
                                             + std::to_string(c) + ")");
            }
            if (sub && !j(r, c).is_zero() && (!j(r, c).is_one() || j(r, r) != j(c, c))) {
                throw precondition_violation("not in lower Jordan form: subdiagonal entry (" + std::to_string(r)
                                             + "," + std::to_string(c) + ")");
            }
        }
        if (r == 0 || j(r, r - 1).is_zero()) {
            blocks.push_back({j(r, r), 1});
        } else {
            ++blocks.back().size;
        }
    }
    return blocks;
}

struct JordanReduction {
    JordanBasis basis;
    std::vector<JordanBlock> blocks;
    ExactMatrix transition; // T with T A T^{-1} = J
    ExactMatrix jordan;     // J, lower Jordan form
};

// Exact Jordan reduction of a triangular matrix. Blocks are ordered by the
// leading coordinate of their generator, so a diagonal input gives T = I.
inline JordanReduction transition_to_jordan_triangular(const ExactMatrix &a)
{
    if (!a.is_square() || !a.is_triangular()) {
        throw precondition_violation("Jordan reduction needs a triangular matrix");
    }
    const std::size_t n = a.rows();
    std::vector<JordanChain> chains;
    for (const auto &lambda : distinct_diagonal(a)) {
        auto cs = jordan_chains_triangular(a, lambda);
        chains.insert(chains.end(), std::make_move_iterator(cs.begin()), std::make_move_iterator(cs.end()));
    }
    std::stable_sort(chains.begin(), chains.end(), [](const JordanChain &x, const JordanChain &y) {
        return detail::leading_index(x.vectors.back()) < detail::leading_index(y.vectors.back());
    });

    JordanReduction out;
    out.basis.dimension = n;
    std::vector<Vector> cols;
    for (const auto &c : chains) {
        out.blocks.push_back({c.eigenvalue, c.length()});
        for (auto it = c.vectors.rbegin(); it != c.vectors.rend(); ++it) {
            cols.push_back(*it);
        }
    }
    out.basis.chains = std::move(chains);
    if (cols.size() != n) {
        throw precondition_violation("chains do not span; eigenvalues outside the field?");
    }
    out.transition = inverse(ExactMatrix::from_columns(cols, n));
    out.jordan = jordan_matrix(out.blocks);
    return out;
}

} // namespace schroeder

#endif
