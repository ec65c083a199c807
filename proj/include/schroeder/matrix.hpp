#ifndef SCHROEDER_MATRIX_HPP
#define SCHROEDER_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <schroeder/errors.hpp>
#include <schroeder/scalar.hpp>

namespace schroeder
{

using Vector = std::vector<Scalar>;

// Dense row-major matrix over the Gaussian rationals.
class ExactMatrix
{
public:
    ExactMatrix() = default;
    ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    ExactMatrix(std::initializer_list<std::initializer_list<Scalar>> init)
    {
        rows_ = init.size();
        cols_ = rows_ == 0 ? 0 : init.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto &row : init) {
            if (row.size() != cols_) {
                throw dimension_mismatch("ragged matrix initializer");
            }
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static ExactMatrix identity(std::size_t n)
    {
        ExactMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = Scalar(1);
        }
        return m;
    }
    static ExactMatrix diagonal(const Vector &d)
    {
        ExactMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
            m(i, i) = d[i];
        }
        return m;
    }
    static ExactMatrix from_columns(const std::vector<Vector> &columns, std::size_t rows)
    {
        ExactMatrix m(rows, columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j].size() != rows) {
                throw dimension_mismatch("column length mismatch");
            }
            for (std::size_t i = 0; i < rows; ++i) {
                m(i, j) = columns[j][i];
            }
        }
        return m;
    }
    static ExactMatrix from_rows(const std::vector<Vector> &rows, std::size_t cols)
    {
        ExactMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) {
                throw dimension_mismatch("row length mismatch");
            }
            for (std::size_t j = 0; j < cols; ++j) {
                m(i, j) = rows[i][j];
            }
        }
        return m;
    }

    std::size_t rows() const
    {
        return rows_;
    }
    std::size_t cols() const
    {
        return cols_;
    }
    bool is_square() const
    {
        return rows_ == cols_;
    }

    Scalar &operator()(std::size_t i, std::size_t j)
    {
        return data_[i * cols_ + j];
    }
    const Scalar &operator()(std::size_t i, std::size_t j) const
    {
        return data_[i * cols_ + j];
    }

    Vector row(std::size_t i) const
    {
        return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                      data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }
    Vector column(std::size_t j) const
    {
        Vector c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            c[i] = (*this)(i, j);
        }
        return c;
    }
    Vector diagonal() const
    {
        Vector d;
        for (std::size_t i = 0; i < rows_ && i < cols_; ++i) {
            d.push_back((*this)(i, i));
        }
        return d;
    }

    // Leading r x c block.
    ExactMatrix block(std::size_t r0, std::size_t c0, std::size_t r, std::size_t c) const
    {
        if (r0 + r > rows_ || c0 + c > cols_) {
            throw dimension_mismatch("block out of range");
        }
        ExactMatrix b(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < c; ++j) {
                b(i, j) = (*this)(r0 + i, c0 + j);
            }
        }
        return b;
    }

    ExactMatrix transpose() const
    {
        ExactMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                t(j, i) = (*this)(i, j);
            }
        }
        return t;
    }

    bool is_lower_triangular() const
    {
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = i + 1; j < cols_; ++j) {
                if (!(*this)(i, j).is_zero()) {
                    return false;
                }
            }
        }
        return true;
    }
    bool is_upper_triangular() const
    {
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < i && j < cols_; ++j) {
                if (!(*this)(i, j).is_zero()) {
                    return false;
                }
            }
        }
        return true;
    }
    bool is_triangular() const
    {
        return is_lower_triangular() || is_upper_triangular();
    }
    bool is_zero() const
    {
        for (const auto &x : data_) {
            if (!x.is_zero()) {
                return false;
            }
        }
        return true;
    }

    // M - s*I.
    ExactMatrix shifted(const Scalar &s) const
    {
        ExactMatrix r(*this);
        for (std::size_t i = 0; i < rows_ && i < cols_; ++i) {
            r(i, i) -= s;
        }
        return r;
    }

    ExactMatrix &operator+=(const ExactMatrix &o)
    {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] += o.data_[k];
        }
        return *this;
    }
    ExactMatrix &operator-=(const ExactMatrix &o)
    {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] -= o.data_[k];
        }
        return *this;
    }
    ExactMatrix &operator*=(const Scalar &s)
    {
        for (auto &x : data_) {
            x *= s;
        }
        return *this;
    }

    friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix &b)
    {
        return a += b;
    }
    friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix &b)
    {
        return a -= b;
    }
    friend ExactMatrix operator*(ExactMatrix a, const Scalar &s)
    {
        return a *= s;
    }

    friend bool operator==(const ExactMatrix &a, const ExactMatrix &b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend std::ostream &operator<<(std::ostream &os, const ExactMatrix &m)
    {
        for (std::size_t i = 0; i < m.rows_; ++i) {
            os << "[";
            for (std::size_t j = 0; j < m.cols_; ++j) {
                os << (j ? ", " : "") << m(i, j);
            }
            os << "]\n";
        }
        return os;
    }

private:
    void check_same(const ExactMatrix &o) const
    {
        if (o.rows_ != rows_ || o.cols_ != cols_) {
            throw dimension_mismatch("matrix shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

inline ExactMatrix mat_mul(const ExactMatrix &a, const ExactMatrix &b)
{
    if (a.cols() != b.rows()) {
        throw dimension_mismatch("mat_mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " times "
                                 + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    ExactMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Scalar &aik = a(i, k);
            if (aik.is_zero()) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                if (!b(k, j).is_zero()) {
                    c(i, j) += aik * b(k, j);
                }
            }
        }
    }
    return c;
}

inline ExactMatrix operator*(const ExactMatrix &a, const ExactMatrix &b)
{
    return mat_mul(a, b);
}

inline Vector mat_vec(const ExactMatrix &a, const Vector &v)
{
    if (a.cols() != v.size()) {
        throw dimension_mismatch("mat_vec: shape mismatch");
    }
    Vector r(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (!a(i, j).is_zero() && !v[j].is_zero()) {
                r[i] += a(i, j) * v[j];
            }
        }
    }
    return r;
}

inline ExactMatrix mat_pow(const ExactMatrix &a, unsigned p)
{
    if (!a.is_square()) {
        throw dimension_mismatch("mat_pow: matrix not square");
    }
    ExactMatrix r = ExactMatrix::identity(a.rows());
    for (unsigned k = 0; k < p; ++k) {
        r = r * a;
    }
    return r;
}

inline bool is_zero_vector(const Vector &v)
{
    for (const auto &x : v) {
        if (!x.is_zero()) {
            return false;
        }
    }
    return true;
}

// Reduced row echelon form with leading-entry pivoting (first nonzero in the
// column); exact arithmetic needs no magnitude pivoting.
struct RowReduction {
    ExactMatrix reduced;
    std::vector<std::size_t> pivot_columns;
};

inline RowReduction row_reduce(ExactMatrix m)
{
    RowReduction out;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < m.cols() && pivot_row < m.rows(); ++col) {
        std::size_t r = pivot_row;
        while (r < m.rows() && m(r, col).is_zero()) {
            ++r;
        }
        if (r == m.rows()) {
            continue;
        }
        if (r != pivot_row) {
            for (std::size_t j = 0; j < m.cols(); ++j) {
                std::swap(m(r, j), m(pivot_row, j));
            }
        }
        const Scalar inv = scalar_inv(m(pivot_row, col));
        for (std::size_t j = col; j < m.cols(); ++j) {
            if (!m(pivot_row, j).is_zero()) {
                m(pivot_row, j) *= inv;
            }
        }
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == pivot_row || m(i, col).is_zero()) {
                continue;
            }
            const Scalar f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) {
                if (!m(pivot_row, j).is_zero()) {
                    m(i, j) -= f * m(pivot_row, j);
                }
            }
        }
        out.pivot_columns.push_back(col);
        ++pivot_row;
    }
    out.reduced = std::move(m);
    return out;
}

inline std::size_t rank(const ExactMatrix &m)
{
    return row_reduce(m).pivot_columns.size();
}

// Basis of the null space read off the RREF: one vector per free column, with
// a 1 in that column. Empty iff the matrix is injective.
inline std::vector<Vector> kernel_basis(const ExactMatrix &m)
{
    const RowReduction rr = row_reduce(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : rr.pivot_columns) {
        is_pivot[c] = true;
    }
    std::vector<Vector> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) {
            continue;
        }
        Vector v(m.cols());
        v[free] = Scalar(1);
        for (std::size_t k = 0; k < rr.pivot_columns.size(); ++k) {
            v[rr.pivot_columns[k]] = -rr.reduced(k, free);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

inline ExactMatrix inverse(const ExactMatrix &m)
{
    if (!m.is_square()) {
        throw singular_matrix("inverse of a non-square matrix");
    }
    const std::size_t n = m.rows();
    ExactMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            aug(i, j) = m(i, j);
        }
        aug(i, n + i) = Scalar(1);
    }
    const RowReduction rr = row_reduce(std::move(aug));
    if (rr.pivot_columns.size() < n || rr.pivot_columns[n - 1] != n - 1) {
        throw singular_matrix("matrix is singular");
    }
    return rr.reduced.block(0, n, n, n);
}

// Solves A X = B exactly; throws singular_matrix when A is not invertible.
inline ExactMatrix mat_solve(const ExactMatrix &a, const ExactMatrix &b)
{
    if (a.rows() != b.rows()) {
        throw dimension_mismatch("mat_solve: shape mismatch");
    }
    return inverse(a) * b;
}

inline Vector mat_solve(const ExactMatrix &a, const Vector &b)
{
    return mat_vec(inverse(a), b);
}

// Particular solution of a possibly singular system, or nothing when inconsistent.
inline bool solve_consistent(const ExactMatrix &a, const Vector &b, Vector &x)
{
    if (a.rows() != b.size()) {
        throw dimension_mismatch("solve_consistent: shape mismatch");
    }
    ExactMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            aug(i, j) = a(i, j);
        }
        aug(i, a.cols()) = b[i];
    }
    const RowReduction rr = row_reduce(std::move(aug));
    if (!rr.pivot_columns.empty() && rr.pivot_columns.back() == a.cols()) {
        return false;
    }
    x.assign(a.cols(), Scalar());
    for (std::size_t k = 0; k < rr.pivot_columns.size(); ++k) {
        x[rr.pivot_columns[k]] = rr.reduced(k, a.cols());
    }
    return true;
}

// Rank of a set of vectors (as rows).
inline std::size_t vector_rank(const std::vector<Vector> &vs, std::size_t len)
{
    if (vs.empty()) {
        return 0;
    }
    return rank(ExactMatrix::from_rows(vs, len));
}

} // namespace schroeder

#endif
