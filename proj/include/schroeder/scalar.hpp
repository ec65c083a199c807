#ifndef SCHROEDER_SCALAR_HPP
#define SCHROEDER_SCALAR_HPP

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

#include <schroeder/errors.hpp>

namespace schroeder
{

using rational = mpq_class;

// Accepts an optional sign, decimal digits, and an optional "/digits" part with
// a nonzero denominator. Anything else (spaces, exponents, decimals) is rejected.
inline bool is_rational_literal(std::string_view s)
{
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        ++i;
    }
    const auto digits = [&](std::size_t &pos) {
        const std::size_t start = pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            ++pos;
        }
        return pos > start;
    };
    if (!digits(i)) {
        return false;
    }
    if (i == s.size()) {
        return true;
    }
    if (s[i] != '/') {
        return false;
    }
    ++i;
    const std::size_t den_start = i;
    if (!digits(i) || i != s.size()) {
        return false;
    }
    return s.substr(den_start).find_first_not_of('0') != std::string_view::npos;
}

inline rational parse_rational(std::string_view s)
{
    if (!is_rational_literal(s)) {
        throw parse_error("malformed rational literal \"" + std::string(s) + "\"");
    }
    std::string text(s);
    if (text.front() == '+') {
        text.erase(0, 1);
    }
    rational q(text, 10);
    q.canonicalize();
    return q;
}

inline std::string format_rational(const rational &q)
{
    return q.get_str(10);
}

// Exact Gaussian rational re + im*i. Both parts are kept canonical (gmpxx
// arithmetic canonicalizes), so == is mathematical equality.
class Scalar
{
public:
    Scalar() = default;
    Scalar(long v) : re_(v), im_(0) {}
    Scalar(int v) : re_(v), im_(0) {}
    Scalar(rational re) : re_(std::move(re)), im_(0) {}
    Scalar(rational re, rational im) : re_(std::move(re)), im_(std::move(im))
    {
        re_.canonicalize();
        im_.canonicalize();
    }

    static Scalar i()
    {
        return Scalar(rational(0), rational(1));
    }
    static Scalar frac(long num, long den, long inum = 0, long iden = 1)
    {
        if (den == 0 || iden == 0) {
            throw division_by_zero();
        }
        return Scalar(rational(num, den), rational(inum, iden));
    }
    static Scalar parse(std::string_view re, std::string_view im = "0")
    {
        return Scalar(parse_rational(re), parse_rational(im));
    }

    const rational &re() const
    {
        return re_;
    }
    const rational &im() const
    {
        return im_;
    }

    bool is_zero() const
    {
        return sgn(re_) == 0 && sgn(im_) == 0;
    }
    bool is_one() const
    {
        return re_ == 1 && sgn(im_) == 0;
    }
    bool is_real() const
    {
        return sgn(im_) == 0;
    }

    Scalar conj() const
    {
        return Scalar(re_, -im_);
    }

    Scalar &operator+=(const Scalar &o)
    {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    Scalar &operator-=(const Scalar &o)
    {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    Scalar &operator*=(const Scalar &o)
    {
        if (o.im_ == 0) {
            re_ *= o.re_;
            im_ *= o.re_;
            return *this;
        }
        rational r = re_ * o.re_ - im_ * o.im_;
        rational m = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(m);
        return *this;
    }
    Scalar &operator/=(const Scalar &o);

    friend Scalar operator+(Scalar a, const Scalar &b)
    {
        return a += b;
    }
    friend Scalar operator-(Scalar a, const Scalar &b)
    {
        return a -= b;
    }
    friend Scalar operator*(Scalar a, const Scalar &b)
    {
        return a *= b;
    }
    friend Scalar operator/(Scalar a, const Scalar &b)
    {
        return a /= b;
    }
    friend Scalar operator-(const Scalar &a)
    {
        return Scalar(-a.re_, -a.im_);
    }

    friend bool operator==(const Scalar &a, const Scalar &b)
    {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const Scalar &a, const Scalar &b)
    {
        return !(a == b);
    }

    // Total order used only to make containers of scalars deterministic.
    friend bool canonical_less(const Scalar &a, const Scalar &b)
    {
        const int c = cmp(a.re_, b.re_);
        if (c != 0) {
            return c < 0;
        }
        return cmp(a.im_, b.im_) < 0;
    }

    std::string to_string() const
    {
        if (is_real()) {
            return format_rational(re_);
        }
        if (re_ == 0) {
            return format_rational(im_) + "i";
        }
        std::string s = format_rational(re_);
        s += sgn(im_) < 0 ? " - " : " + ";
        s += format_rational(abs(im_)) + "i";
        return s;
    }

    friend std::ostream &operator<<(std::ostream &os, const Scalar &s)
    {
        return os << s.to_string();
    }

private:
    rational re_{0};
    rational im_{0};
};

inline rational abs_sq(const Scalar &s)
{
    return s.re() * s.re() + s.im() * s.im();
}

inline Scalar scalar_inv(const Scalar &s)
{
    if (s.is_zero()) {
        throw division_by_zero();
    }
    const rational n = abs_sq(s);
    return Scalar(s.re() / n, -s.im() / n);
}

inline Scalar &Scalar::operator/=(const Scalar &o)
{
    if (o.is_zero()) {
        throw division_by_zero();
    }
    if (o.im_ == 0) {
        re_ /= o.re_;
        im_ /= o.re_;
        return *this;
    }
    return *this *= scalar_inv(o);
}

inline Scalar pow(const Scalar &base, std::uint64_t e)
{
    Scalar result(1);
    Scalar b = base;
    while (e != 0) {
        if (e & 1U) {
            result *= b;
        }
        e >>= 1U;
        if (e != 0) {
            b *= b;
        }
    }
    return result;
}

} // namespace schroeder

#endif
