#ifndef SCHROEDER_ENGINE_HPP
#define SCHROEDER_ENGINE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <schroeder/comp_operator.hpp>
#include <schroeder/errors.hpp>
#include <schroeder/incremental.hpp>
#include <schroeder/jet.hpp>
#include <schroeder/jordan.hpp>
#include <schroeder/matrix.hpp>
#include <schroeder/monomial.hpp>
#include <schroeder/poly_map.hpp>
#include <schroeder/scalar.hpp>

namespace schroeder
{

inline constexpr unsigned default_output_degree = 10;

// Everything known about the linear part once the map is accepted.
// conjugator D satisfies: psi = D phi D^{-1} has linear part J^t, where J is
// the lower Jordan form listed in blocks.
struct SpectralData {
    std::size_t dimension = 0;
    std::vector<Scalar> eigenvalues;
    std::vector<JordanBlock> blocks;
    ExactMatrix transition;
    ExactMatrix conjugator;
    std::vector<Scalar> resonant;
};

struct EigenRecord {
    Scalar eigenvalue;
    bool resonant = false;
    std::size_t d_orig = 0;
    std::size_t d_ker = 0;
    std::size_t d_proj = 0;
    // d_proj == d_orig: the projected-kernel criterion.
    bool kernel_criterion = false;
    // Every block of this eigenvalue extends to a chain of U that restricts
    // to the block's own chain on the corner.
    bool chains_extend = false;
    bool full_rank_possible = false;
};

struct AnalysisReport {
    std::vector<EigenRecord> records;
    std::vector<JordanBlock> blocks;
    bool verdict = false;
    unsigned degree = 0;
    std::size_t size = 0;
};

enum class SolveMode { full_rank, independent };

inline const char *to_string(SolveMode m)
{
    return m == SolveMode::full_rank ? "full-rank" : "independent";
}

// Where a component of the solution (in Jordan coordinates) comes from.
// position runs 1..block size; the last position is the eigenfunction.
struct ComponentInfo {
    Scalar eigenvalue;
    std::size_t block = 0;
    std::size_t position = 0;
};

struct SchroederSolution {
    PolyMap map;           // solution in the input coordinates
    PolyMap jordan_map;    // the same solution for psi = D phi D^{-1}
    ExactMatrix conjugator;
    std::vector<ComponentInfo> components;
    ExactMatrix jacobian;
    SolveMode mode = SolveMode::independent;
    unsigned power = 1;
    int residual_degree = -1;
    // True when full-rank mode had to normalize chains against the corner
    // because the extended chain tails were not independent at the origin.
    bool normalized = false;
};

struct NoFullRank {
    AnalysisReport report;
};

using SolveResult = std::variant<SchroederSolution, NoFullRank>;

struct ResidualReport {
    int vanishing_degree = -1; // -1: even the constant term fails
    unsigned checked_degree = 0;
    bool vanishes = false;
    std::optional<std::size_t> offending_component;
    std::optional<MultiIndex> offending_monomial;
    std::size_t jacobian_rank = 0;
    std::size_t component_rank = 0;
    bool degenerate = false;
};

inline std::vector<Scalar> detect_resonance(const SpectralData &spectral)
{
    const auto &eigs = spectral.eigenvalues;
    std::vector<Scalar> found;
    for_each_spectral_product(eigs, magnitude_bound(eigs), [&](const Scalar &p, unsigned total) {
        if (total > 1 && in_spectrum(eigs, p) && !in_spectrum(found, p)) {
            found.push_back(p);
        }
    });
    std::vector<Scalar> ordered;
    for (const auto &e : eigs) {
        if (in_spectrum(found, e)) {
            ordered.push_back(e);
        }
    }
    return ordered;
}

inline SpectralData validate_map(const PolyMap &phi, const std::optional<ExactMatrix> &user_conjugator = std::nullopt)
{
    if (!phi.fixes_origin()) {
        throw invalid_map("phi(0) != 0");
    }
    const std::size_t n = phi.dimension();
    ExactMatrix a = linear_part(phi);
    ExactMatrix d_user = ExactMatrix::identity(n);
    if (user_conjugator) {
        if (user_conjugator->rows() != n || user_conjugator->cols() != n) {
            throw invalid_map("conjugator must be " + std::to_string(n) + "x" + std::to_string(n));
        }
        if (rank(*user_conjugator) < n) {
            throw invalid_map("conjugator is singular");
        }
        d_user = *user_conjugator;
        a = d_user * a * inverse(d_user);
    }
    if (rank(a) < n) {
        throw invalid_map("phi'(0) not invertible");
    }
    if (!a.is_triangular()) {
        throw invalid_map("phi'(0) is not triangular; supply a conjugator");
    }
    SpectralData s;
    s.dimension = n;
    s.eigenvalues = distinct_diagonal(a);
    check_spectrum(s.eigenvalues);
    const JordanReduction red = transition_to_jordan_triangular(a.transpose());
    s.blocks = red.blocks;
    s.transition = red.transition;
    s.conjugator = inverse(red.transition).transpose() * d_user;
    s.resonant = detect_resonance(s);
    return s;
}

namespace detail
{

// The map in Jordan coordinates together with its truncated operator.
struct Prepared {
    SpectralData spectral;
    PolyMap psi;
    TruncatedCompOp op;
    std::vector<CornerBlock> corner;
};

inline Prepared prepare(const PolyMap &phi, const std::optional<ExactMatrix> &conj, unsigned out_degree)
{
    Prepared p;
    p.spectral = validate_map(phi, conj);
    const unsigned k = truncation_degree(p.spectral.eigenvalues);
    if (out_degree < k) {
        throw precondition_violation("output degree " + std::to_string(out_degree)
                                     + " is below the truncation degree " + std::to_string(k));
    }
    p.psi = conjugate_map(phi.with_truncation(out_degree), p.spectral.conjugator);
    p.op = build(p.psi, k);
    p.corner = corner_blocks(p.op.u, phi.dimension());
    return p;
}

// Chain of U for the corner block that starts with the corner block's own
// vectors: y_m = (e-part of the block, x_m) with (U - mu) y_1 = 0 and
// (U - mu) y_m = y_{m-1}. Exists for every block iff some solution has
// invertible derivative at the origin.
inline std::optional<JordanChain> normalized_chain(const TruncatedCompOp &op, std::size_t n, const CornerBlock &blk)
{
    const std::size_t big_n = op.size();
    const std::size_t rest = big_n - n;
    const std::size_t s = blk.size;
    const ExactMatrix shifted = op.u.shifted(blk.eigenvalue);
    ExactMatrix sys(s * rest, s * rest);
    Vector rhs(s * rest);
    for (std::size_t m = 0; m < s; ++m) {
        const std::size_t corner_coord = blk.start + s - 1 - m;
        for (std::size_t r = 0; r < rest; ++r) {
            const std::size_t row = m * rest + r;
            rhs[row] = -shifted(n + r, corner_coord);
            for (std::size_t c = 0; c < rest; ++c) {
                sys(row, m * rest + c) = shifted(n + r, n + c);
            }
            if (m > 0) {
                sys(row, (m - 1) * rest + r) -= Scalar(1);
            }
        }
    }
    Vector x;
    if (!solve_consistent(sys, rhs, x)) {
        return std::nullopt;
    }
    JordanChain chain{blk.eigenvalue, {}};
    for (std::size_t m = 0; m < s; ++m) {
        Vector y(big_n);
        y[blk.start + s - 1 - m] = Scalar(1);
        for (std::size_t r = 0; r < rest; ++r) {
            y[n + r] = x[m * rest + r];
        }
        chain.vectors.push_back(std::move(y));
    }
    return chain;
}

inline std::vector<std::optional<JordanChain>> normalized_chains(const Prepared &p)
{
    std::vector<std::optional<JordanChain>> out;
    for (const auto &blk : p.corner) {
        out.push_back(normalized_chain(p.op, p.spectral.dimension, blk));
    }
    return out;
}

inline AnalysisReport analyze_prepared(const Prepared &p, const std::vector<std::optional<JordanChain>> &normalized)
{
    const std::size_t n = p.spectral.dimension;
    const ExactMatrix j = p.op.u.block(0, 0, n, n);
    AnalysisReport r;
    r.blocks = p.spectral.blocks;
    r.degree = p.op.degree;
    r.size = p.op.size();
    r.verdict = true;
    for (const auto &mu : p.spectral.eigenvalues) {
        EigenRecord rec;
        rec.eigenvalue = mu;
        rec.resonant = in_spectrum(p.spectral.resonant, mu);
        rec.d_orig = n - rank(j.shifted(mu));
        const auto kernel = kernel_basis(p.op.u.shifted(mu));
        rec.d_ker = kernel.size();
        std::vector<Vector> projected;
        for (const auto &v : kernel) {
            projected.push_back(project_first_n(v, n));
        }
        rec.d_proj = vector_rank(projected, n);
        rec.kernel_criterion = rec.d_proj == rec.d_orig;
        rec.chains_extend = true;
        for (std::size_t j = 0; j < p.corner.size(); ++j) {
            if (p.corner[j].eigenvalue == mu && !normalized[j]) {
                rec.chains_extend = false;
            }
        }
        rec.full_rank_possible = rec.kernel_criterion && rec.chains_extend;
        r.verdict = r.verdict && rec.full_rank_possible;
        r.records.push_back(std::move(rec));
    }
    return r;
}

} // namespace detail

inline AnalysisReport analyze(const PolyMap &phi, const std::optional<ExactMatrix> &conj = std::nullopt)
{
    const SpectralData s = validate_map(phi, conj);
    const unsigned k = truncation_degree(s.eigenvalues);
    const detail::Prepared p = detail::prepare(phi.with_truncation(std::max(k, phi.truncation())), conj, k);
    return detail::analyze_prepared(p, detail::normalized_chains(p));
}

// Extends a chain of U to jets through out_degree. Coefficients of degree
// <= K are the chain vectors; each higher coefficient solves its row of
// (C - lambda) g_i = g_{i-1} by forward substitution, dividing by
// lambda^beta - lambda.
inline std::vector<Jet> lift_chain(PowerCache &powers, const TruncatedCompOp &op, const JordanChain &chain,
                                   unsigned out_degree)
{
    const std::size_t n = op.dimension();
    if (powers.truncation() < out_degree) {
        throw precondition_violation("power cache truncated below the output degree");
    }
    std::vector<Jet> lifted;
    for (std::size_t i = 0; i < chain.length(); ++i) {
        if (chain.vectors[i].size() != op.size()) {
            throw dimension_mismatch("chain vector does not match the operator size");
        }
        Jet g = jet_from_coefficients(chain.vectors[i], op.basis, out_degree);
        Jet acc(n, out_degree);
        for (const auto &[alpha, c] : g.terms()) {
            acc.axpy(c, powers.power(alpha));
        }
        for (unsigned d = op.degree + 1; d <= out_degree; ++d) {
            for (const auto &beta : monomials_of_degree(n, d)) {
                const Scalar diag = powers.power(beta).coefficient(beta);
                const Scalar denom = diag - chain.eigenvalue;
                const Scalar rhs = i == 0 ? Scalar() : lifted[i - 1].coefficient(beta);
                const Scalar num = rhs - acc.coefficient(beta);
                if (denom.is_zero()) {
                    if (!num.is_zero()) {
                        throw precondition_violation("diagonal entry at " + beta.monomial_string()
                                                     + " equals the chain eigenvalue");
                    }
                    continue;
                }
                if (num.is_zero()) {
                    continue;
                }
                const Scalar coeff = num / denom;
                g.set(beta, coeff);
                acc.axpy(coeff, powers.power(beta));
            }
        }
        lifted.push_back(std::move(g));
    }
    return lifted;
}

inline std::vector<Jet> lift_chain(const PolyMap &phi, const TruncatedCompOp &op, const JordanChain &chain,
                                   unsigned out_degree)
{
    PowerCache powers(phi.with_truncation(std::max(out_degree, phi.truncation())), out_degree);
    return lift_chain(powers, op, chain, out_degree);
}

inline ResidualReport verify(const PolyMap &phi, const PolyMap &f, const ExactMatrix &b, unsigned check_degree)
{
    const std::size_t n = phi.dimension();
    if (f.dimension() != n || b.rows() != n || b.cols() != n) {
        throw dimension_mismatch("verify: map, candidate and matrix dimensions differ");
    }
    const PolyMap fk = f.with_truncation(check_degree);
    const PolyMap residual_lhs = compose(fk, phi.with_truncation(check_degree));
    const PolyMap residual_rhs = apply_linear(b, fk);

    ResidualReport r;
    r.checked_degree = check_degree;
    r.vanishing_degree = static_cast<int>(check_degree);
    for (std::size_t j = 0; j < n; ++j) {
        const Jet diff = residual_lhs[j] - residual_rhs[j];
        if (diff.is_zero()) {
            continue;
        }
        const MultiIndex &first = diff.terms().begin()->first;
        const int bad = static_cast<int>(first.degree()) - 1;
        if (!r.offending_monomial || compare_monomials(first, *r.offending_monomial) < 0) {
            r.offending_monomial = first;
            r.offending_component = j;
            r.vanishing_degree = bad;
        }
    }
    r.vanishes = !r.offending_monomial.has_value();
    r.jacobian_rank = rank(linear_part(fk));

    MonomialBasis basis(n, check_degree);
    std::vector<Vector> rows;
    for (const auto &c : fk.components()) {
        Vector v = coefficients_on(c, basis);
        v.push_back(c.coefficient(MultiIndex(n)));
        rows.push_back(std::move(v));
    }
    r.component_rank = vector_rank(rows, basis.size() + 1);
    r.degenerate = r.component_rank < n;
    return r;
}

namespace detail
{

inline SchroederSolution assemble(const Prepared &p, const std::vector<JordanChain> &chains, unsigned out_degree,
                                  SolveMode mode)
{
    const std::size_t n = p.spectral.dimension;
    PowerCache powers(p.psi, out_degree);
    SchroederSolution sol;
    sol.mode = mode;
    sol.conjugator = p.spectral.conjugator;
    std::vector<Jet> comps(n);
    sol.components.resize(n);
    for (std::size_t j = 0; j < p.corner.size(); ++j) {
        const auto &blk = p.corner[j];
        const auto lifted = lift_chain(powers, p.op, chains[j], out_degree);
        for (std::size_t i = 1; i <= blk.size; ++i) {
            comps[blk.start + i - 1] = lifted[blk.size - i];
            sol.components[blk.start + i - 1] = {blk.eigenvalue, j, i};
        }
    }
    sol.jordan_map = PolyMap(std::move(comps));
    const ExactMatrix &d = p.spectral.conjugator;
    sol.map = apply_linear(inverse(d), precompose_linear(sol.jordan_map, d));
    sol.jacobian = linear_part(sol.map);
    return sol;
}

inline void record_residual(SchroederSolution &sol, const PolyMap &phi, const ExactMatrix &b, unsigned out_degree)
{
    const ResidualReport r = verify(phi.with_truncation(out_degree), sol.map, b, out_degree);
    sol.residual_degree = r.vanishing_degree;
}

} // namespace detail

inline SolveResult solve(const PolyMap &phi, unsigned out_degree, SolveMode mode,
                         const std::optional<ExactMatrix> &conj = std::nullopt)
{
    const detail::Prepared p = detail::prepare(phi, conj, out_degree);
    const std::size_t n = p.spectral.dimension;

    const JordanBasis basis = incremental_jordanize(p.op.u, n);
    std::vector<JordanChain> tails;
    for (std::size_t j = 0; j < p.corner.size(); ++j) {
        const auto &chain = basis.chains.at(basis.provenance.at(j));
        JordanChain t{chain.eigenvalue, {}};
        t.vectors.assign(chain.vectors.begin(), chain.vectors.begin() + static_cast<std::ptrdiff_t>(p.corner[j].size));
        tails.push_back(std::move(t));
    }

    std::vector<std::optional<JordanChain>> normalized;
    if (mode == SolveMode::full_rank) {
        normalized = detail::normalized_chains(p);
        AnalysisReport report = detail::analyze_prepared(p, normalized);
        if (!report.verdict) {
            return NoFullRank{std::move(report)};
        }
    }

    SchroederSolution sol = detail::assemble(p, tails, out_degree, mode);
    if (mode == SolveMode::full_rank && rank(sol.jacobian) < n) {
        std::vector<JordanChain> chains;
        for (auto &c : normalized) {
            chains.push_back(std::move(*c));
        }
        sol = detail::assemble(p, chains, out_degree, mode);
        sol.normalized = true;
    }
    detail::record_residual(sol, phi, linear_part(phi), out_degree);
    return sol;
}

// Solution of F o phi = phi'(0)^k F. For k > 1 each block's chain
// f_1..f_s is turned into h_i = f_i f_s^{k-1} / lambda^{(k-1)(s-i)}, which
// is a chain for lambda^k, and then rotated by the Jordan reduction of J^k.
inline SchroederSolution solve_power(const PolyMap &phi, unsigned k, unsigned out_degree,
                                     const std::optional<ExactMatrix> &conj = std::nullopt)
{
    if (k == 0) {
        throw precondition_violation("power must be positive");
    }
    SchroederSolution base = std::get<SchroederSolution>(solve(phi, out_degree, SolveMode::independent, conj));
    if (k == 1) {
        return base;
    }
    const std::size_t n = phi.dimension();
    std::vector<Jet> g(n);
    std::size_t start = 0;
    const SpectralData spectral = validate_map(phi, conj);
    for (const auto &blk : spectral.blocks) {
        const std::size_t s = blk.size;
        const Scalar &lambda = blk.eigenvalue;
        const Jet &eigenfunction = base.jordan_map[start + s - 1];
        Jet tail_power = Jet::constant(n, out_degree, Scalar(1));
        for (unsigned e = 1; e < k; ++e) {
            tail_power = tail_power * eigenfunction;
        }
        std::vector<Jet> h;
        for (std::size_t i = 1; i <= s; ++i) {
            const Scalar scale = scalar_inv(pow(lambda, static_cast<std::uint64_t>(k - 1) * (s - i)));
            h.push_back(jet_mul(base.jordan_map[start + i - 1], tail_power) * scale);
        }
        const ExactMatrix jk = mat_pow(jordan_matrix({blk}), k);
        const ExactMatrix et = transition_to_jordan_triangular(jk).transition.transpose();
        for (std::size_t r = 0; r < s; ++r) {
            Jet c(n, out_degree);
            for (std::size_t q = 0; q < s; ++q) {
                c.axpy(et(r, q), h[q]);
            }
            g[start + r] = std::move(c);
        }
        start += s;
    }
    SchroederSolution sol = std::move(base);
    sol.power = k;
    sol.jordan_map = PolyMap(std::move(g));
    const ExactMatrix &d = sol.conjugator;
    sol.map = apply_linear(inverse(d), precompose_linear(sol.jordan_map, d));
    sol.jacobian = linear_part(sol.map);
    detail::record_residual(sol, phi, mat_pow(linear_part(phi), k), out_degree);
    return sol;
}

// Advisory floating-point check of |phi(z)| < |z| at random points of the
// unit ball. Returns the number of sample points violating it.
inline std::size_t sample_self_map(const PolyMap &phi, std::size_t count, std::uint64_t seed)
{
    const std::size_t n = phi.dimension();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t violations = 0;
    for (std::size_t t = 0; t < count; ++t) {
        std::vector<std::complex<double>> z(n);
        double norm = 0.0;
        for (auto &x : z) {
            x = {normal(rng), normal(rng)};
            norm += std::norm(x);
        }
        norm = std::sqrt(norm);
        const double radius = std::pow(unit(rng), 1.0 / (2.0 * static_cast<double>(n)));
        for (auto &x : z) {
            x *= radius / norm;
        }
        double image = 0.0;
        for (const auto &c : phi.components()) {
            image += std::norm(evaluate(c, z));
        }
        if (std::sqrt(image) >= radius) {
            ++violations;
        }
    }
    return violations;
}

} // namespace schroeder

#endif
