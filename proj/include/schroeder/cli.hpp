#ifndef SCHROEDER_CLI_HPP
#define SCHROEDER_CLI_HPP

#include <cstdint>
#include <exception>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <schroeder/comp_operator.hpp>
#include <schroeder/document.hpp>
#include <schroeder/engine.hpp>
#include <schroeder/errors.hpp>
#include <schroeder/matrix.hpp>
#include <schroeder/poly_map.hpp>

namespace schroeder::cli
{

enum exit_code : int { ok = 0, invalid = 1, not_full_rank = 2 };

struct Options {
    std::string input;
    std::string candidate;
    std::string matrix_path;
    std::string out;
    std::string format = "text";
    std::string mode = "full-rank";
    unsigned degree = default_output_degree;
    unsigned k = 1;
    std::size_t samples = 0;
    std::uint64_t seed = 1;
};

namespace detail
{

inline std::string yes_no(bool b)
{
    return b ? "yes" : "no";
}

inline std::string scalar_list(const std::vector<Scalar> &v)
{
    if (v.empty()) {
        return "none";
    }
    std::string s;
    for (const auto &x : v) {
        s += (s.empty() ? "" : ", ") + x.to_string();
    }
    return s;
}

inline void print_analysis(std::ostream &os, const ReportDocument &r)
{
    os << "Jordan blocks of phi'(0)^t:";
    for (const auto &b : r.blocks) {
        os << " [" << b.eigenvalue << " x" << b.size << "]";
    }
    os << "\nresonant eigenvalues: " << scalar_list(r.resonant) << "\n";
    os << "truncation degree K = " << *r.degree_bound << ", operator size N = " << *r.operator_size << "\n\n";
    os << std::left << std::setw(14) << "eigenvalue" << std::setw(10) << "resonant" << std::setw(8) << "d_orig"
       << std::setw(7) << "d_ker" << std::setw(8) << "d_proj" << std::setw(8) << "kernel" << std::setw(8)
       << "chains" << "full-rank\n";
    for (const auto &e : r.records) {
        os << std::setw(14) << e.eigenvalue.to_string() << std::setw(10) << yes_no(e.resonant) << std::setw(8)
           << e.d_orig << std::setw(7) << e.d_ker << std::setw(8) << e.d_proj << std::setw(8)
           << yes_no(e.kernel_criterion) << std::setw(8) << yes_no(e.chains_extend) << yes_no(e.full_rank_possible)
           << "\n";
    }
    os << std::right << "\nverdict: " << (*r.verdict ? "a full-rank solution exists" : "no full-rank solution")
       << "\n";
}

inline void print_solution(std::ostream &os, const ReportDocument &r)
{
    if (r.power && *r.power > 1) {
        os << "solution of F o phi = phi'(0)^" << *r.power << " F";
    } else {
        os << "solution of F o phi = phi'(0) F";
    }
    os << " (" << *r.mode << " mode) through degree " << *r.solution->degree << ":\n";
    os << r.solution->map;
    os << "F'(0) =\n" << *r.jacobian;
    os << "residual vanishes through degree " << *r.residual_degree << "\n";
}

inline void print_residual(std::ostream &os, const ResidualReport &v)
{
    if (v.vanishes) {
        os << "residual vanishes through degree " << v.checked_degree << "\n";
    } else {
        os << "residual vanishes through degree " << v.vanishing_degree << "; first nonzero term "
           << v.offending_monomial->monomial_string() << " in component " << *v.offending_component + 1 << "\n";
    }
    os << "rank F'(0) = " << v.jacobian_rank << ", component rank = " << v.component_rank << "\n";
    if (v.degenerate) {
        os << "warning: candidate components are linearly dependent\n";
    }
}

inline void print_matrix(std::ostream &os, const ReportDocument &r)
{
    os << "composition operator on " << r.basis.size() << " monomials of degree <= " << *r.degree_bound << "\n";
    os << "basis:";
    for (const auto &m : r.basis) {
        os << " " << m.monomial_string();
    }
    os << "\n" << *r.matrix;
}

inline void emit(const Options &opt, const ReportDocument &r, std::ostream &out)
{
    const json j = report_to_json(r);
    if (!opt.out.empty()) {
        std::ofstream f(opt.out, std::ios::binary);
        if (!f) {
            throw error("cannot write " + opt.out);
        }
        f << dump(j);
    }
    if (opt.format == "machine") {
        out << dump(j);
        return;
    }
    if (r.command == "matrix") {
        print_matrix(out, r);
        return;
    }
    if (r.verdict && !r.records.empty()) {
        print_analysis(out, r);
    }
    if (r.solution) {
        out << "\n";
        print_solution(out, r);
    } else if (r.command == "solve") {
        out << "\nfull-rank mode failed: no solution with invertible F'(0)\n";
    }
    if (r.residual) {
        print_residual(out, *r.residual);
    }
}

inline void sample_warning(const Options &opt, const PolyMap &phi, std::ostream &err)
{
    if (opt.samples == 0) {
        return;
    }
    const std::size_t bad = sample_self_map(phi, opt.samples, opt.seed);
    if (bad != 0) {
        err << "warning: " << bad << " of " << opt.samples << " sample points have |phi(z)| >= |z|\n";
    }
}

inline ReportDocument analysis_document(const MapDocument &doc)
{
    const SpectralData s = validate_map(doc.map, doc.conjugator);
    return report_from_analysis(analyze(doc.map, doc.conjugator), s);
}

inline int cmd_analyze(const Options &opt, std::ostream &out, std::ostream &err)
{
    const MapDocument doc = load_map(opt.input);
    sample_warning(opt, doc.map, err);
    const ReportDocument r = analysis_document(doc);
    emit(opt, r, out);
    return *r.verdict ? ok : not_full_rank;
}

inline void attach_solution(ReportDocument &r, const SchroederSolution &sol, unsigned degree)
{
    r.mode = to_string(sol.mode);
    r.power = sol.power;
    r.solution = MapDocument{sol.map, std::nullopt, degree};
    r.jacobian = sol.jacobian;
    r.residual_degree = sol.residual_degree;
}

inline int cmd_solve(const Options &opt, std::ostream &out, std::ostream &err)
{
    if (opt.mode != "full-rank" && opt.mode != "independent") {
        throw parse_error("--mode must be full-rank or independent");
    }
    const MapDocument doc = load_map(opt.input);
    sample_warning(opt, doc.map, err);
    ReportDocument r = analysis_document(doc);
    r.command = "solve";
    const SolveMode mode = opt.mode == "full-rank" ? SolveMode::full_rank : SolveMode::independent;
    const SolveResult res = solve(doc.map, opt.degree, mode, doc.conjugator);
    if (std::holds_alternative<NoFullRank>(res)) {
        r.mode = to_string(mode);
        emit(opt, r, out);
        return not_full_rank;
    }
    attach_solution(r, std::get<SchroederSolution>(res), opt.degree);
    emit(opt, r, out);
    return ok;
}

inline int cmd_solve_power(const Options &opt, std::ostream &out, std::ostream &err)
{
    const MapDocument doc = load_map(opt.input);
    sample_warning(opt, doc.map, err);
    ReportDocument r = analysis_document(doc);
    r.command = "solve-power";
    attach_solution(r, solve_power(doc.map, opt.k, opt.degree, doc.conjugator), opt.degree);
    emit(opt, r, out);
    return ok;
}

inline int cmd_verify(const Options &opt, std::ostream &out, std::ostream &)
{
    const MapDocument doc = load_map(opt.input);
    const MapDocument cand = load_map(opt.candidate);
    ExactMatrix b;
    if (!opt.matrix_path.empty()) {
        const json j = parse_json_text(read_file(opt.matrix_path), opt.matrix_path);
        b = matrix_from_json(j.contains("matrix") ? j.at("matrix") : j, "matrix");
    } else {
        b = mat_pow(linear_part(doc.map), opt.k);
    }
    ReportDocument r;
    r.command = "verify";
    r.power = opt.k;
    r.residual = verify(doc.map, cand.map, b, opt.degree);
    emit(opt, r, out);
    return r.residual->vanishes && !r.residual->degenerate ? ok : not_full_rank;
}

inline int cmd_matrix(const Options &opt, bool degree_given, std::ostream &out, std::ostream &)
{
    const MapDocument doc = load_map(opt.input);
    const SpectralData s = validate_map(doc.map, doc.conjugator);
    const unsigned k = degree_given ? opt.degree : truncation_degree(s.eigenvalues);
    PolyMap phi = doc.map.with_truncation(std::max(k, doc.map.truncation()));
    if (doc.conjugator) {
        phi = conjugate_map(phi, *doc.conjugator);
    }
    const TruncatedCompOp op = build(phi, k);
    ReportDocument r;
    r.command = "matrix";
    r.degree_bound = k;
    r.operator_size = op.size();
    r.basis = op.basis.monomials();
    r.matrix = op.u;
    emit(opt, r, out);
    return ok;
}

} // namespace detail

inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Exact solver for Schroeder's equation F o phi = phi'(0) F", "schroeder"};
    app.require_subcommand(1);
    Options opt;

    const auto common = [&](CLI::App *sub) {
        sub->add_option("map", opt.input, "map document (JSON)")->required();
        sub->add_option("--out", opt.out, "also write the machine report to this file");
        sub->add_option("--format", opt.format, "stdout format")->check(CLI::IsMember({"text", "machine"}));
    };
    const auto sampling = [&](CLI::App *sub) {
        sub->add_option("--sample-check", opt.samples, "sample points for the |phi(z)| < |z| warning");
        sub->add_option("--seed", opt.seed, "seed for --sample-check");
    };

    CLI::App *analyze_cmd = app.add_subcommand("analyze", "decide whether a full-rank solution exists");
    common(analyze_cmd);
    sampling(analyze_cmd);

    CLI::App *solve_cmd = app.add_subcommand("solve", "construct a truncated solution");
    common(solve_cmd);
    sampling(solve_cmd);
    solve_cmd->add_option("--degree", opt.degree, "output degree");
    solve_cmd->add_option("--mode", opt.mode, "full-rank or independent")
        ->check(CLI::IsMember({"full-rank", "independent"}));

    CLI::App *power_cmd = app.add_subcommand("solve-power", "solve F o phi = phi'(0)^k F");
    common(power_cmd);
    sampling(power_cmd);
    power_cmd->add_option("--degree", opt.degree, "output degree");
    power_cmd->add_option("--k", opt.k, "power of the linear part")->check(CLI::PositiveNumber);

    CLI::App *verify_cmd = app.add_subcommand("verify", "check a candidate solution");
    common(verify_cmd);
    verify_cmd->add_option("candidate", opt.candidate, "candidate solution document (JSON)")->required();
    verify_cmd->add_option("--degree", opt.degree, "check through this degree");
    auto *k_opt = verify_cmd->add_option("--k", opt.k, "compare against phi'(0)^k")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--matrix", opt.matrix_path, "compare against this matrix instead")->excludes(k_opt);

    CLI::App *matrix_cmd = app.add_subcommand("matrix", "dump the truncated composition operator");
    common(matrix_cmd);
    CLI::Option *matrix_degree = matrix_cmd->add_option("--degree", opt.degree, "truncation degree (default K)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : invalid;
    }

    try {
        if (analyze_cmd->parsed()) {
            return detail::cmd_analyze(opt, out, err);
        }
        if (solve_cmd->parsed()) {
            return detail::cmd_solve(opt, out, err);
        }
        if (power_cmd->parsed()) {
            return detail::cmd_solve_power(opt, out, err);
        }
        if (verify_cmd->parsed()) {
            return detail::cmd_verify(opt, out, err);
        }
        return detail::cmd_matrix(opt, matrix_degree->count() > 0, out, err);
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return invalid;
    }
}

} // namespace schroeder::cli

#endif
