#ifndef SCHROEDER_DOCUMENT_HPP
#define SCHROEDER_DOCUMENT_HPP

#include <cstddef>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <schroeder/comp_operator.hpp>
#include <schroeder/engine.hpp>
#include <schroeder/errors.hpp>
#include <schroeder/jet.hpp>
#include <schroeder/matrix.hpp>
#include <schroeder/monomial.hpp>
#include <schroeder/poly_map.hpp>
#include <schroeder/scalar.hpp>

namespace schroeder
{

using json = nlohmann::ordered_json;

// A map (or candidate solution) as read from / written to disk. Documents
// describe polynomials: degree is the truncation the jets are known through
// and defaults to the largest degree present.
struct MapDocument {
    PolyMap map;
    std::optional<ExactMatrix> conjugator;
    std::optional<unsigned> degree;

    friend bool operator==(const MapDocument &, const MapDocument &) = default;
};

namespace detail
{

[[noreturn]] inline void field_error(const std::string &path, const std::string &what)
{
    throw parse_error(path + ": " + what);
}

inline const json &require(const json &obj, const char *key, const std::string &path)
{
    if (!obj.is_object()) {
        field_error(path, "expected an object");
    }
    const auto it = obj.find(key);
    if (it == obj.end()) {
        field_error(path, std::string("missing field \"") + key + "\"");
    }
    return *it;
}

inline rational rational_field(const json &v, const std::string &path)
{
    if (!v.is_string()) {
        field_error(path, "rationals must be strings such as \"-3/4\"");
    }
    try {
        return parse_rational(v.get<std::string>());
    } catch (const parse_error &e) {
        field_error(path, e.what());
    }
}

inline unsigned unsigned_field(const json &v, const std::string &path)
{
    if (!v.is_number_unsigned()) {
        field_error(path, "expected a nonnegative integer");
    }
    return v.get<unsigned>();
}

} // namespace detail

inline json scalar_to_json(const Scalar &s)
{
    return json{{"re", format_rational(s.re())}, {"im", format_rational(s.im())}};
}

inline Scalar scalar_from_json(const json &v, const std::string &path)
{
    const rational re = detail::rational_field(detail::require(v, "re", path), path + ".re");
    rational im(0);
    if (const auto it = v.find("im"); it != v.end()) {
        im = detail::rational_field(*it, path + ".im");
    }
    return Scalar(re, im);
}

inline json matrix_to_json(const ExactMatrix &m)
{
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            row.push_back(scalar_to_json(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ExactMatrix matrix_from_json(const json &v, const std::string &path)
{
    if (!v.is_array() || v.empty()) {
        detail::field_error(path, "expected a nonempty array of rows");
    }
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string rp = path + "[" + std::to_string(i) + "]";
        if (!v[i].is_array() || v[i].size() != v[0].size()) {
            detail::field_error(rp, "rows must be arrays of equal length");
        }
        Vector row;
        for (std::size_t j = 0; j < v[i].size(); ++j) {
            row.push_back(scalar_from_json(v[i][j], rp + "[" + std::to_string(j) + "]"));
        }
        rows.push_back(std::move(row));
    }
    return ExactMatrix::from_rows(rows, rows.front().size());
}

inline json map_to_json(const MapDocument &doc)
{
    const PolyMap &m = doc.map;
    json out;
    out["dimension"] = m.dimension();
    if (doc.degree) {
        out["degree"] = *doc.degree;
    }
    json comps = json::array();
    for (const auto &c : m.components()) {
        json terms = json::array();
        for (const auto &[alpha, coeff] : c.terms()) {
            terms.push_back(json{{"alpha", alpha.exponents()}, {"coeff", scalar_to_json(coeff)}});
        }
        comps.push_back(std::move(terms));
    }
    out["components"] = std::move(comps);
    if (doc.conjugator) {
        out["conjugator"] = matrix_to_json(*doc.conjugator);
    }
    return out;
}

inline MapDocument map_from_json(const json &v)
{
    const unsigned n = detail::unsigned_field(detail::require(v, "dimension", "document"), "dimension");
    if (n == 0) {
        detail::field_error("dimension", "must be at least 1");
    }
    std::optional<unsigned> degree;
    if (const auto it = v.find("degree"); it != v.end()) {
        degree = detail::unsigned_field(*it, "degree");
    }
    const json &comps = detail::require(v, "components", "document");
    if (!comps.is_array() || comps.size() != n) {
        detail::field_error("components", "expected " + std::to_string(n) + " components");
    }

    struct Term {
        MultiIndex alpha;
        Scalar coeff;
    };
    std::vector<std::vector<Term>> parsed(n);
    unsigned max_degree = 1;
    for (std::size_t j = 0; j < n; ++j) {
        const std::string cp = "components[" + std::to_string(j) + "]";
        if (!comps[j].is_array()) {
            detail::field_error(cp, "expected an array of terms");
        }
        std::set<std::vector<MultiIndex::exponent_type>> seen;
        for (std::size_t t = 0; t < comps[j].size(); ++t) {
            const std::string tp = cp + "[" + std::to_string(t) + "]";
            const json &alpha = detail::require(comps[j][t], "alpha", tp);
            if (!alpha.is_array() || alpha.size() != n) {
                detail::field_error(tp + ".alpha", "expected " + std::to_string(n) + " exponents");
            }
            std::vector<MultiIndex::exponent_type> exps;
            for (std::size_t i = 0; i < n; ++i) {
                exps.push_back(detail::unsigned_field(alpha[i], tp + ".alpha[" + std::to_string(i) + "]"));
            }
            if (!seen.insert(exps).second) {
                detail::field_error(tp + ".alpha", "duplicate monomial in component");
            }
            MultiIndex mi(exps);
            max_degree = std::max(max_degree, mi.degree());
            parsed[j].push_back({std::move(mi), scalar_from_json(detail::require(comps[j][t], "coeff", tp), tp + ".coeff")});
        }
    }

    const unsigned truncation = degree.value_or(max_degree);
    std::vector<Jet> jets;
    for (const auto &terms : parsed) {
        Jet f(n, truncation);
        for (const auto &term : terms) {
            f.set(term.alpha, term.coeff);
        }
        jets.push_back(std::move(f));
    }
    MapDocument doc{PolyMap(std::move(jets)), std::nullopt, degree};
    if (const auto it = v.find("conjugator"); it != v.end()) {
        doc.conjugator = matrix_from_json(*it, "conjugator");
        if (doc.conjugator->rows() != n || doc.conjugator->cols() != n) {
            detail::field_error("conjugator", "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
        }
    }
    return doc;
}

// Parses text; JSON syntax errors carry the line and column of the failure.
inline json parse_json_text(const std::string &text, const std::string &source)
{
    try {
        return json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw parse_error(source + ": " + e.what());
    }
}

inline std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw parse_error(path + ": cannot open file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline MapDocument load_map(const std::string &path)
{
    try {
        return map_from_json(parse_json_text(read_file(path), path));
    } catch (const parse_error &e) {
        const std::string what = e.what();
        throw parse_error(what.rfind(path, 0) == 0 ? what : path + ": " + what);
    }
}

// The machine-readable report emitted by every subcommand. Only the parts
// relevant to the command are present.
struct ReportDocument {
    std::string command;
    std::optional<bool> verdict;
    std::optional<unsigned> degree_bound;
    std::optional<std::size_t> operator_size;
    std::vector<JordanBlock> blocks;
    std::vector<Scalar> resonant;
    std::vector<EigenRecord> records;
    std::optional<std::string> mode;
    std::optional<unsigned> power;
    std::optional<MapDocument> solution;
    std::optional<ExactMatrix> jacobian;
    std::optional<int> residual_degree;
    std::optional<ResidualReport> residual;
    std::vector<MultiIndex> basis;
    std::optional<ExactMatrix> matrix;
};

inline bool operator==(const EigenRecord &a, const EigenRecord &b)
{
    return a.eigenvalue == b.eigenvalue && a.resonant == b.resonant && a.d_orig == b.d_orig && a.d_ker == b.d_ker
           && a.d_proj == b.d_proj && a.kernel_criterion == b.kernel_criterion && a.chains_extend == b.chains_extend
           && a.full_rank_possible == b.full_rank_possible;
}

inline bool operator==(const ResidualReport &a, const ResidualReport &b)
{
    return a.vanishing_degree == b.vanishing_degree && a.checked_degree == b.checked_degree && a.vanishes == b.vanishes
           && a.offending_component == b.offending_component && a.offending_monomial == b.offending_monomial
           && a.jacobian_rank == b.jacobian_rank && a.component_rank == b.component_rank
           && a.degenerate == b.degenerate;
}

inline bool operator==(const ReportDocument &a, const ReportDocument &b)
{
    return a.command == b.command && a.verdict == b.verdict && a.degree_bound == b.degree_bound
           && a.operator_size == b.operator_size && a.blocks == b.blocks && a.resonant == b.resonant
           && a.records == b.records && a.mode == b.mode && a.power == b.power && a.solution == b.solution
           && a.jacobian == b.jacobian && a.residual_degree == b.residual_degree && a.residual == b.residual
           && a.basis == b.basis && a.matrix == b.matrix;
}

inline ReportDocument report_from_analysis(const AnalysisReport &r, const SpectralData &s)
{
    ReportDocument doc;
    doc.command = "analyze";
    doc.verdict = r.verdict;
    doc.degree_bound = r.degree;
    doc.operator_size = r.size;
    doc.blocks = r.blocks;
    doc.resonant = s.resonant;
    doc.records = r.records;
    return doc;
}

inline json report_to_json(const ReportDocument &r)
{
    json out;
    out["command"] = r.command;
    if (r.verdict) {
        out["verdict"] = *r.verdict;
    }
    if (r.degree_bound) {
        out["K"] = *r.degree_bound;
    }
    if (r.operator_size) {
        out["N"] = *r.operator_size;
    }
    if (!r.blocks.empty()) {
        json blocks = json::array();
        for (const auto &b : r.blocks) {
            blocks.push_back(json{{"eigenvalue", scalar_to_json(b.eigenvalue)}, {"size", b.size}});
        }
        out["blocks"] = std::move(blocks);
    }
    if (r.verdict) {
        json res = json::array();
        for (const auto &s : r.resonant) {
            res.push_back(scalar_to_json(s));
        }
        out["resonant"] = std::move(res);
    }
    if (!r.records.empty()) {
        json recs = json::array();
        for (const auto &e : r.records) {
            recs.push_back(json{{"eigenvalue", scalar_to_json(e.eigenvalue)},
                                {"resonant", e.resonant},
                                {"d_orig", e.d_orig},
                                {"d_ker", e.d_ker},
                                {"d_proj", e.d_proj},
                                {"kernel_criterion", e.kernel_criterion},
                                {"chains_extend", e.chains_extend},
                                {"full_rank_possible", e.full_rank_possible}});
        }
        out["eigenvalues"] = std::move(recs);
    }
    if (r.mode) {
        out["mode"] = *r.mode;
    }
    if (r.power) {
        out["k"] = *r.power;
    }
    if (r.solution) {
        out["solution"] = map_to_json(*r.solution);
    }
    if (r.jacobian) {
        out["jacobian"] = matrix_to_json(*r.jacobian);
    }
    if (r.residual_degree) {
        out["residual_degree"] = *r.residual_degree;
    }
    if (r.residual) {
        const ResidualReport &v = *r.residual;
        json res{{"vanishes", v.vanishes},
                 {"vanishing_degree", v.vanishing_degree},
                 {"checked_degree", v.checked_degree},
                 {"jacobian_rank", v.jacobian_rank},
                 {"component_rank", v.component_rank},
                 {"degenerate", v.degenerate}};
        if (v.offending_monomial) {
            res["offending_component"] = *v.offending_component;
            res["offending_monomial"] = v.offending_monomial->exponents();
        }
        out["residual"] = std::move(res);
    }
    if (r.matrix) {
        json basis = json::array();
        for (const auto &m : r.basis) {
            basis.push_back(m.exponents());
        }
        out["basis"] = std::move(basis);
        out["matrix"] = matrix_to_json(*r.matrix);
    }
    return out;
}

inline ReportDocument report_from_json(const json &v)
{
    ReportDocument r;
    r.command = detail::require(v, "command", "report").get<std::string>();
    if (const auto it = v.find("verdict"); it != v.end()) {
        r.verdict = it->get<bool>();
    }
    if (const auto it = v.find("K"); it != v.end()) {
        r.degree_bound = detail::unsigned_field(*it, "K");
    }
    if (const auto it = v.find("N"); it != v.end()) {
        r.operator_size = it->get<std::size_t>();
    }
    if (const auto it = v.find("blocks"); it != v.end()) {
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string p = "blocks[" + std::to_string(i) + "]";
            r.blocks.push_back({scalar_from_json(detail::require((*it)[i], "eigenvalue", p), p + ".eigenvalue"),
                                (*it)[i].at("size").get<std::size_t>()});
        }
    }
    if (const auto it = v.find("resonant"); it != v.end()) {
        for (std::size_t i = 0; i < it->size(); ++i) {
            r.resonant.push_back(scalar_from_json((*it)[i], "resonant[" + std::to_string(i) + "]"));
        }
    }
    if (const auto it = v.find("eigenvalues"); it != v.end()) {
        for (std::size_t i = 0; i < it->size(); ++i) {
            const json &e = (*it)[i];
            const std::string p = "eigenvalues[" + std::to_string(i) + "]";
            EigenRecord rec;
            rec.eigenvalue = scalar_from_json(detail::require(e, "eigenvalue", p), p + ".eigenvalue");
            rec.resonant = e.at("resonant").get<bool>();
            rec.d_orig = e.at("d_orig").get<std::size_t>();
            rec.d_ker = e.at("d_ker").get<std::size_t>();
            rec.d_proj = e.at("d_proj").get<std::size_t>();
            rec.kernel_criterion = e.at("kernel_criterion").get<bool>();
            rec.chains_extend = e.at("chains_extend").get<bool>();
            rec.full_rank_possible = e.at("full_rank_possible").get<bool>();
            r.records.push_back(std::move(rec));
        }
    }
    if (const auto it = v.find("mode"); it != v.end()) {
        r.mode = it->get<std::string>();
    }
    if (const auto it = v.find("k"); it != v.end()) {
        r.power = detail::unsigned_field(*it, "k");
    }
    if (const auto it = v.find("solution"); it != v.end()) {
        r.solution = map_from_json(*it);
    }
    if (const auto it = v.find("jacobian"); it != v.end()) {
        r.jacobian = matrix_from_json(*it, "jacobian");
    }
    if (const auto it = v.find("residual_degree"); it != v.end()) {
        r.residual_degree = it->get<int>();
    }
    if (const auto it = v.find("residual"); it != v.end()) {
        ResidualReport res;
        res.vanishes = it->at("vanishes").get<bool>();
        res.vanishing_degree = it->at("vanishing_degree").get<int>();
        res.checked_degree = it->at("checked_degree").get<unsigned>();
        res.jacobian_rank = it->at("jacobian_rank").get<std::size_t>();
        res.component_rank = it->at("component_rank").get<std::size_t>();
        res.degenerate = it->at("degenerate").get<bool>();
        if (const auto om = it->find("offending_monomial"); om != it->end()) {
            res.offending_component = it->at("offending_component").get<std::size_t>();
            res.offending_monomial = MultiIndex(om->get<std::vector<MultiIndex::exponent_type>>());
        }
        r.residual = res;
    }
    if (const auto it = v.find("matrix"); it != v.end()) {
        for (const auto &b : v.at("basis")) {
            r.basis.emplace_back(b.get<std::vector<MultiIndex::exponent_type>>());
        }
        r.matrix = matrix_from_json(*it, "matrix");
    }
    return r;
}

inline std::string dump(const json &j)
{
    return j.dump(2) + "\n";
}

} // namespace schroeder

#endif
