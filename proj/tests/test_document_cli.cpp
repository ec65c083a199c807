#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <schroeder/cli.hpp>
#include <schroeder/document.hpp>

#include "support.hpp"

using namespace schroeder;
using testing_support::q;
using testing_support::Random;

namespace
{

std::string sample(const std::string &name)
{
    return std::string(SCHROEDER_SAMPLES_DIR) + "/" + name + ".json";
}

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "schroeder");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string &name, const std::string &content)
{
    const auto path = std::filesystem::temp_directory_path() / ("schroeder_test_" + name);
    std::ofstream(path) << content;
    return path;
}

std::string parse_failure(const std::string &text)
{
    try {
        map_from_json(json::parse(text));
    } catch (const parse_error &e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(Document, ScalarRoundTrip)
{
    Random rnd(3);
    for (int t = 0; t < 100; ++t) {
        const Scalar s = rnd.gaussian(50, 97);
        EXPECT_EQ(scalar_from_json(scalar_to_json(s), "x"), s);
    }
    EXPECT_EQ(scalar_from_json(json{{"re", "-3/6"}}, "x"), q(-1, 2));
    EXPECT_THROW(scalar_from_json(json{{"re", 0.5}}, "x"), parse_error);
    EXPECT_THROW(scalar_from_json(json{{"im", "1"}}, "x"), parse_error);
}

TEST(Document, MapRoundTrip)
{
    Random rnd(10);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = static_cast<std::size_t>(rnd.integer(1, 4));
        const unsigned degree = static_cast<unsigned>(rnd.integer(1, 4));
        std::vector<Jet> comps;
        for (std::size_t j = 0; j < n; ++j) {
            comps.push_back(rnd.random_jet(n, degree, degree, 0.4, rnd.coin(0.2)));
        }
        MapDocument doc{PolyMap(std::move(comps)), std::nullopt, degree};
        if (rnd.coin()) {
            doc.conjugator = ExactMatrix::identity(n);
            (*doc.conjugator)(0, n - 1) = rnd.gaussian();
        }
        const json j = map_to_json(doc);
        EXPECT_EQ(map_from_json(j), doc);
        EXPECT_EQ(map_from_json(json::parse(dump(j))), doc);
    }
}

TEST(Document, DegreeDefaultsToTheLargestDegreePresent)
{
    const MapDocument doc = load_map(sample("s_ex0"));
    EXPECT_EQ(doc.map, testing_support::s_ex0(2));
    EXPECT_FALSE(doc.degree.has_value());
    EXPECT_FALSE(doc.conjugator.has_value());
}

TEST(Document, FieldErrorsNameThePath)
{
    EXPECT_NE(parse_failure(R"({"components": []})").find("dimension"), std::string::npos);
    EXPECT_NE(parse_failure(R"({"dimension": 2, "components": [[]]})").find("components"), std::string::npos);
    EXPECT_NE(parse_failure(R"({"dimension": 1, "components": [[{"alpha": [1, 0], "coeff": {"re": "1"}}]]})")
                  .find("components[0][0].alpha"),
              std::string::npos);
    EXPECT_NE(parse_failure(R"({"dimension": 1, "components": [[{"alpha": [1], "coeff": {"re": "1"}},
                                                                 {"alpha": [1], "coeff": {"re": "2"}}]]})")
                  .find("duplicate"),
              std::string::npos);
    EXPECT_NE(parse_failure(R"({"dimension": 1, "components": [[{"alpha": [1], "coeff": {"re": "1/0"}}]]})")
                  .find("components[0][0].coeff.re"),
              std::string::npos);
    EXPECT_NE(parse_failure(R"({"dimension": 1, "components": [[{"alpha": [-1], "coeff": {"re": "1"}}]]})")
                  .find("alpha[0]"),
              std::string::npos);
    EXPECT_NE(parse_failure(R"({"dimension": 0, "components": []})").find("dimension"), std::string::npos);
    EXPECT_NE(parse_failure(R"({"dimension": 1, "components": [[]], "conjugator": [[{"re": "1"}, {"re": "0"}]]})")
                  .find("conjugator"),
              std::string::npos);
}

TEST(Document, SyntaxErrorsCarryThePosition)
{
    const auto path = temp_file("broken.json", "{\n  \"dimension\": 1,\n  \"components\": [\n}\n");
    try {
        load_map(path.string());
        FAIL() << "expected a parse error";
    } catch (const parse_error &e) {
        const std::string what = e.what();
        EXPECT_EQ(what.rfind(path.string(), 0), 0U) << what;
        EXPECT_NE(what.find("line 4"), std::string::npos) << what;
    }
    EXPECT_THROW(load_map("/nonexistent/map.json"), parse_error);
}

TEST(Document, ReportRoundTrip)
{
    for (const auto &name : {"s_ex0", "c_e1", "jordan_block", "rotated"}) {
        const MapDocument doc = load_map(sample(name));
        ReportDocument r = report_from_analysis(analyze(doc.map, doc.conjugator), validate_map(doc.map));
        EXPECT_EQ(report_from_json(report_to_json(r)), r) << name;

        const SchroederSolution sol = std::get<SchroederSolution>(solve(doc.map, 5, SolveMode::independent));
        r.command = "solve";
        r.mode = "independent";
        r.power = 1;
        r.solution = MapDocument{sol.map, std::nullopt, 5U};
        r.jacobian = sol.jacobian;
        r.residual_degree = sol.residual_degree;
        r.residual = verify(doc.map, sol.map, linear_part(doc.map), 5);
        EXPECT_EQ(report_from_json(json::parse(dump(report_to_json(r)))), r) << name;
    }
}

TEST(Cli, AnalyzeExitCodes)
{
    EXPECT_EQ(run_cli({"analyze", sample("s_ex0")}).code, 2);
    EXPECT_EQ(run_cli({"analyze", sample("c_e1")}).code, 0);
    EXPECT_EQ(run_cli({"analyze", sample("r_ex2")}).code, 0);
    EXPECT_EQ(run_cli({"analyze", sample("rotated")}).code, 0);

    const CliRun singular = run_cli({"analyze", sample("singular")});
    EXPECT_EQ(singular.code, 1);
    EXPECT_NE(singular.err.find("error: phi'(0) not invertible"), std::string::npos) << singular.err;

    const CliRun missing = run_cli({"analyze", "/nonexistent/map.json"});
    EXPECT_EQ(missing.code, 1);
    EXPECT_NE(missing.err.find("cannot open"), std::string::npos);
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run_cli({}).code, 1);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
    EXPECT_EQ(run_cli({"analyze"}).code, 1);
    EXPECT_EQ(run_cli({"solve", sample("c_e1"), "--mode", "sideways"}).code, 1);
    EXPECT_EQ(run_cli({"solve-power", sample("c_e1"), "--k", "0"}).code, 1);
    EXPECT_EQ(run_cli({"solve", sample("c_e1"), "--degree", "2"}).code, 1);
    const CliRun help = run_cli({"--help"});
    EXPECT_EQ(help.code, 0);
    EXPECT_NE(help.out.find("solve-power"), std::string::npos);
}

TEST(Cli, AnalyzeTextOutput)
{
    const CliRun r = run_cli({"analyze", sample("s_ex0")});
    EXPECT_NE(r.out.find("truncation degree K = 2, operator size N = 5"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("resonant eigenvalues: 1/4"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("verdict: no full-rank solution"), std::string::npos) << r.out;
}

TEST(Cli, AnalyzeMachineOutput)
{
    const CliRun r = run_cli({"analyze", sample("c_e1"), "--format", "machine"});
    ASSERT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    EXPECT_EQ(j.at("command"), "analyze");
    EXPECT_EQ(j.at("verdict"), true);
    EXPECT_EQ(j.at("K"), 3);
    EXPECT_EQ(j.at("N"), 34);
    EXPECT_EQ(j.at("eigenvalues").size(), 3U);
    EXPECT_EQ(j.at("eigenvalues")[1].at("d_ker"), 2);
}

TEST(Cli, SolveModes)
{
    EXPECT_EQ(run_cli({"solve", sample("s_ex0")}).code, 2);
    const CliRun ind = run_cli({"solve", sample("s_ex0"), "--mode", "independent", "--format", "machine"});
    ASSERT_EQ(ind.code, 0) << ind.err;
    const ReportDocument r = report_from_json(json::parse(ind.out));
    EXPECT_EQ(r.solution->map,
              PolyMap({Jet::variable(2, 0, 10), Jet::monomial({2, 0}, 10, q(1, 16))}));
    EXPECT_EQ(r.residual_degree, 10);

    const CliRun full = run_cli({"solve", sample("c_e1"), "--degree", "6", "--format", "machine"});
    ASSERT_EQ(full.code, 0) << full.err;
    const ReportDocument f = report_from_json(json::parse(full.out));
    EXPECT_EQ(rank(*f.jacobian), 4U);
    EXPECT_EQ(f.residual_degree, 6);
    EXPECT_EQ(f.mode, "full-rank");

    const CliRun text = run_cli({"solve", sample("jordan_block"), "--degree", "4"});
    EXPECT_EQ(text.code, 0) << text.err;
    EXPECT_NE(text.out.find("residual vanishes through degree 4"), std::string::npos) << text.out;
}

TEST(Cli, SolvePowerAndVerify)
{
    const auto dir = std::filesystem::temp_directory_path();
    const auto cand = dir / "schroeder_test_power.json";
    const auto report = dir / "schroeder_test_power_report.json";
    const CliRun p = run_cli({"solve-power", sample("c_e1"), "--k", "2", "--degree", "6", "--out", report.string()});
    ASSERT_EQ(p.code, 0) << p.err;
    const json j = parse_json_text(read_file(report.string()), "report");
    EXPECT_EQ(j.at("k"), 2);
    std::ofstream(cand) << dump(j.at("solution"));

    EXPECT_EQ(run_cli({"verify", sample("c_e1"), cand.string(), "--k", "2", "--degree", "6"}).code, 0);
    const CliRun wrong = run_cli({"verify", sample("c_e1"), cand.string(), "--degree", "6"});
    EXPECT_EQ(wrong.code, 2);
    EXPECT_NE(wrong.out.find("first nonzero term"), std::string::npos) << wrong.out;

    EXPECT_EQ(run_cli({"verify", sample("c_e1"), sample("c_e1_solution"), "--matrix", sample("c_e1_jordan")}).code, 0);
    EXPECT_EQ(run_cli({"verify", sample("c_e1"), sample("c_e1_solution")}).code, 2);
    EXPECT_EQ(run_cli({"verify", sample("s_ex0"), sample("c_e1_solution")}).code, 1);

    // A bare array is accepted as well as {"matrix": ...}.
    const auto mat = temp_file("matrix.json", dump(matrix_to_json(testing_support::c_e1_jordan_matrix())));
    EXPECT_EQ(run_cli({"verify", sample("c_e1"), sample("c_e1_solution"), "--matrix", mat.string()}).code, 0);
    EXPECT_EQ(run_cli({"verify", sample("c_e1"), sample("c_e1_solution"), "--matrix", mat.string(), "--k", "2"}).code,
              1);

    // The zero map solves every linear equation but is degenerate.
    const auto zero = temp_file("zero.json", R"({"dimension": 2, "components": [[], []]})");
    const CliRun z = run_cli({"verify", sample("s_ex0"), zero.string()});
    EXPECT_EQ(z.code, 2);
    EXPECT_NE(z.out.find("warning"), std::string::npos);
}

TEST(Cli, MatrixDump)
{
    const CliRun r = run_cli({"matrix", sample("s_ex0"), "--format", "machine"});
    ASSERT_EQ(r.code, 0) << r.err;
    const ReportDocument doc = report_from_json(json::parse(r.out));
    EXPECT_EQ(doc.degree_bound, 2U);
    EXPECT_EQ(doc.basis, enumerate_monomials(2, 2));
    EXPECT_EQ(*doc.matrix, build(testing_support::s_ex0(), 2).u);

    const CliRun three = run_cli({"matrix", sample("s_ex0"), "--degree", "3", "--format", "machine"});
    EXPECT_EQ(json::parse(three.out).at("N"), 9);
    EXPECT_NE(run_cli({"matrix", sample("s_ex0")}).out.find("basis: z1 z2 z1^2 z1*z2 z2^2"), std::string::npos);
}

TEST(Cli, MachineOutputIsDeterministic)
{
    for (const auto &args : std::vector<std::vector<std::string>>{
             {"analyze", sample("c_e1"), "--format", "machine"},
             {"solve", sample("rotated"), "--degree", "5", "--format", "machine"},
             {"solve-power", sample("jordan_block"), "--k", "3", "--degree", "5", "--format", "machine"},
             {"matrix", sample("c_e1"), "--format", "machine"}}) {
        const CliRun a = run_cli(args);
        const CliRun b = run_cli(args);
        EXPECT_EQ(a.code, b.code);
        EXPECT_EQ(a.out, b.out);
        EXPECT_FALSE(a.out.empty());
    }
}

TEST(Cli, SampleCheckWarns)
{
    const auto big = temp_file("big.json", R"({"dimension": 1, "components": [[{"alpha": [1], "coeff": {"re": "9/10"}},
                                                                              {"alpha": [2], "coeff": {"re": "3"}}]]})");
    const CliRun r = run_cli({"analyze", big.string(), "--sample-check", "100"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("warning"), std::string::npos);
    EXPECT_TRUE(run_cli({"analyze", sample("s_ex0"), "--sample-check", "100"}).err.empty());
}
