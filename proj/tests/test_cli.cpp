// End-to-end tests of the command-line tool; each case runs the real
// binary on files in a scratch directory.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

const fs::path& scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("wedge_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

RunResult run_cli(const std::string& args) {
    const fs::path out_path = scratch_dir() / "stdout.txt";
    const fs::path err_path = scratch_dir() / "stderr.txt";
    const std::string cmd = std::string(WEDGE_CLI_PATH) + " " + args + " >" +
                            out_path.string() + " 2>" + err_path.string();
    const int status = std::system(cmd.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, slurp(out_path), slurp(err_path)};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string cur;
        for (const char c : line) {
            if (c == ',') {
                fields.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur.push_back(c);
            }
        }
        fields.push_back(cur);
        rows.push_back(fields);
    }
    return rows;
}

}  // namespace

TEST_CASE("cli wedge: evaluates, preserves order, reports trivial rows") {
    const fs::path in = scratch_dir() / "in.csv";
    const fs::path out = scratch_dir() / "out.csv";
    spit(in, "a1,b1,a2,b2\n1,1,1,1\n1,-1,1,1\n1,2,3,4\n");
    const RunResult r =
        run_cli("wedge " + in.string() + " -o " + out.string());
    CHECK(r.exit_code == 0);

    const auto rows = parse_csv(slurp(out));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"a1", "b1", "a2", "b2", "prob",
                                              "formula", "terms",
                                              "remainder_bound"});
    CHECK(std::stod(rows[1][4]) == doctest::Approx(0.73000032832264548));
    CHECK(rows[1][5] == "theta_dual");
    CHECK(rows[2][4] == "0");
    CHECK(rows[2][5] == "trivial_zero");
    CHECK(rows[2][6] == "0");
    CHECK(rows[3][5] == "doob");
    CHECK(rows[3][6] == "3");

    // Round trip: feeding the outputs back reproduces the prob column.
    std::ostringstream again;
    again << "a1,b1,a2,b2\n";
    for (std::size_t i = 1; i < rows.size(); ++i)
        again << rows[i][0] << ',' << rows[i][1] << ',' << rows[i][2] << ','
              << rows[i][3] << '\n';
    const fs::path in2 = scratch_dir() / "in2.csv";
    spit(in2, again.str());
    const fs::path out2 = scratch_dir() / "out2.csv";
    CHECK(run_cli("wedge " + in2.string() + " -o " + out2.string()).exit_code ==
          0);
    const auto rows2 = parse_csv(slurp(out2));
    REQUIRE(rows2.size() == rows.size());
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows2[i][4] == rows[i][4]);
}

TEST_CASE("cli wedge: reads stdin, writes stdout") {
    const fs::path in = scratch_dir() / "stdin.csv";
    spit(in, "a1,b1,a2,b2\n2,2,2,2\n");
    const RunResult r = run_cli("wedge - <" + in.string());
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][4]) == doctest::Approx(0.99932907474422030));
}

TEST_CASE("cli wedge: header-only input gives header-only output") {
    const fs::path in = scratch_dir() / "empty.csv";
    const fs::path out = scratch_dir() / "empty_out.csv";
    spit(in, "a1,b1,a2,b2\n");
    const RunResult r = run_cli("wedge " + in.string() + " -o " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(slurp(out) == "a1,b1,a2,b2,prob,formula,terms,remainder_bound\n");
}

TEST_CASE("cli wedge: malformed input fails with the line number, no output") {
    const fs::path in = scratch_dir() / "bad.csv";
    const fs::path out = scratch_dir() / "bad_out.csv";
    SUBCASE("wrong arity") { spit(in, "a1,b1,a2,b2\n1,2,3\n"); }
    SUBCASE("not a number") { spit(in, "a1,b1,a2,b2\n1,2,x,4\n"); }
    SUBCASE("nan is rejected") { spit(in, "a1,b1,a2,b2\n1,2,nan,4\n"); }
    SUBCASE("bad header") { spit(in, "a,b,c,d\n1,2,3,4\n"); }
    const RunResult r = run_cli("wedge " + in.string() + " -o " + out.string());
    CHECK(r.exit_code != 0);
    CHECK(!r.err.empty());
    CHECK(r.err.find("line ") != std::string::npos);
    CHECK(!fs::exists(out));  // write-then-rename leaves nothing behind
}

TEST_CASE("cli wedge: term count is validated") {
    const fs::path in = scratch_dir() / "t.csv";
    spit(in, "a1,b1,a2,b2\n1,1,1,1\n");
    CHECK(run_cli("wedge --terms 9 " + in.string()).exit_code != 0);
    CHECK(run_cli("wedge --terms 1 " + in.string()).exit_code != 0);
    CHECK(run_cli("wedge --terms 8 " + in.string()).exit_code == 0);
}

TEST_CASE("cli ks: values") {
    const fs::path in = scratch_dir() / "ks.csv";
    spit(in, "a\n1\n0\n10\n0.5\n");
    const RunResult r = run_cli("ks " + in.string());
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == std::vector<std::string>{"a", "cdf"});
    CHECK(std::stod(rows[1][1]) == doctest::Approx(0.73000032832264548));
    CHECK(rows[2][1] == "0");
    CHECK(rows[3][1] == "1");
    CHECK(std::stod(rows[4][1]) == doctest::Approx(0.036054756335124906));
}

TEST_CASE("cli table: matches the published thresholds") {
    const RunResult r = run_cli("table");
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 8);
    CHECK(rows[0] == std::vector<std::string>{"n_terms", "tau", "epsilon"});
    const double taus[] = {1.380, 1.136, 1.030, 0.973, 0.937, 0.912, 0.895};
    const double epss[] = {2.9e-6, 1.8e-17, 5.1e-34, 5.6e-56,
                           2.3e-83, 3.5e-116, 1.9e-154};
    for (int i = 0; i < 7; ++i) {
        CHECK(std::stoi(rows[i + 1][0]) == i + 2);
        CHECK(std::stod(rows[i + 1][1]) == doctest::Approx(taus[i]).epsilon(1e-3));
        const double eps = std::stod(rows[i + 1][2]);
        CHECK(std::log(eps / epss[i]) == doctest::Approx(0.0).epsilon(0.05));
    }
}

TEST_CASE("cli bcp: wide band, determinism, bad configs") {
    const fs::path cfg = scratch_dir() / "bcp.json";
    spit(cfg, R"({"lower": [[0,-1e10],[2,-1e10]],
                  "upper": [[0,1e10],[2,1e10]],
                  "samples": 500, "seed": 11})");
    const RunResult r = run_cli("bcp " + cfg.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"estimate\": 1.0") != std::string::npos);
    CHECK(r.out.find("\"std_error\": 0.0") != std::string::npos);
    CHECK(r.out.find("\"samples\": 500") != std::string::npos);
    CHECK(r.out.find("\"seed\": 11") != std::string::npos);

    const fs::path band = scratch_dir() / "band.json";
    spit(band, R"({"lower": [[0,-1],[1,-1]], "upper": [[0,1],[1,1]],
                   "samples": 20000, "seed": 3})");
    const RunResult s1 = run_cli("bcp --workers 1 " + band.string());
    const RunResult s2 = run_cli("bcp --workers 2 " + band.string());
    CHECK(s1.exit_code == 0);
    CHECK(s1.out == s2.out);

    const fs::path bad = scratch_dir() / "bad.json";
    spit(bad, "{not json");
    CHECK(run_cli("bcp " + bad.string()).exit_code != 0);

    spit(bad, R"({"lower": [[0,1],[1,1]], "upper": [[0,-1],[1,-1]],
                  "samples": 10, "seed": 1})");
    const RunResult inv = run_cli("bcp " + bad.string());
    CHECK(inv.exit_code != 0);
    CHECK(inv.err.find("knot") != std::string::npos);

    spit(bad, R"({"lower": [[0,-1],[1,-1]], "upper": [[0,1],[1,1]],
                  "samples": 0, "seed": 1})");
    CHECK(run_cli("bcp " + bad.string()).exit_code != 0);

    CHECK(run_cli("bcp " + (scratch_dir() / "missing.json").string())
              .exit_code != 0);
}

TEST_CASE("cli bench: csv plus summary") {
    const fs::path out = scratch_dir() / "study.csv";
    const RunResult r =
        run_cli("bench --count 2000 --seed 5 -o " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("trivial") != std::string::npos);
    CHECK(r.out.find("N=1") != std::string::npos);
    const auto rows = parse_csv(slurp(out));
    REQUIRE(rows.size() == 2001);
    CHECK(rows[0][0] == "a1");
    CHECK(rows[0][7] == "trivial");
}

TEST_CASE("cli time: one row per size/worker pair") {
    const RunResult r = run_cli("time --sizes 1000,2000 --workers 1,2");
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == std::vector<std::string>{"n", "workers", "seconds"});
    CHECK(rows[1][0] == "1000");
    CHECK(rows[2][1] == "2");
    CHECK(run_cli("time --sizes 0 --workers 1").exit_code != 0);
}

TEST_CASE("cli: WEDGE_WORKERS is honored") {
    const fs::path in = scratch_dir() / "env.csv";
    spit(in, "a1,b1,a2,b2\n1,1,1,1\n");
    const RunResult r =
        run_cli("wedge " + in.string() + " ");  // env set via command prefix
    CHECK(r.exit_code == 0);
    const std::string cmd = "WEDGE_WORKERS=2 " + std::string(WEDGE_CLI_PATH) +
                            " wedge " + in.string() + " >/dev/null 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
}
