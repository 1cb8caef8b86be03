// Command-line front end: wedge probabilities over CSV, the KS
// distribution, thresholds, the piecewise-linear boundary crossing solver,
// the convergence study and the timing harness.

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wedge/batch.hpp"
#include "wedge/bcp.hpp"
#include "wedge/core.hpp"
#include "wedge/study.hpp"

namespace {

using json = nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// CSV input: header required, ',' separator, '.' decimal, optional '\r'.

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (const char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r'))
        --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& token, std::size_t line_no) {
    const std::string t = trim(token);
    if (t.empty())
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": empty field");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": invalid number '" + t + "'");
    return v;
}

// Reads rows of `ncols` numbers after a header that must match exactly.
std::vector<std::vector<double>> read_csv(std::istream& in,
                                          const std::vector<std::string>& header) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("line 1: missing header");
    {
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != header.size())
            throw std::runtime_error("line 1: expected " +
                                     std::to_string(header.size()) +
                                     " header fields");
        for (std::size_t i = 0; i < header.size(); ++i)
            if (trim(fields[i]) != header[i])
                throw std::runtime_error("line 1: expected header column '" +
                                         header[i] + "', got '" +
                                         trim(fields[i]) + "'");
    }
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != header.size())
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": expected " +
                                     std::to_string(header.size()) +
                                     " fields, got " +
                                     std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const std::string& f : fields) row.push_back(parse_number(f, line_no));
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Output: stdout for "-", otherwise write-then-rename so a failure never
// leaves a partial file behind.

void write_output(const std::string& path,
                  const std::function<void(std::ostream&)>& writer) {
    if (path == "-") {
        writer(std::cout);
        std::cout.flush();
        if (!std::cout)
            throw std::runtime_error("failed writing to stdout");
        return;
    }
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open '" + tmp.string() +
                                     "' for writing");
        writer(out);
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("failed writing '" + tmp.string() + "'");
        }
    }
    std::filesystem::rename(tmp, target);
}

std::ifstream open_input_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input '" + path + "'");
    return in;
}

// ---------------------------------------------------------------------------
// Subcommands.

int cmd_wedge(const std::string& input, const std::string& output, int terms,
              int workers) {
    std::vector<std::vector<double>> rows;
    if (input == "-") {
        rows = read_csv(std::cin, {"a1", "b1", "a2", "b2"});
    } else {
        std::ifstream in = open_input_file(input);
        rows = read_csv(in, {"a1", "b1", "a2", "b2"});
    }
    wedge::ParamTable table;
    table.a1.reserve(rows.size());
    for (const auto& r : rows) {
        table.a1.push_back(r[0]);
        table.b1.push_back(r[1]);
        table.a2.push_back(r[2]);
        table.b2.push_back(r[3]);
    }
    const wedge::ResultTable res = wedge::batch_wedge(table, terms, workers);
    write_output(output, [&](std::ostream& out) {
        out << "a1,b1,a2,b2,prob,formula,terms,remainder_bound\n";
        for (std::size_t i = 0; i < res.size(); ++i) {
            out << format_double(table.a1[i]) << ','
                << format_double(table.b1[i]) << ','
                << format_double(table.a2[i]) << ','
                << format_double(table.b2[i]) << ','
                << format_double(res.value[i]) << ','
                << wedge::to_string(res.formula[i]) << ',' << res.terms[i]
                << ',' << format_double(res.remainder_bound[i]) << '\n';
        }
    });
    return 0;
}

int cmd_ks(const std::string& input, const std::string& output) {
    std::vector<std::vector<double>> rows;
    if (input == "-") {
        rows = read_csv(std::cin, {"a"});
    } else {
        std::ifstream in = open_input_file(input);
        rows = read_csv(in, {"a"});
    }
    write_output(output, [&](std::ostream& out) {
        out << "a,cdf\n";
        for (const auto& r : rows)
            out << format_double(r[0]) << ','
                << format_double(wedge::kolmogorov_cdf(r[0])) << '\n';
    });
    return 0;
}

int cmd_table(const std::string& output) {
    const auto& table = wedge::threshold_table();
    write_output(output, [&](std::ostream& out) {
        out << "n_terms,tau,epsilon\n";
        for (const wedge::ThresholdEntry& e : table)
            out << e.n_terms << ',' << format_double(e.tau) << ','
                << format_double(e.epsilon) << '\n';
    });
    return 0;
}

wedge::PiecewiseBoundaryPair parse_bcp_config(const json& cfg,
                                              std::uint64_t& samples,
                                              std::uint64_t& seed) {
    if (!cfg.is_object())
        throw std::runtime_error("config: top level must be an object");
    for (const char* key : {"lower", "upper", "samples", "seed"})
        if (!cfg.contains(key))
            throw std::runtime_error(std::string("config: missing field '") +
                                     key + "'");
    const auto read_side = [&cfg](const char* key) {
        std::vector<wedge::BoundaryPoint> pts;
        const json& arr = cfg.at(key);
        if (!arr.is_array())
            throw std::runtime_error(std::string("config: '") + key +
                                     "' must be a list of [t, value] pairs");
        for (const json& p : arr) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
                !p[1].is_number())
                throw std::runtime_error(std::string("config: '") + key +
                                         "' entries must be [t, value]");
            pts.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        return pts;
    };
    if (!cfg.at("samples").is_number_unsigned() ||
        cfg.at("samples").get<std::uint64_t>() == 0)
        throw std::runtime_error("config: 'samples' must be a positive integer");
    if (!cfg.at("seed").is_number_integer() &&
        !cfg.at("seed").is_number_unsigned())
        throw std::runtime_error("config: 'seed' must be an integer");
    samples = cfg.at("samples").get<std::uint64_t>();
    seed = cfg.at("seed").get<std::uint64_t>();
    return wedge::PiecewiseBoundaryPair::from_segments(read_side("lower"),
                                                       read_side("upper"));
}

int cmd_bcp(const std::string& config_path, const std::string& output,
            int terms, int workers) {
    std::ifstream in = open_input_file(config_path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config: " + std::string(e.what()));
    }
    std::uint64_t samples = 0, seed = 0;
    const wedge::PiecewiseBoundaryPair bounds =
        parse_bcp_config(cfg, samples, seed);
    const wedge::BcpEstimate est =
        wedge::bcp_montecarlo(bounds, samples, seed, workers, terms);
    json result = {{"estimate", est.estimate},
                   {"std_error", est.std_error},
                   {"samples", est.samples},
                   {"seed", est.seed}};
    write_output(output, [&](std::ostream& out) {
        out << result.dump(2) << '\n';
    });
    return 0;
}

int cmd_bench(std::size_t count, double eps, std::uint64_t seed,
              const std::string& output, int workers) {
    const wedge::StudyResult res =
        wedge::convergence_study(count, eps, seed, workers);
    write_output(output, [&](std::ostream& out) {
        wedge::write_study_csv(out, res.records);
    });
    wedge::write_study_summary(std::cout, res.summary);
    return 0;
}

int cmd_time(const std::vector<std::size_t>& sizes,
             const std::vector<int>& workers_list, std::uint64_t seed,
             const std::string& output, int terms) {
    const std::vector<wedge::TimingRow> rows =
        wedge::timing_harness(sizes, workers_list, seed, terms);
    write_output(output, [&](std::ostream& out) {
        wedge::write_timing_csv(out, rows);
    });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wedge probabilities for Brownian motion between linear "
                 "boundaries"};
    app.require_subcommand(1);

    std::string input = "-";
    std::string output = "-";
    std::string config_path;
    int terms = wedge::kDefaultTerms;
    int workers = 0;
    std::uint64_t seed = 0x5EEDBA5Eull;
    std::size_t count = 100000;
    double eps = 1e-16;
    std::vector<std::size_t> sizes;
    std::vector<int> workers_list;

    CLI::App* wedge_cmd = app.add_subcommand(
        "wedge", "evaluate a CSV of parameter rows (a1,b1,a2,b2)");
    wedge_cmd->add_option("input", input, "input CSV path or - for stdin");
    wedge_cmd->add_option("-o,--output", output, "output CSV path or -");
    wedge_cmd->add_option("--terms", terms, "series terms (2..8)")
        ->check(CLI::Range(wedge::kMinTerms, wedge::kMaxTerms));
    wedge_cmd->add_option("--workers", workers, "worker threads (0 = auto)");

    CLI::App* ks_cmd = app.add_subcommand(
        "ks", "Kolmogorov-Smirnov CDF for a CSV of values (column a)");
    ks_cmd->add_option("input", input, "input CSV path or - for stdin");
    ks_cmd->add_option("-o,--output", output, "output CSV path or -");

    CLI::App* table_cmd =
        app.add_subcommand("table", "print the threshold/precision table");
    table_cmd->add_option("-o,--output", output, "output CSV path or -");

    CLI::App* bcp_cmd = app.add_subcommand(
        "bcp", "boundary crossing probability from a JSON config file");
    bcp_cmd->add_option("config", config_path, "JSON config file")
        ->required();
    bcp_cmd->add_option("-o,--output", output, "output JSON path or -");
    bcp_cmd->add_option("--terms", terms, "series terms (2..8)")
        ->check(CLI::Range(wedge::kMinTerms, wedge::kMaxTerms));
    bcp_cmd->add_option("--workers", workers, "worker threads (0 = auto)");

    CLI::App* bench_cmd = app.add_subcommand(
        "bench", "convergence study; CSV to --output, summary to stdout");
    bench_cmd->add_option("-o,--output", output, "output CSV file")
        ->required();
    bench_cmd->add_option("--count", count, "number of sampled tuples");
    bench_cmd->add_option("--eps", eps, "target precision");
    bench_cmd->add_option("--seed", seed, "RNG seed");
    bench_cmd->add_option("--workers", workers, "worker threads (0 = auto)");

    CLI::App* time_cmd =
        app.add_subcommand("time", "time batch evaluation over random tables");
    time_cmd->add_option("--sizes", sizes, "table sizes")
        ->required()
        ->delimiter(',');
    time_cmd->add_option("--workers", workers_list, "worker counts")
        ->required()
        ->delimiter(',');
    time_cmd->add_option("--seed", seed, "RNG seed");
    time_cmd->add_option("-o,--output", output, "output CSV path or -");
    time_cmd->add_option("--terms", terms, "series terms (2..8)")
        ->check(CLI::Range(wedge::kMinTerms, wedge::kMaxTerms));

    CLI11_PARSE(app, argc, argv);

    try {
        if (wedge_cmd->parsed()) return cmd_wedge(input, output, terms, workers);
        if (ks_cmd->parsed()) return cmd_ks(input, output);
        if (table_cmd->parsed()) return cmd_table(output);
        if (bcp_cmd->parsed())
            return cmd_bcp(config_path, output, terms, workers);
        if (bench_cmd->parsed())
            return cmd_bench(count, eps, seed, output, workers);
        if (time_cmd->parsed())
            return cmd_time(sizes, workers_list, seed, output, terms);
    } catch (const std::exception& e) {
        std::cerr << "wedge: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
