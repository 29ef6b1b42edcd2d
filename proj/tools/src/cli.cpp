#include "gsa_cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsa/distributions.hpp"
#include "gsa/error.hpp"
#include "gsa/estimators.hpp"
#include "gsa/format.hpp"
#include "gsa/harness.hpp"
#include "gsa/metafunction.hpp"
#include "gsa/sampling.hpp"

namespace gsa::cli {

namespace {

namespace fs = std::filesystem;

// Thrown for problems the user can fix by changing the command line.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check_output_path(const std::string& path) {
    if (path.empty()) throw UsageError("output path is empty");
    const fs::path p(path);
    const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
    if (!fs::is_directory(dir)) throw UsageError("output directory does not exist: " + dir.string());
    if (fs::is_directory(p)) throw UsageError("output path is a directory: " + path);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    return in;
}

// Whole-file replace through a temporary, so a failed command leaves no
// half-written output behind.
void write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        os << content;
        os.flush();
        if (!os) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error("failed writing " + path);
        }
    }
    fs::rename(tmp, path);
}

SamplingMethod parse_method(const std::string& text) {
    if (text == "monte-carlo") return SamplingMethod::monte_carlo;
    if (text == "sobol") return SamplingMethod::sobol;
    throw UsageError("unknown sampling method: " + text);
}

struct SampleArgs {
    std::string method = "sobol";
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::uint64_t seed = 1;
    bool unscrambled = false;
    std::string out;
};

void run_sample(const SampleArgs& a, std::ostream& out) {
    const SamplingMethod method = parse_method(a.method);
    if (a.unscrambled && method != SamplingMethod::sobol) {
        throw UsageError("--unscrambled only applies to --method sobol");
    }
    check_output_path(a.out);
    const SampleMatrix m = a.unscrambled ? sobol_points(a.rows, a.cols, std::nullopt)
                                         : draw_points(method, a.rows, a.cols, a.seed);
    std::ostringstream csv;
    write_matrix_csv(csv, m);

    nlohmann::ordered_json meta;
    meta["method"] = a.method;
    if (method == SamplingMethod::sobol) {
        meta["scrambling"] = a.unscrambled ? "none" : std::string(sobol_scrambling_method());
    }
    if (a.unscrambled) meta["seed"] = nullptr;
    else meta["seed"] = a.seed;
    meta["rows"] = a.rows;
    meta["cols"] = a.cols;

    write_file(a.out, csv.str());
    write_file(a.out + ".json", meta.dump(2) + "\n");
    out << "wrote " << a.rows << "x" << a.cols << " sample to " << a.out << "\n";
}

struct MetaGenerateArgs {
    std::size_t k = 0;
    double k2 = 0.5;
    double k3 = 0.2;
    std::uint64_t epsilon = 1;
    std::string out;
};

void run_meta_generate(const MetaGenerateArgs& a, std::ostream& out) {
    check_output_path(a.out);
    const MetafunctionSpec spec = generate_spec(a.k, a.k2, a.k3, a.epsilon);
    std::ostringstream os;
    write_spec(os, spec);
    write_file(a.out, os.str());
    out << "wrote metafunction (k=" << spec.k << ", " << spec.pairs.size() << " pairs, " << spec.triples.size()
        << " triples) to " << a.out << "\n";
}

struct MetaEvaluateArgs {
    std::string spec;
    std::string in;
    std::string out;
    int phi = 1;
};

void run_meta_evaluate(const MetaEvaluateArgs& a, std::ostream& out) {
    check_output_path(a.out);
    auto spec_in = open_input(a.spec);
    auto matrix_in = open_input(a.in);
    const MetafunctionSpec spec = read_spec(spec_in);
    SampleMatrix m = read_matrix_csv(matrix_in);
    if (m.cols() != spec.k) {
        throw DesignShapeError("matrix has " + std::to_string(m.cols()) + " columns, metafunction has k = " +
                               std::to_string(spec.k));
    }
    if (a.phi != 1) {
        if (!m.in_unit_cube()) throw DomainError("--phi needs unit-cube input values");
        m = transform_matrix(m, phi_assign(a.phi, spec.k, phi_stream_seed(spec.epsilon_seed)));
    }
    const auto y = evaluate(spec, m);
    std::ostringstream os;
    os << "y\n";
    for (double v : y) os << format_double(v) << "\n";
    write_file(a.out, os.str());
    out << "evaluated " << y.size() << " rows to " << a.out << "\n";
}

struct EstimateArgs {
    std::string estimator;
    std::string in;
    std::string out;
    std::string centers;
    double delta_h = 0.2;
};

std::vector<std::vector<double>> indexed_columns(const NamedColumns& cols, const std::string& prefix) {
    std::vector<std::vector<double>> lists;
    for (std::size_t i = 1;; ++i) {
        const auto idx = cols.find(prefix + std::to_string(i));
        if (idx < 0) break;
        lists.push_back(cols.columns[static_cast<std::size_t>(idx)]);
    }
    return lists;
}

std::vector<double> named_column(const NamedColumns& cols, const std::string& name) {
    const auto idx = cols.find(name);
    return idx < 0 ? std::vector<double>{} : cols.columns[static_cast<std::size_t>(idx)];
}

void run_estimate(const EstimateArgs& a, std::ostream& out) {
    const auto est = parse_estimator(a.estimator);
    if (!est) throw UsageError("unknown estimator: " + a.estimator);
    check_output_path(a.out);
    if (*est == Estimator::razavi_gupta && a.centers.empty()) {
        throw UsageError("razavi-gupta needs --centers");
    }
    auto in = open_input(a.in);
    const NamedColumns cols = read_named_csv(in);

    TotalOrderEstimate result;
    if (*est == Estimator::razavi_gupta) {
        auto centers_in = open_input(a.centers);
        const StarSample star = build_star_design(read_matrix_csv(centers_in), a.delta_h);
        const auto y = named_column(cols, "y");
        if (y.empty()) throw FormatError("razavi-gupta input needs a 'y' column in star order");
        result = vars_total(star, y);
    } else {
        EvaluationSet ev;
        ev.yA = named_column(cols, "yA");
        ev.yB = named_column(cols, "yB");
        ev.yAB = indexed_columns(cols, "yAB_");
        ev.yBA = indexed_columns(cols, "yBA_");
        ev.yCB = indexed_columns(cols, "yCB_");
        result = estimate_total(*est, ev);
    }

    std::ostringstream os;
    os << "input,T_hat\n";
    for (std::size_t i = 0; i < result.T_hat.size(); ++i) {
        os << (i + 1) << ',' << format_double(result.T_hat[i]) << "\n";
    }
    write_file(a.out, os.str());
    out << a.estimator << ": " << result.T_hat.size() << " indices, " << result.n_negative << " below 0, "
        << result.n_above_one << " above 1\n";
}

struct BenchmarkArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> rows_exp;
    std::optional<int> truth_rows_exp;
    std::optional<std::string> mode;
    std::optional<std::string> out;
    std::optional<unsigned> parallelism;
    bool clusters = false;
};

void run_benchmark_cmd(const BenchmarkArgs& a, std::ostream& out) {
    HarnessConfig cfg;
    if (!a.config.empty()) {
        auto in = open_input(a.config);
        cfg = read_config(in);
    }
    if (a.seed) cfg.global_seed = *a.seed;
    if (a.rows_exp) cfg.rows_exp = *a.rows_exp;
    if (a.truth_rows_exp) cfg.truth_rows_exp = *a.truth_rows_exp;
    if (a.mode) cfg.mode = parse_mode(*a.mode);
    if (a.out) cfg.out_path = *a.out;
    if (a.parallelism) cfg.parallelism = std::max(1u, *a.parallelism);
    if (a.clusters) cfg.grouping = Grouping::clusters;
    if (cfg.rows_exp < 4 || cfg.rows_exp > 24) throw UsageError("rows_exp must be in 4..24");
    if (cfg.truth_rows_exp < 2 || cfg.truth_rows_exp > 24) throw UsageError("truth_rows_exp must be in 2..24");
    check_output_path(cfg.out_path);

    const BenchmarkRunInfo info = run_benchmark_to_csv(cfg);
    out << "benchmark: " << info.rows_total << " rows (" << info.rows_resumed << " resumed) -> " << cfg.out_path
        << "\n";
}

ResultsFile load_results(const std::string& path) {
    auto in = open_input(path);
    return read_results(in);
}

struct SummarizeArgs {
    std::string in;
    std::string out;
    double bin_width = 20.0;
};

void run_summarize(const SummarizeArgs& a, std::ostream& out) {
    if (!(a.bin_width > 0.0)) throw UsageError("--bin-width must be positive");
    check_output_path(a.out);
    const ResultsFile results = load_results(a.in);
    const Summary s = summarize(results.records, results.config.mode, a.bin_width);
    std::ostringstream os;
    write_summary_csv(os, s);
    write_file(a.out, os.str());
    out << "summary of " << results.records.size() << " records -> " << a.out << "\n";
}

struct AnalyzeArgs {
    std::string in;
    std::string out;
    bool clusters = false;
};

void run_analyze(const AnalyzeArgs& a, std::ostream& out) {
    check_output_path(a.out);
    const ResultsFile results = load_results(a.in);
    if (a.clusters && results.config.grouping != Grouping::clusters) {
        throw DesignShapeError("--clusters given but " + a.in + " was produced with individual grouping");
    }
    const SensitivityReport report =
        sobol_sa_on_results(results.records, layout_for(results.config), results.config.mode);
    std::ostringstream os;
    write_report_csv(os, report);
    write_file(a.out, os.str());
    out << "sensitivity report (" << report.size() << " entries) -> " << a.out << "\n";
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Variance-based sensitivity analysis toolkit and estimator benchmark", "gsa"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    SampleArgs sample;
    auto* sample_cmd = app.add_subcommand("sample", "Draw a unit-cube sample matrix as CSV");
    sample_cmd->add_option("--method", sample.method, "monte-carlo or sobol")->capture_default_str();
    sample_cmd->add_option("--rows", sample.rows, "Number of rows")->required()->check(CLI::PositiveNumber);
    sample_cmd->add_option("--cols", sample.cols, "Number of columns")->required()->check(CLI::PositiveNumber);
    sample_cmd->add_option("--seed", sample.seed, "Random seed")->capture_default_str();
    sample_cmd->add_flag("--unscrambled", sample.unscrambled, "Plain Sobol' points (seed ignored)");
    sample_cmd->add_option("--out", sample.out, "Output CSV; a .json sidecar is written next to it")->required();

    auto* meta_cmd = app.add_subcommand("metafunction", "Generate or evaluate a metafunction");
    meta_cmd->require_subcommand(1);
    MetaGenerateArgs gen;
    auto* gen_cmd = meta_cmd->add_subcommand("generate", "Write a metafunction specification");
    gen_cmd->add_option("--k", gen.k, "Number of inputs")->required()->check(CLI::Range(3, 100000));
    gen_cmd->add_option("--k2", gen.k2, "Fraction of active pairs")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    gen_cmd->add_option("--k3", gen.k3, "Fraction of active triples")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    gen_cmd->add_option("--seed,--epsilon", gen.epsilon, "Function seed")->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "Output specification file")->required();
    MetaEvaluateArgs evl;
    auto* evl_cmd = meta_cmd->add_subcommand("evaluate", "Evaluate a specification on a matrix");
    evl_cmd->add_option("--spec", evl.spec, "Specification file")->required();
    evl_cmd->add_option("--in", evl.in, "Input matrix CSV (headerless)")->required();
    evl_cmd->add_option("--phi", evl.phi, "Input distribution setting applied to unit-cube inputs")
        ->check(CLI::Range(1, 8))
        ->capture_default_str();
    evl_cmd->add_option("--out", evl.out, "Output CSV with a 'y' column")->required();

    EstimateArgs est;
    auto* est_cmd = app.add_subcommand("estimate", "Total-order indices from design evaluations");
    est_cmd->add_option("--estimator", est.estimator, "Estimator name")->required();
    est_cmd->add_option("--in", est.in,
                        "Evaluations CSV: yA, yB, yAB_i, yBA_i, yCB_i columns (or y for razavi-gupta)")
        ->required();
    est_cmd->add_option("--centers", est.centers, "Star centres CSV (razavi-gupta)");
    est_cmd->add_option("--delta-h", est.delta_h, "Star spacing (razavi-gupta)")->capture_default_str();
    est_cmd->add_option("--out", est.out, "Output CSV")->required();

    BenchmarkArgs bench;
    auto* bench_cmd = app.add_subcommand("benchmark", "Run the estimator benchmark");
    bench_cmd->add_option("--config", bench.config, "Config file (key = value)");
    bench_cmd->add_option("--seed", bench.seed, "Override global_seed");
    bench_cmd->add_option("--rows-exp", bench.rows_exp, "Override rows_exp");
    bench_cmd->add_option("--truth-rows-exp", bench.truth_rows_exp, "Override truth_rows_exp");
    bench_cmd->add_option("--mode", bench.mode, "rank or mae")->check(CLI::IsMember({"rank", "mae"}));
    bench_cmd->add_option("--out", bench.out, "Override out_path");
    bench_cmd->add_option("--parallelism", bench.parallelism, "Worker threads");
    bench_cmd->add_flag("--clusters", bench.clusters, "Group parameters into clusters");

    SummarizeArgs summ;
    auto* summ_cmd = app.add_subcommand("summarize", "Medians per estimator and N_t/k bin");
    summ_cmd->add_option("--in", summ.in, "Results CSV")->required();
    summ_cmd->add_option("--bin-width", summ.bin_width, "Width of N_t/k bins")->capture_default_str();
    summ_cmd->add_option("--out", summ.out, "Summary CSV")->required();

    AnalyzeArgs an;
    auto* an_cmd = app.add_subcommand("analyze", "Sobol' indices of the benchmark parameters");
    an_cmd->add_option("--in", an.in, "Results CSV")->required();
    an_cmd->add_flag("--clusters", an.clusters, "Require a cluster-grouped results file");
    an_cmd->add_option("--out", an.out, "Report CSV")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "gsa: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*sample_cmd) run_sample(sample, out);
        else if (*gen_cmd) run_meta_generate(gen, out);
        else if (*evl_cmd) run_meta_evaluate(evl, out);
        else if (*est_cmd) run_estimate(est, out);
        else if (*bench_cmd) run_benchmark_cmd(bench, out);
        else if (*summ_cmd) run_summarize(summ, out);
        else if (*an_cmd) run_analyze(an, out);
    } catch (const UsageError& e) {
        err << "gsa: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "gsa: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}

} // namespace gsa::cli
