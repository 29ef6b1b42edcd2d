#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gsa/distributions.hpp"
#include "gsa/estimators.hpp"
#include "gsa/metafunction.hpp"
#include "gsa/sample_matrix.hpp"

namespace gsa {

/// One point of the benchmark space.
struct BenchmarkParams {
    int tau = 1;     // 1 Monte Carlo, 2 scrambled Sobol'
    int N_t = 10;    // total model runs, 10..1000
    int k = 3;       // model inputs, 3..100
    int phi = 1;     // input distribution setting, 1..8
    int epsilon = 1; // metafunction seed, 1..200
    double k2 = 0.3; // fraction of active pairs, [0.3, 0.5]
    double k3 = 0.1; // fraction of active triples, [0.1, 0.3]
    int delta = 1;   // 1 Kendall tau-b, 2 Savage-score Pearson

    bool valid() const noexcept;
    friend bool operator==(const BenchmarkParams&, const BenchmarkParams&) = default;
};

inline constexpr std::size_t kBenchmarkColumns = 8;
inline constexpr std::array<std::string_view, kBenchmarkColumns> kBenchmarkColumnNames = {
    "tau", "N_t", "k", "phi", "epsilon", "k2", "k3", "delta"};

/// Map a point of [0, 1)^8 onto the parameter distributions (column order
/// as kBenchmarkColumnNames).
BenchmarkParams params_from_unit(std::span<const double> u);

enum class Mode { rank, mae };
std::string_view to_string(Mode m) noexcept;
Mode parse_mode(std::string_view text);

enum class Grouping { individual, clusters };
std::string_view to_string(Grouping g) noexcept;
Grouping parse_grouping(std::string_view text);

/// Columns whose values are swapped together in one A_B matrix.
struct ParameterGroup {
    std::string name;
    std::vector<std::size_t> columns;
};

/// Individual parameters with (N_t, k) as one group, or the three clusters
/// (delta, tau), f(x) = (epsilon, k2, k3, phi) and (N_t, k). In mae mode the
/// first cluster is tau alone.
std::vector<ParameterGroup> parameter_groups(Grouping grouping, Mode mode);

/// Row layout of a benchmark design: rows [0, N) are A, [N, 2N) are B and
/// [(2 + g) N, (3 + g) N) are A_B for group g.
struct BenchmarkLayout {
    std::size_t base_rows = 0;
    std::vector<ParameterGroup> groups;

    std::size_t total_rows() const noexcept { return base_rows * (2 + groups.size()); }
};

struct BenchmarkDesign {
    int rows_exp = 0;
    BenchmarkLayout layout;
    SampleMatrix A; // unit-cube points, 8 columns
    SampleMatrix B;
    std::vector<BenchmarkParams> rows; // every simulation row, by row id

    std::size_t total_rows() const noexcept { return rows.size(); }
};

/// Scrambled Sobol' A and B of 2^rows_exp rows over the parameter space,
/// plus one A_B matrix per group.
BenchmarkDesign sample_benchmark_space(int rows_exp, std::uint64_t seed,
                                       Grouping grouping = Grouping::individual,
                                       Mode mode = Mode::rank);

enum class RecordStatus { ok, degenerate, infeasible };
std::string_view to_string(RecordStatus s) noexcept;
RecordStatus parse_status(std::string_view text);

struct SimulationRecord {
    std::size_t row_id = 0;
    BenchmarkParams params;
    Estimator estimator = Estimator::jansen;
    RecordStatus status = RecordStatus::ok;
    std::optional<double> r;
    std::optional<double> mae;
    std::optional<double> frac_negative;
    std::optional<double> frac_above_one;
    std::size_t evals_used = 0;
    std::vector<double> T_hat; // in-memory only

    /// The value analysed for `mode`: r in rank mode, mae in mae mode.
    std::optional<double> output(Mode mode) const { return mode == Mode::rank ? r : mae; }
};

struct RowSettings {
    Mode mode = Mode::rank;
    double delta_h = 0.2;
    int truth_rows_exp = 11;
    std::uint64_t seed = 0; // per-row seed for the base samples
};

struct RowResult {
    std::vector<double> truth;
    std::vector<SimulationRecord> records; // one per estimator, table order
};

/// Per-row seed derived from the global seed and row id.
std::uint64_t row_seed(std::uint64_t global_seed, std::size_t row_id);

/// Simulate one benchmark row with an explicit test function and input
/// distributions.
RowResult run_row(const BenchmarkParams& p, const MetafunctionSpec& spec, const DistributionVector& dv,
                  const RowSettings& settings);

/// Simulate one benchmark row; the test function comes from (epsilon, k2, k3).
RowResult run_row(const BenchmarkParams& p, const RowSettings& settings);

struct HarnessConfig {
    std::uint64_t global_seed = 1;
    int rows_exp = 8;
    int truth_rows_exp = 11;
    Mode mode = Mode::rank;
    double delta_h = 0.2;
    unsigned parallelism = 1;
    std::string out_path = "results.csv";
    Grouping grouping = Grouping::individual;
};

/// Flat "key = value" text; '#' starts a comment. Throws FormatError on
/// unknown keys or bad values.
HarnessConfig read_config(std::istream& is);

using RecordSink = std::function<void(std::size_t row_id, const std::vector<SimulationRecord>&)>;

/// Run rows `first_row..design.total_rows()` on `config.parallelism` threads.
/// The sink sees rows in row-id order regardless of scheduling.
/// `execution_order`, when given, is the order rows are started in.
void run_benchmark(const BenchmarkDesign& design, const HarnessConfig& config, const RecordSink& sink,
                   std::size_t first_row = 0, std::span<const std::size_t> execution_order = {});

/// First line of a results file for `config`.
std::string results_header_line(const HarnessConfig& config);
inline constexpr std::string_view kResultsColumns =
    "row_id,tau,N_t,k,phi,epsilon,k2,k3,delta,estimator,status,r,mae,frac_neg,frac_gt1,evals_used";

std::string format_record(const SimulationRecord& rec);

struct BenchmarkRunInfo {
    std::size_t rows_total = 0;
    std::size_t rows_resumed = 0; // rows already present in the output
};

/// Full run from a config, streaming to config.out_path. An existing file
/// with the same header is resumed after its last complete row.
BenchmarkRunInfo run_benchmark_to_csv(const HarnessConfig& config);

struct ResultsFile {
    HarnessConfig config; // fields recovered from the header line
    std::vector<SimulationRecord> records;
};

ResultsFile read_results(std::istream& is);

/// Layout of the design a results file was produced from.
BenchmarkLayout layout_for(const HarnessConfig& config);

struct SensitivityEntry {
    Estimator estimator = Estimator::jansen;
    Mode output = Mode::rank;
    std::string group;
    double Si = 0.0;
    double Ti = 0.0;
    std::size_t rows_used = 0;
};

using SensitivityReport = std::vector<SensitivityEntry>;

/// First-order and total-order indices of the benchmark output with respect
/// to each parameter group, per estimator. Rows whose output is missing in
/// any of the A, B, A_B blocks are dropped; estimators whose output has no
/// variance report NaN. Throws IncompleteDesignError when records for
/// layout rows are absent.
SensitivityReport sobol_sa_on_results(const std::vector<SimulationRecord>& records,
                                      const BenchmarkLayout& layout, Mode output);

struct BinSummary {
    Estimator estimator{};
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 0;
    double median = 0.0;
};

struct NegativeRankDiagnostic {
    Estimator estimator{};
    std::size_t n = 0; // records with r < 0
    double mean_frac_negative = 0.0;
    double mean_frac_above_one = 0.0;
};

struct OverallSummary {
    Estimator estimator{};
    std::size_t n_ok = 0;
    std::size_t n_failed = 0;
    double median = 0.0;
};

struct Summary {
    Mode mode = Mode::rank;
    std::vector<OverallSummary> overall;
    std::vector<BinSummary> bins;
    std::vector<NegativeRankDiagnostic> negative_r;
};

/// Medians of the mode's output per estimator, overall and in bins of N_t/k
/// of width `bin_width`, plus out-of-range fractions over records with r < 0.
Summary summarize(const std::vector<SimulationRecord>& records, Mode mode, double bin_width = 20.0);

double median(std::vector<double> values);

void write_summary_csv(std::ostream& os, const Summary& s);
void write_report_csv(std::ostream& os, const SensitivityReport& report);

} // namespace gsa
