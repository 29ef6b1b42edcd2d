#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gsa/error.hpp"
#include "gsa/harness.hpp"

using namespace gsa;

namespace {

std::vector<SimulationRecord> synthetic_records(const BenchmarkDesign& d, Mode mode,
                                                const std::function<double(const BenchmarkParams&)>& f) {
    std::vector<SimulationRecord> out;
    for (std::size_t row = 0; row < d.total_rows(); ++row) {
        SimulationRecord rec;
        rec.row_id = row;
        rec.params = d.rows[row];
        rec.estimator = Estimator::jansen;
        const double v = f(rec.params);
        if (mode == Mode::rank) rec.r = v;
        else rec.mae = v;
        out.push_back(rec);
    }
    return out;
}

const SensitivityEntry& entry(const SensitivityReport& rep, std::string_view group) {
    for (const auto& e : rep)
        if (e.group == group) return e;
    throw std::runtime_error("missing group " + std::string(group));
}

std::vector<std::string> lines_of(const std::vector<SimulationRecord>& recs) {
    std::vector<std::string> out;
    for (const auto& r : recs) out.push_back(format_record(r));
    return out;
}

} // namespace

TEST(Space, RowCounts) {
    EXPECT_EQ(sample_benchmark_space(11, 1).total_rows(), 18432u);
    EXPECT_EQ(sample_benchmark_space(8, 1).total_rows(), 2304u);
    EXPECT_EQ(sample_benchmark_space(8, 1, Grouping::clusters).total_rows(), 256u * 5);
}

TEST(Space, RowsAreValid) {
    const auto d = sample_benchmark_space(8, 3);
    for (const auto& p : d.rows) ASSERT_TRUE(p.valid());
    int min_nt = 1000, max_nt = 0, min_k = 100, max_k = 0;
    for (const auto& p : d.rows) {
        min_nt = std::min(min_nt, p.N_t);
        max_nt = std::max(max_nt, p.N_t);
        min_k = std::min(min_k, p.k);
        max_k = std::max(max_k, p.k);
    }
    EXPECT_LT(min_nt, 40);
    EXPECT_GT(max_nt, 970);
    EXPECT_LT(min_k, 6);
    EXPECT_GT(max_k, 97);
}

TEST(Space, ABRowsSwapGroupColumns) {
    const auto d = sample_benchmark_space(4, 2);
    const std::size_t n = d.layout.base_rows;
    // Group 1 is (N_t, k): its A_B rows take both from B, the rest from A.
    for (std::size_t v = 0; v < n; ++v) {
        const auto& a = d.rows[v];
        const auto& b = d.rows[n + v];
        const auto& ab = d.rows[3 * n + v];
        EXPECT_EQ(ab.N_t, b.N_t);
        EXPECT_EQ(ab.k, b.k);
        EXPECT_EQ(ab.tau, a.tau);
        EXPECT_EQ(ab.epsilon, a.epsilon);
        EXPECT_EQ(ab.delta, a.delta);
    }
}

TEST(Groups, Names) {
    const auto ind = parameter_groups(Grouping::individual, Mode::rank);
    ASSERT_EQ(ind.size(), 7u);
    EXPECT_EQ(ind[1].name, "N_t,k");
    const auto cl = parameter_groups(Grouping::clusters, Mode::rank);
    ASSERT_EQ(cl.size(), 3u);
    EXPECT_EQ(cl[0].name, "(delta,tau)");
    EXPECT_EQ(cl[1].name, "f(x)");
    EXPECT_EQ(cl[2].name, "(N_t,k)");
    EXPECT_EQ(parameter_groups(Grouping::clusters, Mode::mae)[0].name, "(tau)");
    EXPECT_EQ(parameter_groups(Grouping::individual, Mode::mae).size(), 7u);
}

TEST(Row, FeasibleCorner) {
    BenchmarkParams p;
    p.k = 3;
    p.N_t = 1000;
    p.tau = 2;
    const auto res = run_row(p, RowSettings{Mode::rank, 0.2, 10, 5});
    ASSERT_EQ(res.records.size(), 8u);
    for (const auto& r : res.records) {
        EXPECT_EQ(r.status, RecordStatus::ok) << to_string(r.estimator);
        EXPECT_TRUE(r.r.has_value());
        EXPECT_LE(r.evals_used, 1000u);
    }
}

TEST(Row, Deterministic) {
    BenchmarkParams p{1, 300, 12, 8, 17, 0.4, 0.2, 2};
    const RowSettings s{Mode::mae, 0.2, 9, 77};
    const auto a = run_row(p, s);
    const auto b = run_row(p, s);
    EXPECT_EQ(a.truth, b.truth);
    EXPECT_EQ(lines_of(a.records), lines_of(b.records));
}

TEST(Row, DominantInputRankedFirst) {
    MetafunctionSpec spec;
    spec.k = 6;
    spec.u.assign(6, FunctionId::linear);
    spec.alpha = {0.1, 0.2, 20.0, 0.1, 0.3, 0.2};
    BenchmarkParams p{2, 1000, 6, 1, 1, 0.3, 0.1, 1};
    const auto res = run_row(p, spec, phi_assign(1, 6, 0), RowSettings{Mode::rank, 0.2, 10, 3});
    for (const auto& r : res.records) {
        ASSERT_EQ(r.status, RecordStatus::ok);
        const auto top = std::max_element(r.T_hat.begin(), r.T_hat.end()) - r.T_hat.begin();
        EXPECT_EQ(top, 2) << to_string(r.estimator);
    }
}

TEST(Row, StarFallbackRecordsBudget) {
    BenchmarkParams p{1, 50, 30, 1, 2, 0.3, 0.1, 1};
    const auto res = run_row(p, RowSettings{Mode::rank, 0.2, 8, 1});
    const auto& vars = res.records.back();
    EXPECT_EQ(vars.estimator, Estimator::razavi_gupta);
    EXPECT_EQ(vars.evals_used, 242u);
}

TEST(Benchmark, ExecutionOrderDoesNotMatter) {
    const auto d = sample_benchmark_space(4, 9);
    HarnessConfig cfg;
    cfg.truth_rows_exp = 7;
    const std::size_t first = d.total_rows() - 20;

    std::vector<std::string> a, b;
    std::vector<std::size_t> seen;
    run_benchmark(d, cfg, [&](std::size_t row, const auto& recs) {
        seen.push_back(row);
        for (const auto& r : recs) a.push_back(format_record(r));
    }, first);

    std::vector<std::size_t> order(20);
    std::iota(order.begin(), order.end(), first);
    std::shuffle(order.begin(), order.end(), std::mt19937(4));
    cfg.parallelism = 3;
    run_benchmark(d, cfg, [&](std::size_t, const auto& recs) {
        for (const auto& r : recs) b.push_back(format_record(r));
    }, first, order);

    EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
    EXPECT_EQ(seen.size(), 20u);
    EXPECT_EQ(a, b);
}

TEST(Benchmark, CsvRoundTripAndResume) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "gsa_harness_csv";
    fs::create_directories(dir);
    HarnessConfig cfg;
    cfg.rows_exp = 4;
    cfg.truth_rows_exp = 6;
    cfg.out_path = (dir / "results.csv").string();
    fs::remove(cfg.out_path);

    const auto info = run_benchmark_to_csv(cfg);
    EXPECT_EQ(info.rows_total, 144u);
    EXPECT_EQ(info.rows_resumed, 0u);
    std::string full;
    {
        std::ifstream in(cfg.out_path);
        full.assign(std::istreambuf_iterator<char>(in), {});
    }

    // Truncate mid-row and resume.
    const auto cut = full.find('\n', full.size() / 2) + 5;
    {
        std::ofstream os(cfg.out_path, std::ios::trunc);
        os << full.substr(0, cut);
    }
    const auto again = run_benchmark_to_csv(cfg);
    EXPECT_GT(again.rows_resumed, 0u);
    std::string resumed;
    {
        std::ifstream in(cfg.out_path);
        resumed.assign(std::istreambuf_iterator<char>(in), {});
    }
    EXPECT_EQ(resumed, full);

    std::istringstream is(full);
    const auto rf = read_results(is);
    EXPECT_EQ(rf.records.size(), 144u * 8);
    EXPECT_EQ(rf.config.rows_exp, 4);
    EXPECT_EQ(rf.config.mode, Mode::rank);

    HarnessConfig other = cfg;
    other.global_seed = 2;
    EXPECT_THROW(run_benchmark_to_csv(other), Error);
    fs::remove_all(dir);
}

TEST(Config, Parse) {
    std::istringstream is("# desk run\nglobal_seed = 9\nrows_exp=5\nmode = mae\n\nparallelism = 2  # threads\n"
                          "out_path = x.csv\ndelta_h = 0.25\ntruth_rows_exp = 7\n");
    const auto c = read_config(is);
    EXPECT_EQ(c.global_seed, 9u);
    EXPECT_EQ(c.rows_exp, 5);
    EXPECT_EQ(c.mode, Mode::mae);
    EXPECT_EQ(c.parallelism, 2u);
    EXPECT_EQ(c.out_path, "x.csv");
    EXPECT_EQ(c.delta_h, 0.25);
    EXPECT_EQ(c.truth_rows_exp, 7);
    std::istringstream bad("rows = 3\n");
    EXPECT_THROW(read_config(bad), FormatError);
}

TEST(Analysis, OutputIgnoresParameters) {
    const auto d = sample_benchmark_space(10, 4);
    std::mt19937_64 gen(1);
    std::normal_distribution<double> z;
    const auto rep = sobol_sa_on_results(synthetic_records(d, Mode::rank, [&](const BenchmarkParams&) { return z(gen); }),
                                         d.layout, Mode::rank);
    for (const auto& e : rep) EXPECT_LE(std::abs(e.Si), 0.1) << e.group;
}

TEST(Analysis, ConstantOutputIsNaN) {
    const auto d = sample_benchmark_space(6, 4);
    const auto rep =
        sobol_sa_on_results(synthetic_records(d, Mode::rank, [](const BenchmarkParams&) { return 0.7; }), d.layout, Mode::rank);
    for (const auto& e : rep) {
        EXPECT_TRUE(std::isnan(e.Si));
        EXPECT_TRUE(std::isnan(e.Ti));
    }
}

TEST(Analysis, DeltaOnly) {
    const auto d = sample_benchmark_space(10, 4);
    const auto recs = synthetic_records(d, Mode::rank, [](const BenchmarkParams& p) { return p.delta == 1 ? 0.9 : 0.4; });
    const auto rep = sobol_sa_on_results(recs, d.layout, Mode::rank);
    EXPECT_GE(entry(rep, "delta").Si, 0.9);
    for (const auto& e : rep)
        if (e.group != "delta") {
            EXPECT_LE(std::abs(e.Si), 0.05) << e.group;
            EXPECT_LE(std::abs(e.Ti), 0.05) << e.group;
        }
}

TEST(Analysis, ClusterCoversMembers) {
    auto f = [](const BenchmarkParams& p) { return std::log(p.N_t) - 0.3 * std::log(p.k) + 0.2 * (p.tau - 1); };
    const auto di = sample_benchmark_space(10, 6);
    const auto dc = sample_benchmark_space(10, 6, Grouping::clusters);
    const auto ri = sobol_sa_on_results(synthetic_records(di, Mode::rank, f), di.layout, Mode::rank);
    const auto rc = sobol_sa_on_results(synthetic_records(dc, Mode::rank, f), dc.layout, Mode::rank);
    EXPECT_GE(entry(rc, "(N_t,k)").Ti + 0.02, entry(ri, "N_t,k").Ti);
    EXPECT_GE(entry(rc, "(delta,tau)").Ti + 0.02, entry(ri, "tau").Ti);
    EXPECT_LE(entry(rc, "f(x)").Ti, 0.02);
}

TEST(Analysis, MissingRecord) {
    const auto d = sample_benchmark_space(4, 1);
    auto recs = synthetic_records(d, Mode::rank, [](const BenchmarkParams& p) { return p.tau; });
    recs.pop_back();
    EXPECT_THROW(sobol_sa_on_results(recs, d.layout, Mode::rank), IncompleteDesignError);
    recs = synthetic_records(d, Mode::rank, [](const BenchmarkParams& p) { return p.tau; });
    recs[0].row_id = d.total_rows() + 3;
    EXPECT_THROW(sobol_sa_on_results(recs, d.layout, Mode::rank), IncompleteDesignError);
}

TEST(Summary, OneBin) {
    const auto d = sample_benchmark_space(6, 2);
    auto recs = synthetic_records(d, Mode::rank, [](const BenchmarkParams& p) { return p.N_t / 1000.0; });
    const auto s = summarize(recs, Mode::rank, 1e9);
    ASSERT_EQ(s.bins.size(), 1u);
    EXPECT_EQ(s.bins[0].n, recs.size());
    ASSERT_EQ(s.overall.size(), 1u);
    EXPECT_EQ(s.overall[0].n_ok, recs.size());
}

TEST(Summary, MedianAndNegatives) {
    EXPECT_EQ(median({3, 1, 2}), 2.0);
    EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
    std::vector<SimulationRecord> recs(4);
    for (std::size_t i = 0; i < 4; ++i) {
        recs[i].params.N_t = 100;
        recs[i].params.k = 10;
        recs[i].r = i < 2 ? -0.5 : 0.8;
        recs[i].frac_negative = i < 2 ? 0.5 : 0.0;
        recs[i].frac_above_one = 0.25;
    }
    recs.push_back(recs[3]);
    recs.back().status = RecordStatus::degenerate;
    recs.back().r.reset();
    const auto s = summarize(recs, Mode::rank);
    EXPECT_EQ(s.overall[0].n_failed, 1u);
    ASSERT_EQ(s.negative_r.size(), 1u);
    EXPECT_EQ(s.negative_r[0].n, 2u);
    EXPECT_EQ(s.negative_r[0].mean_frac_negative, 0.5);
    EXPECT_EQ(s.negative_r[0].mean_frac_above_one, 0.25);
}
