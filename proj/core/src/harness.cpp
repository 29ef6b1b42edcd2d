#include "gsa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "gsa/error.hpp"
#include "gsa/format.hpp"
#include "gsa/metrics.hpp"
#include "gsa/rng.hpp"
#include "gsa/sampling.hpp"

namespace gsa {

// ---------------------------------------------------------------------------
// Parameter space

bool BenchmarkParams::valid() const noexcept {
    return (tau == 1 || tau == 2) && N_t >= 10 && N_t <= 1000 && k >= 3 && k <= 100 && phi >= 1 &&
           phi <= 8 && epsilon >= 1 && epsilon <= 200 && k2 >= 0.3 && k2 <= 0.5 && k3 >= 0.1 &&
           k3 <= 0.3 && (delta == 1 || delta == 2);
}

namespace {

int discrete_uniform(double u, int lo, int hi) {
    const int span = hi - lo + 1;
    const int offset = std::min(static_cast<int>(std::floor(u * span)), span - 1);
    return lo + offset;
}

} // namespace

BenchmarkParams params_from_unit(std::span<const double> u) {
    if (u.size() != kBenchmarkColumns) throw std::invalid_argument("params_from_unit: expects 8 values");
    BenchmarkParams p;
    p.tau = discrete_uniform(u[0], 1, 2);
    p.N_t = discrete_uniform(u[1], 10, 1000);
    p.k = discrete_uniform(u[2], 3, 100);
    p.phi = discrete_uniform(u[3], 1, 8);
    p.epsilon = discrete_uniform(u[4], 1, 200);
    p.k2 = 0.3 + u[5] * 0.2;
    p.k3 = 0.1 + u[6] * 0.2;
    p.delta = discrete_uniform(u[7], 1, 2);
    return p;
}

std::string_view to_string(Mode m) noexcept { return m == Mode::rank ? "rank" : "mae"; }

Mode parse_mode(std::string_view text) {
    if (text == "rank") return Mode::rank;
    if (text == "mae") return Mode::mae;
    throw FormatError("mode must be 'rank' or 'mae', got '" + std::string(text) + "'");
}

std::string_view to_string(Grouping g) noexcept { return g == Grouping::individual ? "individual" : "clusters"; }

Grouping parse_grouping(std::string_view text) {
    if (text == "individual") return Grouping::individual;
    if (text == "clusters") return Grouping::clusters;
    throw FormatError("grouping must be 'individual' or 'clusters', got '" + std::string(text) + "'");
}

std::vector<ParameterGroup> parameter_groups(Grouping grouping, Mode mode) {
    // Column indices follow kBenchmarkColumnNames.
    constexpr std::size_t tau = 0, n_t = 1, k = 2, phi = 3, eps = 4, k2 = 5, k3 = 6, delta = 7;
    if (grouping == Grouping::individual) {
        return {{"tau", {tau}},   {"N_t,k", {n_t, k}}, {"phi", {phi}},    {"epsilon", {eps}},
                {"k2", {k2}},     {"k3", {k3}},        {"delta", {delta}}};
    }
    std::vector<ParameterGroup> groups;
    if (mode == Mode::rank) groups.push_back({"(delta,tau)", {delta, tau}});
    else groups.push_back({"(tau)", {tau}});
    groups.push_back({"f(x)", {eps, k2, k3, phi}});
    groups.push_back({"(N_t,k)", {n_t, k}});
    return groups;
}

BenchmarkDesign sample_benchmark_space(int rows_exp, std::uint64_t seed, Grouping grouping, Mode mode) {
    if (rows_exp < 4 || rows_exp > 24) throw std::invalid_argument("rows_exp must be in 4..24");
    const std::size_t n = std::size_t{1} << rows_exp;
    const SampleMatrix base = sobol_points(n, 2 * kBenchmarkColumns, derive_seed(seed, "benchmark-space"));

    BenchmarkDesign d;
    d.rows_exp = rows_exp;
    d.layout.base_rows = n;
    d.layout.groups = parameter_groups(grouping, mode);
    d.A = base.column_block(0, kBenchmarkColumns);
    d.B = base.column_block(kBenchmarkColumns, kBenchmarkColumns);
    d.rows.reserve(d.layout.total_rows());
    for (std::size_t v = 0; v < n; ++v) d.rows.push_back(params_from_unit(d.A.row(v)));
    for (std::size_t v = 0; v < n; ++v) d.rows.push_back(params_from_unit(d.B.row(v)));
    std::vector<double> point(kBenchmarkColumns);
    for (const auto& g : d.layout.groups) {
        for (std::size_t v = 0; v < n; ++v) {
            const auto a = d.A.row(v);
            std::copy(a.begin(), a.end(), point.begin());
            for (std::size_t c : g.columns) point[c] = d.B(v, c);
            d.rows.push_back(params_from_unit(point));
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// One benchmark row

std::string_view to_string(RecordStatus s) noexcept {
    switch (s) {
    case RecordStatus::ok: return "ok";
    case RecordStatus::degenerate: return "degenerate";
    case RecordStatus::infeasible: return "infeasible";
    }
    return "ok";
}

RecordStatus parse_status(std::string_view text) {
    if (text == "ok") return RecordStatus::ok;
    if (text == "degenerate") return RecordStatus::degenerate;
    if (text == "infeasible") return RecordStatus::infeasible;
    throw FormatError("unknown record status '" + std::string(text) + "'");
}

std::uint64_t row_seed(std::uint64_t global_seed, std::size_t row_id) {
    return derive_seed(derive_seed(global_seed, "rows"), static_cast<std::uint64_t>(row_id));
}

namespace {

// Repeat a per-input distribution vector over `blocks` column blocks.
DistributionVector tile(const DistributionVector& dv, std::size_t blocks) {
    DistributionVector out;
    out.reserve(dv.size() * blocks);
    for (std::size_t b = 0; b < blocks; ++b) out.insert(out.end(), dv.begin(), dv.end());
    return out;
}

struct ClassOutcome {
    std::optional<RunAllocation> allocation;
    RecordStatus failure = RecordStatus::ok;
    EvaluationSet ev;
    std::optional<StarSample> star;
    std::vector<double> star_y;
};

SampleMatrix draw_base(const BenchmarkParams& p, std::size_t rows, std::size_t cols, std::uint64_t seed) {
    const auto method = p.tau == 1 ? SamplingMethod::monte_carlo : SamplingMethod::sobol;
    return draw_points(method, rows, cols, seed);
}

std::vector<double> evaluate_stars(const MetafunctionEvaluator& eval, const StarSample& star,
                                   const DistributionVector& dv) {
    const auto& spec = eval.spec();
    const std::size_t k = star.k();
    std::vector<double> y(star.total_points());
    const SampleMatrix centers = transform_matrix(star.centers(), dv);
    const SampleMatrix g = eval.terms(centers);
    std::vector<double> grad(k);
    for (std::size_t s = 0; s < star.star_count(); ++s) {
        const double yc = eval.output_and_gradient(g.row(s), grad);
        y[star.flat_index(s, 0, star.center_position(s, 0))] = yc;
        for (std::size_t i = 0; i < k; ++i) {
            const auto sec = star.section(s, i);
            const std::size_t cp = star.center_position(s, i);
            for (std::size_t pos = 0; pos < sec.size(); ++pos) {
                if (pos == cp) continue;
                const double gi = univariate(spec.u[i], transform_value(dv[i], sec[pos]));
                y[star.flat_index(s, i, pos)] = yc + (gi - g(s, i)) * grad[i];
            }
        }
    }
    return y;
}

ClassOutcome simulate_class(EstimatorClass c, const BenchmarkParams& p, const MetafunctionEvaluator& eval,
                            const DistributionVector& dv, const RowSettings& settings) {
    ClassOutcome out;
    const auto k = static_cast<std::size_t>(p.k);
    try {
        out.allocation = allocate_runs(c, static_cast<std::size_t>(p.N_t), k, settings.delta_h);
    } catch (const InfeasibleBudgetError&) {
        out.failure = RecordStatus::infeasible;
        return out;
    }
    const std::size_t nv = out.allocation->base_rows;
    const std::uint64_t seed = derive_seed(settings.seed, to_string(c));

    if (c == EstimatorClass::stars) {
        out.star = build_star_design(draw_base(p, nv, k, seed), settings.delta_h);
        out.star_y = evaluate_stars(eval, *out.star, dv);
        return out;
    }

    const std::size_t blocks = c == EstimatorClass::pseudo_owen ? 3 : 2;
    const SampleMatrix base = transform_matrix(draw_base(p, nv, blocks * k, seed), tile(dv, blocks));
    const SampleMatrix A = base.column_block(0, k);
    const SampleMatrix B = base.column_block(k, k);
    auto& ev = out.ev;
    switch (c) {
    case EstimatorClass::ab_k: ev.yAB = eval.evaluate_swaps(A, B, &ev.yA); break;
    case EstimatorClass::ab_k_plus_b:
        ev.yA = eval.evaluate(A);
        ev.yBA = eval.evaluate_swaps(B, A, &ev.yB);
        break;
    case EstimatorClass::double_radial:
        ev.yAB = eval.evaluate_swaps(A, B, &ev.yA);
        ev.yBA = eval.evaluate_swaps(B, A, &ev.yB);
        break;
    case EstimatorClass::pseudo_owen:
        ev.yA = eval.evaluate(A);
        ev.yBA = eval.evaluate_swaps(B, A, &ev.yB);
        ev.yCB = eval.evaluate_swaps(base.column_block(2 * k, k), B);
        break;
    case EstimatorClass::stars: break;
    }
    return out;
}

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

RowResult run_row(const BenchmarkParams& p, const MetafunctionSpec& spec, const DistributionVector& dv,
                  const RowSettings& settings) {
    const auto k = static_cast<std::size_t>(p.k);
    if (spec.k != k || dv.size() != k) throw std::invalid_argument("run_row: spec or distributions do not match k");
    const MetafunctionEvaluator eval(spec);

    RowResult result;
    result.records.resize(kAllEstimators.size());
    for (std::size_t e = 0; e < kAllEstimators.size(); ++e) {
        auto& rec = result.records[e];
        rec.params = p;
        rec.estimator = kAllEstimators[e];
    }

    // Reference indices from a large A + k A_B^(i) design.
    bool truth_ok = true;
    {
        const std::size_t rows = std::size_t{1} << settings.truth_rows_exp;
        const SampleMatrix base =
            transform_matrix(sobol_points(rows, 2 * k, derive_seed(settings.seed, "truth")), tile(dv, 2));
        EvaluationSet ev;
        ev.yAB = eval.evaluate_swaps(base.column_block(0, k), base.column_block(k, k), &ev.yA);
        try {
            result.truth = jansen_total(ev).T_hat;
        } catch (const DegenerateOutputError&) {
            truth_ok = false;
        }
    }

    for (EstimatorClass c : kAllEstimatorClasses) {
        const ClassOutcome outcome = simulate_class(c, p, eval, dv, settings);
        for (std::size_t e = 0; e < kAllEstimators.size(); ++e) {
            const Estimator est = kAllEstimators[e];
            if (design_class(est) != c) continue;
            auto& rec = result.records[e];
            if (outcome.allocation) rec.evals_used = outcome.allocation->evaluations(settings.delta_h);
            if (outcome.failure != RecordStatus::ok) {
                rec.status = outcome.failure;
                continue;
            }
            if (!truth_ok) {
                rec.status = RecordStatus::degenerate;
                continue;
            }
            try {
                TotalOrderEstimate t = c == EstimatorClass::stars ? vars_total(*outcome.star, outcome.star_y)
                                                                  : estimate_total(est, outcome.ev);
                if (!all_finite(t.T_hat)) throw DegenerateOutputError("non-finite index estimate");
                if (settings.mode == Mode::rank) {
                    rec.r = rank_agreement(result.truth, t.T_hat, static_cast<RankMeasure>(p.delta));
                } else {
                    rec.mae = mae(result.truth, t.T_hat);
                }
                const auto oor = out_of_range_fractions(t.T_hat);
                rec.frac_negative = oor.frac_negative;
                rec.frac_above_one = oor.frac_above_one;
                rec.T_hat = std::move(t.T_hat);
            } catch (const DegenerateOutputError&) {
                rec.status = RecordStatus::degenerate;
            } catch (const UndefinedCorrelationError&) {
                rec.status = RecordStatus::degenerate;
                rec.r.reset();
            }
            if (rec.status != RecordStatus::ok) {
                rec.r.reset();
                rec.mae.reset();
                rec.frac_negative.reset();
                rec.frac_above_one.reset();
                rec.T_hat.clear();
            }
        }
    }
    return result;
}

RowResult run_row(const BenchmarkParams& p, const RowSettings& settings) {
    if (!p.valid()) throw std::invalid_argument("run_row: benchmark parameters outside their supports");
    const auto k = static_cast<std::size_t>(p.k);
    const auto eps = static_cast<std::uint64_t>(p.epsilon);
    const MetafunctionSpec spec = generate_spec(k, p.k2, p.k3, eps);
    const DistributionVector dv = phi_assign(p.phi, k, phi_stream_seed(eps));
    return run_row(p, spec, dv, settings);
}

// ---------------------------------------------------------------------------
// Configuration

HarnessConfig read_config(std::istream& is) {
    HarnessConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        std::string_view text = line;
        if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = trim(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw FormatError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string_view key = trim(text.substr(0, eq));
        const std::string_view value = trim(text.substr(eq + 1));
        if (key == "global_seed") cfg.global_seed = static_cast<std::uint64_t>(parse_int(value));
        else if (key == "rows_exp") cfg.rows_exp = static_cast<int>(parse_int(value));
        else if (key == "truth_rows_exp") cfg.truth_rows_exp = static_cast<int>(parse_int(value));
        else if (key == "mode") cfg.mode = parse_mode(value);
        else if (key == "delta_h") cfg.delta_h = parse_double(value);
        else if (key == "parallelism") cfg.parallelism = static_cast<unsigned>(std::max<std::int64_t>(1, parse_int(value)));
        else if (key == "out_path") cfg.out_path = std::string(value);
        else if (key == "grouping") cfg.grouping = parse_grouping(value);
        else throw FormatError("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Running

void run_benchmark(const BenchmarkDesign& design, const HarnessConfig& config, const RecordSink& sink,
                   std::size_t first_row, std::span<const std::size_t> execution_order) {
    const std::size_t total = design.total_rows();
    if (first_row >= total) return;
    std::vector<std::size_t> order;
    if (execution_order.empty()) {
        for (std::size_t r = first_row; r < total; ++r) order.push_back(r);
    } else {
        order.assign(execution_order.begin(), execution_order.end());
        std::vector<std::size_t> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] != first_row + i || sorted.size() != total - first_row) {
                throw std::invalid_argument("run_benchmark: execution order is not a permutation of the rows");
            }
        }
    }

    std::vector<std::optional<std::vector<SimulationRecord>>> done(total);
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr failure;

    auto worker = [&] {
        while (!stop) {
            const std::size_t idx = next++;
            if (idx >= order.size()) return;
            const std::size_t row = order[idx];
            try {
                RowSettings settings{config.mode, config.delta_h, config.truth_rows_exp,
                                     row_seed(config.global_seed, row)};
                RowResult res = run_row(design.rows[row], settings);
                for (auto& rec : res.records) rec.row_id = row;
                std::lock_guard lock(mu);
                done[row] = std::move(res.records);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                stop = true;
            }
            cv.notify_all();
        }
    };

    const unsigned threads = std::max(1u, config.parallelism);
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);

    try {
        for (std::size_t row = first_row; row < total; ++row) {
            std::vector<SimulationRecord> records;
            {
                std::unique_lock lock(mu);
                cv.wait(lock, [&] { return done[row].has_value() || failure; });
                if (failure) break;
                records = std::move(*done[row]);
                done[row].reset();
            }
            sink(row, records);
        }
    } catch (...) {
        stop = true;
        throw;
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

std::string results_header_line(const HarnessConfig& config) {
    std::ostringstream os;
    os << "# gsa-results v1 global_seed=" << config.global_seed << " rows_exp=" << config.rows_exp
       << " truth_rows_exp=" << config.truth_rows_exp << " mode=" << to_string(config.mode)
       << " delta_h=" << format_double(config.delta_h) << " grouping=" << to_string(config.grouping)
       << " scrambling=" << sobol_scrambling_method();
    return os.str();
}

namespace {

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

} // namespace

std::string format_record(const SimulationRecord& rec) {
    const auto& p = rec.params;
    std::ostringstream os;
    os << rec.row_id << ',' << p.tau << ',' << p.N_t << ',' << p.k << ',' << p.phi << ',' << p.epsilon << ','
       << format_double(p.k2) << ',' << format_double(p.k3) << ',' << p.delta << ',' << to_string(rec.estimator)
       << ',' << to_string(rec.status) << ',' << optional_field(rec.r) << ',' << optional_field(rec.mae) << ','
       << optional_field(rec.frac_negative) << ',' << optional_field(rec.frac_above_one) << ','
       << rec.evals_used;
    return os.str();
}

namespace {

SimulationRecord parse_record(std::string_view line, std::size_t line_no) {
    const auto f = split(line, ',');
    if (f.size() != 16) {
        throw FormatError("results line " + std::to_string(line_no) + ": expected 16 fields, got " +
                          std::to_string(f.size()));
    }
    auto opt = [](std::string_view s) -> std::optional<double> {
        if (trim(s).empty()) return std::nullopt;
        return parse_double(s);
    };
    SimulationRecord rec;
    rec.row_id = static_cast<std::size_t>(parse_int(f[0]));
    rec.params.tau = static_cast<int>(parse_int(f[1]));
    rec.params.N_t = static_cast<int>(parse_int(f[2]));
    rec.params.k = static_cast<int>(parse_int(f[3]));
    rec.params.phi = static_cast<int>(parse_int(f[4]));
    rec.params.epsilon = static_cast<int>(parse_int(f[5]));
    rec.params.k2 = parse_double(f[6]);
    rec.params.k3 = parse_double(f[7]);
    rec.params.delta = static_cast<int>(parse_int(f[8]));
    const auto est = parse_estimator(trim(f[9]));
    if (!est) throw FormatError("results line " + std::to_string(line_no) + ": unknown estimator");
    rec.estimator = *est;
    rec.status = parse_status(trim(f[10]));
    rec.r = opt(f[11]);
    rec.mae = opt(f[12]);
    rec.frac_negative = opt(f[13]);
    rec.frac_above_one = opt(f[14]);
    rec.evals_used = static_cast<std::size_t>(parse_int(f[15]));
    return rec;
}

HarnessConfig parse_header(std::string_view line) {
    constexpr std::string_view prefix = "# gsa-results v1";
    if (line.substr(0, prefix.size()) != prefix) {
        throw FormatError("not a results file (missing '# gsa-results v1' header)");
    }
    HarnessConfig cfg;
    std::istringstream is{std::string(line.substr(prefix.size()))};
    for (std::string tok; is >> tok;) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string_view key = std::string_view(tok).substr(0, eq);
        const std::string_view value = std::string_view(tok).substr(eq + 1);
        if (key == "global_seed") cfg.global_seed = static_cast<std::uint64_t>(parse_int(value));
        else if (key == "rows_exp") cfg.rows_exp = static_cast<int>(parse_int(value));
        else if (key == "truth_rows_exp") cfg.truth_rows_exp = static_cast<int>(parse_int(value));
        else if (key == "mode") cfg.mode = parse_mode(value);
        else if (key == "delta_h") cfg.delta_h = parse_double(value);
        else if (key == "grouping") cfg.grouping = parse_grouping(value);
    }
    return cfg;
}

} // namespace

ResultsFile read_results(std::istream& is) {
    ResultsFile out;
    std::string line;
    if (!std::getline(is, line)) throw FormatError("results file is empty");
    out.config = parse_header(trim(line));
    if (!std::getline(is, line) || trim(line) != kResultsColumns) {
        throw FormatError("results file lacks the column header line");
    }
    std::size_t line_no = 2;
    while (std::getline(is, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        out.records.push_back(parse_record(trim(line), line_no));
    }
    return out;
}

BenchmarkLayout layout_for(const HarnessConfig& config) {
    BenchmarkLayout layout;
    layout.base_rows = std::size_t{1} << config.rows_exp;
    layout.groups = parameter_groups(config.grouping, config.mode);
    return layout;
}

BenchmarkRunInfo run_benchmark_to_csv(const HarnessConfig& config) {
    namespace fs = std::filesystem;
    const BenchmarkDesign design =
        sample_benchmark_space(config.rows_exp, config.global_seed, config.grouping, config.mode);
    const std::string header = results_header_line(config);
    const std::size_t per_row = kAllEstimators.size();

    BenchmarkRunInfo info;
    info.rows_total = design.total_rows();

    // Keep the leading complete rows of an existing file with the same header.
    std::vector<std::string> kept;
    if (fs::exists(config.out_path)) {
        std::ifstream in(config.out_path);
        std::string line;
        if (std::getline(in, line) && !line.empty()) {
            if (line != header) {
                throw Error("results file " + config.out_path +
                            " exists with a different configuration; remove it or choose another out_path");
            }
            std::getline(in, line);
            std::vector<std::string> lines;
            while (std::getline(in, line)) {
                if (!line.empty()) lines.push_back(line);
            }
            std::size_t row = 0;
            while ((row + 1) * per_row <= lines.size()) {
                bool complete = true;
                for (std::size_t j = 0; j < per_row && complete; ++j) {
                    const auto& l = lines[row * per_row + j];
                    const auto comma = l.find(',');
                    complete = comma != std::string::npos && l.substr(0, comma) == std::to_string(row) &&
                               std::count(l.begin(), l.end(), ',') == 15;
                }
                if (!complete) break;
                ++row;
            }
            kept.assign(lines.begin(), lines.begin() + static_cast<std::ptrdiff_t>(row * per_row));
            info.rows_resumed = row;
        }
    }

    std::ofstream out(config.out_path, std::ios::trunc);
    if (!out) throw Error("cannot open " + config.out_path + " for writing");
    out << header << '\n' << kResultsColumns << '\n';
    for (const auto& l : kept) out << l << '\n';
    out.flush();
    if (!out) throw Error("failed writing " + config.out_path);

    run_benchmark(design, config, [&](std::size_t row, const std::vector<SimulationRecord>& records) {
        for (const auto& rec : records) out << format_record(rec) << '\n';
        out.flush();
        if (!out) throw Error("failed writing row " + std::to_string(row) + " to " + config.out_path);
    }, info.rows_resumed);
    return info;
}

// ---------------------------------------------------------------------------
// Sensitivity analysis of the benchmark results

SensitivityReport sobol_sa_on_results(const std::vector<SimulationRecord>& records, const BenchmarkLayout& layout,
                                      Mode output) {
    const std::size_t n = layout.base_rows;
    const std::size_t total = layout.total_rows();
    const std::size_t groups = layout.groups.size();
    if (n == 0 || groups == 0) throw IncompleteDesignError("sobol_sa_on_results: empty layout");

    std::map<Estimator, std::vector<const SimulationRecord*>> by_estimator;
    for (const auto& rec : records) {
        if (rec.row_id >= total) {
            throw IncompleteDesignError("sobol_sa_on_results: record row " + std::to_string(rec.row_id) +
                                        " lies outside the design (" + std::to_string(total) + " rows)");
        }
        auto& slots = by_estimator[rec.estimator];
        if (slots.empty()) slots.assign(total, nullptr);
        slots[rec.row_id] = &rec;
    }
    if (by_estimator.empty()) throw IncompleteDesignError("sobol_sa_on_results: no records");

    SensitivityReport report;
    for (const auto& [est, slots] : by_estimator) {
        for (std::size_t row = 0; row < total; ++row) {
            if (!slots[row]) {
                throw IncompleteDesignError("sobol_sa_on_results: " + std::string(to_string(est)) +
                                            " has no record for row " + std::to_string(row));
            }
        }
        EvaluationSet ev;
        ev.yAB.resize(groups);
        for (std::size_t v = 0; v < n; ++v) {
            auto value = [&](std::size_t block) { return slots[block * n + v]->output(output); };
            bool complete = value(0) && value(1);
            for (std::size_t g = 0; g < groups && complete; ++g) complete = value(2 + g).has_value();
            if (!complete) continue;
            ev.yA.push_back(*value(0));
            ev.yB.push_back(*value(1));
            for (std::size_t g = 0; g < groups; ++g) ev.yAB[g].push_back(*value(2 + g));
        }

        std::vector<double> si(groups, std::nan("")), ti(groups, std::nan(""));
        if (ev.yA.size() >= 2) {
            try {
                si = first_order_si(ev);
                ti = jansen_total(ev).T_hat;
            } catch (const DegenerateOutputError&) {
            }
        }
        for (std::size_t g = 0; g < groups; ++g) {
            report.push_back({est, output, layout.groups[g].name, si[g], ti[g], ev.yA.size()});
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Summaries

double median(std::vector<double> values) {
    if (values.empty()) return std::nan("");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double hi = values[mid];
    if (values.size() % 2 == 1) return hi;
    const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return (lo + hi) / 2.0;
}

Summary summarize(const std::vector<SimulationRecord>& records, Mode mode, double bin_width) {
    if (!(bin_width > 0.0)) throw std::invalid_argument("summarize: bin width must be positive");
    Summary s;
    s.mode = mode;
    for (Estimator est : kAllEstimators) {
        std::vector<double> all;
        std::map<long long, std::vector<double>> bins;
        OverallSummary overall{est};
        NegativeRankDiagnostic diag{est};
        for (const auto& rec : records) {
            if (rec.estimator != est) continue;
            const auto value = rec.output(mode);
            if (rec.status != RecordStatus::ok || !value) {
                ++overall.n_failed;
                continue;
            }
            ++overall.n_ok;
            all.push_back(*value);
            const double ratio = static_cast<double>(rec.params.N_t) / static_cast<double>(rec.params.k);
            bins[static_cast<long long>(std::floor(ratio / bin_width))].push_back(*value);
            if (rec.r && *rec.r < 0.0) {
                ++diag.n;
                diag.mean_frac_negative += rec.frac_negative.value_or(0.0);
                diag.mean_frac_above_one += rec.frac_above_one.value_or(0.0);
            }
        }
        if (overall.n_ok + overall.n_failed == 0) continue;
        overall.median = median(all);
        s.overall.push_back(overall);
        for (auto& [b, vals] : bins) {
            s.bins.push_back({est, static_cast<double>(b) * bin_width, static_cast<double>(b + 1) * bin_width,
                              vals.size(), median(vals)});
        }
        if (diag.n > 0) {
            diag.mean_frac_negative /= static_cast<double>(diag.n);
            diag.mean_frac_above_one /= static_cast<double>(diag.n);
        }
        if (mode == Mode::rank) s.negative_r.push_back(diag);
    }
    return s;
}

void write_summary_csv(std::ostream& os, const Summary& s) {
    const std::string measure(to_string(s.mode) == "rank" ? "r" : "mae");
    os << "table,estimator,bin_lo,bin_hi,n,median_" << measure << ",n_failed,mean_frac_neg,mean_frac_gt1\n";
    for (const auto& o : s.overall) {
        os << "overall," << to_string(o.estimator) << ",,," << o.n_ok << ',' << format_double(o.median) << ','
           << o.n_failed << ",,\n";
    }
    for (const auto& b : s.bins) {
        os << "runs_per_input," << to_string(b.estimator) << ',' << format_double(b.lo) << ','
           << format_double(b.hi) << ',' << b.n << ',' << format_double(b.median) << ",,,\n";
    }
    for (const auto& d : s.negative_r) {
        os << "negative_r," << to_string(d.estimator) << ",,," << d.n << ",,," << format_double(d.mean_frac_negative)
           << ',' << format_double(d.mean_frac_above_one) << '\n';
    }
}

void write_report_csv(std::ostream& os, const SensitivityReport& report) {
    os << "estimator,output,parameter_or_cluster,Si,Ti\n";
    for (const auto& e : report) {
        os << to_string(e.estimator) << ',' << (e.output == Mode::rank ? "r" : "mae") << ",\"" << e.group << "\","
           << format_double(e.Si) << ',' << format_double(e.Ti) << '\n';
    }
}

} // namespace gsa
