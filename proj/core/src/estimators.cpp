#include "gsa/estimators.hpp"

#include <cmath>
#include <string>

#include "gsa/error.hpp"

namespace gsa {

std::string_view to_string(Estimator e) noexcept {
    switch (e) {
    case Estimator::jansen: return "jansen";
    case Estimator::homma_saltelli: return "homma-saltelli";
    case Estimator::janon_monod: return "janon-monod";
    case Estimator::glen_isaacs: return "glen-isaacs";
    case Estimator::saltelli2008: return "saltelli-2008";
    case Estimator::azzini_rosati: return "azzini-rosati";
    case Estimator::pseudo_owen: return "pseudo-owen";
    case Estimator::razavi_gupta: return "razavi-gupta";
    }
    return "unknown";
}

std::optional<Estimator> parse_estimator(std::string_view name) noexcept {
    for (auto e : kAllEstimators) {
        if (to_string(e) == name) return e;
    }
    return std::nullopt;
}

EstimatorClass design_class(Estimator e) noexcept {
    switch (e) {
    case Estimator::jansen:
    case Estimator::homma_saltelli:
    case Estimator::janon_monod:
    case Estimator::glen_isaacs: return EstimatorClass::ab_k;
    case Estimator::saltelli2008: return EstimatorClass::ab_k_plus_b;
    case Estimator::azzini_rosati: return EstimatorClass::double_radial;
    case Estimator::pseudo_owen: return EstimatorClass::pseudo_owen;
    case Estimator::razavi_gupta: return EstimatorClass::stars;
    }
    return EstimatorClass::ab_k;
}

std::size_t EvaluationSet::k() const noexcept {
    if (!yAB.empty()) return yAB.size();
    if (!yBA.empty()) return yBA.size();
    return yCB.size();
}

void count_out_of_range(TotalOrderEstimate& est) {
    est.n_negative = 0;
    est.n_above_one = 0;
    for (double t : est.T_hat) {
        if (t < 0.0) ++est.n_negative;
        else if (t > 1.0) ++est.n_above_one;
    }
}

namespace {

// Variances below this fraction of the mean square are treated as zero;
// raw-moment differences of a constant output leave a few ulps behind.
constexpr double kDegenerateRelTol = 1e-12;

bool degenerate(double variance, double mean_square) {
    return !(variance > kDegenerateRelTol * mean_square) || !std::isfinite(variance);
}

double mean(const std::vector<double>& y) {
    double s = 0.0;
    for (double v : y) s += v;
    return s / static_cast<double>(y.size());
}

double mean_square(const std::vector<double>& y) {
    double s = 0.0;
    for (double v : y) s += v * v;
    return s / static_cast<double>(y.size());
}

double centered_variance(const std::vector<double>& y, double f0) {
    double s = 0.0;
    for (double v : y) s += (v - f0) * (v - f0);
    return s / static_cast<double>(y.size());
}

void require_list(const std::vector<double>& y, std::size_t n, const char* name, const char* who) {
    if (y.empty()) throw DesignShapeError(std::string(who) + ": evaluation set lacks " + name);
    if (y.size() != n) throw DesignShapeError(std::string(who) + ": " + name + " has the wrong length");
}

void require_lists(const std::vector<std::vector<double>>& ys, std::size_t k, std::size_t n,
                   const char* name, const char* who) {
    if (ys.empty()) throw DesignShapeError(std::string(who) + ": evaluation set lacks " + name);
    if (ys.size() != k) throw DesignShapeError(std::string(who) + ": " + name + " has the wrong input count");
    for (const auto& y : ys) require_list(y, n, name, who);
}

void require_min_rows(std::size_t n, std::size_t min, const char* who) {
    if (n < min) throw DesignShapeError(std::string(who) + ": needs at least " + std::to_string(min) + " rows");
}

[[noreturn]] void throw_degenerate(const char* who) {
    throw DegenerateOutputError(std::string(who) + ": output variance is zero (degenerate output)");
}

TotalOrderEstimate finish(TotalOrderEstimate est) {
    count_out_of_range(est);
    return est;
}

} // namespace

TotalOrderEstimate jansen_total(const EvaluationSet& ev) {
    constexpr const char* who = "jansen_total";
    const std::size_t n = ev.yA.size();
    require_min_rows(n, 1, who);
    const std::size_t k = ev.yAB.size();
    require_lists(ev.yAB, k, n, "f(A_B^(i))", who);
    const double f0 = mean(ev.yA);
    const double vy = centered_variance(ev.yA, f0);
    if (degenerate(vy, mean_square(ev.yA))) throw_degenerate(who);

    TotalOrderEstimate est{std::vector<double>(k), {f0}, {vy}};
    for (std::size_t i = 0; i < k; ++i) {
        double s = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            const double d = ev.yA[v] - ev.yAB[i][v];
            s += d * d;
        }
        est.T_hat[i] = (s / (2.0 * static_cast<double>(n))) / vy;
    }
    return finish(std::move(est));
}

TotalOrderEstimate homma_saltelli_total(const EvaluationSet& ev) {
    constexpr const char* who = "homma_saltelli_total";
    const std::size_t n = ev.yA.size();
    require_min_rows(n, 1, who);
    const std::size_t k = ev.yAB.size();
    require_lists(ev.yAB, k, n, "f(A_B^(i))", who);
    const double nn = static_cast<double>(n);
    const double f0 = mean(ev.yA);
    double saa = 0.0;
    for (double a : ev.yA) saa += a * a;
    const double vy = saa / nn - f0 * f0;
    if (degenerate(vy, saa / nn)) throw_degenerate(who);

    TotalOrderEstimate est{std::vector<double>(k), {f0}, {vy}};
    for (std::size_t i = 0; i < k; ++i) {
        double sab = 0.0;
        for (std::size_t v = 0; v < n; ++v) sab += ev.yA[v] * ev.yAB[i][v];
        const double cross = sab / nn - f0 * f0;
        est.T_hat[i] = (vy - cross) / vy;
    }
    return finish(std::move(est));
}

TotalOrderEstimate janon_monod_total(const EvaluationSet& ev) {
    constexpr const char* who = "janon_monod_total";
    const std::size_t n = ev.yA.size();
    require_min_rows(n, 1, who);
    const std::size_t k = ev.yAB.size();
    require_lists(ev.yAB, k, n, "f(A_B^(i))", who);
    const double nn = static_cast<double>(n);

    TotalOrderEstimate est{std::vector<double>(k), std::vector<double>(k), std::vector<double>(k)};
    for (std::size_t i = 0; i < k; ++i) {
        const auto& yab = ev.yAB[i];
        double sm = 0.0, sq = 0.0, sx = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            const double a = ev.yA[v];
            const double b = yab[v];
            sm += (a + b) / 2.0;
            sq += (a * a + b * b) / 2.0;
            sx += a * b;
        }
        const double f0 = sm / nn;
        const double vy = sq / nn - f0 * f0;
        if (degenerate(vy, sq / nn)) throw_degenerate(who);
        est.f0[i] = f0;
        est.Vy[i] = vy;
        est.T_hat[i] = 1.0 - (sx / nn - f0 * f0) / vy;
    }
    return finish(std::move(est));
}

TotalOrderEstimate glen_isaacs_total(const EvaluationSet& ev) {
    constexpr const char* who = "glen_isaacs_total";
    const std::size_t n = ev.yA.size();
    require_min_rows(n, 2, who);
    const std::size_t k = ev.yAB.size();
    require_lists(ev.yAB, k, n, "f(A_B^(i))", who);
    const double dof = static_cast<double>(n - 1);

    const double ma = mean(ev.yA);
    std::vector<double> ca(n);
    double saa = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        ca[v] = ev.yA[v] - ma;
        saa += ca[v] * ca[v];
    }
    const double va = saa / dof;
    if (degenerate(va, mean_square(ev.yA))) throw_degenerate(who);

    TotalOrderEstimate est{std::vector<double>(k), {ma}, {va}};
    for (std::size_t i = 0; i < k; ++i) {
        const auto& yab = ev.yAB[i];
        const double mb = mean(yab);
        double sbb = 0.0, sab = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            const double cb = yab[v] - mb;
            sbb += cb * cb;
            sab += ca[v] * cb;
        }
        const double vb = sbb / dof;
        if (degenerate(vb, mean_square(yab))) throw_degenerate(who);
        const double corr = (sab / dof) / std::sqrt(va * vb);
        est.T_hat[i] = 1.0 - corr;
    }
    return finish(std::move(est));
}

TotalOrderEstimate saltelli2008_total(const EvaluationSet& ev) {
    constexpr const char* who = "saltelli2008_total";
    const std::size_t n = ev.yA.size();
    require_min_rows(n, 1, who);
    require_list(ev.yB, n, "f(B)", who);
    const std::size_t k = ev.yBA.size();
    require_lists(ev.yBA, k, n, "f(B_A^(i))", who);
    const double nn = static_cast<double>(n);
    const double f0 = mean(ev.yA);
    const double vy = centered_variance(ev.yA, f0);
    if (degenerate(vy, mean_square(ev.yA))) throw_degenerate(who);

    TotalOrderEstimate est{std::vector<double>(k), {f0}, {vy}};
    for (std::size_t i = 0; i < k; ++i) {
        double s = 0.0;
        for (std::size_t v = 0; v < n; ++v) s += ev.yB[v] * ev.yBA[i][v];
        est.T_hat[i] = 1.0 - (s / nn - f0 * f0) / vy;
    }
    return finish(std::move(est));
}

TotalOrderEstimate azzini_rosati_total(const EvaluationSet& ev) {
    constexpr const char* who = "azzini_rosati_total";
    const std::size_t n = ev.yA.size();
    require_min_rows(n, 1, who);
    require_list(ev.yB, n, "f(B)", who);
    const std::size_t k = ev.yAB.size();
    require_lists(ev.yAB, k, n, "f(A_B^(i))", who);
    require_lists(ev.yBA, k, n, "f(B_A^(i))", who);

    TotalOrderEstimate est{std::vector<double>(k), {mean(ev.yA)}, {centered_variance(ev.yA, mean(ev.yA))}};
    for (std::size_t i = 0; i < k; ++i) {
        double num = 0.0, den = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            const double d1 = ev.yB[v] - ev.yBA[i][v];
            const double d2 = ev.yA[v] - ev.yAB[i][v];
            const double d3 = ev.yA[v] - ev.yB[v];
            const double d4 = ev.yBA[i][v] - ev.yAB[i][v];
            num += d1 * d1 + d2 * d2;
            den += d3 * d3 + d4 * d4;
        }
        if (!(den > 0.0)) throw_degenerate(who);
        est.T_hat[i] = num / den;
    }
    return finish(std::move(est));
}

TotalOrderEstimate pseudo_owen_total(const EvaluationSet& ev) {
    constexpr const char* who = "pseudo_owen_total";
    const std::size_t n = ev.yA.size();
    require_min_rows(n, 1, who);
    require_list(ev.yB, n, "f(B)", who);
    const std::size_t k = ev.yBA.size();
    require_lists(ev.yBA, k, n, "f(B_A^(i))", who);
    require_lists(ev.yCB, k, n, "f(C_B^(i))", who);
    const double nn = static_cast<double>(n);

    double sm = 0.0, sq = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        const double a = ev.yA[v];
        const double b = ev.yB[v];
        sm += (a + b) / 2.0;
        sq += (a * a + b * b) / 2.0;
    }
    const double f0 = sm / nn;
    const double vy = sq / nn - f0 * f0;
    if (degenerate(vy, sq / nn)) throw_degenerate(who);

    TotalOrderEstimate est{std::vector<double>(k), {f0}, {vy}};
    for (std::size_t i = 0; i < k; ++i) {
        double s = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            s += (ev.yB[v] - ev.yCB[i][v]) * (ev.yBA[i][v] - ev.yA[v]);
        }
        est.T_hat[i] = (vy - s / nn) / vy;
    }
    return finish(std::move(est));
}

VariogramEstimate star_variogram(const StarSample& star, std::span<const double> star_y, std::size_t lag_steps) {
    constexpr const char* who = "vars_total";
    if (star_y.size() != star.total_points()) {
        throw DesignShapeError(std::string(who) + ": expected " + std::to_string(star.total_points()) +
                               " star outputs, got " + std::to_string(star_y.size()));
    }
    if (star.star_count() < 2) throw DesignShapeError(std::string(who) + ": needs at least 2 stars");
    const std::size_t len = star.section_length();
    if (lag_steps == 0 || lag_steps >= len || len - lag_steps < 2) {
        throw DesignShapeError(std::string(who) + ": fewer than 2 lag pairs per cross section");
    }
    const std::size_t pairs = len - lag_steps;
    const std::size_t k = star.k();
    const std::size_t nstars = star.star_count();

    VariogramEstimate out;
    out.gamma_h.assign(k, 0.0);
    out.cov_h.assign(k, 0.0);
    std::vector<double> sec(len);
    for (std::size_t i = 0; i < k; ++i) {
        double gamma_sum = 0.0;
        double cov_sum = 0.0;
        for (std::size_t s = 0; s < nstars; ++s) {
            for (std::size_t p = 0; p < len; ++p) sec[p] = star_y[star.flat_index(s, i, p)];
            double sl = 0.0, sr = 0.0, slr = 0.0;
            for (std::size_t p = 0; p < pairs; ++p) {
                const double a = sec[p];
                const double b = sec[p + lag_steps];
                gamma_sum += 0.5 * (a - b) * (a - b);
                sl += a;
                sr += b;
                slr += a * b;
            }
            const double np = static_cast<double>(pairs);
            cov_sum += slr / np - (sl / np) * (sr / np);
        }
        out.gamma_h[i] = gamma_sum / static_cast<double>(nstars * pairs);
        out.cov_h[i] = cov_sum / static_cast<double>(nstars);
    }

    double total = 0.0;
    for (double y : star_y) total += y;
    const double f0 = total / static_cast<double>(star_y.size());
    double ss = 0.0, sq = 0.0;
    for (double y : star_y) {
        ss += (y - f0) * (y - f0);
        sq += y * y;
    }
    out.Vy = ss / static_cast<double>(star_y.size());
    if (degenerate(out.Vy, sq / static_cast<double>(star_y.size()))) throw_degenerate(who);
    return out;
}

TotalOrderEstimate vars_total(const StarSample& star, std::span<const double> star_y) {
    const VariogramEstimate vg = star_variogram(star, star_y, 1);
    const std::size_t k = star.k();
    double total = 0.0;
    for (double y : star_y) total += y;
    TotalOrderEstimate est{std::vector<double>(k), {total / static_cast<double>(star_y.size())}, {vg.Vy}};
    for (std::size_t i = 0; i < k; ++i) est.T_hat[i] = (vg.gamma_h[i] + vg.cov_h[i]) / vg.Vy;
    return finish(std::move(est));
}

std::vector<double> first_order_si(const EvaluationSet& ev) {
    constexpr const char* who = "first_order_si";
    const std::size_t n = ev.yA.size();
    require_min_rows(n, 1, who);
    require_list(ev.yB, n, "f(B)", who);
    const std::size_t k = ev.yAB.size();
    require_lists(ev.yAB, k, n, "f(A_B^(i))", who);
    const double nn = static_cast<double>(n);

    double total = 0.0;
    for (std::size_t v = 0; v < n; ++v) total += ev.yA[v] + ev.yB[v];
    const double f0 = total / (2.0 * nn);
    double ss = 0.0, sq = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        ss += (ev.yA[v] - f0) * (ev.yA[v] - f0) + (ev.yB[v] - f0) * (ev.yB[v] - f0);
        sq += ev.yA[v] * ev.yA[v] + ev.yB[v] * ev.yB[v];
    }
    const double vy = ss / (2.0 * nn);
    if (degenerate(vy, sq / (2.0 * nn))) throw_degenerate(who);

    std::vector<double> si(k);
    for (std::size_t i = 0; i < k; ++i) {
        double s = 0.0;
        for (std::size_t v = 0; v < n; ++v) s += ev.yB[v] * (ev.yAB[i][v] - ev.yA[v]);
        si[i] = (s / nn) / vy;
    }
    return si;
}

TotalOrderEstimate estimate_total(Estimator e, const EvaluationSet& ev) {
    switch (e) {
    case Estimator::jansen: return jansen_total(ev);
    case Estimator::homma_saltelli: return homma_saltelli_total(ev);
    case Estimator::janon_monod: return janon_monod_total(ev);
    case Estimator::glen_isaacs: return glen_isaacs_total(ev);
    case Estimator::saltelli2008: return saltelli2008_total(ev);
    case Estimator::azzini_rosati: return azzini_rosati_total(ev);
    case Estimator::pseudo_owen: return pseudo_owen_total(ev);
    case Estimator::razavi_gupta: break;
    }
    throw std::invalid_argument("estimate_total: razavi-gupta needs a star sample; use vars_total");
}

} // namespace gsa
