#include "gsa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gsa/error.hpp"

namespace gsa {

std::vector<double> ranks_from_values(std::span<const double> values) {
    const std::size_t k = values.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<double> ranks(k);
    std::size_t start = 0;
    while (start < k) {
        std::size_t end = start + 1;
        while (end < k && values[order[end]] == values[order[start]]) ++end;
        // Positions start+1 .. end share their mean.
        const double mid = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
        for (std::size_t j = start; j < end; ++j) ranks[order[j]] = mid;
        start = end;
    }
    return ranks;
}

double kendall_tau_b(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("kendall_tau_b: length mismatch");
    const std::size_t n = a.size();
    if (n < 2) throw std::invalid_argument("kendall_tau_b: needs at least two entries");
    long long concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double da = a[i] - a[j];
            const double db = b[i] - b[j];
            if (da == 0.0) ++ties_a;
            if (db == 0.0) ++ties_b;
            if (da == 0.0 || db == 0.0) continue;
            if ((da > 0.0) == (db > 0.0)) ++concordant;
            else ++discordant;
        }
    }
    const long long n0 = static_cast<long long>(n * (n - 1) / 2);
    if (ties_a == n0 || ties_b == n0) {
        throw UndefinedCorrelationError("kendall_tau_b: all values tied in one vector");
    }
    const double denom = std::sqrt(static_cast<double>(n0 - ties_a) * static_cast<double>(n0 - ties_b));
    return static_cast<double>(concordant - discordant) / denom;
}

std::vector<double> savage_scores(std::span<const double> ranks) {
    const std::size_t k = ranks.size();
    // tail[r] = sum_{j=r}^{k} 1/j for r = 1..k, tail[k+1] = 0.
    std::vector<double> tail(k + 2, 0.0);
    for (std::size_t j = k; j >= 1; --j) tail[j] = tail[j + 1] + 1.0 / static_cast<double>(j);

    std::vector<double> scores(k);
    std::vector<bool> done(k, false);
    for (std::size_t i = 0; i < k; ++i) {
        if (done[i]) continue;
        std::vector<std::size_t> group;
        for (std::size_t j = i; j < k; ++j) {
            if (!done[j] && ranks[j] == ranks[i]) group.push_back(j);
        }
        const double t = static_cast<double>(group.size());
        // A midrank m over t tied positions starts at m - (t - 1) / 2.
        const auto first = static_cast<std::size_t>(std::llround(ranks[i] - (t - 1.0) / 2.0));
        if (first < 1 || first + group.size() - 1 > k) {
            throw std::invalid_argument("savage_scores: not a valid midrank vector");
        }
        double s = 0.0;
        for (std::size_t p = first; p < first + group.size(); ++p) s += tail[p];
        s /= t;
        for (std::size_t j : group) {
            scores[j] = s;
            done[j] = true;
        }
    }
    return scores;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("pearson: needs at least two entries");
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw UndefinedCorrelationError("pearson: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double mae(std::span<const double> t_true, std::span<const double> t_hat) {
    if (t_true.size() != t_hat.size()) throw std::invalid_argument("mae: length mismatch");
    if (t_true.empty()) throw std::invalid_argument("mae: empty vectors");
    double s = 0.0;
    for (std::size_t i = 0; i < t_true.size(); ++i) s += std::abs(t_true[i] - t_hat[i]);
    return s / static_cast<double>(t_true.size());
}

OutOfRange out_of_range_fractions(std::span<const double> t_hat) {
    if (t_hat.empty()) throw std::invalid_argument("out_of_range_fractions: empty vector");
    std::size_t neg = 0, above = 0;
    for (double t : t_hat) {
        if (t < 0.0) ++neg;
        if (t > 1.0) ++above;
    }
    const double n = static_cast<double>(t_hat.size());
    return {static_cast<double>(neg) / n, static_cast<double>(above) / n};
}

double rank_agreement(std::span<const double> t_true, std::span<const double> t_hat, RankMeasure measure) {
    const auto r_true = ranks_from_values(t_true);
    const auto r_hat = ranks_from_values(t_hat);
    if (measure == RankMeasure::kendall_tau_b) return kendall_tau_b(r_true, r_hat);
    return pearson(savage_scores(r_true), savage_scores(r_hat));
}

} // namespace gsa
