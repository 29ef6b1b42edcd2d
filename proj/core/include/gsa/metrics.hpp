#pragma once

#include <span>
#include <utility>
#include <vector>

namespace gsa {

/// Descending midranks: rank 1 is the largest value; ties share the mean of
/// the positions they occupy.
std::vector<double> ranks_from_values(std::span<const double> values);

/// Kendall tau-b with tie corrections. Throws UndefinedCorrelationError when
/// either vector is entirely tied, std::invalid_argument on length mismatch
/// or fewer than two entries.
double kendall_tau_b(std::span<const double> a, std::span<const double> b);

/// Savage scores of a rank vector: the score at position r is sum_{j=r}^{k} 1/j;
/// tied entries get the mean score of their positions.
std::vector<double> savage_scores(std::span<const double> ranks);

/// Sample Pearson correlation. Throws UndefinedCorrelationError on zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Mean absolute error (1/k) sum |t_i - t_hat_i|.
double mae(std::span<const double> t_true, std::span<const double> t_hat);

struct OutOfRange {
    double frac_negative = 0.0;
    double frac_above_one = 0.0;
};

OutOfRange out_of_range_fractions(std::span<const double> t_hat);

enum class RankMeasure { kendall_tau_b = 1, savage_pearson = 2 };

/// Rank agreement between estimated and reference indices under measure delta.
double rank_agreement(std::span<const double> t_true, std::span<const double> t_hat, RankMeasure measure);

} // namespace gsa
