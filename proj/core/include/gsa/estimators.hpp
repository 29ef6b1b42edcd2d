#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gsa/sampling.hpp"

namespace gsa {

/// The eight total-order estimators, in table order.
enum class Estimator {
    jansen = 1,
    homma_saltelli = 2,
    janon_monod = 3,
    glen_isaacs = 4,
    saltelli2008 = 5,
    azzini_rosati = 6,
    pseudo_owen = 7,
    razavi_gupta = 8,
};

inline constexpr std::array<Estimator, 8> kAllEstimators = {
    Estimator::jansen,       Estimator::homma_saltelli, Estimator::janon_monod,
    Estimator::glen_isaacs,  Estimator::saltelli2008,   Estimator::azzini_rosati,
    Estimator::pseudo_owen,  Estimator::razavi_gupta};

/// CLI name: jansen, homma-saltelli, janon-monod, glen-isaacs, saltelli-2008,
/// azzini-rosati, pseudo-owen, razavi-gupta.
std::string_view to_string(Estimator e) noexcept;
std::optional<Estimator> parse_estimator(std::string_view name) noexcept;

EstimatorClass design_class(Estimator e) noexcept;

/// Model outputs of a design. Members absent from the design stay empty.
struct EvaluationSet {
    std::vector<double> yA;
    std::vector<double> yB;
    std::vector<std::vector<double>> yAB; // k lists, f(A_B^(i))
    std::vector<std::vector<double>> yBA; // k lists, f(B_A^(i))
    std::vector<std::vector<double>> yCB; // k lists, f(C_B^(i))

    std::size_t k() const noexcept;
};

struct TotalOrderEstimate {
    std::vector<double> T_hat;
    std::vector<double> f0; // one entry, or one per input where the mean is per input
    std::vector<double> Vy; // same convention as f0
    std::size_t n_negative = 0;
    std::size_t n_above_one = 0;
};

/// Fill n_negative / n_above_one from T_hat.
void count_out_of_range(TotalOrderEstimate& est);

// Matrix-design estimators. Each throws DesignShapeError when a member it
// needs is missing or mis-sized, and DegenerateOutputError when its variance
// normaliser is zero.

/// [1/(2N) sum (f(A) - f(A_B^(i)))^2] / V(y).
TotalOrderEstimate jansen_total(const EvaluationSet& ev);

/// [V(y) - (1/N sum f(A) f(A_B^(i)) - f0^2)] / V(y).
///
/// V(y) is taken as the raw-moment form 1/N sum f(A)^2 - f0^2, the same
/// arithmetic used for the cross term, so an input whose perturbed outputs
/// equal the base outputs gets exactly zero.
TotalOrderEstimate homma_saltelli_total(const EvaluationSet& ev);

/// 1 - [1/N sum f(A) f(A_B^(i)) - f0_i^2] / V_i with per-input pooled
/// mean and variance over f(A) and f(A_B^(i)).
TotalOrderEstimate janon_monod_total(const EvaluationSet& ev);

/// 1 - sample correlation of f(A) and f(A_B^(i)).
TotalOrderEstimate glen_isaacs_total(const EvaluationSet& ev);

/// 1 - [1/N sum f(B) f(B_A^(i)) - f0^2] / V(y), with f0 and V(y) from f(A).
TotalOrderEstimate saltelli2008_total(const EvaluationSet& ev);

/// Ratio of the two radial sums of squares over A, B, A_B^(i), B_A^(i).
TotalOrderEstimate azzini_rosati_total(const EvaluationSet& ev);

/// [V(y) - 1/N sum (f(B) - f(C_B^(i))) (f(B_A^(i)) - f(A))] / V(y) with V(y)
/// pooled over f(A) and f(B).
TotalOrderEstimate pseudo_owen_total(const EvaluationSet& ev);

struct VariogramEstimate {
    std::vector<double> gamma_h; // mean variogram at lag dh, per input
    std::vector<double> cov_h;   // mean within-star covariogram at lag dh, per input
    double Vy = 0.0;
};

/// Variogram and covariogram at lag `lag_steps * dh` (lag_steps >= 1).
VariogramEstimate star_variogram(const StarSample& star, std::span<const double> star_y,
                                 std::size_t lag_steps = 1);

/// (E[gamma_i(dh)] + E[C_i(dh)]) / V(y), V(y) over all star outputs.
TotalOrderEstimate vars_total(const StarSample& star, std::span<const double> star_y);

/// First-order indices [1/N sum f(B) (f(A_B^(i)) - f(A))] / V(y), with V(y)
/// the variance of f(A) and f(B) pooled.
std::vector<double> first_order_si(const EvaluationSet& ev);

/// Dispatch for the seven matrix-design estimators.
TotalOrderEstimate estimate_total(Estimator e, const EvaluationSet& ev);

} // namespace gsa
