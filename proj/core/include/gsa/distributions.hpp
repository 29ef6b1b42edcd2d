#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gsa/sample_matrix.hpp"

namespace gsa {

enum class DistributionKind { uniform, trunc_normal, beta, logitnormal };

/// A marginal distribution on (0, 1).
///
/// `a` and `b` are (mean, sd) for trunc_normal and logitnormal, the two shape
/// parameters for beta, and unused for uniform.
struct DistributionId {
    DistributionKind kind = DistributionKind::uniform;
    double a = 0.0;
    double b = 0.0;

    static DistributionId uniform() { return {DistributionKind::uniform, 0.0, 0.0}; }
    static DistributionId trunc_normal(double mean = 0.5, double sd = 0.15) {
        return {DistributionKind::trunc_normal, mean, sd};
    }
    static DistributionId beta(double alpha, double beta) { return {DistributionKind::beta, alpha, beta}; }
    static DistributionId logitnormal(double mu = 0.0, double sigma = 1.0) {
        return {DistributionKind::logitnormal, mu, sigma};
    }

    friend bool operator==(const DistributionId&, const DistributionId&) = default;
};

using DistributionVector = std::vector<DistributionId>;

/// The seven settings indexed by phi = 1..7: uniform, truncated normal,
/// Beta(8,2), Beta(2,8), Beta(0.5,0.5), Beta(2,2), logit-normal(0,1).
DistributionId distribution_for_phi(int phi);

/// Inverse CDF. Throws DomainError unless 0 < p < 1.
double quantile(const DistributionId& dist, double p);

double cdf(const DistributionId& dist, double x);

/// quantile() for a unit-cube coordinate that may be exactly 0: uniform
/// returns the value unchanged, other settings clamp to [2^-53, 1 - 2^-53].
double transform_value(const DistributionId& dist, double u);

/// phi in 1..7 gives k copies of that setting; phi = 8 draws each input's
/// setting uniformly from the seven using `seed`.
DistributionVector phi_assign(int phi, std::size_t k, std::uint64_t seed);

/// Apply quantile(dv[c], .) to every value of column c.
///
/// Uniform columns are copied unchanged. Elsewhere values of exactly 0 are
/// nudged to 2^-53 before inversion.
SampleMatrix transform_matrix(const SampleMatrix& m, const DistributionVector& dv);

/// Compact "name:param:param" form, e.g. "beta:8:2" or "uniform".
std::string to_string(const DistributionId& dist);
DistributionId parse_distribution(std::string_view text);

/// Comma-separated to_string of every entry.
std::string to_string(const DistributionVector& dv);

} // namespace gsa
