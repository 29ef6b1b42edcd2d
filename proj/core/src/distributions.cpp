#include "gsa/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/policies/policy.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "gsa/error.hpp"
#include "gsa/format.hpp"
#include "gsa/rng.hpp"

namespace gsa {

namespace {

namespace bm = boost::math;
using Policy = bm::policies::policy<bm::policies::promote_double<false>>;
using Normal = bm::normal_distribution<double, Policy>;

constexpr double kTiny = 0x1.0p-53;

double std_normal_cdf(double z) { return bm::cdf(Normal(0.0, 1.0), z); }
double std_normal_quantile(double p) { return bm::quantile(Normal(0.0, 1.0), p); }

double trunc_normal_quantile(double mean, double sd, double p) {
    const double lo = std_normal_cdf((0.0 - mean) / sd);
    const double hi = std_normal_cdf((1.0 - mean) / sd);
    const double x = mean + sd * std_normal_quantile(lo + p * (hi - lo));
    return std::clamp(x, std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0));
}

double trunc_normal_cdf(double mean, double sd, double x) {
    const double lo = std_normal_cdf((0.0 - mean) / sd);
    const double hi = std_normal_cdf((1.0 - mean) / sd);
    return (std_normal_cdf((x - mean) / sd) - lo) / (hi - lo);
}

} // namespace

DistributionId distribution_for_phi(int phi) {
    switch (phi) {
    case 1: return DistributionId::uniform();
    case 2: return DistributionId::trunc_normal();
    case 3: return DistributionId::beta(8.0, 2.0);
    case 4: return DistributionId::beta(2.0, 8.0);
    case 5: return DistributionId::beta(0.5, 0.5);
    case 6: return DistributionId::beta(2.0, 2.0);
    case 7: return DistributionId::logitnormal();
    default: throw std::invalid_argument("phi must be in 1..7 for a single distribution");
    }
}

double quantile(const DistributionId& dist, double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in the open interval (0, 1)");
    switch (dist.kind) {
    case DistributionKind::uniform: return p;
    case DistributionKind::trunc_normal: return trunc_normal_quantile(dist.a, dist.b, p);
    case DistributionKind::beta: return bm::ibeta_inv(dist.a, dist.b, p, Policy());
    case DistributionKind::logitnormal: {
        const double z = dist.a + dist.b * std_normal_quantile(p);
        return 1.0 / (1.0 + std::exp(-z));
    }
    }
    return p;
}

double cdf(const DistributionId& dist, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    switch (dist.kind) {
    case DistributionKind::uniform: return x;
    case DistributionKind::trunc_normal: return trunc_normal_cdf(dist.a, dist.b, x);
    case DistributionKind::beta: return bm::ibeta(dist.a, dist.b, x, Policy());
    case DistributionKind::logitnormal:
        return std_normal_cdf((std::log(x / (1.0 - x)) - dist.a) / dist.b);
    }
    return x;
}

DistributionVector phi_assign(int phi, std::size_t k, std::uint64_t seed) {
    if (phi < 1 || phi > 8) throw std::invalid_argument("phi must be in 1..8");
    if (phi <= 7) return DistributionVector(k, distribution_for_phi(phi));
    Rng rng(seed);
    DistributionVector dv;
    dv.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        dv.push_back(distribution_for_phi(static_cast<int>(rng.index(7)) + 1));
    }
    return dv;
}

double transform_value(const DistributionId& dist, double u) {
    if (dist.kind == DistributionKind::uniform) return u;
    return quantile(dist, std::clamp(u, kTiny, 1.0 - kTiny));
}

SampleMatrix transform_matrix(const SampleMatrix& m, const DistributionVector& dv) {
    if (m.cols() != dv.size()) {
        throw DesignShapeError("transform_matrix: matrix has " + std::to_string(m.cols()) +
                               " columns but the distribution vector has " +
                               std::to_string(dv.size()));
    }
    SampleMatrix out = m;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (dv[c].kind == DistributionKind::uniform) continue;
        for (std::size_t r = 0; r < m.rows(); ++r) out(r, c) = transform_value(dv[c], m(r, c));
    }
    return out;
}

std::string to_string(const DistributionId& dist) {
    switch (dist.kind) {
    case DistributionKind::uniform: return "uniform";
    case DistributionKind::trunc_normal:
        return "trunc_normal:" + format_double(dist.a) + ":" + format_double(dist.b);
    case DistributionKind::beta: return "beta:" + format_double(dist.a) + ":" + format_double(dist.b);
    case DistributionKind::logitnormal:
        return "logitnormal:" + format_double(dist.a) + ":" + format_double(dist.b);
    }
    return "uniform";
}

DistributionId parse_distribution(std::string_view text) {
    const auto fields = split(text, ':');
    if (fields.empty()) throw FormatError("empty distribution id");
    const std::string_view name = fields[0];
    if (name == "uniform" && fields.size() == 1) return DistributionId::uniform();
    if (fields.size() != 3) throw FormatError("malformed distribution id: " + std::string(text));
    const double a = parse_double(fields[1]);
    const double b = parse_double(fields[2]);
    if (name == "trunc_normal") return DistributionId::trunc_normal(a, b);
    if (name == "beta") return DistributionId::beta(a, b);
    if (name == "logitnormal") return DistributionId::logitnormal(a, b);
    throw FormatError("unknown distribution: " + std::string(name));
}

std::string to_string(const DistributionVector& dv) {
    std::string out;
    for (std::size_t i = 0; i < dv.size(); ++i) {
        if (i > 0) out += ',';
        out += to_string(dv[i]);
    }
    return out;
}

} // namespace gsa
