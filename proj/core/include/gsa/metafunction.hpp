#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "gsa/sample_matrix.hpp"

namespace gsa {

/// The ten univariate shapes combined by the metafunction, numbered 1..10.
enum class FunctionId : int {
    cubic = 1,
    discontinuous = 2,
    exponential = 3,
    inverse = 4,
    linear = 5,
    no_effect = 6,
    non_monotonic = 7,
    periodic = 8,
    quadratic = 9,
    trigonometric = 10,
};

std::string_view to_string(FunctionId f) noexcept;

/// Evaluate one univariate shape on [0, 1].
double univariate(FunctionId f, double x);

/// A fully materialised random test function
///
///   y = sum_i alpha_i f_i(x_i) + sum_p beta_p f_a f_b + sum_t gamma_t f_a f_b f_c
///
/// where f_i = univariate(u[i], x_i). Indices are zero-based.
struct MetafunctionSpec {
    std::size_t k = 0;
    double k2 = 0.0;
    double k3 = 0.0;
    std::uint64_t epsilon_seed = 0;
    std::vector<FunctionId> u;
    std::vector<std::array<std::uint32_t, 2>> pairs;
    std::vector<std::array<std::uint32_t, 3>> triples;
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> gamma;

    friend bool operator==(const MetafunctionSpec&, const MetafunctionSpec&) = default;
};

/// Row r of the lexicographic enumeration of all C(k,2) pairs.
std::vector<std::array<std::uint32_t, 2>> enumerate_pairs(std::size_t k);
/// All C(k,3) triples in lexicographic order.
std::vector<std::array<std::uint32_t, 3>> enumerate_triples(std::size_t k);

/// Draw a spec: u with replacement from the ten shapes, ceil(k2 n) pairs and
/// ceil(k3 m) triples without replacement, and coefficients from
/// 0.3 N(0, 5) + 0.7 N(0, 0.5). Every draw is keyed by `epsilon_seed`, with
/// independent substreams for u, the interaction sets and the coefficients.
MetafunctionSpec generate_spec(std::size_t k, double k2, double k3, std::uint64_t epsilon_seed);

/// Seed of the substream that assigns per-input distributions when phi = 8.
std::uint64_t phi_stream_seed(std::uint64_t epsilon_seed);

/// Model output for every row of `m` (already mapped to the target marginals).
std::vector<double> evaluate(const MetafunctionSpec& spec, const SampleMatrix& m);

/// Evaluator that exploits the multilinear structure of the metafunction.
///
/// The output is linear in each univariate term g_i = f_i(x_i), so for a
/// point that differs from a base point only in input i,
///   y' = y + (g_i' - g_i) * dy/dg_i.
/// This evaluates column-swap designs (A_B^(i), B_A^(i), C_B^(i)) and star
/// cross sections at the cost of one gradient pass per base point.
class MetafunctionEvaluator {
public:
    explicit MetafunctionEvaluator(const MetafunctionSpec& spec);

    const MetafunctionSpec& spec() const noexcept { return *spec_; }

    /// Univariate terms g(r, i) for every row of `m`.
    SampleMatrix terms(const SampleMatrix& m) const;

    /// y for one row of terms.
    double output(std::span<const double> g) const;

    /// y and dy/dg_i for one row of terms; `grad` has length k.
    double output_and_gradient(std::span<const double> g, std::span<double> grad) const;

    std::vector<double> evaluate(const SampleMatrix& m) const;

    /// Outputs of `target` with column i taken from `source`, for every i.
    /// Returns k vectors of length rows, plus y(target) in `base_out`.
    std::vector<std::vector<double>> evaluate_swaps(const SampleMatrix& target,
                                                    const SampleMatrix& source,
                                                    std::vector<double>* base_out = nullptr) const;

private:
    const MetafunctionSpec* spec_;
};

/// Text record holding every field of a spec; floats are written in
/// shortest round-trip form so a read-back spec is identical.
void write_spec(std::ostream& os, const MetafunctionSpec& spec);
MetafunctionSpec read_spec(std::istream& is);

} // namespace gsa
