#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gsa/sample_matrix.hpp"

namespace gsa {

/// Independent uniform points on [0, 1)^d from a generator keyed by `seed`.
SampleMatrix random_points(std::size_t n, std::size_t d, std::uint64_t seed);

/// Largest dimension for which Sobol' direction numbers are compiled in.
std::size_t sobol_max_dimension() noexcept;

/// First `n` points of the d-dimensional Sobol' sequence.
///
/// Without a seed the sequence is returned unscrambled, skipping the
/// all-zeros point, so the first point is (0.5, ..., 0.5). With a seed the
/// sequence is scrambled by a random lower-triangular linear matrix
/// scramble followed by a random digital shift, and points are placed at the
/// centre of their 2^-32 cell; the first point is kept because it is no
/// longer degenerate and dropping it would break the (t, m, d)-net property.
///
/// Throws DimensionUnsupportedError when d exceeds sobol_max_dimension().
SampleMatrix sobol_points(std::size_t n, std::size_t d,
                          std::optional<std::uint64_t> scramble_seed = std::nullopt);

/// Name of the scrambling variant compiled into this build.
std::string_view sobol_scrambling_method() noexcept;

enum class SamplingMethod { monte_carlo = 1, sobol = 2 };

/// random_points for monte_carlo, scrambled sobol_points for sobol.
SampleMatrix draw_points(SamplingMethod method, std::size_t n, std::size_t d, std::uint64_t seed);

/// Sampling design required by an estimator family.
enum class EstimatorClass {
    ab_k,          // A + k A_B^(i): Jansen, Homma-Saltelli, Janon-Monod, Glen-Isaacs
    ab_k_plus_b,   // A, B + k B_A^(i): Saltelli 2008
    double_radial, // A, B + k A_B^(i) + k B_A^(i): Azzini-Rosati
    pseudo_owen,   // A, B + k B_A^(i) + k C_B^(i)
    stars,         // VARS star sample: Razavi-Gupta
};

inline constexpr EstimatorClass kAllEstimatorClasses[] = {
    EstimatorClass::ab_k, EstimatorClass::ab_k_plus_b, EstimatorClass::double_radial,
    EstimatorClass::pseudo_owen, EstimatorClass::stars};

std::string_view to_string(EstimatorClass c) noexcept;

struct RunAllocation {
    EstimatorClass estimator_class{};
    std::size_t total_runs = 0;     // requested budget N_t
    std::size_t effective_runs = 0; // N_t, or the fallback budget when applied
    std::size_t k = 0;
    std::size_t base_rows = 0;      // N_v: rows per matrix, or number of stars
    bool fallback_applied = false;

    /// Model evaluations implied by (class, N_v, k).
    std::size_t evaluations(double delta_h = 0.2) const;
};

/// Model runs per star: k (1/dh - 1) + 1.
std::size_t star_size(std::size_t k, double delta_h);

/// Split a budget among base rows for one estimator class.
///
/// Ceiling division by (k+1), (k+2) or (2k+2) for the matrix designs, floor
/// division by the star size for stars. When stars would get N_v <= 1 the
/// budget for every class becomes two stars' worth of runs.
RunAllocation allocate_runs(EstimatorClass c, std::size_t total_runs, std::size_t k,
                            double delta_h = 0.2);

struct DesignBundle {
    EstimatorClass estimator_class{};
    SampleMatrix A;
    std::optional<SampleMatrix> B;
    std::vector<SampleMatrix> ab_list; // A_B^(i)
    std::vector<SampleMatrix> ba_list; // B_A^(i)
    std::vector<SampleMatrix> cb_list; // C_B^(i)

    std::size_t k() const noexcept { return A.cols(); }
    std::size_t rows() const noexcept { return A.rows(); }
    /// Number of matrices that are evaluated by the model.
    std::size_t matrix_count() const noexcept;
};

/// `target` with column `i` replaced by column `i` of `source`.
SampleMatrix swap_column(const SampleMatrix& target, const SampleMatrix& source, std::size_t i);

/// Assemble the matrices an estimator class needs from a base sample.
///
/// The base holds 2k columns ([A | B]) or, for pseudo_owen, 3k ([A | B | C]).
/// Throws DesignShapeError on a column count that does not fit the class.
DesignBundle build_design(const SampleMatrix& base, EstimatorClass c);

/// VARS star sample: centres plus, per centre and input, a cross section of
/// 1/dh points spaced dh apart through the centre.
class StarSample {
public:
    StarSample(SampleMatrix centers, double delta_h);

    const SampleMatrix& centers() const noexcept { return centers_; }
    double delta_h() const noexcept { return delta_h_; }
    std::size_t star_count() const noexcept { return centers_.rows(); }
    std::size_t k() const noexcept { return centers_.cols(); }
    std::size_t section_length() const noexcept { return section_length_; }
    std::size_t points_per_star() const noexcept;
    std::size_t total_points() const noexcept { return star_count() * points_per_star(); }

    /// Coordinates of the section through star `s` along input `i`, ascending.
    std::span<const double> section(std::size_t s, std::size_t i) const noexcept;
    /// Position of the centre inside section (s, i).
    std::size_t center_position(std::size_t s, std::size_t i) const noexcept;

    /// Row of the flat evaluation list holding point `pos` of section (s, i).
    /// Each star contributes its centre first, then for every input the
    /// non-centre section points in ascending order.
    std::size_t flat_index(std::size_t s, std::size_t i, std::size_t pos) const noexcept;

    /// Every evaluation point, one per row, in flat_index order.
    SampleMatrix flat_points() const;

private:
    SampleMatrix centers_;
    double delta_h_;
    std::size_t section_length_;
    std::vector<double> coords_;          // [star][input][pos]
    std::vector<std::uint32_t> center_pos_; // [star][input]
};

/// Throws std::invalid_argument unless 1/dh is integral and >= 2, and the
/// centres lie in the unit cube.
StarSample build_star_design(const SampleMatrix& centers, double delta_h = 0.2);

} // namespace gsa
