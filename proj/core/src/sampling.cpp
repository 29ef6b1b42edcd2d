#include "gsa/sampling.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gsa/error.hpp"
#include "gsa/rng.hpp"

namespace gsa {

namespace {

#include "sobol_directions.inc"

constexpr int kSobolBits = 32;

using DirectionNumbers = std::array<std::uint32_t, kSobolBits>;

DirectionNumbers direction_numbers(std::size_t dim) {
    DirectionNumbers v{};
    if (dim == 0) {
        for (int j = 0; j < kSobolBits; ++j) v[j] = 1u << (kSobolBits - 1 - j);
        return v;
    }
    const std::uint32_t poly = kSobolPoly[dim];
    const int degree = std::bit_width(poly) - 1;
    const std::uint32_t inner = (poly >> 1) & ((1u << (degree - 1)) - 1u);
    const std::uint32_t* m = kSobolInitM + kSobolInitOffset[dim];
    for (int j = 0; j < degree && j < kSobolBits; ++j) v[j] = m[j] << (kSobolBits - 1 - j);
    for (int j = degree; j < kSobolBits; ++j) {
        std::uint32_t next = v[j - degree] ^ (v[j - degree] >> degree);
        for (int l = 1; l < degree; ++l) {
            if ((inner >> (degree - 1 - l)) & 1u) next ^= v[j - l];
        }
        v[j] = next;
    }
    return v;
}

// Random lower-triangular binary matrix with unit diagonal, indexed from the
// most significant bit. Row r of `rows` holds the mask of input bits that
// feed output bit r.
std::array<std::uint32_t, kSobolBits> random_lower_triangular(Rng& rng) {
    std::array<std::uint32_t, kSobolBits> rows{};
    for (int r = 0; r < kSobolBits; ++r) {
        const std::uint32_t diagonal = 1u << (kSobolBits - 1 - r);
        // Bits strictly above the diagonal position (more significant).
        const std::uint32_t above = r == 0 ? 0u : ~((diagonal << 1) - 1u);
        rows[r] = diagonal | (static_cast<std::uint32_t>(rng.next()) & above);
    }
    return rows;
}

std::uint32_t apply_scramble(const std::array<std::uint32_t, kSobolBits>& rows, std::uint32_t w) {
    std::uint32_t out = 0;
    for (int r = 0; r < kSobolBits; ++r) {
        const auto bit = static_cast<std::uint32_t>(std::popcount(w & rows[r]) & 1);
        out |= bit << (kSobolBits - 1 - r);
    }
    return out;
}

} // namespace

SampleMatrix random_points(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n == 0 || d == 0) throw std::invalid_argument("random_points: n and d must be positive");
    Rng rng(seed);
    SampleMatrix m(n, d);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) m(r, c) = rng.uniform();
    }
    return m;
}

std::size_t sobol_max_dimension() noexcept { return kSobolMaxDims; }

std::string_view sobol_scrambling_method() noexcept {
    return "linear-matrix-scramble+digital-shift";
}

SampleMatrix sobol_points(std::size_t n, std::size_t d, std::optional<std::uint64_t> scramble_seed) {
    if (n == 0 || d == 0) throw std::invalid_argument("sobol_points: n and d must be positive");
    if (d > kSobolMaxDims) {
        throw DimensionUnsupportedError("sobol_points: dimension " + std::to_string(d) +
                                        " exceeds the " + std::to_string(kSobolMaxDims) +
                                        " available direction-number sets");
    }
    if (n >= (std::size_t{1} << kSobolBits)) {
        throw std::invalid_argument("sobol_points: n exceeds 2^32 points");
    }

    SampleMatrix out(n, d);
    const bool scrambled = scramble_seed.has_value();
    constexpr double kScale = 0x1.0p-32;
    for (std::size_t dim = 0; dim < d; ++dim) {
        DirectionNumbers v = direction_numbers(dim);
        std::uint32_t x = 0;
        if (scrambled) {
            // Per-dimension stream so a prefix of dimensions is independent of d.
            Rng rng(derive_seed(*scramble_seed, dim));
            const auto rows = random_lower_triangular(rng);
            for (auto& vj : v) vj = apply_scramble(rows, vj);
            x = static_cast<std::uint32_t>(rng.next());
        }
        // Unscrambled output starts at index 1; scrambled output at index 0.
        const std::size_t first = scrambled ? 0 : 1;
        for (std::size_t i = 0; i < first + n; ++i) {
            if (i > 0) x ^= v[static_cast<std::size_t>(std::countr_zero(i))];
            if (i < first) continue;
            out(i - first, dim) = scrambled ? (static_cast<double>(x) + 0.5) * kScale
                                            : static_cast<double>(x) * kScale;
        }
    }
    return out;
}

SampleMatrix draw_points(SamplingMethod method, std::size_t n, std::size_t d, std::uint64_t seed) {
    if (method == SamplingMethod::monte_carlo) return random_points(n, d, seed);
    return sobol_points(n, d, seed);
}

std::string_view to_string(EstimatorClass c) noexcept {
    switch (c) {
    case EstimatorClass::ab_k: return "AB_k";
    case EstimatorClass::ab_k_plus_b: return "AB_k_plus_B";
    case EstimatorClass::double_radial: return "double_radial";
    case EstimatorClass::pseudo_owen: return "pseudo_owen";
    case EstimatorClass::stars: return "stars";
    }
    return "unknown";
}

namespace {

std::size_t section_length_for(double delta_h) {
    if (!(delta_h > 0.0 && delta_h < 1.0)) {
        throw std::invalid_argument("delta_h must lie in (0, 1)");
    }
    const double inv = 1.0 / delta_h;
    const double rounded = std::round(inv);
    if (std::abs(inv - rounded) > 1e-9 || rounded < 2.0) {
        throw std::invalid_argument("1/delta_h must be an integer >= 2");
    }
    return static_cast<std::size_t>(rounded);
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

std::size_t runs_per_row(EstimatorClass c, std::size_t k, double delta_h) {
    switch (c) {
    case EstimatorClass::ab_k: return k + 1;
    case EstimatorClass::ab_k_plus_b: return k + 2;
    case EstimatorClass::double_radial:
    case EstimatorClass::pseudo_owen: return 2 * k + 2;
    case EstimatorClass::stars: return star_size(k, delta_h);
    }
    return 0;
}

} // namespace

std::size_t star_size(std::size_t k, double delta_h) {
    return k * (section_length_for(delta_h) - 1) + 1;
}

std::size_t RunAllocation::evaluations(double delta_h) const {
    return base_rows * runs_per_row(estimator_class, k, delta_h);
}

RunAllocation allocate_runs(EstimatorClass c, std::size_t total_runs, std::size_t k, double delta_h) {
    if (k < 3) throw std::invalid_argument("allocate_runs: k must be at least 3");
    if (total_runs < 10) throw std::invalid_argument("allocate_runs: N_t must be at least 10");
    const std::size_t per_star = star_size(k, delta_h);

    RunAllocation a;
    a.estimator_class = c;
    a.total_runs = total_runs;
    a.effective_runs = total_runs;
    a.k = k;
    if (total_runs / per_star <= 1) {
        a.effective_runs = 2 * per_star;
        a.fallback_applied = true;
    }
    const std::size_t divisor = runs_per_row(c, k, delta_h);
    a.base_rows = c == EstimatorClass::stars ? a.effective_runs / divisor
                                             : ceil_div(a.effective_runs, divisor);
    if (a.base_rows < 2) {
        throw InfeasibleBudgetError("allocate_runs: " + std::string(to_string(c)) + " gets N_v=" +
                                    std::to_string(a.base_rows) + " for N_t=" +
                                    std::to_string(total_runs) + ", k=" + std::to_string(k));
    }
    return a;
}

std::size_t DesignBundle::matrix_count() const noexcept {
    return 1 + (B ? 1 : 0) + ab_list.size() + ba_list.size() + cb_list.size();
}

SampleMatrix swap_column(const SampleMatrix& target, const SampleMatrix& source, std::size_t i) {
    SampleMatrix out = target;
    for (std::size_t r = 0; r < out.rows(); ++r) out(r, i) = source(r, i);
    return out;
}

DesignBundle build_design(const SampleMatrix& base, EstimatorClass c) {
    if (c == EstimatorClass::stars) {
        throw DesignShapeError("build_design: star designs are built with build_star_design");
    }
    const std::size_t blocks = c == EstimatorClass::pseudo_owen ? 3 : 2;
    if (base.cols() == 0 || base.cols() % blocks != 0) {
        throw DesignShapeError("build_design: " + std::string(to_string(c)) + " needs a base with " +
                               std::to_string(blocks) + "k columns, got " +
                               std::to_string(base.cols()));
    }
    const std::size_t k = base.cols() / blocks;
    DesignBundle d;
    d.estimator_class = c;
    d.A = base.column_block(0, k);
    SampleMatrix b = base.column_block(k, k);

    switch (c) {
    case EstimatorClass::ab_k:
        for (std::size_t i = 0; i < k; ++i) d.ab_list.push_back(swap_column(d.A, b, i));
        break;
    case EstimatorClass::ab_k_plus_b:
        for (std::size_t i = 0; i < k; ++i) d.ba_list.push_back(swap_column(b, d.A, i));
        break;
    case EstimatorClass::double_radial:
        for (std::size_t i = 0; i < k; ++i) d.ab_list.push_back(swap_column(d.A, b, i));
        for (std::size_t i = 0; i < k; ++i) d.ba_list.push_back(swap_column(b, d.A, i));
        break;
    case EstimatorClass::pseudo_owen: {
        const SampleMatrix cmat = base.column_block(2 * k, k);
        for (std::size_t i = 0; i < k; ++i) d.ba_list.push_back(swap_column(b, d.A, i));
        for (std::size_t i = 0; i < k; ++i) d.cb_list.push_back(swap_column(cmat, b, i));
        break;
    }
    case EstimatorClass::stars: break;
    }
    if (c != EstimatorClass::ab_k) d.B = std::move(b);
    return d;
}

StarSample::StarSample(SampleMatrix centers, double delta_h)
    : centers_(std::move(centers)), delta_h_(delta_h), section_length_(section_length_for(delta_h)) {
    const std::size_t n = centers_.rows();
    const std::size_t k = centers_.cols();
    const std::size_t len = section_length_;
    coords_.resize(n * k * len);
    center_pos_.resize(n * k);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t i = 0; i < k; ++i) {
            const double c = centers_(s, i);
            auto jc = static_cast<std::ptrdiff_t>(std::floor(c / delta_h));
            jc = std::clamp<std::ptrdiff_t>(jc, 0, static_cast<std::ptrdiff_t>(len) - 1);
            if (jc > 0 && c - static_cast<double>(jc) * delta_h < 0.0) --jc;
            double* sec = coords_.data() + (s * k + i) * len;
            for (std::size_t j = 0; j < len; ++j) {
                sec[j] = c + static_cast<double>(static_cast<std::ptrdiff_t>(j) - jc) * delta_h;
            }
            center_pos_[s * k + i] = static_cast<std::uint32_t>(jc);
        }
    }
}

std::size_t StarSample::points_per_star() const noexcept { return k() * (section_length_ - 1) + 1; }

std::span<const double> StarSample::section(std::size_t s, std::size_t i) const noexcept {
    return {coords_.data() + (s * k() + i) * section_length_, section_length_};
}

std::size_t StarSample::center_position(std::size_t s, std::size_t i) const noexcept {
    return center_pos_[s * k() + i];
}

std::size_t StarSample::flat_index(std::size_t s, std::size_t i, std::size_t pos) const noexcept {
    const std::size_t base = s * points_per_star();
    const std::size_t cp = center_position(s, i);
    if (pos == cp) return base;
    return base + 1 + i * (section_length_ - 1) + (pos < cp ? pos : pos - 1);
}

SampleMatrix StarSample::flat_points() const {
    SampleMatrix out(total_points(), k());
    for (std::size_t s = 0; s < star_count(); ++s) {
        const auto center = centers_.row(s);
        for (std::size_t i = 0; i < k(); ++i) {
            const auto sec = section(s, i);
            for (std::size_t pos = 0; pos < section_length_; ++pos) {
                auto row = out.row(flat_index(s, i, pos));
                std::copy(center.begin(), center.end(), row.begin());
                row[i] = sec[pos];
            }
        }
    }
    return out;
}

StarSample build_star_design(const SampleMatrix& centers, double delta_h) {
    if (!centers.in_unit_cube()) {
        throw std::invalid_argument("build_star_design: centres must lie in [0, 1)");
    }
    return StarSample(centers, delta_h);
}

} // namespace gsa
