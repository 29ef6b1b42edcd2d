#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "gsa/estimators.hpp"
#include "gsa/sampling.hpp"

namespace gsa::testing {

using Model = std::function<double(std::span<const double>)>;

inline std::vector<double> run_model(const Model& f, const SampleMatrix& m) {
    std::vector<double> y(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) y[r] = f(m.row(r));
    return y;
}

inline EvaluationSet evaluate_design(const Model& f, const DesignBundle& d) {
    EvaluationSet ev;
    ev.yA = run_model(f, d.A);
    if (d.B) ev.yB = run_model(f, *d.B);
    for (const auto& m : d.ab_list) ev.yAB.push_back(run_model(f, m));
    for (const auto& m : d.ba_list) ev.yBA.push_back(run_model(f, m));
    for (const auto& m : d.cb_list) ev.yCB.push_back(run_model(f, m));
    return ev;
}

/// Scrambled Sobol' design of `rows` rows for estimator `e` on k inputs.
inline EvaluationSet sobol_design(const Model& f, Estimator e, std::size_t k, std::size_t rows,
                                  std::uint64_t seed) {
    const EstimatorClass c = design_class(e);
    const std::size_t width = (c == EstimatorClass::pseudo_owen ? 3 : 2) * k;
    return evaluate_design(f, build_design(sobol_points(rows, width, seed), c));
}

inline std::vector<double> star_outputs(const Model& f, const StarSample& s) {
    return run_model(f, s.flat_points());
}

// Ishigami on [-pi, pi]^3 reached from the unit cube.
inline double ishigami(std::span<const double> u, double a = 7.0, double b = 0.1) {
    const double pi = std::numbers::pi;
    const double x1 = -pi + 2 * pi * u[0], x2 = -pi + 2 * pi * u[1], x3 = -pi + 2 * pi * u[2];
    return std::sin(x1) + a * std::sin(x2) * std::sin(x2) + b * std::pow(x3, 4) * std::sin(x1);
}

inline std::vector<double> ishigami_total(double a = 7.0, double b = 0.1) {
    const double pi4 = std::pow(std::numbers::pi, 4);
    const double v1 = 0.5 * std::pow(1.0 + b * pi4 / 5.0, 2);
    const double v2 = a * a / 8.0;
    const double v13 = 8.0 * b * b * pi4 * pi4 / 225.0;
    const double v = v1 + v2 + v13;
    return {(v1 + v13) / v, v2 / v, v13 / v};
}

// Sobol' G function, prod (|4u - 2| + a_i) / (1 + a_i).
inline double g_function(std::span<const double> u, std::span<const double> a) {
    double y = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) y *= (std::abs(4.0 * u[i] - 2.0) + a[i]) / (1.0 + a[i]);
    return y;
}

inline std::vector<double> g_function_total(std::span<const double> a) {
    std::vector<double> vi(a.size());
    double prod = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        vi[i] = (1.0 / 3.0) / ((1.0 + a[i]) * (1.0 + a[i]));
        prod *= 1.0 + vi[i];
    }
    const double vy = prod - 1.0;
    std::vector<double> t(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) t[i] = vi[i] * (prod / (1.0 + vi[i])) / vy;
    return t;
}

} // namespace gsa::testing
