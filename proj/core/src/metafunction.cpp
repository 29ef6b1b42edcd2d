#include "gsa/metafunction.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gsa/error.hpp"
#include "gsa/format.hpp"
#include "gsa/rng.hpp"

namespace gsa {

std::string_view to_string(FunctionId f) noexcept {
    switch (f) {
    case FunctionId::cubic: return "cubic";
    case FunctionId::discontinuous: return "discontinuous";
    case FunctionId::exponential: return "exponential";
    case FunctionId::inverse: return "inverse";
    case FunctionId::linear: return "linear";
    case FunctionId::no_effect: return "no_effect";
    case FunctionId::non_monotonic: return "non_monotonic";
    case FunctionId::periodic: return "periodic";
    case FunctionId::quadratic: return "quadratic";
    case FunctionId::trigonometric: return "trigonometric";
    }
    return "unknown";
}

double univariate(FunctionId f, double x) {
    switch (f) {
    case FunctionId::cubic: return x * x * x;
    case FunctionId::discontinuous: return x < 0.5 ? 0.0 : 1.0;
    case FunctionId::exponential: return (std::exp(x) - 1.0) / (std::numbers::e - 1.0);
    case FunctionId::inverse: return 1.0 / ((10.0 - 1.0 / 1.1) * (x + 0.1));
    case FunctionId::linear: return x;
    case FunctionId::no_effect: return 0.0;
    case FunctionId::non_monotonic: return 4.0 * (x - 0.5) * (x - 0.5);
    case FunctionId::periodic: return std::sin(2.0 * std::numbers::pi * x) / 2.0;
    case FunctionId::quadratic: return x * x;
    case FunctionId::trigonometric: return std::cos(x);
    }
    throw std::invalid_argument("univariate: unknown function id");
}

std::vector<std::array<std::uint32_t, 2>> enumerate_pairs(std::size_t k) {
    std::vector<std::array<std::uint32_t, 2>> out;
    out.reserve(k * (k - 1) / 2);
    for (std::uint32_t a = 0; a < k; ++a) {
        for (std::uint32_t b = a + 1; b < k; ++b) out.push_back({a, b});
    }
    return out;
}

std::vector<std::array<std::uint32_t, 3>> enumerate_triples(std::size_t k) {
    std::vector<std::array<std::uint32_t, 3>> out;
    if (k >= 3) out.reserve(k * (k - 1) * (k - 2) / 6);
    for (std::uint32_t a = 0; a < k; ++a) {
        for (std::uint32_t b = a + 1; b < k; ++b) {
            for (std::uint32_t c = b + 1; c < k; ++c) out.push_back({a, b, c});
        }
    }
    return out;
}

namespace {

// Ceiling of a fraction of a count; the slack absorbs products like
// 0.3 * 10 landing a hair above an integer.
std::size_t active_count(double fraction, std::size_t total) {
    const double raw = std::ceil(fraction * static_cast<double>(total) - 1e-9);
    return std::min(total, static_cast<std::size_t>(std::max(0.0, raw)));
}

// Sorted indices of `count` distinct draws from [0, total).
std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t total, std::size_t count) {
    std::vector<std::size_t> idx(total);
    for (std::size_t i = 0; i < total; ++i) idx[i] = i;
    for (std::size_t j = 0; j < count; ++j) {
        const std::size_t r = j + static_cast<std::size_t>(rng.index(total - j));
        std::swap(idx[j], idx[r]);
    }
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    return idx;
}

double mixture_coefficient(Rng& rng) {
    const double sd = rng.uniform() < 0.3 ? 5.0 : 0.5;
    return sd * rng.normal();
}

} // namespace

std::uint64_t phi_stream_seed(std::uint64_t epsilon_seed) { return derive_seed(epsilon_seed, "phi"); }

MetafunctionSpec generate_spec(std::size_t k, double k2, double k3, std::uint64_t epsilon_seed) {
    if (k < 3) throw std::invalid_argument("generate_spec: k must be at least 3");
    MetafunctionSpec spec;
    spec.k = k;
    spec.k2 = k2;
    spec.k3 = k3;
    spec.epsilon_seed = epsilon_seed;

    Rng shapes(derive_seed(epsilon_seed, "u"));
    spec.u.reserve(k);
    for (std::size_t i = 0; i < k; ++i) spec.u.push_back(static_cast<FunctionId>(shapes.index(10) + 1));

    Rng interactions(derive_seed(epsilon_seed, "interactions"));
    const auto all_pairs = enumerate_pairs(k);
    for (std::size_t r : sample_without_replacement(interactions, all_pairs.size(),
                                                    active_count(k2, all_pairs.size()))) {
        spec.pairs.push_back(all_pairs[r]);
    }
    const auto all_triples = enumerate_triples(k);
    for (std::size_t r : sample_without_replacement(interactions, all_triples.size(),
                                                    active_count(k3, all_triples.size()))) {
        spec.triples.push_back(all_triples[r]);
    }

    Rng coefficients(derive_seed(epsilon_seed, "coefficients"));
    for (std::size_t i = 0; i < k; ++i) spec.alpha.push_back(mixture_coefficient(coefficients));
    for (std::size_t i = 0; i < spec.pairs.size(); ++i) spec.beta.push_back(mixture_coefficient(coefficients));
    for (std::size_t i = 0; i < spec.triples.size(); ++i) spec.gamma.push_back(mixture_coefficient(coefficients));
    return spec;
}

namespace {

void check_spec(const MetafunctionSpec& spec) {
    if (spec.u.size() != spec.k || spec.alpha.size() != spec.k ||
        spec.beta.size() != spec.pairs.size() || spec.gamma.size() != spec.triples.size()) {
        throw FormatError("metafunction spec has inconsistent list lengths");
    }
    for (const auto& p : spec.pairs) {
        if (p[0] >= spec.k || p[1] >= spec.k) throw FormatError("pair index out of range");
    }
    for (const auto& t : spec.triples) {
        if (t[0] >= spec.k || t[1] >= spec.k || t[2] >= spec.k) throw FormatError("triple index out of range");
    }
}

} // namespace

std::vector<double> evaluate(const MetafunctionSpec& spec, const SampleMatrix& m) {
    if (m.cols() != spec.k) {
        throw DesignShapeError("evaluate: matrix has " + std::to_string(m.cols()) +
                               " columns, metafunction expects " + std::to_string(spec.k));
    }
    check_spec(spec);
    std::vector<double> y(m.rows());
    std::vector<double> g(spec.k);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t i = 0; i < spec.k; ++i) g[i] = univariate(spec.u[i], m(r, i));
        double acc = 0.0;
        for (std::size_t i = 0; i < spec.k; ++i) acc += spec.alpha[i] * g[i];
        for (std::size_t p = 0; p < spec.pairs.size(); ++p) {
            acc += spec.beta[p] * g[spec.pairs[p][0]] * g[spec.pairs[p][1]];
        }
        for (std::size_t t = 0; t < spec.triples.size(); ++t) {
            const auto& tr = spec.triples[t];
            acc += spec.gamma[t] * g[tr[0]] * g[tr[1]] * g[tr[2]];
        }
        y[r] = acc;
    }
    return y;
}

MetafunctionEvaluator::MetafunctionEvaluator(const MetafunctionSpec& spec) : spec_(&spec) {
    check_spec(spec);
}

SampleMatrix MetafunctionEvaluator::terms(const SampleMatrix& m) const {
    const auto& s = *spec_;
    if (m.cols() != s.k) {
        throw DesignShapeError("evaluate: matrix has " + std::to_string(m.cols()) +
                               " columns, metafunction expects " + std::to_string(s.k));
    }
    SampleMatrix g(m.rows(), s.k);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t i = 0; i < s.k; ++i) g(r, i) = univariate(s.u[i], m(r, i));
    }
    return g;
}

double MetafunctionEvaluator::output(std::span<const double> g) const {
    const auto& s = *spec_;
    double acc = 0.0;
    for (std::size_t i = 0; i < s.k; ++i) acc += s.alpha[i] * g[i];
    for (std::size_t p = 0; p < s.pairs.size(); ++p) acc += s.beta[p] * g[s.pairs[p][0]] * g[s.pairs[p][1]];
    for (std::size_t t = 0; t < s.triples.size(); ++t) {
        const auto& tr = s.triples[t];
        acc += s.gamma[t] * g[tr[0]] * g[tr[1]] * g[tr[2]];
    }
    return acc;
}

double MetafunctionEvaluator::output_and_gradient(std::span<const double> g, std::span<double> grad) const {
    const auto& s = *spec_;
    double acc = 0.0;
    for (std::size_t i = 0; i < s.k; ++i) {
        acc += s.alpha[i] * g[i];
        grad[i] = s.alpha[i];
    }
    for (std::size_t p = 0; p < s.pairs.size(); ++p) {
        const auto a = s.pairs[p][0];
        const auto b = s.pairs[p][1];
        const double w = s.beta[p];
        acc += w * g[a] * g[b];
        grad[a] += w * g[b];
        grad[b] += w * g[a];
    }
    for (std::size_t t = 0; t < s.triples.size(); ++t) {
        const auto& tr = s.triples[t];
        const double w = s.gamma[t];
        const double ga = g[tr[0]], gb = g[tr[1]], gc = g[tr[2]];
        acc += w * ga * gb * gc;
        grad[tr[0]] += w * gb * gc;
        grad[tr[1]] += w * ga * gc;
        grad[tr[2]] += w * ga * gb;
    }
    return acc;
}

std::vector<double> MetafunctionEvaluator::evaluate(const SampleMatrix& m) const {
    const SampleMatrix g = terms(m);
    std::vector<double> y(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) y[r] = output(g.row(r));
    return y;
}

std::vector<std::vector<double>> MetafunctionEvaluator::evaluate_swaps(const SampleMatrix& target,
                                                                       const SampleMatrix& source,
                                                                       std::vector<double>* base_out) const {
    if (target.rows() != source.rows() || target.cols() != source.cols()) {
        throw DesignShapeError("evaluate_swaps: target and source shapes differ");
    }
    const std::size_t k = spec_->k;
    const SampleMatrix gt = terms(target);
    const SampleMatrix gs = terms(source);
    std::vector<std::vector<double>> out(k, std::vector<double>(target.rows()));
    if (base_out) base_out->resize(target.rows());
    std::vector<double> grad(k);
    for (std::size_t r = 0; r < target.rows(); ++r) {
        const double y = output_and_gradient(gt.row(r), grad);
        if (base_out) (*base_out)[r] = y;
        for (std::size_t i = 0; i < k; ++i) out[i][r] = y + (gs(r, i) - gt(r, i)) * grad[i];
    }
    return out;
}

void write_spec(std::ostream& os, const MetafunctionSpec& spec) {
    os << "gsa-metafunction 1\n";
    os << "k " << spec.k << '\n';
    os << "k2 " << format_double(spec.k2) << '\n';
    os << "k3 " << format_double(spec.k3) << '\n';
    os << "epsilon_seed " << spec.epsilon_seed << '\n';
    os << "u";
    for (auto f : spec.u) os << ' ' << static_cast<int>(f);
    os << "\nalpha";
    for (double v : spec.alpha) os << ' ' << format_double(v);
    os << "\npairs";
    for (const auto& p : spec.pairs) os << ' ' << p[0] + 1 << '-' << p[1] + 1;
    os << "\nbeta";
    for (double v : spec.beta) os << ' ' << format_double(v);
    os << "\ntriples";
    for (const auto& t : spec.triples) os << ' ' << t[0] + 1 << '-' << t[1] + 1 << '-' << t[2] + 1;
    os << "\ngamma";
    for (double v : spec.gamma) os << ' ' << format_double(v);
    os << '\n';
}

namespace {

template <std::size_t N>
std::array<std::uint32_t, N> parse_index_tuple(std::string_view token) {
    const auto parts = split(token, '-');
    if (parts.size() != N) throw FormatError("malformed interaction '" + std::string(token) + "'");
    std::array<std::uint32_t, N> out{};
    for (std::size_t j = 0; j < N; ++j) {
        const auto v = parse_int(parts[j]);
        if (v < 1) throw FormatError("interaction indices are 1-based");
        out[j] = static_cast<std::uint32_t>(v - 1);
    }
    return out;
}

} // namespace

MetafunctionSpec read_spec(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || trim(line) != "gsa-metafunction 1") {
        throw FormatError("not a metafunction record (missing 'gsa-metafunction 1' header)");
    }
    std::map<std::string, std::vector<std::string>> fields;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        std::vector<std::string> tokens;
        for (std::string tok; ls >> tok;) tokens.push_back(tok);
        fields[key] = std::move(tokens);
    }
    auto require = [&](const char* key) -> const std::vector<std::string>& {
        auto it = fields.find(key);
        if (it == fields.end()) throw FormatError(std::string("metafunction record lacks '") + key + "'");
        return it->second;
    };
    auto scalar = [&](const char* key) -> const std::string& {
        const auto& v = require(key);
        if (v.size() != 1) throw FormatError(std::string("field '") + key + "' needs one value");
        return v.front();
    };

    MetafunctionSpec spec;
    spec.k = static_cast<std::size_t>(parse_int(scalar("k")));
    spec.k2 = parse_double(scalar("k2"));
    spec.k3 = parse_double(scalar("k3"));
    spec.epsilon_seed = static_cast<std::uint64_t>(parse_int(scalar("epsilon_seed")));
    for (const auto& t : require("u")) {
        const auto id = parse_int(t);
        if (id < 1 || id > 10) throw FormatError("function id out of range 1..10");
        spec.u.push_back(static_cast<FunctionId>(id));
    }
    for (const auto& t : require("alpha")) spec.alpha.push_back(parse_double(t));
    for (const auto& t : require("pairs")) spec.pairs.push_back(parse_index_tuple<2>(t));
    for (const auto& t : require("beta")) spec.beta.push_back(parse_double(t));
    for (const auto& t : require("triples")) spec.triples.push_back(parse_index_tuple<3>(t));
    for (const auto& t : require("gamma")) spec.gamma.push_back(parse_double(t));
    check_spec(spec);
    return spec;
}

} // namespace gsa
