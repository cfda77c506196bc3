#include "plr/scramble.hpp"

#include <cmath>
#include <charconv>
#include <random>
#include <stdexcept>

#include "plr/dd.hpp"

namespace plr {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kTailSalt = 0xD1B54A32D192ED03ULL;

std::uint64_t root_key(std::uint64_t seed, std::uint64_t replicate, std::size_t coordinate) {
    std::uint64_t k = mix64(seed + kGolden);
    k = mix64(k ^ (replicate + 1) * kGolden);
    return mix64(k ^ (static_cast<std::uint64_t>(coordinate) + 1) * 0xBF58476D1CE4E5B9ULL);
}

std::uint64_t child_key(std::uint64_t key, std::uint32_t digit) {
    return mix64(key ^ (static_cast<std::uint64_t>(digit) + 1) * kGolden);
}

double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

// Uniform integer in [0, k) from a stream of hashes, by rejection.
std::uint32_t bounded(std::uint64_t key, std::uint64_t& counter, std::uint32_t k) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % k;
    while (true) {
        const std::uint64_t x = mix64(key + (++counter) * kGolden);
        if (x < limit) return static_cast<std::uint32_t>(x % k);
    }
}

// One scrambled coordinate; digits are read from the m-digit numerator.
double scramble_value(std::uint32_t numerator, std::uint32_t b, int m, int depth, std::uint64_t key,
                      std::vector<std::uint32_t>& digits) {
    digits.assign(static_cast<std::size_t>(depth), 0U);
    std::uint32_t rest = numerator;
    for (int k = m; k >= 1; --k) {
        if (k <= depth) digits[static_cast<std::size_t>(k - 1)] = rest % b;
        rest /= b;
    }
    for (int k = 0; k < depth; ++k) {
        const auto xi = digits[static_cast<std::size_t>(k)];
        std::uint32_t eta;
        if (b == 2) {
            eta = xi ^ static_cast<std::uint32_t>(mix64(key) & 1U);
        } else {
            eta = node_permutation(key, b)[xi];
        }
        digits[static_cast<std::size_t>(k)] = eta;
        key = child_key(key, xi);
    }
    double y = unit_double(mix64(key ^ kTailSalt));
    for (int k = depth; k-- > 0;) y = (digits[static_cast<std::size_t>(k)] + y) / b;
    return y < 1.0 ? y : std::nextafter(1.0, 0.0);
}

double parse_number(std::string_view text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument("malformed integrand parameter '" + std::string(text) + "'");
    return v;
}

VarianceEstimate summarize(std::vector<double> estimates) {
    const auto R = estimates.size();
    DoubleDouble sum;
    for (double e : estimates) sum += DoubleDouble(e);
    const double mean = (sum / DoubleDouble(static_cast<double>(R))).value();
    DoubleDouble ss;
    for (double e : estimates) {
        const DoubleDouble d = DoubleDouble(e) - DoubleDouble(mean);
        ss += d * d;
    }
    const double var = (ss / DoubleDouble(static_cast<double>(R - 1))).value();
    return {mean, var, std::sqrt(var / static_cast<double>(R)), std::move(estimates)};
}

}  // namespace

ScrambledPointSet::ScrambledPointSet(std::uint32_t b, std::size_t n_points, std::size_t s)
    : b_(b), n_(n_points), s_(s), values_(n_points * s, 0.0) {}

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

std::vector<std::uint32_t> node_permutation(std::uint64_t key, std::uint32_t b) {
    std::vector<std::uint32_t> perm(b);
    for (std::uint32_t i = 0; i < b; ++i) perm[i] = i;
    std::uint64_t counter = 0;
    for (std::uint32_t i = b; i > 1; --i) std::swap(perm[i - 1], perm[bounded(key, counter, i)]);
    return perm;
}

ScrambledPointSet owen_scramble(const PointSet& points, const ScrambleSpec& spec, std::uint64_t replicate) {
    const int m = points.m();
    const int depth = spec.depth == 0 ? m : spec.depth;
    if (depth < m) throw std::invalid_argument("scramble depth must be >= m");
    const auto b = points.base();
    const auto n = points.size();
    const auto s = points.dimension();
    ScrambledPointSet out(b, n, s);
    const auto total = static_cast<long>(n * s);
#pragma omp parallel
    {
        std::vector<std::uint32_t> digits;
#pragma omp for schedule(static)
        for (long idx = 0; idx < total; ++idx) {
            const auto h = static_cast<std::size_t>(idx) / s;
            const auto j = static_cast<std::size_t>(idx) % s;
            out.at(h, j) = scramble_value(points.at(h, j), b, m, depth, root_key(spec.seed, replicate, j), digits);
        }
    }
    return out;
}

ScrambledPointSet to_real(const PointSet& points) {
    ScrambledPointSet out(points.base(), points.size(), points.dimension());
    const double denom = static_cast<double>(points.denominator());
    for (std::size_t h = 0; h < points.size(); ++h)
        for (std::size_t j = 0; j < points.dimension(); ++j) out.at(h, j) = points.at(h, j) / denom;
    return out;
}

ScrambledPointSet monte_carlo_points(std::size_t n_points, std::size_t s, std::uint64_t seed, std::uint64_t replicate) {
    ScrambledPointSet out(2, n_points, s);
    std::mt19937_64 rng(root_key(seed, replicate, 0));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t h = 0; h < n_points; ++h)
        for (std::size_t j = 0; j < s; ++j) out.at(h, j) = u(rng);
    return out;
}

Integrand make_integrand(std::string_view name, std::size_t s) {
    if (s == 0) throw std::invalid_argument("integrand dimension must be >= 1");
    if (name == "prodlin") {
        return {"prodlin", s,
                [](std::span<const double> x) {
                    double v = 1.0;
                    for (std::size_t j = 0; j < x.size(); ++j) v *= 1.0 + (x[j] - 0.5) / static_cast<double>(j + 1);
                    return v;
                },
                1.0};
    }
    if (name == "prodquad") {
        return {"prodquad", s,
                [](std::span<const double> x) {
                    double v = 1.0;
                    for (std::size_t j = 0; j < x.size(); ++j) {
                        const double d = x[j] - 0.5;
                        v *= 1.0 + (d * d - 1.0 / 12.0) / static_cast<double>(j + 1);
                    }
                    return v;
                },
                1.0};
    }
    if (name.starts_with("holder")) {
        double a = 0.5;
        double c = 0.3;
        if (name.size() > 6) {
            if (name[6] != ':') throw std::invalid_argument("unknown integrand '" + std::string(name) + "'");
            const auto args = name.substr(7);
            const auto comma = args.find(',');
            if (comma == std::string_view::npos) throw std::invalid_argument("holder needs the form holder:a,c");
            a = parse_number(args.substr(0, comma));
            c = parse_number(args.substr(comma + 1));
        }
        if (!(a > 0.0 && a <= 1.0) || !(c >= 0.0 && c <= 1.0))
            throw std::invalid_argument("holder parameters need 0 < a <= 1 and 0 <= c <= 1");
        const double mean = (std::pow(c, a + 1.0) + std::pow(1.0 - c, a + 1.0)) / (a + 1.0);
        std::string id = "holder:" + std::to_string(a) + "," + std::to_string(c);
        return {id, s,
                [a, c, mean](std::span<const double> x) {
                    double v = 1.0;
                    for (std::size_t j = 0; j < x.size(); ++j)
                        v *= 1.0 + (std::pow(std::abs(x[j] - c), a) - mean) / static_cast<double>(j + 1);
                    return v;
                },
                1.0};
    }
    if (name.starts_with("const:")) {
        const double v = parse_number(name.substr(6));
        return {"const:" + std::string(name.substr(6)), s, [v](std::span<const double>) { return v; }, v};
    }
    throw std::invalid_argument("unknown integrand '" + std::string(name) + "'");
}

std::vector<std::string> builtin_integrands() { return {"prodlin", "prodquad", "holder"}; }

double estimate(const Integrand& f, const ScrambledPointSet& pts) {
    if (pts.dimension() != f.dimension)
        throw std::invalid_argument("integrand dimension does not match the point set");
    DoubleDouble sum;
    for (std::size_t h = 0; h < pts.size(); ++h) sum += DoubleDouble(f(pts.row(h)));
    return (sum / DoubleDouble(static_cast<double>(pts.size()))).value();
}

VarianceEstimate replicate_variance(const Integrand& f, const PointSet& points, std::size_t R, const ScrambleSpec& spec) {
    if (R < 2) throw std::invalid_argument("replicate count R must be >= 2");
    std::vector<double> estimates(R);
    const auto nr = static_cast<long>(R);
#pragma omp parallel for schedule(dynamic, 1)
    for (long r = 0; r < nr; ++r)
        estimates[static_cast<std::size_t>(r)] = estimate(f, owen_scramble(points, spec, static_cast<std::uint64_t>(r)));
    return summarize(std::move(estimates));
}

VarianceEstimate replicate_variance(const Integrand& f, const GeneratingVector& gv, std::size_t R, const ScrambleSpec& spec) {
    return replicate_variance(f, generate_points(gv), R, spec);
}

VarianceEstimate monte_carlo_variance(const Integrand& f, std::size_t n_points, std::size_t R, std::uint64_t seed) {
    if (R < 2) throw std::invalid_argument("replicate count R must be >= 2");
    std::vector<double> estimates(R);
    const auto nr = static_cast<long>(R);
#pragma omp parallel for schedule(dynamic, 1)
    for (long r = 0; r < nr; ++r)
        estimates[static_cast<std::size_t>(r)] =
            estimate(f, monte_carlo_points(n_points, f.dimension, seed, static_cast<std::uint64_t>(r)));
    return summarize(std::move(estimates));
}

}  // namespace plr
