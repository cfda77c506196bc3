#include "plr/construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "plr/criterion.hpp"
#include "plr/dd.hpp"

namespace plr {

namespace {

constexpr std::size_t kSumBlock = 2048;

// Index of the first score within kTieTolerance of the minimum.
template <class Score>
std::size_t first_near_min(const std::vector<Score>& scores) {
    Score best = scores.front();
    for (const auto& v : scores)
        if (v < best) best = v;
    const double slack = kTieTolerance * std::abs(static_cast<double>(best));
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (static_cast<double>(scores[i]) <= static_cast<double>(best) + slack) return i;
    return 0;
}

// Appends the column of candidate q to the prefix point set.
PointSet with_column(const PointSet& prefix, const std::vector<std::uint32_t>& column) {
    const auto d = prefix.dimension();
    const auto n = prefix.size();
    std::vector<std::uint32_t> coords(n * (d + 1));
    for (std::size_t h = 0; h < n; ++h) {
        const auto row = prefix.row(h);
        std::copy(row.begin(), row.end(), coords.begin() + static_cast<std::ptrdiff_t>(h * (d + 1)));
        coords[h * (d + 1) + d] = column[h];
    }
    return PointSet(prefix.base(), prefix.m(), d + 1, std::move(coords));
}

std::vector<std::uint32_t> column_of(const Modulus& p, const Poly& q) {
    const auto pts = generate_points(GeneratingVector(p, {q}));
    return {pts.data().begin(), pts.data().end()};
}

DoubleDouble deterministic_sum(const std::vector<DoubleDouble>& v) {
    const auto n = v.size();
    const auto n_blocks = (n + kSumBlock - 1) / kSumBlock;
    std::vector<DoubleDouble> partial(n_blocks);
    const auto nb = static_cast<long>(n_blocks);
#pragma omp parallel for schedule(static)
    for (long blk = 0; blk < nb; ++blk) {
        const auto begin = static_cast<std::size_t>(blk) * kSumBlock;
        const auto end = std::min(n, begin + kSumBlock);
        DoubleDouble acc;
        for (std::size_t i = begin; i < end; ++i) acc += v[i];
        partial[static_cast<std::size_t>(blk)] = acc;
    }
    DoubleDouble total;
    for (const auto& x : partial) total += x;
    return total;
}

}  // namespace

CbcResult cbc_naive(const Modulus& p, std::size_t s, double alpha, const WeightSequence& gamma,
                    const DiscreteLogTable* order) {
    if (s == 0) throw std::invalid_argument("dimension s must be >= 1");
    if (order != nullptr && !(order->modulus().poly() == p.poly()))
        throw std::invalid_argument("candidate order table was built for a different modulus");
    const auto b = p.base();
    const auto n = static_cast<std::size_t>(p.size() - 1);

    std::vector<std::uint64_t> candidates(n);
    for (std::size_t i = 0; i < n; ++i) candidates[i] = order ? order->pow(i) : i + 1;

    const Poly one = Poly::constant(b, 1);
    std::vector<Poly> q{one};
    PointSet prefix = generate_points(GeneratingVector(p, q));
    std::vector<double> per_dim{criterion_B(prefix, alpha, gamma)};
    std::vector<std::uint64_t> trace{order ? 0U : 1U};

    for (std::size_t d = 2; d <= s; ++d) {
        std::vector<double> scores(n);
        const auto nn = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 4)
        for (long ii = 0; ii < nn; ++ii) {
            const auto i = static_cast<std::size_t>(ii);
            const auto pts = with_column(prefix, column_of(p, Poly::from_encoding(b, candidates[i])));
            scores[i] = criterion_B_serial(pts, alpha, gamma);
        }
        const auto pick = first_near_min(scores);
        const Poly chosen = Poly::from_encoding(b, candidates[pick]);
        prefix = with_column(prefix, column_of(p, chosen));
        q.push_back(chosen);
        per_dim.push_back(scores[pick]);
        trace.push_back(order ? pick : candidates[pick]);
    }
    return {GeneratingVector(p, std::move(q)), std::move(per_dim), std::move(trace)};
}

KorobovResult korobov_search(const Modulus& p, std::size_t s, double alpha, const WeightSequence& gamma) {
    if (s == 0) throw std::invalid_argument("dimension s must be >= 1");
    const auto b = p.base();
    const auto n = static_cast<std::size_t>(p.size() - 1);
    std::vector<double> scores(n);
    const auto nn = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 4)
    for (long ii = 0; ii < nn; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const auto gv = korobov_vector(p, Poly::from_encoding(b, i + 1), s);
        scores[i] = criterion_B_serial(generate_points(gv), alpha, gamma);
    }
    const auto pick = first_near_min(scores);
    const Poly q = Poly::from_encoding(b, pick + 1);
    return {q, korobov_vector(p, q, s), scores[pick]};
}

CirculantKernel build_a3_kernel(const DiscreteLogTable& table, double alpha) {
    const CriterionConstants c(table.modulus().base(), alpha);
    const int m = table.modulus().degree();
    std::vector<double> beta_pow(static_cast<std::size_t>(m));
    for (int t = 0; t < m; ++t) beta_pow[static_cast<std::size_t>(t)] = dd_pow(DoubleDouble(c.beta), static_cast<unsigned>(t)).value();
    CirculantKernel kernel;
    kernel.a.resize(table.order());
    for (std::size_t k = 0; k < table.order(); ++k) kernel.a[k] = beta_pow[table.degree(k)];
    return kernel;
}

CbcResult cbc_fast(const DiscreteLogTable& table, std::size_t s, double alpha, const WeightSequence& gamma,
                   const CbcFastOptions& options) {
    if (s == 0) throw std::invalid_argument("dimension s must be >= 1");
    const Modulus& p = table.modulus();
    const auto b = p.base();
    const int m = p.degree();
    const auto n = table.order();
    const DoubleDouble N(static_cast<double>(p.size()));
    const DoubleDouble n_dd(static_cast<double>(n));
    const CriterionConstants c(b, alpha);
    const auto degrees = table.degrees();

    // The factor of a nonzero point whose residue is g^k is 1 + gamma c[k] with
    // c[k] = k0 - k1 beta^-m a[k], an affine image of the A_3 kernel a. Scores
    // are computed as S(w) = sum_j mu(j) c[(w - j) mod n]; the candidate
    // minimizing S maximizes (A_3 mu)[w]. Both mu and c are split into mean
    // plus deviation so the transform only sees the deviations: the criterion
    // is a near-total cancellation and the means carry almost all the mass.
    std::vector<DoubleDouble> c_of_t(static_cast<std::size_t>(m));
    const DoubleDouble inv_beta_m = c.inv_beta_pow(m);
    for (int t = 0; t < m; ++t)
        c_of_t[static_cast<std::size_t>(t)] =
            c.k0 - c.k1 * inv_beta_m * dd_pow(DoubleDouble(c.beta), static_cast<unsigned>(t));
    std::vector<DoubleDouble> count_t(static_cast<std::size_t>(m));
    for (std::size_t k = 0; k < n; ++k) count_t[degrees[k]] += DoubleDouble(1.0);
    DoubleDouble c_sum;
    for (int t = 0; t < m; ++t) c_sum += count_t[static_cast<std::size_t>(t)] * c_of_t[static_cast<std::size_t>(t)];
    const DoubleDouble c_mean = c_sum / n_dd;

    CirculantKernel centered;
    centered.a.resize(n);
    double c_norm2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        centered.a[k] = (c_of_t[degrees[k]] - c_mean).value();
        c_norm2 += centered.a[k] * centered.a[k];
    }
    const auto plan = plan_for(n, centered, options.fft_threshold);
    const double fft_levels = std::log2(2.0 * static_cast<double>(n)) + 1.0;
    auto c_at = [&](std::size_t w, std::size_t j) -> const DoubleDouble& {
        return c_of_t[degrees[w >= j ? w - j : w + n - j]];
    };

    std::vector<DoubleDouble> mu(n, DoubleDouble(1.0));
    DoubleDouble zero_row(1.0);
    DoubleDouble mu_sum = n_dd;
    std::vector<Poly> q;
    std::vector<double> per_dim;
    std::vector<std::uint64_t> trace;
    const auto nn = static_cast<long>(n);

    for (std::size_t d = 1; d <= s; ++d) {
        const DoubleDouble g(gamma(d));
        std::size_t w = 0;

        if (d > 1) {
            const DoubleDouble mu_mean = mu_sum / n_dd;
            std::vector<double> dev(n);
            double dev_norm2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                dev[j] = (mu[j] - mu_mean).value();
                dev_norm2 += dev[j] * dev[j];
            }
            DoubleDouble dev_sum;
            for (double x : dev) dev_sum += DoubleDouble(x);
            // S(w) ~ mu_mean sum(c) + c_mean sum(dev) + (C' dev)(w).
            const auto conv = plan.apply(dev);
            const double s_min = *std::min_element(conv.begin(), conv.end());

            // Transform error bound (a generous multiple of eps log n |c'| |dev|)
            // plus the tie window, both in units of S.
            const double err = 8.0 * std::numeric_limits<double>::epsilon() * fft_levels * std::sqrt(c_norm2 * dev_norm2);
            const DoubleDouble base_crit = zero_row + mu_sum - N + g * zero_row * c.k0 + g * (mu_mean * c_sum + c_mean * dev_sum);
            const double crit_est = std::abs((base_crit + g * DoubleDouble(s_min)).value());
            const double window = 2.0 * err + 4.0 * kTieTolerance * crit_est / gamma(d);
            std::vector<std::size_t> shortlist;
            for (std::size_t i = 0; i < n; ++i)
                if (conv[i] <= s_min + window) shortlist.push_back(i);

            // Exact double-double scores for the shortlist.
            std::vector<DoubleDouble> crit(shortlist.size());
            const auto ns = static_cast<long>(shortlist.size());
#pragma omp parallel for schedule(dynamic, 1)
            for (long ii = 0; ii < ns; ++ii) {
                const auto cand = shortlist[static_cast<std::size_t>(ii)];
                DoubleDouble exact;
                for (std::size_t j = 0; j < n; ++j) exact += c_at(cand, j) * mu[j];
                crit[static_cast<std::size_t>(ii)] = zero_row + mu_sum - N + g * (zero_row * c.k0 + exact);
            }
            std::size_t best = 0;
            for (std::size_t i = 1; i < crit.size(); ++i)
                if (crit[i] < crit[best]) best = i;
            const DoubleDouble slack(kTieTolerance * std::abs(crit[best].value()));
            for (std::size_t i = 0; i < crit.size(); ++i)
                if (!(crit[best] + slack < crit[i])) {
                    best = i;
                    break;
                }
            w = shortlist[best];
        }

#pragma omp parallel for schedule(static)
        for (long jj = 0; jj < nn; ++jj) {
            const auto j = static_cast<std::size_t>(jj);
            mu[j] *= DoubleDouble(1.0) + g * c_at(w, j);
        }
        zero_row *= DoubleDouble(1.0) + g * c.k0;
        mu_sum = deterministic_sum(mu);
        per_dim.push_back(((zero_row + mu_sum - N) / N).value());
        q.push_back(Poly::from_encoding(b, table.pow(w)));
        trace.push_back(w);

        if (options.verify) {
            const double direct = criterion_B(generate_points(GeneratingVector(p, q)), alpha, gamma);
            if (std::abs(direct - per_dim.back()) > 1e-10 * std::abs(direct))
                throw std::logic_error("fast CBC state disagrees with direct evaluation at d = " + std::to_string(d));
        }
    }
    return {GeneratingVector(p, std::move(q)), std::move(per_dim), std::move(trace)};
}

CbcResult cbc_fast(const Modulus& p, std::size_t s, double alpha, const WeightSequence& gamma, std::optional<Poly> g,
                   const CbcFastOptions& options) {
    const Poly gen = g.value_or(Poly::monomial(p.base(), 1));
    if (!is_primitive(p.poly(), gen))
        throw std::invalid_argument("fast CBC needs a primitive element; " + gen.to_string() + " is not primitive modulo " +
                                    p.poly().to_string());
    return cbc_fast(build_log_table(p, gen), s, alpha, gamma, options);
}

}  // namespace plr
