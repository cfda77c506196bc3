// Acceptance suite: prints one PASS/FAIL line per criterion, details indented
// below it. Exits with 1 if any criterion fails.

#include <sys/resource.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "plr/circfft.hpp"
#include "plr/construct.hpp"
#include "plr/criterion.hpp"
#include "plr/reference_tables.hpp"
#include "plr/scramble.hpp"

using namespace plr;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

long max_rss_kib() {
    rusage u{};
    getrusage(RUSAGE_SELF, &u);
    return u.ru_maxrss;
}

std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

int failures = 0;

void report(int id, bool ok, const std::string& title, double secs, const std::string& summary) {
    std::printf("%s criterion %d: %s (%s) [%.2f s]\n", ok ? "PASS" : "FAIL", id, title.c_str(), summary.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures;
}

void detail(const std::string& line) { std::printf("    %s\n", line.c_str()); }

const std::vector<std::string> kPresets = {"const:1", "geom:0.875", "poly:2"};

// ---------------------------------------------------------------------------

void criterion1() {
    const auto t0 = Clock::now();
    bool exact_ok = true;
    bool print_ok = true;
    double worst = 0.0;
    int flagged = 0;
    for (int m = kReferenceMinM; m <= kReferenceMaxM; ++m) {
        const Modulus p = find_modulus(2, m, true);
        const auto table = build_log_table(p, Poly::monomial(2, 1));
        for (double alpha : {0.5, 1.0})
            for (int t = 1; t <= 3; ++t) {
                const auto gamma = reference_weights(t);
                const double B = cbc_fast(table, 1, alpha, gamma).per_dim_B[0];
                const double closed = gamma(1) / ((std::pow(2.0, 2 * alpha) - 1) * std::pow(2.0, (2 * alpha + 1) * m));
                worst = std::max(worst, rel_diff(B, closed));
                if (rel_diff(B, closed) > 1e-13) exact_ok = false;
                const auto ref = reference_cell(t, alpha, 1, m);
                const bool shown = fmt3(B) == ref.top_text;
                const bool anomaly = is_known_print_anomaly(t, alpha, 1, m);
                if (!shown && !anomaly) {
                    print_ok = false;
                    detail("unexpected mismatch: table " + std::to_string(t) + " alpha=" + fmt3(alpha) +
                           " m=" + std::to_string(m) + " ours " + fmt3(B) + " printed " + ref.top_text);
                }
                if (anomaly) {
                    ++flagged;
                    detail(std::string("flagged print anomaly: table ") + std::to_string(t) + " alpha=1 s=1 m=" +
                           std::to_string(m) + " printed " + ref.top_text + ", closed form " + fmt3(closed) +
                           (shown ? " (agrees after all)" : ""));
                }
            }
    }
    const double secs = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "max rel. error vs closed form %.2e, %d cells flagged as print anomalies", worst,
                  flagged);
    report(1, exact_ok && print_ok && secs < 1.0, "one-dimensional exactness, tables 1-3, m=4..16", secs, buf);
}

// ---------------------------------------------------------------------------

struct Construction {
    std::uint32_t b;
    int m;
    std::size_t s;
    double alpha;
    std::string weights;
    CbcResult result;
};

std::vector<Construction> grid_constructions;

void criterion2() {
    const auto t0 = Clock::now();
    int runs = 0;
    int mismatches = 0;
    double worst = 0.0;
    for (std::uint32_t b : {2U, 3U})
        for (int m = 2; m <= 5; ++m) {
            const Modulus p = find_modulus(b, m, true);
            const auto table = build_log_table(p, Poly::monomial(b, 1));
            for (const auto& w : kPresets) {
                const auto gamma = WeightSequence::parse(w);
                for (double alpha : {0.5, 1.0})
                    for (std::size_t s = 1; s <= 5; ++s) {
                        auto fast = cbc_fast(table, s, alpha, gamma);
                        const auto naive = cbc_naive(p, s, alpha, gamma, &table);
                        ++runs;
                        bool same = fast.gv.q().size() == naive.gv.q().size() &&
                                    std::equal(fast.gv.q().begin(), fast.gv.q().end(), naive.gv.q().begin());
                        for (std::size_t d = 0; d < s; ++d) {
                            const double r = rel_diff(fast.per_dim_B[d], naive.per_dim_B[d]);
                            worst = std::max(worst, r);
                            if (r > 1e-12) same = false;
                        }
                        if (!same) {
                            ++mismatches;
                            detail("mismatch at b=" + std::to_string(b) + " m=" + std::to_string(m) + " s=" +
                                   std::to_string(s) + " " + w + " alpha=" + fmt3(alpha));
                        }
                        grid_constructions.push_back({b, m, s, alpha, w, std::move(fast)});
                    }
            }
        }
    const double secs = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d configurations, %d mismatches, max rel. B difference %.2e", runs, mismatches,
                  worst);
    report(2, mismatches == 0 && secs < 120.0, "fast vs naive CBC equivalence", secs, buf);
}

// ---------------------------------------------------------------------------

void criterion3() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240607);
    int violations = 0;
    double max_gap_ratio = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::uint32_t b = trial % 2 == 0 ? 2U : 3U;
        const int m = 1 + static_cast<int>(rng() % 3);
        const std::size_t s = 1 + rng() % 2;
        const double alpha = rng() % 2 == 0 ? 0.5 : 1.0;
        const auto gamma = WeightSequence::parse(kPresets[rng() % kPresets.size()]);
        const Modulus p = find_modulus(b, m, false);
        std::vector<Poly> q;
        for (std::size_t j = 0; j < s; ++j) q.push_back(Poly::from_encoding(b, 1 + rng() % (p.size() - 1)));
        const GeneratingVector gv(p, q);
        const double B = criterion_B(generate_points(gv), alpha, gamma);
        const auto dual = dual_sum_oracle(gv, alpha, gamma, 2 * m);
        const double gap = B - dual.value;
        const double slack = 1e-14 * std::abs(B);
        if (gap < -slack || gap > dual.tail_bound + slack) {
            ++violations;
            char buf[200];
            std::snprintf(buf, sizeof buf, "violation: b=%u m=%d s=%zu B=%.6e dual=%.6e tail=%.3e", b, m, s, B,
                          dual.value, dual.tail_bound);
            detail(buf);
        }
        if (dual.tail_bound > 0) max_gap_ratio = std::max(max_gap_ratio, gap / dual.tail_bound);
    }
    const double secs = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "20 random vectors, %d violations, largest gap/tail_bound %.3f", violations,
                  max_gap_ratio);
    report(3, violations == 0 && secs < 60.0, "closed form vs truncated dual sum", secs, buf);
}

// ---------------------------------------------------------------------------

void criterion4() {
    const auto t0 = Clock::now();
    int checked = 0;
    int violations = 0;
    int korobov_checked = 0;
    int korobov_skipped = 0;
    std::map<std::string, bool> korobov_done;
    for (const auto& c : grid_constructions) {
        const auto gamma = WeightSequence::parse(c.weights);
        const CriterionParams params{c.alpha, c.b, c.m};
        const auto grid = lambda_grid(cbc_lambda_lower(c.alpha), 20);
        for (std::size_t d = 1; d <= c.s; ++d) {
            double bound = INFINITY;
            for (double l : grid) bound = std::min(bound, cbc_bound(params, gamma, d, l));
            ++checked;
            if (c.result.per_dim_B[d - 1] > bound) {
                ++violations;
                detail("CBC violation at b=" + std::to_string(c.b) + " m=" + std::to_string(c.m) + " d=" +
                       std::to_string(d));
            }
        }
        const std::string key = std::to_string(c.b) + "/" + std::to_string(c.m) + "/" + std::to_string(c.s) + "/" +
                                c.weights + "/" + fmt3(c.alpha);
        if (korobov_done[key]) continue;
        korobov_done[key] = true;
        const double lo = korobov_lambda_lower(c.alpha);
        if (lo >= 1.0) {
            ++korobov_skipped;
            continue;
        }
        const auto kor = korobov_search(find_modulus(c.b, c.m, true), c.s, c.alpha, gamma);
        double bound = INFINITY;
        for (double l : lambda_grid(lo, 20)) bound = std::min(bound, korobov_bound(params, gamma, c.s, l));
        ++korobov_checked;
        if (kor.B > bound) {
            ++violations;
            detail("Korobov violation at b=" + std::to_string(c.b) + " m=" + std::to_string(c.m) + " s=" +
                   std::to_string(c.s));
        }
    }
    const double secs = seconds_since(t0);
    detail("Korobov bound admits no lambda at alpha=0.5; " + std::to_string(korobov_skipped) +
           " Korobov configurations skipped");
    char buf[200];
    std::snprintf(buf, sizeof buf, "%d CBC prefixes and %d Korobov rules checked, %d violations", checked,
                  korobov_checked, violations);
    report(4, violations == 0 && checked > 0, "bound domination (CBC and Korobov)", secs, buf);
}

// ---------------------------------------------------------------------------

void criterion5() {
    const auto t0 = Clock::now();
    const auto gamma = WeightSequence::constant(1.0);
    int within2 = 0;
    int within25 = 0;
    std::string values;
    for (int m = 4; m <= 10; ++m) {
        const Modulus p = find_modulus(2, m, true);
        const double B = cbc_fast(build_log_table(p, Poly::monomial(2, 1)), 5, 0.5, gamma).per_dim_B[4];
        const double ref = reference_cell(1, 0.5, 5, m).top;
        const double ratio = B / ref;
        within2 += ratio <= 2.0 && ratio >= 0.5;
        within25 += std::abs(ratio - 1.0) <= 0.25;
        values += (values.empty() ? "" : " ") + fmt3(B) + "/" + reference_cell(1, 0.5, 5, m).top_text;
    }
    const double secs = seconds_since(t0);
    detail("ours/printed for m=4..10: " + values);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d/7 within factor 2, %d/7 within 25%%", within2, within25);
    report(5, within2 == 7 && within25 >= 5 && secs < 10.0, "table 1 s=5 proximity, alpha=0.5", secs, buf);
}

// ---------------------------------------------------------------------------

void criterion6() {
    const auto t0 = Clock::now();
    const auto gamma = WeightSequence::polynomial(2.0);
    bool ok = true;
    double m16_secs = 0.0;
    long rss_delta = 0;
    for (int m = 16; m >= 10; --m) {
        const Modulus p = find_modulus(2, m, true);
        const auto table = build_log_table(p, Poly::monomial(2, 1));
        const long rss_before = max_rss_kib();
        for (double alpha : {0.5, 1.0}) {
            const auto t1 = Clock::now();
            const double B = cbc_fast(table, 100, alpha, gamma).per_dim_B[99];
            const double secs = seconds_since(t1);
            const auto ref = reference_cell(3, alpha, 100, m);
            const double ratio = B / ref.top;
            const bool cell_ok = ratio <= 2.0 && ratio >= 0.5;
            ok = ok && cell_ok;
            if (m == 16) m16_secs = std::max(m16_secs, secs);
            char buf[160];
            std::snprintf(buf, sizeof buf, "m=%d alpha=%.1f: B=%s printed %s ratio %.3f (%.2f s)%s", m, alpha,
                          fmt3(B).c_str(), ref.top_text.c_str(), ratio, secs, cell_ok ? "" : "  <-- outside factor 2");
            detail(buf);
        }
        if (m == 16) rss_delta = max_rss_kib() - rss_before;
    }
    const double secs = seconds_since(t0);
    char buf[200];
    std::snprintf(buf, sizeof buf, "m=16 s=100 run %.2f s, peak RSS growth beyond the log table %.1f MB", m16_secs,
                  rss_delta / 1024.0);
    report(6, ok && m16_secs < 60.0 && rss_delta <= 100 * 1024, "fast CBC at m=16, s=100, table 3 weights", secs, buf);
}

// ---------------------------------------------------------------------------

// Upper tail of the chi-square distribution with 3 degrees of freedom.
double chi2_sf3(double x) {
    return std::erfc(std::sqrt(x / 2)) + std::sqrt(2 * x / std::numbers::pi) * std::exp(-x / 2);
}

double chi2_critical3(double significance) {
    double lo = 0.0;
    double hi = 200.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = (lo + hi) / 2;
        (chi2_sf3(mid) > significance ? lo : hi) = mid;
    }
    return hi;
}

// Sorted box counts for every digit split (l_1..l_s) with sum l_j <= m.
std::vector<std::vector<int>> interval_counts(const std::function<std::uint64_t(std::size_t, std::size_t, int)>& box,
                                              std::size_t n, std::size_t s, int m) {
    std::vector<std::vector<int>> all;
    std::vector<int> l(s, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
        if (j == s) {
            std::map<std::vector<std::uint64_t>, int> counts;
            std::vector<std::uint64_t> key(s);
            for (std::size_t h = 0; h < n; ++h) {
                for (std::size_t k = 0; k < s; ++k) key[k] = box(h, k, l[k]);
                ++counts[key];
            }
            std::vector<int> c;
            for (const auto& [k, v] : counts) c.push_back(v);
            std::sort(c.begin(), c.end());
            all.push_back(std::move(c));
            return;
        }
        for (int v = 0; v <= left; ++v) {
            l[j] = v;
            rec(j + 1, left - v);
        }
    };
    rec(0, m);
    return all;
}

void criterion7() {
    const auto t0 = Clock::now();
    const int m = 8;
    const std::size_t s = 5;
    const Modulus p = find_modulus(2, m, true);
    const auto rule = cbc_fast(build_log_table(p, Poly::monomial(2, 1)), s, 1.0, WeightSequence::polynomial(2.0));
    const PointSet pts = generate_points(rule.gv);
    bool ok = true;

    for (const auto& name : builtin_integrands()) {
        const auto f = make_integrand(name, s);
        const auto v = replicate_variance(f, pts, 1000, ScrambleSpec{0, 777});
        const double z = std::abs(v.mean - f.exact) / v.standard_error;
        ok = ok && z <= 3.0;
        char buf[160];
        std::snprintf(buf, sizeof buf, "unbiasedness %s: mean %.10f, stderr %.2e, |z| = %.2f", f.id.c_str(), v.mean,
                      v.standard_error, z);
        detail(buf);
    }

    const auto reference = interval_counts(
        [&](std::size_t h, std::size_t j, int l) { return std::uint64_t{pts.at(h, j)} >> (m - l); }, pts.size(), s, m);
    int net_failures = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto y = owen_scramble(pts, ScrambleSpec{0, seed});
        const auto counts = interval_counts(
            [&](std::size_t h, std::size_t j, int l) {
                return static_cast<std::uint64_t>(std::ldexp(y.at(h, j), l));
            },
            pts.size(), s, m);
        net_failures += counts != reference;
    }
    ok = ok && net_failures == 0;
    detail("net preservation: " + std::to_string(reference.size()) + " digit splits, " +
           std::to_string(net_failures) + " of 100 seeds changed a box count");

    const std::size_t R = 10000;
    const std::size_t cells = pts.size() * s;
    std::vector<std::array<int, 4>> hist(cells, std::array<int, 4>{});
    for (std::size_t r = 0; r < R; ++r) {
        const auto y = owen_scramble(pts, ScrambleSpec{0, 4242}, r);
        for (std::size_t i = 0; i < cells; ++i) ++hist[i][static_cast<std::size_t>(y.data()[i] * 4.0)];
    }
    const double corrected = 0.001 / static_cast<double>(cells);
    const double crit = chi2_critical3(corrected);
    const double crit_raw = chi2_critical3(0.001);
    int rejected = 0;
    int rejected_raw = 0;
    double worst = 0.0;
    for (const auto& h : hist) {
        double x2 = 0.0;
        for (int c : h) x2 += (c - R / 4.0) * (c - R / 4.0) / (R / 4.0);
        worst = std::max(worst, x2);
        rejected += x2 > crit;
        rejected_raw += x2 > crit_raw;
    }
    ok = ok && rejected == 0;
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "chi-square: %zu coordinate tests, max statistic %.2f, critical %.2f at 0.001/%zu (%d rejections); "
                  "uncorrected 0.001 level: %d rejections, %.1f expected",
                  cells, worst, crit, cells, rejected, rejected_raw, 0.001 * static_cast<double>(cells));
    detail(buf);
    const double secs = seconds_since(t0);
    report(7, ok && secs < 120.0, "scrambling statistics on a CBC rule (b=2, m=8, s=5)", secs,
           "unbiasedness, net preservation and uniformity");
}

// ---------------------------------------------------------------------------

void criterion8() {
    const auto t0 = Clock::now();
    const std::size_t s = 3;
    const auto f = make_integrand("prodlin", s);
    std::vector<double> xs;
    std::vector<double> ys;
    std::string values;
    for (int m = 4; m <= 10; ++m) {
        const Modulus p = find_modulus(2, m, true);
        const auto rule = cbc_fast(build_log_table(p, Poly::monomial(2, 1)), s, 1.0, WeightSequence::polynomial(2.0));
        const auto v = replicate_variance(f, rule.gv, 200, ScrambleSpec{0, 12345});
        xs.push_back(m);
        ys.push_back(std::log2(v.variance));
        values += (values.empty() ? "" : " ") + fmt3(v.variance);
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double secs = seconds_since(t0);
    detail("sample variances m=4..10 (prodlin, s=3, R=200): " + values);
    char buf[120];
    std::snprintf(buf, sizeof buf, "slope of log2 variance vs m = %.3f (threshold -2.5, target -3)", slope);
    report(8, slope <= -2.5 && secs < 300.0, "empirical variance rate, alpha=1", secs, buf);
}

// ---------------------------------------------------------------------------

void criterion9() {
    const auto t0 = Clock::now();
    int checks = 0;
    int failures9 = 0;
    for (const auto& c : grid_constructions) {
        const auto gamma = WeightSequence::parse(c.weights);
        const auto pts = generate_points(c.result.gv);
        for (double ap : {0.75, 1.0}) {
            ++checks;
            if (!jensen_transform_check(pts, 0.5, ap, gamma)) {
                ++failures9;
                detail("failed: b=" + std::to_string(c.b) + " m=" + std::to_string(c.m) + " s=" + std::to_string(c.s) +
                       " " + c.weights);
            }
        }
    }
    const double secs = seconds_since(t0);
    report(9, failures9 == 0 && checks > 0, "Jensen self-adjustment, alpha=0.5 to 0.75 and 1", secs,
           std::to_string(checks) + " checks, " + std::to_string(failures9) + " failures");
}

// ---------------------------------------------------------------------------

double max_rel(const std::vector<double>& got, const std::vector<double>& want) {
    double scale = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        scale = std::max(scale, std::abs(want[i]));
        err = std::max(err, std::abs(got[i] - want[i]));
    }
    return err / std::max(scale, 1e-300);
}

void criterion10() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto random_vec = [&](std::size_t n) {
        std::vector<double> v(n);
        for (auto& x : v) x = u(rng);
        return v;
    };
    double worst_agree = 0.0;
    double worst_linear = 0.0;
    double worst_algebra = 0.0;
    double worst_identity = 0.0;
    for (std::size_t n : {3, 7, 15, 31, 63, 242}) {
        CirculantKernel k{random_vec(n)};
        const ConvolutionPlan fft(k, ConvolutionPlan::Strategy::transform);
        for (int t = 0; t < 100; ++t) {
            const auto v = random_vec(n);
            worst_agree = std::max(worst_agree, max_rel(fft.apply(v), circulant_matvec_direct(k.a, v)));
        }
        // Linearity.
        const auto a = random_vec(n);
        const auto b = random_vec(n);
        std::vector<double> combo(n);
        for (std::size_t i = 0; i < n; ++i) combo[i] = 0.7 * a[i] - 1.3 * b[i];
        const auto fa = fft.apply(a);
        const auto fb = fft.apply(b);
        std::vector<double> lin(n);
        for (std::size_t i = 0; i < n; ++i) lin[i] = 0.7 * fa[i] - 1.3 * fb[i];
        worst_linear = std::max(worst_linear, max_rel(fft.apply(combo), lin));
        // Composition: C(k2) C(k1) v = C(k2 * k1) v.
        CirculantKernel k2{random_vec(n)};
        const ConvolutionPlan fft2(k2, ConvolutionPlan::Strategy::transform);
        CirculantKernel k12{circulant_matvec_direct(k2.a, k.a)};
        const ConvolutionPlan fft12(k12, ConvolutionPlan::Strategy::transform);
        worst_algebra = std::max(worst_algebra, max_rel(fft2.apply(fft.apply(a)), fft12.apply(a)));
        // Identity and all-ones kernels.
        CirculantKernel id{std::vector<double>(n, 0.0)};
        id.a[0] = 1.0;
        worst_identity = std::max(worst_identity, max_rel(ConvolutionPlan(id, ConvolutionPlan::Strategy::transform).apply(a), a));
        CirculantKernel ones{std::vector<double>(n, 1.0)};
        double sum = 0.0;
        for (double x : a) sum += x;
        worst_identity = std::max(
            worst_identity,
            max_rel(ConvolutionPlan(ones, ConvolutionPlan::Strategy::transform).apply(a), std::vector<double>(n, sum)));
    }
    const double secs = seconds_since(t0);
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "transform vs direct %.1e (tol 1e-10), linearity %.1e (tol 1e-12), composition %.1e, "
                  "identity/ones %.1e",
                  worst_agree, worst_linear, worst_algebra, worst_identity);
    const bool ok = worst_agree <= 1e-10 && worst_linear <= 1e-12 && worst_algebra <= 1e-10 && worst_identity <= 1e-12;
    report(10, ok, "circulant engine, n in {3,7,15,31,63,242}", secs, buf);
}

}  // namespace

int main() {
    // Criterion 6 first so the peak-RSS measurement is not inflated by others.
    criterion6();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
