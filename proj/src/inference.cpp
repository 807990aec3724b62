#include "tda/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "tda/bottleneck.hpp"

namespace tda {

namespace {

void set_decisions(TestReport& report) {
    if (!report.p_value) return;
    report.reject_90 = *report.p_value < 0.10;
    report.reject_95 = *report.p_value < 0.05;
    report.reject_99 = *report.p_value < 0.01;
}

// Regularized lower incomplete gamma P(a, x) by series or continued
// fraction, upper tail Q = 1 - P.
double gamma_p_series(double a, double x) {
    double sum = 1.0 / a, term = sum;
    for (int n = 1; n < 500; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double chi2_upper_tail(double x, double dof) {
    if (x <= 0.0) return 1.0;
    const double a = dof / 2.0, half = x / 2.0;
    if (half < a + 1.0) return 1.0 - gamma_p_series(a, half);
    return gamma_q_contfrac(a, half);
}

double kolmogorov_sf(double lambda) {
    if (lambda < 1e-8) return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += (j % 2 == 1 ? term : -term);
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double normal_upper_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("quantile probability must be in (0,1)");
    // Acklam's rational approximation for the lower quantile of 1 - p,
    // refined by one Halley step against erfc.
    const double q = 1.0 - p;
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double x;
    if (q < plow) {
        const double r = std::sqrt(-2.0 * std::log(q));
        x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
            ((((dd[0] * r + dd[1]) * r + dd[2]) * r + dd[3]) * r + 1.0);
    } else if (q <= phigh) {
        const double r = q - 0.5, s = r * r;
        x = (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * r /
            (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
    } else {
        const double r = std::sqrt(-2.0 * std::log(1.0 - q));
        x = -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
            ((((dd[0] * r + dd[1]) * r + dd[2]) * r + dd[3]) * r + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - q;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    x -= u / (1.0 + x * u / 2.0);
    return x;
}

TestReport ks_two_sample(const RealDistribution& s1, const RealDistribution& s2) {
    if (s1.samples.empty() || s2.samples.empty())
        throw std::invalid_argument("empty sample");
    const auto& x = s1.samples;
    const auto& y = s2.samples;
    const double n1 = static_cast<double>(x.size());
    const double n2 = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double stat = 0.0;
    while (i < x.size() && j < y.size()) {
        const double t = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= t) ++i;
        while (j < y.size() && y[j] <= t) ++j;
        stat = std::max(stat, std::abs(i / n1 - j / n2));
    }

    const double ne = n1 * n2 / (n1 + n2);
    const double lambda =
        (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * stat;
    TestReport report;
    report.method = "ks_two_sample";
    report.statistic = stat;
    report.p_value = kolmogorov_sf(lambda);
    report.params = {{"n1", n1}, {"n2", n2}, {"effective_n", ne}};
    set_decisions(report);
    return report;
}

namespace {

TestReport chi2_from_counts(const std::vector<double>& a1,
                            const std::vector<double>& a2,
                            const std::string& method) {
    double stat = 0.0;
    std::size_t nonzero = 0;
    for (std::size_t j = 0; j < a1.size(); ++j) {
        const double total = a1[j] + a2[j];
        if (total <= 0.0) continue;
        ++nonzero;
        const double diff = a1[j] - a2[j];
        stat += diff * diff / total;
    }
    if (nonzero < 2)
        throw std::invalid_argument("chi-squared needs at least 2 nonzero bins");
    TestReport report;
    report.method = method;
    report.statistic = stat;
    const double dof = static_cast<double>(nonzero - 1);
    report.p_value = chi2_upper_tail(stat, dof);
    report.params = {{"dof", dof}, {"bins_nonzero", static_cast<double>(nonzero)}};
    set_decisions(report);
    return report;
}

} // namespace

TestReport chi2_histogram(const RealDistribution& s1, const RealDistribution& s2,
                          std::size_t bins,
                          std::optional<std::pair<double, double>> range) {
    if (s1.samples.empty() || s2.samples.empty())
        throw std::invalid_argument("empty sample");
    if (bins < 2) throw std::invalid_argument("need at least 2 bins");
    double lo = std::min(s1.samples.front(), s2.samples.front());
    double hi = std::max(s1.samples.back(), s2.samples.back());
    if (range) {
        lo = std::min(lo, range->first);
        hi = std::max(hi, range->second);
    }
    if (hi <= lo) hi = lo + 1.0;
    const double width = (hi - lo) / static_cast<double>(bins);
    const auto bin_of = [&](double v) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        return std::min(b, bins - 1);
    };
    std::vector<double> a1(bins, 0.0), a2(bins, 0.0);
    for (double v : s1.samples) a1[bin_of(v)] += 1.0;
    for (double v : s2.samples) a2[bin_of(v)] += 1.0;
    auto report = chi2_from_counts(a1, a2, "chi2_histogram");
    report.params["bins"] = static_cast<double>(bins);
    report.params["range_lo"] = lo;
    report.params["range_hi"] = hi;
    return report;
}

namespace {

std::vector<double> reference_counts(const BarcodeDistribution& dist,
                                     const std::vector<Barcode>& refs) {
    std::vector<double> counts(refs.size(), 0.0);
    for (const auto& [barcode, count] : dist.atoms) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < refs.size(); ++j) {
            const double d = bottleneck_distance(barcode, refs[j]);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        counts[best] += static_cast<double>(count);
    }
    return counts;
}

} // namespace

TestReport chi2_reference_barcodes(const BarcodeDistribution& dist1,
                                   const BarcodeDistribution& dist2,
                                   const std::vector<Barcode>& refs) {
    if (refs.empty()) throw std::invalid_argument("no reference barcodes");
    const auto a1 = reference_counts(dist1, refs);
    const auto a2 = reference_counts(dist2, refs);
    return chi2_from_counts(a1, a2, "chi2_reference_barcodes");
}

double binomial_tail(std::size_t N, std::size_t q, double eps) {
    if (q > N) throw std::invalid_argument("q must be <= N");
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::invalid_argument("eps must be in [0,1]");
    if (eps == 0.0) return 1.0;
    if (eps == 1.0) return q == N ? 1.0 : 0.0;
    const double le = std::log(eps), l1e = std::log1p(-eps);
    const double lgn = std::lgamma(static_cast<double>(N) + 1.0);
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i <= q; ++i) {
        const double di = static_cast<double>(i);
        const double lt = lgn - std::lgamma(di + 1.0) -
                          std::lgamma(static_cast<double>(N - i) + 1.0) +
                          di * le + static_cast<double>(N - i) * l1e;
        const double term = std::exp(lt) - comp;
        const double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    return std::min(sum, 1.0);
}

TestReport mass_hypothesis_test(const BarcodeDistribution& dist,
                                const std::function<bool(const Barcode&)>& in_S,
                                double eps, double alpha) {
    if (dist.atoms.empty()) throw std::invalid_argument("empty distribution");
    if (!(eps > 0.0 && eps < 1.0) || !(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("eps and alpha must be in (0,1)");
    std::size_t q = 0;
    for (const auto& [barcode, count] : dist.atoms)
        if (in_S(barcode)) q += count;
    TestReport report;
    report.method = "mass_hypothesis";
    report.statistic = static_cast<double>(q);
    report.p_value = binomial_tail(dist.total, q, eps);
    report.params = {{"N", static_cast<double>(dist.total)},
                     {"q", static_cast<double>(q)},
                     {"eps", eps},
                     {"alpha", alpha},
                     {"reject", *report.p_value < alpha ? 1.0 : 0.0}};
    set_decisions(report);
    return report;
}

double likelihood_score(const Barcode& B, const BarcodeDistribution& dist,
                        double eps) {
    if (eps <= 0.0) throw std::invalid_argument("eps must be > 0");
    double mass = 0.0;
    for (const auto& [barcode, count] : dist.atoms)
        if (bottleneck_distance(B, barcode) < eps)
            mass += static_cast<double>(count);
    return dist.total == 0 ? 0.0 : mass / static_cast<double>(dist.total);
}

ConfidenceInterval median_confidence_interval(const RealDistribution& samples,
                                              double alpha) {
    const std::size_t m = samples.size();
    if (m < 10)
        throw std::invalid_argument("median CI needs at least 10 samples");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must be in (0,1)");
    const double u = normal_upper_quantile(alpha / 2.0);
    const double mid = (static_cast<double>(m) + 1.0) / 2.0;
    const double half = 0.5 * std::sqrt(static_cast<double>(m)) * u;
    auto lo = static_cast<long>(std::floor(mid - half));
    auto hi = static_cast<long>(std::ceil(mid + half));
    lo = std::clamp<long>(lo, 1, static_cast<long>(m));
    hi = std::clamp<long>(hi, 1, static_cast<long>(m));
    ConfidenceInterval ci;
    ci.low = samples.samples[lo - 1];
    ci.high = samples.samples[hi - 1];
    ci.level = 1.0 - alpha;
    ci.method = "median_order_statistic";
    ci.params = {{"m", static_cast<double>(m)},
                 {"index_low", static_cast<double>(lo)},
                 {"index_high", static_cast<double>(hi)},
                 {"u", u}};
    return ci;
}

double monte_carlo_pvalue(double observed,
                          const std::function<double(Rng&)>& null_sampler,
                          std::size_t trials, Tail tail, const Rng& rng) {
    if (trials < 100) throw std::invalid_argument("need at least 100 trials");
    std::size_t ge = 0, le = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng child = rng.split(t);
        const double v = null_sampler(child);
        if (v >= observed) ++ge;
        if (v <= observed) ++le;
    }
    const double denom = static_cast<double>(trials) + 1.0;
    const double upper = (1.0 + static_cast<double>(ge)) / denom;
    const double lower = (1.0 + static_cast<double>(le)) / denom;
    switch (tail) {
        case Tail::Upper: return upper;
        case Tail::Lower: return lower;
        case Tail::TwoSided: return std::min(1.0, 2.0 * std::min(upper, lower));
    }
    return upper;
}

std::string to_json(const TestReport& report) {
    nlohmann::json j;
    j["method"] = report.method;
    j["statistic"] = report.statistic;
    if (report.p_value) j["p_value"] = *report.p_value;
    j["reject"] = {{"0.90", report.reject_90},
                   {"0.95", report.reject_95},
                   {"0.99", report.reject_99}};
    j["params"] = report.params;
    return j.dump();
}

std::string to_json(const ConfidenceInterval& ci) {
    nlohmann::json j;
    j["method"] = ci.method;
    j["low"] = ci.low;
    j["high"] = ci.high;
    j["level"] = ci.level;
    j["params"] = ci.params;
    return j.dump();
}

} // namespace tda
