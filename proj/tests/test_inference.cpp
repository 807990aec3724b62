#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tda/barcode_stats.hpp"
#include "tda/inference.hpp"
#include "tda/rng.hpp"

using namespace tda;
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

namespace {

RealDistribution normals(std::size_t n, Rng& rng, double shift = 0.0) {
    std::vector<double> xs;
    for (std::size_t i = 0; i < n; ++i) xs.push_back(rng.normal() + shift);
    return RealDistribution(std::move(xs));
}

// exact P[X <= q] for X ~ Binomial(N, num/den) in rational arithmetic
double binomial_tail_exact(unsigned N, unsigned q, unsigned num, unsigned den) {
    cpp_rational eps(num, den), one_minus(den - num, den), sum = 0;
    cpp_int coeff = 1;
    cpp_rational p_pow = 1, q_pow = 1;
    for (unsigned i = 0; i < N; ++i) q_pow *= one_minus;
    for (unsigned i = 0; i <= q; ++i) {
        sum += cpp_rational(coeff) * p_pow * q_pow;
        coeff = coeff * (N - i) / (i + 1);
        p_pow *= eps;
        if (one_minus != 0) q_pow /= one_minus;
    }
    return static_cast<double>(sum);
}

} // namespace

TEST_CASE("numeric helpers hit known table values") {
    CHECK(normal_upper_quantile(0.025) ==
          doctest::Approx(1.959964).epsilon(1e-6));
    CHECK(normal_upper_quantile(0.05) ==
          doctest::Approx(1.644854).epsilon(1e-6));
    CHECK(normal_upper_quantile(0.5) == doctest::Approx(0.0).scale(1).epsilon(1e-9));
    CHECK(kolmogorov_sf(1.358) == doctest::Approx(0.05).epsilon(0.02));
    CHECK(chi2_upper_tail(3.841, 1.0) == doctest::Approx(0.05).epsilon(1e-3));
    CHECK(chi2_upper_tail(14.067, 7.0) == doctest::Approx(0.05).epsilon(1e-3));
    CHECK(chi2_upper_tail(0.0, 3.0) == 1.0);
}

TEST_CASE("KS on identical samples") {
    const RealDistribution s({1, 2, 3, 4});
    const auto report = ks_two_sample(s, s);
    CHECK(report.statistic == 0.0);
    CHECK_FALSE(report.reject_90);
    CHECK_FALSE(report.reject_95);
    CHECK_FALSE(report.reject_99);
}

TEST_CASE("KS on disjoint supports") {
    const RealDistribution s1({1, 2, 3, 4});
    const RealDistribution s2({11, 12, 13, 14});
    const auto report = ks_two_sample(s1, s2);
    CHECK(report.statistic == 1.0);
    Rng rng(71);
    const auto big1 = normals(500, rng);
    const auto big2 = normals(500, rng, 100.0);
    const auto big = ks_two_sample(big1, big2);
    CHECK(big.statistic == 1.0);
    CHECK(*big.p_value < 1e-10);
    CHECK(big.reject_99);
}

TEST_CASE("KS statistic is invariant under monotone transforms") {
    Rng rng(73);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s1 = normals(40, rng);
        const auto s2 = normals(60, rng, 0.3);
        const double base = ks_two_sample(s1, s2).statistic;
        const auto transform = [](const RealDistribution& s) {
            std::vector<double> out;
            for (double v : s.samples) out.push_back(std::exp(v) + v * 3);
            return RealDistribution(out);
        };
        CHECK(ks_two_sample(transform(s1), transform(s2)).statistic == base);
    }
    CHECK_THROWS(ks_two_sample(RealDistribution{}, normals(5, rng)));
}

TEST_CASE("chi-squared histogram on identical and disjoint samples") {
    const RealDistribution s1({0.1, 0.2, 0.3, 0.9, 0.8});
    CHECK(chi2_histogram(s1, s1, 5).statistic == 0.0);

    std::vector<double> left(10, 0.25), right(10, 0.75);
    const auto report = chi2_histogram(RealDistribution(left),
                                       RealDistribution(right), 2,
                                       std::pair{0.0, 1.0});
    CHECK(report.statistic == doctest::Approx(20.0));
    CHECK(report.params.at("dof") == 1.0);
    CHECK(report.reject_99);

    std::vector<double> even{0.1, 0.1, 0.1, 0.1, 0.1, 0.9, 0.9, 0.9, 0.9, 0.9};
    CHECK(chi2_histogram(RealDistribution(even), RealDistribution(even), 2,
                         std::pair{0.0, 1.0})
              .statistic == 0.0);

    const RealDistribution constant(std::vector<double>(5, 1.0));
    CHECK_THROWS(chi2_histogram(constant, constant, 5));
    CHECK_THROWS(chi2_histogram(s1, s1, 1));
}

TEST_CASE("chi-squared is symmetric in its samples") {
    Rng rng(79);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s1 = normals(50, rng);
        const auto s2 = normals(80, rng, 0.5);
        CHECK(chi2_histogram(s1, s2, 10).statistic ==
              chi2_histogram(s2, s1, 10).statistic);
    }
}

TEST_CASE("chi-squared against reference barcodes") {
    const Barcode empty, long_bar({{0, 2}});
    const std::vector<Barcode> refs{empty, long_bar};
    BarcodeDistribution d1, d2;
    d1.atoms = {{Barcode({{0, 1.9}}), 10}};
    d1.total = 10;
    d2.atoms = {{empty, 10}};
    d2.total = 10;
    const auto report = chi2_reference_barcodes(d1, d2, refs);
    CHECK(report.statistic == doctest::Approx(20.0));
    BarcodeDistribution mixed;
    mixed.atoms = {{empty, 4}, {Barcode({{0, 1.9}}), 6}};
    mixed.total = 10;
    CHECK(chi2_reference_barcodes(mixed, mixed, refs).statistic == 0.0);
    // every occurrence in one shared bin leaves no degrees of freedom
    CHECK_THROWS(chi2_reference_barcodes(d1, d1, refs));
    CHECK_THROWS(chi2_reference_barcodes(d1, d2, {empty}));
    CHECK_THROWS(chi2_reference_barcodes(d1, d2, {}));
}

TEST_CASE("binomial tail basics") {
    CHECK(binomial_tail(17, 17, 0.3) == 1.0);
    CHECK(binomial_tail(1, 0, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(binomial_tail(1000, 31, 0.05) < 0.0022);
    CHECK(binomial_tail(10, 3, 0.0) == 1.0);
    CHECK(binomial_tail(10, 3, 1.0) == 0.0);
    CHECK_THROWS(binomial_tail(5, 6, 0.5));
    CHECK_THROWS(binomial_tail(5, 2, 1.5));
}

TEST_CASE("binomial tail is nondecreasing in q") {
    for (unsigned N : {10u, 40u, 1000u}) {
        double prev = -1.0;
        for (unsigned q = 0; q <= N; q += (N > 100 ? 37 : 1)) {
            const double v = binomial_tail(N, q, 0.07);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("binomial tail matches the exact rational oracle") {
    const std::vector<std::pair<unsigned, unsigned>> fractions{
        {1, 2}, {1, 20}, {3, 10}, {19, 20}};
    for (unsigned N : {1u, 2u, 7u, 23u, 50u}) {
        for (const auto& [num, den] : fractions) {
            for (unsigned q = 0; q <= N; ++q) {
                const double exact = binomial_tail_exact(N, q, num, den);
                const double got =
                    binomial_tail(N, q, static_cast<double>(num) / den);
                CHECK(std::abs(got - exact) < 1e-12);
            }
        }
    }
}

TEST_CASE("mass hypothesis test") {
    const Barcode bar({{0, 1}});
    BarcodeDistribution dist;
    dist.atoms = {{bar, 31}, {Barcode{}, 969}};
    dist.total = 1000;
    const auto in_S = [&](const Barcode& b) { return !b.empty(); };
    const auto report = mass_hypothesis_test(dist, in_S, 0.05, 0.003);
    CHECK(report.params.at("reject") == 1.0);
    CHECK(*report.p_value < 0.0022);

    const auto all_in = mass_hypothesis_test(
        dist, [](const Barcode&) { return true; }, 0.05, 0.003);
    CHECK(all_in.params.at("reject") == 0.0);

    // q at the expected count leaves the tail near one half
    BarcodeDistribution half;
    half.atoms = {{bar, 50}, {Barcode{}, 950}};
    half.total = 1000;
    const auto at_mean = mass_hypothesis_test(half, in_S, 0.05, 0.05);
    CHECK(*at_mean.p_value > 0.4);
    CHECK(at_mean.params.at("reject") == 0.0);
}

TEST_CASE("likelihood scores") {
    const Barcode b({{0, 1}});
    BarcodeDistribution dist;
    dist.atoms = {{b, 6}, {Barcode({{0, 3}}), 4}};
    dist.total = 10;
    CHECK(likelihood_score(b, dist, 100.0) == 1.0);
    CHECK(likelihood_score(b, dist, 1e-9) == doctest::Approx(0.6));
    CHECK(likelihood_score(Barcode({{10, 11}}), dist, 1e-6) == 0.0);
    BarcodeDistribution point;
    point.atoms = {{b, 5}};
    point.total = 5;
    CHECK(likelihood_score(b, point, 1e-12) == 1.0);
    CHECK_THROWS(likelihood_score(b, dist, 0.0));
}

TEST_CASE("median confidence interval indices at m=100") {
    std::vector<double> xs;
    for (int i = 1; i <= 100; ++i) xs.push_back(i);
    const auto ci = median_confidence_interval(RealDistribution(xs), 0.05);
    CHECK(ci.params.at("index_low") == 40.0);
    CHECK(ci.params.at("index_high") == 61.0);
    CHECK(ci.low == 40.0);
    CHECK(ci.high == 61.0);
    CHECK(ci.level == 0.95);
    CHECK_THROWS(median_confidence_interval(
        RealDistribution({1, 2, 3, 4, 5}), 0.05));
}

TEST_CASE("median CI on constant samples and median containment") {
    const auto flat =
        median_confidence_interval(RealDistribution(std::vector<double>(30, 2.5)), 0.05);
    CHECK(flat.low == 2.5);
    CHECK(flat.high == 2.5);
    Rng rng(83);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = normals(10 + rng.uniform_index(200), rng);
        const auto ci = median_confidence_interval(s, 0.05);
        const double med = median_lower(s);
        CHECK(ci.low <= med);
        CHECK(ci.high >= med);
    }
}

TEST_CASE("median CI coverage is calibrated") {
    Rng rng(89);
    int covered = 0;
    const int trials = 2000;
    for (int t = 0; t < trials; ++t) {
        const auto s = normals(200, rng);
        const auto ci = median_confidence_interval(s, 0.05);
        if (ci.low <= 0.0 && 0.0 <= ci.high) ++covered;
    }
    const double rate = static_cast<double>(covered) / trials;
    CHECK(rate > 0.93);
    CHECK(rate < 0.97);
}

TEST_CASE("Monte Carlo p-values") {
    Rng rng(97);
    const auto sampler = [](Rng& r) { return r.uniform(); };
    CHECK(monte_carlo_pvalue(-5.0, sampler, 999, Tail::Upper, Rng(1)) == 1.0);
    CHECK(monte_carlo_pvalue(5.0, sampler, 999, Tail::Upper, Rng(1)) ==
          doctest::Approx(1.0 / 1000));
    CHECK(monte_carlo_pvalue(5.0, sampler, 999, Tail::Lower, Rng(1)) == 1.0);
    const double two =
        monte_carlo_pvalue(0.999, sampler, 999, Tail::TwoSided, Rng(1));
    CHECK(two < 0.05);
    CHECK_THROWS(monte_carlo_pvalue(0.0, sampler, 50, Tail::Upper, Rng(1)));
}

TEST_CASE("report serialization carries the fields") {
    const RealDistribution s1({1, 2, 3, 4}), s2({11, 12, 13, 14});
    const auto json = to_json(ks_two_sample(s1, s2));
    CHECK(json.find("\"method\":\"ks_two_sample\"") != std::string::npos);
    CHECK(json.find("\"statistic\":1.0") != std::string::npos);
    std::vector<double> xs;
    for (int i = 1; i <= 100; ++i) xs.push_back(i);
    const auto cij =
        to_json(median_confidence_interval(RealDistribution(xs), 0.05));
    CHECK(cij.find("\"low\":40.0") != std::string::npos);
    CHECK(cij.find("\"level\":0.95") != std::string::npos);
}
