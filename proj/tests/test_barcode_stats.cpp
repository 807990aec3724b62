#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tda/barcode_stats.hpp"
#include "tda/bottleneck.hpp"
#include "tda/filtration.hpp"
#include "tda/inference.hpp"
#include "tda/metric_space.hpp"
#include "tda/persistence.hpp"
#include "tda/rng.hpp"

using namespace tda;

namespace {

BarcodeDistribution make_dist(
    std::vector<std::pair<Barcode, std::size_t>> atoms) {
    BarcodeDistribution dist;
    std::sort(atoms.begin(), atoms.end());
    dist.atoms = std::move(atoms);
    for (const auto& [b, c] : dist.atoms) dist.total += c;
    return dist;
}

FiniteMetricSpace random_space(std::size_t n, Rng& rng, double scale = 2.0) {
    std::vector<std::vector<double>> pts;
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back({rng.uniform(0, scale), rng.uniform(0, scale)});
    return from_points(pts);
}

} // namespace

TEST_CASE("single point space: no 1-cycles, one component bar") {
    const auto space = from_points({{0.0}});
    const auto d1 = phi_estimate(space, 3, 1, 7, 2.0, ComplexKind::Rips, Rng(1));
    REQUIRE(d1.atoms.size() == 1);
    CHECK(d1.atoms[0].first.empty());
    CHECK(d1.atoms[0].second == 7);
    CHECK(d1.total == 7);

    const auto d0 = phi_estimate(space, 3, 0, 7, 2.0, ComplexKind::Rips, Rng(1));
    REQUIRE(d0.atoms.size() == 1);
    CHECK(d0.atoms[0].first == Barcode({{0, 2}}));
}

TEST_CASE("full-space subsamples of the discrete circle are deterministic") {
    const auto space = metric_circle(20, 1.0, true);
    PhiOptions opts;
    opts.with_replacement = false;
    const auto dist = phi_estimate(space, 20, 1, 5, 12.0, ComplexKind::Rips,
                                   Rng(2), opts);
    REQUIRE(dist.atoms.size() == 1);
    CHECK(dist.atoms[0].second == 5);
    bool found = false;
    for (const auto& iv : dist.atoms[0].first.intervals)
        if (iv.length() >= 6.0) found = true;
    CHECK(found);
}

TEST_CASE("phi is bit-reproducible across runs and thread counts") {
    Rng rng(3);
    const auto space = random_space(18, rng);
    PhiOptions one, four;
    four.threads = 4;
    const auto a =
        phi_estimate(space, 5, 1, 60, 1.0, ComplexKind::Rips, Rng(17), one);
    const auto b =
        phi_estimate(space, 5, 1, 60, 1.0, ComplexKind::Rips, Rng(17), four);
    CHECK(a.atoms == b.atoms);
    const auto c =
        phi_estimate(space, 5, 1, 60, 1.0, ComplexKind::Rips, Rng(17), one);
    CHECK(a.atoms == c.atoms);
    const auto w1 =
        phi_estimate(space, 6, 1, 40, 1.0, ComplexKind::Witness, Rng(19), one);
    const auto w2 =
        phi_estimate(space, 6, 1, 40, 1.0, ComplexKind::Witness, Rng(19), four);
    CHECK(w1.atoms == w2.atoms);
}

TEST_CASE("phi argument validation") {
    Rng rng(4);
    const auto space = random_space(5, rng);
    CHECK_THROWS(phi_estimate(space, 0, 0, 5, 1.0, ComplexKind::Rips, Rng(1)));
    CHECK_THROWS(phi_estimate(space, 2, -1, 5, 1.0, ComplexKind::Rips, Rng(1)));
    CHECK_THROWS(phi_estimate(space, 2, 0, 0, 1.0, ComplexKind::Rips, Rng(1)));
    PhiOptions opts;
    opts.with_replacement = false;
    CHECK_THROWS(
        phi_estimate(space, 6, 0, 5, 1.0, ComplexKind::Rips, Rng(1), opts));
}

TEST_CASE("two-stage with K=1 gives a single atom, reproducibly") {
    Rng rng(5);
    const auto space = random_space(20, rng);
    const auto a = phi_estimate_two_stage(space, 10, 4, 0, 1, 1.5,
                                          ComplexKind::Rips, Rng(23));
    CHECK(a.atoms.size() == 1);
    CHECK(a.total == 1);
    const auto b = phi_estimate_two_stage(space, 10, 4, 0, 1, 1.5,
                                          ComplexKind::Rips, Rng(23));
    CHECK(a.atoms == b.atoms);
    CHECK_THROWS(phi_estimate_two_stage(space, 3, 4, 0, 1, 1.5,
                                        ComplexKind::Rips, Rng(23)));
}

TEST_CASE("two-stage over the whole space matches the one-stage estimate") {
    Rng rng(6);
    const auto space = random_space(30, rng);
    PhiOptions opts;
    opts.with_replacement = false;
    const auto direct = phi_estimate(space, 4, 0, 400, 1.2, ComplexKind::Rips,
                                     Rng(29), opts);
    const auto staged = phi_estimate_two_stage(space, 30, 4, 0, 400, 1.2,
                                               ComplexKind::Rips, Rng(31), opts);
    const Barcode ref({{0, 0.6}});
    const auto report = ks_two_sample(distance_distribution_db(direct, ref),
                                      distance_distribution_db(staged, ref));
    CHECK_FALSE(report.reject_99);
}

TEST_CASE("pairwise distance sampling from a two-atom mixture") {
    const Barcode b1, b2({{0, 2}});
    const auto dist = make_dist({{b1, 5}, {b2, 5}});
    Rng rng(37);
    const auto d2 = distance_distribution_d2(dist, 1000, rng);
    REQUIRE(d2.size() == 1000);
    std::size_t at_d = 0;
    for (double v : d2.samples) {
        REQUIRE((v == 0.0 || v == 1.0));
        if (v == 1.0) ++at_d;
    }
    CHECK(static_cast<double>(at_d) / 1000 == doctest::Approx(0.5).epsilon(0.1));

    const auto point_mass = make_dist({{b2, 4}});
    const auto zeros = distance_distribution_d2(point_mass, 50, rng);
    for (double v : zeros.samples) CHECK(v == 0.0);
}

TEST_CASE("exact reference-distance pushforward") {
    const Barcode b2({{0, 2}});
    const auto dist = make_dist({{Barcode{}, 3}, {b2, 7}});
    const auto db = distance_distribution_db(dist, {});
    REQUIRE(db.size() == 10);
    for (int i = 0; i < 3; ++i) CHECK(db.samples[i] == 0.0);
    for (int i = 3; i < 10; ++i) CHECK(db.samples[i] == 1.0);

    const auto self = distance_distribution_db(make_dist({{b2, 5}}), b2);
    for (double v : self.samples) CHECK(v == 0.0);
}

TEST_CASE("reference truncation shifts distances by at most its cost") {
    Rng rng(41);
    const Barcode ref({{0, 3}, {1, 4}, {0.5, 0.9}});
    const auto trunc = truncate(ref, 2.0);
    const double shift = bottleneck_distance(ref, trunc);
    const auto space = random_space(15, rng);
    const auto dist =
        phi_estimate(space, 5, 0, 100, 1.5, ComplexKind::Rips, Rng(43));
    const auto full = distance_distribution_db(dist, ref);
    const auto cut = distance_distribution_db(dist, trunc);
    // sorted samples of 1-Lipschitz images stay within the shift
    for (std::size_t i = 0; i < full.size(); ++i)
        CHECK(std::abs(full.samples[i] - cut.samples[i]) <= shift + 1e-12);
}

TEST_CASE("prohorov between barcode distributions") {
    const Barcode a({{0, 1}}), b({{0, 1.4}});
    const auto da = make_dist({{a, 3}});
    const auto db = make_dist({{b, 5}});
    CHECK(prohorov_barcode(da, da) == 0.0);
    CHECK(prohorov_barcode(da, db) == doctest::Approx(0.4));
    CHECK(prohorov_barcode(da, db) <= 1.0);
}

TEST_CASE("hd basics and the contaminated point mass") {
    const Barcode b1({{0, 1}}), b2({{0, 12}});
    const auto dist = make_dist({{b1, 7}, {b2, 3}});
    const auto ref = make_dist({{b1, 1}});
    CHECK(hd(dist, dist) == 0.0);
    CHECK(hd(dist, ref) == doctest::Approx(0.3));
    CHECK(hd(dist, ref) == hd(ref, dist));
}

TEST_CASE("hd satisfies the triangle inequality on random triples") {
    Rng rng(47);
    const auto make_random = [&](std::uint64_t seed) {
        Rng local(seed);
        std::vector<std::pair<Barcode, std::size_t>> atoms;
        const std::size_t count = 1 + local.uniform_index(4);
        for (std::size_t i = 0; i < count; ++i) {
            const double a = local.uniform(0, 1);
            atoms.push_back(
                {Barcode({{a, a + local.uniform(0.1, 2)}}), 1 + local.uniform_index(5)});
        }
        return make_dist(std::move(atoms));
    };
    for (int trial = 0; trial < 60; ++trial) {
        const auto x = make_random(rng.next_u64());
        const auto y = make_random(rng.next_u64());
        const auto z = make_random(rng.next_u64());
        CHECK(hd(x, y) <= hd(x, z) + hd(z, y) + 1e-9);
    }
}

TEST_CASE("median homological distance") {
    const Barcode ref;
    const auto three = make_dist(
        {{Barcode({{0, 2}}), 1}, {Barcode({{0, 4}}), 1}, {Barcode({{0, 6}}), 1}});
    CHECK(mhd(three, ref) == 2.0);

    const Barcode b({{0, 1}});
    CHECK(mhd(make_dist({{b, 9}}), b) == 0.0);

    const auto contaminated =
        make_dist({{Barcode({{0, 0.2}}), 6}, {Barcode({{0, 10}}), 4}});
    CHECK(mhd(contaminated, ref) == doctest::Approx(0.1));
}

TEST_CASE("pairwise-median variant") {
    const auto dist = make_dist({{Barcode{}, 1}, {Barcode({{0, 2}}), 1}});
    // pairwise distances {0, 0, 1, 1}: lower middle is 0
    CHECK(mhd(dist, {}, true) == 0.0);
    const auto skewed = make_dist({{Barcode{}, 1}, {Barcode({{0, 2}}), 3}});
    // counts: 0 with mass 10/16, 1 with mass 6/16
    CHECK(mhd(skewed, {}, true) == 0.0);
    const auto heavy = make_dist({{Barcode{}, 3}, {Barcode({{0, 2}}), 1}});
    CHECK(mhd(heavy, {}, true) == 0.0);
}

TEST_CASE("trimmed mean of reference distances") {
    const Barcode c({{0, 3}});
    const auto constant = make_dist({{c, 10}});
    CHECK(trimmed_mhd(constant, {}, 0.3) == doctest::Approx(1.5));

    // distances {0, 1, 1, 1, 100}
    const auto dist = make_dist({{Barcode{}, 1},
                                 {Barcode({{0, 2}}), 3},
                                 {Barcode({{0, 200}}), 1}});
    CHECK(trimmed_mhd(dist, {}, 0.2) == doctest::Approx(1.0));
    CHECK(trimmed_mhd(dist, {}, 1e-9) ==
          doctest::Approx((0.0 + 1 + 1 + 1 + 100) / 5.0));
    CHECK_THROWS(trimmed_mhd(dist, {}, 0.0));
    CHECK_THROWS(trimmed_mhd(dist, {}, 0.5));
}

TEST_CASE("gap summaries") {
    const auto dist = make_dist({{Barcode({{0, 3}, {0, 1}}), 4}});
    CHECK(gap_median(dist, 1) == 2.0);
    CHECK(gap_median(dist, 2) == 1.0);
    const auto empty = make_dist({{Barcode{}, 4}});
    for (std::size_t m = 1; m <= 5; ++m) CHECK(gap_median(empty, m) == 0.0);
    const auto [m_star, value] = gap_max(dist, 3);
    CHECK(m_star == 1);
    CHECK(value == 2.0);
}

TEST_CASE("distribution JSON round-trips") {
    Rng rng(53);
    const auto space = random_space(12, rng);
    auto dist = phi_estimate(space, 4, 1, 50, 1.0, ComplexKind::Rips, Rng(59));
    dist.meta.seed = 59;
    const auto back = distribution_from_json(to_json(dist));
    CHECK(back.atoms == dist.atoms);
    CHECK(back.total == dist.total);
    CHECK(back.meta.n == dist.meta.n);
    CHECK(back.meta.k == dist.meta.k);
    CHECK(back.meta.K == dist.meta.K);
    CHECK(back.meta.cutoff == dist.meta.cutoff);
    CHECK(back.meta.kind == dist.meta.kind);
    CHECK(back.meta.seed == 59);
}

TEST_CASE("enlarging the space slightly keeps mhd in the subsample range") {
    // |X| = 12, |X'| = 15, n = 3: (12/15)^3 > 1/2, so the median distance
    // over X' subsamples stays within the full range over X subsamples.
    Rng rng(61);
    const auto base = random_space(12, rng);
    std::vector<std::vector<double>> pts = *base.coords;
    for (int i = 0; i < 3; ++i)
        pts.push_back({rng.uniform(0, 2), rng.uniform(0, 2)});
    const auto enlarged = from_points(pts);

    const Barcode ref({{0, 1}});
    const double cutoff = 2.0;
    double lo = 1e300, hi = -1e300;
    for (std::size_t a = 0; a < 12; ++a)
        for (std::size_t b = a; b < 12; ++b)
            for (std::size_t c = b; c < 12; ++c) {
                const auto sub = subspace(base, {a, b, c});
                const auto bc =
                    compute_barcode(vietoris_rips(sub, 1, cutoff), 0);
                const double d = bottleneck_distance(ref, bc);
                lo = std::min(lo, d);
                hi = std::max(hi, d);
            }
    const auto dist = phi_estimate(enlarged, 3, 0, 2000, cutoff,
                                   ComplexKind::Rips, Rng(67));
    const double med = mhd(dist, ref);
    CHECK(med >= lo - 1e-12);
    CHECK(med <= hi + 1e-12);
}
