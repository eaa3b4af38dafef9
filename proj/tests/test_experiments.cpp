#include "qimsim/experiments.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

using namespace qim::experiments;
using qim::codec::EncodingParams;
using qim::codec::NormalizedImage;
using qim::codec::PhaseImage;
using qim::similarity::SimilarityReport;

namespace {

// Smooth synthetic scene with full dynamic range.
NormalizedImage synthetic_reference(int n) {
    NormalizedImage img{n, n, {}};
    img.values.resize(static_cast<std::size_t>(n) * n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            const double fx = static_cast<double>(x) / (n - 1);
            const double fy = static_cast<double>(y) / (n - 1);
            const double v = 0.5 + 0.25 * std::sin(6.0 * fx) * std::cos(4.0 * fy) +
                             0.25 * (fx - fy);
            img.values[static_cast<std::size_t>(y) * n + x] = std::clamp(v, 0.0, 1.0);
        }
    // stretch to exactly [0, 1]
    const auto [lo, hi] = std::minmax_element(img.values.begin(), img.values.end());
    const double l = *lo, h = *hi;
    for (double& v : img.values) v = (v - l) / (h - l);
    return img;
}

// Spearman rank correlation of two orderings of 0..n-1.
double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    auto ranks = [n](const std::vector<double>& v) {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&v](int l, int r) { return v[static_cast<std::size_t>(l)] <
                                                     v[static_cast<std::size_t>(r)]; });
        std::vector<double> rank(n);
        for (std::size_t pos = 0; pos < n; ++pos)
            rank[static_cast<std::size_t>(order[pos])] = static_cast<double>(pos);
        return rank;
    };
    const std::vector<double> ra = ranks(a), rb = ranks(b);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
    const double dn = static_cast<double>(n);
    return 1.0 - 6.0 * d2 / (dn * (dn * dn - 1.0));
}

} // namespace

TEST_CASE("vanishing noise leaves a spanning image unchanged") {
    const NormalizedImage ref = synthetic_reference(16);
    const NoisyImage out = add_gaussian_noise_layer(ref, 0.0, 1e-12, 7);
    REQUIRE_FALSE(out.degenerate);
    for (std::size_t i = 0; i < ref.values.size(); ++i)
        CHECK(std::abs(out.image.values[i] - ref.values[i]) < 1e-9);
}

TEST_CASE("noise layers are deterministic per seed") {
    const NormalizedImage ref = synthetic_reference(12);
    const NoisyImage a = add_gaussian_noise_layer(ref, 0.0, 0.3, 99);
    const NoisyImage b = add_gaussian_noise_layer(ref, 0.0, 0.3, 99);
    const NoisyImage c = add_gaussian_noise_layer(ref, 0.0, 0.3, 100);
    CHECK(a.image.values == b.image.values);
    CHECK(a.image.values != c.image.values);
}

TEST_CASE("degenerate renormalization maps to zero and is flagged") {
    NormalizedImage single{1, 1, {0.5}};
    const NoisyImage out = add_gaussian_noise_layer(single, 0.0, 0.1, 1);
    CHECK(out.degenerate);
    CHECK(out.image.values[0] == 0.0);
}

TEST_CASE("one noise layer hurts less than two, over a seed majority") {
    const NormalizedImage ref = synthetic_reference(64);
    const PhaseImage ref_phase = qim::codec::to_phase_image(ref);
    int ok = 0;
    const int seeds = 100;
    for (int seed = 1; seed <= seeds; ++seed) {
        NoiseSpec spec{0.0, 0.2, 2, static_cast<std::uint64_t>(seed)};
        const std::vector<NormalizedImage> chain = layered_noise_chain(ref, spec);
        const double c1 =
            qim::similarity::cosine_similarity(ref_phase, qim::codec::to_phase_image(chain[0]));
        const double c2 =
            qim::similarity::cosine_similarity(ref_phase, qim::codec::to_phase_image(chain[1]));
        if (c1 < 1.0 && c1 > c2) ++ok;
    }
    CHECK(ok >= 90);
}

TEST_CASE("layered database sizes and phase conversion") {
    const NormalizedImage ref = synthetic_reference(16);
    NoiseSpec ten{0.0, 0.1, 10, 5};
    const ImageDatabase db = build_layered_database(ref, ten);
    CHECK(db.entries.size() == 10);
    CHECK(db.entries[0].width == 16);

    NoiseSpec one{0.0, 0.1, 1, 5};
    CHECK(build_layered_database(ref, one).entries.size() == 1);
}

TEST_CASE("iqa table anchors at (1, 0) and anti-correlates the two metrics") {
    const NormalizedImage ref = synthetic_reference(64);
    NoiseSpec spec{0.0, 0.1, 10, 7};
    EncodingParams encoding;
    encoding.bits = 8;
    encoding.per_mode_amplitude = qim::codec::optimal_amplitude(8, 0.1);

    const std::vector<SimilarityReport> rows = iqa_table(ref, spec, encoding);
    REQUIRE(rows.size() == 11);
    CHECK(rows[0].reference_label == "R");
    CHECK(rows[0].candidate_label == "R");
    CHECK(rows[0].cosine == 1.0);
    CHECK(rows[0].mse == 0.0);
    CHECK(rows[1].candidate_label == "A");
    CHECK(rows[10].candidate_label == "J");

    std::vector<double> cosines, errors;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        cosines.push_back(rows[i].cosine);
        errors.push_back(rows[i].mse);
    }
    CHECK(spearman(cosines, errors) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("layered-noise database ranks in layer order") {
    const NormalizedImage ref = synthetic_reference(64);
    NoiseSpec spec{0.0, 0.1, 10, 21};
    const ImageDatabase db = build_layered_database(ref, spec);
    EncodingParams encoding;
    encoding.bits = 8;
    encoding.per_mode_amplitude = qim::codec::optimal_amplitude(8, 0.1);

    const auto ranking = qim::similarity::rank_database(
        db, qim::codec::to_phase_image(ref), encoding, qim::similarity::Exhaustive{});
    REQUIRE(ranking.reports.size() == 10);
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(ranking.reports[i].candidate_label == std::to_string(i + 1));
}

TEST_CASE("sweep endpoints, determinism, and early-vs-late drop") {
    const NormalizedImage ref = synthetic_reference(32);
    SweepSpec spec{0.01, 1.0, 12, 10};
    const std::vector<SweepPoint> points = sensitivity_sweep(ref, spec, 11);
    REQUIRE(points.size() == 12);
    CHECK(points.front().sigma == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(points.back().sigma == doctest::Approx(1.0).epsilon(1e-15));

    // The curve starts near 1 and the low-noise end is the steepest.
    CHECK(points.front().mean_cosine > points.back().mean_cosine);
    const double early_drop = points[0].mean_cosine - points[2].mean_cosine;
    const double late_drop = points[9].mean_cosine - points[11].mean_cosine;
    CHECK(early_drop > late_drop);

    const std::vector<SweepPoint> again = sensitivity_sweep(ref, spec, 11);
    for (std::size_t i = 0; i < points.size(); ++i)
        CHECK(points[i].mean_cosine == again[i].mean_cosine);

    SweepSpec single{0.3, 0.3, 1, 3};
    const std::vector<SweepPoint> one = sensitivity_sweep(ref, single, 11);
    REQUIRE(one.size() == 1);
    CHECK(one[0].sigma == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("perturbation ranking holds for a coarse delta") {
    const NormalizedImage ref = synthetic_reference(32);
    PerturbationSpec spec{0.2, 0.01, 10};
    const PerturbationResult result = perturbation_ranking(ref, spec, 3);
    REQUIRE(result.rows.size() == 11);
    CHECK(result.rank_matches_sigma_order);
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        CHECK(result.rows[i].rank == static_cast<int>(i) + 1);
        CHECK(result.rows[i].sigma == doctest::Approx(0.2 + 0.01 * i).epsilon(1e-12));
    }
}

TEST_CASE("perturbation ranking resolves a 1e-10 sigma step") {
    const NormalizedImage ref = synthetic_reference(64);
    PerturbationSpec spec{0.2, 1e-10, 10};
    const PerturbationResult result = perturbation_ranking(ref, spec, 3);
    CHECK(result.rank_matches_sigma_order);
}

TEST_CASE("smallest strict delta sits at or below 1e-8") {
    const NormalizedImage ref = synthetic_reference(32);
    const double smallest = smallest_strict_delta(ref, 0.2, 10, 3, 1e-13, 1e-8);
    CHECK(smallest > 0.0);
    CHECK(smallest <= 1e-8);
}

TEST_CASE("noise spec validation") {
    CHECK_THROWS_AS(validate(NoiseSpec{0.0, 0.0, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(validate(NoiseSpec{0.0, 0.1, 0, 1}), std::invalid_argument);
    const NormalizedImage ref = synthetic_reference(8);
    CHECK_THROWS_AS(add_gaussian_noise_layer(ref, 0.0, -0.1, 1), std::invalid_argument);
}
