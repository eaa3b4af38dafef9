#include "qimsim/similarity.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace qim::similarity;
using qim::codec::EncodingParams;
using qim::codec::Expectation;
using qim::codec::NormalizedImage;
using qim::codec::PhaseImage;
using qim::codec::Sampled;
using qim::optics::cplx;

namespace {
constexpr double kPi = std::numbers::pi;

PhaseImage random_phases(int w, int h, std::mt19937_64& eng) {
    PhaseImage img{w, h, {}};
    img.thetas.resize(static_cast<std::size_t>(w) * h);
    for (double& t : img.thetas) t = static_cast<double>(eng() % 10000) / 9999.0 * kPi / 2;
    return img;
}

EncodingParams params_with_amplitude(double a) {
    EncodingParams p;
    p.bits = 2;
    p.per_mode_amplitude = a;
    return p;
}
} // namespace

TEST_CASE("cosine_similarity identities and direct-sum oracle") {
    std::mt19937_64 eng(19);
    const PhaseImage a = random_phases(4, 2, eng);
    CHECK(cosine_similarity(a, a) == 1.0);

    PhaseImage zeros{4, 2, std::vector<double>(8, 0.0)};
    PhaseImage ones{4, 2, std::vector<double>(8, kPi / 2)};
    CHECK(cosine_similarity(zeros, ones) == doctest::Approx(0.0).epsilon(1e-15));

    for (int rep = 0; rep < 50; ++rep) {
        const PhaseImage x = random_phases(8, 1, eng);
        const PhaseImage y = random_phases(8, 1, eng);
        double oracle = 0.0;
        for (std::size_t k = 0; k < 8; ++k) oracle += std::cos(x.thetas[k] - y.thetas[k]);
        oracle /= 8.0;
        CHECK(cosine_similarity(x, y) == doctest::Approx(oracle).epsilon(1e-14));
        CHECK(cosine_similarity(x, y) == doctest::Approx(cosine_similarity(y, x)).epsilon(1e-15));
        CHECK(cosine_similarity(x, y) >= 0.0);
        CHECK(cosine_similarity(x, y) <= 1.0);
    }

    PhaseImage other{2, 2, std::vector<double>(4, 0.0)};
    CHECK_THROWS_AS(cosine_similarity(zeros, other), std::invalid_argument);
}

TEST_CASE("measured similarity equals the direct metric in expectation mode") {
    std::mt19937_64 eng(31);
    const EncodingParams params = params_with_amplitude(std::sqrt(17.2));
    for (int rep = 0; rep < 200; ++rep) {
        const PhaseImage a = random_phases(8, 8, eng);
        const PhaseImage b = random_phases(8, 8, eng);
        const SimilarityReport report = cosine_similarity_measured(a, b, params, Expectation{});
        CHECK(std::abs(report.cosine - cosine_similarity(a, b)) < 1e-12);
        // Metric identity against the summed dark-port intensity.
        const double T = 64.0;
        const double a2 = params.per_mode_amplitude * params.per_mode_amplitude;
        CHECK(std::abs(report.cosine - (1.0 - report.measured_total_n / (T * a2))) < 1e-9);
    }
}

TEST_CASE("measured similarity on identical images sees dark ports only") {
    std::mt19937_64 eng(37);
    const PhaseImage a = random_phases(5, 5, eng);
    const SimilarityReport report =
        cosine_similarity_measured(a, a, params_with_amplitude(2.0), Expectation{});
    CHECK(report.cosine == 1.0);
    CHECK(report.measured_total_n == 0.0);
    CHECK(report.mse == 0.0);
}

TEST_CASE("single-pixel measured similarity reproduces the reference value") {
    PhaseImage ref{1, 1, {kPi / 3}};
    PhaseImage aux{1, 1, {0.0}};
    const SimilarityReport report =
        cosine_similarity_measured(ref, aux, params_with_amplitude(std::sqrt(17.2)), Expectation{});
    CHECK(std::abs(report.measured_total_n - 8.6) < 1.1e-3);
    CHECK(report.cosine == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sampled similarity stays within the propagated shot-noise band") {
    std::mt19937_64 eng(43);
    const EncodingParams params = params_with_amplitude(std::sqrt(17.2));
    const int shots = 1000;
    for (int rep = 0; rep < 10; ++rep) {
        const PhaseImage a = random_phases(8, 8, eng);
        const PhaseImage b = random_phases(8, 8, eng);
        const double exact = cosine_similarity(a, b);
        const SimilarityReport expected_report =
            cosine_similarity_measured(a, b, params, Expectation{});
        const SimilarityReport sampled_report = cosine_similarity_measured(
            a, b, params, Sampled{static_cast<std::uint64_t>(1000 + rep), shots});
        const double T = 64.0;
        const double a2 = params.per_mode_amplitude * params.per_mode_amplitude;
        const double band =
            4.0 * std::sqrt(expected_report.measured_total_n / shots) / (T * a2);
        CHECK(std::abs(sampled_report.cosine - exact) <= band);
        CHECK(sampled_report.runs_used == shots);
    }
}

TEST_CASE("mse identities and direct-sum oracle") {
    NormalizedImage a{2, 2, {0.0, 0.25, 0.5, 1.0}};
    CHECK(mse(a, a) == 0.0);

    NormalizedImage zeros{2, 2, std::vector<double>(4, 0.0)};
    NormalizedImage ones{2, 2, std::vector<double>(4, 1.0)};
    CHECK(mse(zeros, ones) == doctest::Approx(1.0).epsilon(1e-15));

    std::mt19937_64 eng(47);
    for (int rep = 0; rep < 50; ++rep) {
        NormalizedImage x{4, 3, {}}, y{4, 3, {}};
        x.values.resize(12);
        y.values.resize(12);
        for (double& v : x.values) v = static_cast<double>(eng() % 1000) / 999.0;
        for (double& v : y.values) v = static_cast<double>(eng() % 1000) / 999.0;
        double oracle = 0.0;
        for (std::size_t k = 0; k < 12; ++k) {
            const double d = x.values[k] - y.values[k];
            oracle += d * d;
        }
        oracle /= 12.0;
        CHECK(mse(x, y) == doctest::Approx(oracle).epsilon(1e-14));
        CHECK(mse(x, y) == doctest::Approx(mse(y, x)).epsilon(1e-15));
    }

    NormalizedImage other{4, 1, std::vector<double>(4, 0.0)};
    CHECK_THROWS_AS(mse(zeros, other), std::invalid_argument);
}

TEST_CASE("cross_kerr_apply is a conditional phase") {
    const cplx target{1.3, 0.0};
    CHECK(cross_kerr_apply(true, target, 0.0) == target);
    CHECK(cross_kerr_apply(false, target, 2.1) == target);

    const cplx rotated = cross_kerr_apply(true, target, kPi / 2);
    CHECK(std::abs(rotated.real()) < 1e-15);
    CHECK(rotated.imag() == doctest::Approx(1.3).epsilon(1e-15));

    std::mt19937_64 eng(53);
    for (int rep = 0; rep < 100; ++rep) {
        const cplx t{static_cast<double>(eng() % 1000) / 100.0,
                     static_cast<double>(eng() % 1000) / 100.0};
        const double theta = static_cast<double>(eng() % 1000) / 1000.0 * 2 * kPi;
        CHECK(std::abs(cross_kerr_apply(true, t, theta)) == doctest::Approx(std::abs(t)).epsilon(1e-15));
    }
}

TEST_CASE("database_single_run basics") {
    std::mt19937_64 eng(59);
    const PhaseImage reference = random_phases(3, 3, eng);
    const EncodingParams params = params_with_amplitude(std::sqrt(17.2));

    ImageDatabase solo{{reference}};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const DatabaseRunOutcome run = database_single_run(solo, reference, params, seed);
        CHECK(run.detected_index == 1);
        CHECK(run.report.cosine == doctest::Approx(1.0).epsilon(1e-12));
    }

    ImageDatabase db{{reference, random_phases(3, 3, eng), random_phases(3, 3, eng),
                      random_phases(3, 3, eng)}};
    const DatabaseRunOutcome a = database_single_run(db, reference, params, 99);
    const DatabaseRunOutcome b = database_single_run(db, reference, params, 99);
    CHECK(a.detected_index == b.detected_index);
    CHECK(a.report.cosine == b.report.cosine);

    int counts[4] = {0, 0, 0, 0};
    const int runs = 2000;
    for (int r = 0; r < runs; ++r)
        ++counts[database_single_run(db, reference, params, static_cast<std::uint64_t>(r))
                     .detected_index -
                 1];
    const double sigma = std::sqrt(runs * 0.25 * 0.75);
    for (int m = 0; m < 4; ++m) CHECK(std::abs(counts[m] - runs / 4.0) < 4.0 * sigma);
}

TEST_CASE("two-entry database runs resolve both outcomes") {
    // Reference next to a fully dissimilar image: runs landing on the
    // reference copy score 1, runs landing on the other score 0.
    PhaseImage reference{2, 2, std::vector<double>(4, 0.0)};
    PhaseImage orthogonal{2, 2, std::vector<double>(4, kPi / 2)};
    ImageDatabase db{{reference, orthogonal}};
    const EncodingParams params = params_with_amplitude(std::sqrt(2.3));

    bool saw_first = false, saw_second = false;
    for (std::uint64_t seed = 0; seed < 64 && !(saw_first && saw_second); ++seed) {
        const DatabaseRunOutcome run = database_single_run(db, reference, params, seed);
        if (run.detected_index == 1) {
            CHECK(run.report.cosine == doctest::Approx(1.0).epsilon(1e-12));
            saw_first = true;
        } else {
            CHECK(run.report.cosine == doctest::Approx(0.0).epsilon(1e-12));
            saw_second = true;
        }
    }
    CHECK(saw_first);
    CHECK(saw_second);
}

TEST_CASE("database run similarity matches the pairwise metric") {
    std::mt19937_64 eng(61);
    const PhaseImage reference = random_phases(4, 4, eng);
    ImageDatabase db{{random_phases(4, 4, eng), random_phases(4, 4, eng)}};
    const EncodingParams params = params_with_amplitude(2.5);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const DatabaseRunOutcome run = database_single_run(db, reference, params, seed);
        const double expected = cosine_similarity(
            db.entries[static_cast<std::size_t>(run.detected_index - 1)], reference);
        CHECK(run.report.cosine == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("rank_database orders by cosine with index tie-breaks") {
    std::mt19937_64 eng(67);
    const PhaseImage reference = random_phases(4, 4, eng);
    PhaseImage near = reference;
    near.thetas[0] = std::min(kPi / 2, near.thetas[0] + 0.05);
    PhaseImage far = reference;
    for (double& t : far.thetas) t = kPi / 2 - t;

    ImageDatabase db{{far, near, reference}};
    const EncodingParams params = params_with_amplitude(std::sqrt(2.3));
    const RankingResult ranking = rank_database(db, reference, params, Exhaustive{});
    REQUIRE(ranking.reports.size() == 3);
    CHECK(ranking.complete);
    CHECK(ranking.reports[0].candidate_label == "3");
    CHECK(ranking.reports[0].cosine == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ranking.reports[1].candidate_label == "2");
    CHECK(ranking.reports[2].candidate_label == "1");

    // Duplicate entries tie and fall back to ascending index.
    ImageDatabase dup{{near, near, reference}};
    const RankingResult tied = rank_database(dup, reference, params, Exhaustive{});
    CHECK(tied.reports[1].candidate_label == "1");
    CHECK(tied.reports[2].candidate_label == "2");
}

TEST_CASE("stochastic ranking matches exhaustive ranking once covered") {
    std::mt19937_64 eng(71);
    const PhaseImage reference = random_phases(4, 4, eng);
    ImageDatabase db;
    for (int m = 0; m < 8; ++m) db.entries.push_back(random_phases(4, 4, eng));
    const EncodingParams params = params_with_amplitude(std::sqrt(17.2));

    const RankingResult exhaustive = rank_database(db, reference, params, Exhaustive{});
    const long budget = static_cast<long>(50.0 * 8.0 * std::log(8.0));
    const RankingResult stochastic =
        rank_database(db, reference, params, Stochastic{budget, 2026});
    REQUIRE(stochastic.complete);
    REQUIRE(stochastic.reports.size() == exhaustive.reports.size());
    for (std::size_t i = 0; i < exhaustive.reports.size(); ++i) {
        CHECK(stochastic.reports[i].candidate_label == exhaustive.reports[i].candidate_label);
        CHECK(stochastic.reports[i].cosine ==
              doctest::Approx(exhaustive.reports[i].cosine).epsilon(1e-12));
    }

    // A tiny budget yields a flagged partial result, not an error.
    const RankingResult partial = rank_database(db, reference, params, Stochastic{2, 1});
    CHECK_FALSE(partial.complete);
    CHECK(partial.reports.size() < 8);
}

TEST_CASE("database validation") {
    ImageDatabase empty;
    PhaseImage img{2, 2, std::vector<double>(4, 0.1)};
    CHECK_THROWS_AS(validate(empty), std::invalid_argument);
    ImageDatabase mixed{{img, PhaseImage{1, 4, std::vector<double>(4, 0.1)}}};
    CHECK_THROWS_AS(validate(mixed), std::invalid_argument);
    PhaseImage small{1, 1, {0.0}};
    ImageDatabase db{{img}};
    EncodingParams params = params_with_amplitude(1.0);
    CHECK_THROWS_AS(database_single_run(db, small, params, 1), std::invalid_argument);
}
