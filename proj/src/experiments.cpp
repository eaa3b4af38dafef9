#include "qimsim/experiments.hpp"

#include "qimsim/io.hpp"
#include "qimsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qim::experiments {

namespace {

std::string layer_label(int m) {
    if (m >= 1 && m <= 26) return std::string(1, static_cast<char>('A' + m - 1));
    return "L" + std::to_string(m);
}

std::vector<double> gaussian_field(std::size_t n, std::uint64_t seed) {
    rng::GaussianStream g(seed);
    std::vector<double> z(n);
    for (double& v : z) v = g.next();
    return z;
}

// Re-application of the fixed-range normalization to continuous values:
// saturate into [0, 1]. Normalizing by the empirical extremes instead would
// couple every pixel to two extreme-value statistics and wreck the strict
// layer-by-layer monotonicity of the similarity sequence.
NormalizedImage renormalize_to_unit(int width, int height, std::vector<double> w,
                                    bool* degenerate) {
    for (double& v : w) v = std::clamp(v, 0.0, 1.0);
    const auto [lo_it, hi_it] = std::minmax_element(w.begin(), w.end());
    if (!(*hi_it - *lo_it > 0.0)) {
        *degenerate = true;
        std::fill(w.begin(), w.end(), 0.0);
        return {width, height, std::move(w)};
    }
    *degenerate = false;
    return {width, height, std::move(w)};
}

} // namespace

void validate(const NoiseSpec& spec) {
    if (!(spec.sigma > 0.0)) throw std::invalid_argument("NoiseSpec: sigma must be > 0");
    if (spec.layers < 1) throw std::invalid_argument("NoiseSpec: layers must be >= 1");
    if (!std::isfinite(spec.mean)) throw std::invalid_argument("NoiseSpec: mean must be finite");
}

NoisyImage add_gaussian_noise_layer(const NormalizedImage& img, double mean, double sigma,
                                    std::uint64_t layer_seed) {
    codec::validate(img);
    if (!(sigma > 0.0)) throw std::invalid_argument("add_gaussian_noise_layer: sigma must be > 0");
    std::vector<double> w = img.values;
    rng::GaussianStream g(layer_seed);
    for (double& v : w) v += mean + sigma * g.next();
    NoisyImage out;
    out.image = renormalize_to_unit(img.width, img.height, std::move(w), &out.degenerate);
    return out;
}

std::vector<NormalizedImage> layered_noise_chain(const NormalizedImage& reference,
                                                 const NoiseSpec& spec) {
    codec::validate(reference);
    validate(spec);
    std::vector<NormalizedImage> chain;
    chain.reserve(static_cast<std::size_t>(spec.layers));
    const NormalizedImage* prev = &reference;
    for (int m = 1; m <= spec.layers; ++m) {
        NoisyImage next = add_gaussian_noise_layer(*prev, spec.mean, spec.sigma,
                                                   rng::derive(spec.seed, static_cast<std::uint64_t>(m)));
        chain.push_back(std::move(next.image));
        prev = &chain.back();
    }
    return chain;
}

ImageDatabase build_layered_database(const NormalizedImage& reference, const NoiseSpec& spec) {
    ImageDatabase db;
    for (const NormalizedImage& img : layered_noise_chain(reference, spec))
        db.entries.push_back(codec::to_phase_image(img));
    similarity::validate(db);
    return db;
}

std::vector<SimilarityReport> iqa_table(const NormalizedImage& reference, const NoiseSpec& spec,
                                        const EncodingParams& encoding) {
    const PhaseImage ref_phase = codec::to_phase_image(reference);
    std::vector<SimilarityReport> rows;
    rows.reserve(static_cast<std::size_t>(spec.layers) + 1);

    SimilarityReport self =
        similarity::cosine_similarity_measured(ref_phase, ref_phase, encoding, codec::Expectation{});
    self.candidate_label = "R";
    rows.push_back(std::move(self));

    int m = 1;
    for (const NormalizedImage& img : layered_noise_chain(reference, spec)) {
        SimilarityReport r = similarity::cosine_similarity_measured(
            ref_phase, codec::to_phase_image(img), encoding, codec::Expectation{});
        r.candidate_label = layer_label(m++);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<SweepPoint> sensitivity_sweep(const NormalizedImage& reference, const SweepSpec& spec,
                                          std::uint64_t seed) {
    codec::validate(reference);
    if (!(spec.sigma_min > 0.0) || !(spec.sigma_max >= spec.sigma_min))
        throw std::invalid_argument("sensitivity_sweep: need 0 < sigma_min <= sigma_max");
    if (spec.steps < 1 || spec.seeds_per_point < 1)
        throw std::invalid_argument("sensitivity_sweep: steps and seeds_per_point must be >= 1");

    const PhaseImage ref_phase = codec::to_phase_image(reference);
    std::vector<SweepPoint> points;
    points.reserve(static_cast<std::size_t>(spec.steps));
    for (int i = 0; i < spec.steps; ++i) {
        const double sigma =
            spec.steps == 1
                ? spec.sigma_min
                : spec.sigma_min + (spec.sigma_max - spec.sigma_min) * i / (spec.steps - 1);
        const std::uint64_t point_seed = rng::derive(seed, static_cast<std::uint64_t>(i));
        double sum = 0.0;
        for (int s = 0; s < spec.seeds_per_point; ++s) {
            NoisyImage noisy = add_gaussian_noise_layer(
                reference, 0.0, sigma, rng::derive(point_seed, static_cast<std::uint64_t>(s)));
            sum += similarity::cosine_similarity(ref_phase, codec::to_phase_image(noisy.image));
        }
        points.push_back({sigma, sum / spec.seeds_per_point});
    }
    return points;
}

PerturbationResult perturbation_ranking(const NormalizedImage& reference,
                                        const PerturbationSpec& spec, std::uint64_t seed) {
    codec::validate(reference);
    if (!(spec.sigma0 > 0.0) || !(spec.delta_sigma > 0.0) || spec.count < 1)
        throw std::invalid_argument("perturbation_ranking: need sigma0 > 0, delta_sigma > 0, count >= 1");

    const PhaseImage ref_phase = codec::to_phase_image(reference);
    const std::vector<double> z = gaussian_field(reference.values.size(), seed);

    PerturbationResult result;
    result.rows.reserve(static_cast<std::size_t>(spec.count) + 1);
    for (int i = 0; i <= spec.count; ++i) {
        const double sigma = spec.sigma0 + spec.delta_sigma * i;
        std::vector<double> w = reference.values;
        for (std::size_t k = 0; k < w.size(); ++k) w[k] += sigma * z[k];
        bool degenerate = false;
        const NormalizedImage img =
            renormalize_to_unit(reference.width, reference.height, std::move(w), &degenerate);
        const double cosine = degenerate
                                  ? 0.0
                                  : similarity::cosine_similarity(ref_phase,
                                                                  codec::to_phase_image(img));
        result.rows.push_back({sigma, cosine, 0});
    }

    // Rank by descending cosine; ties share the lower rank order by sigma.
    std::vector<int> order(result.rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int l, int r) {
        return result.rows[static_cast<std::size_t>(l)].cosine >
               result.rows[static_cast<std::size_t>(r)].cosine;
    });
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        result.rows[static_cast<std::size_t>(order[pos])].rank = static_cast<int>(pos) + 1;

    result.rank_matches_sigma_order = true;
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        if (result.rows[i].rank != static_cast<int>(i) + 1) result.rank_matches_sigma_order = false;
        if (i + 1 < result.rows.size() &&
            !(result.rows[i].cosine > result.rows[i + 1].cosine))
            result.rank_matches_sigma_order = false; // strictness required
    }
    return result;
}

double smallest_strict_delta(const NormalizedImage& reference, double sigma0, int count,
                             std::uint64_t seed, double delta_min, double delta_max) {
    double smallest = 0.0;
    for (double delta = delta_max; delta >= delta_min * 0.999; delta /= 10.0) {
        PerturbationSpec spec{sigma0, delta, count};
        if (perturbation_ranking(reference, spec, seed).rank_matches_sigma_order)
            smallest = delta;
        else
            break; // finer deltas only get harder
    }
    return smallest;
}

std::vector<SimilarityReport> iqa_table(const ExperimentConfig& config) {
    const NormalizedImage reference =
        codec::min_max_normalize(io::read_pgm(config.reference_path));
    std::vector<SimilarityReport> rows = iqa_table(reference, config.noise, config.encoding);
    if (!config.output_path.empty())
        io::write_text_file(config.output_path, io::reports_to_csv(rows));
    return rows;
}

std::vector<SweepPoint> sensitivity_sweep(const ExperimentConfig& config) {
    if (!config.sweep) throw std::invalid_argument("sensitivity_sweep: config.sweep not set");
    const NormalizedImage reference =
        codec::min_max_normalize(io::read_pgm(config.reference_path));
    std::vector<SweepPoint> points = sensitivity_sweep(reference, *config.sweep, config.noise.seed);
    if (!config.output_path.empty()) {
        std::ostringstream csv;
        csv << "sigma,cosine\n";
        for (const SweepPoint& p : points)
            csv << io::format_double(p.sigma) << "," << io::format_double(p.mean_cosine) << "\n";
        io::write_text_file(config.output_path, csv.str());
    }
    return points;
}

PerturbationResult perturbation_ranking(const ExperimentConfig& config) {
    if (!config.perturbation)
        throw std::invalid_argument("perturbation_ranking: config.perturbation not set");
    const NormalizedImage reference =
        codec::min_max_normalize(io::read_pgm(config.reference_path));
    PerturbationResult result =
        perturbation_ranking(reference, *config.perturbation, config.noise.seed);
    if (!config.output_path.empty()) {
        std::ostringstream csv;
        csv << "sigma,cosine,rank\n";
        for (const PerturbationRow& row : result.rows)
            csv << io::format_double(row.sigma) << "," << io::format_double(row.cosine) << ","
                << row.rank << "\n";
        io::write_text_file(config.output_path, csv.str());
    }
    return result;
}

} // namespace qim::experiments
