#pragma once

#include "qimsim/similarity.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Desk-scale demonstrations: layered-Gaussian-noise databases, the
// cosine-vs-MSE quality-assessment table, noise-level sweeps of the metric,
// and micro-perturbation ranking sensitivity. Everything is seeded and
// reproducible; CSV outputs are formatted to 15 significant digits.

namespace qim::experiments {

using codec::EncodingParams;
using codec::NormalizedImage;
using codec::PhaseImage;
using similarity::ImageDatabase;
using similarity::SimilarityReport;

struct NoiseSpec {
    double mean = 0.0;
    double sigma = 0.1; // standard deviation of the Gaussian noise
    int layers = 1;
    std::uint64_t seed = 0;
};

void validate(const NoiseSpec& spec);

struct SweepSpec {
    double sigma_min = 0.01;
    double sigma_max = 1.0;
    int steps = 20;
    int seeds_per_point = 20;
};

struct PerturbationSpec {
    double sigma0 = 0.2;
    double delta_sigma = 1e-10;
    int count = 10;
};

struct ExperimentConfig {
    std::string reference_path;
    std::string output_path;
    EncodingParams encoding;
    NoiseSpec noise;
    std::optional<SweepSpec> sweep;
    std::optional<PerturbationSpec> perturbation;
};

struct NoisyImage {
    NormalizedImage image;
    bool degenerate = false; // min-max was undefined; pixels forced to 0
};

// Adds i.i.d. Gaussian(mean, sigma^2) per pixel, then renormalizes into
// [0, 1] by saturating out-of-range values (the continuous re-application of
// the fixed-range intensity normalization). Deterministic per layer seed.
NoisyImage add_gaussian_noise_layer(const NormalizedImage& img, double mean, double sigma,
                                    std::uint64_t layer_seed);

// Entries 1..layers, each the previous entry plus one more noise layer
// (entry 0 is the reference and is not included).
std::vector<NormalizedImage> layered_noise_chain(const NormalizedImage& reference,
                                                 const NoiseSpec& spec);

ImageDatabase build_layered_database(const NormalizedImage& reference, const NoiseSpec& spec);

// Fig.-style quality table: first row compares the reference with itself,
// then one row per noise layer. Candidate labels run A, B, C, ...
std::vector<SimilarityReport> iqa_table(const NormalizedImage& reference, const NoiseSpec& spec,
                                        const EncodingParams& encoding);

struct SweepPoint {
    double sigma = 0.0;
    double mean_cosine = 0.0; // averaged over seeds_per_point single-layer images
};

std::vector<SweepPoint> sensitivity_sweep(const NormalizedImage& reference, const SweepSpec& spec,
                                          std::uint64_t seed);

struct PerturbationRow {
    double sigma = 0.0;
    double cosine = 0.0;
    int rank = 0; // 1 = most similar
};

struct PerturbationResult {
    std::vector<PerturbationRow> rows; // in sigma order
    bool rank_matches_sigma_order = false;
};

// One fixed standard-normal field Z (from `seed`), images
// clip-normalize(reference + sigma_i * Z) for sigma_i = sigma0 + i * delta_sigma,
// i = 0..count; the similarity is then a smooth function of sigma_i, so
// rankings remain meaningful down to floating-point resolution.
PerturbationResult perturbation_ranking(const NormalizedImage& reference,
                                        const PerturbationSpec& spec, std::uint64_t seed);

// Smallest delta_sigma from the decade grid [delta_min, delta_max] that still
// yields a strict, correctly ordered ranking; 0 if even delta_max fails.
double smallest_strict_delta(const NormalizedImage& reference, double sigma0, int count,
                             std::uint64_t seed, double delta_min = 1e-16,
                             double delta_max = 1e-8);

// Config-driven wrappers: read the reference PGM, run, write the CSV named
// in the config. Used by the CLI.
std::vector<SimilarityReport> iqa_table(const ExperimentConfig& config);
std::vector<SweepPoint> sensitivity_sweep(const ExperimentConfig& config);
PerturbationResult perturbation_ranking(const ExperimentConfig& config);

} // namespace qim::experiments
