#pragma once

#include "qimsim/codec.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

// Cosine-similarity metric between phase images, (1/T) sum_k cos(dtheta_k),
// obtained either directly or through the optical measurement path: mix the
// two encodings mode-pairwise on balanced splitters, sum dark-port photon
// numbers N and read 1 - N/(T a^2). The two routes are algebraically
// identical. MSE over normalized pixels is the baseline metric. A database
// of images is addressed by a single-photon index register whose detection
// activates one image's cross-Kerr encoding (simulated as a seeded uniform
// index draw).

namespace qim::similarity {

using codec::EncodingParams;
using codec::NormalizedImage;
using codec::PhaseImage;
using codec::RetrievalMode;
using optics::cplx;

struct ImageDatabase {
    std::vector<PhaseImage> entries;
};

// All entries must share dimensions; M >= 1.
void validate(const ImageDatabase& db);

struct SimilarityReport {
    std::string reference_label = "R";
    std::string candidate_label;
    double cosine = 0.0;
    double mse = 0.0;
    double measured_total_n = 0.0; // summed dark-port photon number
    long runs_used = 1;
};

struct DatabaseRunOutcome {
    int detected_index = 0; // 1-based database entry
    SimilarityReport report;
    std::uint64_t seed = 0;
};

struct Exhaustive {};
struct Stochastic {
    long max_runs = 0;
    std::uint64_t seed = 0;
};
using RankStrategy = std::variant<Exhaustive, Stochastic>;

struct RankingResult {
    std::vector<SimilarityReport> reports; // descending cosine, ties by index
    bool complete = true;                  // false if Stochastic missed entries
    long runs_used = 0;
};

double cosine_similarity(const PhaseImage& a, const PhaseImage& b);

SimilarityReport cosine_similarity_measured(const PhaseImage& a, const PhaseImage& b,
                                            const EncodingParams& params,
                                            const RetrievalMode& mode);

double mse(const NormalizedImage& a, const NormalizedImage& b);

// Conditional phase gate on a coherent target: e^{i theta} when the control
// photon is present, identity otherwise.
cplx cross_kerr_apply(bool control_photon_present, cplx target, double theta);

// One protocol run: detect the index photon (uniform over M), cross-Kerr
// encode that entry, phase-shift encode the reference, measure.
DatabaseRunOutcome database_single_run(const ImageDatabase& db, const PhaseImage& reference,
                                       const EncodingParams& params, std::uint64_t seed);

RankingResult rank_database(const ImageDatabase& db, const PhaseImage& reference,
                            const EncodingParams& params, const RankStrategy& strategy);

} // namespace qim::similarity
