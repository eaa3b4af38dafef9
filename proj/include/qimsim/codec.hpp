#pragma once

#include "qimsim/network.hpp"
#include "qimsim/optics.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

// Image <-> phase-distributed coherent field codec. Pixel intensity labels
// map to phases in [0, pi/2]; each pixel rides one optical mode with fixed
// modulus and phase-encoded value. Retrieval interferes every pixel mode with
// an auxiliary reference beam and reads the dark-port photon number, either
// as an expectation or as seeded Poisson counts (coherent-light counting is
// Poissonian, with shot noise sqrt(n) matching the mean/sigma pair).

namespace qim::codec {

using network::NetworkPlan;
using optics::CoherentField;
using optics::cplx;

// Pixel grid of integer labels in [0, 2^bits - 1], row-major with x fastest.
struct GrayImage {
    int width = 0;
    int height = 0;
    int bits = 1;
    std::vector<std::uint16_t> pixels;
};

void validate(const GrayImage& img);

// Continuous pixel values in [0, 1] (the post-normalization representation).
struct NormalizedImage {
    int width = 0;
    int height = 0;
    std::vector<double> values;
};

void validate(const NormalizedImage& img);

// Flattened per-pixel phases in [0, pi/2].
struct PhaseImage {
    int width = 0;
    int height = 0;
    std::vector<double> thetas;
};

void validate(const PhaseImage& img);

struct EncodingParams {
    double per_mode_amplitude = 1.0; // daughter-beam amplitude a (real, > 0)
    int bits = 1;
    double auxiliary_phase = 0.0;    // theta_r
    double overlap_target = 0.1;
};

void validate(const EncodingParams& params);

struct MeasurementRecord {
    double expected_n = 0.0;
    double shot_noise = 0.0;                    // always sqrt(expected_n)
    std::optional<std::uint64_t> sampled_n;     // total counts over all shots
    std::uint64_t rng_seed = 0;                 // per-mode substream seed when sampled
};

struct Expectation {};
struct Sampled {
    std::uint64_t seed = 0;
    int shots = 1;
};
using RetrievalMode = std::variant<Expectation, Sampled>;

// (pi/2) * s / (2^bits - 1), the min-max label-to-angle map.
double intensity_to_angle(int label, int bits);

// Nearest-label inverse, clamped to [0, 2^bits - 1]. Inputs more than 0.1 rad
// outside [0, pi/2] indicate an upstream decode fault and throw.
int angle_to_intensity(double theta, int bits);

PhaseImage to_phase_image(const GrayImage& img);
PhaseImage to_phase_image(const NormalizedImage& img); // theta = v * pi/2
NormalizedImage to_normalized(const PhaseImage& img);  // v = 2*theta/pi

// Min-max rescaling of raw labels to [0, 1]; a constant image maps to all
// zeros (the degenerate case callers may want to flag upstream).
NormalizedImage min_max_normalize(const GrayImage& img);

// Mode k carries per_mode_amplitude * e^{i theta_k}. GrayImage input must
// agree with params.bits.
CoherentField encode_image(const GrayImage& img, const EncodingParams& params);
CoherentField encode_image(const PhaseImage& img, const EncodingParams& params);

// Phase-shift one pixel mode by delta_theta (modulus preserved).
CoherentField point_transform(const CoherentField& field, int k, double delta_theta);

// Phase-shift the source before chopping: every daughter picks up delta_theta.
CoherentField global_transform(cplx alpha_in, double delta_theta, const NetworkPlan& plan);

// Balanced-splitter mixing of a pixel mode with the auxiliary mode:
// ((a+b)/sqrt2, (a-b)/sqrt2). The second output is the dark port.
std::pair<cplx, cplx> interfere_with_auxiliary(cplx pixel_mode, cplx aux_mode);

// Dark-port mean photon number a^2 * (1 - cos(theta_k - theta_r)).
double expected_pixel_signal(double theta_k, const EncodingParams& params);

// One Poisson draw at the dark-port mean; identical (inputs, seed) give
// identical counts.
std::uint64_t sample_pixel_signal(double theta_k, const EncodingParams& params,
                                  std::uint64_t seed);

struct RetrievalResult {
    GrayImage image;
    std::vector<MeasurementRecord> records;
};

// Per mode: interfere with the auxiliary beam, read n (expectation or
// shot-averaged counts), invert theta = theta_r + acos(1 - n/a^2) with the
// cosine argument clamped into [-1, 1], then take the nearest label. The
// field carries no shape, so callers that encoded a 2-D image pass its
// dimensions back in; width = 0 yields a T x 1 result.
RetrievalResult retrieve_image(const CoherentField& field, const EncodingParams& params,
                               const RetrievalMode& mode, int width = 0, int height = 0);

// Per-mode amplitude a with a^2 = -ln(target) / (1 - cos(pi / (2 (2^bits - 1)))),
// making adjacent-label dark-port states overlap exactly at `target`.
double optimal_amplitude(int bits, double overlap_target);

} // namespace qim::codec
