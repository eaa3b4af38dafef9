#include "qimsim/codec.hpp"

#include "qimsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qim::codec {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kPhaseSlack = 1e-12;

int max_label(int bits) {
    if (bits < 1 || bits > 16) throw std::invalid_argument("bits per pixel must lie in [1, 16]");
    return (1 << bits) - 1;
}

void check_dims(int width, int height, std::size_t n, const char* what) {
    if (width < 1 || height < 1)
        throw std::invalid_argument(std::string(what) + ": dimensions must be positive");
    if (n != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw std::invalid_argument(std::string(what) + ": pixel count does not match dimensions");
}

} // namespace

void validate(const GrayImage& img) {
    check_dims(img.width, img.height, img.pixels.size(), "GrayImage");
    const int top = max_label(img.bits);
    for (std::uint16_t p : img.pixels)
        if (p > top)
            throw std::invalid_argument("GrayImage: label " + std::to_string(p) +
                                        " exceeds 2^bits - 1 = " + std::to_string(top));
}

void validate(const NormalizedImage& img) {
    check_dims(img.width, img.height, img.values.size(), "NormalizedImage");
    for (double v : img.values)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("NormalizedImage: values must lie in [0, 1]");
}

void validate(const PhaseImage& img) {
    check_dims(img.width, img.height, img.thetas.size(), "PhaseImage");
    for (double t : img.thetas)
        if (!(t >= -kPhaseSlack && t <= kHalfPi + kPhaseSlack))
            throw std::invalid_argument("PhaseImage: phases must lie in [0, pi/2]");
}

void validate(const EncodingParams& params) {
    if (!(params.per_mode_amplitude > 0.0) || !std::isfinite(params.per_mode_amplitude))
        throw std::invalid_argument("EncodingParams: per_mode_amplitude must be finite and > 0");
    max_label(params.bits);
    if (!(params.overlap_target > 0.0 && params.overlap_target < 1.0))
        throw std::invalid_argument("EncodingParams: overlap_target must lie in (0, 1)");
    if (!std::isfinite(params.auxiliary_phase))
        throw std::invalid_argument("EncodingParams: auxiliary_phase must be finite");
}

double intensity_to_angle(int label, int bits) {
    const int top = max_label(bits);
    if (label < 0 || label > top)
        throw std::invalid_argument("intensity_to_angle: label " + std::to_string(label) +
                                    " outside [0, " + std::to_string(top) + "]");
    return kHalfPi * static_cast<double>(label) / static_cast<double>(top);
}

int angle_to_intensity(double theta, int bits) {
    const int top = max_label(bits);
    if (theta < -0.1 || theta > kHalfPi + 0.1)
        throw std::invalid_argument("angle_to_intensity: theta " + std::to_string(theta) +
                                    " far outside [0, pi/2]; upstream decode fault");
    const long rounded = std::lround(theta * static_cast<double>(top) / kHalfPi);
    return static_cast<int>(std::clamp(rounded, 0L, static_cast<long>(top)));
}

PhaseImage to_phase_image(const GrayImage& img) {
    validate(img);
    PhaseImage out{img.width, img.height, {}};
    out.thetas.reserve(img.pixels.size());
    for (std::uint16_t p : img.pixels) out.thetas.push_back(intensity_to_angle(p, img.bits));
    return out;
}

PhaseImage to_phase_image(const NormalizedImage& img) {
    validate(img);
    PhaseImage out{img.width, img.height, {}};
    out.thetas.reserve(img.values.size());
    for (double v : img.values) out.thetas.push_back(v * kHalfPi);
    return out;
}

NormalizedImage to_normalized(const PhaseImage& img) {
    validate(img);
    NormalizedImage out{img.width, img.height, {}};
    out.values.reserve(img.thetas.size());
    for (double t : img.thetas) out.values.push_back(std::clamp(t / kHalfPi, 0.0, 1.0));
    return out;
}

NormalizedImage min_max_normalize(const GrayImage& img) {
    validate(img);
    std::uint16_t lo = img.pixels[0], hi = img.pixels[0];
    for (std::uint16_t p : img.pixels) {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    NormalizedImage out{img.width, img.height,
                        std::vector<double>(img.pixels.size(), 0.0)};
    if (hi == lo) return out; // degenerate constant image -> all zeros
    const double range = static_cast<double>(hi) - static_cast<double>(lo);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        out.values[i] = (static_cast<double>(img.pixels[i]) - static_cast<double>(lo)) / range;
    return out;
}

CoherentField encode_image(const GrayImage& img, const EncodingParams& params) {
    validate(params);
    if (img.bits != params.bits)
        throw std::invalid_argument("encode_image: image bits differ from params.bits");
    return encode_image(to_phase_image(img), params);
}

CoherentField encode_image(const PhaseImage& img, const EncodingParams& params) {
    validate(img);
    validate(params);
    std::vector<cplx> amps;
    amps.reserve(img.thetas.size());
    for (double t : img.thetas) amps.push_back(std::polar(params.per_mode_amplitude, t));
    return CoherentField(std::move(amps));
}

CoherentField point_transform(const CoherentField& field, int k, double delta_theta) {
    if (k < 1 || k > field.mode_count())
        throw std::invalid_argument("point_transform: mode index out of range");
    std::vector<cplx> amps = field.amplitudes();
    amps[static_cast<std::size_t>(k - 1)] *= std::polar(1.0, delta_theta);
    return CoherentField(std::move(amps));
}

CoherentField global_transform(cplx alpha_in, double delta_theta, const NetworkPlan& plan) {
    return network::chop(alpha_in * std::polar(1.0, delta_theta), plan);
}

std::pair<cplx, cplx> interfere_with_auxiliary(cplx pixel_mode, cplx aux_mode) {
    const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
    return {(pixel_mode + aux_mode) * inv_sqrt2, (pixel_mode - aux_mode) * inv_sqrt2};
}

double expected_pixel_signal(double theta_k, const EncodingParams& params) {
    validate(params);
    const double a2 = params.per_mode_amplitude * params.per_mode_amplitude;
    return a2 * (1.0 - std::cos(theta_k - params.auxiliary_phase));
}

std::uint64_t sample_pixel_signal(double theta_k, const EncodingParams& params,
                                  std::uint64_t seed) {
    const double mean = expected_pixel_signal(theta_k, params);
    auto eng = rng::make_engine(seed);
    return rng::poisson(eng, mean);
}

RetrievalResult retrieve_image(const CoherentField& field, const EncodingParams& params,
                               const RetrievalMode& mode, int width, int height) {
    validate(params);
    const int T = field.mode_count();
    if (width == 0) {
        width = T;
        height = 1;
    }
    if (width < 1 || height < 1 || width * height != T)
        throw std::invalid_argument("retrieve_image: shape does not match mode count");
    const double a = params.per_mode_amplitude;
    const double a2 = a * a;
    const cplx aux = std::polar(a, params.auxiliary_phase);

    const Sampled* sampled = std::get_if<Sampled>(&mode);
    if (sampled && sampled->shots < 1)
        throw std::invalid_argument("retrieve_image: shots must be >= 1");
    const int shots = sampled ? sampled->shots : 1;

    // Fault threshold: the largest legitimate mean is 2 a^2 (opposite
    // phases). Sampled counts get eight shot-noise sigmas of headroom on
    // top; expectation values get none.
    const double fault_ratio =
        sampled ? 2.0 + 8.0 * std::sqrt(2.0 / (a2 * shots)) + 1e-9 : 2.0 + 1e-9;

    GrayImage img;
    img.width = width;
    img.height = height;
    img.bits = params.bits;
    img.pixels.reserve(static_cast<std::size_t>(T));
    std::vector<MeasurementRecord> records;
    records.reserve(static_cast<std::size_t>(T));

    for (int k = 1; k <= T; ++k) {
        const auto [bright, dark] = interfere_with_auxiliary(field.amplitude(k), aux);
        (void)bright;
        const double expected = std::norm(dark);

        MeasurementRecord rec;
        rec.expected_n = expected;
        rec.shot_noise = std::sqrt(expected);

        double n_mean = expected;
        if (sampled) {
            rec.rng_seed = rng::derive(sampled->seed, static_cast<std::uint64_t>(k));
            auto eng = rng::make_engine(rec.rng_seed);
            std::uint64_t total = 0;
            for (int s = 0; s < shots; ++s) total += rng::poisson(eng, expected);
            rec.sampled_n = total;
            n_mean = static_cast<double>(total) / static_cast<double>(shots);
        }

        const double ratio = n_mean / a2;
        if (ratio > fault_ratio)
            throw std::runtime_error("retrieve_image: dark-port photon number " +
                                     std::to_string(n_mean) +
                                     " inconsistent with amplitude; decode fault");
        const double cos_arg = std::clamp(1.0 - ratio, -1.0, 1.0);
        const double theta =
            std::clamp(params.auxiliary_phase + std::acos(cos_arg), 0.0, kHalfPi);
        img.pixels.push_back(static_cast<std::uint16_t>(angle_to_intensity(theta, params.bits)));
        records.push_back(rec);
    }
    validate(img);
    return {std::move(img), std::move(records)};
}

double optimal_amplitude(int bits, double overlap_target) {
    if (!(overlap_target > 0.0 && overlap_target < 1.0))
        throw std::invalid_argument("optimal_amplitude: overlap_target must lie in (0, 1)");
    const int top = max_label(bits);
    const double gap = std::numbers::pi / (2.0 * static_cast<double>(top));
    const double a2 = -std::log(overlap_target) / (1.0 - std::cos(gap));
    return std::sqrt(a2);
}

} // namespace qim::codec
