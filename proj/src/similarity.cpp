#include "qimsim/similarity.hpp"

#include "qimsim/numeric.hpp"
#include "qimsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qim::similarity {

namespace {

void check_same_dims(const PhaseImage& a, const PhaseImage& b, const char* what) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument(std::string(what) + ": image dimensions differ");
}

std::string index_label(int index) { return std::to_string(index); }

// Dark-port photon numbers for all mode pairs of two encodings.
std::vector<double> dark_port_signals(const PhaseImage& a, const PhaseImage& b,
                                      const EncodingParams& params) {
    const optics::CoherentField fa = codec::encode_image(a, params);
    const optics::CoherentField fb = codec::encode_image(b, params);
    std::vector<double> n(a.thetas.size());
    for (std::size_t k = 0; k < n.size(); ++k) {
        const auto [bright, dark] = codec::interfere_with_auxiliary(
            fa.amplitudes()[k], fb.amplitudes()[k]);
        (void)bright;
        n[k] = std::norm(dark);
    }
    return n;
}

} // namespace

void validate(const ImageDatabase& db) {
    if (db.entries.empty()) throw std::invalid_argument("ImageDatabase: need at least one entry");
    for (const PhaseImage& img : db.entries) {
        codec::validate(img);
        if (img.width != db.entries.front().width || img.height != db.entries.front().height)
            throw std::invalid_argument("ImageDatabase: entries must share dimensions");
    }
}

double cosine_similarity(const PhaseImage& a, const PhaseImage& b) {
    check_same_dims(a, b, "cosine_similarity");
    const std::size_t T = a.thetas.size();
    std::vector<double> terms(T);
    for (std::size_t k = 0; k < T; ++k) terms[k] = std::cos(a.thetas[k] - b.thetas[k]);
    return num::pairwise_sum(terms) / static_cast<double>(T);
}

SimilarityReport cosine_similarity_measured(const PhaseImage& a, const PhaseImage& b,
                                            const EncodingParams& params,
                                            const RetrievalMode& mode) {
    check_same_dims(a, b, "cosine_similarity_measured");
    codec::validate(params);
    const std::size_t T = a.thetas.size();
    const double a2 = params.per_mode_amplitude * params.per_mode_amplitude;
    const double total_intensity = static_cast<double>(T) * a2; // the source |alpha|^2

    std::vector<double> n = dark_port_signals(a, b, params);
    long runs = 1;
    if (const auto* sampled = std::get_if<codec::Sampled>(&mode)) {
        if (sampled->shots < 1)
            throw std::invalid_argument("cosine_similarity_measured: shots must be >= 1");
        runs = sampled->shots;
        for (std::size_t k = 0; k < T; ++k) {
            auto eng = rng::make_engine(rng::derive(sampled->seed, static_cast<std::uint64_t>(k)));
            std::uint64_t total = 0;
            for (int s = 0; s < sampled->shots; ++s) total += rng::poisson(eng, n[k]);
            n[k] = static_cast<double>(total) / static_cast<double>(sampled->shots);
        }
    }

    SimilarityReport report;
    report.measured_total_n = num::pairwise_sum(n);
    report.cosine = 1.0 - report.measured_total_n / total_intensity;
    report.mse = mse(codec::to_normalized(a), codec::to_normalized(b));
    report.runs_used = runs;
    return report;
}

double mse(const NormalizedImage& a, const NormalizedImage& b) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("mse: image dimensions differ");
    const std::size_t T = a.values.size();
    std::vector<double> terms(T);
    for (std::size_t k = 0; k < T; ++k) {
        const double d = a.values[k] - b.values[k];
        terms[k] = d * d;
    }
    return num::pairwise_sum(terms) / static_cast<double>(T);
}

cplx cross_kerr_apply(bool control_photon_present, cplx target, double theta) {
    return control_photon_present ? target * std::polar(1.0, theta) : target;
}

DatabaseRunOutcome database_single_run(const ImageDatabase& db, const PhaseImage& reference,
                                       const EncodingParams& params, std::uint64_t seed) {
    validate(db);
    check_same_dims(db.entries.front(), reference, "database_single_run");
    const int M = static_cast<int>(db.entries.size());

    // Single-photon detection over M index modes: exactly uniform collapse.
    auto eng = rng::make_engine(seed);
    const int x = 1 + static_cast<int>(eng() % static_cast<std::uint64_t>(M));
    const PhaseImage& picked = db.entries[static_cast<std::size_t>(x - 1)];

    // Encode entry x through its activated cross-Kerr column acting on the
    // plain chopped register; the reference register uses phase shifters.
    const double a = params.per_mode_amplitude;
    const std::size_t T = picked.thetas.size();
    std::vector<cplx> db_reg(T), ref_reg(T);
    for (std::size_t k = 0; k < T; ++k) {
        db_reg[k] = cross_kerr_apply(true, cplx{a, 0.0}, picked.thetas[k]);
        ref_reg[k] = std::polar(a, reference.thetas[k]);
    }

    std::vector<double> n(T);
    for (std::size_t k = 0; k < T; ++k) {
        const auto [bright, dark] = codec::interfere_with_auxiliary(db_reg[k], ref_reg[k]);
        (void)bright;
        n[k] = std::norm(dark);
    }

    DatabaseRunOutcome out;
    out.detected_index = x;
    out.seed = seed;
    out.report.candidate_label = index_label(x);
    out.report.measured_total_n = num::pairwise_sum(n);
    out.report.cosine =
        1.0 - out.report.measured_total_n / (static_cast<double>(T) * a * a);
    out.report.mse = mse(codec::to_normalized(picked), codec::to_normalized(reference));
    out.report.runs_used = 1;
    return out;
}

RankingResult rank_database(const ImageDatabase& db, const PhaseImage& reference,
                            const EncodingParams& params, const RankStrategy& strategy) {
    validate(db);
    check_same_dims(db.entries.front(), reference, "rank_database");
    const int M = static_cast<int>(db.entries.size());

    RankingResult result;
    std::vector<SimilarityReport> by_index(static_cast<std::size_t>(M));
    std::vector<long> hits(static_cast<std::size_t>(M), 0);

    if (std::holds_alternative<Exhaustive>(strategy)) {
        for (int m = 1; m <= M; ++m) {
            SimilarityReport r = cosine_similarity_measured(
                reference, db.entries[static_cast<std::size_t>(m - 1)], params,
                codec::Expectation{});
            r.candidate_label = index_label(m);
            by_index[static_cast<std::size_t>(m - 1)] = std::move(r);
            hits[static_cast<std::size_t>(m - 1)] = 1;
        }
        result.runs_used = M;
    } else {
        const auto& st = std::get<Stochastic>(strategy);
        if (st.max_runs < 1) throw std::invalid_argument("rank_database: max_runs must be >= 1");
        int observed = 0;
        for (long run = 0; run < st.max_runs && observed < M; ++run) {
            DatabaseRunOutcome outcome = database_single_run(
                db, reference, params, rng::derive(st.seed, static_cast<std::uint64_t>(run)));
            ++result.runs_used;
            auto& count = hits[static_cast<std::size_t>(outcome.detected_index - 1)];
            if (count == 0) {
                by_index[static_cast<std::size_t>(outcome.detected_index - 1)] = outcome.report;
                ++observed;
            }
            ++count;
        }
    }

    for (int m = 0; m < M; ++m) {
        if (hits[static_cast<std::size_t>(m)] == 0) {
            result.complete = false;
            continue;
        }
        SimilarityReport r = by_index[static_cast<std::size_t>(m)];
        r.runs_used = hits[static_cast<std::size_t>(m)];
        result.reports.push_back(std::move(r));
    }
    std::stable_sort(result.reports.begin(), result.reports.end(),
                     [](const SimilarityReport& l, const SimilarityReport& r) {
                         if (l.cosine != r.cosine) return l.cosine > r.cosine;
                         return std::stol(l.candidate_label) < std::stol(r.candidate_label);
                     });
    return result;
}

} // namespace qim::similarity
