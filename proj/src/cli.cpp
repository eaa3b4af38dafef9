#include "qimsim/cli.hpp"

#include "qimsim/experiments.hpp"
#include "qimsim/io.hpp"

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace qim::cli {

namespace {

using experiments::ExperimentConfig;
using nlohmann::json;

ExperimentConfig config_from_json(const std::string& text) {
    const json j = json::parse(text);
    ExperimentConfig cfg;
    cfg.reference_path = j.value("reference_path", "");
    cfg.output_path = j.value("output_path", "");
    if (j.contains("encoding")) {
        const json& e = j.at("encoding");
        cfg.encoding.per_mode_amplitude = e.value("per_mode_amplitude", cfg.encoding.per_mode_amplitude);
        cfg.encoding.bits = e.value("bits", cfg.encoding.bits);
        cfg.encoding.auxiliary_phase = e.value("auxiliary_phase", cfg.encoding.auxiliary_phase);
        cfg.encoding.overlap_target = e.value("overlap_target", cfg.encoding.overlap_target);
    }
    if (j.contains("noise")) {
        const json& n = j.at("noise");
        cfg.noise.mean = n.value("mean", cfg.noise.mean);
        cfg.noise.sigma = n.value("sigma", cfg.noise.sigma);
        cfg.noise.layers = n.value("layers", cfg.noise.layers);
        cfg.noise.seed = n.value("seed", cfg.noise.seed);
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        experiments::SweepSpec sweep;
        sweep.sigma_min = s.value("sigma_min", sweep.sigma_min);
        sweep.sigma_max = s.value("sigma_max", sweep.sigma_max);
        sweep.steps = s.value("steps", sweep.steps);
        sweep.seeds_per_point = s.value("seeds_per_point", sweep.seeds_per_point);
        cfg.sweep = sweep;
    }
    if (j.contains("perturbation")) {
        const json& p = j.at("perturbation");
        experiments::PerturbationSpec pert;
        pert.sigma0 = p.value("sigma0", pert.sigma0);
        pert.delta_sigma = p.value("delta_sigma", pert.delta_sigma);
        pert.count = p.value("count", pert.count);
        cfg.perturbation = pert;
    }
    return cfg;
}

codec::EncodingParams resolve_encoding(int bits, std::optional<double> amplitude,
                                       double overlap, double aux_phase) {
    codec::EncodingParams params;
    params.bits = bits;
    params.overlap_target = overlap;
    params.auxiliary_phase = aux_phase;
    params.per_mode_amplitude = amplitude ? *amplitude : codec::optimal_amplitude(bits, overlap);
    return params;
}

struct CommonFlags {
    std::string config_path;
    std::string reference;
    std::string out;
    int bits = 8;
    std::optional<double> amplitude;
    double overlap = 0.1;
    double sigma = 0.1;
    int layers = 10;
    std::uint64_t seed = 0;
};

bool flag_given(const CLI::App& cmd, const std::string& name) {
    const CLI::Option* opt = cmd.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

// Config file supplies the baseline; explicitly passed flags override it.
ExperimentConfig build_config(const CommonFlags& f, const CLI::App& cmd) {
    ExperimentConfig cfg;
    const bool have_config = !f.config_path.empty();
    if (have_config) cfg = config_from_json(io::read_text_file(f.config_path));
    if (!have_config || flag_given(cmd, "--reference")) cfg.reference_path = f.reference;
    if (!have_config || flag_given(cmd, "--out")) cfg.output_path = f.out;
    if (!have_config || flag_given(cmd, "--sigma")) cfg.noise.sigma = f.sigma;
    if (!have_config || flag_given(cmd, "--layers")) cfg.noise.layers = f.layers;
    if (!have_config || flag_given(cmd, "--seed")) cfg.noise.seed = f.seed;
    if (!have_config || flag_given(cmd, "--bits") || flag_given(cmd, "--amplitude"))
        cfg.encoding = resolve_encoding(f.bits, f.amplitude, f.overlap,
                                        cfg.encoding.auxiliary_phase);
    return cfg;
}

int run_checked(int argc, const char* const* argv) {
    CLI::App app{"Phase-encoded coherent-state image similarity simulator"};
    app.require_subcommand(1);

    // ---- amplitude ----
    auto* amp_cmd = app.add_subcommand("amplitude", "Optimal per-mode amplitude for a bit depth");
    int amp_bits = 1;
    double amp_overlap = 0.1;
    amp_cmd->add_option("--bits", amp_bits, "bits per pixel")->required();
    amp_cmd->add_option("--overlap", amp_overlap, "target overlap of adjacent labels in (0,1)");
    amp_cmd->callback([&] {
        const double a = codec::optimal_amplitude(amp_bits, amp_overlap);
        std::cout << "a2=" << io::format_double(a * a) << " a=" << io::format_double(a) << "\n";
    });

    // ---- encode ----
    auto* enc_cmd = app.add_subcommand("encode", "Encode a PGM image into a phase vector (JSON)");
    std::string enc_in, enc_out;
    enc_cmd->add_option("image", enc_in, "input PGM")->required();
    enc_cmd->add_option("--out", enc_out, "output phase JSON")->required();
    enc_cmd->callback([&] {
        const codec::GrayImage img = io::read_pgm(enc_in);
        io::write_text_file(enc_out, io::to_json(codec::to_phase_image(img)));
    });

    // ---- retrieve ----
    auto* ret_cmd = app.add_subcommand("retrieve", "Retrieve a PGM image from a phase vector");
    std::string ret_in, ret_out, ret_mode = "expectation";
    int ret_bits = 8, ret_shots = 1;
    std::uint64_t ret_seed = 0;
    std::optional<double> ret_amp;
    double ret_overlap = 0.1;
    ret_cmd->add_option("phases", ret_in, "input phase JSON")->required();
    ret_cmd->add_option("--out", ret_out, "output PGM")->required();
    ret_cmd->add_option("--bits", ret_bits, "bits per pixel");
    ret_cmd->add_option("--amplitude", ret_amp, "per-mode amplitude (default: optimal)");
    ret_cmd->add_option("--overlap", ret_overlap, "overlap target when deriving the amplitude");
    ret_cmd->add_option("--mode", ret_mode, "expectation|sampled")
        ->check(CLI::IsMember({"expectation", "sampled"}));
    ret_cmd->add_option("--seed", ret_seed, "sampling seed");
    ret_cmd->add_option("--shots", ret_shots, "averaged Poisson draws per pixel");
    ret_cmd->callback([&] {
        const codec::PhaseImage phases = io::phase_image_from_json(io::read_text_file(ret_in));
        const codec::EncodingParams params =
            resolve_encoding(ret_bits, ret_amp, ret_overlap, 0.0);
        const codec::RetrievalMode mode =
            ret_mode == "sampled" ? codec::RetrievalMode{codec::Sampled{ret_seed, ret_shots}}
                                  : codec::RetrievalMode{codec::Expectation{}};
        const codec::RetrievalResult result = codec::retrieve_image(
            codec::encode_image(phases, params), params, mode, phases.width, phases.height);
        io::write_pgm(ret_out, result.image);
    });

    // ---- similarity ----
    auto* sim_cmd = app.add_subcommand("similarity", "Cosine and MSE metrics between two PGMs");
    std::string sim_a, sim_b;
    sim_cmd->add_option("a", sim_a, "first PGM")->required();
    sim_cmd->add_option("b", sim_b, "second PGM")->required();
    sim_cmd->callback([&] {
        const codec::PhaseImage pa = codec::to_phase_image(io::read_pgm(sim_a));
        const codec::PhaseImage pb = codec::to_phase_image(io::read_pgm(sim_b));
        const double cosine = similarity::cosine_similarity(pa, pb);
        const double err = similarity::mse(codec::to_normalized(pa), codec::to_normalized(pb));
        std::cout << "cosine=" << io::format_double(cosine) << " mse=" << io::format_double(err)
                  << "\n";
    });

    // ---- rank ----
    auto* rank_cmd = app.add_subcommand("rank", "Rank database images against a reference");
    CommonFlags rank_flags;
    std::vector<std::string> rank_entries;
    bool rank_stochastic = false;
    long rank_max_runs = 0;
    rank_cmd->add_option("--reference", rank_flags.reference, "reference PGM")->required();
    rank_cmd->add_option("entries", rank_entries, "database PGM files")->required();
    rank_cmd->add_option("--bits", rank_flags.bits, "bits per pixel");
    rank_cmd->add_option("--amplitude", rank_flags.amplitude, "per-mode amplitude");
    rank_cmd->add_flag("--stochastic", rank_stochastic, "use seeded single-photon runs");
    rank_cmd->add_option("--max-runs", rank_max_runs, "stochastic run budget");
    rank_cmd->add_option("--seed", rank_flags.seed, "stochastic seed");
    rank_cmd->add_option("--out", rank_flags.out, "CSV output (default stdout)");
    rank_cmd->callback([&] {
        const codec::PhaseImage reference =
            codec::to_phase_image(io::read_pgm(rank_flags.reference));
        similarity::ImageDatabase db;
        for (const std::string& path : rank_entries)
            db.entries.push_back(codec::to_phase_image(io::read_pgm(path)));
        const codec::EncodingParams params = resolve_encoding(
            rank_flags.bits, rank_flags.amplitude, rank_flags.overlap, 0.0);
        const similarity::RankStrategy strategy =
            rank_stochastic
                ? similarity::RankStrategy{similarity::Stochastic{
                      rank_max_runs > 0 ? rank_max_runs
                                        : 50L * static_cast<long>(db.entries.size()) *
                                              static_cast<long>(db.entries.size()),
                      rank_flags.seed}}
                : similarity::RankStrategy{similarity::Exhaustive{}};
        const similarity::RankingResult result =
            similarity::rank_database(db, reference, params, strategy);
        std::string csv = io::reports_to_csv(result.reports);
        if (!result.complete) csv += "# partial: not every index was observed\n";
        if (rank_flags.out.empty())
            std::cout << csv;
        else
            io::write_text_file(rank_flags.out, csv);
    });

    // ---- iqa ----
    auto* iqa_cmd = app.add_subcommand("iqa", "Layered-noise quality table (cosine and MSE)");
    CommonFlags iqa_flags;
    iqa_cmd->add_option("--config", iqa_flags.config_path, "JSON experiment config");
    iqa_cmd->add_option("--reference", iqa_flags.reference, "reference PGM");
    iqa_cmd->add_option("--layers", iqa_flags.layers, "noise layers");
    iqa_cmd->add_option("--sigma", iqa_flags.sigma, "noise standard deviation");
    iqa_cmd->add_option("--seed", iqa_flags.seed, "noise seed");
    iqa_cmd->add_option("--bits", iqa_flags.bits, "bits per pixel");
    iqa_cmd->add_option("--amplitude", iqa_flags.amplitude, "per-mode amplitude");
    iqa_cmd->add_option("--out", iqa_flags.out, "CSV output");
    iqa_cmd->callback([&] {
        const ExperimentConfig cfg = build_config(iqa_flags, *iqa_cmd);
        const auto rows = experiments::iqa_table(cfg);
        if (cfg.output_path.empty()) std::cout << io::reports_to_csv(rows);
    });

    // ---- sweep ----
    auto* sweep_cmd = app.add_subcommand("sweep", "Cosine vs noise level, seed-averaged");
    CommonFlags sweep_flags;
    experiments::SweepSpec sweep_spec;
    sweep_cmd->add_option("--config", sweep_flags.config_path, "JSON experiment config");
    sweep_cmd->add_option("--reference", sweep_flags.reference, "reference PGM");
    sweep_cmd->add_option("--sigma-min", sweep_spec.sigma_min, "smallest sigma");
    sweep_cmd->add_option("--sigma-max", sweep_spec.sigma_max, "largest sigma");
    sweep_cmd->add_option("--steps", sweep_spec.steps, "grid points");
    sweep_cmd->add_option("--seeds-per-point", sweep_spec.seeds_per_point, "noise seeds per point");
    sweep_cmd->add_option("--seed", sweep_flags.seed, "master seed");
    sweep_cmd->add_option("--out", sweep_flags.out, "CSV output");
    sweep_cmd->callback([&] {
        ExperimentConfig cfg = build_config(sweep_flags, *sweep_cmd);
        if (!cfg.sweep) cfg.sweep = sweep_spec;
        if (sweep_cmd->count("--sigma-min")) cfg.sweep->sigma_min = sweep_spec.sigma_min;
        if (sweep_cmd->count("--sigma-max")) cfg.sweep->sigma_max = sweep_spec.sigma_max;
        if (sweep_cmd->count("--steps")) cfg.sweep->steps = sweep_spec.steps;
        if (sweep_cmd->count("--seeds-per-point"))
            cfg.sweep->seeds_per_point = sweep_spec.seeds_per_point;
        experiments::sensitivity_sweep(cfg);
    });

    // ---- perturb ----
    auto* pert_cmd = app.add_subcommand("perturb", "Micro-perturbation ranking sensitivity");
    CommonFlags pert_flags;
    experiments::PerturbationSpec pert_spec;
    pert_cmd->add_option("--config", pert_flags.config_path, "JSON experiment config");
    pert_cmd->add_option("--reference", pert_flags.reference, "reference PGM");
    pert_cmd->add_option("--sigma0", pert_spec.sigma0, "base noise level");
    pert_cmd->add_option("--delta", pert_spec.delta_sigma, "sigma increment");
    pert_cmd->add_option("--count", pert_spec.count, "number of increments");
    pert_cmd->add_option("--seed", pert_flags.seed, "noise-field seed");
    pert_cmd->add_option("--out", pert_flags.out, "CSV output");
    pert_cmd->callback([&] {
        ExperimentConfig cfg = build_config(pert_flags, *pert_cmd);
        if (!cfg.perturbation) cfg.perturbation = pert_spec;
        if (pert_cmd->count("--sigma0")) cfg.perturbation->sigma0 = pert_spec.sigma0;
        if (pert_cmd->count("--delta")) cfg.perturbation->delta_sigma = pert_spec.delta_sigma;
        if (pert_cmd->count("--count")) cfg.perturbation->count = pert_spec.count;
        const auto result = experiments::perturbation_ranking(cfg);
        std::cout << "rank_matches_sigma_order="
                  << (result.rank_matches_sigma_order ? "true" : "false") << "\n";
        if (!result.rank_matches_sigma_order) {
            const auto reference =
                codec::min_max_normalize(io::read_pgm(cfg.reference_path));
            const double smallest = experiments::smallest_strict_delta(
                reference, cfg.perturbation->sigma0, cfg.perturbation->count, cfg.noise.seed);
            std::cout << "resolution exceeded; smallest strict delta="
                      << io::format_double(smallest) << "\n";
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return 0;
}

} // namespace

int run(int argc, const char* const* argv) {
    try {
        return run_checked(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace qim::cli
