#include "qimsim/io.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qim::io {

namespace {

using nlohmann::json;

[[noreturn]] void io_fail(const std::string& path, const std::string& why) {
    throw std::runtime_error("io: " + path + ": " + why);
}

// Skips whitespace and '#' comment lines between PGM header tokens.
int next_header_int(std::istream& in, const std::string& path) {
    for (;;) {
        const int c = in.peek();
        if (c == EOF) io_fail(path, "truncated PGM header");
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        break;
    }
    int value = 0;
    if (!(in >> value)) io_fail(path, "malformed PGM header");
    return value;
}

int bits_for_maxval(int maxval, const std::string& path) {
    for (int bits = 1; bits <= 16; ++bits)
        if (maxval == (1 << bits) - 1) return bits;
    // Non 2^j-1 maxval: promote to the next full bit depth.
    for (int bits = 1; bits <= 16; ++bits)
        if (maxval < (1 << bits)) return bits;
    io_fail(path, "maxval out of range");
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

codec::GrayImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_fail(path, "cannot open for reading");

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5'))
        io_fail(path, "not a P2/P5 PGM file");
    const bool binary = magic[1] == '5';

    const int width = next_header_int(in, path);
    const int height = next_header_int(in, path);
    const int maxval = next_header_int(in, path);
    if (width < 1 || height < 1 || maxval < 1 || maxval > 65535)
        io_fail(path, "bad PGM dimensions or maxval");

    codec::GrayImage img;
    img.width = width;
    img.height = height;
    img.bits = bits_for_maxval(maxval, path);
    const std::size_t n = static_cast<std::size_t>(width) * height;
    img.pixels.resize(n);

    if (binary) {
        in.get(); // single whitespace after maxval
        if (maxval > 255) {
            std::vector<unsigned char> raw(n * 2);
            in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
            if (!in) io_fail(path, "truncated P5 payload");
            for (std::size_t i = 0; i < n; ++i)
                img.pixels[i] = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
        } else {
            std::vector<unsigned char> raw(n);
            in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
            if (!in) io_fail(path, "truncated P5 payload");
            for (std::size_t i = 0; i < n; ++i) img.pixels[i] = raw[i];
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            int v = 0;
            if (!(in >> v)) io_fail(path, "truncated P2 payload");
            img.pixels[i] = static_cast<std::uint16_t>(v);
        }
    }
    for (std::uint16_t p : img.pixels)
        if (p > maxval) io_fail(path, "pixel exceeds maxval");
    codec::validate(img);
    return img;
}

void write_pgm(const std::string& path, const codec::GrayImage& img, bool binary) {
    codec::validate(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) io_fail(path, "cannot open for writing");
    const int maxval = (1 << img.bits) - 1;
    out << (binary ? "P5" : "P2") << "\n"
        << img.width << " " << img.height << "\n"
        << maxval << "\n";
    if (binary) {
        if (maxval > 255) {
            for (std::uint16_t p : img.pixels) {
                out.put(static_cast<char>(p >> 8));
                out.put(static_cast<char>(p & 0xff));
            }
        } else {
            for (std::uint16_t p : img.pixels) out.put(static_cast<char>(p));
        }
    } else {
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                out << img.pixels[static_cast<std::size_t>(y) * img.width + x];
                out << (x + 1 == img.width ? '\n' : ' ');
            }
        }
    }
    if (!out) io_fail(path, "write failed");
}

std::string to_json(const codec::PhaseImage& img) {
    json j;
    j["width"] = img.width;
    j["height"] = img.height;
    j["thetas"] = img.thetas;
    return j.dump();
}

codec::PhaseImage phase_image_from_json(const std::string& text) {
    const json j = json::parse(text);
    codec::PhaseImage img;
    img.width = j.at("width").get<int>();
    img.height = j.at("height").get<int>();
    img.thetas = j.at("thetas").get<std::vector<double>>();
    codec::validate(img);
    return img;
}

std::string to_json(const network::NetworkPlan& plan) {
    json layers = json::array();
    for (const auto& layer : plan.layers) {
        json jl = json::array();
        for (const auto& gate : layer) {
            if (const auto* bs = std::get_if<optics::BeamSplitter>(&gate))
                jl.push_back({{"type", "bs"}, {"p", bs->p}, {"q", bs->q}, {"gamma", bs->gamma}});
            else {
                const auto& ps = std::get<optics::PhaseShifter>(gate);
                jl.push_back({{"type", "ps"}, {"k", ps.mode}, {"theta", ps.theta}});
            }
        }
        layers.push_back(std::move(jl));
    }
    json j;
    j["mode_count"] = plan.mode_count;
    j["kind"] = plan.kind == network::PlanKind::BalancedTree ? "BalancedTree" : "GammaChain";
    j["layers"] = std::move(layers);
    return j.dump();
}

network::NetworkPlan plan_from_json(const std::string& text) {
    const json j = json::parse(text);
    network::NetworkPlan plan;
    plan.mode_count = j.at("mode_count").get<int>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "BalancedTree")
        plan.kind = network::PlanKind::BalancedTree;
    else if (kind == "GammaChain")
        plan.kind = network::PlanKind::GammaChain;
    else
        throw std::runtime_error("io: unknown plan kind '" + kind + "'");
    for (const json& jl : j.at("layers")) {
        std::vector<optics::GateElement> layer;
        for (const json& jg : jl) {
            const std::string type = jg.at("type").get<std::string>();
            if (type == "bs")
                layer.push_back(optics::make_beam_splitter(jg.at("p").get<int>(),
                                                           jg.at("q").get<int>(),
                                                           jg.at("gamma").get<double>()));
            else if (type == "ps")
                layer.push_back(optics::make_phase_shifter(jg.at("k").get<int>(),
                                                           jg.at("theta").get<double>()));
            else
                throw std::runtime_error("io: unknown gate type '" + type + "'");
        }
        plan.layers.push_back(std::move(layer));
    }
    network::validate_plan(plan);
    return plan;
}

std::string to_json(const optics::ModeUnitary& u) {
    json entries = json::array();
    for (const optics::cplx& e : u.entries()) entries.push_back({e.real(), e.imag()});
    json j;
    j["dim"] = u.dim();
    j["entries"] = std::move(entries);
    return j.dump();
}

optics::ModeUnitary unitary_from_json(const std::string& text) {
    const json j = json::parse(text);
    const int dim = j.at("dim").get<int>();
    std::vector<optics::cplx> entries;
    for (const json& e : j.at("entries"))
        entries.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    return {dim, std::move(entries)};
}

std::string to_json(const std::vector<similarity::SimilarityReport>& reports) {
    json rows = json::array();
    for (const auto& r : reports) {
        rows.push_back({{"pair", r.reference_label + "-" + r.candidate_label},
                        {"cosine", r.cosine},
                        {"mse", r.mse},
                        {"measured_total_n", r.measured_total_n},
                        {"runs_used", r.runs_used}});
    }
    return rows.dump();
}

std::string reports_to_csv(const std::vector<similarity::SimilarityReport>& reports) {
    std::ostringstream out;
    out << "pair,cosine,mse\n";
    for (const auto& r : reports)
        out << r.reference_label << "-" << r.candidate_label << ","
            << format_double(r.cosine) << "," << format_double(r.mse) << "\n";
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_fail(path, "cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) io_fail(path, "cannot open for writing");
    out << content;
    if (!out) io_fail(path, "write failed");
}

} // namespace qim::io
