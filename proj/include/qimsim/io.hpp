#pragma once

#include "qimsim/network.hpp"
#include "qimsim/similarity.hpp"

#include <string>
#include <vector>

// File formats: PGM (P2/P5, maxval up to 65535) for images, JSON for phase
// images / plans / unitaries, CSV for report tables. All floating-point text
// uses 15 significant digits so outputs are byte-reproducible.

namespace qim::io {

std::string format_double(double v); // %.15g

codec::GrayImage read_pgm(const std::string& path);
void write_pgm(const std::string& path, const codec::GrayImage& img, bool binary = true);

std::string to_json(const codec::PhaseImage& img);
codec::PhaseImage phase_image_from_json(const std::string& text);

std::string to_json(const network::NetworkPlan& plan);
network::NetworkPlan plan_from_json(const std::string& text);

std::string to_json(const optics::ModeUnitary& u);
optics::ModeUnitary unitary_from_json(const std::string& text);

std::string to_json(const std::vector<similarity::SimilarityReport>& reports);

// Fixed column order: pair, cosine, mse.
std::string reports_to_csv(const std::vector<similarity::SimilarityReport>& reports);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace qim::io
