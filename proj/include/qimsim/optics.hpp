#pragma once

#include <complex>
#include <variant>
#include <vector>

// Exact classical representation of multimode coherent states: a state is
// fully described by one complex amplitude per optical mode, and a lossless
// linear network acts on those amplitudes through a verified unitary matrix.

namespace qim::optics {

using cplx = std::complex<double>;

// Ordered complex amplitudes, one per optical mode. Immutable by convention:
// every operation returns a new field.
class CoherentField {
  public:
    explicit CoherentField(std::vector<cplx> amplitudes);
    static CoherentField vacuum(int mode_count);

    int mode_count() const { return static_cast<int>(amps_.size()); }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    cplx amplitude(int k) const; // 1-based mode index
    double total_photon_number() const; // sum of |alpha_k|^2

  private:
    std::vector<cplx> amps_;
};

// Dense row-major T x T complex matrix, unitarity verified at construction
// (max-norm of U†U - I must be <= kUnitarityTol).
class ModeUnitary {
  public:
    static constexpr double kUnitarityTol = 1e-12;

    ModeUnitary(int dim, std::vector<cplx> row_major_entries);
    static ModeUnitary identity(int dim);

    int dim() const { return dim_; }
    const cplx& operator()(int i, int j) const { return m_[static_cast<std::size_t>(i) * dim_ + j]; } // 0-based
    const std::vector<cplx>& entries() const { return m_; }
    ModeUnitary adjoint() const;

  private:
    int dim_;
    std::vector<cplx> m_;
};

// Network elements. Mode indices are 1-based, matching the usual subscript
// convention for optical modes.
struct BeamSplitter {
    int p;
    int q;
    double gamma; // transmission angle, in [0, pi/2]
};

struct PhaseShifter {
    int mode;
    double theta; // in [0, 2*pi)
};

using GateElement = std::variant<BeamSplitter, PhaseShifter>;

// Validating factories; throw std::invalid_argument on bad parameters.
GateElement make_beam_splitter(int p, int q, double gamma);
GateElement make_phase_shifter(int mode, double theta);

// Two-mode splitter matrix [[cos g, sin g], [sin g, -cos g]]; Hermitian and
// unitary, the balanced case is g = pi/4.
ModeUnitary bs_matrix(double gamma);

// T x T identity with rows/cols (p,q) replaced by the 2x2 gate g (1-based,
// p < q required).
ModeUnitary embed_two_mode(int T, int p, int q, const ModeUnitary& g);

// Matrix product a*b; b is the earlier network stage.
ModeUnitary compose(const ModeUnitary& a, const ModeUnitary& b);

// Amplitude map of the backward mode-operator relation: out_k is
// sum_j conj(u[j][k]) * in_j (the adjoint action). Network plans evolve
// fields forward gate-by-gate instead; see network.hpp for the distinction.
CoherentField apply_unitary(const CoherentField& field, const ModeUnitary& u);

// |<a|b>|^2 = exp(-|a-b|^2) for single-mode coherent states.
double overlap(cplx a, cplx b);

// |alpha_k|^2, the mean photon number of mode k (1-based).
double expected_photon_number(const CoherentField& field, int k);

} // namespace qim::optics
