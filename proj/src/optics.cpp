#include "qimsim/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qim::optics {

namespace {

void check_finite(const std::vector<cplx>& amps) {
    for (const cplx& a : amps) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw std::invalid_argument("CoherentField: amplitudes must be finite");
    }
}

} // namespace

CoherentField::CoherentField(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.empty()) throw std::invalid_argument("CoherentField: need at least one mode");
    check_finite(amps_);
}

CoherentField CoherentField::vacuum(int mode_count) {
    if (mode_count < 1) throw std::invalid_argument("CoherentField: mode_count must be positive");
    return CoherentField(std::vector<cplx>(static_cast<std::size_t>(mode_count), cplx{0.0, 0.0}));
}

cplx CoherentField::amplitude(int k) const {
    if (k < 1 || k > mode_count())
        throw std::invalid_argument("CoherentField: mode index " + std::to_string(k) + " out of range");
    return amps_[static_cast<std::size_t>(k - 1)];
}

double CoherentField::total_photon_number() const {
    double n = 0.0;
    for (const cplx& a : amps_) n += std::norm(a);
    return n;
}

ModeUnitary::ModeUnitary(int dim, std::vector<cplx> row_major_entries)
    : dim_(dim), m_(std::move(row_major_entries)) {
    if (dim_ < 1) throw std::invalid_argument("ModeUnitary: dim must be positive");
    if (m_.size() != static_cast<std::size_t>(dim_) * dim_)
        throw std::invalid_argument("ModeUnitary: entry count does not match dim");
    // verify U†U == I entrywise
    double worst = 0.0;
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
            cplx s{0.0, 0.0};
            for (int k = 0; k < dim_; ++k)
                s += std::conj((*this)(k, i)) * (*this)(k, j);
            if (i == j) s -= 1.0;
            worst = std::max(worst, std::abs(s));
        }
    }
    if (!(worst <= kUnitarityTol))
        throw std::invalid_argument("ModeUnitary: matrix is not unitary (max deviation " +
                                    std::to_string(worst) + ")");
}

ModeUnitary ModeUnitary::identity(int dim) {
    if (dim < 1) throw std::invalid_argument("ModeUnitary: dim must be positive");
    std::vector<cplx> m(static_cast<std::size_t>(dim) * dim, cplx{0.0, 0.0});
    for (int i = 0; i < dim; ++i) m[static_cast<std::size_t>(i) * dim + i] = 1.0;
    return ModeUnitary(dim, std::move(m));
}

ModeUnitary ModeUnitary::adjoint() const {
    std::vector<cplx> m(m_.size());
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            m[static_cast<std::size_t>(j) * dim_ + i] = std::conj((*this)(i, j));
    return ModeUnitary(dim_, std::move(m));
}

GateElement make_beam_splitter(int p, int q, double gamma) {
    if (p == q) throw std::invalid_argument("BeamSplitter: p and q must differ");
    if (p < 1 || q < 1) throw std::invalid_argument("BeamSplitter: mode indices are 1-based");
    if (!(gamma >= 0.0 && gamma <= std::numbers::pi / 2))
        throw std::invalid_argument("BeamSplitter: gamma must lie in [0, pi/2]");
    return BeamSplitter{p, q, gamma};
}

GateElement make_phase_shifter(int mode, double theta) {
    if (mode < 1) throw std::invalid_argument("PhaseShifter: mode index is 1-based");
    if (!(theta >= 0.0 && theta < 2.0 * std::numbers::pi))
        throw std::invalid_argument("PhaseShifter: theta must lie in [0, 2*pi)");
    return PhaseShifter{mode, theta};
}

ModeUnitary bs_matrix(double gamma) {
    if (!(gamma >= 0.0 && gamma <= std::numbers::pi / 2))
        throw std::invalid_argument("bs_matrix: gamma must lie in [0, pi/2]");
    const double c = std::cos(gamma);
    const double s = std::sin(gamma);
    return ModeUnitary(2, {cplx{c, 0.0}, cplx{s, 0.0}, cplx{s, 0.0}, cplx{-c, 0.0}});
}

ModeUnitary embed_two_mode(int T, int p, int q, const ModeUnitary& g) {
    if (g.dim() != 2) throw std::invalid_argument("embed_two_mode: gate must be 2x2");
    if (!(1 <= p && p < q && q <= T))
        throw std::invalid_argument("embed_two_mode: need 1 <= p < q <= T");
    std::vector<cplx> m(static_cast<std::size_t>(T) * T, cplx{0.0, 0.0});
    for (int i = 0; i < T; ++i) m[static_cast<std::size_t>(i) * T + i] = 1.0;
    const std::size_t pi_ = static_cast<std::size_t>(p - 1);
    const std::size_t qi = static_cast<std::size_t>(q - 1);
    m[pi_ * T + pi_] = g(0, 0);
    m[pi_ * T + qi] = g(0, 1);
    m[qi * T + pi_] = g(1, 0);
    m[qi * T + qi] = g(1, 1);
    return ModeUnitary(T, std::move(m));
}

ModeUnitary compose(const ModeUnitary& a, const ModeUnitary& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("compose: dimension mismatch");
    const int n = a.dim();
    std::vector<cplx> m(static_cast<std::size_t>(n) * n, cplx{0.0, 0.0});
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{0.0, 0.0}) continue;
            for (int j = 0; j < n; ++j)
                m[static_cast<std::size_t>(i) * n + j] += aik * b(k, j);
        }
    }
    return ModeUnitary(n, std::move(m));
}

CoherentField apply_unitary(const CoherentField& field, const ModeUnitary& u) {
    if (field.mode_count() != u.dim())
        throw std::invalid_argument("apply_unitary: field/unitary dimension mismatch");
    const int n = u.dim();
    const std::vector<cplx>& in = field.amplitudes();
    std::vector<cplx> out(static_cast<std::size_t>(n), cplx{0.0, 0.0});
    for (int j = 0; j < n; ++j) {
        const cplx aj = in[static_cast<std::size_t>(j)];
        if (aj == cplx{0.0, 0.0}) continue;
        for (int k = 0; k < n; ++k)
            out[static_cast<std::size_t>(k)] += std::conj(u(j, k)) * aj;
    }
    return CoherentField(std::move(out));
}

double overlap(cplx a, cplx b) {
    return std::exp(-std::norm(a - b));
}

double expected_photon_number(const CoherentField& field, int k) {
    return std::norm(field.amplitude(k));
}

} // namespace qim::optics
