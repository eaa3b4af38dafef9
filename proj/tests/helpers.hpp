#pragma once

#include "qimsim/network.hpp"
#include "qimsim/optics.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

// Shared test utilities. The matrix helpers here are deliberately naive
// (triple loops, explicit double sums) so they stay independent oracles for
// the library code they check.

namespace testutil {

using qim::optics::CoherentField;
using qim::optics::cplx;
using qim::optics::ModeUnitary;

inline double max_entry_diff(const ModeUnitary& a, const ModeUnitary& b) {
    double worst = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

// Naive O(n^3) multiply, independent of qim::optics::compose.
inline std::vector<cplx> naive_matmul(const ModeUnitary& a, const ModeUnitary& b) {
    const int n = a.dim();
    std::vector<cplx> m(static_cast<std::size_t>(n) * n, cplx{0.0, 0.0});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx s{0.0, 0.0};
            for (int k = 0; k < n; ++k) s += a(i, k) * b(k, j);
            m[static_cast<std::size_t>(i) * n + j] = s;
        }
    return m;
}

// Literal double-sum of the backward amplitude relation:
// out_k = sum_j conj(u[j][k]) in_j.
inline std::vector<cplx> adjoint_action_oracle(const std::vector<cplx>& in, const ModeUnitary& u) {
    const int n = u.dim();
    std::vector<cplx> out(static_cast<std::size_t>(n), cplx{0.0, 0.0});
    for (int k = 0; k < n; ++k) {
        cplx s{0.0, 0.0};
        for (int j = 0; j < n; ++j) s += std::conj(u(j, k)) * in[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(k)] = s;
    }
    return out;
}

// Direct mat-vec out = U * in, the forward scattering action.
inline std::vector<cplx> direct_action_oracle(const std::vector<cplx>& in, const ModeUnitary& u) {
    const int n = u.dim();
    std::vector<cplx> out(static_cast<std::size_t>(n), cplx{0.0, 0.0});
    for (int i = 0; i < n; ++i) {
        cplx s{0.0, 0.0};
        for (int j = 0; j < n; ++j) s += u(i, j) * in[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = s;
    }
    return out;
}

// Random genuinely-complex unitary as a product of random embedded beam
// splitters and phase shifters.
inline ModeUnitary random_unitary(int dim, std::mt19937_64& eng) {
    using namespace qim::optics;
    ModeUnitary u = ModeUnitary::identity(dim);
    const int gates = 4 * dim;
    for (int g = 0; g < gates; ++g) {
        if (dim >= 2 && eng() % 3 != 0) {
            int p = 1 + static_cast<int>(eng() % static_cast<std::uint64_t>(dim));
            int q = 1 + static_cast<int>(eng() % static_cast<std::uint64_t>(dim));
            if (p == q) q = p == dim ? 1 : p + 1;
            if (p > q) std::swap(p, q);
            const double gamma = (static_cast<double>(eng() % 1000) / 1000.0) * std::numbers::pi / 2;
            u = compose(embed_two_mode(dim, p, q, bs_matrix(gamma)), u);
        } else {
            const int k = 1 + static_cast<int>(eng() % static_cast<std::uint64_t>(dim));
            const double theta = (static_cast<double>(eng() % 1000) / 1000.0) * 2 * std::numbers::pi;
            std::vector<cplx> m(static_cast<std::size_t>(dim) * dim, cplx{0.0, 0.0});
            for (int i = 0; i < dim; ++i) m[static_cast<std::size_t>(i) * dim + i] = 1.0;
            m[static_cast<std::size_t>(k - 1) * dim + (k - 1)] = std::polar(1.0, theta);
            u = compose(ModeUnitary(dim, std::move(m)), u);
        }
    }
    return u;
}

inline std::vector<cplx> random_field_amps(int dim, std::mt19937_64& eng) {
    std::vector<cplx> amps(static_cast<std::size_t>(dim));
    for (cplx& a : amps) {
        const double re = (static_cast<double>(eng() % 2001) - 1000.0) / 500.0;
        const double im = (static_cast<double>(eng() % 2001) - 1000.0) / 500.0;
        a = cplx{re, im};
    }
    return amps;
}

} // namespace testutil
