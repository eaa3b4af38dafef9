#include "qimsim/network.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>

namespace qim::network {

namespace {

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

void note_mode(std::set<int>& used, int mode, int T) {
    if (mode < 1 || mode > T)
        throw std::invalid_argument("NetworkPlan: mode index " + std::to_string(mode) +
                                    " outside [1, " + std::to_string(T) + "]");
    if (!used.insert(mode).second)
        throw std::invalid_argument("NetworkPlan: mode " + std::to_string(mode) +
                                    " used twice within a layer");
}

// Forward amplitude action of one gate on the mode vector (0-based storage).
void apply_gate(std::vector<cplx>& x, const GateElement& gate) {
    if (const auto* bs = std::get_if<optics::BeamSplitter>(&gate)) {
        const double c = std::cos(bs->gamma);
        const double s = std::sin(bs->gamma);
        const cplx xp = x[static_cast<std::size_t>(bs->p - 1)];
        const cplx xq = x[static_cast<std::size_t>(bs->q - 1)];
        x[static_cast<std::size_t>(bs->p - 1)] = c * xp + s * xq;
        x[static_cast<std::size_t>(bs->q - 1)] = s * xp - c * xq;
    } else {
        const auto& ps = std::get<optics::PhaseShifter>(gate);
        x[static_cast<std::size_t>(ps.mode - 1)] *= std::polar(1.0, ps.theta);
    }
}

ModeUnitary gate_matrix(const GateElement& gate, int T) {
    if (const auto* bs = std::get_if<optics::BeamSplitter>(&gate))
        return optics::embed_two_mode(T, bs->p, bs->q, optics::bs_matrix(bs->gamma));
    const auto& ps = std::get<optics::PhaseShifter>(gate);
    std::vector<cplx> m(static_cast<std::size_t>(T) * T, cplx{0.0, 0.0});
    for (int i = 0; i < T; ++i) m[static_cast<std::size_t>(i) * T + i] = 1.0;
    m[static_cast<std::size_t>(ps.mode - 1) * T + (ps.mode - 1)] = std::polar(1.0, ps.theta);
    return ModeUnitary(T, std::move(m));
}

} // namespace

void validate_plan(const NetworkPlan& plan) {
    if (plan.mode_count < 2)
        throw std::invalid_argument("NetworkPlan: mode_count must be >= 2");
    int splitters = 0;
    for (const auto& layer : plan.layers) {
        std::set<int> used;
        for (const GateElement& gate : layer) {
            if (const auto* bs = std::get_if<optics::BeamSplitter>(&gate)) {
                note_mode(used, bs->p, plan.mode_count);
                note_mode(used, bs->q, plan.mode_count);
                ++splitters;
            } else {
                note_mode(used, std::get<optics::PhaseShifter>(gate).mode, plan.mode_count);
            }
        }
    }
    if (splitters != plan.mode_count - 1)
        throw std::invalid_argument("NetworkPlan: expected " + std::to_string(plan.mode_count - 1) +
                                    " beam splitters, found " + std::to_string(splitters));
}

int beam_splitter_count(const NetworkPlan& plan) {
    int n = 0;
    for (const auto& layer : plan.layers)
        for (const GateElement& gate : layer)
            if (std::holds_alternative<optics::BeamSplitter>(gate)) ++n;
    return n;
}

NetworkPlan build_balanced_tree(int T) {
    if (!is_power_of_two(T) || T < 2)
        throw std::invalid_argument(
            "build_balanced_tree: T must be a power of two >= 2; use build_gamma_chain for other T");
    NetworkPlan plan;
    plan.mode_count = T;
    plan.kind = PlanKind::BalancedTree;
    const double balanced = std::atan(1.0); // pi/4
    for (int stride = 1; stride < T; stride *= 2) {
        std::vector<GateElement> layer;
        layer.reserve(static_cast<std::size_t>(stride));
        for (int m = 1; m <= stride; ++m)
            layer.push_back(optics::make_beam_splitter(m, m + stride, balanced));
        plan.layers.push_back(std::move(layer));
    }
    validate_plan(plan);
    return plan;
}

NetworkPlan build_gamma_chain(int T) {
    if (T < 2) throw std::invalid_argument("build_gamma_chain: T must be >= 2");
    NetworkPlan plan;
    plan.mode_count = T;
    plan.kind = PlanKind::GammaChain;
    // The -cos(gamma) reflection entry only ever multiplies vacuum here, so
    // every daughter comes out +alpha/sqrt(T) and no phase fixups are needed.
    for (int i = 1; i <= T - 1; ++i) {
        const double gamma = std::acos(1.0 / std::sqrt(static_cast<double>(T - i + 1)));
        plan.layers.push_back({optics::make_beam_splitter(i, i + 1, gamma)});
    }
    validate_plan(plan);
    return plan;
}

ModeUnitary effective_unitary(const NetworkPlan& plan) {
    validate_plan(plan);
    ModeUnitary u = ModeUnitary::identity(plan.mode_count);
    for (const auto& layer : plan.layers)
        for (const GateElement& gate : layer)
            u = optics::compose(gate_matrix(gate, plan.mode_count), u);
    return u;
}

CoherentField chop(cplx alpha, const NetworkPlan& plan) {
    validate_plan(plan);
    const int T = plan.mode_count;
    if (T > kClosedFormThreshold) {
        // Both structured plan kinds chop to exactly +alpha/sqrt(T).
        const cplx daughter = alpha / std::sqrt(static_cast<double>(T));
        return CoherentField(std::vector<cplx>(static_cast<std::size_t>(T), daughter));
    }
    std::vector<cplx> x(static_cast<std::size_t>(T), cplx{0.0, 0.0});
    x[0] = alpha;
    for (const auto& layer : plan.layers)
        for (const GateElement& gate : layer)
            apply_gate(x, gate);
    return CoherentField(std::move(x));
}

} // namespace qim::network
