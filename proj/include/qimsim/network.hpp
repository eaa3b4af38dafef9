#pragma once

#include "qimsim/optics.hpp"

#include <vector>

// Chopping networks: split one coherent state into T equal-amplitude daughter
// modes with T-1 beam splitters. Two layouts are provided, a balanced-splitter
// binary tree for T = 2^n (depth log2 T) and a tap-off chain with tuned
// transmission angles for arbitrary T.

namespace qim::network {

using optics::CoherentField;
using optics::cplx;
using optics::GateElement;
using optics::ModeUnitary;

enum class PlanKind { BalancedTree, GammaChain };

// Plans are data: an ordered list of layers, each a set of gates on disjoint
// modes. They can be serialized, inspected and replayed; nothing is cached.
struct NetworkPlan {
    int mode_count = 0;
    PlanKind kind = PlanKind::BalancedTree;
    std::vector<std::vector<GateElement>> layers;
};

// Validates layer disjointness, index ranges and the T-1 splitter count;
// throws std::invalid_argument on violation.
void validate_plan(const NetworkPlan& plan);

int beam_splitter_count(const NetworkPlan& plan);

// Binary tree of balanced splitters; layer l pairs mode m with m + 2^(l-1).
// T must be a power of two (>= 2); other T belong to build_gamma_chain.
NetworkPlan build_balanced_tree(int T);

// Chain of T-1 splitters, splitter i on modes (i, i+1) with
// cos(gamma_i) = 1/sqrt(T-i+1): mode i keeps the alpha/sqrt(T) daughter and
// the remainder rides mode i+1 into the next splitter. Every daughter comes
// out with a +1 sign, so no trailing phase correction is needed.
NetworkPlan build_gamma_chain(int T);

// Product of the embedded per-layer matrices, later layers on the left, so
// the result is the forward scattering matrix of the whole network. Dense
// T x T; intended for desk-scale T.
ModeUnitary effective_unitary(const NetworkPlan& plan);

// Splits |alpha> on mode 1 (vacuum elsewhere) into T daughters by evolving
// the amplitudes forward gate-by-gate; equal to the direct mat-vec of
// effective_unitary(plan) against (alpha, 0, ..., 0). For the structured
// plans above and T > kClosedFormThreshold the known uniform result
// alpha/sqrt(T) is emitted without touching the gates.
CoherentField chop(cplx alpha, const NetworkPlan& plan);

inline constexpr int kClosedFormThreshold = 1024;

} // namespace qim::network
