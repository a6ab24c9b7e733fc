#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "eprsim/fock.hpp"

namespace eprsim {

// Polarizing beam splitter: H stays in its spatial mode, V swaps between the
// two modes. Reflection carries no phase.
struct Pbs {
    int mode_a = 0;
    int mode_b = 0;
};

// Polarization rotator: H -> cos(t)H + sin(t)V, V -> sin(t)H - cos(t)V.
// At t = pi/4 this is the 45-degree rotator; at t = pi/2 it swaps H and V.
struct Rotator {
    int mode = 0;
    double angle = 0.0;
};

// Absorbs every V photon of the mode (a loss channel, not a projector).
struct PolarizerH {
    int mode = 0;
};

// Photon loss on both polarizations of a mode: beam-splitter coupling of
// transmissivity t to an environment that is then traced out.
struct Loss {
    int mode = 0;
    double transmissivity = 1.0;
};

using Element = std::variant<Pbs, Rotator, PolarizerH, Loss>;

struct DetectorModel {
    double efficiency = 1.0;
    bool number_resolving = false;
};

struct ClickOutcome {
    bool clicked = false;
    std::optional<int> count;  // present iff the detector resolves photon number
};

struct DetectionBranch {
    ClickOutcome outcome;
    double probability = 0.0;
    Ensemble state;
};

Ensemble apply_element(const Ensemble& ens, const Element& elem);

/// Loss of transmissivity t applied jointly to the listed channels (the Kraus
/// branching shared by Loss, PolarizerH and detector inefficiency).
Ensemble apply_channel_loss(const Ensemble& ens, std::span<const Channel> channels, double t);

/// Applies detector-efficiency loss to the mode, then partitions by the photon
/// number found there. The detected mode is removed from surviving states and
/// outcome probabilities sum to 1. Zero-probability outcomes are omitted.
std::vector<DetectionBranch> detect(const Ensemble& ens, int mode, const DetectorModel& det);

/// Same, but one detector covering several modes jointly (counts pooled).
std::vector<DetectionBranch> detect_joint(const Ensemble& ens, std::span<const int> modes,
                                          const DetectorModel& det);

}  // namespace eprsim
