#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "eprsim/elements.hpp"

namespace eprsim {

// GHZ state in which each photon has independently been lost with
// probability f, the survivors decohering into H..H / V..V mixtures.
struct IdGhzSpec {
    int n = 1;
    double f = 0.0;
    std::vector<int> mode_labels;  // defaults to 1..n when empty
};

Ensemble id_ghz(const IdGhzSpec& spec);
Ensemble id_ghz(int n, double f);

struct FitResult {
    double f_hat = 0.0;
    double residual = 0.0;
};

/// Loss rate estimated from the photon-number marginal, f = 1 - <N>/n
/// (clamped to [0,1]), plus the trace distance to the matching ID state.
FitResult fit_id_ghz(const Ensemble& ens, int n);

enum class FusionLabel { Success, Failure, LossDetected };

struct FusionOutcome {
    FusionLabel label = FusionLabel::LossDetected;
    // Click flags for the four ports (a:H, a:V, b:H, b:V).
    std::array<bool, 4> port_clicks{false, false, false, false};
    std::optional<std::array<int, 4>> port_counts;
    double probability = 0.0;
    Ensemble state;
    bool herald_flip_applied = false;
};

/*
 * Type-II fusion: 45-degree rotators on both fused modes, a PBS between
 * them, 45-degree rotators again, then each output port is split by
 * polarization onto two detectors. Success is one click on each side; the
 * two measured photons are consumed. On the mixed-polarization success
 * heralds a polarization flip is applied to the second input's surviving
 * modes so the fused GHZ comes out in the standard (HH..+VV..) form.
 *
 * With bucket detectors a single click cannot be told apart from photon
 * loss; such patterns are labeled Failure when any click fired and
 * LossDetected when none did. Number-resolving detectors label patterns
 * with fewer than two detected photons LossDetected.
 */
std::vector<FusionOutcome> fuse_type_ii(const Ensemble& a, const Ensemble& b, int qubit_a,
                                        int qubit_b, const DetectorModel& det);

/// Same gate on an already-joined ensemble; herald_flip_modes lists the
/// modes to flip on the mixed success heralds.
std::vector<FusionOutcome> fuse_type_ii_joint(const Ensemble& joint, int qubit_a, int qubit_b,
                                              const DetectorModel& det,
                                              std::span<const int> herald_flip_modes);

int qubit_count_after_fusion(int n_a, int n_b);

double success_probability(const std::vector<FusionOutcome>& outcomes);

/// Mixture of all Success outcomes, renormalized.
Ensemble success_conditioned(const std::vector<FusionOutcome>& outcomes);

}  // namespace eprsim
