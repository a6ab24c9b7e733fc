#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eprsim/elements.hpp"
#include "eprsim/sources.hpp"

namespace eprsim {

/*
 * Three pair sources feed modes (1,2), (3,4), (5,6); the odd modes are kept
 * and the even modes run through the element list and are then detected.
 */
struct GhzCircuitLayout {
    std::vector<Element> elements;
    std::array<int, 3> detector_modes{2, 4, 6};
    std::array<int, 3> output_modes{1, 3, 5};
    std::array<std::pair<int, int>, 3> source_modes{{{1, 2}, {3, 4}, {5, 6}}};
};

/// The certified wiring: PBS(4,6), then PBS(2,4), then a 45-degree rotator,
/// an H polarizer and a detector on each of modes 2, 4, 6. With this order a
/// V photon entering mode 2 leaves at 4, mode 4 at 6, and mode 6 at 2.
GhzCircuitLayout canonical_layout();

struct ClickPattern {
    std::array<bool, 3> clicked{false, false, false};
    std::optional<std::array<int, 3>> counts;  // per detector, when number resolving
};

struct ConditionalResult {
    double probability = 0.0;
    Ensemble state;  // on the output modes; empty when probability is 0
    ClickPattern pattern;
};

/// Runs the full pipeline and conditions on every detector firing (count
/// exactly 1 for number-resolving detectors). Deterministic enumeration of
/// the complete outcome tree; no sampling.
ConditionalResult run_ghz_circuit(const std::array<SourceSpec, 3>& specs,
                                  const DetectorModel& det,
                                  const GhzCircuitLayout& layout = canonical_layout());

struct OutputReport {
    double probability = 0.0;
    double ghz_fidelity = 0.0;
    // Weight of the coherent |H..H><V..V| component, 2*|<H..H|rho|V..V>|.
    double ghz_coherent_weight = 0.0;
    std::map<std::string, double> diagonal_weights;  // ket label -> diag(rho)
    std::map<std::string, double> class_weights;     // per-mode counts, sorted desc
    double fitted_f = 0.0;
    double fit_residual = 0.0;
};

/// Structural decomposition of a conditional output state.
/// Throws ZeroProbabilityError when the result carries no state.
OutputReport analyze_output(const ConditionalResult& result,
                            const GhzCircuitLayout& layout = canonical_layout());

}  // namespace eprsim
