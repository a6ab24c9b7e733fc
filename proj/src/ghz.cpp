#include "eprsim/ghz.hpp"

#include <algorithm>
#include <cmath>

#include "eprsim/fusion.hpp"

namespace eprsim {

GhzCircuitLayout canonical_layout() {
    GhzCircuitLayout layout;
    layout.elements = {Pbs{4, 6}, Pbs{2, 4}, Rotator{2, M_PI_4}, Rotator{4, M_PI_4},
                       Rotator{6, M_PI_4}, PolarizerH{2}, PolarizerH{4}, PolarizerH{6}};
    return layout;
}

namespace {

Element shadow_element(const Element& elem) {
    if (const auto* pbs = std::get_if<Pbs>(&elem))
        return Pbs{shadow_mode(pbs->mode_a), shadow_mode(pbs->mode_b)};
    if (const auto* rot = std::get_if<Rotator>(&elem))
        return Rotator{shadow_mode(rot->mode), rot->angle};
    if (const auto* pol = std::get_if<PolarizerH>(&elem))
        return PolarizerH{shadow_mode(pol->mode)};
    const auto& loss = std::get<Loss>(elem);
    return Loss{shadow_mode(loss.mode), loss.transmissivity};
}

}  // namespace

ConditionalResult run_ghz_circuit(const std::array<SourceSpec, 3>& specs,
                                  const DetectorModel& det, const GhzCircuitLayout& layout) {
    Ensemble joint;
    for (int i = 0; i < 3; ++i) {
        auto [a, b] = layout.source_modes[static_cast<std::size_t>(i)];
        Ensemble src = make_source(specs[static_cast<std::size_t>(i)], a, b);
        // Downstream wiring expects Phi+ pairs; flip the detected-side mode
        // of Psi+ cavity sources once, at the input.
        if (const auto* c = std::get_if<CavityPair>(&specs[static_cast<std::size_t>(i)])) {
            if (c->bell_form == BellForm::PsiPlus) src = convert_bell(src, b);
        }
        joint = (i == 0) ? std::move(src) : tensor(joint, src);
    }

    const bool shadows = has_shadow_modes(joint);
    if (shadows) {
        std::vector<int> extra;
        for (auto [a, b] : layout.source_modes) {
            extra.push_back(shadow_mode(a));
            extra.push_back(shadow_mode(b));
        }
        joint = joint.with_extra_modes(extra);
    }

    for (const Element& elem : layout.elements) {
        joint = apply_element(joint, elem);
        if (shadows) joint = apply_element(joint, shadow_element(elem));
    }

    ConditionalResult result;
    result.pattern.clicked = {true, true, true};
    if (det.number_resolving) result.pattern.counts = {1, 1, 1};
    double probability = 1.0;
    for (int m : layout.detector_modes) {
        std::vector<int> group{m};
        if (shadows) group.push_back(shadow_mode(m));
        bool found = false;
        for (auto& branch : detect_joint(joint, group, det)) {
            const bool wanted = det.number_resolving ? branch.outcome.count == 1
                                                     : branch.outcome.clicked;
            if (wanted) {
                probability *= branch.probability;
                joint = std::move(branch.state);
                found = true;
                break;
            }
        }
        if (!found) {
            std::vector<int> outputs(layout.output_modes.begin(), layout.output_modes.end());
            result.probability = 0.0;
            result.state = Ensemble::empty_state(outputs);
            return result;
        }
    }

    if (shadows) joint = merge_shadow_modes(joint);
    result.probability = probability;
    result.state = joint.merged_duplicates();
    return result;
}

OutputReport analyze_output(const ConditionalResult& result, const GhzCircuitLayout& layout) {
    if (result.probability <= 0.0 || result.state.is_empty())
        throw ZeroProbabilityError("no conditional state to analyze");
    const Ensemble& rho = result.state;
    std::vector<int> outputs(layout.output_modes.begin(), layout.output_modes.end());

    OutputReport report;
    report.probability = result.probability;
    report.ghz_fidelity = fidelity_with_pure(rho, ghz_pure(outputs));

    std::vector<FockBasisState::Entry> all_h, all_v;
    for (int m : outputs) {
        all_h.push_back({{m, Polarization::H}, 1});
        all_v.push_back({{m, Polarization::V}, 1});
    }
    const FockBasisState ket_h{std::move(all_h)}, ket_v{std::move(all_v)};
    Amplitude coherence(0.0, 0.0);
    for (const auto& b : rho.branches())
        coherence += b.weight * b.state.amplitude(ket_h) * std::conj(b.state.amplitude(ket_v));
    report.ghz_coherent_weight = 2.0 * std::abs(coherence);

    for (const auto& b : rho.branches()) {
        for (const auto& [ket, amp] : b.state.amplitudes()) {
            double w = b.weight * std::norm(amp);
            report.diagonal_weights[ket.label()] += w;
            std::vector<int> counts;
            for (int m : outputs) counts.push_back(ket.mode_photons(m));
            std::sort(counts.rbegin(), counts.rend());
            std::string cls;
            for (int c : counts) {
                if (!cls.empty()) cls += '+';
                cls += std::to_string(c);
            }
            report.class_weights[cls] += w;
        }
    }

    FitResult fit = fit_id_ghz(rho, static_cast<int>(outputs.size()));
    report.fitted_f = fit.f_hat;
    report.fit_residual = fit.residual;
    return report;
}

}  // namespace eprsim
