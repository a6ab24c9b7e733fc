#include "eprsim/fusion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "eprsim/sources.hpp"

namespace eprsim {

Ensemble id_ghz(const IdGhzSpec& spec) {
    if (spec.n < 1) throw InvalidParamsError("id_ghz needs at least one qubit");
    if (!(spec.f >= 0.0 && spec.f <= 1.0)) throw InvalidParamsError("f must lie in [0, 1]");
    std::vector<int> labels = spec.mode_labels;
    if (labels.empty()) {
        labels.resize(static_cast<std::size_t>(spec.n));
        std::iota(labels.begin(), labels.end(), 1);
    }
    if (static_cast<int>(labels.size()) != spec.n)
        throw InvalidParamsError("mode_labels must list n modes");

    const double f = spec.f;
    const int n = spec.n;
    std::vector<Branch> branches;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        const int survivors = std::popcount(mask);
        const double w = std::pow(f, n - survivors) * std::pow(1.0 - f, survivors);
        if (w <= 0.0) continue;
        if (survivors == n) {
            PureState ghz = ghz_pure(labels);
            ghz.declare_modes(labels);
            branches.push_back({w, std::move(ghz)});
            continue;
        }
        if (survivors == 0) {
            branches.push_back({w, PureState::vacuum(labels)});
            continue;
        }
        for (Polarization pol : {Polarization::H, Polarization::V}) {
            PureState st;
            st.declare_modes(labels);
            std::vector<FockBasisState::Entry> entries;
            for (int i = 0; i < n; ++i) {
                if (mask & (1u << i))
                    entries.push_back({{labels[static_cast<std::size_t>(i)], pol}, 1});
            }
            st.add_term(FockBasisState(std::move(entries)), 1.0);
            branches.push_back({w / 2.0, std::move(st)});
        }
    }
    return Ensemble::from_branches(std::move(branches));
}

Ensemble id_ghz(int n, double f) { return id_ghz(IdGhzSpec{n, f, {}}); }

FitResult fit_id_ghz(const Ensemble& ens, int n) {
    if (n < 1) throw InvalidParamsError("fit_id_ghz needs at least one qubit");
    if (static_cast<int>(ens.declared_modes().size()) != n)
        throw InvalidParamsError("ensemble must live on exactly n modes");
    FitResult fit;
    fit.f_hat = std::clamp(1.0 - mean_total_photons(ens) / n, 0.0, 1.0);
    fit.residual = trace_distance(ens, id_ghz(IdGhzSpec{n, fit.f_hat, ens.declared_modes()}));
    return fit;
}

namespace {

struct PatternBranch {
    std::array<int, 4> counts{0, 0, 0, 0};
    double probability = 1.0;
    Ensemble state;
};

}  // namespace

std::vector<FusionOutcome> fuse_type_ii(const Ensemble& a, const Ensemble& b, int qubit_a,
                                        int qubit_b, const DetectorModel& det) {
    std::vector<int> flip;
    for (int m : b.declared_modes()) {
        if (m != qubit_b) flip.push_back(m);
    }
    return fuse_type_ii_joint(tensor(a, b), qubit_a, qubit_b, det, flip);
}

std::vector<FusionOutcome> fuse_type_ii_joint(const Ensemble& joint, int qubit_a, int qubit_b,
                                              const DetectorModel& det,
                                              std::span<const int> herald_flip_modes) {
    const auto& modes = joint.declared_modes();
    if (!std::binary_search(modes.begin(), modes.end(), qubit_a) ||
        !std::binary_search(modes.begin(), modes.end(), qubit_b))
        throw UnknownModeError("fused qubit modes must be declared");
    if (qubit_a == qubit_b) throw InvalidParamsError("fused qubit modes must be distinct");

    // Two fresh ports catch the V photons of each side.
    const int anc_a = (modes.empty() ? 0 : modes.back()) + 1;
    const int anc_b = anc_a + 1;
    const int extra[] = {anc_a, anc_b};
    Ensemble ens = joint.with_extra_modes(extra);

    for (const Element& elem : std::initializer_list<Element>{
             Rotator{qubit_a, M_PI_4}, Rotator{qubit_b, M_PI_4}, Pbs{qubit_a, qubit_b},
             Rotator{qubit_a, M_PI_4}, Rotator{qubit_b, M_PI_4}, Pbs{qubit_a, anc_a},
             Pbs{qubit_b, anc_b}}) {
        ens = apply_element(ens, elem);
    }

    const std::array<int, 4> ports{qubit_a, anc_a, qubit_b, anc_b};
    std::vector<PatternBranch> tree{{{0, 0, 0, 0}, 1.0, std::move(ens)}};
    for (std::size_t p = 0; p < ports.size(); ++p) {
        std::vector<PatternBranch> next;
        for (auto& node : tree) {
            for (auto& d : detect(node.state, ports[p], det)) {
                PatternBranch child;
                child.counts = node.counts;
                child.counts[p] = det.number_resolving ? *d.outcome.count
                                                       : (d.outcome.clicked ? 1 : 0);
                child.probability = node.probability * d.probability;
                child.state = std::move(d.state);
                next.push_back(std::move(child));
            }
        }
        tree = std::move(next);
    }

    std::vector<FusionOutcome> outcomes;
    for (auto& node : tree) {
        FusionOutcome out;
        for (std::size_t p = 0; p < 4; ++p) out.port_clicks[p] = node.counts[p] > 0;
        if (det.number_resolving) out.port_counts = node.counts;
        out.probability = node.probability;

        const int side_a = node.counts[0] + node.counts[1];
        const int side_b = node.counts[2] + node.counts[3];
        const int clicks = static_cast<int>(out.port_clicks[0]) + out.port_clicks[1] +
                           out.port_clicks[2] + out.port_clicks[3];
        if (det.number_resolving ? (side_a == 1 && side_b == 1)
                                 : (clicks == 2 && out.port_clicks[0] + out.port_clicks[1] == 1 &&
                                    out.port_clicks[2] + out.port_clicks[3] == 1)) {
            out.label = FusionLabel::Success;
            // a:H with b:V (or a:V with b:H) heralds the flipped pairing.
            const bool mismatch = out.port_clicks[0] != out.port_clicks[2];
            if (mismatch) {
                for (int m : herald_flip_modes)
                    node.state = apply_element(node.state, Rotator{m, M_PI_2});
                out.herald_flip_applied = true;
            }
        } else if (det.number_resolving ? (side_a + side_b < 2) : (clicks == 0)) {
            out.label = FusionLabel::LossDetected;
        } else {
            out.label = FusionLabel::Failure;
        }
        out.state = std::move(node.state);
        outcomes.push_back(std::move(out));
    }
    return outcomes;
}

int qubit_count_after_fusion(int n_a, int n_b) {
    if (n_a < 1 || n_b < 1)
        throw InvalidParamsError("fusion inputs need at least one qubit each");
    return n_a + n_b - 2;
}

double success_probability(const std::vector<FusionOutcome>& outcomes) {
    double p = 0.0;
    for (const auto& o : outcomes) {
        if (o.label == FusionLabel::Success) p += o.probability;
    }
    return p;
}

Ensemble success_conditioned(const std::vector<FusionOutcome>& outcomes) {
    std::vector<Branch> branches;
    for (const auto& o : outcomes) {
        if (o.label != FusionLabel::Success || o.state.is_empty()) continue;
        for (const auto& b : o.state.branches())
            branches.push_back({o.probability * b.weight, b.state});
    }
    if (branches.empty()) throw ZeroProbabilityError("no Success outcomes to condition on");
    return Ensemble::from_unnormalized(std::move(branches)).merged_duplicates();
}

}  // namespace eprsim
