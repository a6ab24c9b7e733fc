#include "eprsim/elements.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace eprsim {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return r;
}

void require_mode(const Ensemble& ens, int mode) {
    const auto& modes = ens.declared_modes();
    if (!std::binary_search(modes.begin(), modes.end(), mode))
        throw UnknownModeError("mode " + std::to_string(mode) + " is not declared");
}

Eigen::MatrixXcd pbs_matrix() {
    // Channel order: aH, aV, bH, bV.
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4);
    u(0, 0) = 1.0;  // aH -> aH
    u(1, 3) = 1.0;  // aV -> bV
    u(2, 2) = 1.0;  // bH -> bH
    u(3, 1) = 1.0;  // bV -> aV
    return u;
}

Eigen::MatrixXcd rotator_matrix(double angle) {
    if (!std::isfinite(angle)) throw InvalidParamsError("rotator angle must be finite");
    Eigen::MatrixXcd u(2, 2);
    u(0, 0) = std::cos(angle);
    u(0, 1) = std::sin(angle);
    u(1, 0) = std::sin(angle);
    u(1, 1) = -std::cos(angle);
    return u;
}

// Enumerates per-channel loss counts for one ket, accumulating into groups
// keyed by the pattern of lost photons.
void expand_losses(Amplitude amp, std::span<const Channel> channels, double t, std::size_t idx,
                   const FockBasisState& lost, FockBasisState current, double mult,
                   std::map<FockBasisState, PureState>& groups, const std::vector<int>& modes,
                   int cap) {
    if (idx == channels.size()) {
        auto [it, inserted] = groups.try_emplace(lost);
        if (inserted) {
            it->second.declare_modes(modes);
            it->second.set_photon_cap(cap);
        }
        it->second.add_term(current, amp * mult);
        return;
    }
    const Channel ch = channels[idx];
    const int n = current.count(ch);
    for (int l = 0; l <= n; ++l) {
        double m = mult * std::sqrt(binom(n, l)) * std::pow(t, 0.5 * (n - l)) *
                   std::pow(1.0 - t, 0.5 * l);
        if (m == 0.0) continue;
        expand_losses(amp, channels, t, idx + 1, l > 0 ? lost.with_added(ch, l) : lost,
                      l > 0 ? current.with_added(ch, -l) : current, m, groups, modes, cap);
    }
}

}  // namespace

Ensemble apply_channel_loss(const Ensemble& ens, std::span<const Channel> channels, double t) {
    if (t < 0.0 || t > 1.0)
        throw InvalidTransmissivityError("transmissivity must lie in [0, 1]");
    if (ens.is_empty()) return ens;
    for (const Channel& ch : channels) require_mode(ens, ch.mode);

    std::vector<Branch> out;
    for (const auto& b : ens.branches()) {
        std::map<FockBasisState, PureState> groups;
        for (const auto& [ket, amp] : b.state.amplitudes()) {
            expand_losses(amp, channels, t, 0, FockBasisState::vacuum_ket(), ket, 1.0, groups,
                          ens.declared_modes(), b.state.photon_cap());
        }
        for (auto& [lost, st] : groups) {
            double sq = st.squared_norm();
            if (sq > 1e-28) out.push_back({b.weight * sq, st.normalized()});
        }
    }
    return Ensemble::from_unnormalized(std::move(out));
}

Ensemble apply_element(const Ensemble& ens, const Element& elem) {
    if (ens.is_empty()) return ens;
    if (const auto* pbs = std::get_if<Pbs>(&elem)) {
        if (pbs->mode_a == pbs->mode_b)
            throw InvalidParamsError("PBS requires two distinct modes");
        require_mode(ens, pbs->mode_a);
        require_mode(ens, pbs->mode_b);
        const Channel chans[] = {{pbs->mode_a, Polarization::H},
                                 {pbs->mode_a, Polarization::V},
                                 {pbs->mode_b, Polarization::H},
                                 {pbs->mode_b, Polarization::V}};
        return apply_linear_map(ens, chans, pbs_matrix());
    }
    if (const auto* rot = std::get_if<Rotator>(&elem)) {
        require_mode(ens, rot->mode);
        const Channel chans[] = {{rot->mode, Polarization::H}, {rot->mode, Polarization::V}};
        return apply_linear_map(ens, chans, rotator_matrix(rot->angle));
    }
    if (const auto* pol = std::get_if<PolarizerH>(&elem)) {
        require_mode(ens, pol->mode);
        const Channel chans[] = {{pol->mode, Polarization::V}};
        return apply_channel_loss(ens, chans, 0.0);
    }
    const auto& loss = std::get<Loss>(elem);
    require_mode(ens, loss.mode);
    const Channel chans[] = {{loss.mode, Polarization::H}, {loss.mode, Polarization::V}};
    return apply_channel_loss(ens, chans, loss.transmissivity);
}

std::vector<DetectionBranch> detect(const Ensemble& ens, int mode, const DetectorModel& det) {
    const int modes[] = {mode};
    return detect_joint(ens, modes, det);
}

std::vector<DetectionBranch> detect_joint(const Ensemble& ens, std::span<const int> modes,
                                          const DetectorModel& det) {
    for (int m : modes) require_mode(ens, m);
    std::vector<Channel> chans;
    for (int m : modes) {
        chans.push_back({m, Polarization::H});
        chans.push_back({m, Polarization::V});
    }
    Ensemble after = apply_channel_loss(ens, chans, det.efficiency);

    std::vector<int> remaining;
    for (int m : after.declared_modes()) {
        if (std::find(modes.begin(), modes.end(), m) == modes.end()) remaining.push_back(m);
    }
    auto detected = [&](int m) {
        return std::find(modes.begin(), modes.end(), m) != modes.end();
    };

    // The detector absorbs whatever reaches it, so branches split by the full
    // occupation pattern on the detected modes; only the total count is read out.
    std::map<int, std::vector<Branch>> by_count;
    std::map<int, double> prob;
    for (const auto& b : after.branches()) {
        std::map<FockBasisState, PureState> groups;
        for (const auto& [ket, amp] : b.state.amplitudes()) {
            FockBasisState pattern = ket.filtered(detected);
            FockBasisState rest = ket.filtered([&](int m) { return !detected(m); });
            auto [it, inserted] = groups.try_emplace(pattern);
            if (inserted) {
                it->second.declare_modes(remaining);
                it->second.set_photon_cap(b.state.photon_cap());
            }
            it->second.add_term(rest, amp);
        }
        for (auto& [pattern, st] : groups) {
            double sq = st.squared_norm();
            if (sq <= 1e-28) continue;
            int n = pattern.total_photons();
            by_count[n].push_back({b.weight * sq, st.normalized()});
            prob[n] += b.weight * sq;
        }
    }

    std::vector<DetectionBranch> out;
    if (det.number_resolving) {
        for (auto& [n, branches] : by_count) {
            out.push_back({ClickOutcome{n > 0, n}, prob[n],
                           Ensemble::from_unnormalized(std::move(branches))});
        }
        return out;
    }
    std::vector<Branch> none, some;
    double p_none = 0.0, p_some = 0.0;
    for (auto& [n, branches] : by_count) {
        auto& dst = (n == 0) ? none : some;
        (n == 0 ? p_none : p_some) += prob[n];
        for (auto& b : branches) dst.push_back(std::move(b));
    }
    if (!none.empty())
        out.push_back({ClickOutcome{false, std::nullopt}, p_none,
                       Ensemble::from_unnormalized(std::move(none))});
    if (!some.empty())
        out.push_back({ClickOutcome{true, std::nullopt}, p_some,
                       Ensemble::from_unnormalized(std::move(some))});
    return out;
}

}  // namespace eprsim
