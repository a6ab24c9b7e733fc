#include "eprsim/sources.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "eprsim/elements.hpp"

namespace eprsim {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

void check_unit_interval(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
        throw InvalidParamsError(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

PureState bell_pure(BellForm form, int mode_a, int mode_b) {
    if (mode_a == mode_b) throw InvalidParamsError("pair modes must be distinct");
    PureState st;
    st.declare_mode(mode_a);
    st.declare_mode(mode_b);
    const Polarization H = Polarization::H;
    const Polarization V = Polarization::V;
    if (form == BellForm::PhiPlus) {
        st.add_term(FockBasisState({{{mode_a, H}, 1}, {{mode_b, H}, 1}}), kInvSqrt2);
        st.add_term(FockBasisState({{{mode_a, V}, 1}, {{mode_b, V}, 1}}), kInvSqrt2);
    } else {
        st.add_term(FockBasisState({{{mode_a, H}, 1}, {{mode_b, V}, 1}}), kInvSqrt2);
        st.add_term(FockBasisState({{{mode_a, V}, 1}, {{mode_b, H}, 1}}), kInvSqrt2);
    }
    return st;
}

PureState ghz_pure(std::span<const int> modes) {
    if (modes.empty()) throw InvalidParamsError("ghz_pure needs at least one mode");
    PureState st;
    std::vector<FockBasisState::Entry> all_h, all_v;
    for (int m : modes) {
        st.declare_mode(m);
        all_h.push_back({{m, Polarization::H}, 1});
        all_v.push_back({{m, Polarization::V}, 1});
    }
    st.add_term(FockBasisState(std::move(all_h)), kInvSqrt2);
    st.add_term(FockBasisState(std::move(all_v)), kInvSqrt2);
    return st;
}

PureState two_pair_state(int mode_a, int mode_b) {
    if (mode_a == mode_b) throw InvalidParamsError("pair modes must be distinct");
    // Apply the pair-creation operator (aH bH + aV bV)/sqrt(2) twice to the
    // vacuum and normalize.
    PureState st = PureState::vacuum();
    st.declare_mode(mode_a);
    st.declare_mode(mode_b);
    for (int rep = 0; rep < 2; ++rep) {
        PureState next;
        next.declare_modes(st.declared_modes());
        for (Polarization pol : {Polarization::H, Polarization::V}) {
            PureState part = create_photon(create_photon(st, mode_a, pol), mode_b, pol);
            for (const auto& [ket, amp] : part.amplitudes()) next.add_term(ket, amp * kInvSqrt2);
        }
        st = std::move(next);
    }
    return st.normalized();
}

Ensemble make_source(const SourceSpec& spec, int mode_a, int mode_b) {
    if (mode_a == mode_b) throw InvalidParamsError("source modes must be distinct");
    const int base_modes[] = {mode_a, mode_b};

    if (std::holds_alternative<PerfectEpr>(spec))
        return make_source(HeraldedEpr{1.0}, mode_a, mode_b);

    if (const auto* h = std::get_if<HeraldedEpr>(&spec)) {
        check_unit_interval(h->eta_s, "eta_s");
        std::vector<Branch> branches;
        if (h->eta_s < 1.0)
            branches.push_back({1.0 - h->eta_s, PureState::vacuum(base_modes)});
        if (h->eta_s > 0.0)
            branches.push_back({h->eta_s, bell_pure(BellForm::PhiPlus, mode_a, mode_b)});
        return Ensemble::from_branches(std::move(branches));
    }

    if (const auto* s = std::get_if<SpdcEpr>(&spec)) {
        check_unit_interval(s->eta_s, "eta_s");
        if (s->x < 0.0) throw InvalidParamsError("x must be non-negative");
        const double w2 = s->x * s->eta_s * s->eta_s / 2.0;
        const double z = 1.0 + w2;
        const bool shadows = s->double_pair == DoublePairModel::IndependentPairs && w2 > 0.0;
        if (shadows && std::max(mode_a, mode_b) >= kShadowModeOffset)
            throw InvalidParamsError("source modes must stay below the shadow offset");

        std::vector<int> all(base_modes, base_modes + 2);
        if (shadows) {
            all.push_back(shadow_mode(mode_a));
            all.push_back(shadow_mode(mode_b));
        }
        auto declared = [&](PureState st) {
            st.declare_modes(all);
            return st;
        };
        std::vector<Branch> branches;
        if (s->eta_s < 1.0)
            branches.push_back({(1.0 - s->eta_s) / z, declared(PureState::vacuum())});
        if (s->eta_s > 0.0)
            branches.push_back(
                {s->eta_s / z, declared(bell_pure(BellForm::PhiPlus, mode_a, mode_b))});
        if (w2 > 0.0) {
            PureState double_pair =
                shadows ? tensor(bell_pure(BellForm::PhiPlus, mode_a, mode_b),
                                 bell_pure(BellForm::PhiPlus, shadow_mode(mode_a),
                                           shadow_mode(mode_b)))
                        : two_pair_state(mode_a, mode_b);
            branches.push_back({w2 / z, declared(std::move(double_pair))});
        }
        return Ensemble::from_branches(std::move(branches));
    }

    const auto& c = std::get<CavityPair>(spec);
    for (double p : {c.p0, c.p1, c.p2, c.p3}) {
        if (p < 0.0) throw InvalidParamsError("cavity weights must be non-negative");
    }
    if (std::abs(c.p0 + c.p1 + c.p2 + c.p3 - 1.0) > 1e-12)
        throw InvalidParamsError("cavity weights must sum to 1");
    std::vector<Branch> branches;
    auto one_photon = [&](int mode, Polarization pol) {
        PureState st;
        st.declare_modes(base_modes);
        st.add_term(FockBasisState({{{mode, pol}, 1}}), 1.0);
        return st;
    };
    if (c.p0 > 0.0) branches.push_back({c.p0, PureState::vacuum(base_modes)});
    if (c.p1 > 0.0) {
        branches.push_back({c.p1 / 2.0, one_photon(mode_a, Polarization::H)});
        branches.push_back({c.p1 / 2.0, one_photon(mode_a, Polarization::V)});
    }
    if (c.p2 > 0.0) {
        branches.push_back({c.p2 / 2.0, one_photon(mode_b, Polarization::H)});
        branches.push_back({c.p2 / 2.0, one_photon(mode_b, Polarization::V)});
    }
    if (c.p3 > 0.0) branches.push_back({c.p3, bell_pure(c.bell_form, mode_a, mode_b)});
    return Ensemble::from_branches(std::move(branches));
}

Ensemble convert_bell(const Ensemble& ens, int mode) {
    return apply_element(ens, Rotator{mode, M_PI_2});
}

bool has_shadow_modes(const Ensemble& ens) {
    return std::any_of(ens.declared_modes().begin(), ens.declared_modes().end(), is_shadow_mode);
}

Ensemble merge_shadow_modes(const Ensemble& ens) {
    if (!has_shadow_modes(ens)) return ens;
    std::vector<int> physical;
    for (int m : ens.declared_modes()) {
        int p = is_shadow_mode(m) ? m - kShadowModeOffset : m;
        if (!std::binary_search(physical.begin(), physical.end(), p))
            physical.insert(std::lower_bound(physical.begin(), physical.end(), p), p);
    }
    if (ens.is_empty()) return Ensemble::empty_state(physical);

    std::vector<Branch> out;
    for (const auto& b : ens.branches()) {
        // Kets sharing the same occupation of the auxiliary modes stay
        // coherent; distinct auxiliary occupations are orthogonal carriers.
        std::map<FockBasisState, PureState> groups;
        for (const auto& [ket, amp] : b.state.amplitudes()) {
            FockBasisState tag = ket.filtered(is_shadow_mode);
            FockBasisState folded = ket.filtered([](int m) { return !is_shadow_mode(m); });
            for (const auto& [ch, n] : tag.entries())
                folded = folded.with_added({ch.mode - kShadowModeOffset, ch.pol}, n);
            auto [it, inserted] = groups.try_emplace(tag);
            if (inserted) {
                it->second.declare_modes(physical);
                it->second.set_photon_cap(b.state.photon_cap());
            }
            it->second.add_term(folded, amp);
        }
        for (auto& [tag, st] : groups) {
            double sq = st.squared_norm();
            if (sq > 1e-28) out.push_back({b.weight * sq, st.normalized()});
        }
    }
    return Ensemble::from_unnormalized(std::move(out));
}

}  // namespace eprsim
