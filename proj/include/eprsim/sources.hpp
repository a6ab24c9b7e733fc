#pragma once

#include <span>
#include <variant>

#include "eprsim/fock.hpp"

namespace eprsim {

enum class BellForm {
    PhiPlus,  // (|HH> + |VV>)/sqrt(2)
    PsiPlus,  // (|HV> + |VH>)/sqrt(2)
};

// How the double-pair emission of an SPDC source is modeled. Independent
// pairs occupy auxiliary temporal modes and do not interfere with each
// other; the single-mode variant stuffs both pairs into one bosonic mode
// pair. The two differ in the conditional circuit output, and only the
// independent-pairs model matches the double-photon error weights this
// source is known for, so it is the default.
enum class DoublePairModel { IndependentPairs, SingleModeBosonic };

struct PerfectEpr {};

struct HeraldedEpr {
    double eta_s = 1.0;
};

struct SpdcEpr {
    double eta_s = 0.0;
    double x = 1.0;
    DoublePairModel double_pair = DoublePairModel::IndependentPairs;
};

struct CavityPair {
    double p0 = 0.0;  // vacuum
    double p1 = 0.0;  // photon in the kept mode only
    double p2 = 0.0;  // photon in the detected mode only
    double p3 = 1.0;  // full pair
    BellForm bell_form = BellForm::PhiPlus;
};

using SourceSpec = std::variant<PerfectEpr, HeraldedEpr, SpdcEpr, CavityPair>;

// Auxiliary temporal modes for independent double pairs are labeled by the
// spatial mode plus this offset. Source modes must stay below the offset.
inline constexpr int kShadowModeOffset = 100;
inline int shadow_mode(int mode) { return mode + kShadowModeOffset; }
inline bool is_shadow_mode(int mode) { return mode >= kShadowModeOffset; }

PureState bell_pure(BellForm form, int mode_a, int mode_b);

/// (|H...H> + |V...V>)/sqrt(2) over the given modes, one photon per mode.
PureState ghz_pure(std::span<const int> modes);

/// Normalized state of two pair-creation operators on one mode pair:
/// (|2H_a 2H_b> + |H_a V_a H_b V_b> + |2V_a 2V_b>)/sqrt(3).
PureState two_pair_state(int mode_a, int mode_b);

/// Builds the source density operator on (mode_a, mode_b); mode_a is the
/// kept output mode and mode_b the one sent toward detection.
Ensemble make_source(const SourceSpec& spec, int mode_a, int mode_b);

/// Polarization flip H <-> V on one mode; turns Psi+ pairs into Phi+ pairs.
Ensemble convert_bell(const Ensemble& ens, int mode);

/// True if the ensemble declares any auxiliary temporal mode.
bool has_shadow_modes(const Ensemble& ens);

/// Folds auxiliary temporal modes back onto their spatial modes. Kets that
/// differ only in the temporal placement of their photons become separate
/// incoherent branches of the same occupation content.
Ensemble merge_shadow_modes(const Ensemble& ens);

}  // namespace eprsim
