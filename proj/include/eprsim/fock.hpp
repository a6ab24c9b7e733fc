#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eprsim/errors.hpp"

namespace eprsim {

using Amplitude = std::complex<double>;

inline constexpr int kDefaultPhotonCap = 12;
inline constexpr double kPruneEpsilon = 1e-14;

enum class Polarization : std::uint8_t { H = 0, V = 1 };

char pol_char(Polarization pol);

// One bosonic channel: a spatial mode together with a polarization.
struct Channel {
    int mode = 0;
    Polarization pol = Polarization::H;

    friend auto operator<=>(const Channel&, const Channel&) = default;
};

/*
 * Occupation-number basis state over (mode, polarization) channels.
 * Entries stay sorted by channel and zero counts are never stored, so
 * equality and ordering reduce to lexicographic comparison of entries.
 */
class FockBasisState {
public:
    using Entry = std::pair<Channel, int>;

    FockBasisState() = default;
    explicit FockBasisState(std::vector<Entry> entries);

    static FockBasisState vacuum_ket() { return {}; }

    int count(Channel ch) const;
    int mode_photons(int mode) const;
    int total_photons() const;
    bool empty() const { return entries_.empty(); }
    const std::vector<Entry>& entries() const { return entries_; }

    /// Copy with the channel count adjusted by delta; throws if it would go negative.
    FockBasisState with_added(Channel ch, int delta) const;

    /// Keeps only entries for which pred(mode) holds.
    template <typename Pred>
    FockBasisState filtered(Pred pred) const {
        std::vector<Entry> kept;
        for (const auto& e : entries_) {
            if (pred(e.first.mode)) kept.push_back(e);
        }
        FockBasisState out;
        out.entries_ = std::move(kept);
        return out;
    }

    /// Text label such as "1H@1 1V@2"; the vacuum is the empty string.
    std::string label() const;
    static FockBasisState from_label(const std::string& text);

    friend auto operator<=>(const FockBasisState&, const FockBasisState&) = default;

private:
    std::vector<Entry> entries_;
};

/*
 * Sparse superposition over Fock basis kets together with the set of
 * declared spatial modes it lives on. Operations return new values and
 * never renormalize unless documented. Amplitudes whose magnitude falls
 * below prune_epsilon are dropped.
 */
class PureState {
public:
    using AmplitudeMap = std::map<FockBasisState, Amplitude>;

    PureState() = default;

    static PureState vacuum(std::span<const int> modes = {});

    const AmplitudeMap& amplitudes() const { return amps_; }
    const std::vector<int>& declared_modes() const { return modes_; }
    bool has_mode(int mode) const;

    double prune_epsilon() const { return prune_eps_; }
    int photon_cap() const { return photon_cap_; }
    void set_photon_cap(int cap);

    double squared_norm() const;
    double norm() const;
    bool is_zero() const { return amps_.empty(); }
    int max_total_photons() const;
    Amplitude amplitude(const FockBasisState& ket) const;

    /// Scales so that the squared norm is 1; throws ZeroProbabilityError on zero.
    PureState normalized() const;

    // Building blocks. add_term accumulates, declares the ket's modes and
    // enforces the photon cap.
    void add_term(const FockBasisState& ket, Amplitude amp);
    void declare_mode(int mode);
    void declare_modes(std::span<const int> modes);
    void prune();

private:
    AmplitudeMap amps_;
    std::vector<int> modes_;  // sorted, unique
    double prune_eps_ = kPruneEpsilon;
    int photon_cap_ = kDefaultPhotonCap;
};

/// Applies a creation operator: |..,n,..> -> sqrt(n+1)|..,n+1,..>. Not renormalized.
PureState create_photon(const PureState& state, int mode, Polarization pol);

/// Rewrites each ket as a creation-operator monomial, substitutes the listed
/// channels through the unitary coefficient matrix (row i maps channel i),
/// expands with bosonic factors and recollects. Norm-preserving.
PureState apply_linear_map(const PureState& state, std::span<const Channel> channels,
                           const Eigen::MatrixXcd& coeffs);

/// Product state; the two declared mode sets must be disjoint.
PureState tensor(const PureState& a, const PureState& b);

Amplitude inner_product(const PureState& a, const PureState& b);  // <a|b>

struct Branch {
    double weight = 0.0;
    PureState state;
};

/*
 * Weighted ensemble of normalized pure states, rho = sum_i w_i |psi_i><psi_i|.
 * All branches share one declared mode set. An ensemble with no branches is
 * the zero-probability sentinel.
 */
class Ensemble {
public:
    Ensemble() = default;

    static Ensemble pure(const PureState& state);
    /// Branch weights must sum to 1 within 1e-10.
    static Ensemble from_branches(std::vector<Branch> branches);
    /// Rescales weights to sum to 1.
    static Ensemble from_unnormalized(std::vector<Branch> branches);
    static Ensemble empty_state(std::span<const int> modes);

    const std::vector<Branch>& branches() const { return branches_; }
    const std::vector<int>& declared_modes() const { return modes_; }
    bool is_empty() const { return branches_.empty(); }
    double total_weight() const;
    int max_total_photons() const;

    /// Coalesces branches whose states agree up to a global phase.
    Ensemble merged_duplicates(double tol = 1e-12) const;
    Ensemble with_extra_modes(std::span<const int> modes) const;

private:
    std::vector<Branch> branches_;
    std::vector<int> modes_;
};

Ensemble tensor(const Ensemble& a, const Ensemble& b);
Ensemble apply_linear_map(const Ensemble& ens, std::span<const Channel> channels,
                          const Eigen::MatrixXcd& coeffs);

/// Projects onto zero photons in the listed modes. Returns the retained
/// probability and the renormalized ensemble with those modes removed;
/// probability 0 comes back with the empty sentinel, never a throw.
std::pair<double, Ensemble> condition_on_vacuum(const Ensemble& ens, std::span<const int> modes);

/// Reduced density operator on the kept modes; trace preserving.
Ensemble partial_trace(const Ensemble& ens, std::span<const int> keep);

/// (1/2)||rho_a - rho_b||_1 via dense eigendecomposition on the union basis.
double trace_distance(const Ensemble& a, const Ensemble& b);

/// <target|rho|target> for a normalized target.
double fidelity_with_pure(const Ensemble& ens, const PureState& target);

double mean_total_photons(const Ensemble& ens);

// Dense Hermitian view over an explicit ket basis, used for comparisons.
struct DensityMatrix {
    std::vector<FockBasisState> basis;
    Eigen::MatrixXcd matrix;
    std::vector<int> modes;
};

DensityMatrix to_density_matrix(const Ensemble& ens);
/// Validates Hermiticity (1e-12), unit trace (1e-10) and positivity (-1e-10),
/// then rebuilds an ensemble from the eigendecomposition.
Ensemble to_ensemble(const DensityMatrix& dm);

}  // namespace eprsim
