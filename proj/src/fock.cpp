#include "eprsim/fock.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace eprsim {

namespace {

double factorial(int n) {
    static const auto table = [] {
        std::array<double, 33> t{};
        t[0] = 1.0;
        for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<double>(i);
        return t;
    }();
    return table.at(static_cast<std::size_t>(n));
}

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

bool contains_mode(const std::vector<int>& modes, int m) {
    return std::binary_search(modes.begin(), modes.end(), m);
}

}  // namespace

char pol_char(Polarization pol) { return pol == Polarization::H ? 'H' : 'V'; }

FockBasisState::FockBasisState(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& [ch, n] = entries[i];
        if (n < 0) throw InvalidParamsError("negative photon count");
        if (n == 0) continue;
        if (!entries_.empty() && entries_.back().first == ch) {
            entries_.back().second += n;
        } else {
            entries_.push_back({ch, n});
        }
    }
}

int FockBasisState::count(Channel ch) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), ch,
                               [](const Entry& e, const Channel& c) { return e.first < c; });
    return (it != entries_.end() && it->first == ch) ? it->second : 0;
}

int FockBasisState::mode_photons(int mode) const {
    int n = 0;
    for (const auto& [ch, c] : entries_) {
        if (ch.mode == mode) n += c;
    }
    return n;
}

int FockBasisState::total_photons() const {
    int n = 0;
    for (const auto& e : entries_) n += e.second;
    return n;
}

FockBasisState FockBasisState::with_added(Channel ch, int delta) const {
    FockBasisState out = *this;
    auto it = std::lower_bound(out.entries_.begin(), out.entries_.end(), ch,
                               [](const Entry& e, const Channel& c) { return e.first < c; });
    if (it != out.entries_.end() && it->first == ch) {
        it->second += delta;
        if (it->second < 0) throw InvalidParamsError("photon count went negative");
        if (it->second == 0) out.entries_.erase(it);
    } else {
        if (delta < 0) throw InvalidParamsError("photon count went negative");
        if (delta > 0) out.entries_.insert(it, {ch, delta});
    }
    return out;
}

std::string FockBasisState::label() const {
    std::string out;
    for (const auto& [ch, n] : entries_) {
        if (!out.empty()) out += ' ';
        out += std::to_string(n);
        out += pol_char(ch.pol);
        out += '@';
        out += std::to_string(ch.mode);
    }
    return out;
}

FockBasisState FockBasisState::from_label(const std::string& text) {
    std::vector<Entry> entries;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        std::size_t i = 0;
        while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i;
        if (i == 0 || i + 1 >= tok.size() || (tok[i] != 'H' && tok[i] != 'V') || tok[i + 1] != '@')
            throw InvalidParamsError("bad basis token: " + tok);
        int n = std::stoi(tok.substr(0, i));
        Polarization pol = tok[i] == 'H' ? Polarization::H : Polarization::V;
        int mode = std::stoi(tok.substr(i + 2));
        entries.push_back({Channel{mode, pol}, n});
    }
    return FockBasisState(std::move(entries));
}

PureState PureState::vacuum(std::span<const int> modes) {
    PureState out;
    out.declare_modes(modes);
    out.amps_.emplace(FockBasisState::vacuum_ket(), Amplitude(1.0, 0.0));
    return out;
}

bool PureState::has_mode(int mode) const { return contains_mode(modes_, mode); }

void PureState::set_photon_cap(int cap) {
    if (cap < 0) throw InvalidParamsError("photon cap must be non-negative");
    photon_cap_ = cap;
}

double PureState::squared_norm() const {
    double s = 0.0;
    for (const auto& [ket, amp] : amps_) s += std::norm(amp);
    return s;
}

double PureState::norm() const { return std::sqrt(squared_norm()); }

int PureState::max_total_photons() const {
    int n = 0;
    for (const auto& [ket, amp] : amps_) n = std::max(n, ket.total_photons());
    return n;
}

Amplitude PureState::amplitude(const FockBasisState& ket) const {
    auto it = amps_.find(ket);
    return it == amps_.end() ? Amplitude(0.0, 0.0) : it->second;
}

PureState PureState::normalized() const {
    double n = norm();
    if (n <= 0.0) throw ZeroProbabilityError("cannot normalize a zero state");
    PureState out = *this;
    for (auto& [ket, amp] : out.amps_) amp /= n;
    return out;
}

void PureState::add_term(const FockBasisState& ket, Amplitude amp) {
    if (ket.total_photons() > photon_cap_)
        throw PhotonCapError("state exceeds the photon-number cap of " +
                             std::to_string(photon_cap_));
    for (const auto& [ch, n] : ket.entries()) declare_mode(ch.mode);
    auto [it, inserted] = amps_.try_emplace(ket, amp);
    if (!inserted) it->second += amp;
}

void PureState::declare_mode(int mode) {
    if (mode < 0) throw InvalidParamsError("mode labels must be non-negative");
    auto it = std::lower_bound(modes_.begin(), modes_.end(), mode);
    if (it == modes_.end() || *it != mode) modes_.insert(it, mode);
}

void PureState::declare_modes(std::span<const int> modes) {
    for (int m : modes) declare_mode(m);
}

void PureState::prune() {
    for (auto it = amps_.begin(); it != amps_.end();) {
        if (std::abs(it->second) < prune_eps_) {
            it = amps_.erase(it);
        } else {
            ++it;
        }
    }
}

PureState create_photon(const PureState& state, int mode, Polarization pol) {
    const Channel ch{mode, pol};
    PureState out;
    out.declare_modes(state.declared_modes());
    out.declare_mode(mode);
    out.set_photon_cap(state.photon_cap());
    for (const auto& [ket, amp] : state.amplitudes()) {
        int n = ket.count(ch);
        out.add_term(ket.with_added(ch, 1), amp * std::sqrt(static_cast<double>(n + 1)));
    }
    return out;
}

PureState apply_linear_map(const PureState& state, std::span<const Channel> channels,
                           const Eigen::MatrixXcd& coeffs) {
    const int k = static_cast<int>(channels.size());
    if (coeffs.rows() != k || coeffs.cols() != k)
        throw DimensionMismatchError("coefficient matrix does not match the channel list");
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            if (channels[i] == channels[j]) throw InvalidParamsError("duplicate channel");
        }
        if (!state.has_mode(channels[i].mode))
            throw UnknownModeError("mode " + std::to_string(channels[i].mode) +
                                   " is not declared in the state");
    }
    const double unitarity =
        (coeffs.adjoint() * coeffs - Eigen::MatrixXcd::Identity(k, k)).cwiseAbs().maxCoeff();
    if (unitarity > 1e-10) throw NonUnitaryError("coefficient matrix is not unitary");

    PureState out;
    out.declare_modes(state.declared_modes());
    out.set_photon_cap(state.photon_cap());

    for (const auto& [ket, amp] : state.amplitudes()) {
        std::vector<int> in_counts(channels.size(), 0);
        FockBasisState rest = ket;
        double denom = 1.0;
        for (int i = 0; i < k; ++i) {
            in_counts[i] = ket.count(channels[i]);
            if (in_counts[i] > 0) rest = rest.with_added(channels[i], -in_counts[i]);
            denom *= factorial(in_counts[i]);
        }

        // Expand prod_i (sum_j U_ij b_j^dag)^{n_i} over output exponent vectors.
        std::map<std::vector<int>, Amplitude> poly{
            {std::vector<int>(channels.size(), 0), amp / std::sqrt(denom)}};
        for (int i = 0; i < k; ++i) {
            for (int rep = 0; rep < in_counts[i]; ++rep) {
                std::map<std::vector<int>, Amplitude> next;
                for (const auto& [exps, coeff] : poly) {
                    for (int j = 0; j < k; ++j) {
                        const Amplitude u = coeffs(i, j);
                        if (u == Amplitude(0.0, 0.0)) continue;
                        std::vector<int> e = exps;
                        ++e[static_cast<std::size_t>(j)];
                        next[std::move(e)] += coeff * u;
                    }
                }
                poly = std::move(next);
            }
        }

        for (const auto& [exps, coeff] : poly) {
            FockBasisState out_ket = rest;
            double fac = 1.0;
            for (int j = 0; j < k; ++j) {
                if (exps[static_cast<std::size_t>(j)] == 0) continue;
                out_ket = out_ket.with_added(channels[j], exps[static_cast<std::size_t>(j)]);
                fac *= factorial(exps[static_cast<std::size_t>(j)]);
            }
            out.add_term(out_ket, coeff * std::sqrt(fac));
        }
    }
    out.prune();
    return out;
}

PureState tensor(const PureState& a, const PureState& b) {
    for (int m : b.declared_modes()) {
        if (a.has_mode(m))
            throw InvalidParamsError("tensor requires disjoint mode sets (mode " +
                                     std::to_string(m) + ")");
    }
    PureState out;
    out.declare_modes(a.declared_modes());
    out.declare_modes(b.declared_modes());
    out.set_photon_cap(std::max(a.photon_cap(), b.photon_cap()));
    for (const auto& [ka, va] : a.amplitudes()) {
        for (const auto& [kb, vb] : b.amplitudes()) {
            FockBasisState ket = ka;
            for (const auto& [ch, n] : kb.entries()) ket = ket.with_added(ch, n);
            out.add_term(ket, va * vb);
        }
    }
    return out;
}

Amplitude inner_product(const PureState& a, const PureState& b) {
    // Iterate over the smaller support.
    const PureState& lhs = a.amplitudes().size() <= b.amplitudes().size() ? a : b;
    const PureState& rhs = &lhs == &a ? b : a;
    Amplitude s(0.0, 0.0);
    for (const auto& [ket, amp] : lhs.amplitudes()) {
        Amplitude other = rhs.amplitude(ket);
        if (&lhs == &a) {
            s += std::conj(amp) * other;
        } else {
            s += std::conj(other) * amp;
        }
    }
    return s;
}

Ensemble Ensemble::pure(const PureState& state) {
    std::vector<Branch> branches{{1.0, state.normalized()}};
    return from_branches(std::move(branches));
}

Ensemble Ensemble::from_branches(std::vector<Branch> branches) {
    double total = 0.0;
    for (const auto& b : branches) total += b.weight;
    if (std::abs(total - 1.0) > 1e-10)
        throw InvalidParamsError("ensemble weights must sum to 1");
    Ensemble out = from_unnormalized(std::move(branches));
    return out;
}

Ensemble Ensemble::from_unnormalized(std::vector<Branch> branches) {
    Ensemble out;
    double total = 0.0;
    for (const auto& b : branches) {
        if (!(b.weight > 0.0)) throw InvalidParamsError("branch weights must be positive");
        total += b.weight;
    }
    if (branches.empty() || total <= 0.0)
        throw InvalidParamsError("cannot build an ensemble without branches");
    out.modes_ = branches.front().state.declared_modes();
    for (auto& b : branches) {
        if (b.state.declared_modes() != out.modes_)
            throw DimensionMismatchError("ensemble branches disagree on declared modes");
        if (std::abs(b.state.squared_norm() - 1.0) > 1e-9)
            throw InvalidParamsError("ensemble branches must hold normalized states");
        b.weight /= total;
    }
    out.branches_ = std::move(branches);
    return out;
}

Ensemble Ensemble::empty_state(std::span<const int> modes) {
    Ensemble out;
    out.modes_ = sorted_unique(std::vector<int>(modes.begin(), modes.end()));
    return out;
}

double Ensemble::total_weight() const {
    double s = 0.0;
    for (const auto& b : branches_) s += b.weight;
    return s;
}

int Ensemble::max_total_photons() const {
    int n = 0;
    for (const auto& b : branches_) n = std::max(n, b.state.max_total_photons());
    return n;
}

namespace {

// Equality up to a global phase; tol applies amplitude-wise after alignment.
bool states_match(const PureState& a, const PureState& b, double tol) {
    if (a.amplitudes().size() != b.amplitudes().size()) return false;
    auto ia = a.amplitudes().begin();
    auto ib = b.amplitudes().begin();
    Amplitude phase(0.0, 0.0);
    for (; ia != a.amplitudes().end(); ++ia, ++ib) {
        if (ia->first != ib->first) return false;
        if (phase == Amplitude(0.0, 0.0)) {
            if (std::abs(ia->second) < 1e-13 && std::abs(ib->second) < 1e-13) continue;
            if (std::abs(ia->second) < 1e-13 || std::abs(ib->second) < 1e-13) return false;
            phase = ia->second / ib->second;
            phase /= std::abs(phase);
            continue;
        }
        if (std::abs(ia->second - phase * ib->second) > tol) return false;
    }
    return true;
}

}  // namespace

Ensemble Ensemble::merged_duplicates(double tol) const {
    if (branches_.empty()) return *this;
    std::vector<Branch> merged;
    for (const auto& b : branches_) {
        bool found = false;
        for (auto& m : merged) {
            if (states_match(m.state, b.state, tol)) {
                m.weight += b.weight;
                found = true;
                break;
            }
        }
        if (!found) merged.push_back(b);
    }
    Ensemble out;
    out.modes_ = modes_;
    out.branches_ = std::move(merged);
    return out;
}

Ensemble Ensemble::with_extra_modes(std::span<const int> modes) const {
    Ensemble out;
    std::vector<int> all = modes_;
    all.insert(all.end(), modes.begin(), modes.end());
    out.modes_ = sorted_unique(std::move(all));
    out.branches_ = branches_;
    for (auto& b : out.branches_) b.state.declare_modes(out.modes_);
    return out;
}

Ensemble tensor(const Ensemble& a, const Ensemble& b) {
    if (a.is_empty() || b.is_empty()) {
        std::vector<int> all = a.declared_modes();
        all.insert(all.end(), b.declared_modes().begin(), b.declared_modes().end());
        return Ensemble::empty_state(sorted_unique(std::move(all)));
    }
    std::vector<Branch> branches;
    branches.reserve(a.branches().size() * b.branches().size());
    for (const auto& ba : a.branches()) {
        for (const auto& bb : b.branches()) {
            branches.push_back({ba.weight * bb.weight, tensor(ba.state, bb.state)});
        }
    }
    return Ensemble::from_unnormalized(std::move(branches));
}

Ensemble apply_linear_map(const Ensemble& ens, std::span<const Channel> channels,
                          const Eigen::MatrixXcd& coeffs) {
    if (ens.is_empty()) return ens;
    std::vector<Branch> branches;
    branches.reserve(ens.branches().size());
    for (const auto& b : ens.branches()) {
        branches.push_back({b.weight, apply_linear_map(b.state, channels, coeffs).normalized()});
    }
    return Ensemble::from_unnormalized(std::move(branches));
}

std::pair<double, Ensemble> condition_on_vacuum(const Ensemble& ens, std::span<const int> modes) {
    std::vector<int> remaining;
    for (int m : ens.declared_modes()) {
        if (std::find(modes.begin(), modes.end(), m) == modes.end()) remaining.push_back(m);
    }
    double prob = 0.0;
    std::vector<Branch> out;
    for (const auto& b : ens.branches()) {
        PureState kept;
        kept.declare_modes(remaining);
        kept.set_photon_cap(b.state.photon_cap());
        for (const auto& [ket, amp] : b.state.amplitudes()) {
            bool ok = true;
            for (int m : modes) {
                if (ket.mode_photons(m) != 0) {
                    ok = false;
                    break;
                }
            }
            if (ok) kept.add_term(ket, amp);
        }
        double sq = kept.squared_norm();
        if (sq > 1e-28) {
            prob += b.weight * sq;
            out.push_back({b.weight * sq, kept.normalized()});
        }
    }
    if (out.empty()) return {0.0, Ensemble::empty_state(remaining)};
    return {std::min(prob, 1.0), Ensemble::from_unnormalized(std::move(out))};
}

Ensemble partial_trace(const Ensemble& ens, std::span<const int> keep) {
    for (int m : keep) {
        if (!contains_mode(ens.declared_modes(), m))
            throw UnknownModeError("cannot keep undeclared mode " + std::to_string(m));
    }
    if (ens.is_empty()) return Ensemble::empty_state(keep);
    std::vector<int> kept_modes = sorted_unique(std::vector<int>(keep.begin(), keep.end()));
    auto is_kept = [&](int mode) { return contains_mode(kept_modes, mode); };

    std::vector<Branch> out;
    for (const auto& b : ens.branches()) {
        std::map<FockBasisState, PureState> groups;  // keyed by the traced-out part
        for (const auto& [ket, amp] : b.state.amplitudes()) {
            FockBasisState env = ket.filtered([&](int m) { return !is_kept(m); });
            FockBasisState sys = ket.filtered(is_kept);
            auto [it, inserted] = groups.try_emplace(env);
            if (inserted) {
                it->second.declare_modes(kept_modes);
                it->second.set_photon_cap(b.state.photon_cap());
            }
            it->second.add_term(sys, amp);
        }
        for (auto& [env, st] : groups) {
            double sq = st.squared_norm();
            if (sq > 1e-28) out.push_back({b.weight * sq, st.normalized()});
        }
    }
    return Ensemble::from_unnormalized(std::move(out));
}

namespace {

Eigen::MatrixXcd dense_matrix(const Ensemble& ens, const std::map<FockBasisState, int>& index) {
    const int n = static_cast<int>(index.size());
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& b : ens.branches()) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
        for (const auto& [ket, amp] : b.state.amplitudes()) v(index.at(ket)) = amp;
        rho += b.weight * (v * v.adjoint());
    }
    return rho;
}

}  // namespace

double trace_distance(const Ensemble& a, const Ensemble& b) {
    if (a.declared_modes() != b.declared_modes())
        throw DimensionMismatchError("trace_distance requires identical declared mode sets");
    std::map<FockBasisState, int> index;
    for (const Ensemble* e : {&a, &b}) {
        for (const auto& br : e->branches()) {
            for (const auto& [ket, amp] : br.state.amplitudes()) index.try_emplace(ket, 0);
        }
    }
    int i = 0;
    for (auto& [ket, idx] : index) idx = i++;
    if (index.empty()) return 0.0;
    Eigen::MatrixXcd diff = dense_matrix(a, index) - dense_matrix(b, index);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double fidelity_with_pure(const Ensemble& ens, const PureState& target) {
    if (std::abs(target.squared_norm() - 1.0) > 1e-9)
        throw InvalidParamsError("fidelity target must be normalized");
    double f = 0.0;
    for (const auto& b : ens.branches()) f += b.weight * std::norm(inner_product(target, b.state));
    return std::min(f, 1.0);
}

double mean_total_photons(const Ensemble& ens) {
    double n = 0.0;
    for (const auto& b : ens.branches()) {
        for (const auto& [ket, amp] : b.state.amplitudes()) {
            n += b.weight * std::norm(amp) * ket.total_photons();
        }
    }
    return n;
}

DensityMatrix to_density_matrix(const Ensemble& ens) {
    std::map<FockBasisState, int> index;
    for (const auto& br : ens.branches()) {
        for (const auto& [ket, amp] : br.state.amplitudes()) index.try_emplace(ket, 0);
    }
    if (index.empty()) index.try_emplace(FockBasisState::vacuum_ket(), 0);
    int i = 0;
    DensityMatrix dm;
    for (auto& [ket, idx] : index) {
        idx = i++;
        dm.basis.push_back(ket);
    }
    dm.matrix = dense_matrix(ens, index);
    dm.modes = ens.declared_modes();
    return dm;
}

Ensemble to_ensemble(const DensityMatrix& dm) {
    const auto n = static_cast<int>(dm.basis.size());
    if (dm.matrix.rows() != n || dm.matrix.cols() != n)
        throw DimensionMismatchError("density matrix does not match its basis");
    if ((dm.matrix - dm.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw InvalidParamsError("density matrix is not Hermitian");
    if (std::abs(dm.matrix.trace().real() - 1.0) > 1e-10 ||
        std::abs(dm.matrix.trace().imag()) > 1e-10)
        throw InvalidParamsError("density matrix trace must be 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dm.matrix);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw InvalidParamsError("density matrix is not positive semidefinite");
    std::vector<Branch> branches;
    for (int k = 0; k < n; ++k) {
        double w = es.eigenvalues()(k);
        if (w < 1e-12) continue;
        PureState st;
        st.declare_modes(dm.modes);
        for (int j = 0; j < n; ++j) {
            Amplitude a = es.eigenvectors()(j, k);
            if (std::abs(a) >= kPruneEpsilon) st.add_term(dm.basis[static_cast<std::size_t>(j)], a);
        }
        branches.push_back({w, st.normalized()});
    }
    return Ensemble::from_unnormalized(std::move(branches));
}

}  // namespace eprsim
