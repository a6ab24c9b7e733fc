#pragma once

#include <complex>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "eprsim/fock.hpp"

namespace eprsim::testing {

using Rng = std::mt19937_64;

inline Eigen::MatrixXcd random_unitary(int n, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = Amplitude(g(rng), g(rng));
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    return Eigen::MatrixXcd(qr.householderQ());
}

inline PureState random_pure_state(std::span<const int> modes, int max_photons, int terms,
                                   Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_int_distribution<int> photon_count(0, max_photons);
    std::uniform_int_distribution<int> pol(0, 1);
    PureState st;
    st.declare_modes(modes);
    std::uniform_int_distribution<std::size_t> pick(0, modes.size() - 1);
    for (int t = 0; t < terms; ++t) {
        int n = photon_count(rng);
        FockBasisState ket;
        for (int p = 0; p < n; ++p) {
            Channel ch{modes[pick(rng)], pol(rng) ? Polarization::V : Polarization::H};
            ket = ket.with_added(ch, 1);
        }
        st.add_term(ket, Amplitude(g(rng), g(rng)));
    }
    if (st.is_zero()) st.add_term(FockBasisState::vacuum_ket(), 1.0);
    return st.normalized();
}

inline Ensemble random_ensemble(std::span<const int> modes, int max_photons, int branches,
                                Rng& rng) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<Branch> out;
    for (int b = 0; b < branches; ++b) {
        out.push_back({u(rng), random_pure_state(modes, max_photons, 3, rng)});
    }
    return Ensemble::from_unnormalized(std::move(out));
}

/*
 * Independent symbolic-polynomial oracle for creation-operator algebra.
 * A state is a complex-weighted sum of operator monomials applied to the
 * vacuum; a monomial is the sorted list of channels its creation operators
 * act on. No bosonic factors appear until the final conversion to the
 * occupation basis, which uses |n> = (a^dag)^n / sqrt(n!) |0>.
 */
using SymMonomial = std::vector<Channel>;
using SymState = std::map<SymMonomial, Amplitude>;

inline SymState sym_vacuum() { return {{SymMonomial{}, Amplitude(1.0, 0.0)}}; }

inline SymState sym_create(const SymState& sym, Channel ch) {
    SymState out;
    for (const auto& [mono, coeff] : sym) {
        SymMonomial m = mono;
        m.insert(std::lower_bound(m.begin(), m.end(), ch), ch);
        out[std::move(m)] += coeff;
    }
    return out;
}

inline SymState sym_linear_map(const SymState& sym, std::span<const Channel> channels,
                               const Eigen::MatrixXcd& u) {
    SymState out;
    for (const auto& [mono, coeff] : sym) {
        // Substitute operator by operator, expanding products term by term.
        SymState partial{{SymMonomial{}, coeff}};
        for (const Channel& ch : mono) {
            int row = -1;
            for (std::size_t i = 0; i < channels.size(); ++i) {
                if (channels[i] == ch) row = static_cast<int>(i);
            }
            SymState next;
            if (row < 0) {
                for (const auto& [m, c] : partial) {
                    SymMonomial mm = m;
                    mm.insert(std::lower_bound(mm.begin(), mm.end(), ch), ch);
                    next[std::move(mm)] += c;
                }
            } else {
                for (const auto& [m, c] : partial) {
                    for (std::size_t j = 0; j < channels.size(); ++j) {
                        Amplitude w = u(row, static_cast<int>(j));
                        if (w == Amplitude(0.0, 0.0)) continue;
                        SymMonomial mm = m;
                        mm.insert(std::lower_bound(mm.begin(), mm.end(), channels[j]),
                                  channels[j]);
                        next[std::move(mm)] += c * w;
                    }
                }
            }
            partial = std::move(next);
        }
        for (const auto& [m, c] : partial) out[m] += c;
    }
    return out;
}

inline std::map<FockBasisState, Amplitude> sym_to_fock(const SymState& sym) {
    std::map<FockBasisState, Amplitude> out;
    for (const auto& [mono, coeff] : sym) {
        FockBasisState ket;
        for (const Channel& ch : mono) ket = ket.with_added(ch, 1);
        double fac = 1.0;
        for (const auto& [ch, n] : ket.entries()) {
            for (int i = 2; i <= n; ++i) fac *= i;
        }
        out[ket] += coeff * std::sqrt(fac);
    }
    return out;
}

inline double fock_map_distance(const std::map<FockBasisState, Amplitude>& a,
                                const PureState& b) {
    double worst = 0.0;
    for (const auto& [ket, amp] : a) worst = std::max(worst, std::abs(amp - b.amplitude(ket)));
    for (const auto& [ket, amp] : b.amplitudes()) {
        auto it = a.find(ket);
        Amplitude expect = it == a.end() ? Amplitude(0.0, 0.0) : it->second;
        worst = std::max(worst, std::abs(amp - expect));
    }
    return worst;
}

}  // namespace eprsim::testing
