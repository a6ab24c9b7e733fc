#include <doctest.h>

#include <cmath>

#include "eprsim/elements.hpp"
#include "eprsim/sources.hpp"
#include "test_helpers.hpp"

using namespace eprsim;
using namespace eprsim::testing;

namespace {

FockBasisState ket(std::initializer_list<FockBasisState::Entry> entries) {
    return FockBasisState(std::vector<FockBasisState::Entry>(entries));
}

Ensemble one_photon(int mode, Polarization pol, std::span<const int> modes) {
    PureState st;
    st.declare_modes(modes);
    st.add_term(ket({{{mode, pol}, 1}}), 1.0);
    return Ensemble::pure(st);
}

}  // namespace

TEST_SUITE("elements") {

TEST_CASE("PBS routes coincident photons into one mode") {
    const std::vector<int> modes{2, 4};
    PureState st;
    st.declare_modes(modes);
    st.add_term(ket({{{2, Polarization::H}, 1}, {{4, Polarization::V}, 1}}), 1.0);
    Ensemble out = apply_element(Ensemble::pure(st), Pbs{2, 4});
    REQUIRE(out.branches().size() == 1);
    // Both photons leave in mode 2: the H stays, the V crosses over.
    CHECK(std::abs(out.branches()[0].state.amplitude(
                       ket({{{2, Polarization::H}, 1}, {{2, Polarization::V}, 1}})) -
                   Amplitude(1.0)) < 1e-12);
}

TEST_CASE("loss endpoints") {
    const std::vector<int> modes{1};
    Ensemble in = one_photon(1, Polarization::H, modes);
    CHECK(trace_distance(apply_element(in, Loss{1, 1.0}), in) < 1e-12);

    Ensemble gone = apply_element(in, Loss{1, 0.0});
    REQUIRE(gone.branches().size() == 1);
    CHECK(gone.branches()[0].weight == doctest::Approx(1.0));
    CHECK(gone.branches()[0].state.amplitudes().begin()->first.empty());

    CHECK_THROWS_AS(apply_element(in, Loss{1, 1.5}), InvalidTransmissivityError);
    CHECK_THROWS_AS(apply_element(in, Loss{9, 0.5}), UnknownModeError);
}

TEST_CASE("loss composition Loss(t1) Loss(t2) == Loss(t1 t2)") {
    Rng rng(11);
    const std::vector<int> modes{1, 2};
    for (int trial = 0; trial < 30; ++trial) {
        Ensemble ens = random_ensemble(modes, 3, 2, rng);
        double t1 = 0.3 + 0.05 * (trial % 10);
        double t2 = 0.9 - 0.02 * trial;
        Ensemble chained = apply_element(apply_element(ens, Loss{1, t1}), Loss{1, t2});
        Ensemble direct = apply_element(ens, Loss{1, t1 * t2});
        CHECK(trace_distance(chained, direct) < 1e-10);
    }
}

TEST_CASE("every element is trace preserving") {
    Rng rng(13);
    const std::vector<int> modes{1, 2};
    const Element elems[] = {Pbs{1, 2}, Rotator{1, 0.7}, PolarizerH{1}, Loss{2, 0.37}};
    for (int trial = 0; trial < 100; ++trial) {
        Ensemble ens = random_ensemble(modes, 4, 2, rng);
        for (const Element& e : elems) {
            CHECK(std::abs(apply_element(ens, e).total_weight() - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("polarizer is idempotent and absorbs V") {
    const std::vector<int> modes{1};
    Ensemble v = one_photon(1, Polarization::V, modes);
    Ensemble once = apply_element(v, PolarizerH{1});
    CHECK(trace_distance(apply_element(once, PolarizerH{1}), once) < 1e-12);
    CHECK(once.branches()[0].state.amplitudes().begin()->first.empty());

    Ensemble h = one_photon(1, Polarization::H, modes);
    CHECK(trace_distance(apply_element(h, PolarizerH{1}), h) < 1e-12);
}

TEST_CASE("detect on a single photon") {
    const std::vector<int> modes{2};
    Ensemble in = one_photon(2, Polarization::H, modes);

    auto ideal = detect(in, 2, DetectorModel{1.0, false});
    REQUIRE(ideal.size() == 1);
    CHECK(ideal[0].outcome.clicked);
    CHECK_FALSE(ideal[0].outcome.count.has_value());
    CHECK(ideal[0].probability == doctest::Approx(1.0));
    CHECK(ideal[0].state.declared_modes().empty());

    auto lossy = detect(in, 2, DetectorModel{0.8, false});
    REQUIRE(lossy.size() == 2);
    CHECK_FALSE(lossy[0].outcome.clicked);
    CHECK(lossy[0].probability == doctest::Approx(0.2));
    CHECK(lossy[1].outcome.clicked);
    CHECK(lossy[1].probability == doctest::Approx(0.8));
}

TEST_CASE("detect two photons with a bucket detector") {
    PureState st;
    st.declare_mode(2);
    st.add_term(ket({{{2, Polarization::H}, 2}}), 1.0);
    auto branches = detect(Ensemble::pure(st), 2, DetectorModel{0.5, false});
    double clicked = 0.0;
    for (const auto& b : branches) {
        if (b.outcome.clicked) clicked += b.probability;
    }
    CHECK(clicked == doctest::Approx(0.75));  // 1 - (1 - 0.5)^2
}

TEST_CASE("detection outcomes partition probability") {
    Rng rng(17);
    const std::vector<int> modes{1, 2};
    for (int trial = 0; trial < 100; ++trial) {
        Ensemble ens = random_ensemble(modes, 4, 3, rng);
        for (bool nr : {false, true}) {
            double total = 0.0;
            for (const auto& b : detect(ens, 1, DetectorModel{0.7, nr})) {
                total += b.probability;
                CHECK(std::abs(b.state.total_weight() - 1.0) < 1e-10);
            }
            CHECK(std::abs(total - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("bucket and number-resolving agree on at most one photon") {
    Rng rng(19);
    const std::vector<int> modes{1, 2};
    for (int trial = 0; trial < 50; ++trial) {
        // One photon in mode 1 at most: superpose vacuum with single-photon kets.
        PureState st;
        st.declare_modes(modes);
        std::normal_distribution<double> g(0.0, 1.0);
        st.add_term(FockBasisState::vacuum_ket(), g(rng));
        st.add_term(ket({{{1, Polarization::H}, 1}}), g(rng));
        st.add_term(ket({{{1, Polarization::V}, 1}, {{2, Polarization::H}, 1}}), g(rng));
        Ensemble ens = Ensemble::pure(st.normalized());
        auto bucket = detect(ens, 1, DetectorModel{0.6, false});
        auto resolving = detect(ens, 1, DetectorModel{0.6, true});
        REQUIRE(bucket.size() == resolving.size());
        for (std::size_t i = 0; i < bucket.size(); ++i) {
            CHECK(bucket[i].outcome.clicked == resolving[i].outcome.clicked);
            CHECK(std::abs(bucket[i].probability - resolving[i].probability) < 1e-12);
            CHECK(trace_distance(bucket[i].state, resolving[i].state) < 1e-12);
        }
    }
}

TEST_CASE("rotator at pi/2 swaps polarizations") {
    const std::vector<int> modes{1};
    Ensemble h = one_photon(1, Polarization::H, modes);
    Ensemble v = one_photon(1, Polarization::V, modes);
    CHECK(trace_distance(apply_element(h, Rotator{1, M_PI_2}), v) < 1e-12);
    CHECK(trace_distance(apply_element(apply_element(h, Rotator{1, 0.3}), Rotator{1, 0.3}), h) <
          1e-12);
}

}  // TEST_SUITE
