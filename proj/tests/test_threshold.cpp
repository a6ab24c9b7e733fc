#include <doctest.h>

#include <cmath>
#include <sstream>

#include "eprsim/ghz.hpp"
#include "eprsim/threshold.hpp"
#include "test_helpers.hpp"

using namespace eprsim;

TEST_SUITE("threshold") {

TEST_CASE("loss_rate_sps") {
    CHECK(loss_rate_sps(1.0, 1.0) == doctest::Approx(0.0));
    CHECK(loss_rate_sps(1.0, 2.0 / 3.0) == doctest::Approx(0.25));
    CHECK(loss_rate_sps(2.0 / 3.0, 1.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(loss_rate_sps(-0.1, 0.5), InvalidParamsError);
}

TEST_CASE("loss threshold margins") {
    auto a = meets_loss_threshold(0.0, 0.51);
    CHECK(a.pass);
    CHECK(a.margin == doctest::Approx(0.01));

    auto b = meets_loss_threshold(1.0 / 3.0, 0.75);
    CHECK_FALSE(b.pass);  // strict inequality on the boundary
    CHECK(std::abs(b.margin) < 1e-15);

    CHECK_FALSE(meets_loss_threshold(0.0, 0.5).pass);
}

TEST_CASE("combined-efficiency threshold margins") {
    auto a = meets_sps_threshold(1.0, 0.7);
    CHECK(a.pass);
    CHECK(a.margin == doctest::Approx(0.7 - 2.0 / 3.0));
    CHECK_FALSE(meets_sps_threshold(1.0, 2.0 / 3.0).pass);
    auto c = meets_sps_threshold(0.9, 0.8);
    CHECK(c.pass);
    CHECK(c.margin == doctest::Approx(0.72 - 2.0 / 3.0));
}

TEST_CASE("loss_rate_cavity") {
    CHECK(loss_rate_cavity(0.0, 0.4) == doctest::Approx(0.0));
    CHECK(loss_rate_cavity(0.1, 0.3) == doctest::Approx(0.25));
    CHECK(loss_rate_cavity(0.1, 0.2) == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(loss_rate_cavity(0.0, 0.0), InvalidParamsError);
    // Scale invariance.
    for (double lambda : {0.5, 2.0, 7.0}) {
        CHECK(loss_rate_cavity(lambda * 0.12, lambda * 0.31) ==
              doctest::Approx(loss_rate_cavity(0.12, 0.31)));
    }
}

TEST_CASE("success probability formulas") {
    CHECK(success_prob_formula(Scheme::Epr, 1.0, 1.0) == doctest::Approx(0.03125));
    CHECK(success_prob_formula(Scheme::SinglePhoton, 1.0, 1.0) ==
          doctest::Approx(0.00390625));
    CHECK(success_prob_formula(Scheme::Epr, 0.0, 0.7) == doctest::Approx(0.0));
    CHECK_THROWS_AS(success_prob_formula(Scheme::Cavity, 0.5, 0.5), InvalidParamsError);
}

TEST_CASE("threshold equivalence on a grid") {
    for (int i = 0; i < 100; ++i) {
        for (int j = 0; j < 100; ++j) {
            double eta_s = (i + 1) / 101.0, eta_d = (j + 1) / 101.0;
            double m1 = meets_loss_threshold(loss_rate_sps(eta_s, eta_d), eta_d).margin;
            double m2 = meets_sps_threshold(eta_s, eta_d).margin;
            if (std::abs(m1) < 1e-12 || std::abs(m2) < 1e-12) {
                CHECK(std::abs(m1) < 1e-12);
                CHECK(std::abs(m2) < 1e-12);
            } else {
                CHECK((m1 > 0) == (m2 > 0));
            }
        }
    }
}

TEST_CASE("loss_rate_sps is monotonically decreasing") {
    for (int i = 1; i < 20; ++i) {
        for (int j = 1; j < 20; ++j) {
            double s = i / 20.0, d = j / 20.0;
            CHECK(loss_rate_sps(s + 0.05, d) < loss_rate_sps(s, d));
            CHECK(loss_rate_sps(s, d + 0.05) < loss_rate_sps(s, d));
        }
    }
}

TEST_CASE("simulator agrees with the closed-form success probability") {
    for (double eta_s : {0.3, 0.8}) {
        for (double eta_d : {0.5, 1.0}) {
            SourceSpec s = HeraldedEpr{eta_s};
            auto result = run_ghz_circuit({s, s, s}, DetectorModel{eta_d, false});
            CHECK(std::abs(result.probability -
                           success_prob_formula(Scheme::Epr, eta_s, eta_d)) < 1e-10);
        }
    }
}

TEST_CASE("simulator agrees with the cavity loss-rate formula") {
    const struct {
        double p0, p1, p2, p3;
    } sets[] = {{0.3, 0.3, 0.1, 0.3}, {0.0, 0.0, 0.5, 0.5}};
    for (const auto& ps : sets) {
        SourceSpec s = CavityPair{ps.p0, ps.p1, ps.p2, ps.p3};
        auto result = run_ghz_circuit({s, s, s}, DetectorModel{1.0, false});
        auto fit = fit_id_ghz(result.state, 3);
        CHECK(std::abs(fit.f_hat - loss_rate_cavity(ps.p2, ps.p3)) < 1e-10);
    }
}

TEST_CASE("sweep rows and CSV output") {
    SweepSpec spec;
    spec.scheme = Scheme::Epr;
    spec.axes = {{"eta_s", 0.1, 0.9, 2}, {"eta_d", 0.4, 0.6, 2}};
    auto rows = sweep(spec);
    REQUIRE(rows.size() == 4);
    CHECK(*rows[0].eta_s == doctest::Approx(0.1));
    CHECK(*rows[0].eta_d == doctest::Approx(0.4));
    CHECK(*rows[3].eta_s == doctest::Approx(0.9));
    CHECK_FALSE(rows[0].pass);
    CHECK(rows[1].pass);  // eta_d = 0.6 > 1/2

    std::ostringstream out;
    write_sweep_csv(out, rows);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "scheme,eta_s,eta_d,f,p2,p3,success_prob,margin_loss_threshold,"
          "margin_sps_threshold,pass");

    SweepSpec bad = spec;
    bad.axes[0].steps = 1;
    CHECK_THROWS_AS(sweep(bad), InvalidParamsError);
}

TEST_CASE("single-photon sweep hits the boundary") {
    SweepSpec spec;
    spec.scheme = Scheme::SinglePhoton;
    spec.axes = {{"eta_d", 2.0 / 3.0, 2.0 / 3.0, 2}};
    spec.fixed["eta_s"] = 1.0;
    auto rows = sweep(spec);
    for (const auto& row : rows) {
        CHECK(std::abs(*row.margin_loss_threshold) < 1e-12);
        CHECK(std::abs(*row.margin_sps_threshold) < 1e-12);
        CHECK_FALSE(row.pass);
    }
}

TEST_CASE("cavity sweep flips at the boundary ratio") {
    SweepSpec spec;
    spec.scheme = Scheme::Cavity;
    spec.axes = {{"p2", 0.05, 0.15, 11}};
    spec.fixed["p3"] = 0.2;
    spec.fixed["eta_d"] = 0.75;
    auto rows = sweep(spec);
    for (const auto& row : rows) {
        bool below = *row.p2 / 0.2 < 0.5 - 1e-9;
        bool boundary = std::abs(*row.p2 / 0.2 - 0.5) < 1e-9;
        if (boundary) {
            CHECK(std::abs(*row.margin_loss_threshold) < 1e-12);
            CHECK_FALSE(row.pass);
        } else {
            CHECK(row.pass == below);
        }
    }
}

}  // TEST_SUITE
