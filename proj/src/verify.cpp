#include "eprsim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "eprsim/fusion.hpp"
#include "eprsim/ghz.hpp"
#include "eprsim/threshold.hpp"

namespace eprsim {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

CheckResult check(std::string name, bool pass, std::string detail) {
    return {std::move(name), pass, std::move(detail)};
}

// The six double-photon error kets on output modes 1, 3, 5: two photons in
// one mode, the partner of the surviving single determined by the wiring.
std::vector<FockBasisState> double_photon_error_kets() {
    using P = Polarization;
    auto ket = [](int m1, P p1, int m2, P p2, int m3, P p3) {
        return FockBasisState({{{m1, p1}, 1}, {{m2, p2}, 1}, {{m3, p3}, 1}});
    };
    return {
        ket(1, P::H, 1, P::V, 5, P::H), ket(1, P::H, 1, P::V, 3, P::V),
        ket(3, P::H, 3, P::V, 1, P::H), ket(3, P::H, 3, P::V, 5, P::V),
        ket(5, P::H, 5, P::V, 1, P::V), ket(5, P::H, 5, P::V, 3, P::H),
    };
}

}  // namespace

std::vector<CheckResult> verify_eq4() {
    std::vector<CheckResult> out;
    const double eta_s = 0.01;
    for (double x : {0.5, 1.0}) {
        const std::string tag = "eq4/x=" + fmt(x);
        SourceSpec spec = SpdcEpr{eta_s, x};
        auto result = run_ghz_circuit({spec, spec, spec}, DetectorModel{1.0, false});
        auto report = analyze_output(result);

        const double ghz_w = report.ghz_coherent_weight;
        const double expected = (x / 2.0) * (1.0 - eta_s);
        std::vector<double> ratios;
        double listed = ghz_w;
        for (const auto& ket : double_photon_error_kets()) {
            auto it = report.diagonal_weights.find(ket.label());
            double w = it == report.diagonal_weights.end() ? 0.0 : it->second;
            listed += w;
            ratios.push_back(w / ghz_w);
        }
        double lo = *std::min_element(ratios.begin(), ratios.end());
        double hi = *std::max_element(ratios.begin(), ratios.end());
        double worst = 0.0;
        for (double r : ratios) worst = std::max(worst, std::abs(r - expected));
        out.push_back(check(tag + "/error-ratios", worst <= 0.02,
                            "max |ratio - " + fmt(expected) + "| = " + fmt(worst) +
                                " (tolerance 0.02)"));
        out.push_back(check(tag + "/ratios-equal", hi - lo <= 1e-6,
                            "spread " + fmt(hi - lo) + " (tolerance 1e-6)"));
        const double residual = (1.0 - listed) / ghz_w;
        out.push_back(check(tag + "/residual", residual <= 0.02,
                            "weight outside the seven terms = " + fmt(residual) +
                                " of the GHZ weight (tolerance 0.02)"));
    }
    return out;
}

std::vector<CheckResult> verify_eq7() {
    std::vector<CheckResult> out;
    const struct {
        double p0, p1, p2, p3;
    } sets[] = {{0.4, 0.2, 0.1, 0.3}, {0.1, 0.1, 0.2, 0.6}, {0.5, 0.2, 0.2, 0.1}};
    for (const auto& s : sets) {
        const std::string tag =
            "eq7/p=(" + fmt(s.p0) + "," + fmt(s.p1) + "," + fmt(s.p2) + "," + fmt(s.p3) + ")";
        const double f = loss_rate_cavity(s.p2, s.p3);
        SourceSpec spec = CavityPair{s.p0, s.p1, s.p2, s.p3, BellForm::PhiPlus};
        auto result = run_ghz_circuit({spec, spec, spec}, DetectorModel{1.0, false});
        const std::vector<int> outputs{1, 3, 5};
        double dist = trace_distance(result.state, id_ghz(IdGhzSpec{3, f, outputs}));
        out.push_back(check(tag + "/state", dist < 1e-10,
                            "trace distance to the ID state at f=" + fmt(f) + " is " +
                                fmt(dist)));
        auto fit = fit_id_ghz(result.state, 3);
        out.push_back(check(tag + "/fitted-f", std::abs(fit.f_hat - f) < 1e-10,
                            "fitted f = " + fmt(fit.f_hat) + ", expected " + fmt(f)));
    }
    return out;
}

std::vector<CheckResult> verify_thresholds() {
    std::vector<CheckResult> out;

    int mismatches = 0;
    for (int i = 0; i < 100; ++i) {
        for (int j = 0; j < 100; ++j) {
            double eta_s = (i + 1) / 101.0;
            double eta_d = (j + 1) / 101.0;
            double m_loss = meets_loss_threshold(loss_rate_sps(eta_s, eta_d), eta_d).margin;
            double m_sps = meets_sps_threshold(eta_s, eta_d).margin;
            bool zero_loss = std::abs(m_loss) < 1e-12;
            bool zero_sps = std::abs(m_sps) < 1e-12;
            if (zero_loss != zero_sps || (!zero_loss && (m_loss > 0) != (m_sps > 0)))
                ++mismatches;
        }
    }
    out.push_back(check("thresholds/sign-equivalence", mismatches == 0,
                        std::to_string(mismatches) + " sign mismatches on the 100x100 grid"));

    double b1 = meets_loss_threshold(loss_rate_sps(1.0, 2.0 / 3.0), 2.0 / 3.0).margin;
    double b1s = meets_sps_threshold(1.0, 2.0 / 3.0).margin;
    double b2 = meets_loss_threshold(loss_rate_sps(2.0 / 3.0, 1.0), 1.0).margin;
    double b2s = meets_sps_threshold(2.0 / 3.0, 1.0).margin;
    double worst = std::max({std::abs(b1), std::abs(b1s), std::abs(b2), std::abs(b2s)});
    out.push_back(check("thresholds/boundary-margins", worst < 1e-12,
                        "largest |margin| at the two boundary points = " + fmt(worst)));

    double mb = meets_loss_threshold(loss_rate_cavity(0.1, 0.2), 0.75).margin;
    bool below = meets_loss_threshold(loss_rate_cavity(0.049, 0.1), 0.75).pass;
    bool above = meets_loss_threshold(loss_rate_cavity(0.051, 0.1), 0.75).pass;
    out.push_back(check("thresholds/cavity-boundary", std::abs(mb) < 1e-12 && below && !above,
                        "margin at p2/p3 = 1/2 is " + fmt(mb) +
                            "; flips across the boundary: " + (below && !above ? "yes" : "no")));
    return out;
}

std::vector<CheckResult> verify_fusion() {
    std::vector<CheckResult> out;
    const std::vector<int> left{1, 2, 3}, right{4, 5, 6}, fused{1, 2, 5, 6};
    const DetectorModel ideal{1.0, false};

    auto outcomes = fuse_type_ii(Ensemble::pure(ghz_pure(left)), Ensemble::pure(ghz_pure(right)),
                                 3, 4, ideal);
    double p = success_probability(outcomes);
    out.push_back(check("fusion/ghz3-success-prob", std::abs(p - 0.5) <= 1e-12,
                        "enumerated Success probability = " + fmt(p)));
    double fid = fidelity_with_pure(success_conditioned(outcomes), ghz_pure(fused));
    out.push_back(check("fusion/ghz4-fidelity", fid >= 1.0 - 1e-12,
                        "fused-state fidelity with the 4-qubit GHZ = " + fmt(fid)));

    for (double f : {0.1, 0.25}) {
        auto oc = fuse_type_ii(id_ghz(IdGhzSpec{3, f, left}), id_ghz(IdGhzSpec{3, f, right}), 3,
                               4, ideal);
        Ensemble cond = success_conditioned(oc);
        double dist = trace_distance(cond, id_ghz(IdGhzSpec{4, f, fused}));
        auto fit = fit_id_ghz(cond, 4);
        out.push_back(check("fusion/id-f=" + fmt(f) + "/state", dist < 1e-9,
                            "trace distance to the 4-qubit ID state = " + fmt(dist)));
        out.push_back(check("fusion/id-f=" + fmt(f) + "/fitted-f",
                            std::abs(fit.f_hat - f) < 1e-9,
                            "fitted f = " + fmt(fit.f_hat)));
    }
    return out;
}

bool all_pass(const std::vector<CheckResult>& checks) {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

}  // namespace eprsim
