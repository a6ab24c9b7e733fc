#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "eprsim/errors.hpp"

namespace eprsim {

struct ThresholdCheck {
    bool pass = false;   // strict inequality
    double margin = 0.0;
};

/// Effective loss rate of the single-photon-source scheme,
/// f = 1 - eta_s / (2 - eta_s * eta_d).
double loss_rate_sps(double eta_s, double eta_d);

/// (1 - f) * eta_d > 1/2, with the signed margin.
ThresholdCheck meets_loss_threshold(double f, double eta_d);

/// eta_s * eta_d > 2/3, with the signed margin.
ThresholdCheck meets_sps_threshold(double eta_s, double eta_d);

/// f = p2 / (p2 + p3).
double loss_rate_cavity(double p2, double p3);

enum class Scheme { Epr, SinglePhoton, Cavity };

/// eta_s^3 eta_d^3 / 32 for the EPR scheme, / 256 for the single-photon one.
double success_prob_formula(Scheme scheme, double eta_s, double eta_d);

struct SweepAxis {
    std::string name;  // eta_s, eta_d, p2 or p3
    double min = 0.0;
    double max = 1.0;
    int steps = 2;
};

struct SweepSpec {
    Scheme scheme = Scheme::Epr;
    std::vector<SweepAxis> axes;                // row-major, first axis slowest
    std::map<std::string, double> fixed;        // values for parameters not swept
};

struct SweepRow {
    Scheme scheme = Scheme::Epr;
    std::optional<double> eta_s, eta_d, f, p2, p3;
    std::optional<double> success_prob;
    std::optional<double> margin_loss_threshold, margin_sps_threshold;
    bool pass = false;
};

std::vector<SweepRow> sweep(const SweepSpec& spec);

std::string scheme_name(Scheme scheme);
Scheme scheme_from_name(const std::string& name);

/// CSV with the fixed header scheme,eta_s,eta_d,f,p2,p3,success_prob,
/// margin_loss_threshold,margin_sps_threshold,pass; 12 significant digits.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace eprsim
