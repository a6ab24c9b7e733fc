#include "eprsim/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace eprsim {

namespace {

void check_unit_interval(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
        throw InvalidParamsError(std::string(name) + " must lie in [0, 1]");
}

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

double loss_rate_sps(double eta_s, double eta_d) {
    check_unit_interval(eta_s, "eta_s");
    check_unit_interval(eta_d, "eta_d");
    double f = 1.0 - eta_s / (2.0 - eta_s * eta_d);
    return std::clamp(f, 0.0, 1.0);
}

ThresholdCheck meets_loss_threshold(double f, double eta_d) {
    double margin = (1.0 - f) * eta_d - 0.5;
    return {margin > 0.0, margin};
}

ThresholdCheck meets_sps_threshold(double eta_s, double eta_d) {
    double margin = eta_s * eta_d - 2.0 / 3.0;
    return {margin > 0.0, margin};
}

double loss_rate_cavity(double p2, double p3) {
    if (p2 < 0.0 || p3 < 0.0) throw InvalidParamsError("p2 and p3 must be non-negative");
    if (p2 + p3 <= 0.0) throw InvalidParamsError("p2 + p3 must be positive");
    return p2 / (p2 + p3);
}

double success_prob_formula(Scheme scheme, double eta_s, double eta_d) {
    check_unit_interval(eta_s, "eta_s");
    check_unit_interval(eta_d, "eta_d");
    double base = std::pow(eta_s * eta_d, 3);
    switch (scheme) {
        case Scheme::Epr: return base / 32.0;
        case Scheme::SinglePhoton: return base / 256.0;
        case Scheme::Cavity: break;
    }
    throw InvalidParamsError("no closed-form success probability for this scheme");
}

std::string scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::Epr: return "epr";
        case Scheme::SinglePhoton: return "single_photon";
        case Scheme::Cavity: return "cavity";
    }
    throw InvalidParamsError("unknown scheme");
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "epr") return Scheme::Epr;
    if (name == "single_photon" || name == "single-photon") return Scheme::SinglePhoton;
    if (name == "cavity") return Scheme::Cavity;
    throw InvalidParamsError("unknown scheme: " + name);
}

namespace {

SweepRow evaluate_row(Scheme scheme, const std::map<std::string, double>& values) {
    auto get = [&](const char* name) -> std::optional<double> {
        auto it = values.find(name);
        if (it == values.end()) return std::nullopt;
        return it->second;
    };
    auto require = [&](const char* name) {
        auto v = get(name);
        if (!v) throw InvalidParamsError(std::string("sweep needs a value for ") + name);
        return *v;
    };

    SweepRow row;
    row.scheme = scheme;
    row.eta_s = get("eta_s");
    row.eta_d = get("eta_d");
    row.p2 = get("p2");
    row.p3 = get("p3");
    switch (scheme) {
        case Scheme::Epr: {
            double eta_s = require("eta_s"), eta_d = require("eta_d");
            row.f = 0.0;  // the conditioned state carries no loss
            row.success_prob = success_prob_formula(Scheme::Epr, eta_s, eta_d);
            break;
        }
        case Scheme::SinglePhoton: {
            double eta_s = require("eta_s"), eta_d = require("eta_d");
            row.f = loss_rate_sps(eta_s, eta_d);
            row.success_prob = success_prob_formula(Scheme::SinglePhoton, eta_s, eta_d);
            row.margin_sps_threshold = meets_sps_threshold(eta_s, eta_d).margin;
            break;
        }
        case Scheme::Cavity: {
            row.f = loss_rate_cavity(require("p2"), require("p3"));
            break;
        }
    }
    auto check = meets_loss_threshold(*row.f, require("eta_d"));
    row.margin_loss_threshold = check.margin;
    row.pass = check.pass;
    return row;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepSpec& spec) {
    if (spec.axes.empty()) throw InvalidParamsError("sweep needs at least one axis");
    for (const auto& axis : spec.axes) {
        if (axis.steps < 2) throw InvalidParamsError("axis steps must be at least 2");
        if (!(axis.min <= axis.max)) throw InvalidParamsError("axis bounds out of order");
        if (axis.name != "eta_s" && axis.name != "eta_d" && axis.name != "p2" &&
            axis.name != "p3")
            throw InvalidParamsError("unknown sweep axis: " + axis.name);
    }

    std::vector<SweepRow> rows;
    std::vector<int> idx(spec.axes.size(), 0);
    while (true) {
        std::map<std::string, double> values = spec.fixed;
        for (std::size_t i = 0; i < spec.axes.size(); ++i) {
            const auto& axis = spec.axes[i];
            double t = static_cast<double>(idx[i]) / static_cast<double>(axis.steps - 1);
            values[axis.name] = axis.min + t * (axis.max - axis.min);
        }
        rows.push_back(evaluate_row(spec.scheme, values));

        std::size_t k = spec.axes.size();
        while (k > 0) {
            --k;
            if (++idx[k] < spec.axes[k].steps) break;
            idx[k] = 0;
            if (k == 0) return rows;
        }
    }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "scheme,eta_s,eta_d,f,p2,p3,success_prob,margin_loss_threshold,"
           "margin_sps_threshold,pass\n";
    auto cell = [](const std::optional<double>& v) { return v ? fmt12(*v) : std::string(); };
    for (const auto& row : rows) {
        out << scheme_name(row.scheme) << ',' << cell(row.eta_s) << ',' << cell(row.eta_d) << ','
            << cell(row.f) << ',' << cell(row.p2) << ',' << cell(row.p3) << ','
            << cell(row.success_prob) << ',' << cell(row.margin_loss_threshold) << ','
            << cell(row.margin_sps_threshold) << ',' << (row.pass ? "true" : "false") << '\n';
    }
}

}  // namespace eprsim
