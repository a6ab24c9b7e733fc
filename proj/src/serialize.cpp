#include "eprsim/serialize.hpp"

namespace eprsim {

Json state_to_json(const Ensemble& ens) {
    Json j;
    j["modes"] = ens.declared_modes();
    Json branches = Json::array();
    for (const auto& b : ens.branches()) {
        Json comps = Json::array();
        for (const auto& [ket, amp] : b.state.amplitudes()) {
            comps.push_back({{"basis", ket.label()}, {"re", amp.real()}, {"im", amp.imag()}});
        }
        branches.push_back({{"weight", b.weight}, {"components", std::move(comps)}});
    }
    j["branches"] = std::move(branches);
    return j;
}

Ensemble state_from_json(const Json& j) {
    std::vector<int> modes = j.at("modes").get<std::vector<int>>();
    std::vector<Branch> branches;
    for (const auto& jb : j.at("branches")) {
        PureState st;
        st.declare_modes(modes);
        for (const auto& jc : jb.at("components")) {
            st.add_term(FockBasisState::from_label(jc.at("basis").get<std::string>()),
                        {jc.at("re").get<double>(), jc.at("im").get<double>()});
        }
        branches.push_back({jb.at("weight").get<double>(), std::move(st)});
    }
    if (branches.empty()) return Ensemble::empty_state(modes);
    return Ensemble::from_branches(std::move(branches));
}

Json element_to_json(const Element& elem) {
    if (const auto* pbs = std::get_if<Pbs>(&elem))
        return {{"kind", "pbs"}, {"modes", {pbs->mode_a, pbs->mode_b}}};
    if (const auto* rot = std::get_if<Rotator>(&elem))
        return {{"kind", "rotator"}, {"modes", {rot->mode}}, {"params", {{"angle", rot->angle}}}};
    if (const auto* pol = std::get_if<PolarizerH>(&elem))
        return {{"kind", "polarizer_h"}, {"modes", {pol->mode}}};
    const auto& loss = std::get<Loss>(elem);
    return {{"kind", "loss"},
            {"modes", {loss.mode}},
            {"params", {{"transmissivity", loss.transmissivity}}}};
}

Element element_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const auto modes = j.at("modes").get<std::vector<int>>();
    if (kind == "pbs") {
        if (modes.size() != 2) throw InvalidParamsError("pbs takes two modes");
        return Pbs{modes[0], modes[1]};
    }
    if (modes.size() != 1) throw InvalidParamsError(kind + " takes one mode");
    if (kind == "rotator") return Rotator{modes[0], j.at("params").at("angle").get<double>()};
    if (kind == "polarizer_h") return PolarizerH{modes[0]};
    if (kind == "loss")
        return Loss{modes[0], j.at("params").at("transmissivity").get<double>()};
    throw InvalidParamsError("unknown element kind: " + kind);
}

Json layout_to_json(const GhzCircuitLayout& layout) {
    Json elems = Json::array();
    for (const auto& e : layout.elements) elems.push_back(element_to_json(e));
    Json sources = Json::array();
    for (auto [a, b] : layout.source_modes) sources.push_back({a, b});
    return {{"elements", std::move(elems)},
            {"detector_modes", layout.detector_modes},
            {"output_modes", layout.output_modes},
            {"source_modes", std::move(sources)}};
}

GhzCircuitLayout layout_from_json(const Json& j) {
    GhzCircuitLayout layout;
    layout.elements.clear();
    for (const auto& je : j.at("elements")) layout.elements.push_back(element_from_json(je));
    auto det = j.at("detector_modes").get<std::vector<int>>();
    auto out = j.at("output_modes").get<std::vector<int>>();
    if (det.size() != 3 || out.size() != 3)
        throw InvalidParamsError("layout needs three detector and three output modes");
    std::copy(det.begin(), det.end(), layout.detector_modes.begin());
    std::copy(out.begin(), out.end(), layout.output_modes.begin());
    if (j.contains("source_modes")) {
        auto src = j.at("source_modes").get<std::vector<std::vector<int>>>();
        if (src.size() != 3) throw InvalidParamsError("layout needs three source pairs");
        for (std::size_t i = 0; i < 3; ++i) {
            if (src[i].size() != 2) throw InvalidParamsError("source pairs have two modes");
            layout.source_modes[i] = {src[i][0], src[i][1]};
        }
    }
    return layout;
}

std::string bell_form_name(BellForm form) {
    return form == BellForm::PhiPlus ? "phi-plus" : "psi-plus";
}

BellForm bell_form_from_name(const std::string& name) {
    if (name == "phi-plus") return BellForm::PhiPlus;
    if (name == "psi-plus") return BellForm::PsiPlus;
    throw InvalidParamsError("unknown bell form: " + name);
}

Json source_to_json(const SourceSpec& spec) {
    if (std::holds_alternative<PerfectEpr>(spec)) return {{"kind", "perfect-epr"}};
    if (const auto* h = std::get_if<HeraldedEpr>(&spec))
        return {{"kind", "heralded-epr"}, {"eta_s", h->eta_s}};
    if (const auto* s = std::get_if<SpdcEpr>(&spec))
        return {{"kind", "spdc"},
                {"eta_s", s->eta_s},
                {"x", s->x},
                {"double_pair", s->double_pair == DoublePairModel::IndependentPairs
                                    ? "independent"
                                    : "single-mode"}};
    const auto& c = std::get<CavityPair>(spec);
    return {{"kind", "cavity"}, {"p0", c.p0}, {"p1", c.p1}, {"p2", c.p2}, {"p3", c.p3},
            {"bell_form", bell_form_name(c.bell_form)}};
}

SourceSpec source_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "perfect-epr") return PerfectEpr{};
    if (kind == "heralded-epr") return HeraldedEpr{j.at("eta_s").get<double>()};
    if (kind == "spdc") {
        SpdcEpr s{j.at("eta_s").get<double>(), j.value("x", 1.0)};
        if (j.value("double_pair", "independent") == std::string("single-mode"))
            s.double_pair = DoublePairModel::SingleModeBosonic;
        return s;
    }
    if (kind == "cavity") {
        CavityPair c{j.at("p0").get<double>(), j.at("p1").get<double>(),
                     j.at("p2").get<double>(), j.at("p3").get<double>()};
        c.bell_form = bell_form_from_name(j.value("bell_form", "phi-plus"));
        return c;
    }
    throw InvalidParamsError("unknown source kind: " + kind);
}

Json detector_to_json(const DetectorModel& det) {
    return {{"efficiency", det.efficiency}, {"number_resolving", det.number_resolving}};
}

DetectorModel detector_from_json(const Json& j) {
    return {j.at("efficiency").get<double>(), j.at("number_resolving").get<bool>()};
}

Json result_to_json(const ConditionalResult& result) {
    Json j;
    j["probability"] = result.probability;
    j["clicked"] = result.pattern.clicked;
    if (result.pattern.counts) j["counts"] = *result.pattern.counts;
    j["state"] = state_to_json(result.state);
    return j;
}

Json report_to_json(const OutputReport& report) {
    Json j;
    j["probability"] = report.probability;
    j["ghz_fidelity"] = report.ghz_fidelity;
    j["ghz_coherent_weight"] = report.ghz_coherent_weight;
    j["diagonal_weights"] = report.diagonal_weights;
    j["class_weights"] = report.class_weights;
    j["fitted_f"] = report.fitted_f;
    j["fit_residual"] = report.fit_residual;
    return j;
}

Json fusion_outcomes_to_json(const std::vector<FusionOutcome>& outcomes) {
    Json arr = Json::array();
    for (const auto& o : outcomes) {
        Json j;
        switch (o.label) {
            case FusionLabel::Success: j["label"] = "success"; break;
            case FusionLabel::Failure: j["label"] = "failure"; break;
            case FusionLabel::LossDetected: j["label"] = "loss_detected"; break;
        }
        j["port_clicks"] = o.port_clicks;
        if (o.port_counts) j["port_counts"] = *o.port_counts;
        j["probability"] = o.probability;
        j["herald_flip_applied"] = o.herald_flip_applied;
        j["state"] = state_to_json(o.state);
        arr.push_back(std::move(j));
    }
    return arr;
}

Json sweep_spec_to_json(const SweepSpec& spec) {
    Json axes = Json::array();
    for (const auto& a : spec.axes)
        axes.push_back({{"name", a.name}, {"min", a.min}, {"max", a.max}, {"steps", a.steps}});
    return {{"scheme", scheme_name(spec.scheme)}, {"axes", std::move(axes)},
            {"fixed", spec.fixed}};
}

SweepSpec sweep_spec_from_json(const Json& j) {
    SweepSpec spec;
    spec.scheme = scheme_from_name(j.at("scheme").get<std::string>());
    for (const auto& ja : j.at("axes")) {
        spec.axes.push_back({ja.at("name").get<std::string>(), ja.at("min").get<double>(),
                             ja.at("max").get<double>(), ja.at("steps").get<int>()});
    }
    if (j.contains("fixed")) spec.fixed = j.at("fixed").get<std::map<std::string, double>>();
    return spec;
}

}  // namespace eprsim
