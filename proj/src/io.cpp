#include "bistab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "bistab/errors.hpp"

namespace bistab {

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
    if (!j.is_object()) throw ValidationError(what + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) throw ValidationError("unknown field '" + it.key() + "' in " + what);
    }
}

double number(const Json& j, const char* key, const std::string& what, std::optional<double> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw ValidationError(what + ": missing field '" + key + "'");
    }
    const Json& v = j.at(key);
    if (!v.is_number()) throw ValidationError(what + ": field '" + key + "' must be a number");
    return v.get<double>();
}

std::vector<double> number_list(const Json& j, const char* key, const std::string& what) {
    if (!j.contains(key)) return {};
    const Json& v = j.at(key);
    if (!v.is_array()) throw ValidationError(what + ": field '" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ValidationError(what + ": '" + key + "' entries must be numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Json trajectory_samples(const Trajectory& traj, int samples) {
    Json arr = Json::array();
    if (samples <= 0 || traj.times.empty()) return arr;
    const double a = std::min(traj.t_begin(), traj.t_end());
    const double b = std::max(traj.t_begin(), traj.t_end());
    for (int k = 0; k <= samples; ++k) {
        const double t = a + (b - a) * static_cast<double>(k) / static_cast<double>(samples);
        arr.push_back(Json::array({t, traj.at(t)}));
    }
    return arr;
}

}  // namespace

SignalSpec signal_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw ValidationError("signal must be an object with a string field 'type'");
    }
    const std::string type = j.at("type").get<std::string>();
    SignalSpec out;
    if (type == "constant") {
        check_keys(j, {"type", "a0"}, "constant signal");
        out = ConstantSignal{number(j, "a0", "constant signal")};
    } else if (type == "trig") {
        check_keys(j, {"type", "a0", "terms", "rationally_independent"}, "trig signal");
        TrigSumSignal s;
        s.a0 = number(j, "a0", "trig signal", 0.0);
        if (j.contains("terms")) {
            if (!j.at("terms").is_array()) throw ValidationError("trig signal: 'terms' must be an array");
            for (const auto& t : j.at("terms")) {
                check_keys(t, {"amplitude", "frequency", "phase"}, "trig term");
                s.terms.push_back({number(t, "amplitude", "trig term"), number(t, "frequency", "trig term"),
                                   number(t, "phase", "trig term", 0.0)});
            }
        }
        if (j.contains("rationally_independent")) {
            if (!j.at("rationally_independent").is_boolean()) {
                throw ValidationError("trig signal: 'rationally_independent' must be a boolean");
            }
            s.rationally_independent = j.at("rationally_independent").get<bool>();
        }
        out = s;
    } else if (type == "fourier_cesaro") {
        check_keys(j, {"type", "a0", "a", "b", "N"}, "fourier_cesaro signal");
        FourierCesaroSignal s;
        s.a0 = number(j, "a0", "fourier_cesaro signal", 0.0);
        s.a = number_list(j, "a", "fourier_cesaro signal");
        s.b = number_list(j, "b", "fourier_cesaro signal");
        if (!j.contains("N") || !j.at("N").is_number_integer()) {
            throw ValidationError("fourier_cesaro signal: 'N' must be an integer");
        }
        s.order = j.at("N").get<int>();
        out = s;
    } else if (type == "sampled") {
        check_keys(j, {"type", "period", "samples"}, "sampled signal");
        SampledPeriodicSignal s;
        s.period = number(j, "period", "sampled signal");
        if (!j.contains("samples") || !j.at("samples").is_array()) {
            throw ValidationError("sampled signal: 'samples' must be an array of [t, value] pairs");
        }
        for (const auto& p : j.at("samples")) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
                throw ValidationError("sampled signal: each sample must be a [t, value] pair");
            }
            s.samples.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
        out = s;
    } else {
        throw ValidationError("unknown signal type '" + type + "'");
    }
    validate(out);
    return out;
}

Json to_json(const SignalSpec& signal) {
    return std::visit(overloaded{
                          [](const ConstantSignal& s) { return Json{{"type", "constant"}, {"a0", s.a0}}; },
                          [](const TrigSumSignal& s) {
                              Json terms = Json::array();
                              for (const auto& t : s.terms) {
                                  terms.push_back(
                                      {{"amplitude", t.amplitude}, {"frequency", t.frequency}, {"phase", t.phase}});
                              }
                              return Json{{"type", "trig"},
                                          {"a0", s.a0},
                                          {"terms", terms},
                                          {"rationally_independent", s.rationally_independent}};
                          },
                          [](const FourierCesaroSignal& s) {
                              return Json{{"type", "fourier_cesaro"}, {"a0", s.a0}, {"a", s.a}, {"b", s.b},
                                          {"N", s.order}};
                          },
                          [](const SampledPeriodicSignal& s) {
                              Json samples = Json::array();
                              for (const auto& [t, v] : s.samples) samples.push_back(Json::array({t, v}));
                              return Json{{"type", "sampled"}, {"period", s.period}, {"samples", samples}};
                          },
                      },
                      signal);
}

SignalSpec load_signal(const std::string& path_or_inline) {
    std::string text;
    const auto first = path_or_inline.find_first_not_of(" \t\n");
    if (first != std::string::npos && path_or_inline[first] == '{') {
        text = path_or_inline;
    } else {
        std::ifstream in(path_or_inline);
        if (!in) throw ValidationError("cannot open signal file '" + path_or_inline + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("malformed signal JSON: ") + e.what());
    }
    return signal_from_json(j);
}

Json to_json(const ScalarDiagnostics& d) {
    return Json{{"c", d.c},
                {"x1", optional_number(d.x1)},
                {"x2", optional_number(d.x2)},
                {"lam1", optional_number(d.lam1)},
                {"lam2", optional_number(d.lam2)},
                {"lam3", d.lam3},
                {"lam4", d.lam4},
                {"h1", optional_number(d.h1)},
                {"h2", optional_number(d.h2)},
                {"h3", optional_number(d.h3)},
                {"h4", optional_number(d.h4)},
                {"dfrak", d.dfrak},
                {"cshift", d.cshift},
                {"alpha", optional_number(d.alpha)},
                {"beta", optional_number(d.beta)},
                {"band_lo", d.band_lo},
                {"band_hi", d.band_hi}};
}

Json to_json(const SignalBounds& b) { return Json{{"sup", b.sup}, {"inf", b.inf}, {"exact", b.exact}}; }

Json to_json(const WeightedBounds& w) {
    return Json{{"sup_w", w.sup_w}, {"inf_w", w.inf_w}, {"dfrak", w.dfrak}, {"exact", w.exact}};
}

Json to_json(const IntervalEstimate& iv) {
    return Json{{"name", iv.name},   {"lower", iv.lower},   {"upper", iv.upper}, {"kind", to_string(iv.kind)},
                {"basis", iv.basis}, {"empty", iv.empty}, {"closed", iv.closed}};
}

Json to_json(const RegimeCertificate& cert) {
    Json intervals = Json::array();
    for (const auto& iv : cert.intervals) intervals.push_back(to_json(iv));
    Json slacks = Json::object();
    for (const auto& [k, v] : cert.slacks) slacks[k] = v;
    return Json{{"regime", to_string(cert.regime)},
                {"fired_rule", cert.fired_rule.empty() ? Json(nullptr) : Json(cert.fired_rule)},
                {"intervals", intervals},
                {"slacks", slacks},
                {"notes", cert.notes}};
}

Json to_json(const PeriodicSolution& s, int samples) {
    Json j{{"period", s.period},
           {"fixed_point", s.fixed_point},
           {"multiplier", s.multiplier},
           {"log_multiplier", s.log_multiplier},
           {"kind", to_string(s.kind)},
           {"residual", s.residual}};
    if (samples > 0 && !s.samples.times.empty()) j["samples"] = trajectory_samples(s.samples, samples);
    return j;
}

Json to_json(const Census& c, int samples) {
    Json sols = Json::array();
    for (const auto& s : c.solutions) sols.push_back(to_json(s, samples));
    return Json{{"count", c.solutions.size()}, {"solutions", sols},        {"scan_lo", c.scan_lo},
                {"scan_hi", c.scan_hi},        {"rho", c.rho},             {"grid_points", c.grid_points},
                {"warnings", c.warnings}};
}

Json to_json(const LambdaPm& pm) {
    return Json{{"lambda_minus", pm.lambda_minus},
                {"lambda_plus", pm.lambda_plus},
                {"bracket_minus", pm.bracket_minus},
                {"bracket_plus", pm.bracket_plus},
                {"sandwich_minus", Json::array({pm.sandwich_minus.first, pm.sandwich_minus.second})},
                {"sandwich_plus", Json::array({pm.sandwich_plus.first, pm.sandwich_plus.second})},
                {"census_calls", pm.census_calls}};
}

Json to_json(const LoopResult& r, bool include_loop) {
    Json sols = Json::array();
    for (const auto& s : r.solutions) sols.push_back(to_json(s));
    Json j{{"c", r.spec.c},
           {"eps", r.spec.eps},
           {"r", r.spec.r},
           {"regime", to_string(r.regime)},
           {"n_fixed_points", r.n_fixed_points},
           {"area", r.area},
           {"gamma_area", r.gamma_area},
           {"hausdorff_to_gamma", r.hausdorff_to_gamma},
           {"solutions", sols},
           {"warnings", r.warnings}};
    if (include_loop) {
        Json loop = Json::array();
        for (const auto& [y, x] : r.loop) loop.push_back(Json::array({y, x}));
        j["loop"] = loop;
    }
    return j;
}

Json to_json(const ThresholdResult& t) {
    return Json{{"r", t.r},
                {"r_lo", t.r_lo},
                {"r_hi", t.r_hi},
                {"regime_below", to_string(t.regime_lo)},
                {"regime_above", to_string(t.regime_hi)},
                {"evaluations", t.evaluations}};
}

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace bistab
