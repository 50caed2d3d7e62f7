// bistab: command-line front end for the driven bistability model.
//
// Exit codes: 0 success, 1 computational failure, 2 invalid input.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bistab/criteria.hpp"
#include "bistab/dynamics.hpp"
#include "bistab/errors.hpp"
#include "bistab/io.hpp"
#include "bistab/model.hpp"
#include "bistab/parallel.hpp"
#include "bistab/relaxation.hpp"
#include "bistab/signals.hpp"

#ifndef BISTAB_VERSION
#define BISTAB_VERSION "dev"
#endif

using namespace bistab;

namespace {

struct Options {
    double c = 5.0;
    double lambda = 0.0;
    std::string lambda_list;
    std::string c_list;
    std::string signal;
    std::string eps = "0.01";
    std::string r = "1.0";
    std::string grid;
    double tol = 0.0;
    std::string format = "json";
    std::string out;
    int jobs = 1;
    std::string config;
    std::optional<double> dfrak;
    std::string kind = "full";
    double period = 0.0;
    int samples = 0;
    bool lambda_pm = false;
    bool hull_excludes_constants = false;
    bool with_threshold = false;
    double r_lo = 0.5;
    double r_hi = 2.0;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError(std::string("--") + what + ": cannot parse '" + item + "' as a number");
        }
    }
    if (out.empty()) throw ValidationError(std::string("--") + what + " needs at least one value");
    return out;
}

// "lo:hi:n" -> n evenly spaced values.
std::vector<double> parse_range(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_list(item, "grid").front());
    if (parts.size() != 3 || parts[2] < 1 || std::floor(parts[2]) != parts[2]) {
        throw ValidationError("--grid expects lo:hi:n with an integer n >= 1");
    }
    const int n = static_cast<int>(parts[2]);
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        out.push_back(n == 1 ? parts[0] : parts[0] + (parts[1] - parts[0]) * i / static_cast<double>(n - 1));
    }
    return out;
}

int parse_int(const std::string& text, const char* what) {
    const double v = parse_list(text, what).front();
    if (std::floor(v) != v || v < 1 || v > 1e8) throw ValidationError(std::string("--") + what + " expects a positive integer");
    return static_cast<int>(v);
}

SignalSpec signal_or_zero(const Options& o) {
    return o.signal.empty() ? SignalSpec{ConstantSignal{0.0}} : load_signal(o.signal);
}

RhsKind parse_kind(const std::string& k) {
    if (k == "full") return RhsKind::Full;
    if (k == "concave-linear") return RhsKind::ConcaveLinear;
    if (k == "linear-convex") return RhsKind::LinearConvex;
    throw ValidationError("--kind must be full, concave-linear or linear-convex");
}

class Output {
public:
    explicit Output(const Options& o) : opts_(o) {
        if (o.format != "json" && o.format != "csv") throw ValidationError("--format must be json or csv");
    }
    bool csv() const { return opts_.format == "csv"; }

    void write(const std::string& text) const {
        if (opts_.out.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(opts_.out, std::ios::binary);
        if (!f) throw ValidationError("cannot open output file '" + opts_.out + "'");
        f << text;
    }

    void json(const std::string& command, const Json& config, const Json& result) const {
        Json doc{{"tool", "bistab"}, {"version", BISTAB_VERSION}, {"command", command}, {"config", config},
                 {"result", result}};
        write(doc.dump(2) + "\n");
    }

private:
    const Options& opts_;
};

std::string csv_row(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    return line + "\n";
}

Json base_config(const Options& o) {
    Json j{{"format", o.format}, {"jobs", o.jobs}};
    if (!o.config.empty()) j["config_file"] = o.config;
    return j;
}

CensusOptions census_options(const Options& o) {
    CensusOptions co;
    if (!o.grid.empty()) co.initial_grid = parse_int(o.grid, "grid");
    co.max_grid = std::max(co.max_grid, co.initial_grid);
    if (o.tol > 0.0) co.x_tol = o.tol;
    co.jobs = o.jobs;
    return co;
}

Json census_config(const CensusOptions& co) {
    return Json{{"initial_grid", co.initial_grid},
                {"max_grid", co.max_grid},
                {"x_tol", co.x_tol},
                {"hyperbolicity_tol", co.hyperbolicity_tol},
                {"atol", co.integrator.atol},
                {"rtol", co.integrator.rtol},
                {"escape_bound", co.integrator.escape_bound}};
}

void cmd_diagnostics(const Options& o) {
    const ScalarDiagnostics d = diagnostics(o.c);
    Output out(o);
    if (out.csv()) {
        const Json j = to_json(d);
        std::vector<std::string> head, row;
        for (auto it = j.begin(); it != j.end(); ++it) {
            head.push_back(it.key());
            row.push_back(it->is_null() ? "" : csv_number(it->get<double>()));
        }
        out.write(csv_row(head) + csv_row(row));
        return;
    }
    Json cfg = base_config(o);
    cfg["c"] = o.c;
    out.json("diagnostics", cfg, to_json(d));
}

void cmd_classify(const Options& o) {
    const SignalSpec signal = signal_or_zero(o);
    ClassifyOptions co;
    co.hull_excludes_constants = o.hull_excludes_constants;
    if (!o.grid.empty()) co.extrema.points_per_period = parse_int(o.grid, "grid");
    const RegimeCertificate cert = classify(o.c, o.lambda, signal, co);
    Output out(o);
    if (out.csv()) {
        std::string text = csv_row({"name", "lower", "upper", "kind", "basis", "empty", "closed", "regime", "fired_rule"});
        for (const auto& iv : cert.intervals) {
            text += csv_row({iv.name, csv_number(iv.lower), csv_number(iv.upper), to_string(iv.kind), iv.basis,
                             iv.empty ? "true" : "false", iv.closed ? "true" : "false", to_string(cert.regime),
                             cert.fired_rule});
        }
        out.write(text);
        return;
    }
    Json cfg = base_config(o);
    cfg["c"] = o.c;
    cfg["lambda"] = o.lambda;
    cfg["signal"] = to_json(signal);
    cfg["hull_excludes_constants"] = o.hull_excludes_constants;
    cfg["points_per_period"] = co.extrema.points_per_period;
    out.json("classify", cfg, to_json(cert));
}

void cmd_bifurcation(const Options& o) {
    std::vector<double> lambdas;
    if (!o.grid.empty()) lambdas = parse_range(o.grid);
    if (!o.lambda_list.empty()) {
        const auto extra = parse_list(o.lambda_list, "lambda");
        lambdas.insert(lambdas.end(), extra.begin(), extra.end());
    }
    if (lambdas.empty()) throw ValidationError("bifurcation needs --lambda values or a --grid lo:hi:n");
    const double tol = o.tol > 0.0 ? o.tol : 1e-6;
    Output out(o);
    std::string text = csv_row({"lambda", "x", "slope", "stability"});
    Json rows = Json::array();
    for (double lam : lambdas) {
        for (const auto& e : equilibria(o.c, lam, tol)) {
            text += csv_row({csv_number(lam), csv_number(e.x), csv_number(e.slope), to_string(e.stability)});
            rows.push_back({{"lambda", lam}, {"x", e.x}, {"slope", e.slope}, {"stability", to_string(e.stability)}});
        }
    }
    if (out.csv()) {
        out.write(text);
        return;
    }
    Json cfg = base_config(o);
    cfg["c"] = o.c;
    cfg["lambda"] = lambdas;
    cfg["hyperbolicity_tol"] = tol;
    out.json("bifurcation", cfg, Json{{"equilibria", rows}});
}

void cmd_poincare(const Options& o) {
    const SignalSpec signal = signal_or_zero(o);
    CensusOptions co = census_options(o);
    Output out(o);
    Json cfg = base_config(o);
    cfg["c"] = o.c;
    cfg["signal"] = to_json(signal);
    cfg["census"] = census_config(co);
    if (o.lambda_pm) {
        LambdaPmOptions lo;
        lo.census = co;
        if (o.tol > 0.0) lo.tol = o.tol;
        lo.census.x_tol = 1e-10;
        const LambdaPm pm = estimate_lambda_pm(o.c, signal, lo);
        cfg["tol"] = lo.tol;
        cfg["separation"] = lo.separation;
        if (out.csv()) {
            out.write(csv_row({"lambda_minus", "lambda_plus", "bracket_minus", "bracket_plus"}) +
                      csv_row({csv_number(pm.lambda_minus), csv_number(pm.lambda_plus),
                               csv_number(pm.bracket_minus), csv_number(pm.bracket_plus)}));
            return;
        }
        out.json("poincare", cfg, to_json(pm));
        return;
    }
    const OdeSpec spec{o.c, o.lambda, signal, parse_kind(o.kind)};
    const double T = o.period > 0.0 ? o.period : census_period(signal);
    co.keep_samples = o.samples > 0;
    const Census census = find_periodic_solutions(spec, T, co);
    if (out.csv() && o.samples > 0) {
        std::string text = csv_row({"solution", "t", "x"});
        for (std::size_t i = 0; i < census.solutions.size(); ++i) {
            const Trajectory& tr = census.solutions[i].samples;
            for (int k = 0; k <= o.samples; ++k) {
                const double t = T * k / static_cast<double>(o.samples);
                text += csv_row({std::to_string(i), csv_number(t), csv_number(tr.at(t))});
            }
        }
        out.write(text);
        return;
    }
    if (out.csv()) {
        std::string text = csv_row({"index", "fixed_point", "multiplier", "log_multiplier", "kind", "residual"});
        for (std::size_t i = 0; i < census.solutions.size(); ++i) {
            const auto& s = census.solutions[i];
            text += csv_row({std::to_string(i), csv_number(s.fixed_point), csv_number(s.multiplier),
                             csv_number(s.log_multiplier), to_string(s.kind), csv_number(s.residual)});
        }
        out.write(text);
        return;
    }
    cfg["lambda"] = o.lambda;
    cfg["kind"] = o.kind;
    cfg["period"] = T;
    cfg["samples"] = o.samples;
    out.json("poincare", cfg, to_json(census, o.samples));
}

RelaxationOptions relaxation_options(const Options& o) {
    RelaxationOptions ro;
    ro.census = census_options(o);
    ro.census.jobs = 1;
    return ro;
}

void cmd_relaxation(const Options& o) {
    const RelaxationSpec spec{o.c, parse_list(o.eps, "eps").front(), parse_list(o.r, "r").front()};
    RelaxationOptions ro = relaxation_options(o);
    ro.census.jobs = o.jobs;
    const LoopResult res = run_analysis(spec, ro);
    Output out(o);
    if (out.csv()) {
        std::string text = csv_row({"y", "x"});
        for (const auto& [y, x] : res.loop) text += csv_row({csv_number(y), csv_number(x)});
        out.write(text);
        return;
    }
    Json cfg = base_config(o);
    cfg["c"] = spec.c;
    cfg["eps"] = spec.eps;
    cfg["r"] = spec.r;
    cfg["census"] = census_config(ro.census);
    cfg["loop_samples"] = ro.loop_samples;
    cfg["gamma_points"] = ro.gamma_points;
    out.json("relaxation", cfg, to_json(res));
}

void cmd_threshold(const Options& o) {
    const std::vector<double> eps = parse_list(o.eps, "eps");
    const double tol = o.tol > 0.0 ? o.tol : 1e-4;
    RelaxationOptions ro = relaxation_options(o);
    ro.census.x_tol = 1e-10;
    std::vector<ThresholdResult> results(eps.size());
    parallel_for(eps.size(), o.jobs, [&](std::size_t i) { results[i] = r_threshold(o.c, eps[i], tol, o.r_lo, o.r_hi, ro); });
    Output out(o);
    if (out.csv()) {
        std::string text = csv_row({"c", "eps", "threshold", "r_lo", "r_hi", "regime_below", "regime_above"});
        for (std::size_t i = 0; i < eps.size(); ++i) {
            const auto& t = results[i];
            text += csv_row({csv_number(o.c), csv_number(eps[i]), csv_number(t.r), csv_number(t.r_lo),
                             csv_number(t.r_hi), to_string(t.regime_lo), to_string(t.regime_hi)});
        }
        out.write(text);
        return;
    }
    Json cfg = base_config(o);
    cfg["c"] = o.c;
    cfg["eps"] = eps;
    cfg["tol"] = tol;
    cfg["r_lo"] = o.r_lo;
    cfg["r_hi"] = o.r_hi;
    cfg["census"] = census_config(ro.census);
    Json rows = Json::array();
    for (std::size_t i = 0; i < eps.size(); ++i) {
        Json row = to_json(results[i]);
        row["eps"] = eps[i];
        rows.push_back(row);
    }
    out.json("threshold", cfg, Json{{"thresholds", rows}});
}

void cmd_laplace(const Options& o) {
    if (o.signal.empty()) throw ValidationError("laplace needs --signal");
    const SignalSpec signal = load_signal(o.signal);
    const double dfrak = o.dfrak.value_or(dfrak_of(o.c));
    ExtremaOptions eo;
    if (!o.grid.empty()) eo.points_per_period = parse_int(o.grid, "grid");
    const SignalBounds b = bounds(signal, eo);
    const WeightedBounds w = weighted_bounds(signal, dfrak, eo);
    Json res{{"bounds", to_json(b)},
             {"weighted", to_json(w)},
             {"sup_w_minus_inf", w.sup_w - b.inf},
             {"sup_minus_inf_w", b.sup - w.inf_w}};
    double bound = std::nan("");
    if (const auto* t = std::get_if<TrigSumSignal>(&signal)) bound = series_bound(t->terms, dfrak);
    if (const auto* f = std::get_if<FourierCesaroSignal>(&signal)) bound = cesaro_bound(f->a, f->b, dfrak, f->order);
    res["series_bound"] = std::isnan(bound) ? Json(nullptr) : Json(bound);
    Output out(o);
    if (out.csv()) {
        out.write(csv_row({"dfrak", "sup", "inf", "sup_w", "inf_w", "sup_w_minus_inf", "sup_minus_inf_w", "series_bound"}) +
                  csv_row({csv_number(dfrak), csv_number(b.sup), csv_number(b.inf), csv_number(w.sup_w),
                           csv_number(w.inf_w), csv_number(w.sup_w - b.inf), csv_number(b.sup - w.inf_w),
                           std::isnan(bound) ? "" : csv_number(bound)}));
        return;
    }
    Json cfg = base_config(o);
    cfg["signal"] = to_json(signal);
    cfg["dfrak"] = dfrak;
    cfg["points_per_period"] = eo.points_per_period;
    out.json("laplace", cfg, res);
}

void cmd_sweep(const Options& o) {
    const std::vector<double> cs = parse_list(o.c_list, "c");
    const std::vector<double> eps = parse_list(o.eps, "eps");
    const std::vector<double> rs = parse_list(o.r, "r");
    const double tol = o.tol > 0.0 ? o.tol : 1e-4;
    RelaxationOptions ro = relaxation_options(o);

    struct Item {
        double c, eps, r;
        LoopResult res;
    };
    std::vector<Item> items;
    for (double c : cs)
        for (double e : eps)
            for (double r : rs) items.push_back({c, e, r, {}});
    parallel_for(items.size(), o.jobs, [&](std::size_t i) {
        items[i].res = run_analysis(RelaxationSpec{items[i].c, items[i].eps, items[i].r}, ro);
    });
    std::vector<std::pair<double, double>> keys;
    for (double c : cs)
        for (double e : eps) keys.emplace_back(c, e);
    std::vector<double> thresholds(keys.size(), std::nan(""));
    if (o.with_threshold) {
        RelaxationOptions tro = ro;
        tro.census.x_tol = 1e-10;
        parallel_for(keys.size(), o.jobs, [&](std::size_t i) {
            thresholds[i] = r_threshold(keys[i].first, keys[i].second, tol, o.r_lo, o.r_hi, tro).r;
        });
    }
    auto threshold_of = [&](double c, double e) {
        for (std::size_t i = 0; i < keys.size(); ++i)
            if (keys[i].first == c && keys[i].second == e) return thresholds[i];
        return std::nan("");
    };
    Output out(o);
    std::string text = csv_row({"c", "eps", "r", "n_fixed_points", "regime", "area", "gamma_area", "hausdorff", "threshold"});
    Json rows = Json::array();
    for (const auto& it : items) {
        const double th = threshold_of(it.c, it.eps);
        text += csv_row({csv_number(it.c), csv_number(it.eps), csv_number(it.r), std::to_string(it.res.n_fixed_points),
                         to_string(it.res.regime), csv_number(it.res.area), csv_number(it.res.gamma_area),
                         csv_number(it.res.hausdorff_to_gamma), std::isnan(th) ? "" : csv_number(th)});
        Json row = to_json(it.res, false);
        row["threshold"] = std::isnan(th) ? Json(nullptr) : Json(th);
        rows.push_back(row);
    }
    if (out.csv()) {
        out.write(text);
        return;
    }
    Json cfg = base_config(o);
    cfg["c"] = cs;
    cfg["eps"] = eps;
    cfg["r"] = rs;
    cfg["threshold"] = o.with_threshold;
    cfg["tol"] = tol;
    cfg["census"] = census_config(ro.census);
    out.json("sweep", cfg, Json{{"rows", rows}});
}

// Expands a --config JSON object into option tokens placed right after the
// subcommand, so that explicit command-line flags (parsed later) win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("malformed config JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config file must hold a JSON object");
    std::vector<std::string> tokens;
    auto scalar = [](const Json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        if (v.is_number()) return csv_number(v.get<double>());
        throw ValidationError("config values must be numbers, strings, booleans or arrays of numbers");
    };
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string flag = "--" + it.key();
        if (it.key() == "config") throw ValidationError("config files cannot nest --config");
        if (it->is_boolean()) {
            if (it->get<bool>()) tokens.push_back(flag);
        } else if (it->is_array()) {
            std::string joined;
            for (const auto& e : *it) joined += (joined.empty() ? "" : ",") + scalar(e);
            tokens.push_back(flag);
            tokens.push_back(joined);
        } else if (it.key() == "signal" && it->is_object()) {
            tokens.push_back(flag);
            tokens.push_back(it->dump());
        } else {
            tokens.push_back(flag);
            tokens.push_back(scalar(*it));
        }
    }
    std::size_t sub = 1;
    while (sub < args.size() && !args[sub].empty() && args[sub][0] == '-') ++sub;
    if (sub >= args.size()) return args;
    args.insert(args.begin() + static_cast<long>(sub) + 1, tokens.begin(), tokens.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Closed-form diagnostics, stability criteria and simulations for x' = lambda + y(t) + gbar(x)"};
    app.set_version_flag("--version", BISTAB_VERSION);
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub) {
        sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        sub->add_option("--format", o.format, "Output format: json or csv")->capture_default_str();
        sub->add_option("--out", o.out, "Output file (default: stdout)");
        sub->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str()->check(CLI::Range(1, 1024));
        sub->add_option("--config", o.config, "JSON file of option values; explicit flags take precedence");
    };
    auto with_c = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--c", o.c, "Material constant c > 0");
        if (required) opt->required();
    };

    auto* diag = app.add_subcommand("diagnostics", "Scalar diagnostics of the autonomous problem");
    common(diag);
    with_c(diag, true);

    auto* cls = app.add_subcommand("classify", "Regime certificate for (c, lambda, y)");
    common(cls);
    with_c(cls, true);
    cls->add_option("--lambda", o.lambda, "Parameter lambda")->required();
    cls->add_option("--signal", o.signal, "Signal JSON file or inline JSON (default: y = 0)");
    cls->add_option("--grid", o.grid, "Grid points per period for extremes");
    cls->add_flag("--hull-excludes-constants", o.hull_excludes_constants,
                  "Assert that inf y and sup y are not limits of time-shifts of y");

    auto* bif = app.add_subcommand("bifurcation", "Autonomous equilibria with stability tags");
    common(bif);
    with_c(bif, true);
    bif->add_option("--lambda", o.lambda_list, "Comma-separated lambda values");
    bif->add_option("--grid", o.grid, "Lambda grid lo:hi:n");
    bif->add_option("--tol", o.tol, "Hyperbolicity tolerance on |g'(x)| (default 1e-6)");

    auto* poi = app.add_subcommand("poincare", "Periodic solutions of the period map");
    common(poi);
    with_c(poi, true);
    poi->add_option("--lambda", o.lambda, "Parameter lambda");
    poi->add_option("--signal", o.signal, "Signal JSON file or inline JSON (default: y = 0)");
    poi->add_option("--kind", o.kind, "full, concave-linear or linear-convex")->capture_default_str();
    poi->add_option("--period", o.period, "Map period (default: the signal's period, 1 for constants)");
    poi->add_option("--grid", o.grid, "Initial scan grid size (default 512)");
    poi->add_option("--tol", o.tol, "Bisection tolerance in x (default 1e-10); lambda tolerance with --lambda-pm");
    poi->add_option("--samples", o.samples, "Samples per solution over one period in JSON output");
    poi->add_flag("--lambda-pm", o.lambda_pm, "Estimate the bifurcation values lambda_- and lambda_+");

    auto* rel = app.add_subcommand("relaxation", "Periodic solutions and hysteresis loop under slow forcing");
    common(rel);
    with_c(rel, true);
    rel->add_option("--eps", o.eps, "Forcing frequency eps in (0, 1)")->required();
    rel->add_option("--r", o.r, "Amplitude exponent r > 0")->required();
    rel->add_option("--grid", o.grid, "Initial scan grid size (default 512)");
    rel->add_option("--tol", o.tol, "Bisection tolerance in x (default 1e-10)");

    auto* thr = app.add_subcommand("threshold", "Regime-change value of r for each eps");
    common(thr);
    with_c(thr, true);
    thr->add_option("--eps", o.eps, "Comma-separated eps values")->required();
    thr->add_option("--tol", o.tol, "Bracket width in r (default 1e-4)");
    thr->add_option("--r-lo", o.r_lo, "Lower end of the r bracket")->capture_default_str();
    thr->add_option("--r-hi", o.r_hi, "Upper end of the r bracket")->capture_default_str();
    thr->add_option("--grid", o.grid, "Initial scan grid size (default 512)");

    auto* lap = app.add_subcommand("laplace", "Plain and exponentially weighted extremes of a signal");
    common(lap);
    with_c(lap, false);
    lap->add_option("--signal", o.signal, "Signal JSON file or inline JSON")->required();
    lap->add_option("--dfrak", o.dfrak, "Weight rate d > 0 (default c/4 - 1)");
    lap->add_option("--grid", o.grid, "Grid points per period");

    auto* swp = app.add_subcommand("sweep", "Relaxation analyses over c, eps and r grids");
    common(swp);
    swp->add_option("--c", o.c_list, "Comma-separated c values")->required();
    swp->add_option("--eps", o.eps, "Comma-separated eps values")->required();
    swp->add_option("--r", o.r, "Comma-separated r values")->required();
    swp->add_option("--grid", o.grid, "Initial scan grid size (default 512)");
    swp->add_option("--tol", o.tol, "Threshold bracket width (default 1e-4)");
    swp->add_flag("--threshold", o.with_threshold, "Also compute the r threshold for each (c, eps)");
    swp->add_option("--r-lo", o.r_lo, "Lower end of the r bracket")->capture_default_str();
    swp->add_option("--r-hi", o.r_hi, "Upper end of the r bracket")->capture_default_str();

    try {
        std::vector<std::string> args(argv, argv + argc);
        args = expand_config(args);
        std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (diag->parsed()) cmd_diagnostics(o);
        else if (cls->parsed()) cmd_classify(o);
        else if (bif->parsed()) cmd_bifurcation(o);
        else if (poi->parsed()) cmd_poincare(o);
        else if (rel->parsed()) cmd_relaxation(o);
        else if (thr->parsed()) cmd_threshold(o);
        else if (lap->parsed()) cmd_laplace(o);
        else if (swp->parsed()) cmd_sweep(o);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "computation failed: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
