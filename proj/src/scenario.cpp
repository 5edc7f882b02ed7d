#include "fbcsf/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fbcsf/analysis.hpp"
#include "fbcsf/flow.hpp"
#include "fbcsf/kernels.hpp"
#include "fbcsf/models.hpp"

namespace fbcsf {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Vec parse_vec(const json& arr) {
    if (!arr.is_array() || arr.size() < 2 || arr.size() > static_cast<std::size_t>(kMaxDim))
        throw SchemaError("expected a coordinate array of dimension 2..8");
    Vec v(static_cast<int>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) v[i] = arr[i].get<double>();
    return v;
}

struct ParsedBarrier {
    bool present = false;
    Barrier barrier = Barrier::flat_halfspace(Vec{1.0, 0.0}, 0.0);
};

ParsedBarrier parse_barrier(const json& cfg) {
    if (!cfg.contains("barrier")) throw SchemaError("missing 'barrier'");
    const json& b = cfg["barrier"];
    const std::string kind = b.value("kind", "");
    ParsedBarrier out;
    if (kind == "none") return out;
    out.present = true;
    if (kind == "flat") {
        out.barrier = Barrier::flat_halfspace(parse_vec(b.at("normal")), b.value("offset", 0.0));
    } else if (kind == "sphere") {
        out.barrier = Barrier::sphere(parse_vec(b.at("center")), b.at("radius").get<double>());
    } else if (kind == "ellipsoid") {
        out.barrier = Barrier::ellipsoid(parse_vec(b.at("center")),
                                         b.at("semi_axes").get<std::vector<double>>());
    } else {
        throw SchemaError("unknown barrier kind '" + kind + "'");
    }
    return out;
}

ModelCurve parse_model(const json& in) {
    const std::string kind = in.value("model", "");
    if (kind == "chord")
        return ModelCurve::chord(parse_vec(in.at("a")), parse_vec(in.at("b")));
    if (kind == "line")
        return ModelCurve::line(parse_vec(in.at("point")), parse_vec(in.at("direction")),
                                in.value("extent", 10.0));
    if (kind == "circle")
        return ModelCurve::circle(parse_vec(in.at("center")), in.at("radius").get<double>(),
                                  parse_vec(in.at("e1")), parse_vec(in.at("e2")));
    if (kind == "semicircle")
        return ModelCurve::semicircle(parse_vec(in.at("center")), in.at("radius").get<double>(),
                                      parse_vec(in.at("inward")), parse_vec(in.at("tangent")));
    if (kind == "grim_reaper")
        return ModelCurve::grim_reaper(parse_vec(in.at("offset")), parse_vec(in.at("e1")),
                                       parse_vec(in.at("e2")),
                                       in.value("window", std::numbers::pi / 2 - 0.05));
    if (kind == "half_grim_reaper")
        return ModelCurve::half_grim_reaper(parse_vec(in.at("offset")), parse_vec(in.at("e1")),
                                            parse_vec(in.at("e2")),
                                            in.value("window", std::numbers::pi / 2 - 0.05));
    throw SchemaError("unknown model kind '" + kind + "'");
}

// Seeded smooth perturbation: per axis a and mode m = 1..3 a coefficient
// c = uniform_pm1() drawn axis-major, then
//   open arcs:    x_i[a] += amplitude * sum_m c_{a,m} sin(m pi u_i)
//   closed loops: x_i[a] += amplitude * sum_m c_{a,m} sin(2 m pi u_i)
// with u_i the node's arclength fraction. Endpoints stay fixed.
void apply_perturbation(DiscreteCurve& curve, double amplitude, std::uint64_t seed) {
    SplitMix64 rng(seed);
    const int d = curve.ambient_dim;
    const int m = curve.size();
    std::vector<double> coeff(static_cast<std::size_t>(d) * 3);
    for (double& c : coeff) c = rng.uniform_pm1();
    const int nseg = curve.is_closed ? m : m - 1;
    const double base = curve.is_closed ? 2.0 * std::numbers::pi : std::numbers::pi;
    for (int i = 0; i < m; ++i) {
        const double u = static_cast<double>(i) / nseg;
        for (int a = 0; a < d; ++a) {
            double delta = 0.0;
            for (int mode = 1; mode <= 3; ++mode)
                delta += coeff[a * 3 + (mode - 1)] * std::sin(mode * base * u);
            curve.nodes[i][a] += amplitude * delta;
        }
    }
}

DiscreteCurve parse_initial(const json& cfg, int node_count) {
    if (!cfg.contains("initial")) throw SchemaError("missing 'initial'");
    const json& in = cfg["initial"];
    DiscreteCurve curve;
    if (in.contains("nodes")) {
        const json& arr = in["nodes"];
        if (!arr.is_array() || arr.size() < 2) throw SchemaError("'nodes' must list >= 2 points");
        curve.ambient_dim = static_cast<int>(arr[0].size());
        for (const json& p : arr) curve.nodes.push_back(parse_vec(p));
        curve.is_closed = in.value("closed", false);
        curve.spacing = curve.length() / (curve.is_closed ? curve.size() : curve.size() - 1);
        curve = resample_arclength(curve, node_count);
    } else if (in.contains("model")) {
        curve = parse_model(in).sample(node_count);
    } else {
        throw SchemaError("'initial' needs either 'model' or 'nodes'");
    }
    if (in.contains("perturbation")) {
        const json& p = in["perturbation"];
        apply_perturbation(curve, p.at("amplitude").get<double>(),
                           p.value("seed", std::uint64_t{0}));
        curve = resample_arclength(curve, node_count);
    }
    return curve;
}

FlowConfig parse_flow(const json& cfg) {
    if (!cfg.contains("flow")) throw SchemaError("missing 'flow'");
    const json& f = cfg["flow"];
    FlowConfig out;
    out.node_count = f.value("node_count", 128);
    out.cfl = f.value("cfl", 0.5);
    out.t_end = f.value("t_end", 1.0);
    out.kappa_cap = f.value("kappa_cap", 1e8);
    out.len_min = f.value("len_min", 1e-8);
    out.output_every = f.value("output_every", 10);
    out.seed = f.value("seed", std::uint64_t{0});
    out.dt_fixed = f.value("dt_fixed", 0.0);
    out.h_min = f.value("h_min", 0.0);
    if (out.node_count < 16) throw SchemaError("node_count must be >= 16");
    if (out.cfl <= 0.0 || out.cfl > 1.0) throw SchemaError("cfl must be in (0,1]");
    if (out.t_end <= 0.0) throw SchemaError("t_end must be positive");
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

struct AnalysisOutcome {
    std::string name;
    bool pass = true;
    double value = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

// builds a window of three consecutive steps starting from a snapshot
std::vector<FlowState> window3(const FlowState& start, const Barrier* barrier,
                               const FlowConfig& fc) {
    std::vector<FlowState> win{start};
    for (int i = 0; i < 2; ++i)
        win.push_back(step(win.back(), barrier, fc.cfl, fc.dt_fixed));
    return win;
}

json report_vec(const Vec& v) {
    json arr = json::array();
    for (int i = 0; i < v.dim(); ++i) arr.push_back(v[i]);
    return arr;
}

json residual_to_json(const ResidualReport& r) {
    json j;
    j["name"] = r.name;
    j["max_residual"] = r.max_residual;
    j["scale"] = r.scale;
    j["grid_h"] = r.grid_h;
    j["grid_dt"] = r.grid_dt;
    if (r.order_estimate) j["order_estimate"] = *r.order_estimate;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

int run_parsed(const json& cfg, const std::string& out_override, bool entropy_only) {
    const std::string name = cfg.value("name", "scenario");
    ParsedBarrier pb = parse_barrier(cfg);
    const Barrier* barrier = pb.present ? &pb.barrier : nullptr;
    FlowConfig fc = parse_flow(cfg);
    DiscreteCurve initial = parse_initial(cfg, fc.node_count);

    std::string out_dir = out_override;
    if (out_dir.empty()) {
        if (const char* env = std::getenv("FBCSF_OUT")) out_dir = env;
    }
    if (out_dir.empty()) out_dir = cfg.value("output_dir", "out/" + name);
    fs::create_directories(out_dir);

    FlowResult result = run(initial, barrier, fc);

    // main kernel center: the blow-up point at the fitted singular time,
    // or the final barycenter one unit past the end when no blow-up
    KernelParams main_params;
    main_params.center = result.record.blowup_point;
    main_params.center_time =
        std::isfinite(result.record.t_est) ? result.record.t_est : result.series.back().t + 1.0;

    // timeseries.csv at the output cadence
    {
        std::ofstream csv(out_dir + "/timeseries.csv");
        csv << "t,dt,length,max_kappa,max_kappa_sqrt_T_minus_t,boundary_dist,boundary_angle,"
               "phi_main\n";
        std::size_t state_idx = 0;
        for (std::size_t i = 0; i < result.series.size(); ++i) {
            if (i % fc.output_every != 0 && i + 1 != result.series.size()) continue;
            const TimeSample& s = result.series[i];
            double ratio = std::numeric_limits<double>::quiet_NaN();
            if (std::isfinite(result.record.t_est) && s.t < result.record.t_est)
                ratio = s.max_kappa * std::sqrt(result.record.t_est - s.t);
            double phi = std::numeric_limits<double>::quiet_NaN();
            if (state_idx < result.states.size() &&
                result.states[state_idx].time <= s.t + 1e-15) {
                if (s.t < main_params.center_time)
                    phi = gaussian_functional_phi(result.states[state_idx].curve, s.t,
                                                  main_params, barrier);
                ++state_idx;
            }
            csv << format_double(s.t) << ',' << format_double(s.dt) << ','
                << format_double(s.length) << ',' << format_double(s.max_kappa) << ','
                << format_double(ratio) << ',' << format_double(s.boundary_dist) << ','
                << format_double(s.boundary_angle) << ',' << format_double(phi) << '\n';
        }
    }

    // states/NNNN.json snapshots
    {
        fs::create_directories(out_dir + "/states");
        int idx = 0;
        for (const FlowState& st : result.states) {
            json snap;
            snap["ambient_dim"] = st.curve.ambient_dim;
            snap["t"] = st.time;
            json nodes = json::array();
            for (const Vec& p : st.curve.nodes)
                for (int a = 0; a < p.dim(); ++a) nodes.push_back(p[a]);
            snap["nodes"] = nodes;
            char fname[32];
            std::snprintf(fname, sizeof(fname), "/states/%04d.json", idx++);
            std::ofstream(out_dir + fname) << snap.dump(2) << '\n';
        }
    }

    json report;
    report["name"] = name;
    report["termination"] = result.reason == StopReason::ReachedTEnd     ? "t_end"
                            : result.reason == StopReason::LengthBelowMin ? "len_min"
                                                                          : "kappa_cap";
    report["t_est"] = std::isfinite(result.record.t_est) ? json(result.record.t_est)
                                                         : json("inf");
    report["type_flag"] = result.record.type_flag == SingularityType::TypeI    ? "TypeI"
                          : result.record.type_flag == SingularityType::TypeII ? "TypeII"
                                                                               : "none";
    report["blowup_point"] = report_vec(result.record.blowup_point);
    json ratio_hist = json::array();
    for (const auto& [t, r] : result.record.ratio_history)
        ratio_hist.push_back(json::array({t, r}));
    report["ratio_history"] = ratio_hist;

    bool all_pass = true;
    std::vector<AnalysisOutcome> outcomes;
    json residuals = json::array();

    if (!entropy_only && cfg.contains("analyses")) {
        for (const json& a : cfg["analyses"]) {
            const std::string check = a.value("check", "");
            AnalysisOutcome oc;
            oc.name = check;
            if (check == "max_displacement") {
                oc.tolerance = a.value("tol", 1e-8);
                double worst = 0.0;
                for (const FlowState& st : result.states)
                    for (int i = 0; i < st.curve.size(); ++i)
                        worst = std::max(
                            worst, distance(st.curve.nodes[i], result.states[0].curve.nodes[i]));
                oc.value = worst;
                oc.pass = worst <= oc.tolerance;
            } else if (check == "t_est") {
                const double expect = a.at("expect").get<double>();
                oc.tolerance = a.value("tol", 0.01);
                oc.value = result.record.t_est;
                oc.pass = std::isfinite(oc.value) && std::fabs(oc.value - expect) <= oc.tolerance;
            } else if (check == "radius_law") {
                const Vec center = parse_vec(a.at("center"));
                const double r0 = a.at("r0").get<double>();
                oc.tolerance = a.value("tol_rel", 0.005);
                const double t_max = a.value("t_max", kInf);
                double worst = 0.0;
                for (const FlowState& st : result.states) {
                    if (st.time > t_max) continue;
                    const double expect = std::sqrt(std::max(r0 * r0 - 2.0 * st.time, 0.0));
                    if (expect <= 0.0) continue;
                    double mean = 0.0;
                    for (const Vec& p : st.curve.nodes) mean += distance(p, center);
                    mean /= st.curve.size();
                    worst = std::max(worst, std::fabs(mean - expect) / expect);
                }
                oc.value = worst;
                oc.pass = worst <= oc.tolerance;
            } else if (check == "boundary_residual") {
                const double scale = std::max(1.0, result.series.front().length);
                double worst_dist = 0.0, worst_angle = 0.0, h = initial.spacing;
                for (const TimeSample& s : result.series) {
                    worst_dist = std::max(worst_dist, s.boundary_dist);
                    worst_angle = std::max(worst_angle, s.boundary_angle);
                }
                h = result.states.back().curve.spacing;
                oc.value = worst_dist;
                oc.tolerance = 1e-8 * scale;
                oc.pass = worst_dist <= oc.tolerance && worst_angle <= 5.0 * h;
                oc.detail = "max angle " + format_double(worst_angle);
            } else if (check == "length_monotone") {
                oc.pass = true;
                for (std::size_t i = 1; i < result.series.size(); ++i)
                    if (result.series[i].length >
                        result.series[i - 1].length * (1.0 + 1e-10))
                        oc.pass = false;
                oc.value = result.series.back().length;
            } else if (check == "evolution_kappa" || check == "evolution_kappa_sq" ||
                       check == "commutator" || check == "evolution_tau1") {
                const FlowState& mid = result.states[result.states.size() / 2];
                std::vector<FlowState> win = window3(mid, barrier, fc);
                ResidualReport rep;
                double tol_factor = 0.0;
                double basis = 0.0;
                if (check == "evolution_kappa") {
                    rep = residual_evolution_kappa(win);
                    tol_factor = a.value("tol_factor", 5.0);
                    basis = rep.grid_h * rep.grid_h + rep.grid_dt;
                } else if (check == "evolution_kappa_sq") {
                    rep = residual_evolution_kappa_sq(win);
                    tol_factor = a.value("tol_factor", 5.0);
                    basis = rep.grid_h * rep.grid_h + rep.grid_dt;
                } else if (check == "commutator") {
                    rep = residual_commutator(win);
                    tol_factor = a.value("tol_factor", 5.0);
                    basis = rep.grid_h * rep.grid_h + rep.grid_dt;
                } else {
                    rep = residual_evolution_tau1(win);
                    tol_factor = a.value("tol_factor", 20.0);
                    basis = rep.grid_h + rep.grid_dt;
                }
                residuals.push_back(residual_to_json(rep));
                oc.value = rep.max_residual;
                oc.tolerance = tol_factor * basis;
                oc.pass = oc.value <= oc.tolerance;
            } else {
                throw SchemaError("unknown analysis check '" + check + "'");
            }
            all_pass = all_pass && oc.pass;
            outcomes.push_back(std::move(oc));
        }
    }

    if (cfg.contains("entropy")) {
        const json& e = cfg["entropy"];
        EntropyScanSpec spec;
        if (e.contains("centers") && e["centers"].is_array())
            for (const json& c : e["centers"]) spec.centers.push_back(parse_vec(c));
        if (e.contains("interior_centers"))
            for (const json& c : e["interior_centers"])
                spec.interior_centers.push_back(parse_vec(c));
        if (e.contains("sigma_hat"))
            spec.sigma_ladder = e["sigma_hat"].get<std::vector<double>>();
        if (e.contains("radii")) {
            for (const json& r : e["radii"]) {
                if (r.is_string() && r.get<std::string>() == "inf")
                    spec.radii.push_back(kInf);
                else
                    spec.radii.push_back(r.get<double>());
            }
        }
        EntropyReport er = entropy_scan(result.states, barrier, spec);
        json ej;
        ej["entropy_sup"] = er.entropy_sup;
        ej["interior_sup"] = er.interior_sup;
        ej["monotonicity_violation"] = er.monotonicity_violation;
        json centers = json::array();
        for (const Vec& c : er.centers) centers.push_back(report_vec(c));
        ej["centers"] = centers;
        json series = json::array();
        for (const auto& s : er.phi_series)
            series.push_back(json::object({{"center", s.center_index},
                                           {"r", std::isinf(s.r) ? json("inf") : json(s.r)},
                                           {"t0", s.t0},
                                           {"t", s.t},
                                           {"phi", s.phi}}));
        ej["phi_series"] = series;
        report["entropy"] = ej;
        if (entropy_only) {
            std::ofstream(out_dir + "/entropy.json") << ej.dump(2) << '\n';
        }
    } else if (entropy_only) {
        throw SchemaError("entropy command needs an 'entropy' section");
    }

    json an = json::array();
    for (const AnalysisOutcome& oc : outcomes) {
        json j;
        j["check"] = oc.name;
        j["pass"] = oc.pass;
        j["value"] = oc.value;
        j["tolerance"] = oc.tolerance;
        if (!oc.detail.empty()) j["detail"] = oc.detail;
        an.push_back(j);
    }
    report["analyses"] = an;
    report["residuals"] = residuals;
    report["pass"] = all_pass;
    std::ofstream(out_dir + "/report.json") << report.dump(2) << '\n';

    return all_pass ? 0 : 1;
}

int dispatch(const json& cfg, const std::string& out_override, bool entropy_only) {
    try {
        return run_parsed(cfg, out_override, entropy_only);
    } catch (const SchemaError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open config '" + path + "'");
    return json::parse(in);
}

}  // namespace

int run_scenario(const std::string& config_path, const std::string& out_override) {
    try {
        return dispatch(load_config(config_path), out_override, false);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
}

int run_scenario_text(const std::string& json_text, const std::string& out_override) {
    try {
        return dispatch(json::parse(json_text), out_override, false);
    } catch (const json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
}

int entropy_command(const std::string& config_path, const std::string& out_override) {
    try {
        return dispatch(load_config(config_path), out_override, true);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
}

std::string models_list() {
    return "chord            a, b                          stationary segment\n"
           "line             point, direction, extent      stationary line\n"
           "circle           center, radius, e1, e2        shrinking, r(t) = sqrt(r0^2 - 2t)\n"
           "semicircle       center, radius, inward, tangent   shrinking half circle on a flat barrier\n"
           "grim_reaper      offset, e1, e2, window        translating graph y = -log cos x\n"
           "half_grim_reaper offset, e1, e2, window        half reaper meeting its flat barrier\n";
}

}  // namespace fbcsf
