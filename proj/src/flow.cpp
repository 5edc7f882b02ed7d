#include "fbcsf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fbcsf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ghost node for orthogonal contact: mirror of q across the barrier's
// tangent hyperplane at the endpoint p
Vec ghost_node(const Vec& p, const Vec& q, const Vec& nu) {
    const Vec w = q - p;
    return p + w - 2.0 * dot(w, nu) * nu;
}

}  // namespace

std::vector<Vec> flow_velocities(const DiscreteCurve& curve, const FrenetData& frenet,
                                 const Barrier* barrier) {
    const int m = curve.size();
    const double h2 = curve.spacing * curve.spacing;
    std::vector<Vec> vel(m, Vec(curve.ambient_dim));
    for (int i = 0; i < m; ++i) vel[i] = frenet.kappa_vec[i];
    if (curve.is_closed || barrier == nullptr) return vel;

    // endpoint stencil (ghost - 2p + q)/h^2 lies in the barrier's tangent
    // plane, so endpoints slide along the barrier
    const int ends[2] = {0, m - 1};
    const int nbrs[2] = {1, m - 2};
    for (int e = 0; e < 2; ++e) {
        const Vec& p = curve.nodes[ends[e]];
        const Vec& q = curve.nodes[nbrs[e]];
        const Vec nu = barrier->outward_normal(p);
        const Vec g = ghost_node(p, q, nu);
        vel[ends[e]] = (g - 2.0 * p + q) / h2;
    }
    return vel;
}

FlowState make_flow_state(DiscreteCurve curve, double time, double dt_last,
                          const Barrier* barrier, FrenetData* out_frenet) {
    FlowState st;
    st.time = time;
    st.dt_last = dt_last;
    st.length = curve.length();
    FrenetData fr = compute_frenet(curve, default_kappa_tol(curve));
    const double mk = fr.max_kappa();
    st.max_kappa_sq = mk * mk;
    if (barrier != nullptr && !curve.is_closed) {
        const int ends[2] = {0, curve.size() - 1};
        for (int e = 0; e < 2; ++e) {
            const Vec& p = curve.nodes[ends[e]];
            st.boundary_dist = std::max(st.boundary_dist, barrier->distance(p));
            const Vec nu = barrier->outward_normal(p);
            const double c = std::clamp(std::fabs(dot(fr.T[ends[e]], nu)), 0.0, 1.0);
            st.boundary_angle = std::max(st.boundary_angle, std::acos(c));
        }
    }
    st.curve = std::move(curve);
    if (out_frenet != nullptr) *out_frenet = std::move(fr);
    return st;
}

FlowState step(const FlowState& state, const Barrier* barrier, double cfl, double dt_fixed,
               double kappa_cap, const FrenetData* cached, FrenetData* out_frenet) {
    const DiscreteCurve& curve = state.curve;
    const int m = curve.size();
    FrenetData local;
    if (cached == nullptr) {
        local = compute_frenet(curve, default_kappa_tol(curve));
        cached = &local;
    }
    const double mk = cached->max_kappa();
    const double m_t = mk * mk;
    if (m_t > kappa_cap) {
        FlowState flagged = state;
        flagged.singular = true;
        if (out_frenet != nullptr) *out_frenet = *cached;
        return flagged;
    }

    double dt;
    if (dt_fixed > 0.0) {
        dt = dt_fixed;
    } else {
        if (cfl <= 0.0 || cfl > 1.0) throw std::invalid_argument("cfl must be in (0, 1]");
        const double cap_h = 0.5 * curve.spacing * curve.spacing;
        const double cap_k = m_t > 0.0 ? 1.0 / (4.0 * m_t) : kInf;
        dt = cfl * std::min(cap_h, cap_k);
    }

    const std::vector<Vec> vel = flow_velocities(curve, *cached, barrier);
    DiscreteCurve updated = curve;
    for (int i = 0; i < m; ++i) updated.nodes[i] += dt * vel[i];
    if (barrier != nullptr && !curve.is_closed) {
        updated.nodes.front() = barrier->project(updated.nodes.front());
        updated.nodes.back() = barrier->project(updated.nodes.back());
    }
    if (!updated.finite()) throw std::runtime_error("blowup overflow");

    DiscreteCurve resampled = resample_arclength(updated, m);
    return make_flow_state(std::move(resampled), state.time + dt, dt, barrier, out_frenet);
}

namespace {

// Least-squares line through (t, 1/max_kappa_sq) over the final samples;
// the singular time estimate is the zero crossing. Samples are restricted
// to the last decade of 1/M_t. Returns +inf when the tail shows no growth.
double fit_singular_time(const std::vector<TimeSample>& series) {
    std::vector<std::pair<double, double>> pts;  // (t, 1/M_t)
    for (const TimeSample& s : series) {
        if (s.max_kappa > 0.0) pts.emplace_back(s.t, 1.0 / (s.max_kappa * s.max_kappa));
    }
    if (pts.size() < 10) return kInf;
    const double inv_last = pts.back().second;
    std::size_t lo = pts.size();
    while (lo > 0 && pts[lo - 1].second <= 10.0 * inv_last) --lo;
    if (pts.size() - lo < 10) lo = pts.size() >= 10 ? pts.size() - 10 : 0;

    double st = 0, sy = 0, stt = 0, sty = 0;
    const double n = static_cast<double>(pts.size() - lo);
    for (std::size_t i = lo; i < pts.size(); ++i) {
        st += pts[i].first;
        sy += pts[i].second;
        stt += pts[i].first * pts[i].first;
        sty += pts[i].first * pts[i].second;
    }
    const double denom = n * stt - st * st;
    if (std::fabs(denom) < 1e-300) return kInf;
    const double slope = (n * sty - st * sy) / denom;
    const double intercept = (sy - slope * st) / n;
    if (slope >= -1e-300) return kInf;  // curvature not growing
    const double t_est = -intercept / slope;
    return t_est > series.back().t ? t_est : kInf;
}

}  // namespace

FlowResult run(const DiscreteCurve& initial, const Barrier* barrier, const FlowConfig& config) {
    if (config.node_count < 5) throw std::invalid_argument("node_count must be >= 5");
    if (config.t_end <= 0.0) throw std::invalid_argument("t_end must be positive");
    if (config.output_every < 1) throw std::invalid_argument("output_every must be >= 1");
    if (!initial.finite()) throw std::invalid_argument("non-finite initial curve");

    DiscreteCurve curve = resample_arclength(initial, config.node_count);
    if (barrier != nullptr && !curve.is_closed) {
        for (int e : {0, curve.size() - 1}) {
            if (barrier->distance(curve.nodes[e]) > curve.spacing)
                throw std::invalid_argument("initial endpoints not on barrier");
            curve.nodes[e] = barrier->project(curve.nodes[e]);
        }
    }

    FlowResult result;
    FrenetData frenet;
    FlowState state = make_flow_state(std::move(curve), 0.0, 0.0, barrier, &frenet);
    auto record_sample = [&](const FlowState& s) {
        result.series.push_back({s.time, s.dt_last, s.length, std::sqrt(s.max_kappa_sq),
                                 s.boundary_dist, s.boundary_angle});
    };
    record_sample(state);
    result.states.push_back(state);

    long step_index = 0;
    result.reason = StopReason::ReachedTEnd;
    while (state.time < config.t_end) {
        if (state.max_kappa_sq > config.kappa_cap) {
            result.reason = StopReason::CurvatureCap;
            break;
        }
        if (state.length < config.len_min) {
            result.reason = StopReason::LengthBelowMin;
            break;
        }
        FrenetData next_frenet;
        FlowState next =
            step(state, barrier, config.cfl, config.dt_fixed, config.kappa_cap, &frenet,
                 &next_frenet);
        if (next.singular) {
            state.singular = true;
            result.reason = StopReason::CurvatureCap;
            break;
        }
        state = std::move(next);
        frenet = std::move(next_frenet);
        ++step_index;
        record_sample(state);
        if (step_index % config.output_every == 0) result.states.push_back(state);

        if (config.h_min > 0.0 && state.curve.spacing < 0.5 * config.h_min) {
            const int target =
                std::max(5, static_cast<int>(std::lround(state.length / config.h_min)) + 1);
            if (target < state.curve.size()) {
                DiscreteCurve reduced = resample_arclength(state.curve, target);
                state = make_flow_state(std::move(reduced), state.time, state.dt_last, barrier,
                                        &frenet);
            }
        }
    }
    if (result.states.back().time != state.time) result.states.push_back(state);

    SingularityRecord rec;
    rec.t_est = fit_singular_time(result.series);
    const DiscreteCurve& last = state.curve;
    Vec bary(last.ambient_dim);
    for (const Vec& p : last.nodes) bary += p;
    bary /= static_cast<double>(last.size());
    if (barrier != nullptr && barrier->distance(bary) < last.spacing) {
        bary = barrier->project(bary);
    }
    rec.blowup_point = bary;
    if (std::isfinite(rec.t_est)) {
        const long cadence = std::max<long>(1, config.output_every);
        for (std::size_t i = 0; i < result.series.size(); ++i) {
            if (static_cast<long>(i) % cadence != 0 && i + 1 != result.series.size()) continue;
            const TimeSample& s = result.series[i];
            if (s.t < rec.t_est && s.max_kappa > 0.0)
                rec.ratio_history.emplace_back(s.t, s.max_kappa * std::sqrt(rec.t_est - s.t));
        }
    }
    try {
        rec.type_flag = classify_singularity(rec);
    } catch (const std::runtime_error&) {
        rec.type_flag = SingularityType::None;
    }
    result.record = std::move(rec);
    return result;
}

SingularityType classify_singularity(const SingularityRecord& record) {
    if (!std::isfinite(record.t_est)) return SingularityType::None;
    const auto& hist = record.ratio_history;
    if (hist.size() < 10) throw std::runtime_error("insufficient samples");
    double gap_max = 0.0, gap_min = kInf;
    for (const auto& [t, ratio] : hist) {
        const double gap = record.t_est - t;
        gap_max = std::max(gap_max, gap);
        gap_min = std::min(gap_min, gap);
    }
    if (!(gap_min > 0.0) || gap_max < 8.0 * gap_min)
        throw std::runtime_error("insufficient samples");

    // window = last decade of (T_est - t)
    std::vector<double> window;
    for (const auto& [t, ratio] : hist)
        if (record.t_est - t <= 10.0 * gap_min) window.push_back(ratio);
    if (window.size() < 3) throw std::runtime_error("insufficient samples");

    std::vector<double> sorted = window;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    bool type_i = true;
    for (double r : window)
        if (r < 0.8 * median || r > 1.2 * median) type_i = false;
    if (type_i) return SingularityType::TypeI;

    bool monotone = true;
    for (std::size_t i = 1; i < window.size(); ++i)
        if (window[i] < window[i - 1] * (1.0 - 1e-9)) monotone = false;
    if (monotone && window.back() > 1.5 * window.front()) return SingularityType::TypeII;
    return SingularityType::None;
}

DiscreteCurve rescale_type_i(const FlowState& state, const Vec& z, double t_est) {
    if (state.time >= t_est) throw std::invalid_argument("state at or past the singular time");
    const double scale = 1.0 / std::sqrt(2.0 * (t_est - state.time));
    DiscreteCurve out = state.curve;
    for (Vec& p : out.nodes) p = scale * (p - z);
    out.spacing *= scale;
    return out;
}

}  // namespace fbcsf
