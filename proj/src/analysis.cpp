#include "fbcsf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fbcsf {

namespace {

// finite differences on per-node scalar fields at uniform arclength
// spacing; one-sided second-order stencils at open ends

double d1_field(const std::vector<double>& f, int i, const DiscreteCurve& c) {
    const int m = c.size();
    const double h = c.spacing;
    if (c.is_closed) return (f[(i + 1) % m] - f[(i + m - 1) % m]) / (2.0 * h);
    if (i == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    if (i == m - 1) return (3.0 * f[m - 1] - 4.0 * f[m - 2] + f[m - 3]) / (2.0 * h);
    return (f[i + 1] - f[i - 1]) / (2.0 * h);
}

double d2_field(const std::vector<double>& f, int i, const DiscreteCurve& c) {
    const int m = c.size();
    const double h2 = c.spacing * c.spacing;
    if (c.is_closed)
        return (f[(i + 1) % m] - 2.0 * f[i] + f[(i + m - 1) % m]) / h2;
    if (i == 0) return (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    if (i == m - 1)
        return (2.0 * f[m - 1] - 5.0 * f[m - 2] + 4.0 * f[m - 3] - f[m - 4]) / h2;
    return (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
}

Vec d1_vec_field(const std::vector<Vec>& f, int i, const DiscreteCurve& c) {
    const int m = c.size();
    const double h = c.spacing;
    if (c.is_closed) return (f[(i + 1) % m] - f[(i + m - 1) % m]) / (2.0 * h);
    if (i == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    if (i == m - 1) return (3.0 * f[m - 1] - 4.0 * f[m - 2] + f[m - 3]) / (2.0 * h);
    return (f[i + 1] - f[i - 1]) / (2.0 * h);
}

Vec d2_vec_field(const std::vector<Vec>& f, int i, const DiscreteCurve& c) {
    const int m = c.size();
    const double h2 = c.spacing * c.spacing;
    if (c.is_closed) return (f[(i + 1) % m] - 2.0 * f[i] + f[(i + m - 1) % m]) / h2;
    if (i == 0) return (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    if (i == m - 1)
        return (2.0 * f[m - 1] - 5.0 * f[m - 2] + 4.0 * f[m - 3] - f[m - 4]) / h2;
    return (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
}

// three-point Lagrange derivative at the middle time, tolerant of the
// slight dt drift between accepted steps
double time_derivative(double f0, double f1, double f2, double t0, double t1, double t2) {
    return f0 * (t1 - t2) / ((t0 - t1) * (t0 - t2)) +
           f1 * (2.0 * t1 - t0 - t2) / ((t1 - t0) * (t1 - t2)) +
           f2 * (t1 - t0) / ((t2 - t0) * (t2 - t1));
}

struct WindowData {
    std::vector<FrenetData> frenet;
    std::vector<std::vector<double>> drift;  // tangential drift of the fraction
                                             // parametrization, per state
};

// A node pinned at arclength fraction u slides through the material flow
// at speed  V(u) = int_0^s kappa^2 - u int_0^L kappa^2  (from the length
// element evolution d_t v = -kappa^2 v), so material time derivatives are
// d_t|material f = d_t|u f - V d_s f.
std::vector<double> fraction_drift(const DiscreteCurve& curve, const FrenetData& fr) {
    const int m = curve.size();
    const double h = curve.spacing;
    std::vector<double> cum(m, 0.0);
    for (int i = 1; i < m; ++i) {
        const double k0 = fr.kappa[i - 1], k1 = fr.kappa[i];
        cum[i] = cum[i - 1] + 0.5 * (k0 * k0 + k1 * k1) * h;
    }
    double total = cum[m - 1];
    if (curve.is_closed) {
        const double k0 = fr.kappa[m - 1], k1 = fr.kappa[0];
        total += 0.5 * (k0 * k0 + k1 * k1) * h;
    }
    const int nseg = curve.is_closed ? m : m - 1;
    std::vector<double> v(m);
    for (int i = 0; i < m; ++i) {
        const double u = static_cast<double>(i) / nseg;
        v[i] = cum[i] - u * total;
    }
    return v;
}

WindowData prepare_window(std::span<const FlowState> states) {
    if (states.size() < 3) throw std::invalid_argument("residual window needs >= 3 states");
    const int m = states[0].curve.size();
    for (const FlowState& s : states) {
        if (s.curve.size() != m) throw std::invalid_argument("mismatched node counts");
        if (s.curve.is_closed != states[0].curve.is_closed)
            throw std::invalid_argument("mixed open/closed window");
    }
    WindowData w;
    for (const FlowState& s : states) {
        FrenetData fr = compute_frenet(s.curve, default_kappa_tol(s.curve));
        w.drift.push_back(fraction_drift(s.curve, fr));
        w.frenet.push_back(std::move(fr));
    }
    return w;
}

// evaluation range: interior nodes at least 3 from each open end
std::pair<int, int> eval_range(const DiscreteCurve& c) {
    if (c.is_closed) return {0, c.size() - 1};
    return {3, c.size() - 4};
}

}  // namespace

ResidualReport residual_evolution_kappa(std::span<const FlowState> states,
                                        const ResidualOptions& options) {
    WindowData w = prepare_window(states);
    const double tau_sign = options.mutate_tau_sign ? 1.0 : -1.0;
    double worst = 0.0, kmax = 0.0;
    for (std::size_t k = 1; k + 1 < states.size(); ++k) {
        const DiscreteCurve& c = states[k].curve;
        const FrenetData& fr = w.frenet[k];
        const double tol = fr.kappa_tol;
        auto [lo, hi] = eval_range(c);
        for (int i = lo; i <= hi; ++i) {
            if (fr.kappa[i] <= tol || w.frenet[k - 1].kappa[i] <= tol ||
                w.frenet[k + 1].kappa[i] <= tol)
                continue;
            const double dkdt_u =
                time_derivative(w.frenet[k - 1].kappa[i], fr.kappa[i], w.frenet[k + 1].kappa[i],
                                states[k - 1].time, states[k].time, states[k + 1].time);
            const double ks = d1_field(fr.kappa, i, c);
            const double dkdt = dkdt_u - w.drift[k][i] * ks;
            const double kss = d2_field(fr.kappa, i, c);
            const double kappa = fr.kappa[i], tau = fr.tau1[i];
            const double rhs = kss + kappa * kappa * kappa + tau_sign * tau * tau * kappa;
            worst = std::max(worst, std::fabs(dkdt - rhs));
            kmax = std::max(kmax, kappa);
        }
    }
    ResidualReport rep;
    rep.name = "evolution_kappa";
    rep.scale = "max(1, max kappa^3)";
    const double scale = std::max(1.0, kmax * kmax * kmax);
    rep.max_residual = worst / scale;
    rep.grid_h = states[0].curve.spacing;
    rep.grid_dt = 0.5 * (states[2].time - states[0].time);
    return rep;
}

ResidualReport residual_evolution_kappa_sq(std::span<const FlowState> states) {
    WindowData w = prepare_window(states);
    double worst = 0.0, kmax = 0.0;
    std::vector<std::vector<double>> ksq(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
        const FrenetData& fr = w.frenet[k];
        ksq[k].resize(fr.kappa.size());
        for (std::size_t i = 0; i < fr.kappa.size(); ++i) ksq[k][i] = fr.kappa[i] * fr.kappa[i];
    }
    for (std::size_t k = 1; k + 1 < states.size(); ++k) {
        const DiscreteCurve& c = states[k].curve;
        const FrenetData& fr = w.frenet[k];
        auto [lo, hi] = eval_range(c);
        for (int i = lo; i <= hi; ++i) {
            const double dk2dt_u =
                time_derivative(ksq[k - 1][i], ksq[k][i], ksq[k + 1][i], states[k - 1].time,
                                states[k].time, states[k + 1].time);
            const double k2s = d1_field(ksq[k], i, c);
            const double dk2dt = dk2dt_u - w.drift[k][i] * k2s;
            const double k2ss = d2_field(ksq[k], i, c);
            const double ks = d1_field(fr.kappa, i, c);
            const double kappa2 = ksq[k][i];
            const double tau = fr.tau1[i];
            const double rhs = k2ss - 2.0 * ks * ks + 2.0 * kappa2 * kappa2 -
                               2.0 * tau * tau * kappa2;
            worst = std::max(worst, std::fabs(dk2dt - rhs));
            kmax = std::max(kmax, fr.kappa[i]);
        }
    }
    ResidualReport rep;
    rep.name = "evolution_kappa_sq";
    rep.scale = "max(1, max kappa^4)";
    rep.max_residual = worst / std::max(1.0, kmax * kmax * kmax * kmax);
    rep.grid_h = states[0].curve.spacing;
    rep.grid_dt = 0.5 * (states[2].time - states[0].time);
    return rep;
}

ResidualReport residual_evolution_tau1(std::span<const FlowState> states) {
    if (states[0].curve.ambient_dim < 3)
        throw std::invalid_argument("torsion equation needs ambient dimension >= 3");
    WindowData w = prepare_window(states);
    double worst = 0.0, term_scale = 0.0;
    int evaluated = 0;
    for (std::size_t k = 1; k + 1 < states.size(); ++k) {
        const DiscreteCurve& c = states[k].curve;
        const FrenetData& fr = w.frenet[k];
        const double tol = 10.0 * fr.kappa_tol;
        const int m = c.size();
        // a tau1 with a = kappa_s / kappa, as a per-node field
        std::vector<double> a_tau(m, 0.0);
        std::vector<std::uint8_t> a_ok(m, 0);
        for (int i = 0; i < m; ++i) {
            if (fr.kappa[i] <= tol) continue;
            a_tau[i] = d1_field(fr.kappa, i, c) / fr.kappa[i] * fr.tau1[i];
            a_ok[i] = 1;
        }
        auto [lo, hi] = eval_range(c);
        for (int i = lo; i <= hi; ++i) {
            const bool stencil_ok = a_ok[i] && a_ok[(i + 1) % m] && a_ok[(i + m - 1) % m] &&
                                    fr.b1_defined[i] && w.frenet[k - 1].b1_defined[i] &&
                                    w.frenet[k + 1].b1_defined[i];
            if (!stencil_ok) continue;
            const double dtau_u =
                time_derivative(w.frenet[k - 1].tau1[i], fr.tau1[i], w.frenet[k + 1].tau1[i],
                                states[k - 1].time, states[k].time, states[k + 1].time);
            const double tau_s = d1_field(fr.tau1, i, c);
            const double dtau = dtau_u - w.drift[k][i] * tau_s;
            const double tau_ss = d2_field(fr.tau1, i, c);
            const double datau_ds = d1_field(a_tau, i, c);
            const double kappa = fr.kappa[i], tau = fr.tau1[i], tau2 = fr.tau2[i];
            const double rhs =
                tau_ss + 2.0 * datau_ds + 2.0 * tau * kappa * kappa - tau * tau2 * tau2;
            worst = std::max(worst, std::fabs(dtau - rhs));
            term_scale = std::max(term_scale, std::fabs(tau) * kappa * kappa);
            ++evaluated;
        }
    }
    ResidualReport rep;
    rep.name = "evolution_tau1";
    rep.scale = "max(1, max |tau1| kappa^2)";
    rep.max_residual = worst / std::max(1.0, term_scale);
    rep.grid_h = states[0].curve.spacing;
    rep.grid_dt = 0.5 * (states[2].time - states[0].time);
    if (evaluated == 0) rep.note = "no nodes with defined torsion; identity vacuous";
    return rep;
}

ResidualReport residual_commutator(std::span<const FlowState> states) {
    WindowData w = prepare_window(states);
    double worst = 0.0, kmax = 0.0;
    const int d = states[0].curve.ambient_dim;
    for (std::size_t k = 1; k + 1 < states.size(); ++k) {
        const DiscreteCurve& c = states[k].curve;
        const FrenetData& fr = w.frenet[k];
        auto [lo, hi] = eval_range(c);
        for (int i = lo; i <= hi; ++i) {
            Vec dTdt_u(d);
            for (int a = 0; a < d; ++a)
                dTdt_u[a] = time_derivative(w.frenet[k - 1].T[i][a], fr.T[i][a],
                                            w.frenet[k + 1].T[i][a], states[k - 1].time,
                                            states[k].time, states[k + 1].time);
            const Vec dT_ds = d1_vec_field(fr.T, i, c);
            const Vec dTdt = dTdt_u - w.drift[k][i] * dT_ds;
            const Vec dkv_ds = d1_vec_field(fr.kappa_vec, i, c);
            const double k2 = fr.kappa[i] * fr.kappa[i];
            worst = std::max(worst, norm(dTdt - dkv_ds - k2 * fr.T[i]));
            kmax = std::max(kmax, fr.kappa[i]);
        }
    }
    ResidualReport rep;
    rep.name = "commutator";
    rep.scale = "max(1, max kappa^2)";
    rep.max_residual = worst / std::max(1.0, kmax * kmax);
    rep.grid_h = states[0].curve.spacing;
    rep.grid_dt = 0.5 * (states[2].time - states[0].time);
    return rep;
}

EndpointReport endpoint_relations(const FlowState& state, const Barrier& barrier) {
    const DiscreteCurve& c = state.curve;
    if (c.is_closed) throw std::invalid_argument("endpoint relations need an open arc");
    FrenetData fr = compute_frenet(c, default_kappa_tol(c));
    const double h = c.spacing;
    const double cap = barrier.curvature_bound();

    EndpointReport rep;
    rep.base.name = "endpoint_relations";
    rep.base.scale = "absolute";
    rep.base.grid_h = h;
    const int m = c.size();
    const int ends[2] = {0, m - 1};
    for (int e = 0; e < 2; ++e) {
        const int i = ends[e];
        const Vec p = barrier.project(c.nodes[i]);
        if (barrier.distance(c.nodes[i]) > 10.0 * h)
            throw std::invalid_argument("endpoint off barrier");
        const Vec nu = barrier.outward_normal(p);
        const double eps = dot(fr.T[i], nu) >= 0.0 ? 1.0 : -1.0;
        const double dk_ds = d1_field(fr.kappa, i, c);

        if (fr.kappa[i] <= fr.kappa_tol || !fr.n_defined[i]) {
            rep.vacuous[e] = true;
            rep.kappa_relation[e] = std::fabs(dk_ds);  // both sides vanish with kappa
            continue;
        }
        // N must be tangent to the barrier at contact; project to satisfy
        // the form's precondition (the discarded part is O(h))
        Vec n_tan = reject(fr.N[i], nu);
        if (norm(n_tan) < 1e-12) {
            rep.vacuous[e] = true;
            continue;
        }
        n_tan = normalized(n_tan);
        const double ii_nn = barrier.second_fundamental_form(p, n_tan, n_tan);
        rep.kappa_relation[e] = std::fabs(dk_ds + eps * fr.kappa[i] * ii_nn);

        Vec b1(c.ambient_dim);
        bool have_b1 = false;
        if (fr.b1_defined[i]) {
            b1 = reject(fr.B1[i], nu);
            if (norm(b1) > 1e-12) {
                b1 = normalized(b1);
                have_b1 = true;
            }
        } else if (c.ambient_dim == 3) {
            // planar completion: the unique direction orthogonal to T and N
            Vec cand = reject(reject(Vec{1, 0, 0}, fr.T[i]), n_tan);
            if (norm(cand) < 1e-6) cand = reject(reject(Vec{0, 1, 0}, fr.T[i]), n_tan);
            if (norm(cand) < 1e-6) cand = reject(reject(Vec{0, 0, 1}, fr.T[i]), n_tan);
            b1 = normalized(reject(cand, nu));
            have_b1 = true;
        }
        if (have_b1) {
            const double ii_nb = barrier.second_fundamental_form(p, n_tan, b1);
            rep.tau_relation[e] = std::fabs(fr.tau1[i] + eps * ii_nb);
        }
        if (std::fabs(dk_ds) > cap * fr.kappa[i] + 10.0 * h) rep.kappa_inequality_ok = false;
        if (std::fabs(fr.tau1[i]) > cap + 10.0 * h) rep.tau_inequality_ok = false;
    }
    rep.base.max_residual = std::max({rep.kappa_relation[0], rep.kappa_relation[1],
                                      rep.tau_relation[0], rep.tau_relation[1]});
    if (rep.vacuous[0] && rep.vacuous[1]) rep.base.note = "kappa degenerate at both endpoints";
    return rep;
}

ResidualReport dilation_invariant_monitor(std::span<const FlowState> states, int m_order) {
    if (states.empty()) throw std::invalid_argument("empty window");
    if (m_order < 1 || m_order > 3) throw std::invalid_argument("m must be 1, 2 or 3");
    const double t0 = states[0].time;
    const double m_t0 = states[0].max_kappa_sq;
    if (m_t0 <= 0.0) {
        ResidualReport rep;
        rep.name = "dilation_monitor_m" + std::to_string(m_order);
        rep.scale = "M_t0";
        rep.note = "flat initial curve";
        return rep;
    }
    if (states.back().time - t0 > 0.25 / m_t0 + 1e-12)
        throw std::invalid_argument("window exceeds 1/(4 M_t0)");

    double sup = 0.0;
    for (const FlowState& st : states) {
        const DiscreteCurve& c = st.curve;
        FrenetData fr = compute_frenet(c, default_kappa_tol(c));
        const int m = c.size();
        const double h = c.spacing;
        const int margin = c.is_closed ? 0 : 3;
        for (int i = margin; i < m - margin; ++i) {
            Vec deriv(c.ambient_dim);
            if (m_order == 1) {
                deriv = d1_vec_field(fr.T, i, c);
            } else if (m_order == 2) {
                deriv = d2_vec_field(fr.T, i, c);
            } else {
                const int im2 = c.is_closed ? (i + m - 2) % m : i - 2;
                const int ip2 = c.is_closed ? (i + 2) % m : i + 2;
                if (!c.is_closed && (i < 2 || i > m - 3)) continue;
                deriv = (fr.T[ip2] - 2.0 * fr.T[(i + 1) % m] + 2.0 * fr.T[(i + m - 1) % m] -
                         fr.T[im2]) /
                        (2.0 * h * h * h);
            }
            const double weight =
                m_order == 1 ? 1.0 : std::pow(st.time - t0, m_order - 1);
            sup = std::max(sup, squared_norm(deriv) * weight / m_t0);
        }
    }
    ResidualReport rep;
    rep.name = "dilation_monitor_m" + std::to_string(m_order);
    rep.scale = "M_t0";
    rep.max_residual = sup;
    rep.grid_h = states[0].curve.spacing;
    return rep;
}

std::vector<std::pair<double, double>> tau_kappa_ratio_monitor(
    std::span<const FlowState> states) {
    std::vector<std::pair<double, double>> out;
    for (const FlowState& st : states) {
        FrenetData fr = compute_frenet(st.curve, default_kappa_tol(st.curve));
        const double kmax = fr.max_kappa();
        if (kmax <= fr.kappa_tol) {
            out.emplace_back(st.time, 0.0);
            continue;
        }
        double ratio = 0.0;
        for (std::size_t i = 0; i < fr.kappa.size(); ++i)
            if (fr.kappa[i] >= 0.9 * kmax)
                ratio = std::max(ratio, std::fabs(fr.tau1[i]) / fr.kappa[i]);
        out.emplace_back(st.time, ratio);
    }
    return out;
}

double shrinker_residual(const DiscreteCurve& curve, double sigma_hat) {
    if (!(sigma_hat > 0.0)) throw std::invalid_argument("sigma_hat must be positive");
    FrenetData fr = compute_frenet(curve, default_kappa_tol(curve));
    double worst = 0.0;
    for (int i = 0; i < curve.size(); ++i) {
        const Vec perp = reject(curve.nodes[i], fr.T[i]);
        worst = std::max(worst, norm(fr.kappa_vec[i] + perp / (2.0 * sigma_hat)));
    }
    return worst;
}

double translator_residual(const DiscreteCurve& curve, const Vec& v) {
    if (norm(v) <= 0.0) throw std::invalid_argument("translation velocity must be nonzero");
    FrenetData fr = compute_frenet(curve, default_kappa_tol(curve));
    double worst = 0.0;
    for (int i = 0; i < curve.size(); ++i)
        worst = std::max(worst, norm(fr.kappa_vec[i] - reject(v, fr.T[i])));
    return worst;
}

double convergence_order(double e_coarse, double e_fine, double refinement_ratio) {
    if (e_fine <= 0.0 || e_coarse <= 0.0) return 0.0;
    return std::log(e_coarse / e_fine) / std::log(refinement_ratio);
}

}  // namespace fbcsf
