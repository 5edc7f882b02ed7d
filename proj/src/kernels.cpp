#include "fbcsf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fbcsf {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double gaussian_rho(const Vec& offset, double sigma_hat, int dim_exponent) {
    if (!(sigma_hat > 0.0)) throw std::invalid_argument("sigma_hat must be positive");
    const double pref = std::pow(4.0 * std::numbers::pi * sigma_hat, -0.5 * dim_exponent);
    return pref * std::exp(-squared_norm(offset) / (4.0 * sigma_hat));
}

double cutoff_phi(const Vec& offset, double sigma_hat, const KernelParams& params) {
    if (!(sigma_hat > 0.0)) throw std::invalid_argument("sigma_hat must be positive");
    if (std::isinf(params.r)) return 1.0;
    const double r2 = params.r * params.r;
    const double xi = std::pow(r2 / sigma_hat, 0.75) *
                      (squared_norm(offset) - params.alpha * sigma_hat) / r2;
    const double base = 1.0 - xi;
    if (base <= 0.0) return 0.0;
    if (base >= 1.0) return 1.0;
    return base * base * base * base;
}

double reflected_kernel_f(const Vec& x, double t, const KernelParams& params,
                          const Barrier* barrier) {
    const double sigma_hat = params.center_time - t;
    if (!(sigma_hat > 0.0)) throw std::invalid_argument("sigma_hat must be positive");
    const Vec direct = x - params.center;
    double f = gaussian_rho(direct, sigma_hat, 1) * cutoff_phi(direct, sigma_hat, params);
    if (barrier != nullptr) {
        if (barrier->distance(x) < barrier->tubular_radius()) {
            try {
                const Vec mirrored = barrier->reflect(x) - params.center;
                f += gaussian_rho(mirrored, sigma_hat, 1) *
                     cutoff_phi(mirrored, sigma_hat, params);
            } catch (const std::runtime_error&) {
                // projection undefined; the reflected term is dropped, which the
                // cut-off radius cap r <= rho_tub/8 makes harmless
            }
        }
    }
    return f;
}

double gaussian_functional_phi(const DiscreteCurve& curve, double t, const KernelParams& params,
                               const Barrier* barrier) {
    const int m = curve.size();
    if (m == 0) return 0.0;
    const double sigma_hat = params.center_time - t;
    if (!(sigma_hat > 0.0)) throw std::invalid_argument("sigma_hat must be positive");
    if (m == 1) return 0.0;

    std::vector<double> f(m);
    for (int i = 0; i < m; ++i) f[i] = reflected_kernel_f(curve.nodes[i], t, params, barrier);
    double total = 0.0;
    const int nseg = curve.is_closed ? m : m - 1;
    for (int i = 0; i < nseg; ++i) {
        const int j = (i + 1) % m;
        total += 0.5 * (f[i] + f[j]) * distance(curve.nodes[i], curve.nodes[j]);
    }
    return total;
}

namespace {

// orthonormal tangent frame of the barrier at a point (Gram-Schmidt of the
// coordinate axes against the outward normal)
std::vector<Vec> tangent_frame(const Barrier& barrier, const Vec& p, int count) {
    const Vec nu = barrier.outward_normal(p);
    std::vector<Vec> frame;
    for (int axis = 0; axis < p.dim() && static_cast<int>(frame.size()) < count; ++axis) {
        Vec e(p.dim());
        e[axis] = 1.0;
        Vec v = reject(e, nu);
        for (const Vec& f : frame) v = reject(v, f);
        if (norm(v) > 1e-6) frame.push_back(normalized(v));
    }
    return frame;
}

}  // namespace

EntropyReport entropy_scan(std::span<const FlowState> states, const Barrier* barrier,
                           const EntropyScanSpec& spec) {
    if (states.empty()) throw std::invalid_argument("entropy scan needs at least one state");

    EntropyReport report;
    const FlowState& last = states.back();
    const double h = last.curve.spacing;

    report.radii = spec.radii;
    if (report.radii.empty()) {
        report.radii.push_back(kInf);
        if (barrier != nullptr && std::isfinite(barrier->tubular_radius()))
            report.radii.push_back(barrier->tubular_radius() / 8.0);
    }
    if (barrier != nullptr) {
        for (double r : report.radii)
            if (std::isfinite(r) && r > barrier->tubular_radius() / 8.0 + 1e-12)
                throw std::invalid_argument("cut-off radius exceeds rho_tub / 8");
    }

    report.sigma_ladder = spec.sigma_ladder;
    if (report.sigma_ladder.empty()) {
        const double sigma_floor = 9.0 * h * h;
        for (int k = 0; k <= 8; ++k) {
            const double s = std::pow(4.0, -k);
            if (s < sigma_floor && k > 0) break;
            report.sigma_ladder.push_back(s);
        }
    }

    report.centers = spec.centers;
    if (report.centers.empty() && barrier != nullptr && !last.curve.is_closed) {
        // endpoints of the final curve plus a tangential grid around each
        double delta = 0.0;
        for (double r : report.radii)
            if (std::isfinite(r)) delta = std::max(delta, 0.5 * r);
        if (delta == 0.0) delta = std::max(last.length / 4.0, 4.0 * h);
        for (int e : {0, last.curve.size() - 1}) {
            const Vec p = barrier->project(last.curve.nodes[e]);
            report.centers.push_back(p);
            const std::vector<Vec> frame = tangent_frame(*barrier, p, 2);
            if (frame.size() == 1) {
                for (int i = -2; i <= 2; ++i) {
                    if (i == 0) continue;
                    try {
                        report.centers.push_back(barrier->project(p + (i * delta) * frame[0]));
                    } catch (const std::runtime_error&) {
                    }
                }
            } else if (frame.size() >= 2) {
                for (int i = -2; i <= 2; ++i)
                    for (int j = -2; j <= 2; ++j) {
                        if (i == 0 && j == 0) continue;
                        try {
                            report.centers.push_back(
                                barrier->project(p + (i * delta) * frame[0] + (j * delta) * frame[1]));
                        } catch (const std::runtime_error&) {
                        }
                    }
            }
        }
    }
    report.interior_centers = spec.interior_centers;
    if (report.centers.empty() && report.interior_centers.empty())
        throw std::invalid_argument("empty entropy scan grid");

    const int n_boundary = static_cast<int>(report.centers.size());
    auto scan_center = [&](const Vec& center, int center_index, bool boundary) {
        for (double r : report.radii) {
            for (double sigma : report.sigma_ladder) {
                KernelParams params;
                params.center = center;
                params.center_time = last.time + sigma;
                params.r = r;
                double prev = kInf;
                for (const FlowState& st : states) {
                    const double phi =
                        gaussian_functional_phi(st.curve, st.time, params, barrier);
                    report.phi_series.push_back({center_index, r, params.center_time, st.time, phi});
                    if (boundary)
                        report.entropy_sup = std::max(report.entropy_sup, phi);
                    else
                        report.interior_sup = std::max(report.interior_sup, phi);
                    if (std::isfinite(prev))
                        report.monotonicity_violation =
                            std::max(report.monotonicity_violation, phi - prev);
                    prev = phi;
                }
            }
        }
    };
    for (int c = 0; c < n_boundary; ++c) scan_center(report.centers[c], c, true);
    for (std::size_t c = 0; c < report.interior_centers.size(); ++c)
        scan_center(report.interior_centers[c], n_boundary + static_cast<int>(c), false);
    return report;
}

}  // namespace fbcsf
