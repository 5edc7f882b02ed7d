#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fbcsf/barrier.hpp"
#include "fbcsf/flow.hpp"

namespace fbcsf {

struct ResidualReport {
    std::string name;
    double max_residual = 0.0;  // normalized by `scale`
    std::string scale;
    double grid_h = 0.0, grid_dt = 0.0;
    std::optional<double> order_estimate;  // filled by convergence_order over paired runs
    std::string note;
};

struct ResidualOptions {
    // sensitivity hook: flips the sign of the tau1^2 kappa term in the
    // curvature equation so vacuous checks are caught by the test matrix
    bool mutate_tau_sign = false;
};

/// Residual of d_t kappa = d_s^2 kappa + kappa^3 - tau1^2 kappa over a
/// window of >= 3 consecutive states at (nearly) equal dt. Time derivatives
/// at fixed arclength fraction are corrected by the measured tangential
/// drift of that parametrization; evaluation excludes 3 nodes at each open
/// end and nodes with kappa below tolerance. Normalized by max(1, max kappa^3).
ResidualReport residual_evolution_kappa(std::span<const FlowState> states,
                                        const ResidualOptions& options = {});

/// Same for d_t(kappa^2) = d_s^2(kappa^2) - 2 kappa_s^2 + 2 kappa^4
/// - 2 tau1^2 kappa^2 (no positivity guard needed). Normalized by
/// max(1, max kappa^4).
ResidualReport residual_evolution_kappa_sq(std::span<const FlowState> states);

/// Residual of (d_t - d_s^2) tau1 = 2 d_s(a tau1) + 2 tau1 kappa^2
/// - tau1 tau2^2 with a = kappa_s / kappa, on nodes with kappa > 10 tol.
ResidualReport residual_evolution_tau1(std::span<const FlowState> states);

/// Residual of (d_t d_s - d_s d_t) gamma = kappa^2 d_s gamma applied to the
/// coordinate functions. Normalized by max(1, max kappa^2).
ResidualReport residual_commutator(std::span<const FlowState> states);

/// Contact identities at the two endpoints:
///   d_s kappa = -eps kappa II(N, N),   tau1 = -eps II(N, B1),
/// eps = <T, nu>, plus the inequality consequences
/// |d_mu kappa| <= K |kappa| and |tau1| <= K (checked with +10h slack).
struct EndpointReport {
    ResidualReport base;                  // max of the relation residuals
    double kappa_relation[2] = {0, 0};    // per endpoint
    double tau_relation[2] = {0, 0};
    bool vacuous[2] = {false, false};     // kappa below tolerance there
    bool kappa_inequality_ok = true;
    bool tau_inequality_ok = true;
};
EndpointReport endpoint_relations(const FlowState& state, const Barrier& barrier);

/// sup over the window of |d_s^m T|^2 (t - t0)^(m-1) / M_t0 for
/// m in {1,2,3}; the window must not exceed 1/(4 M_t0).
ResidualReport dilation_invariant_monitor(std::span<const FlowState> states, int m);

/// Time series of max |tau1 / kappa| over nodes with kappa >= 0.9 max kappa.
std::vector<std::pair<double, double>> tau_kappa_ratio_monitor(
    std::span<const FlowState> states);

/// max_i |kappa_vec_i + x_i^perp / (2 sigma_hat)| for a curve centered at
/// the shrinking center.
double shrinker_residual(const DiscreteCurve& curve, double sigma_hat);

/// max_i |kappa_vec_i - (V - <V,T_i> T_i)|.
double translator_residual(const DiscreteCurve& curve, const Vec& v);

/// log2(e_coarse / e_fine) per halving of the refined parameter.
double convergence_order(double e_coarse, double e_fine, double refinement_ratio = 2.0);

}  // namespace fbcsf
