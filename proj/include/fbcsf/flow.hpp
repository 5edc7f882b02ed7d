#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "fbcsf/barrier.hpp"
#include "fbcsf/curve.hpp"

namespace fbcsf {

struct FlowConfig {
    int node_count = 128;
    double cfl = 0.5;     // fraction of the stability cap min(h^2/2, 1/(4 max kappa^2))
    double t_end = 1.0;
    double kappa_cap = 1e8;   // stop once max kappa^2 exceeds this
    double len_min = 1e-8;    // stop once total length falls below this
    int output_every = 10;
    std::uint64_t seed = 0;
    double dt_fixed = 0.0;    // when > 0, overrides the CFL step size
    double h_min = 0.0;       // when > 0, node count shrinks once spacing < h_min/2
};

struct FlowState {
    DiscreteCurve curve;
    double time = 0.0;
    double dt_last = 0.0;
    double max_kappa_sq = 0.0;     // sup of kappa^2 over the curve
    double boundary_dist = 0.0;    // max endpoint distance to the barrier
    double boundary_angle = 0.0;   // max angle between endpoint tangent and barrier normal
    double length = 0.0;
    bool singular = false;
};

enum class SingularityType { None, TypeI, TypeII };

struct SingularityRecord {
    double t_est = std::numeric_limits<double>::infinity();
    SingularityType type_flag = SingularityType::None;
    std::vector<std::pair<double, double>> ratio_history;  // (t, max|kappa| sqrt(T-t))
    Vec blowup_point;
};

struct TimeSample {
    double t = 0.0, dt = 0.0, length = 0.0, max_kappa = 0.0;
    double boundary_dist = 0.0, boundary_angle = 0.0;
};

enum class StopReason { ReachedTEnd, LengthBelowMin, CurvatureCap };

struct FlowResult {
    std::vector<FlowState> states;   // snapshots at the output cadence (+ final)
    std::vector<TimeSample> series;  // every accepted step
    SingularityRecord record;
    StopReason reason = StopReason::ReachedTEnd;
};

/// Node velocities of the curve shortening update. Interior nodes move by
/// the centered-stencil curvature vector. With a barrier, each endpoint
/// uses a ghost node mirroring the adjacent node across the barrier's
/// tangent hyperplane at the endpoint, so the flat-barrier scheme equals
/// the interior scheme on the reflection-doubled curve and orthogonal
/// contact is built in. Without a barrier, open ends use one-sided
/// stencils.
std::vector<Vec> flow_velocities(const DiscreteCurve& curve, const FrenetData& frenet,
                                 const Barrier* barrier);

/// Recomputes diagnostics (length, max kappa^2, boundary residuals) for a
/// curve at a given time. When out_frenet is non-null the frame used for
/// the diagnostics is returned so the caller can reuse it for the next step.
FlowState make_flow_state(DiscreteCurve curve, double time, double dt_last,
                          const Barrier* barrier, FrenetData* out_frenet = nullptr);

/// One explicit Euler step with dt = cfl * min(h^2/2, 1/(4 max kappa^2)),
/// endpoint ghost update, endpoint re-projection onto the barrier, and
/// resampling back to uniform arclength. `cached` may hold the frenet data
/// of state.curve; `out_frenet` receives the frame of the returned state.
/// Throws std::runtime_error("blowup overflow") on non-finite nodes.
FlowState step(const FlowState& state, const Barrier* barrier, double cfl,
               double dt_fixed = 0.0,
               double kappa_cap = std::numeric_limits<double>::infinity(),
               const FrenetData* cached = nullptr, FrenetData* out_frenet = nullptr);

/// Runs the flow until t_end, length < len_min, or max kappa^2 > kappa_cap.
/// Fits the singular time from the tail of 1/max_kappa_sq against t and
/// classifies the blow-up from the ratio history.
FlowResult run(const DiscreteCurve& initial, const Barrier* barrier, const FlowConfig& config);

/// Type I iff the ratio stays within [0.8, 1.2] of its median over the last
/// decade of (T_est - t); Type II iff it grows monotonically by more than
/// 50% there. Throws std::runtime_error("insufficient samples") unless the
/// record has >= 10 samples spanning a factor >= 8 in (T_est - t).
SingularityType classify_singularity(const SingularityRecord& record);

/// Parabolic rescaling (curve - z) / sqrt(2 (t_est - t)). Throws when
/// state.time >= t_est.
DiscreteCurve rescale_type_i(const FlowState& state, const Vec& z, double t_est);

}  // namespace fbcsf
