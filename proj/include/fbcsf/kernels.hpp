#pragma once

#include <limits>
#include <span>
#include <vector>

#include "fbcsf/barrier.hpp"
#include "fbcsf/curve.hpp"
#include "fbcsf/flow.hpp"

namespace fbcsf {

/// Spacetime center, cut-off radius and cut-off parameter of the
/// truncated reflected heat kernel. r = infinity disables the truncation
/// (the cut-off is identically 1 in that limit).
struct KernelParams {
    Vec center;                                            // x0
    double center_time = 0.0;                              // t0
    double r = std::numeric_limits<double>::infinity();    // cut-off radius
    double alpha = 0.5;
};

/// Backward Gaussian (4 pi sigma)^(-m/2) exp(-|x|^2 / (4 sigma)) with
/// m = dim_exponent (1 for curves). Throws when sigma_hat <= 0.
double gaussian_rho(const Vec& offset, double sigma_hat, int dim_exponent);

/// Cut-off eta((r^2/sigma)^(3/4) (|x|^2 - alpha sigma) / r^2) with
/// eta(xi) = (1 - xi)_+^4; equal to 1 wherever |x|^2 <= alpha sigma.
/// `offset` is already recentered (x - x0).
double cutoff_phi(const Vec& offset, double sigma_hat, const KernelParams& params);

/// Recentered reflected truncated kernel
///   rho(x - x0) phi(x - x0) + rho(x~ - x0) phi(x~ - x0),
/// with x~ the mirror of x across the barrier. Where the projection is
/// undefined (outside the tube) the reflected term is zero; with
/// barrier == nullptr only the direct term remains.
double reflected_kernel_f(const Vec& x, double t, const KernelParams& params,
                          const Barrier* barrier);

/// Trapezoidal quadrature of the kernel over the curve's arclength.
double gaussian_functional_phi(const DiscreteCurve& curve, double t, const KernelParams& params,
                               const Barrier* barrier);

struct EntropyScanSpec {
    std::vector<Vec> centers;           // boundary centers; empty = auto from endpoints
    std::vector<Vec> interior_centers;  // optional, tracked separately
    std::vector<double> sigma_ladder;   // empty = {4^-k} clamped to >= (3h)^2
    std::vector<double> radii;          // empty = {inf} plus rho_tub/8 when finite
};

struct EntropyReport {
    struct Sample {
        int center_index = 0;   // into centers (interior centers offset by centers.size())
        double r = 0.0, t0 = 0.0, t = 0.0, phi = 0.0;
    };
    std::vector<Vec> centers;            // boundary centers actually scanned
    std::vector<Vec> interior_centers;
    std::vector<double> radii, sigma_ladder;
    std::vector<Sample> phi_series;
    double entropy_sup = 0.0;            // over boundary centers
    double interior_sup = 0.0;           // over interior centers
    double monotonicity_violation = 0.0; // max positive increment at fixed (center, t0, r)
};

/// Evaluates the functional over a grid of centers, scales and radii for
/// every state, recording the supremum and any monotonicity violations.
/// Center times are t_last + sigma for each ladder entry. Throws on an
/// empty effective grid or fewer than one state.
EntropyReport entropy_scan(std::span<const FlowState> states, const Barrier* barrier,
                           const EntropyScanSpec& spec);

}  // namespace fbcsf
