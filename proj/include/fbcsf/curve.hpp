#pragma once

#include <cstdint>
#include <vector>

#include "fbcsf/vec.hpp"

namespace fbcsf {

/// Polyline sampling of an open arc (or closed loop) in R^d. All
/// differential operators assume the curve has been resampled to uniform
/// arclength spacing; `spacing` is the step h of that resampling.
struct DiscreteCurve {
    int ambient_dim = 2;
    std::vector<Vec> nodes;
    double spacing = 0.0;
    bool is_closed = false;

    int size() const { return static_cast<int>(nodes.size()); }
    double length() const;  // polyline length, closing segment included when closed
    bool finite() const;
};

/// Per-node Frenet frame with curvature and the first two torsions.
/// Where the frame degenerates (kappa below tolerance, or locally planar
/// so no binormal exists) the defined-flags are cleared and the dependent
/// fields hold zeros rather than noise.
struct FrenetData {
    std::vector<Vec> T;          // unit tangent
    std::vector<Vec> kappa_vec;  // curvature vector, second arclength derivative with
                                 // the tangential component removed
    std::vector<double> kappa;   // |kappa_vec|
    std::vector<Vec> N;          // principal normal (valid iff n_defined)
    std::vector<Vec> B1, B2;     // binormals (valid iff b1_defined / b2_defined)
    std::vector<double> tau1, tau2;
    std::vector<std::uint8_t> n_defined, b1_defined, b2_defined;
    double kappa_tol = 0.0;

    double max_kappa() const;
};

/// Default degeneracy threshold 1e-8 / h.
double default_kappa_tol(const DiscreteCurve& curve);

/// Resample to `target_m` nodes at uniform arclength along the piecewise
/// linear interpolant. Endpoints of open curves are kept exactly.
/// Throws std::runtime_error("collapsed curve") when the total length is
/// below 1e-14.
DiscreteCurve resample_arclength(const DiscreteCurve& curve, int target_m);

/// Tangent, curvature vector/scalar, principal normal, binormals and
/// torsions by centered second-order stencils (one-sided at open ends).
FrenetData compute_frenet(const DiscreteCurve& curve, double kappa_tol);

/// Max node distance to the least-squares best-fit affine 2-plane
/// (top-two eigenvectors of the second moment matrix of centered nodes).
double best_fit_plane_deviation(const DiscreteCurve& curve);

}  // namespace fbcsf
