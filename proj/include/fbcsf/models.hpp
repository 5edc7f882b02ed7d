#pragma once

#include <string>

#include "fbcsf/barrier.hpp"
#include "fbcsf/curve.hpp"

namespace fbcsf {

enum class ModelKind { Chord, Line, Circle, Semicircle, GrimReaper, HalfGrimReaper };

std::string model_kind_name(ModelKind kind);

/// Closed-form reference curves. Circles and semicircles shrink by
/// r(t) = sqrt(r0^2 - 2t); the Grim Reaper translates along its axis;
/// chords and lines are stationary.
struct ModelCurve {
    ModelKind kind = ModelKind::Chord;
    int ambient_dim = 2;
    Vec a, b;           // chord endpoints / line point and unit direction
    Vec center;         // circle, semicircle
    double radius = 1.0;
    Vec e1, e2;         // orthonormal plane basis (e1 = graph axis, e2 = translation axis)
    double window = 0.0;  // Grim Reaper graph half-width |x| <= window
    double extent = 10.0; // line sampling half-length

    static ModelCurve chord(const Vec& a, const Vec& b);
    static ModelCurve line(const Vec& point, const Vec& direction, double extent = 10.0);
    static ModelCurve circle(const Vec& center, double radius, const Vec& e1, const Vec& e2);
    /// e_in points from the contact plane into the domain, e_t along it.
    static ModelCurve semicircle(const Vec& center, double radius, const Vec& e_in,
                                 const Vec& e_t);
    static ModelCurve grim_reaper(const Vec& offset, const Vec& e1, const Vec& e2,
                                  double window = 1.5207963267948966);  // pi/2 - 0.05
    static ModelCurve half_grim_reaper(const Vec& offset, const Vec& e1, const Vec& e2,
                                       double window = 1.5207963267948966);

    /// Nodes exactly on the analytic curve at uniform parameter steps
    /// (arclength for the Grim Reaper via its arclength form
    /// x = asin(tanh s), y = log cosh s).
    DiscreteCurve sample(int m) const;

    /// r^2/2 for shrinking kinds, +inf otherwise.
    double extinction_time() const;

    /// The model advanced to time t (throws at or past extinction).
    ModelCurve at_time(double t) const;
};

inline DiscreteCurve exact_state(const ModelCurve& model, double t, int m) {
    return model.at_time(t).sample(m);
}

/// Flat barrier met orthogonally by a semicircle or half Grim Reaper.
Barrier flat_barrier_for(const ModelCurve& model);

/// Symmetric Hausdorff distance between the node sets measured against the
/// piecewise linear interpolants.
double hausdorff_distance(const DiscreteCurve& a, const DiscreteCurve& b);

/// Supremum of the interior Gaussian functional over a center/scale grid
/// with local refinement; the quadrature domain is the curve intersected
/// with the ball of radius window * sqrt(sigma) about each center. Throws
/// when window < 5 (quadrature unreliable).
double model_entropy(const ModelCurve& model, double window);

}  // namespace fbcsf
