#pragma once

#include <functional>
#include <vector>

#include "fbcsf/vec.hpp"

namespace fbcsf {

/// Implicit smooth hypersurface bounding the domain Omega = { F <= 0 },
/// with outward unit normal grad F / |grad F|. Supplies the nearest-point
/// projection zeta, the mirror map x~ = 2 zeta(x) - x, and the second
/// fundamental form.
///
/// Sign convention: II(u,v) = -<Hess F(p) u, v> / |grad F(p)|, so a
/// strictly convex Omega has negative-definite II with respect to the
/// outward normal (sphere of radius R, Omega its interior:
/// II(u,u) = -|u|^2 / R).
class Barrier {
public:
    using ScalarFn = std::function<double(const Vec&)>;
    using VecFn = std::function<Vec(const Vec&)>;
    using HessFn = std::function<Vec(const Vec&, const Vec&)>;  // Hessian-vector product

    static Barrier flat_halfspace(const Vec& unit_normal, double offset);
    static Barrier sphere(const Vec& center, double radius);
    static Barrier ellipsoid(const Vec& center, const std::vector<double>& semi_axes);
    static Barrier implicit(ScalarFn value, VecFn gradient, HessFn hessian, int dim,
                            double tubular_radius, double curvature_bound);

    double value(const Vec& x) const;
    Vec gradient(const Vec& x) const;
    Vec hess_apply(const Vec& x, const Vec& u) const;
    Vec outward_normal(const Vec& x) const;

    /// Nearest-point projection onto the surface. Flat and sphere use the
    /// closed form; otherwise a damped Newton iteration on the Lagrange
    /// condition, seeded by the first-order projection. Throws
    /// std::runtime_error("projection not unique") outside the tube or on
    /// failure to converge.
    Vec project(const Vec& x) const;

    /// Mirror image across the surface, 2 zeta(x) - x.
    Vec reflect(const Vec& x) const;

    /// II(u, v) at a surface point p; u, v must be tangent (checked).
    double second_fundamental_form(const Vec& p, const Vec& u, const Vec& v) const;

    /// Unsigned distance to the surface (exact for flat/sphere, first
    /// order estimate |F|/|grad F| otherwise).
    double distance(const Vec& x) const;

    double tubular_radius() const { return rho_tub_; }
    double curvature_bound() const { return curvature_bound_; }
    int dim() const { return dim_; }

private:
    enum class Kind { Flat, Sphere, Ellipsoid, Implicit };
    Barrier() = default;

    Kind kind_ = Kind::Flat;
    int dim_ = 2;
    double rho_tub_ = 0.0;
    double curvature_bound_ = 0.0;

    // flat
    Vec normal_;
    double offset_ = 0.0;
    // sphere / ellipsoid
    Vec center_;
    double radius_ = 0.0;
    std::vector<double> semi_axes_;
    // implicit oracles
    ScalarFn value_fn_;
    VecFn gradient_fn_;
    HessFn hessian_fn_;

    Vec project_newton(const Vec& x) const;
};

}  // namespace fbcsf
