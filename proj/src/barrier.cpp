#include "fbcsf/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fbcsf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gaussian elimination with partial pivoting for the (d+1)x(d+1) Newton
// systems of the Lagrange projection
bool solve_dense(double a[kMaxDim + 1][kMaxDim + 1], double b[kMaxDim + 1], int n,
                 double x[kMaxDim + 1]) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (std::fabs(a[piv][col]) < 1e-300) return false;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a[piv][c], a[col][c]);
            std::swap(b[piv], b[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return true;
}

}  // namespace

Barrier Barrier::flat_halfspace(const Vec& unit_normal, double offset) {
    Barrier b;
    b.kind_ = Kind::Flat;
    b.dim_ = unit_normal.dim();
    b.normal_ = normalized(unit_normal);
    b.offset_ = offset;
    b.rho_tub_ = kInf;
    b.curvature_bound_ = 0.0;
    return b;
}

Barrier Barrier::sphere(const Vec& center, double radius) {
    if (radius <= 0.0) throw std::invalid_argument("sphere radius must be positive");
    Barrier b;
    b.kind_ = Kind::Sphere;
    b.dim_ = center.dim();
    b.center_ = center;
    b.radius_ = radius;
    b.rho_tub_ = radius;
    b.curvature_bound_ = 1.0 / radius;
    return b;
}

Barrier Barrier::ellipsoid(const Vec& center, const std::vector<double>& semi_axes) {
    if (static_cast<int>(semi_axes.size()) != center.dim())
        throw std::invalid_argument("semi-axis count must match dimension");
    for (double a : semi_axes)
        if (a <= 0.0) throw std::invalid_argument("semi-axes must be positive");
    Barrier b;
    b.kind_ = Kind::Ellipsoid;
    b.dim_ = center.dim();
    b.center_ = center;
    b.semi_axes_ = semi_axes;
    const double amax = *std::max_element(semi_axes.begin(), semi_axes.end());
    const double amin = *std::min_element(semi_axes.begin(), semi_axes.end());
    b.rho_tub_ = amin * amin / amax;          // minimal radius of curvature
    b.curvature_bound_ = amax / (amin * amin);
    return b;
}

Barrier Barrier::implicit(ScalarFn value, VecFn gradient, HessFn hessian, int dim,
                          double tubular_radius, double curvature_bound) {
    if (tubular_radius <= 0.0) throw std::invalid_argument("tubular radius must be positive");
    Barrier b;
    b.kind_ = Kind::Implicit;
    b.dim_ = dim;
    b.value_fn_ = std::move(value);
    b.gradient_fn_ = std::move(gradient);
    b.hessian_fn_ = std::move(hessian);
    b.rho_tub_ = tubular_radius;
    b.curvature_bound_ = curvature_bound;
    return b;
}

double Barrier::value(const Vec& x) const {
    switch (kind_) {
        case Kind::Flat:
            return dot(normal_, x) - offset_;
        case Kind::Sphere:
            return squared_norm(x - center_) - radius_ * radius_;
        case Kind::Ellipsoid: {
            double s = 0.0;
            for (int i = 0; i < dim_; ++i) {
                const double q = (x[i] - center_[i]) / semi_axes_[i];
                s += q * q;
            }
            return s - 1.0;
        }
        case Kind::Implicit:
            return value_fn_(x);
    }
    return 0.0;
}

Vec Barrier::gradient(const Vec& x) const {
    switch (kind_) {
        case Kind::Flat:
            return normal_;
        case Kind::Sphere:
            return 2.0 * (x - center_);
        case Kind::Ellipsoid: {
            Vec g(dim_);
            for (int i = 0; i < dim_; ++i)
                g[i] = 2.0 * (x[i] - center_[i]) / (semi_axes_[i] * semi_axes_[i]);
            return g;
        }
        case Kind::Implicit:
            return gradient_fn_(x);
    }
    return Vec(dim_);
}

Vec Barrier::hess_apply(const Vec& x, const Vec& u) const {
    switch (kind_) {
        case Kind::Flat:
            return Vec(dim_);
        case Kind::Sphere:
            return 2.0 * u;
        case Kind::Ellipsoid: {
            Vec g(dim_);
            for (int i = 0; i < dim_; ++i) g[i] = 2.0 * u[i] / (semi_axes_[i] * semi_axes_[i]);
            return g;
        }
        case Kind::Implicit:
            return hessian_fn_(x, u);
    }
    return Vec(dim_);
}

Vec Barrier::outward_normal(const Vec& x) const {
    return normalized(gradient(x));
}

double Barrier::distance(const Vec& x) const {
    switch (kind_) {
        case Kind::Flat:
            return std::fabs(dot(normal_, x) - offset_);
        case Kind::Sphere:
            return std::fabs(norm(x - center_) - radius_);
        default: {
            const double g = norm(gradient(x));
            if (g < 1e-300) return kInf;
            return std::fabs(value(x)) / g;
        }
    }
}

Vec Barrier::project(const Vec& x) const {
    switch (kind_) {
        case Kind::Flat:
            return x - (dot(normal_, x) - offset_) * normal_;
        case Kind::Sphere: {
            const Vec r = x - center_;
            const double n = norm(r);
            if (n < 1e-12 || std::fabs(n - radius_) >= rho_tub_)
                throw std::runtime_error("projection not unique");
            return center_ + (radius_ / n) * r;
        }
        default:
            return project_newton(x);
    }
}

// Damped Newton on the Lagrange condition
//   p - x + lambda grad F(p) = 0,  F(p) = 0,
// seeded by the first-order projection x - F grad F / |grad F|^2.
Vec Barrier::project_newton(const Vec& x) const {
    const int d = dim_;
    Vec g0 = gradient(x);
    const double g0n2 = squared_norm(g0);
    if (g0n2 < 1e-300) throw std::runtime_error("projection not unique");
    Vec p = x - (value(x) / g0n2) * g0;
    double lambda = dot(x - p, gradient(p)) / std::max(squared_norm(gradient(p)), 1e-300);

    auto residual = [&](const Vec& pp, double lam, double out[kMaxDim + 1]) {
        const Vec g = gradient(pp);
        for (int i = 0; i < d; ++i) out[i] = pp[i] - x[i] + lam * g[i];
        out[d] = value(pp);
    };
    auto res_norm = [&](const Vec& pp, double lam) {
        double r[kMaxDim + 1];
        residual(pp, lam, r);
        double s = 0.0;
        for (int i = 0; i <= d; ++i) s += r[i] * r[i];
        return std::sqrt(s);
    };

    double rn = res_norm(p, lambda);
    for (int it = 0; it < 50 && rn > 1e-12; ++it) {
        const Vec g = gradient(p);
        double jac[kMaxDim + 1][kMaxDim + 1] = {};
        double rhs[kMaxDim + 1];
        for (int i = 0; i < d; ++i) {
            Vec ei(d);
            ei[i] = 1.0;
            const Vec hcol = hess_apply(p, ei);
            for (int r = 0; r < d; ++r) jac[r][i] = lambda * hcol[r] + (r == i ? 1.0 : 0.0);
            jac[d][i] = g[i];
        }
        for (int r = 0; r < d; ++r) jac[r][d] = g[r];
        residual(p, lambda, rhs);
        for (int i = 0; i <= d; ++i) rhs[i] = -rhs[i];

        double delta[kMaxDim + 1];
        if (!solve_dense(jac, rhs, d + 1, delta)) throw std::runtime_error("projection not unique");

        double stepsize = 1.0;
        for (int bt = 0; bt < 30; ++bt) {
            Vec p_try = p;
            for (int i = 0; i < d; ++i) p_try[i] += stepsize * delta[i];
            const double lam_try = lambda + stepsize * delta[d];
            const double rn_try = res_norm(p_try, lam_try);
            if (rn_try < rn) {
                p = p_try;
                lambda = lam_try;
                rn = rn_try;
                break;
            }
            stepsize *= 0.5;
            if (bt == 29) throw std::runtime_error("projection not unique");
        }
    }
    if (rn > 1e-10) throw std::runtime_error("projection not unique");
    if (norm(x - p) >= rho_tub_) throw std::runtime_error("projection not unique");
    return p;
}

Vec Barrier::reflect(const Vec& x) const {
    return 2.0 * project(x) - x;
}

double Barrier::second_fundamental_form(const Vec& p, const Vec& u, const Vec& v) const {
    const Vec g = gradient(p);
    const double gn = norm(g);
    if (gn < 1e-300) throw std::invalid_argument("degenerate gradient");
    const double scale = std::max({1.0, norm(u), norm(v)});
    if (std::fabs(value(p)) > 1e-8 * std::max(1.0, gn))
        throw std::invalid_argument("point not on barrier");
    const Vec nu = g / gn;
    if (std::fabs(dot(u, nu)) > 1e-8 * scale || std::fabs(dot(v, nu)) > 1e-8 * scale)
        throw std::invalid_argument("second fundamental form needs tangent vectors");
    return -dot(hess_apply(p, u), v) / gn;
}

}  // namespace fbcsf
