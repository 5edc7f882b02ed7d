#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fbcsf/barrier.hpp"
#include "fbcsf/scenario.hpp"

using namespace fbcsf;

namespace {

constexpr double kPi = std::numbers::pi;

// nearest point on the ellipse (x/a)^2 + (y/b)^2 = 1 by dense sampling
// plus golden-section refinement; independent of the Newton projection
Vec ellipse_nearest_oracle(double a, double b, const Vec& x) {
    auto point = [&](double th) { return Vec{a * std::cos(th), b * std::sin(th)}; };
    auto dist2 = [&](double th) { return squared_norm(point(th) - x); };
    double best_th = 0.0, best = dist2(0.0);
    const int n = 20000;
    for (int i = 1; i < n; ++i) {
        const double th = 2.0 * kPi * i / n;
        const double d = dist2(th);
        if (d < best) {
            best = d;
            best_th = th;
        }
    }
    double lo = best_th - 2.0 * kPi / n, hi = best_th + 2.0 * kPi / n;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 120; ++it) {
        const double c = hi - inv_phi * (hi - lo);
        const double d = lo + inv_phi * (hi - lo);
        if (dist2(c) < dist2(d))
            hi = d;
        else
            lo = c;
    }
    return point(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("project: sphere and flat closed forms") {
    Barrier sphere = Barrier::sphere(Vec{0.0, 0.0, 0.0}, 2.0);
    Vec z = sphere.project(Vec{3.0, 0.0, 0.0});
    CHECK(distance(z, Vec{2.0, 0.0, 0.0}) <= 1e-12);

    Barrier flat = Barrier::flat_halfspace(Vec{1.0, 0.0, 0.0}, 0.0);
    Vec zf = flat.project(Vec{0.3, 5.0, -1.0});
    CHECK(distance(zf, Vec{0.0, 5.0, -1.0}) <= 1e-12);
}

TEST_CASE("project: ellipse foot point matches the dense-sampling oracle") {
    Barrier ell = Barrier::ellipsoid(Vec{0.0, 0.0}, {2.0, 1.0});
    const Vec x{2.2, 0.01};
    const Vec z = ell.project(x);
    const Vec oracle = ellipse_nearest_oracle(2.0, 1.0, x);
    CHECK(distance(z, oracle) <= 1e-6);
    CHECK(std::fabs(ell.value(z)) <= 1e-10);
    // x - zeta parallel to the normal at zeta
    const Vec nu = ell.outward_normal(z);
    const Vec off = x - z;
    CHECK(norm(reject(off, nu)) <= 1e-6 * std::max(1.0, norm(off)));
}

TEST_CASE("project: outside the tube is rejected") {
    Barrier sphere = Barrier::sphere(Vec{0.0, 0.0}, 2.0);
    CHECK_THROWS_WITH_AS(sphere.project(Vec{0.0, 0.0}), "projection not unique",
                         std::runtime_error);
}

TEST_CASE("reflect: flat mirror and sphere push-through") {
    Barrier flat = Barrier::flat_halfspace(Vec{1.0, 0.0}, 0.0);
    CHECK(distance(flat.reflect(Vec{-0.4, 1.0}), Vec{0.4, 1.0}) <= 1e-12);

    Barrier sphere = Barrier::sphere(Vec{0.0, 0.0, 0.0}, 1.0);
    CHECK(distance(sphere.reflect(Vec{0.9, 0.0, 0.0}), Vec{1.1, 0.0, 0.0}) <= 1e-12);
}

TEST_CASE("reflect: involution on random tube points") {
    Barrier ell = Barrier::ellipsoid(Vec{0.5, -0.25}, {2.0, 1.0});
    SplitMix64 rng(3);
    int tested = 0;
    double worst = 0.0;
    while (tested < 100) {
        const double th = kPi * (rng.uniform_pm1() + 1.0);
        Vec on{0.5 + 2.0 * std::cos(th), -0.25 + std::sin(th)};
        const Vec nu = ell.outward_normal(on);
        const double off = 0.4 * ell.tubular_radius() * rng.uniform_pm1();
        const Vec x = on + off * nu;
        const Vec back = ell.reflect(ell.reflect(x));
        worst = std::max(worst, distance(back, x));
        ++tested;
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("reflect: preserves distance to the barrier") {
    Barrier sphere = Barrier::sphere(Vec{0.0, 0.0}, 2.0);
    SplitMix64 rng(5);
    for (int i = 0; i < 50; ++i) {
        const double th = kPi * (rng.uniform_pm1() + 1.0);
        const double off = 0.45 * rng.uniform_pm1();
        const Vec x{(2.0 + off) * std::cos(th), (2.0 + off) * std::sin(th)};
        const Vec mirrored = sphere.reflect(x);
        CHECK(std::fabs(sphere.distance(mirrored) - sphere.distance(x)) <= 1e-6);
    }
    Barrier flat = Barrier::flat_halfspace(Vec{0.0, 1.0}, 0.3);
    const Vec x{1.0, 0.9};
    CHECK(std::fabs(flat.distance(flat.reflect(x)) - flat.distance(x)) <= 1e-14);
}

TEST_CASE("second fundamental form: sphere, flat, ellipse vertex") {
    Barrier sphere = Barrier::sphere(Vec{0.0, 0.0, 0.0}, 2.0);
    const Vec p{2.0, 0.0, 0.0};
    CHECK(sphere.second_fundamental_form(p, Vec{0.0, 1.0, 0.0}, Vec{0.0, 1.0, 0.0}) ==
          doctest::Approx(-0.5).epsilon(1e-10));

    Barrier flat = Barrier::flat_halfspace(Vec{1.0, 0.0, 0.0}, 0.0);
    CHECK(flat.second_fundamental_form(Vec{0.0, 3.0, 1.0}, Vec{0.0, 1.0, 0.0},
                                       Vec{0.0, 0.0, 1.0}) == doctest::Approx(0.0));

    // ellipse (2,1) at the vertex (2,0): normal curvature a/b^2 = 2,
    // negative under the convexity convention
    Barrier ell = Barrier::ellipsoid(Vec{0.0, 0.0}, {2.0, 1.0});
    CHECK(ell.second_fundamental_form(Vec{2.0, 0.0}, Vec{0.0, 1.0}, Vec{0.0, 1.0}) ==
          doctest::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("second fundamental form: rejects non-tangent input") {
    Barrier sphere = Barrier::sphere(Vec{0.0, 0.0}, 1.0);
    CHECK_THROWS_AS(sphere.second_fundamental_form(Vec{1.0, 0.0}, Vec{1.0, 0.0}, Vec{0.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("sphere: |II(u,u)| R = |u|^2 for random tangents") {
    const double radius = 1.7;
    Barrier sphere = Barrier::sphere(Vec{0.2, -0.1, 0.4}, radius);
    SplitMix64 rng(9);
    for (int i = 0; i < 40; ++i) {
        Vec dir{rng.uniform_pm1(), rng.uniform_pm1(), rng.uniform_pm1()};
        if (norm(dir) < 1e-3) continue;
        const Vec p = Vec{0.2, -0.1, 0.4} + radius * normalized(dir);
        Vec u{rng.uniform_pm1(), rng.uniform_pm1(), rng.uniform_pm1()};
        u = reject(u, sphere.outward_normal(p));
        if (norm(u) < 1e-3) continue;
        const double ii = sphere.second_fundamental_form(p, u, u);
        CHECK(std::fabs(std::fabs(ii) * radius - squared_norm(u)) <= 1e-8);
        CHECK(ii < 0.0);
    }
}

TEST_CASE("normal, projection and II are mutually consistent") {
    // directional derivative of the outward normal along a tangent equals
    // -S(u) with <S(u), v> = II(u, v); finite-difference check
    Barrier ell = Barrier::ellipsoid(Vec{0.0, 0.0}, {2.0, 1.0});
    const double th = 0.8;
    const Vec p{2.0 * std::cos(th), std::sin(th)};
    const Vec nu = ell.outward_normal(p);
    Vec u = normalized(reject(Vec{-std::sin(th), std::cos(th)}, nu));
    const double step = 1e-6;
    const Vec nu_plus = ell.outward_normal(ell.project(p + step * u));
    const Vec nu_minus = ell.outward_normal(ell.project(p - step * u));
    const Vec dnu = (nu_plus - nu_minus) / (2.0 * step);
    const double ii_uu = ell.second_fundamental_form(ell.project(p), u, u);
    // <d_u nu, u> = -II(u, u) under the fixed sign convention
    CHECK(std::fabs(dot(dnu, u) + ii_uu) <= 1e-4);
}

TEST_CASE("projection is idempotent inside the tube") {
    Barrier ell = Barrier::ellipsoid(Vec{0.0, 0.0}, {2.0, 1.0});
    SplitMix64 rng(13);
    for (int i = 0; i < 50; ++i) {
        const double th = kPi * (rng.uniform_pm1() + 1.0);
        const Vec on{2.0 * std::cos(th), std::sin(th)};
        const Vec x =
            on + (0.3 * ell.tubular_radius() * rng.uniform_pm1()) * ell.outward_normal(on);
        const Vec z = ell.project(x);
        CHECK(distance(ell.project(z), z) <= 1e-8);
    }
}
