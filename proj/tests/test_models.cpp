#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fbcsf/analysis.hpp"
#include "fbcsf/flow.hpp"
#include "fbcsf/models.hpp"

using namespace fbcsf;

namespace {
constexpr double kPi = std::numbers::pi;
const double kSqrt2PiOverE = std::sqrt(2.0 * kPi / std::numbers::e);
}  // namespace

TEST_CASE("sample: nodes satisfy the defining equations") {
    ModelCurve circle = ModelCurve::circle(Vec{0.3, -0.2}, 1.4, Vec{1.0, 0.0}, Vec{0.0, 1.0});
    for (const Vec& p : circle.sample(64).nodes)
        CHECK(std::fabs(distance(p, Vec{0.3, -0.2}) - 1.4) <= 1e-12);

    ModelCurve reaper = ModelCurve::grim_reaper(Vec{0.0, 0.0}, Vec{1.0, 0.0}, Vec{0.0, 1.0}, 1.4);
    for (const Vec& p : reaper.sample(64).nodes)
        CHECK(std::fabs(p[1] + std::log(std::cos(p[0]))) <= 1e-12);

    // uniform spacing within 1%
    DiscreteCurve gr = reaper.sample(128);
    for (int i = 0; i + 1 < gr.size(); ++i)
        CHECK(std::fabs(distance(gr.nodes[i], gr.nodes[i + 1]) - gr.spacing) <=
              0.01 * gr.spacing);
}

TEST_CASE("sample: semicircle meets its barrier orthogonally by construction") {
    ModelCurve semi = ModelCurve::semicircle(Vec{0.0, 0.0}, 1.0, Vec{1.0, 0.0}, Vec{0.0, 1.0});
    Barrier flat = flat_barrier_for(semi);
    DiscreteCurve c = semi.sample(128);
    FrenetData fr = compute_frenet(c, default_kappa_tol(c));
    for (int e : {0, c.size() - 1}) {
        CHECK(flat.distance(c.nodes[e]) <= 1e-12);
        const double align = std::fabs(dot(fr.T[e], flat.outward_normal(c.nodes[e])));
        CHECK(align >= 1.0 - 5.0 * c.spacing * c.spacing);
    }
}

TEST_CASE("exact_state: radius law, stationary chord, translating reaper") {
    ModelCurve circle = ModelCurve::circle(Vec{0.0, 0.0}, 1.0, Vec{1.0, 0.0}, Vec{0.0, 1.0});
    CHECK(circle.at_time(0.375).radius == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(circle.at_time(0.5), std::invalid_argument);

    ModelCurve chord = ModelCurve::chord(Vec{-1.0, 0.0}, Vec{1.0, 0.0});
    DiscreteCurve c0 = exact_state(chord, 0.0, 16);
    DiscreteCurve c1 = exact_state(chord, 3.7, 16);
    for (int i = 0; i < 16; ++i) CHECK(distance(c0.nodes[i], c1.nodes[i]) == 0.0);

    ModelCurve reaper = ModelCurve::grim_reaper(Vec{0.0, 0.0}, Vec{1.0, 0.0}, Vec{0.0, 1.0}, 1.4);
    DiscreteCurve g0 = exact_state(reaper, 0.0, 32);
    DiscreteCurve g1 = exact_state(reaper, 1.0, 32);
    for (int i = 0; i < 32; ++i) {
        CHECK(g1.nodes[i][0] == doctest::Approx(g0.nodes[i][0]).epsilon(1e-14));
        CHECK(g1.nodes[i][1] - g0.nodes[i][1] == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("hausdorff: identical, concentric, and the reflected half") {
    ModelCurve circle = ModelCurve::circle(Vec{0.0, 0.0}, 1.0, Vec{1.0, 0.0}, Vec{0.0, 1.0});
    DiscreteCurve a = circle.sample(256);
    CHECK(hausdorff_distance(a, a) == 0.0);

    ModelCurve bigger = ModelCurve::circle(Vec{0.0, 0.0}, 1.1, Vec{1.0, 0.0}, Vec{0.0, 1.0});
    CHECK(hausdorff_distance(a, bigger.sample(256)) == doctest::Approx(0.1).epsilon(1e-5));

    // semicircle against its reflection-completed full circle: the farthest
    // circle point is the opposite pole (-1, 0), whose distance to the
    // closed right half-circle is realized at the endpoints (0, +-1),
    // giving sqrt(2); confirmed by dense sampling
    ModelCurve semi = ModelCurve::semicircle(Vec{0.0, 0.0}, 1.0, Vec{1.0, 0.0}, Vec{0.0, 1.0});
    DiscreteCurve half = semi.sample(512);
    const double hd = hausdorff_distance(half, a);
    double oracle = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double th = 2.0 * kPi * i / 100000;
        const Vec p{std::cos(th), std::sin(th)};
        double best = 1e300;
        for (const Vec& q : half.nodes) best = std::min(best, distance(p, q));
        oracle = std::max(oracle, best);
    }
    CHECK(hd == doctest::Approx(oracle).epsilon(1e-3));
    CHECK(hd == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("model entropy: line, circle, reaper ordering") {
    ModelCurve line = ModelCurve::line(Vec{0.0, 0.0}, Vec{1.0, 0.0});
    ModelCurve circle = ModelCurve::circle(Vec{0.0, 0.0}, 1.0, Vec{1.0, 0.0}, Vec{0.0, 1.0});
    ModelCurve reaper = ModelCurve::grim_reaper(Vec{0.0, 0.0}, Vec{1.0, 0.0}, Vec{0.0, 1.0});
    const double e_line = model_entropy(line, 12.0);
    const double e_circle = model_entropy(circle, 12.0);
    const double e_reaper = model_entropy(reaper, 8.0);
    CHECK(std::fabs(e_line - 1.0) <= 1e-3);
    CHECK(std::fabs(e_circle - kSqrt2PiOverE) <= 5e-3);
    CHECK(e_line < e_circle);
    CHECK(e_circle < e_reaper);
    CHECK_THROWS_AS(model_entropy(line, 4.0), std::invalid_argument);
}

TEST_CASE("exact states are discrete shrinkers and translators") {
    ModelCurve circle = ModelCurve::circle(Vec{0.0, 0.0}, 1.0, Vec{1.0, 0.0}, Vec{0.0, 1.0});
    const double t = 0.2;
    DiscreteCurve c = exact_state(circle, t, 256);
    const double sigma = circle.extinction_time() - t;
    CHECK(shrinker_residual(c, sigma) <= 10.0 * c.spacing * c.spacing);

    ModelCurve semi = ModelCurve::semicircle(Vec{0.0, 0.0}, 1.0, Vec{1.0, 0.0}, Vec{0.0, 1.0});
    DiscreteCurve s = exact_state(semi, t, 256);
    CHECK(shrinker_residual(s, 0.5 - t) <= 10.0 * s.spacing * s.spacing);

    ModelCurve reaper = ModelCurve::grim_reaper(Vec{0.0, 0.0}, Vec{1.0, 0.0}, Vec{0.0, 1.0}, 1.4);
    DiscreteCurve g = reaper.sample(256);
    CHECK(translator_residual(g, Vec{0.0, 1.0}) <= 10.0 * g.spacing * g.spacing);

    // a chord through the origin is trivially a shrinker (both terms vanish)
    DiscreteCurve line = ModelCurve::chord(Vec{-1.0, -1.0}, Vec{1.0, 1.0}).sample(64);
    CHECK(shrinker_residual(line, 0.7) <= 1e-10);

    // a line parallel to V is trivially a translator, the circle is not
    DiscreteCurve upline = ModelCurve::chord(Vec{0.3, -1.0}, Vec{0.3, 1.0}).sample(64);
    CHECK(translator_residual(upline, Vec{0.0, 2.0}) <= 1e-10);
    CHECK(translator_residual(exact_state(circle, 0.0, 128), Vec{0.0, 1.0}) >= 0.5);
}

TEST_CASE("flowing an exact state one step tracks the closed form") {
    ModelCurve circle = ModelCurve::circle(Vec{0.0, 0.0}, 1.0, Vec{1.0, 0.0}, Vec{0.0, 1.0});
    const double t = 0.1;
    FlowState st = make_flow_state(exact_state(circle, t, 256), t, 0.0, nullptr);
    FlowState next = step(st, nullptr, 0.5);
    const double dt = next.dt_last;
    DiscreteCurve predicted = exact_state(circle, t + dt, 256);
    const double h = st.curve.spacing;
    CHECK(hausdorff_distance(next.curve, predicted) <= 5.0 * (dt * dt + h * h * dt));
}
