#include "fbcsf/models.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace fbcsf {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Grim Reaper in arclength form: x = asin(tanh s), y = log cosh s.
double reaper_x(double s) { return std::asin(std::tanh(s)); }
double reaper_y(double s) {
    const double a = std::fabs(s);
    if (a > 20.0) return a - std::numbers::ln2 + std::log1p(std::exp(-2.0 * a));
    return std::log(std::cosh(s));
}
double reaper_s_of_x(double x) { return std::atanh(std::sin(x)); }
}  // namespace

std::string model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Chord: return "chord";
        case ModelKind::Line: return "line";
        case ModelKind::Circle: return "circle";
        case ModelKind::Semicircle: return "semicircle";
        case ModelKind::GrimReaper: return "grim_reaper";
        case ModelKind::HalfGrimReaper: return "half_grim_reaper";
    }
    return "?";
}

ModelCurve ModelCurve::chord(const Vec& a, const Vec& b) {
    ModelCurve m;
    m.kind = ModelKind::Chord;
    m.ambient_dim = a.dim();
    m.a = a;
    m.b = b;
    return m;
}

ModelCurve ModelCurve::line(const Vec& point, const Vec& direction, double extent) {
    ModelCurve m;
    m.kind = ModelKind::Line;
    m.ambient_dim = point.dim();
    m.a = point;
    m.b = normalized(direction);
    m.extent = extent;
    return m;
}

ModelCurve ModelCurve::circle(const Vec& center, double radius, const Vec& e1, const Vec& e2) {
    ModelCurve m;
    m.kind = ModelKind::Circle;
    m.ambient_dim = center.dim();
    m.center = center;
    m.radius = radius;
    m.e1 = normalized(e1);
    m.e2 = normalized(reject(e2, m.e1));
    return m;
}

ModelCurve ModelCurve::semicircle(const Vec& center, double radius, const Vec& e_in,
                                  const Vec& e_t) {
    ModelCurve m;
    m.kind = ModelKind::Semicircle;
    m.ambient_dim = center.dim();
    m.center = center;
    m.radius = radius;
    m.e1 = normalized(e_in);
    m.e2 = normalized(reject(e_t, m.e1));
    return m;
}

ModelCurve ModelCurve::grim_reaper(const Vec& offset, const Vec& e1, const Vec& e2,
                                   double window) {
    ModelCurve m;
    m.kind = ModelKind::GrimReaper;
    m.ambient_dim = offset.dim();
    m.center = offset;
    m.e1 = normalized(e1);
    m.e2 = normalized(reject(e2, m.e1));
    m.window = window;
    return m;
}

ModelCurve ModelCurve::half_grim_reaper(const Vec& offset, const Vec& e1, const Vec& e2,
                                        double window) {
    ModelCurve m = grim_reaper(offset, e1, e2, window);
    m.kind = ModelKind::HalfGrimReaper;
    return m;
}

DiscreteCurve ModelCurve::sample(int m) const {
    if (m < 5) throw std::invalid_argument("model sample needs m >= 5");
    DiscreteCurve c;
    c.ambient_dim = ambient_dim;
    c.nodes.reserve(m);
    switch (kind) {
        case ModelKind::Chord:
            for (int i = 0; i < m; ++i)
                c.nodes.push_back(a + (static_cast<double>(i) / (m - 1)) * (b - a));
            break;
        case ModelKind::Line:
            for (int i = 0; i < m; ++i) {
                const double s = -extent + 2.0 * extent * i / (m - 1);
                c.nodes.push_back(a + s * b);
            }
            break;
        case ModelKind::Circle: {
            c.is_closed = true;
            for (int i = 0; i < m; ++i) {
                const double th = 2.0 * std::numbers::pi * i / m;
                c.nodes.push_back(center + radius * std::cos(th) * e1 +
                                  radius * std::sin(th) * e2);
            }
            break;
        }
        case ModelKind::Semicircle:
            for (int i = 0; i < m; ++i) {
                const double th =
                    -0.5 * std::numbers::pi + std::numbers::pi * i / (m - 1);
                c.nodes.push_back(center + radius * std::cos(th) * e1 +
                                  radius * std::sin(th) * e2);
            }
            break;
        case ModelKind::GrimReaper: {
            const double s_max = reaper_s_of_x(window);
            for (int i = 0; i < m; ++i) {
                const double s = -s_max + 2.0 * s_max * i / (m - 1);
                c.nodes.push_back(center + reaper_x(s) * e1 + reaper_y(s) * e2);
            }
            break;
        }
        case ModelKind::HalfGrimReaper: {
            const double s_max = reaper_s_of_x(window);
            for (int i = 0; i < m; ++i) {
                const double s = s_max * i / (m - 1);
                c.nodes.push_back(center + reaper_x(s) * e1 + reaper_y(s) * e2);
            }
            break;
        }
    }
    const double len = c.length();
    c.spacing = c.is_closed ? len / m : len / (m - 1);
    return c;
}

double ModelCurve::extinction_time() const {
    if (kind == ModelKind::Circle || kind == ModelKind::Semicircle)
        return 0.5 * radius * radius;
    return kInf;
}

ModelCurve ModelCurve::at_time(double t) const {
    ModelCurve out = *this;
    switch (kind) {
        case ModelKind::Circle:
        case ModelKind::Semicircle: {
            if (t >= extinction_time())
                throw std::invalid_argument("time at or past extinction");
            out.radius = std::sqrt(radius * radius - 2.0 * t);
            break;
        }
        case ModelKind::GrimReaper:
        case ModelKind::HalfGrimReaper:
            out.center = center + t * e2;
            break;
        default:
            break;
    }
    return out;
}

Barrier flat_barrier_for(const ModelCurve& model) {
    if (model.kind == ModelKind::Semicircle) {
        // curve lies on the e1 side; outward normal of the domain is -e1
        return Barrier::flat_halfspace(-model.e1, dot(-model.e1, model.center));
    }
    if (model.kind == ModelKind::HalfGrimReaper) {
        return Barrier::flat_halfspace(-model.e1, dot(-model.e1, model.center));
    }
    throw std::invalid_argument("model has no contact barrier");
}

namespace {

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b) {
    const Vec ab = b - a;
    const double len2 = squared_norm(ab);
    if (len2 < 1e-300) return distance(p, a);
    const double w = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + w * ab);
}

double directed_hausdorff(const DiscreteCurve& from, const DiscreteCurve& to) {
    const int mt = to.size();
    const int nseg = to.is_closed ? mt : mt - 1;
    double worst = 0.0;
    for (const Vec& p : from.nodes) {
        double best = kInf;
        for (int i = 0; i < nseg; ++i)
            best = std::min(best, point_segment_distance(p, to.nodes[i], to.nodes[(i + 1) % mt]));
        if (nseg == 0) best = distance(p, to.nodes[0]);
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

double hausdorff_distance(const DiscreteCurve& a, const DiscreteCurve& b) {
    if (a.size() == 0 || b.size() == 0)
        throw std::invalid_argument("hausdorff needs nonempty curves");
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

namespace {

// Gaussian mass of the model curve inside the ball of radius
// window*sqrt(sigma) about the center; quadrature step sqrt(sigma)/20.
struct EntropyEvaluator {
    const ModelCurve* model;
    double window;

    // center placed at parameter mu along the kind's center family
    Vec center_at(double mu, double sigma) const {
        (void)sigma;
        switch (model->kind) {
            case ModelKind::Line:
                return model->a + mu * model->b;
            case ModelKind::Chord: {
                const Vec dir = model->b - model->a;
                return model->a + mu * dir;
            }
            case ModelKind::Circle:
            case ModelKind::Semicircle:
                return model->center;
            case ModelKind::GrimReaper:
            case ModelKind::HalfGrimReaper:
                return model->center + mu * model->e2;  // height along the axis
        }
        return model->center;
    }

    double eval(double mu, double sigma) const {
        const Vec c = center_at(mu, sigma);
        const double rad = window * std::sqrt(sigma);
        const double hq = std::sqrt(sigma) / 20.0;
        const double pref = std::pow(4.0 * std::numbers::pi * sigma, -0.5);
        auto rho = [&](const Vec& p) {
            const double d2 = squared_norm(p - c);
            if (d2 > rad * rad) return 0.0;
            return pref * std::exp(-d2 / (4.0 * sigma));
        };
        auto integrate = [&](const std::function<Vec(double)>& point, double lo, double hi,
                             double speed) {
            // speed = |dp/dparam|, constant for all kinds used here
            const int n = std::max(8, static_cast<int>(std::ceil((hi - lo) * speed / hq)));
            const double dp = (hi - lo) / n;
            double sum = 0.5 * (rho(point(lo)) + rho(point(hi)));
            for (int i = 1; i < n; ++i) sum += rho(point(lo + i * dp));
            return sum * dp * speed;
        };

        switch (model->kind) {
            case ModelKind::Line:
                return integrate([&](double s) { return model->a + s * model->b; }, mu - rad,
                                 mu + rad, 1.0);
            case ModelKind::Chord: {
                const double len = distance(model->a, model->b);
                const Vec dir = (model->b - model->a) / len;
                const double lo = std::max(0.0, mu - rad), hi = std::min(len, mu + rad);
                if (hi <= lo) return 0.0;
                return integrate([&](double s) { return model->a + s * dir; }, lo, hi, 1.0);
            }
            case ModelKind::Circle: {
                const double r = model->radius;
                const int n = std::max(
                    64, static_cast<int>(std::ceil(2.0 * std::numbers::pi * r / hq)));
                double sum = 0.0;
                for (int i = 0; i < n; ++i) {
                    const double th = 2.0 * std::numbers::pi * i / n;
                    sum += rho(model->center + r * std::cos(th) * model->e1 +
                               r * std::sin(th) * model->e2);
                }
                return sum * (2.0 * std::numbers::pi * r / n);
            }
            case ModelKind::Semicircle: {
                const double r = model->radius;
                return integrate(
                    [&](double th) {
                        return model->center + r * std::cos(th) * model->e1 +
                               r * std::sin(th) * model->e2;
                    },
                    -0.5 * std::numbers::pi, 0.5 * std::numbers::pi, r);
            }
            case ModelKind::GrimReaper:
            case ModelKind::HalfGrimReaper: {
                const double s_hi = std::max(0.0, mu + rad) + 2.0;
                const double s_lo = model->kind == ModelKind::GrimReaper ? -s_hi : 0.0;
                return integrate(
                    [&](double s) {
                        return model->center + reaper_x(s) * model->e1 +
                               reaper_y(s) * model->e2;
                    },
                    s_lo, s_hi, 1.0);
            }
        }
        return 0.0;
    }
};

double golden_max(const std::function<double(double)>& f, double lo, double hi, int iters) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? fc : fd;
}

}  // namespace

double model_entropy(const ModelCurve& model, double window) {
    if (window < 5.0) throw std::invalid_argument("entropy window must be >= 5");
    EntropyEvaluator ev{&model, window};

    // scale range: reapers are capped so the quadrature ball spans the
    // populated strand heights; compact models by their own size
    double sigma_hi;
    switch (model.kind) {
        case ModelKind::GrimReaper:
        case ModelKind::HalfGrimReaper:
            sigma_hi = window * window / 8.0;
            break;
        case ModelKind::Circle:
        case ModelKind::Semicircle:
            sigma_hi = 100.0 * model.radius * model.radius;
            break;
        case ModelKind::Chord:
            sigma_hi = 10.0 * squared_norm(model.b - model.a);
            break;
        case ModelKind::Line:
        default:
            sigma_hi = 100.0;
            break;
    }

    double best = 0.0, best_sigma = sigma_hi, best_mu = 0.0;
    for (int k = 0; k < 10; ++k) {
        const double sigma = sigma_hi * std::pow(4.0, -k);
        std::vector<double> mus;
        switch (model.kind) {
            case ModelKind::Line:
                mus = {0.0};
                break;
            case ModelKind::Chord: {
                const double len = distance(model.a, model.b);
                for (int j = 0; j <= 8; ++j) mus.push_back(len * j / 8.0);
                break;
            }
            case ModelKind::Circle:
            case ModelKind::Semicircle:
                mus = {0.0};
                break;
            case ModelKind::GrimReaper:
            case ModelKind::HalfGrimReaper: {
                const double step = std::sqrt(sigma);
                for (int j = 0; j <= static_cast<int>(window); ++j) mus.push_back(j * step);
                break;
            }
        }
        for (double mu : mus) {
            const double v = ev.eval(mu, sigma);
            if (v > best) {
                best = v;
                best_sigma = sigma;
                best_mu = mu;
            }
        }
    }

    // coordinate-wise refinement around the coarse maximizer
    for (int round = 0; round < 3; ++round) {
        const double lo = std::log(std::max(best_sigma / 4.0, 1e-8));
        const double hi = std::log(std::min(best_sigma * 4.0, sigma_hi));
        double arg_sigma = best_sigma;
        golden_max(
            [&](double ls) {
                const double v = ev.eval(best_mu, std::exp(ls));
                if (v > best) {
                    best = v;
                    arg_sigma = std::exp(ls);
                }
                return v;
            },
            lo, hi, 40);
        best_sigma = arg_sigma;
        if (model.kind == ModelKind::GrimReaper || model.kind == ModelKind::HalfGrimReaper ||
            model.kind == ModelKind::Chord) {
            const double half = 2.0 * std::sqrt(best_sigma);
            double arg_mu = best_mu;
            golden_max(
                [&](double mu) {
                    const double v = ev.eval(mu, best_sigma);
                    if (v > best) {
                        best = v;
                        arg_mu = mu;
                    }
                    return v;
                },
                best_mu - half, best_mu + half, 40);
            best_mu = arg_mu;
        }
    }
    return best;
}

}  // namespace fbcsf
