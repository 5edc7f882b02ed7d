#include "fbcsf/curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fbcsf {

double DiscreteCurve::length() const {
    double len = 0.0;
    for (int i = 0; i + 1 < size(); ++i) len += distance(nodes[i], nodes[i + 1]);
    if (is_closed && size() > 1) len += distance(nodes.back(), nodes.front());
    return len;
}

bool DiscreteCurve::finite() const {
    for (const Vec& p : nodes)
        if (!p.finite()) return false;
    return true;
}

double FrenetData::max_kappa() const {
    double m = 0.0;
    for (double k : kappa) m = std::max(m, k);
    return m;
}

double default_kappa_tol(const DiscreteCurve& curve) {
    return 1e-8 / curve.spacing;
}

DiscreteCurve resample_arclength(const DiscreteCurve& curve, int target_m) {
    const int m0 = curve.size();
    if (m0 < 2) throw std::invalid_argument("resample needs at least 2 nodes");
    if (target_m < 5) throw std::invalid_argument("resample needs target_m >= 5");
    if (!curve.finite()) throw std::runtime_error("non-finite curve");

    // cumulative arclength along the polyline; closed curves get the
    // closing segment appended so the walk wraps back to node 0
    const int nseg = curve.is_closed ? m0 : m0 - 1;
    std::vector<double> cum(nseg + 1, 0.0);
    for (int i = 0; i < nseg; ++i) {
        const Vec& a = curve.nodes[i];
        const Vec& b = curve.nodes[(i + 1) % m0];
        cum[i + 1] = cum[i] + distance(a, b);
    }
    const double total = cum[nseg];
    if (total <= 1e-14) throw std::runtime_error("collapsed curve");

    DiscreteCurve out;
    out.ambient_dim = curve.ambient_dim;
    out.is_closed = curve.is_closed;
    out.nodes.resize(target_m);
    out.spacing = curve.is_closed ? total / target_m : total / (target_m - 1);

    int seg = 0;
    for (int k = 0; k < target_m; ++k) {
        double s = k * out.spacing;
        if (s >= total) s = total;
        while (seg + 1 < nseg && cum[seg + 1] < s) ++seg;
        const double seg_len = cum[seg + 1] - cum[seg];
        const double w = seg_len > 0.0 ? (s - cum[seg]) / seg_len : 0.0;
        const Vec& a = curve.nodes[seg];
        const Vec& b = curve.nodes[(seg + 1) % m0];
        out.nodes[k] = a + w * (b - a);
    }
    if (!curve.is_closed) {
        out.nodes.front() = curve.nodes.front();
        out.nodes.back() = curve.nodes.back();
    } else {
        out.nodes.front() = curve.nodes.front();
    }
    return out;
}

namespace {

// index helpers: closed curves wrap, open curves fall back to one-sided
// second-order stencils at the ends

Vec first_derivative(const DiscreteCurve& c, int i) {
    const int m = c.size();
    const double h = c.spacing;
    if (c.is_closed) {
        const Vec& prev = c.nodes[(i + m - 1) % m];
        const Vec& next = c.nodes[(i + 1) % m];
        return (next - prev) / (2.0 * h);
    }
    if (i == 0) return (-3.0 * c.nodes[0] + 4.0 * c.nodes[1] - c.nodes[2]) / (2.0 * h);
    if (i == m - 1)
        return (3.0 * c.nodes[m - 1] - 4.0 * c.nodes[m - 2] + c.nodes[m - 3]) / (2.0 * h);
    return (c.nodes[i + 1] - c.nodes[i - 1]) / (2.0 * h);
}

Vec second_derivative(const DiscreteCurve& c, int i) {
    const int m = c.size();
    const double h2 = c.spacing * c.spacing;
    if (c.is_closed) {
        const Vec& prev = c.nodes[(i + m - 1) % m];
        const Vec& next = c.nodes[(i + 1) % m];
        return (next - 2.0 * c.nodes[i] + prev) / h2;
    }
    if (i == 0)
        return (2.0 * c.nodes[0] - 5.0 * c.nodes[1] + 4.0 * c.nodes[2] - c.nodes[3]) / h2;
    if (i == m - 1)
        return (2.0 * c.nodes[m - 1] - 5.0 * c.nodes[m - 2] + 4.0 * c.nodes[m - 3] -
                c.nodes[m - 4]) /
               h2;
    return (c.nodes[i + 1] - 2.0 * c.nodes[i] + c.nodes[i - 1]) / h2;
}

// derivative of a per-node vector field, valid only where the stencil
// nodes carry defined values
Vec field_derivative(const std::vector<Vec>& f, const std::vector<std::uint8_t>& def, int i,
                     const DiscreteCurve& c, bool* ok) {
    const int m = c.size();
    const double h = c.spacing;
    *ok = false;
    Vec out(c.ambient_dim);
    if (c.is_closed) {
        const int ip = (i + 1) % m, im = (i + m - 1) % m;
        if (!def[ip] || !def[im]) return out;
        *ok = true;
        return (f[ip] - f[im]) / (2.0 * h);
    }
    if (i == 0) {
        if (!def[0] || !def[1] || !def[2]) return out;
        *ok = true;
        return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    }
    if (i == m - 1) {
        if (!def[m - 1] || !def[m - 2] || !def[m - 3]) return out;
        *ok = true;
        return (3.0 * f[m - 1] - 4.0 * f[m - 2] + f[m - 3]) / (2.0 * h);
    }
    if (!def[i - 1] || !def[i + 1]) return out;
    *ok = true;
    return (f[i + 1] - f[i - 1]) / (2.0 * h);
}

// cyclic Jacobi eigensolver for a small symmetric matrix; eigenvalues
// ascending, eigenvectors in rows of evec
void jacobi_eigen(double a[kMaxDim][kMaxDim], int n, double eval[kMaxDim],
                  double evec[kMaxDim][kMaxDim]) {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) evec[i][j] = (i == j) ? 1.0 : 0.0;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::fabs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double cos_r = 1.0 / std::sqrt(t * t + 1.0);
                const double sin_r = t * cos_r;
                for (int k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = cos_r * akp - sin_r * akq;
                    a[k][q] = sin_r * akp + cos_r * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = cos_r * apk - sin_r * aqk;
                    a[q][k] = sin_r * apk + cos_r * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vpk = evec[p][k], vqk = evec[q][k];
                    evec[p][k] = cos_r * vpk - sin_r * vqk;
                    evec[q][k] = sin_r * vpk + cos_r * vqk;
                }
            }
        }
    }
    for (int i = 0; i < n; ++i) eval[i] = a[i][i];
    // sort ascending
    for (int i = 0; i < n; ++i) {
        int lo = i;
        for (int j = i + 1; j < n; ++j)
            if (eval[j] < eval[lo]) lo = j;
        if (lo != i) {
            std::swap(eval[i], eval[lo]);
            for (int k = 0; k < n; ++k) std::swap(evec[i][k], evec[lo][k]);
        }
    }
}

}  // namespace

FrenetData compute_frenet(const DiscreteCurve& curve, double kappa_tol) {
    const int m = curve.size();
    const int d = curve.ambient_dim;
    if (m < 5) throw std::invalid_argument("compute_frenet needs >= 5 nodes");
    if (curve.spacing <= 0.0) throw std::invalid_argument("curve not resampled");

    FrenetData fr;
    fr.kappa_tol = kappa_tol;
    fr.T.resize(m, Vec(d));
    fr.kappa_vec.resize(m, Vec(d));
    fr.kappa.assign(m, 0.0);
    fr.N.resize(m, Vec(d));
    fr.B1.resize(m, Vec(d));
    fr.B2.resize(m, Vec(d));
    fr.tau1.assign(m, 0.0);
    fr.tau2.assign(m, 0.0);
    fr.n_defined.assign(m, 0);
    fr.b1_defined.assign(m, 0);
    fr.b2_defined.assign(m, 0);

    for (int i = 0; i < m; ++i) {
        const Vec g1 = first_derivative(curve, i);
        fr.T[i] = normalized(g1);
        const Vec g2 = second_derivative(curve, i);
        fr.kappa_vec[i] = reject(g2, fr.T[i]);
        fr.kappa[i] = norm(fr.kappa_vec[i]);
        if (fr.kappa[i] > kappa_tol) {
            fr.n_defined[i] = 1;
            fr.N[i] = fr.kappa_vec[i] / fr.kappa[i];
        }
    }
    if (d < 3) return fr;

    // first binormal from dN/ds orthogonalized against {T, N}; the
    // magnitude of the remainder is |tau1|, so a tiny remainder means the
    // curve is locally planar and the binormal is left undefined
    std::vector<Vec> dN(m, Vec(d));
    std::vector<std::uint8_t> dN_ok(m, 0);
    for (int i = 0; i < m; ++i) {
        bool ok = false;
        Vec v = field_derivative(fr.N, fr.n_defined, i, curve, &ok);
        if (ok && fr.n_defined[i]) {
            dN[i] = v;
            dN_ok[i] = 1;
        }
    }
    const double b1_tol = 1e-7;
    int prev_b1 = -1;
    for (int i = 0; i < m; ++i) {
        if (!dN_ok[i]) continue;
        Vec raw = reject(reject(dN[i], fr.T[i]), fr.N[i]);
        if (norm(raw) <= b1_tol * std::max(1.0, norm(dN[i]))) continue;
        Vec b1 = normalized(raw);
        if (prev_b1 >= 0 && dot(b1, fr.B1[prev_b1]) < 0.0) b1 *= -1.0;  // sign continuity
        fr.B1[i] = b1;
        fr.b1_defined[i] = 1;
        fr.tau1[i] = dot(dN[i], b1);
        prev_b1 = i;
    }
    if (d < 4) return fr;

    // second binormal from dB1/ds + tau1 N, orthogonalized against the
    // frame built so far
    std::vector<Vec> dB1(m, Vec(d));
    std::vector<std::uint8_t> dB1_ok(m, 0);
    for (int i = 0; i < m; ++i) {
        bool ok = false;
        Vec v = field_derivative(fr.B1, fr.b1_defined, i, curve, &ok);
        if (ok && fr.b1_defined[i]) {
            dB1[i] = v;
            dB1_ok[i] = 1;
        }
    }
    int prev_b2 = -1;
    for (int i = 0; i < m; ++i) {
        if (!dB1_ok[i]) continue;
        Vec cand = dB1[i] + fr.tau1[i] * fr.N[i];
        Vec raw = reject(reject(reject(cand, fr.T[i]), fr.N[i]), fr.B1[i]);
        if (norm(raw) <= b1_tol * std::max(1.0, norm(dB1[i]))) continue;
        Vec b2 = normalized(raw);
        if (prev_b2 >= 0 && dot(b2, fr.B2[prev_b2]) < 0.0) b2 *= -1.0;
        fr.B2[i] = b2;
        fr.b2_defined[i] = 1;
        fr.tau2[i] = dot(cand, b2);
        prev_b2 = i;
    }
    return fr;
}

double best_fit_plane_deviation(const DiscreteCurve& curve) {
    const int m = curve.size();
    const int d = curve.ambient_dim;
    if (m < 3) throw std::invalid_argument("plane fit needs >= 3 nodes");
    if (d <= 2) return 0.0;

    Vec mean(d);
    for (const Vec& p : curve.nodes) mean += p;
    mean /= static_cast<double>(m);

    double cov[kMaxDim][kMaxDim] = {};
    for (const Vec& p : curve.nodes) {
        const Vec y = p - mean;
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) cov[a][b] += y[a] * y[b];
    }
    double eval[kMaxDim];
    double evec[kMaxDim][kMaxDim];
    jacobi_eigen(cov, d, eval, evec);

    // distance to the plane = component in the span of the d-2 smallest
    // eigenvectors
    double worst = 0.0;
    for (const Vec& p : curve.nodes) {
        const Vec y = p - mean;
        double dev2 = 0.0;
        for (int e = 0; e < d - 2; ++e) {
            double c = 0.0;
            for (int a = 0; a < d; ++a) c += evec[e][a] * y[a];
            dev2 += c * c;
        }
        worst = std::max(worst, std::sqrt(dev2));
    }
    return worst;
}

}  // namespace fbcsf
