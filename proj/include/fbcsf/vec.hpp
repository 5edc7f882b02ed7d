#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>

namespace fbcsf {

// Curves live in R^d with small runtime d (2..4 in practice). A fixed
// capacity keeps node arrays allocation-free inside the flow loop.
inline constexpr int kMaxDim = 8;

class Vec {
public:
    Vec() = default;
    explicit Vec(int dim) : n_(dim) { assert(dim >= 0 && dim <= kMaxDim); }
    Vec(std::initializer_list<double> xs) : n_(static_cast<int>(xs.size())) {
        assert(n_ <= kMaxDim);
        int i = 0;
        for (double x : xs) v_[i++] = x;
    }

    int dim() const { return n_; }
    double& operator[](int i) {
        assert(i >= 0 && i < n_);
        return v_[i];
    }
    double operator[](int i) const {
        assert(i >= 0 && i < n_);
        return v_[i];
    }

    Vec& operator+=(const Vec& o) {
        assert(n_ == o.n_);
        for (int i = 0; i < n_; ++i) v_[i] += o.v_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        assert(n_ == o.n_);
        for (int i = 0; i < n_; ++i) v_[i] -= o.v_[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < n_; ++i) v_[i] *= s;
        return *this;
    }
    Vec& operator/=(double s) { return *this *= 1.0 / s; }

    bool finite() const {
        for (int i = 0; i < n_; ++i)
            if (!std::isfinite(v_[i])) return false;
        return true;
    }

private:
    std::array<double, kMaxDim> v_{};
    int n_ = 0;
};

inline Vec operator+(Vec a, const Vec& b) { return a += b; }
inline Vec operator-(Vec a, const Vec& b) { return a -= b; }
inline Vec operator*(Vec a, double s) { return a *= s; }
inline Vec operator*(double s, Vec a) { return a *= s; }
inline Vec operator/(Vec a, double s) { return a /= s; }
inline Vec operator-(Vec a) { return a *= -1.0; }

inline double dot(const Vec& a, const Vec& b) {
    assert(a.dim() == b.dim());
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

inline double squared_norm(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(squared_norm(a)); }
inline double distance(const Vec& a, const Vec& b) { return norm(a - b); }

inline Vec normalized(const Vec& a) {
    double n = norm(a);
    assert(n > 0.0);
    return a / n;
}

inline Vec zero_vec(int dim) { return Vec(dim); }

// a with its component along unit vector u removed
inline Vec reject(const Vec& a, const Vec& u) { return a - dot(a, u) * u; }

}  // namespace fbcsf
