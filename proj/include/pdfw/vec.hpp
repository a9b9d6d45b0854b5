#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdfw {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2_sq(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(norm2_sq(a)); }

inline double dist2(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dist2: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// y += alpha * x
inline void axpy(double alpha, std::span<const double> x, Vec& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("axpy: size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline Vec operator+(const Vec& a, const Vec& b) {
    Vec r(a);
    axpy(1.0, b, r);
    return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
    Vec r(a);
    axpy(-1.0, b, r);
    return r;
}

inline Vec operator*(double s, const Vec& a) {
    Vec r(a);
    for (double& v : r) v *= s;
    return r;
}

inline Vec zeros(int n) { return Vec(static_cast<std::size_t>(n), 0.0); }

inline bool all_finite(std::span<const double> a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

// Dense row-major matrix, sized for desk-scale problems.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

    std::span<const double> row(int i) const {
        return {data.data() + static_cast<std::size_t>(i) * cols, static_cast<std::size_t>(cols)};
    }

    Vec mul(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != cols)
            throw std::invalid_argument("Matrix::mul: size mismatch");
        Vec y(static_cast<std::size_t>(rows), 0.0);
        for (int i = 0; i < rows; ++i) y[i] = dot(row(i), x);
        return y;
    }

    // A^T * y
    Vec mul_t(std::span<const double> y) const {
        if (static_cast<int>(y.size()) != rows)
            throw std::invalid_argument("Matrix::mul_t: size mismatch");
        Vec x(static_cast<std::size_t>(cols), 0.0);
        for (int i = 0; i < rows; ++i) {
            const auto r = row(i);
            for (int j = 0; j < cols; ++j) x[j] += r[j] * y[i];
        }
        return x;
    }
};

}  // namespace pdfw
