#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ridgewalk/dual.hpp"

namespace ridgewalk {

using Vec = std::vector<double>;

// Dense row-major matrix, sized for game dimensions (tens, not thousands).
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : r_(rows), c_(cols), a_(rows * cols, fill) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
    const std::vector<double>& data() const { return a_; }

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<double> a_;
};

inline Mat transpose(const Mat& m) {
    Mat t(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
    return t;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: shape mismatch");
    Mat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline Vec mat_vec(const Mat& a, const Vec& x) {
    if (a.cols() != x.size()) throw std::invalid_argument("mat_vec: shape mismatch");
    Vec y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

inline Mat mat_add(const Mat& a, const Mat& b) {
    Mat c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

inline Mat mat_scale(const Mat& a, double s) {
    Mat c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) * s;
    return c;
}

// A^T A, the symmetric Gram matrix
inline Mat gram(const Mat& a) {
    Mat g(a.cols(), a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.rows(); ++k) s += a(k, i) * a(k, j);
            g(i, j) = s;
            g(j, i) = s;
        }
    return g;
}

inline double frob_norm(const Mat& a) {
    double s = 0.0;
    for (double x : a.data()) s += x * x;
    return std::sqrt(s);
}

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec vec_add(const Vec& a, const Vec& b) {
    Vec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
    Vec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    return c;
}

inline Vec vec_scale(const Vec& a, double s) {
    Vec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] * s;
    return c;
}

// y += s*x
inline void axpy(Vec& y, double s, const Vec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

inline Vec normalized(const Vec& a) {
    const double n = norm2(a);
    if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
    return vec_scale(a, 1.0 / n);
}

// Solve A x = b by LU with partial pivoting. Generic over the scalar so the
// same factorization runs on dual numbers; pivots compare primal magnitude.
template <class T>
std::vector<T> lu_solve(std::vector<T> a, std::vector<T> b) {
    const std::size_t n = b.size();
    if (a.size() != n * n) throw std::invalid_argument("lu_solve: shape mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(primal(a[k * n + k]));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = std::abs(primal(a[i * n + k]));
            if (m > best) { best = m; p = i; }
        }
        if (best == 0.0) throw std::runtime_error("lu_solve: singular matrix");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
            std::swap(b[k], b[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            T m = a[i * n + k] / a[k * n + k];
            a[i * n + k] = m;
            for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] = a[i * n + j] - m * a[k * n + j];
            b[i] = b[i] - m * b[k];
        }
    }
    std::vector<T> x(n, T(0.0));
    for (std::size_t i = n; i-- > 0;) {
        T s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s = s - a[i * n + j] * x[j];
        x[i] = s / a[i * n + i];
    }
    return x;
}

} // namespace ridgewalk
