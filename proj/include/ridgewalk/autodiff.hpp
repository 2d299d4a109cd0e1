#pragma once

#include <span>
#include <stdexcept>

#include "ridgewalk/games.hpp"

namespace ridgewalk {

// Forward-mode derivatives. Everything below seeds unit tangents and reads
// them back off; second derivatives nest a tangent inside a tangent.

// f: T(std::span<const T>) evaluable at T = D1
template <class F>
Vec grad(F&& f, const Vec& x) {
    const std::size_t n = x.size();
    std::vector<D1> xx(n);
    for (std::size_t i = 0; i < n; ++i) xx[i] = D1(x[i]);
    Vec g(n);
    for (std::size_t i = 0; i < n; ++i) {
        xx[i].d = 1.0;
        g[i] = f(std::span<const D1>(xx)).d;
        xx[i].d = 0.0;
    }
    return g;
}

// F: std::vector<D1>(std::span<const D1>); returns the m-by-n Jacobian
template <class F>
Mat jacobian(F&& f, const Vec& x) {
    const std::size_t n = x.size();
    if (n == 0) throw std::invalid_argument("jacobian: empty input");
    std::vector<D1> xx(n);
    for (std::size_t i = 0; i < n; ++i) xx[i] = D1(x[i]);
    Mat J;
    for (std::size_t j = 0; j < n; ++j) {
        xx[j].d = 1.0;
        const auto y = f(std::span<const D1>(xx));
        if (j == 0) J = Mat(y.size(), n);
        for (std::size_t i = 0; i < y.size(); ++i) J(i, j) = y[i].d;
        xx[j].d = 0.0;
    }
    return J;
}

// joint gradient: player A's loss differentiated along A's block, player B's
// along B's block -- the field simultaneous gradient descent follows
inline Vec joint_grad(const Game& g, const Vec& w) {
    const std::size_t n = g.dim(), split = g.dim_a();
    if (w.size() != n) throw std::invalid_argument("joint_grad: dimension mismatch");
    std::vector<D1> xx(n);
    for (std::size_t i = 0; i < n; ++i) xx[i] = D1(w[i]);
    Vec out(n);
    for (std::size_t i = 0; i < n; ++i) {
        xx[i].d = 1.0;
        out[i] = g.loss(i < split ? 0 : 1, std::span<const D1>(xx)).d;
        xx[i].d = 0.0;
    }
    return out;
}

// full gradient of one player's loss over the whole joint vector
inline Vec loss_grad(const Game& g, int player, const Vec& w) {
    return grad([&](std::span<const D1> xx) { return g.loss(player, xx); }, w);
}

// derivative of the joint gradient: rows follow joint_grad's player split, so
// the matrix is not symmetric and its spectrum may be complex
inline Mat game_hessian(const Game& g, const Vec& w) {
    const std::size_t n = g.dim(), split = g.dim_a();
    if (w.size() != n) throw std::invalid_argument("game_hessian: dimension mismatch");
    std::vector<D2> xx(n);
    for (std::size_t i = 0; i < n; ++i) xx[i] = D2(D1(w[i]), D1(0.0));
    Mat H(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const int player = r < split ? 0 : 1;
        xx[r].v.d = 1.0;
        for (std::size_t c = 0; c < n; ++c) {
            xx[c].d.v = 1.0;
            H(r, c) = g.loss(player, std::span<const D2>(xx)).d.d;
            xx[c].d.v = 0.0;
        }
        xx[r].v.d = 0.0;
    }
    return H;
}

enum class PlayerBlock { A, B };

// d^2 L_player / d theta_rows d theta_cols for one cross block
inline Mat mixed_second(const Game& g, const Vec& w, int player, PlayerBlock rows,
                        PlayerBlock cols) {
    const std::size_t n = g.dim(), split = g.dim_a();
    if (w.size() != n) throw std::invalid_argument("mixed_second: dimension mismatch");
    const std::size_t r0 = rows == PlayerBlock::A ? 0 : split;
    const std::size_t r1 = rows == PlayerBlock::A ? split : n;
    const std::size_t c0 = cols == PlayerBlock::A ? 0 : split;
    const std::size_t c1 = cols == PlayerBlock::A ? split : n;
    std::vector<D2> xx(n);
    for (std::size_t i = 0; i < n; ++i) xx[i] = D2(D1(w[i]), D1(0.0));
    Mat M(r1 - r0, c1 - c0);
    for (std::size_t r = r0; r < r1; ++r) {
        xx[r].v.d = 1.0;
        for (std::size_t c = c0; c < c1; ++c) {
            xx[c].d.v = 1.0;
            M(r - r0, c - c0) = g.loss(player, std::span<const D2>(xx)).d.d;
            xx[c].d.v = 0.0;
        }
        xx[r].v.d = 0.0;
    }
    return M;
}

// central-difference checks; the tolerance story in the tests leans on these
template <class F>
Vec fd_gradient(F&& f, const Vec& x, double h = 1e-5) {
    Vec g(x.size());
    Vec p(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        p[i] = x[i] + h;
        const double up = f(std::span<const double>(p));
        p[i] = x[i] - h;
        const double dn = f(std::span<const double>(p));
        p[i] = x[i];
        g[i] = (up - dn) / (2.0 * h);
    }
    return g;
}

// F: Vec(const Vec&)
template <class F>
Mat fd_jacobian(F&& f, const Vec& x, double h = 1e-5) {
    Vec p(x);
    Mat J;
    for (std::size_t j = 0; j < x.size(); ++j) {
        p[j] = x[j] + h;
        const Vec up = f(p);
        p[j] = x[j] - h;
        const Vec dn = f(p);
        p[j] = x[j];
        if (j == 0) J = Mat(up.size(), x.size());
        for (std::size_t i = 0; i < up.size(); ++i) J(i, j) = (up[i] - dn[i]) / (2.0 * h);
    }
    return J;
}

} // namespace ridgewalk
