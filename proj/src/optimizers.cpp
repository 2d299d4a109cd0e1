#include "ridgewalk/optimizers.hpp"

#include <cmath>

#include "ridgewalk/autodiff.hpp"

namespace ridgewalk {

namespace {

// The shaped simultaneous gradient. eta == 0 must take the identical
// arithmetic path as plain descent, so the shaping block is skipped outright
// rather than multiplied by zero.
Vec shaped_grad(const Game& g, double eta, bool full_taylor, const Vec& w) {
    const std::size_t da = g.dim_a(), n = g.dim();
    const Vec gA = loss_grad(g, 0, w);
    const Vec gB = loss_grad(g, 1, w);
    Vec out(n);
    for (std::size_t i = 0; i < da; ++i) out[i] = gA[i];
    for (std::size_t j = da; j < n; ++j) out[j] = gB[j];
    if (eta != 0.0) {
        const Mat mAB_LB = mixed_second(g, w, 1, PlayerBlock::A, PlayerBlock::B);
        const Mat mBA_LA = mixed_second(g, w, 0, PlayerBlock::B, PlayerBlock::A);
        for (std::size_t i = 0; i < da; ++i) {
            double s = 0.0;
            for (std::size_t j = da; j < n; ++j) s += mAB_LB(i, j - da) * gA[j];
            out[i] -= eta * s;
        }
        for (std::size_t j = da; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < da; ++i) s += mBA_LA(j - da, i) * gB[i];
            out[j] -= eta * s;
        }
        if (full_taylor) {
            const Mat mAB_LA = mixed_second(g, w, 0, PlayerBlock::A, PlayerBlock::B);
            const Mat mBA_LB = mixed_second(g, w, 1, PlayerBlock::B, PlayerBlock::A);
            for (std::size_t i = 0; i < da; ++i) {
                double s = 0.0;
                for (std::size_t j = da; j < n; ++j) s += mAB_LA(i, j - da) * gB[j];
                out[i] -= eta * s;
            }
            for (std::size_t j = da; j < n; ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < da; ++i) s += mBA_LB(j - da, i) * gA[i];
                out[j] -= eta * s;
            }
        }
    }
    return out;
}

StepOperator make_descent(const Game& game, double alpha, double eta, bool full_taylor,
                          std::string name) {
    StepOperator op;
    op.name = std::move(name);
    op.alpha = alpha;
    op.step = [game, alpha, eta, full_taylor](const Vec& w) {
        Vec g = shaped_grad(game, eta, full_taylor, w);
        Vec next(w);
        for (std::size_t i = 0; i < w.size(); ++i) next[i] = w[i] - alpha * g[i];
        return next;
    };
    if (eta == 0.0) {
        op.jac = [game, alpha](const Vec& w) {
            Mat J = game_hessian(game, w);
            const std::size_t n = J.rows();
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    J(i, j) = (i == j ? 1.0 : 0.0) - alpha * J(i, j);
            return J;
        };
    } else {
        // no closed form for the shaped step; differentiate it numerically
        auto step = op.step;
        op.jac = [step](const Vec& w) { return fd_jacobian(step, w, 1e-6); };
    }
    return op;
}

} // namespace

StepOperator sim_sgd(const Game& game, double alpha) {
    return make_descent(game, alpha, 0.0, false, "sim_sgd");
}

StepOperator lola(const Game& game, double alpha, double eta, bool full_taylor) {
    return make_descent(game, alpha, eta, full_taylor, "lola");
}

Trajectory run(const StepOperator& op, const Vec& w0, int steps, const RunGuards& guards) {
    Trajectory t;
    t.iterates.reserve(static_cast<std::size_t>(steps) + 1);
    t.iterates.push_back(w0);
    Vec w = w0;
    for (int s = 0; s < steps; ++s) {
        w = op.step(w);
        bool ok = true;
        for (double x : w)
            if (!std::isfinite(x)) { ok = false; break; }
        if (!ok || norm2(w) > guards.bound) {
            t.diverged = true;
            break;
        }
        t.iterates.push_back(w);
    }
    return t;
}

} // namespace ridgewalk
