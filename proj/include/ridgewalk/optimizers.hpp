#pragma once

#include "ridgewalk/games.hpp"
#include "ridgewalk/operator.hpp"

namespace ridgewalk {

struct RunGuards {
    double bound = 1e6;  // ||w|| beyond this marks the trajectory diverged
};

struct Trajectory {
    std::vector<Vec> iterates;  // w_0 .. w_m; m < steps requested iff diverged
    bool diverged = false;
};

// simultaneous gradient descent: w - alpha * g_hat(w); Jacobian I - alpha * H_hat
StepOperator sim_sgd(const Game& game, double alpha);

// Opponent-shaping update. Player A descends
//   grad_A L_A - eta * (grad_A grad_B L_B) (grad_B L_A)
// (and symmetrically for B), i.e. it differentiates through one naive
// opponent step. full_taylor adds the companion term
//   - eta * (grad_A grad_B L_A) (grad_B L_B).
// eta = 0 reproduces sim_sgd exactly: both run the same code path, and the
// Jacobian switches back to the closed form I - alpha * H_hat.
StepOperator lola(const Game& game, double alpha, double eta, bool full_taylor = false);

Trajectory run(const StepOperator& op, const Vec& w0, int steps,
               const RunGuards& guards = {});

} // namespace ridgewalk
