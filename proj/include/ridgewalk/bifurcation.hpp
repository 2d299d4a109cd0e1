#pragma once

#include <functional>
#include <optional>
#include <string>

#include "ridgewalk/games.hpp"
#include "ridgewalk/operator.hpp"

namespace ridgewalk {

// Scalar field f(u, mu) around a candidate bifurcation at (0, 0). smoothness
// is the number of derivatives the probes may take; probe_delta bounds the
// box the classifier samples.
struct ParamField1D {
    std::function<double(double, double)> f;
    int smoothness = 3;
    double probe_delta = 0.1;
};

enum class BifKind { SaddleNode, Pitchfork, Hopf, Hyperbolic, Degenerate };
enum class Criticality { Super, Sub, NA };
enum class MuSide { Negative, Positive, NA };  // where the new equilibria/cycle live

struct BifurcationVerdict {
    BifKind kind = BifKind::Degenerate;
    double a = 0.0;  // leading mu coefficient of the normal form
    double b = 0.0;  // leading nonlinear coefficient
    Criticality criticality = Criticality::NA;
    MuSide side = MuSide::NA;
    std::string note;          // diagnostics: which test decided
    double odd_residual = 0.0; // max |f(-u,0) + f(u,0)| over the probe set
    double cycle_radius = 0.0; // Hopf only: measured limit-cycle radius
};

// Classify f against the saddle-node and pitchfork normal forms by finite
// differences (h = 1e-4; Richardson refinement for the third derivative).
// Verdicts within 10x of tol on a deciding quantity come back Degenerate.
BifurcationVerdict classify_1d(const ParamField1D& field, double tol = 1e-4);

struct EquilibriumBranch {
    double u = 0.0;
    bool stable = false;  // sign of f_u at the root
};

// Equilibria of f(., mu) near 0 found by Newton from normal-form predictors;
// non-convergent predictors are dropped.
std::vector<EquilibriumBranch> equilibrium_branches(const ParamField1D& field,
                                                    double mu, double tol = 1e-10);

// Planar field F(u, mu) with F(0, 0) = 0. Hopf requires a conjugate pair
// crossing the unit of stability: Re changes sign transversally in mu while
// Im stays away from zero. Criticality comes from integrating the flow at
// mu = +/- mu_probe and looking for a small bounded limit cycle.
struct PlanarField {
    std::function<void(const double*, double, double*)> f;  // (u[2], mu) -> out[2]
    double mu_probe = 0.04;
};

BifurcationVerdict classify_hopf_2d(const PlanarField& field, double tol = 1e-3);

// Reduce the game's joint gradient field at w to scalar and planar normal
// form candidates and return the strongest verdict. axis defaults to the top
// J_dagger direction of op at w.
BifurcationVerdict classify_game_point(const Game& game, const StepOperator& op,
                                       const Vec& w,
                                       const std::optional<Vec>& axis = std::nullopt,
                                       double tol = 1e-3);

std::string verdict_json(const BifurcationVerdict& v);

} // namespace ridgewalk
