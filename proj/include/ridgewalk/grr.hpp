#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>

#include "ridgewalk/games.hpp"
#include "ridgewalk/lyapunov.hpp"
#include "ridgewalk/operator.hpp"

namespace ridgewalk {

enum class BranchMode { ScaledJump, WalkUntilFlip };

enum class NodeStatus { Pending, Optimized, Solution, Diverged, CycleSuspected };

enum class Verdict { Solution, NotConverged, Diverged, CycleSuspected };

struct GrrConfig {
    // starting point
    int tune_steps = 500;
    double tune_lr = 0.05;
    int k = 0;
    ObjectiveSpec objective;
    std::optional<Vec> init;  // tuned from here when set, else drawn via seed

    // branching
    int n_directions = 10;
    int max_depth = 3;
    BranchMode mode = BranchMode::ScaledJump;
    double jump_scale = 1.0;
    double lambda_floor = 0.1;      // ScaledJump exponent floor
    double walk_beta = 0.05;        // WalkUntilFlip step length
    int walk_max_steps = 10000;
    double direction_tol = 1e-3;    // keep directions with stretch > 1 + this
    double rebranch_tol = 1e-3;     // re-split when max |eig(J)| > 1 + this

    // per-branch optimization and verification
    int opt_steps = 2000;
    double tol_grad = 1e-3;
    double tol_stable = 1e-3;
    double dedup_radius = 0.05;  // in strategy (probability) space
    std::uint64_t seed = 0;
};

struct BranchNode {
    int id = 0;
    int parent = -1;  // -1: root
    int depth = 0;
    int sign = 0;          // +1 / -1; 0 for the root
    Vec direction;         // branch direction at the parent (empty for root)
    double dir_stretch = 0.0;   // sqrt of the matching J_dagger eigenvalue
    double dir_exponent = 0.0;  // faithful exponent along direction
    Vec start;             // where optimization began (after the branch step)
    Vec params;            // where it ended
    NodeStatus status = NodeStatus::Pending;
    double loss_a = 0.0, loss_b = 0.0;
    double grad_norm = 0.0;
    std::vector<std::complex<double>> jac_spectrum;  // at params
};

struct SolutionRecord {
    Vec params;
    Vec strategy;  // params mapped through the game's probability map
    double loss_a = 0.0, loss_b = 0.0;
    double grad_norm = 0.0;
    std::vector<std::complex<double>> jac_spectrum;
    std::vector<int> path;  // node ids from root to the node that found it
};

struct BranchTree {
    Vec start;  // tuned starting point (root params)
    std::vector<BranchNode> nodes;
    std::vector<SolutionRecord> solutions;
};

// Tune (or pass through) the starting point per cfg: gradient ascent on the
// exponent objective from cfg.init or from a seed-drawn initializer.
Vec find_starting_point(const Game& game, const StepOperator& op, const GrrConfig& cfg);

// Child branches of a node: top J_dagger directions at node.params whose
// stretch exceeds 1 + direction_tol, each with both signs. FIFO order is
// by descending stretch, + before -.
std::vector<BranchNode> split_branch(const BranchNode& node, const StepOperator& op,
                                     const GrrConfig& cfg);

// Displace a branch start along sign * direction: either one jump scaled by
// the (floored) direction exponent, or repeated small steps until the
// gradient component along the walk flips sign.
Vec apply_branch_step(const Game& game, const BranchNode& node, const GrrConfig& cfg);

// Solution iff the joint gradient is tiny and the step operator is stable.
Verdict verify_solution(const Game& game, const StepOperator& op, const Vec& w,
                        const GrrConfig& cfg, const Trajectory& traj);

// Full search: tune, split, branch-step, optimize, verify, re-split unstable
// leaves until max_depth. Deterministic for fixed cfg, game and operator.
BranchTree run_tree_search(const Game& game, const StepOperator& op,
                           const GrrConfig& cfg);

// Candidates ordered by descending sum of positive faithful exponents (over
// all directions); ties broken by ascending operator residual ||step(w)-w||.
std::vector<std::size_t> rank_starting_points(const std::vector<Vec>& candidates,
                                              const StepOperator& op, int k);

// artifact emission (deterministic byte-for-byte given the same tree)
std::string tree_json(const Game& game, const StepOperator& op, const GrrConfig& cfg,
                      const BranchTree& tree);
std::string solutions_csv(const Game& game, const BranchTree& tree);

} // namespace ridgewalk
