#include "ridgewalk/grr.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <json.hpp>

#include "ridgewalk/autodiff.hpp"
#include "ridgewalk/io.hpp"

namespace ridgewalk {

namespace {

using ordered_json = nlohmann::ordered_json;

double strategy_distance(const Game& game, const Vec& a, const Vec& b) {
    return norm2(vec_sub(game.strategy(a), game.strategy(b)));
}

std::vector<std::complex<double>> jac_eigenvalues(const StepOperator& op, const Vec& w) {
    return eig_general(op.jac(w)).eigenvalues;
}

double max_modulus(const std::vector<std::complex<double>>& vals) {
    double r = 0.0;
    for (const auto& z : vals) r = std::max(r, std::abs(z));
    return r;
}

} // namespace

Vec find_starting_point(const Game& game, const StepOperator& op, const GrrConfig& cfg) {
    Vec w0;
    if (cfg.init) {
        if (cfg.init->size() != game.dim())
            throw std::invalid_argument("find_starting_point: init has wrong dimension");
        w0 = *cfg.init;
    } else {
        Rng rng(cfg.seed);
        w0 = game.init_sample(rng);
    }
    if (cfg.tune_steps <= 0) return w0;
    return tune_starting_point(op, w0, cfg.k, cfg.objective, cfg.tune_steps, cfg.tune_lr)
        .point;
}

std::vector<BranchNode> split_branch(const BranchNode& node, const StepOperator& op,
                                     const GrrConfig& cfg) {
    // the root branches from the tuned starting point; re-branched nodes
    // from wherever their optimization stalled at an unstable point
    const Vec& at = node.parent < 0 ? node.start : node.params;
    const MultiDirResult dirs =
        multi_direction_objective(op, at, cfg.k, cfg.n_directions, ObjectiveMode::Sum);
    std::vector<BranchNode> children;
    for (std::size_t i = 0; i < dirs.directions.size(); ++i) {
        const double stretch = std::sqrt(std::max(dirs.gram_eigenvalues[i], 0.0));
        if (!(stretch > 1.0 + cfg.direction_tol)) continue;
        for (const int sign : {+1, -1}) {
            BranchNode child;
            child.parent = node.id;
            child.depth = node.depth + 1;
            child.sign = sign;
            child.direction = dirs.directions[i];
            child.dir_stretch = stretch;
            child.dir_exponent = dirs.exponents[i];
            child.start = at;  // branch step applied when processed
            child.status = NodeStatus::Pending;
            children.push_back(std::move(child));
        }
    }
    return children;
}

Vec apply_branch_step(const Game& game, const BranchNode& node, const GrrConfig& cfg) {
    if (node.direction.empty())
        throw std::invalid_argument("apply_branch_step: node has no direction");
    Vec w = node.start;
    if (cfg.mode == BranchMode::ScaledJump) {
        const double scale =
            cfg.jump_scale * std::max(node.dir_exponent, cfg.lambda_floor);
        axpy(w, node.sign * scale, node.direction);
        return w;
    }
    // WalkUntilFlip: march along the signed direction until the gradient
    // component along the walk changes sign (the stationary set was crossed)
    Vec step_dir = vec_scale(node.direction, double(node.sign));
    const double a0 = dot(step_dir, joint_grad(game, w));
    for (int i = 0; i < cfg.walk_max_steps; ++i) {
        axpy(w, cfg.walk_beta, step_dir);
        const double a = dot(step_dir, joint_grad(game, w));
        if (a == 0.0 || (a > 0.0) != (a0 > 0.0)) return w;
    }
    return w;  // never flipped within the budget; hand back the far end
}

Verdict verify_solution(const Game& game, const StepOperator& op, const Vec& w,
                        const GrrConfig& cfg, const Trajectory& traj) {
    if (traj.diverged) return Verdict::Diverged;
    const double gn = norm2(joint_grad(game, w));
    const Spectrum spec = eig_general(op.jac(w));
    if (!spec.complete) return Verdict::NotConverged;
    const double rho = max_modulus(spec.eigenvalues);
    if (gn <= cfg.tol_grad && rho <= 1.0 + cfg.tol_stable) return Verdict::Solution;

    // cycle heuristic: still moving across a bounded window while the
    // gradient norm shows no decay
    const std::size_t m = traj.iterates.size();
    const std::size_t window = std::min<std::size_t>(m, 100);
    if (window >= 8) {
        const Vec& last = traj.iterates[m - 1];
        double spread = 0.0;
        for (std::size_t i = m - window; i < m; ++i)
            spread = std::max(spread, norm2(vec_sub(traj.iterates[i], last)));
        double early = 0.0, late = 0.0;
        for (std::size_t i = 0; i < window / 2; ++i) {
            early += norm2(joint_grad(game, traj.iterates[m - window + i]));
            late += norm2(joint_grad(game, traj.iterates[m - window / 2 + i]));
        }
        if (spread > 1e-8 && spread < 1e3 && late >= 0.9 * early)
            return Verdict::CycleSuspected;
    }
    return Verdict::NotConverged;
}

BranchTree run_tree_search(const Game& game, const StepOperator& op,
                           const GrrConfig& cfg) {
    BranchTree tree;
    tree.start = find_starting_point(game, op, cfg);

    auto optimize_into = [&](BranchNode& node) {
        const Trajectory traj = run(op, node.start, cfg.opt_steps);
        node.params = traj.iterates.back();
        const Verdict verdict = verify_solution(game, op, node.params, cfg, traj);
        node.status = verdict == Verdict::Solution        ? NodeStatus::Solution
                      : verdict == Verdict::Diverged       ? NodeStatus::Diverged
                      : verdict == Verdict::CycleSuspected ? NodeStatus::CycleSuspected
                                                           : NodeStatus::Optimized;
        node.loss_a = game.loss(0, std::span<const double>(node.params));
        node.loss_b = game.loss(1, std::span<const double>(node.params));
        node.grad_norm = norm2(joint_grad(game, node.params));
        node.jac_spectrum = jac_eigenvalues(op, node.params);

        if (verdict != Verdict::Solution) return;
        for (const auto& rec : tree.solutions)
            if (strategy_distance(game, rec.params, node.params) <= cfg.dedup_radius)
                return;
        SolutionRecord rec;
        rec.params = node.params;
        rec.strategy = game.strategy(node.params);
        rec.loss_a = node.loss_a;
        rec.loss_b = node.loss_b;
        rec.grad_norm = node.grad_norm;
        rec.jac_spectrum = node.jac_spectrum;
        rec.path.push_back(node.id);
        for (int at = node.parent; at != -1; at = tree.nodes[at].parent)
            rec.path.push_back(at);
        std::reverse(rec.path.begin(), rec.path.end());
        tree.solutions.push_back(std::move(rec));
    };

    // the root is optimized like any branch, but its children jump off the
    // tuned starting point, not the root's optimized endpoint
    BranchNode root;
    root.id = 0;
    root.parent = -1;
    root.depth = 0;
    root.start = tree.start;
    optimize_into(root);
    tree.nodes.push_back(std::move(root));

    std::deque<BranchNode> queue;
    for (auto& child : split_branch(tree.nodes[0], op, cfg)) queue.push_back(child);

    while (!queue.empty()) {
        BranchNode node = std::move(queue.front());
        queue.pop_front();
        node.id = static_cast<int>(tree.nodes.size());

        node.start = apply_branch_step(game, node, cfg);
        optimize_into(node);

        const bool unstable = max_modulus(node.jac_spectrum) > 1.0 + cfg.rebranch_tol;
        const int node_id = node.id;
        tree.nodes.push_back(std::move(node));
        if (unstable && tree.nodes[node_id].depth < cfg.max_depth)
            for (auto& child : split_branch(tree.nodes[node_id], op, cfg))
                queue.push_back(child);
    }
    return tree;
}

std::vector<std::size_t> rank_starting_points(const std::vector<Vec>& candidates,
                                              const StepOperator& op, int k) {
    struct Scored {
        std::size_t idx;
        double score;
        double residual;
    };
    std::vector<Scored> scored;
    scored.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto dirs = multi_direction_objective(
            op, candidates[i], k, static_cast<int>(candidates[i].size()),
            ObjectiveMode::Sum);
        double score = 0.0;
        for (double e : dirs.exponents)
            if (e > 0.0) score += e;
        const double residual = norm2(vec_sub(op.step(candidates[i]), candidates[i]));
        scored.push_back({i, score, residual});
    }
    std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (std::abs(a.score - b.score) > 1e-12) return a.score > b.score;
        return a.residual < b.residual;
    });
    std::vector<std::size_t> order;
    order.reserve(scored.size());
    for (const auto& s : scored) order.push_back(s.idx);
    return order;
}

namespace {

const char* status_name(NodeStatus s) {
    switch (s) {
        case NodeStatus::Pending: return "pending";
        case NodeStatus::Optimized: return "optimized";
        case NodeStatus::Solution: return "solution";
        case NodeStatus::Diverged: return "diverged";
        case NodeStatus::CycleSuspected: return "cycle_suspected";
    }
    return "?";
}

ordered_json spectrum_json(const std::vector<std::complex<double>>& vals) {
    ordered_json arr = ordered_json::array();
    for (const auto& z : vals) arr.push_back({{"re", z.real()}, {"im", z.imag()}});
    return arr;
}

} // namespace

std::string tree_json(const Game& game, const StepOperator& op, const GrrConfig& cfg,
                      const BranchTree& tree) {
    ordered_json j;
    j["game"] = game.name();
    j["optimizer"] = op.name;
    j["alpha"] = op.alpha;
    j["config"] = {
        {"k", cfg.k},
        {"tune_steps", cfg.tune_steps},
        {"tune_lr", cfg.tune_lr},
        {"n_directions", cfg.n_directions},
        {"max_depth", cfg.max_depth},
        {"branch_mode", cfg.mode == BranchMode::ScaledJump ? "scaled_jump" : "walk_until_flip"},
        {"jump_scale", cfg.jump_scale},
        {"lambda_floor", cfg.lambda_floor},
        {"walk_beta", cfg.walk_beta},
        {"opt_steps", cfg.opt_steps},
        {"tol_grad", cfg.tol_grad},
        {"tol_stable", cfg.tol_stable},
        {"dedup_radius", cfg.dedup_radius},
        {"seed", cfg.seed},
    };
    j["start"] = tree.start;
    j["nodes"] = ordered_json::array();
    for (const auto& n : tree.nodes) {
        ordered_json node;
        node["id"] = n.id;
        node["parent"] = n.parent;
        node["depth"] = n.depth;
        node["sign"] = n.sign;
        node["direction"] = n.direction;
        node["dir_stretch"] = n.dir_stretch;
        node["dir_exponent"] = n.dir_exponent;
        node["start"] = n.start;
        node["params"] = n.params;
        node["strategy"] = game.strategy(n.params);
        node["status"] = status_name(n.status);
        node["loss_a"] = n.loss_a;
        node["loss_b"] = n.loss_b;
        node["grad_norm"] = n.grad_norm;
        node["jac_spectrum"] = spectrum_json(n.jac_spectrum);
        j["nodes"].push_back(std::move(node));
    }
    j["solutions"] = ordered_json::array();
    for (const auto& r : tree.solutions) {
        ordered_json rec;
        rec["params"] = r.params;
        rec["strategy"] = r.strategy;
        rec["loss_a"] = r.loss_a;
        rec["loss_b"] = r.loss_b;
        rec["grad_norm"] = r.grad_norm;
        rec["jac_spectrum"] = spectrum_json(r.jac_spectrum);
        rec["path"] = r.path;
        j["solutions"].push_back(std::move(rec));
    }
    return j.dump(2) + "\n";
}

std::string solutions_csv(const Game& game, const BranchTree& tree) {
    std::string out;
    const std::size_t da = game.dim_a();
    if (da == 5) {
        out = "p_c0,p_c_cc,p_c_cd,p_c_dc,p_c_dd,loss_p1,loss_p2\n";
    } else {
        for (std::size_t i = 0; i < da; ++i) out += "p_" + std::to_string(i + 1) + ",";
        out += "loss_p1,loss_p2\n";
    }
    for (const auto& r : tree.solutions) {
        for (std::size_t i = 0; i < da; ++i) {
            out += format_double(r.strategy[i]);
            out += ',';
        }
        out += format_double(r.loss_a);
        out += ',';
        out += format_double(r.loss_b);
        out += '\n';
    }
    return out;
}

} // namespace ridgewalk
