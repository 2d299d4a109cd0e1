#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "ridgewalk/autodiff.hpp"
#include "ridgewalk/bifurcation.hpp"
#include "ridgewalk/games.hpp"
#include "ridgewalk/grr.hpp"
#include "ridgewalk/io.hpp"
#include "ridgewalk/lyapunov.hpp"
#include "ridgewalk/optimizers.hpp"
#include "ridgewalk/spectral.hpp"

namespace rw = ridgewalk;
using nlohmann::json;

namespace {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw rw::io_error("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
}

// strict schema: every object is checked against its full key list, so a
// typo fails the run instead of silently running defaults
void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw config_error(where + " must be an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (item.key() == a) known = true;
        if (!known) throw config_error("unknown key '" + item.key() + "' in " + where);
    }
}

double num_at(const json& j, const std::string& where, const char* key, double def) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_number()) throw config_error(where + "." + key + " must be a number");
    return v.get<double>();
}

long long int_at(const json& j, const std::string& where, const char* key, long long def) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_number_integer())
        throw config_error(where + "." + key + " must be an integer");
    return v.get<long long>();
}

bool bool_at(const json& j, const std::string& where, const char* key, bool def) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_boolean()) throw config_error(where + "." + key + " must be a boolean");
    return v.get<bool>();
}

std::string str_at(const json& j, const std::string& where, const char* key) {
    if (!j.contains(key)) throw config_error(where + "." + key + " is required");
    const json& v = j.at(key);
    if (!v.is_string()) throw config_error(where + "." + key + " must be a string");
    return v.get<std::string>();
}

rw::Vec vec_at(const json& j, const std::string& where, const char* key) {
    const json& v = j.at(key);
    if (!v.is_array()) throw config_error(where + "." + key + " must be an array");
    rw::Vec out;
    for (const auto& x : v) {
        if (!x.is_number())
            throw config_error(where + "." + key + " must contain only numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

rw::Game make_game(const json& g, const std::string& where = "game") {
    check_keys(g, where, {"name", "params"});
    const std::string name = str_at(g, where, "name");
    const json params = g.contains("params") ? g.at("params") : json::object();
    const std::string pwhere = where + ".params";

    if (name == "matching_pennies") {
        check_keys(params, pwhere, {"space"});
        std::string space = "logit";
        if (params.contains("space")) space = str_at(params, pwhere, "space");
        if (space != "logit" && space != "raw")
            throw config_error(pwhere + ".space must be \"logit\" or \"raw\"");
        return rw::matching_pennies(space == "raw" ? rw::ParamSpace::Raw
                                                   : rw::ParamSpace::Logit);
    }
    if (name == "ipd") {
        check_keys(params, pwhere, {"gamma", "losses"});
        rw::IpdConfig cfg;
        cfg.gamma = num_at(params, pwhere, "gamma", cfg.gamma);
        if (params.contains("losses")) {
            const json& L = params.at("losses");
            if (!L.is_array() || L.size() != 4)
                throw config_error(pwhere + ".losses must be a 4x2 array");
            for (std::size_t r = 0; r < 4; ++r) {
                if (!L[r].is_array() || L[r].size() != 2)
                    throw config_error(pwhere + ".losses must be a 4x2 array");
                for (std::size_t c = 0; c < 2; ++c) {
                    if (!L[r][c].is_number())
                        throw config_error(pwhere + ".losses must hold numbers");
                    cfg.losses[r][c] = L[r][c].get<double>();
                }
            }
        }
        return rw::ipd(cfg);
    }
    if (name == "small_ipd") {
        check_keys(params, pwhere, {"gamma", "defect_response"});
        return rw::small_ipd(num_at(params, pwhere, "gamma", 0.96),
                             num_at(params, pwhere, "defect_response", 0.01));
    }
    if (name == "mixed") {
        check_keys(params, pwhere, {"tau"});
        return rw::mixed_game(num_at(params, pwhere, "tau", 0.25));
    }
    if (name == "subspace") {
        check_keys(params, pwhere, {"base", "seed"});
        if (!params.contains("base"))
            throw config_error(pwhere + ".base (a game object) is required");
        const auto seed =
            static_cast<std::uint64_t>(int_at(params, pwhere, "seed", 0));
        return rw::random_subspace(make_game(params.at("base"), pwhere + ".base"), seed);
    }
    throw config_error(where + ".name: unknown game '" + name + "'");
}

rw::StepOperator make_optimizer(const rw::Game& game, const json& o,
                                const std::string& where = "optimizer") {
    check_keys(o, where, {"name", "alpha", "eta", "full_taylor"});
    const std::string name = str_at(o, where, "name");
    const double alpha = num_at(o, where, "alpha", 1.0);
    if (!(alpha > 0)) throw config_error(where + ".alpha must be > 0");
    if (name == "sim_sgd") {
        if (o.contains("eta") || o.contains("full_taylor"))
            throw config_error(where + ": sim_sgd takes no eta / full_taylor");
        return rw::sim_sgd(game, alpha);
    }
    if (name == "lola") {
        const double eta = num_at(o, where, "eta", 10.0);
        return rw::lola(game, alpha, eta, bool_at(o, where, "full_taylor", false));
    }
    throw config_error(where + ".name: unknown optimizer '" + name + "'");
}

struct LyapCfg {
    int k = 0;
    std::optional<rw::DirectionStrategy> strat;  // empty: max-exponent machinery
    rw::ObjectiveSpec objective;
};

LyapCfg parse_lyapunov(const json& l, std::uint64_t seed) {
    check_keys(l, "lyapunov", {"k", "strategy", "objective", "n", "power_iters"});
    LyapCfg out;
    out.k = static_cast<int>(int_at(l, "lyapunov", "k", 0));
    if (out.k < 0) throw config_error("lyapunov.k must be >= 0");
    if (l.contains("strategy")) {
        const std::string s = str_at(l, "lyapunov", "strategy");
        rw::DirectionStrategy d;
        if (s == "random_fixed") d.kind = rw::DirectionKind::RandomFixed;
        else if (s == "eigh_first") d.kind = rw::DirectionKind::EighFirst;
        else if (s == "eigh_every") d.kind = rw::DirectionKind::EighEvery;
        else if (s == "power_iter_first") d.kind = rw::DirectionKind::PowerIterFirst;
        else if (s == "power_iter_every") d.kind = rw::DirectionKind::PowerIterEvery;
        else if (s == "propagate") d.kind = rw::DirectionKind::Propagate;
        else throw config_error("lyapunov.strategy: unknown value '" + s + "'");
        d.seed = seed;
        d.power_iters = static_cast<int>(int_at(l, "lyapunov", "power_iters", 100));
        out.strat = d;
    }
    if (l.contains("objective")) {
        const std::string s = str_at(l, "lyapunov", "objective");
        if (s == "max") out.objective.mode = rw::ObjectiveMode::Max;
        else if (s == "sum") out.objective.mode = rw::ObjectiveMode::Sum;
        else if (s == "min") out.objective.mode = rw::ObjectiveMode::Min;
        else throw config_error("lyapunov.objective must be max, sum or min");
    }
    out.objective.n = static_cast<int>(int_at(l, "lyapunov", "n", 1));
    if (out.objective.n < 1) throw config_error("lyapunov.n must be >= 1");
    return out;
}

rw::GrrConfig parse_grr(const json& g, const LyapCfg& lyap, std::uint64_t seed,
                        std::size_t dim) {
    check_keys(g, "grr",
               {"tune", "tune_steps", "tune_lr", "init", "n_directions", "max_depth",
                "branch_mode", "jump_scale", "lambda_floor", "walk_beta",
                "walk_max_steps", "direction_tol", "rebranch_tol", "opt_steps",
                "tol_grad", "tol_stable", "dedup_radius"});
    rw::GrrConfig cfg;
    cfg.k = lyap.k;
    cfg.objective = lyap.objective;
    cfg.seed = seed;
    cfg.tune_steps = static_cast<int>(int_at(g, "grr", "tune_steps", cfg.tune_steps));
    if (!bool_at(g, "grr", "tune", true)) cfg.tune_steps = 0;
    cfg.tune_lr = num_at(g, "grr", "tune_lr", cfg.tune_lr);
    if (g.contains("init")) {
        rw::Vec w = vec_at(g, "grr", "init");
        if (w.size() != dim) throw config_error("grr.init has the wrong dimension");
        cfg.init = std::move(w);
    }
    cfg.n_directions = static_cast<int>(int_at(g, "grr", "n_directions", cfg.n_directions));
    cfg.max_depth = static_cast<int>(int_at(g, "grr", "max_depth", cfg.max_depth));
    if (g.contains("branch_mode")) {
        const std::string m = str_at(g, "grr", "branch_mode");
        if (m == "scaled_jump") cfg.mode = rw::BranchMode::ScaledJump;
        else if (m == "walk_until_flip") cfg.mode = rw::BranchMode::WalkUntilFlip;
        else throw config_error("grr.branch_mode must be scaled_jump or walk_until_flip");
    }
    cfg.jump_scale = num_at(g, "grr", "jump_scale", cfg.jump_scale);
    cfg.lambda_floor = num_at(g, "grr", "lambda_floor", cfg.lambda_floor);
    cfg.walk_beta = num_at(g, "grr", "walk_beta", cfg.walk_beta);
    cfg.walk_max_steps =
        static_cast<int>(int_at(g, "grr", "walk_max_steps", cfg.walk_max_steps));
    cfg.direction_tol = num_at(g, "grr", "direction_tol", cfg.direction_tol);
    cfg.rebranch_tol = num_at(g, "grr", "rebranch_tol", cfg.rebranch_tol);
    cfg.opt_steps = static_cast<int>(int_at(g, "grr", "opt_steps", cfg.opt_steps));
    cfg.tol_grad = num_at(g, "grr", "tol_grad", cfg.tol_grad);
    cfg.tol_stable = num_at(g, "grr", "tol_stable", cfg.tol_stable);
    cfg.dedup_radius = num_at(g, "grr", "dedup_radius", cfg.dedup_radius);
    return cfg;
}

rw::GridSpec parse_grid(const json& j) {
    check_keys(j, "grid", {"p1_lo", "p1_hi", "p2_lo", "p2_hi", "n1", "n2"});
    rw::GridSpec grid;
    grid.p1_lo = num_at(j, "grid", "p1_lo", 0.0);
    grid.p1_hi = num_at(j, "grid", "p1_hi", 1.0);
    grid.p2_lo = num_at(j, "grid", "p2_lo", 0.0);
    grid.p2_hi = num_at(j, "grid", "p2_hi", 1.0);
    const long long n1 = int_at(j, "grid", "n1", 1);
    const long long n2 = int_at(j, "grid", "n2", 1);
    if (n1 < 0 || n2 < 0) throw config_error("grid.n1/n2 must be >= 0");
    grid.n1 = static_cast<std::size_t>(n1);
    grid.n2 = static_cast<std::size_t>(n2);
    return grid;
}

std::uint64_t seed_at(const json& cfg) {
    return static_cast<std::uint64_t>(int_at(cfg, "config", "seed", 0));
}

std::filesystem::path out_dir_at(const json& cfg) {
    std::string dir = "out";
    if (cfg.contains("output_dir")) dir = str_at(cfg, "config", "output_dir");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw rw::io_error("cannot create output_dir '" + dir + "': " + ec.message());
    return dir;
}

rw::Vec required_point(const json& cfg, const rw::Game& game) {
    if (!cfg.contains("point")) throw config_error("config.point is required");
    rw::Vec w = vec_at(cfg, "config", "point");
    if (w.size() != game.dim())
        throw config_error("config.point must have dimension " +
                           std::to_string(game.dim()));
    return w;
}

void cmd_phase_portrait(const json& cfg) {
    check_keys(cfg, "config",
               {"game", "optimizer", "grid", "steps", "seed", "output_dir"});
    const rw::Game game = make_game(cfg.at("game"));
    if (game.dim() != 2) throw config_error("phase-portrait needs a 2-parameter game");
    const json& o = cfg.contains("optimizer") ? cfg.at("optimizer") : json::object();
    check_keys(o, "optimizer", {"alpha", "eta", "full_taylor"});
    const double alpha = num_at(o, "optimizer", "alpha", 1.0);
    const double eta = num_at(o, "optimizer", "eta", 1.0);
    const bool full_taylor = bool_at(o, "optimizer", "full_taylor", false);
    const rw::GridSpec grid =
        cfg.contains("grid") ? parse_grid(cfg.at("grid")) : rw::GridSpec{};
    const int steps = static_cast<int>(int_at(cfg, "config", "steps", 200));
    if (steps < 0) throw config_error("config.steps must be >= 0");

    const rw::StepOperator ops[2] = {rw::sim_sgd(game, alpha),
                                     rw::lola(game, alpha, eta, full_taylor)};
    std::string csv = "optimizer,traj_id,step,p1,p2\n";
    for (const auto& op : ops) {
        for (std::size_t i = 0; i < grid.n1; ++i)
            for (std::size_t j = 0; j < grid.n2; ++j) {
                const rw::Vec w0 = {grid.p1_at(i), grid.p2_at(j)};
                const rw::Trajectory traj = rw::run(op, w0, steps);
                const std::size_t id = i * grid.n2 + j;
                for (std::size_t s = 0; s < traj.iterates.size(); ++s) {
                    csv += op.name;
                    csv += ',';
                    csv += std::to_string(id);
                    csv += ',';
                    csv += std::to_string(s);
                    csv += ',';
                    csv += rw::format_double(traj.iterates[s][0]);
                    csv += ',';
                    csv += rw::format_double(traj.iterates[s][1]);
                    csv += '\n';
                }
            }
    }
    rw::atomic_write((out_dir_at(cfg) / "portrait.csv").string(), csv);
}

void cmd_heatmap(const json& cfg) {
    check_keys(cfg, "config",
               {"game", "optimizer", "grid", "lyapunov", "seed", "output_dir"});
    const rw::Game game = make_game(cfg.at("game"));
    if (game.dim() != 2) throw config_error("heatmap needs a 2-parameter game");
    const rw::StepOperator op = make_optimizer(game, cfg.at("optimizer"));
    const LyapCfg lyap = parse_lyapunov(
        cfg.contains("lyapunov") ? cfg.at("lyapunov") : json::object(), seed_at(cfg));
    const rw::GridSpec grid =
        cfg.contains("grid") ? parse_grid(cfg.at("grid")) : rw::GridSpec{};

    const rw::HeatmapResult res = rw::exponent_heatmap(op, grid, lyap.k, lyap.strat);
    std::string csv = "p1,p2,exponent,diverged\n";
    for (std::size_t i = 0; i < grid.n1; ++i)
        for (std::size_t j = 0; j < grid.n2; ++j) {
            const std::size_t idx = i * grid.n2 + j;
            csv += rw::format_double(grid.p1_at(i));
            csv += ',';
            csv += rw::format_double(grid.p2_at(j));
            csv += ',';
            csv += rw::format_double(res.exponent[idx]);
            csv += ',';
            csv += res.diverged[idx] ? '1' : '0';
            csv += '\n';
        }
    rw::atomic_write((out_dir_at(cfg) / "heatmap.csv").string(), csv);
}

void cmd_tune_start(const json& cfg) {
    check_keys(cfg, "config",
               {"game", "optimizer", "lyapunov", "tune_steps", "tune_lr", "init",
                "seed", "output_dir"});
    const rw::Game game = make_game(cfg.at("game"));
    const rw::StepOperator op = make_optimizer(game, cfg.at("optimizer"));
    const std::uint64_t seed = seed_at(cfg);
    const LyapCfg lyap = parse_lyapunov(
        cfg.contains("lyapunov") ? cfg.at("lyapunov") : json::object(), seed);
    const int steps = static_cast<int>(int_at(cfg, "config", "tune_steps", 500));
    const double lr = num_at(cfg, "config", "tune_lr", 0.05);

    rw::Vec w0;
    if (cfg.contains("init")) {
        w0 = vec_at(cfg, "config", "init");
        if (w0.size() != game.dim()) throw config_error("config.init has the wrong dimension");
    } else {
        rw::Rng rng(seed);
        w0 = game.init_sample(rng);
    }

    const rw::TuneResult res =
        rw::tune_starting_point(op, w0, lyap.k, lyap.objective, steps, lr);
    std::string csv = "iter,objective\n";
    for (const auto& [it, obj] : res.history) {
        csv += std::to_string(it);
        csv += ',';
        csv += rw::format_double(obj);
        csv += '\n';
    }
    const auto dir = out_dir_at(cfg);
    rw::atomic_write((dir / "tune_history.csv").string(), csv);

    nlohmann::ordered_json out;
    out["point"] = res.point;
    out["objective"] = res.history.empty() ? 0.0 : res.history.back().second;
    rw::atomic_write((dir / "tuned.json").string(), out.dump(2) + "\n");
}

void cmd_grr(const json& cfg) {
    check_keys(cfg, "config",
               {"game", "optimizer", "lyapunov", "grr", "seed", "output_dir"});
    const rw::Game game = make_game(cfg.at("game"));
    const rw::StepOperator op = make_optimizer(game, cfg.at("optimizer"));
    const std::uint64_t seed = seed_at(cfg);
    const LyapCfg lyap = parse_lyapunov(
        cfg.contains("lyapunov") ? cfg.at("lyapunov") : json::object(), seed);
    const rw::GrrConfig grr =
        parse_grr(cfg.contains("grr") ? cfg.at("grr") : json::object(), lyap, seed,
                  game.dim());

    const rw::BranchTree tree = rw::run_tree_search(game, op, grr);
    const auto dir = out_dir_at(cfg);
    rw::atomic_write((dir / "grr_tree.json").string(), rw::tree_json(game, op, grr, tree));
    rw::atomic_write((dir / "solutions.csv").string(), rw::solutions_csv(game, tree));
}

void cmd_spectrum(const json& cfg) {
    check_keys(cfg, "config", {"game", "optimizer", "point", "seed", "output_dir"});
    const rw::Game game = make_game(cfg.at("game"));
    const rw::StepOperator op = make_optimizer(game, cfg.at("optimizer"));
    const rw::Vec w = required_point(cfg, game);

    const rw::Spectrum hess = rw::eig_general(rw::game_hessian(game, w));
    const rw::Spectrum jac = rw::eig_general(op.jac(w));
    std::string csv = "matrix,re,im\n";
    auto emit = [&csv](const char* label, const rw::Spectrum& s) {
        for (const auto& ev : s.eigenvalues) {
            csv += label;
            csv += ',';
            csv += rw::format_double(ev.real());
            csv += ',';
            csv += rw::format_double(ev.imag());
            csv += '\n';
        }
    };
    emit("hessian", hess);
    emit("jacobian", jac);
    rw::atomic_write((out_dir_at(cfg) / "spectrum.csv").string(), csv);
}

void cmd_classify(const json& cfg) {
    check_keys(cfg, "config",
               {"game", "optimizer", "point", "axis", "tol", "seed", "output_dir"});
    const rw::Game game = make_game(cfg.at("game"));
    const rw::StepOperator op = make_optimizer(game, cfg.at("optimizer"));
    const rw::Vec w = required_point(cfg, game);
    std::optional<rw::Vec> axis;
    if (cfg.contains("axis")) {
        rw::Vec a = vec_at(cfg, "config", "axis");
        if (a.size() != game.dim()) throw config_error("config.axis has the wrong dimension");
        axis = std::move(a);
    }
    const double tol = num_at(cfg, "config", "tol", 1e-3);

    const rw::BifurcationVerdict v = rw::classify_game_point(game, op, w, axis, tol);
    rw::atomic_write((out_dir_at(cfg) / "classify.json").string(), rw::verdict_json(v));
}

void cmd_ipd_table(const json& cfg) {
    check_keys(cfg, "config",
               {"gamma", "sim_sgd_alpha", "lola_alpha", "lola_eta", "lyapunov", "grr",
                "baseline_runs", "baseline_steps", "seed", "output_dir"});
    const std::uint64_t seed = seed_at(cfg);
    rw::IpdConfig ipd_cfg;
    ipd_cfg.gamma = num_at(cfg, "config", "gamma", ipd_cfg.gamma);
    const rw::Game game = rw::ipd(ipd_cfg);

    const double a_sgd = num_at(cfg, "config", "sim_sgd_alpha", 1.0);
    const double a_lola = num_at(cfg, "config", "lola_alpha", 1.0);
    const double eta = num_at(cfg, "config", "lola_eta", 10.0);
    const LyapCfg lyap = parse_lyapunov(
        cfg.contains("lyapunov") ? cfg.at("lyapunov") : json::object(), seed);
    const rw::GrrConfig grr =
        parse_grr(cfg.contains("grr") ? cfg.at("grr") : json::object(), lyap, seed,
                  game.dim());

    struct Row {
        std::string method;
        std::size_t count = 0;
        double l1_min, l1_max, l2_min, l2_max;
    };
    std::vector<Row> rows;
    auto add = [&rows](std::string method, const std::vector<std::array<double, 2>>& ls) {
        Row r{std::move(method), ls.size(), std::numeric_limits<double>::quiet_NaN(),
              std::numeric_limits<double>::quiet_NaN(),
              std::numeric_limits<double>::quiet_NaN(),
              std::numeric_limits<double>::quiet_NaN()};
        for (const auto& l : ls) {
            r.l1_min = std::isnan(r.l1_min) ? l[0] : std::min(r.l1_min, l[0]);
            r.l1_max = std::isnan(r.l1_max) ? l[0] : std::max(r.l1_max, l[0]);
            r.l2_min = std::isnan(r.l2_min) ? l[1] : std::min(r.l2_min, l[1]);
            r.l2_max = std::isnan(r.l2_max) ? l[1] : std::max(r.l2_max, l[1]);
        }
        rows.push_back(std::move(r));
    };

    auto tree_losses = [](const rw::BranchTree& tree) {
        std::vector<std::array<double, 2>> ls;
        for (const auto& s : tree.solutions) ls.push_back({s.loss_a, s.loss_b});
        return ls;
    };

    {
        const rw::StepOperator op = rw::sim_sgd(game, a_sgd);
        add("grr_tuned_sim_sgd", tree_losses(rw::run_tree_search(game, op, grr)));
    }
    {
        const rw::StepOperator op = rw::lola(game, a_lola, eta);
        add("grr_tuned_lola", tree_losses(rw::run_tree_search(game, op, grr)));
    }
    {
        rw::GrrConfig untuned = grr;
        untuned.tune_steps = 0;
        const rw::StepOperator op = rw::sim_sgd(game, a_sgd);
        add("grr_untuned_sim_sgd", tree_losses(rw::run_tree_search(game, op, untuned)));
    }
    {
        const auto runs = int_at(cfg, "config", "baseline_runs", 20);
        const auto steps = int_at(cfg, "config", "baseline_steps", 2000);
        const rw::StepOperator op = rw::sim_sgd(game, a_sgd);
        rw::Rng rng(seed);
        std::vector<std::array<double, 2>> ls;
        for (long long i = 0; i < runs; ++i) {
            const rw::Trajectory traj = rw::run(op, game.init_sample(rng),
                                                static_cast<int>(steps));
            const rw::Vec& w = traj.iterates.back();
            ls.push_back({game.loss(0, std::span<const double>(w)),
                          game.loss(1, std::span<const double>(w))});
        }
        add("random_init_sim_sgd", ls);
    }

    std::string csv = "method,solutions,loss1_min,loss1_max,loss2_min,loss2_max\n";
    for (const auto& r : rows) {
        csv += r.method;
        csv += ',';
        csv += std::to_string(r.count);
        for (double x : {r.l1_min, r.l1_max, r.l2_min, r.l2_max}) {
            csv += ',';
            csv += rw::format_double(x);
        }
        csv += '\n';
    }
    rw::atomic_write((out_dir_at(cfg) / "ipd_table.csv").string(), csv);
}

} // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (const char* t = std::getenv("RIDGEWALK_THREADS")) {
        const int n = std::atoi(t);
        if (n > 0) omp_set_num_threads(n);
    }
#endif

    CLI::App app{"bifurcation-seeking branching search over differentiable games"};
    app.require_subcommand(1);
    std::string cfg_path;

    struct Sub {
        const char* name;
        const char* desc;
        void (*fn)(const json&);
    };
    const Sub subs[] = {
        {"phase-portrait", "SimSGD and LOLA trajectories from a start grid", cmd_phase_portrait},
        {"heatmap", "k-step exponent over a 2-parameter grid", cmd_heatmap},
        {"tune-start", "gradient-ascend the exponent objective", cmd_tune_start},
        {"grr", "branching tree search; tree JSON plus solutions CSV", cmd_grr},
        {"spectrum", "game Hessian and operator Jacobian spectra at a point", cmd_spectrum},
        {"classify", "normal-form verdict for a candidate bifurcation point", cmd_classify},
        {"ipd-table", "solution-diversity table on the iterated prisoner's dilemma", cmd_ipd_table},
    };
    for (const auto& s : subs)
        app.add_subcommand(s.name, s.desc)
            ->add_option("-c,--config", cfg_path, "JSON run configuration")
            ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const json cfg = load_config(cfg_path);
        for (const auto& s : subs)
            if (app.get_subcommand(s.name)->parsed()) {
                s.fn(cfg);
                return 0;
            }
        return 2;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const rw::numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const rw::io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
