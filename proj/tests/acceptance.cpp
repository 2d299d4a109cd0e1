// End-to-end acceptance checks. Each criterion prints exactly one PASS/FAIL
// line with the numbers that decided it; the exit code is the failure count.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ridgewalk/autodiff.hpp"
#include "ridgewalk/bifurcation.hpp"
#include "ridgewalk/games.hpp"
#include "ridgewalk/grr.hpp"
#include "ridgewalk/lyapunov.hpp"
#include "ridgewalk/optimizers.hpp"
#include "ridgewalk/spectral.hpp"

#include "oracles.hpp"

using namespace ridgewalk;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("%s  %d %-22s %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Vec scaled_normal_init(std::uint64_t seed, std::size_t dim, double scale) {
    Rng rng(seed);
    Vec w(dim);
    for (auto& x : w) x = scale * rng.normal();
    return w;
}

struct LossSpan {
    double lo = 1e300, hi = -1e300;
    std::size_t count = 0;
    void add(double l) {
        lo = std::min(lo, l);
        hi = std::max(hi, l);
        ++count;
    }
};

LossSpan player1_span(const BranchTree& tree) {
    LossSpan s;
    for (const auto& sol : tree.solutions) s.add(sol.loss_a);
    return s;
}

// ---- 1: tree search recovers both dilemma loss modes -----------------------

void criterion_diversity() {
    const auto t0 = std::chrono::steady_clock::now();
    const Game g = ipd();
    GrrConfig cfg;
    cfg.init = scaled_normal_init(2024, g.dim(), 0.1);
    cfg.tune_steps = 1000;
    cfg.tune_lr = 0.02;
    cfg.k = 0;
    cfg.opt_steps = 40000;
    cfg.max_depth = 1;
    cfg.mode = BranchMode::WalkUntilFlip;

    const LossSpan sgd = player1_span(run_tree_search(g, sim_sgd(g, 1.0), cfg));
    const LossSpan lol = player1_span(run_tree_search(g, lola(g, 1.0, 10.0), cfg));

    GrrConfig control = cfg;
    control.tune_steps = 0;
    const LossSpan ctl = player1_span(run_tree_search(g, sim_sgd(g, 1.0), control));

    Rng rng(1234);
    LossSpan base;
    const StepOperator op = sim_sgd(g, 1.0);
    for (int i = 0; i < 20; ++i) {
        const Trajectory tr = run(op, g.init_sample(rng), 2000);
        base.add(g.loss(0, tr.iterates.back()));
    }

    const bool spans_ok = sgd.lo <= 1.1 && sgd.hi >= 1.9 && lol.lo <= 1.1 && lol.hi >= 1.9;
    const bool base_ok = base.lo >= 1.9 && base.hi <= 2.1;
    const bool ctl_ok = ctl.count > 0 &&
                        ((std::abs(ctl.lo - 1.0) <= 0.1 && std::abs(ctl.hi - 1.0) <= 0.1) ||
                         (std::abs(ctl.lo - 2.0) <= 0.1 && std::abs(ctl.hi - 2.0) <= 0.1));
    const double dt = seconds_since(t0);

    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "sgd [%.3f, %.3f], lola [%.3f, %.3f], 20-init [%.4f, %.4f], "
                  "untuned [%.3f, %.3f], %.0fs",
                  sgd.lo, sgd.hi, lol.lo, lol.hi, base.lo, base.hi, ctl.lo, ctl.hi, dt);
    report(1, "ipd-diversity", spans_ok && base_ok && ctl_ok && dt < 300.0, buf);
}

// ---- 2: optimizer dichotomy on matching pennies ----------------------------

void criterion_dichotomy() {
    const auto t0 = std::chrono::steady_clock::now();
    const Game g = matching_pennies(ParamSpace::Raw);
    const StepOperator sgd = sim_sgd(g, 0.1);
    const StepOperator lo = lola(g, 0.1, 0.5);
    const int steps = 150, window = 50;

    int monotone = 0, converged = 0, starts = 0;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const Vec w0 = {0.35 + 0.075 * i, 0.35 + 0.075 * j};
            ++starts;

            const Trajectory ts = run(sgd, w0, steps);
            bool ok = true;
            for (std::size_t t = 0; t + window < ts.iterates.size(); ++t) {
                const auto dist = [](const Vec& w) {
                    return std::hypot(w[0] - 0.5, w[1] - 0.5);
                };
                if (dist(ts.iterates[t + window]) < dist(ts.iterates[t]) - 1e-12) {
                    ok = false;
                    break;
                }
            }
            monotone += ok;

            const Trajectory tl = run(lo, w0, steps);
            const Vec& e = tl.iterates.back();
            if (std::hypot(e[0] - 0.5, e[1] - 0.5) <= 1e-2) ++converged;
        }
    }
    const double dt = seconds_since(t0);

    char buf[160];
    std::snprintf(buf, sizeof buf, "sgd windows monotone %d/%d, lola converged %d/%d, %.1fs",
                  monotone, starts, converged, starts, dt);
    report(2, "pennies-dichotomy",
           monotone == starts && converged * 10 >= starts * 9 && dt < 10.0, buf);
}

// ---- 3: branching on the mixed game splits center and corner ---------------

void criterion_mixed_branching() {
    const auto t0 = std::chrono::steady_clock::now();
    const Game g = mixed_game(0.25);
    GrrConfig cfg;
    cfg.tune_steps = 300;
    cfg.k = 10;
    cfg.n_directions = 2;
    cfg.max_depth = 2;
    cfg.mode = BranchMode::WalkUntilFlip;
    cfg.opt_steps = 20000;
    cfg.tol_grad = 0.01;  // the shaped update's fixed point keeps a small raw gradient
    cfg.seed = 0;

    const BranchTree tree = run_tree_search(g, lola(g, 0.5, 1.0), cfg);
    bool center = false, corner = false;
    for (const auto& s : tree.solutions) {
        if (std::hypot(s.strategy[0] - 0.5, s.strategy[1] - 0.5) <= 0.05) center = true;
        if (s.strategy[0] > 0.9 && s.strategy[1] > 0.9) corner = true;
    }
    const double dt = seconds_since(t0);

    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu solutions, center %s, cooperate corner %s, %.1fs",
                  tree.solutions.size(), center ? "yes" : "no", corner ? "yes" : "no", dt);
    report(3, "mixed-branching",
           tree.solutions.size() >= 2 && center && corner && dt < 60.0, buf);
}

// ---- 4: exponents against closed forms and an orbit average ----------------

StepOperator constant_jacobian_op(Mat m) {
    StepOperator op;
    op.name = "linear";
    op.step = [m](const Vec& w) { return mat_vec(m, w); };
    op.jac = [m](const Vec&) { return m; };
    return op;
}

void criterion_lyapunov_oracles() {
    double worst = 0.0;
    const std::vector<DirectionKind> kinds = {DirectionKind::EighFirst, DirectionKind::EighEvery,
                                              DirectionKind::PowerIterFirst,
                                              DirectionKind::PowerIterEvery};

    Mat diag(2, 2);
    diag(0, 0) = 2.0;
    diag(1, 1) = 0.5;
    Mat gen(3, 3);
    gen(0, 0) = 1.5, gen(0, 1) = 0.4, gen(1, 1) = 0.7, gen(1, 2) = 0.3;
    gen(2, 0) = 0.2, gen(2, 2) = 0.5;

    const std::vector<std::pair<Mat, Vec>> cases = {{diag, {0.3, -0.7}}, {gen, {0.3, -0.7, 0.9}}};
    for (const auto& [m, w0] : cases) {
        const Mat mtm = mat_mul(transpose(m), m);
        double top = 0.0;
        for (const auto& p : eig_symmetric(mtm)) top = std::max(top, p.value);
        const double target = std::log(top);
        for (const int k : {0, 5, 50}) {
            for (const DirectionKind kind : kinds) {
                DirectionStrategy strat = DirectionStrategy::of(kind);
                strat.power_iters = 500;
                const LyapunovReport r = k_step_exponent(constant_jacobian_op(m), w0, k, strat);
                worst = std::max(worst, std::abs(r.exponent - target));
            }
        }
    }

    const StepOperator logistic = one_dim_map(4.0, true);
    const int k = 10000;
    const double x0 = 0.3123;
    const LyapunovReport lr =
        k_step_exponent(logistic, {x0}, k, DirectionStrategy::of(DirectionKind::Propagate));
    double x = x0, orbit = 0.0;
    for (int j = 0; j <= k; ++j) {
        orbit += 2.0 * std::log(std::abs(4.0 * (1.0 - 2.0 * x)));
        x = 4.0 * x * (1.0 - x);
    }
    orbit /= k + 1;
    const double two_ln2 = 2.0 * std::log(2.0);

    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "linear max err %.2e, logistic exponent %.4f vs orbit %.4f (2ln2 %.4f)", worst,
                  lr.exponent, orbit, two_ln2);
    report(4, "lyapunov-oracles",
           worst <= 1e-9 && std::abs(lr.exponent - two_ln2) <= 0.05 &&
               std::abs(orbit - two_ln2) <= 0.05 && std::abs(lr.exponent - orbit) <= 1e-9,
           buf);
}

// ---- 5: derivatives against central differences ----------------------------

double rel_gap(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

void criterion_derivatives() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<Game> games = {ipd(),
                                     small_ipd(),
                                     matching_pennies(ParamSpace::Logit),
                                     matching_pennies(ParamSpace::Raw),
                                     mixed_game(0.25),
                                     random_subspace(ipd(), 11)};
    double worst = 0.0;
    int points = 0;
    Rng rng(501);
    for (const Game& g : games) {
        const StepOperator op = sim_sgd(g, 0.7);
        for (int i = 0; i < 50; ++i) {
            const Vec w = g.init_sample(rng);
            ++points;

            const Vec jg = joint_grad(g, w);
            for (int p = 0; p < 2; ++p) {
                const Vec fd = fd_gradient(
                    [&](std::span<const double> x) { return g.loss(p, x); }, w);
                const std::size_t off = p == 0 ? 0 : g.dim_a();
                const std::size_t len = p == 0 ? g.dim_a() : g.dim_b();
                for (std::size_t j = 0; j < len; ++j)
                    worst = std::max(worst, rel_gap(jg[off + j], fd[off + j]));
            }

            const Mat h = game_hessian(g, w);
            const Mat hfd = fd_jacobian([&](const Vec& x) { return joint_grad(g, x); }, w);
            for (std::size_t r = 0; r < h.rows(); ++r)
                for (std::size_t c = 0; c < h.cols(); ++c)
                    worst = std::max(worst, rel_gap(h(r, c), hfd(r, c)));

            const Mat j = op.jac(w);
            const Mat jfd = fd_jacobian(op.step, w);
            for (std::size_t r = 0; r < j.rows(); ++r)
                for (std::size_t c = 0; c < j.cols(); ++c)
                    worst = std::max(worst, rel_gap(j(r, c), jfd(r, c)));
        }
    }
    const double dt = seconds_since(t0);

    char buf[160];
    std::snprintf(buf, sizeof buf, "%d points over %zu games, worst rel err %.2e, %.1fs", points,
                  games.size(), worst, dt);
    report(5, "derivative-check", worst < 1e-4 && points >= 50 * games.size() && dt < 30.0, buf);
}

// ---- 6: eigensolvers against independent constructions ---------------------

void criterion_eigensolvers() {
    Rng rng(77);
    double worst_general = 0.0;
    for (int i = 0; i < 200; ++i) {
        Mat a(4, 4);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c) a(r, c) = rng.uniform(-1.0, 1.0);
        const Spectrum s = eig_general(a);
        worst_general = std::max(
            worst_general, oracles::spectrum_distance(s.eigenvalues,
                                                      oracles::char_poly_eigenvalues(a)));
    }

    double worst_symmetric = 0.0;
    for (int i = 0; i < 200; ++i) {
        Vec lambda(4);
        for (auto& l : lambda) l = rng.uniform(-5.0, 5.0);

        // random orthogonal basis by Gram-Schmidt on Gaussian columns
        std::vector<Vec> q;
        while (q.size() < 4) {
            Vec v(4);
            for (auto& x : v) x = rng.normal();
            for (const Vec& u : q) {
                double d = 0.0;
                for (int j = 0; j < 4; ++j) d += u[j] * v[j];
                for (int j = 0; j < 4; ++j) v[j] -= d * u[j];
            }
            double n = 0.0;
            for (double x : v) n += x * x;
            n = std::sqrt(n);
            if (n < 1e-6) continue;
            for (auto& x : v) x /= n;
            q.push_back(v);
        }
        Mat a(4, 4);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c) {
                double s = 0.0;
                for (int j = 0; j < 4; ++j) s += q[j][r] * lambda[j] * q[j][c];
                a(r, c) = s;
            }

        std::vector<double> got;
        for (const auto& p : eig_symmetric(a)) got.push_back(p.value);
        std::sort(got.begin(), got.end());
        std::sort(lambda.begin(), lambda.end());
        for (int j = 0; j < 4; ++j)
            worst_symmetric = std::max(worst_symmetric, std::abs(got[j] - lambda[j]));
    }

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "200 general worst %.2e (tol 1e-6), 200 symmetric worst %.2e (tol 1e-9)",
                  worst_general, worst_symmetric);
    report(6, "eigensolver-check", worst_general <= 1e-6 && worst_symmetric <= 1e-9, buf);
}

// ---- 7: normal-form verdicts on canonical fields ---------------------------

void criterion_normal_forms() {
    bool ok = true;
    std::string why;

    const auto fold = classify_1d({[](double u, double mu) { return mu - u * u; }});
    if (fold.kind != BifKind::SaddleNode || std::abs(fold.a - 1.0) > 1e-3 ||
        std::abs(fold.b + 1.0) > 1e-3 || fold.side != MuSide::Positive) {
        ok = false;
        why += "fold ";
    }

    const auto fork = classify_1d({[](double u, double mu) { return mu * u - u * u * u; }});
    if (fork.kind != BifKind::Pitchfork || std::abs(fork.a - 1.0) > 1e-3 ||
        std::abs(fork.b + 1.0) > 1e-3 || fork.criticality != Criticality::Super ||
        fork.side != MuSide::Positive) {
        ok = false;
        why += "pitchfork ";
    }

    const auto hopf = classify_hopf_2d({[](const double* u, double mu, double* out) {
        const double r2 = u[0] * u[0] + u[1] * u[1];
        out[0] = mu * u[0] - u[1] - u[0] * r2;
        out[1] = u[0] + mu * u[1] - u[1] * r2;
    }});
    if (hopf.kind != BifKind::Hopf || std::abs(hopf.a - 1.0) > 1e-3 ||
        std::abs(hopf.b + 1.0) > 1e-3 || hopf.criticality != Criticality::Super ||
        hopf.side != MuSide::Positive) {
        ok = false;
        why += "hopf ";
    }

    Rng rng(42);
    int preserved = 0;
    for (int i = 0; i < 20; ++i) {
        const double eps = rng.uniform(-0.1, 0.1);
        const auto v = classify_1d(
            {[eps](double u, double mu) { return mu - u * u + eps * u * u * u; }});
        if (v.kind == BifKind::SaddleNode && v.side == MuSide::Positive) ++preserved;
    }
    if (preserved != 20) {
        ok = false;
        why += "perturbations ";
    }

    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "fold (%.4f, %.4f), pitchfork (%.4f, %.4f), hopf (%.4f, %.4f), "
                  "perturbed folds %d/20%s%s",
                  fold.a, fold.b, fork.a, fork.b, hopf.a, hopf.b, preserved,
                  why.empty() ? "" : " failing: ", why.c_str());
    report(7, "normal-forms", ok, buf);
}

// ---- 8: bytewise reproducibility of the command-line artifacts -------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return in ? out.str() : std::string("<unreadable:" + p.string() + ">");
}

bool run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + RIDGEWALK_CLI_PATH + "\" " + args +
                            " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
}

void criterion_determinism() {
    const fs::path work = fs::current_path() / "acceptance_work";
    fs::create_directories(work);
    const auto cfg_path = [&](const char* name) { return (work / name).string(); };

    std::ofstream(work / "grr.json")
        << "{\"game\": {\"name\": \"small_ipd\"},\n"
           " \"optimizer\": {\"name\": \"sim_sgd\", \"alpha\": 1.0},\n"
           " \"lyapunov\": {\"k\": 0},\n"
           " \"grr\": {\"tune_steps\": 100, \"opt_steps\": 3000,\n"
           "          \"branch_mode\": \"walk_until_flip\"},\n"
           " \"seed\": 5,\n"
           " \"output_dir\": \"" +
               (work / "grr_out").string() + "\"}\n";
    std::ofstream(work / "heat.json")
        << "{\"game\": {\"name\": \"small_ipd\"},\n"
           " \"optimizer\": {\"name\": \"sim_sgd\", \"alpha\": 1.0},\n"
           " \"grid\": {\"p1_lo\": -3, \"p1_hi\": 3, \"p2_lo\": -3, \"p2_hi\": 3,"
           " \"n1\": 9, \"n2\": 7},\n"
           " \"lyapunov\": {\"k\": 4},\n"
           " \"output_dir\": \"" +
               (work / "heat_out").string() + "\"}\n";
    std::ofstream(work / "spec.json")
        << "{\"game\": {\"name\": \"matching_pennies\", \"params\": {\"space\": \"raw\"}},\n"
           " \"optimizer\": {\"name\": \"sim_sgd\", \"alpha\": 0.1},\n"
           " \"point\": [0.45, 0.6],\n"
           " \"output_dir\": \"" +
               (work / "spec_out").string() + "\"}\n";

    bool ran = true;
    std::vector<std::string> first;
    const std::vector<fs::path> artifacts = {work / "grr_out" / "grr_tree.json",
                                             work / "grr_out" / "solutions.csv",
                                             work / "heat_out" / "heatmap.csv",
                                             work / "spec_out" / "spectrum.csv"};
    const auto run_all = [&] {
        ran = run_cli("grr -c " + cfg_path("grr.json")) &&
              run_cli("heatmap -c " + cfg_path("heat.json")) &&
              run_cli("spectrum -c " + cfg_path("spec.json")) && ran;
    };

    run_all();
    for (const auto& p : artifacts) first.push_back(slurp(p));
    run_all();

    bool identical = true;
    for (std::size_t i = 0; i < artifacts.size(); ++i)
        identical = identical && !first[i].empty() && first[i] == slurp(artifacts[i]);

    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu artifacts rerun %s, cli runs %s", artifacts.size(),
                  identical ? "byte-identical" : "DIFFER", ran ? "clean" : "FAILED");
    report(8, "determinism", ran && identical, buf);
}

} // namespace

int main() {
    criterion_diversity();
    criterion_dichotomy();
    criterion_mixed_branching();
    criterion_lyapunov_oracles();
    criterion_derivatives();
    criterion_eigensolvers();
    criterion_normal_forms();
    criterion_determinism();
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
