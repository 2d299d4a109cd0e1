#include "ridgewalk/lyapunov.hpp"

#include <cmath>
#include <limits>

#include "ridgewalk/rng.hpp"

namespace ridgewalk {

namespace {

Vec top_direction(const Mat& gram_j, const DirectionStrategy& strat) {
    if (strat.kind == DirectionKind::PowerIterFirst ||
        strat.kind == DirectionKind::PowerIterEvery)
        return top_eigpairs_symmetric(gram_j, 1, true, strat.power_iters)[0].vector;
    return eig_symmetric(gram_j)[0].vector;
}

double term_from(const Mat& jac, const Vec& d, Vec* jd_out = nullptr) {
    Vec jd = mat_vec(jac, d);
    const double s = dot(jd, jd);
    if (jd_out) *jd_out = std::move(jd);
    return std::log(s);  // log(0) = -inf is the sentinel for a crushed direction
}

void finish_mean(LyapunovReport& r) {
    double acc = 0.0;
    int used = 0;
    for (double g : r.terms) {
        if (std::isinf(g) && g < 0.0) {
            ++r.sentinel_terms;
            continue;
        }
        acc += g;
        ++used;
    }
    r.exponent = used > 0 ? acc / used
                          : -std::numeric_limits<double>::infinity();
}

} // namespace

double lyap_term(const StepOperator& op, const Vec& w, const Vec& d) {
    return term_from(op.jac(w), d);
}

LyapunovReport k_step_exponent(const StepOperator& op, const Vec& w0, int k,
                               const DirectionStrategy& strat) {
    if (k < 0) throw std::invalid_argument("k_step_exponent: k must be >= 0");
    LyapunovReport rep;
    Trajectory traj = run(op, w0, k);
    rep.diverged = traj.diverged;
    rep.iterates = std::move(traj.iterates);

    Vec d;
    const std::size_t m = rep.iterates.size();
    for (std::size_t j = 0; j < m; ++j) {
        const Mat jac = op.jac(rep.iterates[j]);
        if (j == 0) {
            if (strat.kind == DirectionKind::RandomFixed) {
                Rng rng(strat.seed);
                d = rng.unit_vec(w0.size());
            } else {
                // Eigh/PowerIter start here; Propagate launches from the same
                // top stretch direction and lets the Jacobians carry it
                d = top_direction(gram(jac), strat);
            }
        } else if (strat.kind == DirectionKind::EighEvery ||
                   strat.kind == DirectionKind::PowerIterEvery) {
            d = top_direction(gram(jac), strat);
        }
        Vec jd;
        rep.terms.push_back(term_from(jac, d, &jd));
        if (strat.kind == DirectionKind::Propagate) {
            const double nrm = norm2(jd);
            if (nrm > 0.0) d = vec_scale(jd, 1.0 / nrm);  // else keep the old d
        }
    }
    rep.direction = d;
    finish_mean(rep);
    return rep;
}

LyapunovReport k_step_exponent_along(const StepOperator& op, const Vec& w0, int k,
                                     const Vec& d) {
    if (k < 0) throw std::invalid_argument("k_step_exponent_along: k must be >= 0");
    LyapunovReport rep;
    Trajectory traj = run(op, w0, k);
    rep.diverged = traj.diverged;
    rep.iterates = std::move(traj.iterates);
    for (const Vec& w : rep.iterates) rep.terms.push_back(lyap_term(op, w, d));
    rep.direction = d;
    finish_mean(rep);
    return rep;
}

LyapunovReport max_k_step_exponent(const StepOperator& op, const Vec& w0, int k) {
    if (k < 0) throw std::invalid_argument("max_k_step_exponent: k must be >= 0");
    LyapunovReport rep;
    Trajectory traj = run(op, w0, k);
    rep.diverged = traj.diverged;
    rep.iterates = std::move(traj.iterates);
    const std::size_t m = rep.iterates.size();
    const std::size_t dim = w0.size();

    std::vector<Mat> jacs(m);
    Mat jd(dim, dim);
    for (std::size_t j = 0; j < m; ++j) {
        jacs[j] = op.jac(rep.iterates[j]);
        jd = mat_add(jd, gram(jacs[j]));
    }
    jd = mat_scale(jd, 1.0 / double(m));
    const auto top = eig_symmetric(jd)[0];
    rep.proxy = std::log(top.value);
    rep.direction = top.vector;
    rep.j_dagger = std::move(jd);
    for (std::size_t j = 0; j < m; ++j)
        rep.terms.push_back(term_from(jacs[j], rep.direction));
    finish_mean(rep);
    return rep;
}

MultiDirResult multi_direction_objective(const StepOperator& op, const Vec& w0, int k,
                                         int n, ObjectiveMode mode) {
    if (n < 1) throw std::invalid_argument("multi_direction_objective: n must be >= 1");
    MultiDirResult res;
    Trajectory traj = run(op, w0, k);
    res.diverged = traj.diverged;
    const std::size_t m = traj.iterates.size();
    const std::size_t dim = w0.size();
    const std::size_t nn = std::min<std::size_t>(n, dim);

    std::vector<Mat> jacs(m);
    Mat jd(dim, dim);
    for (std::size_t j = 0; j < m; ++j) {
        jacs[j] = op.jac(traj.iterates[j]);
        jd = mat_add(jd, gram(jacs[j]));
    }
    jd = mat_scale(jd, 1.0 / double(m));
    auto pairs = eig_symmetric(jd);
    pairs.resize(nn);

    for (const auto& pr : pairs) {
        double acc = 0.0;
        int used = 0;
        for (std::size_t j = 0; j < m; ++j) {
            const double g = term_from(jacs[j], pr.vector);
            if (std::isinf(g) && g < 0.0) continue;
            acc += g;
            ++used;
        }
        res.exponents.push_back(used > 0 ? acc / used
                                         : -std::numeric_limits<double>::infinity());
        res.directions.push_back(pr.vector);
        res.gram_eigenvalues.push_back(pr.value);
    }
    if (mode == ObjectiveMode::Min) {
        res.value = res.exponents[0];
        for (double e : res.exponents) res.value = std::min(res.value, e);
    } else {  // Sum; Max callers use max_k_step_exponent
        res.value = 0.0;
        for (double e : res.exponents) res.value += e;
    }
    return res;
}

namespace {

double objective_value(const StepOperator& op, const Vec& w, int k,
                       const ObjectiveSpec& obj) {
    double v;
    if (obj.mode == ObjectiveMode::Max)
        v = max_k_step_exponent(op, w, k).exponent;
    else
        v = multi_direction_objective(op, w, k, obj.n, obj.mode).value;
    // a crushed or escaped probe point still has to produce a finite value
    // for the finite-difference quotient
    if (!std::isfinite(v)) v = -1e100;
    return v;
}

} // namespace

TuneResult tune_starting_point(const StepOperator& op, const Vec& w0, int k,
                               const ObjectiveSpec& objective, int steps, double lr) {
    TuneResult res;
    res.point = w0;
    const double h = 1e-4;
    for (int it = 0; it < steps; ++it) {
        res.history.emplace_back(it, objective_value(op, res.point, k, objective));
        Vec g(res.point.size());
        Vec probe = res.point;
        for (std::size_t i = 0; i < probe.size(); ++i) {
            probe[i] = res.point[i] + h;
            const double up = objective_value(op, probe, k, objective);
            probe[i] = res.point[i] - h;
            const double dn = objective_value(op, probe, k, objective);
            probe[i] = res.point[i];
            g[i] = (up - dn) / (2.0 * h);
        }
        axpy(res.point, lr, g);
    }
    res.history.emplace_back(steps, objective_value(op, res.point, k, objective));
    return res;
}

namespace {

HeatmapResult heatmap_impl(const StepOperator& op, const GridSpec& grid, int k,
                           const std::optional<DirectionStrategy>& strat,
                           bool parallel) {
    HeatmapResult res;
    res.grid = grid;
    const std::size_t cells = grid.n1 * grid.n2;
    res.exponent.assign(cells, 0.0);
    res.diverged.assign(cells, 0);

    auto cell = [&](std::size_t idx) {
        const std::size_t i = idx / grid.n2, j = idx % grid.n2;
        const Vec w = {grid.p1_at(i), grid.p2_at(j)};
        const LyapunovReport rep =
            strat ? k_step_exponent(op, w, k, *strat) : max_k_step_exponent(op, w, k);
        res.exponent[idx] = rep.exponent;
        res.diverged[idx] = rep.diverged ? 1 : 0;
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t idx = 0; idx < std::ptrdiff_t(cells); ++idx)
            cell(std::size_t(idx));
    } else {
        for (std::size_t idx = 0; idx < cells; ++idx) cell(idx);
    }
    return res;
}

} // namespace

HeatmapResult exponent_heatmap(const StepOperator& op, const GridSpec& grid, int k,
                               std::optional<DirectionStrategy> strat) {
    return heatmap_impl(op, grid, k, strat, true);
}

HeatmapResult exponent_heatmap_serial(const StepOperator& op, const GridSpec& grid,
                                      int k, std::optional<DirectionStrategy> strat) {
    return heatmap_impl(op, grid, k, strat, false);
}

} // namespace ridgewalk
