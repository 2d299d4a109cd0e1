#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "ridgewalk/operator.hpp"
#include "ridgewalk/optimizers.hpp"
#include "ridgewalk/spectral.hpp"

namespace ridgewalk {

// How the probe direction d evolves along the trajectory. "Every" variants
// re-estimate the top stretch direction at each iterate; "First" variants
// estimate once at w_0 and keep it; Propagate pushes d through the step
// Jacobians the way a real perturbation would travel.
enum class DirectionKind {
    RandomFixed,
    EighFirst,
    EighEvery,
    PowerIterFirst,
    PowerIterEvery,
    Propagate,
};

struct DirectionStrategy {
    DirectionKind kind = DirectionKind::EighEvery;
    std::uint64_t seed = 0;  // RandomFixed only
    int power_iters = 100;   // PowerIter* only

    static DirectionStrategy random_fixed(std::uint64_t seed) {
        return {DirectionKind::RandomFixed, seed, 100};
    }
    static DirectionStrategy of(DirectionKind k) { return {k, 0, 100}; }
};

struct LyapunovReport {
    // mean of terms over the realized trajectory, 1/(k+1) normalization;
    // this is the headline number everywhere
    double exponent = 0.0;
    // log lambda_max(J_dagger) where available; >= exponent up to roundoff
    // along the same direction (log of a mean vs mean of logs)
    std::optional<double> proxy;
    std::vector<double> terms;  // gamma_j, one per iterate; -inf marks J d = 0
    Vec direction;              // the last direction used
    std::optional<Mat> j_dagger;
    std::vector<Vec> iterates;
    bool diverged = false;
    int sentinel_terms = 0;  // -inf terms excluded from the mean
};

// gamma = log d^T J^T J d with J = op.jac(w); -inf when J d vanishes
double lyap_term(const StepOperator& op, const Vec& w, const Vec& d);

// truncated exponent after k steps: mean of gamma_j over iterates w_0..w_k
LyapunovReport k_step_exponent(const StepOperator& op, const Vec& w0, int k,
                               const DirectionStrategy& strat);

// J_dagger = mean_j J_j^T J_j; reports the faithful exponent along its top
// eigenvector plus the log-eigenvalue proxy
LyapunovReport max_k_step_exponent(const StepOperator& op, const Vec& w0, int k);

// faithful exponent along a caller-supplied fixed direction
LyapunovReport k_step_exponent_along(const StepOperator& op, const Vec& w0, int k,
                                     const Vec& d);

enum class ObjectiveMode { Max, Sum, Min };

struct ObjectiveSpec {
    ObjectiveMode mode = ObjectiveMode::Max;
    int n = 1;  // direction count for Sum/Min
};

struct MultiDirResult {
    double value = 0.0;
    std::vector<Vec> directions;     // orthonormal, top of J_dagger
    std::vector<double> exponents;   // faithful exponent per direction
    Vec gram_eigenvalues;            // matching lambda_i(J_dagger)
    bool diverged = false;
};

// top-n directions of J_dagger with their faithful exponents, combined per
// mode (Sum or Min); Max with n=1 degenerates to max_k_step_exponent
MultiDirResult multi_direction_objective(const StepOperator& op, const Vec& w0, int k,
                                         int n, ObjectiveMode mode);

struct TuneResult {
    Vec point;
    std::vector<std::pair<int, double>> history;  // (iter, objective), final included
};

// gradient ascent on the exponent objective by central differences (h=1e-4);
// lr = 0 leaves the point untouched but still reports the history
TuneResult tune_starting_point(const StepOperator& op, const Vec& w0, int k,
                               const ObjectiveSpec& objective, int steps, double lr);

struct GridSpec {
    double p1_lo = 0.0, p1_hi = 1.0;
    double p2_lo = 0.0, p2_hi = 1.0;
    std::size_t n1 = 1, n2 = 1;

    double p1_at(std::size_t i) const {
        return n1 < 2 ? p1_lo : p1_lo + (p1_hi - p1_lo) * double(i) / double(n1 - 1);
    }
    double p2_at(std::size_t j) const {
        return n2 < 2 ? p2_lo : p2_lo + (p2_hi - p2_lo) * double(j) / double(n2 - 1);
    }
};

struct HeatmapResult {
    GridSpec grid;
    std::vector<double> exponent;    // row-major [i * n2 + j]
    std::vector<std::uint8_t> diverged;
};

// Exponent at every grid node of a 2-parameter operator. Cells are
// independent; the parallel version farms them out with OpenMP and writes by
// index, so it is bit-identical to the serial reference.
HeatmapResult exponent_heatmap(const StepOperator& op, const GridSpec& grid, int k,
                               std::optional<DirectionStrategy> strat = std::nullopt);
HeatmapResult exponent_heatmap_serial(const StepOperator& op, const GridSpec& grid,
                                      int k,
                                      std::optional<DirectionStrategy> strat = std::nullopt);

} // namespace ridgewalk
