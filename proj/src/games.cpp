#include "ridgewalk/games.hpp"

#include <cmath>
#include <stdexcept>

namespace ridgewalk {

namespace {

template <class T>
T mp_loss(ParamSpace space, int player, std::span<const T> w) {
    const T x = (space == ParamSpace::Logit) ? logistic(w[0]) : w[0];
    const T y = (space == ParamSpace::Logit) ? logistic(w[1]) : w[1];
    // same product feeds both losses, so the game is zero-sum to the last bit
    const T u = (2.0 * x - 1.0) * (2.0 * y - 1.0);
    return player == 0 ? -u : u;
}

// Expected normalized discounted loss of a one-memory repeated game.
// p1/p2 hold cooperation probabilities: index 0 initially, 1..4 after joint
// actions CC, CD, DC, DD. The discounted state occupancancy is
// (1-gamma) s0^T (I - gamma P)^{-1}, taken here through an exact LU solve so
// derivatives flow through the resolvent.
template <class T>
T discounted_loss(double gamma, const std::array<double, 4>& per_step, const T* p1,
                  const T* p2) {
    const T s0[4] = {p1[0] * p2[0], p1[0] * (1.0 - p2[0]), (1.0 - p1[0]) * p2[0],
                     (1.0 - p1[0]) * (1.0 - p2[0])};
    std::vector<T> A(16, T(0.0));
    std::vector<T> b(4, T(0.0));
    for (int s = 0; s < 4; ++s) {
        const T c1 = p1[1 + s];
        const T c2 = p2[1 + s];
        const T row[4] = {c1 * c2, c1 * (1.0 - c2), (1.0 - c1) * c2,
                          (1.0 - c1) * (1.0 - c2)};
        for (int t = 0; t < 4; ++t)
            A[s * 4 + t] = (s == t ? 1.0 : 0.0) - gamma * row[t];
        b[s] = T(per_step[s]);
    }
    const auto x = lu_solve(A, b);
    T acc = s0[0] * x[0];
    for (int s = 1; s < 4; ++s) acc += s0[s] * x[s];
    return (1.0 - gamma) * acc;
}

void validate_ipd(const IpdConfig& cfg) {
    if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0))
        throw std::invalid_argument("ipd: gamma must lie in (0, 1)");
    const auto& l = cfg.losses;
    // player B's column must mirror player A's under swapping the two roles
    if (l[0][1] != l[0][0] || l[3][1] != l[3][0] || l[1][1] != l[2][0] ||
        l[2][1] != l[1][0])
        throw std::invalid_argument("ipd: loss table is not role-symmetric");
}

} // namespace

Game matching_pennies(ParamSpace space) {
    return Game::make("matching_pennies", 1, 1, space,
                      [space](int p, auto w) { return mp_loss(space, p, w); });
}

Game ipd(const IpdConfig& cfg) {
    validate_ipd(cfg);
    return Game::make("ipd", 5, 5, ParamSpace::Logit, [cfg](int p, auto w) {
        using T = std::remove_cvref_t<decltype(w[0])>;
        T p1[5], p2[5];
        for (int i = 0; i < 5; ++i) {
            p1[i] = logistic(w[i]);
            p2[i] = logistic(w[5 + i]);
        }
        std::array<double, 4> per_step;
        for (int s = 0; s < 4; ++s) per_step[s] = cfg.losses[s][p];
        return discounted_loss(cfg.gamma, per_step, p1, p2);
    });
}

Game small_ipd(double gamma, double defect_response) {
    IpdConfig base;
    base.gamma = gamma;
    validate_ipd(base);
    if (!(defect_response >= 0.0 && defect_response <= 1.0))
        throw std::invalid_argument("small_ipd: defect_response must be a probability");
    const auto losses = base.losses;
    return Game::make("small_ipd", 1, 1, ParamSpace::Logit,
                      [gamma, defect_response, losses](int p, auto w) {
                          using T = std::remove_cvref_t<decltype(w[0])>;
                          const T u1 = logistic(w[0]);
                          const T u2 = logistic(w[1]);
                          const T e(defect_response);
                          // each player reacts to the opponent's previous move;
                          // the first move is played as if the opponent cooperated
                          const T p1[5] = {u1, u1, e, u1, e};
                          const T p2[5] = {u2, u2, u2, e, e};
                          std::array<double, 4> per_step;
                          for (int s = 0; s < 4; ++s) per_step[s] = losses[s][p];
                          return discounted_loss(gamma, per_step, p1, p2);
                      });
}

Game mixed_game(double tau) {
    if (!(tau >= 0.0 && tau <= 1.0))
        throw std::invalid_argument("mixed_game: tau must lie in [0, 1]");
    const Game s = small_ipd();
    const Game m = matching_pennies(ParamSpace::Logit);
    return Game::make("mixed", 1, 1, ParamSpace::Logit, [tau, s, m](int p, auto w) {
        return tau * s.loss(p, w) + (1.0 - tau) * m.loss(p, w);
    });
}

Game random_subspace(const Game& base, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t da = base.dim_a(), db = base.dim_b();
    Vec va(da), vb(db);
    for (auto& x : va) x = rng.uniform();
    for (auto& x : vb) x = rng.uniform();
    va = normalized(va);
    vb = normalized(vb);
    const Vec off = base.init_sample(rng);
    return Game::make("subspace_" + base.name(), 1, 1, base.space(),
                      [base, va, vb, off, da, db](int p, auto w) {
                          using T = std::remove_cvref_t<decltype(w[0])>;
                          std::vector<T> full(da + db);
                          for (std::size_t i = 0; i < da; ++i)
                              full[i] = off[i] + va[i] * w[0];
                          for (std::size_t j = 0; j < db; ++j)
                              full[da + j] = off[da + j] + vb[j] * w[1];
                          return base.loss(p, std::span<const T>(full));
                      });
}

StepOperator one_dim_map(double r, bool classic_logistic) {
    StepOperator op;
    op.alpha = 0.0;
    if (classic_logistic) {
        op.name = "logistic_map";
        op.step = [r](const Vec& w) { return Vec{r * w[0] * (1.0 - w[0])}; };
        op.jac = [r](const Vec& w) {
            Mat J(1, 1);
            J(0, 0) = r * (1.0 - 2.0 * w[0]);
            return J;
        };
    } else {
        op.name = "one_dim_map";
        op.step = [r](const Vec& w) { return Vec{w[0] + r + w[0] * w[0]}; };
        op.jac = [](const Vec& w) {
            Mat J(1, 1);
            J(0, 0) = 1.0 + 2.0 * w[0];
            return J;
        };
    }
    return op;
}

} // namespace ridgewalk
