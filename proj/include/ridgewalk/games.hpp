#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "ridgewalk/dual.hpp"
#include "ridgewalk/linalg.hpp"
#include "ridgewalk/operator.hpp"
#include "ridgewalk/rng.hpp"

namespace ridgewalk {

enum class ParamSpace { Logit, Raw };

// Concatenated player parameter vectors; player A owns [0, split).
struct JointParams {
    Vec values;
    std::size_t split = 0;
};

// A two-player differentiable game: per-player losses over the joint
// parameter vector, evaluable on plain doubles and on (nested) duals so the
// derivative operators can run the same code path.
class Game {
public:
    Game() = default;

    template <class F>
    static Game make(std::string name, std::size_t dim_a, std::size_t dim_b,
                     ParamSpace space, F body) {
        Game g;
        g.name_ = std::move(name);
        g.da_ = dim_a;
        g.db_ = dim_b;
        g.space_ = space;
        g.f0_ = [body](int p, std::span<const double> w) { return body(p, w); };
        g.f1_ = [body](int p, std::span<const D1> w) { return body(p, w); };
        g.f2_ = [body](int p, std::span<const D2> w) { return body(p, w); };
        return g;
    }

    const std::string& name() const { return name_; }
    std::size_t dim_a() const { return da_; }
    std::size_t dim_b() const { return db_; }
    std::size_t dim() const { return da_ + db_; }
    ParamSpace space() const { return space_; }

    double loss(int player, std::span<const double> w) const { return f0_(player, w); }
    D1 loss(int player, std::span<const D1> w) const { return f1_(player, w); }
    D2 loss(int player, std::span<const D2> w) const { return f2_(player, w); }

    // standard initializer: unit normal logits, or a box for raw strategies
    Vec init_sample(Rng& rng) const {
        Vec w(dim());
        for (auto& x : w)
            x = (space_ == ParamSpace::Logit) ? rng.normal() : rng.uniform(0.2, 0.8);
        return w;
    }

    // parameters mapped to strategy probabilities (identity for raw games)
    Vec strategy(const Vec& w) const {
        Vec s(w);
        if (space_ == ParamSpace::Logit)
            for (auto& x : s) x = logistic(x);
        return s;
    }

private:
    std::string name_;
    std::size_t da_ = 0, db_ = 0;
    ParamSpace space_ = ParamSpace::Logit;
    std::function<double(int, std::span<const double>)> f0_;
    std::function<D1(int, std::span<const D1>)> f1_;
    std::function<D2(int, std::span<const D2>)> f2_;
};

struct IpdConfig {
    double gamma = 0.96;
    // per-step losses over joint actions (rows CC, CD, DC, DD; one column per
    // player): cooperating against cooperation costs 1, mutual defection 2,
    // being exploited 3, exploiting 0
    std::array<std::array<double, 2>, 4> losses = {{{1, 1}, {3, 0}, {0, 3}, {2, 2}}};
};

// L_A = -(2x-1)(2y-1), L_B = +(2x-1)(2y-1); x, y are strategies, reached
// through a sigmoid in Logit space or taken verbatim in Raw space.
Game matching_pennies(ParamSpace space = ParamSpace::Logit);

// Infinite iterated prisoner's dilemma with one memory step: five logits per
// player (initial cooperation plus one per preceding joint action), losses
// are normalized discounted sums through the exact resolvent.
Game ipd(const IpdConfig& cfg = {});

// One logit per player: probability of cooperating after the opponent
// cooperated. The response to defection is pinned at defect_response, and the
// first move treats the opponent as having cooperated.
Game small_ipd(double gamma = 0.96, double defect_response = 0.01);

// tau * small_ipd + (1 - tau) * logit matching pennies on shared parameters
Game mixed_game(double tau = 0.25);

// Base game restricted to a random 1+1-dimensional affine subspace: one
// direction per player (entrywise U[0,1], normalized) anchored at an offset
// drawn from the base game's initializer.
Game random_subspace(const Game& base, std::uint64_t seed);

// F(x) = x + r + x^2, the one-parameter map whose fixed points collide and
// vanish as r crosses zero. classic_logistic swaps in r*x*(1-x) for oracle
// comparisons against the known chaotic exponent.
StepOperator one_dim_map(double r, bool classic_logistic = false);

} // namespace ridgewalk
