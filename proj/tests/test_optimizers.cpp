#include <cmath>
#include <cstring>
#include <span>

#include <doctest.h>

#include "ridgewalk/autodiff.hpp"
#include "ridgewalk/games.hpp"
#include "ridgewalk/optimizers.hpp"
#include "ridgewalk/spectral.hpp"

using namespace ridgewalk;

namespace {

Game convex_bowl() {
    return Game::make("bowl", 1, 1, ParamSpace::Raw, [](int p, auto w) {
        const auto x = w[p];
        return x * x;
    });
}

double max_rel(const Mat& got, const Mat& want) {
    double worst = 0.0;
    for (std::size_t i = 0; i < got.rows(); ++i)
        for (std::size_t j = 0; j < got.cols(); ++j) {
            const double scale =
                std::max({std::abs(got(i, j)), std::abs(want(i, j)), 1.0});
            worst = std::max(worst, std::abs(got(i, j) - want(i, j)) / scale);
        }
    return worst;
}

} // namespace

TEST_SUITE("optimizers") {

TEST_CASE("sim_sgd takes the plain gradient step") {
    const Game g = matching_pennies(ParamSpace::Raw);
    const StepOperator op = sim_sgd(g, 0.1);
    const Vec w = {0.6, 0.7};
    const Vec gh = joint_grad(g, w);
    const Vec next = op.step(w);
    CHECK(next[0] == w[0] - 0.1 * gh[0]);
    CHECK(next[1] == w[1] - 0.1 * gh[1]);

    const Vec center = {0.5, 0.5};
    CHECK(op.step(center) == center);
}

TEST_CASE("analytic jacobians match finite differences") {
    const Game games[] = {matching_pennies(ParamSpace::Logit), ipd(), small_ipd(),
                          mixed_game(0.25)};
    Rng rng(8);
    for (const auto& g : games) {
        Vec w(g.dim());
        for (auto& x : w) x = rng.uniform(-1.0, 1.0);
        for (const auto& op :
             {sim_sgd(g, 0.3), lola(g, 0.3, 0.7), lola(g, 0.3, 0.7, true)}) {
            const Mat got = op.jac(w);
            const Mat fd = fd_jacobian([&](const Vec& x) { return op.step(x); }, w);
            CHECK(max_rel(got, fd) < 1e-4);
        }
    }
}

TEST_CASE("lola with zero shaping reproduces sim_sgd bitwise") {
    const Game g = ipd();
    const StepOperator a = sim_sgd(g, 0.8);
    const StepOperator b = lola(g, 0.8, 0.0);
    Rng rng(4);
    Vec w(g.dim());
    for (auto& x : w) x = rng.uniform(-2.0, 2.0);
    const Vec sa = a.step(w), sb = b.step(w);
    CHECK(std::memcmp(sa.data(), sb.data(), sa.size() * sizeof(double)) == 0);
    const Mat ja = a.jac(w), jb = b.jac(w);
    CHECK(ja.data() == jb.data());
}

TEST_CASE("lola on raw matching pennies is the exact linear map") {
    // gradients are linear in (u, v) = w - center, and the shaping term is too,
    // so the whole update collapses to [[1-16ae, 4a], [-4a, 1-16ae]]
    const double alpha = 0.1, eta = 0.5;
    const Game g = matching_pennies(ParamSpace::Raw);
    const StepOperator op = lola(g, alpha, eta);
    const double diag = 1.0 - 16.0 * alpha * eta, off = 4.0 * alpha;
    Rng rng(10);
    for (int t = 0; t < 10; ++t) {
        const double u = rng.uniform(-0.4, 0.4), v = rng.uniform(-0.4, 0.4);
        const Vec next = op.step({0.5 + u, 0.5 + v});
        CHECK(next[0] - 0.5 == doctest::Approx(diag * u + off * v).epsilon(1e-12));
        CHECK(next[1] - 0.5 == doctest::Approx(-off * u + diag * v).epsilon(1e-12));
    }
    // contraction modulus sqrt(diag^2 + off^2) ~ 0.447: rotation made stable
    const Mat j = op.jac({0.5, 0.5});
    CHECK(spectral_radius(j) ==
          doctest::Approx(std::sqrt(diag * diag + off * off)).epsilon(1e-6));
}

TEST_CASE("shaping stabilizes the logit matching pennies center") {
    const Game g = matching_pennies(ParamSpace::Logit);
    const Vec center = {0.0, 0.0};
    const double sgd = spectral_radius(sim_sgd(g, 0.5).jac(center));
    const double lol =
        spectral_radius(lola(g, 0.5, 1.0).jac(center));
    CHECK(sgd > 1.0);
    CHECK(lol < 1.0);
    CHECK(sgd == doctest::Approx(std::sqrt(1.0 + 0.25 / 16.0)).epsilon(1e-9));
}

TEST_CASE("run records iterates and flags divergence") {
    const StepOperator grow = one_dim_map(1.0);  // x + 1 + x^2 runs away fast
    const Trajectory t = run(grow, {2.0}, 100);
    CHECK(t.diverged);
    CHECK(t.iterates.size() < 101);
    // the guard drops the offending point, so the tail is the last sane iterate
    CHECK(norm2(t.iterates.back()) <= 1e6);
    CHECK(norm2(grow.step(t.iterates.back())) > 1e6);

    const Game g = convex_bowl();
    const Trajectory s = run(sim_sgd(g, 0.1), {0.9, -0.7}, 200);
    CHECK_FALSE(s.diverged);
    REQUIRE(s.iterates.size() == 201);
    CHECK(norm2(joint_grad(g, s.iterates.back())) < 1e-8);
}

TEST_CASE("full taylor variant changes the field when both terms differ") {
    const Game g = ipd();
    Rng rng(13);
    Vec w(g.dim());
    for (auto& x : w) x = rng.uniform(-1.0, 1.0);
    const Vec a = lola(g, 0.5, 1.0).step(w);
    const Vec b = lola(g, 0.5, 1.0, true).step(w);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) diff += std::abs(a[i] - b[i]);
    CHECK(diff > 1e-8);
}

} // TEST_SUITE

