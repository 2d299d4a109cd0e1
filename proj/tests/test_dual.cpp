#include <cmath>

#include <doctest.h>

#include "ridgewalk/dual.hpp"
#include "ridgewalk/rng.hpp"

using namespace ridgewalk;

namespace {

// scalar test function with a hand derivative: f = x * exp(x) + 3 / (x + 2)
template <class T>
T f_mixed(T x) {
    return x * exp(x) + T(3.0) / (x + 2.0);
}

double f_mixed_prime(double x) {
    return std::exp(x) * (1.0 + x) - 3.0 / ((x + 2.0) * (x + 2.0));
}

} // namespace

TEST_SUITE("dual") {

TEST_CASE("first derivative matches the hand formula") {
    Rng rng(11);
    for (int i = 0; i < 25; ++i) {
        const double x = rng.uniform(-1.5, 1.5);
        const D1 y = f_mixed(D1{x, 1.0});
        CHECK(y.v == doctest::Approx(f_mixed(x)).epsilon(1e-14));
        CHECK(y.d == doctest::Approx(f_mixed_prime(x)).epsilon(1e-12));
    }
}

TEST_CASE("first derivative matches central differences") {
    Rng rng(7);
    const double h = 1e-6;
    for (int i = 0; i < 25; ++i) {
        const double x = rng.uniform(-1.0, 1.0);
        const double fd = (f_mixed(x + h) - f_mixed(x - h)) / (2 * h);
        const D1 y = f_mixed(D1{x, 1.0});
        CHECK(y.d == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("nested duals produce second derivatives") {
    // f = x^3: f'' = 6x
    for (const double x : {-0.7, 0.0, 0.4, 2.0}) {
        D2 xx;
        xx.v = D1{x, 1.0};  // inner seed
        xx.d = D1{1.0, 0.0};  // outer seed
        const D2 y = xx * xx * xx;
        CHECK(y.v.v == doctest::Approx(x * x * x));
        CHECK(y.v.d == doctest::Approx(3 * x * x));
        CHECK(y.d.v == doctest::Approx(3 * x * x));
        CHECK(y.d.d == doctest::Approx(6 * x));
    }
}

TEST_CASE("division and subtraction round-trip") {
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const double a = rng.uniform(0.5, 2.0), b = rng.uniform(0.5, 2.0);
        const D1 x{a, 1.0};
        const D1 y = (x * b) / x;  // == b, derivative 0
        CHECK(y.v == doctest::Approx(b).epsilon(1e-14));
        CHECK(y.d == doctest::Approx(0.0).epsilon(1e-13));
    }
}

TEST_CASE("logistic saturates without overflow") {
    CHECK(logistic(1000.0) == doctest::Approx(1.0));
    CHECK(logistic(-1000.0) == doctest::Approx(0.0));
    CHECK(std::isfinite(logistic(750.0)));
    const D1 y = logistic(D1{1000.0, 1.0});
    CHECK(std::isfinite(y.v));
    CHECK(std::isfinite(y.d));
    CHECK(y.d == doctest::Approx(0.0));
}

TEST_CASE("logistic derivative is s(1-s)") {
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const double x = rng.uniform(-4.0, 4.0);
        const D1 y = logistic(D1{x, 1.0});
        const double s = logistic(x);
        CHECK(y.d == doctest::Approx(s * (1 - s)).epsilon(1e-13));
    }
}

TEST_CASE("log and exp are inverse on duals") {
    const D1 x{1.7, 1.0};
    const D1 y = log(exp(x));
    CHECK(y.v == doctest::Approx(1.7));
    CHECK(y.d == doctest::Approx(1.0));
}

} // TEST_SUITE

