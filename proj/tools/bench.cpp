// Serial reference vs OpenMP heatmap kernels on the two grid workloads the
// CLI actually runs. Checks bit equality before reporting timings, so a
// speedup never comes from a divergent code path.

#include <chrono>
#include <cstdio>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ridgewalk/games.hpp"
#include "ridgewalk/lyapunov.hpp"
#include "ridgewalk/optimizers.hpp"

namespace rw = ridgewalk;

namespace {

template <class F>
double time_of(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

bool identical(const rw::HeatmapResult& a, const rw::HeatmapResult& b) {
    if (a.exponent.size() != b.exponent.size()) return false;
    return std::memcmp(a.exponent.data(), b.exponent.data(),
                       a.exponent.size() * sizeof(double)) == 0 &&
           a.diverged == b.diverged;
}

void bench_case(const char* label, const rw::StepOperator& op, const rw::GridSpec& grid,
                int k) {
    rw::HeatmapResult serial, parallel;
    const double ts = time_of([&] { serial = rw::exponent_heatmap_serial(op, grid, k); });
    const double tp = time_of([&] { parallel = rw::exponent_heatmap(op, grid, k); });
    std::printf("%-28s %4zux%-4zu k=%-3d serial %8.3fs  parallel %8.3fs  x%.2f  %s\n",
                label, grid.n1, grid.n2, k, ts, tp, ts / tp,
                identical(serial, parallel) ? "bit-identical" : "MISMATCH");
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP max threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel path degenerates to serial\n");
#endif

    {
        const rw::Game game = rw::mixed_game(0.25);
        const rw::StepOperator op = rw::lola(game, 0.5, 1.0);
        rw::GridSpec grid{-4.0, 4.0, -4.0, 4.0, 41, 41};
        bench_case("mixed_game lola", op, grid, 10);
    }
    {
        const rw::Game game = rw::small_ipd();
        const rw::StepOperator op = rw::sim_sgd(game, 1.0);
        rw::GridSpec grid{-4.0, 4.0, -4.0, 4.0, 61, 61};
        bench_case("small_ipd sim_sgd", op, grid, 10);
    }
    return 0;
}
