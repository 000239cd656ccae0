// Timing comparison of the OpenMP grid kernels against their serial
// reference paths. Prints one row per kernel with the speedup.

#include "deco/bounds.hpp"
#include "deco/decoherence.hpp"
#include "deco/kernels.hpp"
#include "deco/oracle.hpp"
#include "deco/parallel.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

using namespace deco;

namespace {

double now() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <class F>
double time_best_of(int reps, F&& body) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        double t0 = now();
        body();
        best = std::min(best, now() - t0);
    }
    return best;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-28s %10.3f ms %10.3f ms %8.2fx\n", name, serial * 1e3, parallel * 1e3,
                serial / parallel);
}

} // namespace

int main() {
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");
    std::printf("threads available: %d\n", max_threads());

    {
        auto m = spectral_measure::power_law(0.05, 0.5, 1.0);
        auto ref = reference_state::coherent({0.3, 0.1});
        auto times = linspace(0.0, 200.0, 400);
        double ts = time_best_of(3, [&] { curve_serial(m, 1.0, 0.0, ref, times); });
        double tp = time_best_of(3, [&] { curve(m, 1.0, 0.0, ref, times); });
        row("curve (power-law, 400 pts)", ts, tp);
    }
    {
        Eigen::VectorXd lam(3);
        lam << 0.0, 0.5, 1.0;
        auto model = truncated_model::velocity(lam, {{1.0, 0.25}, {2.1, 0.2}}, 14);
        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Constant(3, 3, cplx(1.0 / 3.0, 0.0));
        auto times = linspace(0.0, 30.0, 200);
        auto vac = reference_state::vacuum();
        double ts =
            time_best_of(3, [&] { evolve_reduced_serial(model, rho0, vac, times); });
        double tp = time_best_of(3, [&] { evolve_reduced(model, rho0, vac, times); });
        row("evolve_reduced (2 modes)", ts, tp);
    }
    {
        std::mt19937_64 rng(99);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        int d = 24;
        sector_spec spec;
        spec.delta1 = {0.0, 0.4};
        spec.delta2 = {0.6, 1.0};
        spec.f_eigenvalues.resize(d);
        spec.hs_eigenvalues.resize(d);
        for (int i = 0; i < d; ++i) {
            spec.f_eigenvalues(i) = unif(rng);
            spec.hs_eigenvalues(i) = gauss(rng);
        }
        Eigen::MatrixXcd a(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) a(i, j) = cplx(gauss(rng), gauss(rng));
        a /= operator_norm(a);
        auto m = spectral_measure::discrete({{1.0, 0.1}, {2.2, 0.08}});
        vanhove_kernel kernel(m, reference_state::vacuum());
        auto times = linspace(0.0, 40.0, 300);
        double ts = time_best_of(3, [&] { verify_bound_serial(a, spec, kernel, times); });
        double tp = time_best_of(3, [&] { verify_bound(a, spec, kernel, times); });
        row("verify_bound (d=24, 300 pts)", ts, tp);
    }
    return 0;
}
