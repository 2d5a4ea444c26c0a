// Microbenchmarks for the numerical hot spots: the nonuniform DFT (direct
// summation vs Gaussian gridding), Helmholtz assembly/factorization, the
// per-right-hand-side solve, and the trace DFT.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "difftomo/fdt.hpp"
#include "difftomo/helmholtz.hpp"
#include "difftomo/ndft.hpp"
#include "difftomo/special.hpp"

namespace
{
    using namespace dt;

    struct NdftProblem
    {
        ComplexField f;
        std::vector<point2> points;
        std::vector<cplx> values;
    };

    NdftProblem make_ndft_problem(int n, int m)
    {
        const Grid g = make_grid(1.0, n);
        NdftProblem p{ComplexField(g), {}, {}};
        std::mt19937_64 rng(42);
        std::normal_distribution<double> nd;
        for (cplx& v : p.f.values) v = cplx{nd(rng), nd(rng)};
        const double kmax = 0.9 * M_PI / g.spacing();
        std::uniform_real_distribution<double> ud(-kmax, kmax);
        p.points.resize(m);
        for (auto& q : p.points) q = {ud(rng), ud(rng)};
        p.values.resize(m);
        for (cplx& v : p.values) v = cplx{nd(rng), nd(rng)};
        return p;
    }

    void bm_ndft_forward(benchmark::State& state, NdftMethod method)
    {
        const auto p = make_ndft_problem(int(state.range(0)),
                                         int(state.range(1)));
        for (auto _ : state)
            benchmark::DoNotOptimize(ndft_forward(p.f, p.points, method));
        state.SetItemsProcessed(state.iterations() * p.points.size());
    }

    void bm_ndft_adjoint(benchmark::State& state, NdftMethod method)
    {
        const auto p = make_ndft_problem(int(state.range(0)),
                                         int(state.range(1)));
        for (auto _ : state)
            benchmark::DoNotOptimize(
                ndft_adjoint(p.values, p.points, p.f.grid, method));
        state.SetItemsProcessed(state.iterations() * p.points.size());
    }

    void bm_helmholtz_assemble_factorize(benchmark::State& state)
    {
        const Grid g = make_grid(4.0, int(state.range(0)));
        const Eigen::VectorXcd rhs =
            rhs_for(SourceSpec::point_at({0.0, 0.0}), g);
        for (auto _ : state)
        {
            MediumOperator op = assemble_homogeneous(g, 2.0 * M_PI);
            benchmark::DoNotOptimize(op.solve(rhs));  // triggers the LU
        }
    }

    void bm_helmholtz_solve_per_rhs(benchmark::State& state)
    {
        const Grid g = make_grid(4.0, int(state.range(0)));
        MediumOperator op = assemble_homogeneous(g, 2.0 * M_PI);
        const Eigen::VectorXcd rhs =
            rhs_for(SourceSpec::point_at({0.0, 0.0}), g);
        benchmark::DoNotOptimize(op.solve(rhs));  // factorize once, outside
        for (auto _ : state)
            benchmark::DoNotOptimize(op.solve(rhs));
    }

    void bm_trace_dft(benchmark::State& state)
    {
        Trace tr;
        tr.receiver_x = uniform_receivers(8.0, int(state.range(0)));
        tr.height = 6.0;
        tr.values.resize(tr.receiver_x.size());
        for (std::size_t j = 0; j < tr.values.size(); ++j)
            tr.values[j] = std::exp(cplx{0.0, 0.1 * double(j)});
        for (auto _ : state)
            benchmark::DoNotOptimize(trace_dft(tr, 8.0));
        state.SetItemsProcessed(state.iterations() * tr.values.size());
    }

    void bm_bessel_j0(benchmark::State& state)
    {
        double x = 0.1;
        for (auto _ : state)
        {
            benchmark::DoNotOptimize(bessel_j0(x));
            x = x < 100.0 ? x + 0.37 : 0.1;
        }
    }
}

BENCHMARK_CAPTURE(bm_ndft_forward, direct, NdftMethod::direct)
    ->Args({64, 2000})->Args({128, 8000})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_ndft_forward, gridding, NdftMethod::gridding)
    ->Args({64, 2000})->Args({128, 8000})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_ndft_adjoint, direct, NdftMethod::direct)
    ->Args({64, 2000})->Args({128, 8000})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_ndft_adjoint, gridding, NdftMethod::gridding)
    ->Args({64, 2000})->Args({128, 8000})->Unit(benchmark::kMillisecond);
BENCHMARK(bm_helmholtz_assemble_factorize)
    ->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_helmholtz_solve_per_rhs)
    ->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_trace_dft)->Arg(200)->Arg(2000);
BENCHMARK(bm_bessel_j0);

BENCHMARK_MAIN();
