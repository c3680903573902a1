#include <benchmark/benchmark.h>

#include <random>

#include "tstokes/assembly.hpp"
#include "tstokes/linalg.hpp"
#include "tstokes/mesh.hpp"
#include "tstokes/spaces.hpp"
#include "tstokes/tresca.hpp"
#include "tstokes/verification.hpp"

using namespace tstokes;

namespace {

struct Problem {
    Mesh mesh;
    DofMap dofmap;
    SystemOptions opts;
    ManufacturedCase mc;
};

Problem make_problem(int n, bool slip_walls) {
    Problem p;
    p.mc = test1_case(2);
    p.mesh = tag_boundary(structured_rect_mesh(n, n, p.mc.lx, p.mc.ly),
                          slip_walls ? p.mc.boundary : BoundarySpec{});
    p.dofmap = build_dofmap(p.mesh, p.mc.velocity);
    p.opts.nu = p.mc.nu;
    p.opts.strain_factor = p.mc.strain_factor;
    return p;
}

}  // namespace

static void BM_element_stiffness(benchmark::State& state) {
    const Problem p = make_problem(16, false);
    int t = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(element_stiffness(p.mesh, t, p.opts.nu, 2));
        t = (t + 1) % p.mesh.n_triangles();
    }
}
BENCHMARK(BM_element_stiffness);

static void BM_assemble_system(benchmark::State& state) {
    const Problem p = make_problem(static_cast<int>(state.range(0)), false);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            assemble_system(p.mesh, p.dofmap, p.opts, p.mc.body_force));
}
BENCHMARK(BM_assemble_system)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_saddle_factorize(benchmark::State& state) {
    const Problem p = make_problem(static_cast<int>(state.range(0)), false);
    const SparseSystem sys = assemble_system(p.mesh, p.dofmap, p.opts, p.mc.body_force);
    for (auto _ : state) {
        SaddleSolver solver(sys);
        benchmark::DoNotOptimize(solver);
    }
}
BENCHMARK(BM_saddle_factorize)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_saddle_solve(benchmark::State& state) {
    const Problem p = make_problem(static_cast<int>(state.range(0)), false);
    const SparseSystem sys = assemble_system(p.mesh, p.dofmap, p.opts, p.mc.body_force);
    const SaddleSolver solver(sys);
    for (auto _ : state) benchmark::DoNotOptimize(solver.solve(sys.rhs));
}
BENCHMARK(BM_saddle_solve)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_boundary_load(benchmark::State& state) {
    const Problem p = make_problem(64, true);
    const Eigen::VectorXd xi = Eigen::VectorXd::Random(p.dofmap.n_multipliers());
    for (auto _ : state)
        benchmark::DoNotOptimize(assemble_boundary_load(p.mesh, p.dofmap, xi));
}
BENCHMARK(BM_boundary_load);

static void BM_slip_projection(benchmark::State& state) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    const int n = 100000;
    Eigen::VectorXd xi(n), g(n);
    for (int i = 0; i < n; ++i) {
        xi[i] = coef(rng);
        g[i] = std::abs(coef(rng));
    }
    for (auto _ : state) benchmark::DoNotOptimize(slip_projection(xi, g, 10.0));
}
BENCHMARK(BM_slip_projection);

static void BM_friction_solve(benchmark::State& state) {
    const ManufacturedCase mc = test1_case(2);
    const Mesh mesh = tag_boundary(structured_rect_mesh(16, 16, mc.lx, mc.ly),
                                   mc.boundary);
    TrescaConfig cfg;
    cfg.nu = mc.nu;
    cfg.g = [](Vec2) { return 40.0; };
    cfg.dirichlet = mc.velocity;
    cfg.body_force = mc.body_force;
    for (auto _ : state) benchmark::DoNotOptimize(alg2_solve(mesh, cfg));
}
BENCHMARK(BM_friction_solve)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
