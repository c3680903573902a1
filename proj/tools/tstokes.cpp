#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "tstokes/assembly.hpp"
#include "tstokes/io.hpp"
#include "tstokes/linalg.hpp"
#include "tstokes/mesh.hpp"
#include "tstokes/tresca.hpp"
#include "tstokes/verification.hpp"

namespace {

using namespace tstokes;

std::vector<int> parse_n_list(const std::string& text) {
    std::vector<int> ns;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        ns.push_back(std::stoi(tok));
    }
    if (ns.empty()) throw CLI::ValidationError("--n-list", "no mesh sizes given");
    return ns;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6e", v);
    return buf;
}

void print_report(const StudyReport& rep) {
    std::printf("%6s %12s %13s %13s %13s %7s %7s %7s %6s %9s\n", "n", "h", "e0", "e1",
                "ep", "a0", "a1", "ap", "iters", "seconds");
    for (const auto& row : rep.rows) {
        auto rate = [](double a) {
            if (std::isnan(a)) return std::string("-");
            char b[16];
            std::snprintf(b, sizeof(b), "%.3f", a);
            return std::string(b);
        };
        std::printf("%6d %12.5e %13.6e %13.6e %13.6e %7s %7s %7s %6d %9.2f\n", row.n,
                    row.h, row.e0, row.e1, row.ep, rate(row.alpha0).c_str(),
                    rate(row.alpha1).c_str(), rate(row.alphap).c_str(), row.iters,
                    row.seconds);
    }
    if (!rep.multiplier_gap.empty()) {
        std::printf("multiplier gap sqrt(h)*||lambda-lambda_ref||_{0,Gamma}:");
        for (double gap : rep.multiplier_gap) std::printf(" %s", fmt(gap).c_str());
        std::printf("\n");
    }
    if (rep.ref_n > 0)
        std::printf("reference: n=%d, %d iterations, %.2f s\n", rep.ref_n,
                    rep.ref_iterations, rep.ref_seconds);
}

struct SolveArgs {
    std::string case_name = "test1";
    int n = 64;
    double g = std::numeric_limits<double>::quiet_NaN();    // per-case default
    double r = 10.0;
    double rho = std::numeric_limits<double>::quiet_NaN();  // default: r
    double nu = 0.1;
    double tol = 1e-6;
    int max_iters = 1000;
    int strain_factor = 2;
    std::string out;
    bool legacy_u2 = false;
    bool dump_matrix = false;
};

int run_solve(const SolveArgs& a) {
    TrescaConfig cfg;
    cfg.nu = a.nu;
    cfg.r = a.r;
    cfg.rho = std::isnan(a.rho) ? a.r : a.rho;
    cfg.tol = a.tol;
    cfg.max_iters = a.max_iters;
    cfg.strain_factor = a.strain_factor;

    Mesh mesh;
    ManufacturedCase mc;
    bool have_exact = false;
    if (a.case_name == "test1" || a.case_name == "noslip") {
        mc = test1_case(a.strain_factor, a.legacy_u2);
        mc.nu = a.nu;
        have_exact = true;
        const bool friction = (a.case_name == "test1");
        BoundarySpec spec = friction ? mc.boundary
                                     : BoundarySpec{BoundaryLabel::Gamma0,
                                                    BoundaryLabel::Gamma0,
                                                    BoundaryLabel::Gamma0,
                                                    BoundaryLabel::Gamma0};
        mesh = tag_boundary(structured_rect_mesh(a.n, a.n, mc.lx, mc.ly), spec);
        const double g = std::isnan(a.g) ? 40.0 : a.g;
        cfg.g = [g](Vec2) { return g; };
        cfg.body_force = mc.body_force;
        cfg.dirichlet = mc.velocity;
    } else {
        FrictionCase fc = test2_case();
        mesh = tag_boundary(structured_rect_mesh(a.n, a.n, fc.lx, fc.ly), fc.boundary);
        const double g = std::isnan(a.g) ? fc.g : a.g;
        cfg.g = [g](Vec2) { return g; };
        cfg.dirichlet = fc.dirichlet;
    }

    const Alg2Result res = alg2_solve(mesh, cfg);
    const Eigen::VectorXd div = weak_divergence(mesh, res.dofmap, res.fields.velocity);
    const double unorm = res.fields.velocity.norm();

    std::printf("case=%s n=%d h=%.5e dofs=%d backend=%s\n", a.case_name.c_str(), a.n,
                mesh.h, res.dofmap.n_system(), Factorization::backend());
    std::printf("iterations=%d converged=%s residual=%.3e |Bu|/|u|=%.3e mean_p=%.3e\n",
                res.iterations, res.converged ? "yes" : "no", res.system_residual,
                unorm > 0 ? div.norm() / unorm : 0.0,
                integrate_pressure(mesh, res.fields.pressure));
    if (have_exact) {
        const ErrorNorms err = error_norms(mesh, res.dofmap, res.fields, mc);
        std::printf("errors: e0=%s e1=%s ep=%s\n", fmt(err.e0).c_str(),
                    fmt(err.e1).c_str(), fmt(err.ep).c_str());
    }
    if (res.dofmap.n_multipliers() > 0) {
        const Eigen::VectorXd ut =
            tangential_values(mesh, res.dofmap, res.fields.velocity);
        const int slipping = static_cast<int>(
            (res.fields.slip.array().abs() > 0.0).count());
        std::printf("gamma dofs=%d slipping=%d max|u_t|=%s max|lambda|=%s\n",
                    res.dofmap.n_multipliers(), slipping,
                    fmt(ut.cwiseAbs().maxCoeff()).c_str(),
                    fmt(res.fields.multiplier.cwiseAbs().maxCoeff()).c_str());
    }

    if (!a.out.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(a.out);
        const fs::path dir(a.out);
        write_solution_vtk(mesh, res.dofmap, res.fields, (dir / "solution.vtk").string());
        write_mesh_vtk(mesh, (dir / "mesh.vtk").string());
        write_iteration_trace_csv(res.history, (dir / "trace.csv").string());
        if (res.dofmap.n_multipliers() > 0)
            write_boundary_profile_csv(mesh, res.dofmap, res.fields,
                                       (dir / "profile.csv").string());
        if (a.dump_matrix) {
            SystemOptions opts;
            opts.nu = cfg.nu;
            opts.r = cfg.r;
            opts.strain_factor = cfg.strain_factor;
            const SparseSystem sys =
                assemble_system(mesh, res.dofmap, opts, cfg.body_force);
            write_matrix_market(sys.matrix, (dir / "system.mtx").string());
        }
        std::printf("wrote %s\n", dir.string().c_str());
    }

    if (!res.converged) {
        std::fprintf(stderr, "error: solve did not converge in %d iterations\n",
                     a.max_iters);
        return 1;
    }
    return 0;
}

struct StudyArgs {
    std::string case_name = "test1";
    std::string n_list = "16,32,64,128";
    int ref_n = 512;
    std::string csv;
    double g = 0.015;
    double r = 10.0;
    double rho = std::numeric_limits<double>::quiet_NaN();
    double tol = 1e-6;
    int max_iters = 1000;
    int strain_factor = 2;
};

int run_study(const StudyArgs& a) {
    const std::vector<int> ns = parse_n_list(a.n_list);
    StudyReport rep;
    if (a.case_name == "test1") {
        rep = run_test1_study(ns, a.strain_factor);
    } else {
        StudyConfig cfg;
        cfg.g = a.g;
        cfg.r = a.r;
        cfg.rho = std::isnan(a.rho) ? a.r : a.rho;
        cfg.tol = a.tol;
        cfg.max_iters = a.max_iters;
        cfg.strain_factor = a.strain_factor;
        cfg.ref_n = a.ref_n;
        rep = run_test2_study(ns, cfg);
    }
    print_report(rep);
    if (!a.csv.empty()) {
        write_report_csv(rep, a.csv);
        std::printf("wrote %s\n", a.csv.c_str());
    }
    for (const auto& row : rep.rows)
        if (!row.converged) {
            std::fprintf(stderr, "error: n=%d did not converge\n", row.n);
            return 1;
        }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stokes flow with a slip-threshold boundary condition"};
    app.require_subcommand(1);

    SolveArgs sa;
    CLI::App* solve = app.add_subcommand("solve", "run one solve");
    solve->add_option("--case", sa.case_name, "test1, test2, or noslip")
        ->check(CLI::IsMember({"test1", "test2", "noslip"}));
    solve->add_option("--n", sa.n, "cells per side")->check(CLI::PositiveNumber);
    solve->add_option("--g", sa.g, "slip threshold (default: 40 test1, 0.015 test2)");
    solve->add_option("--r", sa.r, "augmentation weight");
    solve->add_option("--rho", sa.rho, "multiplier step (default: r)");
    solve->add_option("--nu", sa.nu, "viscosity");
    solve->add_option("--tol", sa.tol, "relative stopping tolerance");
    solve->add_option("--max-iters", sa.max_iters, "iteration cap");
    solve->add_option("--strain-factor", sa.strain_factor, "1 or 2")
        ->check(CLI::IsMember({1, 2}));
    solve->add_option("--out", sa.out, "output directory for VTK/CSV files");
    solve->add_flag("--legacy-u2", sa.legacy_u2, "legacy vortex u2 variant");
    solve->add_flag("--dump-matrix", sa.dump_matrix, "write system.mtx (needs --out)");
    solve->set_config("--config", "", "flat key=value defaults file");

    StudyArgs ta;
    CLI::App* study = app.add_subcommand("study", "run a convergence study");
    study->add_option("--case", ta.case_name, "test1 or test2")
        ->check(CLI::IsMember({"test1", "test2"}));
    study->add_option("--n-list", ta.n_list, "comma-separated cells per side");
    study->add_option("--ref-n", ta.ref_n, "reference mesh for test2")
        ->check(CLI::PositiveNumber);
    study->add_option("--csv", ta.csv, "write the report table to this path");
    study->add_option("--g", ta.g, "slip threshold (test2)");
    study->add_option("--r", ta.r, "augmentation weight");
    study->add_option("--rho", ta.rho, "multiplier step (default: r)");
    study->add_option("--tol", ta.tol, "relative stopping tolerance");
    study->add_option("--max-iters", ta.max_iters, "iteration cap");
    study->add_option("--strain-factor", ta.strain_factor, "1 or 2")
        ->check(CLI::IsMember({1, 2}));
    study->set_config("--config", "", "flat key=value defaults file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve(sa);
        if (study->parsed()) return run_study(ta);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
