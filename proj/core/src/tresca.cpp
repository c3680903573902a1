#include "tstokes/tresca.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tstokes/assembly.hpp"
#include "tstokes/linalg.hpp"

namespace tstokes {

void TrescaConfig::validate() const {
    if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
    if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
    if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
    if (strain_factor != 1 && strain_factor != 2)
        throw std::invalid_argument("strain_factor must be 1 or 2");
}

double slip_projection(double xi, double g, double r) {
    const double mag = std::abs(xi);
    if (mag <= g) return 0.0;
    return (xi > 0.0 ? 1.0 : -1.0) * (mag - g) / r;
}

Eigen::VectorXd slip_projection(const Eigen::VectorXd& xi, const Eigen::VectorXd& g,
                                double r) {
    if (xi.size() != g.size())
        throw std::invalid_argument("slip projection needs matching xi and g sizes");
    Eigen::VectorXd out(xi.size());
    for (Eigen::Index i = 0; i < xi.size(); ++i) out[i] = slip_projection(xi[i], g[i], r);
    return out;
}

Eigen::VectorXd multiplier_update(const Eigen::VectorXd& lambda, const Eigen::VectorXd& ut,
                                  const Eigen::VectorXd& slip, double rho) {
    return lambda + rho * (ut - slip);
}

double relative_change(const Eigen::VectorXd& u, const Eigen::VectorXd& s,
                       const Eigen::VectorXd& u_prev, const Eigen::VectorXd& s_prev) {
    const double num =
        std::sqrt((u - u_prev).squaredNorm() + (s - s_prev).squaredNorm());
    const double den = std::sqrt(u.squaredNorm() + s.squaredNorm());
    if (den == 0.0)
        return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

Alg2Result alg2_solve(const Mesh& mesh, const TrescaConfig& cfg) {
    cfg.validate();

    Alg2Result res;
    res.dofmap = build_dofmap(mesh, cfg.dirichlet);
    const DofMap& dm = res.dofmap;

    SystemOptions opts;
    opts.nu = cfg.nu;
    opts.r = cfg.r;
    opts.strain_factor = cfg.strain_factor;
    SparseSystem sys = assemble_system(mesh, dm, opts, cfg.body_force);
    const SaddleSolver solver(sys);

    const int nm = dm.n_multipliers();
    const int nfree = dm.n_free_velocity;

    if (nm == 0) {
        Eigen::VectorXd x = solver.solve(sys.rhs);
        res.system_residual = solver.last_residual();
        res.fields.velocity = expand_velocity(dm, x.head(nfree));
        res.fields.pressure = x.segment(nfree, dm.n_pressure);
        res.fields.multiplier.resize(0);
        res.fields.slip.resize(0);
        res.iterations = 1;
        res.converged = true;
        return res;
    }

    if (!cfg.g) throw std::invalid_argument("slip threshold g is required on Gamma");
    Eigen::VectorXd g(nm);
    for (int m = 0; m < nm; ++m) {
        const double gv = cfg.g(mesh.vertices[dm.multiplier_vertex[m]]);
        if (!std::isfinite(gv) || gv < 0.0)
            throw std::domain_error("slip threshold must be finite and nonnegative");
        g[m] = gv;
    }

    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(nm);
    Eigen::VectorXd slip = Eigen::VectorXd::Zero(nm);
    Eigen::VectorXd u_prev = Eigen::VectorXd::Zero(dm.n_velocity);
    Eigen::VectorXd slip_prev = slip;
    Eigen::VectorXd x;

    for (int k = 1; k <= cfg.max_iters; ++k) {
        const Eigen::VectorXd rhs =
            sys.rhs + assemble_boundary_load(mesh, dm, cfg.r * slip - lambda);
        x = solver.solve(rhs);
        res.system_residual = solver.last_residual();
        Eigen::VectorXd u = expand_velocity(dm, x.head(nfree));
        Eigen::VectorXd ut = tangential_values(mesh, dm, u);

        slip = slip_projection(lambda + cfg.r * ut, g, cfg.r);
        lambda = multiplier_update(lambda, ut, slip, cfg.rho);

        IterationRecord rec;
        rec.k = k;
        rec.rel_change = relative_change(u, slip, u_prev, slip_prev);
        rec.max_slip_mismatch = (ut - slip).cwiseAbs().maxCoeff();
        rec.complementarity =
            (lambda.cwiseProduct(ut) - g.cwiseProduct(ut.cwiseAbs())).cwiseAbs().maxCoeff();
        res.history.push_back(rec);

        res.iterations = k;
        if (rec.rel_change < cfg.tol) {
            res.converged = true;
            res.fields.velocity = std::move(u);
            res.fields.pressure = x.segment(nfree, dm.n_pressure);
            res.fields.multiplier = lambda;
            res.fields.slip = slip;
            return res;
        }
        u_prev = std::move(u);
        slip_prev = slip;
    }

    res.converged = false;
    res.fields.velocity = u_prev;
    res.fields.pressure = x.segment(nfree, dm.n_pressure);
    res.fields.multiplier = lambda;
    res.fields.slip = slip;
    return res;
}

}  // namespace tstokes
