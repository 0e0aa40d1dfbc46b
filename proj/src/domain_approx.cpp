#include "helmholtz/domain_approx.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include <Eigen/SparseCholesky>

namespace helmholtz {

namespace {

double sphere_measure(int N) {
    // |S^{N-1}| = 2 pi^{N/2} / Gamma(N/2)
    return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

double shell(const RadialMesh& mesh, double a, double b) {
    return mesh.omega / mesh.N * (std::pow(b, mesh.N) - std::pow(a, mesh.N));
}

Eigen::VectorXd nodal_g(const NonlinearitySpec& spec, const Eigen::VectorXd& u) {
    return u.unaryExpr([&](double z) { return eval_g(spec, 0.0, z); });
}

// Edge conductances a_{i+1/2}; the last one couples node m-1 to the Dirichlet node.
Eigen::VectorXd conductances(const RadialMesh& mesh) {
    Eigen::VectorXd a(mesh.m);
    for (int i = 0; i < mesh.m; ++i) a(i) = mesh.omega * std::pow((i + 0.5) * mesh.h, mesh.N - 1) / mesh.h;
    return a;
}

// <S x, y> summed over edge differences, free of the cancellation in x.dot(S * y).
double stiffness_form(const Eigen::VectorXd& a, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const Eigen::Index m = x.size();
    double acc = a(m - 1) * x(m - 1) * y(m - 1);
    for (Eigen::Index i = 0; i + 1 < m; ++i) acc += a(i) * (x(i + 1) - x(i)) * (y(i + 1) - y(i));
    return acc;
}

// I(u + d) - I(u) with G increments by Simpson's rule on g.
double energy_change(const RadialMesh& mesh, const Eigen::VectorXd& a, const NonlinearitySpec& spec,
                     const Eigen::VectorXd& u, const Eigen::VectorXd& d) {
    double pot = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (d(i) == 0.0) continue;
        const double z = u(i);
        const double inc = d(i) / 6.0 *
                           (eval_g(spec, 0.0, z) + 4.0 * eval_g(spec, 0.0, z + 0.5 * d(i)) + eval_g(spec, 0.0, z + d(i)));
        pot += mesh.weights(i) * inc;
    }
    return stiffness_form(a, u, d) + 0.5 * stiffness_form(a, d, d) - pot;
}

double lq_norm(const RadialMesh& mesh, const Eigen::VectorXd& u, double q) {
    return std::pow((mesh.weights.array() * u.array().abs().pow(q)).sum(), 1.0 / q);
}

}  // namespace

double ball_volume(int N, double R) { return sphere_measure(N) * std::pow(R, N) / N; }

RadialMesh assemble(int N, double R, int m) {
    if (N < 1) throw InvalidConfig("mesh: N must be positive");
    if (!(R > 0.0) || !std::isfinite(R)) throw InvalidConfig("mesh: R must be positive");
    if (m < 64) throw InvalidConfig("mesh: need m >= 64");

    RadialMesh mesh;
    mesh.N = N;
    mesh.R = R;
    mesh.m = m;
    mesh.h = R / m;
    mesh.omega = sphere_measure(N);
    const double h = mesh.h;

    mesh.nodes = Eigen::VectorXd::LinSpaced(m, 0.0, h * (m - 1));
    mesh.weights.resize(m);
    mesh.weights(0) = shell(mesh, 0.0, 0.5 * h);
    for (int i = 1; i < m; ++i) mesh.weights(i) = shell(mesh, (i - 0.5) * h, (i + 0.5) * h);
    mesh.boundary_weight = shell(mesh, R - 0.5 * h, R);

    // Edge conductances omega r_{i+1/2}^{N-1} / h between nodes i and i+1.
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(3 * m));
    for (int i = 0; i < m; ++i) {
        const double a = mesh.omega * std::pow((i + 0.5) * h, N - 1) / h;
        trip.emplace_back(i, i, a);
        if (i + 1 < m) {
            trip.emplace_back(i + 1, i + 1, a);
            trip.emplace_back(i, i + 1, -a);
            trip.emplace_back(i + 1, i, -a);
        }
    }
    mesh.stiffness.resize(m, m);
    mesh.stiffness.setFromTriplets(trip.begin(), trip.end());
    return mesh;
}

EigenPair first_eigenpair(const RadialMesh& mesh, double tol, int max_iter) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(mesh.stiffness);
    if (solver.info() != Eigen::Success) throw NoConvergence("stiffness factorisation failed");
    const Eigen::VectorXd& w = mesh.weights;
    auto m_norm = [&](const Eigen::VectorXd& x) { return std::sqrt((w.array() * x.array().square()).sum()); };

    Eigen::VectorXd x = Eigen::VectorXd::Ones(mesh.m);
    x /= m_norm(x);
    EigenPair out;
    for (int it = 1; it <= max_iter; ++it) {
        const Eigen::VectorXd y = solver.solve(w.cwiseProduct(x));
        const double lam = 1.0 / (w.array() * x.array() * y.array()).sum();
        out.residual = m_norm(x - lam * y);
        out.value = lam;
        out.iterations = it;
        x = y / m_norm(y);
        if (out.residual <= tol) {
            if (x.sum() < 0.0) x = -x;
            out.vector = x / x.cwiseAbs().maxCoeff();
            out.value = x.dot(mesh.stiffness * x) / (w.array() * x.array().square()).sum();
            return out;
        }
    }
    throw NoConvergence("inverse iteration did not reach the residual tolerance");
}

double lambda1(const RadialMesh& mesh) { return first_eigenpair(mesh).value; }

double discrete_energy(const RadialMesh& mesh, const NonlinearitySpec& spec, const Eigen::VectorXd& u) {
    const double grad = 0.5 * stiffness_form(conductances(mesh), u, u);
    double pot = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) pot += mesh.weights(i) * eval_G(spec, 0.0, u(i));
    return grad - pot;
}

MinimizerResult minimize_energy(const RadialMesh& mesh, const NonlinearitySpec& spec,
                                const std::optional<Eigen::VectorXd>& init, const MinimizeOptions& opts) {
    if (!spec.autonomous()) throw HypothesesFail("energy minimisation needs an autonomous nonlinearity");
    const double a0 = compute_alpha0(spec, 0.0);
    if (!std::isfinite(a0)) throw HypothesesFail("energy minimisation needs a finite alpha0");

    MinimizerResult res;
    const EigenPair eig = first_eigenpair(mesh);
    res.lambda1 = eig.value;

    Eigen::VectorXd u;
    if (init) {
        if (init->size() != mesh.m) throw InvalidConfig("initial vector has the wrong size");
        u = init->cwiseMax(0.0).cwiseMin(a0);
    } else if (eval_dg_dz(spec, 0.0, 0.0) > eig.value) {
        u = 0.5 * a0 * eig.vector;
    } else {
        u = Eigen::VectorXd::Zero(mesh.m);
    }

    // Shifted stiffness S + sigma M, sigma = max(0, -min g' on [0, alpha0]),
    // is the metric of the descent direction.
    double sigma = 0.0;
    for (int i = 0; i <= 256; ++i) sigma = std::max(sigma, -eval_dg_dz(spec, 0.0, a0 * i / 256.0));
    Eigen::SparseMatrix<double> P = mesh.stiffness;
    for (int i = 0; i < mesh.m; ++i) P.coeffRef(i, i) += sigma * mesh.weights(i);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> precond(P);
    const Eigen::VectorXd diag = P.diagonal();

    auto gradient = [&](const Eigen::VectorXd& x) {
        return Eigen::VectorXd(mesh.stiffness * x - mesh.weights.cwiseProduct(nodal_g(spec, x)));
    };
    const Eigen::VectorXd cond = conductances(mesh);
    auto project = [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(x.cwiseMax(0.0).cwiseMin(a0)); };
    auto projected = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& g) {
        Eigen::VectorXd pg = g;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x(i) <= 0.0 && g(i) > 0.0) pg(i) = 0.0;
            if (x(i) >= a0 && g(i) < 0.0) pg(i) = 0.0;
        }
        return pg;
    };

    double E = discrete_energy(mesh, spec, u);
    res.energy_history.push_back(E);
    Eigen::VectorXd g = gradient(u);
    for (int it = 0; it < opts.max_iter; ++it) {
        const Eigen::VectorXd pg = projected(u, g);
        res.projected_gradient = std::sqrt(std::max(0.0, pg.dot(precond.solve(pg))));
        res.iterations = it;
        if (res.projected_gradient <= opts.tol * (1.0 + std::abs(E))) {
            res.converged = true;
            break;
        }

        bool accepted = false;
        for (int variant = 0; variant < 2 && !accepted; ++variant) {
            const Eigen::VectorXd d = variant == 0 ? Eigen::VectorXd(precond.solve(g)) : Eigen::VectorXd(g.cwiseQuotient(diag));
            double t = 1.0;
            for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
                const Eigen::VectorXd step = project(u - t * d) - u;
                const double decrease = -g.dot(step);
                if (!(decrease > 0.0)) continue;
                const double dE = energy_change(mesh, cond, spec, u, step);
                if (dE <= -opts.armijo * decrease) {
                    if (dE > 0.0) res.energy_nonincreasing = false;
                    u += step;
                    E += dE;
                    accepted = true;
                    break;
                }
            }
        }
        if (!accepted) break;  // no further decrease representable
        res.energy_history.push_back(E);
        g = gradient(u);
    }

    res.u = u;
    res.energy = discrete_energy(mesh, spec, u);
    res.u_center = u(0);
    for (int q : {1, 2, 4}) res.norms[q] = lq_norm(mesh, u, q);

    // Strong-form Euler-Lagrange residual on nodes strictly inside (0, alpha0).
    double acc = 0.0;
    double vol = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (!(u(i) > 0.0 && u(i) < a0)) continue;
        const double r = g(i) / mesh.weights(i);
        acc += mesh.weights(i) * r * r;
        vol += mesh.weights(i);
    }
    res.el_residual = vol > 0.0 ? std::sqrt(acc / vol) : 0.0;
    return res;
}

DomainStudy domain_limit_study(const NonlinearitySpec& spec, int N, std::vector<double> radii, double m_per_R,
                               int threads) {
    if (radii.empty()) throw InvalidConfig("domain study needs at least one radius");
    std::sort(radii.begin(), radii.end());
    DomainStudy study;
    study.alpha0 = compute_alpha0(spec, 0.0);
    auto mesh_size = [&](double R) { return std::max(64, static_cast<int>(std::ceil(m_per_R * R))); };
    {
        const double lam = lambda1(assemble(N, radii.front(), mesh_size(radii.front())));
        if (!(lam < eval_dg_dz(spec, 0.0, 0.0)))
            throw InvalidConfig("the smallest ball is subcritical: lambda1 >= g'(0)");
    }

    study.rows.resize(radii.size());
    auto run_row = [&](std::size_t i) {
        DomainRow& row = study.rows[i];
        row.R = radii[i];
        row.m = mesh_size(row.R);
        try {
            const RadialMesh mesh = assemble(N, row.R, row.m);
            const MinimizerResult res = minimize_energy(mesh, spec);
            row.lambda1 = res.lambda1;
            row.u_center = res.u_center;
            row.energy = res.energy;
            row.energy_density = res.energy / mesh.volume();
            row.l1 = res.norms.at(1);
            row.l2 = res.norms.at(2);
            row.l4 = res.norms.at(4);
            row.converged = res.converged;
            row.iterations = res.iterations;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(radii.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < radii.size(); ++i) run_row(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < radii.size(); i = next++) run_row(i);
            });
        for (auto& t : pool) t.join();
    }

    study.u_center_increasing = true;
    study.energy_decreasing_negative = true;
    study.norms_increasing = true;
    for (std::size_t i = 0; i < study.rows.size(); ++i) {
        const auto& b = study.rows[i];
        if (!b.error.empty() || !b.converged) {
            study.u_center_increasing = study.energy_decreasing_negative = study.norms_increasing = false;
            continue;
        }
        if (!(b.energy < 0.0)) study.energy_decreasing_negative = false;
        if (i == 0) continue;
        const auto& a = study.rows[i - 1];
        if (!(b.u_center > a.u_center)) study.u_center_increasing = false;
        if (!(b.energy < a.energy)) study.energy_decreasing_negative = false;
        if (!(b.l1 > a.l1 && b.l2 > a.l2 && b.l4 > a.l4)) study.norms_increasing = false;
    }
    return study;
}

}  // namespace helmholtz
