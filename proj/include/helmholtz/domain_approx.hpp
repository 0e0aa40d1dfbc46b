#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "helmholtz/nonlinearity.hpp"

namespace helmholtz {

/// Vertex-centred finite-volume discretisation of the radial Dirichlet
/// Laplacian on the ball B_R in R^N. Unknowns sit at r_i = i h, i < m; the
/// boundary node r_m = R carries u = 0.
struct RadialMesh {
    int N = 0;
    double R = 0.0;
    int m = 0;
    double h = 0.0;
    double omega = 0.0;               // surface measure of the unit sphere S^{N-1}
    Eigen::VectorXd nodes;            // r_0 .. r_{m-1}
    Eigen::VectorXd weights;          // control-volume measures of the unknowns
    double boundary_weight = 0.0;     // half cell at r = R
    Eigen::SparseMatrix<double> stiffness;

    double volume() const { return weights.sum() + boundary_weight; }
};

/// Ball volume omega R^N / N.
double ball_volume(int N, double R);

/// Throws InvalidConfig for m < 64, N < 1 or R <= 0.
RadialMesh assemble(int N, double R, int m);

struct EigenPair {
    double value = 0.0;
    Eigen::VectorXd vector;  // positive, max-normalised
    int iterations = 0;
    double residual = 0.0;
};

/// Smallest Dirichlet eigenvalue by inverse iteration on (S, M). The residual
/// is |x - lambda S^{-1} M x|_M / |x|_M. Throws NoConvergence.
EigenPair first_eigenpair(const RadialMesh& mesh, double tol = 1e-10, int max_iter = 2000);
double lambda1(const RadialMesh& mesh);

struct MinimizeOptions {
    double tol = 1e-9;              // on the projected gradient, relative to 1 + |energy|
    int max_iter = 20000;
    double armijo = 1e-4;
};

struct MinimizerResult {
    Eigen::VectorXd u;              // nodal values at mesh.nodes
    double energy = 0.0;
    int iterations = 0;
    bool converged = false;
    double u_center = 0.0;
    std::map<int, double> norms;    // q -> |u|_{L^q(B_R)} for q = 1, 2, 4
    double lambda1 = 0.0;
    double projected_gradient = 0.0;
    double el_residual = 0.0;       // strong-form residual on interior nodes, RMS over the ball
    bool energy_nonincreasing = true;
    std::vector<double> energy_history;
};

/// Discrete I(u) = 1/2 <S u, u> - sum_i w_i G(u_i).
double discrete_energy(const RadialMesh& mesh, const NonlinearitySpec& spec, const Eigen::VectorXd& u);

/// Projected descent on the box [0, alpha0]^m with backtracking. Without an
/// initial vector the run starts from the positive first eigenfunction scaled
/// to alpha0/2 when g'(0) > lambda1, and from zero otherwise.
/// Throws HypothesesFail unless the spec is autonomous with finite alpha0.
MinimizerResult minimize_energy(const RadialMesh& mesh, const NonlinearitySpec& spec,
                                const std::optional<Eigen::VectorXd>& init = std::nullopt,
                                const MinimizeOptions& opts = {});

struct DomainRow {
    double R = 0.0;
    int m = 0;
    double lambda1 = 0.0;
    double u_center = 0.0;
    double energy = 0.0;
    double energy_density = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double l4 = 0.0;
    bool converged = false;
    int iterations = 0;
    std::string error;
};

struct DomainStudy {
    std::vector<DomainRow> rows;
    bool u_center_increasing = false;
    bool energy_decreasing_negative = false;
    bool norms_increasing = false;
    double alpha0 = 0.0;
};

/// Minimisers on a family of growing balls, m = max(64, ceil(m_per_R * R)).
/// Throws InvalidConfig unless lambda1 of the smallest ball is below g'(0).
DomainStudy domain_limit_study(const NonlinearitySpec& spec, int N, std::vector<double> radii, double m_per_R,
                               int threads = 1);

}  // namespace helmholtz
