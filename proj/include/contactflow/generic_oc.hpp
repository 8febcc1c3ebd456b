#ifndef CONTACTFLOW_GENERIC_OC_HPP
#define CONTACTFLOW_GENERIC_OC_HPP

#include <Eigen/Dense>

#include <functional>
#include <utility>
#include <vector>

#include "contactflow/dynamics.hpp"
#include "contactflow/submanifold.hpp"

namespace contactflow {

/// Scalar function of the base coordinates with optional closed-form
/// gradient and Hessian; missing derivatives fall back to central
/// differences.
struct ScalarField {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;               // optional
    std::function<Eigen::MatrixXd(const Vec&)> hessian;    // optional

    double operator()(const Vec& q) const { return value(q); }
    Vec grad(const Vec& q) const;
    bool has_hessian() const { return static_cast<bool>(hessian); }
};

/// f(q) = 0.5 q.A q + b.q + c with exact gradient and Hessian.
ScalarField quadratic_field(const Eigen::MatrixXd& A, const Vec& b, double c = 0.0);

/// GENERIC system: reversible structure J (antisymmetric), irreversible
/// structure M (symmetric positive semidefinite), energy E, entropy S, and
/// the inverse-temperature constant beta entering Phi = -S + beta E. The
/// degeneracy conditions J grad S = M grad E = 0 must hold for the dynamics
/// to be well posed; they are checked at use sites, not on construction.
struct OCSystem {
    int dim = 0;
    Eigen::MatrixXd J;
    Eigen::MatrixXd M;
    ScalarField energy;
    ScalarField entropy;
    double beta = 1.0;
};

/// Validates matrix shape, antisymmetry of J (1e-12), symmetry and positive
/// semidefiniteness of M (eigenvalue floor -1e-12); throws
/// std::invalid_argument on violation.
OCSystem make_oc_system(Eigen::MatrixXd J, Eigen::MatrixXd M, ScalarField energy,
                        ScalarField entropy, double beta = 1.0);

/// Reference three-dimensional system: E = (q1^2 + q2^2)/2, S = q3,
/// J rotating the (q1, q2) plane, M = diag(0, 0, 1/2), beta = 1.
OCSystem oc_reference_system();

/// Phi = -S + beta E, with closed-form derivatives when E and S carry them.
ScalarField oc_potential(const OCSystem& sys);

/// 1-jet section with sigma_s = Phi.
SectionSigma oc_section(const OCSystem& sys);

/// Sup norms (|J grad S|_inf, |M grad E|_inf) of the degeneracy defects at q.
std::pair<double, double> degeneracy_residual(const OCSystem& sys, const Vec& q);

/// Onsager-Casimir field qdot = beta^-1 J grad Phi - M grad Phi. Throws
/// std::invalid_argument when the degeneracy defect at q exceeds 1e-8.
Vec oc_vector_field(const OCSystem& sys, const Vec& q);

/// Contact Hamiltonian lift
///   h = -p.M p / 2 + grad Phi . M grad Phi / 2 + beta^-1 p . J grad Phi
/// whose flow restricted to the section p = grad Phi projects onto the
/// Onsager-Casimir dynamics. The gradient is closed-form when E and S carry
/// Hessians, finite-difference-backed otherwise.
ContactHamiltonian oc_contact_hamiltonian(const OCSystem& sys);

/// Integrates the base dynamics with monitors E and S attached.
BaseTrajectory oc_integrate(const OCSystem& sys, const Vec& q0,
                            const IntegratorConfig& cfg);

/// Geometric Hamilton-Jacobi defect of the section sigma_s = Phi for the
/// lifted Hamiltonian, maximized over the grid.
double oc_geometric_hj_residual(const OCSystem& sys, const std::vector<Vec>& grid);

} // namespace contactflow

#endif
