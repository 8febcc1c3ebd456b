#include "contactflow/generic_oc.hpp"

#include <cmath>
#include <stdexcept>

namespace contactflow {

namespace {

constexpr double kAntisymTol = 1e-12;
constexpr double kPsdFloor = -1e-12;
constexpr double kDegeneracyPrecondition = 1e-8;

Eigen::VectorXd to_eigen(const Vec& v)
{
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Vec from_eigen(const Eigen::VectorXd& v)
{
    return Vec(v.data(), v.data() + v.size());
}

} // namespace

Vec ScalarField::grad(const Vec& q) const
{
    if (gradient)
        return gradient(q);
    return fd_gradient(value, q);
}

ScalarField quadratic_field(const Eigen::MatrixXd& A, const Vec& b, double c)
{
    if (A.rows() != A.cols() || A.rows() != static_cast<Eigen::Index>(b.size()))
        throw std::invalid_argument("quadratic_field: A must be square and match b");
    const Eigen::VectorXd bv = to_eigen(b);
    ScalarField f;
    f.value = [A, bv, c](const Vec& q) {
        const Eigen::VectorXd qq = to_eigen(q);
        return 0.5 * qq.dot(A * qq) + bv.dot(qq) + c;
    };
    f.gradient = [A, bv](const Vec& q) {
        const Eigen::VectorXd qq = to_eigen(q);
        // 0.5 (A + A^T) q + b, exact also for non-symmetric A
        return from_eigen(Eigen::VectorXd(0.5 * (A + A.transpose()) * qq + bv));
    };
    f.hessian = [A](const Vec&) { return Eigen::MatrixXd(0.5 * (A + A.transpose())); };
    return f;
}

OCSystem make_oc_system(Eigen::MatrixXd J, Eigen::MatrixXd M, ScalarField energy,
                        ScalarField entropy, double beta)
{
    if (J.rows() != J.cols() || M.rows() != M.cols() || J.rows() != M.rows() ||
        J.rows() < 1)
        throw std::invalid_argument("OCSystem: J and M must be square of equal size");
    if (((J + J.transpose()).cwiseAbs().maxCoeff()) > kAntisymTol)
        throw std::invalid_argument("OCSystem: J must be antisymmetric");
    if (((M - M.transpose()).cwiseAbs().maxCoeff()) > kAntisymTol)
        throw std::invalid_argument("OCSystem: M must be symmetric");
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.eigenvalues().minCoeff() < kPsdFloor)
        throw std::invalid_argument("OCSystem: M must be positive semidefinite");
    if (!(beta > 0.0))
        throw std::invalid_argument("OCSystem: beta must be positive");

    OCSystem sys;
    sys.dim = static_cast<int>(J.rows());
    sys.J = std::move(J);
    sys.M = std::move(M);
    sys.energy = std::move(energy);
    sys.entropy = std::move(entropy);
    sys.beta = beta;
    return sys;
}

OCSystem oc_reference_system()
{
    Eigen::MatrixXd J(3, 3), M(3, 3), QE(3, 3);
    J << 0, 1, 0, -1, 0, 0, 0, 0, 0;
    M = Eigen::MatrixXd::Zero(3, 3);
    M(2, 2) = 0.5;
    QE = Eigen::MatrixXd::Zero(3, 3);
    QE(0, 0) = 1.0;
    QE(1, 1) = 1.0;
    return make_oc_system(J, M, quadratic_field(QE, {0.0, 0.0, 0.0}),
                          quadratic_field(Eigen::MatrixXd::Zero(3, 3), {0.0, 0.0, 1.0}),
                          1.0);
}

ScalarField oc_potential(const OCSystem& sys)
{
    const ScalarField e = sys.energy;
    const ScalarField s = sys.entropy;
    const double beta = sys.beta;
    ScalarField phi;
    phi.value = [e, s, beta](const Vec& q) { return -s.value(q) + beta * e.value(q); };
    phi.gradient = [e, s, beta](const Vec& q) {
        Vec g = e.grad(q);
        const Vec gs = s.grad(q);
        for (std::size_t i = 0; i < g.size(); ++i)
            g[i] = beta * g[i] - gs[i];
        return g;
    };
    if (e.has_hessian() && s.has_hessian()) {
        phi.hessian = [e, s, beta](const Vec& q) {
            return Eigen::MatrixXd(beta * e.hessian(q) - s.hessian(q));
        };
    }
    return phi;
}

SectionSigma oc_section(const OCSystem& sys)
{
    const ScalarField phi = oc_potential(sys);
    SectionSigma sec;
    sec.sigma_s = phi.value;
    sec.grad = [phi](const Vec& q) { return phi.grad(q); };
    return sec;
}

std::pair<double, double> degeneracy_residual(const OCSystem& sys, const Vec& q)
{
    const Eigen::VectorXd js = sys.J * to_eigen(sys.entropy.grad(q));
    const Eigen::VectorXd me = sys.M * to_eigen(sys.energy.grad(q));
    const double j_defect = js.size() ? js.cwiseAbs().maxCoeff() : 0.0;
    const double m_defect = me.size() ? me.cwiseAbs().maxCoeff() : 0.0;
    return {j_defect, m_defect};
}

Vec oc_vector_field(const OCSystem& sys, const Vec& q)
{
    const auto [jd, md] = degeneracy_residual(sys, q);
    if (jd > kDegeneracyPrecondition || md > kDegeneracyPrecondition)
        throw std::invalid_argument(
            "oc_vector_field: degeneracy conditions violated at the requested point");
    const ScalarField phi = oc_potential(sys);
    const Eigen::VectorXd gphi = to_eigen(phi.grad(q));
    return from_eigen(Eigen::VectorXd(sys.J * gphi / sys.beta - sys.M * gphi));
}

ContactHamiltonian oc_contact_hamiltonian(const OCSystem& sys)
{
    const ScalarField phi = oc_potential(sys);
    const Eigen::MatrixXd J = sys.J;
    const Eigen::MatrixXd M = sys.M;
    const double beta = sys.beta;

    ContactHamiltonian h;
    h.name = "onsager-casimir";
    h.value = [phi, J, M, beta](const PhasePoint& x) {
        const Eigen::VectorXd p = to_eigen(x.p);
        const Eigen::VectorXd gphi = to_eigen(phi.grad(x.q));
        return -0.5 * p.dot(M * p) + 0.5 * gphi.dot(M * gphi) +
               p.dot(J * gphi) / beta;
    };
    if (phi.has_hessian()) {
        h.grad = [phi, J, M, beta](const PhasePoint& x) {
            const Eigen::VectorXd p = to_eigen(x.p);
            const Eigen::VectorXd gphi = to_eigen(phi.grad(x.q));
            const Eigen::MatrixXd hess = phi.hessian(x.q);
            HamiltonianGradient g;
            g.dh_ds = 0.0;
            g.dh_dq = from_eigen(
                Eigen::VectorXd(hess * (M * gphi) + hess * (J.transpose() * p) / beta));
            g.dh_dp = from_eigen(Eigen::VectorXd(-M * p + J * gphi / beta));
            return g;
        };
    }
    return h;
}

BaseTrajectory oc_integrate(const OCSystem& sys, const Vec& q0,
                            const IntegratorConfig& cfg)
{
    const ScalarField e = sys.energy;
    const ScalarField s = sys.entropy;
    std::vector<BaseMonitor> monitors;
    monitors.push_back({"E", [e](double, const Vec& q) { return e.value(q); }});
    monitors.push_back({"S", [s](double, const Vec& q) { return s.value(q); }});
    return integrate_characteristics(
        [&sys](double, const Vec& q) { return oc_vector_field(sys, q); }, q0, cfg,
        monitors);
}

double oc_geometric_hj_residual(const OCSystem& sys, const std::vector<Vec>& grid)
{
    return geometric_hj_residual(oc_contact_hamiltonian(sys), oc_section(sys), grid);
}

} // namespace contactflow
