#ifndef CONTACTFLOW_THERMO_HPP
#define CONTACTFLOW_THERMO_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>

#include "contactflow/geometry.hpp"
#include "contactflow/submanifold.hpp"

namespace contactflow {

/// Ideal-gas constants. A sets the energy scale of the fundamental relation
/// U = A exp(S/CN) V^(-1/C) N^(1+1/C); C is the per-particle heat capacity
/// at constant volume. K is derived from A so that the entropy-form
/// fundamental relation S = N ln(K V U^C / N^(C+1)) + (C+1) N describes the
/// same equilibrium surface.
struct IdealGasParams {
    double A = 1.0;
    double C = 1.5;

    double gamma() const { return (1.0 + C) / C; }
    double K() const { return std::pow(A, -C) * std::exp(-(C + 1.0)); }
};

/// Hydrostatic equilibrium variables, k_B = 1.
struct GasState {
    double U = 0.0;
    double S = 0.0;
    double V = 0.0;
    double N = 0.0;
    double T = 0.0;
    double P = 0.0;
    double mu = 0.0;

    double beta() const { return 1.0 / T; }
};

/// Strength a and affine parameter t of the two-body interaction flow.
struct InteractionParams {
    double a = 0.0;
    double t = 0.0;
};

/// Full state from the energy-form fundamental relation at (S, V, N).
/// Throws std::domain_error for nonpositive V or N.
GasState energy_fundamental(double S, double V, double N, const IdealGasParams& params);

/// Full state from the entropy-form fundamental relation at (U, V, N).
/// Throws std::domain_error for nonpositive U, V, or N.
GasState entropy_fundamental(double U, double V, double N, const IdealGasParams& params);

/// U - TS + PV - mu N; zero on equilibrium states by the Euler relation.
double euler_residual(const GasState& st);

/// (PV - NT, U - CNT): ideal-gas law and equipartition defects.
std::pair<double, double> gas_law_residuals(const GasState& st, const IdealGasParams& params);

/// Which thermodynamic variable plays the potential role in the chart.
/// Energy: s=U, q=(S,V,N), p=(T,-P,mu). Entropy: s=S, q=(U,V,N),
/// p=(beta, beta P, -beta mu).
enum class GasChart { Energy, Entropy };

PhasePoint to_phase_point(const GasState& st, GasChart chart);
GasState to_gas_state(const PhasePoint& x, GasChart chart);
ContactChart gas_chart(GasChart chart);

/// Generating function of the ideal-gas equilibrium submanifold in the given
/// chart, with closed-form partials.
LegendreGenerator ideal_gas_generator(const IdealGasParams& params,
                                      GasChart chart = GasChart::Energy);

/// Raised when a representation change hits a vanishing conjugate momentum.
class SingularRepresentationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Representation change that promotes coordinate q^k to the potential role.
/// The new chart has coordinates (Phi, q^1..q^{k-1}, q^{k+1}..q^n), momenta
/// (1/p_k, -p_1/p_k, ...), and potential q^k; a transformation generated by
/// h in the old chart is generated by -h/p_k in the new one.
struct RepresentationTransform {
    int k = 1;                      // 1-based index of the promoted coordinate
    ContactHamiltonian transformed; // -h/p_k, evaluated in the new chart

    PhasePoint to_new_chart(const PhasePoint& old_point) const;
    PhasePoint to_old_chart(const PhasePoint& new_point) const;
};

RepresentationTransform transform_hamiltonian_representation(const ContactHamiltonian& h, int k);

/// Helmholtz-Massieu potential Psi = S - U/T of the ideal gas at (T, V, N),
/// with the conjugates recovered from its partials:
/// U = T^2 dPsi/dT, P = T dPsi/dV, mu = -T dPsi/dN.
struct MassieuResult {
    double Psi = 0.0;
    double U = 0.0;
    double P = 0.0;
    double mu = 0.0;
};

MassieuResult massieu_potential(double T, double V, double N, const IdealGasParams& params);

/// Regularity of a partial Legendre transform from the Hessian block of the
/// potential over the swapped coordinates. Singular blocks (|det| below the
/// 1e-10 floor) must be rejected by callers.
struct RegularityResult {
    double det = 0.0;
    bool regular = false;
};

RegularityResult legendre_regularity(const Eigen::MatrixXd& hessian_block);

/// Equilibrium state of the interacting family with strength a*t grown from
/// an ideal-gas state: U and P pick up -at/V and -at/V^2, everything else is
/// conserved.
GasState interacting_state(const GasState& base, const InteractionParams& ip);

} // namespace contactflow

#endif
