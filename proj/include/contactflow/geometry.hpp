#ifndef CONTACTFLOW_GEOMETRY_HPP
#define CONTACTFLOW_GEOMETRY_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "contactflow/numdiff.hpp"

namespace contactflow {

/// Darboux chart on a (2n+1)-dimensional contact phase space. The contact
/// one-form is eta = ds - p_i dq^i and the Reeb field is d/ds. Labels are
/// (s, q^1..q^n, p_1..p_n); units follow the k_B = 1 convention.
struct ContactChart {
    int n = 0;
    std::vector<std::string> labels;

    /// Generic chart with labels s, q1..qn, p1..pn.
    static ContactChart darboux(int n);
    /// Chart with caller-supplied labels (s-label, then q labels, then p labels).
    static ContactChart named(std::string s_label,
                              std::vector<std::string> q_labels,
                              std::vector<std::string> p_labels);
};

/// Point (s, q, p) of the contact phase space in Darboux coordinates.
struct PhasePoint {
    double s = 0.0;
    Vec q;
    Vec p;

    int n() const { return static_cast<int>(q.size()); }
};

/// Tangent vector (ds, dq, dp) at a phase point.
struct TangentVector {
    double ds = 0.0;
    Vec dq;
    Vec dp;
};

/// Partial derivatives of a contact Hamiltonian at a phase point.
struct HamiltonianGradient {
    double dh_ds = 0.0;
    Vec dh_dq;
    Vec dh_dp;
};

/// Contact Hamiltonian function h on the phase space, supplied as an
/// evaluator. When no closed-form gradient is given, central differences
/// with step 1e-6*max(1,|coordinate|) back the gradient.
struct ContactHamiltonian {
    std::string name;
    std::function<double(const PhasePoint&)> value;
    std::function<HamiltonianGradient(const PhasePoint&)> grad;

    double operator()(const PhasePoint& x) const { return value(x); }
    HamiltonianGradient gradient(const PhasePoint& x) const;
    bool has_closed_form_gradient() const { return static_cast<bool>(grad); }
};

/// eta(v) = v.ds - sum_i x.p_i * v.dq_i. Throws std::invalid_argument on a
/// dimension mismatch.
double contact_form_apply(const PhasePoint& x, const TangentVector& v);

/// Coefficient c with eta ^ (d eta)^n = c * ds ^ dq1 ^ dp1 ^ ... ^ dqn ^ dpn.
/// Evaluated by expanding the wedge product over index permutations for
/// small n, with a bordered-Pfaffian determinant fallback above that. The
/// coefficient is point-independent and |c| = n!.
double volume_form_coefficient(const PhasePoint& x);

/// Contact Hamiltonian vector field in Darboux coordinates:
///   ds   = p_i dh/dp_i - h
///   dq_i = dh/dp_i
///   dp_i = -(p_i dh/ds + dh/dq_i)
TangentVector contact_vector_field(const ContactHamiltonian& h, const PhasePoint& x);

/// Diagnostic pair (eta(X_h) + h, eta(xi) - 1); both vanish identically for
/// a correctly assembled field and Reeb vector.
std::pair<double, double> reeb_defect(const ContactHamiltonian& h, const PhasePoint& x);

} // namespace contactflow

#endif
