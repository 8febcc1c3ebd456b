#ifndef CONTACTFLOW_SUBMANIFOLD_HPP
#define CONTACTFLOW_SUBMANIFOLD_HPP

#include <functional>
#include <vector>

#include "contactflow/geometry.hpp"

namespace contactflow {

/// Generating function of a Legendre submanifold. The index set {1..n} is
/// split into coordinate indices I and momentum indices J; the base vector
/// entry for index k holds q^k when k is in I and p_k when k is in J. The
/// embedding relations are
///   p_i = dF/dq^i (i in I),  q^j = -dF/dp_j (j in J),
///   s   = F - p_j dF/dp_j.
struct LegendreGenerator {
    int n = 0;
    std::vector<int> momentum_indices;   // J, 1-based; empty means F = F(q)
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> grad; // optional closed form

    Vec gradient(const Vec& base) const;
    bool pure_coordinate() const { return momentum_indices.empty(); }
    bool is_momentum_index(int k) const; // k is 1-based
};

/// 1-jet section of the projection from the phase space to the equilibrium
/// base: q maps to (q, grad sigma_s(q), sigma_s(q)).
struct SectionSigma {
    std::function<double(const Vec&)> sigma_s;
    std::function<Vec(const Vec&)> grad; // optional closed form

    Vec gradient(const Vec& q) const;
};

/// Full phase point of the Legendre submanifold over the given base values.
PhasePoint legendre_embed(const LegendreGenerator& gen, const Vec& base);

/// Sup-norm defect of the generator relations at x:
/// max(|s - F(q)|, max_i |p_i - dF/dq^i|). Only pure-coordinate (J empty)
/// generators are supported.
double on_submanifold_residual(const LegendreGenerator& gen, const PhasePoint& x);

/// max over the grid of |h| restricted to the submanifold; zero (up to
/// tolerance) exactly when the flow of X_h preserves the submanifold.
double restriction_residual(const ContactHamiltonian& h,
                            const LegendreGenerator& gen,
                            const std::vector<Vec>& grid);

/// Lift of a base point through the section: (sigma_s(q), q, grad sigma_s(q)).
PhasePoint section_lift(const SectionSigma& sec, const Vec& q);

/// max over the grid of |h(section_lift(q)) - k_offset|. k_offset defaults
/// to zero, the choice appropriate for thermodynamics.
double geometric_hj_residual(const ContactHamiltonian& h, const SectionSigma& sec,
                             const std::vector<Vec>& grid, double k_offset = 0.0);

/// Base-space projection of the contact field along the section: the dq
/// component of X_h at the lifted point.
Vec projected_field(const ContactHamiltonian& h, const SectionSigma& sec, const Vec& q);

/// Regular grid of points_per_axis^n points centered on `center`, spanning
/// +-rel_span * max(1, |center_i|) in each coordinate.
std::vector<Vec> residual_grid(const Vec& center, double rel_span = 0.1,
                               int points_per_axis = 3);

} // namespace contactflow

#endif
