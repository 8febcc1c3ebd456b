#include "contactflow/submanifold.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace contactflow {

Vec LegendreGenerator::gradient(const Vec& base) const
{
    if (grad)
        return grad(base);
    return fd_gradient(value, base);
}

bool LegendreGenerator::is_momentum_index(int k) const
{
    return std::find(momentum_indices.begin(), momentum_indices.end(), k) !=
           momentum_indices.end();
}

Vec SectionSigma::gradient(const Vec& q) const
{
    if (grad)
        return grad(q);
    return fd_gradient(sigma_s, q);
}

PhasePoint legendre_embed(const LegendreGenerator& gen, const Vec& base)
{
    if (static_cast<int>(base.size()) != gen.n)
        throw std::invalid_argument("legendre_embed: base size does not match n");
    const double f = gen.value(base);
    const Vec df = gen.gradient(base);
    if (df.size() != base.size())
        throw std::runtime_error("legendre_embed: generator gradient size mismatch");

    PhasePoint x;
    x.q.resize(gen.n);
    x.p.resize(gen.n);
    x.s = f;
    for (int k = 1; k <= gen.n; ++k) {
        const int idx = k - 1;
        if (gen.is_momentum_index(k)) {
            x.p[idx] = base[idx];
            x.q[idx] = -df[idx];
            x.s -= base[idx] * df[idx];
        } else {
            x.q[idx] = base[idx];
            x.p[idx] = df[idx];
        }
    }
    return x;
}

double on_submanifold_residual(const LegendreGenerator& gen, const PhasePoint& x)
{
    if (!gen.pure_coordinate())
        throw std::invalid_argument(
            "on_submanifold_residual: only pure-coordinate generators are supported");
    if (x.n() != gen.n)
        throw std::invalid_argument("on_submanifold_residual: dimension mismatch");
    const Vec df = gen.gradient(x.q);
    double defect = std::abs(x.s - gen.value(x.q));
    for (int i = 0; i < gen.n; ++i)
        defect = std::max(defect, std::abs(x.p[i] - df[i]));
    return defect;
}

double restriction_residual(const ContactHamiltonian& h,
                            const LegendreGenerator& gen,
                            const std::vector<Vec>& grid)
{
    double worst = 0.0;
    for (const Vec& base : grid)
        worst = std::max(worst, std::abs(h.value(legendre_embed(gen, base))));
    return worst;
}

PhasePoint section_lift(const SectionSigma& sec, const Vec& q)
{
    PhasePoint x;
    x.q = q;
    x.s = sec.sigma_s(q);
    x.p = sec.gradient(q);
    if (x.p.size() != q.size())
        throw std::runtime_error("section_lift: section gradient size mismatch");
    return x;
}

double geometric_hj_residual(const ContactHamiltonian& h, const SectionSigma& sec,
                             const std::vector<Vec>& grid, double k_offset)
{
    double worst = 0.0;
    for (const Vec& q : grid)
        worst = std::max(worst, std::abs(h.value(section_lift(sec, q)) - k_offset));
    return worst;
}

Vec projected_field(const ContactHamiltonian& h, const SectionSigma& sec, const Vec& q)
{
    return contact_vector_field(h, section_lift(sec, q)).dq;
}

std::vector<Vec> residual_grid(const Vec& center, double rel_span, int points_per_axis)
{
    if (points_per_axis < 1)
        throw std::invalid_argument("residual_grid: need at least one point per axis");
    const std::size_t n = center.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i)
        total *= static_cast<std::size_t>(points_per_axis);

    std::vector<Vec> grid;
    grid.reserve(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        Vec point(n);
        std::size_t rest = flat;
        for (std::size_t i = 0; i < n; ++i) {
            const int step = static_cast<int>(rest % points_per_axis);
            rest /= points_per_axis;
            const double span = rel_span * std::max(1.0, std::abs(center[i]));
            const double frac = points_per_axis == 1
                                    ? 0.0
                                    : -1.0 + 2.0 * step / (points_per_axis - 1.0);
            point[i] = center[i] + span * frac;
        }
        grid.push_back(std::move(point));
    }
    return grid;
}

} // namespace contactflow
