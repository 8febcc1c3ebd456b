#ifndef CONTACTFLOW_NUMDIFF_HPP
#define CONTACTFLOW_NUMDIFF_HPP

#include <cmath>
#include <functional>
#include <vector>

namespace contactflow {

using Vec = std::vector<double>;

/// Central-difference step, scaled to the magnitude of the coordinate.
inline double fd_step(double x, double rel = 1e-6)
{
    return rel * std::max(1.0, std::abs(x));
}

/// Central-difference partial derivative of f with respect to coordinate i.
inline double fd_partial(const std::function<double(const Vec&)>& f,
                         Vec x, std::size_t i, double rel = 1e-6)
{
    const double h = fd_step(x[i], rel);
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = f(x);
    x[i] = xi - h;
    const double fm = f(x);
    x[i] = xi;
    return (fp - fm) / (2.0 * h);
}

/// Central-difference gradient of a scalar function of a coordinate vector.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f,
                       const Vec& x, double rel = 1e-6)
{
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = fd_partial(f, x, i, rel);
    return g;
}

} // namespace contactflow

#endif
