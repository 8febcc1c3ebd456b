#include "contactflow/thermo.hpp"

#include <cmath>

namespace contactflow {

namespace {

constexpr double kSingularMomentum = 1e-12;
constexpr double kRegularityFloor = 1e-10;

void require_positive(double v, const char* what)
{
    if (!(v > 0.0))
        throw std::domain_error(std::string(what) + " must be positive");
}

} // namespace

GasState energy_fundamental(double S, double V, double N, const IdealGasParams& params)
{
    require_positive(V, "energy_fundamental: V");
    require_positive(N, "energy_fundamental: N");
    GasState st;
    st.S = S;
    st.V = V;
    st.N = N;
    st.U = params.A * std::exp(S / (params.C * N)) *
           std::pow(V, -1.0 / params.C) * std::pow(N, 1.0 + 1.0 / params.C);
    st.T = st.U / (params.C * N);
    st.P = st.U / (params.C * V);
    st.mu = st.U * ((1.0 + 1.0 / params.C) / N - S / (params.C * N * N));
    return st;
}

GasState entropy_fundamental(double U, double V, double N, const IdealGasParams& params)
{
    require_positive(U, "entropy_fundamental: U");
    require_positive(V, "entropy_fundamental: V");
    require_positive(N, "entropy_fundamental: N");
    GasState st;
    st.U = U;
    st.V = V;
    st.N = N;
    st.S = N * std::log(params.K() * V * std::pow(U, params.C) /
                        std::pow(N, params.C + 1.0)) +
           (params.C + 1.0) * N;
    st.T = U / (params.C * N);            // (dS/dU)^-1
    st.P = st.T * N / V;                  // T dS/dV
    st.mu = -st.T * (st.S / N - (params.C + 1.0)); // -T dS/dN
    return st;
}

double euler_residual(const GasState& st)
{
    return st.U - st.T * st.S + st.P * st.V - st.mu * st.N;
}

std::pair<double, double> gas_law_residuals(const GasState& st, const IdealGasParams& params)
{
    return {st.P * st.V - st.N * st.T, st.U - params.C * st.N * st.T};
}

PhasePoint to_phase_point(const GasState& st, GasChart chart)
{
    PhasePoint x;
    if (chart == GasChart::Energy) {
        x.s = st.U;
        x.q = {st.S, st.V, st.N};
        x.p = {st.T, -st.P, st.mu};
    } else {
        const double beta = st.beta();
        x.s = st.S;
        x.q = {st.U, st.V, st.N};
        x.p = {beta, beta * st.P, -beta * st.mu};
    }
    return x;
}

GasState to_gas_state(const PhasePoint& x, GasChart chart)
{
    if (x.n() != 3)
        throw std::invalid_argument("to_gas_state: expected a 3-pair gas chart point");
    GasState st;
    if (chart == GasChart::Energy) {
        st.U = x.s;
        st.S = x.q[0];
        st.V = x.q[1];
        st.N = x.q[2];
        st.T = x.p[0];
        st.P = -x.p[1];
        st.mu = x.p[2];
    } else {
        const double beta = x.p[0];
        if (std::abs(beta) < kSingularMomentum)
            throw std::domain_error("to_gas_state: beta is singular in the entropy chart");
        st.S = x.s;
        st.U = x.q[0];
        st.V = x.q[1];
        st.N = x.q[2];
        st.T = 1.0 / beta;
        st.P = x.p[1] / beta;
        st.mu = -x.p[2] / beta;
    }
    return st;
}

ContactChart gas_chart(GasChart chart)
{
    if (chart == GasChart::Energy)
        return ContactChart::named("U", {"S", "V", "N"}, {"T", "-P", "mu"});
    return ContactChart::named("S", {"U", "V", "N"}, {"beta", "beta*P", "-beta*mu"});
}

LegendreGenerator ideal_gas_generator(const IdealGasParams& params, GasChart chart)
{
    LegendreGenerator gen;
    gen.n = 3;
    if (chart == GasChart::Energy) {
        gen.value = [params](const Vec& q) {
            return energy_fundamental(q[0], q[1], q[2], params).U;
        };
        gen.grad = [params](const Vec& q) -> Vec {
            const GasState st = energy_fundamental(q[0], q[1], q[2], params);
            return {st.T, -st.P, st.mu};
        };
    } else {
        gen.value = [params](const Vec& q) {
            return entropy_fundamental(q[0], q[1], q[2], params).S;
        };
        gen.grad = [params](const Vec& q) -> Vec {
            const GasState st = entropy_fundamental(q[0], q[1], q[2], params);
            const double beta = st.beta();
            return {beta, beta * st.P, -beta * st.mu};
        };
    }
    return gen;
}

namespace {

PhasePoint chart_to_new(const PhasePoint& old_point, int k)
{
    const int n = old_point.n();
    if (k < 1 || k > n)
        throw std::invalid_argument("RepresentationTransform: k out of range");
    const double pk = old_point.p[k - 1];
    if (std::abs(pk) < kSingularMomentum)
        throw SingularRepresentationError(
            "representation change is singular: |p_k| below 1e-12");

    PhasePoint y;
    y.q.resize(n);
    y.p.resize(n);
    y.s = old_point.q[k - 1];
    y.q[0] = old_point.s;
    y.p[0] = 1.0 / pk;
    int slot = 1;
    for (int j = 1; j <= n; ++j) {
        if (j == k)
            continue;
        y.q[slot] = old_point.q[j - 1];
        y.p[slot] = -old_point.p[j - 1] / pk;
        ++slot;
    }
    return y;
}

PhasePoint chart_to_old(const PhasePoint& new_point, int k)
{
    const int n = new_point.n();
    if (k < 1 || k > n)
        throw std::invalid_argument("RepresentationTransform: k out of range");
    const double p1 = new_point.p[0];
    if (std::abs(p1) < kSingularMomentum)
        throw SingularRepresentationError(
            "representation change is singular: |1/p_k| below 1e-12");

    PhasePoint x;
    x.q.resize(n);
    x.p.resize(n);
    x.s = new_point.q[0];
    x.q[k - 1] = new_point.s;
    x.p[k - 1] = 1.0 / p1;
    int slot = 1;
    for (int j = 1; j <= n; ++j) {
        if (j == k)
            continue;
        x.q[j - 1] = new_point.q[slot];
        x.p[j - 1] = -new_point.p[slot] / p1;
        ++slot;
    }
    return x;
}

} // namespace

PhasePoint RepresentationTransform::to_new_chart(const PhasePoint& old_point) const
{
    return chart_to_new(old_point, k);
}

PhasePoint RepresentationTransform::to_old_chart(const PhasePoint& new_point) const
{
    return chart_to_old(new_point, k);
}

RepresentationTransform transform_hamiltonian_representation(const ContactHamiltonian& h, int k)
{
    RepresentationTransform tr;
    tr.k = k;
    tr.transformed.name = h.name + " in q" + std::to_string(k) + "-representation";
    tr.transformed.value = [h, k](const PhasePoint& y) {
        const PhasePoint x = chart_to_old(y, k);
        return -h.value(x) / x.p[k - 1];
    };
    // Gradient falls back to central differences in the new chart.
    return tr;
}

MassieuResult massieu_potential(double T, double V, double N, const IdealGasParams& params)
{
    require_positive(T, "massieu_potential: T");
    require_positive(V, "massieu_potential: V");
    require_positive(N, "massieu_potential: N");
    MassieuResult r;
    r.Psi = N * std::log(params.K() * std::pow(params.C, params.C) * V *
                         std::pow(T, params.C) / N) +
            N;
    r.U = params.C * N * T;               // T^2 dPsi/dT
    r.P = N * T / V;                      // T dPsi/dV
    r.mu = -T * (r.Psi / N - 1.0);        // -T dPsi/dN
    return r;
}

RegularityResult legendre_regularity(const Eigen::MatrixXd& hessian_block)
{
    if (hessian_block.rows() != hessian_block.cols() || hessian_block.rows() == 0)
        throw std::invalid_argument("legendre_regularity: block must be square and nonempty");
    RegularityResult r;
    r.det = hessian_block.determinant();
    r.regular = std::abs(r.det) > kRegularityFloor;
    return r;
}

GasState interacting_state(const GasState& base, const InteractionParams& ip)
{
    GasState st = base;
    st.U = base.U - ip.a * ip.t / base.V;
    st.P = base.P - ip.a * ip.t / (base.V * base.V);
    return st;
}

} // namespace contactflow
