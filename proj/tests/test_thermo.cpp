#include <doctest.h>

#include <cmath>
#include <random>

#include "contactflow/dynamics.hpp"
#include "contactflow/numdiff.hpp"
#include "contactflow/thermo.hpp"
#include "test_helpers.hpp"

using namespace contactflow;

namespace {

GasState random_equilibrium(std::mt19937& rng, const IdealGasParams& params)
{
    std::uniform_real_distribution<double> s_dist(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(0.5, 2.0);
    return energy_fundamental(s_dist(rng), pos(rng), pos(rng), params);
}

} // namespace

TEST_CASE("energy fundamental relation at the reference state")
{
    const GasState r0 = test::reference_state();
    CHECK(r0.U == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r0.T == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(r0.P == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(r0.mu == doctest::Approx(5.0 / 3.0).epsilon(1e-14));

    CHECK_THROWS_AS(energy_fundamental(0.0, -1.0, 1.0, test::default_params()),
                    std::domain_error);
    CHECK_THROWS_AS(energy_fundamental(0.0, 1.0, 0.0, test::default_params()),
                    std::domain_error);
}

TEST_CASE("first-degree homogeneity of the fundamental relations")
{
    const IdealGasParams params = test::default_params();
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> s_dist(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(0.5, 2.0);
    for (double lambda : {0.5, 2.0, 3.0}) {
        for (int i = 0; i < 20; ++i) {
            const double S = s_dist(rng), V = pos(rng), N = pos(rng);
            const double u1 = energy_fundamental(S, V, N, params).U;
            const double u2 = energy_fundamental(lambda * S, lambda * V, lambda * N, params).U;
            CHECK(std::abs(u2 - lambda * u1) / std::abs(lambda * u1) <= 1e-12);
        }
    }
    CHECK(energy_fundamental(0.0, 2.0, 2.0, params).U == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("gas laws hold along the fundamental relation")
{
    const IdealGasParams params = test::default_params();
    std::mt19937 rng(6);
    for (int i = 0; i < 100; ++i) {
        const GasState st = random_equilibrium(rng, params);
        const auto [pv, eq] = gas_law_residuals(st, params);
        CHECK(std::abs(pv) <= 1e-12 * std::max(1.0, st.U));
        CHECK(std::abs(eq) <= 1e-12 * std::max(1.0, st.U));
        CHECK(std::abs(euler_residual(st)) <= 1e-12 * std::max(1.0, st.U));
        CHECK(st.T * st.beta() == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("entropy fundamental relation and the round trip")
{
    const IdealGasParams params = test::default_params();
    const GasState e0 = entropy_fundamental(1.0, 1.0, 1.0, params);
    CHECK(e0.S == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(e0.beta() == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(e0.P == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(e0.mu == doctest::Approx(5.0 / 3.0).epsilon(1e-14));

    std::mt19937 rng(8);
    for (int i = 0; i < 100; ++i) {
        const GasState a = random_equilibrium(rng, params);
        const GasState b = entropy_fundamental(a.U, a.V, a.N, params);
        CHECK(std::abs(b.S - a.S) <= 1e-10);
        CHECK(std::abs(b.T - a.T) <= 1e-10);
        CHECK(std::abs(b.P - a.P) <= 1e-10);
        CHECK(std::abs(b.mu - a.mu) <= 1e-10);
    }

    CHECK_THROWS_AS(entropy_fundamental(-1.0, 1.0, 1.0, params), std::domain_error);
}

TEST_CASE("euler residual responds linearly to perturbations")
{
    GasState r0 = test::reference_state();
    CHECK(euler_residual(r0) == doctest::Approx(0.0).epsilon(1e-14));
    r0.mu += 0.5;
    CHECK(euler_residual(r0) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("gas-law residuals of the interacting endpoint")
{
    const GasState shifted =
        interacting_state(test::reference_state(), {0.1, 2.0});
    const auto [pv, eq] = gas_law_residuals(shifted, test::default_params());
    CHECK(pv == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(eq == doctest::Approx(-0.2).epsilon(1e-12));

    GasState simple;
    simple.T = simple.P = simple.V = simple.N = 1.0;
    simple.U = test::default_params().C;
    const auto [pv2, eq2] = gas_law_residuals(simple, test::default_params());
    CHECK(pv2 == doctest::Approx(0.0));
    CHECK(eq2 == doctest::Approx(0.0));
}

TEST_CASE("representation transform reproduces the entropy Hamiltonians")
{
    const IdealGasParams params = test::default_params();
    std::mt19937 rng(12);

    SUBCASE("isochoric h maps to -S - beta mu N + gamma beta U")
    {
        const RepresentationTransform tr =
            transform_hamiltonian_representation(isochoric_energy_hamiltonian(params), 1);
        const ContactHamiltonian closed = isochoric_entropy_hamiltonian(params);
        for (int i = 0; i < 50; ++i) {
            PhasePoint y = test::random_gas_point(rng);
            if (std::abs(y.p[0]) < 0.1)
                y.p[0] = 0.5;
            CHECK(tr.transformed.value(y) ==
                  doctest::Approx(closed.value(y)).epsilon(1e-12));
        }
    }

    SUBCASE("zero Hamiltonian stays zero")
    {
        ContactHamiltonian zero{"zero", [](const PhasePoint&) { return 0.0; }, {}};
        const RepresentationTransform tr = transform_hamiltonian_representation(zero, 1);
        PhasePoint y = test::random_gas_point(rng);
        y.p[0] = 1.2;
        CHECK(tr.transformed.value(y) == doctest::Approx(0.0));
    }

    SUBCASE("h = a/V maps to -beta a/V")
    {
        const RepresentationTransform tr =
            transform_hamiltonian_representation(interacting_hamiltonian(0.1), 1);
        const ContactHamiltonian closed = interacting_entropy_hamiltonian(0.1);
        for (int i = 0; i < 50; ++i) {
            PhasePoint y = test::random_gas_point(rng);
            if (std::abs(y.p[0]) < 0.1)
                y.p[0] = -0.7;
            CHECK(tr.transformed.value(y) ==
                  doctest::Approx(closed.value(y)).epsilon(1e-12));
        }
    }

    SUBCASE("chart conversions are mutually inverse")
    {
        const RepresentationTransform tr =
            transform_hamiltonian_representation(isochoric_energy_hamiltonian(params), 1);
        for (int i = 0; i < 50; ++i) {
            PhasePoint x = test::random_gas_point(rng);
            if (std::abs(x.p[0]) < 0.1)
                x.p[0] = 0.9;
            const PhasePoint back = tr.to_old_chart(tr.to_new_chart(x));
            CHECK(back.s == doctest::Approx(x.s).epsilon(1e-12));
            for (int j = 0; j < 3; ++j) {
                CHECK(back.q[j] == doctest::Approx(x.q[j]).epsilon(1e-12));
                CHECK(back.p[j] == doctest::Approx(x.p[j]).epsilon(1e-12));
            }
        }
        // The energy-chart image of the reference state lands on the
        // entropy-chart one.
        const PhasePoint r0 = to_phase_point(test::reference_state(), GasChart::Energy);
        const PhasePoint e0 = tr.to_new_chart(r0);
        CHECK(e0.s == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(e0.q[0] == doctest::Approx(1.0));
        CHECK(e0.p[0] == doctest::Approx(1.5));
        CHECK(e0.p[1] == doctest::Approx(1.0));
        CHECK(e0.p[2] == doctest::Approx(-2.5));
    }

    SUBCASE("vanishing conjugate momentum is rejected")
    {
        const RepresentationTransform tr =
            transform_hamiltonian_representation(isochoric_energy_hamiltonian(params), 1);
        PhasePoint x = test::random_gas_point(rng);
        x.p[0] = 0.0;
        CHECK_THROWS_AS(tr.to_new_chart(x), SingularRepresentationError);
        PhasePoint y = test::random_gas_point(rng);
        y.p[0] = 1e-13;
        CHECK_THROWS_AS(tr.transformed.value(y), SingularRepresentationError);
    }

    SUBCASE("k out of range is an input error")
    {
        const RepresentationTransform tr =
            transform_hamiltonian_representation(isochoric_energy_hamiltonian(params), 5);
        CHECK_THROWS_AS(tr.to_new_chart(test::random_gas_point(rng)),
                        std::invalid_argument);
    }

    SUBCASE("k = 2 produces the volume representation")
    {
        // Promoting V gives potential V, coordinates (U, S, N) and momenta
        // (-1/P, T/P, mu/P).
        const RepresentationTransform tr =
            transform_hamiltonian_representation(isochoric_energy_hamiltonian(params), 2);
        const PhasePoint r0 = to_phase_point(test::reference_state(), GasChart::Energy);
        const PhasePoint v0 = tr.to_new_chart(r0);
        CHECK(v0.s == doctest::Approx(1.0));
        CHECK(v0.q[0] == doctest::Approx(1.0));
        CHECK(v0.q[1] == doctest::Approx(0.0));
        CHECK(v0.q[2] == doctest::Approx(1.0));
        CHECK(v0.p[0] == doctest::Approx(-1.5));
        CHECK(v0.p[1] == doctest::Approx(1.0));
        CHECK(v0.p[2] == doctest::Approx(2.5));
        // -h/p_2 = h/P, and h vanishes on the equilibrium submanifold.
        CHECK(std::abs(tr.transformed.value(v0)) <= 1e-12);
    }
}

TEST_CASE("transformed flow is equivalent to the energy-representation flow")
{
    const IdealGasParams params = test::default_params();
    const double gamma = params.gamma();
    const GasState r0 = test::reference_state();

    IntegratorConfig cfg;
    cfg.t_end = 1.0;

    const Trajectory energy_run = integrate_contact_flow(
        isochoric_energy_hamiltonian(params), to_phase_point(r0, GasChart::Energy), cfg);

    const RepresentationTransform tr =
        transform_hamiltonian_representation(isochoric_energy_hamiltonian(params), 1);
    const Trajectory entropy_run = integrate_contact_flow(
        tr.transformed, tr.to_new_chart(to_phase_point(r0, GasChart::Energy)), cfg);

    REQUIRE(energy_run.times.size() == entropy_run.times.size());
    for (std::size_t i = 0; i < energy_run.times.size(); ++i) {
        const double t = energy_run.times[i];
        // beta follows the closed form beta0 e^{(1-gamma) t}.
        const double beta = entropy_run.points[i].p[0];
        CHECK(std::abs(beta - 1.5 * std::exp((1.0 - gamma) * t)) <= 1e-6);
        // (U,V,N) run mapped through the fundamental relation lands on the
        // (S,V,N) run.
        const Vec& uq = entropy_run.points[i].q;
        const GasState mapped = entropy_fundamental(uq[0], uq[1], uq[2], params);
        CHECK(std::abs(mapped.S - energy_run.points[i].q[0]) <= 1e-6);
        CHECK(std::abs(uq[1] - energy_run.points[i].q[1]) <= 1e-6);
        CHECK(std::abs(uq[2] - energy_run.points[i].q[2]) <= 1e-6);
    }
}

TEST_CASE("massieu potential and its conjugates")
{
    const IdealGasParams params = test::default_params();
    const MassieuResult m = massieu_potential(2.0 / 3.0, 1.0, 1.0, params);
    CHECK(m.Psi == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(m.U == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.P == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(m.mu == doctest::Approx(5.0 / 3.0).epsilon(1e-12));

    std::mt19937 rng(9);
    std::uniform_real_distribution<double> pos(0.5, 2.0);
    for (int i = 0; i < 30; ++i) {
        const double T = pos(rng), V = pos(rng), N = pos(rng);

        // U recovered by numerically differentiating Psi in T. A five-point
        // stencil keeps the oracle noise well under the 1e-10 contract.
        auto psi_at = [&](double t) { return massieu_potential(t, V, N, params).Psi; };
        const double h = 1e-4 * std::max(1.0, T);
        const double dpsi_dt = (psi_at(T - 2 * h) - 8.0 * psi_at(T - h) +
                                8.0 * psi_at(T + h) - psi_at(T + 2 * h)) /
                               (12.0 * h);
        CHECK(std::abs(T * T * dpsi_dt - params.C * N * T) <= 1e-10);

        // Conjugates agree with the energy-representation state.
        const GasState st = entropy_fundamental(params.C * N * T, V, N, params);
        const MassieuResult mm = massieu_potential(T, V, N, params);
        CHECK(std::abs(mm.U - st.U) <= 1e-10);
        CHECK(std::abs(mm.P - st.P) <= 1e-10);
        CHECK(std::abs(mm.mu - st.mu) <= 1e-10);
        CHECK(std::abs(mm.Psi - (st.S - st.U / st.T)) <= 1e-10);

        // Extensivity in (V, N).
        const MassieuResult scaled = massieu_potential(T, 3.0 * V, 3.0 * N, params);
        CHECK(std::abs(scaled.Psi - 3.0 * mm.Psi) <= 1e-12 * std::max(1.0, std::abs(mm.Psi)));
    }

    CHECK_THROWS_AS(massieu_potential(-1.0, 1.0, 1.0, params), std::domain_error);
}

TEST_CASE("legendre regularity detection")
{
    const IdealGasParams params = test::default_params();

    // d2U/dS2 at the reference state via the closed-form conjugate T(S).
    auto temperature = [&](const Vec& x) {
        return energy_fundamental(x[0], 1.0, 1.0, params).T;
    };
    Eigen::MatrixXd block(1, 1);
    block(0, 0) = fd_partial(temperature, {0.0}, 0, 1e-5);
    const RegularityResult r = legendre_regularity(block);
    CHECK(r.det == doctest::Approx(4.0 / 9.0).epsilon(1e-9));
    CHECK(r.regular);

    // Linear potential: vanishing Hessian block.
    Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(2, 2);
    CHECK_FALSE(legendre_regularity(zero).regular);
    CHECK(legendre_regularity(zero).det == 0.0);

    Eigen::MatrixXd nearly = Eigen::MatrixXd::Identity(2, 2);
    nearly(1, 1) = 1e-14;
    CHECK_FALSE(legendre_regularity(nearly).regular);

    CHECK_THROWS_AS(legendre_regularity(Eigen::MatrixXd::Zero(2, 3)),
                    std::invalid_argument);
}

TEST_CASE("interacting family deformation")
{
    const GasState r0 = test::reference_state();
    const GasState end = interacting_state(r0, {0.1, 2.0});
    CHECK(end.U == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(end.P == doctest::Approx(2.0 / 3.0 - 0.2).epsilon(1e-14));
    CHECK(end.S == r0.S);
    CHECK(end.T == r0.T);
    CHECK(end.mu == r0.mu);

    const GasState same = interacting_state(r0, {0.0, 5.0});
    CHECK(same.U == r0.U);
    CHECK(same.P == r0.P);

    // The RK4 flow of h = a/V reproduces the closed-form deformation.
    IntegratorConfig cfg;
    cfg.t_end = 1.0;
    const Trajectory traj = integrate_contact_flow(
        interacting_hamiltonian(0.1), to_phase_point(r0, GasChart::Energy), cfg);
    const GasState num = to_gas_state(traj.points.back(), GasChart::Energy);
    const GasState ref = interacting_state(r0, {0.1, 1.0});
    CHECK(std::abs(num.U - ref.U) <= 1e-10);
    CHECK(std::abs(num.P - ref.P) <= 1e-10);
    CHECK(std::abs(num.S - ref.S) <= 1e-10);
}
