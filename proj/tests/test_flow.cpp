#include "liouville/flow.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace liouville;

namespace {

Polynomial harmonic(const Frame& f) {
    Polynomial h(f.dimension());
    for (int g = 0; g < f.dimension(); ++g) h += Rational(1, 2) * (coordinate(f, g) * coordinate(f, g));
    return h;
}

State unit(int dim, int g) {
    State e(dim, 0);
    e[g] = 1;
    return e;
}

// Eigenvalues of a real 2x2 matrix are real, positive and distinct.
bool positive_distinct_spectrum(long double a, long double b, long double c, long double d) {
    const long double tr = a + d, det = a * d - b * c;
    const long double disc = tr * tr - 4 * det;
    return disc > 0 && det > 0 && tr > 0;
}

} // namespace

TEST_CASE("flow config validation") {
    CHECK_THROWS_AS((FlowConfig{1, 0}).validate(), DomainError);
    CHECK_THROWS_AS((FlowConfig{-1, 1e-3L}).validate(), DomainError);
    CHECK((FlowConfig{10, 1e-3L}).steps() == 10000);
    CHECK((FlowConfig{1, 0.3L}).steps() == 4);
    CHECK((FlowConfig{0, 0.1L}).steps() == 0);
}

TEST_CASE("harmonic oscillator closes its orbit after 2 pi") {
    const Frame f(1);
    const PolyVectorField x = hamiltonian_field(f, harmonic(f));
    const long double two_pi = 2 * std::numbers::pi_v<long double>;
    const Trajectory tr = integrate(x, {1, 0}, FlowConfig{two_pi, 1e-3L});
    REQUIRE(tr.status == FlowStatus::ok);
    CHECK(tr.times.back() == two_pi);
    CHECK(std::fabs(tr.states.back()[0] - 1) < 1e-8L);
    CHECK(std::fabs(tr.states.back()[1]) < 1e-8L);
    // Closed-form samples along the way: q = cos t, p = -sin t.
    for (std::size_t i = 0; i < tr.times.size(); i += 500) {
        CHECK(std::fabs(tr.states[i][0] - std::cos(tr.times[i])) < 1e-10L);
        CHECK(std::fabs(tr.states[i][1] + std::sin(tr.times[i])) < 1e-10L);
    }
}

TEST_CASE("zero field gives a constant trajectory") {
    const Frame f(2);
    const Trajectory tr = integrate(PolyVectorField(f), {1, 2, 3, 4}, FlowConfig{1, 0.1L});
    for (const auto& s : tr.states) CHECK(s == State{1, 2, 3, 4});
}

TEST_CASE("blow-up is reported, not thrown") {
    const Frame f(1);
    // qdot = q^2 from q = 1 blows up at t = 1.
    const Polynomial q = coordinate(f, 0);
    const PolyVectorField x(f, {q * q, Polynomial(2)});
    const Trajectory tr = integrate(x, {1, 0}, FlowConfig{2, 1e-3L});
    CHECK(tr.status == FlowStatus::blow_up);
    REQUIRE(tr.blow_up_time.has_value());
    CHECK(*tr.blow_up_time < 1.01L);
    const TangentPath tp = tangent_flow(x, {1, 0}, FlowConfig{2, 1e-3L});
    CHECK(tp.status == FlowStatus::blow_up);
}

TEST_CASE("linear system with positive spectrum stays bounded") {
    // qddot = -K q with K = [[3, 1], [1/2, 2]]: eigenvalues (5 +- sqrt 3)/2.
    const std::vector<std::vector<Rational>> k{{3, 1}, {Rational(1, 2), 2}};
    REQUIRE(positive_distinct_spectrum(3, 1, 0.5L, 2));
    const LinearSystemSpec sys = build_linear_system(k);
    const Trajectory tr = integrate(sys.field, {1, -1, 0.5L, 0.2L}, FlowConfig{50, 1e-2L});
    long double worst = 0;
    for (const auto& s : tr.states)
        for (auto v : s) worst = std::max(worst, std::fabs(v));
    CHECK(worst < 10);
}

TEST_CASE("tangent flow: dilation has det J = e^t") {
    const Frame f(1);
    const PolyVectorField x(f, {coordinate(f, 0), Polynomial(2)});
    const TangentPath p = tangent_flow(x, {0.5L, 0.5L}, FlowConfig{2, 1e-3L});
    for (std::size_t i = 0; i < p.times.size(); i += 100) {
        CHECK(std::fabs(determinant(p.jacobians[i], 2) - std::exp(p.times[i])) < 1e-6L);
        CHECK(std::fabs(p.log_volume[i] - p.times[i]) < 1e-12L);
    }
}

TEST_CASE("tangent flow of Hamiltonian fields is symplectic and unimodular") {
    const Frame f(2);
    const Polynomial q1 = coordinate(f, f.q(0)), q2 = coordinate(f, f.q(1));
    const Polynomial h = harmonic(f) + Rational(1, 10) * (q1 * q1 * q2);
    const PolyVectorField x = hamiltonian_field(f, h);
    const TangentPath p = tangent_flow(x, {0.3L, -0.2L, 0.1L, 0.4L}, FlowConfig{10, 1e-3L});
    REQUIRE(p.status == FlowStatus::ok);
    CHECK(p.max_det_defect < 1e-8L);
    CHECK(max_symplecticity_defect(f, p) < 1e-7L);
}

TEST_CASE("variational consistency: det J against exp of the integrated trace") {
    const Frame f(1);
    const Polynomial q = coordinate(f, 0), pp = coordinate(f, 1);
    // Non-volume-preserving nonlinear field.
    const PolyVectorField x(f, {pp - Rational(1, 5) * q * q, q * pp - q});
    for (long double dt : {1e-2L, 5e-3L}) {
        const TangentPath p = tangent_flow(x, {0.4L, 0.1L}, FlowConfig{2, dt});
        REQUIRE(p.status == FlowStatus::ok);
        long double worst = 0;
        for (std::size_t i = 0; i < p.times.size(); ++i)
            worst = std::max(worst, std::fabs(determinant(p.jacobians[i], 2) -
                                              std::exp(p.log_volume[i])));
        // O(dt^4) with a modest constant.
        CHECK(worst < 10 * dt * dt * dt * dt);
    }
}

TEST_CASE("divergence-free bundled systems keep det J = 1") {
    const LinearSystemSpec sys = coupled_oscillators(1, 2, 1);
    REQUIRE(divergence(sys.field).is_zero());
    const TangentPath p = tangent_flow(sys.field, {0.3L, -0.2L, 0.1L, 0.5L}, FlowConfig{10, 1e-3L}, false);
    CHECK(p.max_det_defect < 1e-6L);
    CHECK(p.jacobians.size() == 2);
}

TEST_CASE("fourth-order convergence under step halving") {
    const Frame f(1);
    const PolyVectorField x = hamiltonian_field(f, harmonic(f));
    auto error = [&](long double dt) {
        const Trajectory tr = integrate(x, {1, 0}, FlowConfig{5, dt});
        return std::hypot(tr.states.back()[0] - std::cos(5.0L), tr.states.back()[1] + std::sin(5.0L));
    };
    const long double r = error(0.02L) / error(0.01L);
    CHECK(r > 14);
    CHECK(r < 18);
    // The determinant drift of RK4 on a linear trace-free system is smaller
    // still: det R(hA) - 1 = O(h^6) per step, so halving gives about 2^5.
    auto drift = [&](long double dt) {
        return tangent_flow(x, {1, 0}, FlowConfig{5, dt}, false).max_det_defect;
    };
    const long double rd = drift(0.1L) / drift(0.05L);
    CHECK(rd >= 12);
}

TEST_CASE("chain integrals of coordinate patches") {
    const Frame f1(1);
    // (q, p) orientation gives -1, (p, q) gives +1.
    const long double qp = chain_integral(f1, ChainPatch::affine({0, 0}, {unit(2, 0), unit(2, 1)}), 1).value;
    const long double pq = chain_integral(f1, ChainPatch::affine({0, 0}, {unit(2, 1), unit(2, 0)}), 1).value;
    CHECK(std::fabs(qp + 1) < 1e-15L);
    CHECK(std::fabs(pq - 1) < 1e-15L);

    const Frame f2(2);
    // Lagrangian square in (q1, q2).
    const auto lag = chain_integral(f2, ChainPatch::affine({0, 0, 0, 0}, {unit(4, 0), unit(4, 1)}), 1);
    CHECK(lag.value == 0);
    CHECK_FALSE(lag.degenerate);
    // Unit 4-cube ordered (q1, p1, q2, p2).
    const auto cube = ChainPatch::affine({0, 0, 0, 0}, {unit(4, 0), unit(4, 2), unit(4, 1), unit(4, 3)});
    CHECK(std::fabs(chain_integral(f2, cube, 2).value - 1) < 1e-15L);
    // Degenerate patch.
    const auto flat = ChainPatch::affine({0, 0, 0, 0}, {unit(4, 0), unit(4, 0)});
    const auto d = chain_integral(f2, flat, 1);
    CHECK(d.degenerate);
    CHECK(d.value == 0);
    // l must match the patch.
    CHECK_THROWS_AS(chain_integral(f2, cube, 1), DomainError);
}

TEST_CASE("chain integral matches the Pfaffian oracle on skew boxes") {
    std::mt19937 rng(61);
    std::uniform_real_distribution<double> u(-1, 1);
    const Frame f(3);
    for (int l = 1; l <= 3; ++l)
        for (int trial = 0; trial < 4; ++trial) {
            std::vector<State> edges(2 * l, State(6));
            std::vector<std::vector<long double>> v(2 * l, std::vector<long double>(6));
            for (int a = 0; a < 2 * l; ++a)
                for (int g = 0; g < 6; ++g) v[a][g] = edges[a][g] = static_cast<double>(u(rng));
            ChainPatch p = ChainPatch::affine(State(6, 0), edges, 2);
            CHECK(std::fabs(chain_integral(f, p, l).value - oracle::volume_density(3, v)) < 1e-14L);
        }
}

TEST_CASE("chain integral is invariant under orientation-preserving reparametrization") {
    const Frame f(1);
    // sigma(u, v) = (q, p) with a curved patch, then u -> u + u(1-u)/2.
    const int vars = 2;
    const Polynomial u = Polynomial::variable(vars, 0), v = Polynomial::variable(vars, 1);
    const Polynomial one(vars, 1);
    ChainPatch base;
    base.l = 1;
    base.order = 8;
    base.map = {u + Rational(1, 3) * v * v, v + Rational(1, 4) * u * v};
    const Polynomial w = u + Rational(1, 2) * u * (one - u);
    auto compose = [&](const Polynomial& p) {
        // Substitute u -> w into a polynomial in (u, v).
        Polynomial out(vars);
        for (const auto& [m, c] : p.terms()) {
            Polynomial t(vars, c);
            for (int e = 0; e < m.exponents[0]; ++e) t = t * w;
            for (int e = 0; e < m.exponents[1]; ++e) t = t * v;
            out += t;
        }
        return out;
    };
    ChainPatch re = base;
    re.map = {compose(base.map[0]), compose(base.map[1])};
    const long double a = chain_integral(f, base, 1).value;
    const long double b = chain_integral(f, re, 1).value;
    CHECK(std::fabs(a - b) < 1e-8L);
    // Reversing orientation flips the sign.
    ChainPatch rev = base;
    rev.sign = -1;
    CHECK(chain_integral(f, Chain{base, rev}, 1).value == 0);
}

TEST_CASE("conservation reports") {
    const Frame f(2);
    const PolyVectorField xh = hamiltonian_field(f, harmonic(f));
    const Chain square{ChainPatch::affine({0, 0, 0, 0}, {unit(4, 0), unit(4, 2)})};
    const Chain cube{ChainPatch::affine({0, 0, 0, 0}, {unit(4, 0), unit(4, 2), unit(4, 1), unit(4, 3)})};
    const FlowConfig cfg{1, 1e-3L};

    const auto h1 = verify_area_preservation(xh, square, 1, 1, cfg);
    CHECK(h1.hypothesis_met);
    CHECK(h1.rel_drift < 1e-6L);
    CHECK(h1.abs_drift == doctest::Approx(static_cast<double>(h1.final_value - h1.initial)).epsilon(1e-12));
    REQUIRE(h1.max_det_defect.has_value());

    const LinearSystemSpec sys = coupled_oscillators(1, 2, 1);
    const auto c1 = verify_area_preservation(sys.field, square, 1, 1, cfg);
    CHECK_FALSE(c1.hypothesis_met);
    CHECK(c1.rel_drift > 1e-3L);
    const auto c2 = verify_area_preservation(sys.field, cube, 2, 2, cfg);
    CHECK(c2.hypothesis_met);
    CHECK(c2.rel_drift < 1e-6L);

    // X = 0: no drift at all.
    const auto z = verify_area_preservation(PolyVectorField(f), cube, 2, 2, cfg);
    CHECK(z.abs_drift == 0);
    CHECK(z.initial == z.final_value);

    // Non-divergence-free field: no det report, hypothesis violated at l = n.
    const PolyVectorField dil(f, {coordinate(f, 0), Polynomial(4), Polynomial(4), Polynomial(4)});
    const auto dr = verify_area_preservation(dil, cube, 2, 2, cfg);
    CHECK_FALSE(dr.hypothesis_met);
    CHECK_FALSE(dr.max_det_defect.has_value());
    CHECK(std::fabs(dr.final_value - std::exp(1.0L)) < 1e-9L);
}

TEST_CASE("reports are deterministic") {
    const LinearSystemSpec sys = coupled_oscillators(1, 2, 1);
    const Chain cube{ChainPatch::affine({0, 0, 0, 0}, {unit(4, 0), unit(4, 2), unit(4, 1), unit(4, 3)})};
    const auto a = verify_area_preservation(sys.field, cube, 2, 2, FlowConfig{1, 1e-2L});
    const auto b = verify_area_preservation(sys.field, cube, 2, 2, FlowConfig{1, 1e-2L});
    CHECK(a.final_value == b.final_value);
    CHECK(a.max_det_defect == b.max_det_defect);
}
