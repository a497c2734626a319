#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "crsch/schwarzian.hpp"

using namespace crsch;

namespace {

const char* kQuarticPhi = "abs2(z1) + abs2(z1)^2/4";

std::vector<double> random_point(std::mt19937_64& rng, int n, double shift_x1 = 0.0) {
    std::uniform_real_distribution<double> U(-0.6, 0.6);
    std::vector<double> p(2 * n + 1);
    for (double& c : p) c = U(rng);
    p[0] += shift_x1;
    return p;
}

ScalarField random_real_field(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    std::uniform_int_distribution<int> pick(0, 2 * n);
    std::uniform_int_distribution<int> nterms(2, 4);
    std::uniform_int_distribution<int> nfactors(1, 3);
    FieldExprPtr acc = fe_lit(cplx(U(rng), U(rng)));
    const int terms = nterms(rng);
    for (int t = 0; t < terms; ++t) {
        FieldExprPtr term = fe_lit(cplx(U(rng), U(rng)));
        const int fac = nfactors(rng);
        for (int f = 0; f < fac; ++f) {
            const int v = pick(rng);
            term = fe_mul(term, v < n ? fe_z(v) : v < 2 * n ? fe_zbar(v - n) : fe_t());
        }
        acc = fe_add(acc, term);
    }
    return field_from_expr(fe_fn(FnKind::Re, acc));
}

}  // namespace

TEST_CASE("Schwarzian of re(z1) on the n=2 Heisenberg group has the single closed-form entry") {
    Model m = make_heisenberg(2);
    ScalarField phi = field_from_text("re(z1)");
    std::mt19937_64 rng(3);
    for (int k = 0; k < 5; ++k) {
        Schwarzian S = schwarzian_at(m, phi, random_point(rng, 2));
        CHECK(std::abs(S.b_holo[0][0] - cplx(-1.0, 0.0)) < 1e-12);
        CHECK(std::abs(S.b_holo[0][1]) < 1e-12);
        CHECK(std::abs(S.b_holo[1][0]) < 1e-12);
        CHECK(std::abs(S.b_holo[1][1]) < 1e-12);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) CHECK(std::abs(S.b_mixed[a][b]) < 1e-12);
    }
}

TEST_CASE("constants are Moebius data on every model") {
    std::vector<Model> models = {make_heisenberg(1), make_heisenberg(3),
                                 make_rigid(1, field_from_text(kQuarticPhi))};
    for (const Model& m : models) {
        const double shift = m.kind == Model::Kind::Rigid ? 1.0 : 0.0;
        std::vector<double> p(2 * m.n + 1, 0.1);
        p[0] += shift;
        MobiusReport rep = mobius_residual(m, field_from_text("7/2"), {p});
        CHECK(rep.max_b < 1e-12);
        CHECK(rep.max_P < 1e-12);
    }
}

TEST_CASE("a Jerison-Lee field solves the Moebius equation on the n=2 Heisenberg group") {
    Model m = make_heisenberg(2);
    ScalarField phi =
        field_from_text("-log(abs2(t + (abs2(z1)+abs2(z2))*1i + 1i))/2");
    std::mt19937_64 rng(5);
    std::vector<std::vector<double>> samples;
    for (int k = 0; k < 20; ++k) samples.push_back(random_point(rng, 2));
    MobiusReport rep = mobius_residual(m, phi, samples);
    CHECK(rep.max_b < 1e-9);
    CHECK(rep.max_P < 1e-9);
}

TEST_CASE("non-Moebius fields are flagged by a nonzero residual") {
    Model m = make_heisenberg(2);
    MobiusReport rep = mobius_residual(m, field_from_text("re(z1)"), {{0, 0, 0, 0, 0}});
    CHECK(rep.max_b == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("trace-freeness and symmetries hold for every computed Schwarzian") {
    std::mt19937_64 rng(9);
    std::vector<Model> models = {make_heisenberg(1), make_heisenberg(2),
                                 make_rigid(2, field_from_text(kQuarticPhi)),
                                 apply_conformal(make_heisenberg(2),
                                                 field_from_text("re(z1*z2)/4 + t^2/8"))};
    for (const Model& m : models) {
        const double shift = m.kind == Model::Kind::Rigid ? 1.0 : 0.0;
        FramePoint probe = frame_point_at(m, random_point(rng, m.n, shift));
        for (int k = 0; k < 10; ++k) {
            std::vector<double> p = random_point(rng, m.n, shift);
            FramePoint F = frame_point_at(m, p);
            Schwarzian S = schwarzian_at(m, random_real_field(rng, m.n), p);
            cplx trace = 0;
            for (int a = 0; a < m.n; ++a)
                for (int b = 0; b < m.n; ++b) {
                    trace += F.hinv[b][a].value() * S.b_mixed[a][b];
                    CHECK(std::abs(S.b_holo[a][b] - S.b_holo[b][a]) < 1e-10);
                    CHECK(std::abs(S.b_mixed[a][b] - std::conj(S.b_mixed[b][a])) < 1e-10);
                }
            CHECK(std::abs(trace) < 1e-10);
        }
        (void)probe;
    }
}

TEST_CASE("complex-valued fields are rejected") {
    Model m = make_heisenberg(1);
    CHECK_THROWS_AS(schwarzian_at(m, field_from_text("z1"), {0.3, 0.1, 0.0}), ConfigError);
}

TEST_CASE("additivity is exact when one summand vanishes") {
    Model m = make_heisenberg(2);
    std::mt19937_64 rng(15);
    ScalarField f = random_real_field(rng, 2);
    ScalarField zero = field_from_text("0");
    std::vector<double> p = random_point(rng, 2);
    CHECK(additivity_residual(m, f, zero, p) < 1e-12);
    CHECK(additivity_residual(m, zero, f, p) < 1e-12);
}

TEST_CASE("additivity of the Schwarzian under stacked conformal factors") {
    std::mt19937_64 rng(21);
    for (int n : {1, 2}) {
        Model m = make_heisenberg(n);
        for (int k = 0; k < 15; ++k) {
            ScalarField phi = random_real_field(rng, n);
            ScalarField sig = random_real_field(rng, n);
            std::vector<double> p = random_point(rng, n);
            CHECK(additivity_residual(m, phi, sig, p) < 1e-8);
        }
    }
}

TEST_CASE("torsion transformation is governed by the holomorphic Schwarzian") {
    // i A^hat_{ab} = i A_{ab} - B(phi)_{ab}, with the rescaled-coframe factor
    // restored on the stored torsion components
    std::mt19937_64 rng(27);
    std::vector<Model> models = {make_heisenberg(2), make_rigid(1, field_from_text(kQuarticPhi))};
    const cplx I(0, 1);
    for (const Model& m : models) {
        const double shift = m.kind == Model::Kind::Rigid ? 1.0 : 0.0;
        for (int k = 0; k < 10; ++k) {
            ScalarField phi = random_real_field(rng, m.n);
            std::vector<double> p = random_point(rng, m.n, shift);
            Model mhat = apply_conformal(m, phi);
            FramePoint F = frame_point_at(m, p);
            FramePoint Fhat = frame_point_at(mhat, p);
            Schwarzian S = schwarzian_at(m, phi, p);
            double e2phi = std::exp(2.0 * phi.eval(F.jp).value().real());
            for (int a = 0; a < m.n; ++a)
                for (int b = 0; b < m.n; ++b) {
                    cplx lhs = I * e2phi * Fhat.A[a][b].value();
                    cplx rhs = I * F.A[a][b].value() - S.b_holo[a][b];
                    CHECK(std::abs(lhs - rhs) < 1e-9);
                }
        }
    }
}

TEST_CASE("a lifted classical Moebius datum has vanishing Schwarzian on the rescaled rigid model") {
    // phi = -log|a z1 + b| satisfies phi_zz - 2 phi_z^2 = 0; lifted to the
    // sigma-rescaled rigid structure it solves the Moebius equation
    Model rigid = make_rigid(1, field_from_text(kQuarticPhi));
    // sigma = -(1/4) log Phi_{z zbar} with Phi_{z zbar} = 1 + |z1|^2
    Model eta_model = apply_conformal(rigid, field_from_text("-log(1 + abs2(z1))/4"));
    ScalarField phi = field_from_text("-log(abs2((1+0.5i)*z1 + 2))/2");
    std::mt19937_64 rng(33);
    std::vector<std::vector<double>> samples;
    for (int k = 0; k < 10; ++k) samples.push_back(random_point(rng, 1, 1.0));
    MobiusReport rep = mobius_residual(eta_model, phi, samples);
    CHECK(rep.max_b < 1e-8);
}
