#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "crsch/curvature.hpp"
#include "crsch/mobius.hpp"

using namespace crsch;

namespace {

std::vector<double> random_point(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> U(-0.6, 0.6);
    std::vector<double> p(2 * n + 1);
    for (double& c : p) c = U(rng);
    return p;
}

cplx random_cplx(std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> U(-scale, scale);
    double re = U(rng), im = U(rng);
    return {re, im};
}

JLParams random_params(std::mt19937_64& rng, int n) {
    JLParams P;
    P.kappa = random_cplx(rng);
    P.lambda = random_cplx(rng) + cplx(0, 1.5);  // keep G away from zero near the origin
    P.mu.resize(n);
    for (cplx& m : P.mu) m = random_cplx(rng, 0.5);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    P.c = U(rng);
    return P;
}

cplx G_value(const JLParams& P, const std::vector<double>& p) {
    const int n = (static_cast<int>(p.size()) - 1) / 2;
    double t = p[2 * n], z2 = 0;
    cplx zdotmu = 0;
    for (int a = 0; a < n; ++a) {
        cplx z(p[2 * a], p[2 * a + 1]);
        z2 += std::norm(z);
        if (!P.mu.empty()) zdotmu += z * P.mu[a];
    }
    return P.kappa * cplx(t, z2) + zdotmu + P.lambda;
}

}  // namespace

TEST_CASE("closed-form values of the solution family field") {
    JLParams unit;  // kappa=1, lambda=i
    unit.kappa = 1;
    unit.lambda = cplx(0, 1);
    ScalarField phi = field_from_expr(jl_field(unit, 2));
    CHECK(std::abs(phi.eval(seed_jet({0, 0, 0, 0, 0}, 1)).value()) < 1e-12);

    JLParams constant;  // kappa=0, lambda=1, c=3
    constant.lambda = 1;
    constant.c = 3;
    ScalarField c3 = field_from_expr(jl_field(constant, 1));
    CHECK(std::abs(c3.eval(seed_jet({0.4, -0.2, 0.3}, 1)).value() - 3.0) < 1e-12);

    JLParams grad;  // kappa=0, mu=(2,0), lambda=1: phi_1 = -mu_1/2 = -1 at z=0
    grad.mu = {2, 0};
    grad.lambda = 1;
    ScalarField g = field_from_expr(jl_field(grad, 2));
    CovariantDerivatives cd = covariant_jet(make_heisenberg(2), g, {0, 0, 0, 0, 0.2}, 1);
    CHECK(std::abs(cd.d_hol[0] - cplx(-1, 0)) < 1e-12);
    CHECK(std::abs(cd.d_hol[1]) < 1e-12);
}

TEST_CASE("all-zero parameters are rejected") {
    CHECK_THROWS_AS(jl_field(JLParams{}, 2), ConfigError);
}

TEST_CASE("closed-form invariants and the numeric curvature agree") {
    JLParams unit;
    unit.kappa = 1;
    unit.lambda = cplx(0, 1);
    JLInvariants inv = jl_invariants(unit, 2);
    CHECK(inv.scalar == doctest::Approx(24.0).epsilon(1e-12));
    CHECK(inv.eta == doctest::Approx(-4.0).epsilon(1e-12));

    JLParams neg;
    neg.mu = {2, 0};
    neg.lambda = 1;
    JLInvariants ninv = jl_invariants(neg, 2);
    CHECK(ninv.scalar == doctest::Approx(-24.0).epsilon(1e-12));
    CHECK(ninv.eta == doctest::Approx(4.0).epsilon(1e-12));

    JLParams homothety;
    homothety.lambda = 1;
    CHECK(std::abs(jl_invariants(homothety, 3).scalar) < 1e-12);

    // numeric cross-check including the e^{-2c} homothety factor
    std::mt19937_64 rng(41);
    for (int k = 0; k < 3; ++k) {
        JLParams P = random_params(rng, 2);
        Model m = apply_conformal(make_heisenberg(2), field_from_expr(jl_field(P, 2)));
        std::vector<double> p = random_point(rng, 2);
        if (std::abs(G_value(P, p)) < 0.1) continue;
        Curvature C = curvature_at(m, p);
        JLInvariants inv2 = jl_invariants(P, 2);
        CHECK(C.scalar == doctest::Approx(inv2.scalar).epsilon(1e-7));
        CHECK(C.constant_curvature);
        CHECK(C.eta == doctest::Approx(inv2.eta).epsilon(1e-6));
    }
}

TEST_CASE("the solution family solves the Moebius equation away from the singular set") {
    std::mt19937_64 rng(43);
    for (int n : {1, 2, 3}) {
        Model m = make_heisenberg(n);
        for (int draw = 0; draw < 4; ++draw) {
            JLParams P = random_params(rng, n);
            ScalarField phi = field_from_expr(jl_field(P, n));
            std::vector<std::vector<double>> samples;
            while (samples.size() < 10) {
                std::vector<double> p = random_point(rng, n);
                if (std::abs(G_value(P, p)) > 0.1) samples.push_back(p);
            }
            MobiusReport rep = mobius_residual(m, phi, samples);
            CHECK(rep.max_b < 1e-9);
            CHECK(rep.max_P < 1e-9);
        }
    }
}

TEST_CASE("witness construction hits a prescribed gradient exactly") {
    SUBCASE("closed-form instances") {
        JLParams w0 = integrability_witness(2, {0, 0, 0, 0, 0}, {cplx(0, 0), cplx(0, 0)});
        CHECK(std::abs(w0.lambda - 1.0) < 1e-15);
        CHECK(std::abs(w0.mu[0]) + std::abs(w0.mu[1]) < 1e-15);

        JLParams w1 = integrability_witness(2, {0, 0, 0, 0, 0}, {cplx(1, 0), cplx(0, 0)});
        CHECK(std::abs(w1.mu[0] - cplx(-2, 0)) < 1e-15);
        CHECK(std::abs(w1.lambda - 1.0) < 1e-15);

        JLParams w2 = integrability_witness(1, {1, 0, 0.3}, {cplx(0, 1)});
        CHECK(std::abs(w2.mu[0] - cplx(0, -2)) < 1e-15);
        CHECK(std::abs(w2.lambda - (1.0 - cplx(1, 0) * cplx(0, -2))) < 1e-15);
    }
    SUBCASE("round trip over random targets") {
        std::mt19937_64 rng(47);
        for (int n : {1, 2, 3}) {
            Model m = make_heisenberg(n);
            for (int k = 0; k < 10; ++k) {
                std::vector<double> p = random_point(rng, n);
                std::vector<cplx> omega(n);
                for (cplx& w : omega) w = random_cplx(rng);
                JLParams P = integrability_witness(n, p, omega);
                CHECK(std::abs(G_value(P, p) - 1.0) < 1e-12);
                ScalarField phi = field_from_expr(jl_field(P, n));
                CovariantDerivatives cd = covariant_jet(m, phi, p, 1);
                for (int a = 0; a < n; ++a) CHECK(std::abs(cd.d_hol[a] - omega[a]) < 1e-12);
            }
        }
    }
    SUBCASE("arity mismatches are rejected") {
        CHECK_THROWS_AS(integrability_witness(2, {0, 0, 0, 0, 0}, {cplx(1, 0)}), ConfigError);
        CHECK_THROWS_AS(integrability_witness(2, {0, 0, 0}, {cplx(1, 0), cplx(0, 0)}), ConfigError);
    }
}

TEST_CASE("classical Schwarzian derivative closed forms") {
    std::mt19937_64 rng(53);
    SUBCASE("Moebius maps have vanishing Schwarzian") {
        for (int k = 0; k < 10; ++k) {
            cplx a = random_cplx(rng), b = random_cplx(rng);
            cplx c = random_cplx(rng), d = random_cplx(rng);
            if (std::abs(a * d - b * c) < 0.1) continue;
            FieldExprPtr f = fe_div(fe_add(fe_mul(fe_lit(a), fe_z(0)), fe_lit(b)),
                                    fe_add(fe_mul(fe_lit(c), fe_z(0)), fe_lit(d)));
            cplx z = random_cplx(rng);
            if (std::abs(c * z + d) < 0.2) continue;
            CHECK(std::abs(classical_schwarzian(f, z)) < 1e-10);
        }
    }
    SUBCASE("exponential and square") {
        FieldExprPtr ez = fe_fn(FnKind::Exp, fe_z(0));
        CHECK(std::abs(classical_schwarzian(ez, cplx(0.7, -0.3)) - cplx(-0.5, 0)) < 1e-12);
        FieldExprPtr z2 = fe_pow(fe_z(0), 2);
        CHECK(std::abs(classical_schwarzian(z2, cplx(1, 0)) - cplx(-1.5, 0)) < 1e-12);
    }
    SUBCASE("critical points and non-holomorphic input are rejected") {
        CHECK_THROWS_AS(classical_schwarzian(fe_pow(fe_z(0), 2), cplx(0, 0)), DomainError);
        CHECK_THROWS_AS(classical_schwarzian(fe_zbar(0), cplx(1, 0)), ConfigError);
    }
}

TEST_CASE("rigid-hypersurface reduction of the Schwarzian") {
    ScalarField flat = field_from_text("abs2(z1)");
    ScalarField quartic = field_from_text("abs2(z1) + abs2(z1)^2/4");
    ScalarField sextic = field_from_text("abs2(z1) + abs2(z1)^3/10");

    SUBCASE("Moebius data have vanishing b11 on all backgrounds") {
        ScalarField moebius = field_from_text("-log(abs2((1+0.5i)*z1 + 2))/2");
        std::mt19937_64 rng(59);
        for (const ScalarField* Phi : {&flat, &quartic, &sextic})
            for (int k = 0; k < 5; ++k) {
                std::vector<double> p = random_point(rng, 1);
                Example2Result r = example2_identity(*Phi, moebius, p);
                CHECK(std::abs(r.b11) < 1e-9);
                CHECK(r.mixed_max < 1e-9);
            }
    }
    SUBCASE("flat reduction hand value") {
        Example2Result r = example2_identity(flat, field_from_text("re(z1)"), {0.2, -0.1, 0.0});
        CHECK(std::abs(r.b11 - cplx(-1, 0)) < 1e-10);
        CHECK(std::abs(r.s_classical - cplx(-1, 0)) < 1e-12);
    }
    SUBCASE("quartic background: sigma cancels the Christoffel term") {
        Example2Result r = example2_identity(quartic, field_from_text("re(z1)"), {1.0, 0.0, 0.0});
        CHECK(std::abs(r.b11 - cplx(-1, 0)) < 1e-9);
    }
    SUBCASE("one ratio constant across fields and backgrounds") {
        std::vector<ScalarField> fields = {
            field_from_text("re(z1)"),        field_from_text("re(z1^2)"),
            field_from_text("im(z1^3)"),      field_from_text("re(exp(z1))"),
            field_from_text("re(z1) + im(z1^2)/3")};
        std::mt19937_64 rng(61);
        cplx ref(0, 0);
        bool have_ref = false;
        for (const ScalarField* Phi : {&flat, &quartic, &sextic})
            for (const ScalarField& f : fields) {
                std::vector<double> p = random_point(rng, 1);
                Example2Result r = example2_identity(*Phi, f, p);
                if (std::abs(r.s_classical) < 0.05) continue;
                CHECK(r.mixed_max < 1e-9);
                if (!have_ref) {
                    ref = r.ratio;
                    have_ref = true;
                } else {
                    CHECK(std::abs(r.ratio - ref) < 1e-7);
                }
            }
        CHECK(have_ref);
        MESSAGE("recorded ratio b11 / S(f) = ", ref.real(), " + ", ref.imag(), "i");
    }
    SUBCASE("non-harmonic data are rejected") {
        CHECK_THROWS_AS(example2_identity(flat, field_from_text("abs2(z1)"), {0.3, 0.1, 0.0}),
                        ConfigError);
    }
}

TEST_CASE("rank-two lemma forces the scalar to vanish") {
    RankLemmaResult same = rank_lemma_lambda({cplx(1, 0), cplx(0, 0)}, {cplx(1, 0), cplx(0, 0)});
    CHECK(same.is_scalar);
    CHECK(std::abs(same.lambda) < 1e-15);

    RankLemmaResult off = rank_lemma_lambda({cplx(1, 0), cplx(0, 0)}, {cplx(0, 0), cplx(1, 0)});
    CHECK_FALSE(off.is_scalar);

    std::mt19937_64 rng(67);
    for (int k = 0; k < 200; ++k) {
        std::vector<cplx> U = {random_cplx(rng), random_cplx(rng), random_cplx(rng)};
        std::vector<cplx> V = {random_cplx(rng), random_cplx(rng), random_cplx(rng)};
        RankLemmaResult r = rank_lemma_lambda(U, V);
        if (r.is_scalar) CHECK(std::abs(r.lambda) < 1e-10);
    }
    CHECK_THROWS_AS(rank_lemma_lambda({cplx(1, 0)}, {cplx(1, 0)}), ConfigError);
}

TEST_CASE("conformal rescaling by a family solution preserves zero torsion") {
    std::mt19937_64 rng(71);
    for (int n : {1, 2}) {
        JLParams P = random_params(rng, n);
        Model m = apply_conformal(make_heisenberg(n), field_from_expr(jl_field(P, n)));
        for (int k = 0; k < 5; ++k) {
            std::vector<double> p = random_point(rng, n);
            if (std::abs(G_value(P, p)) < 0.1) continue;
            FramePoint F = frame_point_at(m, p);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) CHECK(std::abs(F.A[a][b].value()) < 1e-9);
        }
    }
}

TEST_CASE("two family solutions compose additively as conformal factors") {
    std::mt19937_64 rng(73);
    Model m = make_heisenberg(2);
    for (int k = 0; k < 8; ++k) {
        JLParams P1 = random_params(rng, 2);
        JLParams P2 = random_params(rng, 2);
        ScalarField f1 = field_from_expr(jl_field(P1, 2));
        ScalarField f2 = field_from_expr(jl_field(P2, 2));
        std::vector<double> p = random_point(rng, 2);
        if (std::abs(G_value(P1, p)) < 0.1 || std::abs(G_value(P2, p)) < 0.1) continue;
        CHECK(additivity_residual(m, f1, f2, p) < 1e-8);
    }
}
