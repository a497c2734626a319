#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "crsch/field_expr.hpp"
#include "crsch/jet.hpp"

using namespace crsch;

namespace {

Jet random_jet(std::mt19937_64& rng, const std::shared_ptr<const JetSpace>& sp) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Jet j = Jet::constant(sp, 0.0);
    // Build from coordinates and constants so we stay inside the public API.
    std::vector<cplx> c(sp->size());
    Jet acc = Jet::constant(sp, cplx(dist(rng), dist(rng)));
    for (int v = 0; v < sp->nvars(); ++v) {
        Jet coord = Jet::coordinate(sp, v, dist(rng));
        acc = acc + Jet::constant(sp, cplx(dist(rng), dist(rng))) * coord +
              coord * coord * Jet::constant(sp, cplx(dist(rng), dist(rng)));
    }
    return acc;
}

double max_coeff_diff(const Jet& a, const Jet& b) {
    double m = 0;
    for (size_t i = 0; i < a.coeffs().size(); ++i) m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
    return m;
}

}  // namespace

TEST_CASE("seeding: coordinate jets carry base value and unit derivative") {
    JetPoint jp = seed_jet({0, 0, 0}, 2);
    Jet tj = jp.t();
    CHECK(tj.value() == cplx(0, 0));
    CHECK(tj.taylor_coeff({0, 0, 1}) == cplx(1, 0));
    CHECK(tj.taylor_coeff({1, 0, 0}) == cplx(0, 0));

    JetPoint jp2 = seed_jet({1, 2, 3}, 1);
    CHECK(jp2.vars[0].value() == cplx(1, 0));

    CHECK_THROWS_AS(seed_jet({1, 2, 3, 4}, 2), ConfigError);
    CHECK_THROWS_AS(seed_jet({1, 2, 3}, 0), ConfigError);
    CHECK_THROWS_AS(seed_jet({1, 2, 3}, 5), ConfigError);
}

TEST_CASE("polynomial Taylor coefficients are exact") {
    // |z1|^2 = x^2 + y^2 at (1,0,0): value 1, d/dx = 2, d2/dx2 coeff = 1
    JetPoint jp = seed_jet({1, 0, 0}, 2);
    Jet f = jp.vars[0] * jp.vars[0] + jp.vars[1] * jp.vars[1];
    CHECK(f.value() == cplx(1, 0));
    CHECK(f.taylor_coeff({1, 0, 0}) == cplx(2, 0));
    CHECK(f.taylor_coeff({2, 0, 0}) == cplx(1, 0));
    CHECK(f.taylor_coeff({0, 0, 1}) == cplx(0, 0));
}

TEST_CASE("wirtinger extraction") {
    JetPoint jp = seed_jet({0.3, -0.7, 0.2}, 2);
    Jet z = jp.z(0);
    Jet zb = jp.zbar(0);
    CHECK(std::abs(wirtinger_coeff(z, {1}, {0}, 0) - cplx(1, 0)) < 1e-14);
    CHECK(std::abs(wirtinger_coeff(zb, {1}, {0}, 0)) < 1e-14);
    CHECK(std::abs(wirtinger_coeff(zb, {0}, {1}, 0) - cplx(1, 0)) < 1e-14);
    Jet zz = z * zb;  // |z1|^2
    CHECK(std::abs(wirtinger_coeff(zz, {1}, {1}, 0) - cplx(1, 0)) < 1e-14);
    CHECK_THROWS_AS(wirtinger_coeff(zz, {2}, {1}, 0), ConfigError);
}

TEST_CASE("ring axioms hold componentwise on random jets") {
    std::mt19937_64 rng(12345);
    auto sp = JetSpace::get(3, 4);
    for (int iter = 0; iter < 50; ++iter) {
        Jet a = random_jet(rng, sp), b = random_jet(rng, sp), c = random_jet(rng, sp);
        Jet lhs = (a * b) * c, rhs = a * (b * c);
        double scale = std::max(1.0, std::max(lhs.max_abs_coeff(), rhs.max_abs_coeff()));
        CHECK(max_coeff_diff(lhs, rhs) / scale < 1e-12);
        Jet dl = a * (b + c), dr = a * b + a * c;
        CHECK(max_coeff_diff(dl, dr) / scale < 1e-12);
        CHECK(max_coeff_diff(a + b, b + a) == 0.0);
    }
}

TEST_CASE("analytic functions: exp/log/inverse round trips") {
    JetPoint jp = seed_jet({0.4, -0.3, 0.1}, 4);
    Jet u = jp.constant(1.5) + jp.vars[0] * jp.vars[2] + jp.vars[1];
    Jet e = exp(log(u));
    CHECK(max_coeff_diff(e, u) < 1e-12);
    Jet inv2 = inverse(inverse(u));
    CHECK(max_coeff_diff(inv2, u) < 1e-12);
    Jet p3 = pow_int(u, 3);
    CHECK(max_coeff_diff(p3, u * u * u) < 1e-12);
    Jet pm1 = pow_int(u, -1);
    CHECK(max_coeff_diff(pm1, inverse(u)) < 1e-12);
}

TEST_CASE("singular primitives raise domain errors") {
    JetPoint jp = seed_jet({0, 0, 0}, 2);
    CHECK_THROWS_AS(log(jp.vars[0]), DomainError);
    CHECK_THROWS_AS(inverse(jp.vars[0]), DomainError);
}

TEST_CASE("derivative lowers order and multiplies factorials back") {
    JetPoint jp = seed_jet({2, 0, 0}, 3);
    Jet f = jp.vars[0] * jp.vars[0] * jp.vars[0];  // x^3
    Jet d = f.derivative(0);                       // 3x^2
    CHECK(d.order() == 2);
    CHECK(std::abs(d.value() - cplx(12, 0)) < 1e-12);
    CHECK(std::abs(d.derivative(0).value() - cplx(12, 0)) < 1e-12);
}

TEST_CASE("conjugation: jet of conj(f)") {
    JetPoint jp = seed_jet({0.5, 0.25, -1}, 2);
    Jet z = jp.z(0);
    Jet g = z.conjugated();
    CHECK(max_coeff_diff(g, jp.zbar(0)) == 0.0);
    Jet r = real_part(z);
    CHECK(max_coeff_diff(r, jp.vars[0]) < 1e-15);
    Jet im = imag_part(z);
    CHECK(max_coeff_diff(im, jp.vars[1]) < 1e-15);
    Jet a2 = abs2(z);
    CHECK(std::abs(a2.value() - cplx(0.5 * 0.5 + 0.25 * 0.25, 0)) < 1e-15);
}

TEST_CASE("jets of different orders interoperate by truncation") {
    auto sp4 = JetSpace::get(3, 4);
    auto sp2 = JetSpace::get(3, 2);
    Jet a = Jet::coordinate(sp4, 0, 1.0);
    Jet b = Jet::coordinate(sp2, 1, 2.0);
    Jet p = a * b;
    CHECK(p.order() == 2);
    CHECK(p.value() == cplx(2, 0));
    Jet tr = a.truncated(1);
    CHECK(tr.order() == 1);
    CHECK(tr.value() == cplx(1, 0));
}

TEST_CASE("finite-difference cross-check on fixed expressions") {
    // x1^2 at (1,0,0), first derivative: exact 2.
    auto e1 = parse_field_expr("re(z1)^2");
    CHECK(fd_crosscheck(*e1, {1, 0, 0}, 0, 1) < 1e-9);

    // exp(x1)*cos-like smooth combination at a generic point.
    auto e2 = parse_field_expr("exp(re(z1))*re(exp(t*1i))");
    CHECK(fd_crosscheck(*e2, {0.3, 0.1, 0.2}, 0, 1) < 1e-7);
    CHECK(fd_crosscheck(*e2, {0.3, 0.1, 0.2}, 2, 1) < 1e-7);

    auto e3 = parse_field_expr("log(re(z1)^2 + 1)");
    CHECK(fd_crosscheck(*e3, {0.5, 0.2, 0.1}, 0, 2) < 1e-5);
}

TEST_CASE("finite-difference property over random grammar draws") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> dist(-0.6, 0.6);
    std::uniform_int_distribution<int> coord(0, 2);
    for (int iter = 0; iter < 1000; ++iter) {
        double a = dist(rng), b = dist(rng), c = dist(rng);
        // Smooth, bounded family: exp/log/rational combinations of coordinates.
        std::string txt = "exp(re(z1)*" + std::to_string(a) + ") + log(abs2(z1)+2) + t*t*" +
                          std::to_string(b) + " + im(z1)*" + std::to_string(c) + "/(abs2(z1)+1)";
        auto e = parse_field_expr(txt);
        std::vector<double> p = {dist(rng), dist(rng), dist(rng)};
        int v = coord(rng);
        CHECK(fd_crosscheck(*e, p, v, 1) < 1e-5);
        CHECK(fd_crosscheck(*e, p, v, 2) < 1e-3);
    }
}

TEST_CASE("holomorphic fields kill zbar derivatives") {
    JetPoint jp = seed_jet({0.7, -0.2, 0.0}, 3);
    Jet z = jp.z(0);
    Jet f = exp(z * z + jp.constant(cplx(0.5, 0.5)) * z);
    CHECK(std::abs(wirtinger_coeff(f, {0}, {1}, 0)) < 1e-12);
    CHECK(std::abs(wirtinger_coeff(f, {1}, {1}, 0)) < 1e-12);
}
