#include "crsch/schwarzian.hpp"

#include <cmath>

namespace crsch {

namespace {

constexpr double kRealTol = 1e-9;

void require_real(const Jet& f, const char* who) {
    if (std::abs(f.value().imag()) > kRealTol)
        throw ConfigError(std::string(who) + ": field must be real-valued");
}

}  // namespace

void schwarzian_jets(CovTable& T, std::vector<std::vector<Jet>>& b_holo,
                     std::vector<std::vector<Jet>>& b_mixed) {
    const FramePoint& F = T.frame();
    const int n = T.n();
    Jet sub = sublaplacian_jet(T);
    b_holo.assign(n, std::vector<Jet>(n, F.jp.constant(0.0)));
    b_mixed.assign(n, std::vector<Jet>(n, F.jp.constant(0.0)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            b_holo[a][b] = 2.0 * T.get({T.hol(a), T.hol(b)}) - 4.0 * T.get({T.hol(a)}) * T.get({T.hol(b)});
            b_mixed[a][b] = T.get({T.hol(a), T.bar(b)}) + T.get({T.bar(b), T.hol(a)}) -
                            (1.0 / n) * sub * F.h[a][b];
        }
}

Schwarzian schwarzian_at(const Model& m, const ScalarField& phi, const std::vector<double>& p) {
    FramePoint F = frame_point_at(m, p);
    Jet pj = phi.eval(F.jp);
    require_real(pj, "schwarzian_at");
    CovTable T(F, pj);
    std::vector<std::vector<Jet>> bh, bm;
    schwarzian_jets(T, bh, bm);

    Schwarzian S;
    S.n = F.n;
    S.frame = m.describe();
    S.b_holo.assign(F.n, std::vector<cplx>(F.n));
    S.b_mixed.assign(F.n, std::vector<cplx>(F.n));
    for (int a = 0; a < F.n; ++a)
        for (int b = 0; b < F.n; ++b) {
            S.b_holo[a][b] = bh[a][b].value();
            S.b_mixed[a][b] = bm[a][b].value();
        }
    return S;
}

ScalarField field_sum(const ScalarField& f, const ScalarField& g) {
    ScalarField s;
    auto fe = f.eval, ge = g.eval;
    s.eval = [fe, ge](const JetPoint& jp) { return fe(jp) + ge(jp); };
    if (f.expr && g.expr) s.expr = fe_add(f.expr, g.expr);
    s.desc = "(" + f.desc + ") + (" + g.desc + ")";
    return s;
}

double additivity_residual(const Model& m, const ScalarField& phi, const ScalarField& sigma,
                           const std::vector<double>& p) {
    Schwarzian total = schwarzian_at(m, field_sum(phi, sigma), p);
    Schwarzian first = schwarzian_at(m, phi, p);
    Model rescaled = apply_conformal(m, phi);
    Schwarzian second = schwarzian_at(rescaled, sigma, p);

    JetPoint jp = seed_jet(p, 1);
    double e2phi = std::exp(2.0 * phi.eval(jp).value().real());
    double worst = 0;
    for (int a = 0; a < total.n; ++a)
        for (int b = 0; b < total.n; ++b) {
            worst = std::max(worst, std::abs(total.b_holo[a][b] - first.b_holo[a][b] -
                                             e2phi * second.b_holo[a][b]));
            worst = std::max(worst, std::abs(total.b_mixed[a][b] - first.b_mixed[a][b] -
                                             e2phi * second.b_mixed[a][b]));
        }
    return worst;
}

MobiusReport mobius_residual(const Model& m, const ScalarField& phi,
                             const std::vector<std::vector<double>>& samples) {
    if (samples.empty()) throw ConfigError("mobius_residual: empty sample list");
    MobiusReport rep;
    for (const std::vector<double>& p : samples) {
        FramePoint F = frame_point_at(m, p);
        Jet pj = phi.eval(F.jp);
        require_real(pj, "mobius_residual");
        CovTable T(F, pj);
        std::vector<std::vector<Jet>> bh, bm;
        schwarzian_jets(T, bh, bm);
        for (int a = 0; a < F.n; ++a)
            for (int b = 0; b < F.n; ++b) {
                rep.max_b = std::max(rep.max_b, std::abs(bh[a][b].value()));
                rep.max_b = std::max(rep.max_b, std::abs(bm[a][b].value()));
            }
        for (Jet& Pj : graham_lee_jet(T)) rep.max_P = std::max(rep.max_P, std::abs(Pj.value()));
    }
    return rep;
}

}  // namespace crsch
