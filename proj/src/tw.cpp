#include "crsch/tw.hpp"

#include <cmath>

namespace crsch {

namespace {

Jet direction_derivative(const FramePoint& F, int s, const Jet& f) {
    const int n = F.n;
    if (s < n) return F.applyZ(s, f);
    if (s < 2 * n) return F.applyZbar(s - n, f);
    return F.applyT(f);
}

}  // namespace

CovTable::CovTable(const FramePoint& F, Jet f) : F_(&F) { memo_[{}] = std::move(f); }

const Jet& CovTable::get(const std::vector<int>& idx) {
    auto it = memo_.find(idx);
    if (it != memo_.end()) return it->second;

    std::vector<int> I(idx.begin(), idx.end() - 1);
    const int s = idx.back();
    const int n = F_->n;
    Jet r = direction_derivative(*F_, s, get(I));
    for (size_t j = 0; j < I.size(); ++j) {
        const int i = I[j];
        if (i == 2 * n) continue;  // Reeb slot is parallel
        std::vector<int> J = I;
        if (i < n) {
            for (int g = 0; g < n; ++g) {
                Jet Gam = s < n          ? F_->G_hol[g][s][i]
                          : s < 2 * n    ? F_->G_bar[g][s - n][i]
                                         : F_->G_0[g][i];
                J[j] = g;
                r -= Gam * get(J);
            }
        } else {
            const int a = i - n;
            for (int g = 0; g < n; ++g) {
                Jet Gam = s < n          ? F_->G_bar[g][s][a].conjugated()
                          : s < 2 * n    ? F_->G_hol[g][s - n][a].conjugated()
                                         : F_->G_0[g][a].conjugated();
                J[j] = n + g;
                r -= Gam * get(J);
            }
        }
    }
    return memo_[idx] = std::move(r);
}

Jet CovTable::up(int a) {
    Jet acc = F_->hinv[0][a] * get({bar(0)});
    for (int g = 1; g < n(); ++g) acc += F_->hinv[g][a] * get({bar(g)});
    return acc;
}

Jet CovTable::up_bar(int a) {
    Jet acc = F_->hinv[a][0] * get({hol(0)});
    for (int g = 1; g < n(); ++g) acc += F_->hinv[a][g] * get({hol(g)});
    return acc;
}

CovariantDerivatives covariant_jet(const Model& m, const ScalarField& f,
                                   const std::vector<double>& p, int order) {
    if (order < 1 || order > 3) throw ConfigError("covariant_jet: order must be 1, 2 or 3");
    FramePoint F = frame_point_at(m, p);
    CovTable T(F, f.eval(F.jp));
    const int n = F.n;

    CovariantDerivatives out;
    out.n = n;
    out.order = order;
    out.d_hol.resize(n);
    out.d_bar.resize(n);
    for (int a = 0; a < n; ++a) {
        out.d_hol[a] = T.get({T.hol(a)}).value();
        out.d_bar[a] = T.get({T.bar(a)}).value();
    }
    out.d_reeb = T.get({T.reeb()}).value();
    if (order < 2) return out;

    auto mat = [&](auto first, auto second) {
        std::vector<std::vector<cplx>> M(n, std::vector<cplx>(n));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) M[a][b] = T.get({first(a), second(b)}).value();
        return M;
    };
    auto H = [&](int a) { return T.hol(a); };
    auto B = [&](int a) { return T.bar(a); };
    out.hh = mat(H, H);
    out.hb = mat(H, B);
    out.bh = mat(B, H);
    out.bb = mat(B, B);
    out.reeb_then_hol.resize(n);
    out.hol_then_reeb.resize(n);
    for (int a = 0; a < n; ++a) {
        out.reeb_then_hol[a] = T.get({T.reeb(), T.hol(a)}).value();
        out.hol_then_reeb[a] = T.get({T.hol(a), T.reeb()}).value();
    }
    if (order < 3) return out;

    const int m3 = 2 * n + 1;
    auto slot_name = [&](int s) {
        if (s < n) return "h" + std::to_string(s + 1);
        if (s < 2 * n) return "b" + std::to_string(s - n + 1);
        return std::string("0");
    };
    for (int i = 0; i < m3; ++i)
        for (int j = 0; j < m3; ++j)
            for (int k = 0; k < m3; ++k)
                out.third[slot_name(i) + slot_name(j) + slot_name(k)] = T.get({i, j, k}).value();
    return out;
}

Jet sublaplacian_jet(CovTable& T) {
    const FramePoint& F = T.frame();
    const int n = T.n();
    Jet acc = F.jp.constant(0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            acc += F.hinv[b][a] * (T.get({T.hol(a), T.bar(b)}) + T.get({T.bar(b), T.hol(a)}));
    return acc;
}

Jet kohn_jet(CovTable& T) {
    const FramePoint& F = T.frame();
    const int n = T.n();
    Jet acc = F.jp.constant(0.0);
    for (int b = 0; b < n; ++b)
        for (int g = 0; g < n; ++g) acc -= F.hinv[b][g] * T.get({T.bar(b), T.hol(g)});
    return acc;
}

Jet dbar_norm2_jet(CovTable& T) {
    const FramePoint& F = T.frame();
    const int n = T.n();
    Jet acc = F.jp.constant(0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) acc += F.hinv[b][a] * T.get({T.hol(a)}) * T.get({T.bar(b)});
    return acc;
}

std::vector<Jet> graham_lee_jet(CovTable& T) {
    const FramePoint& F = T.frame();
    const int n = T.n();
    const cplx I(0, 1);
    std::vector<Jet> P(n, F.jp.constant(0.0));
    for (int a = 0; a < n; ++a) {
        Jet acc = F.jp.constant(0.0);
        for (int g = 0; g < n; ++g)
            for (int d = 0; d < n; ++d) acc += F.hinv[g][d] * T.get({T.bar(g), T.hol(d), T.hol(a)});
        for (int g = 0; g < n; ++g) acc += cplx(0, n) * F.A[a][g] * T.up(g);
        P[a] = acc;
    }
    return P;
}

OperatorValues operators_at(const Model& m, const ScalarField& f, const std::vector<double>& p) {
    FramePoint F = frame_point_at(m, p);
    CovTable T(F, f.eval(F.jp));
    OperatorValues out;
    Jet sub = sublaplacian_jet(T);
    out.sublaplacian = sub.value().real();
    out.kohn = kohn_jet(T).value();
    out.reeb = T.get({T.reeb()}).value();
    out.dbar_norm2 = dbar_norm2_jet(T).value().real();
    for (Jet& Pj : graham_lee_jet(T)) out.graham_lee.push_back(Pj.value());
    return out;
}

Jet torsion_up_cov(const FramePoint& F, int g, int b, int a) {
    const int n = F.n;
    // A^g_{bbar} = h^{dbar g} conj(A_{db}) as jets
    auto Aup = [&](int gg, int bb) {
        Jet acc = F.hinv[0][gg] * F.A[0][bb].conjugated();
        for (int d = 1; d < n; ++d) acc += F.hinv[d][gg] * F.A[d][bb].conjugated();
        return acc;
    };
    Jet r = F.applyZ(a, Aup(g, b));
    for (int d = 0; d < n; ++d) {
        r += F.G_hol[g][a][d] * Aup(d, b);
        r -= F.G_bar[d][a][b].conjugated() * Aup(g, d);
    }
    return r;
}

std::vector<double> commutation_residuals(const Model& m, const ScalarField& f,
                                          const std::vector<double>& p,
                                          const std::vector<std::vector<std::vector<std::vector<cplx>>>>& riem) {
    FramePoint F = frame_point_at(m, p);
    CovTable T(F, f.eval(F.jp));
    const int n = F.n;
    const cplx I(0, 1);
    std::vector<double> res(6, 0.0);

    auto upd = [](double& slot, cplx v) { slot = std::max(slot, std::abs(v)); };

    const cplx f0 = T.get({T.reeb()}).value();
    std::vector<cplx> fup(n);
    for (int b = 0; b < n; ++b) fup[b] = T.up(b).value();

    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            upd(res[0], T.get({a, b}).value() - T.get({b, a}).value());
            upd(res[1], T.get({a, T.bar(b)}).value() - T.get({T.bar(b), a}).value() -
                            I * f0 * F.h[a][b].value());
        }
    for (int a = 0; a < n; ++a) {
        cplx rhs = 0;
        for (int b = 0; b < n; ++b) rhs += F.A[a][b].value() * fup[b];
        upd(res[2], T.get({T.reeb(), a}).value() - T.get({a, T.reeb()}).value() - rhs);
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int g = 0; g < n; ++g) {
                cplx curv = 0;
                for (int d = 0; d < n; ++d) curv += riem[a][d][b][g] * T.get({d}).value();
                upd(res[3], T.get({a, b, T.bar(g)}).value() - T.get({a, T.bar(g), b}).value() -
                                I * T.get({a, T.reeb()}).value() * F.h[b][g].value() - curv);
            }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            cplx rhs = 0;
            for (int g = 0; g < n; ++g) {
                // A^g_{bbar} value
                cplx Aup = 0;
                for (int d = 0; d < n; ++d)
                    Aup += F.hinv[d][g].value() * std::conj(F.A[d][b].value());
                rhs += T.get({a, g}).value() * Aup;
                rhs += T.get({g}).value() * torsion_up_cov(F, g, b, a).value();
            }
            upd(res[4], T.get({a, T.reeb(), T.bar(b)}).value() -
                            T.get({a, T.bar(b), T.reeb()}).value() - rhs);
        }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int g = 0; g < n; ++g)
                upd(res[5], T.get({a, b, g}).value() - T.get({a, g, b}).value() -
                                I * F.A[a][g].value() * T.get({b}).value() +
                                I * F.A[a][b].value() * T.get({g}).value());
    return res;
}

}  // namespace crsch
