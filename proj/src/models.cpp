#include "crsch/models.hpp"

#include <cmath>
#include <utility>

namespace crsch {

namespace {

constexpr double kRealTol = 1e-12;
constexpr double kPivotTol = 1e-12;

using JetMat = std::vector<std::vector<Jet>>;

JetMat zero_mat(const JetPoint& jp, int rows, int cols) {
    return JetMat(rows, std::vector<Jet>(cols, jp.constant(0.0)));
}

}  // namespace

ScalarField field_from_expr(FieldExprPtr e) {
    ScalarField f;
    f.expr = e;
    f.desc = print_field_expr(*e);
    f.eval = [e](const JetPoint& jp) { return eval_field(*e, jp); };
    return f;
}

ScalarField field_from_text(const std::string& text) { return field_from_expr(parse_field_expr(text)); }

std::string Model::describe() const {
    switch (kind) {
        case Kind::Heisenberg:
            return "heisenberg(n=" + std::to_string(n) + ")";
        case Kind::Rigid:
            return "rigid(n=" + std::to_string(n) + ", Phi=" + Phi.desc + ")";
        case Kind::Conformal:
            return "conformal(" + base->describe() + ", phi=" + phi.desc + ")";
    }
    return "?";
}

Model make_heisenberg(int n) {
    if (n < 1) throw ConfigError("make_heisenberg: n must be >= 1");
    Model m;
    m.n = n;
    m.kind = Model::Kind::Heisenberg;
    return m;
}

Model make_rigid(int n, ScalarField Phi) {
    if (n < 1) throw ConfigError("make_rigid: n must be >= 1");
    if (!Phi.valid()) throw ConfigError("make_rigid: missing Phi");
    Model m;
    m.n = n;
    m.kind = Model::Kind::Rigid;
    m.Phi = std::move(Phi);
    return m;
}

Model apply_conformal(const Model& m, ScalarField phi) {
    if (!phi.valid()) throw ConfigError("apply_conformal: missing phi");
    Model c;
    c.n = m.n;
    c.kind = Model::Kind::Conformal;
    c.phi = std::move(phi);
    c.base = std::make_shared<const Model>(m);
    return c;
}

Jet FramePoint::applyZ(int a, const Jet& f) const {
    Jet acc = Z[a][0] * f.derivative(0);
    for (int k = 1; k < 2 * n + 1; ++k) acc += Z[a][k] * f.derivative(k);
    return acc;
}

Jet FramePoint::applyZbar(int a, const Jet& f) const {
    Jet acc = Z[a][0].conjugated() * f.derivative(0);
    for (int k = 1; k < 2 * n + 1; ++k) acc += Z[a][k].conjugated() * f.derivative(k);
    return acc;
}

Jet FramePoint::applyT(const Jet& f) const {
    Jet acc = T[0] * f.derivative(0);
    for (int k = 1; k < 2 * n + 1; ++k) acc += T[k] * f.derivative(k);
    return acc;
}

std::vector<std::vector<Jet>> jet_mat_inverse(const std::vector<std::vector<Jet>>& mat) {
    const int m = static_cast<int>(mat.size());
    JetMat a = mat;
    // Identity of matching shape; reuse a zero jet from the input.
    Jet zero = mat[0][0] * cplx(0.0);
    JetMat inv(m, std::vector<Jet>(m, zero));
    for (int i = 0; i < m; ++i) inv[i][i] = zero + cplx(1.0);

    for (int col = 0; col < m; ++col) {
        int piv = -1;
        double best = kPivotTol;
        for (int r = col; r < m; ++r) {
            double mag = std::abs(a[r][col].value());
            if (mag > best) {
                best = mag;
                piv = r;
            }
        }
        if (piv < 0) throw DomainError("jet_mat_inverse: singular matrix (degenerate coframe)");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        Jet d = inverse(a[col][col]);
        for (int c = 0; c < m; ++c) {
            a[col][c] = a[col][c] * d;
            inv[col][c] = inv[col][c] * d;
        }
        for (int r = 0; r < m; ++r) {
            if (r == col) continue;
            Jet f = a[r][col];
            if (f.max_abs_coeff() == 0.0) continue;
            for (int c = 0; c < m; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

namespace {

// Coframe matrix rows (theta, theta^1..theta^n, conj thereof) over the real
// coordinate differentials; Binv columns are then the dual frame vectors.
void fill_binv(FramePoint& F) {
    const int n = F.n;
    const int m = 2 * n + 1;
    JetMat E(m, std::vector<Jet>(m));
    for (int k = 0; k < m; ++k) E[0][k] = F.theta[k];
    for (int a = 0; a < n; ++a)
        for (int k = 0; k < m; ++k) {
            E[1 + a][k] = F.theta_a[a][k];
            E[1 + n + a][k] = F.theta_a[a][k].conjugated();
        }
    JetMat Einv = jet_mat_inverse(E);
    F.Binv = std::move(Einv);
}

FramePoint heisenberg_frame(int n, const JetPoint& jp) {
    FramePoint F;
    F.n = n;
    F.jp = jp;
    const int m = 2 * n + 1;
    const Jet zero = jp.constant(0.0);

    F.Z.assign(n, std::vector<Jet>(m, zero));
    F.T.assign(m, zero);
    F.theta.assign(m, zero);
    F.theta_a.assign(n, std::vector<Jet>(m, zero));
    F.h = zero_mat(jp, n, n);
    F.hinv = zero_mat(jp, n, n);
    F.G_hol.assign(n, zero_mat(jp, n, n));
    F.G_bar.assign(n, zero_mat(jp, n, n));
    F.G_0 = zero_mat(jp, n, n);
    F.A = zero_mat(jp, n, n);
    F.omega.assign(n, std::vector<std::vector<Jet>>(n, std::vector<Jet>(m, zero)));

    for (int a = 0; a < n; ++a) {
        F.Z[a][2 * a] = jp.constant(0.5);
        F.Z[a][2 * a + 1] = jp.constant(cplx(0, -0.5));
        F.Z[a][2 * n] = jp.constant(cplx(0, 1)) * jp.zbar(a);
        F.theta[2 * a] = -jp.vars[2 * a + 1];  // -y_a dx_a
        F.theta[2 * a + 1] = jp.vars[2 * a];   //  x_a dy_a
        F.theta_a[a][2 * a] = jp.constant(1.0);
        F.theta_a[a][2 * a + 1] = jp.constant(cplx(0, 1));
        F.h[a][a] = jp.constant(1.0);
        F.hinv[a][a] = jp.constant(1.0);
    }
    F.theta[2 * n] = jp.constant(0.5);
    F.T[2 * n] = jp.constant(2.0);
    fill_binv(F);
    return F;
}

FramePoint rigid_frame(const Model& mdl, const JetPoint& jp) {
    const int n = mdl.n;
    const int m = 2 * n + 1;
    // Extra jet orders so that the Christoffel jets (third derivatives of Phi)
    // survive the further differentiation done by curvature and third-order
    // covariant derivatives.
    JetPoint aux = seed_jet_unchecked(jp.base, jp.order + 3);

    Jet Phi_j = mdl.Phi.eval(aux);
    if (std::abs(Phi_j.value().imag()) > kRealTol)
        throw DomainError("rigid model: Phi is not real-valued at the point");
    for (int k = 2; k < 2 * n; ++k) {
        std::vector<int> e(m, 0);
        e[k] = 1;
        if (std::abs(Phi_j.taylor_coeff(e)) > kRealTol)
            throw ConfigError("rigid model: Phi must depend only on z1, zbar1");
    }
    Jet h00 = Phi_j.dz(0).dzbar(0);
    if (h00.value().real() <= 0 || std::abs(h00.value().imag()) > 1e-10)
        throw DomainError("rigid model: degenerate Levi form (Phi_{z zbar} <= 0)");

    FramePoint F;
    F.n = n;
    F.jp = jp;
    const Jet zero = jp.constant(0.0);

    std::vector<Jet> F_hol(n);  // F_alpha = dF/dz^alpha with F = Phi + sum |z_a|^2
    F_hol[0] = Phi_j.dz(0);
    for (int a = 1; a < n; ++a) F_hol[a] = aux.zbar(a);

    F.Z.assign(n, std::vector<Jet>(m, zero));
    F.T.assign(m, zero);
    F.theta.assign(m, zero);
    F.theta_a.assign(n, std::vector<Jet>(m, zero));
    F.h = zero_mat(jp, n, n);
    F.hinv = zero_mat(jp, n, n);
    F.G_hol.assign(n, zero_mat(jp, n, n));
    F.G_bar.assign(n, zero_mat(jp, n, n));
    F.G_0 = zero_mat(jp, n, n);
    F.A = zero_mat(jp, n, n);
    F.omega.assign(n, std::vector<std::vector<Jet>>(n, std::vector<Jet>(m, zero)));

    const cplx I(0, 1);
    for (int a = 0; a < n; ++a) {
        F.Z[a][2 * a] = jp.constant(0.5);
        F.Z[a][2 * a + 1] = jp.constant(cplx(0, -0.5));
        F.Z[a][2 * n] = I * F_hol[a];
        Jet Fb = F_hol[a].conjugated();
        F.theta[2 * a] = 0.5 * I * (Fb - F_hol[a]);
        F.theta[2 * a + 1] = 0.5 * (Fb + F_hol[a]);
        F.theta_a[a][2 * a] = jp.constant(1.0);
        F.theta_a[a][2 * a + 1] = jp.constant(I);
        F.h[a][a] = a == 0 ? h00 : jp.constant(1.0);
        F.hinv[a][a] = a == 0 ? inverse(h00) : jp.constant(1.0);
    }
    F.theta[2 * n] = jp.constant(0.5);
    F.T[2 * n] = jp.constant(2.0);

    Jet gamma = h00.dz(0) * inverse(h00);  // Gamma^1_{11} = d_z log Phi_{z zbar}
    F.G_hol[0][0][0] = gamma;
    F.omega[0][0][0] = gamma;
    F.omega[0][0][1] = I * gamma;
    fill_binv(F);
    return F;
}

FramePoint conformal_frame(const Model& mdl, const JetPoint& jp, int order) {
    FramePoint Fb = frame_point_at(*mdl.base, jp.base, order);
    const int n = mdl.n;
    const int m = 2 * n + 1;

    Jet phi = mdl.phi.eval(jp);
    if (std::abs(phi.value().imag()) > kRealTol)
        throw DomainError("apply_conformal: phi is not real-valued at the point");

    // First derivatives and raised gradients on the base model.
    std::vector<Jet> p_hol(n), p_bar(n), p_up(n), p_bup(n);
    for (int a = 0; a < n; ++a) {
        p_hol[a] = Fb.applyZ(a, phi);
        p_bar[a] = Fb.applyZbar(a, phi);
    }
    for (int a = 0; a < n; ++a) {
        Jet up = p_bar[0] * Fb.hinv[0][a];
        Jet bup = p_hol[0] * Fb.hinv[a][0];
        for (int g = 1; g < n; ++g) {
            up += p_bar[g] * Fb.hinv[g][a];
            bup += p_hol[g] * Fb.hinv[a][g];
        }
        p_up[a] = up;
        p_bup[a] = bup;
    }

    // Base second covariant derivatives phi_{;ab}, phi_{;a bbar}, phi_{;bbar a}.
    JetMat c_hh(n, std::vector<Jet>(n)), c_hb(n, std::vector<Jet>(n)), c_bh(n, std::vector<Jet>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Jet hh = Fb.applyZ(b, p_hol[a]);
            Jet hb = Fb.applyZbar(b, p_hol[a]);
            Jet bh = Fb.applyZ(b, p_bar[a]);
            for (int g = 0; g < n; ++g) {
                hh -= Fb.G_hol[g][b][a] * p_hol[g];
                hb -= Fb.G_bar[g][b][a] * p_hol[g];
                bh -= Fb.G_bar[g][b][a].conjugated() * p_bar[g];
            }
            c_hh[a][b] = hh;  // phi_{;ab}, direction b
            c_hb[a][b] = hb;  // phi_{;a bbar}
            c_bh[a][b] = bh;  // phi_{;abar b}
        }

    FramePoint F;
    F.n = n;
    F.jp = jp;
    F.phi_jet = phi;
    F.h = Fb.h;
    F.hinv = Fb.hinv;

    Jet ephi = exp(phi);
    Jet e2phi = ephi * ephi;
    Jet emphi = inverse(ephi);

    F.Z.assign(n, std::vector<Jet>(m, jp.constant(0.0)));
    F.theta.assign(m, jp.constant(0.0));
    F.theta_a.assign(n, std::vector<Jet>(m, jp.constant(0.0)));
    const cplx I(0, 1);
    for (int k = 0; k < m; ++k) F.theta[k] = e2phi * Fb.theta[k];
    for (int a = 0; a < n; ++a)
        for (int k = 0; k < m; ++k) {
            F.theta_a[a][k] = ephi * (Fb.theta_a[a][k] + 2.0 * I * p_up[a] * Fb.theta[k]);
            F.Z[a][k] = emphi * Fb.Z[a][k];
        }

    // Torsion transformation: A_hat = A + 2i phi_{;ab} - 4i phi_a phi_b, stated
    // for the unscaled coframe {theta^a + 2i phi^a theta}; our coframe carries
    // an extra e^phi per slot, so the stored components pick up e^{-2 phi}.
    Jet em2phi = emphi * emphi;
    F.A = zero_mat(jp, n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            F.A[a][b] = em2phi * (Fb.A[a][b] + 2.0 * I * c_hh[a][b] - 4.0 * I * p_hol[a] * p_hol[b]);

    // Hatted connection form (Lee), as a coordinate 1-form:
    //   omega_hat_b^a = omega_b^a + 2(phi_b theta^a - phi^a theta_b)
    //                   + delta^a_b (phi_g theta^g - phi^g theta_g)
    //                   + i(phi^a_b + phi_b^a + 4 phi_b phi^a
    //                       + 4 delta^a_b phi_g phi^g) theta
    // with theta_b = h_{b sbar} theta^sbar.
    std::vector<std::vector<Jet>> theta_low(n, std::vector<Jet>(m, jp.constant(0.0)));
    for (int b = 0; b < n; ++b)
        for (int k = 0; k < m; ++k) {
            Jet acc = Fb.h[b][0] * Fb.theta_a[0][k].conjugated();
            for (int s = 1; s < n; ++s) acc += Fb.h[b][s] * Fb.theta_a[s][k].conjugated();
            theta_low[b][k] = acc;
        }
    Jet grad2 = p_hol[0] * p_up[0];  // phi_g phi^g
    for (int g = 1; g < n; ++g) grad2 += p_hol[g] * p_up[g];

    JetMat up_down(n, std::vector<Jet>(n)), down_up(n, std::vector<Jet>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            // phi^a_{ b} = h^{gbar a} phi_{;gbar b};  phi_b^{ a} = h^{gbar a} phi_{;b gbar}
            Jet ud = Fb.hinv[0][a] * c_bh[0][b];
            Jet du = Fb.hinv[0][a] * c_hb[b][0];
            for (int g = 1; g < n; ++g) {
                ud += Fb.hinv[g][a] * c_bh[g][b];
                du += Fb.hinv[g][a] * c_hb[b][g];
            }
            up_down[a][b] = ud;
            down_up[a][b] = du;
        }

    F.omega.assign(n, std::vector<std::vector<Jet>>(n, std::vector<Jet>(m, jp.constant(0.0))));
    for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a) {
            Jet tcoef = I * (up_down[a][b] + down_up[a][b] + 4.0 * p_hol[b] * p_up[a]);
            if (a == b) tcoef += I * 4.0 * grad2;
            for (int k = 0; k < m; ++k) {
                Jet w = Fb.omega[b][a][k] + 2.0 * (p_hol[b] * Fb.theta_a[a][k] - p_up[a] * theta_low[b][k]) +
                        tcoef * Fb.theta[k];
                if (a == b) {
                    Jet diag = p_hol[0] * Fb.theta_a[0][k] - p_up[0] * theta_low[0][k];
                    for (int g = 1; g < n; ++g)
                        diag += p_hol[g] * Fb.theta_a[g][k] - p_up[g] * theta_low[g][k];
                    w += diag;
                }
                F.omega[b][a][k] = w;
            }
        }

    fill_binv(F);
    // Reeb field: the frame vector dual to theta_hat under the full coframe.
    F.T.assign(m, jp.constant(0.0));
    for (int k = 0; k < m; ++k) F.T[k] = F.Binv[k][0];

    // Christoffels by pairing the hatted connection form against the hatted
    // frame and Reeb field.
    F.G_hol.assign(n, zero_mat(jp, n, n));
    F.G_bar.assign(n, zero_mat(jp, n, n));
    F.G_0 = zero_mat(jp, n, n);
    for (int g = 0; g < n; ++g)
        for (int c = 0; c < n; ++c)
            for (int b = 0; b < n; ++b) {
                Jet hol = F.omega[b][g][0] * F.Z[c][0];
                Jet bar = F.omega[b][g][0] * F.Z[c][0].conjugated();
                for (int k = 1; k < m; ++k) {
                    hol += F.omega[b][g][k] * F.Z[c][k];
                    bar += F.omega[b][g][k] * F.Z[c][k].conjugated();
                }
                F.G_hol[g][c][b] = hol;
                F.G_bar[g][c][b] = bar;
            }
    for (int g = 0; g < n; ++g)
        for (int b = 0; b < n; ++b) {
            Jet acc = F.omega[b][g][0] * F.T[0];
            for (int k = 1; k < m; ++k) acc += F.omega[b][g][k] * F.T[k];
            F.G_0[g][b] = acc;
        }

    F.base = std::make_shared<const FramePoint>(std::move(Fb));
    return F;
}

}  // namespace

FramePoint frame_point_at(const Model& m, const std::vector<double>& p, int order) {
    JetPoint jp = seed_jet(p, order);
    if (jp.n != m.n) throw ConfigError("frame_point_at: point arity does not match model dimension");
    switch (m.kind) {
        case Model::Kind::Heisenberg:
            return heisenberg_frame(m.n, jp);
        case Model::Kind::Rigid:
            return rigid_frame(m, jp);
        case Model::Kind::Conformal:
            return conformal_frame(m, jp, order);
    }
    throw std::logic_error("frame_point_at: unreachable");
}

FrameData frame_data_at(const Model& m, const std::vector<double>& p) {
    FramePoint F = frame_point_at(m, p);
    const int n = F.n;
    const int mm = 2 * n + 1;
    FrameData d;
    d.n = n;
    d.levi.assign(n, std::vector<cplx>(n));
    d.torsion.assign(n, std::vector<cplx>(n));
    d.christoffel_hol.assign(n, std::vector<std::vector<cplx>>(n, std::vector<cplx>(n)));
    d.christoffel_bar.assign(n, std::vector<std::vector<cplx>>(n, std::vector<cplx>(n)));
    d.frame_Z.assign(n, std::vector<cplx>(mm));
    d.reeb.assign(mm, 0.0);
    d.theta.assign(mm, 0.0);
    d.coframe.assign(n, std::vector<cplx>(mm));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            d.levi[a][b] = F.h[a][b].value();
            d.torsion[a][b] = F.A[a][b].value();
        }
    for (int g = 0; g < n; ++g)
        for (int c = 0; c < n; ++c)
            for (int b = 0; b < n; ++b) {
                d.christoffel_hol[g][c][b] = F.G_hol[g][c][b].value();
                d.christoffel_bar[g][c][b] = F.G_bar[g][c][b].value();
            }
    for (int k = 0; k < mm; ++k) {
        d.reeb[k] = F.T[k].value();
        d.theta[k] = F.theta[k].value();
    }
    for (int a = 0; a < n; ++a)
        for (int k = 0; k < mm; ++k) {
            d.frame_Z[a][k] = F.Z[a][k].value();
            d.coframe[a][k] = F.theta_a[a][k].value();
        }
    return d;
}

}  // namespace crsch
