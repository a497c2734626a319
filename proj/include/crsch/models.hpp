#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "crsch/field_expr.hpp"
#include "crsch/jet.hpp"

namespace crsch {

/// A scalar field on a model's coordinates: an evaluator to jets, plus the
/// defining expression when one exists (library-built fields may have none).
struct ScalarField {
    std::function<Jet(const JetPoint&)> eval;
    FieldExprPtr expr;
    std::string desc;

    bool valid() const { return static_cast<bool>(eval); }
};

ScalarField field_from_expr(FieldExprPtr e);
ScalarField field_from_text(const std::string& text);

/// A pseudo-hermitian manifold presentation with 2n+1 real coordinates
/// (x1,y1,...,xn,yn,t). Conformal models stack on a base model.
struct Model {
    enum class Kind { Heisenberg, Rigid, Conformal };

    int n = 0;
    Kind kind = Kind::Heisenberg;
    ScalarField Phi;   // Rigid: defining function term, depends on z1, zbar1 only
    ScalarField phi;   // Conformal: real conformal exponent
    std::shared_ptr<const Model> base;  // Conformal

    std::string describe() const;
};

Model make_heisenberg(int n);
Model make_rigid(int n, ScalarField Phi);
Model apply_conformal(const Model& m, ScalarField phi);

/// Full frame/coframe/connection package at a point, with every coefficient a
/// jet of the coordinates so it can be differentiated further.
///
/// Index conventions:
///   Z[a][k]        coefficient of Z_{a+1} on the real coordinate vector d/dxi_k
///   T[k]           Reeb field coefficients
///   theta[k]       contact form on dxi_k; theta_a[a][k] holomorphic coframe
///   h[a][b]        Levi form h_{a b-bar}; hinv[b][g] = h^{b-bar g}
///   G_hol[g][c][b] Gamma^g_{c b}   = omega_b^g(Z_c)      (c = direction)
///   G_bar[g][c][b] Gamma^g_{c-bar b} = omega_b^g(Z_c-bar)
///   G_0[g][b]      Gamma^g_{0 b}   = omega_b^g(T)
///   A[a][b]        torsion A_{ab} (symmetric)
///   omega[b][a][k] connection form omega_b^a as a coordinate 1-form
///   Binv[k][r]     inverse coframe matrix: column r of Binv is the frame
///                  vector dual to coframe row r in the order
///                  (theta, theta^1..theta^n, theta^1bar..theta^nbar)
struct FramePoint {
    int n = 0;
    JetPoint jp;
    std::vector<std::vector<Jet>> Z;
    std::vector<Jet> T;
    std::vector<Jet> theta;
    std::vector<std::vector<Jet>> theta_a;
    std::vector<std::vector<Jet>> h;
    std::vector<std::vector<Jet>> hinv;
    std::vector<std::vector<std::vector<Jet>>> G_hol;
    std::vector<std::vector<std::vector<Jet>>> G_bar;
    std::vector<std::vector<Jet>> G_0;
    std::vector<std::vector<Jet>> A;
    std::vector<std::vector<std::vector<Jet>>> omega;
    std::vector<std::vector<Jet>> Binv;

    // Conformal bookkeeping: jet of this layer's exponent (invalid on base
    // models) and of the base-model frame, for transformation-law checks.
    Jet phi_jet;
    std::shared_ptr<const FramePoint> base;

    /// Directional derivatives along the frame (order drops by one).
    Jet applyZ(int a, const Jet& f) const;
    Jet applyZbar(int a, const Jet& f) const;
    Jet applyT(const Jet& f) const;
};

FramePoint frame_point_at(const Model& m, const std::vector<double>& p, int order = 4);

/// Value-level snapshot of FramePoint for reporting and the CLI.
struct FrameData {
    int n = 0;
    std::vector<std::vector<cplx>> levi;
    std::vector<std::vector<cplx>> torsion;
    std::vector<std::vector<std::vector<cplx>>> christoffel_hol;  // [g][c][b]
    std::vector<std::vector<std::vector<cplx>>> christoffel_bar;
    std::vector<std::vector<cplx>> frame_Z;   // [a][k]
    std::vector<cplx> reeb;                   // [k]
    std::vector<cplx> theta;                  // [k]
    std::vector<std::vector<cplx>> coframe;   // [a][k]
};

FrameData frame_data_at(const Model& m, const std::vector<double>& p);

/// Gaussian elimination over jets; DomainError on a (numerically) singular
/// value matrix.
std::vector<std::vector<Jet>> jet_mat_inverse(const std::vector<std::vector<Jet>>& mat);

}  // namespace crsch
