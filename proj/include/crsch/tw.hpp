#pragma once

#include <map>
#include <string>
#include <vector>

#include "crsch/models.hpp"

namespace crsch {

/// Lazy table of Tanaka-Webster covariant derivatives of a scalar at a frame
/// point, with every component a jet so it can be differentiated further.
///
/// Index alphabet for a slot s: 0..n-1 = holomorphic (Z_{s+1}),
/// n..2n-1 = anti-holomorphic (Z_{s-n+1} bar), 2n = Reeb (T). The last index
/// differentiates ("later indices differentiate"): the covariant derivative of
/// the order-k tensor is taken in the direction of the appended slot, with one
/// Christoffel correction per existing slot (none for Reeb slots: nabla T = 0).
class CovTable {
public:
    CovTable(const FramePoint& F, Jet f);

    int n() const { return F_->n; }
    int hol(int a) const { return a; }
    int bar(int a) const { return F_->n + a; }
    int reeb() const { return 2 * F_->n; }

    const Jet& get(const std::vector<int>& idx);

    /// Raised first derivatives: f^a = h^{gbar a} f_{gbar}, f^{abar} = h^{abar g} f_g.
    Jet up(int a);
    Jet up_bar(int a);

    const FramePoint& frame() const { return *F_; }

private:
    const FramePoint* F_;
    std::map<std::vector<int>, Jet> memo_;
};

/// Value-level covariant derivative report.
struct CovariantDerivatives {
    int n = 0;
    int order = 0;
    std::vector<cplx> d_hol, d_bar;  // f_a, f_abar
    cplx d_reeb{};                   // f_0
    // order >= 2; [a][b] with the last index differentiating
    std::vector<std::vector<cplx>> hh, hb, bh, bb;
    std::vector<cplx> reeb_then_hol;  // f_{;0a}
    std::vector<cplx> hol_then_reeb;  // f_{;a0}
    // order 3: full mixed table keyed by the slot string, e.g. "abc" with
    // letters h/b/0 (hol/bar/reeb) and digit indices appended per slot.
    std::map<std::string, cplx> third;
};

CovariantDerivatives covariant_jet(const Model& m, const ScalarField& f,
                                   const std::vector<double>& p, int order);

struct OperatorValues {
    double sublaplacian = 0;       // Delta_b f (real for real f)
    cplx kohn{};                   // Box_b f
    std::vector<cplx> graham_lee;  // P_a f
    cplx reeb{};                   // f_0
    double dbar_norm2 = 0;         // |dbar_b f|^2
};

OperatorValues operators_at(const Model& m, const ScalarField& f, const std::vector<double>& p);

/// Jet-level operators on an existing table (used by derived-field checks).
Jet sublaplacian_jet(CovTable& T);
Jet kohn_jet(CovTable& T);
Jet dbar_norm2_jet(CovTable& T);
std::vector<Jet> graham_lee_jet(CovTable& T);

/// Covariant derivative of the raised torsion: A^g_{bbar;a}, as jets.
Jet torsion_up_cov(const FramePoint& F, int g, int b, int a);

/// Max-over-indices residuals of the six commutation relations, in order.
/// Relation 4 needs the Webster curvature tensor; the caller supplies it as
/// riem[b][a][r][s] = R_b{}^a{}_{r sbar} at the point.
std::vector<double> commutation_residuals(const Model& m, const ScalarField& f,
                                          const std::vector<double>& p,
                                          const std::vector<std::vector<std::vector<std::vector<cplx>>>>& riem);

}  // namespace crsch
