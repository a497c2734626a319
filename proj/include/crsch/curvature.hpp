#pragma once

#include <vector>

#include "crsch/schwarzian.hpp"
#include "crsch/tw.hpp"

namespace crsch {

using Tensor4 = std::vector<std::vector<std::vector<std::vector<cplx>>>>;

/// Webster curvature package at a point, components in the model's moving
/// frame. riem[b][a][r][s] = R_b{}^a{}_{r sbar}.
struct Curvature {
    int n = 0;
    Tensor4 riem;
    std::vector<std::vector<cplx>> ricci;     // R_{a bbar} = R_g{}^g{}_{a bbar}
    double scalar = 0;                        // R = h^{bbar a} R_{a bbar}
    std::vector<std::vector<cplx>> schouten;  // P_{a bbar}
    Tensor4 chern_moser;                      // S_b{}^a{}_{g sbar}

    // Structure-equation slots not absorbed by the extraction (torsion terms
    // on the theta^r ^ theta^s and theta^rbar ^ theta^sbar slots).
    double closure_residual = 0;

    // Least-squares fit of the lowered tensor against the constant-curvature
    // pattern eta (delta delta + delta delta).
    double eta = 0;
    double eta_fit_residual = 0;
    bool constant_curvature = false;  // eta_fit_residual < 1e-6
};

Curvature curvature_at(const Model& m, const std::vector<double>& p);

/// Residuals of the conformal transformation laws for Ricci, torsion, and
/// trace-free Schouten, comparing the rescaled model's quantities (converted
/// to the base coframe) against the closed-form right-hand sides assembled on
/// the base model.
struct TransformResiduals {
    double ricci = 0;
    double torsion = 0;
    double schouten = 0;
};

TransformResiduals conformal_transform_residuals(const Model& m, const ScalarField& phi,
                                                 const std::vector<double>& p);

/// Scalar curvature of a one-layer conformal model over the flat base, both
/// directly and via the closed-form R = -2 e^{-2phi}(n+1)(Delta_b phi + 2n |dbar_b phi|^2).
struct ScalarCurvaturePair {
    double direct = 0;
    double via_formula = 0;
};

ScalarCurvaturePair scalar_curvature_formula(const Model& m, const std::vector<double>& p);

/// Convenience overload of the commutation check: relation 4's curvature term is taken
/// from curvature_at on the same model and point.
std::vector<double> commutation_residuals(const Model& m, const ScalarField& f,
                                          const std::vector<double>& p);

}  // namespace crsch
