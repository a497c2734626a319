#pragma once

#include <string>
#include <vector>

#include "crsch/tw.hpp"

namespace crsch {

/// CR Schwarzian tensor of a real scalar at a point, in the model's own
/// moving coframe (recorded in `frame`). Only the theta^a x theta^b and
/// theta^a x theta^bbar slots exist; the tensor is defined mod theta.
struct Schwarzian {
    int n = 0;
    std::vector<std::vector<cplx>> b_holo;   // B_{ab} = 2 phi_{;ab} - 4 phi_a phi_b
    std::vector<std::vector<cplx>> b_mixed;  // B_{a bbar}, trace-free part of the symmetrized Hessian
    std::string frame;
};

Schwarzian schwarzian_at(const Model& m, const ScalarField& phi, const std::vector<double>& p);

/// Jet-level components on an existing covariant table (shared with the
/// curvature transformation-law checks).
void schwarzian_jets(CovTable& T, std::vector<std::vector<Jet>>& b_holo,
                     std::vector<std::vector<Jet>>& b_mixed);

/// Componentwise max of |B(phi+sigma) - B(phi) - e^{2 phi} B_hat(sigma)|,
/// where B_hat is computed on the rescaled model and converted back to the
/// base coframe (mod theta, the conversion is multiplication by e^{2 phi}).
double additivity_residual(const Model& m, const ScalarField& phi, const ScalarField& sigma,
                           const std::vector<double>& p);

struct MobiusReport {
    double max_b = 0;  // max componentwise |B| over the samples
    double max_P = 0;  // max |P_a phi| (pluriharmonicity certificate)
};

MobiusReport mobius_residual(const Model& m, const ScalarField& phi,
                             const std::vector<std::vector<double>>& samples);

/// Pointwise sum of two scalar fields.
ScalarField field_sum(const ScalarField& f, const ScalarField& g);

}  // namespace crsch
