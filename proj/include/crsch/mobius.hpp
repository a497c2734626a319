#pragma once

#include <vector>

#include "crsch/schwarzian.hpp"

namespace crsch {

/// Parameters of the explicit Moebius-equation solution family on the
/// Heisenberg group: phi = -log|kappa(t + i|z|^2) + z.mu + lambda| + c.
struct JLParams {
    cplx kappa{0, 0};
    std::vector<cplx> mu;
    cplx lambda{0, 0};
    double c = 0;
};

struct JLInvariants {
    double scalar = 0;  // e^{-2c} n(n+1)(4 Im(conj(kappa) lambda) - |mu|^2)
    double eta = 0;     // -scalar / (n(n+1))
};

FieldExprPtr jl_field(const JLParams& params, int n);
JLInvariants jl_invariants(const JLParams& params, int n);

/// Solution with prescribed horizontal gradient omega at p (kappa = 0 slice):
/// mu_a = -2 omega_a, lambda = 1 - z(p).mu, so G(p) = 1.
JLParams integrability_witness(int n, const std::vector<double>& p,
                               const std::vector<cplx>& omega);

/// S(f) = f'''/f' - (3/2)(f''/f')^2 via one-variable jets of a holomorphic
/// expression in z1. Throws DomainError at a critical point.
cplx classical_schwarzian(const FieldExprPtr& f, cplx z);

/// Lift of a harmonic phi2d(z1) to the sigma-rescaled rigid model with
/// sigma = -(1/4) log Phi_{z zbar}; b11 is reported in the unscaled rigid
/// coframe. s_classical = 2(phi_zz - 2 phi_z^2); ratio = b11 / S(f) with
/// S(f) = 2 s_classical (e^{2 phi2d} = |f'|), recorded, not asserted.
struct Example2Result {
    cplx b11{0, 0};
    cplx s_classical{0, 0};
    cplx ratio{0, 0};
    double mixed_max = 0;  // max |B_{a bbar}| on the rescaled model
};

Example2Result example2_identity(const ScalarField& Phi, const ScalarField& phi2d,
                                 const std::vector<double>& p);

/// M = U (x) conj(V) - V (x) conj(U); is_scalar iff M is a multiple of the
/// identity, in which case that multiple must vanish.
struct RankLemmaResult {
    bool is_scalar = false;
    cplx lambda{0, 0};
};

RankLemmaResult rank_lemma_lambda(const std::vector<cplx>& U, const std::vector<cplx>& V);

}  // namespace crsch
