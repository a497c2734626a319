#include "crsch/mobius.hpp"

#include <cmath>

namespace crsch {

namespace {

constexpr double kSmall = 1e-12;

void validate(const JLParams& params, int n) {
    if (n < 1) throw ConfigError("jl_field: n must be at least 1");
    if (!params.mu.empty() && static_cast<int>(params.mu.size()) != n)
        throw ConfigError("jl_field: mu must have n entries");
    double mass = std::abs(params.kappa) + std::abs(params.lambda);
    for (cplx m : params.mu) mass += std::abs(m);
    if (mass < kSmall) throw ConfigError("jl_field: kappa, mu, lambda must not all vanish");
}

FieldExprPtr jl_G(const JLParams& params, int n) {
    FieldExprPtr zsum = fe_fn(FnKind::Abs2, fe_z(0));
    for (int a = 1; a < n; ++a) zsum = fe_add(zsum, fe_fn(FnKind::Abs2, fe_z(a)));
    FieldExprPtr w = fe_add(fe_t(), fe_mul(fe_lit(cplx(0, 1)), zsum));
    FieldExprPtr G = fe_add(fe_mul(fe_lit(params.kappa), w), fe_lit(params.lambda));
    for (int a = 0; a < static_cast<int>(params.mu.size()); ++a)
        G = fe_add(G, fe_mul(fe_lit(params.mu[a]), fe_z(a)));
    return G;
}

}  // namespace

FieldExprPtr jl_field(const JLParams& params, int n) {
    validate(params, n);
    FieldExprPtr phi =
        fe_mul(fe_lit(cplx(-0.5, 0)), fe_fn(FnKind::Log, fe_fn(FnKind::Abs2, jl_G(params, n))));
    if (params.c != 0.0) phi = fe_add(phi, fe_lit(cplx(params.c, 0)));
    return phi;
}

JLInvariants jl_invariants(const JLParams& params, int n) {
    validate(params, n);
    double mu2 = 0;
    for (cplx m : params.mu) mu2 += std::norm(m);
    JLInvariants inv;
    inv.scalar = std::exp(-2.0 * params.c) * n * (n + 1.0) *
                 (4.0 * (std::conj(params.kappa) * params.lambda).imag() - mu2);
    inv.eta = -inv.scalar / (n * (n + 1.0));
    return inv;
}

JLParams integrability_witness(int n, const std::vector<double>& p,
                               const std::vector<cplx>& omega) {
    if (static_cast<int>(p.size()) != 2 * n + 1)
        throw ConfigError("integrability_witness: point has wrong arity");
    if (static_cast<int>(omega.size()) != n)
        throw ConfigError("integrability_witness: omega must have n entries");
    JLParams params;
    params.kappa = 0;
    params.mu.resize(n);
    cplx zdotmu = 0;
    for (int a = 0; a < n; ++a) {
        params.mu[a] = -2.0 * omega[a];
        zdotmu += cplx(p[2 * a], p[2 * a + 1]) * params.mu[a];
    }
    params.lambda = 1.0 - zdotmu;
    params.c = 0;
    return params;
}

cplx classical_schwarzian(const FieldExprPtr& f, cplx z) {
    if (!f) throw ConfigError("classical_schwarzian: null expression");
    if (!is_holomorphic(*f)) throw ConfigError("classical_schwarzian: expression must be holomorphic");
    JetPoint jp = seed_jet({z.real(), z.imag(), 0.0}, 3);
    Jet j = eval_field(*f, jp);
    cplx d1 = wirtinger_coeff(j, {1}, {0}, 0);
    if (std::abs(d1) < kSmall) throw DomainError("classical_schwarzian: critical point, f'(z) = 0");
    cplx d2 = wirtinger_coeff(j, {2}, {0}, 0);
    cplx d3 = wirtinger_coeff(j, {3}, {0}, 0);
    return d3 / d1 - 1.5 * (d2 / d1) * (d2 / d1);
}

Example2Result example2_identity(const ScalarField& Phi, const ScalarField& phi2d,
                                 const std::vector<double>& p) {
    if (p.size() != 3) throw ConfigError("example2_identity: expects an n=1 point");
    Jet pj = phi2d.eval(seed_jet(p, 2));
    cplx pz = wirtinger_coeff(pj, {1}, {0}, 0);
    cplx pzz = wirtinger_coeff(pj, {2}, {0}, 0);
    if (std::abs(wirtinger_coeff(pj, {1}, {1}, 0)) > 1e-10)
        throw ConfigError("example2_identity: phi2d must be harmonic in z1");

    Model rigid = make_rigid(1, Phi);
    ScalarField sigma;
    auto Pe = Phi.eval;
    sigma.eval = [Pe](const JetPoint& jp) {
        JetPoint aux = seed_jet_unchecked(jp.base, jp.order + 2);
        return -0.25 * log(Pe(aux).dz(0).dzbar(0));
    };
    sigma.desc = "-(1/4) log Phi_{z zbar}";
    Model eta_model = apply_conformal(rigid, sigma);

    Schwarzian S = schwarzian_at(eta_model, phi2d, p);
    double e2sigma = std::exp(2.0 * sigma.eval(seed_jet(p, 1)).value().real());

    Example2Result out;
    out.b11 = e2sigma * S.b_holo[0][0];
    out.s_classical = 2.0 * (pzz - 2.0 * pz * pz);
    cplx Sf = 2.0 * out.s_classical;  // S(f) = 4(phi_zz - 2 phi_z^2)
    out.ratio = std::abs(Sf) > kSmall ? out.b11 / Sf : cplx(0, 0);
    out.mixed_max = std::abs(S.b_mixed[0][0]);
    return out;
}

RankLemmaResult rank_lemma_lambda(const std::vector<cplx>& U, const std::vector<cplx>& V) {
    const int n = static_cast<int>(U.size());
    if (n < 2 || V.size() != U.size())
        throw ConfigError("rank_lemma_lambda: needs two n-vectors with n >= 2");
    RankLemmaResult out;
    cplx tr = 0;
    for (int a = 0; a < n; ++a) tr += U[a] * std::conj(V[a]) - V[a] * std::conj(U[a]);
    out.lambda = tr / double(n);
    double worst = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            cplx m = U[a] * std::conj(V[b]) - V[a] * std::conj(U[b]);
            if (a == b) m -= out.lambda;
            worst = std::max(worst, std::abs(m));
        }
    out.is_scalar = worst < 1e-10;
    if (!out.is_scalar) out.lambda = 0;
    return out;
}

}  // namespace crsch
