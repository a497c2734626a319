#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "crsch/curvature.hpp"
#include "crsch/mobius.hpp"

namespace crsch {

struct CheckResult {
    std::string name;
    double max_residual = 0;
    double tolerance = 0;
    bool pass = false;
    bool asserted = true;  // reported-only checks never fail a suite
    std::vector<double> worst_point;
};

struct ResidualSet {
    std::vector<CheckResult> checks;

    bool all_passed() const;
    const CheckResult* find(const std::string& name) const;
};

struct SuiteConfig {
    Model model;
    std::string suite = "all";  // suite name or a single check name
    int samples = 50;
    std::uint64_t seed = 0;
    std::map<std::string, double> tolerances;  // overrides by check name
};

struct Report {
    std::string version;
    Model model;
    std::string suite;
    std::uint64_t seed = 0;
    int samples = 0;
    std::vector<CheckResult> checks;
    long long wall_ms = 0;

    bool all_passed() const;
    std::string to_json() const;
};

/// |LHS - RHS| of the Bochner identity for -Box_b |dbar_b f|^2 of a real f.
/// Requires a unit Levi form at the point (h = delta).
double bochner_residual(const Model& m, const ScalarField& f, const std::vector<double>& p);

/// Residuals for the contact-Hamiltonian automorphism lemma with
/// f = e^{-2 phi} |dbar_b phi|^2: (a) f_{;ab} + i f A_{ab}, (b) f_0
/// (asserted only for n >= 2), (c) Xf with X = H_f - f T. Also reports the
/// Moebius residual of phi at p as an unasserted precondition entry.
ResidualSet hamiltonian_check(const Model& m, const ScalarField& phi,
                              const std::vector<double>& p);

/// max over samples and indices of |A_{ab} phi_g - A_{ag} phi_b| (n >= 2).
double torsion_rank_check(const Model& m, const ScalarField& phi,
                          const std::vector<std::vector<double>>& samples);

/// |((n-1)/n) P_a f - (f_{;a bbar} - (1/n) f_g^g h_{a bbar})^{;bbar}| maxed over a.
double graham_lee_trace_residual(const Model& m, const ScalarField& f,
                                 const std::vector<double>& p);

Report run_suite(const SuiteConfig& config);

/// Names accepted by run_suite, in execution order.
std::vector<std::string> suite_check_names();

}  // namespace crsch
