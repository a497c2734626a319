#pragma once

#include <memory>
#include <string>

#include "crsch/jet.hpp"

namespace crsch {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    size_t offset() const { return offset_; }

private:
    size_t offset_;
};

enum class FnKind { Log, Exp, Re, Im, Abs2, Conj };

/// AST for scalar fields over a model's coordinates z_k, zbar_k, t.
struct FieldExpr {
    enum class Kind { Lit, Z, Zbar, T, Add, Sub, Mul, Div, Neg, Pow, Fn };

    Kind kind;
    cplx lit{};          // Lit
    int index = 0;       // Z / Zbar, zero-based
    int expo = 0;        // Pow
    FnKind fn{};         // Fn
    std::shared_ptr<const FieldExpr> a, b;
};

using FieldExprPtr = std::shared_ptr<const FieldExpr>;

FieldExprPtr fe_lit(cplx v);
FieldExprPtr fe_z(int k);
FieldExprPtr fe_zbar(int k);
FieldExprPtr fe_t();
FieldExprPtr fe_add(FieldExprPtr a, FieldExprPtr b);
FieldExprPtr fe_sub(FieldExprPtr a, FieldExprPtr b);
FieldExprPtr fe_mul(FieldExprPtr a, FieldExprPtr b);
FieldExprPtr fe_div(FieldExprPtr a, FieldExprPtr b);
FieldExprPtr fe_neg(FieldExprPtr a);
FieldExprPtr fe_pow(FieldExprPtr a, int e);
FieldExprPtr fe_fn(FnKind fn, FieldExprPtr a);

/// Evaluate to the jet of the field at jp. Exact to truncation order for the
/// primitive grammar; singular primitives at the base point raise DomainError
/// carrying the offending subexpression.
Jet eval_field(const FieldExpr& e, const JetPoint& jp);

FieldExprPtr parse_field_expr(const std::string& text);
std::string print_field_expr(const FieldExpr& e);

bool structurally_equal(const FieldExpr& a, const FieldExpr& b);

/// |central finite difference − jet derivative| of e at p for one real
/// coordinate, derivative order 1 or 2. Step: 1e-5 (order 1), 1e-4 (order 2).
double fd_crosscheck(const FieldExpr& e, const std::vector<double>& p, int coordinate, int order);

/// True when the expression stays inside the holomorphic subgrammar (z_k and
/// literals under arithmetic, log, exp; no zbar/t/re/im/abs2/conj).
bool is_holomorphic(const FieldExpr& e);

}  // namespace crsch
