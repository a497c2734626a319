#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace crsch {

using cplx = std::complex<double>;

/// Thrown when a field hits a singular primitive (log/division at zero) or an
/// evaluation precondition fails at the base point.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what, std::string detail = {})
        : std::runtime_error(what), detail_(std::move(detail)) {}
    const std::string& detail() const { return detail_; }

private:
    std::string detail_;  // offending subexpression, if known
};

/// Bad user-facing configuration (CLI flags, JSON config, arity mismatches).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Monomial bookkeeping shared by all jets with the same (nvars, order).
///
/// Multi-indices are enumerated graded-lexicographically, so the monomials of
/// degree <= r-1 are a prefix of those of degree <= r. Truncation is a prefix
/// copy and jets of different orders over the same variables interoperate.
class JetSpace {
public:
    static std::shared_ptr<const JetSpace> get(int nvars, int order);

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    int size() const { return static_cast<int>(degree_.size()); }
    int degree(int i) const { return degree_[i]; }
    uint8_t exponent(int i, int v) const { return exps_[static_cast<size_t>(i) * nvars_ + v]; }
    /// Index of the monomial with exponent bumped in variable v, or -1 past order.
    int shifted_up(int i, int v) const { return up_[static_cast<size_t>(i) * nvars_ + v]; }

    struct Triple {
        int32_t a, b, c;  // coeff[c] += x[a] * y[b]
    };
    const std::vector<Triple>& products() const { return products_; }

private:
    JetSpace(int nvars, int order);

    int nvars_;
    int order_;
    std::vector<uint8_t> exps_;    // size() * nvars
    std::vector<int> degree_;
    std::vector<int32_t> up_;      // size() * nvars
    std::vector<Triple> products_;
};

/// Truncated multivariate Taylor expansion of a complex scalar at a point.
///
/// Coefficients are stored in divided (Taylor) normalization; derivative
/// normalization happens only at extraction (derivative/wirtinger accessors).
class Jet {
public:
    Jet() = default;
    explicit Jet(std::shared_ptr<const JetSpace> space);  // zero jet
    static Jet constant(std::shared_ptr<const JetSpace> space, cplx v);
    /// Seeded coordinate jet: base value at degree 0, coefficient 1 on the
    /// degree-1 monomial of variable v, zero elsewhere.
    static Jet coordinate(std::shared_ptr<const JetSpace> space, int v, double base);

    bool valid() const { return space_ != nullptr; }
    int order() const { return space_->order(); }
    int nvars() const { return space_->nvars(); }
    const std::shared_ptr<const JetSpace>& space() const { return space_; }

    cplx value() const { return coeff_[0]; }
    /// Taylor coefficient for an explicit exponent vector.
    cplx taylor_coeff(const std::vector<int>& exps) const;
    const std::vector<cplx>& coeffs() const { return coeff_; }
    double max_abs_coeff() const;

    Jet truncated(int order) const;
    /// Coefficient-wise conjugate: the jet of conj(f) (real coordinates).
    Jet conjugated() const;

    /// Jet of the partial derivative in coordinate v; order drops by one.
    Jet derivative(int v) const;
    /// Wirtinger derivatives for coordinate pair (x_a, y_a) = z_a.
    Jet dz(int a) const;
    Jet dzbar(int a) const;

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(cplx s);

    friend Jet operator+(const Jet& a, const Jet& b);
    friend Jet operator-(const Jet& a, const Jet& b);
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator+(const Jet& a, cplx s);
    friend Jet operator+(cplx s, const Jet& a);
    friend Jet operator-(const Jet& a, cplx s);
    friend Jet operator-(cplx s, const Jet& a);
    friend Jet operator*(const Jet& a, cplx s);
    friend Jet operator*(cplx s, const Jet& a);
    friend Jet operator/(const Jet& a, cplx s);

    friend Jet exp(const Jet& u);
    friend Jet log(const Jet& u);
    friend Jet inverse(const Jet& u);
    friend Jet pow_int(const Jet& u, int p);
    friend Jet real_part(const Jet& u);
    friend Jet imag_part(const Jet& u);
    friend Jet abs2(const Jet& u);

private:
    std::shared_ptr<const JetSpace> space_;
    std::vector<cplx> coeff_;

    // Aligns two jets to the smaller order; returns the common space.
    static std::shared_ptr<const JetSpace> align(const Jet& a, const Jet& b,
                                                 const cplx*& pa, const cplx*& pb,
                                                 std::vector<cplx>& sa, std::vector<cplx>& sb);
};

/// Coordinate jets seeded at a base point: the entry to all differentiation.
struct JetPoint {
    int n = 0;      // CR dimension; coordinates are (x1,y1,...,xn,yn,t)
    int order = 0;
    std::vector<double> base;
    std::vector<Jet> vars;

    int nvars() const { return 2 * n + 1; }
    Jet z(int a) const;     // x_a + i y_a
    Jet zbar(int a) const;
    Jet t() const { return vars[2 * n]; }
    Jet constant(cplx v) const;
};

/// Seeded coordinate jets at p. Public entry: order must lie in [1,4] and p
/// must have odd length 2n+1.
JetPoint seed_jet(const std::vector<double>& p, int order);
/// Internal variant without the order cap (closed-form connection data of the
/// rigid model needs a few extra orders of headroom).
JetPoint seed_jet_unchecked(const std::vector<double>& p, int order);

/// Mixed Wirtinger/t partial derivative of j (factorials multiplied back in).
/// dz_exp and dzbar_exp have one entry per z-coordinate.
cplx wirtinger_coeff(const Jet& j, const std::vector<int>& dz_exp,
                     const std::vector<int>& dzbar_exp, int dt);

}  // namespace crsch
