#include "crsch/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>

namespace crsch {

namespace {

uint64_t pack_exps(const uint8_t* e, int nvars) {
    uint64_t key = 0;
    for (int v = 0; v < nvars; ++v) key = (key << 4) | (e[v] & 0xF);
    return key;
}

constexpr double kSingularTol = 1e-12;

}  // namespace

JetSpace::JetSpace(int nvars, int order) : nvars_(nvars), order_(order) {
    if (nvars < 1 || nvars > 15) throw std::invalid_argument("JetSpace: nvars out of range");
    if (order < 0 || order > 12) throw std::invalid_argument("JetSpace: order out of range");

    // Graded-lex enumeration of all multi-indices with |e| <= order.
    std::vector<uint8_t> cur(nvars, 0);
    std::unordered_map<uint64_t, int> pos;
    for (int d = 0; d <= order; ++d) {
        // enumerate exponent vectors with |e| == d, lexicographically
        std::vector<uint8_t> e(nvars, 0);
        // recursive lambda over positions
        auto emit = [&](auto&& self, int v, int rem) -> void {
            if (v == nvars - 1) {
                e[v] = static_cast<uint8_t>(rem);
                pos.emplace(pack_exps(e.data(), nvars), static_cast<int>(degree_.size()));
                exps_.insert(exps_.end(), e.begin(), e.end());
                degree_.push_back(d);
                return;
            }
            for (int k = rem; k >= 0; --k) {
                e[v] = static_cast<uint8_t>(k);
                self(self, v + 1, rem - k);
            }
            e[v] = 0;
        };
        emit(emit, 0, d);
    }

    const int sz = size();
    up_.assign(static_cast<size_t>(sz) * nvars, -1);
    for (int i = 0; i < sz; ++i) {
        if (degree_[i] == order) continue;
        std::vector<uint8_t> e(exps_.begin() + static_cast<size_t>(i) * nvars,
                               exps_.begin() + static_cast<size_t>(i + 1) * nvars);
        for (int v = 0; v < nvars; ++v) {
            ++e[v];
            up_[static_cast<size_t>(i) * nvars + v] = pos.at(pack_exps(e.data(), nvars));
            --e[v];
        }
    }

    for (int a = 0; a < sz; ++a) {
        for (int b = 0; b < sz; ++b) {
            if (degree_[a] + degree_[b] > order) continue;
            std::vector<uint8_t> e(nvars);
            for (int v = 0; v < nvars; ++v)
                e[v] = static_cast<uint8_t>(exponent(a, v) + exponent(b, v));
            products_.push_back({a, b, pos.at(pack_exps(e.data(), nvars))});
        }
    }
}

std::shared_ptr<const JetSpace> JetSpace::get(int nvars, int order) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const JetSpace>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(nvars, order);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto sp = std::shared_ptr<const JetSpace>(new JetSpace(nvars, order));
    cache.emplace(key, sp);
    return sp;
}

Jet::Jet(std::shared_ptr<const JetSpace> space)
    : space_(std::move(space)), coeff_(space_->size(), cplx{0.0, 0.0}) {}

Jet Jet::constant(std::shared_ptr<const JetSpace> space, cplx v) {
    Jet j(std::move(space));
    j.coeff_[0] = v;
    return j;
}

cplx Jet::taylor_coeff(const std::vector<int>& exps) const {
    if (static_cast<int>(exps.size()) != nvars())
        throw std::invalid_argument("taylor_coeff: arity mismatch");
    int i = 0;  // walk up from the constant term
    // locate by linear scan over the space (small spaces; used in tests only)
    const int sz = space_->size();
    for (i = 0; i < sz; ++i) {
        bool match = true;
        for (int v = 0; v < nvars(); ++v)
            if (space_->exponent(i, v) != exps[v]) { match = false; break; }
        if (match) return coeff_[i];
    }
    throw std::invalid_argument("taylor_coeff: degree exceeds jet order");
}

double Jet::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : coeff_) m = std::max(m, std::abs(c));
    return m;
}

Jet Jet::truncated(int order) const {
    if (order >= this->order()) return *this;
    auto sp = JetSpace::get(nvars(), order);
    Jet r(sp);
    std::copy(coeff_.begin(), coeff_.begin() + sp->size(), r.coeff_.begin());
    return r;
}

Jet Jet::conjugated() const {
    Jet r = *this;
    for (auto& c : r.coeff_) c = std::conj(c);
    return r;
}

Jet Jet::derivative(int v) const {
    if (v < 0 || v >= nvars()) throw std::invalid_argument("derivative: bad coordinate");
    if (order() == 0) throw std::invalid_argument("derivative: jet order exhausted");
    auto sp = JetSpace::get(nvars(), order() - 1);
    Jet r(sp);
    for (int i = 0; i < sp->size(); ++i) {
        const int j = space_->shifted_up(i, v);
        r.coeff_[i] = static_cast<double>(space_->exponent(i, v) + 1) * coeff_[j];
    }
    return r;
}

Jet Jet::dz(int a) const {
    return 0.5 * (derivative(2 * a) - cplx{0, 1} * derivative(2 * a + 1));
}

Jet Jet::dzbar(int a) const {
    return 0.5 * (derivative(2 * a) + cplx{0, 1} * derivative(2 * a + 1));
}

std::shared_ptr<const JetSpace> Jet::align(const Jet& a, const Jet& b, const cplx*& pa,
                                           const cplx*& pb, std::vector<cplx>& sa,
                                           std::vector<cplx>& sb) {
    if (!a.valid() || !b.valid()) throw std::invalid_argument("arithmetic on empty jet");
    if (a.nvars() != b.nvars())
        throw std::invalid_argument("jet arithmetic requires identical num_vars");
    if (a.order() == b.order()) {
        pa = a.coeff_.data();
        pb = b.coeff_.data();
        return a.space_;
    }
    // Differing orders: truncate the finer jet. Internal convenience; the
    // public seeded contexts always agree.
    if (a.order() > b.order()) {
        sa.assign(a.coeff_.begin(), a.coeff_.begin() + b.space_->size());
        pa = sa.data();
        pb = b.coeff_.data();
        return b.space_;
    }
    sb.assign(b.coeff_.begin(), b.coeff_.begin() + a.space_->size());
    pa = a.coeff_.data();
    pb = sb.data();
    return a.space_;
}

Jet operator+(const Jet& a, const Jet& b) {
    const cplx *pa, *pb;
    std::vector<cplx> sa, sb;
    auto sp = Jet::align(a, b, pa, pb, sa, sb);
    Jet r(sp);
    for (int i = 0; i < sp->size(); ++i) r.coeff_[i] = pa[i] + pb[i];
    return r;
}

Jet operator-(const Jet& a, const Jet& b) {
    const cplx *pa, *pb;
    std::vector<cplx> sa, sb;
    auto sp = Jet::align(a, b, pa, pb, sa, sb);
    Jet r(sp);
    for (int i = 0; i < sp->size(); ++i) r.coeff_[i] = pa[i] - pb[i];
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    const cplx *pa, *pb;
    std::vector<cplx> sa, sb;
    auto sp = Jet::align(a, b, pa, pb, sa, sb);
    Jet r(sp);
    for (const auto& t : sp->products()) r.coeff_[t.c] += pa[t.a] * pb[t.b];
    return r;
}

Jet operator/(const Jet& a, const Jet& b) { return a * inverse(b); }

Jet Jet::operator-() const {
    Jet r = *this;
    for (auto& c : r.coeff_) c = -c;
    return r;
}

Jet& Jet::operator+=(const Jet& o) { return *this = *this + o; }
Jet& Jet::operator-=(const Jet& o) { return *this = *this - o; }
Jet& Jet::operator*=(cplx s) {
    for (auto& c : coeff_) c *= s;
    return *this;
}

Jet operator+(const Jet& a, cplx s) {
    Jet r = a;
    r.coeff_[0] += s;
    return r;
}
Jet operator+(cplx s, const Jet& a) { return a + s; }
Jet operator-(const Jet& a, cplx s) { return a + (-s); }
Jet operator-(cplx s, const Jet& a) { return (-a) + s; }
Jet operator*(const Jet& a, cplx s) {
    Jet r = a;
    r *= s;
    return r;
}
Jet operator*(cplx s, const Jet& a) { return a * s; }
Jet operator/(const Jet& a, cplx s) { return a * (1.0 / s); }

namespace {

// f(c + w) = sum_k g[k] w^k with w the nilpotent part of u.
Jet compose_series(const Jet& u, const std::vector<cplx>& g) {
    Jet w = u;
    w -= Jet::constant(u.space(), u.value());
    Jet acc = Jet::constant(u.space(), g[0]);
    Jet p = w;
    for (size_t k = 1; k < g.size(); ++k) {
        acc += g[k] * p;
        if (k + 1 < g.size()) p = p * w;
    }
    return acc;
}

}  // namespace

Jet exp(const Jet& u) {
    const int r = u.order();
    std::vector<cplx> g(r + 1);
    const cplx e0 = std::exp(u.value());
    double fact = 1.0;
    for (int k = 0; k <= r; ++k) {
        if (k > 0) fact *= k;
        g[k] = e0 / fact;
    }
    return compose_series(u, g);
}

Jet log(const Jet& u) {
    const cplx c = u.value();
    if (std::abs(c) < kSingularTol) throw DomainError("log of zero argument");
    const int r = u.order();
    std::vector<cplx> g(r + 1);
    g[0] = std::log(c);
    cplx cp = c;
    for (int k = 1; k <= r; ++k) {
        g[k] = (k % 2 == 1 ? 1.0 : -1.0) / (static_cast<double>(k) * cp);
        cp *= c;
    }
    return compose_series(u, g);
}

Jet inverse(const Jet& u) {
    const cplx c = u.value();
    if (std::abs(c) < kSingularTol) throw DomainError("division by zero");
    const int r = u.order();
    std::vector<cplx> g(r + 1);
    cplx cp = c;
    for (int k = 0; k <= r; ++k) {
        g[k] = (k % 2 == 0 ? 1.0 : -1.0) / cp;
        cp *= c;
    }
    return compose_series(u, g);
}

Jet pow_int(const Jet& u, int p) {
    if (p < 0) return pow_int(inverse(u), -p);
    Jet acc = Jet::constant(u.space(), 1.0);
    Jet base = u;
    int e = p;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return acc;
}

Jet real_part(const Jet& u) { return 0.5 * (u + u.conjugated()); }
Jet imag_part(const Jet& u) { return cplx{0, -0.5} * (u - u.conjugated()); }
Jet abs2(const Jet& u) { return u * u.conjugated(); }

Jet JetPoint::z(int a) const { return vars[2 * a] + cplx{0, 1} * vars[2 * a + 1]; }
Jet JetPoint::zbar(int a) const { return vars[2 * a] - cplx{0, 1} * vars[2 * a + 1]; }
Jet JetPoint::constant(cplx v) const { return Jet::constant(vars[0].space(), v); }

Jet Jet::coordinate(std::shared_ptr<const JetSpace> space, int v, double base) {
    Jet j(std::move(space));
    j.coeff_[0] = base;
    const auto& sp = *j.space_;
    if (sp.order() >= 1) {
        for (int i = 0; i < sp.size(); ++i) {
            if (sp.degree(i) == 1 && sp.exponent(i, v) == 1) {
                j.coeff_[i] = 1.0;
                break;
            }
        }
    }
    return j;
}

JetPoint seed_jet_unchecked(const std::vector<double>& p, int order) {
    if (p.size() % 2 == 0 || p.size() < 3)
        throw ConfigError("point must have odd length 2n+1 with n >= 1");
    if (order < 1) throw ConfigError("jet order must be at least 1");
    JetPoint jp;
    jp.n = static_cast<int>(p.size() / 2);
    jp.order = order;
    jp.base = p;
    auto sp = JetSpace::get(static_cast<int>(p.size()), order);
    jp.vars.reserve(p.size());
    for (size_t k = 0; k < p.size(); ++k)
        jp.vars.push_back(Jet::coordinate(sp, static_cast<int>(k), p[k]));
    return jp;
}

JetPoint seed_jet(const std::vector<double>& p, int order) {
    if (order < 1 || order > 4) throw ConfigError("jet order must lie in [1,4]");
    return seed_jet_unchecked(p, order);
}

cplx wirtinger_coeff(const Jet& j, const std::vector<int>& dz_exp,
                     const std::vector<int>& dzbar_exp, int dt) {
    const int n = j.nvars() / 2;
    if (static_cast<int>(dz_exp.size()) != n || static_cast<int>(dzbar_exp.size()) != n)
        throw std::invalid_argument("wirtinger_coeff: index arity mismatch");
    int total = dt;
    for (int a = 0; a < n; ++a) total += dz_exp[a] + dzbar_exp[a];
    if (total > j.order())
        throw ConfigError("wirtinger_coeff: requested order exceeds jet order");
    Jet cur = j;
    for (int a = 0; a < n; ++a) {
        for (int k = 0; k < dz_exp[a]; ++k) cur = cur.dz(a);
        for (int k = 0; k < dzbar_exp[a]; ++k) cur = cur.dzbar(a);
    }
    for (int k = 0; k < dt; ++k) cur = cur.derivative(j.nvars() - 1);
    return cur.value();
}

}  // namespace crsch
