#ifndef WEIL_LIFT_HPP
#define WEIL_LIFT_HPP

#include <cmath>
#include <map>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "expr.hpp"
#include "morphism.hpp"

namespace weil {

// A point of W^n, i.e. a W-valued point of the chart R^n.
template <class S>
class WeilPoint {
public:
    WeilPoint(AlgebraPtr w, std::vector<Element<S>> components)
        : w_(std::move(w)), components_(std::move(components)) {
        for (const auto& c : components_)
            if (!same_algebra(c.algebra(), w_))
                fail(errc::algebra_mismatch,
                     "point components must all lie in the same algebra");
    }

    static WeilPoint from_base(AlgebraPtr w, const std::vector<S>& base) {
        std::vector<Element<S>> comps;
        comps.reserve(base.size());
        for (const S& v : base)
            comps.push_back(Element<S>::template from_scalar<S>(w, v));
        return WeilPoint(std::move(w), std::move(comps));
    }

    const AlgebraPtr& algebra() const { return w_; }
    std::size_t arity() const { return components_.size(); }
    const std::vector<Element<S>>& components() const { return components_; }
    const Element<S>& component(std::size_t i) const { return components_[i]; }

    // The underlying real point: the vector of augmentations.
    std::vector<S> base() const {
        std::vector<S> b;
        b.reserve(components_.size());
        for (const auto& c : components_) b.push_back(c.augmentation());
        return b;
    }

    bool operator==(const WeilPoint& o) const {
        return same_algebra(w_, o.w_) && components_ == o.components_;
    }
    bool operator!=(const WeilPoint& o) const { return !(*this == o); }

    std::string str() const {
        std::string out = "(";
        for (std::size_t i = 0; i < components_.size(); ++i) {
            if (i) out += ", ";
            out += components_[i].str();
        }
        return out + ")";
    }

private:
    AlgebraPtr w_;
    std::vector<Element<S>> components_;
};

inline bool approx_equal(const WeilPoint<double>& p, const WeilPoint<double>& q,
                         double tol = 1e-9) {
    if (!same_algebra(p.algebra(), q.algebra()) || p.arity() != q.arity()) return false;
    for (std::size_t i = 0; i < p.arity(); ++i)
        if (!approx_equal(p.component(i), q.component(i), tol)) return false;
    return true;
}

namespace detail {

inline void compositions_of(unsigned total, std::size_t i, std::vector<unsigned>& idx,
                            std::vector<std::vector<unsigned>>& out) {
    if (i + 1 == idx.size()) {
        idx[i] = total;
        out.push_back(idx);
        return;
    }
    for (unsigned e = 0; e <= total; ++e) {
        idx[i] = e;
        compositions_of(total - e, i + 1, idx, out);
    }
}

// All multi-indices of width n with total degree < k, graded ascending.
inline std::vector<std::vector<unsigned>> multi_indices_below(std::size_t n,
                                                              unsigned k) {
    std::vector<std::vector<unsigned>> out;
    if (n == 0) {
        if (k > 0) out.emplace_back();
        return out;
    }
    std::vector<unsigned> idx(n, 0);
    for (unsigned total = 0; total < k; ++total) compositions_of(total, 0, idx, out);
    return out;
}

inline Rat multi_index_factorial(const std::vector<unsigned>& alpha) {
    Rat f(1);
    for (unsigned a : alpha)
        for (unsigned j = 2; j <= a; ++j) f *= j;
    return f;
}

inline bool is_zero_literal(const Expr& e) {
    return e.kind() == Expr::Kind::literal && e.literal() == 0;
}

template <class S>
inline void check_map_domain(const SmoothMap& f, const std::vector<S>& base) {
    if (!f.domain()) return;
    if constexpr (std::is_same_v<S, Poly>) {
        fail(errc::mode_mismatch, "domain boxes are not supported in symbolic mode");
    } else {
        if (!f.domain()->contains(base))
            fail(errc::domain_error, "base point lies outside the map's domain");
    }
}

// Evaluates a polynomial over scalars with a shared per-variable power table;
// the table grows lazily and is reused across every term and every component.
template <class S>
inline S eval_polynomial(const Poly& p, const std::vector<S>& base,
                         std::vector<std::vector<S>>& pows) {
    S acc = scalar_traits<S>::from_rat(Rat(0));
    for (const auto& [mono, coeff] : p.terms()) {
        S term = scalar_traits<S>::from_rat(coeff);
        for (std::size_t i = 0; i < mono.width(); ++i) {
            const unsigned e = mono.exponent(i);
            if (e == 0) continue;
            auto& tab = pows[i];
            if (tab.empty()) tab.push_back(scalar_traits<S>::from_rat(Rat(1)));
            while (tab.size() <= e) tab.push_back(tab.back() * base[i]);
            term = term * tab[e];
        }
        acc = acc + term;
    }
    return acc;
}

} // namespace detail

// Truncated Taylor expansion of a single primitive:
//   sum_{j < k} prim^(j)(a)/j! * nu^j
// where nu is nilpotent (zero unit coordinate).
inline double primitive_taylor_coefficient(Primitive prim, double a, unsigned j) {
    double fact = 1.0;
    for (unsigned i = 2; i <= j; ++i) fact *= i;
    switch (prim) {
        case Primitive::exp: return std::exp(a) / fact;
        case Primitive::sin: {
            static const int sign[4] = {1, 1, -1, -1};
            const double v = (j % 2 == 0) ? std::sin(a) : std::cos(a);
            return sign[j % 4] * v / fact;
        }
        case Primitive::cos: {
            static const int sign[4] = {1, -1, -1, 1};
            const double v = (j % 2 == 0) ? std::cos(a) : std::sin(a);
            return sign[j % 4] * v / fact;
        }
        case Primitive::log: {
            if (a <= 0) fail(errc::domain_error, "log of non-positive value");
            if (j == 0) return std::log(a);
            const double s = (j % 2 == 1) ? 1.0 : -1.0;
            return s / (j * std::pow(a, static_cast<double>(j)));
        }
        case Primitive::sqrt: {
            if (a < 0) fail(errc::domain_error, "sqrt of negative value");
            if (j == 0) return std::sqrt(a);
            if (a == 0)
                fail(errc::domain_error, "sqrt is not smooth at zero");
            double binom = 1.0;
            for (unsigned i = 0; i < j; ++i) binom *= (0.5 - i) / (i + 1);
            return binom * std::pow(a, 0.5 - static_cast<double>(j));
        }
    }
    fail(errc::syntax_error, "corrupt primitive");
}

inline Element<double> taylor_primitive(Primitive prim, double a,
                                        const Element<double>& nu) {
    if (!scalar_traits<double>::is_zero(nu.augmentation()))
        fail(errc::domain_error,
             "taylor_primitive expects a nilpotent perturbation (zero unit coordinate)");
    const AlgebraPtr& w = nu.algebra();
    Element<double> acc = Element<double>::zero(w);
    Element<double> nu_pow = Element<double>::unit(w);
    for (unsigned j = 0; j < w->nilpotency_index(); ++j) {
        if (j > 0) {
            nu_pow *= nu;
            if (nu_pow.is_zero()) break;
        }
        acc += nu_pow.scaled(primitive_taylor_coefficient(prim, a, j));
    }
    return acc;
}

// The Weil functor on a chart map: T^W f computed by the truncated Taylor sum
//   (T^W f)(a + nu) = sum_{|alpha| < k} (d^alpha f(a) / alpha!) * nu^alpha.
// All partial derivatives up to the truncation order are precomputed
// symbolically at construction, so applying the lift is a pure const call.
class LiftedMap {
public:
    LiftedMap(SmoothMap f, AlgebraPtr w) : f_(std::move(f)), w_(std::move(w)) {
        orders_ = detail::multi_indices_below(f_.arity(), w_->nilpotency_index());
        derivs_[std::vector<unsigned>(f_.arity(), 0)] = f_.components();
        for (const auto& alpha : orders_) {
            if (derivs_.count(alpha)) continue;
            std::vector<unsigned> parent = alpha;
            std::size_t i = 0;
            while (parent[i] == 0) ++i;
            --parent[i];
            const std::vector<Expr>& base = derivs_.at(parent);
            std::vector<Expr> d;
            d.reserve(base.size());
            for (const Expr& e : base) d.push_back(derive(e, i));
            derivs_[alpha] = std::move(d);
        }
        // Polynomial components admit a table-driven evaluation that avoids
        // re-walking expression trees at every probe point.
        if (f_.is_polynomial()) {
            for (const auto& alpha : orders_) {
                const std::vector<Expr>& dexprs = derivs_.at(alpha);
                std::vector<Poly> d;
                d.reserve(dexprs.size());
                for (const Expr& e : dexprs) d.push_back(e.to_polynomial());
                poly_derivs_[alpha] = std::move(d);
            }
        }
    }

    const SmoothMap& map() const { return f_; }
    const AlgebraPtr& algebra() const { return w_; }

    template <class S>
    WeilPoint<S> operator()(const WeilPoint<S>& p) const {
        if (!same_algebra(p.algebra(), w_))
            fail(errc::algebra_mismatch, "point algebra does not match the lift's algebra");
        if (p.arity() != f_.arity())
            fail(errc::arity_violation,
                 "map expects " + std::to_string(f_.arity()) + " coordinates, point has " +
                     std::to_string(p.arity()));
        const std::vector<S> base = p.base();
        detail::check_map_domain(f_, base);

        // A polynomial map can be evaluated directly in the algebra: its
        // Taylor sum terminates, and every term of total order >= k already
        // vanishes in the nilpotent ideal, so the direct value coincides with
        // the truncated expansion while skipping the per-order loop.  The
        // factorial fault must flow through the expansion to have any effect.
        if (!poly_derivs_.empty() && !faults::flags().drop_taylor_factorial)
            return apply_polynomial(p);

        std::vector<std::vector<Element<S>>> nu_pows(p.arity());
        auto nu_power = [&](std::size_t i, unsigned e) -> const Element<S>& {
            auto& tab = nu_pows[i];
            if (tab.empty()) {
                tab.push_back(Element<S>::unit(w_));
                tab.push_back(p.component(i).nilpotent_part());
            }
            while (tab.size() <= e) tab.push_back(tab.back() * tab[1]);
            return tab[e];
        };

        std::vector<Element<S>> out(f_.coarity(), Element<S>::zero(w_));
        std::vector<std::vector<S>> base_pows(f_.arity());
        for (const auto& alpha : orders_) {
            Element<S> nu_alpha = Element<S>::unit(w_);
            bool vanished = false;
            for (std::size_t i = 0; i < alpha.size(); ++i) {
                if (alpha[i] == 0) continue;
                nu_alpha *= nu_power(i, alpha[i]);
                if (nu_alpha.is_zero()) {
                    vanished = true;
                    break;
                }
            }
            if (vanished) continue;
            const Rat fact = detail::multi_index_factorial(alpha);
            const bool scale_down = !faults::flags().drop_taylor_factorial && fact != 1;
            const Rat inv_fact = scale_down ? Rat(1) / fact : Rat(1);
            auto accumulate = [&](std::size_t j, const S& value) {
                Element<S> term = nu_alpha.scaled(value);
                if (scale_down) term = term.scaled(inv_fact);
                out[j] += term;
            };
            if (!poly_derivs_.empty()) {
                const std::vector<Poly>& dpolys = poly_derivs_.at(alpha);
                for (std::size_t j = 0; j < dpolys.size(); ++j) {
                    if (dpolys[j].is_zero()) continue;
                    accumulate(j, detail::eval_polynomial(dpolys[j], base, base_pows));
                }
            } else {
                const std::vector<Expr>& dexprs = derivs_.at(alpha);
                for (std::size_t j = 0; j < dexprs.size(); ++j) {
                    if (detail::is_zero_literal(dexprs[j])) continue;
                    accumulate(j, eval(dexprs[j], base));
                }
            }
        }
        return WeilPoint<S>(w_, std::move(out));
    }

private:
    template <class S>
    WeilPoint<S> apply_polynomial(const WeilPoint<S>& p) const {
        std::vector<std::vector<Element<S>>> pows(f_.arity());
        auto power = [&](std::size_t i, unsigned e) -> const Element<S>& {
            auto& tab = pows[i];
            if (tab.empty()) {
                tab.push_back(Element<S>::unit(w_));
                tab.push_back(p.component(i));
            }
            while (tab.size() <= e) tab.push_back(tab.back() * tab[1]);
            return tab[e];
        };
        const std::vector<Poly>& comps =
            poly_derivs_.at(std::vector<unsigned>(f_.arity(), 0));
        std::vector<Element<S>> out;
        out.reserve(comps.size());
        for (const Poly& comp : comps) {
            Element<S> acc = Element<S>::zero(w_);
            for (const auto& [mono, coeff] : comp.terms()) {
                Element<S> term = Element<S>::unit(w_);
                bool started = false;
                for (std::size_t i = 0; i < mono.width(); ++i) {
                    const unsigned e = mono.exponent(i);
                    if (e == 0) continue;
                    if (!started) {
                        term = power(i, e);
                        started = true;
                    } else {
                        term *= power(i, e);
                    }
                }
                acc += coeff == 1 ? term : term.scaled(coeff);
            }
            out.push_back(std::move(acc));
        }
        return WeilPoint<S>(w_, std::move(out));
    }

    SmoothMap f_;
    AlgebraPtr w_;
    std::vector<std::vector<unsigned>> orders_;
    std::map<std::vector<unsigned>, std::vector<Expr>> derivs_;
    std::map<std::vector<unsigned>, std::vector<Poly>> poly_derivs_;
};

inline LiftedMap lift_map(SmoothMap f, AlgebraPtr w) {
    return LiftedMap(std::move(f), std::move(w));
}

// The natural transformation on a chart: alpha_phi(R^n) = phi^n.
template <class S>
inline WeilPoint<S> alpha_on_chart(const WeilMorphism& phi, const WeilPoint<S>& p) {
    if (!same_algebra(p.algebra(), phi.source()))
        fail(errc::algebra_mismatch, "point algebra does not match the morphism source");
    std::vector<Element<S>> comps;
    comps.reserve(p.arity());
    for (const auto& c : p.components()) comps.push_back(phi.apply(c));
    return WeilPoint<S>(phi.target(), std::move(comps));
}

// Direct AST evaluation on Weil elements (no Taylor sum): arithmetic nodes
// use the algebra operations, quotients use the geometric-series inverse,
// and primitive calls use taylor_primitive.  This is an independent second
// route to the lift, used for cross-checking.
template <class S>
inline Element<S> eval_element(const Expr& e, const std::vector<Element<S>>& args,
                               const AlgebraPtr& w) {
    using K = Expr::Kind;
    switch (e.kind()) {
        case K::literal:
            return Element<S>::template from_scalar<Rat>(w, e.literal());
        case K::variable:
            if (e.var_index() >= args.size())
                fail(errc::arity_violation,
                     "point has no coordinate for x" + std::to_string(e.var_index()));
            return args[e.var_index()];
        case K::sum: {
            Element<S> acc = Element<S>::zero(w);
            for (const Expr& op : e.operands()) acc += eval_element(op, args, w);
            return acc;
        }
        case K::product: {
            Element<S> acc = Element<S>::unit(w);
            for (const Expr& op : e.operands()) acc *= eval_element(op, args, w);
            return acc;
        }
        case K::quotient: {
            if constexpr (std::is_same_v<S, Poly>) {
                fail(errc::mode_mismatch, "quotients are not supported in symbolic mode");
            } else {
                const Element<S> num = eval_element(e.operands()[0], args, w);
                const Element<S> den = eval_element(e.operands()[1], args, w);
                return num * den.inverse();
            }
        }
        case K::power:
            return eval_element(e.operands().front(), args, w).pow(e.exponent());
        case K::call: {
            if constexpr (std::is_same_v<S, double>) {
                const Element<double> arg = eval_element(e.operands().front(), args, w);
                return taylor_primitive(e.primitive(), arg.augmentation(),
                                        arg.nilpotent_part());
            } else {
                fail(errc::mode_mismatch,
                     "primitive " + std::string(primitive_name(e.primitive())) +
                         " requires float mode");
            }
        }
    }
    fail(errc::syntax_error, "corrupt expression node");
}

template <class S>
inline WeilPoint<S> eval_direct(const SmoothMap& f, const WeilPoint<S>& p) {
    if (p.arity() != f.arity())
        fail(errc::arity_violation,
             "map expects " + std::to_string(f.arity()) + " coordinates, point has " +
                 std::to_string(p.arity()));
    detail::check_map_domain(f, p.base());
    std::vector<Element<S>> out;
    out.reserve(f.coarity());
    for (const Expr& c : f.components())
        out.push_back(eval_element(c, p.components(), p.algebra()));
    return WeilPoint<S>(p.algebra(), std::move(out));
}

inline Expr expr_from_poly(const Poly& p) {
    std::vector<Expr> terms;
    for (const auto& [m, c] : p.terms()) {
        std::vector<Expr> factors;
        factors.push_back(Expr::lit(c));
        for (std::size_t i = 0; i < m.width(); ++i)
            if (m.exponent(i) > 0)
                factors.push_back(Expr::power(Expr::var(i), m.exponent(i)));
        terms.push_back(Expr::product(std::move(factors)));
    }
    return Expr::sum(std::move(terms));
}

// The coordinate expression of T^W f as an honest smooth map
//   R^(n*dim W) -> R^(m*dim W),
// obtained by evaluating f on elements with indeterminate coordinates
// u_(i,a) = x_(i*dimW + a).  This route never touches the Taylor machinery:
// it is plain polynomial arithmetic in the algebra, which makes it an
// independent witness for the Taylor-based lift.
inline SmoothMap symbolic_lift(const SmoothMap& f, const AlgebraPtr& w) {
    if (!f.is_polynomial() || f.domain().has_value())
        fail(errc::mode_mismatch, "symbolic lift requires a box-free polynomial map");
    const std::size_t d = w->dim();
    std::vector<Element<Poly>> args;
    args.reserve(f.arity());
    for (std::size_t i = 0; i < f.arity(); ++i) {
        std::vector<Poly> coords;
        coords.reserve(d);
        for (std::size_t a = 0; a < d; ++a) coords.push_back(Poly::var(i * d + a));
        args.emplace_back(w, std::move(coords));
    }
    std::vector<Expr> comps;
    comps.reserve(f.coarity() * d);
    for (const Expr& component : f.components()) {
        const Element<Poly> value = eval_element(component, args, w);
        for (std::size_t a = 0; a < d; ++a)
            comps.push_back(expr_from_poly(value.coords()[a]));
    }
    return SmoothMap(f.arity() * d, std::move(comps));
}

// Canonical identification of ((W1 (x) W2)-points of R^n) with
// (W2-points of R^(n*dim W1)); slot (i, a) lands at index i*dim(W1) + a.
template <class S>
inline WeilPoint<S> flatten_tensor_point(const WeilPoint<S>& p) {
    const AlgebraPtr& t = p.algebra();
    const auto& info = t->tensor_info();
    const std::size_t d1 = info.left->dim();
    const std::size_t d2 = info.right->dim();
    const S zero = scalar_traits<S>::from_rat(Rat(0));
    std::vector<std::vector<S>> coords(p.arity() * d1, std::vector<S>(d2, zero));
    for (std::size_t i = 0; i < p.arity(); ++i)
        for (std::size_t tix = 0; tix < t->dim(); ++tix) {
            const auto [a, b] = t->tensor_split(tix);
            coords[i * d1 + a][b] = p.component(i).coords()[tix];
        }
    std::vector<Element<S>> comps;
    comps.reserve(coords.size());
    for (auto& c : coords) comps.emplace_back(info.right, std::move(c));
    return WeilPoint<S>(info.right, std::move(comps));
}

// The chart-level incarnation of alpha_phi on R^n: the linear smooth map
// R^(n*dim W1) -> R^(n*dim W2) applying phi's matrix slotwise.
inline SmoothMap alpha_as_map(const WeilMorphism& phi, std::size_t n) {
    const std::size_t d1 = phi.source()->dim();
    const std::size_t d2 = phi.target()->dim();
    std::vector<Expr> comps;
    comps.reserve(n * d2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < d2; ++t) {
            Poly p;
            for (std::size_t s = 0; s < d1; ++s)
                if (phi.matrix().at(t, s) != 0)
                    p += Poly::term(Monomial::var(i * d1 + s), phi.matrix().at(t, s));
            comps.push_back(expr_from_poly(p));
        }
    return SmoothMap(n * d1, std::move(comps));
}

// Linear-coordinate packing of a point of W^n: component j, basis index b
// lands at flat index j*dim(W) + b.
template <class S>
inline std::vector<S> point_to_coords(const WeilPoint<S>& p) {
    const std::size_t d = p.algebra()->dim();
    std::vector<S> out;
    out.reserve(p.arity() * d);
    for (std::size_t j = 0; j < p.arity(); ++j)
        for (std::size_t b = 0; b < d; ++b) out.push_back(p.component(j).coords()[b]);
    return out;
}

template <class S>
inline WeilPoint<S> point_from_coords(const AlgebraPtr& w, std::size_t arity,
                                      const std::vector<S>& coords) {
    const std::size_t d = w->dim();
    if (coords.size() != arity * d)
        fail(errc::arity_violation, "coordinate vector length does not match arity*dim");
    std::vector<Element<S>> comps;
    comps.reserve(arity);
    for (std::size_t j = 0; j < arity; ++j)
        comps.emplace_back(
            w, std::vector<S>(coords.begin() + j * d, coords.begin() + (j + 1) * d));
    return WeilPoint<S>(w, std::move(comps));
}

// The permutation matrix of flatten_tensor_point on packed coordinates:
// rows are indexed by the packed coordinates of the flattened point (over the
// right factor, arity n*dim(left)), columns by the packed coordinates of the
// tensor point (arity n).
inline Mat flatten_matrix(const AlgebraPtr& t, std::size_t n) {
    const auto& info = t->tensor_info();
    const std::size_t d1 = info.left->dim();
    const std::size_t d2 = info.right->dim();
    const std::size_t dt = t->dim();
    Mat f(n * d1 * d2, n * dt);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t tix = 0; tix < dt; ++tix) {
            const auto [a, b] = t->tensor_split(tix);
            f.at((i * d1 + a) * d2 + b, i * dt + tix) = 1;
        }
    return f;
}

template <class S>
inline WeilPoint<S> unflatten_tensor_point(const WeilPoint<S>& q, const AlgebraPtr& t,
                                           std::size_t n) {
    const auto& info = t->tensor_info();
    const std::size_t d1 = info.left->dim();
    const std::size_t d2 = info.right->dim();
    if (!same_algebra(q.algebra(), info.right))
        fail(errc::algebra_mismatch, "flattened point must lie over the right tensor factor");
    if (q.arity() != n * d1)
        fail(errc::arity_violation,
             "flattened point has arity " + std::to_string(q.arity()) + ", expected " +
                 std::to_string(n * d1));
    const S zero = scalar_traits<S>::from_rat(Rat(0));
    std::vector<Element<S>> comps;
    comps.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<S> coords(t->dim(), zero);
        for (std::size_t a = 0; a < d1; ++a)
            for (std::size_t b = 0; b < d2; ++b)
                coords[t->tensor_pair(a, b)] = q.component(i * d1 + a).coords()[b];
        comps.emplace_back(t, std::move(coords));
    }
    return WeilPoint<S>(t, std::move(comps));
}

// ---------------------------------------------------------------------------
// Derivative extraction from evaluated coordinates.

// Jet of a single-variable value over a one-generator algebra: entry j is the
// j-th derivative, i.e. the x^j coordinate rescaled by j!.
template <class S>
std::vector<S> extract_jet(const Element<S>& value) {
    const AlgebraPtr& w = value.algebra();
    if (w->n_gens() != 1)
        fail(errc::arity_violation,
             "jet extraction needs a one-generator algebra, got " +
                 std::to_string(w->n_gens()) + " generators");
    std::vector<S> out;
    Rat fact(1);
    for (unsigned j = 0; j < w->nilpotency_index(); ++j) {
        if (j > 0) fact *= j;
        const auto idx = w->basis_index(Monomial::var(0, j));
        if (!idx) break;
        out.push_back(value.coords()[*idx] * scalar_traits<S>::from_rat(fact));
    }
    return out;
}

// First partials: the generator coordinates in order.
template <class S>
std::vector<S> extract_gradient(const Element<S>& value) {
    const AlgebraPtr& w = value.algebra();
    std::vector<S> out;
    for (std::size_t i = 0; i < w->n_gens(); ++i) {
        const auto idx = w->basis_index(Monomial::var(i));
        if (!idx)
            fail(errc::arity_violation, "algebra kills generator " + std::to_string(i) +
                                            " at first order");
        out.push_back(value.coords()[*idx]);
    }
    return out;
}

// Second partials: entry (i, j) is the x_i*x_j coordinate, doubled on the
// diagonal (the Taylor sum carries 1/2! there).  Monomials the algebra kills
// read as zero; choose an algebra that keeps the entries you need (a tensor
// of duals for mixed partials, jet factors of order >= 2 for the diagonal).
template <class S>
std::vector<std::vector<S>> extract_hessian(const Element<S>& value) {
    const AlgebraPtr& w = value.algebra();
    const std::size_t n = w->n_gens();
    const S zero = scalar_traits<S>::from_rat(Rat(0));
    std::vector<std::vector<S>> out(n, std::vector<S>(n, zero));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const auto idx = w->basis_index(Monomial::var(i) * Monomial::var(j));
            if (!idx) continue;
            const S c = i == j
                            ? value.coords()[*idx] * scalar_traits<S>::from_rat(Rat(2))
                            : value.coords()[*idx];
            out[i][j] = c;
            out[j][i] = c;
        }
    return out;
}

} // namespace weil

#endif
