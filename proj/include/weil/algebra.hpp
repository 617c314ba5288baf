#ifndef WEIL_ALGEBRA_HPP
#define WEIL_ALGEBRA_HPP

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "error.hpp"
#include "expr.hpp"
#include "fault_injection.hpp"
#include "groebner.hpp"
#include "monomial.hpp"
#include "poly.hpp"
#include "rational.hpp"

namespace weil {

class WeilAlgebra;
using AlgebraPtr = std::shared_ptr<const WeilAlgebra>;

// Structure-constant row: the nonzero coordinates of one basis product.
// Monomial presentations make almost every row a single entry, which keeps
// element multiplication close to linear in the number of nonzero coords.
struct SparseVec {
    std::vector<std::pair<std::size_t, Rat>> entries;
};

// A Weil algebra R[x0..x{n-1}]/I: finite-dimensional, local, with nilpotent
// maximal ideal.  Construction runs Buchberger completion once, enumerates
// the monomial basis (unit first, then degree-lex ascending), verifies
// locality, and tabulates all basis products.  Immutable afterwards.
class WeilAlgebra {
public:
    static AlgebraPtr create(std::size_t n_gens, const std::vector<std::string>& relations) {
        std::vector<Poly> polys;
        polys.reserve(relations.size());
        for (const std::string& r : relations) {
            try {
                polys.push_back(parse_polynomial(r, n_gens));
            } catch (const Error& e) {
                if (e.code() == errc::arity_violation)
                    fail(errc::wrong_variable_count,
                         "relation '" + r + "' uses a variable beyond generator count " +
                             std::to_string(n_gens));
                throw;
            }
        }
        return create_from_polys(n_gens, std::move(polys), relations);
    }

    static AlgebraPtr create_from_polys(std::size_t n_gens, std::vector<Poly> relations,
                                        std::vector<std::string> verbatim) {
        auto w = std::shared_ptr<WeilAlgebra>(new WeilAlgebra());
        w->n_gens_ = n_gens;
        w->relation_strings_ = std::move(verbatim);

        for (const Poly& p : relations)
            if (p.width() > n_gens)
                fail(errc::wrong_variable_count,
                     "relation uses a variable beyond generator count " +
                         std::to_string(n_gens));
        if (n_gens > 0 && relations.empty())
            fail(errc::empty_relations_with_generators,
                 "an algebra with generators and no relations is infinite-dimensional");
        w->relations_ = std::move(relations);

        w->gb_ = groebner_basis(w->relations_);
        if (contains_unit(w->gb_))
            fail(errc::not_local, "relations generate the unit ideal (zero ring)");

        const auto bounds = pure_power_bounds(w->gb_, n_gens);
        if (!bounds)
            fail(errc::not_finite_dimensional,
                 "no power of some generator lies in the relation ideal");
        w->basis_ = standard_monomials(w->gb_, n_gens, *bounds);
        if (w->basis_.empty() || !w->basis_.front().is_one())
            throw std::logic_error("basis enumeration lost the unit monomial");
        for (std::size_t t = 0; t < w->basis_.size(); ++t)
            w->basis_lookup_.emplace(w->basis_[t], t);

        // Locality: every generator must be nilpotent.  x^dim is enough to
        // decide, since the powers of x span at most dim dimensions.
        if (!faults::flags().skip_locality_check) {
            for (std::size_t i = 0; i < n_gens; ++i) {
                const Poly p = normal_form(Poly::var(i).pow(
                                               static_cast<unsigned>(w->basis_.size())),
                                           w->gb_);
                if (!p.is_zero())
                    fail(errc::not_local,
                         "generator x" + std::to_string(i) + " is not nilpotent");
            }
        }

        // Nilpotency index: least k with every degree-k monomial reducing to 0.
        const std::size_t k_bound = n_gens * w->basis_.size() + 2;
        unsigned k = 1;
        for (;; ++k) {
            bool all_zero = true;
            for (const Monomial& m : monomials_of_degree(n_gens, k)) {
                if (!normal_form(Poly::term(m, Rat(1)), w->gb_).is_zero()) {
                    all_zero = false;
                    break;
                }
            }
            if (all_zero) break;
            if (k >= k_bound) {
                // Unreachable for local algebras; only a skipped locality
                // check can get here.  Cap so construction still finishes.
                break;
            }
        }
        w->k_ = k;

        // Structure constants.
        const std::size_t d = w->basis_.size();
        w->table_.resize(d * d);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = i; j < d; ++j) {
                const Poly prod =
                    normal_form(Poly::term(w->basis_[i] * w->basis_[j], Rat(1)), w->gb_);
                SparseVec row;
                for (const auto& [m, c] : prod.terms()) {
                    auto it = w->basis_lookup_.find(m);
                    if (it == w->basis_lookup_.end())
                        throw std::logic_error("normal form left the basis span");
                    row.entries.emplace_back(it->second, c);
                }
                w->table_[i * d + j] = row;
                w->table_[j * d + i] = std::move(row);
            }
        }
        return w;
    }

    std::size_t n_gens() const { return n_gens_; }
    std::size_t dim() const { return basis_.size(); }
    unsigned nilpotency_index() const { return k_; }
    bool is_scalar_field() const { return n_gens_ == 0; }

    const std::vector<Monomial>& basis() const { return basis_; }
    const std::vector<Poly>& groebner() const { return gb_; }
    const std::vector<Poly>& relation_polys() const { return relations_; }
    const std::vector<std::string>& relation_strings() const { return relation_strings_; }

    std::optional<std::size_t> basis_index(const Monomial& m) const {
        auto it = basis_lookup_.find(m);
        if (it == basis_lookup_.end()) return std::nullopt;
        return it->second;
    }

    Poly reduce(const Poly& p) const { return normal_form(p, gb_); }

    // Coordinates of a polynomial's normal form over the basis.
    std::vector<Rat> coords(const Poly& p) const {
        if (p.width() > n_gens_)
            fail(errc::wrong_variable_count,
                 "polynomial uses a variable beyond generator count " +
                     std::to_string(n_gens_));
        std::vector<Rat> out(dim(), Rat(0));
        const Poly nf = reduce(p);
        for (const auto& [m, c] : nf.terms()) {
            auto it = basis_lookup_.find(m);
            if (it == basis_lookup_.end())
                throw std::logic_error("normal form left the basis span");
            out[it->second] = c;
        }
        return out;
    }

    const SparseVec& product_row(std::size_t i, std::size_t j) const {
        return table_[i * dim() + j];
    }

    std::string basis_str(std::size_t t) const { return basis_[t].str(var_names()); }

    std::vector<std::string> var_names() const {
        std::vector<std::string> names(n_gens_);
        for (std::size_t i = 0; i < n_gens_; ++i) names[i] = "x" + std::to_string(i);
        return names;
    }

    // ---- tensor structure -------------------------------------------------

    struct TensorInfo {
        AlgebraPtr left, right;
        // basis index t -> (index in left basis, index in right basis)
        std::vector<std::pair<std::size_t, std::size_t>> split;
        // (a, b) -> basis index, stored at a * dim(right) + b
        std::vector<std::size_t> pair;
    };

    bool is_tensor() const { return tensor_.has_value(); }
    const TensorInfo& tensor_info() const {
        if (!tensor_) throw std::logic_error("algebra was not built as a tensor product");
        return *tensor_;
    }

    // Factor split of a tensor-basis index.  Honors the transpose-tensor-order
    // fault: when the two factor monomials also exist in each other's bases,
    // the swapped reading is returned instead.
    std::pair<std::size_t, std::size_t> tensor_split(std::size_t t) const {
        const TensorInfo& info = tensor_info();
        auto [a, b] = info.split[t];
        if (faults::flags().transpose_tensor_order) {
            const auto a2 = info.left->basis_index(info.right->basis()[b]);
            const auto b2 = info.right->basis_index(info.left->basis()[a]);
            if (a2 && b2) return {*a2, *b2};
        }
        return {a, b};
    }

    // Inverse of tensor_split; applies the same fault so the two stay a
    // mutually inverse (but, under the fault, wrong) identification.
    std::size_t tensor_pair(std::size_t a, std::size_t b) const {
        const TensorInfo& info = tensor_info();
        const std::size_t d2 = info.right->dim();
        if (faults::flags().transpose_tensor_order) {
            const auto a2 = info.left->basis_index(info.right->basis()[b]);
            const auto b2 = info.right->basis_index(info.left->basis()[a]);
            if (a2 && b2) return info.pair[*a2 * d2 + *b2];
        }
        return info.pair[a * d2 + b];
    }

    friend AlgebraPtr tensor(const AlgebraPtr& w1, const AlgebraPtr& w2);

private:
    WeilAlgebra() = default;

    std::size_t n_gens_ = 0;
    unsigned k_ = 1;
    std::vector<std::string> relation_strings_;
    std::vector<Poly> relations_;
    std::vector<Poly> gb_;
    std::vector<Monomial> basis_;
    std::map<Monomial, std::size_t> basis_lookup_;
    std::vector<SparseVec> table_;
    std::optional<TensorInfo> tensor_;
};

// Structural identity: same presentation up to the canonical reduced
// Groebner basis.  Elements and morphisms may mix structurally equal
// algebras freely.
inline bool same_algebra(const WeilAlgebra& a, const WeilAlgebra& b) {
    if (&a == &b) return true;
    return a.n_gens() == b.n_gens() && a.groebner() == b.groebner();
}

inline bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
    return same_algebra(*a, *b);
}

// Tensor product: generators concatenated, relations of the right factor
// shifted past the left factor's generators.  dim = dim(left) * dim(right);
// the basis factors uniquely, giving the canonical pair/split tables.
inline AlgebraPtr tensor(const AlgebraPtr& w1, const AlgebraPtr& w2) {
    const std::size_t n1 = w1->n_gens();
    std::vector<Poly> relations = w1->relation_polys();
    std::vector<std::string> verbatim = w1->relation_strings();
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n1 + w2->n_gens(); ++i)
        names.push_back("x" + std::to_string(i));
    for (const Poly& p : w2->relation_polys()) {
        Poly shifted;
        for (const auto& [m, c] : p.terms()) {
            std::vector<unsigned> e(n1 + m.width(), 0u);
            for (std::size_t i = 0; i < m.width(); ++i) e[n1 + i] = m.exponent(i);
            shifted += Poly::term(Monomial(std::move(e)), c);
        }
        verbatim.push_back(shifted.str(names));
        relations.push_back(std::move(shifted));
    }

    AlgebraPtr t = WeilAlgebra::create_from_polys(n1 + w2->n_gens(), std::move(relations),
                                                  std::move(verbatim));

    WeilAlgebra::TensorInfo info;
    info.left = w1;
    info.right = w2;
    const std::size_t d2 = w2->dim();
    info.split.resize(t->dim());
    info.pair.assign(w1->dim() * d2, 0);
    for (std::size_t idx = 0; idx < t->dim(); ++idx) {
        const Monomial& m = t->basis()[idx];
        std::vector<unsigned> e1, e2;
        for (std::size_t i = 0; i < n1; ++i) e1.push_back(m.exponent(i));
        for (std::size_t i = n1; i < m.width(); ++i) e2.push_back(m.exponent(i));
        const auto a = w1->basis_index(Monomial(std::move(e1)));
        const auto b = w2->basis_index(Monomial(std::move(e2)));
        if (!a || !b) throw std::logic_error("tensor basis failed to factor");
        info.split[idx] = {*a, *b};
        info.pair[*a * d2 + *b] = idx;
    }
    // The factory returns a const pointer; finish initialization through the
    // only non-const alias in existence.
    const_cast<WeilAlgebra&>(*t).tensor_ = std::move(info);
    return t;
}

// ---- scalar modes ---------------------------------------------------------

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rat> {
    static Rat from_rat(const Rat& q) { return q; }
    static bool is_zero(const Rat& v) { return v == 0; }
};

template <>
struct scalar_traits<double> {
    static double from_rat(const Rat& q) { return to_double(q); }
    static bool is_zero(double v) { return v == 0.0; }
};

template <>
struct scalar_traits<Poly> {
    static Poly from_rat(const Rat& q) { return Poly::constant(q); }
    static bool is_zero(const Poly& v) { return v.is_zero(); }
};

// ---- elements --------------------------------------------------------------

// An element of a Weil algebra as a coordinate vector over the basis.  The
// scalar S is Rat (exact mode), double (float mode, for transcendental
// lifts), or Poly (symbolic mode, used to lift whole polynomial maps).
template <class S>
class Element {
public:
    Element(AlgebraPtr algebra, std::vector<S> coords)
        : w_(std::move(algebra)), c_(std::move(coords)) {
        if (c_.size() != w_->dim())
            fail(errc::algebra_mismatch, "coordinate count " + std::to_string(c_.size()) +
                                             " does not match algebra dimension " +
                                             std::to_string(w_->dim()));
    }

    static Element zero(AlgebraPtr w) {
        std::vector<S> c(w->dim(), scalar_traits<S>::from_rat(Rat(0)));
        return Element(std::move(w), std::move(c));
    }

    static Element unit(AlgebraPtr w) { return from_scalar(std::move(w), Rat(1)); }

    // Accepts either an exact rational or a value of the scalar type itself.
    template <class T>
    static Element from_scalar(AlgebraPtr w, const T& v) {
        Element e = zero(std::move(w));
        if constexpr (std::is_same_v<T, S>)
            e.c_[0] = v;
        else
            e.c_[0] = scalar_traits<S>::from_rat(v);
        return e;
    }

    static Element generator(AlgebraPtr w, std::size_t i) {
        if (i >= w->n_gens())
            fail(errc::wrong_variable_count,
                 "generator index " + std::to_string(i) + " out of range");
        const std::vector<Rat> q = w->coords(Poly::var(i));
        std::vector<S> c;
        c.reserve(q.size());
        for (const Rat& v : q) c.push_back(scalar_traits<S>::from_rat(v));
        return Element(std::move(w), std::move(c));
    }

    const AlgebraPtr& algebra() const { return w_; }
    const std::vector<S>& coords() const { return c_; }
    const S& coord(std::size_t t) const { return c_[t]; }

    // Augmentation: the unit coordinate (basis index 0 is the monomial 1).
    const S& augmentation() const { return c_[0]; }

    Element nilpotent_part() const {
        Element e = *this;
        e.c_[0] = scalar_traits<S>::from_rat(Rat(0));
        return e;
    }

    bool is_zero() const {
        for (const S& v : c_)
            if (!scalar_traits<S>::is_zero(v)) return false;
        return true;
    }

    Element& operator+=(const Element& o) {
        require_same(o);
        for (std::size_t t = 0; t < c_.size(); ++t) c_[t] = c_[t] + o.c_[t];
        return *this;
    }
    Element& operator-=(const Element& o) {
        require_same(o);
        for (std::size_t t = 0; t < c_.size(); ++t) c_[t] = c_[t] - o.c_[t];
        return *this;
    }
    Element operator+(const Element& o) const { Element r = *this; r += o; return r; }
    Element operator-(const Element& o) const { Element r = *this; r -= o; return r; }

    Element operator-() const {
        Element r = *this;
        const S minus_one = scalar_traits<S>::from_rat(Rat(-1));
        for (S& v : r.c_) v = v * minus_one;
        return r;
    }

    Element operator*(const Element& o) const {
        require_same(o);
        Element r = zero(w_);
        const std::size_t d = c_.size();
        for (std::size_t i = 0; i < d; ++i) {
            if (scalar_traits<S>::is_zero(c_[i])) continue;
            for (std::size_t j = 0; j < d; ++j) {
                if (scalar_traits<S>::is_zero(o.c_[j])) continue;
                const S s = c_[i] * o.c_[j];
                for (const auto& [t, q] : w_->product_row(i, j).entries)
                    r.c_[t] = r.c_[t] + s * scalar_traits<S>::from_rat(q);
            }
        }
        return r;
    }
    Element& operator*=(const Element& o) { *this = *this * o; return *this; }

    template <class T>
    Element scaled(const T& s) const {
        S factor;
        if constexpr (std::is_same_v<T, S>)
            factor = s;
        else
            factor = scalar_traits<S>::from_rat(s);
        Element r = *this;
        for (S& v : r.c_) v = v * factor;
        return r;
    }

    Element pow(unsigned e) const {
        Element r = unit(w_);
        Element base = *this;
        while (e > 0) {
            if (e & 1u) r *= base;
            if (e > 1) base *= base;
            e >>= 1u;
        }
        return r;
    }

    // Multiplicative inverse of a unit: 1/(a + n) = (1/a) * sum ((-n/a)^j).
    // Requires an invertible scalar type (Rat or double).
    Element inverse() const {
        const S a = augmentation();
        if (scalar_traits<S>::is_zero(a))
            fail(errc::domain_error, "element with zero unit coordinate is not invertible");
        const S inv_a = scalar_traits<S>::from_rat(Rat(1)) / a;
        const Element neg_scaled_nilp = nilpotent_part().scaled(inv_a).operator-();
        Element acc = unit(w_);
        Element term = unit(w_);
        for (unsigned j = 1; j < w_->nilpotency_index(); ++j) {
            term *= neg_scaled_nilp;
            if (term.is_zero()) break;
            acc += term;
        }
        return acc.scaled(inv_a);
    }

    bool operator==(const Element& o) const {
        return same_algebra(w_, o.w_) && c_ == o.c_;
    }
    bool operator!=(const Element& o) const { return !(*this == o); }

    std::string str() const {
        const auto names = w_->var_names();
        std::string out;
        for (std::size_t t = 0; t < c_.size(); ++t) {
            if (scalar_traits<S>::is_zero(c_[t])) continue;
            if (!out.empty()) out += " + ";
            const std::string cs = scalar_str(c_[t]);
            if (t == 0)
                out += cs;
            else if (cs == "1")
                out += w_->basis()[t].str(names);
            else
                out += cs + "*" + w_->basis()[t].str(names);
        }
        return out.empty() ? "0" : out;
    }

private:
    void require_same(const Element& o) const {
        if (!same_algebra(w_, o.w_))
            fail(errc::algebra_mismatch, "elements live in different algebras");
    }

    static std::string scalar_str(const Rat& v) { return to_string(v); }
    static std::string scalar_str(double v) { return std::to_string(v); }
    static std::string scalar_str(const Poly& v) { return "(" + v.str({}) + ")"; }

    AlgebraPtr w_;
    std::vector<S> c_;
};

template <class S>
Element<S> operator*(const Rat& q, const Element<S>& e) {
    return e.scaled(q);
}

inline bool approx_equal(const Element<double>& a, const Element<double>& b,
                         double tol = 1e-9) {
    if (!same_algebra(a.algebra(), b.algebra())) return false;
    for (std::size_t t = 0; t < a.coords().size(); ++t)
        if (!approx_equal(a.coords()[t], b.coords()[t], tol)) return false;
    return true;
}

// The element named by a polynomial in the algebra's generators.
inline Element<Rat> element(const AlgebraPtr& w, const Poly& p) {
    return Element<Rat>(w, w->coords(p));
}

inline Element<Rat> element(const AlgebraPtr& w, const std::string& poly_src) {
    try {
        return element(w, parse_polynomial(poly_src, w->n_gens()));
    } catch (const Error& e) {
        if (e.code() == errc::arity_violation)
            fail(errc::wrong_variable_count,
                 "'" + poly_src + "' uses a variable beyond generator count " +
                     std::to_string(w->n_gens()));
        throw;
    }
}

// Evaluate a polynomial at algebra elements (one per variable), with small
// power memoization.  This is the multiplicative route used by morphism
// validation and the symbolic composition checks.
template <class S>
Element<S> evaluate_poly(const Poly& p, const std::vector<Element<S>>& args,
                         const AlgebraPtr& w) {
    std::vector<std::vector<Element<S>>> powers(args.size());
    auto arg_power = [&](std::size_t i, unsigned e) -> const Element<S>& {
        auto& tab = powers[i];
        if (tab.empty()) tab.push_back(Element<S>::unit(w));
        while (tab.size() <= e) tab.push_back(tab.back() * args[i]);
        return tab[e];
    };
    Element<S> acc = Element<S>::zero(w);
    for (const auto& [m, c] : p.terms()) {
        if (m.width() > args.size())
            fail(errc::wrong_variable_count, "polynomial arity exceeds argument count");
        Element<S> term = Element<S>::from_scalar(w, c);
        for (std::size_t i = 0; i < m.width(); ++i)
            if (m.exponent(i) > 0) term *= arg_power(i, m.exponent(i));
        acc += term;
    }
    return acc;
}

// ---- presets ---------------------------------------------------------------

inline AlgebraPtr preset_R() { return WeilAlgebra::create(0, {}); }

inline AlgebraPtr preset_dual() { return WeilAlgebra::create(1, {"x0^2"}); }

// jet<k> = R[d]/(d^{k+1}): truncated Taylor polynomials of order k.
inline AlgebraPtr preset_jet(unsigned k) {
    return WeilAlgebra::create(1, {"x0^" + std::to_string(k + 1)});
}

// Dn<n> = R[x0..x{n-1}]/(all degree-2 monomials): first-order infinitesimals.
inline AlgebraPtr preset_Dn(unsigned n) {
    std::vector<std::string> rel;
    const auto names = [n] {
        std::vector<std::string> v(n);
        for (unsigned i = 0; i < n; ++i) v[i] = "x" + std::to_string(i);
        return v;
    }();
    for (const Monomial& m : monomials_of_degree(n, 2)) rel.push_back(m.str(names));
    return WeilAlgebra::create(n, rel);
}

// W<k>,<n> = R[x0..x{n-1}]/(all degree-(k+1) monomials): full k-jets.
inline AlgebraPtr preset_Wkn(unsigned k, unsigned n) {
    std::vector<std::string> rel;
    const auto names = [n] {
        std::vector<std::string> v(n);
        for (unsigned i = 0; i < n; ++i) v[i] = "x" + std::to_string(i);
        return v;
    }();
    for (const Monomial& m : monomials_of_degree(n, k + 1)) rel.push_back(m.str(names));
    return WeilAlgebra::create(n, rel);
}

} // namespace weil

#endif
