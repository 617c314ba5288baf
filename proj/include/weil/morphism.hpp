#ifndef WEIL_MORPHISM_HPP
#define WEIL_MORPHISM_HPP

#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "linalg.hpp"

namespace weil {

// An algebra morphism between Weil algebras, held both as generator images
// (the defining data) and as the induced linear matrix over the bases
// (dim(target) x dim(source)).  Construction validates locality of the
// images and that every source relation is killed.
class WeilMorphism {
public:
    static WeilMorphism create(AlgebraPtr source, AlgebraPtr target,
                               std::vector<Element<Rat>> gen_images) {
        if (gen_images.size() != source->n_gens())
            fail(errc::wrong_variable_count,
                 "expected " + std::to_string(source->n_gens()) +
                     " generator images, got " + std::to_string(gen_images.size()));
        for (const auto& img : gen_images)
            if (!same_algebra(img.algebra(), target))
                fail(errc::algebra_mismatch, "generator image lies in a different algebra");

        // Locality first: a morphism of local algebras must send the maximal
        // ideal into the maximal ideal, i.e. images have no unit coordinate.
        if (!faults::flags().skip_locality_check) {
            for (std::size_t i = 0; i < gen_images.size(); ++i)
                if (gen_images[i].augmentation() != 0)
                    fail(errc::not_local_morphism,
                         "image of x" + std::to_string(i) +
                             " has nonzero unit coordinate " +
                             to_string(gen_images[i].augmentation()));
        }

        // Well-definedness: every relation must evaluate to zero at the images.
        for (std::size_t r = 0; r < source->relation_polys().size(); ++r) {
            const Element<Rat> value =
                evaluate_poly(source->relation_polys()[r], gen_images, target);
            if (!value.is_zero())
                fail(errc::relation_not_killed,
                     "relation '" + source->relation_strings()[r] +
                         "' maps to nonzero element " + value.str());
        }

        WeilMorphism phi;
        phi.src_ = std::move(source);
        phi.tgt_ = target;
        phi.gen_images_ = std::move(gen_images);
        phi.matrix_ = build_matrix(*phi.src_, phi.tgt_, phi.gen_images_);
        return phi;
    }

    static WeilMorphism from_strings(const AlgebraPtr& source, const AlgebraPtr& target,
                                     const std::vector<std::string>& image_sources) {
        std::vector<Element<Rat>> images;
        images.reserve(image_sources.size());
        for (const std::string& s : image_sources) images.push_back(element(target, s));
        return create(source, target, std::move(images));
    }

    static WeilMorphism identity(const AlgebraPtr& w) {
        std::vector<Element<Rat>> images;
        images.reserve(w->n_gens());
        for (std::size_t i = 0; i < w->n_gens(); ++i)
            images.push_back(Element<Rat>::generator(w, i));
        WeilMorphism phi;
        phi.src_ = w;
        phi.tgt_ = w;
        phi.gen_images_ = std::move(images);
        phi.matrix_ = Mat::identity(w->dim());
        return phi;
    }

    // The unique map W -> R killing the maximal ideal (base-point extraction).
    static WeilMorphism augmentation(const AlgebraPtr& w, const AlgebraPtr& scalars) {
        std::vector<Element<Rat>> images(w->n_gens(), Element<Rat>::zero(scalars));
        return create(w, scalars, std::move(images));
    }

    // The unit map R -> W.
    static WeilMorphism unit_inclusion(const AlgebraPtr& scalars, const AlgebraPtr& w) {
        return create(scalars, w, std::vector<Element<Rat>>{});
    }

    const AlgebraPtr& source() const { return src_; }
    const AlgebraPtr& target() const { return tgt_; }
    const std::vector<Element<Rat>>& gen_images() const { return gen_images_; }
    const Mat& matrix() const { return matrix_; }

    template <class S>
    Element<S> apply(const Element<S>& x) const {
        if (!same_algebra(x.algebra(), src_))
            fail(errc::algebra_mismatch, "element is not in the morphism's source");
        std::vector<S> y(tgt_->dim(), scalar_traits<S>::from_rat(Rat(0)));
        for (std::size_t s = 0; s < src_->dim(); ++s) {
            if (scalar_traits<S>::is_zero(x.coords()[s])) continue;
            for (std::size_t t = 0; t < tgt_->dim(); ++t) {
                const Rat& m = matrix_.at(t, s);
                if (m == 0) continue;
                y[t] = y[t] + x.coords()[s] * scalar_traits<S>::from_rat(m);
            }
        }
        return Element<S>(tgt_, std::move(y));
    }

    // Independent multiplicative route: rebuild x as a polynomial in the
    // generators and evaluate at the images.  Used as a test oracle against
    // the matrix route.
    Element<Rat> apply_multiplicative(const Element<Rat>& x) const {
        if (!same_algebra(x.algebra(), src_))
            fail(errc::algebra_mismatch, "element is not in the morphism's source");
        Poly rep;
        for (std::size_t t = 0; t < src_->dim(); ++t)
            if (x.coords()[t] != 0) rep += Poly::term(src_->basis()[t], x.coords()[t]);
        return evaluate_poly(rep, gen_images_, tgt_);
    }

    static WeilMorphism compose(const WeilMorphism& psi, const WeilMorphism& phi) {
        if (!same_algebra(phi.target(), psi.source()))
            fail(errc::composition_mismatch,
                 "inner morphism target does not match outer morphism source");
        WeilMorphism r;
        r.src_ = phi.src_;
        r.tgt_ = psi.tgt_;
        r.gen_images_.reserve(phi.gen_images_.size());
        for (const auto& img : phi.gen_images_) r.gen_images_.push_back(psi.apply(img));
        r.matrix_ = psi.matrix_ * phi.matrix_;
        return r;
    }

    bool operator==(const WeilMorphism& o) const {
        return same_algebra(src_, o.src_) && same_algebra(tgt_, o.tgt_) &&
               matrix_ == o.matrix_;
    }
    bool operator!=(const WeilMorphism& o) const { return !(*this == o); }

private:
    WeilMorphism() = default;

    static Mat build_matrix(const WeilAlgebra& src, const AlgebraPtr& tgt,
                            const std::vector<Element<Rat>>& images) {
        Mat m(tgt->dim(), src.dim());
        std::vector<std::vector<Element<Rat>>> powers(images.size());
        auto image_power = [&](std::size_t i, unsigned e) -> const Element<Rat>& {
            auto& tab = powers[i];
            if (tab.empty()) tab.push_back(Element<Rat>::unit(tgt));
            while (tab.size() <= e) tab.push_back(tab.back() * images[i]);
            return tab[e];
        };
        for (std::size_t j = 0; j < src.dim(); ++j) {
            const Monomial& mono = src.basis()[j];
            Element<Rat> value = Element<Rat>::unit(tgt);
            for (std::size_t i = 0; i < mono.width(); ++i)
                if (mono.exponent(i) > 0) value *= image_power(i, mono.exponent(i));
            for (std::size_t t = 0; t < tgt->dim(); ++t) m.at(t, j) = value.coords()[t];
        }
        return m;
    }

    friend WeilMorphism tensor_morphism(const WeilMorphism&, const WeilMorphism&,
                                        const AlgebraPtr&, const AlgebraPtr&);

    AlgebraPtr src_, tgt_;
    std::vector<Element<Rat>> gen_images_;
    Mat matrix_;
};

// Canonical inclusion of the left factor into a tensor algebra.
inline WeilMorphism tensor_include_left(const AlgebraPtr& t) {
    const auto& info = t->tensor_info();
    std::vector<Element<Rat>> images;
    for (std::size_t i = 0; i < info.left->n_gens(); ++i)
        images.push_back(element(t, Poly::var(i)));
    return WeilMorphism::create(info.left, t, std::move(images));
}

inline WeilMorphism tensor_include_right(const AlgebraPtr& t) {
    const auto& info = t->tensor_info();
    std::vector<Element<Rat>> images;
    for (std::size_t j = 0; j < info.right->n_gens(); ++j)
        images.push_back(element(t, Poly::var(info.left->n_gens() + j)));
    return WeilMorphism::create(info.right, t, std::move(images));
}

// phi (x) psi between given tensor algebras, acting by phi on the left
// generator block and psi on the right.  The matrix is assembled in
// Kronecker style through the tensor pair/split tables.
inline WeilMorphism tensor_morphism(const WeilMorphism& phi, const WeilMorphism& psi,
                                    const AlgebraPtr& tensor_source,
                                    const AlgebraPtr& tensor_target) {
    const auto& si = tensor_source->tensor_info();
    const auto& ti = tensor_target->tensor_info();
    if (!same_algebra(si.left, phi.source()) || !same_algebra(si.right, psi.source()) ||
        !same_algebra(ti.left, phi.target()) || !same_algebra(ti.right, psi.target()))
        fail(errc::algebra_mismatch,
             "tensor algebras do not match the factor morphisms");

    const Mat& m1 = phi.matrix();
    const Mat& m2 = psi.matrix();
    Mat m(tensor_target->dim(), tensor_source->dim());
    for (std::size_t col = 0; col < tensor_source->dim(); ++col) {
        const auto [a, b] = tensor_source->tensor_split(col);
        for (std::size_t ap = 0; ap < m1.rows(); ++ap) {
            if (m1.at(ap, a) == 0) continue;
            for (std::size_t bp = 0; bp < m2.rows(); ++bp) {
                if (m2.at(bp, b) == 0) continue;
                m.at(tensor_target->tensor_pair(ap, bp), col) +=
                    m1.at(ap, a) * m2.at(bp, b);
            }
        }
    }

    WeilMorphism r;
    r.src_ = tensor_source;
    r.tgt_ = tensor_target;
    const std::size_t n1 = phi.source()->n_gens();
    const std::size_t d2t = psi.target()->dim();
    for (std::size_t i = 0; i < n1 + psi.source()->n_gens(); ++i) {
        std::vector<Rat> coords(tensor_target->dim(), Rat(0));
        if (i < n1) {
            const auto& img = phi.gen_images()[i].coords();
            for (std::size_t ap = 0; ap < img.size(); ++ap)
                if (img[ap] != 0) coords[tensor_target->tensor_pair(ap, 0)] += img[ap];
        } else {
            const auto& img = psi.gen_images()[i - n1].coords();
            for (std::size_t bp = 0; bp < img.size(); ++bp)
                if (img[bp] != 0) coords[tensor_target->tensor_pair(0, bp)] += img[bp];
        }
        r.gen_images_.emplace_back(tensor_target, std::move(coords));
    }
    (void)d2t;
    r.matrix_ = std::move(m);
    return r;
}

inline WeilMorphism tensor_morphism(const WeilMorphism& phi, const WeilMorphism& psi) {
    return tensor_morphism(phi, psi, tensor(phi.source(), psi.source()),
                           tensor(phi.target(), psi.target()));
}

} // namespace weil

#endif
