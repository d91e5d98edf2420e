#pragma once

// Graded algebra homomorphisms and degree +1 derivations given on generators.

#include "cohring/gradedalg.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cohring {

using AlgebraPtr = std::shared_ptr<const Algebra>;

struct MapReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

struct KernelImage {
    std::size_t kernel = 0;
    std::size_t image = 0;
};

class GradedHom {
public:
    // images[i] is the image of source generator i (an element of target).
    GradedHom(AlgebraPtr source, AlgebraPtr target, std::vector<Element> images, std::string name = {})
        : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)), name_(std::move(name))
    {
        if (source_->prime() != target_->prime())
            throw Error("hom '" + name_ + "' joins algebras over different primes");
        if (images_.size() != source_->num_generators())
            throw Error("hom '" + name_ + "' needs one image per source generator");
        for (auto& img : images_)
            img = target_->normal_form(img);
    }

    static GradedHom identity(const AlgebraPtr& a, std::string name = "id")
    {
        std::vector<Element> imgs;
        for (std::size_t i = 0; i < a->num_generators(); ++i)
            imgs.push_back(a->generator(i));
        return GradedHom(a, a, std::move(imgs), std::move(name));
    }

    const Algebra& source() const { return *source_; }
    const Algebra& target() const { return *target_; }
    const AlgebraPtr& source_ptr() const { return source_; }
    const AlgebraPtr& target_ptr() const { return target_; }
    const std::vector<Element>& images() const { return images_; }
    const std::string& name() const { return name_; }

    // Degrees are preserved and every relation (including implicit exterior
    // squares) maps to zero.
    MapReport check() const
    {
        MapReport rep;
        const auto& sp = source_->presentation();
        for (std::size_t i = 0; i < images_.size(); ++i) {
            if (images_[i].is_zero())
                continue;
            auto d = homogeneous_degree(target_->presentation(), images_[i]);
            if (!d || *d != sp.generators[i].degree)
                rep.violations.push_back("degree mismatch: " + sp.generators[i].name + " -> " +
                                         target_->format(images_[i]));
        }
        if (!rep.ok())
            return rep;
        for (const auto& rel : sp.relations) {
            Element img = apply_unchecked(rel.poly);
            if (!img.is_zero())
                rep.violations.push_back("relation not preserved: " + source_->format(rel.poly) + " -> " +
                                         target_->format(img));
        }
        for (const auto& [i, j] : source_->implicit_zero_products()) {
            Element prod = target_->multiply(images_[i], images_[j]);
            if (!prod.is_zero())
                rep.violations.push_back("relation not preserved: " + sp.generators[i].name + "*" +
                                         sp.generators[j].name + " -> " + target_->format(prod));
        }
        return rep;
    }

    Element apply(const Element& e) const
    {
        ensure_valid();
        return apply_unchecked(e);
    }

    // Columns are images of the standard monomials of the source in degree n.
    FpMatrix matrix(int n) const
    {
        ensure_valid();
        const std::size_t sd = source_->dim(n), td = target_->dim(n);
        FpMatrix m(source_->prime(), td, sd);
        for (std::size_t k = 0; k < sd; ++k) {
            Vec col = target_->coordinates(apply_unchecked(source_->standard_monomial(n, k)), n);
            for (std::size_t r = 0; r < td; ++r)
                m.set(r, k, col[r]);
        }
        return m;
    }

    std::vector<KernelImage> kernel_image_dims(int up_to) const
    {
        std::vector<KernelImage> out;
        for (int n = 0; n <= up_to; ++n) {
            const std::size_t r = rank(matrix(n));
            out.push_back({source_->dim(n) - r, r});
        }
        return out;
    }

    // (*this) after `first`.
    GradedHom compose_after(const GradedHom& first) const
    {
        if (first.target_.get() != source_.get())
            throw Error("compose: target of '" + first.name_ + "' is not the source of '" + name_ + "'");
        std::vector<Element> imgs;
        for (const auto& img : first.images_)
            imgs.push_back(apply(img));
        return GradedHom(first.source_, target_, std::move(imgs), name_ + "." + first.name_);
    }

private:
    void ensure_valid() const
    {
        if (!validated_) {
            MapReport rep = check();
            if (!rep.ok())
                throw Error("hom '" + name_ + "': " + rep.violations.front());
            validated_ = true;
        }
    }

    Element apply_unchecked(const Element& e) const
    {
        const std::uint32_t p = source_->prime();
        Element out;
        for (const auto& [m, c] : source_->canonical(e).terms) {
            Element term = constant(target_->num_generators(), c, p);
            for (std::size_t i = 0; i < m.size() && !term.is_zero(); ++i)
                for (unsigned k = 0; k < m[i]; ++k)
                    term = target_->multiply(term, images_[i]);
            out = add(out, term, p);
        }
        return target_->normal_form(out);
    }

    AlgebraPtr source_, target_;
    std::vector<Element> images_;
    std::string name_;
    mutable bool validated_ = false;
};

// alpha = first - second for two homs into a common target, as one matrix
// on the direct sum of the sources (first block, then second).
inline FpMatrix difference_matrix(const GradedHom& first, const GradedHom& second, int n)
{
    if (first.target_ptr().get() != second.target_ptr().get())
        throw Error("difference_matrix: homs have different targets");
    const FpMatrix a = first.matrix(n), b = second.matrix(n);
    const std::uint32_t p = a.prime();
    FpMatrix m(p, a.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c)
            m.set(r, c, a.at(r, c));
        for (std::size_t c = 0; c < b.cols(); ++c)
            m.set(r, a.cols() + c, (p - b.at(r, c)) % p);
    }
    return m;
}

inline std::vector<KernelImage> kernel_image_dims(const GradedHom& first, const GradedHom& second, int up_to)
{
    std::vector<KernelImage> out;
    for (int n = 0; n <= up_to; ++n) {
        const FpMatrix m = difference_matrix(first, second, n);
        const std::size_t r = rank(m);
        out.push_back({m.cols() - r, r});
    }
    return out;
}

class Derivation {
public:
    Derivation(AlgebraPtr algebra, std::vector<Element> images, std::string name = {})
        : algebra_(std::move(algebra)), images_(std::move(images)), name_(std::move(name))
    {
        if (images_.size() != algebra_->num_generators())
            throw Error("derivation '" + name_ + "' needs one image per generator");
        for (auto& img : images_)
            img = algebra_->normal_form(img);
    }

    static Derivation zero(const AlgebraPtr& a, std::string name = "zero")
    {
        return Derivation(a, std::vector<Element>(a->num_generators()), std::move(name));
    }

    const Algebra& algebra() const { return *algebra_; }
    const AlgebraPtr& algebra_ptr() const { return algebra_; }
    const std::vector<Element>& images() const { return images_; }
    const std::string& name() const { return name_; }

    // Generator images raise degree by one and every relation maps into
    // the relation ideal.
    MapReport check() const
    {
        MapReport rep;
        const auto& pres = algebra_->presentation();
        for (std::size_t i = 0; i < images_.size(); ++i) {
            if (images_[i].is_zero())
                continue;
            auto d = homogeneous_degree(pres, images_[i]);
            if (!d || *d != pres.generators[i].degree + 1)
                rep.violations.push_back("degree mismatch: " + pres.generators[i].name + " -> " +
                                         algebra_->format(images_[i]));
        }
        if (!rep.ok())
            return rep;
        for (const auto& rel : pres.relations) {
            Element img = extend_unchecked(rel.poly);
            if (!img.is_zero())
                rep.violations.push_back("derivation ill-defined: " + algebra_->format(rel.poly) + " -> " +
                                         algebra_->format(img));
        }
        const int p = algebra_->prime();
        for (const auto& [i, j] : algebra_->implicit_zero_products()) {
            Element a = algebra_->multiply(images_[i], algebra_->generator(j));
            Element b = algebra_->multiply(algebra_->generator(i), images_[j]);
            if (pres.generators[i].degree % 2)
                b = scale(b, p - 1, p);
            Element img = add(a, b, p);
            if (!img.is_zero())
                rep.violations.push_back("derivation ill-defined: " + pres.generators[i].name + "*" +
                                         pres.generators[j].name + " -> " + algebra_->format(img));
        }
        return rep;
    }

    // Leibniz extension D(ab) = D(a)b + (-1)^{|a|} a D(b), in normal form.
    Element extend(const Element& e) const
    {
        if (!validated_) {
            MapReport rep = check();
            if (!rep.ok())
                throw Error("derivation '" + name_ + "': " + rep.violations.front());
            validated_ = true;
        }
        return extend_unchecked(e);
    }

    // D restricted to degree n, as a map A_n -> A_{n+1}.
    FpMatrix matrix(int n) const
    {
        const std::size_t sd = algebra_->dim(n), td = algebra_->dim(n + 1);
        FpMatrix m(algebra_->prime(), td, sd);
        for (std::size_t k = 0; k < sd; ++k) {
            Vec col = algebra_->coordinates(extend(algebra_->standard_monomial(n, k)), n + 1);
            for (std::size_t r = 0; r < td; ++r)
                m.set(r, k, col[r]);
        }
        return m;
    }

    // Degrees n <= up_to where D o D : A_n -> A_{n+2} is nonzero.
    std::vector<int> square_nonzero_degrees(int up_to) const
    {
        std::vector<int> bad;
        for (int n = 0; n <= up_to; ++n)
            if (!(matrix(n + 1) * matrix(n)).is_zero())
                bad.push_back(n);
        return bad;
    }

private:
    Element extend_unchecked(const Element& e) const
    {
        const std::uint32_t p = algebra_->prime();
        const std::size_t ng = algebra_->num_generators();
        Element out;
        for (const auto& [m, c] : algebra_->canonical(e).terms) {
            std::vector<std::size_t> factors;
            for (std::size_t i = 0; i < m.size(); ++i)
                for (unsigned k = 0; k < m[i]; ++k)
                    factors.push_back(i);
            Monomial left(ng, 0);
            int left_degree = 0;
            for (std::size_t j = 0; j < factors.size(); ++j) {
                const std::size_t g = factors[j];
                if (!images_[g].is_zero()) {
                    Monomial right(ng, 0);
                    for (std::size_t k = j + 1; k < factors.size(); ++k)
                        ++right[factors[k]];
                    Element l, r;
                    l.terms.emplace(left, 1);
                    r.terms.emplace(right, 1);
                    Element term = algebra_->multiply_raw(algebra_->multiply_raw(l, images_[g]), r);
                    Residue sign = (p != 2 && left_degree % 2) ? p - 1 : 1;
                    out = add(out, scale(term, c * sign % p, p), p);
                }
                ++left[g];
                left_degree += algebra_->presentation().generators[g].degree;
            }
        }
        return algebra_->normal_form(out);
    }

    AlgebraPtr algebra_;
    std::vector<Element> images_;
    std::string name_;
    mutable bool validated_ = false;
};

} // namespace cohring
