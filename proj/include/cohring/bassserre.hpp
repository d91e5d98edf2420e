#pragma once

// Long exact sequences of amalgamated products and HNN extensions.
//
//   ... -> H^{n-1}(E) -delta-> H^n(G) -rho-> H^n(V) -alpha-> H^n(E) -> ...
//
// Cohomology is handled one prime at a time.  In integral mode the order-p
// torsion of every finite leaf group is modelled as the image of Sq^1 in
// its mod-p ring (all torsion of the leaves has exponent p), with Z in
// degree 0.  In field mode every piece is the mod-p ring itself.  Both
// modes run through the same abelian group machinery; field mode simply
// gives every generator order p and never meets an extension problem.
//
// Every assembled class carries "leaf coordinates": its restriction to the
// leaf groups, as mod-p coordinates in each leaf ring.  Later stages compute
// restrictions to new edges from these.  Classes in the image of delta
// restrict to zero on every vertex group.

#include "cohring/bockstein.hpp"
#include "cohring/intlinalg.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace cohring {

enum class Coefficients { integral, field };
enum class StageKind { amalgam, hnn };

// A leaf (vertex building block) or an edge group.
struct TowerGroup {
    std::string name;
    AlgebraPtr algebra;
    std::shared_ptr<const Derivation> sq1;  // needed in integral mode
    std::vector<std::string> free_classes;  // generators that lift to free integral classes
};

struct LeafHom {
    std::string leaf;
    std::shared_ptr<const GradedHom> hom;  // leaf ring -> edge ring
};

// For an amalgam, alpha = res1 - res2 on H(first) + H(second).  For an HNN
// extension, alpha = res1 - res2 on H(first) where res2 is the twisting.
// Vertices are leaf names or "@k" for the output of stage k (1-based).
struct StageSpec {
    StageKind kind = StageKind::amalgam;
    std::string first, second;
    std::string edge;
    std::vector<LeafHom> res1, res2;
};

// External input that selects one extension when a degree is ambiguous.
struct ExtensionFact {
    int stage = 0;
    int degree = 0;
    bool onward = false;  // applies to every degree >= `degree`
    std::shared_ptr<const Derivation> sq1;  // order-p summands = rank of Sq^1 into `degree`
    std::optional<int> higher;              // summands of order >= p^2
    std::string source;
};

struct TowerSpec {
    std::string id;
    std::uint32_t p = 2;
    std::vector<TowerGroup> leaves, edges;
    std::vector<StageSpec> stages;
    std::vector<ExtensionFact> facts;
    std::string claim;
    std::string out_of_scope;  // nonempty when the computation lies outside this engine
};

enum class Provenance { kernel, delta, hnn, extension };

inline const char* provenance_name(Provenance p)
{
    switch (p) {
    case Provenance::kernel: return "kernel";
    case Provenance::delta: return "delta";
    case Provenance::hnn: return "hnn";
    case Provenance::extension: return "extension";
    }
    return "?";
}

struct ClassRecord {
    std::string name;
    int degree = 0;
    long long order = 0;  // 0 = free
    Provenance provenance = Provenance::kernel;
    Vec leaf_coords;
};

struct DegreeResult {
    int degree = 0;
    AbelianGroup group;
    AbelianGroup kernel;         // ker alpha(n)
    AbelianGroup cokernel_prev;  // coker alpha(n-1), the image of delta
    bool alpha_surjective = false;
    std::vector<ClassRecord> classes;
    bool ambiguous = false;
    bool resolved = true;
    std::vector<AbelianGroup> candidates;
    std::string resolution;
    std::optional<bool> fact_consistent;

    std::size_t dim(std::uint32_t p) const
    {
        return static_cast<std::size_t>(group.free_rank + group.torsion_count(p));
    }
};

struct StageResult {
    int index = 0;
    StageKind kind = StageKind::amalgam;
    std::string edge;
    std::vector<std::string> leaves;  // leaf-coordinate layout of the output
    std::vector<DegreeResult> degrees;

    // kept for delta products
    std::vector<std::vector<Vec>> edge_basis;     // per degree
    std::vector<std::vector<long long>> edge_orders;
    std::vector<FgGroup> cokernel;                // coker alpha(n), per degree
    std::vector<FgGroup> assembled;               // H^n presented on (coker gens, kernel gens)
};

struct TowerResult {
    std::string id;
    std::uint32_t p = 2;
    Coefficients mode = Coefficients::integral;
    std::string out_of_scope;
    std::vector<StageResult> stages;

    const StageResult& final_stage() const
    {
        if (stages.empty())
            throw Error("tower '" + id + "' has no stages");
        return stages.back();
    }

    GradedAbelianGroup final_group() const
    {
        GradedAbelianGroup g;
        for (const auto& d : final_stage().degrees)
            g.degrees.push_back(d.group);
        return g;
    }

    std::vector<std::size_t> dims() const
    {
        std::vector<std::size_t> out;
        for (const auto& d : final_stage().degrees)
            out.push_back(d.dim(p));
        return out;
    }
};

namespace detail {

// Basis of the image of Sq^1 into degree n, as coordinate vectors.
inline std::vector<Vec> sq1_image_basis(const Derivation& d, int n)
{
    if (n <= 0)
        return {};
    return row_echelon(d.matrix(n - 1).transpose()).rows;
}

struct GroupData {
    std::vector<long long> orders;
    std::vector<Vec> coords;  // leaf coordinates per generator
    std::vector<std::string> names;
};

struct Component {
    std::vector<std::string> leaves;
    std::vector<GroupData> degrees;
};

inline Vec unit_vector(std::size_t n, std::size_t i)
{
    Vec v(n, 0);
    v[i] = 1;
    return v;
}

} // namespace detail


namespace detail {

class TowerRunner {
public:
    TowerRunner(const TowerSpec& spec, Coefficients mode, int up_to)
        : spec_(spec), mode_(mode), up_to_(up_to), p_(spec.p)
    {
        if (up_to < 1)
            throw Error("degree range too small: need at least degree 1");
    }

    TowerResult run()
    {
        TowerResult out{spec_.id, p_, mode_, spec_.out_of_scope, {}};
        if (!spec_.out_of_scope.empty())
            return out;
        for (std::size_t i = 0; i < spec_.stages.size(); ++i)
            out.stages.push_back(run_stage(static_cast<int>(i + 1), spec_.stages[i]));
        return out;
    }

private:
    bool integral() const { return mode_ == Coefficients::integral; }

    const TowerGroup& find(const std::vector<TowerGroup>& list, const std::string& name, const char* what) const
    {
        for (const auto& g : list)
            if (g.name == name)
                return g;
        throw Error("tower '" + spec_.id + "': unknown " + what + " '" + name + "'");
    }

    const FpMatrix& hom_matrix(const GradedHom& h, int n)
    {
        auto key = std::make_pair(&h, n);
        auto it = hom_cache_.find(key);
        if (it == hom_cache_.end())
            it = hom_cache_.emplace(key, h.matrix(n)).first;
        return it->second;
    }

    const Derivation& sq1_of(const TowerGroup& g) const
    {
        if (!g.sq1)
            throw Error("tower '" + spec_.id + "': '" + g.name + "' needs Bockstein data in integral mode");
        return *g.sq1;
    }

    Component leaf_component(const TowerGroup& leaf) const
    {
        Component c{{leaf.name}, {}};
        const Algebra& a = *leaf.algebra;
        for (int n = 0; n <= up_to_; ++n) {
            GroupData g;
            std::vector<Vec> basis;
            if (integral() && n == 0) {
                basis.push_back(unit_vector(a.dim(0), 0));
                g.orders.push_back(0);
            } else if (integral()) {
                basis = sq1_image_basis(sq1_of(leaf), n);
                g.orders.assign(basis.size(), p_);
            } else {
                for (std::size_t i = 0; i < a.dim(n); ++i)
                    basis.push_back(unit_vector(a.dim(n), i));
                g.orders.assign(basis.size(), p_);
            }
            for (std::size_t i = 0; i < basis.size(); ++i)
                g.names.push_back(leaf.name + "_" + std::to_string(n) + "_" + std::to_string(i));
            g.coords = std::move(basis);
            c.degrees.push_back(std::move(g));
        }
        return c;
    }

    const Component& component(const std::string& ref)
    {
        if (!ref.empty() && ref[0] == '@') {
            const int k = std::stoi(ref.substr(1));
            if (k < 1 || static_cast<std::size_t>(k) > outputs_.size())
                throw Error("tower '" + spec_.id + "': vertex " + ref + " refers to a stage not yet assembled");
            return outputs_[static_cast<std::size_t>(k - 1)];
        }
        auto it = leaf_components_.find(ref);
        if (it == leaf_components_.end())
            it = leaf_components_.emplace(ref, leaf_component(find(spec_.leaves, ref, "leaf"))).first;
        return it->second;
    }

    // Generators of the edge group in degree n, as coordinate vectors in its ring.
    std::pair<std::vector<Vec>, std::vector<long long>> edge_group(const TowerGroup& e, int n) const
    {
        const Algebra& a = *e.algebra;
        std::vector<Vec> basis;
        std::vector<long long> orders;
        if (!integral()) {
            for (std::size_t i = 0; i < a.dim(n); ++i)
                basis.push_back(unit_vector(a.dim(n), i));
            orders.assign(basis.size(), p_);
        } else if (n == 0) {
            basis.push_back(unit_vector(a.dim(0), 0));
            orders.push_back(0);
        } else {
            basis = sq1_image_basis(sq1_of(e), n);
            orders.assign(basis.size(), p_);
            for (const auto& name : e.free_classes) {
                auto idx = a.presentation().index_of(name);
                if (!idx)
                    throw Error("tower '" + spec_.id + "': free class '" + name + "' is not a generator of " + e.name);
                if (a.presentation().generators[*idx].degree != n)
                    continue;
                basis.push_back(a.coordinates(a.generator(*idx), n));
                orders.push_back(0);
            }
        }
        return {basis, orders};
    }

    static std::size_t block_offset(const std::vector<std::string>& leaves, const std::vector<std::size_t>& dims,
                                    const std::string& leaf)
    {
        std::size_t off = 0;
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            if (leaves[i] == leaf)
                return off;
            off += dims[i];
        }
        return static_cast<std::size_t>(-1);
    }

    std::vector<std::size_t> leaf_dims(const std::vector<std::string>& leaves, int n) const
    {
        std::vector<std::size_t> d;
        for (const auto& l : leaves)
            d.push_back(find(spec_.leaves, l, "leaf").algebra->dim(n));
        return d;
    }

    // Restriction of a class with the given leaf coordinates to the edge ring.
    Vec restrict(const std::vector<std::string>& leaves, const std::vector<LeafHom>& homs, const Vec& coords, int n,
                 const TowerGroup& edge)
    {
        const auto dims = leaf_dims(leaves, n);
        Vec out(edge.algebra->dim(n), 0);
        // the unit is shared by all leaves, so degree 0 reads one leaf only
        const std::size_t used = n == 0 ? std::min<std::size_t>(1, homs.size()) : homs.size();
        for (std::size_t h = 0; h < used; ++h) {
            const LeafHom& lh = homs[h];
            const std::size_t off = block_offset(leaves, dims, lh.leaf);
            if (off == static_cast<std::size_t>(-1))
                throw Error("restriction undefined: leaf '" + lh.leaf + "' is not part of the vertex");
            const TowerGroup& leaf = find(spec_.leaves, lh.leaf, "leaf");
            if (lh.hom->source_ptr().get() != leaf.algebra.get() || lh.hom->target_ptr().get() != edge.algebra.get())
                throw Error("invalid alpha: hom '" + lh.hom->name() + "' does not map " + leaf.name + " to " + edge.name);
            const std::size_t ld = leaf.algebra->dim(n);
            Vec slice(coords.begin() + static_cast<std::ptrdiff_t>(off),
                      coords.begin() + static_cast<std::ptrdiff_t>(off + ld));
            Vec img = hom_matrix(*lh.hom, n).apply(slice);
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] = (out[i] + img[i]) % p_;
        }
        return out;
    }

    Vec express(const Vec& v, const std::vector<Vec>& basis, const TowerGroup& edge, int n) const
    {
        FpMatrix m(p_, v.size(), basis.size());
        for (std::size_t c = 0; c < basis.size(); ++c)
            for (std::size_t r = 0; r < v.size(); ++r)
                m.set(r, c, basis[c][r]);
        auto y = solve(m, v);
        if (!y)
            throw Error("invalid alpha: a restriction to " + edge.name + " in degree " + std::to_string(n) +
                        " leaves the integral model");
        return *y;
    }

    StageResult run_stage(int index, const StageSpec& st);

    const TowerSpec& spec_;
    Coefficients mode_;
    int up_to_;
    std::uint32_t p_;
    std::map<std::string, Component> leaf_components_;
    std::vector<Component> outputs_;
    std::map<std::pair<const GradedHom*, int>, FpMatrix> hom_cache_;
};

} // namespace detail

namespace detail {

struct ExtensionCandidate {
    AbelianGroup type;
    FgGroup group;
};

// All isomorphism types of extensions 0 -> C -> H -> K -> 0 of p-groups.
// Free parts split.  H is presented on the generators of C followed by lifts
// of the generators of K.
inline std::vector<ExtensionCandidate> extension_candidates(const FgGroup& c, const FgGroup& k, std::uint32_t p,
                                                            bool split_only)
{
    const std::size_t cn = c.size(), kn = k.size();
    std::vector<std::size_t> tc, tk;
    for (std::size_t j = 0; j < cn; ++j)
        if (c.orders[j])
            tc.push_back(j);
    for (std::size_t i = 0; i < kn; ++i)
        if (k.orders[i])
            tk.push_back(i);

    auto build = [&](const std::map<std::pair<std::size_t, std::size_t>, long long>& e) {
        std::vector<IntVec> rel;
        for (std::size_t j : tc) {
            IntVec v(cn + kn, 0);
            v[j] = c.orders[j];
            rel.push_back(std::move(v));
        }
        for (std::size_t i : tk) {
            IntVec v(cn + kn, 0);
            v[cn + i] = k.orders[i];
            for (std::size_t j : tc) {
                auto it = e.find({i, j});
                if (it != e.end())
                    v[j] = -it->second;
            }
            rel.push_back(std::move(v));
        }
        FgGroup g = quotient(cn + kn, rel);
        return ExtensionCandidate{to_abelian(g.orders), std::move(g)};
    };

    std::vector<ExtensionCandidate> out;
    auto push = [&](ExtensionCandidate cand) {
        for (const auto& o : out)
            if (o.type == cand.type)
                return;
        out.push_back(std::move(cand));
    };
    push(build({}));
    if (split_only || tc.empty() || tk.empty())
        return out;

    bool elementary = true;
    for (std::size_t j : tc)
        elementary = elementary && c.orders[j] == static_cast<long long>(p);
    for (std::size_t i : tk)
        elementary = elementary && k.orders[i] == static_cast<long long>(p);
    if (elementary) {
        // the type only depends on the rank of the extension matrix
        for (std::size_t r = 1; r <= std::min(tc.size(), tk.size()); ++r) {
            std::map<std::pair<std::size_t, std::size_t>, long long> e;
            for (std::size_t t = 0; t < r; ++t)
                e[{tk[t], tc[t]}] = 1;
            push(build(e));
        }
        return out;
    }

    std::vector<std::pair<std::size_t, std::size_t>> slots;
    std::vector<long long> range;
    std::size_t total = 1;
    for (std::size_t i : tk)
        for (std::size_t j : tc) {
            const long long g = std::gcd(k.orders[i], c.orders[j]);
            if (g <= 1)
                continue;
            slots.push_back({i, j});
            range.push_back(g);
            total *= static_cast<std::size_t>(g);
            if (total > 4096)
                throw Error("extension enumeration too large");
        }
    std::vector<long long> digit(slots.size(), 0);
    for (std::size_t count = 0; count < total; ++count) {
        std::map<std::pair<std::size_t, std::size_t>, long long> e;
        for (std::size_t s = 0; s < slots.size(); ++s)
            if (digit[s])
                e[slots[s]] = digit[s];
        push(build(e));
        for (std::size_t s = 0; s < slots.size(); ++s) {
            if (++digit[s] < range[s])
                break;
            digit[s] = 0;
        }
    }
    return out;
}

inline StageResult TowerRunner::run_stage(int index, const StageSpec& st)
{
    const bool hnn = st.kind == StageKind::hnn;
    const Component& c1 = component(st.first);
    const Component* c2 = hnn ? nullptr : &component(st.second);
    const TowerGroup& edge = find(spec_.edges, st.edge, "edge");

    StageResult res;
    res.index = index;
    res.kind = st.kind;
    res.edge = st.edge;
    res.leaves = c1.leaves;
    if (c2)
        for (const auto& l : c2->leaves) {
            if (std::find(res.leaves.begin(), res.leaves.end(), l) != res.leaves.end())
                throw Error("tower '" + spec_.id + "': leaf '" + l + "' appears on both sides of stage " +
                            std::to_string(index));
            res.leaves.push_back(l);
        }

    Component out{res.leaves, {}};
    const std::string tag = std::to_string(index);

    for (int n = 0; n <= up_to_; ++n) {
        auto [bbasis, borders] = edge_group(edge, n);
        const GroupData& g1 = c1.degrees[static_cast<std::size_t>(n)];
        const GroupData* g2 = c2 ? &c2->degrees[static_cast<std::size_t>(n)] : nullptr;

        std::size_t d1 = 0, d2 = 0;
        for (auto d : leaf_dims(c1.leaves, n))
            d1 += d;
        if (c2)
            for (auto d : leaf_dims(c2->leaves, n))
                d2 += d;

        std::vector<long long> aorders = g1.orders;
        std::vector<Vec> acoords;
        for (const auto& v : g1.coords) {
            Vec w = v;
            w.resize(d1 + d2, 0);
            acoords.push_back(std::move(w));
        }
        if (g2) {
            aorders.insert(aorders.end(), g2->orders.begin(), g2->orders.end());
            for (const auto& v : g2->coords) {
                Vec w(d1, 0);
                w.insert(w.end(), v.begin(), v.end());
                acoords.push_back(std::move(w));
            }
        }

        GroupHom alpha{aorders, borders, IntMatrix(borders.size(), aorders.size())};
        for (std::size_t j = 0; j < aorders.size(); ++j) {
            const bool second = j >= g1.orders.size();
            Vec img;
            if (hnn) {
                Vec a = restrict(c1.leaves, st.res1, g1.coords[j], n, edge);
                Vec b = restrict(c1.leaves, st.res2, g1.coords[j], n, edge);
                for (std::size_t i = 0; i < a.size(); ++i)
                    a[i] = (a[i] + p_ - b[i]) % p_;
                img = std::move(a);
            } else if (!second) {
                img = restrict(c1.leaves, st.res1, g1.coords[j], n, edge);
            } else {
                img = restrict(c2->leaves, st.res2, g2->coords[j - g1.orders.size()], n, edge);
            }
            const Vec y = express(img, bbasis, edge, n);
            const long long sign = second ? -1 : 1;
            for (std::size_t i = 0; i < borders.size(); ++i) {
                if (borders[i] == 0 && n > 0) {
                    if (y[i] && aorders[j] != 0)
                        throw Error("invalid alpha: a torsion class maps onto a free class of " + edge.name);
                    continue;
                }
                const long long v = sign * static_cast<long long>(y[i]);
                alpha.m(i, j) = borders[i] ? floor_mod(v, borders[i]) : v;
            }
        }

        FgGroup kernel = hom_kernel(alpha);
        FgGroup coker = hom_cokernel(alpha);
        const FgGroup prev = n == 0 ? FgGroup{} : res.cokernel.back();

        DegreeResult dr;
        dr.degree = n;
        dr.kernel = to_abelian(kernel.orders);
        dr.cokernel_prev = to_abelian(prev.orders);
        dr.alpha_surjective = coker.orders.empty();

        std::vector<Vec> kcoords;
        for (const auto& kg : kernel.generators) {
            Vec v(d1 + d2, 0);
            for (std::size_t j = 0; j < kg.size(); ++j)
                for (std::size_t r = 0; r < v.size(); ++r)
                    v[r] = static_cast<Residue>((v[r] + reduce_mod(kg[j], p_) * acoords[j][r]) % p_);
            kcoords.push_back(std::move(v));
        }

        auto cands = extension_candidates(prev, kernel, p_, !integral());
        std::size_t chosen = 0;
        const ExtensionFact* fact = nullptr;
        // an exact-degree fact wins over an open-ended one
        for (const auto& f : spec_.facts) {
            if (!integral() || f.stage != index)
                continue;
            if (!f.onward && f.degree == n)
                fact = &f;
            else if (f.onward && f.degree <= n && (!fact || fact->onward))
                fact = &f;
        }
        auto matches = [&](const AbelianGroup& g) {
            if (fact->higher)
                return g.higher_count(p_) == *fact->higher;
            return g.count(p_, 1) == static_cast<int>(order_p_summands(*fact->sq1, n));
        };
        if (cands.size() > 1) {
            dr.ambiguous = true;
            for (const auto& c : cands)
                dr.candidates.push_back(c.type);
            dr.resolved = false;
            if (fact) {
                std::vector<std::size_t> hit;
                for (std::size_t i = 0; i < cands.size(); ++i)
                    if (matches(cands[i].type))
                        hit.push_back(i);
                if (hit.size() == 1) {
                    chosen = hit.front();
                    dr.resolved = true;
                    if (fact->higher)
                        dr.resolution = std::to_string(*fact->higher) + " summand(s) of order >= " +
                                        std::to_string(p_ * p_) + " (" + fact->source + ")";
                    else
                        dr.resolution = std::to_string(order_p_summands(*fact->sq1, n)) + " summand(s) of order " +
                                        std::to_string(p_) + " = rank " + bockstein_symbol(p_) + " (" + fact->source + ")";
                } else {
                    dr.resolution = "external fact matches " + std::to_string(hit.size()) + " candidates";
                }
            } else {
                dr.resolution = "no external fact";
            }
        } else if (fact) {
            dr.fact_consistent = matches(cands.front().type);
        }

        const FgGroup& h = cands[chosen].group;
        dr.group = cands[chosen].type;
        GroupData gd;
        gd.orders = h.orders;
        int nd = 0, nk = 0, ne = 0;
        for (std::size_t g = 0; g < h.size(); ++g) {
            const IntVec& vec = h.generators[g];
            bool kzero = true, czero = true;
            for (std::size_t j = 0; j < prev.size(); ++j)
                if (prev.orders[j] ? floor_mod(vec[j], prev.orders[j]) : vec[j])
                    czero = false;
            Vec coords(d1 + d2, 0);
            for (std::size_t i = 0; i < kernel.size(); ++i) {
                const long long kv = vec[prev.size() + i];
                if (kernel.orders[i] ? floor_mod(kv, kernel.orders[i]) : kv)
                    kzero = false;
                for (std::size_t r = 0; r < coords.size(); ++r)
                    coords[r] = static_cast<Residue>((coords[r] + reduce_mod(kv, p_) * kcoords[i][r]) % p_);
            }
            ClassRecord rec;
            rec.degree = n;
            rec.order = h.orders[g];
            if (kzero) {
                rec.provenance = hnn && n == 1 ? Provenance::hnn : Provenance::delta;
                rec.name = rec.provenance == Provenance::hnn ? "hnn_" + tag
                                                             : "delta_" + tag + "_" + std::to_string(n) + "_" +
                                                                   std::to_string(nd);
                ++nd;
            } else if (czero) {
                rec.provenance = Provenance::kernel;
                rec.name = "ker_" + tag + "_" + std::to_string(n) + "_" + std::to_string(nk++);
            } else {
                rec.provenance = Provenance::extension;
                rec.name = "ext_" + tag + "_" + std::to_string(n) + "_" + std::to_string(ne++);
            }
            rec.leaf_coords = kzero ? Vec(d1 + d2, 0) : coords;
            gd.coords.push_back(rec.leaf_coords);
            gd.names.push_back(rec.name);
            dr.classes.push_back(std::move(rec));
        }
        out.degrees.push_back(std::move(gd));
        res.degrees.push_back(std::move(dr));
        res.edge_basis.push_back(std::move(bbasis));
        res.edge_orders.push_back(std::move(borders));
        res.cokernel.push_back(std::move(coker));
        res.assembled.push_back(h);
    }
    outputs_.push_back(std::move(out));
    return res;
}

} // namespace detail

inline TowerResult tower(const TowerSpec& spec, Coefficients mode, int up_to)
{
    return detail::TowerRunner(spec, mode, up_to).run();
}

// A single amalgam or HNN problem is a one-stage tower.
inline StageResult assemble(const TowerSpec& spec, Coefficients mode, int up_to)
{
    if (spec.stages.size() != 1)
        throw Error("assemble expects exactly one stage, '" + spec.id + "' has " +
                    std::to_string(spec.stages.size()));
    return tower(spec, mode, up_to).final_stage();
}

struct DeltaProduct {
    Element restricted;    // res(u) on the edge
    Element edge_product;  // res(u) * v
    int degree = 0;        // degree of u * delta(v)
    IntVec coordinates;    // in the generators of the assembled group
    std::string value;
    bool zero = false;
};

// u * delta(v) = delta(res(u) * v).  The class u is given by its restrictions
// to the leaves of the first vertex; v is an edge class.
inline DeltaProduct delta_product(const TowerSpec& spec, const TowerResult& result, int stage,
                                  const std::vector<std::pair<std::string, Element>>& u, const Element& v)
{
    if (stage < 1 || static_cast<std::size_t>(stage) > result.stages.size())
        throw Error("delta_product: no stage " + std::to_string(stage));
    const StageSpec& st = spec.stages[static_cast<std::size_t>(stage - 1)];
    const StageResult& sr = result.stages[static_cast<std::size_t>(stage - 1)];
    const TowerGroup* edge = nullptr;
    for (const auto& e : spec.edges)
        if (e.name == st.edge)
            edge = &e;
    if (!edge)
        throw Error("delta_product: unknown edge '" + st.edge + "'");
    const Algebra& ea = *edge->algebra;

    DeltaProduct out;
    for (const auto& [leaf, elem] : u) {
        const LeafHom* lh = nullptr;
        for (const auto& h : st.res1)
            if (h.leaf == leaf)
                lh = &h;
        if (!lh)
            throw Error("restriction undefined: no map from leaf '" + leaf + "' to " + st.edge);
        out.restricted = add(out.restricted, lh->hom->apply(elem), ea.prime());
    }
    out.restricted = ea.normal_form(out.restricted);
    out.edge_product = ea.multiply(out.restricted, v);
    if (out.edge_product.is_zero()) {
        out.zero = true;
        out.value = "0";
        return out;
    }
    auto d = homogeneous_degree(ea.presentation(), out.edge_product);
    if (!d)
        throw Error("delta_product: inhomogeneous product");
    out.degree = *d + 1;
    if (static_cast<std::size_t>(out.degree) >= sr.degrees.size())
        throw Error("degree range too small: product lands in degree " + std::to_string(out.degree));

    const auto& basis = sr.edge_basis[static_cast<std::size_t>(*d)];
    const Vec target = ea.coordinates(out.edge_product, *d);
    FpMatrix m(ea.prime(), target.size(), basis.size());
    for (std::size_t c = 0; c < basis.size(); ++c)
        for (std::size_t r = 0; r < target.size(); ++r)
            m.set(r, c, basis[c][r]);
    auto y = solve(m, target);
    if (!y)
        throw Error("restriction undefined: product leaves the integral model of " + st.edge);
    IntVec b(y->begin(), y->end());
    const IntVec ccoords = sr.cokernel[static_cast<std::size_t>(*d)].coordinates(b);
    const FgGroup& h = sr.assembled[static_cast<std::size_t>(out.degree)];
    IntVec full(h.to_new.cols(), 0);
    std::copy(ccoords.begin(), ccoords.end(), full.begin());
    out.coordinates = h.coordinates(full);

    const auto& classes = sr.degrees[static_cast<std::size_t>(out.degree)].classes;
    for (std::size_t i = 0; i < out.coordinates.size(); ++i) {
        const long long c = out.coordinates[i];
        if (!c)
            continue;
        out.value += (out.value.empty() ? "" : " + ") + (c == 1 ? "" : std::to_string(c) + "*") + classes[i].name;
    }
    out.zero = out.value.empty();
    if (out.zero)
        out.value = "0";
    return out;
}

// Products of two classes in the image of delta vanish.
inline DeltaProduct delta_delta_product()
{
    DeltaProduct out;
    out.zero = true;
    out.value = "0";
    return out;
}

inline std::vector<std::string> tower_report(const TowerResult& r)
{
    std::vector<std::string> lines;
    const std::string mode = r.mode == Coefficients::integral ? "integral" : "field";
    lines.push_back("TOWER " + r.id + " p=" + std::to_string(r.p) + " coefficients=" + mode);
    if (!r.out_of_scope.empty()) {
        lines.push_back("OUT-OF-SCOPE " + r.out_of_scope);
        return lines;
    }
    for (const auto& s : r.stages) {
        lines.push_back("STAGE " + std::to_string(s.index) + " " +
                        (s.kind == StageKind::amalgam ? "amalgam" : "hnn") + " over " + s.edge);
        for (const auto& d : s.degrees) {
            if (r.mode == Coefficients::field) {
                lines.push_back("  H^" + std::to_string(d.degree) + " dim " + std::to_string(d.dim(r.p)) +
                                "  [ker " + std::to_string(d.kernel.torsion_count(r.p)) + ", delta " +
                                std::to_string(d.cokernel_prev.torsion_count(r.p)) +
                                (d.alpha_surjective ? ", alpha onto" : "") + "]");
                continue;
            }
            std::string line = "  H^" + std::to_string(d.degree) + " = " + d.group.to_string() +
                               "  [ker " + d.kernel.to_string() + ", delta " + d.cokernel_prev.to_string() +
                               (d.alpha_surjective ? ", alpha onto" : "") + "]";
            lines.push_back(line);
            if (d.ambiguous) {
                std::string c;
                for (const auto& g : d.candidates)
                    c += (c.empty() ? "" : " | ") + g.to_string();
                lines.push_back("  AMBIGUOUS degree " + std::to_string(d.degree) + ": " + c);
                lines.push_back(std::string("  ") + (d.resolved ? "RESOLVED " : "UNRESOLVED ") + d.group.to_string() +
                                " by " + d.resolution);
            }
            if (d.fact_consistent && !*d.fact_consistent)
                lines.push_back("  FACT-MISMATCH degree " + std::to_string(d.degree));
        }
    }
    return lines;
}

} // namespace cohring
