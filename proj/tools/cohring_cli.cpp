// Command-line front end over the catalog.

#include "cohring/catalog.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;
using namespace cohring;

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

struct Options {
    int up_to = 24;
    std::string format = "text";
    std::uint32_t prime = 0;  // 0 = not given
    std::string target;
    std::string second;
};

// Text lines and the matching JSON document for one command.
struct Report {
    std::vector<std::string> lines;
    ordered_json doc = ordered_json::object();
    int code = exit_ok;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

ordered_json check_json(const Check& c)
{
    return {{"id", c.id}, {"pass", c.pass}, {"detail", c.detail}};
}

std::uint32_t entry_prime(const Catalog& cat, const std::string& id)
{
    switch (cat.entry(id).kind) {
    case EntryKind::algebra: return cat.algebra(id)->prime();
    case EntryKind::derivation: return cat.derivation(id)->algebra().prime();
    case EntryKind::hom: return cat.hom(id)->source().prime();
    case EntryKind::claim: return cat.claim(id).p;
    case EntryKind::tower: return cat.tower(id).p;
    }
    return 0;
}

const CatalogEntry& expect(const Catalog& cat, const std::string& id, EntryKind kind, const Options& o)
{
    const CatalogEntry& e = cat.entry(id);
    if (e.kind != kind)
        throw UsageError("'" + id + "' is a " + kind_name(e.kind) + ", expected " + kind_name(kind));
    if (o.prime && entry_prime(cat, id) != o.prime)
        throw UsageError("'" + id + "' is defined over F_" + std::to_string(entry_prime(cat, id)) + ", not F_" +
                         std::to_string(o.prime));
    return e;
}

Report cmd_poincare(const Catalog& cat, const Options& o)
{
    expect(cat, o.target, EntryKind::algebra, o);
    auto dims = cat.algebra(o.target)->poincare_series(o.up_to);
    Report r;
    r.lines.push_back(join_dims(dims));
    r.doc = {{"command", "poincare"}, {"id", o.target}, {"up_to", o.up_to}, {"dims", dims}};
    return r;
}

Report cmd_sq1(const Catalog& cat, const Options& o)
{
    expect(cat, o.target, EntryKind::derivation, o);
    auto d = cat.derivation(o.target);
    const Algebra& a = d->algebra();
    const std::string sq = bockstein_symbol(a.prime());
    Report r;
    ordered_json images = ordered_json::array();
    for (std::size_t i = 0; i < a.num_generators(); ++i) {
        const std::string g = a.presentation().generators[i].name;
        const std::string img = a.format(d->images()[i]);
        r.lines.push_back(sq + "(" + g + ") = " + img);
        images.push_back({{"generator", g}, {"image", img}});
    }
    std::vector<std::size_t> ranks;
    for (int n = 0; n <= o.up_to; ++n)
        ranks.push_back(rank(d->matrix(n)));
    r.lines.push_back("rank " + join_dims(ranks));
    auto checks = verify_entry(cat, o.target, o.up_to);
    ordered_json cj = ordered_json::array();
    for (const auto& c : checks) {
        r.lines.push_back(format_check(c));
        cj.push_back(check_json(c));
        if (!c.pass)
            r.code = exit_failed;
    }
    r.doc = {{"command", "sq1"}, {"id", o.target},   {"prime", a.prime()},
             {"images", images}, {"ranks", ranks},   {"checks", cj}};
    return r;
}

Report cmd_bockstein(const Catalog& cat, const Options& o)
{
    expect(cat, o.target, EntryKind::derivation, o);
    auto d = cat.derivation(o.target);
    auto pages = e2_page(*d, o.up_to);
    std::vector<std::size_t> order_p;
    for (int n = 0; n <= o.up_to; ++n)
        order_p.push_back(order_p_summands(*d, n));
    Report r;
    r.lines.push_back("E1 " + join_dims(pages.e1));
    r.lines.push_back("E2 " + join_dims(pages.e2));
    r.lines.push_back("order-p " + join_dims(order_p));
    r.doc = {{"command", "bockstein"}, {"id", o.target}, {"prime", d->algebra().prime()},
             {"e1", pages.e1},         {"e2", pages.e2}, {"order_p", order_p}};
    return r;
}

Report cmd_kernel(const Catalog& cat, const Options& o)
{
    expect(cat, o.target, EntryKind::hom, o);
    auto h = cat.hom(o.target);
    std::vector<KernelImage> rows;
    if (o.second.empty()) {
        rows = h->kernel_image_dims(o.up_to);
    } else {
        expect(cat, o.second, EntryKind::hom, o);
        rows = kernel_image_dims(*h, *cat.hom(o.second), o.up_to);
    }
    Report r;
    ordered_json degrees = ordered_json::array();
    for (std::size_t n = 0; n < rows.size(); ++n) {
        r.lines.push_back("H^" + std::to_string(n) + " kernel " + std::to_string(rows[n].kernel) + " image " +
                          std::to_string(rows[n].image));
        degrees.push_back({{"degree", n}, {"kernel", rows[n].kernel}, {"image", rows[n].image}});
    }
    r.doc = {{"command", "kernel"}, {"id", o.target}};
    if (!o.second.empty())
        r.doc["minus"] = o.second;
    r.doc["degrees"] = degrees;
    return r;
}

ordered_json group_json(const AbelianGroup& g)
{
    ordered_json t = ordered_json::array();
    for (const auto& [key, mult] : g.torsion)
        t.push_back({{"prime", key.first}, {"exponent", key.second}, {"count", mult}});
    return {{"text", g.to_string()}, {"free", g.free_rank}, {"torsion", t}};
}

ordered_json tower_json(const TowerResult& t)
{
    ordered_json doc = {{"coefficients", t.mode == Coefficients::integral ? "integral" : "field"}};
    if (!t.out_of_scope.empty()) {
        doc["out_of_scope"] = t.out_of_scope;
        return doc;
    }
    ordered_json stages = ordered_json::array();
    for (const auto& s : t.stages) {
        ordered_json degrees = ordered_json::array();
        for (const auto& d : s.degrees) {
            ordered_json dj = {{"degree", d.degree}};
            if (t.mode == Coefficients::field)
                dj["dim"] = d.dim(t.p);
            else
                dj["group"] = group_json(d.group);
            dj["kernel"] = group_json(d.kernel);
            dj["delta"] = group_json(d.cokernel_prev);
            dj["alpha_onto"] = d.alpha_surjective;
            if (d.ambiguous && t.mode == Coefficients::integral) {
                ordered_json cand = ordered_json::array();
                for (const auto& c : d.candidates)
                    cand.push_back(c.to_string());
                dj["ambiguous"] = cand;
                dj["resolved"] = d.resolved;
                dj["resolution"] = d.resolution;
            }
            if (d.fact_consistent)
                dj["fact_consistent"] = *d.fact_consistent;
            degrees.push_back(dj);
        }
        stages.push_back({{"index", s.index},
                          {"kind", s.kind == StageKind::amalgam ? "amalgam" : "hnn"},
                          {"edge", s.edge},
                          {"degrees", degrees}});
    }
    doc["stages"] = stages;
    return doc;
}

// "X.tower" names the tower at whichever prime is requested.
std::string resolve_tower_id(const Catalog& cat, const Options& o)
{
    if (cat.contains(o.target))
        return o.target;
    const std::string suffix = ".tower";
    if (o.target.size() > suffix.size() && o.target.compare(o.target.size() - suffix.size(), suffix.size(), suffix) == 0)
        return o.target + std::to_string(o.prime ? o.prime : 2);
    return o.target;
}

Report cmd_les(const Catalog& cat, const Options& o)
{
    Options q = o;
    q.target = resolve_tower_id(cat, o);
    expect(cat, q.target, EntryKind::tower, q);
    const TowerSpec& spec = cat.tower(q.target);
    Report r;
    r.doc = {{"command", "les"}, {"id", q.target}, {"prime", spec.p}};
    ordered_json runs = ordered_json::array();
    for (auto mode : {Coefficients::integral, Coefficients::field}) {
        TowerResult t = tower(spec, mode, o.up_to);
        auto lines = tower_report(t);
        r.lines.insert(r.lines.end(), lines.begin(), lines.end());
        runs.push_back(tower_json(t));
        if (!t.out_of_scope.empty())
            break;
        for (const auto& s : t.stages)
            for (const auto& d : s.degrees)
                if (!d.resolved || (d.fact_consistent && !*d.fact_consistent))
                    r.code = exit_failed;
    }
    r.doc["runs"] = runs;
    return r;
}

Report cmd_uct(const Catalog& cat, const Options& o)
{
    expect(cat, o.target, EntryKind::claim, o);
    const IntegralRingClaim& c = cat.claim(o.target);
    std::vector<std::size_t> dims;
    if (c.modp)
        dims = c.modp->poincare_series(o.up_to);
    else if (auto d = cat.claim_modp_dims(o.target, o.up_to))
        dims = *d;
    else
        throw UsageError("claim '" + o.target + "' has no mod-p data");
    auto rep = uct_check(claim_group(c, o.up_to + 1), dims, c.p);
    Report r;
    ordered_json rows = ordered_json::array();
    r.lines.push_back("n dim free t(n) t(n+1)");
    for (const auto& row : rep.rows) {
        std::ostringstream os;
        os << row.degree << ' ' << row.modp_dim << ' ' << row.free_rank << ' ' << row.torsion_here << ' '
           << row.torsion_next << (row.residual() ? " MISMATCH" : "");
        r.lines.push_back(os.str());
        rows.push_back({{"degree", row.degree},
                        {"dim", row.modp_dim},
                        {"free", row.free_rank},
                        {"t_n", row.torsion_here},
                        {"t_next", row.torsion_next},
                        {"ok", row.residual() == 0}});
    }
    Check chk{o.target + "/uct", rep.ok(),
              rep.ok() ? "dim H^n(F" + std::to_string(c.p) + ") = free + t(n) + t(n+1) for n <= " +
                             std::to_string(o.up_to)
                       : "mismatch in degree " + std::to_string(*rep.first_failure())};
    r.lines.push_back(format_check(chk));
    r.code = rep.ok() ? exit_ok : exit_failed;
    r.doc = {{"command", "uct"}, {"id", o.target}, {"prime", c.p}, {"rows", rows}, {"check", check_json(chk)}};
    return r;
}

Report cmd_verify(Catalog& cat, const Options& o)
{
    std::vector<std::string> ids;
    if (o.target.empty() || o.target == "all") {
        ids = cat.ids();
    } else if (!cat.contains(o.target) && std::filesystem::is_regular_file(o.target)) {
        // A standalone file replaces the shipped entry of the same id; everything built on it is rechecked.
        CatalogEntry e = parse_entry(Catalog::read_file(o.target), o.target);
        const std::string id = e.id;
        cat.replace(std::move(e));
        ids.push_back(id);
        for (const auto& d : cat.dependents(id))
            ids.push_back(d);
    } else {
        cat.entry(o.target);
        ids.push_back(o.target);
    }
    Report r;
    ordered_json checks = ordered_json::array();
    std::size_t passed = 0, total = 0;
    for (const auto& id : ids) {
        for (const auto& c : verify_entry(cat, id, o.up_to)) {
            r.lines.push_back(format_check(c));
            checks.push_back(check_json(c));
            ++total;
            if (c.pass)
                ++passed;
        }
    }
    r.code = passed == total ? exit_ok : exit_failed;
    r.lines.push_back("SUMMARY " + std::to_string(passed) + "/" + std::to_string(total) + " PASS");
    r.doc = {{"command", "verify"},
             {"scope", o.target.empty() ? "all" : o.target},
             {"checks", checks},
             {"passed", passed},
             {"total", total}};
    return r;
}

Report cmd_catalog_list(const Catalog& cat, const Options& o)
{
    Report r;
    ordered_json entries = ordered_json::array();
    for (const auto& id : cat.ids()) {
        const CatalogEntry& e = cat.entry(id);
        if (o.prime && entry_prime(cat, id) != o.prime)
            continue;
        r.lines.push_back(id + " " + kind_name(e.kind) + (e.anchor.empty() ? "" : " \"" + e.anchor + "\""));
        entries.push_back({{"id", id}, {"kind", kind_name(e.kind)}, {"anchor", e.anchor}, {"file", e.source}});
    }
    r.doc = {{"command", "catalog list"}, {"entries", entries}};
    return r;
}

void emit(const Report& r, const Options& o)
{
    if (o.format == "json") {
        std::cout << r.doc.dump(2) << '\n';
        return;
    }
    for (const auto& l : r.lines)
        std::cout << l << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Graded cohomology rings: Poincare series, Bockstein data, long exact sequences"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--up-to", o.up_to, "highest degree")->check(CLI::NonNegativeNumber);
        sub->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--prime", o.prime, "coefficient prime")->check(CLI::Range(2u, 1000000u));
    };
    auto with_target = [&](const std::string& name, const std::string& help, const std::string& what) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("id", o.target, what)->required();
        common(sub);
        return sub;
    };

    auto* poincare = with_target("poincare", "dimensions of an algebra by degree", "algebra id");
    auto* sq1 = with_target("sq1", "Bockstein derivation and its soundness checks", "derivation id");
    auto* bockstein = with_target("bockstein", "E1 and E2 pages of a Bockstein derivation", "derivation id");
    auto* kernel = with_target("kernel", "kernel and image dimensions of a hom (or a difference of two)", "hom id");
    kernel->add_option("minus", o.second, "second hom, subtracted");
    auto* les = with_target("les", "assemble a long exact sequence tower", "tower id");
    auto* uct = with_target("uct", "universal coefficient table for an integral claim", "claim id");
    auto* verify = app.add_subcommand("verify", "run checks on one entry, a file, or the whole catalog");
    verify->add_option("scope", o.target, "'all', an entry id, or a .coh file");
    common(verify);
    auto* catalog = app.add_subcommand("catalog", "catalog inspection");
    catalog->require_subcommand(1);
    auto* list = catalog->add_subcommand("list", "list catalog entries");
    common(list);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e) == 0 ? exit_ok : exit_usage;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        Catalog cat = Catalog::from_directory(Catalog::default_directory());
        Report r;
        if (poincare->parsed())
            r = cmd_poincare(cat, o);
        else if (sq1->parsed())
            r = cmd_sq1(cat, o);
        else if (bockstein->parsed())
            r = cmd_bockstein(cat, o);
        else if (kernel->parsed())
            r = cmd_kernel(cat, o);
        else if (les->parsed())
            r = cmd_les(cat, o);
        else if (uct->parsed())
            r = cmd_uct(cat, o);
        else if (verify->parsed())
            r = cmd_verify(cat, o);
        else
            r = cmd_catalog_list(cat, o);
        emit(r, o);
        return r.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
}
