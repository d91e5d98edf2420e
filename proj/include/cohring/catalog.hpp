#pragma once

// Text format for presentations, maps, Sq^1 data, integral ring claims and
// assembly towers, plus the loader that validates a whole data directory.
//
// One entry per file.  The first line names the kind and id:
//
//   algebra A4.mod2
//   anchor "..."
//   field 2
//   gen u2 deg 2
//   rel u2^3 + v3^2 + w3^2 + v3*w3
//
// Comments start with '#'.  Lines of the form "# source-typo: ..." are kept
// with the entry and printed back.

#include "cohring/bassserre.hpp"
#include "cohring/bockstein.hpp"
#include "cohring/error.hpp"
#include "cohring/gradedmaps.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#ifndef COHRING_DEFAULT_CATALOG_DIR
#define COHRING_DEFAULT_CATALOG_DIR "data/catalog"
#endif

namespace cohring {

// Polynomial source text with the location of its first character.
struct PolyText {
    std::string text;
    int line = 0;
    int col = 0;

    friend bool operator==(const PolyText& a, const PolyText& b) { return strip(a.text) == strip(b.text); }

    static std::string strip(const std::string& s)
    {
        std::string out;
        for (char c : s)
            if (!std::isspace(static_cast<unsigned char>(c)))
                out += c;
        return out;
    }
};

// Recursive-descent parser for  expr := ['+'|'-'] term (('+'|'-') term)*,
// term := factor ('*' factor)*,  factor := atom ['^' int],
// atom := int | name | '(' expr ')'.
class PolyParser {
public:
    PolyParser(const Algebra& ring, const PolyText& t, std::string source)
        : ring_(ring), t_(t), source_(std::move(source))
    {
    }

    Element parse()
    {
        Element e = expr();
        skip_ws();
        if (pos_ < t_.text.size())
            fail("syntax error: unexpected '" + std::string(1, t_.text[pos_]) + "'");
        return ring_.canonical(e);
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ParseError(source_, t_.line, t_.col + static_cast<int>(pos_), what);
    }

    void skip_ws()
    {
        while (pos_ < t_.text.size() && std::isspace(static_cast<unsigned char>(t_.text[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < t_.text.size() && t_.text[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    long long integer()
    {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < t_.text.size() && std::isdigit(static_cast<unsigned char>(t_.text[pos_])))
            ++pos_;
        if (start == pos_)
            fail("syntax error: expected an integer");
        if (pos_ - start > 9)
            fail("syntax error: integer too large");
        return std::stoll(t_.text.substr(start, pos_ - start));
    }

    Element expr()
    {
        const std::uint32_t p = ring_.prime();
        bool negative = false;
        if (accept('-'))
            negative = true;
        else
            accept('+');
        Element out = term();
        if (negative)
            out = negate(out, p);
        for (;;) {
            if (accept('+'))
                out = add(out, term(), p);
            else if (accept('-'))
                out = subtract(out, term(), p);
            else
                return out;
        }
    }

    Element term()
    {
        Element out = factor();
        while (accept('*'))
            out = ring_.multiply_raw(out, factor());
        return out;
    }

    Element factor()
    {
        Element base = atom();
        if (accept('^')) {
            const long long k = integer();
            Element out = ring_.one();
            for (long long i = 0; i < k; ++i)
                out = ring_.multiply_raw(out, base);
            return out;
        }
        return base;
    }

    Element atom()
    {
        skip_ws();
        if (pos_ >= t_.text.size())
            fail("syntax error: unexpected end of polynomial");
        const char c = t_.text[pos_];
        if (c == '(') {
            ++pos_;
            Element e = expr();
            if (!accept(')'))
                fail("syntax error: expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return constant(ring_.num_generators(), reduce_mod(integer(), ring_.prime()), ring_.prime());
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < t_.text.size() &&
                   (std::isalnum(static_cast<unsigned char>(t_.text[pos_])) || t_.text[pos_] == '_'))
                ++pos_;
            const std::string name = t_.text.substr(start, pos_ - start);
            auto idx = ring_.presentation().index_of(name);
            if (!idx) {
                pos_ = start;
                fail("unknown generator '" + name + "'");
            }
            return ring_.generator(*idx);
        }
        fail("syntax error: unexpected '" + std::string(1, c) + "'");
    }

    const Algebra& ring_;
    const PolyText& t_;
    std::string source_;
    std::size_t pos_ = 0;
};

// ---- entry payloads ---------------------------------------------------------

struct GenLine {
    std::string name;
    int degree = 1;
    bool exterior = false;
    bool isolated = false;  // square-zero with trivial products against every other generator
    friend bool operator==(const GenLine&, const GenLine&) = default;
};

struct RelLine {
    PolyText lhs;
    std::optional<PolyText> rhs;
    bool tabulated = false;
    friend bool operator==(const RelLine&, const RelLine&) = default;
};

struct SumPart {
    std::string id;
    std::string suffix;
    friend bool operator==(const SumPart&, const SumPart&) = default;
};

struct AlgebraData {
    std::uint32_t p = 2;
    std::vector<SumPart> sum;
    std::vector<GenLine> gens;
    std::vector<RelLine> rels;
    friend bool operator==(const AlgebraData&, const AlgebraData&) = default;
};

struct MapLine {
    std::string gen;
    PolyText image;
    friend bool operator==(const MapLine&, const MapLine&) = default;
};

struct HomData {
    std::string source, target;
    std::vector<MapLine> maps;
    friend bool operator==(const HomData&, const HomData&) = default;
};

struct DerivationData {
    std::string algebra;
    std::vector<MapLine> images;
    friend bool operator==(const DerivationData&, const DerivationData&) = default;
};

struct CorrLine {
    std::string gen;
    PolyText rep;
    std::optional<PolyText> witness;
    std::string typo;
    friend bool operator==(const CorrLine&, const CorrLine&) = default;
};

struct FreeLine {
    std::string name;
    int degree = 1;
    friend bool operator==(const FreeLine&, const FreeLine&) = default;
};

struct HigherLine {
    std::string name;
    int degree = 1;
    long long order = 4;
    std::optional<PolyText> rep;
    friend bool operator==(const HigherLine&, const HigherLine&) = default;
};

struct ProductLine {
    std::vector<std::string> factors;
    int multiplier = 1;
    std::string result;
    friend bool operator==(const ProductLine&, const ProductLine&) = default;
};

struct ClaimData {
    std::uint32_t p = 2;
    std::string ring;
    std::string modp;
    std::string sq1;
    std::string modp_tower;  // mod-p dimensions from a field-coefficient tower
    std::vector<CorrLine> corr;
    std::vector<FreeLine> free;
    std::vector<HigherLine> higher;
    std::vector<ProductLine> products;
    std::vector<std::string> notes;
    friend bool operator==(const ClaimData&, const ClaimData&) = default;
};

struct GroupLine {
    bool edge = false;
    std::string name, algebra, sq1;
    std::vector<std::string> free;
    friend bool operator==(const GroupLine&, const GroupLine&) = default;
};

struct ResLine {
    int side = 1;
    std::string leaf, hom;
    friend bool operator==(const ResLine&, const ResLine&) = default;
};

struct StageLine {
    StageKind kind = StageKind::amalgam;
    std::string first, second, edge;
    std::vector<ResLine> res;
    friend bool operator==(const StageLine&, const StageLine&) = default;
};

struct FactLine {
    int stage = 0, degree = 0;
    bool onward = false;  // written "d+": every degree from d on
    std::string sq1;      // derivation id, or empty
    int higher = 0;
    friend bool operator==(const FactLine&, const FactLine&) = default;
};

struct TowerData {
    std::uint32_t p = 2;
    std::vector<GroupLine> groups;
    std::vector<StageLine> stages;
    std::vector<FactLine> facts;
    std::string claim;
    std::string out_of_scope;
    friend bool operator==(const TowerData&, const TowerData&) = default;
};

enum class EntryKind { algebra, hom, derivation, claim, tower };

inline const char* kind_name(EntryKind k)
{
    switch (k) {
    case EntryKind::algebra: return "algebra";
    case EntryKind::hom: return "hom";
    case EntryKind::derivation: return "derivation";
    case EntryKind::claim: return "claim";
    case EntryKind::tower: return "tower";
    }
    return "?";
}

struct CatalogEntry {
    EntryKind kind = EntryKind::algebra;
    std::string id;
    std::string anchor;
    std::vector<std::string> annotations;  // "# source-typo:" lines, verbatim
    std::variant<AlgebraData, HomData, DerivationData, ClaimData, TowerData> payload;
    std::string source;

    friend bool operator==(const CatalogEntry& a, const CatalogEntry& b)
    {
        return a.kind == b.kind && a.id == b.id && a.anchor == b.anchor && a.annotations == b.annotations &&
               a.payload == b.payload;
    }
};

// ---- parsing ------------------------------------------------------------------

namespace detail {

inline bool is_identifier(const std::string& s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
            return false;
    return true;
}

inline bool is_entry_id(const std::string& s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-'))
            return false;
    return true;
}

// Cursor over one line.  Columns are 1-based.
class LineScanner {
public:
    LineScanner(const std::string& text, int line, const std::string& source)
        : text_(text), line_(line), source_(source)
    {
    }

    [[noreturn]] void fail(const std::string& what, std::optional<std::size_t> at = std::nullopt) const
    {
        throw ParseError(source_, line_, static_cast<int>(at.value_or(pos_)) + 1, what);
    }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool at_end()
    {
        skip_ws();
        return pos_ >= text_.size();
    }

    std::size_t pos() const { return pos_; }

    std::string word(const char* what)
    {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (start == pos_)
            fail(std::string("syntax error: expected ") + what);
        return text_.substr(start, pos_ - start);
    }

    std::string identifier(const char* what)
    {
        skip_ws();
        const std::size_t at = pos_;
        std::string w = word(what);
        if (!is_identifier(w))
            fail(std::string("syntax error: bad ") + what + " '" + w + "'", at);
        return w;
    }

    std::string entry_id()
    {
        skip_ws();
        const std::size_t at = pos_;
        std::string w = word("entry id");
        if (!is_entry_id(w))
            fail("syntax error: bad entry id '" + w + "'", at);
        return w;
    }

    long long integer(const char* what)
    {
        skip_ws();
        const std::size_t at = pos_;
        std::string w = word(what);
        if (w.size() > 9 || w.find_first_not_of("0123456789") != std::string::npos)
            fail(std::string("syntax error: expected ") + what + ", got '" + w + "'", at);
        return std::stoll(w);
    }

    void expect(const std::string& kw)
    {
        skip_ws();
        const std::size_t at = pos_;
        if (text_.compare(pos_, kw.size(), kw) != 0 ||
            (pos_ + kw.size() < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_ + kw.size()])) &&
             std::isalnum(static_cast<unsigned char>(kw.back()))))
            fail("syntax error: expected '" + kw + "'", at);
        pos_ += kw.size();
    }

    bool accept_word(const std::string& kw)
    {
        skip_ws();
        const std::size_t save = pos_;
        if (text_.compare(pos_, kw.size(), kw) == 0 &&
            (pos_ + kw.size() == text_.size() || std::isspace(static_cast<unsigned char>(text_[pos_ + kw.size()])))) {
            pos_ += kw.size();
            return true;
        }
        pos_ = save;
        return false;
    }

    std::string quoted()
    {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != '"')
            fail("syntax error: expected quoted text");
        const std::size_t end = text_.find('"', pos_ + 1);
        if (end == std::string::npos)
            fail("syntax error: unterminated string");
        std::string out = text_.substr(pos_ + 1, end - pos_ - 1);
        pos_ = end + 1;
        return out;
    }

    // Polynomial text up to (not including) the first standalone stop word.
    PolyText poly(const std::vector<std::string>& stops = {})
    {
        skip_ws();
        const std::size_t start = pos_;
        std::size_t end = text_.size();
        for (const auto& s : stops) {
            std::size_t f = start;
            while ((f = text_.find(s, f)) != std::string::npos) {
                const bool left = f == 0 || std::isspace(static_cast<unsigned char>(text_[f - 1]));
                const bool right = f + s.size() == text_.size() ||
                                   std::isspace(static_cast<unsigned char>(text_[f + s.size()]));
                if (left && right) {
                    end = std::min(end, f);
                    break;
                }
                f += s.size();
            }
        }
        std::size_t last = end;
        while (last > start && std::isspace(static_cast<unsigned char>(text_[last - 1])))
            --last;
        if (last == start)
            fail("syntax error: expected a polynomial");
        pos_ = end;
        return PolyText{text_.substr(start, last - start), line_, static_cast<int>(start) + 1};
    }

    void finish()
    {
        if (!at_end())
            fail("syntax error: unexpected trailing text");
    }

private:
    const std::string& text_;
    int line_;
    const std::string& source_;
    std::size_t pos_ = 0;
};

inline std::string strip_comment(const std::string& line)
{
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"')
            quoted = !quoted;
        else if (line[i] == '#' && !quoted)
            return line.substr(0, i);
    }
    return line;
}

inline std::uint32_t parse_prime(LineScanner& sc)
{
    const std::size_t at = (sc.skip_ws(), sc.pos());
    const long long v = sc.integer("prime");
    if (v > 255 || !is_small_prime(static_cast<std::uint32_t>(v)))
        sc.fail("field must be a prime below 256", at);
    return static_cast<std::uint32_t>(v);
}

inline void parse_algebra_line(const std::string& kw, LineScanner& sc, AlgebraData& d, bool& have_field)
{
    if (kw == "field") {
        if (have_field)
            sc.fail("syntax error: duplicate 'field'", 0);
        d.p = parse_prime(sc);
        have_field = true;
    } else if (kw == "gen" || kw == "isolated") {
        GenLine g;
        g.isolated = kw == "isolated";
        g.name = sc.identifier("generator name");
        sc.expect("deg");
        const std::size_t at = (sc.skip_ws(), sc.pos());
        g.degree = static_cast<int>(sc.integer("degree"));
        if (g.degree < 1)
            sc.fail("generator degree must be positive", at);
        g.exterior = sc.accept_word("ext");
        d.gens.push_back(std::move(g));
    } else if (kw == "rel" || kw == "trel") {
        RelLine r;
        r.tabulated = kw == "trel";
        r.lhs = sc.poly({"="});
        if (!sc.at_end()) {
            sc.expect("=");
            r.rhs = sc.poly();
        }
        d.rels.push_back(std::move(r));
    } else if (kw == "rsum") {
        while (!sc.at_end()) {
            sc.skip_ws();
            const std::size_t at = sc.pos();
            std::string w = sc.word("summand");
            SumPart part;
            const auto colon = w.find(':');
            part.id = w.substr(0, colon);
            if (colon != std::string::npos)
                part.suffix = w.substr(colon + 1);
            if (!is_entry_id(part.id) || (colon != std::string::npos && !is_identifier(part.suffix)))
                sc.fail("syntax error: bad summand '" + w + "'", at);
            d.sum.push_back(std::move(part));
        }
        if (d.sum.empty())
            sc.fail("syntax error: rsum needs at least one summand");
    } else {
        sc.fail("syntax error: unknown keyword '" + kw + "' in algebra entry", 0);
    }
}

inline MapLine parse_map_line(LineScanner& sc)
{
    MapLine m;
    m.gen = sc.identifier("generator name");
    sc.expect("->");
    m.image = sc.poly();
    return m;
}

inline void parse_claim_line(const std::string& kw, LineScanner& sc, ClaimData& d, bool& have_prime)
{
    if (kw == "prime") {
        if (have_prime)
            sc.fail("syntax error: duplicate 'prime'", 0);
        d.p = parse_prime(sc);
        have_prime = true;
    } else if (kw == "ring") {
        d.ring = sc.entry_id();
    } else if (kw == "modp") {
        d.modp = sc.entry_id();
    } else if (kw == "sq1") {
        d.sq1 = sc.entry_id();
    } else if (kw == "modp-tower") {
        d.modp_tower = sc.entry_id();
    } else if (kw == "corr") {
        CorrLine c;
        c.gen = sc.identifier("generator name");
        sc.expect("->");
        c.rep = sc.poly({"witness", "typo"});
        if (sc.accept_word("witness"))
            c.witness = sc.poly({"typo"});
        if (sc.accept_word("typo"))
            c.typo = sc.quoted();
        d.corr.push_back(std::move(c));
    } else if (kw == "free") {
        FreeLine f;
        f.name = sc.identifier("class name");
        sc.expect("deg");
        f.degree = static_cast<int>(sc.integer("degree"));
        d.free.push_back(std::move(f));
    } else if (kw == "higher") {
        HigherLine h;
        h.name = sc.identifier("class name");
        sc.expect("deg");
        h.degree = static_cast<int>(sc.integer("degree"));
        sc.expect("order");
        h.order = sc.integer("order");
        if (sc.accept_word("rep"))
            h.rep = sc.poly();
        d.higher.push_back(std::move(h));
    } else if (kw == "product") {
        ProductLine pr;
        const std::size_t at = (sc.skip_ws(), sc.pos());
        std::string lhs = sc.word("product");
        std::size_t start = 0;
        for (;;) {
            const std::size_t star = lhs.find('*', start);
            std::string f = lhs.substr(start, star == std::string::npos ? std::string::npos : star - start);
            if (!is_identifier(f))
                sc.fail("syntax error: bad product factor '" + f + "'", at);
            pr.factors.push_back(f);
            if (star == std::string::npos)
                break;
            start = star + 1;
        }
        sc.expect("->");
        std::string w = sc.word("product value");
        if (w.find_first_not_of("0123456789") == std::string::npos) {
            pr.multiplier = std::stoi(w);
            w = sc.identifier("class name");
        } else if (!is_identifier(w)) {
            sc.fail("syntax error: bad product value '" + w + "'");
        }
        pr.result = w;
        d.products.push_back(std::move(pr));
    } else if (kw == "note") {
        d.notes.push_back(sc.quoted());
    } else {
        sc.fail("syntax error: unknown keyword '" + kw + "' in claim entry", 0);
    }
}

inline void parse_tower_line(const std::string& kw, LineScanner& sc, TowerData& d, bool& have_prime)
{
    if (kw == "prime") {
        if (have_prime)
            sc.fail("syntax error: duplicate 'prime'", 0);
        d.p = parse_prime(sc);
        have_prime = true;
    } else if (kw == "leaf" || kw == "edge") {
        GroupLine g;
        g.edge = kw == "edge";
        g.name = sc.identifier("group name");
        sc.expect("=");
        g.algebra = sc.entry_id();
        if (!sc.at_end() && !sc.accept_word("free")) {
            g.sq1 = sc.entry_id();
            if (!sc.at_end())
                sc.expect("free");
            else {
                d.groups.push_back(std::move(g));
                return;
            }
        } else if (sc.at_end()) {
            d.groups.push_back(std::move(g));
            return;
        }
        if (!g.edge)
            sc.fail("syntax error: free classes are only allowed on edges");
        while (!sc.at_end())
            g.free.push_back(sc.identifier("generator name"));
        if (g.free.empty())
            sc.fail("syntax error: 'free' needs generator names");
        d.groups.push_back(std::move(g));
    } else if (kw == "stage") {
        StageLine s;
        const std::string k = sc.word("stage kind");
        if (k == "amalgam") {
            s.first = sc.word("vertex");
            s.second = sc.word("vertex");
        } else if (k == "hnn") {
            s.kind = StageKind::hnn;
            s.first = sc.word("vertex");
        } else {
            sc.fail("syntax error: stage kind must be 'amalgam' or 'hnn'");
        }
        sc.expect("over");
        s.edge = sc.identifier("edge name");
        d.stages.push_back(std::move(s));
    } else if (kw == "res1" || kw == "res2") {
        if (d.stages.empty())
            sc.fail("syntax error: restriction before any stage", 0);
        ResLine r;
        r.side = kw == "res1" ? 1 : 2;
        r.leaf = sc.identifier("leaf name");
        r.hom = sc.entry_id();
        d.stages.back().res.push_back(std::move(r));
    } else if (kw == "fact") {
        FactLine f;
        f.stage = static_cast<int>(sc.integer("stage number"));
        {
            sc.skip_ws();
            const std::size_t at = sc.pos();
            std::string w = sc.word("degree");
            if (!w.empty() && w.back() == '+') {
                f.onward = true;
                w.pop_back();
            }
            if (w.empty() || w.size() > 4 || !std::all_of(w.begin(), w.end(), [](unsigned char c) { return std::isdigit(c); }))
                sc.fail("syntax error: bad degree '" + w + (f.onward ? "+" : "") + "'", at);
            f.degree = std::stoi(w);
        }
        const std::string k = sc.word("fact kind");
        if (k == "sq1rank")
            f.sq1 = sc.entry_id();
        else if (k == "higher")
            f.higher = static_cast<int>(sc.integer("count"));
        else
            sc.fail("syntax error: fact kind must be 'sq1rank' or 'higher'");
        d.facts.push_back(std::move(f));
    } else if (kw == "claim") {
        d.claim = sc.entry_id();
    } else if (kw == "outofscope") {
        d.out_of_scope = sc.quoted();
    } else {
        sc.fail("syntax error: unknown keyword '" + kw + "' in tower entry", 0);
    }
}

} // namespace detail

AlgebraPresentation build_presentation(const AlgebraData& d, const std::vector<const AlgebraPresentation*>& parts,
                                       const std::string& source);

inline CatalogEntry parse_entry(const std::string& text, const std::string& source = "<input>")
{
    CatalogEntry e;
    e.source = source;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool header = false, have_field = false, have_prime = false;
    int header_line = 1;
    while (std::getline(in, raw)) {
        ++line;
        if (!raw.empty() && raw.back() == '\r')
            raw.pop_back();
        {
            std::size_t f = raw.find_first_not_of(" \t");
            if (f != std::string::npos && raw.compare(f, 14, "# source-typo:") == 0) {
                e.annotations.push_back(raw.substr(f));
                continue;
            }
        }
        const std::string body = detail::strip_comment(raw);
        detail::LineScanner sc(body, line, source);
        if (sc.at_end())
            continue;
        const std::string kw = sc.word("keyword");
        if (!header) {
            if (kw == "algebra") {
                e.kind = EntryKind::algebra;
                e.payload = AlgebraData{};
            } else if (kw == "hom") {
                e.kind = EntryKind::hom;
                e.payload = HomData{};
            } else if (kw == "derivation") {
                e.kind = EntryKind::derivation;
                e.payload = DerivationData{};
            } else if (kw == "claim") {
                e.kind = EntryKind::claim;
                e.payload = ClaimData{};
            } else if (kw == "tower") {
                e.kind = EntryKind::tower;
                e.payload = TowerData{};
            } else {
                sc.fail("syntax error: expected entry kind, got '" + kw + "'", 0);
            }
            e.id = sc.entry_id();
            sc.finish();
            header = true;
            header_line = line;
            continue;
        }
        if (kw == "anchor") {
            if (!e.anchor.empty())
                sc.fail("syntax error: duplicate 'anchor'", 0);
            e.anchor = sc.quoted();
            sc.finish();
            continue;
        }
        switch (e.kind) {
        case EntryKind::algebra:
            detail::parse_algebra_line(kw, sc, std::get<AlgebraData>(e.payload), have_field);
            break;
        case EntryKind::hom: {
            auto& d = std::get<HomData>(e.payload);
            if (kw == "source")
                d.source = sc.entry_id();
            else if (kw == "target")
                d.target = sc.entry_id();
            else if (kw == "map")
                d.maps.push_back(detail::parse_map_line(sc));
            else
                sc.fail("syntax error: unknown keyword '" + kw + "' in hom entry", 0);
            break;
        }
        case EntryKind::derivation: {
            auto& d = std::get<DerivationData>(e.payload);
            if (kw == "algebra")
                d.algebra = sc.entry_id();
            else if (kw == "sq1")
                d.images.push_back(detail::parse_map_line(sc));
            else
                sc.fail("syntax error: unknown keyword '" + kw + "' in derivation entry", 0);
            break;
        }
        case EntryKind::claim:
            detail::parse_claim_line(kw, sc, std::get<ClaimData>(e.payload), have_prime);
            break;
        case EntryKind::tower:
            detail::parse_tower_line(kw, sc, std::get<TowerData>(e.payload), have_prime);
            break;
        }
        sc.finish();
    }
    if (!header)
        throw ParseError(source, std::max(line, 1), 1, "syntax error: empty entry");
    auto missing = [&](const std::string& what) {
        throw ParseError(source, header_line, 1, "missing '" + what + "' in " + kind_name(e.kind) + " " + e.id);
    };
    if (e.anchor.empty())
        missing("anchor");
    switch (e.kind) {
    case EntryKind::algebra: {
        const auto& d = std::get<AlgebraData>(e.payload);
        if (!have_field && d.sum.empty())
            missing("field");
        if (d.sum.empty())
            build_presentation(d, {}, source);  // self-contained: check names and degrees now
        break;
    }
    case EntryKind::hom: {
        const auto& d = std::get<HomData>(e.payload);
        if (d.source.empty())
            missing("source");
        if (d.target.empty())
            missing("target");
        break;
    }
    case EntryKind::derivation:
        if (std::get<DerivationData>(e.payload).algebra.empty())
            missing("algebra");
        break;
    case EntryKind::claim:
        if (!have_prime)
            missing("prime");
        if (std::get<ClaimData>(e.payload).ring.empty())
            missing("ring");
        break;
    case EntryKind::tower:
        if (!have_prime)
            missing("prime");
        break;
    }
    return e;
}

inline std::string print_entry(const CatalogEntry& e)
{
    std::ostringstream os;
    os << kind_name(e.kind) << ' ' << e.id << '\n';
    os << "anchor \"" << e.anchor << "\"\n";
    for (const auto& a : e.annotations)
        os << a << '\n';
    auto rel_text = [](const RelLine& r) { return r.lhs.text + (r.rhs ? " = " + r.rhs->text : std::string()); };
    switch (e.kind) {
    case EntryKind::algebra: {
        const auto& d = std::get<AlgebraData>(e.payload);
        os << "field " << d.p << '\n';
        if (!d.sum.empty()) {
            os << "rsum";
            for (const auto& s : d.sum)
                os << ' ' << s.id << (s.suffix.empty() ? "" : ":" + s.suffix);
            os << '\n';
        }
        for (const auto& g : d.gens)
            os << (g.isolated ? "isolated " : "gen ") << g.name << " deg " << g.degree << (g.exterior ? " ext" : "")
               << '\n';
        for (const auto& r : d.rels)
            os << (r.tabulated ? "trel " : "rel ") << rel_text(r) << '\n';
        break;
    }
    case EntryKind::hom: {
        const auto& d = std::get<HomData>(e.payload);
        os << "source " << d.source << "\ntarget " << d.target << '\n';
        for (const auto& m : d.maps)
            os << "map " << m.gen << " -> " << m.image.text << '\n';
        break;
    }
    case EntryKind::derivation: {
        const auto& d = std::get<DerivationData>(e.payload);
        os << "algebra " << d.algebra << '\n';
        for (const auto& m : d.images)
            os << "sq1 " << m.gen << " -> " << m.image.text << '\n';
        break;
    }
    case EntryKind::claim: {
        const auto& d = std::get<ClaimData>(e.payload);
        os << "prime " << d.p << "\nring " << d.ring << '\n';
        if (!d.modp.empty())
            os << "modp " << d.modp << '\n';
        if (!d.sq1.empty())
            os << "sq1 " << d.sq1 << '\n';
        if (!d.modp_tower.empty())
            os << "modp-tower " << d.modp_tower << '\n';
        for (const auto& c : d.corr) {
            os << "corr " << c.gen << " -> " << c.rep.text;
            if (c.witness)
                os << " witness " << c.witness->text;
            if (!c.typo.empty())
                os << " typo \"" << c.typo << '"';
            os << '\n';
        }
        for (const auto& f : d.free)
            os << "free " << f.name << " deg " << f.degree << '\n';
        for (const auto& h : d.higher) {
            os << "higher " << h.name << " deg " << h.degree << " order " << h.order;
            if (h.rep)
                os << " rep " << h.rep->text;
            os << '\n';
        }
        for (const auto& pr : d.products) {
            os << "product ";
            for (std::size_t i = 0; i < pr.factors.size(); ++i)
                os << (i ? "*" : "") << pr.factors[i];
            os << " -> ";
            if (pr.multiplier != 1)
                os << pr.multiplier << ' ';
            os << pr.result << '\n';
        }
        for (const auto& n : d.notes)
            os << "note \"" << n << "\"\n";
        break;
    }
    case EntryKind::tower: {
        const auto& d = std::get<TowerData>(e.payload);
        os << "prime " << d.p << '\n';
        if (!d.out_of_scope.empty())
            os << "outofscope \"" << d.out_of_scope << "\"\n";
        for (const auto& g : d.groups) {
            os << (g.edge ? "edge " : "leaf ") << g.name << " = " << g.algebra;
            if (!g.sq1.empty())
                os << ' ' << g.sq1;
            if (!g.free.empty()) {
                os << " free";
                for (const auto& f : g.free)
                    os << ' ' << f;
            }
            os << '\n';
        }
        for (const auto& s : d.stages) {
            if (s.kind == StageKind::amalgam)
                os << "stage amalgam " << s.first << ' ' << s.second << " over " << s.edge << '\n';
            else
                os << "stage hnn " << s.first << " over " << s.edge << '\n';
            for (const auto& r : s.res)
                os << "res" << r.side << ' ' << r.leaf << ' ' << r.hom << '\n';
        }
        for (const auto& f : d.facts) {
            os << "fact " << f.stage << ' ' << f.degree << (f.onward ? "+ " : " ");
            if (!f.sq1.empty())
                os << "sq1rank " << f.sq1 << '\n';
            else
                os << "higher " << f.higher << '\n';
        }
        if (!d.claim.empty())
            os << "claim " << d.claim << '\n';
        break;
    }
    }
    return os.str();
}

// ---- resolution -------------------------------------------------------------

inline Element parse_poly(const Algebra& ring, const PolyText& t, const std::string& source)
{
    return PolyParser(ring, t, source).parse();
}

inline AlgebraPresentation build_presentation(const AlgebraData& d, const std::vector<const AlgebraPresentation*>& parts,
                                              const std::string& source)
{
    AlgebraPresentation pres;
    if (!parts.empty()) {
        std::vector<std::string> suffixes;
        for (const auto& s : d.sum)
            suffixes.push_back(s.suffix);
        pres = reduced_direct_sum(parts, suffixes);
        if (pres.p != d.p)
            throw Error(source + ": field " + std::to_string(d.p) + " does not match the summands");
    }
    pres.p = d.p;
    for (const auto& g : d.gens) {
        if (pres.index_of(g.name))
            throw Error(source + ": duplicate generator '" + g.name + "'");
        pres.generators.push_back({g.name, g.degree, g.exterior, g.isolated});
    }
    const std::size_t n = pres.generators.size();
    for (auto& rel : pres.relations) {
        Element e;
        for (const auto& [m, c] : rel.poly.terms) {
            Monomial wide = m;
            wide.resize(n, 0);
            e.terms.emplace(std::move(wide), c);
        }
        rel.poly = std::move(e);
    }
    AlgebraPresentation free_pres{pres.p, pres.generators, {}};
    const Algebra free_ring(free_pres);
    for (const auto& r : d.rels) {
        Element e = parse_poly(free_ring, r.lhs, source);
        if (r.rhs)
            e = subtract(e, parse_poly(free_ring, *r.rhs, source), pres.p);
        if (!e.is_zero() && !homogeneous_degree(pres, e))
            throw ParseError(source, r.lhs.line, r.lhs.col, "inhomogeneous relation: " + format_element(pres, e));
        Relation rel;
        rel.poly = std::move(e);
        rel.tabulated = r.tabulated;
        rel.label = r.lhs.text + (r.rhs ? " = " + r.rhs->text : std::string());
        pres.relations.push_back(std::move(rel));
    }
    return pres;
}

class Catalog {
public:
    static std::filesystem::path default_directory()
    {
        if (const char* env = std::getenv("CATALOG_DIR"); env && *env)
            return env;
        return COHRING_DEFAULT_CATALOG_DIR;
    }

    // Parses every *.coh file of a directory (no validation).
    static Catalog from_directory(const std::filesystem::path& dir)
    {
        if (!std::filesystem::is_directory(dir))
            throw Error("catalog directory not found: " + dir.string());
        std::vector<std::filesystem::path> files;
        for (const auto& f : std::filesystem::directory_iterator(dir))
            if (f.is_regular_file() && f.path().extension() == ".coh")
                files.push_back(f.path());
        std::sort(files.begin(), files.end());
        Catalog c;
        for (const auto& f : files)
            c.add(parse_entry(read_file(f), f.filename().string()));
        return c;
    }

    // Parses and validates; Sq^1 squares are checked through `dd_degree`.
    static Catalog load(const std::filesystem::path& dir, int dd_degree = 12)
    {
        Catalog c = from_directory(dir);
        c.validate(dd_degree);
        return c;
    }

    static Catalog load_default(int dd_degree = 12) { return load(default_directory(), dd_degree); }

    static std::string read_file(const std::filesystem::path& f)
    {
        std::ifstream in(f, std::ios::binary);
        if (!in)
            throw Error("cannot read " + f.string());
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    }

    void add(CatalogEntry e)
    {
        if (entries_.count(e.id))
            throw Error("duplicate catalog id '" + e.id + "' in " + e.source);
        const std::string id = e.id;
        entries_.emplace(id, std::move(e));
    }

    // Resolves every entry in dependency order.  The first failure is
    // reported with the id of the entry that failed.
    void validate(int dd_degree = 12)
    {
        for (EntryKind k : {EntryKind::algebra, EntryKind::derivation, EntryKind::hom, EntryKind::claim,
                            EntryKind::tower})
            for (const auto& id : ids(k)) {
                try {
                    switch (k) {
                    case EntryKind::algebra: algebra(id); break;
                    case EntryKind::derivation: {
                        auto d = derivation(id);
                        auto bad = d->square_nonzero_degrees(dd_degree);
                        if (!bad.empty())
                            throw Error("ill-defined derivation: Sq1 o Sq1 is nonzero on degree " +
                                        std::to_string(bad.front()));
                        break;
                    }
                    case EntryKind::hom: hom(id); break;
                    case EntryKind::claim: claim(id); break;
                    case EntryKind::tower: tower(id); break;
                    }
                } catch (const ParseError&) {
                    throw;
                } catch (const Error& e) {
                    throw Error("catalog entry '" + id + "': " + e.what());
                }
            }
    }

    // Swaps in a new version of an entry; resolved objects are rebuilt lazily.
    void replace(CatalogEntry e)
    {
        const std::string id = e.id;
        entries_.erase(id);
        entries_.emplace(id, std::move(e));
        algebras_.clear();
        derivations_.clear();
        homs_.clear();
        claims_.clear();
        towers_.clear();
    }

    bool contains(const std::string& id) const { return entries_.count(id) != 0; }

    // Ids an entry refers to directly.
    static std::set<std::string> references(const CatalogEntry& e)
    {
        std::set<std::string> out;
        auto put = [&](const std::string& id) {
            if (!id.empty())
                out.insert(id);
        };
        std::visit(
            [&](const auto& d) {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, AlgebraData>) {
                    for (const auto& s : d.sum)
                        put(s.id);
                } else if constexpr (std::is_same_v<T, HomData>) {
                    put(d.source);
                    put(d.target);
                } else if constexpr (std::is_same_v<T, DerivationData>) {
                    put(d.algebra);
                } else if constexpr (std::is_same_v<T, ClaimData>) {
                    for (const auto* id : {&d.ring, &d.modp, &d.sq1, &d.modp_tower})
                        put(*id);
                } else {
                    for (const auto& g : d.groups) {
                        put(g.algebra);
                        put(g.sq1);
                    }
                    for (const auto& st : d.stages)
                        for (const auto& r : st.res)
                            put(r.hom);
                    for (const auto& f : d.facts)
                        put(f.sq1);
                    put(d.claim);
                }
            },
            e.payload);
        return out;
    }

    // Entries that depend on `id`, directly or through other entries.
    std::set<std::string> dependents(const std::string& id) const
    {
        std::set<std::string> out{id};
        for (bool grew = true; grew;) {
            grew = false;
            for (const auto& [other, e] : entries_) {
                if (out.count(other))
                    continue;
                for (const auto& r : references(e))
                    if (out.count(r)) {
                        out.insert(other);
                        grew = true;
                        break;
                    }
            }
        }
        out.erase(id);
        return out;
    }


    const CatalogEntry& entry(const std::string& id) const
    {
        auto it = entries_.find(id);
        if (it == entries_.end())
            throw Error("unknown catalog id '" + id + "'");
        return it->second;
    }

    std::vector<std::string> ids() const
    {
        std::vector<std::string> out;
        for (const auto& [id, e] : entries_)
            out.push_back(id);
        return out;
    }

    std::vector<std::string> ids(EntryKind k) const
    {
        std::vector<std::string> out;
        for (const auto& [id, e] : entries_)
            if (e.kind == k)
                out.push_back(id);
        return out;
    }

    std::size_t size() const { return entries_.size(); }

    // Mod-p dimensions for a claim whose mod-p ring is not in the catalog:
    // taken from a field-coefficient run of the named tower.
    std::optional<std::vector<std::size_t>> claim_modp_dims(const std::string& id, int up_to) const
    {
        const CatalogEntry& e = require(id, EntryKind::claim, "");
        const auto& d = std::get<ClaimData>(e.payload);
        if (d.modp_tower.empty())
            return std::nullopt;
        return cohring::tower(tower(d.modp_tower), Coefficients::field, up_to).dims();
    }

    AlgebraPtr algebra(const std::string& id) const
    {
        if (auto it = algebras_.find(id); it != algebras_.end())
            return it->second;
        const CatalogEntry& e = require(id, EntryKind::algebra, "");
        if (!resolving_.insert(id).second)
            throw Error("cyclic reference through '" + id + "'");
        const auto& d = std::get<AlgebraData>(e.payload);
        std::vector<AlgebraPtr> keep;
        std::vector<const AlgebraPresentation*> parts;
        for (const auto& s : d.sum) {
            require(s.id, EntryKind::algebra, id);
            keep.push_back(algebra(s.id));
            parts.push_back(&keep.back()->presentation());
        }
        auto a = std::make_shared<const Algebra>(build_presentation(d, parts, e.source));
        resolving_.erase(id);
        algebras_.emplace(id, a);
        return a;
    }

    std::shared_ptr<const Derivation> derivation(const std::string& id) const
    {
        if (auto it = derivations_.find(id); it != derivations_.end())
            return it->second;
        const CatalogEntry& e = require(id, EntryKind::derivation, "");
        const auto& d = std::get<DerivationData>(e.payload);
        require(d.algebra, EntryKind::algebra, id);
        AlgebraPtr a = algebra(d.algebra);
        auto images = generator_images(*a, d.images, e.source);
        auto der = std::make_shared<const Derivation>(a, std::move(images), id);
        MapReport rep = der->check();
        if (!rep.ok()) {
            const int line = d.images.empty() ? 1 : d.images.front().image.line;
            throw ParseError(e.source, line, 1, "ill-defined derivation '" + id + "': " + rep.violations.front());
        }
        derivations_.emplace(id, der);
        return der;
    }

    std::shared_ptr<const GradedHom> hom(const std::string& id) const
    {
        if (auto it = homs_.find(id); it != homs_.end())
            return it->second;
        const CatalogEntry& e = require(id, EntryKind::hom, "");
        const auto& d = std::get<HomData>(e.payload);
        require(d.source, EntryKind::algebra, id);
        require(d.target, EntryKind::algebra, id);
        AlgebraPtr src = algebra(d.source), tgt = algebra(d.target);
        if (src->prime() != tgt->prime())
            throw Error("hom '" + id + "' joins algebras over different primes");
        std::vector<Element> images(src->num_generators());
        for (const auto& m : d.maps) {
            auto idx = src->presentation().index_of(m.gen);
            if (!idx)
                throw ParseError(e.source, m.image.line, 1, "unknown generator '" + m.gen + "'");
            images[*idx] = parse_poly(*tgt, m.image, e.source);
        }
        auto h = std::make_shared<const GradedHom>(src, tgt, std::move(images), id);
        MapReport rep = h->check();
        if (!rep.ok())
            throw Error("hom '" + id + "': " + rep.violations.front());
        homs_.emplace(id, h);
        return h;
    }

    const IntegralRingClaim& claim(const std::string& id) const
    {
        if (auto it = claims_.find(id); it != claims_.end())
            return *it->second;
        const CatalogEntry& e = require(id, EntryKind::claim, "");
        const auto& d = std::get<ClaimData>(e.payload);
        auto c = std::make_shared<IntegralRingClaim>();
        c->id = id;
        c->p = d.p;
        require(d.ring, EntryKind::algebra, id);
        c->ring = algebra(d.ring);
        if (c->ring->prime() != d.p)
            throw Error("claim '" + id + "': ring " + d.ring + " is not over F_" + std::to_string(d.p));
        if (!d.modp.empty()) {
            require(d.modp, EntryKind::algebra, id);
            c->modp = algebra(d.modp);
        }
        if (!d.sq1.empty()) {
            require(d.sq1, EntryKind::derivation, id);
            c->sq1 = derivation(d.sq1);
            if (!c->modp || c->sq1->algebra_ptr().get() != c->modp.get())
                throw Error("claim '" + id + "': Sq1 " + d.sq1 + " is not defined on " + d.modp);
        }
        if (!d.modp_tower.empty())
            require(d.modp_tower, EntryKind::tower, id);
        std::set<std::string> names;
        for (const auto& g : c->ring->presentation().generators)
            names.insert(g.name);
        for (const auto& cl : d.corr) {
            if (!c->ring->presentation().index_of(cl.gen))
                throw ParseError(e.source, cl.rep.line, 1, "unknown generator '" + cl.gen + "'");
            if (!c->modp)
                throw ParseError(e.source, cl.rep.line, 1, "correspondence without a mod-p ring");
            Correspondence corr{cl.gen, parse_poly(*c->modp, cl.rep, e.source), std::nullopt, cl.typo};
            if (cl.witness)
                corr.witness = parse_poly(*c->modp, *cl.witness, e.source);
            c->correspondences.push_back(std::move(corr));
        }
        for (const auto& f : d.free) {
            c->free.push_back({f.name, f.degree});
            names.insert(f.name);
        }
        for (const auto& h : d.higher) {
            int exponent = 0;
            for (long long q = h.order; q > 1; q /= d.p) {
                if (q % d.p)
                    throw Error("claim '" + id + "': order " + std::to_string(h.order) + " is not a power of " +
                                std::to_string(d.p));
                ++exponent;
            }
            HigherClass hc{h.name, h.degree, exponent, std::nullopt};
            if (h.rep) {
                if (!c->modp)
                    throw ParseError(e.source, h.rep->line, 1, "representative without a mod-p ring");
                hc.representative = parse_poly(*c->modp, *h.rep, e.source);
            }
            c->higher.push_back(std::move(hc));
            names.insert(h.name);
        }
        for (const auto& pr : d.products) {
            for (const auto& f : pr.factors)
                if (!names.count(f))
                    throw Error("claim '" + id + "': product factor '" + f + "' is not a class of the claim");
            if (!names.count(pr.result))
                throw Error("claim '" + id + "': product value '" + pr.result + "' is not a class of the claim");
            c->products.push_back({pr.factors, pr.multiplier, pr.result});
        }
        c->notes = d.notes;
        claims_.emplace(id, c);
        return *c;
    }

    const TowerSpec& tower(const std::string& id) const
    {
        if (auto it = towers_.find(id); it != towers_.end())
            return *it->second;
        const CatalogEntry& e = require(id, EntryKind::tower, "");
        const auto& d = std::get<TowerData>(e.payload);
        auto t = std::make_shared<TowerSpec>();
        t->id = id;
        t->p = d.p;
        t->out_of_scope = d.out_of_scope;
        auto fail = [&](const std::string& what) { throw Error("tower '" + id + "': " + what); };
        for (const auto& g : d.groups) {
            require(g.algebra, EntryKind::algebra, id);
            TowerGroup tg{g.name, algebra(g.algebra), nullptr, g.free};
            if (tg.algebra->prime() != d.p)
                fail(g.name + " is not over F_" + std::to_string(d.p));
            if (!g.sq1.empty()) {
                require(g.sq1, EntryKind::derivation, id);
                tg.sq1 = derivation(g.sq1);
                if (tg.sq1->algebra_ptr().get() != tg.algebra.get())
                    fail("Sq1 " + g.sq1 + " is not defined on " + g.algebra);
            }
            for (const auto& f : g.free)
                if (!tg.algebra->presentation().index_of(f))
                    fail("free class '" + f + "' is not a generator of " + g.algebra);
            auto& list = g.edge ? t->edges : t->leaves;
            for (const auto& other : t->leaves)
                if (other.name == g.name)
                    fail("duplicate group name '" + g.name + "'");
            for (const auto& other : t->edges)
                if (other.name == g.name)
                    fail("duplicate group name '" + g.name + "'");
            list.push_back(std::move(tg));
        }
        auto is_leaf = [&](const std::string& n) {
            for (const auto& l : t->leaves)
                if (l.name == n)
                    return true;
            return false;
        };
        for (std::size_t si = 0; si < d.stages.size(); ++si) {
            const auto& s = d.stages[si];
            StageSpec st{s.kind, s.first, s.second, s.edge, {}, {}};
            for (const auto& v : {s.first, s.second}) {
                if (v.empty())
                    continue;
                if (v[0] == '@') {
                    const int k = std::atoi(v.c_str() + 1);
                    if (k < 1 || static_cast<std::size_t>(k) > si)
                        fail("stage " + std::to_string(si + 1) + " uses " + v + " before it exists");
                } else if (!is_leaf(v)) {
                    fail("unknown vertex '" + v + "'");
                }
            }
            bool edge_ok = false;
            for (const auto& ed : t->edges)
                edge_ok = edge_ok || ed.name == s.edge;
            if (!edge_ok)
                fail("unknown edge '" + s.edge + "'");
            for (const auto& r : s.res) {
                require(r.hom, EntryKind::hom, id);
                if (!is_leaf(r.leaf))
                    fail("restriction from unknown leaf '" + r.leaf + "'");
                (r.side == 1 ? st.res1 : st.res2).push_back({r.leaf, hom(r.hom)});
            }
            t->stages.push_back(std::move(st));
        }
        for (const auto& f : d.facts) {
            ExtensionFact ef;
            ef.stage = f.stage;
            ef.degree = f.degree;
            ef.onward = f.onward;
            if (!f.sq1.empty()) {
                require(f.sq1, EntryKind::derivation, id);
                ef.sq1 = derivation(f.sq1);
                ef.source = "Sq1 of " + std::get<DerivationData>(entry(f.sq1).payload).algebra;
            } else {
                ef.higher = f.higher;
                ef.source = "declared Bockstein count";
            }
            t->facts.push_back(std::move(ef));
        }
        if (!d.claim.empty()) {
            require(d.claim, EntryKind::claim, id);
            t->claim = d.claim;
        }
        towers_.emplace(id, t);
        return *t;
    }

private:
    const CatalogEntry& require(const std::string& id, EntryKind kind, const std::string& from) const
    {
        auto it = entries_.find(id);
        if (it == entries_.end()) {
            if (from.empty())
                throw Error("unknown catalog id '" + id + "'");
            throw Error("entry '" + from + "' references missing entry '" + id + "'");
        }
        if (it->second.kind != kind)
            throw Error("entry '" + id + "' is a " + kind_name(it->second.kind) + ", expected " + kind_name(kind));
        return it->second;
    }

    static std::vector<Element> generator_images(const Algebra& a, const std::vector<MapLine>& lines,
                                                  const std::string& source)
    {
        std::vector<Element> images(a.num_generators());
        for (const auto& m : lines) {
            auto idx = a.presentation().index_of(m.gen);
            if (!idx)
                throw ParseError(source, m.image.line, 1, "unknown generator '" + m.gen + "'");
            images[*idx] = parse_poly(a, m.image, source);
        }
        return images;
    }

    std::map<std::string, CatalogEntry> entries_;
    mutable std::map<std::string, AlgebraPtr> algebras_;
    mutable std::map<std::string, std::shared_ptr<const Derivation>> derivations_;
    mutable std::map<std::string, std::shared_ptr<const GradedHom>> homs_;
    mutable std::map<std::string, std::shared_ptr<IntegralRingClaim>> claims_;
    mutable std::map<std::string, std::shared_ptr<TowerSpec>> towers_;
    mutable std::set<std::string> resolving_;
};

// Compares the assembled tower with the claim it names: integral groups
// degreewise, and field dimensions against the claimed mod-p ring.
inline std::vector<Check> tower_claim_checks(const Catalog& cat, const std::string& tower_id, int up_to)
{
    const TowerSpec& spec = cat.tower(tower_id);
    std::vector<Check> out;
    if (spec.claim.empty() || !spec.out_of_scope.empty())
        return out;
    const IntegralRingClaim& c = cat.claim(spec.claim);

    const TowerResult integral = tower(spec, Coefficients::integral, up_to);
    const GradedAbelianGroup expected = claim_group(c, up_to);
    Check groups{tower_id + "/groups", true, "H^n agrees with " + spec.claim + " for n <= " + std::to_string(up_to)};
    const auto& got = integral.final_stage().degrees;
    for (int n = 0; n <= up_to; ++n) {
        const auto& g = got.at(static_cast<std::size_t>(n));
        if (!g.resolved) {
            groups = {groups.id, false, "degree " + std::to_string(n) + " is unresolved"};
            break;
        }
        if (!(g.group == expected.at(n))) {
            groups = {groups.id, false,
                      "degree " + std::to_string(n) + ": tower " + g.group.to_string() + ", claim " +
                          expected.at(n).to_string()};
            break;
        }
    }
    out.push_back(std::move(groups));

    if (c.modp) {
        const auto field = tower(spec, Coefficients::field, up_to).dims();
        const auto want = c.modp->poincare_series(up_to);
        Check dims{tower_id + "/field", field == want,
                   "dim H^n(F" + std::to_string(spec.p) + ") tower " + join_dims(field) + ", ring " + join_dims(want)};
        out.push_back(std::move(dims));
    }
    return out;
}

// Every check that applies to one entry.  Resolution errors become a
// single failing check instead of propagating.
inline std::vector<Check> verify_entry(const Catalog& cat, const std::string& id, int up_to)
{
    std::vector<Check> out;
    const CatalogEntry& e = cat.entry(id);
    try {
        switch (e.kind) {
        case EntryKind::algebra: {
            auto a = cat.algebra(id);
            out.push_back({id + "/basis", true, "dims " + join_dims(a->poincare_series(up_to))});
            break;
        }
        case EntryKind::derivation: {
            auto d = cat.derivation(id);
            const std::string sq = bockstein_symbol(d->algebra().prime());
            auto rep = d->check();
            out.push_back({id + "/well-defined", rep.ok(),
                           rep.ok() ? "relations map into the relation ideal" : rep.violations.front()});
            auto bad = d->square_nonzero_degrees(up_to);
            out.push_back({id + "/square", bad.empty(),
                           bad.empty() ? sq + " o " + sq + " = 0 for n <= " + std::to_string(up_to)
                                       : sq + " o " + sq + " is nonzero on degree " + std::to_string(bad.front())});
            break;
        }
        case EntryKind::hom: {
            auto h = cat.hom(id);
            auto rep = h->check();
            out.push_back({id + "/hom", rep.ok(), rep.ok() ? "degrees and relations preserved" : rep.violations.front()});
            break;
        }
        case EntryKind::claim: {
            const int n = std::min(up_to, 20);
            auto r = verify_claim(cat.claim(id), n, cat.claim_modp_dims(id, n));
            out.insert(out.end(), r.checks.begin(), r.checks.end());
            break;
        }
        case EntryKind::tower: {
            const TowerSpec& spec = cat.tower(id);
            if (!spec.out_of_scope.empty()) {
                out.push_back({id + "/scope", true, "out of scope: " + spec.out_of_scope});
                break;
            }
            auto c = tower_claim_checks(cat, id, std::min(up_to, 20));
            out.insert(out.end(), c.begin(), c.end());
            break;
        }
        }
    } catch (const Error& err) {
        out.push_back({id, false, err.what()});
    }
    return out;
}

} // namespace cohring

