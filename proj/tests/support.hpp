#pragma once

#include "cohring/catalog.hpp"

#include <string>

namespace testing_support {

// The shipped catalog, parsed once; entries resolve lazily.
inline const cohring::Catalog& shipped()
{
    static const cohring::Catalog cat = cohring::Catalog::from_directory(COHRING_DEFAULT_CATALOG_DIR);
    return cat;
}

// Builds a catalog from literal entries; a placeholder anchor is added when missing.
inline cohring::Catalog catalog_of(std::initializer_list<std::string> texts)
{
    cohring::Catalog c;
    int k = 0;
    for (std::string t : texts) {
        if (t.find("\nanchor ") == std::string::npos)
            t.insert(t.find('\n') + 1, "anchor \"test\"\n");
        c.add(cohring::parse_entry(t, "entry" + std::to_string(++k)));
    }
    return c;
}

inline cohring::Element parse(const cohring::Algebra& a, const std::string& text)
{
    return cohring::parse_poly(a, cohring::PolyText{text, 1, 1}, "test");
}

} // namespace testing_support
