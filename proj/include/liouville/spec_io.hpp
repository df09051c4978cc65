#pragma once

// Readers for the YAML input files: Lie algebra presentations, vector fields,
// two-forms, systems and chains. All indices in files are 1-based. Rational
// entries may be integers, decimals or "p/q" strings. Malformed input raises
// ParseError with the offending line and column.

#include "liouville/cohomology.hpp"
#include "liouville/fields.hpp"
#include "liouville/flow.hpp"

#include <optional>
#include <string>
#include <vector>

namespace liouville {

struct ChainSpec {
    int n = 1;
    int l = 1;
    Chain chain;
};

struct SystemSpec {
    PolyVectorField field;
    std::optional<State> x0;
    std::vector<ChainSpec> chains;
};

LieAlgebraPresentation load_algebra(const std::string& path);
PolyVectorField load_field(const std::string& path);
TwoFormData load_two_form(const std::string& path);
SystemSpec load_system(const std::string& path);
/// Chain files carry their own n.
ChainSpec load_chain(const std::string& path);

/// Parsers over in-memory text; `name` appears in diagnostics.
LieAlgebraPresentation parse_algebra(const std::string& text, const std::string& name);
PolyVectorField parse_field(const std::string& text, const std::string& name);
TwoFormData parse_two_form(const std::string& text, const std::string& name);
SystemSpec parse_system(const std::string& text, const std::string& name);
ChainSpec parse_chain(const std::string& text, const std::string& name);

} // namespace liouville
