#pragma once

#include "lscert/certify.hpp"

#include <map>
#include <string>
#include <vector>

namespace lscert {

// Character expressions: '*'-joined generator powers ("chi", "chi^2",
// "omega_pi^-1*chi"), "1" for the trivial character.
std::string render_char(const CharacterExpr& c);
CharacterExpr parse_char(const std::string& text);

// "lhs=rhs" with character texts on both sides, returned as lhs*rhs^-1
// (the expression declared trivial).  A bare text is read as "<text>=1".
CharacterExpr parse_relation(const std::string& text);

// Atoms: '*'-joined units with an optional "@<char>" twist suffix.  A unit
// is "A<j>(<slot>)", an opaque name, a declared slot name (level 1), a bare
// character expression, or "1", optionally prefixed with '~' for the dual.
std::string render_atom(const Atom& a);
Atom parse_atom(const std::string& text, const CaseAssumptions& cas);

// Factors: whitespace-separated chunks with "x" between them ('*' inside a
// chunk also separates parts); "zeta" is the empty factor.
std::string render_factor(const FactorSymbol& f);
FactorSymbol parse_factor(const std::string& text, const CaseAssumptions& cas);

// Lexical scan of a factor text, for building a default case around a
// target: GL(2) slots with the maximal level seen, bare opaque names, and
// twist-tail character generators (omega_* names excluded).
struct TargetScan {
    std::vector<std::string> slot_order;  // first-appearance order
    std::map<std::string, int> slot_levels;
    std::vector<std::string> opaques;
    std::vector<std::string> generators;
};
TargetScan scan_target(const std::string& text);

// Certificates as schema-version-1 JSON documents.  Serialization writes
// only declared case content; synthesized generators, relations and
// decomposition pieces are rebuilt by finalize() on parse.
std::string certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const std::string& json_text);

// Report as a JSON object; `fixture` labels the row when nonempty.
std::string report_to_json(const Report& r, const std::string& fixture = "");

}  // namespace lscert
