#pragma once

#include "lscert/lfactors.hpp"
#include "lscert/poles.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lscert {

enum class Verdict { Eliminated, AbelianFactorOnly, Fail, Unsupported };
const char* verdict_name(Verdict v);

// One application of a product factorization at a slot of certain
// polyhedral type: every copy of factor splits into the pieces of the
// decomposition at that slot, multiplying the expansion classwise.
struct RewriteStep {
    FactorSymbol factor;
    std::string slot;
};

// A cited zero-transfer: a real zero of the target forces a zero of the
// named class, so its copies count toward the zero multiplicity.
struct VanishingBoost {
    FactorSymbol factor;
    std::string citation;
};

// A cited escape factorization: elimination is not claimed, but any
// surviving real zero lies on the named rank-1 self-dual factor.
struct AbelianEscape {
    FactorSymbol factor;
    std::string citation;
};

struct Expected {
    long long l1 = 0;
    long long l2 = 0;
    long long k_hi = 0;

    auto operator<=>(const Expected&) const = default;
};

// A checkable elimination certificate: declared case assumptions, one
// auxiliary construction (coefficient vector or explicit isobaric sum),
// the target class, and optional rewrites, boosts and escapes.
struct Certificate {
    std::string name;
    CaseAssumptions assumptions;

    // Exactly one construction.  The coefficient vector builds the
    // standard two-slot auxiliary product over slot1/slot2 with twist
    // character chi on the r = 1 terms.
    std::optional<CoefficientVector> coefficients;
    CharacterExpr chi;
    std::string slot1 = "pi";
    std::string slot2 = "pi2";
    std::optional<VirtualRep> isobaric;

    FactorSymbol target;
    std::vector<RewriteStep> rewrites;
    std::vector<VanishingBoost> boosts;
    std::vector<AbelianEscape> escapes;
    std::optional<Expected> expected;

    // Numeric-oracle overrides: slot name -> eigenform fixture id.
    std::map<std::string, std::string> form_overrides;

    // Optional expansion snapshot, cross-validated by the numeric oracle
    // against |trace Pi_v|^2; check() never reads it.
    std::optional<FactorMultiset> declared_classes;
};

struct LedgerRow {
    FactorSymbol factor;
    long long exponent = 0;
    PoleInterval pole;
    bool bounded = true;
    std::string rule;
};

struct Report {
    Verdict verdict = Verdict::Fail;
    long long l1 = 0;
    long long l2 = 0;
    PoleInterval k;
    bool k_bounded = true;
    FactorSymbol target;
    FactorSymbol dual_target;
    long long degree = 0;
    FactorMultiset classes;  // after rewrites
    std::vector<LedgerRow> ledger;
    std::vector<FactorSymbol> abelian;
    std::vector<std::string> notes;
};

// Verify one certificate: expand the construction, apply rewrites, count
// target and dual-target copies, bound the total pole order, and compare.
// Eliminated exactly when l1 + l2 exceeds the upper pole bound.  Throws
// MalformedCertificate on an inconsistent certificate.
Report check(const Certificate& cert, const RuleTable& table = RuleTable::builtin());

// Human-readable report: verdict line, counts, and the class ledger.
std::string explain(const Report& r);

}  // namespace lscert
