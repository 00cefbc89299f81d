#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lscert/lfactors.hpp"
#include "lscert/model.hpp"

namespace lscert {

// Closed interval of possible orders of the pole at s = 1.  Always
// 0 <= lo <= hi.
struct PoleInterval {
    long long lo = 0;
    long long hi = 0;

    PoleInterval() = default;
    PoleInterval(long long l, long long h);

    PoleInterval& operator+=(const PoleInterval& o);
    friend PoleInterval operator+(PoleInterval a, const PoleInterval& b) { return a += b; }
    PoleInterval scaled(long long k) const;

    static PoleInterval hull(const PoleInterval& a, const PoleInterval& b);
    static PoleInterval intersect(const PoleInterval& a, const PoleInterval& b);

    auto operator<=>(const PoleInterval&) const = default;
};

// One row of the counting table for L(s, A^m x (A^n (x) chi)) on a pair of
// inequivalent non-dihedral slots: when (m, n) and the two concrete types
// match, the order lies in [lo, hi]; under the same hypotheses every
// unmatched combination is entire.
struct RuleRow {
    int m = 0;
    int n = 0;
    Gl2Mask left = 0;
    Gl2Mask right = 0;
    PoleInterval interval;
};

class RuleTable {
  public:
    static const RuleTable& builtin();
    static RuleTable parse(const std::string& json_text);
    static RuleTable load(const std::string& path);

    // Interval for a pure power pair under concrete non-dihedral types.
    // Rows match up to swapping the two sides; the default is entire.
    PoleInterval lookup(int m, Gl2Type tl, int n, Gl2Type tr) const;

    const std::vector<RuleRow>& rows() const { return rows_; }

  private:
    std::vector<RuleRow> rows_;
};

Gl2Mask mask_from_letters(const std::string& letters);
std::string mask_letters(Gl2Mask m);

enum class CuspKind { Cuspidal, Isobaric, Unknown };

struct Cuspidality {
    CuspKind kind = CuspKind::Unknown;
    // Set when kind == Isobaric: the generic decomposition, valid for every
    // realization of the case.
    std::optional<VirtualRep> decomposition;
};

// Resolve whether the automorphic object named by the atom is cuspidal.
// Single parts follow the symmetric-power classification on the effective
// type mask; two-part products use the known cuspidality criteria for
// GL(2) x GL(2) and GL(2) x GL(3) functorial products under the case's
// inequivalence declarations.
Cuspidality cuspidality(const Atom& a, const CaseAssumptions& cas,
                        const Assignment* asg = nullptr);

// Interval of possible orders of the pole of L(s, factor) at s = 1: the hull
// over concrete type assignments of the slots appearing in the factor.  Per
// assignment, a matching counting-table row takes precedence (intersected
// with the two-sided comparison when both sides are cuspidal);  otherwise
// cuspidal pairings are decided by comparison of the two sides, and
// non-cuspidal parts are refined through their generic isobaric
// decompositions and summed.  Throws UnsupportedCase when no rule applies.
PoleInterval pole_interval(const FactorSymbol& f, const CaseAssumptions& cas,
                           const RuleTable& table = RuleTable::builtin());

// Exponent-weighted componentwise sum over the multiset.
PoleInterval total_pole_interval(const FactorMultiset& d, const CaseAssumptions& cas,
                                 const RuleTable& table = RuleTable::builtin());

}  // namespace lscert
