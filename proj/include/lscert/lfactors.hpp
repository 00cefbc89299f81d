#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lscert/model.hpp"
#include "lscert/repring.hpp"

namespace lscert {

// One Rankin-Selberg L-factor class L(s, left x right).  Canonical form: the
// constituent parts flattened into a sorted list of twist-free single-part
// atoms, with the accumulated twist reduced modulo the relation lattice and
// the certain self-twists of the parts.  left()/right() resplit the parts
// deterministically, carrying the twist on the right atom.  zeta_F is the
// empty factor (1, 1).
class FactorSymbol {
  public:
    FactorSymbol() = default;

    // sides: the atoms whose tensor product the factor carries.
    static FactorSymbol make(const std::vector<Atom>& sides, const CaseAssumptions& cas,
                             const Assignment* asg = nullptr);

    const std::vector<Atom>& parts() const { return parts_; }
    const CharacterExpr& twist() const { return twist_; }

    Atom left() const;
    Atom right() const;

    bool is_zeta() const { return parts_.empty() && twist_.trivial(); }
    long long degree(const CaseAssumptions& cas, const Assignment* asg = nullptr) const;
    FactorSymbol dual(const CaseAssumptions& cas, const Assignment* asg = nullptr) const;

    auto operator<=>(const FactorSymbol&) const = default;

  private:
    std::vector<Atom> parts_;  // sorted, each single-part with trivial twist
    CharacterExpr twist_;
};

struct FactorMultiset {
    std::map<FactorSymbol, long long> factors;

    void add(const FactorSymbol& f, long long mult);
    long long exponent(const FactorSymbol& f) const;
    long long total_degree(const CaseAssumptions& cas, const Assignment* asg = nullptr) const;
    auto operator<=>(const FactorMultiset&) const = default;
};

FactorMultiset dual(const FactorMultiset& d, const CaseAssumptions& cas,
                    const Assignment* asg = nullptr);
long long total_degree(const FactorMultiset& d, const CaseAssumptions& cas,
                       const Assignment* asg = nullptr);

// One ordered pairing (term i against the dual of term j) in the expansion of
// L(s, Pi x dual(Pi)).  local holds that pairing's factor classes with inner
// decomposition multiplicities but without the m_i * m_j weight.
struct PairingTrace {
    std::size_t i = 0;
    std::size_t j = 0;
    long long mult = 0;
    FactorMultiset local;
};

struct PairingExpansion {
    VirtualRep pi;
    FactorMultiset classes;
    std::vector<PairingTrace> pairings;
};

// Expand L(s, Pi x dual(Pi)) over ordered term pairs.  A pairing of two
// single-part terms is kept as a pair factor; when either side has several
// parts, or decompose_all is set, shared slots are decomposed through the
// tensor ring first.
PairingExpansion expand_pairing_traced(const VirtualRep& pi, const CaseAssumptions& cas,
                                       bool decompose_all = false,
                                       const Assignment* asg = nullptr);
FactorMultiset expand_pairing(const VirtualRep& pi, const CaseAssumptions& cas,
                              bool decompose_all = false);

// Coefficient vector of a twisted double product: c[(j, k, r)] copies of
// A^j(slot1) (x) A^k(slot2) (x) chi^r, with j, k in {0, 1, 2} and r in {0, 1}.
struct CoefficientVector {
    std::map<std::tuple<int, int, int>, long long> c;

    auto operator<=>(const CoefficientVector&) const = default;
};

// Build Pi from the coefficient vector and return it with the fully
// decomposed expansion of L(s, Pi x dual(Pi)).
std::pair<VirtualRep, FactorMultiset> build_lemma_d(const CoefficientVector& c,
                                                    const CharacterExpr& chi,
                                                    const CaseAssumptions& cas,
                                                    const std::string& slot1 = "pi",
                                                    const std::string& slot2 = "pi2");

enum class DihedralBranch { None, MuSplit, Generic };

// Isobaric decomposition of A^level on a slot of concrete type; nullopt when
// that power is cuspidal for the type.
std::optional<VirtualRep> decompose_level(const std::string& slot, int level, Gl2Type type,
                                          const CaseAssumptions& cas,
                                          DihedralBranch branch = DihedralBranch::None,
                                          const Assignment* asg = nullptr);

// Replace every decomposable symmetric power on `slot` inside the factor by
// its pieces, splitting the factor into a product.  The case must tag the
// slot tetrahedral or octahedral.
FactorMultiset rewrite_polyhedral(const FactorSymbol& f, const CaseAssumptions& cas,
                                  const std::string& slot);

// Same replacement inside the terms of an isobaric sum.
VirtualRep rewrite_polyhedral(const VirtualRep& rep, const CaseAssumptions& cas,
                              const std::string& slot);

}  // namespace lscert
