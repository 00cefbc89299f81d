#pragma once

#include "lscert/chars.hpp"

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace lscert {

// Concrete GL(2) type of a cuspidal slot, as a bit so sets of
// possibilities form a mask.
enum class Gl2Type : unsigned {
    Dihedral = 1u,
    Tetrahedral = 2u,
    Octahedral = 4u,
    NotSolvablePolyhedral = 8u,
};

using Gl2Mask = unsigned;

constexpr Gl2Mask mask_of(Gl2Type t) { return static_cast<Gl2Mask>(t); }
constexpr Gl2Mask kMaskAll = 0xFu;
constexpr Gl2Mask kMaskNonDihedral = kMaskAll & ~mask_of(Gl2Type::Dihedral);

const char* gl2_type_name(Gl2Type t);

// Named possibility set for a GL(2) slot.  A tag is a claim about which
// concrete types remain possible; "certain" tags are singletons.
enum class SlotTag {
    GenericNonDihedral,         // {T, O, N}
    Dihedral,                   // {D}
    Tetrahedral,                // {T}
    Octahedral,                 // {O}
    NotSolvablePolyhedral,      // {N}
    NonTetrahedralNonDihedral,  // {O, N}: exactly "Sym^3 cuspidal"
    Unrestricted,               // {D, T, O, N}
};

Gl2Mask tag_mask(SlotTag t);
const char* tag_name(SlotTag t);
std::optional<SlotTag> tag_from_name(const std::string& s);

// One irreducible tensor slot of an Atom that is not a GL(2) symmetric
// power: a named automorphic representation treated as a black box.
struct OpaquePart {
    std::string name;
    bool dualized = false;

    auto operator<=>(const OpaquePart&) const = default;
};

// Formal tensor product of normalized symmetric-power parts on GL(2)
// slots, opaque parts, and a GL(1) twist.  Levels are 1..4; level 0
// folds into the twist and is never stored.  At most one part per GL(2)
// slot (same-slot products decompose before an Atom is formed).
struct Atom {
    std::map<std::string, int> gl2;    // slot name -> level in 1..4
    std::map<OpaquePart, int> opaque;  // part -> count >= 1
    CharacterExpr twist;

    bool is_pure_char() const { return gl2.empty() && opaque.empty(); }
    bool is_trivial() const { return is_pure_char() && twist.trivial(); }
    bool single_part() const;
    int part_count() const;

    auto operator<=>(const Atom&) const = default;

    static Atom one();
    static Atom character(CharacterExpr c);
    static Atom gl2_part(const std::string& slot, int level, CharacterExpr c = CharacterExpr::one());
    static Atom opaque_part(const std::string& name, bool dualized = false,
                            CharacterExpr c = CharacterExpr::one());
};

// Isobaric sum with multiplicities, in canonical term order.
struct VirtualRep {
    std::vector<std::pair<Atom, long long>> terms;

    static VirtualRep single(Atom a, long long mult = 1);
    void add(Atom a, long long mult);
    void normalize();
    bool empty() const { return terms.empty(); }

    auto operator<=>(const VirtualRep&) const = default;
};

// A named non-GL(2)-power constituent: either declared in a certificate
// case or synthesized by a decomposition rule.
struct OpaqueInfo {
    int rank = 0;
    bool cuspidal = true;
    bool cuspidal_certain = true;  // false: the cuspidal flag is only one branch
    // For rank >= 2 with cuspidal_certain == false: whether a split could
    // contribute the trivial character.  For rank 1: whether the character
    // could be trivial.  Declared parts default to false.
    bool may_contain_trivial = false;
    bool dihedral = false;    // carries a quadratic self-twist class
    std::string kind;         // decomposition provenance ("oct-a4", "dih-a2", ...)
    std::string source_slot;  // GL(2) slot the piece came from, if any
    std::vector<CharacterExpr> self_twists;
    std::vector<CharacterExpr> non_self_twists;
};

// Everything a certificate declares about its slots: type possibility
// tags, character relations, and inequivalence facts.  Immutable after
// finalize().
class CaseAssumptions {
  public:
    CaseAssumptions() = default;

    void add_slot(const std::string& name, SlotTag tag);
    void add_opaque(const std::string& name, OpaqueInfo info);
    void add_char_generator(const std::string& name);
    void add_relation(CharacterExpr c);
    void declare_nontrivial(CharacterExpr c);
    void declare_slot_inequivalent(const std::string& a, const std::string& b);
    void declare_shape_inequivalent(Atom a, Atom b);
    void declare_exact_inequivalent(Atom a, Atom b);
    void finalize();

    bool finalized() const { return finalized_; }
    const std::map<std::string, SlotTag>& slots() const { return slots_; }
    const std::map<std::string, OpaqueInfo>& opaques() const { return opaques_; }
    const RelationLattice& rel() const { return rel_; }
    const std::set<std::pair<std::string, std::string>>& slot_inequivalences() const {
        return slot_ineq_;
    }
    const std::vector<std::pair<Atom, Atom>>& shape_inequivalences() const {
        return shape_ineq_;
    }
    const std::vector<std::pair<Atom, Atom>>& exact_inequivalences() const {
        return exact_ineq_;
    }
    // Only what the caller declared, excluding generators, relations, and
    // nontriviality facts synthesized during finalize().
    const std::vector<std::string>& declared_generators() const { return decl_gens_; }
    const std::vector<CharacterExpr>& declared_relations() const { return decl_rels_; }
    const std::vector<CharacterExpr>& declared_nontrivial() const { return decl_nontriv_; }

    bool has_slot(const std::string& name) const { return slots_.count(name) != 0; }
    bool has_opaque(const std::string& name) const { return opaques_.count(name) != 0; }
    SlotTag slot_tag(const std::string& name) const;
    Gl2Mask slot_mask(const std::string& name) const;
    const OpaqueInfo& opaque_info(const std::string& name) const;
    bool slots_inequivalent(const std::string& a, const std::string& b) const;

    // Central character of the slot: the generator omega_<slot>.
    static std::string omega_name(const std::string& slot);
    static std::string mu_name(const std::string& slot);    // tetrahedral cubic
    static std::string eta_name(const std::string& slot);   // octahedral quadratic
    static std::string etad_name(const std::string& slot);  // dihedral quadratic self-twist
    static std::string mud_name(const std::string& slot);   // dihedral square-split quadratic
    // Synthesized decomposition pieces, registered for every slot whose tag
    // allows the producing type.
    static std::string nu_name(const std::string& slot);     // octahedral fourth-power piece
    static std::string dih2_name(const std::string& slot);   // dihedral square piece
    static std::string dih3_name(const std::string& slot);   // dihedral cube piece
    static std::string dih4a_name(const std::string& slot);  // dihedral fourth piece, mixed
    static std::string dih4b_name(const std::string& slot);  // dihedral fourth piece, square
    static std::string split_name(const std::string& piece);  // split character of a piece

  private:
    void register_pieces();

    std::map<std::string, SlotTag> slots_;
    std::map<std::string, OpaqueInfo> opaques_;
    RelationLattice rel_;
    std::set<std::pair<std::string, std::string>> slot_ineq_;
    std::vector<std::pair<Atom, Atom>> shape_ineq_;
    std::vector<std::pair<Atom, Atom>> exact_ineq_;
    std::vector<std::string> decl_gens_;
    std::vector<CharacterExpr> decl_rels_;
    std::vector<CharacterExpr> decl_nontriv_;
    bool finalized_ = false;
};

// One concrete choice of Gl2Type per GL(2) slot, drawn from the tags,
// plus opaque pieces synthesized while refining under that choice.
struct Assignment {
    std::map<std::string, Gl2Type> types;
    std::map<std::string, OpaqueInfo> local_opaques;

    Gl2Type type_of(const std::string& slot) const;
};

// Degree of an atom: product of (level+1) over GL(2) parts times opaque
// ranks; looks ranks up in the case (and assignment-local registry).
int atom_degree(const Atom& a, const CaseAssumptions& cas, const Assignment* asg = nullptr);
long long rep_degree(const VirtualRep& rep, const CaseAssumptions& cas,
                     const Assignment* asg = nullptr);

const OpaqueInfo& opaque_lookup(const std::string& name, const CaseAssumptions& cas,
                                const Assignment* asg);

// Self-twist lattice rows of an atom under a concrete assignment: the
// characters psi (as exponent vectors over rel's generators) with
// atom = atom (x) psi guaranteed.  With no assignment, only twists valid
// under every type in each slot's mask are returned.
std::vector<CharacterExpr> self_twists(const Atom& a, const CaseAssumptions& cas,
                                       const Assignment* asg = nullptr);

// Central character of an atom of rank R with parts P_i of rank r_i and
// twist chi: prod_i omega_{P_i}^{R/r_i} * chi^R.  GL(2) parts at level m
// contribute omega_slot^{e_m} with e_1=1, e_2=0, e_3=2, e_4=0; declared
// opaque parts contribute omega_<name>^{+-1}.  Pieces synthesized during
// refinement have no declared central character: nullopt.
std::optional<CharacterExpr> central_char(const Atom& a, const CaseAssumptions& cas,
                                          const Assignment* asg = nullptr);

}  // namespace lscert
