#pragma once

#include "lscert/model.hpp"

namespace lscert {

// Sym^j (x) Sym^k = (+)_{r=0..min(j,k)} Sym^{j+k-2r} (x) det^r.
// Returns [(j+k-2r, r)]; sum of (level+1) over the list is (j+1)(k+1).
std::vector<std::pair<int, int>> cg_tensor(int j, int k);

// A^j(pi) (x) A^k(pi~) (x) chi for j,k <= 2: returns [(j+k-2r, chi')]
// with chi' = conj(slot_char)*chi exactly when (j,k) in {(0,1),(2,1)},
// else chi.  Throws LevelOutOfRange for j or k > 2.
std::vector<std::pair<int, CharacterExpr>> a_tensor(int j, int k, const CharacterExpr& chi,
                                                    const CharacterExpr& slot_char);

// Normalized-power exponent correction for same-side products:
// A^j(pi) (x) A^k(pi) = (+)_r A^{j+k-2r}(pi) (x) omega^{e(j,k,r)},
// e(j,k,r) = r - floor(j/2) - floor(k/2) + floor((j+k-2r)/2).
long long a_product_exponent(int j, int k, int r);

// Reduce the twist modulo declared relations and the atom's certain
// self-twist lattice; canonical atoms compare bytewise.
Atom canonicalize_atom(Atom a, const CaseAssumptions& cas, const Assignment* asg = nullptr);
VirtualRep canonicalize_rep(VirtualRep r, const CaseAssumptions& cas,
                            const Assignment* asg = nullptr);

// Contragredient: A^m parts pick up conj(omega_slot)^(m mod 2), opaque
// parts flip their dual flag, the twist inverts.
Atom dual_atom(Atom a);
VirtualRep dual(const VirtualRep& r, const CaseAssumptions& cas, const Assignment* asg = nullptr);

// Full isobaric product decomposition.  Shared GL(2) slots decompose by
// the Clebsch-Gordan rule with normalization corrections; opaque parts
// concatenate when they name the same slot and are rejected otherwise.
VirtualRep tensor_atoms(const Atom& a, const Atom& b, const CaseAssumptions& cas,
                        const Assignment* asg = nullptr);
VirtualRep tensor(const VirtualRep& a, const VirtualRep& b, const CaseAssumptions& cas,
                  const Assignment* asg = nullptr);

enum class Tri { Equal, Distinct, Unknown };
const char* tri_name(Tri t);

// Provable cuspidality of a single atom (no isobaric refinement):
// A^1 always cuspidal; A^2 cuspidal iff slot non-dihedral; A^3 cuspidal
// iff slot not dihedral/tetrahedral; A^4 cuspidal iff slot NSP; opaque
// parts use their declared flag; multi-part atoms are functorial
// products resolved by the poles module, Unknown here.
Tri atom_cuspidality(const Atom& a, const CaseAssumptions& cas, const Assignment* asg = nullptr);

// Tri-state isomorphism test on canonical atoms.  Equal only by
// syntactic identity modulo relations and certain self-twists; Distinct
// by any of: degree mismatch, provably different central characters,
// declared slot/shape/exact inequivalences, provable cuspidality
// mismatch, twist ratio provably outside the possible self-twist
// lattice, self-twist asymmetry, dihedral incompatibility, or distinct
// decomposition provenance on inequivalent slots.
Tri atoms_equal(const Atom& a, const Atom& b, const CaseAssumptions& cas,
                const Assignment* asg = nullptr);

// True when c is provably nontrivial even modulo the subgroup generated
// by extra (used to compare twists up to possible self-twists).
bool nontrivial_mod(const RelationLattice& rel, const CharacterExpr& c,
                    const std::vector<CharacterExpr>& extra);

}  // namespace lscert
