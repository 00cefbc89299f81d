#include "lscert/repring.hpp"

#include <algorithm>

namespace lscert {

namespace {

Gl2Mask effective_mask(const std::string& slot, const CaseAssumptions& cas,
                       const Assignment* asg) {
    if (asg && asg->types.count(slot)) return mask_of(asg->type_of(slot));
    return cas.slot_mask(slot);
}

bool level_cuspidal(int level, Gl2Type t) {
    switch (level) {
        case 1: return true;
        case 2: return t != Gl2Type::Dihedral;
        case 3: return t != Gl2Type::Dihedral && t != Gl2Type::Tetrahedral;
        case 4: return t == Gl2Type::NotSolvablePolyhedral;
    }
    return false;
}

constexpr Gl2Type kAllTypes[4] = {Gl2Type::Dihedral, Gl2Type::Tetrahedral, Gl2Type::Octahedral,
                                  Gl2Type::NotSolvablePolyhedral};

// The full self-twist group of the part is pinned down by the remaining
// type possibilities (certain members are already in self_twists()).
bool selftwist_group_known(const Atom& a, const CaseAssumptions& cas, const Assignment* asg) {
    if (a.is_pure_char()) return true;
    if (!a.single_part()) return false;
    if (a.gl2.empty()) return false;  // opaque: only declared members are known
    const auto& [slot, level] = *a.gl2.begin();
    Gl2Mask m = effective_mask(slot, cas, asg);
    const Gl2Mask d = mask_of(Gl2Type::Dihedral);
    const Gl2Mask t = mask_of(Gl2Type::Tetrahedral);
    const Gl2Mask o = mask_of(Gl2Type::Octahedral);
    switch (level) {
        case 1: return (m & d) == 0;          // non-dihedral: no self-twists
        case 2: return m == t || (m & t) == 0; // cubic self-twist only when tetrahedral
        case 3: return (m & (d | o)) == 0;     // quadratic self-twist needs D or O
        default: return false;
    }
}

std::map<std::string, int> opaque_name_counts(const Atom& a) {
    std::map<std::string, int> out;
    for (const auto& [p, c] : a.opaque) out[p.name] += c;
    return out;
}

// Shape comparison: parts up to arbitrary twist and contragredience of
// self-dual-shape constituents; twists and dual flags are ignored.
bool shape_match(const Atom& a, const Atom& pattern) {
    return a.gl2 == pattern.gl2 && opaque_name_counts(a) == opaque_name_counts(pattern);
}

bool single_gl2(const Atom& a, std::string& slot, int& level) {
    if (!a.opaque.empty() || a.gl2.size() != 1) return false;
    slot = a.gl2.begin()->first;
    level = a.gl2.begin()->second;
    return true;
}

const OpaqueInfo* single_opaque(const Atom& a, const CaseAssumptions& cas, const Assignment* asg,
                                const OpaquePart** part = nullptr) {
    if (!a.gl2.empty() || a.opaque.size() != 1 || a.opaque.begin()->second != 1) return nullptr;
    if (part) *part = &a.opaque.begin()->first;
    return &opaque_lookup(a.opaque.begin()->first.name, cas, asg);
}

}  // namespace

const char* tri_name(Tri t) {
    switch (t) {
        case Tri::Equal: return "equal";
        case Tri::Distinct: return "distinct";
        case Tri::Unknown: return "unknown";
    }
    return "?";
}

std::vector<std::pair<int, int>> cg_tensor(int j, int k) {
    if (j < 0 || k < 0)
        throw Error(ErrKind::LevelOutOfRange, "negative symmetric-power level");
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r <= std::min(j, k); ++r) out.emplace_back(j + k - 2 * r, r);
    return out;
}

long long a_product_exponent(int j, int k, int r) {
    return r - j / 2 - k / 2 + (j + k - 2 * r) / 2;
}

std::vector<std::pair<int, CharacterExpr>> a_tensor(int j, int k, const CharacterExpr& chi,
                                                    const CharacterExpr& slot_char) {
    if (j < 0 || j > 2 || k < 0 || k > 2)
        throw Error(ErrKind::LevelOutOfRange,
                    "pairing side carries normalized level above 2: A^" + std::to_string(j) +
                        " x A^" + std::to_string(k));
    std::vector<std::pair<int, CharacterExpr>> out;
    for (const auto& [m, r] : cg_tensor(j, k)) {
        long long e = a_product_exponent(j, k, r) - (k % 2);
        out.emplace_back(m, chi * slot_char.pow(e));
    }
    return out;
}

Atom canonicalize_atom(Atom a, const CaseAssumptions& cas, const Assignment* asg) {
    a.twist = cas.rel().reduce_mod(a.twist, self_twists(a, cas, asg));
    return a;
}

VirtualRep canonicalize_rep(VirtualRep r, const CaseAssumptions& cas, const Assignment* asg) {
    for (auto& [atom, mult] : r.terms) atom = canonicalize_atom(std::move(atom), cas, asg);
    r.normalize();
    return r;
}

Atom dual_atom(Atom a) {
    CharacterExpr t = a.twist.inverse();
    for (const auto& [slot, level] : a.gl2)
        if (level % 2 != 0)
            t = t * CharacterExpr::gen(CaseAssumptions::omega_name(slot), -1);
    std::map<OpaquePart, int> flipped;
    for (const auto& [p, c] : a.opaque) flipped[OpaquePart{p.name, !p.dualized}] += c;
    a.opaque = std::move(flipped);
    a.twist = std::move(t);
    return a;
}

VirtualRep dual(const VirtualRep& r, const CaseAssumptions& cas, const Assignment* asg) {
    VirtualRep out;
    for (const auto& [atom, mult] : r.terms) out.add(dual_atom(atom), mult);
    return canonicalize_rep(std::move(out), cas, asg);
}

VirtualRep tensor_atoms(const Atom& a, const Atom& b, const CaseAssumptions& cas,
                        const Assignment* asg) {
    for (const auto& [pa, ca] : a.opaque) {
        for (const auto& [pb, cb] : b.opaque) {
            if (pa.name == pb.name) continue;
            if (opaque_lookup(pa.name, cas, asg).rank > 1 &&
                opaque_lookup(pb.name, cas, asg).rank > 1)
                throw Error(ErrKind::OpaqueTensorUnsupported,
                            "distinct opaque slots cannot be tensor-decomposed: " + pa.name +
                                " x " + pb.name);
        }
    }
    Atom base;
    base.opaque = a.opaque;
    for (const auto& [p, c] : b.opaque) base.opaque[p] += c;
    base.twist = a.twist * b.twist;
    std::vector<std::pair<std::string, std::pair<int, int>>> shared;
    for (const auto& [slot, ja] : a.gl2) {
        auto it = b.gl2.find(slot);
        if (it == b.gl2.end())
            base.gl2[slot] = ja;
        else
            shared.emplace_back(slot, std::make_pair(ja, it->second));
    }
    for (const auto& [slot, jb] : b.gl2)
        if (!a.gl2.count(slot)) base.gl2[slot] = jb;

    std::vector<Atom> acc{base};
    for (const auto& [slot, jk] : shared) {
        const auto [j, k] = jk;
        if (j + k > 4)
            throw Error(ErrKind::LevelOutOfRange,
                        "same-slot product exceeds level 4 on slot " + slot);
        std::vector<Atom> next;
        for (const Atom& partial : acc) {
            for (const auto& [m, r] : cg_tensor(j, k)) {
                Atom t = partial;
                if (m > 0) t.gl2[slot] = m;
                long long e = a_product_exponent(j, k, r);
                if (e != 0)
                    t.twist = t.twist * CharacterExpr::gen(CaseAssumptions::omega_name(slot), e);
                next.push_back(std::move(t));
            }
        }
        acc = std::move(next);
    }
    VirtualRep out;
    for (Atom& t : acc) out.add(std::move(t), 1);
    return out;
}

VirtualRep tensor(const VirtualRep& a, const VirtualRep& b, const CaseAssumptions& cas,
                  const Assignment* asg) {
    VirtualRep out;
    for (const auto& [ta, ma] : a.terms) {
        for (const auto& [tb, mb] : b.terms) {
            VirtualRep prod = tensor_atoms(ta, tb, cas, asg);
            for (auto& [atom, mult] : prod.terms) out.add(std::move(atom), mult * ma * mb);
        }
    }
    return canonicalize_rep(std::move(out), cas, asg);
}

Tri atom_cuspidality(const Atom& a, const CaseAssumptions& cas, const Assignment* asg) {
    if (a.is_pure_char()) return Tri::Equal;
    if (!a.single_part()) return Tri::Unknown;
    if (!a.gl2.empty()) {
        const auto& [slot, level] = *a.gl2.begin();
        Gl2Mask m = effective_mask(slot, cas, asg);
        bool all_yes = true, all_no = true;
        for (Gl2Type t : kAllTypes) {
            if (!(m & mask_of(t))) continue;
            (level_cuspidal(level, t) ? all_no : all_yes) = false;
        }
        if (all_yes) return Tri::Equal;
        if (all_no) return Tri::Distinct;
        return Tri::Unknown;
    }
    const OpaqueInfo& info = opaque_lookup(a.opaque.begin()->first.name, cas, asg);
    if (!info.cuspidal_certain) return Tri::Unknown;
    return info.cuspidal ? Tri::Equal : Tri::Distinct;
}

bool nontrivial_mod(const RelationLattice& rel, const CharacterExpr& c,
                    const std::vector<CharacterExpr>& extra) {
    std::vector<CharacterExpr> els{CharacterExpr::one()};
    for (const auto& g : extra) {
        long long ord = rel.order(g);
        if (ord <= 0 || ord > 8) return false;
        std::vector<CharacterExpr> next;
        for (const auto& e : els) {
            CharacterExpr p = e;
            for (long long i = 0; i < ord; ++i) {
                next.push_back(p);
                p = p * g;
            }
        }
        els = std::move(next);
        if (els.size() > 64) return false;
    }
    for (const auto& e : els)
        if (!rel.provably_nontrivial(c * e.inverse())) return false;
    return true;
}

Tri atoms_equal(const Atom& a, const Atom& b, const CaseAssumptions& cas, const Assignment* asg) {
    const RelationLattice& rel = cas.rel();
    const Atom ca = canonicalize_atom(a, cas, asg);
    const Atom cb = canonicalize_atom(b, cas, asg);
    if (ca == cb) return Tri::Equal;
    if (atom_degree(ca, cas, asg) != atom_degree(cb, cas, asg)) return Tri::Distinct;

    // Central characters of isomorphic representations agree exactly.
    auto oa = central_char(ca, cas, asg);
    auto ob = central_char(cb, cas, asg);
    if (oa && ob && rel.provably_nontrivial(*oa * ob->inverse())) return Tri::Distinct;

    Tri cua = atom_cuspidality(ca, cas, asg);
    Tri cub = atom_cuspidality(cb, cas, asg);
    if ((cua == Tri::Equal && cub == Tri::Distinct) ||
        (cua == Tri::Distinct && cub == Tri::Equal))
        return Tri::Distinct;

    for (const auto& [x, y] : cas.exact_inequivalences()) {
        const Atom cx = canonicalize_atom(x, cas, asg);
        const Atom cy = canonicalize_atom(y, cas, asg);
        const Atom cxd = canonicalize_atom(dual_atom(x), cas, asg);
        const Atom cyd = canonicalize_atom(dual_atom(y), cas, asg);
        // Twisting both sides by one common character preserves
        // inequivalence, so declared pairs match up to a shared twist.
        auto common_twist_match = [&](const Atom& p, const Atom& q) {
            if (ca.gl2 != p.gl2 || ca.opaque != p.opaque) return false;
            if (cb.gl2 != q.gl2 || cb.opaque != q.opaque) return false;
            const CharacterExpr sa = ca.twist * p.twist.inverse();
            const CharacterExpr sb = cb.twist * q.twist.inverse();
            return rel.reduce_mod(sa * sb.inverse(), self_twists(cb, cas, asg)).trivial();
        };
        if (common_twist_match(cx, cy) || common_twist_match(cy, cx) ||
            common_twist_match(cxd, cyd) || common_twist_match(cyd, cxd))
            return Tri::Distinct;
    }
    for (const auto& [x, y] : cas.shape_inequivalences()) {
        if ((shape_match(ca, x) && shape_match(cb, y)) ||
            (shape_match(ca, y) && shape_match(cb, x)))
            return Tri::Distinct;
    }

    {
        std::string s1, s2;
        int m1 = 0, m2 = 0;
        if (single_gl2(ca, s1, m1) && single_gl2(cb, s2, m2) && s1 != s2 && m1 == m2 &&
            cas.slots_inequivalent(s1, s2)) {
            if (m1 == 1) return Tri::Distinct;
            // Adjoint multiplicity one: twist-equivalent squares force
            // twist-equivalent non-dihedral forms.
            const Gl2Mask d = mask_of(Gl2Type::Dihedral);
            if (m1 == 2 && (effective_mask(s1, cas, asg) & d) == 0 &&
                (effective_mask(s2, cas, asg) & d) == 0)
                return Tri::Distinct;
        }
    }

    if (ca.gl2 == cb.gl2 && ca.opaque == cb.opaque) {
        const CharacterExpr delta = ca.twist * cb.twist.inverse();
        const std::vector<CharacterExpr> certain = self_twists(ca, cas, asg);
        if (ca.single_part() && !ca.opaque.empty()) {
            const OpaquePart& p = ca.opaque.begin()->first;
            for (const auto& n0 : opaque_lookup(p.name, cas, asg).non_self_twists) {
                const CharacterExpr n = p.dualized ? n0.inverse() : n0;
                if (rel.reduce_mod(delta * n.inverse(), certain).trivial() ||
                    rel.reduce_mod(delta * n, certain).trivial())
                    return Tri::Distinct;
            }
        }
        if (selftwist_group_known(ca, cas, asg) && nontrivial_mod(rel, delta, certain))
            return Tri::Distinct;
        return Tri::Unknown;
    }

    // A certain self-twist of one side that is a declared non-self-twist of
    // the other rules out isomorphism.
    {
        const OpaquePart* pa = nullptr;
        const OpaquePart* pb = nullptr;
        const OpaqueInfo* ia = single_opaque(ca, cas, asg, &pa);
        const OpaqueInfo* ib = single_opaque(cb, cas, asg, &pb);
        auto asymmetric = [&](const Atom& from, const OpaqueInfo* info, const OpaquePart* part) {
            if (!info) return false;
            for (const auto& psi : self_twists(from, cas, asg)) {
                for (const auto& n0 : info->non_self_twists) {
                    const CharacterExpr n = part->dualized ? n0.inverse() : n0;
                    if (rel.is_trivial(psi * n.inverse()) || rel.is_trivial(psi * n)) return true;
                }
            }
            return false;
        };
        if (asymmetric(ca, ib, pb) || asymmetric(cb, ia, pa)) return Tri::Distinct;

        // A dihedral piece is never a twist of a provably non-dihedral form,
        // and a split piece is never cuspidal.
        auto dihedral_incompat = [&](const Atom& gl2_side, const OpaqueInfo* info) {
            if (!info || !info->dihedral || info->rank != 2) return false;
            std::string slot;
            int level = 0;
            if (!single_gl2(gl2_side, slot, level) || level != 1) return false;
            return (effective_mask(slot, cas, asg) & mask_of(Gl2Type::Dihedral)) == 0;
        };
        if (dihedral_incompat(ca, ib) || dihedral_incompat(cb, ia)) return Tri::Distinct;

        // Derived dihedral pieces of different provenance over inequivalent
        // slots cannot coincide.
        if (ia && ib && ia->dihedral && ib->dihedral && !ia->kind.empty() && !ib->kind.empty() &&
            ia->kind != ib->kind && !ia->source_slot.empty() && !ib->source_slot.empty() &&
            cas.slots_inequivalent(ia->source_slot, ib->source_slot))
            return Tri::Distinct;
    }

    return Tri::Unknown;
}

}  // namespace lscert
