#include "lscert/model.hpp"

#include <algorithm>

namespace lscert {

const char* gl2_type_name(Gl2Type t) {
    switch (t) {
        case Gl2Type::Dihedral: return "dihedral";
        case Gl2Type::Tetrahedral: return "tetrahedral";
        case Gl2Type::Octahedral: return "octahedral";
        case Gl2Type::NotSolvablePolyhedral: return "not-solvable-polyhedral";
    }
    return "?";
}

Gl2Mask tag_mask(SlotTag t) {
    switch (t) {
        case SlotTag::GenericNonDihedral: return kMaskNonDihedral;
        case SlotTag::Dihedral: return mask_of(Gl2Type::Dihedral);
        case SlotTag::Tetrahedral: return mask_of(Gl2Type::Tetrahedral);
        case SlotTag::Octahedral: return mask_of(Gl2Type::Octahedral);
        case SlotTag::NotSolvablePolyhedral: return mask_of(Gl2Type::NotSolvablePolyhedral);
        case SlotTag::NonTetrahedralNonDihedral:
            return mask_of(Gl2Type::Octahedral) | mask_of(Gl2Type::NotSolvablePolyhedral);
        case SlotTag::Unrestricted: return kMaskAll;
    }
    return 0;
}

const char* tag_name(SlotTag t) {
    switch (t) {
        case SlotTag::GenericNonDihedral: return "generic-non-dihedral";
        case SlotTag::Dihedral: return "dihedral";
        case SlotTag::Tetrahedral: return "tetrahedral";
        case SlotTag::Octahedral: return "octahedral";
        case SlotTag::NotSolvablePolyhedral: return "not-solvable-polyhedral";
        case SlotTag::NonTetrahedralNonDihedral: return "non-tetrahedral-non-dihedral";
        case SlotTag::Unrestricted: return "unrestricted";
    }
    return "?";
}

std::optional<SlotTag> tag_from_name(const std::string& s) {
    for (SlotTag t : {SlotTag::GenericNonDihedral, SlotTag::Dihedral, SlotTag::Tetrahedral,
                      SlotTag::Octahedral, SlotTag::NotSolvablePolyhedral,
                      SlotTag::NonTetrahedralNonDihedral, SlotTag::Unrestricted}) {
        if (s == tag_name(t)) return t;
    }
    return std::nullopt;
}

bool Atom::single_part() const { return part_count() == 1; }

int Atom::part_count() const {
    int n = static_cast<int>(gl2.size());
    for (const auto& [p, c] : opaque) n += c;
    return n;
}

Atom Atom::one() { return Atom{}; }

Atom Atom::character(CharacterExpr c) {
    Atom a;
    a.twist = std::move(c);
    return a;
}

Atom Atom::gl2_part(const std::string& slot, int level, CharacterExpr c) {
    if (level < 0 || level > 4)
        throw Error(ErrKind::LevelOutOfRange,
                    "symmetric-power level out of range: " + std::to_string(level));
    Atom a;
    if (level > 0) a.gl2[slot] = level;
    a.twist = std::move(c);
    return a;
}

Atom Atom::opaque_part(const std::string& name, bool dualized, CharacterExpr c) {
    Atom a;
    a.opaque[OpaquePart{name, dualized}] = 1;
    a.twist = std::move(c);
    return a;
}

VirtualRep VirtualRep::single(Atom a, long long mult) {
    VirtualRep r;
    r.add(std::move(a), mult);
    return r;
}

void VirtualRep::add(Atom a, long long mult) {
    terms.emplace_back(std::move(a), mult);
}

void VirtualRep::normalize() {
    std::sort(terms.begin(), terms.end());
    std::vector<std::pair<Atom, long long>> merged;
    for (auto& t : terms) {
        if (!merged.empty() && merged.back().first == t.first) {
            merged.back().second += t.second;
        } else {
            merged.push_back(std::move(t));
        }
    }
    std::erase_if(merged, [](const auto& t) { return t.second == 0; });
    terms = std::move(merged);
}

void CaseAssumptions::add_slot(const std::string& name, SlotTag tag) {
    if (finalized_) throw Error(ErrKind::UnsupportedCase, "case already finalized");
    slots_[name] = tag;
}

void CaseAssumptions::add_opaque(const std::string& name, OpaqueInfo info) {
    if (finalized_) throw Error(ErrKind::UnsupportedCase, "case already finalized");
    opaques_[name] = std::move(info);
}

void CaseAssumptions::add_char_generator(const std::string& name) {
    if (finalized_) throw Error(ErrKind::UnsupportedCase, "case already finalized");
    decl_gens_.push_back(name);
    rel_.add_generator(name);
}

void CaseAssumptions::add_relation(CharacterExpr c) {
    if (finalized_) throw Error(ErrKind::UnsupportedCase, "case already finalized");
    decl_rels_.push_back(c);
    rel_.add_relation(std::move(c));
}

void CaseAssumptions::declare_nontrivial(CharacterExpr c) {
    if (finalized_) throw Error(ErrKind::UnsupportedCase, "case already finalized");
    decl_nontriv_.push_back(c);
    rel_.declare_nontrivial(std::move(c));
}

void CaseAssumptions::declare_slot_inequivalent(const std::string& a, const std::string& b) {
    if (finalized_) throw Error(ErrKind::UnsupportedCase, "case already finalized");
    if (a == b)
        throw Error(ErrKind::MalformedCertificate, "slot declared inequivalent to itself: " + a);
    slot_ineq_.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
}

void CaseAssumptions::declare_shape_inequivalent(Atom a, Atom b) {
    if (finalized_) throw Error(ErrKind::UnsupportedCase, "case already finalized");
    shape_ineq_.emplace_back(std::move(a), std::move(b));
}

void CaseAssumptions::declare_exact_inequivalent(Atom a, Atom b) {
    if (finalized_) throw Error(ErrKind::UnsupportedCase, "case already finalized");
    exact_ineq_.emplace_back(std::move(a), std::move(b));
}

void CaseAssumptions::finalize() {
    if (finalized_) return;
    for (const auto& [a, b] : slot_ineq_) {
        if (!has_slot(a) || !has_slot(b))
            throw Error(ErrKind::MalformedCertificate,
                        "inequivalence declared on unknown slot: " + a + ", " + b);
    }
    for (const auto& [name, info] : opaques_) {
        if (info.rank < 1)
            throw Error(ErrKind::MalformedCertificate, "opaque slot with nonpositive rank: " + name);
        if (has_slot(name))
            throw Error(ErrKind::MalformedCertificate, "name declared both slot and opaque: " + name);
    }
    for (const auto& [name, tag] : slots_) {
        Gl2Mask m = tag_mask(tag);
        rel_.add_generator(omega_name(name));
        if (m & mask_of(Gl2Type::Tetrahedral)) {
            const std::string mu = mu_name(name);
            rel_.add_generator(mu);
            rel_.add_relation(CharacterExpr::gen(mu, 3));
            rel_.declare_nontrivial(CharacterExpr::gen(mu));
        }
        if (m & mask_of(Gl2Type::Octahedral)) {
            const std::string eta = eta_name(name);
            rel_.add_generator(eta);
            rel_.add_relation(CharacterExpr::gen(eta, 2));
            rel_.declare_nontrivial(CharacterExpr::gen(eta));
        }
        if (m & mask_of(Gl2Type::Dihedral)) {
            const std::string etad = etad_name(name);
            const std::string mud = mud_name(name);
            rel_.add_generator(etad);
            rel_.add_relation(CharacterExpr::gen(etad, 2));
            rel_.declare_nontrivial(CharacterExpr::gen(etad));
            rel_.add_generator(mud);
            rel_.add_relation(CharacterExpr::gen(mud, 2));
            rel_.declare_nontrivial(CharacterExpr::gen(mud));
            rel_.declare_nontrivial(CharacterExpr::gen(mud) * CharacterExpr::gen(etad));
        }
    }
    register_pieces();
    for (const auto& [name, info] : opaques_) {
        rel_.add_generator(omega_name(name));
        for (const auto& st : info.self_twists) {
            for (const auto& [g, e] : st.e) rel_.add_generator(g);
            // X = X (x) st forces st^rank = 1 by the determinant.
            rel_.add_relation(st.pow(info.rank));
        }
        for (const auto& st : info.non_self_twists)
            for (const auto& [g, e] : st.e) rel_.add_generator(g);
    }
    for (const auto& [name, tag] : slots_) {
        Gl2Mask m = tag_mask(tag);
        if (m & mask_of(Gl2Type::Octahedral))
            rel_.add_relation(CharacterExpr::gen(omega_name(nu_name(name))) *
                              CharacterExpr::gen(eta_name(name), -1));
        if (m & mask_of(Gl2Type::Dihedral)) {
            rel_.add_relation(CharacterExpr::gen(omega_name(dih2_name(name))) *
                              CharacterExpr::gen(etad_name(name), -1));
            rel_.add_relation(CharacterExpr::gen(omega_name(dih3_name(name))) *
                              CharacterExpr::gen(omega_name(name), -1));
            rel_.add_relation(CharacterExpr::gen(omega_name(dih4a_name(name))) *
                              CharacterExpr::gen(omega_name(dih4b_name(name))));
            // A non-cuspidal rank-2 dihedral piece splits as delta + delta*etad;
            // delta is symbolic, tied to the piece by delta^2*etad = omega(piece).
            // For the square pieces both split characters are provably nontrivial
            // (a trivial one would force xi = xi^theta on the source slot).
            const CharacterExpr etad = CharacterExpr::gen(etad_name(name));
            const std::pair<std::string, bool> pieces[] = {{dih2_name(name), true},
                                                           {dih3_name(name), false},
                                                           {dih4a_name(name), false},
                                                           {dih4b_name(name), true}};
            for (const auto& [piece, proven] : pieces) {
                const std::string sg = split_name(piece);
                rel_.add_generator(sg);
                rel_.add_relation(CharacterExpr::gen(sg, 2) * etad *
                                  CharacterExpr::gen(omega_name(piece), -1));
                if (proven) {
                    rel_.declare_nontrivial(CharacterExpr::gen(sg));
                    rel_.declare_nontrivial(CharacterExpr::gen(sg) * etad);
                }
            }
        }
    }
    rel_.finalize();
    finalized_ = true;
}

// Pieces produced by decomposing a symmetric power on a polyhedrally or
// dihedrally typed slot.  Registered up front so decompositions never have
// to extend the relation lattice after it is finalized.
void CaseAssumptions::register_pieces() {
    auto synth = [&](const std::string& name, const std::string& slot, const std::string& kind,
                     bool certain, bool may_trivial) {
        if (has_slot(name) || opaques_.count(name))
            throw Error(ErrKind::MalformedCertificate, "name reserved for derived piece: " + name);
        OpaqueInfo info;
        info.rank = 2;
        info.cuspidal = true;
        info.cuspidal_certain = certain;
        info.may_contain_trivial = may_trivial;
        info.dihedral = true;
        info.kind = kind;
        info.source_slot = slot;
        info.self_twists = {CharacterExpr::gen(kind == "oct-a4" ? eta_name(slot)
                                                                : etad_name(slot))};
        opaques_[name] = std::move(info);
    };
    for (const auto& [name, tag] : slots_) {
        Gl2Mask m = tag_mask(tag);
        if (m & mask_of(Gl2Type::Octahedral))
            synth(nu_name(name), name, "oct-a4", true, false);
        if (m & mask_of(Gl2Type::Dihedral)) {
            synth(dih2_name(name), name, "dih-a2", false, false);
            synth(dih3_name(name), name, "dih-a3", false, true);
            synth(dih4a_name(name), name, "dih-a4", false, true);
            synth(dih4b_name(name), name, "dih-a4", false, false);
        }
    }
}

SlotTag CaseAssumptions::slot_tag(const std::string& name) const {
    auto it = slots_.find(name);
    if (it == slots_.end())
        throw Error(ErrKind::UntaggedSlot, "slot not declared in case: " + name);
    return it->second;
}

Gl2Mask CaseAssumptions::slot_mask(const std::string& name) const {
    return tag_mask(slot_tag(name));
}

const OpaqueInfo& CaseAssumptions::opaque_info(const std::string& name) const {
    auto it = opaques_.find(name);
    if (it == opaques_.end())
        throw Error(ErrKind::UntaggedSlot, "opaque slot not declared in case: " + name);
    return it->second;
}

bool CaseAssumptions::slots_inequivalent(const std::string& a, const std::string& b) const {
    if (a == b) return false;
    auto p = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    return slot_ineq_.count(p) != 0;
}

std::string CaseAssumptions::omega_name(const std::string& slot) { return "omega_" + slot; }
std::string CaseAssumptions::mu_name(const std::string& slot) { return "mu_" + slot; }
std::string CaseAssumptions::eta_name(const std::string& slot) { return "eta_" + slot; }
std::string CaseAssumptions::etad_name(const std::string& slot) { return "etad_" + slot; }
std::string CaseAssumptions::mud_name(const std::string& slot) { return "mud_" + slot; }
std::string CaseAssumptions::nu_name(const std::string& slot) { return "nu_" + slot; }
std::string CaseAssumptions::dih2_name(const std::string& slot) { return "dih2_" + slot; }
std::string CaseAssumptions::dih3_name(const std::string& slot) { return "dih3_" + slot; }
std::string CaseAssumptions::dih4a_name(const std::string& slot) { return "dih4a_" + slot; }
std::string CaseAssumptions::dih4b_name(const std::string& slot) { return "dih4b_" + slot; }
std::string CaseAssumptions::split_name(const std::string& piece) { return "split_" + piece; }

Gl2Type Assignment::type_of(const std::string& slot) const {
    auto it = types.find(slot);
    if (it == types.end())
        throw Error(ErrKind::UntaggedSlot, "slot missing from assignment: " + slot);
    return it->second;
}

const OpaqueInfo& opaque_lookup(const std::string& name, const CaseAssumptions& cas,
                                const Assignment* asg) {
    if (asg) {
        auto it = asg->local_opaques.find(name);
        if (it != asg->local_opaques.end()) return it->second;
    }
    return cas.opaque_info(name);
}

int atom_degree(const Atom& a, const CaseAssumptions& cas, const Assignment* asg) {
    int d = 1;
    for (const auto& [slot, level] : a.gl2) d *= level + 1;
    for (const auto& [part, count] : a.opaque)
        for (int i = 0; i < count; ++i) d *= opaque_lookup(part.name, cas, asg).rank;
    return d;
}

long long rep_degree(const VirtualRep& rep, const CaseAssumptions& cas, const Assignment* asg) {
    long long d = 0;
    for (const auto& [atom, mult] : rep.terms) d += mult * atom_degree(atom, cas, asg);
    return d;
}

std::vector<CharacterExpr> self_twists(const Atom& a, const CaseAssumptions& cas,
                                       const Assignment* asg) {
    std::vector<CharacterExpr> out;
    for (const auto& [slot, level] : a.gl2) {
        Gl2Mask m = asg ? mask_of(asg->type_of(slot)) : cas.slot_mask(slot);
        // A twist is certain only if valid under every remaining type.
        if (m == mask_of(Gl2Type::Tetrahedral) && level == 2) {
            out.push_back(CharacterExpr::gen(CaseAssumptions::mu_name(slot)));
        }
        if (m == mask_of(Gl2Type::Octahedral) && level == 3) {
            out.push_back(CharacterExpr::gen(CaseAssumptions::eta_name(slot)));
        }
        if (m == mask_of(Gl2Type::Dihedral) && (level == 1 || level == 3)) {
            out.push_back(CharacterExpr::gen(CaseAssumptions::etad_name(slot)));
        }
    }
    for (const auto& [part, count] : a.opaque) {
        const OpaqueInfo& info = opaque_lookup(part.name, cas, asg);
        for (const auto& st : info.self_twists) {
            out.push_back(part.dualized ? st.inverse() : st);
        }
    }
    return out;
}

std::optional<CharacterExpr> central_char(const Atom& a, const CaseAssumptions& cas,
                                          const Assignment* asg) {
    static const long long kLevelCentralExp[5] = {0, 1, 0, 2, 0};
    int total = atom_degree(a, cas, asg);
    CharacterExpr c = a.twist.pow(total);
    for (const auto& [slot, level] : a.gl2) {
        long long e = kLevelCentralExp[level] * (total / (level + 1));
        if (e != 0) c = c * CharacterExpr::gen(CaseAssumptions::omega_name(slot), e);
    }
    for (const auto& [part, count] : a.opaque) {
        const OpaqueInfo& info = opaque_lookup(part.name, cas, asg);
        if (!cas.has_opaque(part.name)) return std::nullopt;  // synthesized piece
        long long e = static_cast<long long>(count) * (total / info.rank);
        c = c * CharacterExpr::gen(CaseAssumptions::omega_name(part.name),
                                   part.dualized ? -e : e);
    }
    return c;
}

}  // namespace lscert
