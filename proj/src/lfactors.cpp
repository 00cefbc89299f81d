#include "lscert/lfactors.hpp"

#include <algorithm>

namespace lscert {

namespace {

// Append each part of `a` as its own twist-free atom; fold the twist.
void flatten_into(const Atom& a, std::vector<Atom>& parts, CharacterExpr& twist) {
    for (const auto& [slot, level] : a.gl2) parts.push_back(Atom::gl2_part(slot, level));
    for (const auto& [part, count] : a.opaque)
        for (int i = 0; i < count; ++i)
            parts.push_back(Atom::opaque_part(part.name, part.dualized));
    twist = twist * a.twist;
}

}  // namespace

FactorSymbol FactorSymbol::make(const std::vector<Atom>& sides, const CaseAssumptions& cas,
                                const Assignment* asg) {
    FactorSymbol f;
    CharacterExpr t = CharacterExpr::one();
    for (const auto& s : sides) flatten_into(s, f.parts_, t);
    std::sort(f.parts_.begin(), f.parts_.end());
    std::vector<CharacterExpr> rows;
    for (const auto& p : f.parts_) {
        auto st = self_twists(p, cas, asg);
        rows.insert(rows.end(), st.begin(), st.end());
    }
    f.twist_ = cas.rel().reduce_mod(t, rows);
    return f;
}

Atom FactorSymbol::left() const {
    if (parts_.empty()) return Atom::one();
    return parts_.front();
}

Atom FactorSymbol::right() const {
    Atom r = Atom::character(twist_);
    for (std::size_t i = 1; i < parts_.size(); ++i) {
        const Atom& p = parts_[i];
        for (const auto& [slot, level] : p.gl2) {
            if (r.gl2.count(slot))
                throw Error(ErrKind::UnsupportedCase,
                            "factor regrouping collision on slot: " + slot);
            r.gl2[slot] = level;
        }
        for (const auto& [op, count] : p.opaque) r.opaque[op] += count;
    }
    return r;
}

long long FactorSymbol::degree(const CaseAssumptions& cas, const Assignment* asg) const {
    long long d = 1;
    for (const auto& p : parts_) d *= atom_degree(p, cas, asg);
    return d;
}

FactorSymbol FactorSymbol::dual(const CaseAssumptions& cas, const Assignment* asg) const {
    std::vector<Atom> sides;
    sides.reserve(parts_.size() + 1);
    for (const auto& p : parts_) sides.push_back(dual_atom(p));
    sides.push_back(Atom::character(twist_.inverse()));
    return make(sides, cas, asg);
}

void FactorMultiset::add(const FactorSymbol& f, long long mult) {
    if (mult == 0) return;
    auto it = factors.find(f);
    if (it == factors.end()) {
        factors.emplace(f, mult);
    } else if ((it->second += mult) == 0) {
        factors.erase(it);
    }
}

long long FactorMultiset::exponent(const FactorSymbol& f) const {
    auto it = factors.find(f);
    return it == factors.end() ? 0 : it->second;
}

long long FactorMultiset::total_degree(const CaseAssumptions& cas, const Assignment* asg) const {
    long long d = 0;
    for (const auto& [f, e] : factors) d += e * f.degree(cas, asg);
    return d;
}

FactorMultiset dual(const FactorMultiset& d, const CaseAssumptions& cas, const Assignment* asg) {
    FactorMultiset out;
    for (const auto& [f, e] : d.factors) out.add(f.dual(cas, asg), e);
    return out;
}

long long total_degree(const FactorMultiset& d, const CaseAssumptions& cas,
                       const Assignment* asg) {
    return d.total_degree(cas, asg);
}

namespace {

// Factor classes of L(s, a x bdual).  Two single-part sides stay paired;
// any multi-part side (or decompose_all) routes through the tensor ring,
// splitting shared slots into normalized powers.
FactorMultiset pair_product(const Atom& a, const Atom& bdual, const CaseAssumptions& cas,
                            bool decompose, const Assignment* asg) {
    FactorMultiset out;
    if (decompose || a.part_count() > 1 || bdual.part_count() > 1) {
        VirtualRep prod = tensor_atoms(a, bdual, cas, asg);
        for (const auto& [atom, m] : prod.terms) out.add(FactorSymbol::make({atom}, cas, asg), m);
    } else {
        out.add(FactorSymbol::make({a, bdual}, cas, asg), 1);
    }
    return out;
}

}  // namespace

PairingExpansion expand_pairing_traced(const VirtualRep& pi, const CaseAssumptions& cas,
                                       bool decompose_all, const Assignment* asg) {
    if (pi.empty()) throw Error(ErrKind::MalformedCertificate, "empty isobaric sum");
    PairingExpansion out;
    out.pi = pi;
    const auto& terms = pi.terms;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        for (std::size_t j = 0; j < terms.size(); ++j) {
            PairingTrace tr;
            tr.i = i;
            tr.j = j;
            tr.mult = terms[i].second * terms[j].second;
            tr.local = pair_product(terms[i].first, dual_atom(terms[j].first), cas,
                                    decompose_all, asg);
            for (const auto& [f, e] : tr.local.factors) out.classes.add(f, e * tr.mult);
            out.pairings.push_back(std::move(tr));
        }
    }
    return out;
}

FactorMultiset expand_pairing(const VirtualRep& pi, const CaseAssumptions& cas,
                              bool decompose_all) {
    return expand_pairing_traced(pi, cas, decompose_all).classes;
}

std::pair<VirtualRep, FactorMultiset> build_lemma_d(const CoefficientVector& cv,
                                                    const CharacterExpr& chi,
                                                    const CaseAssumptions& cas,
                                                    const std::string& slot1,
                                                    const std::string& slot2) {
    VirtualRep pi;
    for (const auto& [key, n] : cv.c) {
        auto [j, k, r] = key;
        if (j < 0 || j > 2 || k < 0 || k > 2 || r < 0 || r > 1)
            throw Error(ErrKind::MalformedCertificate, "coefficient index out of range");
        if (n < 0) throw Error(ErrKind::MalformedCertificate, "negative coefficient");
        if (n == 0) continue;
        Atom a = Atom::one();
        if (j > 0) a.gl2[slot1] = j;
        if (k > 0) a.gl2[slot2] = k;
        if (r == 1) a.twist = chi;
        pi.add(canonicalize_atom(std::move(a), cas), n);
    }
    pi.normalize();
    if (pi.empty()) throw Error(ErrKind::MalformedCertificate, "empty coefficient vector");
    auto exp = expand_pairing_traced(pi, cas, /*decompose_all=*/true);
    return {std::move(exp.pi), std::move(exp.classes)};
}

std::optional<VirtualRep> decompose_level(const std::string& slot, int level, Gl2Type type,
                                          const CaseAssumptions& cas, DihedralBranch branch,
                                          const Assignment* asg) {
    if (level < 1 || level > 4)
        throw Error(ErrKind::LevelOutOfRange, "no decomposition rule at level " +
                                                  std::to_string(level));
    VirtualRep out;
    switch (type) {
        case Gl2Type::Tetrahedral: {
            if (level <= 2) return std::nullopt;
            CharacterExpr mu = CharacterExpr::gen(CaseAssumptions::mu_name(slot));
            if (level == 3) {
                out.add(Atom::gl2_part(slot, 1, mu), 1);
                out.add(Atom::gl2_part(slot, 1, mu.inverse()), 1);
            } else {
                out.add(Atom::gl2_part(slot, 2), 1);
                out.add(Atom::character(mu), 1);
                out.add(Atom::character(mu.inverse()), 1);
            }
            break;
        }
        case Gl2Type::Octahedral: {
            if (level != 4) return std::nullopt;
            CharacterExpr eta = CharacterExpr::gen(CaseAssumptions::eta_name(slot));
            out.add(Atom::opaque_part(CaseAssumptions::nu_name(slot)), 1);
            out.add(Atom::gl2_part(slot, 2, eta), 1);
            break;
        }
        case Gl2Type::Dihedral: {
            if (level == 1) return std::nullopt;
            if (branch == DihedralBranch::None)
                throw Error(ErrKind::UnsupportedCase,
                            "dihedral decomposition requires a branch choice");
            CharacterExpr etad = CharacterExpr::gen(CaseAssumptions::etad_name(slot));
            CharacterExpr mud = CharacterExpr::gen(CaseAssumptions::mud_name(slot));
            if (level == 2) {
                out.add(Atom::opaque_part(CaseAssumptions::dih2_name(slot)), 1);
                out.add(Atom::character(etad), 1);
            } else if (level == 3) {
                if (branch == DihedralBranch::MuSplit) {
                    out.add(Atom::gl2_part(slot, 1, mud), 2);
                } else {
                    out.add(Atom::opaque_part(CaseAssumptions::dih3_name(slot)), 1);
                    out.add(Atom::gl2_part(slot, 1), 1);
                }
            } else {
                if (branch == DihedralBranch::MuSplit) {
                    out.add(Atom::one(), 2);
                    out.add(Atom::character(mud), 1);
                    out.add(Atom::character(etad), 1);
                    out.add(Atom::character(mud * etad), 1);
                } else {
                    out.add(Atom::one(), 1);
                    out.add(Atom::opaque_part(CaseAssumptions::dih4a_name(slot)), 1);
                    out.add(Atom::opaque_part(CaseAssumptions::dih4b_name(slot)), 1);
                }
            }
            break;
        }
        case Gl2Type::NotSolvablePolyhedral:
            return std::nullopt;
    }
    return canonicalize_rep(std::move(out), cas, asg);
}

namespace {

Gl2Type rewrite_type(const CaseAssumptions& cas, const std::string& slot) {
    Gl2Mask m = cas.slot_mask(slot);
    if (m == mask_of(Gl2Type::Tetrahedral)) return Gl2Type::Tetrahedral;
    if (m == mask_of(Gl2Type::Octahedral)) return Gl2Type::Octahedral;
    throw Error(ErrKind::RuleInapplicable,
                "rewrite requires a certain polyhedral tag on slot: " + slot);
}

}  // namespace

FactorMultiset rewrite_polyhedral(const FactorSymbol& f, const CaseAssumptions& cas,
                                  const std::string& slot) {
    Gl2Type type = rewrite_type(cas, slot);
    std::vector<VirtualRep> options;
    options.reserve(f.parts().size());
    bool any = false;
    for (const auto& p : f.parts()) {
        std::optional<VirtualRep> dec;
        auto it = p.gl2.find(slot);
        if (it != p.gl2.end()) dec = decompose_level(slot, it->second, type, cas);
        if (dec) {
            options.push_back(std::move(*dec));
            any = true;
        } else {
            options.push_back(VirtualRep::single(p));
        }
    }
    if (!any)
        throw Error(ErrKind::RuleInapplicable,
                    "factor has no decomposable power on slot: " + slot);
    FactorMultiset out;
    std::vector<std::size_t> idx(options.size(), 0);
    std::vector<Atom> sides;
    while (true) {
        sides.clear();
        long long mult = 1;
        for (std::size_t p = 0; p < options.size(); ++p) {
            const auto& term = options[p].terms[idx[p]];
            sides.push_back(term.first);
            mult *= term.second;
        }
        sides.push_back(Atom::character(f.twist()));
        out.add(FactorSymbol::make(sides, cas), mult);
        std::size_t p = 0;
        for (; p < options.size(); ++p) {
            if (++idx[p] < options[p].terms.size()) break;
            idx[p] = 0;
        }
        if (p == options.size()) break;
    }
    return out;
}

VirtualRep rewrite_polyhedral(const VirtualRep& rep, const CaseAssumptions& cas,
                              const std::string& slot) {
    Gl2Type type = rewrite_type(cas, slot);
    VirtualRep out;
    bool any = false;
    for (const auto& [atom, m] : rep.terms) {
        std::optional<VirtualRep> dec;
        auto it = atom.gl2.find(slot);
        if (it != atom.gl2.end()) dec = decompose_level(slot, it->second, type, cas);
        if (!dec) {
            out.add(atom, m);
            continue;
        }
        any = true;
        Atom rest = atom;
        rest.gl2.erase(slot);
        VirtualRep repl = tensor(*dec, VirtualRep::single(std::move(rest)), cas);
        for (auto& [a2, m2] : repl.terms) out.add(std::move(a2), m2 * m);
    }
    if (!any)
        throw Error(ErrKind::RuleInapplicable,
                    "isobaric sum has no decomposable power on slot: " + slot);
    out.normalize();
    return out;
}

}  // namespace lscert
