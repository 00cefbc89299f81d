#include "lscert/poles.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace lscert {

PoleInterval::PoleInterval(long long l, long long h) : lo(l), hi(h) {
    if (l < 0 || l > h)
        throw Error(ErrKind::UnsupportedCase, "malformed pole interval");
}

PoleInterval& PoleInterval::operator+=(const PoleInterval& o) {
    lo += o.lo;
    hi += o.hi;
    return *this;
}

PoleInterval PoleInterval::scaled(long long k) const {
    if (k < 0) throw Error(ErrKind::MalformedCertificate, "negative factor exponent");
    return {lo * k, hi * k};
}

PoleInterval PoleInterval::hull(const PoleInterval& a, const PoleInterval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

PoleInterval PoleInterval::intersect(const PoleInterval& a, const PoleInterval& b) {
    long long lo = std::max(a.lo, b.lo);
    long long hi = std::min(a.hi, b.hi);
    if (lo > hi) throw Error(ErrKind::UnsupportedCase, "contradictory pole bounds");
    return {lo, hi};
}

Gl2Mask mask_from_letters(const std::string& letters) {
    Gl2Mask m = 0;
    for (char ch : letters) {
        switch (ch) {
            case 'D': m |= mask_of(Gl2Type::Dihedral); break;
            case 'T': m |= mask_of(Gl2Type::Tetrahedral); break;
            case 'O': m |= mask_of(Gl2Type::Octahedral); break;
            case 'N': m |= mask_of(Gl2Type::NotSolvablePolyhedral); break;
            default:
                throw Error(ErrKind::ParseError,
                            std::string("unknown type letter: ") + ch);
        }
    }
    if (m == 0) throw Error(ErrKind::ParseError, "empty type mask");
    return m;
}

std::string mask_letters(Gl2Mask m) {
    std::string out;
    if (m & mask_of(Gl2Type::Dihedral)) out += 'D';
    if (m & mask_of(Gl2Type::Tetrahedral)) out += 'T';
    if (m & mask_of(Gl2Type::Octahedral)) out += 'O';
    if (m & mask_of(Gl2Type::NotSolvablePolyhedral)) out += 'N';
    return out;
}

const RuleTable& RuleTable::builtin() {
    static const RuleTable table = [] {
        RuleTable t;
        const Gl2Mask on =
            mask_of(Gl2Type::Octahedral) | mask_of(Gl2Type::NotSolvablePolyhedral);
        t.rows_ = {
            {3, 3, on, on, {0, 1}},
            {4, 4, mask_of(Gl2Type::Tetrahedral), mask_of(Gl2Type::Tetrahedral), {0, 4}},
            {4, 4, mask_of(Gl2Type::Octahedral), mask_of(Gl2Type::Octahedral), {0, 1}},
            {4, 4, mask_of(Gl2Type::NotSolvablePolyhedral),
             mask_of(Gl2Type::NotSolvablePolyhedral), {0, 1}},
        };
        return t;
    }();
    return table;
}

RuleTable RuleTable::parse(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        throw Error(ErrKind::ParseError, std::string("rule table: ") + e.what());
    }
    if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array())
        throw Error(ErrKind::ParseError, "rule table: expected an object with a rows array");
    RuleTable t;
    for (const auto& r : j["rows"]) {
        RuleRow row;
        try {
            row.m = r.at("m").get<int>();
            row.n = r.at("n").get<int>();
            row.left = mask_from_letters(r.at("left").get<std::string>());
            row.right = mask_from_letters(r.at("right").get<std::string>());
            long long lo = r.at("lo").get<long long>();
            long long hi = r.at("hi").get<long long>();
            if (lo < 0 || lo > hi)
                throw Error(ErrKind::ParseError, "rule table: malformed interval");
            row.interval = PoleInterval(lo, hi);
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw Error(ErrKind::ParseError, std::string("rule table row: ") + e.what());
        }
        if (row.m < 1 || row.m > 4 || row.n < 1 || row.n > 4)
            throw Error(ErrKind::ParseError, "rule table: power out of range");
        t.rows_.push_back(row);
    }
    return t;
}

RuleTable RuleTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrKind::ParseError, "cannot open rule table: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

PoleInterval RuleTable::lookup(int m, Gl2Type tl, int n, Gl2Type tr) const {
    for (const auto& r : rows_) {
        const bool direct =
            r.m == m && r.n == n && (r.left & mask_of(tl)) && (r.right & mask_of(tr));
        const bool swapped =
            r.m == n && r.n == m && (r.left & mask_of(tr)) && (r.right & mask_of(tl));
        if (direct || swapped) return r.interval;
    }
    return {0, 0};
}

namespace {

bool level_cuspidal(int level, Gl2Type t) {
    switch (level) {
        case 1: return true;
        case 2: return t != Gl2Type::Dihedral;
        case 3: return t != Gl2Type::Dihedral && t != Gl2Type::Tetrahedral;
        case 4: return t == Gl2Type::NotSolvablePolyhedral;
        default: return true;
    }
}

std::vector<Gl2Type> mask_types(Gl2Mask m) {
    std::vector<Gl2Type> out;
    for (Gl2Type t : {Gl2Type::Dihedral, Gl2Type::Tetrahedral, Gl2Type::Octahedral,
                      Gl2Type::NotSolvablePolyhedral})
        if (m & mask_of(t)) out.push_back(t);
    return out;
}

Gl2Mask eff_mask(const std::string& slot, const CaseAssumptions& cas, const Assignment* asg) {
    if (asg && asg->types.count(slot)) return mask_of(asg->type_of(slot));
    return cas.slot_mask(slot);
}

bool single_gl2(const Atom& a, std::string& slot, int& level) {
    if (!a.opaque.empty() || a.gl2.size() != 1) return false;
    slot = a.gl2.begin()->first;
    level = a.gl2.begin()->second;
    return true;
}

bool shape_match(const Atom& a, const Atom& pattern) {
    auto names = [](const Atom& x) {
        std::map<std::string, int> out;
        for (const auto& [p, c] : x.opaque) out[p.name] += c;
        return out;
    };
    return a.gl2 == pattern.gl2 && names(a) == names(pattern);
}

bool declared_shape_inequivalent(const Atom& a, const Atom& b, const CaseAssumptions& cas) {
    for (const auto& [x, y] : cas.shape_inequivalences())
        if ((shape_match(a, x) && shape_match(b, y)) ||
            (shape_match(a, y) && shape_match(b, x)))
            return true;
    return false;
}

// One constituent of a two-part product, with its rank resolved.
struct ProdSide {
    bool is_gl2 = false;
    std::string slot;
    int level = 0;
    const OpaqueInfo* info = nullptr;
    std::string opaque_name;
    int rank = 0;
};

std::vector<ProdSide> product_sides(const Atom& a, const CaseAssumptions& cas,
                                    const Assignment* asg) {
    std::vector<ProdSide> out;
    for (const auto& [slot, level] : a.gl2) {
        ProdSide s;
        s.is_gl2 = true;
        s.slot = slot;
        s.level = level;
        s.rank = level + 1;
        out.push_back(std::move(s));
    }
    for (const auto& [op, count] : a.opaque) {
        const OpaqueInfo& info = opaque_lookup(op.name, cas, asg);
        for (int i = 0; i < count; ++i) {
            ProdSide s;
            s.info = &info;
            s.opaque_name = op.name;
            s.rank = info.rank;
            out.push_back(s);
        }
    }
    return out;
}

}  // namespace

Cuspidality cuspidality(const Atom& a, const CaseAssumptions& cas, const Assignment* asg) {
    if (a.is_pure_char()) return {CuspKind::Cuspidal, {}};
    if (a.single_part()) {
        std::string slot;
        int level = 0;
        if (single_gl2(a, slot, level)) {
            const Gl2Mask m = eff_mask(slot, cas, asg);
            bool all_cusp = true, all_non = true;
            for (Gl2Type t : mask_types(m))
                (level_cuspidal(level, t) ? all_non : all_cusp) = false;
            if (all_cusp) return {CuspKind::Cuspidal, {}};
            const auto types = mask_types(m);
            if (all_non && types.size() == 1) {
                auto dec = decompose_level(slot, level, types[0], cas,
                                           DihedralBranch::Generic, asg);
                VirtualRep pieces = tensor(*dec, VirtualRep::single(Atom::character(a.twist)),
                                           cas, asg);
                return {CuspKind::Isobaric, std::move(pieces)};
            }
            return {CuspKind::Unknown, {}};
        }
        const OpaqueInfo& info = opaque_lookup(a.opaque.begin()->first.name, cas, asg);
        if (info.rank == 1) return {CuspKind::Cuspidal, {}};
        if (info.cuspidal_certain && info.cuspidal) return {CuspKind::Cuspidal, {}};
        return {CuspKind::Unknown, {}};
    }
    if (a.part_count() == 2) {
        auto sides = product_sides(a, cas, asg);
        if (sides[0].rank > sides[1].rank) std::swap(sides[0], sides[1]);
        const ProdSide& lo = sides[0];
        const ProdSide& hi = sides[1];
        const Gl2Mask d = mask_of(Gl2Type::Dihedral);
        if (lo.rank == 2 && hi.rank == 2) {
            // A GL(2) x GL(2) product of inequivalent non-dihedral forms
            // is cuspidal.
            if (lo.is_gl2 && hi.is_gl2 && (eff_mask(lo.slot, cas, asg) & d) == 0 &&
                (eff_mask(hi.slot, cas, asg) & d) == 0 &&
                cas.slots_inequivalent(lo.slot, hi.slot))
                return {CuspKind::Cuspidal, {}};
            return {CuspKind::Unknown, {}};
        }
        if (lo.rank == 2 && hi.rank == 3) {
            // A GL(2) x GL(3) product is cuspidal when the GL(2) form is
            // non-dihedral and the GL(3) form is cuspidal but not a twist
            // of its square.
            if (!lo.is_gl2 || (eff_mask(lo.slot, cas, asg) & d) != 0)
                return {CuspKind::Unknown, {}};
            if (hi.is_gl2) {
                // hi = A^2 of another slot
                if ((eff_mask(hi.slot, cas, asg) & d) == 0 &&
                    cas.slots_inequivalent(lo.slot, hi.slot))
                    return {CuspKind::Cuspidal, {}};
                return {CuspKind::Unknown, {}};
            }
            if (hi.info->cuspidal_certain && hi.info->cuspidal &&
                declared_shape_inequivalent(Atom::opaque_part(hi.opaque_name),
                                            Atom::gl2_part(lo.slot, 2), cas))
                return {CuspKind::Cuspidal, {}};
            return {CuspKind::Unknown, {}};
        }
        return {CuspKind::Unknown, {}};
    }
    return {CuspKind::Unknown, {}};
}

namespace {

struct Ctx {
    const CaseAssumptions& cas;
    const RuleTable& table;
};

struct CharItem {
    CharacterExpr c;
    long long mult = 1;
};

// Order contributed by a list of character pieces.  Certainly trivial
// pieces count exactly; pieces of unresolved triviality contribute to the
// upper bound, jointly capped when they are pairwise provably distinct
// (at most one of them can then be trivial).
PoleInterval chars_joint(const std::vector<CharItem>& items, const RelationLattice& rel) {
    long long lo = 0, hi = 0;
    std::vector<CharItem> open;
    for (const auto& it : items) {
        const CharacterExpr r = rel.reduce(it.c);
        if (r.trivial()) {
            lo += it.mult;
            hi += it.mult;
        } else if (!rel.provably_nontrivial(r)) {
            open.push_back({r, it.mult});
        }
    }
    if (!open.empty()) {
        // Two pieces cannot both be trivial when either their ratio or their
        // product is provably nontrivial; the bound is the heaviest subset
        // avoiding every such exclusion.
        const std::size_t n = open.size();
        long long add = 0;
        if (n > 12) {
            for (const auto& o : open) add += o.mult;
        } else {
            std::vector<unsigned> excl(n, 0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (rel.provably_nontrivial(open[i].c * open[j].c.inverse()) ||
                        rel.provably_nontrivial(open[i].c * open[j].c)) {
                        excl[i] |= 1u << j;
                        excl[j] |= 1u << i;
                    }
            for (unsigned s = 0; s < (1u << n); ++s) {
                long long w = 0;
                bool ok = true;
                for (std::size_t i = 0; i < n && ok; ++i) {
                    if (!((s >> i) & 1u)) continue;
                    if (s & excl[i]) ok = false;
                    else w += open[i].mult;
                }
                if (ok) add = std::max(add, w);
            }
        }
        hi += add;
    }
    return {lo, hi};
}

Gl2Type concrete_type(const std::string& slot, const Ctx& cx, const Assignment& asg) {
    if (asg.types.count(slot)) return asg.type_of(slot);
    const auto types = mask_types(cx.cas.slot_mask(slot));
    if (types.size() == 1) return types[0];
    throw Error(ErrKind::UnassignedSlot, "ambiguous type for slot: " + slot);
}

// Alternative full resolutions of a single-part atom into pieces that are
// pure characters, rank-1 opaques, or certainly cuspidal.
std::vector<VirtualRep> resolve_atom(const Atom& x, const Ctx& cx, const Assignment& asg,
                                     int depth) {
    if (depth > 16) throw Error(ErrKind::UnsupportedCase, "resolution depth exceeded");
    if (x.is_pure_char()) return {VirtualRep::single(x)};
    if (!x.gl2.empty()) {
        const auto& [slot, level] = *x.gl2.begin();
        const Gl2Type t = concrete_type(slot, cx, asg);
        auto dec = decompose_level(slot, level, t, cx.cas, DihedralBranch::Generic, &asg);
        if (!dec) return {VirtualRep::single(x)};
        VirtualRep pieces =
            tensor(*dec, VirtualRep::single(Atom::character(x.twist)), cx.cas, &asg);
        std::vector<VirtualRep> combos = {VirtualRep{}};
        for (const auto& [p, m] : pieces.terms) {
            const auto alts = resolve_atom(p, cx, asg, depth + 1);
            std::vector<VirtualRep> next;
            for (const auto& base : combos)
                for (const auto& alt : alts) {
                    VirtualRep v = base;
                    for (const auto& [pa, pm] : alt.terms) v.add(pa, pm * m);
                    next.push_back(std::move(v));
                }
            combos = std::move(next);
        }
        return combos;
    }
    const OpaquePart& op = x.opaque.begin()->first;
    const OpaqueInfo& info = opaque_lookup(op.name, cx.cas, &asg);
    if (info.rank == 1) return {VirtualRep::single(x)};
    if (info.cuspidal_certain) {
        if (info.cuspidal) return {VirtualRep::single(x)};
        throw Error(ErrKind::UnsupportedCase,
                    "non-cuspidal opaque without known pieces: " + op.name);
    }
    if (info.rank == 2 && info.dihedral && !info.source_slot.empty()) {
        const int s = op.dualized ? -1 : 1;
        const CharacterExpr delta =
            CharacterExpr::gen(CaseAssumptions::split_name(op.name), s);
        const CharacterExpr etad =
            CharacterExpr::gen(CaseAssumptions::etad_name(info.source_slot), s);
        VirtualRep split;
        split.add(Atom::character(delta * x.twist), 1);
        split.add(Atom::character(delta * etad * x.twist), 1);
        return {VirtualRep::single(x), std::move(split)};
    }
    throw Error(ErrKind::UnsupportedCase, "unresolved cuspidality for opaque: " + op.name);
}

PoleInterval factor_interval(const FactorSymbol& f, const Ctx& cx, Assignment& asg, int depth);

PoleInterval single_part_interval(const FactorSymbol& f, const Ctx& cx, const Assignment& asg,
                                  int depth) {
    Atom x = f.parts()[0];
    x.twist = x.twist * f.twist();
    std::optional<PoleInterval> out;
    for (const auto& branch : resolve_atom(x, cx, asg, depth)) {
        std::vector<CharItem> chars;
        for (const auto& [p, m] : branch.terms) {
            if (p.is_pure_char()) {
                chars.push_back({p.twist, m});
            } else if (p.gl2.empty() && p.opaque.size() == 1 &&
                       opaque_lookup(p.opaque.begin()->first.name, cx.cas, &asg).rank == 1) {
                const OpaquePart& op = p.opaque.begin()->first;
                const CharacterExpr w =
                    CharacterExpr::gen(CaseAssumptions::omega_name(op.name),
                                       op.dualized ? -1 : 1);
                chars.push_back({w * p.twist, m});
            }
            // cuspidal pieces of rank >= 2 are entire
        }
        const PoleInterval iv = chars_joint(chars, cx.cas.rel());
        out = out ? PoleInterval::hull(*out, iv) : iv;
    }
    return *out;
}

std::optional<PoleInterval> table_bound(const FactorSymbol& f, const Ctx& cx,
                                        const Assignment& asg) {
    if (f.parts().size() != 2) return {};
    std::string sa, sb;
    int la = 0, lb = 0;
    if (!single_gl2(f.parts()[0], sa, la) || !single_gl2(f.parts()[1], sb, lb)) return {};
    if (sa == sb) return {};
    if (!cx.cas.slots_inequivalent(sa, sb)) return {};
    const Gl2Type ta = concrete_type(sa, cx, asg);
    const Gl2Type tb = concrete_type(sb, cx, asg);
    if (ta == Gl2Type::Dihedral || tb == Gl2Type::Dihedral) return {};
    return cx.table.lookup(la, ta, lb, tb);
}

std::optional<Atom> assemble(const std::vector<const Atom*>& parts) {
    Atom out;
    for (const Atom* p : parts) {
        for (const auto& [slot, level] : p->gl2) {
            if (out.gl2.count(slot)) return {};
            out.gl2[slot] = level;
        }
        for (const auto& [op, n] : p->opaque) out.opaque[op] += n;
        out.twist = out.twist * p->twist;
    }
    return out;
}

PoleInterval factor_interval(const FactorSymbol& f, const Ctx& cx, Assignment& asg,
                             int depth) {
    if (depth > 24) throw Error(ErrKind::UnsupportedCase, "refinement depth exceeded");
    const auto& parts = f.parts();
    if (parts.empty())
        return chars_joint({{f.twist(), 1}}, cx.cas.rel());
    if (parts.size() == 1) return single_part_interval(f, cx, asg, depth);

    std::vector<PoleInterval> bounds;
    if (auto tb = table_bound(f, cx, asg)) bounds.push_back(*tb);
    const std::size_t k = parts.size();
    for (unsigned sel = 1; sel < (1u << k); sel += 2) {  // part 0 stays on the left
        std::vector<const Atom*> left, right;
        for (std::size_t i = 0; i < k; ++i)
            ((sel >> i) & 1u ? left : right).push_back(&parts[i]);
        if (right.empty()) continue;
        auto a1 = assemble(left);
        auto a2 = assemble(right);
        if (!a1 || !a2) continue;
        a2->twist = a2->twist * f.twist();
        if (cuspidality(*a1, cx.cas, &asg).kind != CuspKind::Cuspidal) continue;
        if (cuspidality(*a2, cx.cas, &asg).kind != CuspKind::Cuspidal) continue;
        const Atom c1 = canonicalize_atom(dual_atom(*a1), cx.cas, &asg);
        const Atom c2 = canonicalize_atom(*a2, cx.cas, &asg);
        switch (atoms_equal(c1, c2, cx.cas, &asg)) {
            case Tri::Equal: bounds.push_back({1, 1}); break;
            case Tri::Distinct: bounds.push_back({0, 0}); break;
            case Tri::Unknown: bounds.push_back({0, 1}); break;
        }
    }
    if (!bounds.empty()) {
        PoleInterval out = bounds[0];
        for (std::size_t i = 1; i < bounds.size(); ++i)
            out = PoleInterval::intersect(out, bounds[i]);
        return out;
    }

    // No direct rule: refine one non-cuspidal part and sum over its pieces.
    for (std::size_t i = 0; i < k; ++i) {
        const Atom& p = parts[i];
        if (p.gl2.empty()) continue;
        const auto& [slot, level] = *p.gl2.begin();
        const Gl2Type t = concrete_type(slot, cx, asg);
        auto dec = decompose_level(slot, level, t, cx.cas, DihedralBranch::Generic, &asg);
        if (!dec) continue;
        PoleInterval sum{0, 0};
        for (const auto& [piece, m] : dec->terms) {
            std::vector<Atom> sides;
            for (std::size_t j = 0; j < k; ++j)
                if (j != i) sides.push_back(parts[j]);
            sides.push_back(piece);
            sides.push_back(Atom::character(f.twist()));
            const FactorSymbol sub = FactorSymbol::make(sides, cx.cas, &asg);
            sum += factor_interval(sub, cx, asg, depth + 1).scaled(m);
        }
        return sum;
    }
    for (std::size_t i = 0; i < k; ++i) {
        const Atom& p = parts[i];
        if (p.opaque.empty()) continue;
        const OpaquePart& op = p.opaque.begin()->first;
        const OpaqueInfo info = opaque_lookup(op.name, cx.cas, &asg);
        if (info.cuspidal_certain) continue;
        if (!(info.rank == 2 && info.dihedral && !info.source_slot.empty()))
            throw Error(ErrKind::UnsupportedCase,
                        "unresolved cuspidality for opaque: " + op.name);
        OpaqueInfo certain = info;
        certain.cuspidal_certain = true;
        const auto saved = asg.local_opaques;
        asg.local_opaques[op.name] = certain;
        const PoleInterval as_cuspidal = factor_interval(f, cx, asg, depth + 1);
        asg.local_opaques = saved;

        const int s = op.dualized ? -1 : 1;
        const CharacterExpr delta =
            CharacterExpr::gen(CaseAssumptions::split_name(op.name), s);
        const CharacterExpr etad =
            CharacterExpr::gen(CaseAssumptions::etad_name(info.source_slot), s);
        PoleInterval as_split{0, 0};
        for (const CharacterExpr& piece : {delta, delta * etad}) {
            std::vector<Atom> sides;
            for (std::size_t j = 0; j < k; ++j)
                if (j != i) sides.push_back(parts[j]);
            sides.push_back(Atom::character(piece * f.twist()));
            const FactorSymbol sub = FactorSymbol::make(sides, cx.cas, &asg);
            as_split += factor_interval(sub, cx, asg, depth + 1);
        }
        return PoleInterval::hull(as_cuspidal, as_split);
    }
    throw Error(ErrKind::UnsupportedCase, "no applicable pole rule for factor");
}

}  // namespace

PoleInterval pole_interval(const FactorSymbol& f, const CaseAssumptions& cas,
                           const RuleTable& table) {
    if (!cas.finalized())
        throw Error(ErrKind::MalformedCertificate, "case must be finalized");
    const Ctx cx{cas, table};
    std::set<std::string> slot_set;
    for (const auto& p : f.parts())
        for (const auto& [slot, level] : p.gl2) slot_set.insert(slot);
    const std::vector<std::string> slots(slot_set.begin(), slot_set.end());
    std::vector<std::vector<Gl2Type>> options;
    options.reserve(slots.size());
    for (const auto& s : slots) options.push_back(mask_types(cas.slot_mask(s)));

    std::optional<PoleInterval> out;
    std::vector<std::size_t> idx(slots.size(), 0);
    while (true) {
        Assignment asg;
        for (std::size_t i = 0; i < slots.size(); ++i)
            asg.types[slots[i]] = options[i][idx[i]];
        const PoleInterval iv = factor_interval(f, cx, asg, 0);
        out = out ? PoleInterval::hull(*out, iv) : iv;
        std::size_t i = 0;
        for (; i < idx.size(); ++i) {
            if (++idx[i] < options[i].size()) break;
            idx[i] = 0;
        }
        if (i == idx.size()) break;
    }
    return *out;
}

PoleInterval total_pole_interval(const FactorMultiset& d, const CaseAssumptions& cas,
                                 const RuleTable& table) {
    PoleInterval out{0, 0};
    for (const auto& [f, mult] : d.factors) {
        if (mult < 0)
            throw Error(ErrKind::MalformedCertificate, "negative factor exponent");
        out += pole_interval(f, cas, table).scaled(mult);
    }
    return out;
}

}  // namespace lscert
