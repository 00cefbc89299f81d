#include "lscert/certify.hpp"

#include "lscert/repring.hpp"
#include "lscert/textio.hpp"

#include <algorithm>
#include <sstream>

namespace lscert {

namespace {

[[noreturn]] void malformed(const std::string& msg) {
    throw Error(ErrKind::MalformedCertificate, msg);
}

// Re-canonicalize a caller-supplied factor against the certificate's case.
FactorSymbol rebuild(const FactorSymbol& f, const CaseAssumptions& cas) {
    std::vector<Atom> sides = f.parts();
    sides.push_back(Atom::character(f.twist()));
    return FactorSymbol::make(sides, cas);
}

bool single_gl2_part(const Atom& a, std::string& slot, int& level) {
    if (!a.opaque.empty() || a.gl2.size() != 1) return false;
    slot = a.gl2.begin()->first;
    level = a.gl2.begin()->second;
    return true;
}

std::string rule_label(const FactorSymbol& f, const CaseAssumptions& cas) {
    if (f.is_zeta()) return "zeta-pole";
    const auto& parts = f.parts();
    if (parts.empty()) return "character";
    if (parts.size() == 1) {
        switch (cuspidality(parts[0], cas).kind) {
            case CuspKind::Cuspidal: return "cuspidal-part";
            case CuspKind::Isobaric: return "part-refinement";
            case CuspKind::Unknown: return "part-hull";
        }
    }
    if (parts.size() == 2) {
        std::string s1, s2;
        int l1 = 0, l2 = 0;
        if (single_gl2_part(parts[0], s1, l1) && single_gl2_part(parts[1], s2, l2) &&
            s1 != s2 && cas.slots_inequivalent(s1, s2) &&
            (cas.slot_mask(s1) & mask_of(Gl2Type::Dihedral)) == 0 &&
            (cas.slot_mask(s2) & mask_of(Gl2Type::Dihedral)) == 0) {
            return "counting-table(" + std::to_string(l1) + "," + std::to_string(l2) + ")";
        }
    }
    return "pairing-comparison";
}

// Total pole clamp for an explicit isobaric sum: every ordered pairing of
// provably cuspidal terms contributes exactly one pole when the terms are
// isomorphic and none when provably distinct; everything else falls back
// to the classwise interval sum.
PoleInterval trace_clamp(const PairingExpansion& ex, const CaseAssumptions& cas,
                         const RuleTable& table) {
    PoleInterval k{0, 0};
    for (const PairingTrace& t : ex.pairings) {
        const Atom& ti = ex.pi.terms[t.i].first;
        const Atom& tj = ex.pi.terms[t.j].first;
        if (cuspidality(ti, cas).kind == CuspKind::Cuspidal &&
            cuspidality(tj, cas).kind == CuspKind::Cuspidal) {
            const Tri eq = atoms_equal(ti, tj, cas);
            if (eq == Tri::Equal) {
                k += PoleInterval{1, 1}.scaled(t.mult);
                continue;
            }
            if (eq == Tri::Distinct) continue;
        }
        PoleInterval acc{0, 0};
        for (const auto& [f, e] : t.local.factors) acc += pole_interval(f, cas, table).scaled(e);
        k += acc.scaled(t.mult);
    }
    return k;
}

}  // namespace

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Eliminated: return "Eliminated";
        case Verdict::AbelianFactorOnly: return "AbelianFactorOnly";
        case Verdict::Fail: return "Fail";
        case Verdict::Unsupported: return "Unsupported";
    }
    return "?";
}

Report check(const Certificate& cert, const RuleTable& table) {
    const CaseAssumptions& cas = cert.assumptions;
    if (!cas.finalized()) malformed("case assumptions must be finalized");
    if (cert.coefficients.has_value() == cert.isobaric.has_value())
        malformed("certificate needs exactly one construction");

    Report r;

    // Expand the construction.
    std::optional<PairingExpansion> traces;
    if (cert.coefficients) {
        bool any = false;
        for (const auto& [jkr, m] : cert.coefficients->c) {
            if (m < 0) malformed("coefficient vector entries must be nonnegative");
            if (m > 0) any = true;
        }
        if (!any) malformed("coefficient vector is zero");
        auto [rep, d] = build_lemma_d(*cert.coefficients, cert.chi, cas, cert.slot1, cert.slot2);
        (void)rep;
        r.classes = std::move(d);
    } else {
        VirtualRep rep = *cert.isobaric;
        rep.normalize();
        if (rep.empty()) malformed("isobaric construction is empty");
        for (const auto& [a, m] : rep.terms)
            if (m <= 0) malformed("isobaric multiplicities must be positive");
        traces = expand_pairing_traced(rep, cas);
        r.classes = traces->classes;
    }

    r.target = rebuild(cert.target, cas);
    if (r.target.is_zeta()) malformed("target must not be the zeta class");
    r.degree = r.target.degree(cas);
    r.dual_target = r.target.dual(cas);

    // Apply rewrites: replace every copy of the factor by its product pieces.
    for (const RewriteStep& step : cert.rewrites) {
        const FactorSymbol f = rebuild(step.factor, cas);
        const long long e = r.classes.exponent(f);
        if (e <= 0) malformed("rewrite factor is not a class of the expansion");
        const FactorMultiset pieces = rewrite_polyhedral(f, cas, step.slot);
        if (pieces.factors.size() == 1 && pieces.exponent(f) == 1)
            malformed("rewrite does not decompose at slot " + step.slot);
        r.classes.add(f, -e);
        for (const auto& [piece, m] : pieces.factors) r.classes.add(piece, m * e);
    }

    // Count target copies.
    r.l1 = r.classes.exponent(r.target);
    if (r.l1 <= 0) malformed("target is not a class of the expansion");
    for (const VanishingBoost& b : cert.boosts) {
        const FactorSymbol f = rebuild(b.factor, cas);
        if (f == r.target || f == r.dual_target)
            malformed("boost duplicates the target class");
        const long long e = r.classes.exponent(f);
        if (e <= 0) malformed("boost factor is not a class of the expansion");
        r.l1 += e;
    }
    r.l2 = (r.dual_target == r.target) ? 0 : r.classes.exponent(r.dual_target);
    if (r.dual_target == r.target) r.notes.push_back("target class is self-dual");

    // Bound the total pole order.
    try {
        r.k = traces ? trace_clamp(*traces, cas, table) : total_pole_interval(r.classes, cas, table);
        r.k_bounded = true;
    } catch (const Error& e) {
        if (e.kind() != ErrKind::UnsupportedCase) throw;
        r.k_bounded = false;
        r.notes.push_back(std::string("pole bound unavailable: ") + e.what());
    }

    // Classwise ledger (informational; the clamp above is the authority).
    for (const auto& [f, e] : r.classes.factors) {
        LedgerRow row;
        row.factor = f;
        row.exponent = e;
        row.rule = rule_label(f, cas);
        try {
            row.pole = pole_interval(f, cas, table);
        } catch (const Error& err) {
            if (err.kind() != ErrKind::UnsupportedCase) throw;
            row.bounded = false;
            row.rule = "unsupported";
        }
        r.ledger.push_back(std::move(row));
        if (!f.is_zeta() && f.degree(cas) == 1 && f.dual(cas) == f)
            r.abelian.push_back(f);
    }

    // Validate declared escapes.
    for (const AbelianEscape& esc : cert.escapes) {
        const FactorSymbol f = rebuild(esc.factor, cas);
        if (f.is_zeta() || f.degree(cas) != 1 || !(f.dual(cas) == f))
            malformed("escape factor must be rank-1 self-dual");
        if (std::find(r.abelian.begin(), r.abelian.end(), f) == r.abelian.end())
            r.abelian.push_back(f);
    }

    if (!r.k_bounded) {
        r.verdict = Verdict::Unsupported;
    } else if (r.l1 + r.l2 > r.k.hi) {
        r.verdict = Verdict::Eliminated;
    } else if (!cert.escapes.empty()) {
        r.verdict = Verdict::AbelianFactorOnly;
    } else {
        r.verdict = Verdict::Fail;
    }

    if (cert.expected) {
        if (!r.k_bounded) malformed("expected counts given but the pole bound is unavailable");
        const Expected got{r.l1, r.l2, r.k.hi};
        if (got != *cert.expected) {
            std::ostringstream os;
            os << "expected (l1=" << cert.expected->l1 << ", l2=" << cert.expected->l2
               << ", k_hi=" << cert.expected->k_hi << ") but computed (l1=" << got.l1
               << ", l2=" << got.l2 << ", k_hi=" << got.k_hi << ")";
            malformed(os.str());
        }
    }
    return r;
}

std::string explain(const Report& r) {
    std::ostringstream os;
    os << "verdict: " << verdict_name(r.verdict) << "\n";
    os << "target: " << render_factor(r.target) << "  degree " << r.degree << "\n";
    os << "l1 = " << r.l1 << "  l2 = " << r.l2 << "  k = ";
    if (r.k_bounded)
        os << "[" << r.k.lo << ", " << r.k.hi << "]";
    else
        os << "unbounded";
    os << "\n";
    os << "classes:\n";
    for (const LedgerRow& row : r.ledger) {
        os << "  " << render_factor(row.factor) << " ^" << row.exponent << "  ";
        if (row.bounded)
            os << "[" << row.pole.lo << "," << row.pole.hi << "]";
        else
            os << "[?]";
        os << "  " << row.rule << "\n";
    }
    if (!r.abelian.empty()) {
        os << "abelian self-dual factors:\n";
        for (const FactorSymbol& f : r.abelian) os << "  " << render_factor(f) << "\n";
    }
    for (const std::string& n : r.notes) os << "note: " << n << "\n";
    return os.str();
}

}  // namespace lscert
