#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <random>
#include <vector>

#include "lscert/poles.hpp"

using namespace lscert;

namespace {

CharacterExpr gen(const std::string& n, long long e = 1) { return CharacterExpr::gen(n, e); }

Atom a_pow(const std::string& slot, int level, CharacterExpr c = CharacterExpr::one()) {
    return Atom::gl2_part(slot, level, std::move(c));
}

CaseAssumptions two_slot_case(SlotTag t1, SlotTag t2, bool inequivalent = true) {
    CaseAssumptions cas;
    cas.add_slot("pi", t1);
    cas.add_slot("pi2", t2);
    cas.add_char_generator("chi");
    if (inequivalent) cas.declare_slot_inequivalent("pi", "pi2");
    cas.finalize();
    return cas;
}

FactorSymbol fs(const std::vector<Atom>& sides, const CaseAssumptions& cas) {
    return FactorSymbol::make(sides, cas);
}

const CaseAssumptions& one_oct_case() {
    static const CaseAssumptions cas = [] {
        CaseAssumptions c;
        c.add_slot("po", SlotTag::Octahedral);
        c.finalize();
        return c;
    }();
    return cas;
}

}  // namespace

TEST_CASE("pole interval arithmetic") {
    PoleInterval a{1, 3};
    PoleInterval b{0, 2};
    CHECK((a + b) == PoleInterval{1, 5});
    CHECK(a.scaled(4) == PoleInterval{4, 12});
    CHECK(a.scaled(0) == PoleInterval{0, 0});
    CHECK(PoleInterval::hull(a, b) == PoleInterval{0, 3});
    CHECK(PoleInterval::hull({2, 2}, {5, 7}) == PoleInterval{2, 7});
    CHECK(PoleInterval::intersect(a, b) == PoleInterval{1, 2});
    CHECK(PoleInterval{} == PoleInterval{0, 0});

    CHECK_THROWS_AS(PoleInterval(-1, 0), Error);
    CHECK_THROWS_AS(PoleInterval(3, 2), Error);
    CHECK_THROWS_AS(PoleInterval::intersect({0, 1}, {2, 3}), Error);
    CHECK_THROWS_AS(a.scaled(-1), Error);
    try {
        PoleInterval::intersect({0, 1}, {2, 3});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrKind::UnsupportedCase);
    }
}

TEST_CASE("type mask letters") {
    CHECK(mask_from_letters("D") == mask_of(Gl2Type::Dihedral));
    CHECK(mask_from_letters("ON") ==
          (mask_of(Gl2Type::Octahedral) | mask_of(Gl2Type::NotSolvablePolyhedral)));
    CHECK(mask_from_letters("DTON") == kMaskAll);
    CHECK(mask_letters(kMaskNonDihedral) == "TON");
    CHECK(mask_letters(mask_of(Gl2Type::Tetrahedral)) == "T");
    CHECK(mask_from_letters(mask_letters(0xBu)) == 0xBu);
    CHECK_THROWS_AS(mask_from_letters("X"), Error);
    CHECK_THROWS_AS(mask_from_letters(""), Error);
}

TEST_CASE("builtin counting table") {
    const RuleTable& t = RuleTable::builtin();
    REQUIRE(t.rows().size() == 4);

    const Gl2Type T = Gl2Type::Tetrahedral;
    const Gl2Type O = Gl2Type::Octahedral;
    const Gl2Type N = Gl2Type::NotSolvablePolyhedral;

    CHECK(t.lookup(3, O, 3, O) == PoleInterval{0, 1});
    CHECK(t.lookup(3, O, 3, N) == PoleInterval{0, 1});
    CHECK(t.lookup(3, N, 3, O) == PoleInterval{0, 1});
    CHECK(t.lookup(3, N, 3, N) == PoleInterval{0, 1});
    CHECK(t.lookup(3, T, 3, N) == PoleInterval{0, 0});
    CHECK(t.lookup(3, T, 3, T) == PoleInterval{0, 0});

    CHECK(t.lookup(4, T, 4, T) == PoleInterval{0, 4});
    CHECK(t.lookup(4, O, 4, O) == PoleInterval{0, 1});
    CHECK(t.lookup(4, N, 4, N) == PoleInterval{0, 1});
    CHECK(t.lookup(4, T, 4, O) == PoleInterval{0, 0});
    CHECK(t.lookup(4, O, 4, N) == PoleInterval{0, 0});

    // every other power pair is entire under the lemma's hypotheses
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n) {
            if (m == n && (m == 3 || m == 4)) continue;
            CHECK(t.lookup(m, N, n, N) == PoleInterval{0, 0});
        }
    CHECK(t.lookup(3, N, 4, N) == PoleInterval{0, 0});
    CHECK(t.lookup(4, N, 3, N) == PoleInterval{0, 0});
}

TEST_CASE("rule table json round trip") {
    const std::string text = R"({"rows": [
        {"m": 3, "n": 3, "left": "ON", "right": "ON", "lo": 0, "hi": 1},
        {"m": 4, "n": 4, "left": "T", "right": "T", "lo": 0, "hi": 2}
    ]})";
    RuleTable t = RuleTable::parse(text);
    REQUIRE(t.rows().size() == 2);
    CHECK(t.lookup(3, Gl2Type::NotSolvablePolyhedral, 3, Gl2Type::Octahedral) ==
          PoleInterval{0, 1});
    CHECK(t.lookup(4, Gl2Type::Tetrahedral, 4, Gl2Type::Tetrahedral) == PoleInterval{0, 2});
    CHECK(t.lookup(4, Gl2Type::Octahedral, 4, Gl2Type::Octahedral) == PoleInterval{0, 0});

    SUBCASE("load from file") {
        const std::string path = "rule_table_test.json";
        {
            std::ofstream out(path);
            out << text;
        }
        RuleTable u = RuleTable::load(path);
        std::remove(path.c_str());
        CHECK(u.rows().size() == 2);
        CHECK(u.lookup(4, Gl2Type::Tetrahedral, 4, Gl2Type::Tetrahedral) ==
              PoleInterval{0, 2});
        CHECK_THROWS_AS(RuleTable::load("no_such_rule_table.json"), Error);
    }

    SUBCASE("malformed input") {
        CHECK_THROWS_AS(RuleTable::parse("not json"), Error);
        CHECK_THROWS_AS(RuleTable::parse("[]"), Error);
        CHECK_THROWS_AS(RuleTable::parse(R"({"rows": [{"m": 3}]})"), Error);
        CHECK_THROWS_AS(
            RuleTable::parse(
                R"({"rows": [{"m": 3, "n": 3, "left": "X", "right": "N", "lo": 0, "hi": 1}]})"),
            Error);
        CHECK_THROWS_AS(
            RuleTable::parse(
                R"({"rows": [{"m": 5, "n": 3, "left": "N", "right": "N", "lo": 0, "hi": 1}]})"),
            Error);
        CHECK_THROWS_AS(
            RuleTable::parse(
                R"({"rows": [{"m": 3, "n": 3, "left": "N", "right": "N", "lo": 2, "hi": 1}]})"),
            Error);
        try {
            RuleTable::parse("not json");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrKind::ParseError);
        }
    }
}

TEST_CASE("cuspidality of single parts") {
    CaseAssumptions cas;
    cas.add_slot("pi", SlotTag::GenericNonDihedral);
    cas.add_slot("pt", SlotTag::Tetrahedral);
    cas.add_slot("po", SlotTag::Octahedral);
    cas.add_slot("pn", SlotTag::NotSolvablePolyhedral);
    cas.add_slot("pd", SlotTag::Dihedral);
    cas.add_slot("pu", SlotTag::Unrestricted);
    cas.add_slot("ps", SlotTag::NonTetrahedralNonDihedral);
    OpaqueInfo cusp3;
    cusp3.rank = 3;
    cas.add_opaque("pi0", cusp3);
    cas.add_char_generator("chi");
    cas.finalize();

    CHECK(cuspidality(Atom::character(gen("chi")), cas).kind == CuspKind::Cuspidal);
    CHECK(cuspidality(Atom::one(), cas).kind == CuspKind::Cuspidal);

    // A^1 is cuspidal on every mask
    for (const char* s : {"pi", "pt", "po", "pn", "pd", "pu"})
        CHECK(cuspidality(a_pow(s, 1), cas).kind == CuspKind::Cuspidal);

    // A^2: cuspidal iff non-dihedral
    CHECK(cuspidality(a_pow("pi", 2), cas).kind == CuspKind::Cuspidal);
    CHECK(cuspidality(a_pow("pu", 2), cas).kind == CuspKind::Unknown);
    {
        Cuspidality c = cuspidality(a_pow("pd", 2), cas);
        REQUIRE(c.kind == CuspKind::Isobaric);
        REQUIRE(c.decomposition.has_value());
        CHECK(c.decomposition->terms.size() == 2);
        CHECK(rep_degree(*c.decomposition, cas) == 3);
    }

    // A^3: cuspidal iff neither dihedral nor tetrahedral
    CHECK(cuspidality(a_pow("ps", 3), cas).kind == CuspKind::Cuspidal);
    CHECK(cuspidality(a_pow("po", 3), cas).kind == CuspKind::Cuspidal);
    CHECK(cuspidality(a_pow("pi", 3), cas).kind == CuspKind::Unknown);
    {
        Cuspidality c = cuspidality(a_pow("pt", 3, gen("chi")), cas);
        REQUIRE(c.kind == CuspKind::Isobaric);
        CHECK(c.decomposition->terms.size() == 2);
        // both pieces are chi-twisted copies of the slot form
        for (const auto& [atom, mult] : c.decomposition->terms) {
            CHECK(atom.gl2.at("pt") == 1);
            CHECK(mult == 1);
        }
    }

    // A^4: cuspidal iff not solvable polyhedral
    CHECK(cuspidality(a_pow("pn", 4), cas).kind == CuspKind::Cuspidal);
    CHECK(cuspidality(a_pow("ps", 4), cas).kind == CuspKind::Unknown);
    {
        Cuspidality c = cuspidality(a_pow("po", 4), cas);
        REQUIRE(c.kind == CuspKind::Isobaric);
        CHECK(c.decomposition->terms.size() == 2);
        CHECK(rep_degree(*c.decomposition, cas) == 5);
    }
    {
        Cuspidality c = cuspidality(a_pow("pd", 4), cas);
        REQUIRE(c.kind == CuspKind::Isobaric);
        CHECK(c.decomposition->terms.size() == 3);
        CHECK(rep_degree(*c.decomposition, cas) == 5);
    }

    // assignment overrides the mask
    Assignment asg;
    asg.types["pu"] = Gl2Type::Dihedral;
    CHECK(cuspidality(a_pow("pu", 2), cas, &asg).kind == CuspKind::Isobaric);
    asg.types["pu"] = Gl2Type::NotSolvablePolyhedral;
    CHECK(cuspidality(a_pow("pu", 4), cas, &asg).kind == CuspKind::Cuspidal);

    // opaque parts follow their declarations
    CHECK(cuspidality(Atom::opaque_part("pi0"), cas).kind == CuspKind::Cuspidal);
    CHECK(cuspidality(Atom::opaque_part("nu_po"), cas).kind == CuspKind::Cuspidal);
    CHECK(cuspidality(Atom::opaque_part("dih2_pd"), cas).kind == CuspKind::Unknown);
    CHECK(cuspidality(Atom::opaque_part("dih4a_pd", true), cas).kind == CuspKind::Unknown);
}

TEST_CASE("cuspidality of functorial products") {
    CaseAssumptions cas;
    cas.add_slot("pi", SlotTag::GenericNonDihedral);
    cas.add_slot("pi2", SlotTag::GenericNonDihedral);
    cas.add_slot("pi3", SlotTag::GenericNonDihedral);
    cas.add_slot("pd", SlotTag::Dihedral);
    OpaqueInfo cusp3;
    cusp3.rank = 3;
    cas.add_opaque("pi0", cusp3);
    cas.declare_slot_inequivalent("pi", "pi2");
    cas.declare_shape_inequivalent(Atom::opaque_part("pi0"), Atom::gl2_part("pi", 2));
    cas.finalize();

    auto prod = [](const Atom& a, const Atom& b) {
        Atom out = a;
        for (const auto& [s, l] : b.gl2) out.gl2[s] = l;
        for (const auto& [p, n] : b.opaque) out.opaque[p] += n;
        out.twist = out.twist * b.twist;
        return out;
    };

    // GL(2) x GL(2): cuspidal for inequivalent non-dihedral pairs
    CHECK(cuspidality(prod(a_pow("pi", 1), a_pow("pi2", 1)), cas).kind == CuspKind::Cuspidal);
    CHECK(cuspidality(prod(a_pow("pi", 1), a_pow("pi3", 1)), cas).kind == CuspKind::Unknown);
    CHECK(cuspidality(prod(a_pow("pi", 1), a_pow("pd", 1)), cas).kind == CuspKind::Unknown);

    // GL(2) x GL(3) through the square of another slot
    CHECK(cuspidality(prod(a_pow("pi", 1), a_pow("pi2", 2)), cas).kind == CuspKind::Cuspidal);
    CHECK(cuspidality(prod(a_pow("pi", 2), a_pow("pi2", 1)), cas).kind == CuspKind::Cuspidal);
    CHECK(cuspidality(prod(a_pow("pi", 1), a_pow("pi3", 2)), cas).kind == CuspKind::Unknown);
    CHECK(cuspidality(prod(a_pow("pd", 1), a_pow("pi2", 2)), cas).kind == CuspKind::Unknown);

    // GL(2) x GL(3) against a declared opaque: needs the shape constraint
    CHECK(cuspidality(prod(a_pow("pi", 1), Atom::opaque_part("pi0")), cas).kind ==
          CuspKind::Cuspidal);
    CHECK(cuspidality(prod(a_pow("pi2", 1), Atom::opaque_part("pi0")), cas).kind ==
          CuspKind::Unknown);

    // twists never change the answer
    Atom tw = prod(a_pow("pi", 1), a_pow("pi2", 2));
    tw.twist = gen("omega_pi", -3);
    CHECK(cuspidality(tw, cas).kind == CuspKind::Cuspidal);

    // no criterion for higher-rank pairs or triple products
    CHECK(cuspidality(prod(a_pow("pi", 2), a_pow("pi2", 2)), cas).kind == CuspKind::Unknown);
    CHECK(cuspidality(prod(a_pow("pi", 1), a_pow("pi2", 3)), cas).kind == CuspKind::Unknown);
    CHECK(cuspidality(prod(prod(a_pow("pi", 1), a_pow("pi2", 1)), a_pow("pi3", 1)), cas).kind ==
          CuspKind::Unknown);
    CHECK(cuspidality(prod(Atom::opaque_part("pi0"), Atom::opaque_part("pi0", true)), cas).kind ==
          CuspKind::Unknown);

    // assignment sharpening: unrestricted slot pinned non-dihedral
    CaseAssumptions cas2;
    cas2.add_slot("pi", SlotTag::Unrestricted);
    cas2.add_slot("pi2", SlotTag::GenericNonDihedral);
    cas2.declare_slot_inequivalent("pi", "pi2");
    cas2.finalize();
    Atom pair = prod(a_pow("pi", 1), a_pow("pi2", 1));
    CHECK(cuspidality(pair, cas2).kind == CuspKind::Unknown);
    Assignment asg;
    asg.types["pi"] = Gl2Type::Octahedral;
    CHECK(cuspidality(pair, cas2, &asg).kind == CuspKind::Cuspidal);
}

TEST_CASE("character factors") {
    CaseAssumptions cas = two_slot_case(SlotTag::GenericNonDihedral,
                                        SlotTag::GenericNonDihedral);
    CHECK(pole_interval(fs({}, cas), cas) == PoleInterval{1, 1});
    CHECK(pole_interval(fs({Atom::character(gen("chi"))}, cas), cas) == PoleInterval{0, 1});
    CHECK(pole_interval(fs({Atom::character(gen("chi", 3)),
                            Atom::character(gen("chi", -3))}, cas), cas) == PoleInterval{1, 1});

    CaseAssumptions strict;
    strict.add_char_generator("chi");
    strict.add_relation(gen("chi", 2));
    strict.declare_nontrivial(gen("chi"));
    strict.finalize();
    CHECK(pole_interval(fs({Atom::character(gen("chi"))}, strict), strict) ==
          PoleInterval{0, 0});
    CHECK(pole_interval(fs({Atom::character(gen("chi", 2))}, strict), strict) ==
          PoleInterval{1, 1});
}

TEST_CASE("cuspidal pairings") {
    CaseAssumptions cas = two_slot_case(SlotTag::GenericNonDihedral,
                                        SlotTag::GenericNonDihedral);

    SUBCASE("diagonal pairing has a simple pole") {
        FactorSymbol diag = fs({a_pow("pi", 1), dual_atom(a_pow("pi", 1))}, cas);
        CHECK(pole_interval(diag, cas) == PoleInterval{1, 1});
        FactorSymbol diag2 = fs({a_pow("pi", 2), a_pow("pi", 2)}, cas);
        CHECK(pole_interval(diag2, cas) == PoleInterval{1, 1});
    }

    SUBCASE("inequivalent slots are entire") {
        CHECK(pole_interval(fs({a_pow("pi", 1), dual_atom(a_pow("pi2", 1))}, cas), cas) ==
              PoleInterval{0, 0});
        CHECK(pole_interval(fs({a_pow("pi", 2), a_pow("pi2", 2, gen("chi"))}, cas), cas) ==
              PoleInterval{0, 0});
    }

    SUBCASE("rank screen") {
        // unequal degrees force entireness even with no declarations
        CaseAssumptions loose;
        loose.add_slot("pi", SlotTag::GenericNonDihedral);
        loose.add_slot("pi2", SlotTag::GenericNonDihedral);
        loose.finalize();
        CHECK(pole_interval(fs({a_pow("pi", 1), a_pow("pi2", 2)}, loose), loose) ==
              PoleInterval{0, 0});
        CHECK(pole_interval(fs({a_pow("pi", 3), a_pow("pi2", 4)}, loose), loose) ==
              PoleInterval{0, 0});
    }

    SUBCASE("unknown duality keeps the pole possible") {
        CaseAssumptions loose;
        loose.add_slot("pi", SlotTag::GenericNonDihedral);
        loose.add_slot("pi2", SlotTag::GenericNonDihedral);
        loose.finalize();
        CHECK(pole_interval(fs({a_pow("pi", 1), a_pow("pi2", 1)}, loose), loose) ==
              PoleInterval{0, 1});
    }

    SUBCASE("opaque diagonal") {
        CaseAssumptions oc;
        OpaqueInfo info;
        info.rank = 3;
        oc.add_opaque("pi0", info);
        oc.finalize();
        FactorSymbol diag = fs({Atom::opaque_part("pi0"), Atom::opaque_part("pi0", true)}, oc);
        CHECK(pole_interval(diag, oc) == PoleInterval{1, 1});
        // pi0 x pi0 without dual: unknown central character ratio
        FactorSymbol same = fs({Atom::opaque_part("pi0"), Atom::opaque_part("pi0")}, oc);
        CHECK(pole_interval(same, oc) == PoleInterval{0, 1});
    }
}

TEST_CASE("counting table inside the engine") {
    SUBCASE("both tetrahedral") {
        CaseAssumptions cas = two_slot_case(SlotTag::Tetrahedral, SlotTag::Tetrahedral);
        CHECK(pole_interval(fs({a_pow("pi", 4), a_pow("pi2", 4)}, cas), cas) ==
              PoleInterval{0, 4});
        CHECK(pole_interval(fs({a_pow("pi", 4), a_pow("pi2", 4, gen("chi"))}, cas), cas) ==
              PoleInterval{0, 4});
        CHECK(pole_interval(fs({a_pow("pi", 3), a_pow("pi2", 4)}, cas), cas) ==
              PoleInterval{0, 0});
        CHECK(pole_interval(fs({a_pow("pi", 3), a_pow("pi2", 3)}, cas), cas) ==
              PoleInterval{0, 0});
    }

    SUBCASE("cuspidal rows tighten through the comparison") {
        CaseAssumptions cas = two_slot_case(SlotTag::NonTetrahedralNonDihedral,
                                            SlotTag::NonTetrahedralNonDihedral);
        // hull over (O|N) x (O|N); the (N, N) branch stays open
        CHECK(pole_interval(fs({a_pow("pi", 4), a_pow("pi2", 4)}, cas), cas) ==
              PoleInterval{0, 1});
        CHECK(pole_interval(fs({a_pow("pi", 3), a_pow("pi2", 3, gen("chi"))}, cas), cas) ==
              PoleInterval{0, 1});
        // off-table pair under the same hypotheses
        CHECK(pole_interval(fs({a_pow("pi", 3), a_pow("pi2", 4)}, cas), cas) ==
              PoleInterval{0, 0});
    }

    SUBCASE("declared fourth-power inequivalence closes the gap") {
        CaseAssumptions cas;
        cas.add_slot("pi", SlotTag::NotSolvablePolyhedral);
        cas.add_slot("pi2", SlotTag::GenericNonDihedral);
        cas.declare_slot_inequivalent("pi", "pi2");
        cas.declare_exact_inequivalent(Atom::gl2_part("pi", 4), Atom::gl2_part("pi2", 4));
        cas.finalize();
        CHECK(pole_interval(fs({a_pow("pi", 4), a_pow("pi2", 4)}, cas), cas) ==
              PoleInterval{0, 0});
    }

    SUBCASE("nontrivial twist ratio of central characters") {
        CaseAssumptions cas;
        cas.add_slot("pi", SlotTag::NotSolvablePolyhedral);
        cas.add_slot("pi2", SlotTag::GenericNonDihedral);
        cas.add_char_generator("chi");
        cas.add_relation(gen("chi", 2));
        cas.declare_nontrivial(gen("chi"));
        cas.declare_slot_inequivalent("pi", "pi2");
        cas.finalize();
        CHECK(pole_interval(fs({a_pow("pi", 4), a_pow("pi2", 4, gen("chi"))}, cas), cas) ==
              PoleInterval{0, 0});
    }

    SUBCASE("table requires the inequivalence declaration") {
        CaseAssumptions cas = two_slot_case(SlotTag::Tetrahedral, SlotTag::Tetrahedral,
                                            /*inequivalent=*/false);
        // without it the row is off; decomposition still bounds the possibly
        // equivalent pair (cubic twist pairings give at most two matches on
        // top of the square pairing)
        CHECK(pole_interval(fs({a_pow("pi", 4), a_pow("pi2", 4)}, cas), cas) ==
              PoleInterval{0, 3});
    }

    SUBCASE("custom table overrides the builtin rows") {
        CaseAssumptions cas = two_slot_case(SlotTag::Tetrahedral, SlotTag::Tetrahedral);
        RuleTable t = RuleTable::parse(
            R"({"rows": [{"m": 4, "n": 4, "left": "T", "right": "T", "lo": 1, "hi": 2}]})");
        CHECK(pole_interval(fs({a_pow("pi", 4), a_pow("pi2", 4)}, cas), cas, t) ==
              PoleInterval{1, 2});
    }
}

TEST_CASE("pole oracle: zeta^6 L(A4 x A4) families") {
    SUBCASE("both non-tetrahedral, duality open") {
        CaseAssumptions cas = two_slot_case(SlotTag::NonTetrahedralNonDihedral,
                                            SlotTag::NonTetrahedralNonDihedral);
        FactorMultiset d;
        d.add(fs({}, cas), 6);
        d.add(fs({a_pow("pi", 4), a_pow("pi2", 4)}, cas), 1);
        CHECK(total_pole_interval(d, cas) == PoleInterval{6, 7});
    }

    SUBCASE("fifth symmetric-power wall with declared inequivalence") {
        CaseAssumptions cas;
        cas.add_slot("pi", SlotTag::NotSolvablePolyhedral);
        cas.add_slot("pi2", SlotTag::GenericNonDihedral);
        cas.add_char_generator("chi");
        cas.add_relation(gen("chi", 2));
        cas.declare_nontrivial(gen("chi"));
        cas.declare_slot_inequivalent("pi", "pi2");
        cas.declare_exact_inequivalent(Atom::gl2_part("pi", 4), Atom::gl2_part("pi2", 4));
        cas.finalize();
        FactorMultiset d;
        d.add(fs({}, cas), 6);
        d.add(fs({a_pow("pi", 4), a_pow("pi2", 4)}, cas), 5);
        d.add(fs({a_pow("pi", 4), a_pow("pi2", 4, gen("chi"))}, cas), 4);
        CHECK(total_pole_interval(d, cas) == PoleInterval{6, 6});
    }
}

TEST_CASE("pole oracle: triple product of inequivalent forms") {
    CaseAssumptions cas;
    cas.add_slot("pi", SlotTag::GenericNonDihedral);
    cas.add_slot("pi2", SlotTag::GenericNonDihedral);
    cas.add_slot("pi3", SlotTag::GenericNonDihedral);
    cas.declare_slot_inequivalent("pi", "pi2");
    cas.declare_slot_inequivalent("pi", "pi3");
    cas.declare_slot_inequivalent("pi2", "pi3");
    cas.finalize();

    VirtualRep rep;
    rep.add(Atom::gl2_part("pi", 1), 1);
    rep.add(Atom::gl2_part("pi2", 1), 1);
    rep.add(Atom::gl2_part("pi3", 1), 1);
    FactorMultiset d = expand_pairing(rep, cas);
    CHECK(d.factors.size() == 9);
    CHECK(total_pole_interval(d, cas) == PoleInterval{3, 3});
}

TEST_CASE("dihedral refinement") {
    CaseAssumptions cas;
    cas.add_slot("pi2", SlotTag::Dihedral);
    cas.add_char_generator("chi");
    cas.finalize();
    const CharacterExpr etad = gen("etad_pi2");

    SUBCASE("standalone powers") {
        CHECK(pole_interval(fs({a_pow("pi2", 2)}, cas), cas) == PoleInterval{0, 0});
        CHECK(pole_interval(fs({a_pow("pi2", 3)}, cas), cas) == PoleInterval{0, 1});
        CHECK(pole_interval(fs({a_pow("pi2", 4)}, cas), cas) == PoleInterval{1, 2});
        CHECK(pole_interval(fs({a_pow("pi2", 1)}, cas), cas) == PoleInterval{0, 0});
    }

    SUBCASE("twisted squares") {
        // unknown twist: at most one split character can match it
        CHECK(pole_interval(fs({a_pow("pi2", 2, gen("chi"))}, cas), cas) == PoleInterval{0, 1});
        // the certain quadratic self-twist recovers the pole of zeta
        CHECK(pole_interval(fs({a_pow("pi2", 2, etad)}, cas), cas) == PoleInterval{1, 1});
        CHECK(pole_interval(fs({a_pow("pi2", 4, gen("chi"))}, cas), cas) == PoleInterval{0, 2});
    }

    SUBCASE("split pieces directly") {
        CHECK(pole_interval(fs({Atom::opaque_part("dih2_pi2")}, cas), cas) ==
              PoleInterval{0, 0});
        CHECK(pole_interval(fs({Atom::opaque_part("dih4a_pi2")}, cas), cas) ==
              PoleInterval{0, 1});
        CHECK(pole_interval(fs({Atom::opaque_part("dih4b_pi2")}, cas), cas) ==
              PoleInterval{0, 0});
        CHECK(pole_interval(fs({Atom::opaque_part("dih3_pi2", true)}, cas), cas) ==
              PoleInterval{0, 1});
        CHECK(pole_interval(fs({Atom::opaque_part("nu_po")}, one_oct_case()), one_oct_case()) ==
              PoleInterval{0, 0});
    }
}

TEST_CASE("dihedral against cuspidal content") {
    CaseAssumptions cas;
    cas.add_slot("pi", SlotTag::GenericNonDihedral);
    cas.add_slot("pi2", SlotTag::Dihedral);
    cas.declare_slot_inequivalent("pi", "pi2");
    cas.finalize();

    CHECK(pole_interval(fs({a_pow("pi2", 2), a_pow("pi", 1)}, cas), cas) == PoleInterval{0, 0});
    CHECK(pole_interval(fs({a_pow("pi2", 2), a_pow("pi", 2)}, cas), cas) == PoleInterval{0, 0});
    CHECK(pole_interval(fs({a_pow("pi2", 4), a_pow("pi", 4)}, cas), cas) == PoleInterval{0, 2});
    CHECK(pole_interval(fs({a_pow("pi2", 1), a_pow("pi", 1)}, cas), cas) == PoleInterval{0, 0});
}

TEST_CASE("unrestricted hull covers every concrete assignment") {
    CaseAssumptions cas = two_slot_case(SlotTag::Unrestricted, SlotTag::Unrestricted);
    PoleInterval hull = pole_interval(fs({a_pow("pi", 4), a_pow("pi2", 4)}, cas), cas);
    CHECK(hull.lo == 0);
    CHECK(hull.hi >= 4);

    const SlotTag tags[] = {SlotTag::Dihedral, SlotTag::Tetrahedral, SlotTag::Octahedral,
                            SlotTag::NotSolvablePolyhedral};
    for (SlotTag t1 : tags) {
        for (SlotTag t2 : tags) {
            CaseAssumptions sub = two_slot_case(t1, t2);
            PoleInterval iv = pole_interval(fs({a_pow("pi", 4), a_pow("pi2", 4)}, sub), sub);
            CHECK(hull.lo <= iv.lo);
            CHECK(iv.hi <= hull.hi);
        }
    }
}

TEST_CASE("unsupported factors") {
    SUBCASE("declared non-cuspidal opaque has no pieces") {
        CaseAssumptions cas;
        OpaqueInfo info;
        info.rank = 3;
        info.cuspidal = false;
        cas.add_opaque("e0", info);
        cas.finalize();
        CHECK_THROWS_AS(pole_interval(fs({Atom::opaque_part("e0")}, cas), cas), Error);
        try {
            pole_interval(fs({Atom::opaque_part("e0")}, cas), cas);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrKind::UnsupportedCase);
        }
    }

    SUBCASE("unresolvable product cuspidality") {
        CaseAssumptions cas;
        cas.add_slot("pi", SlotTag::GenericNonDihedral);
        cas.add_slot("pi2", SlotTag::GenericNonDihedral);
        cas.add_slot("pi3", SlotTag::GenericNonDihedral);
        cas.finalize();
        // no inequivalence declarations: every bipartition stays unknown
        CHECK_THROWS_AS(
            pole_interval(fs({a_pow("pi", 2), a_pow("pi2", 2), a_pow("pi3", 1)}, cas), cas),
            Error);
    }

    SUBCASE("negative exponent in a total") {
        CaseAssumptions cas = two_slot_case(SlotTag::GenericNonDihedral,
                                            SlotTag::GenericNonDihedral);
        FactorMultiset d;
        d.add(fs({}, cas), -1);
        CHECK_THROWS_AS(total_pole_interval(d, cas), Error);
    }
}

TEST_CASE("totals are exponent weighted") {
    CaseAssumptions cas = two_slot_case(SlotTag::GenericNonDihedral,
                                        SlotTag::GenericNonDihedral);
    FactorMultiset d;
    d.add(fs({}, cas), 3);
    d.add(fs({a_pow("pi", 1), dual_atom(a_pow("pi", 1))}, cas), 2);
    d.add(fs({a_pow("pi", 1), a_pow("pi2", 1)}, cas), 4);
    CHECK(total_pole_interval(d, cas) == PoleInterval{5, 5});
    CHECK(total_pole_interval(FactorMultiset{}, cas) == PoleInterval{0, 0});
}

TEST_CASE("duality symmetry") {
    CaseAssumptions cas;
    cas.add_slot("pi", SlotTag::GenericNonDihedral);
    cas.add_slot("pi2", SlotTag::Unrestricted);
    cas.add_char_generator("chi");
    cas.declare_slot_inequivalent("pi", "pi2");
    cas.finalize();

    std::mt19937 rng(421);
    std::uniform_int_distribution<int> pick_level(1, 4);
    std::uniform_int_distribution<int> pick_exp(-1, 1);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Atom> sides;
        sides.push_back(a_pow("pi", pick_level(rng), gen("chi", pick_exp(rng))));
        if (coin(rng)) sides.push_back(a_pow("pi2", pick_level(rng)));
        FactorSymbol f = fs(sides, cas);
        FactorSymbol fd = f.dual(cas);
        PoleInterval a = pole_interval(f, cas);
        PoleInterval b = pole_interval(fd, cas);
        CAPTURE(trial);
        CHECK(a == b);
    }
}

TEST_CASE("monotone under extra factors") {
    CaseAssumptions cas = two_slot_case(SlotTag::NonTetrahedralNonDihedral,
                                        SlotTag::NonTetrahedralNonDihedral);
    FactorMultiset d;
    d.add(fs({a_pow("pi", 4), a_pow("pi2", 4)}, cas), 1);
    PoleInterval before = total_pole_interval(d, cas);
    d.add(fs({}, cas), 2);
    PoleInterval after = total_pole_interval(d, cas);
    CHECK(after.lo >= before.lo);
    CHECK(after.hi >= before.hi);
    CHECK(after == before + PoleInterval{2, 2});
}
