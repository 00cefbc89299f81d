#include "lscert/fixtures.hpp"

#include "lscert/repring.hpp"

namespace lscert {

namespace {

Atom g(const std::string& slot, int level, CharacterExpr tw = CharacterExpr::one()) {
    return Atom::gl2_part(slot, level, std::move(tw));
}

// Tensor-assemble distinct-slot parts into one isobaric term.
Atom prod(std::initializer_list<Atom> parts) {
    Atom out;
    for (const Atom& p : parts) {
        for (const auto& [s, l] : p.gl2) out.gl2[s] = l;
        for (const auto& [o, n] : p.opaque) out.opaque[o] += n;
        out.twist = out.twist * p.twist;
    }
    return out;
}

CharacterExpr chi1() { return CharacterExpr::gen("chi"); }

// Auxiliary square for a twisted pair of adjoint squares: eliminates
// L(A2(pi) x A2(pi2)@chi) with chi^2 = 1, slots inequivalent non-dihedral.
Certificate gl3xgl3() {
    CaseAssumptions cas;
    cas.add_slot("pi", SlotTag::NonTetrahedralNonDihedral);
    cas.add_slot("pi2", SlotTag::GenericNonDihedral);
    cas.add_char_generator("chi");
    cas.add_relation(chi1().pow(2));
    cas.declare_slot_inequivalent("pi", "pi2");
    cas.finalize();

    Certificate c;
    c.name = "gl3xgl3";
    c.assumptions = cas;
    CoefficientVector cv;
    cv.c[{2, 0, 0}] = 2;
    cv.c[{0, 2, 1}] = 1;
    cv.c[{2, 2, 1}] = 1;
    c.coefficients = cv;
    c.chi = chi1();
    c.target = FactorSymbol::make({g("pi", 2), g("pi2", 2, chi1())}, cas);
    c.expected = Expected{8, 0, 7};
    return c;
}

// Same square under a both-tetrahedral case: the fourth-power pair class
// rewrites through the tetrahedral decomposition, raising the count past
// the weaker pole bound.
Certificate gl3xgl3_tetra() {
    CaseAssumptions cas;
    cas.add_slot("pi", SlotTag::Tetrahedral);
    cas.add_slot("pi2", SlotTag::Tetrahedral);
    cas.add_char_generator("chi");
    cas.add_relation(chi1().pow(2));
    cas.declare_slot_inequivalent("pi", "pi2");
    cas.finalize();

    Certificate c;
    c.name = "gl3xgl3_tetra";
    c.assumptions = cas;
    CoefficientVector cv;
    cv.c[{2, 0, 0}] = 2;
    cv.c[{0, 2, 1}] = 1;
    cv.c[{2, 2, 1}] = 1;
    c.coefficients = cv;
    c.chi = chi1();
    c.target = FactorSymbol::make({g("pi", 2), g("pi2", 2, chi1())}, cas);
    c.rewrites.push_back({FactorSymbol::make({g("pi", 4), g("pi2", 2, chi1())}, cas), "pi"});
    c.expected = Expected{12, 0, 10};
    return c;
}

// Eliminates L(A3(pi) x A2(pi2)@chi) under chi^2 * omega_pi = 1.
Certificate gl4xgl3() {
    CaseAssumptions cas;
    cas.add_slot("pi", SlotTag::NonTetrahedralNonDihedral);
    cas.add_slot("pi2", SlotTag::GenericNonDihedral);
    cas.add_char_generator("chi");
    cas.add_relation(chi1().pow(2) * CharacterExpr::gen(CaseAssumptions::omega_name("pi")));
    cas.declare_slot_inequivalent("pi", "pi2");
    cas.finalize();

    Certificate c;
    c.name = "gl4xgl3";
    c.assumptions = cas;
    CoefficientVector cv;
    cv.c[{2, 0, 0}] = 1;
    cv.c[{1, 2, 1}] = 2;
    cv.c[{2, 2, 0}] = 1;
    c.coefficients = cv;
    c.chi = chi1();
    c.target = FactorSymbol::make({g("pi", 3), g("pi2", 2, chi1())}, cas);
    c.expected = Expected{8, 0, 7};
    return c;
}

// Eliminates L(A4(pi) x A1(pi2)) for pi with cuspidal fourth power and
// self-dual pi2: the trivial central character merges the dual copies.
Certificate gl5xgl2() {
    CaseAssumptions cas;
    cas.add_slot("pi", SlotTag::NotSolvablePolyhedral);
    cas.add_slot("pi2", SlotTag::GenericNonDihedral);
    cas.add_relation(CharacterExpr::gen(CaseAssumptions::omega_name("pi2")));
    cas.declare_slot_inequivalent("pi", "pi2");
    cas.finalize();

    Certificate c;
    c.name = "gl5xgl2";
    c.assumptions = cas;
    CoefficientVector cv;
    cv.c[{2, 1, 0}] = 2;
    cv.c[{2, 0, 0}] = 1;
    cv.c[{2, 2, 0}] = 1;
    c.coefficients = cv;
    c.target = FactorSymbol::make({g("pi", 4), g("pi2", 1)}, cas);
    c.expected = Expected{8, 0, 7};
    return c;
}

// Triple product of three pairwise inequivalent non-dihedral forms.
Certificate gl2xgl2xgl2() {
    CaseAssumptions cas;
    cas.add_slot("pi", SlotTag::GenericNonDihedral);
    cas.add_slot("pi2", SlotTag::GenericNonDihedral);
    cas.add_slot("pi3", SlotTag::GenericNonDihedral);
    cas.declare_slot_inequivalent("pi", "pi2");
    cas.declare_slot_inequivalent("pi", "pi3");
    cas.declare_slot_inequivalent("pi2", "pi3");
    cas.finalize();

    Certificate c;
    c.name = "gl2xgl2xgl2";
    c.assumptions = cas;
    VirtualRep rep;
    rep.add(prod({g("pi", 1), g("pi2", 1)}), 1);
    rep.add(dual_atom(g("pi3", 1)), 1);
    rep.add(prod({g("pi", 2), dual_atom(g("pi3", 1))}), 1);
    c.isobaric = rep;
    c.target = FactorSymbol::make({g("pi", 1), g("pi2", 1), g("pi3", 1)}, cas);
    c.expected = Expected{2, 2, 3};
    return c;
}

// Triple product against an opaque rank-3 form declared away from both
// adjoint squares.
Certificate gl2xgl2xgl3() {
    CaseAssumptions cas;
    cas.add_slot("pi", SlotTag::GenericNonDihedral);
    cas.add_slot("pi2", SlotTag::GenericNonDihedral);
    OpaqueInfo pi0;
    pi0.rank = 3;
    cas.add_opaque("pi0", pi0);
    cas.declare_slot_inequivalent("pi", "pi2");
    cas.declare_shape_inequivalent(Atom::opaque_part("pi0"), g("pi", 2));
    cas.declare_shape_inequivalent(Atom::opaque_part("pi0"), g("pi2", 2));
    cas.finalize();

    Certificate c;
    c.name = "gl2xgl2xgl3";
    c.assumptions = cas;
    VirtualRep rep;
    rep.add(prod({g("pi", 1), Atom::opaque_part("pi0")}), 1);
    rep.add(dual_atom(g("pi2", 1)), 1);
    rep.add(prod({g("pi", 2), dual_atom(g("pi2", 1))}), 1);
    c.isobaric = rep;
    c.target = FactorSymbol::make({g("pi", 1), g("pi2", 1), Atom::opaque_part("pi0")}, cas);
    c.expected = Expected{2, 2, 3};
    return c;
}

// Pair of adjoint squares against a first power, all slots inequivalent;
// the second slot is non-tetrahedral.
Certificate gl2xgl3xgl3() {
    CaseAssumptions cas;
    cas.add_slot("pi", SlotTag::GenericNonDihedral);
    cas.add_slot("pi2", SlotTag::NonTetrahedralNonDihedral);
    cas.add_slot("pi3", SlotTag::GenericNonDihedral);
    cas.declare_slot_inequivalent("pi", "pi2");
    cas.declare_slot_inequivalent("pi", "pi3");
    cas.declare_slot_inequivalent("pi2", "pi3");
    cas.finalize();

    Certificate c;
    c.name = "gl2xgl3xgl3";
    c.assumptions = cas;
    VirtualRep rep;
    rep.add(prod({g("pi", 1), g("pi2", 2)}), 2);
    rep.add(g("pi3", 2), 1);
    rep.add(prod({g("pi2", 2), g("pi3", 2)}), 1);
    c.isobaric = rep;
    c.target = FactorSymbol::make({g("pi", 1), g("pi2", 2), g("pi3", 2)}, cas);
    c.expected = Expected{4, 4, 7};
    return c;
}

// Same construction with both square slots tetrahedral: the two
// fourth-power classes rewrite into extra target and dual-target copies.
Certificate gl2xgl3xgl3_tetra() {
    CaseAssumptions cas;
    cas.add_slot("pi", SlotTag::GenericNonDihedral);
    cas.add_slot("pi2", SlotTag::Tetrahedral);
    cas.add_slot("pi3", SlotTag::Tetrahedral);
    cas.declare_slot_inequivalent("pi", "pi2");
    cas.declare_slot_inequivalent("pi", "pi3");
    cas.declare_slot_inequivalent("pi2", "pi3");
    cas.finalize();

    Certificate c;
    c.name = "gl2xgl3xgl3_tetra";
    c.assumptions = cas;
    VirtualRep rep;
    rep.add(prod({g("pi", 1), g("pi2", 2)}), 2);
    rep.add(g("pi3", 2), 1);
    rep.add(prod({g("pi2", 2), g("pi3", 2)}), 1);
    c.isobaric = rep;
    c.target = FactorSymbol::make({g("pi", 1), g("pi2", 2), g("pi3", 2)}, cas);
    c.rewrites.push_back(
        {FactorSymbol::make({g("pi", 1), g("pi2", 4), g("pi3", 2)}, cas), "pi2"});
    c.rewrites.push_back(
        {FactorSymbol::make({dual_atom(g("pi", 1)), g("pi2", 4), g("pi3", 2)}, cas), "pi2"});
    c.expected = Expected{6, 6, 10};
    return c;
}

// Eliminates L(A3(pi) x ~A1(pi2)) with pi2 unrestricted (dihedral
// allowed); needs the declared cube inequivalence.
Certificate gl4xgl2() {
    CaseAssumptions cas;
    cas.add_slot("pi", SlotTag::NonTetrahedralNonDihedral);
    cas.add_slot("pi2", SlotTag::Unrestricted);
    cas.declare_slot_inequivalent("pi", "pi2");
    cas.declare_exact_inequivalent(g("pi", 3), g("pi2", 3));
    cas.finalize();

    Certificate c;
    c.name = "gl4xgl2";
    c.assumptions = cas;
    CoefficientVector cv;
    cv.c[{1, 2, 0}] = 1;
    cv.c[{1, 0, 0}] = 2;
    cv.c[{2, 1, 0}] = 2;
    c.coefficients = cv;
    c.target = FactorSymbol::make({g("pi", 3), dual_atom(g("pi2", 1))}, cas);
    c.expected = Expected{6, 6, 11};
    return c;
}

// Eliminates L(A4(pi) x A2(pi2)) under the declared fourth-power
// inequivalence; every class is exactly bounded.
Certificate gl5xgl3() {
    CaseAssumptions cas;
    cas.add_slot("pi", SlotTag::NotSolvablePolyhedral);
    cas.add_slot("pi2", SlotTag::GenericNonDihedral);
    cas.declare_slot_inequivalent("pi", "pi2");
    cas.declare_exact_inequivalent(g("pi", 4), g("pi2", 4));
    cas.finalize();

    Certificate c;
    c.name = "gl5xgl3";
    c.assumptions = cas;
    CoefficientVector cv;
    cv.c[{2, 1, 0}] = 2;
    cv.c[{2, 0, 0}] = 1;
    cv.c[{2, 2, 0}] = 1;
    c.coefficients = cv;
    c.target = FactorSymbol::make({g("pi", 4), g("pi2", 2)}, cas);
    c.expected = Expected{7, 0, 6};
    return c;
}

// Twisted variant: eliminates L(A4(pi) x A2(pi2)@chi) for nontrivial
// quadratic chi; the fifth-power central character separates the twisted
// fourth-power pair.
Certificate gl5xgl3_twist() {
    CaseAssumptions cas;
    cas.add_slot("pi", SlotTag::NotSolvablePolyhedral);
    cas.add_slot("pi2", SlotTag::GenericNonDihedral);
    cas.add_char_generator("chi");
    cas.add_relation(chi1().pow(2));
    cas.declare_nontrivial(chi1());
    cas.declare_slot_inequivalent("pi", "pi2");
    cas.declare_exact_inequivalent(g("pi", 4), g("pi2", 4));
    cas.finalize();

    Certificate c;
    c.name = "gl5xgl3_twist";
    c.assumptions = cas;
    CoefficientVector cv;
    cv.c[{2, 2, 0}] = 2;
    cv.c[{2, 0, 1}] = 1;
    cv.c[{2, 2, 1}] = 1;
    c.coefficients = cv;
    c.chi = chi1();
    c.target = FactorSymbol::make({g("pi", 4), g("pi2", 2, chi1())}, cas);
    c.expected = Expected{8, 0, 6};
    return c;
}

// Eliminates L(A4(pi)@chi) for quadratic chi (possibly trivial) through
// the cited zero transfer into the adjoint pair class.
Certificate sym4() {
    CaseAssumptions cas;
    cas.add_slot("pi", SlotTag::NotSolvablePolyhedral);
    cas.add_char_generator("chi");
    cas.add_relation(chi1().pow(2));
    cas.finalize();

    Certificate c;
    c.name = "sym4";
    c.assumptions = cas;
    VirtualRep rep;
    rep.add(Atom::one(), 1);
    rep.add(g("pi", 2), 1);
    rep.add(g("pi", 4, chi1()), 1);
    c.isobaric = rep;
    c.target = FactorSymbol::make({g("pi", 4, chi1())}, cas);
    c.boosts.push_back({FactorSymbol::make({g("pi", 2), g("pi", 4, chi1())}, cas),
                        "adjoint-transfer"});
    c.expected = Expected{4, 0, 3};
    return c;
}

// Opaque pair with a declared self-twist on one side and the matching
// non-self-twist on the other.
Certificate triple_twist() {
    CaseAssumptions cas;
    cas.add_char_generator("psi");
    OpaqueInfo sigma;
    sigma.rank = 2;
    sigma.self_twists.push_back(CharacterExpr::gen("psi"));
    cas.add_opaque("sigma", sigma);
    OpaqueInfo tau;
    tau.rank = 3;
    tau.non_self_twists.push_back(CharacterExpr::gen("psi"));
    cas.add_opaque("tau", tau);
    cas.declare_nontrivial(CharacterExpr::gen("psi"));
    cas.finalize();

    Certificate c;
    c.name = "triple_twist";
    c.assumptions = cas;
    VirtualRep rep;
    rep.add(Atom::opaque_part("sigma", true), 1);
    rep.add(Atom::opaque_part("tau"), 1);
    rep.add(Atom::opaque_part("tau", false, CharacterExpr::gen("psi")), 1);
    c.isobaric = rep;
    c.target =
        FactorSymbol::make({Atom::opaque_part("sigma"), Atom::opaque_part("tau")}, cas);
    c.expected = Expected{2, 2, 3};
    return c;
}

std::vector<Fixture> build_all() {
    std::vector<Fixture> out;
    for (Certificate (*f)() : {gl3xgl3, gl3xgl3_tetra, gl4xgl3, gl5xgl2, gl2xgl2xgl2,
                               gl2xgl2xgl3, gl2xgl3xgl3, gl2xgl3xgl3_tetra, gl4xgl2,
                               gl5xgl3, gl5xgl3_twist, sym4, triple_twist}) {
        Certificate c = f();
        out.push_back(Fixture{c.name, std::move(c)});
    }
    return out;
}

}  // namespace

const std::vector<Fixture>& builtin_fixtures() {
    static const std::vector<Fixture> all = build_all();
    return all;
}

Certificate negative_control() {
    CaseAssumptions cas;
    cas.add_slot("pi", SlotTag::Tetrahedral);
    cas.add_slot("pi2", SlotTag::Tetrahedral);
    cas.add_char_generator("chi");
    cas.add_relation(chi1().pow(2));
    cas.declare_slot_inequivalent("pi", "pi2");
    cas.finalize();

    Certificate c;
    c.name = "negative_control";
    c.assumptions = cas;
    CoefficientVector cv;
    cv.c[{2, 0, 0}] = 2;
    cv.c[{0, 2, 1}] = 1;
    cv.c[{2, 2, 1}] = 1;
    c.coefficients = cv;
    c.chi = chi1();
    c.target = FactorSymbol::make({g("pi", 2), g("pi2", 2, chi1())}, cas);
    return c;
}

const Fixture* find_fixture(const std::string& name) {
    for (const Fixture& f : builtin_fixtures())
        if (f.name == name) return &f;
    return nullptr;
}

}  // namespace lscert
