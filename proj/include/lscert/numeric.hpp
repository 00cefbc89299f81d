#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lscert/certify.hpp"
#include "lscert/lfactors.hpp"
#include "lscert/model.hpp"

namespace lscert {

// Independent numeric oracle. Unramified Dirichlet coefficients are computed
// two ways from embedded Hecke-eigenvalue data and compared: once from the
// symbolic factor multiset, once directly as |trace Pi_v|^2. All embedded
// forms are level 1, so every prime is unramified.

inline constexpr std::uint64_t kNumericSeed = 0x5eed2026;

// Largest prime with embedded q-expansion data.
inline constexpr long long kMaxFixturePrime = 500;

// Normalized Hecke eigenvalues of one embedded eigenform. The central
// character is trivial for every embedded form.
struct EigenvalueTable {
    std::string form;
    int weight = 0;
    std::vector<std::pair<long long, double>> eigenvalues;  // (p, lambda_p)
};

// Unitary Satake parameters at one prime: alpha + beta = lambda_p,
// alpha * beta = omega(p).
struct SatakePair {
    std::complex<double> alpha{1.0, 0.0};
    std::complex<double> beta{1.0, 0.0};

    std::complex<double> lambda() const { return alpha + beta; }
    std::complex<double> omega() const { return alpha * beta; }
};

// Embedded forms: "delta" (weight 12), "e4delta" (weight 16), "e6delta"
// (weight 18). Errors with UnknownForm on other ids, UnsupportedCase when
// prime_bound exceeds the embedded expansions. Every eigenvalue is checked
// against |lambda_p| <= 2.
EigenvalueTable hecke_fixture(const std::string& form, long long prime_bound);

// Exact q-expansion coefficient a_n for small n (throws UnsupportedCase if
// the value does not fit in long long).
long long small_coefficient(const std::string& form, long long n);

// Exact check of a(p) a(q) = a(pq) for distinct primes with pq <= bound.
bool hecke_multiplicative(const std::string& form, long long bound);

// Solves alpha + beta = lambda, alpha beta = 1 on the unit circle; errors
// with UnsupportedCase when |lambda| > 2.
SatakePair satake_from_eigenvalue(double lambda);

// Everything needed to evaluate atoms at one prime: Satake parameters per
// GL(2) slot, unitary tuples per opaque slot, unit values per character
// generator.
struct LocalValues {
    std::map<std::string, SatakePair> slots;
    std::map<std::string, std::vector<std::complex<double>>> opaques;
    std::map<std::string, std::complex<double>> chars;
};

// Draws character values and opaque tuples for one prime. Character phases
// are sampled uniformly from the solution group of the declared relations
// (so chi^2 = 1 yields +-1, mu^3 = 1 yields cube roots); omega generators of
// GL(2) slots are pinned to alpha*beta; opaque tuples honor active self-twist
// orbits and match their sampled central-character product. Deterministic in
// (seed, p). Errors with AssignmentConflict when the constraints cannot be
// honored.
LocalValues sample_local_values(const CaseAssumptions& cas,
                                const std::map<std::string, SatakePair>& slots,
                                std::uint64_t seed, long long p);

// Power-sum coefficient of one atom at p^ell: product over GL(2) parts of
// sum of {alpha^{j-i} beta^i omega^{-floor(j/2)}}^ell, over opaque parts of
// tuple power sums (conjugated when dualized), times twist(p)^ell. Errors
// with UnassignedSlot on any name missing from vals.
std::complex<double> atom_coeff(const Atom& a, int ell, const LocalValues& vals);

// Same for a factor class: product over parts times the class twist.
std::complex<double> factor_coeff(const FactorSymbol& f, int ell,
                                  const LocalValues& vals);

struct NumericFailure {
    long long p = 0;
    int ell = 0;
    std::complex<double> symbolic;
    double direct = 0.0;
    std::string what;
};

struct NumericReport {
    bool pass = true;
    int primes_tested = 0;
    int max_power = 0;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> forms;  // GL(2) slot -> form id
    std::vector<NumericFailure> failures;
    std::vector<std::string> notes;
};

// Default slot -> form map for a certificate: pi -> delta, pi2 -> e4delta,
// pi3 -> e6delta, remaining slots take unused forms in slot order;
// form_overrides win. Errors: UnknownForm on a bad override id,
// AssignmentConflict when slots declared twist-inequivalent share a form or
// the case has more slots than embedded forms.
std::map<std::string, std::string> default_forms(const Certificate& cert);

// Dual-path check of a_D(p^ell) at the first `primes` primes and ell <=
// powers: the symbolic sum over `classes` must equal |sum of traces of pi|^2
// within tol, and be real-nonnegative within tol.
NumericReport dual_path_check(const VirtualRep& pi, const FactorMultiset& classes,
                              const CaseAssumptions& cas,
                              const std::map<std::string, std::string>& forms,
                              int primes, int powers, double tol,
                              std::uint64_t seed);

// Builds Pi and its expansion from the certificate's construction (the
// snapshot in declared_classes wins over the recomputed expansion when
// present) and runs dual_path_check under default_forms.
NumericReport positivity_check(const Certificate& cert, int primes, int powers,
                               double tol, std::uint64_t seed = kNumericSeed);

}  // namespace lscert
