#pragma once

#include "lscert/certify.hpp"

#include <optional>
#include <vector>

namespace lscert {

enum class Objective { MinDegree, MinTotalExponent };

// Bounds on the two-slot coefficient family: values in 1..max_coeff on at
// most max_nonzero keys, with degree(Pi) capped by max_degree.
struct SearchBounds {
    long long max_coeff = 2;
    int max_nonzero = 4;
    long long max_degree = 30;
    Objective objective = Objective::MinDegree;
};

// All in-bounds coefficient vectors over keys (j, k, r) with j, k in
// {0, 1, 2} and r in {0, 1} whose certificate checks to Eliminated under
// the case, as certificates, sorted by coefficient vector.  The twist on
// r = 1 terms is the case's first declared character generator; with no
// declared generator only r = 0 keys are used.  A zeta target, or one
// not reachable from the two-slot family, yields an empty list.
std::vector<Certificate> enumerate(const FactorSymbol& target, const CaseAssumptions& cas,
                                   const SearchBounds& bounds = {});

// Reference enumeration without the reachability prune, for cross-checks.
std::vector<Certificate> enumerate_brute(const FactorSymbol& target, const CaseAssumptions& cas,
                                         const SearchBounds& bounds = {});

// Best certificate under bounds.objective, ties broken by coefficient
// vector order; nullopt when the stream is empty.
std::optional<Certificate> minimal(const FactorSymbol& target, const CaseAssumptions& cas,
                                   const SearchBounds& bounds = {});

// Objective values, exposed for ranking diagnostics.
long long construction_degree(const Certificate& cert);
long long total_exponent(const Certificate& cert);

}  // namespace lscert
