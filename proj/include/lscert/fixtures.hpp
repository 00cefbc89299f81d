#pragma once

#include "lscert/certify.hpp"

#include <string>
#include <vector>

namespace lscert {

// A named built-in certificate with its expected outcome frozen in the
// certificate's expected block.
struct Fixture {
    std::string name;
    Certificate certificate;
};

// The built-in elimination certificates, one per supported target family,
// in canonical suite order.  Every fixture verifies to Eliminated.
const std::vector<Fixture>& builtin_fixtures();

// The gl3xgl3 coefficient vector under a both-tetrahedral case with no
// rewrite: verifies to Fail (8 copies against an upper pole bound of 10).
Certificate negative_control();

// Lookup by fixture name; nullptr when absent.
const Fixture* find_fixture(const std::string& name);

}  // namespace lscert
