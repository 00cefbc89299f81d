#pragma once

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace lscert {

enum class ErrKind {
  UnknownGenerator,
  LevelOutOfRange,
  OpaqueTensorUnsupported,
  RuleInapplicable,
  UntaggedSlot,
  UnsupportedCase,
  MalformedCertificate,
  UnassignedSlot,
  AssignmentConflict,
  UnknownForm,
  ParseError,
};

class Error : public std::runtime_error {
public:
  Error(ErrKind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
  ErrKind kind() const { return kind_; }

private:
  ErrKind kind_;
};

// Formal unitary abelian character, written multiplicatively as a product of
// named generators with integer exponents. Zero exponents are never stored.
struct CharacterExpr {
  std::map<std::string, long long> e;

  static CharacterExpr one() { return {}; }
  static CharacterExpr gen(const std::string& name, long long k = 1);

  bool trivial() const { return e.empty(); }
  CharacterExpr inverse() const;
  CharacterExpr pow(long long k) const;

  friend CharacterExpr operator*(const CharacterExpr& a, const CharacterExpr& b);
  auto operator<=>(const CharacterExpr&) const = default;
};

// Integer row lattice in column echelon form with positive pivots; rows span
// the subgroup of exponent vectors declared trivial. reduce() maps a vector to
// the unique coset representative with entries in [0, pivot) at pivot columns.
class Lattice {
public:
  Lattice() = default;
  explicit Lattice(std::vector<std::vector<long long>> rows);

  std::vector<long long> reduce(std::vector<long long> v) const;
  bool contains(const std::vector<long long>& v) const;
  const std::vector<std::vector<long long>>& rows() const { return rows_; }

private:
  std::vector<std::vector<long long>> rows_;  // echelon, pivots positive
  std::vector<int> pivot_col_;
};

// Declared character data for one case: the generator universe, relations
// (expressions identified with the trivial character) and characters declared
// provably nontrivial.
class RelationLattice {
public:
  RelationLattice() = default;

  void add_generator(const std::string& name);
  bool has_generator(const std::string& name) const;
  void add_relation(const CharacterExpr& c);        // c == trivial
  void declare_nontrivial(const CharacterExpr& c);  // c != trivial
  void finalize();  // sorts generators, builds the lattice; idempotent

  const std::vector<std::string>& generators() const { return gens_; }
  const std::vector<CharacterExpr>& relations() const { return relations_; }
  const std::vector<CharacterExpr>& nontrivial_decls() const { return nontrivial_; }

  // Canonical representative modulo the relation lattice. Errors with
  // UnknownGenerator on names outside the declared universe.
  CharacterExpr reduce(const CharacterExpr& c) const;
  // Same, modulo the lattice enlarged by `extra` (self-twist orbits).
  CharacterExpr reduce_mod(const CharacterExpr& c,
                           const std::vector<CharacterExpr>& extra) const;

  bool is_trivial(const CharacterExpr& c) const { return reduce(c).trivial(); }
  bool provably_nontrivial(const CharacterExpr& c) const;
  // Order of c in the formal quotient group: smallest m >= 1 with c^m trivial,
  // or 0 when no power is trivial.
  long long order(const CharacterExpr& c) const;

  std::vector<long long> to_vec(const CharacterExpr& c) const;
  CharacterExpr from_vec(const std::vector<long long>& v) const;

private:
  std::vector<std::string> gens_;
  std::map<std::string, int> index_;
  std::vector<CharacterExpr> relations_;
  std::vector<CharacterExpr> nontrivial_;
  Lattice lat_;
  bool finalized_ = false;
};

}  // namespace lscert
