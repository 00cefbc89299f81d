#include "lscert/chars.hpp"

#include <algorithm>
#include <numeric>

namespace lscert {

CharacterExpr CharacterExpr::gen(const std::string& name, long long k) {
  CharacterExpr c;
  if (k != 0) c.e[name] = k;
  return c;
}

CharacterExpr CharacterExpr::inverse() const { return pow(-1); }

CharacterExpr CharacterExpr::pow(long long k) const {
  CharacterExpr r;
  if (k == 0) return r;
  for (const auto& [n, v] : e) r.e[n] = v * k;
  return r;
}

CharacterExpr operator*(const CharacterExpr& a, const CharacterExpr& b) {
  CharacterExpr r = a;
  for (const auto& [n, v] : b.e) {
    auto it = r.e.find(n);
    if (it == r.e.end()) {
      r.e[n] = v;
    } else {
      it->second += v;
      if (it->second == 0) r.e.erase(it);
    }
  }
  return r;
}

namespace {

// Floor division: quotient rounded toward negative infinity.
long long fdiv(long long a, long long b) {
  long long q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

}  // namespace

Lattice::Lattice(std::vector<std::vector<long long>> rows) {
  if (rows.empty()) return;
  const size_t n = rows[0].size();
  // Column-style Hermite reduction by repeated gcd elimination. Rows end in
  // echelon form with strictly increasing positive pivot columns.
  size_t row = 0;
  for (size_t col = 0; col < n && row < rows.size(); ++col) {
    // Eliminate column col below position `row` by gcd steps.
    while (true) {
      size_t best = rows.size();
      for (size_t i = row; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        if (best == rows.size() ||
            std::abs(rows[i][col]) < std::abs(rows[best][col]))
          best = i;
      }
      if (best == rows.size()) break;  // column clear
      std::swap(rows[row], rows[best]);
      bool clean = true;
      for (size_t i = row + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        long long q = fdiv(rows[i][col], rows[row][col]);
        for (size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[row][j];
        if (rows[i][col] != 0) clean = false;
      }
      if (clean) break;
    }
    if (rows[row][col] != 0) {
      if (rows[row][col] < 0)
        for (auto& x : rows[row]) x = -x;
      ++row;
    }
  }
  rows.resize(row);
  // Reduce entries above each pivot into [0, pivot).
  pivot_col_.assign(rows.size(), -1);
  for (size_t i = 0; i < rows.size(); ++i) {
    size_t c = 0;
    while (c < n && rows[i][c] == 0) ++c;
    pivot_col_[i] = static_cast<int>(c);
  }
  for (size_t i = rows.size(); i-- > 0;) {
    for (size_t k = 0; k < i; ++k) {
      long long q = fdiv(rows[k][pivot_col_[i]], rows[i][pivot_col_[i]]);
      if (q == 0) continue;
      for (size_t j = 0; j < n; ++j) rows[k][j] -= q * rows[i][j];
    }
  }
  rows_ = std::move(rows);
}

std::vector<long long> Lattice::reduce(std::vector<long long> v) const {
  for (size_t i = 0; i < rows_.size(); ++i) {
    long long p = rows_[i][pivot_col_[i]];
    long long q = fdiv(v[pivot_col_[i]], p);
    if (q == 0) continue;
    for (size_t j = 0; j < v.size(); ++j) v[j] -= q * rows_[i][j];
  }
  return v;
}

bool Lattice::contains(const std::vector<long long>& v) const {
  auto r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](long long x) { return x == 0; });
}

void RelationLattice::add_generator(const std::string& name) {
  if (index_.count(name)) return;
  index_[name] = 0;  // repacked in finalize
  gens_.push_back(name);
  finalized_ = false;
}

bool RelationLattice::has_generator(const std::string& name) const {
  return index_.count(name) > 0;
}

void RelationLattice::add_relation(const CharacterExpr& c) {
  relations_.push_back(c);
  finalized_ = false;
}

void RelationLattice::declare_nontrivial(const CharacterExpr& c) {
  nontrivial_.push_back(c);
}

void RelationLattice::finalize() {
  std::sort(gens_.begin(), gens_.end());
  gens_.erase(std::unique(gens_.begin(), gens_.end()), gens_.end());
  index_.clear();
  for (size_t i = 0; i < gens_.size(); ++i) index_[gens_[i]] = static_cast<int>(i);
  std::vector<std::vector<long long>> rows;
  rows.reserve(relations_.size());
  for (const auto& r : relations_) rows.push_back(to_vec(r));
  lat_ = Lattice(std::move(rows));
  finalized_ = true;
}

std::vector<long long> RelationLattice::to_vec(const CharacterExpr& c) const {
  std::vector<long long> v(gens_.size(), 0);
  for (const auto& [n, k] : c.e) {
    auto it = index_.find(n);
    if (it == index_.end())
      throw Error(ErrKind::UnknownGenerator, "unknown character generator: " + n);
    v[it->second] = k;
  }
  return v;
}

CharacterExpr RelationLattice::from_vec(const std::vector<long long>& v) const {
  CharacterExpr c;
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) c.e[gens_[i]] = v[i];
  return c;
}

CharacterExpr RelationLattice::reduce(const CharacterExpr& c) const {
  if (!finalized_)
    throw Error(ErrKind::UnsupportedCase, "relation lattice not finalized");
  return from_vec(lat_.reduce(to_vec(c)));
}

CharacterExpr RelationLattice::reduce_mod(
    const CharacterExpr& c, const std::vector<CharacterExpr>& extra) const {
  if (extra.empty()) return reduce(c);
  std::vector<std::vector<long long>> rows;
  for (const auto& r : relations_) rows.push_back(to_vec(r));
  for (const auto& r : extra) rows.push_back(to_vec(r));
  Lattice big(std::move(rows));
  return from_vec(big.reduce(to_vec(c)));
}

bool RelationLattice::provably_nontrivial(const CharacterExpr& c) const {
  CharacterExpr r = reduce(c);
  if (r.trivial()) return false;
  // A power of c matching a declared form proves c itself nontrivial.
  for (int k = 1; k <= 3; ++k) {
    const CharacterExpr p = k == 1 ? r : reduce(r.pow(k));
    if (p.trivial()) continue;
    for (const auto& n : nontrivial_) {
      if (reduce(n) == p) return true;
      if (reduce(n.inverse()) == p) return true;
    }
  }
  return false;
}

long long RelationLattice::order(const CharacterExpr& c) const {
  CharacterExpr r = reduce(c);
  if (r.trivial()) return 1;
  // The quotient of the exponent group by the relation lattice has a finite
  // cyclic image for c iff some positive power lands in the lattice. Bound the
  // search by the product of pivots (exponent of the torsion part).
  long long bound = 1;
  for (size_t i = 0; i < lat_.rows().size(); ++i) {
    size_t c0 = 0;
    while (c0 < lat_.rows()[i].size() && lat_.rows()[i][c0] == 0) ++c0;
    bound *= lat_.rows()[i][c0];
    if (bound > 1000000) break;
  }
  bound = std::min(bound, 1000000LL);
  auto v = to_vec(c);
  for (long long m = 1; m <= bound; ++m) {
    std::vector<long long> mv(v.size());
    for (size_t j = 0; j < v.size(); ++j) mv[j] = v[j] * m;
    if (lat_.contains(mv)) return m;
  }
  return 0;
}

}  // namespace lscert
