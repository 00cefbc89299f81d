#include "lscert/search.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace lscert {

namespace {

struct Key {
    int j = 0;
    int k = 0;
    int r = 0;
};

// Degree contribution of one copy of the (j, k) doubled power.
long long key_degree(const Key& key) { return (key.j + 1) * (key.k + 1); }

// Per-slot levels of a target inside the slot1/slot2 family; nullopt when
// the target carries opaque parts or a foreign slot.
std::optional<std::pair<int, int>> family_levels(const FactorSymbol& target,
                                                 const std::string& slot1,
                                                 const std::string& slot2) {
    int a = 0;
    int b = 0;
    for (const Atom& part : target.parts()) {
        if (!part.opaque.empty()) return std::nullopt;
        for (const auto& [slot, level] : part.gl2) {
            if (slot == slot1)
                a += level;
            else if (slot == slot2)
                b += level;
            else
                return std::nullopt;
        }
    }
    return std::make_pair(a, b);
}

// Whether a pairing of term levels x and y can produce a part of level m.
// Decomposition rules only lower levels and preserve parity, so the top
// of the product range and the parity are the invariant constraints.
bool level_reaches(int x, int y, int m) { return m <= x + y && (x + y - m) % 2 == 0; }

bool support_reaches(const std::vector<Key>& support, int a, int b) {
    for (const Key& u : support)
        for (const Key& v : support)
            if (level_reaches(u.j, v.j, a) && level_reaches(u.k, v.k, b)) return true;
    return false;
}

std::string vector_name(const CoefficientVector& cv) {
    std::string name = "search";
    for (const auto& [key, n] : cv.c) {
        auto [j, k, r] = key;
        name += " c" + std::to_string(j) + std::to_string(k) + std::to_string(r) + "=" +
                std::to_string(n);
    }
    return name;
}

void validate(const SearchBounds& bounds) {
    if (bounds.max_coeff < 1 || bounds.max_degree < 1 || bounds.max_nonzero < 0)
        throw Error(ErrKind::MalformedCertificate, "search bounds must be positive");
}

std::vector<Certificate> enumerate_impl(const FactorSymbol& target, const CaseAssumptions& cas,
                                        const SearchBounds& bounds, bool prune) {
    validate(bounds);
    std::vector<Certificate> out;
    if (target.is_zeta() || bounds.max_nonzero == 0) return out;

    std::vector<std::string> slots;
    for (const auto& [name, tag] : cas.slots()) slots.push_back(name);
    if (slots.empty()) return out;
    const std::string slot1 = slots[0];
    const std::string slot2 = slots.size() > 1 ? slots[1] : "";

    auto levels = family_levels(target, slot1, slot2);
    if (!levels) return out;
    auto [a, b] = *levels;

    CharacterExpr chi = cas.declared_generators().empty()
                            ? CharacterExpr::one()
                            : CharacterExpr::gen(cas.declared_generators().front());

    std::vector<Key> keys;
    for (int j = 0; j <= 2; ++j)
        for (int k = 0; k <= (slots.size() > 1 ? 2 : 0); ++k)
            for (int r = 0; r <= (chi.trivial() ? 0 : 1); ++r) keys.push_back({j, k, r});

    Certificate base;
    base.assumptions = cas;
    base.chi = chi;
    base.slot1 = slot1;
    if (slots.size() > 1) base.slot2 = slot2;
    base.target = target;

    std::vector<Key> support;
    CoefficientVector cv;

    auto try_candidate = [&] {
        Certificate cand = base;
        cand.coefficients = cv;
        cand.name = vector_name(cv);
        if (check(cand).verdict == Verdict::Eliminated) out.push_back(std::move(cand));
    };

    auto assign_values = [&](auto&& self, std::size_t pos, long long degree) -> void {
        if (pos == support.size()) {
            try_candidate();
            return;
        }
        const Key& key = support[pos];
        auto& slot = cv.c[{key.j, key.k, key.r}];
        for (long long v = 1; v <= bounds.max_coeff; ++v) {
            long long next = degree + v * key_degree(key);
            if (next > bounds.max_degree) break;
            slot = v;
            self(self, pos + 1, next);
        }
        cv.c.erase({key.j, key.k, key.r});
    };

    auto build_support = [&](auto&& self, std::size_t start) -> void {
        if (!support.empty() && (!prune || support_reaches(support, a, b)))
            assign_values(assign_values, 0, 0);
        if ((int)support.size() == bounds.max_nonzero) return;
        for (std::size_t i = start; i < keys.size(); ++i) {
            support.push_back(keys[i]);
            self(self, i + 1);
            support.pop_back();
        }
    };
    build_support(build_support, 0);

    std::sort(out.begin(), out.end(), [](const Certificate& x, const Certificate& y) {
        return x.coefficients->c < y.coefficients->c;
    });
    return out;
}

}  // namespace

std::vector<Certificate> enumerate(const FactorSymbol& target, const CaseAssumptions& cas,
                                   const SearchBounds& bounds) {
    return enumerate_impl(target, cas, bounds, /*prune=*/true);
}

std::vector<Certificate> enumerate_brute(const FactorSymbol& target, const CaseAssumptions& cas,
                                         const SearchBounds& bounds) {
    return enumerate_impl(target, cas, bounds, /*prune=*/false);
}

std::optional<Certificate> minimal(const FactorSymbol& target, const CaseAssumptions& cas,
                                   const SearchBounds& bounds) {
    auto all = enumerate(target, cas, bounds);
    const Certificate* best = nullptr;
    long long best_value = 0;
    for (const Certificate& cand : all) {
        long long value = bounds.objective == Objective::MinDegree ? construction_degree(cand)
                                                                   : total_exponent(cand);
        if (!best || value < best_value) {
            best = &cand;
            best_value = value;
        }
    }
    if (!best) return std::nullopt;
    return *best;
}

long long construction_degree(const Certificate& cert) {
    if (!cert.coefficients)
        throw Error(ErrKind::MalformedCertificate, "no coefficient vector to rank");
    long long degree = 0;
    for (const auto& [key, n] : cert.coefficients->c) {
        auto [j, k, r] = key;
        degree += n * (j + 1) * (k + 1);
    }
    return degree;
}

long long total_exponent(const Certificate& cert) {
    if (!cert.coefficients)
        throw Error(ErrKind::MalformedCertificate, "no coefficient vector to rank");
    long long total = 0;
    for (const auto& [key, n] : cert.coefficients->c) total += n;
    return total;
}

}  // namespace lscert
