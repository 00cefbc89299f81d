#include "lscert/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <set>

namespace lscert {
namespace {

using i128 = __int128;
using cplx = std::complex<double>;

constexpr double kTwoPi = 6.283185307179586476925286766559;

// ---- embedded q-expansions ------------------------------------------------

struct FormData {
    int weight = 0;
    std::vector<i128> a;  // a[n] for n in [0, kMaxFixturePrime]
};

std::vector<i128> series_mul(const std::vector<i128>& x, const std::vector<i128>& y,
                             int n) {
    std::vector<i128> r(n + 1, 0);
    for (int i = 0; i <= n; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; i + j <= n; ++j) r[i + j] += x[i] * y[j];
    }
    return r;
}

// delta = q prod (1-q^n)^24 via the pentagonal-number expansion of the Euler
// product; the weight 16 and 18 forms are E4*delta and E6*delta.
const std::map<std::string, FormData>& embedded_forms() {
    static const std::map<std::string, FormData> forms = [] {
        const int n = int(kMaxFixturePrime);
        std::vector<i128> euler(n + 1, 0);
        euler[0] = 1;
        for (long long k = 1;; ++k) {
            const long long g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
            if (g1 > n && g2 > n) break;
            const i128 s = (k % 2 != 0) ? -1 : 1;
            if (g1 <= n) euler[g1] += s;
            if (g2 <= n) euler[g2] += s;
        }
        const auto e2 = series_mul(euler, euler, n);
        const auto e4 = series_mul(e2, e2, n);
        const auto e8 = series_mul(e4, e4, n);
        const auto e16 = series_mul(e8, e8, n);
        const auto e24 = series_mul(e16, e8, n);
        std::vector<i128> delta(n + 1, 0);
        for (int m = 1; m <= n; ++m) delta[m] = e24[m - 1];

        auto sigma = [](long long m, int k) {
            i128 s = 0;
            for (long long d = 1; d <= m; ++d) {
                if (m % d != 0) continue;
                i128 pw = 1;
                for (int i = 0; i < k; ++i) pw *= d;
                s += pw;
            }
            return s;
        };
        std::vector<i128> eis4(n + 1, 0), eis6(n + 1, 0);
        eis4[0] = 1;
        eis6[0] = 1;
        for (int m = 1; m <= n; ++m) {
            eis4[m] = 240 * sigma(m, 3);
            eis6[m] = -504 * sigma(m, 5);
        }
        std::map<std::string, FormData> out;
        out["delta"] = {12, delta};
        out["e4delta"] = {16, series_mul(eis4, delta, n)};
        out["e6delta"] = {18, series_mul(eis6, delta, n)};
        return out;
    }();
    return forms;
}

const FormData& form_data(const std::string& form) {
    const auto& forms = embedded_forms();
    auto it = forms.find(form);
    if (it == forms.end()) throw Error(ErrKind::UnknownForm, "unknown eigenform: " + form);
    return it->second;
}

std::vector<long long> primes_upto(long long bound) {
    std::vector<long long> out;
    for (long long p = 2; p <= bound; ++p) {
        bool prime = true;
        for (long long d = 2; d * d <= p; ++d)
            if (p % d == 0) prime = false;
        if (prime) out.push_back(p);
    }
    return out;
}

std::vector<long long> first_primes(int count) {
    auto all = primes_upto(kMaxFixturePrime);
    if (count > int(all.size()))
        throw Error(ErrKind::UnsupportedCase,
                    "prime count exceeds the embedded fixture range");
    all.resize(count);
    return all;
}

// ---- complex helpers -------------------------------------------------------

cplx cpow(cplx z, long long k) {
    if (k < 0) return 1.0 / cpow(z, -k);
    cplx r{1.0, 0.0};
    while (k > 0) {
        if (k & 1) r *= z;
        z *= z;
        k >>= 1;
    }
    return r;
}

cplx char_value(const CharacterExpr& c, const std::map<std::string, cplx>& chars) {
    cplx v{1.0, 0.0};
    for (const auto& [g, e] : c.e) {
        auto it = chars.find(g);
        if (it == chars.end())
            throw Error(ErrKind::UnassignedSlot, "no value for character generator " + g);
        v *= cpow(it->second, e);
    }
    return v;
}

// Power sum of the normalized A^j eigenvalue multiset
// {alpha^{j-i} beta^i omega^{-floor(j/2)} : 0 <= i <= j}.
cplx powersum_level(int j, const SatakePair& s, int ell) {
    const cplx w = cpow(s.omega(), -(j / 2));
    cplx sum{0.0, 0.0};
    for (int i = 0; i <= j; ++i)
        sum += cpow(cpow(s.alpha, j - i) * cpow(s.beta, i) * w, ell);
    return sum;
}

std::uint64_t mix_seed(std::uint64_t seed, long long p) {
    std::uint64_t z = seed ^ (std::uint64_t(p) * 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double mod1(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f -= 1.0;
    return f;
}

bool near_integer(double x) {
    const double f = mod1(x);
    return f < 1e-9 || f > 1.0 - 1e-9;
}

// Integer row echelon (first nonzero entry of each row is a positive pivot,
// rows ordered by pivot column); spans the same lattice as the input.
std::vector<std::vector<long long>> echelonize(std::vector<std::vector<long long>> rows,
                                               size_t n) {
    size_t top = 0;
    for (size_t col = 0; col < n && top < rows.size(); ++col) {
        while (true) {
            size_t best = rows.size();
            for (size_t i = top; i < rows.size(); ++i)
                if (rows[i][col] != 0 &&
                    (best == rows.size() ||
                     std::llabs(rows[i][col]) < std::llabs(rows[best][col])))
                    best = i;
            if (best == rows.size()) break;
            std::swap(rows[top], rows[best]);
            bool again = false;
            for (size_t i = top + 1; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                const long long q = rows[i][col] / rows[top][col];
                for (size_t j = col; j < n; ++j) rows[i][j] -= q * rows[top][j];
                if (rows[i][col] != 0) again = true;
            }
            if (!again) {
                if (rows[top][col] < 0)
                    for (size_t j = col; j < n; ++j) rows[top][j] = -rows[top][j];
                ++top;
                break;
            }
        }
    }
    rows.resize(top);
    return rows;
}

// Smallest d >= 1 with v^d = 1, or 0 if v is not a root of unity of small
// order (sampled values always are).
int unit_order(cplx v) {
    cplx w{1.0, 0.0};
    for (int d = 1; d <= 64; ++d) {
        w *= v;
        if (std::abs(w - cplx{1.0, 0.0}) < 1e-8) return d;
    }
    return 0;
}

double phase_of(const CharacterExpr& c, const std::vector<double>& phase,
                const std::map<std::string, size_t>& index) {
    double t = 0.0;
    for (const auto& [g, e] : c.e) t += double(e) * phase.at(index.at(g));
    return mod1(t);
}

}  // namespace

// ---- fixtures ---------------------------------------------------------------

EigenvalueTable hecke_fixture(const std::string& form, long long prime_bound) {
    if (prime_bound > kMaxFixturePrime)
        throw Error(ErrKind::UnsupportedCase,
                    "prime bound exceeds the embedded q-expansions");
    const FormData& fd = form_data(form);
    EigenvalueTable table;
    table.form = form;
    table.weight = fd.weight;
    for (long long p : primes_upto(prime_bound)) {
        const long double ap = (long double)fd.a[size_t(p)];
        const long double norm = powl((long double)p, (fd.weight - 1) / 2.0L);
        const double lambda = double(ap / norm);
        if (std::fabs(lambda) > 2.0 + 1e-12)
            throw Error(ErrKind::UnsupportedCase,
                        "eigenvalue bound |lambda_p| <= 2 violated for " + form);
        table.eigenvalues.emplace_back(p, lambda);
    }
    return table;
}

long long small_coefficient(const std::string& form, long long n) {
    if (n < 1 || n > kMaxFixturePrime)
        throw Error(ErrKind::UnsupportedCase, "coefficient index out of range");
    const i128 v = form_data(form).a[size_t(n)];
    if (v > i128(std::numeric_limits<long long>::max()) ||
        v < i128(std::numeric_limits<long long>::min()))
        throw Error(ErrKind::UnsupportedCase, "coefficient exceeds long long");
    return (long long)v;
}

bool hecke_multiplicative(const std::string& form, long long bound) {
    bound = std::min(bound, kMaxFixturePrime);
    const FormData& fd = form_data(form);
    const auto primes = primes_upto(bound);
    for (size_t i = 0; i < primes.size(); ++i)
        for (size_t j = i + 1; j < primes.size(); ++j) {
            const long long pq = primes[i] * primes[j];
            if (pq > bound) break;
            if (fd.a[size_t(primes[i])] * fd.a[size_t(primes[j])] != fd.a[size_t(pq)])
                return false;
        }
    return true;
}

SatakePair satake_from_eigenvalue(double lambda) {
    if (std::fabs(lambda) > 2.0 + 1e-12)
        throw Error(ErrKind::UnsupportedCase,
                    "eigenvalue bound |lambda_p| <= 2 violated");
    const double half = lambda / 2.0;
    const double im = std::sqrt(std::max(0.0, 1.0 - half * half));
    SatakePair s;
    s.alpha = {half, im};
    s.beta = {half, -im};
    return s;
}

// ---- sampling ----------------------------------------------------------------

LocalValues sample_local_values(const CaseAssumptions& cas,
                                const std::map<std::string, SatakePair>& slots,
                                std::uint64_t seed, long long p) {
    const auto& gens = cas.rel().generators();
    std::map<std::string, size_t> index;
    for (size_t i = 0; i < gens.size(); ++i) index[gens[i]] = i;

    // Phase per generator in [0, 1); value = exp(2 pi i phase). Forced
    // entries are fixed before the lattice sweep: omegas of GL(2) slots from
    // the assigned Satake data, every synthesized character and synthesized
    // piece omega at 0. Declared generators and declared-opaque omegas are
    // sampled uniformly from the solution group of the relation lattice.
    std::vector<double> phase(gens.size(), 0.0);
    std::vector<bool> forced(gens.size(), false), assigned(gens.size(), false);

    const std::set<std::string> declared(cas.declared_generators().begin(),
                                         cas.declared_generators().end());
    std::set<std::string> open_omegas;
    for (const auto& [name, info] : cas.opaques())
        if (info.kind.empty()) open_omegas.insert(CaseAssumptions::omega_name(name));

    for (size_t i = 0; i < gens.size(); ++i) {
        const std::string& g = gens[i];
        if (declared.count(g) || open_omegas.count(g)) continue;
        bool slot_omega = false;
        for (const auto& [slot, tag] : cas.slots()) {
            (void)tag;
            if (g != CaseAssumptions::omega_name(slot)) continue;
            auto it = slots.find(slot);
            if (it == slots.end())
                throw Error(ErrKind::UnassignedSlot, "no Satake data for slot " + slot);
            double t = mod1(std::arg(it->second.omega()) / kTwoPi);
            if (t > 1.0 - 1e-12) t = 0.0;
            phase[i] = t;
            slot_omega = true;
        }
        // Everything else synthesized during finalize: trivial value.
        if (!slot_omega) phase[i] = 0.0;
        forced[i] = assigned[i] = true;
    }

    std::mt19937_64 rng(mix_seed(seed, p));
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<std::vector<long long>> rows;
    for (const auto& r : cas.rel().relations()) rows.push_back(cas.rel().to_vec(r));
    rows = echelonize(std::move(rows), gens.size());
    std::vector<size_t> pivot_row(gens.size(), rows.size());
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < gens.size(); ++c)
            if (rows[r][c] != 0) {
                pivot_row[c] = r;
                break;
            }

    for (size_t ci = gens.size(); ci-- > 0;) {
        if (pivot_row[ci] < rows.size()) {
            const auto& row = rows[pivot_row[ci]];
            double tail = 0.0;
            for (size_t j = ci + 1; j < gens.size(); ++j) tail += double(row[j]) * phase[j];
            const long long s = row[ci];
            if (assigned[ci]) {
                if (!near_integer(double(s) * phase[ci] + tail))
                    throw Error(ErrKind::AssignmentConflict,
                                "fixture assignment violates relation through " + gens[ci]);
            } else {
                const long long k = std::uniform_int_distribution<long long>(0, s - 1)(rng);
                phase[ci] = mod1((double(k) - tail) / double(s));
                assigned[ci] = true;
            }
        } else if (!assigned[ci]) {
            phase[ci] = unif(rng);
            assigned[ci] = true;
        }
    }

    LocalValues vals;
    vals.slots = slots;
    for (size_t i = 0; i < gens.size(); ++i)
        vals.chars[gens[i]] = std::polar(1.0, kTwoPi * phase[i]);

    // Opaque tuples: unit values honoring active self-twist orbits, scaled so
    // the product matches the sampled central-character value.
    for (const auto& [name, info] : cas.opaques()) {
        if (!info.kind.empty()) continue;
        cplx twist_value{1.0, 0.0};
        int active = 0;
        for (const auto& st : info.self_twists) {
            const cplx v = std::polar(1.0, kTwoPi * phase_of(st, phase, index));
            if (std::abs(v - cplx{1.0, 0.0}) < 1e-9) continue;
            ++active;
            twist_value = v;
        }
        if (active > 1)
            throw Error(ErrKind::AssignmentConflict,
                        "multiple active self-twists on " + name);
        int d = 1;
        if (active == 1) {
            d = unit_order(twist_value);
            if (d == 0 || info.rank % d != 0)
                throw Error(ErrKind::AssignmentConflict,
                            "self-twist orbit does not divide the rank of " + name);
        }
        std::vector<cplx> tuple;
        for (int orbit = 0; orbit < info.rank / d; ++orbit) {
            const cplx base = std::polar(1.0, kTwoPi * unif(rng));
            cplx t = base;
            for (int j = 0; j < d; ++j) {
                tuple.push_back(t);
                t *= twist_value;
            }
        }
        cplx prod{1.0, 0.0};
        for (const auto& z : tuple) prod *= z;
        const cplx target = vals.chars.at(CaseAssumptions::omega_name(name));
        const cplx root = std::polar(1.0, std::arg(target / prod) / double(d));
        for (size_t i = tuple.size() - size_t(d); i < tuple.size(); ++i) tuple[i] *= root;
        vals.opaques[name] = std::move(tuple);
    }

    for (const auto& r : cas.rel().relations())
        if (std::abs(char_value(r, vals.chars) - cplx{1.0, 0.0}) > 1e-9)
            throw Error(ErrKind::AssignmentConflict,
                        "sampled values violate a declared relation");
    return vals;
}

// ---- coefficients ------------------------------------------------------------

std::complex<double> atom_coeff(const Atom& a, int ell, const LocalValues& vals) {
    cplx out{1.0, 0.0};
    for (const auto& [slot, level] : a.gl2) {
        auto it = vals.slots.find(slot);
        if (it == vals.slots.end())
            throw Error(ErrKind::UnassignedSlot, "no Satake data for slot " + slot);
        out *= powersum_level(level, it->second, ell);
    }
    for (const auto& [part, count] : a.opaque) {
        auto it = vals.opaques.find(part.name);
        if (it == vals.opaques.end())
            throw Error(ErrKind::UnassignedSlot, "no Satake tuple for " + part.name);
        cplx ps{0.0, 0.0};
        for (cplx z : it->second) {
            if (part.dualized) z = std::conj(z);
            ps += cpow(z, ell);
        }
        for (int i = 0; i < count; ++i) out *= ps;
    }
    out *= cpow(char_value(a.twist, vals.chars), ell);
    return out;
}

std::complex<double> factor_coeff(const FactorSymbol& f, int ell,
                                  const LocalValues& vals) {
    cplx out{1.0, 0.0};
    for (const Atom& part : f.parts()) out *= atom_coeff(part, ell, vals);
    out *= cpow(char_value(f.twist(), vals.chars), ell);
    return out;
}

// ---- dual-path check ----------------------------------------------------------

NumericReport dual_path_check(const VirtualRep& pi, const FactorMultiset& classes,
                              const CaseAssumptions& cas,
                              const std::map<std::string, std::string>& forms,
                              int primes, int powers, double tol,
                              std::uint64_t seed) {
    NumericReport report;
    report.seed = seed;
    report.max_power = powers;
    report.forms = forms;
    if (primes <= 0) {
        report.notes.push_back("no primes tested: vacuous pass");
        return report;
    }
    const auto plist = first_primes(primes);

    std::map<std::string, std::map<long long, double>> tables;
    for (const auto& [slot, form] : forms) {
        (void)slot;
        if (tables.count(form)) continue;
        auto& tab = tables[form];
        for (const auto& [p, lam] : hecke_fixture(form, plist.back()).eigenvalues)
            tab[p] = lam;
    }

    for (long long p : plist) {
        std::map<std::string, SatakePair> satake;
        for (const auto& [slot, form] : forms)
            satake[slot] = satake_from_eigenvalue(tables.at(form).at(p));
        const LocalValues vals = sample_local_values(cas, satake, seed, p);
        for (int ell = 1; ell <= powers; ++ell) {
            cplx trace{0.0, 0.0};
            for (const auto& [atom, mult] : pi.terms)
                trace += double(mult) * atom_coeff(atom, ell, vals);
            const double direct = std::norm(trace);
            cplx symbolic{0.0, 0.0};
            for (const auto& [f, e] : classes.factors)
                symbolic += double(e) * factor_coeff(f, ell, vals);
            std::string what;
            if (std::abs(symbolic - cplx{direct, 0.0}) > tol)
                what = "dual-path mismatch";
            else if (symbolic.real() < -tol)
                what = "negative coefficient";
            else if (std::fabs(symbolic.imag()) > tol)
                what = "nonreal coefficient";
            if (!what.empty()) report.failures.push_back({p, ell, symbolic, direct, what});
        }
    }
    report.primes_tested = int(plist.size());
    report.pass = report.failures.empty();
    return report;
}

std::map<std::string, std::string> default_forms(const Certificate& cert) {
    const CaseAssumptions& cas = cert.assumptions;
    static const std::vector<std::string> pool = {"delta", "e4delta", "e6delta"};
    static const std::map<std::string, std::string> named = {
        {"pi", "delta"}, {"pi2", "e4delta"}, {"pi3", "e6delta"}};

    std::map<std::string, std::string> out;
    std::set<std::string> used;
    for (const auto& [slot, form] : cert.form_overrides) {
        if (!cas.slots().count(slot))
            throw Error(ErrKind::UnknownForm, "form override for unknown slot " + slot);
        form_data(form);  // validates the id
        out[slot] = form;
        used.insert(form);
    }
    for (const auto& [slot, tag] : cas.slots()) {
        (void)tag;
        if (out.count(slot)) continue;
        auto it = named.find(slot);
        if (it != named.end() && !used.count(it->second)) {
            out[slot] = it->second;
            used.insert(it->second);
        }
    }
    for (const auto& [slot, tag] : cas.slots()) {
        (void)tag;
        if (out.count(slot)) continue;
        auto next = std::find_if(pool.begin(), pool.end(),
                                 [&](const std::string& f) { return !used.count(f); });
        if (next == pool.end())
            throw Error(ErrKind::AssignmentConflict,
                        "more GL(2) slots than embedded eigenforms");
        out[slot] = *next;
        used.insert(*next);
    }
    for (const auto& [a, fa] : out)
        for (const auto& [b, fb] : out)
            if (a < b && fa == fb && cas.slots_inequivalent(a, b))
                throw Error(ErrKind::AssignmentConflict,
                            "twist-inequivalent slots " + a + ", " + b +
                                " share the eigenform " + fa);
    return out;
}

NumericReport positivity_check(const Certificate& cert, int primes, int powers,
                               double tol, std::uint64_t seed) {
    if (cert.coefficients.has_value() == cert.isobaric.has_value())
        throw Error(ErrKind::MalformedCertificate,
                    "certificate must declare exactly one construction");
    const CaseAssumptions& cas = cert.assumptions;
    VirtualRep pi;
    FactorMultiset classes;
    if (cert.coefficients) {
        auto [rep, cls] = build_lemma_d(*cert.coefficients, cert.chi, cas, cert.slot1,
                                        cert.slot2);
        pi = std::move(rep);
        classes = std::move(cls);
    } else {
        pi = *cert.isobaric;
        classes = expand_pairing(pi, cas);
    }
    if (cert.declared_classes) classes = *cert.declared_classes;
    return dual_path_check(pi, classes, cas, default_forms(cert), primes, powers, tol,
                           seed);
}

}  // namespace lscert
