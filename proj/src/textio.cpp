#include "lscert/textio.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>
#include <utility>

namespace lscert {

namespace {

using nlohmann::json;

[[noreturn]] void perr(const std::string& msg) { throw Error(ErrKind::ParseError, msg); }

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t b = 0;
    while (true) {
        const std::size_t p = s.find(sep, b);
        out.push_back(s.substr(b, p == std::string::npos ? p : p - b));
        if (p == std::string::npos) break;
        b = p + 1;
    }
    return out;
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

long long parse_int(const std::string& s, const std::string& what) {
    long long v = 0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) perr("bad integer in " + what + ": '" + s + "'");
    return v;
}

// "A<j>(<name>)" -> (j, name); nullopt when the unit is not of that shape.
std::optional<std::pair<int, std::string>> match_power(const std::string& u) {
    if (u.size() < 4 || u[0] != 'A' || !std::isdigit(static_cast<unsigned char>(u[1])))
        return std::nullopt;
    std::size_t i = 1;
    while (i < u.size() && std::isdigit(static_cast<unsigned char>(u[i]))) ++i;
    if (i >= u.size() || u[i] != '(' || u.back() != ')') return std::nullopt;
    const int j = static_cast<int>(parse_int(u.substr(1, i - 1), "power level"));
    const std::string name = trim(u.substr(i + 1, u.size() - i - 2));
    if (!valid_name(name)) perr("bad slot name in '" + u + "'");
    return std::make_pair(j, name);
}

}  // namespace

std::string render_char(const CharacterExpr& c) {
    if (c.trivial()) return "1";
    std::string out;
    for (const auto& [name, k] : c.e) {
        if (!out.empty()) out += "*";
        out += name;
        if (k != 1) out += "^" + std::to_string(k);
    }
    return out;
}

CharacterExpr parse_char(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) perr("empty character expression");
    CharacterExpr out = CharacterExpr::one();
    for (const std::string& raw : split(t, '*')) {
        const std::string u = trim(raw);
        if (u.empty()) perr("empty unit in character expression: '" + text + "'");
        if (u == "1") continue;
        const std::size_t caret = u.find('^');
        const std::string name = trim(u.substr(0, caret));
        if (!valid_name(name)) perr("bad generator name: '" + u + "'");
        long long k = 1;
        if (caret != std::string::npos)
            k = parse_int(trim(u.substr(caret + 1)), "character exponent");
        out = out * CharacterExpr::gen(name, k);
    }
    return out;
}

CharacterExpr parse_relation(const std::string& text) {
    const std::string t = trim(text);
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) return parse_char(t);
    if (t.find('=', eq + 1) != std::string::npos) perr("multiple '=' in relation: " + text);
    return parse_char(t.substr(0, eq)) * parse_char(t.substr(eq + 1)).inverse();
}

std::string render_atom(const Atom& a) {
    if (a.is_pure_char()) return a.twist.trivial() ? "1" : render_char(a.twist);
    std::string out;
    auto push = [&out](const std::string& unit) {
        if (!out.empty()) out += "*";
        out += unit;
    };
    for (const auto& [slot, level] : a.gl2) push("A" + std::to_string(level) + "(" + slot + ")");
    for (const auto& [part, count] : a.opaque)
        for (int i = 0; i < count; ++i) push(part.dualized ? "~" + part.name : part.name);
    if (!a.twist.trivial()) out += "@" + render_char(a.twist);
    return out;
}

Atom parse_atom(const std::string& text, const CaseAssumptions& cas) {
    std::string t = trim(text);
    if (t.empty()) perr("empty atom text");
    CharacterExpr suffix = CharacterExpr::one();
    const std::size_t at = t.find('@');
    if (at != std::string::npos) {
        if (t.find('@', at + 1) != std::string::npos) perr("multiple '@' in atom: " + text);
        suffix = parse_char(t.substr(at + 1));
        t = trim(t.substr(0, at));
        if (t.empty()) return Atom::character(suffix);
    }
    Atom acc = Atom::one();
    for (const std::string& raw : split(t, '*')) {
        std::string u = trim(raw);
        if (u.empty()) perr("empty unit in atom: '" + text + "'");
        const bool dualize = u[0] == '~';
        if (dualize) {
            u = trim(u.substr(1));
            if (u.empty()) perr("dangling '~' in atom: '" + text + "'");
        }
        Atom part;
        if (u == "1") {
            part = Atom::one();
        } else if (const auto pw = match_power(u)) {
            const auto& [level, slot] = *pw;
            if (!cas.has_slot(slot)) perr("unknown slot: " + slot);
            if (level < 0 || level > 4)
                throw Error(ErrKind::LevelOutOfRange, "level out of range in '" + u + "'");
            part = level == 0 ? Atom::one() : Atom::gl2_part(slot, level);
        } else if (cas.has_opaque(u)) {
            part = Atom::opaque_part(u);
        } else if (cas.has_slot(u)) {
            part = Atom::gl2_part(u, 1);
        } else {
            part = Atom::character(parse_char(u));
        }
        if (dualize) part = dual_atom(std::move(part));
        for (const auto& [slot, level] : part.gl2) {
            if (acc.gl2.count(slot)) perr("repeated slot in atom: " + slot);
            acc.gl2[slot] = level;
        }
        for (const auto& [op, n] : part.opaque) acc.opaque[op] += n;
        acc.twist = acc.twist * part.twist;
    }
    acc.twist = acc.twist * suffix;
    return acc;
}

namespace {

// Whitespace-separated chunks with bare "x" tokens dropped as separators.
std::vector<std::string> factor_chunks(const std::string& text) {
    std::vector<std::string> chunks;
    std::istringstream iss(text);
    std::string tok;
    while (iss >> tok)
        if (tok != "x") chunks.push_back(tok);
    return chunks;
}

}  // namespace

std::string render_factor(const FactorSymbol& f) {
    if (f.is_zeta()) return "zeta";
    if (f.parts().empty()) return render_char(f.twist());
    std::string out;
    for (const Atom& p : f.parts()) {
        if (!out.empty()) out += " x ";
        out += render_atom(p);
    }
    if (!f.twist().trivial()) out += "@" + render_char(f.twist());
    return out;
}

FactorSymbol parse_factor(const std::string& text, const CaseAssumptions& cas) {
    const std::vector<std::string> chunks = factor_chunks(text);
    if (chunks.empty()) perr("empty factor text");
    if (chunks.size() == 1 && chunks[0] == "zeta") return FactorSymbol::make({}, cas);
    std::vector<Atom> sides;
    sides.reserve(chunks.size());
    for (const std::string& ch : chunks) sides.push_back(parse_atom(ch, cas));
    return FactorSymbol::make(sides, cas);
}

TargetScan scan_target(const std::string& text) {
    TargetScan ts;
    auto note_slot = [&ts](const std::string& name, int level) {
        if (!ts.slot_levels.count(name)) ts.slot_order.push_back(name);
        int& cur = ts.slot_levels[name];
        cur = std::max(cur, level);
    };
    auto note_gens = [&ts](const CharacterExpr& c) {
        for (const auto& [name, k] : c.e) {
            if (name.rfind("omega_", 0) == 0) continue;
            if (std::find(ts.generators.begin(), ts.generators.end(), name) ==
                ts.generators.end())
                ts.generators.push_back(name);
        }
    };
    for (const std::string& chunk : factor_chunks(text)) {
        if (chunk == "zeta") continue;
        std::string head = chunk;
        const std::size_t at = chunk.find('@');
        if (at != std::string::npos) {
            note_gens(parse_char(chunk.substr(at + 1)));
            head = trim(chunk.substr(0, at));
        }
        for (const std::string& raw : split(head, '*')) {
            std::string u = trim(raw);
            if (u.empty() || u == "1") continue;
            if (u[0] == '~') u = trim(u.substr(1));
            if (const auto pw = match_power(u)) {
                note_slot(pw->second, pw->first);
            } else if (u.find('^') != std::string::npos) {
                note_gens(parse_char(u));
            } else if (valid_name(u)) {
                if (std::find(ts.opaques.begin(), ts.opaques.end(), u) == ts.opaques.end())
                    ts.opaques.push_back(u);
            } else {
                perr("bad unit in target text: '" + u + "'");
            }
        }
    }
    return ts;
}

namespace {

json char_list(const std::vector<CharacterExpr>& cs) {
    json arr = json::array();
    for (const auto& c : cs) arr.push_back(render_char(c));
    return arr;
}

std::vector<CharacterExpr> parse_char_list(const json& arr, const std::string& what) {
    std::vector<CharacterExpr> out;
    for (const auto& s : arr) {
        if (!s.is_string()) perr(what + " entries must be strings");
        out.push_back(parse_char(s.get<std::string>()));
    }
    return out;
}

json case_to_json(const CaseAssumptions& cas) {
    json cj;
    json slots = json::array();
    for (const auto& [name, tag] : cas.slots())
        slots.push_back({{"name", name}, {"tag", tag_name(tag)}});
    cj["slots"] = std::move(slots);
    json ops = json::array();
    for (const auto& [name, info] : cas.opaques()) {
        if (!info.kind.empty()) continue;  // synthesized piece, rebuilt by finalize()
        ops.push_back({{"name", name},
                       {"rank", info.rank},
                       {"cuspidal", info.cuspidal},
                       {"cuspidal_certain", info.cuspidal_certain},
                       {"may_contain_trivial", info.may_contain_trivial},
                       {"dihedral", info.dihedral},
                       {"self_twists", char_list(info.self_twists)},
                       {"non_self_twists", char_list(info.non_self_twists)}});
    }
    cj["opaques"] = std::move(ops);
    cj["generators"] = cas.declared_generators();
    cj["relations"] = char_list(cas.declared_relations());
    cj["nontrivial"] = char_list(cas.declared_nontrivial());
    json sineq = json::array();
    for (const auto& [a, b] : cas.slot_inequivalences()) sineq.push_back({a, b});
    cj["slot_inequivalences"] = std::move(sineq);
    auto atom_pairs = [](const std::vector<std::pair<Atom, Atom>>& ps) {
        json arr = json::array();
        for (const auto& [a, b] : ps) arr.push_back({render_atom(a), render_atom(b)});
        return arr;
    };
    cj["shape_inequivalences"] = atom_pairs(cas.shape_inequivalences());
    cj["exact_inequivalences"] = atom_pairs(cas.exact_inequivalences());
    return cj;
}

void case_from_json(const json& cj, CaseAssumptions& cas) {
    for (const auto& sj : cj.value("slots", json::array())) {
        const std::string name = sj.at("name").get<std::string>();
        const std::string tag = sj.at("tag").get<std::string>();
        const auto t = tag_from_name(tag);
        if (!t) throw Error(ErrKind::MalformedCertificate, "unknown slot tag: " + tag);
        cas.add_slot(name, *t);
    }
    for (const auto& oj : cj.value("opaques", json::array())) {
        OpaqueInfo info;
        info.rank = oj.at("rank").get<int>();
        info.cuspidal = oj.value("cuspidal", true);
        info.cuspidal_certain = oj.value("cuspidal_certain", true);
        info.may_contain_trivial = oj.value("may_contain_trivial", false);
        info.dihedral = oj.value("dihedral", false);
        info.self_twists = parse_char_list(oj.value("self_twists", json::array()), "self_twists");
        info.non_self_twists =
            parse_char_list(oj.value("non_self_twists", json::array()), "non_self_twists");
        cas.add_opaque(oj.at("name").get<std::string>(), std::move(info));
    }
    for (const auto& g : cj.value("generators", json::array()))
        cas.add_char_generator(g.get<std::string>());
    for (const auto& r : cj.value("relations", json::array()))
        cas.add_relation(parse_char(r.get<std::string>()));
    for (const auto& n : cj.value("nontrivial", json::array()))
        cas.declare_nontrivial(parse_char(n.get<std::string>()));
    for (const auto& p : cj.value("slot_inequivalences", json::array()))
        cas.declare_slot_inequivalent(p.at(0).get<std::string>(), p.at(1).get<std::string>());
    for (const auto& p : cj.value("shape_inequivalences", json::array()))
        cas.declare_shape_inequivalent(parse_atom(p.at(0).get<std::string>(), cas),
                                       parse_atom(p.at(1).get<std::string>(), cas));
    for (const auto& p : cj.value("exact_inequivalences", json::array()))
        cas.declare_exact_inequivalent(parse_atom(p.at(0).get<std::string>(), cas),
                                       parse_atom(p.at(1).get<std::string>(), cas));
    cas.finalize();
}

}  // namespace

std::string certificate_to_json(const Certificate& cert) {
    json j;
    j["schema_version"] = 1;
    j["name"] = cert.name;
    j["case"] = case_to_json(cert.assumptions);
    json kj;
    if (cert.coefficients) {
        json cv = json::array();
        for (const auto& [key, m] : cert.coefficients->c) {
            const auto& [pj, pk, pr] = key;
            cv.push_back({{"j", pj}, {"k", pk}, {"r", pr}, {"m", m}});
        }
        kj["coefficients"] = std::move(cv);
        kj["chi"] = render_char(cert.chi);
        kj["slot1"] = cert.slot1;
        kj["slot2"] = cert.slot2;
    }
    if (cert.isobaric) {
        json terms = json::array();
        for (const auto& [a, m] : cert.isobaric->terms)
            terms.push_back({{"atom", render_atom(a)}, {"mult", m}});
        kj["isobaric"] = std::move(terms);
    }
    j["construction"] = std::move(kj);
    j["target"] = render_factor(cert.target);
    json rw = json::array();
    for (const auto& r : cert.rewrites)
        rw.push_back({{"factor", render_factor(r.factor)}, {"slot", r.slot}});
    j["rewrites"] = std::move(rw);
    json bs = json::array();
    for (const auto& b : cert.boosts)
        bs.push_back({{"factor", render_factor(b.factor)}, {"citation", b.citation}});
    j["boosts"] = std::move(bs);
    json es = json::array();
    for (const auto& e : cert.escapes)
        es.push_back({{"factor", render_factor(e.factor)}, {"citation", e.citation}});
    j["escapes"] = std::move(es);
    if (cert.expected)
        j["expected"] = {
            {"l1", cert.expected->l1}, {"l2", cert.expected->l2}, {"k_hi", cert.expected->k_hi}};
    if (!cert.form_overrides.empty()) {
        json fo;
        for (const auto& [slot, form] : cert.form_overrides) fo[slot] = form;
        j["numeric"] = {{"forms", std::move(fo)}};
    }
    if (cert.declared_classes) {
        json cl = json::array();
        for (const auto& [f, e] : cert.declared_classes->factors)
            cl.push_back({{"factor", render_factor(f)}, {"exponent", e}});
        j["classes"] = std::move(cl);
    }
    return j.dump(2) + "\n";
}

Certificate certificate_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        perr(std::string("invalid JSON: ") + e.what());
    }
    try {
        if (!j.is_object()) perr("certificate document must be a JSON object");
        if (j.value("schema_version", -1) != 1)
            throw Error(ErrKind::MalformedCertificate, "unsupported schema_version");
        Certificate cert;
        cert.name = j.value("name", "");
        case_from_json(j.value("case", json::object()), cert.assumptions);
        const CaseAssumptions& cas = cert.assumptions;
        const json kj = j.value("construction", json::object());
        if (kj.contains("coefficients")) {
            CoefficientVector cv;
            for (const auto& ej : kj.at("coefficients")) {
                const auto key = std::make_tuple(ej.at("j").get<int>(), ej.at("k").get<int>(),
                                                 ej.at("r").get<int>());
                cv.c[key] += ej.at("m").get<long long>();
            }
            cert.coefficients = std::move(cv);
            cert.chi = parse_char(kj.value("chi", "1"));
            cert.slot1 = kj.value("slot1", "pi");
            cert.slot2 = kj.value("slot2", "pi2");
        }
        if (kj.contains("isobaric")) {
            VirtualRep rep;
            for (const auto& tj : kj.at("isobaric"))
                rep.terms.emplace_back(parse_atom(tj.at("atom").get<std::string>(), cas),
                                       tj.at("mult").get<long long>());
            cert.isobaric = std::move(rep);
        }
        cert.target = parse_factor(j.at("target").get<std::string>(), cas);
        for (const auto& rj : j.value("rewrites", json::array()))
            cert.rewrites.push_back({parse_factor(rj.at("factor").get<std::string>(), cas),
                                     rj.at("slot").get<std::string>()});
        for (const auto& bj : j.value("boosts", json::array()))
            cert.boosts.push_back({parse_factor(bj.at("factor").get<std::string>(), cas),
                                   bj.value("citation", "")});
        for (const auto& ej : j.value("escapes", json::array()))
            cert.escapes.push_back({parse_factor(ej.at("factor").get<std::string>(), cas),
                                    ej.value("citation", "")});
        if (j.contains("expected")) {
            const json& xj = j.at("expected");
            cert.expected = Expected{xj.at("l1").get<long long>(), xj.at("l2").get<long long>(),
                                     xj.at("k_hi").get<long long>()};
        }
        if (j.contains("numeric")) {
            const json fj = j.at("numeric").value("forms", json::object());
            for (const auto& [slot, form] : fj.items())
                cert.form_overrides[slot] = form.get<std::string>();
        }
        if (j.contains("classes")) {
            FactorMultiset cl;
            for (const auto& cj : j.at("classes"))
                cl.add(parse_factor(cj.at("factor").get<std::string>(), cas),
                       cj.at("exponent").get<long long>());
            cert.declared_classes = std::move(cl);
        }
        return cert;
    } catch (const json::exception& e) {
        perr(std::string("bad certificate document: ") + e.what());
    }
}

std::string report_to_json(const Report& r, const std::string& fixture) {
    json j;
    if (!fixture.empty()) j["fixture"] = fixture;
    j["schema_version"] = 1;
    j["verdict"] = verdict_name(r.verdict);
    j["l1"] = r.l1;
    j["l2"] = r.l2;
    j["k"] = {{"lo", r.k.lo}, {"hi", r.k.hi}, {"bounded", r.k_bounded}};
    j["target"] = render_factor(r.target);
    j["dual_target"] = render_factor(r.dual_target);
    j["degree"] = r.degree;
    json rows = json::array();
    for (const auto& row : r.ledger)
        rows.push_back({{"factor", render_factor(row.factor)},
                        {"exponent", row.exponent},
                        {"lo", row.pole.lo},
                        {"hi", row.pole.hi},
                        {"bounded", row.bounded},
                        {"rule", row.rule}});
    j["classes"] = std::move(rows);
    json ab = json::array();
    for (const auto& f : r.abelian) ab.push_back(render_factor(f));
    j["abelian"] = std::move(ab);
    j["notes"] = r.notes;
    return j.dump(2) + "\n";
}

}  // namespace lscert
