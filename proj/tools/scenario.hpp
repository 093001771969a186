#ifndef COARSETOOL_SCENARIO_HPP
#define COARSETOOL_SCENARIO_HPP

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstring>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "coarse/cochain.hpp"
#include "coarse/error.hpp"
#include "coarse/essential.hpp"
#include "coarse/fixtures.hpp"
#include "coarse/group.hpp"
#include "coarse/homology.hpp"
#include "coarse/metric.hpp"
#include "coarse/mobility.hpp"
#include "coarse/rips.hpp"
#include "coarse/separation.hpp"

namespace coarsetool {

using json = nlohmann::json;
using namespace coarse;

struct ScenarioError : std::runtime_error {
    int line;
    ScenarioError(int l, const std::string& msg) : std::runtime_error(msg), line(l) {}
};

// Line numbers of every key and array element, keyed by JSON pointer.
// The text must already be valid JSON.
class Locator {
public:
    explicit Locator(const std::string& text) : s_(text) {
        skip();
        value("");
    }

    int line(const std::string& pointer) const {
        std::string p = pointer;
        while (true) {
            auto it = lines_.find(p);
            if (it != lines_.end()) return it->second;
            auto cut = p.rfind('/');
            if (cut == std::string::npos) return 1;
            p = p.substr(0, cut);
        }
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;
    int line_ = 1;
    std::map<std::string, int> lines_;

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
            if (s_[i_] == '\n') ++line_;
            ++i_;
        }
    }
    std::string string() {
        std::string out;
        ++i_;
        while (i_ < s_.size() && s_[i_] != '"') {
            if (s_[i_] == '\\') out += s_[i_++];
            out += s_[i_++];
        }
        ++i_;
        return out;
    }
    static std::string escape(const std::string& k) {
        std::string out;
        for (char ch : k) {
            if (ch == '~')
                out += "~0";
            else if (ch == '/')
                out += "~1";
            else
                out += ch;
        }
        return out;
    }
    void value(const std::string& path) {
        lines_.emplace(path, line_);
        if (i_ >= s_.size()) return;
        char ch = s_[i_];
        if (ch == '{') {
            ++i_;
            skip();
            while (i_ < s_.size() && s_[i_] != '}') {
                int at = line_;
                std::string key = path + "/" + escape(string());
                skip();
                ++i_;  // ':'
                skip();
                lines_.emplace(key, at);
                value(key);
                skip();
                if (s_[i_] == ',') ++i_;
                skip();
            }
            ++i_;
        } else if (ch == '[') {
            ++i_;
            skip();
            for (int k = 0; i_ < s_.size() && s_[i_] != ']'; ++k) {
                value(path + "/" + std::to_string(k));
                skip();
                if (s_[i_] == ',') ++i_;
                skip();
            }
            ++i_;
        } else if (ch == '"') {
            string();
        } else {
            while (i_ < s_.size() && !std::strchr(",]} \t\r\n", s_[i_])) ++i_;
        }
    }
};

struct Caps {
    std::size_t max_vertices = 2'000'000;
    std::size_t max_simplices = 20'000'000;
    double time_budget = 0;  // seconds for the whole run, 0 = none
};

struct SpaceSpec {
    enum class Kind { group, fixture, table } kind = Kind::group;
    GroupPtr group;
    std::string fixture;
    std::vector<std::vector<int>> table;
    int radius = 0;
    json w;
};

// One window of the scenario space.
struct Built {
    MetricSpace space = MetricSpace::from_graph({});
    std::optional<BallModel> ball;
    std::optional<SubgroupSpec> h;
    Mask w;
    std::map<std::string, Mask> components;
    int radius = 0;
};

inline GroupPtr parse_group(const json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "Z") return std::make_shared<FreeAbelian>(1);
        if (s.rfind("Z^", 0) == 0) return std::make_shared<FreeAbelian>(std::stoi(s.substr(2)));
        if (s.rfind("F_", 0) == 0) return std::make_shared<FreeGroup>(std::stoi(s.substr(2)));
        if (s == "amalgam") return std::make_shared<AmalgamZ2>();
        if (s == "lamplighter") return std::make_shared<Lamplighter>();
        throw Error("bad-group", "unknown group '" + s + "'");
    }
    if (!j.is_object() || !j.contains("family")) throw Error("bad-group", "group must be a name or an object with 'family'");
    std::string f = j.at("family").get<std::string>();
    auto factors = [&] {
        std::vector<GroupPtr> out;
        for (const auto& g : j.at("factors")) out.push_back(parse_group(g));
        return out;
    };
    if (f == "free_abelian") return std::make_shared<FreeAbelian>(j.at("rank").get<int>());
    if (f == "free") return std::make_shared<FreeGroup>(j.at("rank").get<int>());
    if (f == "product") return std::make_shared<DirectProduct>(factors());
    if (f == "free_product") return std::make_shared<FreeProduct>(factors());
    if (f == "amalgam") return std::make_shared<AmalgamZ2>();
    if (f == "lamplighter") return std::make_shared<Lamplighter>();
    throw Error("bad-group", "unknown family '" + f + "'");
}

inline SubgroupSpec parse_subgroup(const json& j) {
    if (j.contains("axis")) return SubgroupSpec::axis(j.at("axis").get<int>());
    if (j.contains("lattice")) return SubgroupSpec::lattice(j.at("lattice").get<int>());
    if (j.contains("factor")) return SubgroupSpec::factor(j.at("factor").get<int>());
    if (j.contains("words")) return SubgroupSpec::of_words(j.at("words").get<std::vector<std::vector<int>>>());
    throw Error("bad-subgroup-spec", "expected one of axis, lattice, factor, words");
}

// A point is a word (group) or a coordinate label (fixture) or an index (table).
inline PointId resolve_point(const Built& b, const json& p) {
    if (b.ball) {
        auto id = b.ball->id(b.ball->group->word(p.get<std::vector<int>>()));
        if (!id) throw Error("bad-point", "word " + p.dump() + " is outside the window");
        return *id;
    }
    if (p.is_number_integer()) {
        int v = p.get<int>();
        if (v < 0 || static_cast<std::size_t>(v) >= b.space.size()) throw Error("bad-point", "index out of range");
        return static_cast<PointId>(v);
    }
    auto id = b.space.find(p.get<std::vector<int>>());
    if (!id) throw Error("bad-point", "point " + p.dump() + " is outside the window");
    return *id;
}

inline Built build(const SpaceSpec& spec, int radius, const Caps& caps) {
    Built b;
    b.radius = radius;
    switch (spec.kind) {
    case SpaceSpec::Kind::group: {
        b.ball = build_ball(spec.group, radius, caps.max_vertices);
        b.space = b.ball->space;
        break;
    }
    case SpaceSpec::Kind::fixture: {
        Fixture f = grid_fixture(spec.fixture, radius);
        b.space = f.space;
        b.w = f.w;
        b.components = std::move(f.components);
        break;
    }
    case SpaceSpec::Kind::table:
        b.space = MetricSpace::from_table(spec.table);
        b.w = b.space.none();
        return b;
    }
    if (b.space.size() > caps.max_vertices)
        throw Error("window-too-large", "window has " + std::to_string(b.space.size()) + " vertices, cap is " +
                                            std::to_string(caps.max_vertices));
    const json& w = spec.w;
    if (w.is_null() || (w.is_string() && w.get<std::string>() == "fixture")) {
        if (spec.kind != SpaceSpec::Kind::fixture) b.w = b.space.none();
    } else if (w.contains("subgroup")) {
        b.h = parse_subgroup(w.at("subgroup"));
        b.w = subgroup_trace(*b.ball, *b.h);
    } else if (w.contains("points")) {
        b.w = b.space.none();
        for (const auto& p : w.at("points")) b.w.set(resolve_point(b, p));
    }
    return b;
}

// Component selectors: a fixture component name, {"contains": point} or {"deep": k}.
inline std::pair<std::string, Mask> resolve_component(const Built& b, const json& sel, int r, int a, int collar) {
    if (sel.is_string()) {
        auto it = b.components.find(sel.get<std::string>());
        if (it == b.components.end()) throw Error("unknown-component", sel.get<std::string>());
        return {it->first, it->second};
    }
    auto cs = complement_components(b.space, b.w, r, a, collar);
    if (sel.contains("contains")) {
        PointId p = resolve_point(b, sel.at("contains"));
        for (const auto& m : cs.components)
            if (m.test(p)) return {"contains " + sel.at("contains").dump(), m};
        throw Error("bad-point", "point " + sel.at("contains").dump() + " lies in N_A(W)");
    }
    int k = sel.at("deep").get<int>();
    int seen = 0;
    for (std::size_t i = 0; i < cs.components.size(); ++i)
        if (cs.deep[i] && seen++ == k) return {"deep " + std::to_string(k), cs.components[i]};
    throw Error("unknown-component", "only " + std::to_string(seen) + " deep components");
}

// Parameter documentation doubles as the validation schema.
enum class Kind { integer, integers, boolean, selector, selectors, point, points };

struct ParamDoc {
    std::string key;
    Kind kind;
    std::string fallback;
    std::string help;
};

struct AnalysisDoc {
    std::string name;
    std::string summary;
    std::vector<ParamDoc> params;
    bool group_only = false;
    bool needs_window = true;
};

inline const std::vector<AnalysisDoc>& analysis_docs() {
    static const std::vector<AnalysisDoc> docs = {
        {"ends",
         "Deep components of the window minus a ball, and dim H^1 from two-scale images; checks ends = dim + 1.",
         {{"excisions", Kind::integers, "[2,3,4]", "inner excision radii S of the schedule family"},
          {"scale", Kind::integer, "1", "inner Rips scale i"},
          {"outer_scale", Kind::integer, "scale", "outer Rips scale j; outer excision is S - j"},
          {"collar", Kind::integer, "1", "collar width c"}}},
        {"separate",
         "Deep (r, A) complementary components of W, per window radius, with orbit classes for subgroups.",
         {{"r", Kind::integer, "1", "Rips scale of the complement"},
          {"a", Kind::integer, "0", "thickening A of W"},
          {"radii", Kind::integers, "[R-2,R-1,R]", "window radii"},
          {"collar", Kind::integer, "1", "collar width c"}}},
        {"essential",
         "Pushes H~_{n-1} classes of W annuli into (C u W) annuli across the schedule family "
         "(S, i, S' = min(S/2, S - 2i), j = 2i).",
         {{"n", Kind::integer, "1", "dimension of W"},
          {"excisions", Kind::integers, "[4,5,6]", "inner excision radii S"},
          {"scale", Kind::integer, "1", "inner Rips scale i"},
          {"components", Kind::selectors, "all", "components to classify"},
          {"collar", Kind::integer, "1", "collar width c"}}},
        {"almost-essential",
         "Smallest B with W inside N_B(C - N_A(W)), per window radius.",
         {{"a", Kind::integer, "0", "thickening A of W"},
          {"radii", Kind::integers, "[R-2,R-1,R]", "window radii"},
          {"components", Kind::selectors, "all", "components to probe"},
          {"collar", Kind::integer, "1", "collar width c"}}},
        {"mv",
         "Mayer-Vietoris assembly for X = (C1 u N_A(W)) u (C2 u N_A(W)) relative to the collar; "
         "connecting images of the W-piece cohomology basis.",
         {{"component", Kind::selector, "required", "the component C1"},
          {"r", Kind::integer, "2", "complementarity scale"},
          {"a", Kind::integer, "1", "thickening A of W"},
          {"scale", Kind::integer, "2", "Rips scale of all pieces"},
          {"cap", Kind::integer, "3", "simplex dimension cap"},
          {"class_degree", Kind::integer, "1", "degree of the W classes"},
          {"collar", Kind::integer, "1", "collar width c"}}},
        {"mobility",
         "Mobility sets of a local class over a D schedule and the coarse-manifold detector.",
         {{"degree", Kind::integer, "1", "cochain degree"},
          {"scale", Kind::integer, "1", "Rips scale"},
          {"cap", Kind::integer, "degree+1", "simplex dimension cap"},
          {"d", Kind::integers, "[1,2,3]", "D schedule"},
          {"center", Kind::point, "window center", "where the local class is sought"},
          {"max_d", Kind::integer, "max(d)", "largest support radius for the local class"},
          {"stab", Kind::boolean, "false", "compare the stabilizer orbit with Mob (groups only)"},
          {"collar", Kind::integer, "1", "collar width c"}}},
        {"acyclicity",
         "Uniform acyclicity profile: smallest lambda(i) and mu(i, r) over the sampled centers.",
         {{"k_max", Kind::integer, "1", "largest homology degree"},
          {"scales", Kind::integers, "[1]", "inner scales i"},
          {"radii", Kind::integers, "[1,2,3,4,5]", "radii r"},
          {"lambda_max", Kind::integer, "4", "largest outer scale"},
          {"mu_max", Kind::integer, "max(radii)+4", "largest outer radius"},
          {"centers", Kind::points, "[window center]", "sampled centers"}},
         false,
         false},
        {"pd-signature",
         "Checks dim H^k(W) = 0 for 0 < k < n and dim H^n(W) = 1, each stable over the schedule family.",
         {{"n", Kind::integer, "1", "expected dimension"},
          {"excisions", Kind::integers, "[2,3,4]", "inner excision radii S"},
          {"scale", Kind::integer, "1", "inner Rips scale i"},
          {"outer_scale", Kind::integer, "scale", "outer Rips scale j"},
          {"collar", Kind::integer, "1", "collar width c"}}},
        {"almost-invariant",
         "Extracts the almost invariant set {g : gH lies in C u N_A(H)} and its stabilizer trace.",
         {{"component", Kind::selector, "required", "the component C"},
          {"r", Kind::integer, "1", "scale used to resolve the component"},
          {"a", Kind::integer, "0", "thickening A of H"},
          {"collar", Kind::integer, "1", "collar width c"}},
         true},
    };
    return docs;
}

inline const AnalysisDoc* find_doc(const std::string& name) {
    for (const auto& d : analysis_docs())
        if (d.name == name) return &d;
    return nullptr;
}

inline std::string describe_analysis(const std::string& name) {
    const AnalysisDoc* d = find_doc(name);
    if (!d) throw Error("unknown-analysis", name);
    std::ostringstream os;
    os << d->name << ": " << d->summary << "\n";
    if (d->group_only) os << "  (group spaces with a subgroup W only)\n";
    for (const auto& p : d->params) os << "  " << p.key << " (default " << p.fallback << "): " << p.help << "\n";
    return os.str();
}

struct Scenario {
    std::string name;
    json source;
    SpaceSpec space;
    Caps caps;
    std::vector<json> analyses;
};

namespace detail {

inline int get_int(const json& a, const std::string& k, int def) { return a.contains(k) ? a.at(k).get<int>() : def; }
inline std::vector<int> get_ints(const json& a, const std::string& k, std::vector<int> def) {
    return a.contains(k) ? a.at(k).get<std::vector<int>>() : def;
}

inline bool get_bool(const json& a, const std::string& k) { return a.contains(k) && a.at(k).get<bool>(); }

inline bool is_point(const json& p) {
    if (p.is_number_integer()) return true;
    if (!p.is_array()) return false;
    return std::all_of(p.begin(), p.end(), [](const json& v) { return v.is_number_integer(); });
}

inline bool is_selector(const json& s) {
    if (s.is_string()) return true;
    if (!s.is_object() || s.size() != 1) return false;
    if (s.contains("contains")) return is_point(s.at("contains"));
    if (s.contains("deep")) return s.at("deep").is_number_integer();
    return false;
}

inline bool kind_ok(Kind k, const json& v) {
    switch (k) {
    case Kind::integer:
        return v.is_number_integer();
    case Kind::integers:
        return v.is_array() && !v.empty() &&
               std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number_integer(); });
    case Kind::boolean:
        return v.is_boolean();
    case Kind::selector:
        return is_selector(v);
    case Kind::selectors:
        return v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), is_selector);
    case Kind::point:
        return is_point(v);
    case Kind::points:
        return v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), is_point);
    }
    return false;
}

inline const char* kind_name(Kind k) {
    switch (k) {
    case Kind::integer:
        return "an integer";
    case Kind::integers:
        return "a non-empty list of integers";
    case Kind::boolean:
        return "a boolean";
    case Kind::selector:
        return "a component selector";
    case Kind::selectors:
        return "a non-empty list of component selectors";
    case Kind::point:
        return "a point";
    default:
        return "a non-empty list of points";
    }
}

}

// Parses and validates a scenario; all errors carry the line of the offending entry.
inline Scenario parse_scenario(const std::string& text, const std::string& name) {
    Scenario sc;
    sc.name = name;
    try {
        sc.source = json::parse(text);
    } catch (const json::parse_error& e) {
        int line = 1;
        for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()) && i + 1 < e.byte; ++i)
            if (text[i] == '\n') ++line;
        std::string what = e.what();
        auto cut = what.find("syntax error");
        throw ScenarioError(line, cut == std::string::npos ? what : what.substr(cut));
    }
    Locator loc(text);
    auto fail = [&](const std::string& ptr, const std::string& msg) -> ScenarioError {
        return ScenarioError(loc.line(ptr), (ptr.empty() ? "/" : ptr) + ": " + msg);
    };
    const json& j = sc.source;
    if (!j.is_object()) throw fail("", "scenario must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "schema" && it.key() != "space" && it.key() != "w" && it.key() != "analyses" &&
            it.key() != "caps")
            throw fail("/" + it.key(), "unknown field '" + it.key() + "'");
    if (!j.contains("schema") || j.at("schema") != 1) throw fail("/schema", "expected \"schema\": 1");

    // Space.
    if (!j.contains("space") || !j.at("space").is_object()) throw fail("/space", "missing space object");
    const json& sp = j.at("space");
    SpaceSpec& s = sc.space;
    if (sp.contains("table")) {
        s.kind = SpaceSpec::Kind::table;
        try {
            s.table = sp.at("table").get<std::vector<std::vector<int>>>();
            MetricSpace::from_table(s.table);
        } catch (const std::exception& e) {
            throw fail("/space/table", e.what());
        }
    } else {
        if (!sp.contains("radius") || !sp.at("radius").is_number_integer() || sp.at("radius").get<int>() < 1)
            throw fail("/space/radius", "radius must be a positive integer");
        s.radius = sp.at("radius").get<int>();
        if (sp.contains("group")) {
            s.kind = SpaceSpec::Kind::group;
            try {
                s.group = parse_group(sp.at("group"));
            } catch (const std::exception& e) {
                throw fail("/space/group", e.what());
            }
        } else if (sp.contains("fixture")) {
            s.kind = SpaceSpec::Kind::fixture;
            s.fixture = sp.at("fixture").get<std::string>();
            auto names = list_fixtures();
            if (std::none_of(names.begin(), names.end(), [&](const FixtureInfo& f) { return f.name == s.fixture; }))
                throw fail("/space/fixture", "unknown fixture '" + s.fixture + "'");
            if (s.fixture == "slit_pocket" && s.radius < 8) throw fail("/space/radius", "slit_pocket needs radius >= 8");
        } else {
            throw fail("/space", "space needs 'group', 'fixture' or 'table'");
        }
    }

    // W.
    if (j.contains("w")) {
        const json& w = j.at("w");
        s.w = w;
        if (w.is_string()) {
            if (w.get<std::string>() != "fixture" || s.kind != SpaceSpec::Kind::fixture)
                throw fail("/w", "\"fixture\" W needs a fixture space");
        } else if (w.is_object() && w.contains("subgroup")) {
            if (s.kind != SpaceSpec::Kind::group) throw fail("/w/subgroup", "subgroup W needs a group space");
            try {
                SubgroupSpec h = parse_subgroup(w.at("subgroup"));
                subgroup_generators(*s.group, h);
            } catch (const std::exception& e) {
                throw fail("/w/subgroup", e.what());
            }
        } else if (w.is_object() && w.contains("points")) {
            const json& pts = w.at("points");
            if (!pts.is_array() || !std::all_of(pts.begin(), pts.end(), detail::is_point))
                throw fail("/w/points", "points must be a list of words or coordinates");
        } else {
            throw fail("/w", "W must be \"fixture\", {\"subgroup\": ...} or {\"points\": [...]}");
        }
    } else if (s.kind == SpaceSpec::Kind::group) {
        throw fail("/space", "group spaces need a 'w' field");
    }

    // Caps.
    if (j.contains("caps")) {
        const json& c = j.at("caps");
        if (!c.is_object()) throw fail("/caps", "caps must be an object");
        for (auto it = c.begin(); it != c.end(); ++it) {
            std::string ptr = "/caps/" + it.key();
            if (it.key() == "max_vertices" || it.key() == "max_simplices") {
                if (!it->is_number_unsigned() || it->get<std::uint64_t>() == 0)
                    throw fail(ptr, it.key() + " must be a positive integer");
                (it.key() == "max_vertices" ? sc.caps.max_vertices : sc.caps.max_simplices) =
                    it->get<std::size_t>();
            } else if (it.key() == "time_budget") {
                if (!it->is_number() || it->get<double>() <= 0) throw fail(ptr, "time_budget must be positive seconds");
                sc.caps.time_budget = it->get<double>();
            } else {
                throw fail(ptr, "unknown cap '" + it.key() + "'");
            }
        }
    }

    // Analyses.
    if (!j.contains("analyses") || !j.at("analyses").is_array() || j.at("analyses").empty())
        throw fail("/analyses", "analyses must be a non-empty list");
    const int R = s.radius;
    for (std::size_t n = 0; n < j.at("analyses").size(); ++n) {
        const json& a = j.at("analyses")[n];
        std::string base = "/analyses/" + std::to_string(n);
        if (!a.is_object() || !a.contains("type") || !a.at("type").is_string())
            throw fail(base, "analysis needs a string 'type'");
        std::string type = a.at("type").get<std::string>();
        const AnalysisDoc* doc = find_doc(type);
        if (!doc) throw fail(base + "/type", "unknown analysis '" + type + "'");
        for (auto it = a.begin(); it != a.end(); ++it) {
            if (it.key() == "type") continue;
            auto p = std::find_if(doc->params.begin(), doc->params.end(),
                                  [&](const ParamDoc& d) { return d.key == it.key(); });
            if (p == doc->params.end()) throw fail(base + "/" + it.key(), "unknown parameter for " + type);
            if (!detail::kind_ok(p->kind, *it))
                throw fail(base + "/" + it.key(), it.key() + " must be " + detail::kind_name(p->kind));
        }
        for (const auto& p : doc->params)
            if (p.fallback == "required" && !a.contains(p.key))
                throw fail(base, type + " needs '" + p.key + "'");
        if (doc->group_only && (s.kind != SpaceSpec::Kind::group || !s.w.contains("subgroup")))
            throw fail(base + "/type", type + " needs a group space with a subgroup W");
        if (doc->needs_window && s.kind == SpaceSpec::Kind::table)
            throw fail(base + "/type", type + " needs a windowed space (group or fixture)");

        auto positive = [&](const std::string& k) {
            if (a.contains(k)) {
                auto v = a.at(k).is_array() ? a.at(k).get<std::vector<int>>() : std::vector<int>{a.at(k).get<int>()};
                for (int x : v)
                    if (x < 1) throw fail(base + "/" + k, k + " must be positive");
            }
        };
        auto nonnegative = [&](const std::string& k) {
            if (a.contains(k)) {
                auto v = a.at(k).is_array() ? a.at(k).get<std::vector<int>>() : std::vector<int>{a.at(k).get<int>()};
                for (int x : v)
                    if (x < 0) throw fail(base + "/" + k, k + " must be non-negative");
            }
        };
        for (const char* k : {"n", "scale", "outer_scale", "r", "radii", "cap", "scales", "lambda_max", "d"}) positive(k);
        for (const char* k : {"a", "collar", "excisions", "k_max", "mu_max", "max_d", "class_degree", "degree"})
            nonnegative(k);
        if (a.contains("components") || a.contains("component")) {
            std::string key = a.contains("components") ? "components" : "component";
            json sels = a.contains("components") ? a.at("components") : json::array({a.at("component")});
            for (std::size_t t = 0; t < sels.size(); ++t)
                if (sels[t].is_string() && s.kind != SpaceSpec::Kind::fixture)
                    throw fail(base + "/" + key, "named components need a fixture space");
        }
        int c = detail::get_int(a, "collar", 1);
        if (type == "ends" || type == "pd-signature" || type == "essential") {
            int i = detail::get_int(a, "scale", 1);
            int jj = type == "essential" ? 2 * i : detail::get_int(a, "outer_scale", i);
            if (jj < i) throw fail(base + "/outer_scale", "outer scale must be at least the inner scale");
            for (int ex : detail::get_ints(a, "excisions", type == "essential" ? std::vector<int>{4, 5, 6}
                                                                              : std::vector<int>{2, 3, 4})) {
                if (R - c <= ex + i)
                    throw fail(base + "/excisions", "excision " + std::to_string(ex) + " with scale " +
                                                         std::to_string(i) + " reaches the collar of radius " +
                                                         std::to_string(R));
                if (ex < jj) throw fail(base + "/excisions", "excision " + std::to_string(ex) + " is below the outer scale");
            }
        }
        if (type == "separate" || type == "almost-essential")
            for (int r : detail::get_ints(a, "radii", {R}))
                if (r < 1 || r > R) throw fail(base + "/radii", "window radii must lie in 1..R");
        if (type == "mobility") {
            int deg = detail::get_int(a, "degree", 1);
            if (detail::get_int(a, "cap", deg + 1) <= deg) throw fail(base + "/cap", "cap must exceed degree");
            if (detail::get_bool(a, "stab") && s.kind != SpaceSpec::Kind::group)
                throw fail(base + "/stab", "stabilizer comparison needs a group space");
        }
        if (type == "mv" && detail::get_int(a, "cap", 3) <= detail::get_int(a, "class_degree", 1))
            throw fail(base + "/cap", "cap must exceed class_degree");
        if (type == "acyclicity" && detail::get_int(a, "lambda_max", 4) < 1)
            throw fail(base + "/lambda_max", "lambda_max must be positive");
        sc.analyses.push_back(a);
    }
    return sc;
}

// Report fragments.
inline json to_json(const WindowSchedule& s) {
    return {{"S", s.inner_excision}, {"i", s.inner_scale}, {"S'", s.outer_excision},
            {"j", s.outer_scale},    {"R", s.radius},      {"c", s.collar}};
}

inline json ids(const Mask& m) {
    json out = json::array();
    for (PointId p : m.ids()) out.push_back(p);
    return out;
}

inline json simplices(const std::vector<std::vector<PointId>>& s) { return s; }

inline json cochain_json(const CochainComplex& c, int d, const Column& z) {
    json out = json::array();
    for (Index i : z) out.push_back(c.vertices(d, i));
    return out;
}

inline std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

inline json window_json(int radius, int collar) { return {{"radius", radius}, {"collar", collar}}; }

struct Context {
    const SpaceSpec& spec;
    const Caps& caps;
    RipsCaps rips() const { return RipsCaps{caps.max_simplices}; }
};

namespace run {

using detail::get_int;
using detail::get_ints;

inline json ends(const Context& ctx, const json& a) {
    Built b = build(ctx.spec, ctx.spec.radius, ctx.caps);
    int i = get_int(a, "scale", 1), j = get_int(a, "outer_scale", i), c = get_int(a, "collar", 1);
    auto ex = get_ints(a, "excisions", {2, 3, 4});
    auto e = ends_estimate(b.space, schedule_family(ex, i, i, b.radius, c));
    auto d = coarse_cohomology_dim_estimate(b.space, 1, schedule_family(ex, i, j, b.radius, c), ctx.rips());
    json out;
    out["window"] = window_json(b.radius, c);
    out["ends"] = {{"counts", e.deep_counts}, {"trend", to_string(e.verdict.trend)}, {"value", e.verdict.value}};
    out["dim_h1"] = {{"ranks", d.ranks}, {"trend", to_string(d.verdict.trend)}, {"value", d.verdict.value}};
    json sch = json::array();
    for (const auto& s : d.schedules) sch.push_back(to_json(s));
    out["schedules"] = sch;
    bool decided = e.verdict.trend != Trend::inconclusive && d.verdict.trend != Trend::inconclusive;
    bool holds = (e.verdict.stable() && d.verdict.stable() && e.verdict.value == d.verdict.value + 1) ||
                 (e.verdict.trend == Trend::growing && d.verdict.trend == Trend::growing);
    out["formula_holds"] = holds;
    out["inconclusive"] = !decided;
    out["verdict"] = "ends " + e.verdict.describe() + ", dim H^1 " + d.verdict.describe() + ", ends = dim + 1 " +
                     (holds ? "holds" : "fails");
    out["summary"] = {"ends per schedule: " + join(e.deep_counts) + " (R=" + std::to_string(b.radius) +
                          ", S=" + join(ex) + ", i=" + std::to_string(i) + ")",
                      "dim H^1 per schedule: " + join(d.ranks) + " (j=" + std::to_string(j) + ")"};
    return out;
}

inline json separate(const Context& ctx, const json& a) {
    int r = get_int(a, "r", 1), A = get_int(a, "a", 0), c = get_int(a, "collar", 1);
    int R = ctx.spec.radius;
    auto radii = get_ints(a, "radii", {std::max(1, R - 2), std::max(1, R - 1), R});
    std::vector<SeparationWindow> wins;
    json per = json::array();
    json last;
    for (int rad : radii) {
        Built b = build(ctx.spec, rad, ctx.caps);
        auto cs = complement_components(b.space, b.w, r, A, c);
        SeparationWindow sw{rad, static_cast<int>(cs.deep_count()), -1};
        if (b.ball && b.h) sw.invariant_classes = invariant_components(*b.ball, *b.h, cs).e_count;
        wins.push_back(sw);
        json comps = json::array();
        for (std::size_t k = 0; k < cs.components.size(); ++k)
            comps.push_back({{"size", cs.components[k].count()}, {"deep", static_cast<bool>(cs.deep[k])},
                             {"ids", ids(cs.components[k])}});
        json wj = {{"radius", rad}, {"deep", sw.deep}, {"components", cs.components.size()}};
        if (sw.invariant_classes >= 0) wj["orbit_classes"] = sw.invariant_classes;
        per.push_back(wj);
        last = comps;
    }
    auto rep = summarize_separation(wins);
    json out;
    out["window"] = window_json(R, c);
    out["parameters"] = {{"r", r}, {"a", A}};
    out["windows"] = per;
    out["components_at_largest_window"] = last;
    out["e_tilde"] = rep.e_tilde;
    if (rep.e >= 0) out["e"] = rep.e;
    out["trend"] = to_string(rep.trend);
    out["inconclusive"] = rep.trend == Trend::inconclusive;
    std::vector<int> counts;
    for (const auto& w : wins) counts.push_back(w.deep);
    if (rep.trend == Trend::bounded)
        out["verdict"] = std::to_string(counts.back()) + " deep components, stable";
    else
        out["verdict"] = "deep components " + to_string(rep.trend) + " (" + join(counts) + ")";
    out["summary"] = {"deep components per window radius " + join(radii) + ": " + join(counts) +
                      " (r=" + std::to_string(r) + ", A=" + std::to_string(A) + ")"};
    if (rep.e >= 0) out["summary"].push_back("orbit classes of deep components (e lower bound): " + std::to_string(rep.e));
    return out;
}

inline std::vector<json> component_list(const Built& b, const json& a, int r, int A, int collar) {
    if (a.contains("components")) return a.at("components").get<std::vector<json>>();
    std::vector<json> out;
    if (!b.components.empty()) {
        for (const auto& [name, m] : b.components) out.push_back(name);
        return out;
    }
    auto cs = complement_components(b.space, b.w, r, A, collar);
    for (std::size_t k = 0; k < cs.deep_count(); ++k) out.push_back(json{{"deep", k}});
    return out;
}

inline json essential(const Context& ctx, const json& a) {
    Built b = build(ctx.spec, ctx.spec.radius, ctx.caps);
    int n = get_int(a, "n", 1), i = get_int(a, "scale", 1), c = get_int(a, "collar", 1);
    std::vector<WindowSchedule> sched;
    for (int s : get_ints(a, "excisions", {4, 5, 6})) sched.push_back(paired_schedule(s, i, b.radius, c));
    json out, comps = json::array();
    out["window"] = window_json(b.radius, c);
    json sj = json::array();
    for (const auto& s : sched) sj.push_back(to_json(s));
    out["schedules"] = sj;
    std::string verdict;
    bool inconclusive = false;
    for (const auto& sel : component_list(b, a, 1, 0, c)) {
        auto [label, mask] = resolve_component(b, sel, 1, 0, c);
        auto v = essential_probe(b.space, b.w, mask, n, sched, ctx.rips());
        json cj = {{"component", label}, {"verdict", to_string(v.verdict)}, {"reason", v.reason}};
        json per = json::array();
        for (const auto& sv : v.schedules) {
            json classes = json::array();
            for (const auto& pc : sv.classes) {
                json k = {{"cycle", simplices(pc.cycle)}, {"dies", pc.dies}, {"verified", pc.verified}};
                if (pc.dies)
                    k["fill"] = simplices(pc.fill);
                else
                    k["certificate"] = simplices(pc.certificate);
                classes.push_back(k);
            }
            per.push_back({{"schedule", to_json(sv.schedule)}, {"verdict", to_string(sv.verdict)}, {"classes", classes}});
        }
        cj["per_schedule"] = per;
        comps.push_back(cj);
        inconclusive = inconclusive || v.verdict == EssentialKind::inconclusive;
        verdict += (verdict.empty() ? "" : ", ") + label + " " + to_string(v.verdict);
    }
    out["components"] = comps;
    out["inconclusive"] = inconclusive;
    out["verdict"] = verdict;
    out["summary"] = {"schedule family S=" + join(get_ints(a, "excisions", {4, 5, 6})) + " i=" + std::to_string(i) +
                      " j=" + std::to_string(2 * i) + " at R=" + std::to_string(b.radius)};
    return out;
}

inline json almost_essential(const Context& ctx, const json& a) {
    int A = get_int(a, "a", 0), c = get_int(a, "collar", 1);
    int R = ctx.spec.radius;
    auto radii = get_ints(a, "radii", {std::max(1, R - 2), std::max(1, R - 1), R});
    Built top = build(ctx.spec, R, ctx.caps);
    auto sels = component_list(top, a, 1, A, c);
    json out, comps = json::array();
    out["window"] = window_json(R, c);
    out["radii"] = radii;
    std::string verdict;
    bool inconclusive = false;
    std::vector<std::vector<std::optional<int>>> bs(sels.size());
    std::vector<std::vector<int>> needed(sels.size());
    std::vector<std::string> labels(sels.size());
    for (int rad : radii) {
        Built b = build(ctx.spec, rad, ctx.caps);
        for (std::size_t k = 0; k < sels.size(); ++k) {
            auto [label, mask] = resolve_component(b, sels[k], 1, A, c);
            labels[k] = label;
            auto p = almost_essential_probe(b.space, b.w, mask, A, {}, c);
            bs[k].push_back(p.b);
            needed[k].push_back(p.needed);
        }
    }
    for (std::size_t k = 0; k < sels.size(); ++k) {
        json bj = json::array();
        for (const auto& v : bs[k]) bj.push_back(v ? json(*v) : json("fails"));
        bool all = std::all_of(bs[k].begin(), bs[k].end(), [](const auto& v) { return v.has_value(); });
        bool none = std::none_of(bs[k].begin(), bs[k].end(), [](const auto& v) { return v.has_value(); });
        std::string v;
        if (all && std::all_of(bs[k].begin(), bs[k].end(), [&](const auto& x) { return *x == *bs[k][0]; }))
            v = "B=" + std::to_string(*bs[k][0]) + " at every window";
        else if (none)
            v = "fails at every window";
        else {
            v = "B varies across windows";
            inconclusive = true;
        }
        comps.push_back({{"component", labels[k]}, {"b", bj}, {"needed", needed[k]}, {"verdict", v}});
        verdict += (verdict.empty() ? "" : ", ") + labels[k] + " " + v;
    }
    out["components"] = comps;
    out["parameters"] = {{"a", A}};
    out["inconclusive"] = inconclusive;
    out["verdict"] = verdict;
    out["summary"] = {"window radii " + join(radii) + ", A=" + std::to_string(A)};
    return out;
}

inline json mv(const Context& ctx, const json& a) {
    Built b = build(ctx.spec, ctx.spec.radius, ctx.caps);
    int r = get_int(a, "r", 2), A = get_int(a, "a", 1), scale = get_int(a, "scale", 2), cap = get_int(a, "cap", 3);
    int deg = get_int(a, "class_degree", 1), c = get_int(a, "collar", 1);
    auto [label, c1] = resolve_component(b, a.at("component"), r, A, c);
    auto rep = mv_assemble(b.space, b.w, c1, r, A, scale, cap, {}, deg, c, ctx.rips());
    json out;
    out["window"] = window_json(b.radius, c);
    out["parameters"] = {{"r", r}, {"a", A}, {"scale", scale}, {"cap", cap}, {"class_degree", deg}};
    out["component"] = label;
    out["dichotomy"] = rep.dichotomy;
    out["short_exact"] = rep.short_exact;
    json dims;
    for (const MVPiece* p : {&rep.x, &rep.left, &rep.right, &rep.w}) {
        std::vector<std::size_t> d;
        for (const auto& h : p->cohomology) d.push_back(h->dim());
        dims[p->name] = d;
    }
    out["cohomology_dims"] = dims;
    json ex = json::array();
    for (const auto& e : rep.exactness)
        ex.push_back({{"spot", e.spot}, {"composite_zero", e.composite_zero}, {"ranks_match", e.ranks_match}});
    out["exactness"] = ex;
    out["exact"] = rep.exact();
    json imgs = json::array();
    bool any = false;
    std::string loc;
    if (deg < cap)
        for (const auto& rho : rep.w.cohomology[deg]->representatives()) {
            auto ci = connecting_image(rep, deg, rho);
            auto ls = localized_boundary_support(rep, deg, rho);
            any = any || ci.nonzero;
            imgs.push_back({{"input", cochain_json(*rep.w.cochains, deg, rho)},
                            {"output", cochain_json(*rep.x.cochains, deg + 1, ci.output)},
                            {"nonzero", ci.nonzero},
                            {"support_radius", ls.achieved},
                            {"bound", ls.bound},
                            {"within", ls.within()}});
            loc += (loc.empty() ? "" : "; ") + std::string("support radius ") + std::to_string(ls.achieved) + " <= " +
                   std::to_string(ls.bound) + (ls.within() ? " holds" : " fails");
        }
    out["connecting_images"] = imgs;
    out["inconclusive"] = false;
    out["verdict"] = std::string(any ? "δ̃ nonzero" : "δ̃ zero") + (rep.exact() ? ", exact" : ", exactness fails");
    out["summary"] = {"scale " + std::to_string(scale) + " at R=" + std::to_string(b.radius) + ", " +
                          std::to_string(imgs.size()) + " W classes in degree " + std::to_string(deg),
                      loc.empty() ? std::string("no W classes") : loc};
    return out;
}

inline json mobility(const Context& ctx, const json& a) {
    Built b = build(ctx.spec, ctx.spec.radius, ctx.caps);
    int deg = get_int(a, "degree", 1), scale = get_int(a, "scale", 1), cap = get_int(a, "cap", deg + 1);
    int c = get_int(a, "collar", 1);
    auto ds = get_ints(a, "d", {1, 2, 3});
    int max_d = get_int(a, "max_d", *std::max_element(ds.begin(), ds.end()));
    PointId center = a.contains("center") ? resolve_point(b, a.at("center")) : b.space.window().center;
    RipsComplex k = build_rips(b.space, b.space.all(), scale, cap, ctx.rips());
    CochainComplex cc(k, b.space.window().collar(b.space.size(), c));
    json out;
    out["window"] = window_json(b.radius, c);
    out["parameters"] = {{"degree", deg}, {"scale", scale}, {"cap", cap}, {"d", ds}, {"center", center}};
    auto cls = local_class(cc, deg, center, max_d);
    if (!cls) {
        out["inconclusive"] = true;
        out["verdict"] = "no local class within radius " + std::to_string(max_d);
        out["summary"] = json::array();
        return out;
    }
    out["class"] = {{"radius", cls->first}, {"cochain", cochain_json(cc, deg, cls->second)}};
    auto det = coarse_manifold_detector(cc, deg, cls->second, ds, c);
    json steps = json::array();
    std::vector<std::string> lines;
    for (const auto& s : det.steps) {
        steps.push_back({{"d", s.d}, {"covered", s.covered}, {"feasible", s.feasible}, {"mob", s.mob}});
        lines.push_back("D=" + std::to_string(s.d) + ": feasible " + std::to_string(s.feasible) + ", |Mob| " +
                        std::to_string(s.mob) + (s.covered ? ", covers" : ", does not cover"));
    }
    out["steps"] = steps;
    out["detector"] = det.verdict;
    if (detail::get_bool(a, "stab") && b.ball) {
        auto sm = stab_mob_comparison(*b.ball, cc, deg, cls->second, ds.front(), c);
        out["stabilizer"] = {{"d", ds.front()},          {"stab_trace", sm.stab.count()},
                             {"undetermined", sm.undetermined.count()}, {"hausdorff", sm.hausdorff},
                             {"bound_radius", sm.bound_radius}, {"within", sm.within_bound()}};
        lines.push_back("stabilizer orbit vs Mob at D=" + std::to_string(ds.front()) + ": Hausdorff " +
                        std::to_string(sm.hausdorff) + " <= " + std::to_string(sm.bound_radius) +
                        (sm.within_bound() ? " holds" : " fails"));
    }
    out["inconclusive"] = det.verdict == "inconclusive";
    out["verdict"] = det.verdict + " over D=" + join(ds) + " at R=" + std::to_string(b.radius);
    out["summary"] = lines;
    return out;
}

inline json acyclicity(const Context& ctx, const json& a) {
    const bool windowed = ctx.spec.kind != SpaceSpec::Kind::table;
    Built b = build(ctx.spec, ctx.spec.radius, ctx.caps);
    int kmax = get_int(a, "k_max", 1), lmax = get_int(a, "lambda_max", 4);
    auto scales = get_ints(a, "scales", {1});
    auto radii = get_ints(a, "radii", {1, 2, 3, 4, 5});
    int mmax = get_int(a, "mu_max", *std::max_element(radii.begin(), radii.end()) + 4);
    std::vector<PointId> centers;
    if (a.contains("centers"))
        for (const auto& p : a.at("centers")) centers.push_back(resolve_point(b, p));
    else
        centers.push_back(windowed ? b.space.window().center : 0);
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    auto prof = uniform_acyclicity_probe(b.space, kmax, centers, scales, radii, lmax, mmax, ctx.rips());
    json out;
    if (windowed) out["window"] = window_json(b.radius, 0);
    out["centers"] = centers;
    out["parameters"] = {{"lambda_max", lmax}, {"mu_max", mmax}};
    json entries = json::array();
    std::vector<std::string> lines;
    for (const auto& e : prof.entries) {
        json ej = {{"k", e.degree}, {"i", e.inner_scale}, {"radii", e.radii}};
        if (e.lambda) {
            ej["lambda"] = *e.lambda;
            ej["mu"] = e.mu;
            lines.push_back("k=" + std::to_string(e.degree) + " i=" + std::to_string(e.inner_scale) +
                            ": lambda=" + std::to_string(*e.lambda) + ", mu(r=" + join(e.radii) + ")=" + join(e.mu));
        } else {
            ej["lambda"] = nullptr;
        }
        entries.push_back(ej);
    }
    for (const auto& f : prof.failures) lines.push_back("fails " + f);
    out["entries"] = entries;
    out["failures"] = prof.failures;
    out["inconclusive"] = false;
    out["verdict"] = prof.failures.empty() ? "uniformly acyclic through k=" + std::to_string(kmax)
                                           : "fails: " + prof.failures.front();
    out["summary"] = lines;
    return out;
}

inline json pd_signature(const Context& ctx, const json& a) {
    Built b = build(ctx.spec, ctx.spec.radius, ctx.caps);
    int n = get_int(a, "n", 1), i = get_int(a, "scale", 1), j = get_int(a, "outer_scale", i), c = get_int(a, "collar", 1);
    auto ex = get_ints(a, "excisions", {2, 3, 4});
    if (b.w.empty()) throw Error("empty-subset", "W is empty");
    auto sig = pd_signature_check(b.space.subspace(b.w), n, schedule_family(ex, i, j, b.radius, c), ctx.rips());
    json out, degs = json::array();
    out["window"] = window_json(b.radius, c);
    bool unstable = false;
    std::vector<std::string> lines;
    for (const auto& d : sig.degrees) {
        degs.push_back({{"k", d.degree}, {"ranks", d.ranks}, {"trend", to_string(d.verdict.trend)}});
        unstable = unstable || !d.verdict.stable();
        lines.push_back("dim H^" + std::to_string(d.degree) + "(W) per schedule: " + join(d.ranks));
    }
    json sch = json::array();
    for (const auto& s : schedule_family(ex, i, j, b.radius, c)) sch.push_back(to_json(s));
    out["schedules"] = sch;
    out["degrees"] = degs;
    out["pass"] = sig.pass;
    out["inconclusive"] = !sig.pass && unstable;
    out["verdict"] = sig.pass ? "dimension-" + std::to_string(n) + " signature holds" : "fails: " + sig.reason;
    out["summary"] = lines;
    return out;
}

inline json almost_invariant(const Context& ctx, const json& a) {
    Built b = build(ctx.spec, ctx.spec.radius, ctx.caps);
    int r = get_int(a, "r", 1), A = get_int(a, "a", 0), c = get_int(a, "collar", 1);
    auto [label, mask] = resolve_component(b, a.at("component"), r, A, c);
    auto rep = almost_invariant_extract(*b.ball, *b.h, mask, A, c);
    auto st = stabilizer_trace(*b.ball, *b.h, mask, A);
    json out;
    out["window"] = window_json(b.radius, c);
    out["component"] = label;
    out["xhat"] = ids(rep.xhat);
    out["right_invariant"] = rep.right_invariant;
    out["agrees_off_neighborhood"] = rep.agrees_off_neighborhood;
    out["xhat_deep"] = rep.xhat_deep;
    out["complement_deep"] = rep.complement_deep;
    out["stabilizer_trace"] = {{"size", st.size}, {"subgroup_size", st.subgroup.count()}, {"hausdorff", st.hausdorff}};
    out["inconclusive"] = false;
    out["verdict"] = rep.status;
    out["summary"] = {"|xhat| = " + std::to_string(rep.xhat.count()) + ", right invariant " +
                          (rep.right_invariant ? "yes" : "no") + ", agrees with C off N_A(H) " +
                          (rep.agrees_off_neighborhood ? "yes" : "no"),
                      "stabilizer trace " + std::to_string(st.size) + " of " + std::to_string(st.subgroup.count()) +
                          " window elements of H, Hausdorff " + std::to_string(st.hausdorff)};
    return out;
}

}

inline json run_analysis(const Context& ctx, const json& a) {
    static const std::map<std::string, std::function<json(const Context&, const json&)>> table = {
        {"ends", run::ends},
        {"separate", run::separate},
        {"essential", run::essential},
        {"almost-essential", run::almost_essential},
        {"mv", run::mv},
        {"mobility", run::mobility},
        {"acyclicity", run::acyclicity},
        {"pd-signature", run::pd_signature},
        {"almost-invariant", run::almost_invariant},
    };
    return table.at(a.at("type").get<std::string>())(ctx, a);
}

struct RunOptions {
    unsigned threads = 1;
    std::uint64_t seed = 0;
};

struct RunResult {
    json report;
    int exit_code = 0;
};

// Runs every analysis on a worker pool; results are placed by index. The seed only
// permutes the dispatch order.
inline RunResult run_scenario(const Scenario& sc, const RunOptions& opt = {}) {
    const std::size_t n = sc.analyses.size();
    std::vector<json> results(n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(opt.seed);
    std::shuffle(order.begin(), order.end(), rng);
    Context ctx{sc.space, sc.caps};
    auto start = std::chrono::steady_clock::now();
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t; (t = next++) < n;) {
            std::size_t k = order[t];
            const json& a = sc.analyses[k];
            json r;
            try {
                double spent = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                if (sc.caps.time_budget > 0 && spent > sc.caps.time_budget)
                    throw Error("time-budget", "time budget of " + std::to_string(sc.caps.time_budget) +
                                                   " s spent before this analysis started");
                r = run_analysis(ctx, a);
                r["status"] = r.value("inconclusive", false) ? "inconclusive" : "ok";
            } catch (const Error& e) {
                r = {{"status", "error"}, {"error", {{"code", e.code()}, {"message", e.what()}}}};
            } catch (const std::exception& e) {
                r = {{"status", "error"}, {"error", {{"code", "internal"}, {"message", e.what()}}}};
            }
            r.erase("inconclusive");
            r["index"] = k;
            r["type"] = a.at("type");
            r["request"] = a;
            results[k] = std::move(r);
        }
    };
    unsigned nt = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(n)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    RunResult out;
    bool error = false, open = false;
    for (const auto& r : results) {
        error = error || r.at("status") == "error";
        open = open || r.at("status") == "inconclusive";
    }
    out.exit_code = error ? 1 : (open ? 2 : 0);
    out.report = {{"schema", 1},
                  {"scenario", sc.name},
                  {"space", sc.source.at("space")},
                  {"analyses", results},
                  {"exit_code", out.exit_code}};
    if (sc.source.contains("w")) out.report["w"] = sc.source.at("w");
    return out;
}

// Plain-text rendering of a report.
inline std::string render_text(const json& rep) {
    std::ostringstream os;
    os << "scenario " << rep.at("scenario").get<std::string>() << " (schema " << rep.at("schema") << ")\n";
    os << "space " << rep.at("space").dump() << "\n";
    if (rep.contains("w")) os << "w " << rep.at("w").dump() << "\n";
    for (const auto& a : rep.at("analyses")) {
        os << "\n[" << a.at("index").get<int>() + 1 << "] " << a.at("type").get<std::string>() << ": "
           << a.at("status").get<std::string>() << "\n";
        if (a.contains("window"))
            os << "    window R=" << a.at("window").at("radius") << " c=" << a.at("window").at("collar") << "\n";
        if (a.at("status") == "error") {
            os << "    error " << a.at("error").at("message").get<std::string>() << "\n";
            continue;
        }
        os << "    verdict: " << a.at("verdict").get<std::string>() << "\n";
        for (const auto& s : a.at("summary")) os << "    " << s.get<std::string>() << "\n";
    }
    os << "\nexit code " << rep.at("exit_code") << "\n";
    return os.str();
}

}

#endif
