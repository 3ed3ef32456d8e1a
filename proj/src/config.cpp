#include "billiard/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <vector>

namespace billiard {

using nlohmann::json;

namespace {

double number(const json& obj, const char* key, std::optional<double> fallback = std::nullopt) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError(std::string("missing numeric field '") + key + "' in " + obj.dump());
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

Point2 point(const json& obj, const char* key, std::optional<Point2> fallback = std::nullopt) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError(std::string("missing point field '") + key + "'");
    }
    const auto& v = obj.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(std::string("field '") + key + "' must be a pair [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<Point2> vertices(const json& obj) {
    if (!obj.contains("vertices") || !obj.at("vertices").is_array())
        throw ConfigError("polygon needs a 'vertices' array");
    std::vector<Point2> out;
    for (const auto& v : obj.at("vertices")) {
        if (!v.is_array() || v.size() != 2) throw ConfigError("each vertex must be a pair [x, y]");
        out.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    return out;
}

std::string type_of(const json& obj) {
    if (!obj.is_object() || !obj.contains("type") || !obj.at("type").is_string())
        throw ConfigError("every component and segment needs a string 'type'");
    return obj.at("type").get<std::string>();
}

BoundarySegment chain_segment(const json& seg) {
    const std::string type = type_of(seg);
    try {
        if (type == "line") return BoundarySegment(LineSegment{point(seg, "from"), point(seg, "to")});
        if (type == "arc")
            return BoundarySegment(CircularArc{point(seg, "center"), number(seg, "r"), number(seg, "start"),
                                               number(seg, "sweep")});
        if (type == "elliptical_arc")
            return BoundarySegment(EllipticalArc{point(seg, "center"), number(seg, "a"), number(seg, "b"),
                                                 number(seg, "rotation", 0.0), number(seg, "start"),
                                                 number(seg, "sweep")});
    } catch (const std::invalid_argument& e) {
        throw DomainError(DomainError::Kind::invalid_parameter, std::string("invalid ") + type + ": " + e.what());
    }
    throw ConfigError("unknown chain segment type '" + type + "'");
}

std::vector<BoundarySegment> component(const json& c) {
    const std::string type = type_of(c);
    const Point2 origin{0.0, 0.0};
    if (type == "circle") {
        const double r = number(c, "r");
        if (!(r > 0.0)) throw DomainError(DomainError::Kind::invalid_parameter, "circle needs r > 0");
        return circle_component(point(c, "center", origin), r);
    }
    if (type == "ellipse") {
        const double a = number(c, "a"), b = number(c, "b");
        if (!(b > 0.0) || a < b) throw DomainError(DomainError::Kind::invalid_parameter, "ellipse needs a >= b > 0");
        return ellipse_component(point(c, "center", origin), a, b, number(c, "rotation", 0.0));
    }
    if (type == "polygon") return polygon_component(vertices(c));
    if (type == "stadium") return stadium_component(point(c, "center", origin), number(c, "straight"), number(c, "r"));
    if (type == "chain") {
        if (!c.contains("segments") || !c.at("segments").is_array() || c.at("segments").empty())
            throw ConfigError("chain needs a non-empty 'segments' array");
        std::vector<BoundarySegment> segs;
        for (const auto& s : c.at("segments")) segs.push_back(chain_segment(s));
        return segs;
    }
    throw ConfigError("unknown component type '" + type + "'");
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

std::size_t count(const json& doc, const char* key, std::size_t fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

}  // namespace

Domain build_domain_from_spec(const json& spec) {
    if (!spec.is_object()) throw ConfigError("'domain' must be an object");
    if (spec.contains("builtin")) {
        const auto& b = spec.at("builtin");
        if (!b.is_object() || !b.contains("name") || !b.at("name").is_string())
            throw ConfigError("domain.builtin needs a string 'name'");
        std::map<std::string, double> params;
        if (b.contains("params")) {
            for (const auto& [key, value] : b.at("params").items()) {
                if (!value.is_number()) throw ConfigError("builtin parameter '" + key + "' must be a number");
                params[key] = value.get<double>();
            }
        }
        std::vector<Point2> verts;
        if (b.contains("vertices")) verts = vertices(b);
        return builtin(b.at("name").get<std::string>(), params, verts);
    }
    if (spec.contains("components")) {
        const auto& list = spec.at("components");
        if (!list.is_array() || list.empty()) throw ConfigError("domain.components must be a non-empty array");
        std::vector<std::vector<BoundarySegment>> comps;
        for (const auto& c : list) comps.push_back(component(c));
        return build_domain(std::move(comps));
    }
    throw ConfigError("domain needs either 'builtin' or 'components'");
}

std::string domain_hash(const json& spec) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : spec.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(doc, {"domain", "steps", "samples", "seed", "bins", "initial", "format", "out", "threads",
                         "permutations"},
                   "config");
    ExperimentConfig cfg;
    if (doc.contains("domain")) cfg.domain_spec = doc.at("domain");
    cfg.steps = count(doc, "steps", cfg.steps);
    cfg.samples = count(doc, "samples", cfg.samples);
    cfg.seed = count(doc, "seed", cfg.seed);
    cfg.bins = count(doc, "bins", cfg.bins);
    cfg.threads = static_cast<unsigned>(count(doc, "threads", cfg.threads));
    cfg.permutations = count(doc, "permutations", cfg.permutations);
    if (doc.contains("initial")) {
        const auto& init = doc.at("initial");
        if (!init.is_object()) throw ConfigError("'initial' must be an object");
        reject_unknown(init, {"component", "s", "theta"}, "initial");
        InitialPoint p;
        p.component = count(init, "component", 0);
        p.s = number(init, "s");
        p.theta = number(init, "theta");
        cfg.initial = p;
    }
    if (doc.contains("format")) {
        const auto f = doc.at("format").get<std::string>();
        if (f == "csv") cfg.format = OutputFormat::csv;
        else if (f == "json") cfg.format = OutputFormat::json;
        else throw ConfigError("format must be csv or json");
    }
    if (doc.contains("out")) cfg.out = doc.at("out").get<std::string>();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return parse_config(json::parse(in));
    } catch (const json::exception& e) {
        throw ConfigError("malformed config '" + path + "': " + e.what());
    }
}

void validate_config(const ExperimentConfig& cfg, const Domain& dom) {
    if (cfg.steps < 1) throw ConfigError("steps must be at least 1");
    if (cfg.bins < 2) throw ConfigError("bins must be at least 2");
    if (cfg.initial) {
        if (cfg.initial->component >= dom.component_count())
            throw ConfigError("initial component " + std::to_string(cfg.initial->component) +
                              " does not exist (the table has " + std::to_string(dom.component_count()) +
                              " components)");
        if (!(cfg.initial->theta > 0.0 && cfg.initial->theta < kPi))
            throw ConfigError("initial theta must lie strictly between 0 and pi");
        if (!std::isfinite(cfg.initial->s)) throw ConfigError("initial s must be finite");
    }
}

PhasePoint initial_phase_point(const ExperimentConfig& cfg, const Domain& dom) {
    if (!cfg.initial) throw ConfigError("an initial phase point is required (--component/--s0/--theta0)");
    const auto& p = *cfg.initial;
    return PhasePoint::from_theta(p.component, dom.reduce(p.component, p.s), p.theta);
}

}  // namespace billiard
