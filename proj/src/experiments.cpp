#include "billiard/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "billiard/liouville.hpp"
#include "billiard/rotation.hpp"
#include "billiard/statistics.hpp"

namespace billiard {

namespace {

constexpr int kMaxRedraws = 1000;

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

std::string cell_text(const Cell& c) {
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&c)) return format_real(*d);
    return std::get<std::string>(c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
    if (const auto* i = std::get_if<long long>(&c)) return *i;
    if (const auto* d = std::get_if<double>(&c)) {
        if (std::isfinite(*d)) return *d;
        return format_real(*d);
    }
    return std::get<std::string>(c);
}

long long as_int(std::size_t v) { return static_cast<long long>(v); }

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

std::vector<PhasePoint> starting_points(const ExperimentConfig& cfg, const Domain& dom) {
    if (cfg.initial) return {initial_phase_point(cfg, dom)};
    std::vector<PhasePoint> pts(cfg.samples);
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        Rng rng = substream(cfg.seed, i);
        pts[i] = sample(dom, rng);
    }
    return pts;
}

// Euclidean-style deviation in phase space, with the arclength part relative
// to the diameter.
struct Deviation {
    double arclength{0.0};
    double angle{0.0};
    void absorb(const PhaseDistance& d, double diameter) {
        arclength = std::max(arclength, d.arclength / diameter);
        angle = std::max(angle, d.angle);
    }
    double worst() const { return std::max(arclength, angle); }
};

}  // namespace

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_report(std::ostream& out, const Report& report, const Metadata& meta, OutputFormat format) {
    if (format == OutputFormat::csv) {
        out << "# tool=billiard version=" << kToolVersion << " command=" << meta.command
            << " domain_hash=" << meta.domain_hash << " seed=" << meta.seed << " steps=" << meta.steps
            << " samples=" << meta.samples << '\n';
        for (const auto& [key, value] : report.summary) out << "# " << key << '=' << cell_text(value) << '\n';
        for (std::size_t c = 0; c < report.table.columns.size(); ++c)
            out << (c ? "," : "") << csv_field(report.table.columns[c]);
        out << '\n';
        for (const auto& row : report.table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(cell_text(row[c]));
            out << '\n';
        }
        return;
    }
    nlohmann::ordered_json doc;
    doc["metadata"] = {{"tool", "billiard"},         {"version", kToolVersion},
                       {"command", meta.command},    {"domain_hash", meta.domain_hash},
                       {"seed", meta.seed},          {"steps", meta.steps},
                       {"samples", meta.samples}};
    auto summary = nlohmann::ordered_json::object();
    for (const auto& [key, value] : report.summary) summary[key] = cell_json(value);
    doc["summary"] = summary;
    doc["columns"] = report.table.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : report.table.rows) {
        nlohmann::ordered_json rec = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) rec[report.table.columns[c]] = cell_json(row[c]);
        rows.push_back(std::move(rec));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
}

std::optional<double> rotation_functional(const Domain& dom, const PhasePoint& z, std::size_t n) {
    const auto v = rotation_vector(dom, z, n);
    if (v.terminated_singular) return std::nullopt;
    if (dom.component_count() == 1) return v.components.front().upsilon / dom.total_perimeter();
    return rotation_number_total(v);
}

Report cmd_orbit(const ExperimentConfig& cfg, const Domain& dom) {
    const PhasePoint z0 = initial_phase_point(cfg, dom);
    Report r;
    r.table.columns = {"k", "component", "s", "theta", "x", "y", "chord_length", "status"};
    auto row = [&](std::size_t k, const PhasePoint& z, double chord, const std::string& status) {
        const Point2 p = dom.locate(z.component, z.s).point;
        r.table.rows.push_back({as_int(k), as_int(z.component), z.s, z.theta(), p.x, p.y, chord, status});
    };
    const auto summary = orbit(dom, z0, cfg.steps,
                               [&](std::size_t k, const PhasePoint& z, const PhasePoint&, double chord) {
                                   row(k, z, chord, "regular");
                               });
    const std::string last_status =
        summary.termination ? std::string(to_string(summary.termination->reason)) : std::string("end");
    row(summary.steps_completed, summary.last, std::numeric_limits<double>::quiet_NaN(), last_status);
    r.summary = {{"steps_completed", as_int(summary.steps_completed)}, {"termination", last_status}};
    return r;
}

Report cmd_rotnum(const ExperimentConfig& cfg, const Domain& dom) {
    const auto starts = starting_points(cfg, dom);
    Report r;
    r.table.columns = {"sample_id", "component", "s0", "theta0", "rho_N", "half_width", "steps_completed",
                       "singular_flag"};
    r.table.rows.resize(starts.size());
    const bool simple = dom.component_count() == 1;
    parallel_for(starts.size(), cfg.threads, [&](std::size_t i) {
        const PhasePoint& z = starts[i];
        const auto v = rotation_vector(dom, z, cfg.steps);
        const double rho = simple ? v.components.front().upsilon / dom.total_perimeter() : rotation_number_total(v);
        const double hw = simple ? v.half_width.front() : v.half_width_total;
        r.table.rows[i] = {as_int(i), as_int(z.component), z.s, z.theta(), rho, hw, as_int(v.steps),
                           as_int(v.terminated_singular ? 1 : 0)};
    });
    std::size_t singular = 0;
    for (const auto& row : r.table.rows) singular += std::get<long long>(row.back()) != 0;
    r.summary = {{"rows", as_int(starts.size())}, {"singular_rows", as_int(singular)}};
    return r;
}

Report cmd_rotvec(const ExperimentConfig& cfg, const Domain& dom) {
    const auto starts = starting_points(cfg, dom);
    const std::size_t q = dom.component_count();
    Report r;
    r.table.columns = {"sample_id", "component", "s0", "theta0"};
    for (std::size_t a = 0; a < q; ++a) {
        const std::string idx = std::to_string(a);
        r.table.columns.push_back("rho_" + idx);
        r.table.columns.push_back("upsilon_" + idx);
        r.table.columns.push_back("visits_" + idx);
    }
    for (const char* c : {"rho_total", "upsilon_total", "steps_completed", "singular_flag"})
        r.table.columns.emplace_back(c);
    r.table.rows.resize(starts.size());
    parallel_for(starts.size(), cfg.threads, [&](std::size_t i) {
        const PhasePoint& z = starts[i];
        const auto v = rotation_vector(dom, z, cfg.steps);
        std::vector<Cell> row = {as_int(i), as_int(z.component), z.s, z.theta()};
        double upsilon_total = 0.0;
        for (const auto& c : v.components) {
            row.insert(row.end(), {c.rho, c.upsilon, as_int(c.visits)});
            upsilon_total += c.upsilon;
        }
        row.insert(row.end(), {rotation_number_total(v), upsilon_total, as_int(v.steps),
                               as_int(v.terminated_singular ? 1 : 0)});
        r.table.rows[i] = std::move(row);
    });
    r.summary = {{"rows", as_int(starts.size())}, {"components", as_int(q)}};
    return r;
}

Report cmd_mean_check(const ExperimentConfig& cfg, const Domain& dom) {
    if (cfg.samples < 2) throw ConfigError("insufficient samples: mean-check needs at least 2");
    const std::size_t q = dom.component_count();
    const std::size_t n = cfg.steps;
    const VectorFunctional f = [&](const PhasePoint& z) -> std::optional<std::vector<double>> {
        const auto v = rotation_vector(dom, z, n);
        if (v.terminated_singular) return std::nullopt;
        std::vector<double> out;
        if (q > 1)
            for (const auto& c : v.components) out.push_back(c.rho);
        out.push_back(q == 1 ? v.components.front().upsilon / dom.total_perimeter() : rotation_number_total(v));
        return out;
    };
    MCOptions opts;
    opts.threads = cfg.threads;
    const auto est = mc_integrate(dom, f, cfg.samples, cfg.seed, opts);

    std::vector<std::string> names;
    std::vector<double> targets;
    if (q > 1) {
        for (std::size_t a = 0; a < q; ++a) {
            names.push_back("rho_" + std::to_string(a));
            targets.push_back(0.5 * dom.perimeter(a) / dom.total_perimeter());
        }
    }
    names.emplace_back(q > 1 ? "rho_total" : "rho");
    targets.push_back(0.5);

    Report r;
    r.table.columns = {"quantity", "estimate", "std_error", "target", "tolerance", "deviation", "verdict"};
    bool all = true;
    for (std::size_t k = 0; k < names.size(); ++k) {
        const double tol = 3.0 * est.std_error[k] + 2.0 / static_cast<double>(n);
        const double dev = std::abs(est.mean[k] - targets[k]);
        const bool ok = dev <= tol;
        all = all && ok;
        r.table.rows.push_back({names[k], est.mean[k], est.std_error[k], targets[k], tol, dev, verdict(ok)});
    }
    r.passed = all;
    r.summary = {{"samples", as_int(est.n_samples)},
                 {"singular_redraws", as_int(est.n_singular_discarded)},
                 {"verdict", verdict(all)}};
    return r;
}

Report cmd_symmetry_check(const ExperimentConfig& cfg, const Domain& dom) {
    if (cfg.samples < 2) throw ConfigError("insufficient samples: symmetry-check needs at least 2");
    const std::size_t n = cfg.steps;
    const VectorFunctional f = [&](const PhasePoint& z) -> std::optional<std::vector<double>> {
        if (auto rho = rotation_functional(dom, z, n)) return std::vector<double>{*rho};
        return std::nullopt;
    };
    MCOptions opts;
    opts.threads = cfg.threads;
    const auto samples = mc_evaluate(dom, f, cfg.samples, cfg.seed, opts);
    std::vector<double> rho;
    rho.reserve(samples.values.size());
    for (const auto& v : samples.values) rho.push_back(v.front());

    const auto hist = histogram(rho, cfg.bins);
    const auto test = symmetry_test(rho, cfg.permutations, cfg.seed);

    Report r;
    r.table.columns = {"bin", "lo", "hi", "count", "mirror_count"};
    const double width = 1.0 / static_cast<double>(cfg.bins);
    for (std::size_t b = 0; b < cfg.bins; ++b)
        r.table.rows.push_back({as_int(b), static_cast<double>(b) * width, static_cast<double>(b + 1) * width,
                                as_int(hist[b]), as_int(hist[cfg.bins - 1 - b])});
    r.passed = test.passed();
    r.summary = {{"samples", as_int(rho.size())},
                 {"singular_redraws", as_int(samples.n_singular_discarded)},
                 {"max_mirror_deviation", as_int(mirror_deviation(hist))},
                 {"ks_statistic", test.statistic},
                 {"null_threshold_999", test.threshold},
                 {"p_value", test.p_value},
                 {"randomizations", as_int(test.randomizations)},
                 {"verdict", verdict(test.passed())}};
    return r;
}

Report cmd_involution_check(const ExperimentConfig& cfg, const Domain& dom) {
    if (cfg.samples < 1) throw ConfigError("involution-check needs at least 1 sample");
    const std::size_t n = cfg.steps;
    const std::size_t q = dom.component_count();
    const double diam = dom.diameter();

    struct PointResult {
        bool sigma_exact{true};
        Deviation tau2, conj;
        double reversal{0.0};
        std::size_t redraws{0};
    };
    std::vector<PointResult> results(cfg.samples);

    parallel_for(cfg.samples, cfg.threads, [&](std::size_t i) {
        Rng rng = substream(cfg.seed, i);
        PointResult& res = results[i];
        for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
            const PhasePoint z = sample(dom, rng);
            const auto t1 = tau(dom, z);
            const auto f1 = step(dom, z);
            if (!t1.regular() || !f1.regular()) {
                ++res.redraws;
                continue;
            }
            const auto t2 = tau(dom, t1.next());
            const auto back = inverse_step(dom, f1.next());
            if (!t2.regular() || !back.regular()) {
                ++res.redraws;
                continue;
            }
            double reversal = 0.0;
            try {
                if (q == 1) {
                    reversal = reversed_estimate_check(dom, z, n).deviation();
                } else {
                    const auto fwd = rotation_vector(dom, z, n);
                    if (fwd.terminated_singular) throw SingularOrbitError("singular forward orbit");
                    const auto rev = reversed_rotation_vector(dom, z, n);
                    for (std::size_t a = 0; a < q; ++a) {
                        const double freq =
                            static_cast<double>(fwd.components[a].visits) / static_cast<double>(n);
                        reversal = std::max(reversal,
                                            std::abs(fwd.components[a].rho + rev.components[a].rho - freq));
                    }
                }
            } catch (const SingularOrbitError&) {
                ++res.redraws;
                continue;
            }
            res.sigma_exact = sigma(sigma(z)) == z;
            res.tau2.absorb(phase_distance(dom, t2.next(), z), diam);
            res.conj.absorb(phase_distance(dom, back.next(), z), diam);
            res.reversal = reversal;
            return;
        }
        throw GeometrySuspicionError("no regular point found after " + std::to_string(kMaxRedraws) + " draws");
    });

    struct Check {
        const char* name;
        double worst{0.0};
        double tolerance;
        std::size_t failures{0};
    };
    Check checks[] = {{"sigma_squared", 0.0, 0.0},
                      {"tau_squared", 0.0, 1e-9},
                      {"sigma_phi_sigma_phi", 0.0, 1e-8},
                      {"reversal", 0.0, 2.0 / static_cast<double>(n) + 1e-9}};
    std::size_t redraws = 0;
    for (const auto& res : results) {
        const double devs[] = {res.sigma_exact ? 0.0 : std::numeric_limits<double>::infinity(), res.tau2.worst(),
                               res.conj.worst(), res.reversal};
        for (std::size_t c = 0; c < 4; ++c) {
            checks[c].worst = std::max(checks[c].worst, devs[c]);
            if (!(devs[c] <= checks[c].tolerance)) ++checks[c].failures;
        }
        redraws += res.redraws;
    }

    Report r;
    r.table.columns = {"check", "worst_deviation", "tolerance", "failures", "verdict"};
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.failures == 0;
        r.table.rows.push_back({std::string(c.name), c.worst, c.tolerance, as_int(c.failures),
                                verdict(c.failures == 0)});
    }
    r.passed = all;
    r.summary = {{"points", as_int(cfg.samples)}, {"singular_redraws", as_int(redraws)}, {"verdict", verdict(all)}};
    return r;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Billiard map experiments: orbits, rotation numbers and their Liouville statistics", "billiard"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path, domain_name, format, out_path;
    std::optional<std::size_t> steps, samples, bins, permutations, component;
    std::optional<std::uint64_t> seed;
    std::optional<double> s0, theta0;
    std::optional<unsigned> threads;

    app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
    app.add_option("--domain", domain_name, "builtin table name (shorthand for domain.builtin.name)");
    app.add_option("--steps", steps, "orbit length N");
    app.add_option("--samples", samples, "number of Liouville samples M");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--bins", bins, "histogram bins");
    app.add_option("--component", component, "initial component index");
    app.add_option("--s0", s0, "initial arclength");
    app.add_option("--theta0", theta0, "initial angle in (0, pi)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--threads", threads, "worker threads (0 = all cores)");
    app.add_option("--permutations", permutations, "randomizations for the symmetry test");

    using Command = Report (*)(const ExperimentConfig&, const Domain&);
    const std::vector<std::pair<std::string, Command>> commands = {
        {"orbit", cmd_orbit},
        {"rotnum", cmd_rotnum},
        {"rotvec", cmd_rotvec},
        {"mean-check", cmd_mean_check},
        {"symmetry-check", cmd_symmetry_check},
        {"involution-check", cmd_involution_check}};
    const std::vector<std::string> blurbs = {"trace one orbit",
                                             "rotation number estimates",
                                             "rotation vector estimates",
                                             "Liouville mean of the rotation number or vector",
                                             "symmetry of the rotation number distribution about 1/2",
                                             "involution and time-reversal identities"};
    for (std::size_t c = 0; c < commands.size(); ++c) app.add_subcommand(commands[c].first, blurbs[c]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const auto chosen = app.get_subcommands().front()->get_name();
    Command command = nullptr;
    for (const auto& [name, fn] : commands)
        if (name == chosen) command = fn;

    ExperimentConfig cfg;
    Domain dom;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        if (!domain_name.empty()) cfg.domain_spec = {{"builtin", {{"name", domain_name}}}};
        if (cfg.domain_spec.is_null()) throw ConfigError("no table given: pass --config with a domain, or --domain");
        if (steps) cfg.steps = *steps;
        if (samples) cfg.samples = *samples;
        if (seed) cfg.seed = *seed;
        if (bins) cfg.bins = *bins;
        if (threads) cfg.threads = *threads;
        if (permutations) cfg.permutations = *permutations;
        if (!format.empty()) cfg.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
        if (!out_path.empty()) cfg.out = out_path;
        if (s0 || theta0 || component) {
            if (!s0 || !theta0) throw ConfigError("--s0 and --theta0 must be given together");
            cfg.initial = InitialPoint{component.value_or(0), *s0, *theta0};
        }
        dom = build_domain_from_spec(cfg.domain_spec);
        validate_config(cfg, dom);
    } catch (const ConfigError& e) {
        err << "billiard: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "billiard: invalid domain: " << e.what() << '\n';
        return kExitUsage;
    }

    Report report;
    try {
        report = command(cfg, dom);
    } catch (const ConfigError& e) {
        err << "billiard: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "billiard: " << e.what() << '\n';
        return kExitRuntime;
    }

    const Metadata meta{chosen, domain_hash(cfg.domain_spec), cfg.seed, cfg.steps,
                        cfg.initial ? std::size_t{1} : cfg.samples};
    if (cfg.out.empty()) {
        write_report(out, report, meta, cfg.format);
    } else {
        std::ofstream file(cfg.out, std::ios::binary);
        if (!file) {
            err << "billiard: cannot write '" << cfg.out << "'\n";
            return kExitRuntime;
        }
        write_report(file, report, meta, cfg.format);
        for (const auto& [key, value] : report.summary) out << key << '=' << cell_text(value) << '\n';
    }
    if (report.passed && !*report.passed) return kExitCheckFailed;
    return kExitOk;
}

}  // namespace billiard
