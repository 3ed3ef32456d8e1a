#pragma once
// Experiment configuration: a JSON document naming the table and the run
// parameters. Shape:
//
//   {
//     "domain": { "builtin": { "name": "stadium", "params": { "straight": 2, "r": 1 } } }
//        or     { "components": [ { "type": "circle", "center": [0, 0], "r": 1 }, ... ] },
//     "steps": 1000, "samples": 100, "seed": 1, "bins": 20,
//     "initial": { "component": 0, "s": 0.0, "theta": 1.0471975511965976 },
//     "format": "csv", "out": "result.csv"
//   }
//
// Component types: circle {center, r}; ellipse {center, a, b, rotation};
// polygon {vertices}; stadium {center, straight, r}; chain {segments}, where
// a chain segment is line {from, to}, arc {center, r, start, sweep} or
// elliptical_arc {center, a, b, rotation, start, sweep}. The first component
// is the outer wall. Angles are radians.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "billiard/billiard_map.hpp"

namespace billiard {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

struct InitialPoint {
    std::size_t component{0};
    double s{0.0};
    double theta{kHalfPi};
};

struct ExperimentConfig {
    nlohmann::json domain_spec;
    std::size_t steps{1000};
    std::size_t samples{100};
    std::uint64_t seed{1};
    std::size_t bins{20};
    std::optional<InitialPoint> initial;
    OutputFormat format{OutputFormat::csv};
    /// Empty writes to stdout.
    std::string out;
    /// Worker threads for sample-parallel commands; 0 = hardware concurrency.
    unsigned threads{0};
    /// Sign-flip randomisations for the symmetry test.
    std::size_t permutations{1999};
};

/// Parse a config document. Unknown top-level keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

/// Build the table described by a "domain" object. Throws ConfigError for
/// malformed specs and DomainError for invalid geometry.
Domain build_domain_from_spec(const nlohmann::json& spec);

/// Stable 64-bit FNV-1a hash of the canonical spec text, as 16 hex digits.
std::string domain_hash(const nlohmann::json& spec);

/// Range checks: steps >= 1, bins >= 2, initial point valid for the table.
void validate_config(const ExperimentConfig& cfg, const Domain& dom);

/// The initial point as a phase point (s reduced modulo the perimeter).
PhasePoint initial_phase_point(const ExperimentConfig& cfg, const Domain& dom);

}  // namespace billiard
