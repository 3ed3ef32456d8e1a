#pragma once
// Experiment commands behind the `billiard` tool, and their tabular output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "billiard/config.hpp"

namespace billiard {

inline constexpr const char* kToolVersion = "1.0.0";

using Cell = std::variant<long long, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Report {
    Table table;
    /// Scalar results (statistics, verdicts) written alongside the table.
    std::vector<std::pair<std::string, Cell>> summary;
    /// Set by the check commands.
    std::optional<bool> passed;
};

struct Metadata {
    std::string command;
    std::string domain_hash;
    std::uint64_t seed{0};
    std::size_t steps{0};
    std::size_t samples{0};
};

/// Reals as %.17g; non-finite values as nan, inf, -inf.
std::string format_real(double x);

/// CSV: a `# key=value ...` metadata line, `# key=value` summary lines, the
/// header row, then data rows. JSON: {metadata, summary, columns, rows} with
/// rows as records.
void write_report(std::ostream& out, const Report& report, const Metadata& meta, OutputFormat format);

Report cmd_orbit(const ExperimentConfig& cfg, const Domain& dom);
Report cmd_rotnum(const ExperimentConfig& cfg, const Domain& dom);
Report cmd_rotvec(const ExperimentConfig& cfg, const Domain& dom);
Report cmd_mean_check(const ExperimentConfig& cfg, const Domain& dom);
Report cmd_symmetry_check(const ExperimentConfig& cfg, const Domain& dom);
Report cmd_involution_check(const ExperimentConfig& cfg, const Domain& dom);

/// The rotation number used by the sample-based commands: rho_N for a simply
/// connected table, rho_1 + ... + rho_q otherwise. nullopt for singular orbits.
std::optional<double> rotation_functional(const Domain& dom, const PhasePoint& z, std::size_t n);

/// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitCheckFailed = 3;

/// Entry point of the command-line tool.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace billiard
