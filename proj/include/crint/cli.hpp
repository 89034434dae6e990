#pragma once

// Command-line front end: configuration, dispatch and report serialization.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crint/integrability.hpp"
#include "crint/verify.hpp"

namespace crint::cli {

enum class Command : std::uint8_t { check, invariant, simulate, verify };
std::string_view name(Command c) noexcept;

enum class Format : std::uint8_t { json, text };
std::string_view name(Format f) noexcept;

struct RunConfig {
  Command command = Command::check;
  std::string hamiltonian;
  std::string hamiltonian_file;  // empty when given inline
  std::array<Interval, 4> domain{};
  std::size_t samples = 200;
  std::uint64_t seed = 42;
  double tol = 1e-9;
  ToleranceMode tol_mode = ToleranceMode::absolute;
  PhasePoint base{};
  std::vector<PhasePoint> points{{0.5, 0.5, 0.5, 0.5}};
  int segments = 16;
  double T = 10.0;
  double h = 1e-3;
  Method method = Method::rk4;
  std::size_t bracket_points = 50;
  std::size_t independence_points = 20;
  Format format = Format::json;
  std::string out;  // empty: standard output
};

/// Outcome of a run; the exit code is a function of this alone.
enum class Outcome : std::uint8_t { satisfied, violated, succeeded, usage_error, domain_error };
std::string_view name(Outcome o) noexcept;
int exit_code(Outcome o) noexcept;

struct ResidualRow {
  Condition condition = Condition::laplacian_x;
  double max_abs = 0.0;
  double max_scaled = 0.0;
  PhasePoint worst_point{};
};

struct InvariantValue {
  PhasePoint point{};
  double value = 0.0;
  double error_estimate = 0.0;
};

struct InvariantSection {
  PhasePoint base{};
  std::string backend;                     // "line_integral" or "closed_form"
  std::optional<std::string> closed_form;  // symbolic I for polynomial H
  std::vector<InvariantValue> values;
};

struct TrajectorySection {
  PhasePoint start{};
  double T = 0.0;
  double h = 0.0;
  Method method = Method::rk4;
  std::size_t steps = 0;
  double max_dH = 0.0;
  std::optional<double> max_dI;
  bool truncated = false;
  std::string truncation_reason;
  PhasePoint final_point{};
};

struct IndependenceSection {
  Independence verdict = Independence::indeterminate;
  std::optional<PhasePoint> witness_point;
  double minor = 0.0;
  std::array<Var, 2> columns{};
};

struct BracketSection {
  std::size_t points = 0;
  double max_residual = 0.0;
  PhasePoint worst_point{};
};

struct Report {
  RunConfig config;
  Outcome verdict = Outcome::succeeded;
  std::string diagnostic;  // one line; empty on success
  std::optional<std::array<ResidualRow, 4>> residuals;
  std::optional<InvariantSection> invariant;
  std::optional<TrajectorySection> trajectory;
  std::optional<IndependenceSection> independence;
  std::optional<BracketSection> bracket;
  std::optional<double> complex_flow_residual;

  int exit_code() const noexcept { return cli::exit_code(verdict); }
};

/// Runs the configured command. Library errors are caught and turned into
/// the usage_error or domain_error outcome with a diagnostic.
Report run(const RunConfig& config);

/// Deterministic serialization: fixed key order, floats with 17 significant
/// digits, non-finite values as null.
std::string emit_report(const Report& r, Format format);

/// "a,b,c,d"; each coordinate may be a constant expression such as pi/2.
PhasePoint parse_point(std::string_view text);
/// "a,b,c,d;a,b,c,d;..."
std::vector<PhasePoint> parse_points(std::string_view text);
/// "lo:hi,lo:hi,lo:hi,lo:hi"
std::array<Interval, 4> parse_domain(std::string_view text);

/// Result of command-line parsing: a config, or an exit code to return
/// immediately (help output, or 2 for a usage error) with its message.
struct ParsedArgs {
  std::optional<RunConfig> config;
  int exit_code = 0;
  std::string message;
};

ParsedArgs parse_args(int argc, const char* const* argv);

/// Full program: parse, run, write the report, print the diagnostic.
int main(int argc, const char* const* argv);

}  // namespace crint::cli
