#pragma once

// Command-line front end. Every command builds its whole output in memory
// and writes it once, so identical arguments give byte-identical output.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sqrac/optimizer.hpp"
#include "sqrac/scenario.hpp"

namespace sqrac::cli {

enum ExitCode : int { kOk = 0, kInvalidInput = 2, kIoFailure = 3, kParseFailure = 4 };

struct Grid {
  double start = 0.0;
  double stop = 1.0;
  int points = 101;
  std::vector<double> values() const;
};

/// "start:stop:points" with points >= 2; DomainError otherwise.
Grid parse_grid(std::string_view spec);
/// "N[,N...]"; DomainError on anything else.
std::vector<std::uint64_t> parse_seeds(std::string_view spec);

enum class Format { kCsv, kJson };

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> summary;
};

/// CSV: header, rows with 12 significant digits, then "# key=value" lines.
/// JSON: {"command", "columns", "rows", "summary"}.
std::string render(const Table& t, Format format, std::string_view command);
/// "%.12g", with "nan" / "inf" spelled out.
std::string format_number(double v);

/// eta, a_ab, bound, classical_pareto, classical_hull and, when budget > 0,
/// optimized, gap, evaluations, seed. The grid runs over eta, with
/// a_ab = 1/2 + sqrt3 eta / 6.
Table tradeoff_table(const Grid& grid, std::uint64_t budget, const std::vector<std::uint64_t>& seeds,
                     SearchMode mode = SearchMode::kParam);
/// eta, a_ab, a_ac, classical_bound, double_violation from the simulated
/// ideal unsharp family.
Table sweep_table(const Grid& grid);
/// step, simulated, closed_form, abs_diff, bloch_length.
Table chain_table(int k);
/// The rate sweep with a crossover summary. The 3->1 entropy uses the
/// numerical bound with the given budget, minimized over the seeds.
Table randomness_table(const Grid& grid, std::uint64_t budget, const std::vector<std::uint64_t>& seeds);

/// JSON certification report; InfeasibleInput propagates.
std::string certify_report(double a_ab, double a_ac);
/// JSON self-test report for a strategy.
std::string selftest_report(const Strategy& s);

/// Parses arguments (without the program name) and runs one command.
/// Results go to `out` or the --out file, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sqrac::cli
