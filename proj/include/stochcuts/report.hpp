#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stochcuts/drivers.hpp"

namespace stochcuts {

inline constexpr const char* kTraceSchema = "stochcuts-trace-v1";

// One CSV row per trace event. Unbounded values (-inf lower bound before the
// first master solve, +inf upper bound) are written as empty fields.
struct TraceRow {
  std::string run_id;
  std::string algorithm;
  std::string instance;
  int scenarios = 0;
  int event = 0;
  std::string kind;
  double wall_seconds = 0.0;
  std::optional<double> z_lb;
  std::optional<double> z_ub;
  int ccut = 0;
  int fcut = 0;
  int partition_size = 0;
  int refine = 0;
  std::string note;

  bool operator==(const TraceRow&) const = default;
};

class FormatError : public std::runtime_error {
 public:
  FormatError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

std::vector<TraceRow> TraceRows(const RunTrace& trace, const std::string& run_id);

// "# stochcuts-trace-v1", the header row, then the rows. Numbers use %.17g.
void WriteTraceCsv(std::ostream& out, const std::vector<TraceRow>& rows);
// Throws FormatError on a missing schema line, wrong header, bad field count
// or unparsable number, and FormatError("no events") on an empty body.
std::vector<TraceRow> ReadTraceCsv(std::istream& in);

// One (instance, algorithm) cell of a comparison table.
struct CompareRow {
  std::string instance;
  std::string algorithm;
  double lower_bound = 0.0;
  int ccut = 0;
  int fcut = 0;
  double seconds = 0.0;
  int refine = 0;
  int partition_size = 0;
  std::string termination;
  bool best = false;

  bool operator==(const CompareRow&) const = default;
};

CompareRow Summarize(const RunTrace& trace);

// Marks every row whose lower bound is within `tol` of the best bound for its
// instance.
void MarkBest(std::vector<CompareRow>& rows, double tol = 1e-6);

std::string FormatCompareTable(const std::vector<CompareRow>& rows);
void WriteCompareCsv(std::ostream& out, const std::vector<CompareRow>& rows);
std::vector<CompareRow> ReadCompareCsv(std::istream& in);

// Step plot of z_lb against wall time, one series per trace, dashed vertical
// lines at refinement events. Throws FormatError("no events") if a series is
// empty or has no finite lower bound.
std::string RenderSvg(const std::vector<std::vector<TraceRow>>& series);

}  // namespace stochcuts
