#include "stochcuts/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace stochcuts {

namespace {

const char* kTraceHeader =
    "run_id,algorithm,instance,scenarios,event,kind,wall_seconds,z_lb,z_ub,"
    "ccut,fcut,partition_size,refine,note";
constexpr const char* kCompareSchema = "stochcuts-compare-v1";
const char* kCompareHeader =
    "instance,algorithm,lower_bound,ccut,fcut,seconds,refine,partition_size,"
    "termination,best";

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string Field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> SplitCsv(const std::string& line, int lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw FormatError(lineno, "unterminated quote");
  out.push_back(std::move(cur));
  return out;
}

double ParseDouble(const std::string& s, int lineno, const char* what) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw FormatError(lineno, std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

int ParseInt(const std::string& s, int lineno, const char* what) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw FormatError(lineno, std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

std::optional<double> ParseOptional(const std::string& s, int lineno,
                                    const char* what) {
  if (s.empty()) return std::nullopt;
  return ParseDouble(s, lineno, what);
}

std::string Optional(const std::optional<double>& v) {
  return v ? Num(*v) : "";
}

// Reads the schema and header lines; returns the line number reached.
int ReadPreamble(std::istream& in, const std::string& schema,
                 const std::string& header) {
  std::string line;
  if (!std::getline(in, line) || line != "# " + schema) {
    throw FormatError(1, "expected '# " + schema + "'");
  }
  if (!std::getline(in, line) || line != header) {
    throw FormatError(2, "unexpected header row");
  }
  return 2;
}

}  // namespace

FormatError::FormatError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                  : what),
      line_(line) {}

std::vector<TraceRow> TraceRows(const RunTrace& trace, const std::string& run_id) {
  std::vector<TraceRow> rows;
  for (size_t i = 0; i < trace.events.size(); ++i) {
    const TraceEvent& e = trace.events[i];
    TraceRow r;
    r.run_id = run_id;
    r.algorithm = trace.algorithm;
    r.instance = trace.instance;
    r.scenarios = trace.scenarios;
    r.event = static_cast<int>(i);
    r.kind = ToString(e.kind);
    r.wall_seconds = e.wall_seconds;
    if (std::isfinite(e.z_lb)) r.z_lb = e.z_lb;
    if (std::isfinite(e.z_ub)) r.z_ub = e.z_ub;
    r.ccut = e.ccut;
    r.fcut = e.fcut;
    r.partition_size = e.partition_size;
    r.refine = e.refinements;
    r.note = e.note;
    rows.push_back(std::move(r));
  }
  return rows;
}

void WriteTraceCsv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << "# " << kTraceSchema << "\n" << kTraceHeader << "\n";
  for (const TraceRow& r : rows) {
    out << Field(r.run_id) << ',' << Field(r.algorithm) << ','
        << Field(r.instance) << ',' << r.scenarios << ',' << r.event << ','
        << r.kind << ',' << Num(r.wall_seconds) << ',' << Optional(r.z_lb)
        << ',' << Optional(r.z_ub) << ',' << r.ccut << ',' << r.fcut << ','
        << r.partition_size << ',' << r.refine << ',' << Field(r.note) << "\n";
  }
  out.flush();
}

std::vector<TraceRow> ReadTraceCsv(std::istream& in) {
  int lineno = ReadPreamble(in, kTraceSchema, kTraceHeader);
  std::vector<TraceRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = SplitCsv(line, lineno);
    if (f.size() != 14) {
      throw FormatError(lineno, "expected 14 fields, got " +
                                    std::to_string(f.size()));
    }
    TraceRow r;
    r.run_id = f[0];
    r.algorithm = f[1];
    r.instance = f[2];
    r.scenarios = ParseInt(f[3], lineno, "scenarios");
    r.event = ParseInt(f[4], lineno, "event");
    r.kind = f[5];
    r.wall_seconds = ParseDouble(f[6], lineno, "wall_seconds");
    r.z_lb = ParseOptional(f[7], lineno, "z_lb");
    r.z_ub = ParseOptional(f[8], lineno, "z_ub");
    r.ccut = ParseInt(f[9], lineno, "ccut");
    r.fcut = ParseInt(f[10], lineno, "fcut");
    r.partition_size = ParseInt(f[11], lineno, "partition_size");
    r.refine = ParseInt(f[12], lineno, "refine");
    r.note = f[13];
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw FormatError(0, "no events");
  return rows;
}

CompareRow Summarize(const RunTrace& trace) {
  CompareRow row;
  row.instance = trace.instance;
  row.algorithm = trace.algorithm;
  row.lower_bound = trace.final_lb;
  if (!trace.events.empty()) {
    const TraceEvent& last = trace.events.back();
    row.ccut = last.ccut;
    row.fcut = last.fcut;
    row.refine = last.refinements;
    row.partition_size = last.partition_size;
  }
  row.seconds = trace.wall_seconds;
  row.termination = trace.termination;
  return row;
}

void MarkBest(std::vector<CompareRow>& rows, double tol) {
  std::map<std::string, double> best;
  for (const CompareRow& r : rows) {
    auto [it, fresh] = best.emplace(r.instance, r.lower_bound);
    if (!fresh) it->second = std::max(it->second, r.lower_bound);
  }
  for (CompareRow& r : rows) {
    r.best = r.lower_bound >= best[r.instance] - tol;
  }
}

std::string FormatCompareTable(const std::vector<CompareRow>& rows) {
  std::vector<std::vector<std::string>> cells{
      {"instance", "algorithm", "lower bound", "Ccut", "Fcut", "T(s)", "Refine",
       "|N|", "termination"}};
  for (const CompareRow& r : rows) {
    char lb[40];
    char t[40];
    std::snprintf(lb, sizeof lb, "%.6f%s", r.lower_bound, r.best ? "*" : "");
    std::snprintf(t, sizeof t, "%.2f", r.seconds);
    cells.push_back({r.instance, r.algorithm, lb, std::to_string(r.ccut),
                     std::to_string(r.fcut), t, std::to_string(r.refine),
                     std::to_string(r.partition_size), r.termination});
  }
  std::vector<size_t> width(cells[0].size(), 0);
  for (const auto& row : cells) {
    for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream os;
  for (size_t i = 0; i < cells.size(); ++i) {
    for (size_t c = 0; c < cells[i].size(); ++c) {
      // Text columns left aligned, numbers right aligned.
      const bool left = c < 2 || c + 1 == cells[i].size();
      const std::string pad(width[c] - cells[i][c].size(), ' ');
      os << (c ? "  " : "") << (left ? cells[i][c] + pad : pad + cells[i][c]);
    }
    os << "\n";
    if (i == 0) {
      size_t total = 0;
      for (size_t w : width) total += w + 2;
      os << std::string(total - 2, '-') << "\n";
    }
  }
  return os.str();
}

void WriteCompareCsv(std::ostream& out, const std::vector<CompareRow>& rows) {
  out << "# " << kCompareSchema << "\n" << kCompareHeader << "\n";
  for (const CompareRow& r : rows) {
    out << Field(r.instance) << ',' << Field(r.algorithm) << ','
        << Num(r.lower_bound) << ',' << r.ccut << ',' << r.fcut << ','
        << Num(r.seconds) << ',' << r.refine << ',' << r.partition_size << ','
        << Field(r.termination) << ',' << (r.best ? "*" : "") << "\n";
  }
  out.flush();
}

std::vector<CompareRow> ReadCompareCsv(std::istream& in) {
  int lineno = ReadPreamble(in, kCompareSchema, kCompareHeader);
  std::vector<CompareRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = SplitCsv(line, lineno);
    if (f.size() != 10) {
      throw FormatError(lineno, "expected 10 fields, got " +
                                    std::to_string(f.size()));
    }
    CompareRow r;
    r.instance = f[0];
    r.algorithm = f[1];
    r.lower_bound = ParseDouble(f[2], lineno, "lower_bound");
    r.ccut = ParseInt(f[3], lineno, "ccut");
    r.fcut = ParseInt(f[4], lineno, "fcut");
    r.seconds = ParseDouble(f[5], lineno, "seconds");
    r.refine = ParseInt(f[6], lineno, "refine");
    r.partition_size = ParseInt(f[7], lineno, "partition_size");
    r.termination = f[8];
    if (f[9] != "" && f[9] != "*") throw FormatError(lineno, "bad best marker");
    r.best = f[9] == "*";
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string Px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string RenderSvg(const std::vector<std::vector<TraceRow>>& series) {
  if (series.empty()) throw FormatError(0, "no events");
  double t_max = 0.0;
  double lo = kInf;
  double hi = -kInf;
  for (const auto& rows : series) {
    bool any = false;
    for (const TraceRow& r : rows) {
      t_max = std::max(t_max, r.wall_seconds);
      if (!r.z_lb) continue;
      any = true;
      lo = std::min(lo, *r.z_lb);
      hi = std::max(hi, *r.z_lb);
    }
    if (!any) throw FormatError(0, "no events");
  }
  if (t_max <= 0.0) t_max = 1.0;
  if (hi - lo < 1e-12) {
    const double pad = std::max(0.5, 0.1 * std::abs(hi));
    lo -= pad;
    hi += pad;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }

  const double w = 760, h = 440, left = 80, right = 200, top = 40, bottom = 50;
  const double pw = w - left - right, ph = h - top - bottom;
  auto X = [&](double t) { return left + pw * t / t_max; };
  auto Y = [&](double v) { return top + ph * (hi - v) / (hi - lo); };
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                           "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left << "\" y=\"24\" font-size=\"14\">lower bound vs time: "
     << Escape(series[0][0].instance) << "</text>\n";
  // Axes and ticks.
  os << "<g stroke=\"black\" fill=\"none\"><rect x=\"" << left << "\" y=\"" << top
     << "\" width=\"" << pw << "\" height=\"" << ph << "\"/></g>\n";
  for (int i = 0; i <= 4; ++i) {
    const double t = t_max * i / 4.0;
    const double v = lo + (hi - lo) * i / 4.0;
    os << "<line x1=\"" << Px(X(t)) << "\" y1=\"" << top + ph << "\" x2=\""
       << Px(X(t)) << "\" y2=\"" << top + ph + 5 << "\" stroke=\"black\"/>"
       << "<text x=\"" << Px(X(t)) << "\" y=\"" << top + ph + 18
       << "\" text-anchor=\"middle\">" << Fmt(t) << "</text>\n";
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << Px(Y(v)) << "\" x2=\"" << left
       << "\" y2=\"" << Px(Y(v)) << "\" stroke=\"black\"/>"
       << "<text x=\"" << left - 8 << "\" y=\"" << Px(Y(v) + 4)
       << "\" text-anchor=\"end\">" << Fmt(v) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 10
     << "\" text-anchor=\"middle\">wall seconds</text>\n";
  os << "<text x=\"16\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 16 "
     << top + ph / 2 << ")\" text-anchor=\"middle\">z_lb</text>\n";

  for (size_t k = 0; k < series.size(); ++k) {
    const char* color = palette[k % 8];
    std::vector<std::pair<double, double>> pts;
    for (const TraceRow& r : series[k]) {
      if (r.z_lb) pts.emplace_back(r.wall_seconds, *r.z_lb);
      if (r.kind == "refinement") {
        os << "<line class=\"refinement\" x1=\"" << Px(X(r.wall_seconds))
           << "\" y1=\"" << top << "\" x2=\"" << Px(X(r.wall_seconds))
           << "\" y2=\"" << top + ph << "\" stroke=\"" << color
           << "\" stroke-dasharray=\"4 3\" stroke-opacity=\"0.6\"/>\n";
      }
    }
    os << "<g class=\"series\">";
    if (pts.size() == 1) {
      os << "<circle cx=\"" << Px(X(pts[0].first)) << "\" cy=\""
         << Px(Y(pts[0].second)) << "\" r=\"3\" fill=\"" << color << "\"/>";
    } else {
      os << "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"" << color
         << "\" points=\"";
      for (size_t i = 0; i < pts.size(); ++i) {
        if (i > 0) {
          os << Px(X(pts[i].first)) << ',' << Px(Y(pts[i - 1].second)) << ' ';
        }
        os << Px(X(pts[i].first)) << ',' << Px(Y(pts[i].second)) << ' ';
      }
      os << "\"/>";
    }
    os << "</g>\n";
    const double ly = top + 10 + 20 * k;
    const TraceRow& head = series[k][0];
    os << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\""
       << left + pw + 35 << "\" y2=\"" << ly << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/><text x=\"" << left + pw + 40 << "\" y=\""
       << ly + 4 << "\">" << Escape(head.algorithm)
       << (head.run_id.empty() ? "" : " (" + Escape(head.run_id) + ")")
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace stochcuts
