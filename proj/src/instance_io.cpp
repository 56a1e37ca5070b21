#include "stochcuts/instance_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace stochcuts {

const char* ToString(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::kSyntax:
      return "syntax";
    case ParseErrorKind::kDimension:
      return "dimension";
    case ParseErrorKind::kSchema:
      return "schema";
    case ParseErrorKind::kNoScenarios:
      return "no-scenarios";
    case ParseErrorKind::kInvalid:
      return "invalid";
  }
  return "?";
}

ParseError::ParseError(ParseErrorKind kind, int line, const std::string& what)
    : std::runtime_error(std::string(ToString(kind)) + " error" +
                         (line > 0 ? " at line " + std::to_string(line) : "") +
                         ": " + what),
      kind_(kind),
      line_(line) {}

namespace {

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

void EmitVector(std::ostringstream& os, const char* key,
                const std::vector<double>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) os << key << ' ' << i << ' ' << Num(v[i]) << '\n';
  }
}

void EmitMatrix(std::ostringstream& os, const char* key,
                const SparseMatrix& m) {
  for (const Triplet& t : m.entries()) {
    os << key << ' ' << t.row << ' ' << t.col << ' ' << Num(t.value) << '\n';
  }
}

}  // namespace

std::string EmitInstance(const Instance& in) {
  RequireValid(in);
  std::ostringstream os;
  os << kInstanceSchema << '\n';
  os << "name " << in.name << '\n';
  os << "dims " << in.num_first() << ' ' << in.num_second() << ' '
     << in.num_first_rows() << ' ' << in.num_recourse_rows() << ' '
     << in.num_scenarios() << '\n';
  for (VarType type : {VarType::kBinary, VarType::kInteger}) {
    std::string line;
    for (int j = 0; j < in.num_first(); ++j) {
      if (in.first_stage_types[j] == type) line += ' ' + std::to_string(j);
    }
    if (!line.empty()) {
      os << (type == VarType::kBinary ? "binary" : "integer") << line << '\n';
    }
  }
  for (std::size_t j = 0; j < in.first_stage_upper.size(); ++j) {
    if (std::isfinite(in.first_stage_upper[j])) {
      os << "upper " << j << ' ' << Num(in.first_stage_upper[j]) << '\n';
    }
  }
  EmitVector(os, "c", in.first_stage_cost);
  EmitMatrix(os, "A", in.first_stage_matrix);
  EmitVector(os, "b", in.first_stage_rhs);
  EmitVector(os, "d", in.second_stage_cost);
  EmitMatrix(os, "W", in.recourse);
  for (int s = 0; s < in.num_scenarios(); ++s) {
    const Scenario& sc = in.scenarios[s];
    os << "scenario " << s << ' ' << Num(sc.probability) << '\n';
    EmitMatrix(os, "T", sc.technology);
    EmitVector(os, "h", sc.rhs);
  }
  os << "end\n";
  return os.str();
}

namespace {

class Parser {
 public:
  explicit Parser(std::istream& in) : in_(in) {}

  ParsedInstance Run() {
    ReadHeader();
    std::string raw;
    while (NextLine(raw)) {
      std::istringstream ls(raw);
      std::string key;
      ls >> key;
      if (key == "end") {
        ended_ = true;
        break;
      }
      Dispatch(key, ls, raw);
    }
    return Finish();
  }

 private:
  [[noreturn]] void Fail(ParseErrorKind kind, const std::string& what) const {
    throw ParseError(kind, line_no_, what);
  }

  bool NextLine(std::string& out) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_no_;
      const auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      const auto first = raw.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      const auto last = raw.find_last_not_of(" \t\r");
      out = raw.substr(first, last - first + 1);
      return true;
    }
    return false;
  }

  void ReadHeader() {
    std::string header;
    if (!NextLine(header)) Fail(ParseErrorKind::kSchema, "empty input");
    if (header == kInstanceSchema) return;
    if (header.rfind("stochcuts-", 0) == 0) {
      Fail(ParseErrorKind::kSchema, "unknown schema version '" + header + "'");
    }
    Fail(ParseErrorKind::kSchema, "missing '" + std::string(kInstanceSchema) +
                                      "' header line");
  }

  int Index(std::istringstream& ls, int limit, const char* what) {
    std::string tok;
    if (!(ls >> tok)) Fail(ParseErrorKind::kSyntax, std::string("missing ") + what);
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (*end != '\0' || tok.empty()) {
      Fail(ParseErrorKind::kSyntax, "bad integer '" + tok + "'");
    }
    if (v < 0 || v >= limit) {
      Fail(ParseErrorKind::kDimension, std::string(what) + " " + tok +
                                           " out of range [0," +
                                           std::to_string(limit) + ")");
    }
    return static_cast<int>(v);
  }

  double Value(std::istringstream& ls) {
    std::string tok;
    if (!(ls >> tok)) Fail(ParseErrorKind::kSyntax, "missing value");
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (*end != '\0' || std::isnan(v)) {
      Fail(ParseErrorKind::kSyntax, "bad number '" + tok + "'");
    }
    return v;
  }

  void ExpectEnd(std::istringstream& ls) {
    std::string extra;
    if (ls >> extra) Fail(ParseErrorKind::kSyntax, "trailing token '" + extra + "'");
  }

  void RequireDims() {
    if (!have_dims_) Fail(ParseErrorKind::kSyntax, "entry before 'dims' line");
  }

  void VectorEntry(std::istringstream& ls, std::vector<double>& v,
                   std::set<int>& seen, const std::string& label) {
    RequireDims();
    const int i = Index(ls, static_cast<int>(v.size()), "index");
    const double value = Value(ls);
    ExpectEnd(ls);
    if (!seen.insert(i).second) {
      warnings_.push_back("line " + std::to_string(line_no_) + ": duplicate " +
                          label + "[" + std::to_string(i) + "] summed");
    }
    v[i] += value;
  }

  void MatrixEntry(std::istringstream& ls, std::vector<Triplet>& out, int rows,
                   int cols) {
    RequireDims();
    const int r = Index(ls, rows, "row");
    const int c = Index(ls, cols, "column");
    const double value = Value(ls);
    ExpectEnd(ls);
    out.push_back({r, c, value});
  }

  void Dispatch(const std::string& key, std::istringstream& ls,
                const std::string& raw) {
    if (key == "name") {
      const auto pos = raw.find_first_not_of(" \t", 4);
      name_ = pos == std::string::npos ? "" : raw.substr(pos);
      return;
    }
    if (key == "dims") {
      if (have_dims_) Fail(ParseErrorKind::kSyntax, "repeated 'dims' line");
      int d[5];
      for (int& x : d) x = Index(ls, 1 << 30, "dimension");
      ExpectEnd(ls);
      n1_ = d[0];
      n2_ = d[1];
      m1_ = d[2];
      m2_ = d[3];
      num_scenarios_ = d[4];
      if (num_scenarios_ == 0) Fail(ParseErrorKind::kNoScenarios, "no scenarios");
      have_dims_ = true;
      c_.assign(n1_, 0.0);
      b_.assign(m1_, 0.0);
      d_.assign(n2_, 0.0);
      types_.assign(n1_, VarType::kContinuous);
      return;
    }
    if (key == "binary" || key == "integer") {
      RequireDims();
      const VarType type = key == "binary" ? VarType::kBinary : VarType::kInteger;
      while (ls.peek() != EOF) {
        ls >> std::ws;
        if (ls.peek() == EOF) break;
        types_[Index(ls, n1_, "variable")] = type;
      }
      return;
    }
    if (key == "upper") {
      RequireDims();
      if (upper_.empty()) upper_.assign(n1_, kInf);
      const int j = Index(ls, n1_, "variable");
      upper_[j] = Value(ls);
      ExpectEnd(ls);
      return;
    }
    if (key == "c") return VectorEntry(ls, c_, seen_c_, "c");
    if (key == "b") return VectorEntry(ls, b_, seen_b_, "b");
    if (key == "d") return VectorEntry(ls, d_, seen_d_, "d");
    if (key == "A") return MatrixEntry(ls, a_, m1_, n1_);
    if (key == "W") return MatrixEntry(ls, w_, m2_, n2_);
    if (key == "scenario") {
      RequireDims();
      CloseScenario();
      const int s = Index(ls, num_scenarios_, "scenario");
      if (s != static_cast<int>(scenarios_.size())) {
        Fail(ParseErrorKind::kDimension,
             "scenario " + std::to_string(s) + " out of order");
      }
      Scenario sc;
      sc.probability = Value(ls);
      ExpectEnd(ls);
      sc.rhs.assign(m2_, 0.0);
      scenarios_.push_back(std::move(sc));
      seen_h_.clear();
      t_.clear();
      return;
    }
    if (key == "T" || key == "h") {
      if (scenarios_.empty()) {
        Fail(ParseErrorKind::kSyntax, "'" + key + "' outside a scenario block");
      }
      if (key == "T") return MatrixEntry(ls, t_, m2_, n1_);
      return VectorEntry(ls, scenarios_.back().rhs, seen_h_,
                         "h" + std::to_string(scenarios_.size() - 1));
    }
    Fail(ParseErrorKind::kSyntax, "unknown keyword '" + key + "'");
  }

  SparseMatrix Matrix(int rows, int cols, std::vector<Triplet> t,
                      const std::string& label) {
    int dups = 0;
    SparseMatrix m = SparseMatrix::FromTriplets(rows, cols, std::move(t), &dups);
    if (dups > 0) {
      warnings_.push_back(label + ": " + std::to_string(dups) +
                          " duplicate entries summed");
    }
    return m;
  }

  void CloseScenario() {
    if (scenarios_.empty()) return;
    const int s = static_cast<int>(scenarios_.size()) - 1;
    scenarios_.back().technology =
        Matrix(m2_, n1_, std::move(t_), "T" + std::to_string(s));
    t_.clear();
  }

  ParsedInstance Finish() {
    if (!have_dims_) Fail(ParseErrorKind::kSyntax, "missing 'dims' line");
    if (!ended_) Fail(ParseErrorKind::kSyntax, "missing 'end' line");
    CloseScenario();
    if (static_cast<int>(scenarios_.size()) != num_scenarios_) {
      Fail(ParseErrorKind::kDimension,
           "declared " + std::to_string(num_scenarios_) + " scenarios, found " +
               std::to_string(scenarios_.size()));
    }
    ParsedInstance out;
    Instance& in = out.instance;
    in.name = name_;
    in.first_stage_cost = c_;
    in.first_stage_matrix = Matrix(m1_, n1_, std::move(a_), "A");
    in.first_stage_rhs = b_;
    in.first_stage_types = types_;
    in.first_stage_upper = upper_;
    in.second_stage_cost = d_;
    in.recourse = Matrix(m2_, n2_, std::move(w_), "W");
    in.scenarios = std::move(scenarios_);
    const auto problems = Validate(in);
    if (!problems.empty()) Fail(ParseErrorKind::kInvalid, problems.front());
    out.warnings = std::move(warnings_);
    return out;
  }

  std::istream& in_;
  int line_no_ = 0;
  bool have_dims_ = false;
  bool ended_ = false;
  int n1_ = 0, n2_ = 0, m1_ = 0, m2_ = 0, num_scenarios_ = 0;
  std::string name_;
  std::vector<double> c_, b_, d_, upper_;
  std::vector<VarType> types_;
  std::vector<Triplet> a_, w_, t_;
  std::set<int> seen_c_, seen_b_, seen_d_, seen_h_;
  std::vector<Scenario> scenarios_;
  std::vector<std::string> warnings_;
};

}  // namespace

ParsedInstance ParseInstance(std::istream& in) { return Parser(in).Run(); }

ParsedInstance ParseInstanceString(const std::string& text) {
  std::istringstream is(text);
  return ParseInstance(is);
}

ParsedInstance ReadInstanceFile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return ParseInstance(f);
}

void WriteInstanceFile(const Instance& instance, const std::string& path) {
  const std::string text = EmitInstance(instance);
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path);
}

void GeneratorConfig::Validate() const {
  if (sites < 1) throw std::invalid_argument("site_count must be >= 1");
  if (clients < 1) throw std::invalid_argument("client_count must be >= 1");
  if (scenarios < 1) throw std::invalid_argument("scenario_count must be >= 1");
  for (const auto& [lo, hi] : {site_cost, capacity, demand, revenue}) {
    if (lo > hi) throw std::invalid_argument("generator range with low > high");
  }
}

Instance GenerateSslp(const GeneratorConfig& cfg) {
  cfg.Validate();
  std::mt19937_64 rng(cfg.seed);
  auto draw = [&](std::pair<int, int> range) {
    return static_cast<double>(
        std::uniform_int_distribution<int>(range.first, range.second)(rng));
  };
  const int n1 = cfg.sites;
  const int m = cfg.clients;
  const int n2 = n1 * m;
  const int m2 = n1 + m;

  Instance in;
  in.name = std::string(cfg.variant ? "sslpv" : "sslp") + "-" +
            std::to_string(n1) + "-" + std::to_string(m) + "-" +
            std::to_string(cfg.scenarios) + "-s" + std::to_string(cfg.seed);
  std::vector<double> capacity(n1);
  for (int i = 0; i < n1; ++i) in.first_stage_cost.push_back(draw(cfg.site_cost));
  for (int i = 0; i < n1; ++i) capacity[i] = draw(cfg.capacity);
  std::vector<double> demand(m);
  for (int j = 0; j < m; ++j) demand[j] = draw(cfg.demand);
  in.second_stage_cost.assign(n2, 0.0);
  if (cfg.variant) {
    for (int k = 0; k < n2; ++k) in.second_stage_cost[k] = -draw(cfg.revenue);
  } else {
    for (int j = 0; j < m; ++j) {
      const double r = -draw(cfg.revenue);
      for (int i = 0; i < n1; ++i) in.second_stage_cost[i * m + j] = r;
    }
  }
  in.first_stage_matrix = SparseMatrix::FromTriplets(0, n1, {});
  in.first_stage_types.assign(n1, VarType::kBinary);

  std::vector<Triplet> w;
  std::vector<Triplet> t;
  for (int i = 0; i < n1; ++i) {
    t.push_back({i, i, capacity[i]});
    for (int j = 0; j < m; ++j) {
      w.push_back({i, i * m + j, -demand[j]});
      w.push_back({n1 + j, i * m + j, -1.0});
    }
  }
  in.recourse = SparseMatrix::FromTriplets(m2, n2, std::move(w));
  const SparseMatrix tech = SparseMatrix::FromTriplets(m2, n1, std::move(t));
  std::bernoulli_distribution available(0.5);
  for (int s = 0; s < cfg.scenarios; ++s) {
    Scenario sc;
    sc.probability = 1.0 / cfg.scenarios;
    sc.technology = tech;
    sc.rhs.assign(m2, 0.0);
    for (int j = 0; j < m; ++j) sc.rhs[n1 + j] = available(rng) ? -1.0 : 0.0;
    in.scenarios.push_back(std::move(sc));
  }
  RequireValid(in);
  return in;
}

namespace {

Instance Thm1() {
  Instance in;
  in.name = "thm1";
  in.first_stage_cost = {0.0, 0.0};
  in.first_stage_matrix = SparseMatrix::FromTriplets(0, 2, {});
  in.first_stage_types = {VarType::kBinary, VarType::kBinary};
  in.second_stage_cost = {1.0};
  in.recourse = SparseMatrix::FromTriplets(2, 1, {{0, 0, 1.0}, {1, 0, 1.0}});
  // z >= x - y, z >= y - x
  in.scenarios.push_back(
      {0.5,
       SparseMatrix::FromTriplets(
           2, 2, {{0, 0, -1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, -1.0}}),
       {0.0, 0.0}});
  // z >= 1 - x - y, z >= x + y - 1
  in.scenarios.push_back(
      {0.5,
       SparseMatrix::FromTriplets(
           2, 2, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, -1.0}, {1, 1, -1.0}}),
       {1.0, -1.0}});
  return in;
}

// Four scenarios; the first two share data so their recourse duals coincide.
Instance RefinementExample() {
  Instance in;
  in.name = "refinement-example";
  in.first_stage_cost = {1.0, 1.0};
  in.first_stage_matrix = SparseMatrix::FromTriplets(0, 2, {});
  in.first_stage_types = {VarType::kBinary, VarType::kBinary};
  in.second_stage_cost = {1.0};
  in.recourse = SparseMatrix::FromTriplets(2, 1, {{0, 0, 1.0}, {1, 0, 1.0}});
  const SparseMatrix tech =
      SparseMatrix::FromTriplets(2, 2, {{0, 0, 1.0}, {1, 1, 1.0}});
  for (const auto& h : std::vector<std::vector<double>>{
           {3.0, 1.0}, {3.0, 1.0}, {2.0, 0.0}, {0.0, 2.0}}) {
    in.scenarios.push_back({0.25, tech, h});
  }
  return in;
}

Instance Dim1Random(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&](int lo, int hi) {
    return static_cast<double>(std::uniform_int_distribution<int>(lo, hi)(rng));
  };
  const int n2 = 3;
  const int m2 = 3;
  const int num_scenarios = static_cast<int>(uni(2, 6));
  Instance in;
  in.name = "dim1-random-" + std::to_string(seed);
  in.first_stage_cost = {uni(-5, 5)};
  in.first_stage_matrix = SparseMatrix::FromTriplets(0, 1, {});
  in.first_stage_types = {VarType::kBinary};
  for (int k = 0; k < n2; ++k) in.second_stage_cost.push_back(uni(1, 4));
  std::vector<Triplet> w;
  for (int r = 0; r < m2; ++r) {
    for (int k = 0; k < n2; ++k) {
      // Positive diagonal keeps every scenario feasible for any x.
      w.push_back({r, k, uni(0, 2) + (r == k ? 1.0 : 0.0)});
    }
  }
  in.recourse = SparseMatrix::FromTriplets(m2, n2, std::move(w));
  std::vector<double> weights;
  double total = 0.0;
  for (int s = 0; s < num_scenarios; ++s) {
    weights.push_back(uni(1, 4));
    total += weights.back();
  }
  for (int s = 0; s < num_scenarios; ++s) {
    std::vector<Triplet> t;
    std::vector<double> h;
    for (int r = 0; r < m2; ++r) {
      t.push_back({r, 0, uni(-4, 4)});
      h.push_back(uni(-3, 6));
    }
    in.scenarios.push_back(
        {weights[s] / total, SparseMatrix::FromTriplets(m2, 1, std::move(t)),
         h});
  }
  return in;
}

}  // namespace

Instance Builtin(const std::string& name) {
  Instance in;
  const std::string dim1 = "dim1-random-";
  if (name == "thm1") {
    in = Thm1();
  } else if (name == "refinement-example") {
    in = RefinementExample();
  } else if (name.rfind(dim1, 0) == 0 && name.size() > dim1.size() &&
             name.find_first_not_of("0123456789", dim1.size()) ==
                 std::string::npos) {
    in = Dim1Random(std::stoull(name.substr(dim1.size())));
  } else {
    throw std::invalid_argument("unknown builtin '" + name +
                                "'; available: thm1, dim1-random-<seed>, "
                                "refinement-example");
  }
  RequireValid(in);
  return in;
}

Instance LoadInstance(const std::string& source) {
  const std::string prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) return Builtin(source.substr(prefix.size()));
  return ReadInstanceFile(source).instance;
}

}  // namespace stochcuts
