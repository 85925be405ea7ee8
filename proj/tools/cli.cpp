#include "cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <numbers>
#include <sstream>
#include <variant>

#include "bubblefem/acceptance.hpp"
#include "bubblefem/bubble_enrichment.hpp"
#include "bubblefem/errors.hpp"
#include "bubblefem/steady_assembly.hpp"
#include "bubblefem/transient_solver.hpp"
#include "bubblefem/verification.hpp"

namespace bubblefem::cli {

namespace {

using json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Tabular output shared by every subcommand.

using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct Column {
  std::string name;
  std::string table_format = "{:.6g}";
};

struct Report {
  std::string command;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;
  std::vector<std::string> notes;
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string cell_csv(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "";
        else if constexpr (std::is_same_v<T, double>) return fmt::format("{:.17g}", v + 0.0);
        else if constexpr (std::is_same_v<T, long long>) return fmt::format("{}", v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return csv_escape(v);
      },
      c);
}

std::string cell_text(const Cell& c, const std::string& number_format) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "-";
        else if constexpr (std::is_same_v<T, double>) return fmt::format(fmt::runtime(number_format), v + 0.0);
        else if constexpr (std::is_same_v<T, long long>) return fmt::format("{}", v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "yes" : "no";
        else return v;
      },
      c);
}

json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, double>) return std::isfinite(v) ? json(v) : json(nullptr);
        else return json(v);
      },
      c);
}

void emit(const Report& r, Format format, std::ostream& os) {
  switch (format) {
    case Format::csv: {
      for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i].name;
      os << '\n';
      for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_csv(row[i]);
        os << '\n';
      }
      break;
    }
    case Format::json: {
      json doc;
      doc["command"] = r.command;
      json rows = json::array();
      for (const auto& row : r.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[r.columns[i].name] = cell_json(row[i]);
        rows.push_back(std::move(obj));
      }
      doc["rows"] = std::move(rows);
      json summary = json::object();
      for (const auto& [k, v] : r.summary) summary[k] = cell_json(v);
      doc["summary"] = std::move(summary);
      doc["notes"] = r.notes;
      os << doc.dump(2) << '\n';
      break;
    }
    case Format::table: {
      std::vector<std::vector<std::string>> text;
      std::vector<std::size_t> width(r.columns.size());
      for (std::size_t i = 0; i < r.columns.size(); ++i) width[i] = r.columns[i].name.size();
      for (const auto& row : r.rows) {
        auto& line = text.emplace_back();
        for (std::size_t i = 0; i < row.size(); ++i) {
          line.push_back(cell_text(row[i], r.columns[i].table_format));
          width[i] = std::max(width[i], line.back().size());
        }
      }
      for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "  " : "") << fmt::format("{:>{}}", r.columns[i].name, width[i]);
      os << '\n';
      for (const auto& line : text) {
        for (std::size_t i = 0; i < line.size(); ++i) os << (i ? "  " : "") << fmt::format("{:>{}}", line[i], width[i]);
        os << '\n';
      }
      if (!r.summary.empty()) os << '\n';
      for (const auto& [k, v] : r.summary) os << k << ": " << cell_text(v, "{:.6g}") << '\n';
      for (const auto& n : r.notes) os << "note: " << n << '\n';
      break;
    }
  }
}

// ---------------------------------------------------------------------------
// Config files.

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

class FieldReader {
 public:
  FieldReader(const std::string& text, const std::string& source) : text_(text), source_(source) {}

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const std::size_t pos = text_.find("\"" + key.substr(0, key.find('.')) + "\"");
    if (pos == std::string::npos) throw ArgumentError(fmt::format("{}: field '{}': {}", source_, key, what));
    throw ArgumentError(fmt::format("{}:{}: field '{}': {}", source_, line_column(text_, pos).first, key, what));
  }

  double number(const json& v, const std::string& key) const {
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }
  int integer(const json& v, const std::string& key) const {
    if (!v.is_number_integer()) fail(key, "expected an integer");
    const auto n = v.get<long long>();
    if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max()) fail(key, "integer out of range");
    return static_cast<int>(n);
  }
  std::string string(const json& v, const std::string& key) const {
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }
  bool boolean(const json& v, const std::string& key) const {
    if (!v.is_boolean()) fail(key, "expected true or false");
    return v.get<bool>();
  }
  BoundarySpec boundary(const json& v, const std::string& key) const {
    if (!v.is_object()) fail(key, "expected {\"type\": \"dirichlet\"|\"flux\", \"value\": number}");
    BoundarySpec b;
    for (const auto& [k, item] : v.items()) {
      if (k == "type") {
        const std::string t = string(item, key + ".type");
        if (t == "dirichlet") b.dirichlet = true;
        else if (t == "flux" || t == "neumann") b.dirichlet = false;
        else fail(key, "type must be \"dirichlet\" or \"flux\"");
      } else if (k == "value") {
        b.value = number(item, key + ".value");
      } else {
        fail(key, "unknown key '" + k + "'");
      }
    }
    if (!v.contains("type") || !v.contains("value")) fail(key, "needs both \"type\" and \"value\"");
    return b;
  }

 private:
  const std::string& text_;
  const std::string& source_;
};

Format parse_format(const std::string& s) {
  if (s == "table") return Format::table;
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ArgumentError("format must be table, csv or json (got '" + s + "')");
}

}  // namespace

void apply_config_text(const std::string& text, const std::string& source, RunConfig& c) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ArgumentError(fmt::format("{}:{}:{}: malformed config: {}", source, line, col, e.what()));
  }
  if (!doc.is_object()) throw ArgumentError(source + ": config must be a JSON object");
  const FieldReader rd(text, source);

  for (const auto& [key, v] : doc.items()) {
    if (key == "epsilon") c.epsilon = rd.number(v, key);
    else if (key == "kappa") c.kappa = rd.number(v, key);
    else if (key == "lambda") c.lambda = rd.number(v, key);
    else if (key == "domain_start") c.domain_start = rd.number(v, key);
    else if (key == "domain_end") c.domain_end = rd.number(v, key);
    else if (key == "left_bc") c.left_bc = rd.boundary(v, key);
    else if (key == "right_bc") c.right_bc = rd.boundary(v, key);
    else if (key == "elements") c.elements = rd.integer(v, key);
    else if (key == "enrichment") c.enrichment = rd.string(v, key);
    else if (key == "quad_points") c.quad_points = rd.integer(v, key);
    else if (key == "samples") c.samples = rd.integer(v, key);
    else if (key == "length") c.length = rd.number(v, key);
    else if (key == "order") c.order = rd.integer(v, key);
    else if (key == "u0") c.u0 = rd.number(v, key);
    else if (key == "ul") c.ul = rd.number(v, key);
    else if (key == "dt") c.dt = rd.number(v, key);
    else if (key == "t_end") c.t_end = rd.number(v, key);
    else if (key == "stride") c.stride = rd.integer(v, key);
    else if (key == "profile") c.profile = rd.string(v, key);
    else if (key == "sign_compat") c.sign_compat = rd.boolean(v, key);
    else if (key == "format") {
      try {
        c.format = parse_format(rd.string(v, key));
      } catch (const ArgumentError& e) {
        rd.fail(key, e.what());
      }
    } else if (key == "out") c.out = rd.string(v, key);
    else if (key == "counts") {
      if (!v.is_array()) rd.fail(key, "expected an array of integers");
      std::vector<int> counts;
      for (const auto& item : v) counts.push_back(rd.integer(item, key));
      c.counts = counts;
    } else if (key == "enrichments") {
      if (!v.is_array()) rd.fail(key, "expected an array of strings");
      std::vector<std::string> names;
      for (const auto& item : v) names.push_back(rd.string(item, key));
      c.enrichments = names;
    } else {
      rd.fail(key, "unknown field");
    }
  }
}

void apply_config_file(const std::string& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(buf.str(), path, config);
}

namespace {

// ---------------------------------------------------------------------------
// Resolution of defaults and validation.

double finite(double v, const char* name) {
  if (!std::isfinite(v)) throw ArgumentError(std::string(name) + " must be finite");
  return v;
}

int at_least(int v, int lo, const char* name) {
  if (v < lo) throw ArgumentError(fmt::format("{} must be >= {} (got {})", name, lo, v));
  return v;
}

BoundaryCondition to_bc(const BoundarySpec& b, const char* name) {
  finite(b.value, name);
  return b.dirichlet ? BoundaryCondition::dirichlet(b.value) : BoundaryCondition::neumann_flux(b.value);
}

// Unset fields default to the reaction-diffusion benchmark.
SteadyProblem steady_problem(const RunConfig& c) {
  const TransportCoefficients op(finite(c.epsilon.value_or(-0.01), "epsilon"), finite(c.kappa.value_or(0.0), "kappa"),
                                 finite(c.lambda.value_or(1.0), "lambda"));
  return SteadyProblem(op, finite(c.domain_start.value_or(0.0), "domain_start"),
                       finite(c.domain_end.value_or(10.0), "domain_end"),
                       to_bc(c.left_bc.value_or(BoundarySpec{true, 1.5}), "left boundary value"),
                       to_bc(c.right_bc.value_or(BoundarySpec{false, 0.0}), "right boundary value"));
}

std::vector<double> sample_points(const Mesh1D& mesh, int per_element) {
  std::vector<double> xs;
  for (std::size_t e = 0; e < mesh.element_count(); ++e)
    for (int k = 0; k < per_element; ++k) xs.push_back(mesh.node(e) + mesh.length(e) * k / per_element);
  xs.push_back(mesh.right());
  return xs;
}

// Sample i of sample_points belongs to element i / per_element (the last to the last element).
std::size_t sample_element(const Mesh1D& mesh, std::size_t i, int per_element) {
  return std::min(i / static_cast<std::size_t>(per_element), mesh.element_count() - 1);
}

void add_warnings(Report& r, const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) {
    err << "warning: " << w << '\n';
    r.notes.push_back("warning: " + w);
  }
}

// ---------------------------------------------------------------------------
// Subcommands.

Report run_coeff(const RunConfig& c) {
  const TransportCoefficients op(finite(c.epsilon.value_or(-1.0), "epsilon"), finite(c.kappa.value_or(0.0), "kappa"),
                                 finite(c.lambda.value_or(1.0), "lambda"));
  const double l = finite(c.length.value_or(kPi / 2.0), "length");
  if (!(l > 0.0)) throw ArgumentError("length must be > 0");
  const int order = at_least(c.order.value_or(2), 2, "order");
  const double u0 = finite(c.u0.value_or(0.0), "u0");
  const double ul = finite(c.ul.value_or(1.0), "ul");

  Report r;
  r.command = "coeff";
  r.columns = {{"quantity", "{}"}, {"value", "{:.10g}"}};
  const BubbleSolution sol = ls_bubble(op, l, u0, ul, order);
  for (std::size_t k = 0; k < sol.coeffs.size(); ++k)
    r.rows.push_back({fmt::format("c{}", k + 1), sol.coeffs[k]});
  r.rows.push_back({std::string("residual_functional"), sol.residual_value});
  r.rows.push_back({std::string("residual_functional_linear"),
                    residual_functional(op, l, u0, ul, std::span<const double>{})});
  r.notes.push_back(sol.coeffs.size() == 1 ? "c1 multiplies x(l - x) on [0, l]"
                                            : "ck multiplies x^k (l - x) on [0, l]");

  if (order == 2) {
    const EnrichmentAB ab = quadratic_ab(op, l);
    const double closed = quadratic_coefficient(op, l, u0, ul);
    r.rows.push_back({std::string("A"), ab.a_coef});
    r.rows.push_back({std::string("B"), ab.b_coef});
    r.rows.push_back({std::string("c_closed_form"), closed});
    r.rows.push_back({std::string("closed_form_deviation"), std::abs(closed - sol.coeffs[0])});
    if (op.kappa() == 0.0) {
      r.rows.push_back({std::string("paper_compat_c"), -sol.coeffs[0]});
      r.notes.push_back(fmt::format(
          "the published two-element transient results use the opposite sign, c = {:+.4f}; pass --sign-compat to "
          "the transient and tables commands to reproduce them",
          -sol.coeffs[0]));
    }
    if (op.kappa() == 0.0 && op.lambda() == 1.0) {
      const double c_unit = transient_coefficient(op.epsilon(), l);
      r.rows.push_back({std::string("transient_formula_c"), c_unit * (u0 + ul)});
    }
    if (op.epsilon() == -0.01 && op.kappa() == 0.0 && op.lambda() == 1.0)
      r.rows.push_back({std::string("benchmark_formula_c"), reaction_diffusion_benchmark_factor(l) * (u0 + ul)});
  } else if (order == 3) {
    CubicCrossCheck check;
    cubic_coefficients(op, l, u0, ul, &check);
    r.rows.push_back({std::string("c_closed_form"), check.closed.c});
    r.rows.push_back({std::string("f_closed_form"), check.closed.f});
    r.rows.push_back({std::string("c_relative_deviation"), check.c_relative_deviation});
    r.rows.push_back({std::string("f_relative_deviation"), check.f_relative_deviation});
    r.summary.emplace_back("closed_form_mismatch", check.mismatch);
    if (check.mismatch)
      r.notes.push_back("published cubic closed forms disagree with the least-squares minimiser; c1, c2 above are the "
                        "minimiser");
  }
  return r;
}

Report run_steady(const RunConfig& c, std::ostream& err) {
  const SteadyProblem problem = steady_problem(c);
  const int n = at_least(c.elements.value_or(50), 1, "elements");
  const int per = at_least(c.samples.value_or(1), 1, "samples");
  const EnrichmentKind kind = EnrichmentKind::parse(c.enrichment.value_or("quadratic"));
  const Mesh1D mesh = uniform_mesh(problem.a(), problem.b(), n);
  std::vector<std::string> warnings;
  const SolutionField field =
      solve_steady(problem, mesh, kind, SteadyOptions{c.quad_points.value_or(0), Execution::parallel}, &warnings);
  const auto exact = known_exact_solution(problem);

  Report r;
  r.command = "steady";
  r.columns = {{"x"}, {"u_numeric", "{:.8g}"}, {"u_exact", "{:.8g}"}, {"abs_error", "{:.3e}"}};
  const auto xs = sample_points(mesh, per);
  double max_err = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double u = field.eval_on_element(sample_element(mesh, i, per), xs[i]);
    if (exact) {
      const double ue = (*exact)(xs[i]);
      max_err = std::max(max_err, std::abs(u - ue));
      r.rows.push_back({xs[i], u, ue, std::abs(u - ue)});
    } else {
      r.rows.push_back({xs[i], u, std::monostate{}, std::monostate{}});
    }
  }
  r.summary.emplace_back("enrichment", kind.name());
  r.summary.emplace_back("elements", static_cast<long long>(n));
  r.summary.emplace_back("quad_points",
                         static_cast<long long>(c.quad_points.value_or(0) ? *c.quad_points : default_quadrature_points(kind)));
  r.summary.emplace_back("max_abs_error", exact ? Cell(max_err) : Cell(std::monostate{}));
  add_warnings(r, warnings, err);
  return r;
}

Report run_transient(const RunConfig& c, std::ostream& err) {
  if (c.kappa.value_or(0.0) != 0.0) throw ArgumentError("transient problems have no convection term (kappa must be 0)");
  const double eps = finite(c.epsilon.value_or(-1.0), "epsilon");
  const double lambda = finite(c.lambda.value_or(1.0), "lambda");
  const double a = finite(c.domain_start.value_or(0.0), "domain_start");
  const double b = finite(c.domain_end.value_or(kPi), "domain_end");
  if (!(a < b)) throw ArgumentError("domain requires domain_start < domain_end");
  const std::string profile = c.profile.value_or("sine");
  const double k = kPi / (b - a);
  TransientProblem::Profile initial;
  if (profile == "sine") {
    initial = [=](double x) {
      // Exact zeros at the ends; sin(pi) in floating point is 1.2e-16.
      if (x <= a || x >= b) return 0.0;
      return std::sin(k * (x - a));
    };
  } else if (profile == "hat") {
    initial = [=](double x) { return std::max(0.0, std::min(x - a, b - x)); };
  } else {
    throw ArgumentError("profile must be sine or hat (got '" + profile + "')");
  }
  const TransientProblem problem(eps, a, b, initial, lambda);
  const int n = at_least(c.elements.value_or(2), 1, "elements");
  const int per = at_least(c.samples.value_or(1), 1, "samples");
  const auto stride = static_cast<std::size_t>(at_least(c.stride.value_or(10), 1, "stride"));
  const double dt = finite(c.dt.value_or(0.01), "dt");
  const double t_end = finite(c.t_end.value_or(1.0), "t_end");
  if (!(dt > 0.0)) throw ArgumentError("dt must be > 0");
  if (!(t_end > 0.0)) throw ArgumentError("t_end must be > 0");
  const bool compat = c.sign_compat.value_or(true);
  const EnrichmentKind kind = EnrichmentKind::parse(c.enrichment.value_or("quadratic"));
  const Mesh1D mesh = uniform_mesh(a, b, n);
  const Trajectory tr = solve_transient(problem, mesh, kind, dt, t_end, compat, stride);

  const double omega_exact = lambda - eps * k * k;
  Report r;
  r.command = "transient";
  r.columns = {{"t", "{:.4g}"}, {"x"}, {"u_numeric", "{:.8g}"}, {"u_exact", "{:.8g}"}, {"abs_error", "{:.3e}"}};
  const auto xs = sample_points(mesh, per);
  double max_err = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double t = tr.times()[i];
    const SolutionField field = tr.field(i);
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const double u = field.eval_on_element(sample_element(mesh, j, per), xs[j]);
      if (profile == "sine") {
        const double ue = initial(xs[j]) * std::exp(-omega_exact * t);
        max_err = std::max(max_err, std::abs(u - ue));
        r.rows.push_back({t, xs[j], u, ue, std::abs(u - ue)});
      } else {
        r.rows.push_back({t, xs[j], u, std::monostate{}, std::monostate{}});
      }
    }
  }
  r.summary.emplace_back("enrichment", kind.name());
  r.summary.emplace_back("elements", static_cast<long long>(n));
  r.summary.emplace_back("sign_compat", compat);
  if (!kind.is_linear() && !tr.system().element_c.empty())
    r.summary.emplace_back("bubble_c", tr.system().element_c.front());
  if (tr.system().dimension() > 0) r.summary.emplace_back("decay_rate", slowest_decay_rate(tr.system()));
  if (profile == "sine") {
    r.summary.emplace_back("decay_rate_exact", omega_exact);
    r.summary.emplace_back("max_abs_error", max_err);
  }
  add_warnings(r, tr.system().warnings, err);
  return r;
}

Report run_tables(const RunConfig& c, bool& all_pass) {
  const bool compat = c.sign_compat.value_or(true);
  const auto t1 = compare_tables(published_table1(), table1(compat));
  const auto t2 = compare_tables(published_table2(), table2(compat));
  Report r;
  r.command = "tables";
  r.columns = {{"x_or_t", "{:.6f}"},          {"paper_exact", "{:.3f}"},     {"paper_bubble", "{:.3f}"},
               {"paper_linear", "{:.3f}"},    {"computed_bubble", "{:.6f}"}, {"computed_linear", "{:.6f}"},
               {"pass"},                      {"computed_bubble_3dp", "{}"}, {"computed_linear_3dp", "{}"}};
  std::size_t passed = 0;
  for (const auto* table : {&t1, &t2}) {
    for (const auto& row : *table) {
      passed += row.pass ? 1 : 0;
      r.rows.push_back({row.published.coordinate, row.published.exact, row.published.bubble, row.published.linear,
                        row.computed.bubble, row.computed.linear, row.pass, fmt::format("{:.3f}", row.computed.bubble),
                        fmt::format("{:.3f}", row.computed.linear)});
    }
  }
  const std::size_t total = t1.size() + t2.size();
  all_pass = passed == total;
  r.summary.emplace_back("rows_passed", static_cast<long long>(passed));
  r.summary.emplace_back("rows_total", static_cast<long long>(total));
  r.summary.emplace_back("tolerance", kTableTolerance);
  r.summary.emplace_back("sign_compat", compat);
  r.notes.push_back("rows 1-17: profile at t = 0 against x; rows 18-28: history at x = 7pi/8 against t");
  return r;
}

Report run_convergence(const RunConfig& c) {
  const SteadyProblem problem = steady_problem(c);
  const auto exact = known_exact_solution(problem);
  if (!exact)
    throw ArgumentError("convergence needs a problem with a known exact solution (the reaction-diffusion benchmark "
                        "or pure diffusion with Dirichlet ends)");
  const std::vector<int> counts = c.counts.value_or(std::vector<int>{10, 20, 30, 50, 100});
  std::vector<EnrichmentKind> kinds;
  for (const auto& name : c.enrichments.value_or(std::vector<std::string>{"linear", "quadratic", "cubic"}))
    kinds.push_back(EnrichmentKind::parse(name));
  const auto reports = convergence_study(problem, kinds, counts, *exact, Execution::parallel, c.quad_points.value_or(0));

  Report r;
  r.command = "convergence";
  r.columns = {{"enrichment", "{}"}, {"elements", "{}"}, {"nodal_linf", "{:.4e}"}, {"l2", "{:.4e}"},
               {"l2_rate", "{:.3f}"}};
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& rep = reports[i];
    Cell rate = std::monostate{};
    if (i % counts.size() != 0) {
      const auto& prev = reports[i - 1];
      if (rep.l2 > 0.0 && prev.l2 > 0.0 && rep.element_count != prev.element_count)
        rate = std::log(prev.l2 / rep.l2) /
               std::log(static_cast<double>(rep.element_count) / static_cast<double>(prev.element_count));
    }
    r.rows.push_back({rep.enrichment.name(), static_cast<long long>(rep.element_count), rep.nodal_linf, rep.l2, rate});
  }
  return r;
}

Report run_selftest(bool& all_pass) {
  const auto results = acceptance::run_all();
  all_pass = acceptance::all_passed(results);
  Report r;
  r.command = "selftest";
  r.columns = {{"id", "{}"}, {"status", "{}"}, {"title", "{}"}, {"detail", "{}"}};
  for (const auto& res : results) {
    const char* status = res.status == acceptance::Status::pass   ? "pass"
                         : res.status == acceptance::Status::fail ? "fail"
                                                                  : "info";
    r.rows.push_back({static_cast<long long>(res.id), std::string(status), res.title, res.detail});
  }
  r.summary.emplace_back("all_passed", all_pass);
  return r;
}

void write_report(const Report& r, const RunConfig& c, std::ostream& out) {
  if (c.out.empty()) {
    if (c.command == Command::selftest && c.format == Format::table) {
      // One line per criterion reads better than a wide table.
      for (const auto& row : r.rows)
        out << fmt::format("{} [{}] {}: {}", cell_text(row[1], ""), cell_text(row[0], ""), cell_text(row[2], ""),
                           cell_text(row[3], ""))
            << '\n';
      out << "all_passed: " << cell_text(r.summary.front().second, "") << '\n';
      return;
    }
    emit(r, c.format, out);
    return;
  }
  std::ofstream file(c.out);
  if (!file) throw ArgumentError("cannot open output file '" + c.out + "'");
  emit(r, c.format, file);
  if (!file) throw ArgumentError("failed writing output file '" + c.out + "'");
}

}  // namespace

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    bool pass = true;
    Report report;
    switch (config.command) {
      case Command::coeff: report = run_coeff(config); break;
      case Command::steady: report = run_steady(config, err); break;
      case Command::transient: report = run_transient(config, err); break;
      case Command::tables: report = run_tables(config, pass); break;
      case Command::convergence: report = run_convergence(config); break;
      case Command::selftest: report = run_selftest(pass); break;
    }
    write_report(report, config, out);
    return pass ? kExitOk : kExitAcceptance;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IllPosedError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

namespace {

template <class T>
CLI::Option* add_flag_value(CLI::App& app, const std::string& name, std::optional<T>& target, const std::string& help) {
  return app.add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

// Every field that a flag set is copied over the config-file value.
void overlay(RunConfig& base, const RunConfig& flags) {
  const auto take = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  take(base.epsilon, flags.epsilon);
  take(base.kappa, flags.kappa);
  take(base.lambda, flags.lambda);
  take(base.domain_start, flags.domain_start);
  take(base.domain_end, flags.domain_end);
  take(base.left_bc, flags.left_bc);
  take(base.right_bc, flags.right_bc);
  take(base.elements, flags.elements);
  take(base.enrichment, flags.enrichment);
  take(base.quad_points, flags.quad_points);
  take(base.samples, flags.samples);
  take(base.length, flags.length);
  take(base.order, flags.order);
  take(base.u0, flags.u0);
  take(base.ul, flags.ul);
  take(base.dt, flags.dt);
  take(base.t_end, flags.t_end);
  take(base.stride, flags.stride);
  take(base.profile, flags.profile);
  take(base.sign_compat, flags.sign_compat);
  take(base.counts, flags.counts);
  take(base.enrichments, flags.enrichments);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Least-squares bubble finite elements for 1D convection-diffusion-reaction"};
  app.fallthrough();
  app.require_subcommand(1);

  RunConfig flags;
  std::string config_path;
  std::optional<std::string> format;
  std::optional<std::string> out_path;
  std::optional<double> left_dirichlet, left_flux, right_dirichlet, right_flux;

  app.add_option("--config", config_path, "JSON config file; flags override its values");
  add_flag_value(app, "--format", format, "Output format: table (default), csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  add_flag_value(app, "--out", out_path, "Write data to this file instead of stdout");
  add_flag_value(app, "--quad-points", flags.quad_points, "Gauss points per element (default: bubble order + 2)");
  add_flag_value(app, "--sign-compat", flags.sign_compat,
       "Flip the transient bubble sign to match the published two-element results (default true)");

  add_flag_value(app, "--epsilon", flags.epsilon, "Diffusion coefficient, negative (coeff: -1, transient: -1, steady: -0.01)");
  add_flag_value(app, "--kappa", flags.kappa, "Convection coefficient (default 0)");
  add_flag_value(app, "--lambda", flags.lambda, "Reaction coefficient (default 1)");
  add_flag_value(app, "--domain-start", flags.domain_start, "Left end of the domain (default 0)");
  add_flag_value(app, "--domain-end", flags.domain_end, "Right end of the domain (steady: 10, transient: pi)");
  auto* ld = add_flag_value(app, "--left-dirichlet", left_dirichlet, "Dirichlet value at the left end (steady default 1.5)");
  auto* lf = add_flag_value(app, "--left-flux", left_flux, "Prescribed u' at the left end");
  auto* rd = add_flag_value(app, "--right-dirichlet", right_dirichlet, "Dirichlet value at the right end");
  auto* rf = add_flag_value(app, "--right-flux", right_flux, "Prescribed u' at the right end (steady default 0)");
  ld->excludes(lf);
  rd->excludes(rf);
  add_flag_value(app, "--elements", flags.elements, "Uniform element count (steady: 50, transient: 2)");
  add_flag_value(app, "--enrichment", flags.enrichment, "linear, quadratic, cubic or pN (default quadratic)");
  add_flag_value(app, "--samples", flags.samples, "Output points per element (default 1: nodes only)");
  add_flag_value(app, "--length", flags.length, "coeff: element length (default pi/2)");
  add_flag_value(app, "--order", flags.order, "coeff: bubble polynomial order >= 2 (default 2)");
  add_flag_value(app, "--u0", flags.u0, "coeff: left nodal value (default 0)");
  add_flag_value(app, "--ul", flags.ul, "coeff: right nodal value (default 1)");
  add_flag_value(app, "--dt", flags.dt, "transient: time step (default 0.01)");
  add_flag_value(app, "--t-end", flags.t_end, "transient: final time (default 1)");
  add_flag_value(app, "--stride", flags.stride, "transient: emit every n-th step (default 10)");
  add_flag_value(app, "--profile", flags.profile, "transient: initial profile sine or hat (default sine)")
      ->check(CLI::IsMember({"sine", "hat"}));
  add_flag_value(app, "--counts", flags.counts, "convergence: element counts (default 10 20 30 50 100)");
  add_flag_value(app, "--enrichments", flags.enrichments, "convergence: enrichments (default linear quadratic cubic)");

  const std::map<std::string, Command> commands = {
      {"coeff", Command::coeff},          {"steady", Command::steady},
      {"transient", Command::transient},  {"tables", Command::tables},
      {"convergence", Command::convergence}, {"selftest", Command::selftest}};
  app.add_subcommand("coeff", "Bubble coefficients for one element with closed-form cross-checks");
  app.add_subcommand("steady", "Solve a steady problem (default: reaction-diffusion boundary layer)");
  app.add_subcommand("transient", "Trapezoidal time stepping (default: sine heat-loss problem)");
  app.add_subcommand("tables", "Two-element transient tables against the published values");
  app.add_subcommand("convergence", "Error norms over a range of element counts");
  app.add_subcommand("selftest", "Run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (left_dirichlet) flags.left_bc = BoundarySpec{true, *left_dirichlet};
  if (left_flux) flags.left_bc = BoundarySpec{false, *left_flux};
  if (right_dirichlet) flags.right_bc = BoundarySpec{true, *right_dirichlet};
  if (right_flux) flags.right_bc = BoundarySpec{false, *right_flux};

  RunConfig config;
  try {
    if (!config_path.empty()) apply_config_file(config_path, config);
    if (format) config.format = parse_format(*format);
    if (out_path) config.out = *out_path;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  overlay(config, flags);
  config.command = commands.at(app.get_subcommands().front()->get_name());
  return execute(config, out, err);
}

}  // namespace bubblefem::cli
