#include "irenergy/driver/driver.hpp"

#include "irenergy/energy/model.hpp"
#include "irenergy/hcir/text.hpp"
#include "irenergy/hcir/translate.hpp"
#include "irenergy/ir/parse.hpp"
#include "irenergy/ir/validate.hpp"
#include "irenergy/support/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace irenergy::driver {

namespace {

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i)
    out += (i ? sep : "") + items[i];
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s)
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(std::string(s.substr(start, pos - start)));
    if (pos == std::string_view::npos)
      return out;
    start = pos + 1;
  }
}

std::vector<std::string> lines_of(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty())
    lines.pop_back();
  return lines;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  });
}

// Unsolved recurrences of the predicates belonging to `fn`.
std::vector<const analysis::HeaderRecurrence*> unsolved_headers(const analysis::Analysis& a,
                                                                const hcir::HCProgram* p,
                                                                const std::string& fn) {
  std::vector<const analysis::HeaderRecurrence*> out;
  for (const auto& h : a.headers) {
    if (h.solution)
      continue;
    const hcir::PredSig* sig = p ? p->find_pred(h.pred) : nullptr;
    if (!p || (sig && sig->function == fn))
      out.push_back(&h);
  }
  return out;
}

std::string render(const analysis::Analysis& a, const hcir::HCProgram* p, Format format) {
  std::string out;
  if (format == Format::Csv) {
    out += "function,params,energy_nj,status,reason\n";
    for (const auto& f : a.functions) {
      out += csv_field(f.function) + "," + csv_field(join(f.params, ";")) + ",";
      if (f.cost)
        out += csv_field(f.cost->to_string()) + ",ok,\n";
      else
        out += ",N/A," + csv_field(f.reason) + "\n";
    }
    return out;
  }
  for (const auto& f : a.functions) {
    out += f.function + "(" + join(f.params, ", ") + ") = ";
    if (f.cost) {
      out += f.cost->to_string() + "\n";
      continue;
    }
    out += "N/A\n  reason: " + f.reason + "\n";
    for (const auto* h : unsolved_headers(a, p, f.function)) {
      std::string text;
      if (h->recurrence) {
        out += "  unsolved recurrence of " + h->pred + ":\n";
        text = h->recurrence->to_string();
      } else {
        out += "  unsolved equations of " + h->pred + ":\n";
        const auto& graph = a.system.graph;
        for (const auto& member : graph.sccs[graph.scc_of.at(h->pred)])
          text += analysis::print_equations(a.system, member);
      }
      for (const auto& line : lines_of(text))
        out += "    " + line + "\n";
    }
  }
  return out;
}

} // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("io", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AnalyzeResult analyze_source(std::string_view program_text, std::string_view model_text,
                             const AnalyzeOptions& opts) {
  AnalyzeResult r;
  ir::Module m = ir::parse_module(program_text);
  r.trace.push_back("parse: " + std::to_string(m.functions.size()) + " functions, " +
                    std::to_string(m.declarations.size()) + " declarations");
  ir::require_valid(m);
  r.trace.push_back("validate: ok");
  r.program = hcir::translate_module(m);
  r.trace.push_back("translate: " + std::to_string(r.program.clauses.size()) + " clauses, " +
                    std::to_string(r.program.preds.size()) + " predicates");
  energy::EnergyModel model = energy::load_cost_model(model_text);
  energy::emit_trust_assertions(model, r.program);
  r.trace.push_back("model: " + std::to_string(model.opcode_costs.size()) + " opcode costs, " +
                    std::to_string(model.block_costs.size()) + " block overrides, " +
                    std::to_string(r.program.assertions.size()) + " assertions");
  energy::CostMap costs = energy::aggregate_block_costs(model, r.program);
  r.analysis = analysis::analyze(r.program, costs);
  std::size_t solved = 0;
  for (const auto& h : r.analysis.headers)
    solved += h.solution.has_value();
  r.trace.push_back("solve: " + std::to_string(r.analysis.headers.size()) + " recurrences, " +
                    std::to_string(solved) + " solved");

  if (opts.dump_hcir)
    r.output += hcir::print_hcir(r.program, {.directives = true, .origins = true}) + "\n";
  if (opts.dump_recurrences)
    r.output += analysis::dump_recurrences(r.analysis) + "\n";
  r.output += render(r.analysis, &r.program, opts.format);
  for (const auto& f : r.analysis.functions)
    if (!f.cost)
      r.exit_code = 2;
  return r;
}

AnalyzeResult analyze_files(const std::string& program_path, const std::string& model_path,
                            const AnalyzeOptions& opts) {
  return analyze_source(read_file(program_path), read_file(model_path), opts);
}

std::string render_report(const analysis::Analysis& a, Format format) {
  return render(a, nullptr, format);
}

recsolve::ClosedForm ingest_closed_form(std::string_view text) {
  return recsolve::canonicalize(recsolve::parse_closed_form(text));
}

FunctionTable load_functions(std::string_view text) {
  FunctionTable table;
  auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    Location loc{static_cast<int>(i + 1), 0};
    std::string line = lines[i];
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    if (trim(line).empty() || line.starts_with(" ") || line.starts_with("\t"))
      continue;  // blank, comment, or the indented detail of a report
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("functions", "expected `name = closed form`", loc);
    std::string name = trim(std::string_view(line).substr(0, eq));
    if (auto paren = name.find('('); paren != std::string::npos)
      name = trim(std::string_view(name).substr(0, paren));
    if (!is_identifier(name))
      throw Error("functions", "bad benchmark name `" + name + "`", loc);
    if (table.count(name))
      throw Error("functions", "duplicate benchmark " + name, loc);
    std::string body = trim(std::string_view(line).substr(eq + 1));
    if (body == "N/A") {
      table[name] = std::nullopt;
      continue;
    }
    try {
      table[name] = ingest_closed_form(body);
    } catch (const Error& e) {
      throw Error("functions", name + ": " + e.detail(), loc);
    }
  }
  return table;
}

std::vector<MeasurementRow> parse_measurements(std::string_view text) {
  auto lines = lines_of(text);
  if (lines.empty() || trim(lines[0]) != "benchmark,sizes,hw_nj")
    throw Error("measurements", "expected header `benchmark,sizes,hw_nj`", {1, 0});
  std::vector<MeasurementRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    Location loc{static_cast<int>(i + 1), 0};
    if (trim(lines[i]).empty())
      continue;
    auto fields = split(lines[i], ',');
    if (fields.size() != 3)
      throw Error("measurements", "expected 3 fields", loc);
    MeasurementRow row;
    row.benchmark = trim(fields[0]);
    row.sizes_text = trim(fields[1]);
    if (row.benchmark.empty())
      throw Error("measurements", "empty benchmark name", loc);
    for (const auto& binding : split(row.sizes_text, ';')) {
      auto eq = binding.find('=');
      if (eq == std::string::npos)
        throw Error("measurements", "size `" + binding + "` is not `VAR=value`", loc);
      std::string var = trim(std::string_view(binding).substr(0, eq));
      std::string value = trim(std::string_view(binding).substr(eq + 1));
      if (!is_identifier(var) || row.sizes.count(var))
        throw Error("measurements", "bad size variable `" + var + "`", loc);
      if (value.empty() || !std::all_of(value.begin(), value.end(), ::isdigit))
        throw Error("measurements", "size " + var + " is not a nonnegative integer", loc);
      row.sizes[var] = parse_rational(value);
    }
    try {
      row.hw = parse_rational(trim(fields[2]));
    } catch (const Error& e) {
      throw Error("measurements", e.detail(), loc);
    }
    if (row.hw <= 0)
      throw Error("measurements", "energy must be positive", loc);
    rows.push_back(std::move(row));
  }
  return rows;
}

Comparison compare(const FunctionTable& functions, const std::vector<MeasurementRow>& rows) {
  Comparison c;
  std::vector<std::string> order;
  std::map<std::string, std::pair<Rational, long>> sums;
  Rational total = 0;
  for (const auto& m : rows) {
    auto it = functions.find(m.benchmark);
    if (it == functions.end())
      throw Error("compare", "no closed form for benchmark " + m.benchmark);
    if (!it->second)
      throw Error("compare", "benchmark " + m.benchmark + " has no estimate (N/A)");
    for (const auto& v : it->second->variables())
      if (!m.sizes.count(v))
        throw Error("compare", m.benchmark + " " + m.sizes_text + ": size " + v + " is unbound");
    ComparisonRow row;
    row.measurement = m;
    row.unrounded = it->second->evaluate(m.sizes);
    row.estimated = round_half_away(row.unrounded);
    row.err = (row.unrounded - m.hw) / m.hw * 100;
    row.err_printed = Rational(round_half_away(row.err * 10), 10);
    if (!sums.count(m.benchmark))
      order.push_back(m.benchmark);
    auto& [sum, count] = sums[m.benchmark];
    sum += abs(row.err);
    ++count;
    total += abs(row.err);
    c.rows.push_back(std::move(row));
  }
  for (const auto& b : order)
    c.averages.emplace_back(b, sums[b].first / sums[b].second);
  c.overall = rows.empty() ? Rational(0) : total / Rational(static_cast<long>(rows.size()));
  return c;
}

std::string format_err(const Rational& err) {
  std::string body = format_fixed(abs(err), 1);
  if (err < 0)
    return "-" + body;
  return err > 0 && body != "0.0" ? "+" + body : body;
}

std::string render_comparison(const Comparison& c, Format format) {
  std::ostringstream out;
  if (format == Format::Csv) {
    out << "benchmark,sizes,hw_nj,estimated_nj,unrounded_nj,err_pct\n";
    for (const auto& r : c.rows)
      out << r.measurement.benchmark << "," << r.measurement.sizes_text << ","
          << format_exact(r.measurement.hw) << "," << r.estimated.get_str() << ","
          << format_fixed(r.unrounded, 2) << "," << format_err(r.err) << "\n";
    out << "\nbenchmark,avg_abs_err_pct\n";
    for (const auto& [b, avg] : c.averages)
      out << b << "," << format_fixed(avg, 1) << "\n";
    out << "overall," << format_fixed(c.overall, 1) << "\n";
    return out.str();
  }
  std::vector<std::vector<std::string>> table = {
      {"benchmark", "sizes", "HW (nJ)", "Estimated", "Unrounded", "Err (%)"}};
  for (const auto& r : c.rows)
    table.push_back({r.measurement.benchmark, r.measurement.sizes_text,
                     format_exact(r.measurement.hw), r.estimated.get_str(),
                     format_fixed(r.unrounded, 2), format_err(r.err)});
  std::vector<std::size_t> width(table[0].size(), 0);
  for (const auto& row : table)
    for (std::size_t i = 0; i < row.size(); ++i)
      width[i] = std::max(width[i], row[i].size());
  for (const auto& row : table) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::string pad(width[i] - row[i].size(), ' ');
      // Names left aligned, numbers right aligned.
      line += i < 2 ? row[i] + pad : pad + row[i];
      if (i + 1 < row.size())
        line += "  ";
    }
    out << trim(line) << "\n";
  }
  out << "\naverage |Err| (%)\n";
  std::vector<std::pair<std::string, std::string>> avg_rows;
  for (const auto& [b, avg] : c.averages)
    avg_rows.emplace_back(b, format_fixed(avg, 1));
  avg_rows.emplace_back("overall", format_fixed(c.overall, 1));
  std::size_t name_width = 0, value_width = 0;
  for (const auto& [b, v] : avg_rows) {
    name_width = std::max(name_width, b.size());
    value_width = std::max(value_width, v.size());
  }
  for (const auto& [b, v] : avg_rows)
    out << "  " << b << std::string(name_width - b.size() + 2 + value_width - v.size(), ' ') << v
        << "\n";
  return out.str();
}

} // namespace irenergy::driver
