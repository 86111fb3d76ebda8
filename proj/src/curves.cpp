#include "multipool/curves.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <utility>

#include "multipool/errors.hpp"

namespace multipool::curves {

namespace {

constexpr std::array<std::pair<Statistic, std::string_view>, 9> kStatistics{{
    {Statistic::Sens, "sens"},
    {Statistic::Spec, "spec"},
    {Statistic::TypeI, "typeI"},
    {Statistic::TypeII, "typeII"},
    {Statistic::ET, "e_T"},
    {Statistic::ETfp, "e_Tfp"},
    {Statistic::ETfn, "e_Tfn"},
    {Statistic::VarTBound, "var_T_bound"},
    {Statistic::VarTfpBound, "var_Tfp_bound"},
}};

constexpr std::array<std::pair<Parameter, std::string_view>, 7> kParameters{{
    {Parameter::Rho, "rho"},
    {Parameter::Q, "q"},
    {Parameter::M, "m"},
    {Parameter::Nc, "nc"},
    {Parameter::Pfp, "pfp"},
    {Parameter::Pfn, "pfn"},
    {Parameter::N, "n"},
}};

std::uint32_t as_count(double v, Parameter p) {
  if (!(v >= 0.0) || v != std::floor(v) || v > std::numeric_limits<std::uint32_t>::max()) {
    throw DomainError(std::string(name(p)) + " must be a non-negative integer, got " + format_number(v));
  }
  return static_cast<std::uint32_t>(v);
}

void assign(analytics::Scenario& s, Parameter p, double v) {
  switch (p) {
    case Parameter::Rho:
      s.rho = v;
      break;
    case Parameter::Q:
      s.q = as_count(v, p);
      break;
    case Parameter::M:
      s.m = as_count(v, p);
      break;
    case Parameter::Nc:
      s.nc = as_count(v, p);
      break;
    case Parameter::Pfp:
      s.noise.p_fp = v;
      break;
    case Parameter::Pfn:
      s.noise.p_fn = v;
      break;
    case Parameter::N:
      s.n = as_count(v, p);
      break;
  }
}

double read(const analytics::Scenario& s, Parameter p) {
  switch (p) {
    case Parameter::Rho:
      return s.rho;
    case Parameter::Q:
      return s.q;
    case Parameter::M:
      return s.m;
    case Parameter::Nc:
      return s.nc;
    case Parameter::Pfp:
      return s.noise.p_fp;
    case Parameter::Pfn:
      return s.noise.p_fn;
    case Parameter::N:
      return static_cast<double>(s.n);
  }
  return 0.0;
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw DomainError("not a number: '" + std::string(text) + "'");
  return v;
}

}  // namespace

std::string_view name(Statistic s) noexcept {
  for (const auto& [k, v] : kStatistics) {
    if (k == s) return v;
  }
  return "?";
}

std::string_view name(Parameter p) noexcept {
  for (const auto& [k, v] : kParameters) {
    if (k == p) return v;
  }
  return "?";
}

std::optional<Statistic> parse_statistic(std::string_view s) noexcept {
  for (const auto& [k, v] : kStatistics) {
    if (v == s) return k;
  }
  return std::nullopt;
}

std::optional<Parameter> parse_parameter(std::string_view s) noexcept {
  for (const auto& [k, v] : kParameters) {
    if (v == s) return k;
  }
  return std::nullopt;
}

std::vector<double> parse_grid(std::string_view spec) {
  std::vector<double> grid;
  if (spec.find(':') != std::string_view::npos) {
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw DomainError("grid range must be start:stop:step");
    const double start = parse_double(spec.substr(0, c1));
    const double stop = parse_double(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = parse_double(spec.substr(c2 + 1));
    if (!(step > 0.0) || stop < start) throw DomainError("grid range needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
  } else {
    std::size_t start = 0;
    while (start <= spec.size()) {
      const auto comma = spec.find(',', start);
      const auto token = spec.substr(start, comma == std::string_view::npos ? spec.size() - start : comma - start);
      grid.push_back(parse_double(token));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  if (grid.empty()) throw DomainError("grid is empty");
  return grid;
}

std::optional<double> statistic_value(Statistic stat, const analytics::Scenario& s) {
  switch (stat) {
    case Statistic::Sens:
      return analytics::sensitivity(s);
    case Statistic::Spec:
      return analytics::specificity(s);
    case Statistic::TypeI:
      return analytics::type_one(s);
    case Statistic::TypeII:
      return analytics::type_two(s);
    case Statistic::ET:
      return analytics::expected_counts(s).positives;
    case Statistic::ETfp:
      return analytics::expected_counts(s).false_positives;
    case Statistic::ETfn:
      return analytics::expected_counts(s).false_negatives;
    case Statistic::VarTBound:
      return analytics::variance_bounds(s).positives;
    case Statistic::VarTfpBound:
      return analytics::variance_bounds(s).false_positives;
  }
  return std::nullopt;
}

CurveTable evaluate(const CurveRequest& request) {
  if (request.grid.empty()) throw DomainError("sweep grid is empty");
  if (request.series && *request.series == request.sweep) {
    throw DomainError("series parameter must differ from the sweep parameter");
  }
  if (request.series && request.series_values.empty()) throw DomainError("series values are empty");
  const bool auto_n = request.base.n == 0 && request.sweep != Parameter::N && request.series != Parameter::N;

  CurveTable table;
  table.columns.emplace_back(name(request.sweep));
  table.columns.emplace_back(name(request.statistic));
  std::vector<Parameter> fixed;
  for (const auto& [p, pname] : kParameters) {
    if (p == request.sweep) continue;
    fixed.push_back(p);
    table.columns.emplace_back(pname);
  }

  const std::vector<double> series_values =
      request.series ? request.series_values : std::vector<double>{0.0};
  for (double sv : series_values) {
    for (double x : request.grid) {
      analytics::Scenario s = request.base;
      if (request.series) assign(s, *request.series, sv);
      assign(s, request.sweep, x);
      if (auto_n) s.n = std::size_t{s.q} * s.q;
      s.validate();
      std::vector<std::optional<double>> row;
      row.push_back(x);
      row.push_back(statistic_value(request.statistic, s));
      for (Parameter p : fixed) row.push_back(read(s, p));
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string to_csv(const CurveTable& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c != 0) out.push_back(',');
    out += table.columns[c];
  }
  out.push_back('\n');
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c != 0) out.push_back(',');
      out += row[c] ? format_number(*row[c]) : "NA";
    }
    out.push_back('\n');
  }
  return out;
}

CurveTable from_csv(std::string_view text) {
  CurveTable table;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? line.size() - start : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (line_no == 1) {
      for (auto f : fields) table.columns.emplace_back(f);
      continue;
    }
    if (fields.size() != table.columns.size()) {
      throw ParseError("expected " + std::to_string(table.columns.size()) + " fields", line_no, fields.size());
    }
    std::vector<std::optional<double>> row;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (fields[c] == "NA") {
        row.emplace_back(std::nullopt);
        continue;
      }
      try {
        row.emplace_back(parse_double(fields[c]));
      } catch (const DomainError&) {
        throw ParseError("not a number: '" + std::string(fields[c]) + "'", line_no, c + 1);
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (table.columns.empty()) throw ParseError("curve CSV is empty", 1, 1);
  return table;
}

}  // namespace multipool::curves
