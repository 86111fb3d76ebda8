#pragma once

// Analytic curves as CSV: one statistic evaluated over a sweep of one
// parameter (optionally for several values of a second "series" parameter).
//
// Header: <sweep_var>,<statistic>,<remaining parameters...>
// Values use the shortest decimal form that round-trips to the same double;
// undefined values are written as NA. Lines end with LF.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "multipool/analytics.hpp"

namespace multipool::curves {

enum class Statistic { Sens, Spec, TypeI, TypeII, ET, ETfp, ETfn, VarTBound, VarTfpBound };
enum class Parameter { Rho, Q, M, Nc, Pfp, Pfn, N };

std::string_view name(Statistic s) noexcept;
std::string_view name(Parameter p) noexcept;
std::optional<Statistic> parse_statistic(std::string_view s) noexcept;
std::optional<Parameter> parse_parameter(std::string_view s) noexcept;

/// "start:stop:step" (inclusive) or "v1,v2,...". Throws DomainError.
std::vector<double> parse_grid(std::string_view spec);

struct CurveRequest {
  Statistic statistic = Statistic::Sens;
  Parameter sweep = Parameter::Rho;
  std::vector<double> grid;
  std::optional<Parameter> series;
  std::vector<double> series_values;
  /// Fixed parameters. When n == 0 each point uses n = q^2.
  analytics::Scenario base;
};

struct CurveTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;
  friend bool operator==(const CurveTable&, const CurveTable&) = default;
};

/// Evaluate the request. Throws DomainError for invalid grid points and
/// NotApplicable for variance bounds outside noiseless COMP.
CurveTable evaluate(const CurveRequest& request);

std::optional<double> statistic_value(Statistic stat, const analytics::Scenario& s);

std::string format_number(double v);
std::string to_csv(const CurveTable& table);
/// Throws ParseError with line/column on malformed input.
CurveTable from_csv(std::string_view text);

}  // namespace multipool::curves
