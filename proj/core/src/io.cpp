#include "geninv/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <system_error>

#include "geninv/errors.hpp"

namespace geninv {

namespace {

void require_field(const Json& j, const char* name, const std::string& field) {
  if (!j.contains(name)) {
    throw ParseError("missing required field \"" + std::string(name) + "\" in " + field);
  }
}

Index positive_index(const Json& j, const char* name, const std::string& field) {
  require_field(j, name, field);
  if (!j[name].is_number_integer() || j[name].get<long long>() <= 0) {
    throw ParseError("field \"" + std::string(name) + "\" in " + field +
                     " must be a positive integer");
  }
  return static_cast<Index>(j[name].get<long long>());
}

}  // namespace

Json matrix_to_json(const Matrix& a) {
  Json j;
  j["rows"] = a.rows();
  j["cols"] = a.cols();
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(a.rows() * a.cols()));
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index k = 0; k < a.cols(); ++k) data.push_back(a(i, k));
  }
  j["data"] = data;
  return j;
}

Matrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_object()) throw ParseError(field + " must be a JSON object");
  const Index rows = positive_index(j, "rows", field);
  const Index cols = positive_index(j, "cols", field);
  require_field(j, "data", field);
  if (!j["data"].is_array()) throw ParseError("field \"data\" in " + field + " must be an array");
  const auto& data = j["data"];
  if (static_cast<Index>(data.size()) != rows * cols) {
    throw ParseError("field \"data\" in " + field + " has " + std::to_string(data.size()) +
                     " entries, expected " + std::to_string(rows * cols));
  }
  Matrix a(rows, cols);
  Index pos = 0;
  for (Index i = 0; i < rows; ++i) {
    for (Index k = 0; k < cols; ++k, ++pos) {
      if (!data[pos].is_number()) {
        throw ParseError("field \"data\" in " + field + " has a non-numeric entry");
      }
      a(i, k) = data[pos].get<double>();
    }
  }
  if (!a.allFinite()) throw ParseError(field + " contains non-finite entries");
  return a;
}

Json subspace_to_json(const Subspace& s) {
  Json j;
  j["ambient_dim"] = s.ambient_dim();
  j["basis"] = matrix_to_json(s.basis());
  return j;
}

Subspace subspace_from_json(const Json& j, const std::string& field) {
  if (!j.is_object()) throw ParseError(field + " must be a JSON object");
  const Index ambient = positive_index(j, "ambient_dim", field);
  require_field(j, "basis", field);
  const Matrix basis = matrix_from_json(j["basis"], field + ".basis");
  if (basis.rows() != ambient) {
    throw ParseError(field + ": basis row count does not match ambient_dim");
  }
  return Subspace::from_columns(basis);
}

Json condition_report_to_json(const ConditionReport& report) {
  Json j;
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    j[ConditionReport::label(i)] = {{"holds", report.entries[i].holds},
                                    {"residual", report.entries[i].residual}};
  }
  return j;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "t,rank,mp_error\n";
  for (const auto& row : rows) {
    os << format_double(row.t) << ',' << row.rank << ',' << format_double(row.mp_error)
       << '\n';
  }
}

void write_patch_csv(std::ostream& os, const IntegralPatch& patch) {
  const Index k = patch.frame.m0.dim();
  const Index e = patch.frame.e_star.dim();
  for (Index j = 0; j < k; ++j) os << 'v' << j << ',';
  for (Index j = 0; j < e; ++j) os << "psi" << j << (j + 1 < e ? "," : "");
  os << '\n';
  for (std::size_t i = 0; i < patch.grid.size(); ++i) {
    for (Index j = 0; j < k; ++j) os << format_double(patch.grid[i](j)) << ',';
    for (Index j = 0; j < e; ++j) {
      os << format_double(patch.psi_values[i](j)) << (j + 1 < e ? "," : "");
    }
    os << '\n';
  }
}

}  // namespace geninv
