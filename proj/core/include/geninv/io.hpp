#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "geninv/frobenius.hpp"
#include "geninv/geninv.hpp"
#include "geninv/subspace.hpp"

namespace geninv {

using Json = nlohmann::json;

// Matrix wire format: {"rows": m, "cols": n, "data": [row-major numbers]}.
Json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const Json& j, const std::string& field = "matrix");

// Subspace wire format: {"ambient_dim": n, "basis": <Matrix>}.
Json subspace_to_json(const Subspace& s);
Subspace subspace_from_json(const Json& j, const std::string& field = "subspace");

// Keys "i".."vii", each {"holds": bool, "residual": number}.
Json condition_report_to_json(const ConditionReport& report);

/// Shortest round-trip decimal form; deterministic for a given value.
std::string format_double(double v);

/// Header `t,rank,mp_error`, one row per sweep step.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Header `v0,...,psi0,...`; one row per grid point.
void write_patch_csv(std::ostream& os, const IntegralPatch& patch);

}  // namespace geninv
