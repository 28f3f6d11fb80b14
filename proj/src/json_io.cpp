#include "chabauty/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace chabauty {

namespace {

std::vector<Vec> rows_of(const Json& j, int n, const char* field) {
  std::vector<Vec> out;
  if (!j.contains(field)) return out;
  const Json& rows = j.at(field);
  if (!rows.is_array()) throw Error(ErrorCode::InvalidArgument, std::string(field) + " must be an array");
  for (const Json& r : rows) {
    if (!r.is_array()) throw Error(ErrorCode::InvalidArgument, std::string(field) + " rows must be arrays");
    if (static_cast<int>(r.size()) != n)
      throw Error(ErrorCode::DimensionMismatch, std::string(field) + " row of length " +
                                                    std::to_string(r.size()) + " in ambient dimension " +
                                                    std::to_string(n));
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = real_from_json(r[static_cast<std::size_t>(i)]);
    out.push_back(v);
  }
  return out;
}

void write(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        write(it.value(), out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        write(j[i], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += x > 0 ? "\"inf\"" : (x < 0 ? "\"-inf\"" : "\"nan\"");
        break;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", x == 0 ? 0.0 : x);
      out += buf;
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

Json real_to_json(double x) {
  if (std::isinf(x)) return x > 0 ? Json("inf") : Json("-inf");
  return Json(x);
}

double real_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw Error(ErrorCode::InvalidArgument, "expected a number, got " + j.dump());
}

Json vector_to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(real_to_json(v(i)));
  return a;
}

Json matrix_rows(const Mat& columns) {
  Json a = Json::array();
  for (Eigen::Index j = 0; j < columns.cols(); ++j) a.push_back(vector_to_json(columns.col(j)));
  return a;
}

Json to_json(const ClosedSubgroup& g) {
  Json j;
  j["ambient_dim"] = g.ambient_dim();
  j["continuous_basis"] = matrix_rows(g.continuous_basis());
  j["discrete_basis"] = matrix_rows(g.discrete_basis());
  return j;
}

ClosedSubgroup subgroup_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("ambient_dim") || !j.at("ambient_dim").is_number_integer())
    throw Error(ErrorCode::InvalidArgument, "subgroup needs an integer ambient_dim");
  const int n = j.at("ambient_dim").get<int>();
  if (n < 1) throw Error(ErrorCode::DimensionMismatch, "ambient_dim must be positive");
  return make_subgroup(n, rows_of(j, n, "continuous_basis"), rows_of(j, n, "discrete_basis"));
}

std::string dump(const Json& j) {
  std::string out;
  write(j, out);
  return out;
}

}  // namespace chabauty
