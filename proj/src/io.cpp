#include "cpskit/io.hpp"

#include <cstdio>
#include <sstream>

namespace cpskit::io {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
          ErrorCode::Io, "expected a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json state_to_json(const CpsState& state) {
  Json coeffs = Json::array();
  for (Eigen::Index q = 0; q < state.coeffs.size(); ++q) {
    coeffs.push_back(complex_to_json(state.coeffs(q)));
  }
  return Json{{"d", state.basis.dim()},
              {"n0", state.basis.n0()},
              {"alpha", complex_to_json(state.basis.alpha())},
              {"coeffs", coeffs},
              {"convention",
               state.convention == Convention::Normalized ? "normalized" : "unnormalized"}};
}

CpsState state_from_json(const Json& j) {
  try {
    const CpsBasis basis(j.at("d").get<int>(), j.value("n0", 0),
                         complex_from_json(j.at("alpha")));
    const Json& c = j.at("coeffs");
    require(c.is_array() && static_cast<int>(c.size()) == basis.dim(), ErrorCode::Io,
            "state: coeffs length must equal d");
    CVector coeffs(basis.dim());
    for (int q = 0; q < basis.dim(); ++q) coeffs(q) = complex_from_json(c[static_cast<std::size_t>(q)]);
    const std::string conv = j.value("convention", std::string("normalized"));
    require(conv == "normalized" || conv == "unnormalized", ErrorCode::Io,
            "state: unknown convention '" + conv + "'");
    return {basis, coeffs,
            conv == "normalized" ? Convention::Normalized : Convention::Unnormalized};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, std::string("state: ") + e.what());
  }
}

namespace {

Json split_parts(const CMatrix& m, bool imag) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(imag ? m(r, c).imag() : m(r, c).real());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

Json operator_to_json(const CpsOperatorMatrix& op) {
  return Json{{"label", op.label},
              {"d", op.basis.dim()},
              {"n0", op.basis.n0()},
              {"alpha", complex_to_json(op.basis.alpha())},
              {"re", split_parts(op.entries, false)},
              {"im", split_parts(op.entries, true)}};
}

std::string operator_to_csv(const CpsOperatorMatrix& op) {
  std::ostringstream out;
  out << "# label=" << op.label << " d=" << op.basis.dim() << " n0=" << op.basis.n0() << '\n';
  for (Eigen::Index r = 0; r < op.entries.rows(); ++r) {
    for (Eigen::Index c = 0; c < op.entries.cols(); ++c) {
      if (c > 0) out << ',';
      out << format_double(op.entries(r, c).real()) << ',' << format_double(op.entries(r, c).imag());
    }
    out << '\n';
  }
  return out.str();
}

CMatrix unitary_from_json(const Json& j) {
  try {
    const int m = j.at("m").get<int>();
    require(m >= 1, ErrorCode::Io, "unitary: m must be >= 1");
    const Json& re = j.at("re");
    const Json& im = j.contains("im") ? j.at("im") : Json();
    require(re.is_array() && static_cast<int>(re.size()) == m, ErrorCode::Io,
            "unitary: 're' must have m rows");
    require(im.is_null() || (im.is_array() && static_cast<int>(im.size()) == m), ErrorCode::Io,
            "unitary: 'im' must have m rows");
    CMatrix u(m, m);
    for (int r = 0; r < m; ++r) {
      const auto ur = static_cast<std::size_t>(r);
      require(re[ur].is_array() && static_cast<int>(re[ur].size()) == m, ErrorCode::Io,
              "unitary: rows must have m entries");
      require(im.is_null() || static_cast<int>(im[ur].size()) == m, ErrorCode::Io,
              "unitary: rows must have m entries");
      for (int c = 0; c < m; ++c) {
        const auto uc = static_cast<std::size_t>(c);
        u(r, c) = {re[ur][uc].get<double>(), im.is_null() ? 0.0 : im[ur][uc].get<double>()};
      }
    }
    return u;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, std::string("unitary: ") + e.what());
  }
}

Json unitary_to_json(const CMatrix& u) {
  return Json{{"m", u.rows()}, {"re", split_parts(u, false)}, {"im", split_parts(u, true)}};
}

Json boson_result_to_json(const BosonSamplingResult& r) {
  Json out{{"value", r.value}};
  out["stderr"] = r.stderr_value ? Json(*r.stderr_value) : Json(nullptr);
  out["method"] = method_name(r.method);
  out["samples"] = r.samples;
  out["seed"] = r.seed;
  return out;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace cpskit::io
