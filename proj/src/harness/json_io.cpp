#include "bgerbe/json_io.hpp"

#include "bgerbe/error.hpp"

namespace bgerbe::json_io {

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  fail(ErrorKind::Schema, path + ": " + what);
}

const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) schema(path + "." + key, "missing");
  return *it;
}

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  return j.get<double>();
}

std::vector<std::vector<double>> read_rows(const json& j, const std::string& path, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) schema(path, "expected " + std::to_string(n) + " rows");
  std::vector<std::vector<double>> rows;
  for (int r = 0; r < n; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != n) schema(rp, "expected " + std::to_string(n) + " entries");
    std::vector<double> vals;
    for (int c = 0; c < n; ++c) vals.push_back(read_number(row[static_cast<std::size_t>(c)], rp + "[" + std::to_string(c) + "]"));
    rows.push_back(std::move(vals));
  }
  return rows;
}

}  // namespace

Mat read_matrix(const json& j, const std::string& path) {
  const auto& d = member(j, "dim", path);
  if (!d.is_number_integer() || d.get<int>() < 1) schema(path + ".dim", "expected a positive integer");
  const int n = d.get<int>();
  const auto re = read_rows(member(j, "re", path), path + ".re", n);
  std::vector<std::vector<double>> im(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  if (j.contains("im")) im = read_rows(j["im"], path + ".im", n);
  Mat m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      m(r, c) = cplx(re[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                     im[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    }
  }
  return m;
}

json write_matrix(const Mat& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array();
    json ii = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"dim", m.rows()}, {"re", re}, {"im", im}};
}

cplx read_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) schema(path, "expected [re, im]");
  return {read_number(j[0], path + "[0]"), read_number(j[1], path + "[1]")};
}

json write_complex(cplx v) { return json::array({v.real(), v.imag()}); }

CutPoint read_cut(const json& j, const std::string& path) {
  try {
    if (j.is_number()) return CutPoint::from_angle(j.get<double>());
    return CutPoint(read_complex(j, path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Schema) throw;
    schema(path, e.what());
  }
}

json write_contour(const Contour& c) {
  json segs = json::array();
  for (const auto& s : c.segments) {
    if (s.is_arc()) {
      const auto& a = s.arc();
      segs.push_back({{"kind", "arc"}, {"radius", a.radius}, {"theta_begin", a.theta_begin}, {"theta_end", a.theta_end}});
    } else {
      const auto& l = s.line();
      segs.push_back({{"kind", "line"}, {"begin", write_complex(l.begin)}, {"end", write_complex(l.end)}});
    }
  }
  return {{"segments", segs}};
}

FlagTorusInput read_flag_torus(const json& j, const std::string& path) {
  FlagTorusInput in;
  const auto& lam = member(j, "lambda", path);
  const auto& proj = member(j, "projections", path);
  if (!lam.is_array() || !proj.is_array() || lam.size() != proj.size() || lam.empty()) {
    schema(path, "lambda and projections must be non-empty arrays of equal length");
  }
  for (std::size_t i = 0; i < lam.size(); ++i) {
    in.point.lambda.push_back(read_complex(lam[i], path + ".lambda[" + std::to_string(i) + "]"));
    in.point.projections.push_back(read_matrix(proj[i], path + ".projections[" + std::to_string(i) + "]"));
  }
  const json empty = json::array();
  const auto& dl = j.contains("dlambda") ? j["dlambda"] : empty;
  const auto& dp = j.contains("dP") ? j["dP"] : empty;
  if (!dl.is_array() || !dp.is_array() || dl.size() != dp.size()) {
    schema(path, "dlambda and dP must list the same number of tangents");
  }
  for (std::size_t t = 0; t < dl.size(); ++t) {
    const std::string tp = "[" + std::to_string(t) + "]";
    if (!dl[t].is_array() || dl[t].size() != lam.size()) schema(path + ".dlambda" + tp, "one increment per value");
    if (!dp[t].is_array() || dp[t].size() != lam.size()) schema(path + ".dP" + tp, "one increment per projection");
    FlagTangent tan;
    for (std::size_t i = 0; i < lam.size(); ++i) {
      const std::string ip = "[" + std::to_string(i) + "]";
      tan.dlambda.push_back(read_complex(dl[t][i], path + ".dlambda" + tp + ip));
      tan.dP.push_back(read_matrix(dp[t][i], path + ".dP" + tp + ip));
    }
    in.tangents.push_back(std::move(tan));
  }
  return in;
}

}  // namespace bgerbe::json_io
