#include "qtau/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qtau/errors.hpp"

namespace qtau {

namespace {

using nlohmann::json;

json matrix_to_flat(const ComplexMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

std::vector<double> require_number_array(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array())
    throw ParseError(std::string("state JSON: missing numeric array '") + key + "'");
  std::vector<double> out;
  out.reserve(j[key].size());
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw ParseError(std::string("state JSON: '") + key + "' holds a non-number");
    out.push_back(v.get<double>());
  }
  return out;
}

std::size_t require_dim(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 1)
    throw ParseError(std::string("JSON: missing positive integer '") + key + "'");
  return j[key].get<std::size_t>();
}

ComplexMatrix matrix_from_grids(const json& jk) {
  if (!jk.contains("re") || !jk["re"].is_array() || !jk.contains("im") || !jk["im"].is_array())
    throw ParseError("channel JSON: Kraus operator needs 're' and 'im' grids");
  const auto& re = jk["re"];
  const auto& im = jk["im"];
  const std::size_t rows = re.size();
  if (im.size() != rows) throw ParseError("channel JSON: re/im row counts differ");
  if (rows == 0) throw ParseError("channel JSON: empty Kraus operator");
  const std::size_t cols = re[0].size();
  std::vector<Complex> data;
  data.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!re[i].is_array() || !im[i].is_array() || re[i].size() != cols || im[i].size() != cols)
      throw ParseError("channel JSON: ragged Kraus grids");
    for (std::size_t j = 0; j < cols; ++j) {
      if (!re[i][j].is_number() || !im[i][j].is_number())
        throw ParseError("channel JSON: Kraus grids hold a non-number");
      data.emplace_back(re[i][j].get<double>(), im[i][j].get<double>());
    }
  }
  return ComplexMatrix::from_data(rows, cols, std::move(data));
}

}  // namespace

nlohmann::json to_json(const DensityMatrix& rho) {
  json j = matrix_to_flat(rho.matrix());
  j["d1"] = rho.dims().d1;
  j["d2"] = rho.dims().d2;
  return j;
}

nlohmann::json to_json(const PureState& psi) {
  json re = json::array();
  json im = json::array();
  for (Complex z : psi.amplitudes()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return json{{"d1", psi.dims().d1}, {"d2", psi.dims().d2}, {"re", std::move(re)},
              {"im", std::move(im)}};
}

LoadedState state_from_json(const nlohmann::json& j) {
  const std::size_t d1 = require_dim(j, "d1");
  const std::size_t d2 = require_dim(j, "d2");
  const std::vector<double> re = require_number_array(j, "re");
  const std::vector<double> im = require_number_array(j, "im");
  if (re.size() != im.size()) throw ParseError("state JSON: re/im lengths differ");
  const std::size_t n = d1 * d2;

  std::vector<Complex> data(re.size());
  for (std::size_t k = 0; k < re.size(); ++k) data[k] = Complex(re[k], im[k]);

  LoadedState out;
  if (re.size() == n) {
    out.pure = PureState::make(BipartiteDims{d1, d2}, std::move(data));
  } else if (re.size() == n * n) {
    out.density =
        DensityMatrix::make(BipartiteDims{d1, d2}, ComplexMatrix::from_data(n, n, std::move(data)));
  } else {
    throw ParseError("state JSON: entry count " + std::to_string(re.size()) +
                     " matches neither a vector (" + std::to_string(n) + ") nor a matrix (" +
                     std::to_string(n * n) + ")");
  }
  return out;
}

nlohmann::json to_json(const QuantumChannel& ch) {
  json kraus = json::array();
  for (const ComplexMatrix& k : ch.kraus()) {
    json re = json::array();
    json im = json::array();
    for (std::size_t i = 0; i < k.rows(); ++i) {
      json re_row = json::array();
      json im_row = json::array();
      for (std::size_t j = 0; j < k.cols(); ++j) {
        re_row.push_back(k(i, j).real());
        im_row.push_back(k(i, j).imag());
      }
      re.push_back(std::move(re_row));
      im.push_back(std::move(im_row));
    }
    kraus.push_back(json{{"re", std::move(re)}, {"im", std::move(im)}});
  }
  return json{{"dim", ch.dim()}, {"kraus", std::move(kraus)}};
}

QuantumChannel channel_from_json(const nlohmann::json& j) {
  if (j.contains("builtin")) {
    const std::string name = j["builtin"].get<std::string>();
    const std::size_t dim = require_dim(j, "dim");
    if (!j.contains("eps") || !j["eps"].is_number())
      throw ParseError("channel JSON: builtin shorthand needs a numeric 'eps'");
    const double eps = j["eps"].get<double>();
    if (name == "depolarizing") return depolarizing(dim, eps);
    if (name == "phase_damping") return phase_damping(dim, eps);
    throw ParseError("channel JSON: unknown builtin '" + name + "'");
  }
  const std::size_t dim = require_dim(j, "dim");
  if (!j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty())
    throw ParseError("channel JSON: missing nonempty 'kraus' array");
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(j["kraus"].size());
  for (const auto& jk : j["kraus"]) kraus.push_back(matrix_from_grids(jk));
  return QuantumChannel::make(dim, std::move(kraus));
}

nlohmann::json to_json(const TauBreakdown& breakdown) {
  json components = json::array();
  for (const ComponentValue& cv : breakdown.components) {
    components.push_back(json{{"p", cv.index.p},
                              {"r", cv.index.r},
                              {"pp", cv.index.pp},
                              {"rp", cv.index.rp},
                              {"c", cv.concurrence}});
  }
  return json{{"total", breakdown.total}, {"components", std::move(components)}};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "eps,tau,upper,lower,closed_form\n";
  for (const SweepRow& row : result.rows) {
    out << format_double(row.eps) << ',' << format_double(row.tau) << ',';
    if (row.upper) out << format_double(*row.upper);
    out << ',';
    if (row.lower) out << format_double(*row.lower);
    out << ',';
    if (row.closed_form) out << format_double(*row.closed_form);
    out << '\n';
  }
  return out.str();
}

nlohmann::json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError("cannot parse '" + path + "': " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace qtau
