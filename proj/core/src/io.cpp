#include "convexnn/io.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace convexnn {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write '" + path + "'");
  out << text;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw io_error("bad number '" + s + "' in " + where);
  return v;
}

}  // namespace

Dataset read_dataset_csv(const std::string& path, double R, double q) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw io_error("empty dataset file '" + path + "'");
  auto header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "y")
    throw io_error("dataset header must be x1,...,xd,y in '" + path + "'");
  const size_t d = header.size() - 1;
  std::vector<std::vector<double>> rows;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != d + 1)
      throw io_error(path + ":" + std::to_string(lineno) + ": expected " +
                     std::to_string(d + 1) + " columns");
    std::vector<double> row(d + 1);
    for (size_t c = 0; c <= d; ++c)
      row[c] = parse_double(cells[c], path + ":" + std::to_string(lineno));
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd xs(Eigen::Index(rows.size()), Eigen::Index(d));
  Eigen::VectorXd ys(Eigen::Index(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t c = 0; c < d; ++c) xs(Eigen::Index(i), Eigen::Index(c)) = rows[i][c];
    ys[Eigen::Index(i)] = rows[i][d];
  }
  return Dataset(std::move(xs), std::move(ys), R, q);
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  std::ostringstream out;
  for (Eigen::Index c = 0; c < data.d(); ++c) out << "x" << (c + 1) << ",";
  out << "y\n";
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index c = 0; c < data.d(); ++c) out << format_double(data.xs(i, c)) << ",";
    out << format_double(data.ys[i]) << "\n";
  }
  write_file(path, out.str());
}

Eigen::VectorXd read_vector_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  std::vector<double> vals;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first) {
      first = false;
      double v = 0;
      auto res = std::from_chars(line.data(), line.data() + line.size(), v);
      if (res.ec != std::errc() || res.ptr != line.data() + line.size()) continue;  // header
      vals.push_back(v);
      continue;
    }
    vals.push_back(parse_double(line, path));
  }
  Eigen::VectorXd out(Eigen::Index(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) out[Eigen::Index(i)] = vals[i];
  return out;
}

void write_vector_csv(const std::string& path, const Eigen::VectorXd& v,
                      const std::string& header) {
  std::ostringstream out;
  out << header << "\n";
  for (Eigen::Index i = 0; i < v.size(); ++i) out << format_double(v[i]) << "\n";
  write_file(path, out.str());
}

std::string model_to_json(const SignedMeasureModel& model) {
  json j;
  j["version"] = 1;
  j["alpha"] = model.alpha;
  j["p"] = model.p;
  j["R"] = model.R;
  j["units"] = json::array();
  for (const auto& wu : model.units) {
    json u;
    u["eta"] = wu.eta;
    u["v"] = std::vector<double>(wu.unit.v.data(), wu.unit.v.data() + wu.unit.v.size());
    j["units"].push_back(std::move(u));
  }
  return j.dump(2);
}

SignedMeasureModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw io_error(std::string("model JSON parse error: ") + e.what());
  }
  if (j.contains("version") && j["version"].get<int>() != 1)
    throw io_error("unsupported model version " + j["version"].dump());
  for (const char* key : {"alpha", "p", "R", "units"})
    if (!j.contains(key)) throw io_error(std::string("model JSON missing field '") + key + "'");
  SignedMeasureModel model;
  model.alpha = j["alpha"].get<int>();
  model.p = j["p"].get<double>();
  model.R = j["R"].get<double>();
  for (const auto& u : j["units"]) {
    if (!u.contains("eta") || !u.contains("v"))
      throw io_error("model JSON unit missing 'eta' or 'v'");
    auto vv = u["v"].get<std::vector<double>>();
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(vv.data(), Eigen::Index(vv.size()));
    model.units.push_back({u["eta"].get<double>(), Unit(v, model.p)});
  }
  return model;
}

void save_model(const std::string& path, const SignedMeasureModel& model) {
  write_file(path, model_to_json(model) + "\n");
}

SignedMeasureModel load_model(const std::string& path) {
  return model_from_json(read_file(path));
}

namespace {

Eigen::MatrixXd matrix_from_json(const json& j) {
  auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.empty()) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd M(Eigen::Index(rows.size()), Eigen::Index(rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw io_error("ragged matrix in JSON");
    for (size_t c = 0; c < rows[i].size(); ++c)
      M(Eigen::Index(i), Eigen::Index(c)) = rows[i][c];
  }
  return M;
}

json matrix_to_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Zonotope zonotope_from_json(const std::string& text) {
  json j = json::parse(text);
  if (!j.contains("generators")) throw io_error("zonotope JSON missing 'generators'");
  return Zonotope{matrix_from_json(j["generators"])};
}

Ellipsoid ellipsoid_from_json(const std::string& text) {
  json j = json::parse(text);
  if (!j.contains("center") || !j.contains("shape"))
    throw io_error("ellipsoid JSON missing 'center' or 'shape'");
  auto c = j["center"].get<std::vector<double>>();
  Ellipsoid E;
  E.center = Eigen::Map<Eigen::VectorXd>(c.data(), Eigen::Index(c.size()));
  E.shape = matrix_from_json(j["shape"]);
  return E;
}

std::string zonotope_to_json(const Zonotope& Z) {
  json j;
  j["generators"] = matrix_to_json(Z.generators);
  return j.dump(2);
}

std::string ellipsoid_to_json(const Ellipsoid& E) {
  json j;
  j["center"] = std::vector<double>(E.center.data(), E.center.data() + E.center.size());
  j["shape"] = matrix_to_json(E.shape);
  return j.dump(2);
}

bool json_is_ellipsoid(const std::string& text) {
  json j = json::parse(text);
  return j.contains("center");
}

void write_trace_csv(const std::string& path, const TrainTrace& trace,
                     bool with_timestamp) {
  std::ostringstream out;
  if (with_timestamp) {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&now));
    out << "# generated " << buf << "\n";
  }
  Eigen::Index D = trace.rows.empty() ? 0 : trace.rows.front().v.size();
  out << "t,risk,gap,rho,weight,sign";
  for (Eigen::Index c = 0; c < D; ++c) out << ",v" << (c + 1);
  out << "\n";
  for (const auto& r : trace.rows) {
    out << r.t << "," << format_double(r.risk) << "," << format_double(r.gap) << ","
        << format_double(r.rho) << "," << format_double(r.weight) << "," << r.sign;
    for (Eigen::Index c = 0; c < r.v.size(); ++c) out << "," << format_double(r.v[c]);
    out << "\n";
  }
  write_file(path, out.str());
}

}  // namespace convexnn
