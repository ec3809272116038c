#include "morkit/serialize.hpp"

#include <fstream>

#include "morkit/models.hpp"

namespace morkit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json matrix_to_json(const DenseMatrixC& a) {
  json cols = json::array();
  for (Index j = 0; j < a.cols(); ++j) {
    json col = json::array();
    for (Index i = 0; i < a.rows(); ++i) col.push_back(complex_to_json(a(i, j)));
    cols.push_back(col);
  }
  return cols;
}

DenseMatrixC matrix_from_json(const json& j, Index rows) {
  DenseMatrixC a(rows, static_cast<Index>(j.size()));
  for (Index c = 0; c < a.cols(); ++c) {
    const json& col = j.at(static_cast<std::size_t>(c));
    if (static_cast<Index>(col.size()) != rows) {
      throw Error(ErrorCode::ParseError, "direction column has the wrong length");
    }
    for (Index i = 0; i < rows; ++i) a(i, c) = complex_from_json(col.at(static_cast<std::size_t>(i)));
  }
  return a;
}

json complex_list(const std::vector<Complex>& v) {
  json out = json::array();
  for (const Complex z : v) out.push_back(complex_to_json(z));
  return out;
}

std::vector<Complex> complex_list_from(const json& j) {
  std::vector<Complex> out;
  for (const auto& z : j) out.push_back(complex_from_json(z));
  return out;
}

template <class F>
auto parse_guard(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, what + ": " + e.what());
  }
}

void write_rom(const fs::path& dir, const std::string& prefix, const ReducedSecondOrderSystem& rom) {
  write_matrix_market(dir / (prefix + "_M.mtx"), rom.M);
  write_matrix_market(dir / (prefix + "_D.mtx"), rom.D);
  write_matrix_market(dir / (prefix + "_K.mtx"), rom.K);
  write_matrix_market(dir / (prefix + "_H.mtx"), rom.H);
  write_matrix_market(dir / (prefix + "_L.mtx"), rom.L);
}

ReducedSecondOrderSystem read_rom(const fs::path& dir, const std::string& prefix, Level level) {
  ReducedSecondOrderSystem rom;
  rom.level = level;
  rom.M = load_dense_matrix(dir / (prefix + "_M.mtx"));
  rom.D = load_dense_matrix(dir / (prefix + "_D.mtx"));
  rom.K = load_dense_matrix(dir / (prefix + "_K.mtx"));
  rom.H = load_dense_matrix(dir / (prefix + "_H.mtx"));
  rom.L = load_dense_matrix(dir / (prefix + "_L.mtx"));
  rom.validate();
  return rom;
}

}  // namespace

json complex_to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from_json(const json& j) {
  return parse_guard("complex value", [&] { return Complex(j.at("re").get<double>(), j.at("im").get<double>()); });
}

json to_json(const ShiftSet& s) {
  return {{"shifts", complex_list(s.shifts)},
          {"left_shifts", complex_list(s.left_shifts)},
          {"right_directions", matrix_to_json(s.right_dirs)},
          {"left_directions", matrix_to_json(s.left_dirs)}};
}

ShiftSet shift_set_from_json(const json& j) {
  return parse_guard("shift set", [&] {
    ShiftSet s;
    s.shifts = complex_list_from(j.at("shifts"));
    s.left_shifts = complex_list_from(j.at("left_shifts"));
    const json& rd = j.at("right_directions");
    const json& ld = j.at("left_directions");
    const Index p = rd.empty() ? 0 : static_cast<Index>(rd.at(0).size());
    const Index m = ld.empty() ? 0 : static_cast<Index>(ld.at(0).size());
    s.right_dirs = matrix_from_json(rd, p);
    s.left_dirs = matrix_from_json(ld, m);
    return s;
  });
}

json to_json(const IrkaReport& r) {
  json history = json::array();
  for (const auto& shifts : r.shift_history) history.push_back(complex_list(shifts));
  return {{"iterations", r.iterations},         {"converged", r.converged},
          {"shift_changes", r.shift_changes},   {"shift_history", history},
          {"final_shifts", to_json(r.final_shifts)}, {"warnings", r.warnings}};
}

IrkaReport irka_report_from_json(const json& j) {
  return parse_guard("IRKA report", [&] {
    IrkaReport r;
    r.iterations = j.at("iterations").get<int>();
    r.converged = j.at("converged").get<bool>();
    for (const auto& shifts : j.at("shift_history")) r.shift_history.push_back(complex_list_from(shifts));
    if (j.contains("shift_changes")) r.shift_changes = j["shift_changes"].get<std::vector<double>>();
    if (j.contains("final_shifts")) r.final_shifts = shift_set_from_json(j["final_shifts"]);
    if (j.contains("warnings")) r.warnings = j["warnings"].get<std::vector<std::string>>();
    return r;
  });
}

json to_json(const NormReport& r) {
  return {{"h2_full", r.h2_full},       {"h2_rom", r.h2_rom},       {"h2_error_P", r.h2_error_P},
          {"h2_error_Q", r.h2_error_Q}, {"residuals", r.residuals}};
}

NormReport norm_report_from_json(const json& j) {
  return parse_guard("norm report", [&] {
    NormReport r;
    r.h2_full = j.at("h2_full").get<double>();
    r.h2_rom = j.at("h2_rom").get<double>();
    r.h2_error_P = j.at("h2_error_P").get<double>();
    r.h2_error_Q = j.at("h2_error_Q").get<double>();
    r.residuals = j.at("residuals").get<ResidualMap>();
    return r;
  });
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void write_spmor_result(const fs::path& dir, const SpmorResult& result) {
  fs::create_directories(dir);
  write_rom(dir, "pos", result.position_rom);
  write_rom(dir, "vel", result.velocity_rom);
  write_text_file(dir / "report.json", to_json(result.report).dump(2) + "\n");
}

SpmorResult read_spmor_result(const fs::path& dir) {
  SpmorResult result;
  result.position_rom = read_rom(dir, "pos", Level::Position);
  result.velocity_rom = read_rom(dir, "vel", Level::Velocity);
  std::ifstream in(dir / "report.json");
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + (dir / "report.json").string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, (dir / "report.json").string() + ": " + e.what());
  }
  result.report = irka_report_from_json(j);
  return result;
}

}  // namespace morkit
