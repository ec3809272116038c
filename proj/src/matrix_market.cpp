#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include <json.hpp>

#include "morkit/errors.hpp"
#include "morkit/models.hpp"

namespace morkit {

namespace fs = std::filesystem;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void parse_fail(const std::string& source, long line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

template <class T>
bool parse_number(std::string_view tok, T& value) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

MatrixMarketData parse_matrix_market(std::istream& in, const std::string& source) {
  std::string line;
  long lineno = 0;
  if (!std::getline(in, line)) parse_fail(source, 1, "empty file");
  ++lineno;
  const auto header = split_ws(line);
  if (header.size() != 5 || lower(std::string(header[0])) != "%%matrixmarket" ||
      lower(std::string(header[1])) != "matrix") {
    parse_fail(source, lineno, "malformed header");
  }
  const std::string format = lower(std::string(header[2]));
  const std::string field = lower(std::string(header[3]));
  const std::string symmetry = lower(std::string(header[4]));
  if (format != "coordinate" && format != "array") parse_fail(source, lineno, "unknown format " + format);
  if (field != "real" && field != "integer" && field != "double") {
    parse_fail(source, lineno, "unsupported field " + field);
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    parse_fail(source, lineno, "unsupported symmetry " + symmetry);
  }
  const bool symmetric = symmetry == "symmetric";
  const bool coordinate = format == "coordinate";

  // Size line, after comments and blank lines.
  std::vector<std::string_view> tok;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    tok = split_ws(line);
    if (!tok.empty()) break;
  }
  if (tok.empty()) parse_fail(source, lineno, "missing size line");
  long long rows = 0, cols = 0, nnz = 0;
  if (tok.size() != (coordinate ? 3u : 2u) || !parse_number(tok[0], rows) || !parse_number(tok[1], cols) ||
      (coordinate && !parse_number(tok[2], nnz)) || rows < 0 || cols < 0 || nnz < 0) {
    parse_fail(source, lineno, "malformed size line");
  }
  if (symmetric && rows != cols) parse_fail(source, lineno, "symmetric matrix must be square");

  if (coordinate) {
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
    std::set<std::pair<long long, long long>> seen;
    long long count = 0;
    while (count < nnz && std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '%') continue;
      tok = split_ws(line);
      if (tok.empty()) continue;
      long long i = 0, j = 0;
      double v = 0.0;
      if (tok.size() != 3 || !parse_number(tok[0], i) || !parse_number(tok[1], j) ||
          !parse_number(tok[2], v)) {
        parse_fail(source, lineno, "malformed entry");
      }
      if (i < 1 || i > rows || j < 1 || j > cols) parse_fail(source, lineno, "index out of bounds");
      const auto key = symmetric ? std::make_pair(std::max(i, j), std::min(i, j)) : std::make_pair(i, j);
      if (!seen.insert(key).second) parse_fail(source, lineno, "duplicate entry");
      triplets.emplace_back(i - 1, j - 1, v);
      if (symmetric && i != j) triplets.emplace_back(j - 1, i - 1, v);
      ++count;
    }
    if (count < nnz) parse_fail(source, lineno, "expected " + std::to_string(nnz) + " entries, found " +
                                                     std::to_string(count));
    while (std::getline(in, line)) {
      ++lineno;
      if (!split_ws(line).empty() && line[0] != '%') parse_fail(source, lineno, "unexpected trailing data");
    }
    SparseMatrix a(static_cast<Index>(rows), static_cast<Index>(cols));
    a.setFromTriplets(triplets.begin(), triplets.end());
    a.makeCompressed();
    return a;
  }

  DenseMatrix a = DenseMatrix::Zero(static_cast<Index>(rows), static_cast<Index>(cols));
  std::vector<std::pair<Index, Index>> slots;
  for (Index j = 0; j < cols; ++j) {
    for (Index i = symmetric ? j : 0; i < rows; ++i) slots.emplace_back(i, j);
  }
  std::size_t k = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    tok = split_ws(line);
    for (const auto t : tok) {
      if (k >= slots.size()) parse_fail(source, lineno, "too many values");
      double v = 0.0;
      if (!parse_number(t, v)) parse_fail(source, lineno, "malformed value");
      const auto [i, j] = slots[k++];
      a(i, j) = v;
      if (symmetric) a(j, i) = v;
    }
  }
  if (k < slots.size()) {
    parse_fail(source, lineno, "expected " + std::to_string(slots.size()) + " values, found " +
                                   std::to_string(k));
  }
  return a;
}

MatrixMarketData load_matrix_market(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return parse_matrix_market(in, path.string());
}

SparseMatrix load_sparse_matrix(const fs::path& path) {
  MatrixMarketData data = load_matrix_market(path);
  if (auto* s = std::get_if<SparseMatrix>(&data)) return std::move(*s);
  return std::get<DenseMatrix>(data).sparseView(0.0, 0.0);
}

DenseMatrix load_dense_matrix(const fs::path& path) {
  MatrixMarketData data = load_matrix_market(path);
  if (auto* d = std::get_if<DenseMatrix>(&data)) return std::move(*d);
  return DenseMatrix(std::get<SparseMatrix>(data));
}

void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  for (Index j = 0; j < a.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(a, j); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << format_double(it.value()) << '\n';
    }
  }
}

void write_matrix_market(std::ostream& out, const DenseMatrix& a) {
  out << "%%MatrixMarket matrix array real general\n";
  out << a.rows() << ' ' << a.cols() << '\n';
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) out << format_double(a(i, j)) << '\n';
  }
}

void write_matrix_market(const fs::path& path, const SparseMatrix& a) {
  std::ofstream out = open_for_write(path);
  write_matrix_market(out, a);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void write_matrix_market(const fs::path& path, const DenseMatrix& a) {
  std::ofstream out = open_for_write(path);
  write_matrix_market(out, a);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

DatasetManifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open manifest " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::ParseError, path.string() + ": manifest must be a JSON object");
  const fs::path base = path.parent_path();
  DatasetManifest m;
  auto file = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string()) {
      throw Error(ErrorCode::ParseError, path.string() + ": missing string entry \"" + key + "\"");
    }
    const fs::path p = j[key].get<std::string>();
    return p.is_absolute() ? p : base / p;
  };
  m.M = file("M");
  m.D = file("D");
  m.K = file("K");
  m.H = file("H");
  m.L = file("L");
  try {
    if (j.contains("name")) m.name = j["name"].get<std::string>();
    if (j.contains("n")) m.n = j["n"].get<Index>();
    if (j.contains("p")) m.inputs = j["p"].get<Index>();
    if (j.contains("m")) m.outputs = j["m"].get<Index>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return m;
}

void write_manifest(const fs::path& path, const DatasetManifest& m) {
  nlohmann::json j = {{"M", m.M.string()}, {"D", m.D.string()}, {"K", m.K.string()},
                      {"H", m.H.string()}, {"L", m.L.string()}};
  if (m.name) j["name"] = *m.name;
  if (m.n) j["n"] = *m.n;
  if (m.inputs) j["p"] = *m.inputs;
  if (m.outputs) j["m"] = *m.outputs;
  std::ofstream out = open_for_write(path);
  out << j.dump(2) << '\n';
}

SecondOrderSystem load_dataset(const DatasetManifest& m) {
  SecondOrderSystem sos;
  sos.M = load_sparse_matrix(m.M);
  const Index n = sos.M.rows();
  auto fail = [](const fs::path& p, const std::string& msg) {
    throw Error(ErrorCode::DimensionMismatch, p.string() + ": " + msg);
  };
  if (sos.M.cols() != n) fail(m.M, "M must be square");
  if (m.n && *m.n != n) fail(m.M, "expected n = " + std::to_string(*m.n) + ", found " + std::to_string(n));
  sos.D = load_sparse_matrix(m.D);
  if (sos.D.rows() != n || sos.D.cols() != n) fail(m.D, "D must be " + std::to_string(n) + " x " + std::to_string(n));
  sos.K = load_sparse_matrix(m.K);
  if (sos.K.rows() != n || sos.K.cols() != n) fail(m.K, "K must be " + std::to_string(n) + " x " + std::to_string(n));
  sos.H = load_dense_matrix(m.H);
  if (sos.H.rows() != n) fail(m.H, "H must have " + std::to_string(n) + " rows, found " + std::to_string(sos.H.rows()));
  if (m.inputs && *m.inputs != sos.H.cols()) fail(m.H, "input count differs from the manifest");
  sos.L = load_dense_matrix(m.L);
  if (sos.L.cols() != n) fail(m.L, "L must have " + std::to_string(n) + " columns, found " + std::to_string(sos.L.cols()));
  if (m.outputs && *m.outputs != sos.L.rows()) fail(m.L, "output count differs from the manifest");
  return sos;
}

SecondOrderSystem load_dataset(const fs::path& manifest_path) { return load_dataset(load_manifest(manifest_path)); }

DatasetManifest write_dataset(const SecondOrderSystem& sos, const fs::path& dir, const std::string& name) {
  sos.validate();
  fs::create_directories(dir);
  write_matrix_market(dir / "M.mtx", sos.M);
  write_matrix_market(dir / "D.mtx", sos.D);
  write_matrix_market(dir / "K.mtx", sos.K);
  write_matrix_market(dir / "H.mtx", sos.H);
  write_matrix_market(dir / "L.mtx", sos.L);
  DatasetManifest m;
  m.M = "M.mtx";
  m.D = "D.mtx";
  m.K = "K.mtx";
  m.H = "H.mtx";
  m.L = "L.mtx";
  if (!name.empty()) m.name = name;
  m.n = sos.n();
  m.inputs = sos.inputs();
  m.outputs = sos.outputs();
  write_manifest(dir / "manifest.json", m);
  m.M = dir / m.M;
  m.D = dir / m.D;
  m.K = dir / m.K;
  m.H = dir / m.H;
  m.L = dir / m.L;
  return m;
}

}  // namespace morkit
