#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "morkit/models.hpp"
#include "test_util.hpp"

using namespace morkit;
using namespace morkit::testing;
namespace fs = std::filesystem;

namespace {

SecondOrderSystem som(Index n1) {
  SomParams p;
  p.n1 = n1;
  return build_som(p);
}

MatrixMarketData parse(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix_market(in, "inline");
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("morkit_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void expect_parse_error(const std::string& text, const std::string& line_tag) {
  try {
    parse(text);
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("inline:" + line_tag), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(Som, Dimensions) {
  for (const Index n1 : {1, 10, 200, 3000}) {
    const SecondOrderSystem s = som(n1);
    EXPECT_EQ(s.n(), 3 * n1 + 1);
    EXPECT_EQ(s.inputs(), 1);
    EXPECT_EQ(s.outputs(), 1);
  }
  EXPECT_EQ(som(3000).n(), 9001);
}

TEST(Som, SmallestInstanceMasses) {
  const DenseMatrix M(som(1).M);
  DenseMatrix expect = DenseMatrix::Zero(4, 4);
  expect.diagonal() << 1.0, 2.0, 3.0, 10.0;
  EXPECT_EQ(M, expect);
}

TEST(Som, SymmetricPositiveDefinite) {
  const SecondOrderSystem s = som(10);
  for (const SparseMatrix* m : {&s.M, &s.D, &s.K}) {
    const DenseMatrix d(*m);
    EXPECT_EQ(d, d.transpose());
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<DenseMatrix>(d).eigenvalues().minCoeff(), 0.0);
  }
  EXPECT_EQ(s.H.transpose(), s.L);
}

TEST(Som, DefaultInstanceIsStable) {
  const StabilityInfo info = is_stable(som(200), true);
  EXPECT_TRUE(info.stable);
  EXPECT_LT(info.abscissa, 0.0);
}

TEST(Som, RayleighDamping) {
  SomParams p;
  p.n1 = 5;
  p.damping.kind = DampingPolicy::Kind::Rayleigh;
  p.damping.rayleigh_mass = 0.1;
  p.damping.rayleigh_stiffness = 0.01;
  const SecondOrderSystem s = build_som(p);
  EXPECT_LE((DenseMatrix(s.D) - 0.1 * DenseMatrix(s.M) - 0.01 * DenseMatrix(s.K)).norm(), 1e-14);
}

TEST(Som, InvalidParametersRejected) {
  SomParams p;
  p.n1 = 0;
  EXPECT_THROW(build_som(p), Error);
  p.n1 = 2;
  p.m2 = -1.0;
  EXPECT_THROW(build_som(p), Error);
}

TEST(MatrixMarket, SingleEntry) {
  const auto data = parse("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 2.5\n");
  const SparseMatrix& a = std::get<SparseMatrix>(data);
  EXPECT_EQ(a.rows(), 1);
  EXPECT_EQ(a.coeff(0, 0), 2.5);
}

TEST(MatrixMarket, SymmetricMirrored) {
  const auto data = parse("%%MatrixMarket matrix coordinate real symmetric\n% comment\n2 2 2\n1 1 4\n2 1 -1\n");
  const SparseMatrix& a = std::get<SparseMatrix>(data);
  EXPECT_EQ(a.coeff(0, 1), -1.0);
  EXPECT_EQ(a.coeff(1, 0), -1.0);
  EXPECT_EQ(a.coeff(0, 0), 4.0);
  EXPECT_EQ(a.nonZeros(), 3);
}

TEST(MatrixMarket, IntegerAndArrayFormats) {
  const auto dense = parse("%%MatrixMarket matrix array integer general\n2 2\n1\n2\n3\n4\n");
  const DenseMatrix& d = std::get<DenseMatrix>(dense);
  EXPECT_EQ(d(1, 0), 2.0);
  EXPECT_EQ(d(0, 1), 3.0);
}

TEST(MatrixMarket, MalformedInputsCarryLine) {
  expect_parse_error("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1\n", "1");
  expect_parse_error("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n", "3");
  expect_parse_error("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n1 1 2.0\n", "4");
  expect_parse_error("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n", "");
  expect_parse_error("not a header\n", "1");
}

TEST(MatrixMarket, SymmetricDuplicateAcrossTriangleRejected) {
  expect_parse_error("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n2 1 1.0\n1 2 1.0\n", "4");
}

TEST(MatrixMarket, SparseRoundTripIsExact) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::uniform_int_distribution<int> idx(0, 39);
  std::vector<Triplet> t;
  for (int k = 0; k < 150; ++k) t.emplace_back(idx(rng), idx(rng) % 30, u(rng) * std::pow(10.0, idx(rng) - 20));
  SparseMatrix a(40, 30);
  a.setFromTriplets(t.begin(), t.end());
  std::ostringstream out;
  write_matrix_market(out, a);
  std::istringstream in(out.str());
  const SparseMatrix b = std::get<SparseMatrix>(parse_matrix_market(in, "roundtrip"));
  EXPECT_EQ(b.rows(), 40);
  EXPECT_EQ(b.cols(), 30);
  EXPECT_EQ(b.nonZeros(), a.nonZeros());
  EXPECT_EQ(DenseMatrix(a), DenseMatrix(b));
}

TEST(MatrixMarket, DenseRoundTripIsExact) {
  std::mt19937_64 rng(6);
  const DenseMatrix a = random_dense(7, 3, rng);
  const fs::path dir = fresh_dir("dense");
  write_matrix_market(dir / "a.mtx", a);
  EXPECT_EQ(load_dense_matrix(dir / "a.mtx"), a);
  EXPECT_EQ(DenseMatrix(load_sparse_matrix(dir / "a.mtx")), a);
}

TEST(MatrixMarket, MissingFileReported) {
  try {
    load_matrix_market("/nonexistent/morkit/x.mtx");
    FAIL() << "expected IoError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

TEST(Manifest, DatasetRoundTrip) {
  const SecondOrderSystem s = som(1);
  const fs::path dir = fresh_dir("manifest");
  write_dataset(s, dir, "som1");
  const SecondOrderSystem back = load_dataset(dir / "manifest.json");
  EXPECT_EQ(DenseMatrix(back.M), DenseMatrix(s.M));
  EXPECT_EQ(DenseMatrix(back.D), DenseMatrix(s.D));
  EXPECT_EQ(DenseMatrix(back.K), DenseMatrix(s.K));
  EXPECT_EQ(back.H, s.H);
  EXPECT_EQ(back.L, s.L);
  const DatasetManifest m = load_manifest(dir / "manifest.json");
  EXPECT_EQ(m.name.value_or(""), "som1");
  EXPECT_EQ(m.n.value_or(0), 4);
}

TEST(Manifest, MissingOutputFileNamed) {
  const fs::path dir = fresh_dir("missing_l");
  write_dataset(som(1), dir);
  fs::remove(dir / "L.mtx");
  try {
    load_dataset(dir / "manifest.json");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("L.mtx"), std::string::npos) << e.what();
  }
}

TEST(Manifest, InputMatrixWithExtraRowRejected) {
  const fs::path dir = fresh_dir("bad_h");
  write_dataset(som(1), dir);
  write_matrix_market(dir / "H.mtx", DenseMatrix(DenseMatrix::Ones(5, 1)));
  try {
    load_dataset(dir / "manifest.json");
    FAIL() << "expected DimensionMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Manifest, MissingKeyRejected) {
  const fs::path dir = fresh_dir("bad_manifest");
  std::ofstream(dir / "manifest.json") << R"({"M": "M.mtx", "D": "D.mtx", "K": "K.mtx", "H": "H.mtx"})";
  EXPECT_THROW(load_manifest(dir / "manifest.json"), Error);
}
