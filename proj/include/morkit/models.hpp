#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

#include "morkit/sysmodel.hpp"

namespace morkit {

// How the damping matrix of the oscillator is formed.
struct DampingPolicy {
  enum class Kind {
    // nu * (S + e e^T): unit dampers parallel to every spring, plus one
    // support damper at the grounded end of the first chain.
    ChainViscous,
    // alpha M + beta K.
    Rayleigh,
  };
  Kind kind = Kind::ChainViscous;
  double rayleigh_mass = 0.0;
  double rayleigh_stiffness = 0.0;
};

// Three mass-spring chains of n1 masses each, joined to one shared mass.
struct SomParams {
  Index n1 = 1;
  double m1 = 1.0, m2 = 2.0, m3 = 3.0, m0 = 10.0;
  double k1 = 10.0, k2 = 20.0, k3 = 1.0, k0 = 50.0;
  double nu = 5.0;
  DampingPolicy damping;

  void validate() const;
};

// n = 3 n1 + 1 coordinates; the shared mass is the last coordinate and
// carries the single input and output.
SecondOrderSystem build_som(const SomParams& params);

using MatrixMarketData = std::variant<SparseMatrix, DenseMatrix>;

// Coordinate files give a SparseMatrix, array files a DenseMatrix. Symmetric
// storage is expanded. Errors carry `source:line`.
MatrixMarketData parse_matrix_market(std::istream& in, const std::string& source);
MatrixMarketData load_matrix_market(const std::filesystem::path& path);
SparseMatrix load_sparse_matrix(const std::filesystem::path& path);
DenseMatrix load_dense_matrix(const std::filesystem::path& path);

// Coordinate (sparse) or array (dense) format, general symmetry, shortest
// round-trip decimal values.
void write_matrix_market(std::ostream& out, const SparseMatrix& a);
void write_matrix_market(std::ostream& out, const DenseMatrix& a);
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a);
void write_matrix_market(const std::filesystem::path& path, const DenseMatrix& a);

struct DatasetManifest {
  std::filesystem::path M, D, K, H, L;
  std::optional<std::string> name;
  std::optional<Index> n, inputs, outputs;
};

// JSON object {"M": path, "D": ..., "K": ..., "H": ..., "L": ...} with optional
// "name", "n", "p", "m". Relative paths resolve against the manifest directory.
DatasetManifest load_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

SecondOrderSystem load_dataset(const DatasetManifest& manifest);
SecondOrderSystem load_dataset(const std::filesystem::path& manifest_path);

// Writes M.mtx, D.mtx, K.mtx, H.mtx, L.mtx and manifest.json into `dir`.
DatasetManifest write_dataset(const SecondOrderSystem& sos, const std::filesystem::path& dir,
                              const std::string& name = "");

}  // namespace morkit
