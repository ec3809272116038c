#include <cmath>
#include <vector>

#include "morkit/errors.hpp"
#include "morkit/models.hpp"

namespace morkit {

namespace {

// Adds a spring of stiffness c between coordinates i and j; j < 0 is ground.
void add_spring(std::vector<Triplet>& t, Index i, Index j, double c) {
  t.emplace_back(i, i, c);
  if (j < 0) return;
  t.emplace_back(j, j, c);
  t.emplace_back(i, j, -c);
  t.emplace_back(j, i, -c);
}

// Chain topology: ground - x_0 - x_1 - ... - x_{n1-1} per chain, and each
// chain end x_{n1-1} joined to the shared mass. Scaled by chain and coupling
// coefficients.
SparseMatrix chain_matrix(Index n1, const double (&chain)[3], double coupling) {
  const Index n = 3 * n1 + 1;
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(12 * n1 + 4));
  for (int c = 0; c < 3; ++c) {
    const Index off = c * n1;
    add_spring(t, off, -1, chain[c]);
    for (Index i = 1; i < n1; ++i) add_spring(t, off + i, off + i - 1, chain[c]);
    add_spring(t, n - 1, off + n1 - 1, coupling);
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();
  return a;
}

}  // namespace

void SomParams::validate() const {
  if (n1 < 1) throw Error(ErrorCode::InvalidArgument, "n1 must be at least 1");
  for (const double v : {m1, m2, m3, m0, k1, k2, k3, k0, nu}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "masses, stiffnesses and viscosity must be positive");
    }
  }
  if (damping.kind == DampingPolicy::Kind::Rayleigh &&
      (damping.rayleigh_mass < 0.0 || damping.rayleigh_stiffness < 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "Rayleigh coefficients must be nonnegative");
  }
}

SecondOrderSystem build_som(const SomParams& p) {
  p.validate();
  const Index n1 = p.n1;
  const Index n = 3 * n1 + 1;
  SecondOrderSystem sos;

  std::vector<Triplet> mt;
  mt.reserve(static_cast<std::size_t>(n));
  const double masses[3] = {p.m1, p.m2, p.m3};
  for (int c = 0; c < 3; ++c) {
    for (Index i = 0; i < n1; ++i) mt.emplace_back(c * n1 + i, c * n1 + i, masses[c]);
  }
  mt.emplace_back(n - 1, n - 1, p.m0);
  sos.M.resize(n, n);
  sos.M.setFromTriplets(mt.begin(), mt.end());

  const double springs[3] = {p.k1, p.k2, p.k3};
  sos.K = chain_matrix(n1, springs, p.k0);

  if (p.damping.kind == DampingPolicy::Kind::ChainViscous) {
    const double unit[3] = {1.0, 1.0, 1.0};
    SparseMatrix s = chain_matrix(n1, unit, 1.0);
    s.coeffRef(0, 0) += 1.0;
    sos.D = p.nu * s;
  } else {
    sos.D = p.damping.rayleigh_mass * sos.M + p.damping.rayleigh_stiffness * sos.K;
  }
  sos.D.makeCompressed();

  sos.H = DenseMatrix::Zero(n, 1);
  sos.H(n - 1, 0) = 1.0;
  sos.L = sos.H.transpose();
  return sos;
}

}  // namespace morkit
