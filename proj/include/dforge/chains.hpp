#pragma once

#include <span>
#include <string>
#include <vector>

namespace dforge {

// Decreasing flags R^d = A(d) > A(d-1) > ... > A(1) of subspaces obtained by
// intersecting hyperplanes from a family X (given by normals). Each chain is
// stored as an orthonormal basis e_1..e_d with A(j) = span(e_1..e_j).
class ChainSystem {
 public:
  explicit ChainSystem(std::vector<std::vector<double>> normals);
  static ChainSystem coordinate(int d);
  // Named families: "coordinate", or "coordinate+diagonal" (adds x_1 = x_2 type
  // hyperplanes, d >= 2).
  static ChainSystem named(const std::string& name, int d);

  int dimension() const { return d_; }
  std::size_t size() const { return chains_.size(); }
  const std::vector<std::vector<double>>& normals() const { return normals_; }
  // Basis of chain c, row j = e_{j+1}.
  const std::vector<std::vector<double>>& basis(std::size_t c) const { return chains_[c]; }

  // |P_{A(j)} xi| for j = 1..d along chain c.
  std::vector<double> projections(std::size_t c, std::span<const double> xi) const;

  // Phi(xi) = sum over chains of prod_j min(1, 1/(2 pi |P_{A(j)} xi|)).
  double phi(std::span<const double> xi) const;
  double phi(std::span<const int> k) const;

 private:
  int d_ = 0;
  std::vector<std::vector<double>> normals_;
  std::vector<std::vector<std::vector<double>>> chains_;
};

}  // namespace dforge
