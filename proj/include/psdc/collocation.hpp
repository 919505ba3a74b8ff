// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace psdc {

/// Largest node count supported by the node and quadrature generators.
inline constexpr int kMaxNodes = 16;

/// Dense row-major M x M matrix of quadrature weights.
class QuadratureMatrix {
 public:
  QuadratureMatrix() = default;
  explicit QuadratureMatrix(int m) : m_(m), data_(static_cast<std::size_t>(m) * m, 0.0) {}

  int size() const noexcept { return m_; }
  double operator()(int row, int col) const { return data_[static_cast<std::size_t>(row) * m_ + col]; }
  double& operator()(int row, int col) { return data_[static_cast<std::size_t>(row) * m_ + col]; }
  std::span<const double> row(int r) const {
    return {data_.data() + static_cast<std::size_t>(r) * m_, static_cast<std::size_t>(m_)};
  }
  std::span<const double> data() const noexcept { return data_; }

 private:
  int m_ = 0;
  std::vector<double> data_;
};

/// Radau-right (Radau IIA) abscissae on [0, 1]; the last node is exactly 1.
std::vector<double> radau_right_nodes(int num_nodes);

/// q(m, j) = integral over [0, nodes[m]] of the j-th Lagrange basis polynomial.
QuadratureMatrix quadrature_matrix(std::span<const double> nodes);

/// dtau[0] = nodes[0], dtau[j] = nodes[j] - nodes[j-1].
std::vector<double> node_spacings(std::span<const double> nodes);

/// Nodes, quadrature matrix and node spacings for one normalized time step.
/// Immutable after construction and safe to share between threads.
class CollocationTable {
 public:
  explicit CollocationTable(std::vector<double> nodes);

  /// Radau-right table with `num_nodes` nodes.
  static CollocationTable radau_right(int num_nodes);

  int num_nodes() const noexcept { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  const QuadratureMatrix& q() const noexcept { return q_; }
  std::span<const double> dtau() const noexcept { return dtau_; }

 private:
  std::vector<double> nodes_;
  QuadratureMatrix q_;
  std::vector<double> dtau_;
};

enum class PreconditionerKind {
  MinSrFlex,              ///< diag(k)_m = tau_m / k
  ImplicitEulerDeltaTau,  ///< diag(k)_m = dtau_m, the classic sweep
};

/// Per-sweep diagonal coefficients of the implicit correction.
class DiagonalPreconditioner {
 public:
  explicit DiagonalPreconditioner(PreconditionerKind kind = PreconditionerKind::MinSrFlex)
      : kind_(kind) {}

  PreconditionerKind kind() const noexcept { return kind_; }

  /// Coefficients for sweep `sweep` (one-based). Throws ParameterError for sweep < 1.
  std::vector<double> coefficients(const CollocationTable& table, int sweep) const;

  /// Coefficient of a single node; avoids allocating in the sweep hot path.
  double coefficient(const CollocationTable& table, int node, int sweep) const;

 private:
  PreconditionerKind kind_;
};

inline std::vector<double> diagonal_coefficients(const DiagonalPreconditioner& pre,
                                                 const CollocationTable& table, int sweep) {
  return pre.coefficients(table, sweep);
}

}  // namespace psdc
