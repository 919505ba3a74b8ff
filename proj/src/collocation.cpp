// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "psdc/collocation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "psdc/errors.hpp"

namespace psdc {
namespace {

using Extended = long double;

struct LegendrePair {
  Extended value;
  Extended derivative;
};

// P_n and P_n' by the three-term recurrence; P'_{n+1} = P'_{n-1} + (2n+1) P_n
// stays regular at x = +-1.
void legendre(int n, Extended x, LegendrePair& pn, LegendrePair& pn_minus_1) {
  Extended p_prev = 1.0L, p = x;
  Extended d_prev = 0.0L, d = 1.0L;
  if (n == 0) {
    pn = {1.0L, 0.0L};
    pn_minus_1 = {0.0L, 0.0L};
    return;
  }
  for (int k = 1; k < n; ++k) {
    const Extended p_next = ((2 * k + 1) * x * p - k * p_prev) / (k + 1);
    const Extended d_next = d_prev + (2 * k + 1) * p;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
  }
  pn = {p, d};
  pn_minus_1 = {p_prev, d_prev};
}

// Right Radau polynomial on [-1, 1]: P_M(x) - P_{M-1}(x).
LegendrePair radau_polynomial(int m, Extended x) {
  LegendrePair pm{}, pm1{};
  legendre(m, x, pm, pm1);
  return {pm.value - pm1.value, pm.derivative - pm1.derivative};
}

void require_valid_nodes(std::span<const double> nodes) {
  if (nodes.empty() || nodes.size() > static_cast<std::size_t>(kMaxNodes)) {
    throw ParameterError("node count must be in [1, " + std::to_string(kMaxNodes) + "]");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i] > 0.0 && nodes[i] <= 1.0)) {
      throw ParameterError("collocation nodes must lie in (0, 1]");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (nodes[i] == nodes[j]) throw ParameterError("duplicate collocation node");
    }
  }
}

}  // namespace

std::vector<double> radau_right_nodes(int num_nodes) {
  if (num_nodes < 1 || num_nodes > kMaxNodes) {
    throw ParameterError("Radau node count must be in [1, " + std::to_string(kMaxNodes) +
                         "], got " + std::to_string(num_nodes));
  }
  // Roots on [-1, 1]; x = 1 is known exactly, the rest are found by Newton
  // with deflation against the roots already located.
  std::vector<Extended> roots{1.0L};
  for (int i = 1; i < num_nodes; ++i) {
    Extended x = std::cos(2.0L * std::numbers::pi_v<Extended> * i / (2 * num_nodes - 1));
    for (int iter = 0; iter < 200; ++iter) {
      const LegendrePair p = radau_polynomial(num_nodes, x);
      Extended deflation = 0.0L;
      for (Extended r : roots) deflation += 1.0L / (x - r);
      const Extended step = p.value / (p.derivative - p.value * deflation);
      x -= step;
      if (std::fabs(step) < 1e-19L) break;
    }
    roots.push_back(x);
  }
  std::vector<double> nodes;
  nodes.reserve(roots.size());
  for (Extended r : roots) nodes.push_back(static_cast<double>((r + 1.0L) / 2.0L));
  std::sort(nodes.begin(), nodes.end());
  nodes.back() = 1.0;
  return nodes;
}

QuadratureMatrix quadrature_matrix(std::span<const double> nodes) {
  require_valid_nodes(nodes);
  const int m = static_cast<int>(nodes.size());
  QuadratureMatrix q(m);
  std::vector<Extended> coeffs(m);
  for (int j = 0; j < m; ++j) {
    // Monomial coefficients of l_j(s) = w_j * prod_{i != j} (s - tau_i).
    std::fill(coeffs.begin(), coeffs.end(), 0.0L);
    coeffs[0] = 1.0L;
    int degree = 0;
    Extended weight = 1.0L;
    for (int i = 0; i < m; ++i) {
      if (i == j) continue;
      const Extended root = nodes[i];
      for (int p = degree + 1; p > 0; --p) coeffs[p] = coeffs[p - 1] - root * coeffs[p];
      coeffs[0] = -root * coeffs[0];
      ++degree;
      weight *= static_cast<Extended>(nodes[j]) - root;
    }
    for (int row = 0; row < m; ++row) {
      const Extended t = nodes[row];
      // Horner on the antiderivative sum_p c_p t^{p+1} / (p + 1).
      Extended acc = 0.0L;
      for (int p = m - 1; p >= 0; --p) acc = acc * t + coeffs[p] / (p + 1);
      q(row, j) = static_cast<double>(acc * t / weight);
    }
  }
  return q;
}

std::vector<double> node_spacings(std::span<const double> nodes) {
  std::vector<double> dtau(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    dtau[i] = i == 0 ? nodes[0] : nodes[i] - nodes[i - 1];
    if (!(dtau[i] > 0.0)) throw ParameterError("collocation nodes must be strictly increasing");
  }
  return dtau;
}

CollocationTable::CollocationTable(std::vector<double> nodes)
    : nodes_(std::move(nodes)), q_(quadrature_matrix(nodes_)), dtau_(node_spacings(nodes_)) {}

CollocationTable CollocationTable::radau_right(int num_nodes) {
  return CollocationTable(radau_right_nodes(num_nodes));
}

double DiagonalPreconditioner::coefficient(const CollocationTable& table, int node, int sweep) const {
  if (sweep < 1) throw ParameterError("sweep index must be >= 1");
  switch (kind_) {
    case PreconditionerKind::MinSrFlex:
      return table.nodes()[node] / sweep;
    case PreconditionerKind::ImplicitEulerDeltaTau:
      return table.dtau()[node];
  }
  return 0.0;
}

std::vector<double> DiagonalPreconditioner::coefficients(const CollocationTable& table,
                                                         int sweep) const {
  std::vector<double> diag(table.num_nodes());
  for (int m = 0; m < table.num_nodes(); ++m) diag[m] = coefficient(table, m, sweep);
  return diag;
}

}  // namespace psdc
