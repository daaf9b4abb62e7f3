#include "consgain/graph.hpp"

#include "consgain/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace consgain {

Graph::Graph(Eigen::MatrixXd adjacency) : adjacency_(std::move(adjacency)) {
  const auto n = adjacency_.rows();
  if (adjacency_.cols() != n) {
    throw ParameterError("adjacency matrix must be square");
  }
  if (n < 2) {
    throw ParameterError("graph needs at least 2 vertices, got " + std::to_string(n));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (adjacency_(i, i) != 0.0) {
      throw ParameterError("self-loop at vertex " + std::to_string(i));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = adjacency_(i, j);
      if (!std::isfinite(w)) {
        throw ParameterError("non-finite edge weight");
      }
      if (w < 0.0) {
        throw ParameterError("negative edge weight at (" + std::to_string(i) + ", " +
                             std::to_string(j) + ")");
      }
      if (w != adjacency_(j, i)) {
        throw ParameterError("adjacency is not symmetric at (" + std::to_string(i) + ", " +
                             std::to_string(j) + ")");
      }
    }
  }
}

double Graph::weight(std::size_t i, std::size_t j) const {
  if (i >= size() || j >= size()) {
    throw ParameterError("vertex index out of range");
  }
  return adjacency_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

std::size_t Graph::edge_count() const noexcept {
  std::size_t count = 0;
  const auto n = adjacency_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (adjacency_(i, j) > 0.0) {
        ++count;
      }
    }
  }
  return count;
}

std::vector<std::vector<std::size_t>> Graph::components() const {
  const std::size_t n = size();
  std::vector<int> label(n, -1);
  std::vector<std::vector<std::size_t>> result;
  for (std::size_t root = 0; root < n; ++root) {
    if (label[root] >= 0) {
      continue;
    }
    const int id = static_cast<int>(result.size());
    result.emplace_back();
    std::queue<std::size_t> frontier;
    frontier.push(root);
    label[root] = id;
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop();
      result.back().push_back(u);
      for (std::size_t v = 0; v < n; ++v) {
        if (label[v] < 0 && adjacency_(static_cast<Eigen::Index>(u),
                                       static_cast<Eigen::Index>(v)) > 0.0) {
          label[v] = id;
          frontier.push(v);
        }
      }
    }
    std::sort(result.back().begin(), result.back().end());
  }
  return result;
}

// --- families -------------------------------------------------------------

void GraphFamily::validate() const {
  if (n > kMaxVertices) {
    throw ParameterError("n=" + std::to_string(n) + " exceeds the limit of " +
                         std::to_string(kMaxVertices) + " vertices");
  }
  if (kind == FamilyKind::RingLattice) {
    if (k < 1) {
      throw ParameterError("ring lattice needs k >= 1");
    }
    if (n < 2 * k + 1) {
      throw ParameterError("ring lattice C_{" + std::to_string(k) + "," + std::to_string(n) +
                           "} needs n >= 2k+1");
    }
    return;
  }
  if (n < 2) {
    throw ParameterError(std::string(to_string(kind)) + " graph needs n >= 2");
  }
}

std::string GraphFamily::name() const {
  switch (kind) {
    case FamilyKind::Complete:
      return "K_" + std::to_string(n);
    case FamilyKind::Star:
      return "S_" + std::to_string(n);
    case FamilyKind::Path:
      return "P_" + std::to_string(n);
    case FamilyKind::RingLattice:
      return "C_{" + std::to_string(k) + "," + std::to_string(n) + "}";
  }
  return "?";
}

GraphFamily complete(std::size_t n) { return {FamilyKind::Complete, n, 0}; }
GraphFamily star(std::size_t n) { return {FamilyKind::Star, n, 0}; }
GraphFamily path(std::size_t n) { return {FamilyKind::Path, n, 0}; }
GraphFamily ring_lattice(std::size_t k, std::size_t n) { return {FamilyKind::RingLattice, n, k}; }

Graph build_family(const GraphFamily& family) {
  family.validate();
  const auto n = static_cast<Eigen::Index>(family.n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  auto link = [&a](Eigen::Index i, Eigen::Index j) {
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  };
  switch (family.kind) {
    case FamilyKind::Complete:
      a.setOnes();
      a.diagonal().setZero();
      break;
    case FamilyKind::Star:
      for (Eigen::Index i = 1; i < n; ++i) link(0, i);
      break;
    case FamilyKind::Path:
      for (Eigen::Index i = 0; i + 1 < n; ++i) link(i, i + 1);
      break;
    case FamilyKind::RingLattice: {
      const auto k = static_cast<Eigen::Index>(family.k);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index d = 1; d <= k; ++d) link(i, (i + d) % n);
      }
      break;
    }
  }
  return Graph(std::move(a));
}

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Complete:
      return "complete";
    case FamilyKind::Star:
      return "star";
    case FamilyKind::Path:
      return "path";
    case FamilyKind::RingLattice:
      return "ring";
  }
  return "?";
}

FamilyKind parse_family_kind(std::string_view name) {
  if (name == "complete") return FamilyKind::Complete;
  if (name == "star") return FamilyKind::Star;
  if (name == "path") return FamilyKind::Path;
  if (name == "ring") return FamilyKind::RingLattice;
  throw ParameterError("unknown graph family '" + std::string(name) + "'");
}

Density density(const Graph& g) {
  const std::size_t n = g.size();
  return {g.edge_count(), n * (n - 1) / 2};
}

}  // namespace consgain
