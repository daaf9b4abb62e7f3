#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace consgain {

/// Weighted undirected graph on vertices 0..n-1.
///
/// The adjacency matrix is symmetric with a zero diagonal and nonnegative
/// finite weights; the constructor rejects anything else. Instances are
/// immutable once built.
class Graph {
 public:
  explicit Graph(Eigen::MatrixXd adjacency);

  [[nodiscard]] std::size_t size() const noexcept {
    return static_cast<std::size_t>(adjacency_.rows());
  }
  [[nodiscard]] const Eigen::MatrixXd& adjacency() const noexcept { return adjacency_; }
  [[nodiscard]] double weight(std::size_t i, std::size_t j) const;

  /// Number of unordered pairs {i, j} with a_ij > 0.
  [[nodiscard]] std::size_t edge_count() const noexcept;

  /// Connected components by breadth-first search, each sorted ascending.
  [[nodiscard]] std::vector<std::vector<std::size_t>> components() const;
  [[nodiscard]] bool is_connected() const { return components().size() == 1; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.adjacency_.rows() == b.adjacency_.rows() && a.adjacency_ == b.adjacency_;
  }

 private:
  Eigen::MatrixXd adjacency_;
};

enum class FamilyKind { Complete, Star, Path, RingLattice };

/// One of the 0-1 weighted graph families K_n, S_n, P_n, C_{k,n}.
struct GraphFamily {
  FamilyKind kind = FamilyKind::Complete;
  std::size_t n = 2;
  std::size_t k = 0;  // neighbour radius, RingLattice only

  /// Throws ParameterError when (kind, n, k) is not a valid combination.
  void validate() const;
  [[nodiscard]] std::string name() const;
};

[[nodiscard]] GraphFamily complete(std::size_t n);
[[nodiscard]] GraphFamily star(std::size_t n);
[[nodiscard]] GraphFamily path(std::size_t n);
[[nodiscard]] GraphFamily ring_lattice(std::size_t k, std::size_t n);

[[nodiscard]] Graph build_family(const GraphFamily& family);

[[nodiscard]] std::string_view to_string(FamilyKind kind);
/// Accepts "complete", "star", "path", "ring" (case-sensitive).
[[nodiscard]] FamilyKind parse_family_kind(std::string_view name);

/// Network density as the exact ratio edges / (n(n-1)/2).
struct Density {
  std::size_t edges = 0;
  std::size_t pairs = 1;

  [[nodiscard]] double value() const noexcept {
    return static_cast<double>(edges) / static_cast<double>(pairs);
  }
};

[[nodiscard]] Density density(const Graph& g);

// --- ingestion / serialisation -------------------------------------------

/// Largest vertex count accepted by the loaders.
inline constexpr std::size_t kMaxVertices = 10000;

/// Absolute tolerance under which a_ij and a_ji are considered the same edge.
inline constexpr double kSymmetryTolerance = 1e-12;

/// Parses "i j [w]" lines (w defaults to 1). '#' starts a comment; a "# n=<N>" comment fixes the
/// vertex count, otherwise n = 1 + largest index seen.
[[nodiscard]] Graph parse_edge_list(std::string_view text);

/// Parses {"n": int, "edges": [[i, j, w], ...]} or {"adjacency": [[...], ...]}.
[[nodiscard]] Graph parse_graph_json(std::string_view text);

/// Dispatches on content: a document starting with '{' is JSON.
[[nodiscard]] Graph parse_graph(std::string_view text);

[[nodiscard]] Graph load_graph(const std::filesystem::path& file);

/// Upper-triangle edges with 17 significant digits; includes the "# n=" header.
[[nodiscard]] std::string to_edge_list(const Graph& g);
[[nodiscard]] std::string to_graph_json(const Graph& g);

}  // namespace consgain
