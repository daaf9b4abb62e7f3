#include "consgain/errors.hpp"
#include "consgain/graph.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

namespace consgain {
namespace {

struct Entry {
  std::size_t i;
  std::size_t j;
  double w;
};

// Collects directed entries and folds them into a symmetric adjacency.
// A pair given in both orientations is averaged when the weights agree to
// kSymmetryTolerance; a pair given twice in the same orientation is an error.
Graph assemble(std::size_t n, const std::vector<Entry>& entries) {
  if (n < 2) {
    throw ParseError("graph needs at least 2 vertices");
  }
  if (n > kMaxVertices) {
    throw ParseError("graph has " + std::to_string(n) + " vertices, limit is " +
                     std::to_string(kMaxVertices));
  }
  std::map<std::pair<std::size_t, std::size_t>, double> directed;
  for (const auto& e : entries) {
    if (e.i >= n || e.j >= n) {
      throw ParseError("edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                       ") references a vertex outside 0.." + std::to_string(n - 1));
    }
    if (!std::isfinite(e.w)) {
      throw ParseError("non-finite weight on edge (" + std::to_string(e.i) + ", " +
                       std::to_string(e.j) + ")");
    }
    if (e.w < 0.0) {
      throw ParseError("negative weight on edge (" + std::to_string(e.i) + ", " +
                       std::to_string(e.j) + ")");
    }
    if (e.i == e.j) {
      if (e.w != 0.0) {
        throw ParseError("self-loop at vertex " + std::to_string(e.i));
      }
      continue;
    }
    if (!directed.emplace(std::make_pair(e.i, e.j), e.w).second) {
      throw ParseError("duplicate edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                       ")");
    }
  }

  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& [key, w] : directed) {
    const auto [i, j] = key;
    double value = w;
    if (const auto twin = directed.find({j, i}); twin != directed.end()) {
      if (std::abs(twin->second - w) > kSymmetryTolerance) {
        throw ParseError("asymmetric weights on edge (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")");
      }
      value = i < j ? 0.5 * (w + twin->second) : 0.5 * (twin->second + w);
    }
    a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
    a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
  }
  return Graph(std::move(a));
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<std::size_t> vertex_count_directive(std::string_view comment) {
  comment = trim(comment);
  if (comment.substr(0, 2) != "n=") return std::nullopt;
  const auto digits = trim(comment.substr(2));
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw ParseError("malformed vertex-count directive '# " + std::string(comment) + "'");
  }
  return n;
}

std::string format_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", w);
  return buf;
}

}  // namespace

Graph parse_edge_list(std::string_view text) {
  std::vector<Entry> entries;
  std::optional<std::size_t> declared;
  std::size_t max_index = 0;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      if (auto n = vertex_count_directive(body.substr(hash + 1))) {
        declared = n;
      }
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) continue;

    std::istringstream fields{std::string(body)};
    long long i = 0;
    long long j = 0;
    double w = 1.0;  // "i j" lines are unit-weight edges
    std::string extra;
    const bool ok = static_cast<bool>(fields >> i >> j);
    if (ok && !(fields >> std::ws).eof() && !(fields >> w)) {
      throw ParseError("line " + std::to_string(line_no) + ": bad weight in '" +
                       std::string(body) + "'");
    }
    if (!ok || (fields >> extra)) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'i j [w]', got '" +
                       std::string(body) + "'");
    }
    if (i < 0 || j < 0) {
      throw ParseError("line " + std::to_string(line_no) + ": negative vertex index");
    }
    entries.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), w});
    max_index = std::max({max_index, entries.back().i, entries.back().j});
  }
  if (entries.empty() && !declared) {
    throw ParseError("edge list is empty");
  }
  return assemble(declared.value_or(max_index + 1), entries);
}

namespace {

// {"adjacency": [[...], ...]}: a dense weight matrix.
Graph adjacency_from_json(const nlohmann::json& rows) {
  if (!rows.is_array() || rows.empty()) {
    throw ParseError("\"adjacency\" must be a non-empty array of rows");
  }
  const std::size_t n = rows.size();
  Eigen::MatrixXd a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n) {
      throw ParseError("adjacency row " + std::to_string(i) + " must have " + std::to_string(n) +
                       " entries");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!rows[i][j].is_number()) {
        throw ParseError("adjacency entry (" + std::to_string(i) + "," + std::to_string(j) +
                         ") is not a number");
      }
      a(i, j) = rows[i][j].get<double>();
    }
  }
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && std::abs(a(i, j) - a(j, i)) > kSymmetryTolerance) {
        throw ParseError("adjacency is not symmetric at (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
      }
      if (a(i, j) != 0.0) entries.push_back({i, j, a(i, j)});
    }
  }
  return assemble(n, entries);
}

}  // namespace

Graph parse_graph_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("adjacency")) {
    return adjacency_from_json(doc["adjacency"]);
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges")) {
    throw ParseError("graph JSON needs \"adjacency\", or fields \"n\" and \"edges\"");
  }
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 0) {
    throw ParseError("\"n\" must be a nonnegative integer");
  }
  if (!doc["edges"].is_array()) {
    throw ParseError("\"edges\" must be an array");
  }
  std::vector<Entry> entries;
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
        !e[1].is_number_integer() || !e[2].is_number()) {
      throw ParseError("each edge must be [i, j, w], got " + e.dump());
    }
    if (e[0].get<long long>() < 0 || e[1].get<long long>() < 0) {
      throw ParseError("negative vertex index in " + e.dump());
    }
    entries.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>()});
  }
  return assemble(doc["n"].get<std::size_t>(), entries);
}

Graph parse_graph(std::string_view text) {
  const auto body = trim(text);
  const auto first = body.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && body[first] == '{') {
    return parse_graph_json(text);
  }
  return parse_edge_list(text);
}

Graph load_graph(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open graph file '" + file.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_graph(buffer.str());
}

std::string to_edge_list(const Graph& g) {
  const auto& a = g.adjacency();
  std::string out = "# n=" + std::to_string(g.size()) + "\n";
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      if (a(i, j) > 0.0) {
        out += std::to_string(i) + ' ' + std::to_string(j) + ' ' + format_weight(a(i, j)) + '\n';
      }
    }
  }
  return out;
}

std::string to_graph_json(const Graph& g) {
  const auto& a = g.adjacency();
  nlohmann::json edges = nlohmann::json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      if (a(i, j) > 0.0) {
        edges.push_back({i, j, a(i, j)});
      }
    }
  }
  return nlohmann::json{{"n", g.size()}, {"edges", std::move(edges)}}.dump();
}

}  // namespace consgain
