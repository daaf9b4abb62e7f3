#pragma once

#include "consgain/gain.hpp"
#include "consgain/graph.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace consgain {

/// One sweep axis: `count` values from `min` to `max`, linear or log spaced.
struct Axis {
  double min = 0.05;
  double max = 10.0;
  std::size_t count = 60;
  bool log = true;

  void validate(const char* name) const;
  [[nodiscard]] std::vector<double> values() const;
};

/// Parses "MIN:MAX:COUNT".
[[nodiscard]] Axis parse_axis(const std::string& text, bool log);

struct SweepGrid {
  Axis alpha;
  Axis beta;
};

/// Gain values over the (alpha, beta) grid. Cells are row-major with beta
/// as the row index: value(r, c) = gain at (alphas[c], betas[r]).
struct GainSurface {
  SweepGrid grid;
  Protocol protocol = Protocol::Absolute;
  double lambda2 = 0.0;
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<double> values;
  std::vector<double> critical_beta;  // threshold curve sampled at each alpha

  [[nodiscard]] double at(std::size_t row, std::size_t col) const {
    return values[row * alphas.size() + col];
  }
};

[[nodiscard]] GainSurface gain_surface(const SweepGrid& grid, double lambda2, Protocol protocol);

/// Position of a grid cell relative to the two threshold curves.
enum class Region {
  BelowBoth,   // beta < min(p, q): both gains on their lower branch
  Between,     // min(p, q) <= beta < max(p, q)
  AboveBoth,   // beta >= max(p, q): both gains equal 1/(alpha lambda2)
};

[[nodiscard]] std::string_view to_string(Region r);

struct DifferenceSurface {
  SweepGrid grid;
  double lambda2 = 0.0;
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<double> values;  // ||T1|| - ||T2||, same layout as GainSurface
  std::vector<Region> regions;
  std::vector<double> critical_absolute;  // p(alpha)
  std::vector<double> critical_relative;  // q(alpha)

  [[nodiscard]] double at(std::size_t row, std::size_t col) const {
    return values[row * alphas.size() + col];
  }
  [[nodiscard]] Region region_at(std::size_t row, std::size_t col) const {
    return regions[row * alphas.size() + col];
  }
};

[[nodiscard]] DifferenceSurface difference_surface(const SweepGrid& grid, double lambda2);

/// "alpha,beta,value" rows, row-major.
[[nodiscard]] std::string to_csv(const GainSurface& s);
/// "alpha,beta,value,region" rows, row-major.
[[nodiscard]] std::string to_csv(const DifferenceSurface& s);
[[nodiscard]] std::string to_json(const GainSurface& s);
[[nodiscard]] std::string to_json(const DifferenceSurface& s);

struct Table1Row {
  GraphFamily family;
  double closed_form = 0.0;
  double numeric = 0.0;
  Density density;
  Verdict verdict = Verdict::Tie;  // from the eigensolver value
};

/// Families of the table: K_n, S_n, P_n, C_{1,n}, C_{2,n}, C_{3,n}.
[[nodiscard]] std::vector<GraphFamily> table1_families(std::size_t n);

/// Rows for every family valid at each n in `ns`; invalid combinations are skipped.
[[nodiscard]] std::vector<Table1Row> table1_report(const std::vector<std::size_t>& ns);

[[nodiscard]] std::string table1_text(const std::vector<Table1Row>& rows);
[[nodiscard]] std::string table1_csv(const std::vector<Table1Row>& rows);
[[nodiscard]] std::string table1_json(const std::vector<Table1Row>& rows);

struct DensityPoint {
  std::size_t n;
  Density density;
};

/// Density sequences keyed by family label ("complete", "star", "path",
/// "ring1", ...), each from the smallest valid n up to n_max.
[[nodiscard]] std::map<std::string, std::vector<DensityPoint>> density_trends(
    const std::vector<GraphFamily>& families, std::size_t n_max);

[[nodiscard]] std::string family_label(const GraphFamily& f);
[[nodiscard]] std::string density_csv(const std::map<std::string, std::vector<DensityPoint>>& t);
[[nodiscard]] std::string density_json(const std::map<std::string, std::vector<DensityPoint>>& t);

}  // namespace consgain
