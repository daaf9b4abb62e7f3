#include "consgain/experiments.hpp"

#include "consgain/errors.hpp"
#include "consgain/spectral.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace consgain {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json axis_json(const Axis& a) {
  return {{"min", a.min}, {"max", a.max}, {"count", a.count}, {"log", a.log}};
}

}  // namespace

void Axis::validate(const char* name) const {
  if (!(min > 0.0) || !std::isfinite(min) || !std::isfinite(max)) {
    throw ParameterError(std::string(name) + " range needs min > 0");
  }
  if (!(max >= min)) {
    throw ParameterError(std::string(name) + " range needs max >= min");
  }
  if (count < 2) {
    throw ParameterError(std::string(name) + " range needs count >= 2");
  }
}

std::vector<double> Axis::values() const {
  validate("axis");
  std::vector<double> out(count);
  const double last = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / last;
    out[i] = log ? std::exp(std::log(min) + f * (std::log(max) - std::log(min)))
                 : min + f * (max - min);
  }
  out.front() = min;
  out.back() = max;
  return out;
}

Axis parse_axis(const std::string& text, bool log) {
  Axis a;
  a.log = log;
  char c1 = 0;
  char c2 = 0;
  std::istringstream in(text);
  long long count = 0;
  if (!(in >> a.min >> c1 >> a.max >> c2 >> count) || c1 != ':' || c2 != ':' ||
      !(in >> std::ws).eof()) {
    throw ParameterError("range must look like MIN:MAX:COUNT, got '" + text + "'");
  }
  if (count < 2) {
    throw ParameterError("range count must be >= 2");
  }
  a.count = static_cast<std::size_t>(count);
  a.validate("range");
  return a;
}

GainSurface gain_surface(const SweepGrid& grid, double lambda2, Protocol protocol) {
  if (!(lambda2 > 0.0)) {
    throw PreconditionError("gain surface requires a connected graph (lambda2 > 0)");
  }
  grid.alpha.validate("alpha");
  grid.beta.validate("beta");
  GainSurface s;
  s.grid = grid;
  s.protocol = protocol;
  s.lambda2 = lambda2;
  s.alphas = grid.alpha.values();
  s.betas = grid.beta.values();
  s.values.reserve(s.alphas.size() * s.betas.size());
  for (const double beta : s.betas) {
    for (const double alpha : s.alphas) {
      s.values.push_back(gain(protocol, lambda2, Gains(alpha, beta)).value);
    }
  }
  for (const double alpha : s.alphas) {
    s.critical_beta.push_back(protocol == Protocol::Absolute
                                  ? critical_beta_absolute(lambda2, alpha)
                                  : critical_beta_relative(lambda2, alpha));
  }
  return s;
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::BelowBoth:
      return "below_both";
    case Region::Between:
      return "between";
    case Region::AboveBoth:
      return "above_both";
  }
  return "?";
}

DifferenceSurface difference_surface(const SweepGrid& grid, double lambda2) {
  if (!(lambda2 > 0.0)) {
    throw PreconditionError("difference surface requires a connected graph (lambda2 > 0)");
  }
  grid.alpha.validate("alpha");
  grid.beta.validate("beta");
  DifferenceSurface s;
  s.grid = grid;
  s.lambda2 = lambda2;
  s.alphas = grid.alpha.values();
  s.betas = grid.beta.values();
  for (const double alpha : s.alphas) {
    s.critical_absolute.push_back(critical_beta_absolute(lambda2, alpha));
    s.critical_relative.push_back(critical_beta_relative(lambda2, alpha));
  }
  const std::size_t cells = s.alphas.size() * s.betas.size();
  s.values.reserve(cells);
  s.regions.reserve(cells);
  for (const double beta : s.betas) {
    for (std::size_t c = 0; c < s.alphas.size(); ++c) {
      const Gains gains(s.alphas[c], beta);
      const double t1 = gain_absolute(lambda2, gains).value;
      const double t2 = gain_relative(lambda2, gains).value;
      s.values.push_back(t1 - t2);
      const double lo = std::min(s.critical_absolute[c], s.critical_relative[c]);
      const double hi = std::max(s.critical_absolute[c], s.critical_relative[c]);
      s.regions.push_back(beta < lo ? Region::BelowBoth
                                    : (beta < hi ? Region::Between : Region::AboveBoth));
    }
  }
  return s;
}

std::string to_csv(const GainSurface& s) {
  std::string out = "alpha,beta,value\n";
  for (std::size_t r = 0; r < s.betas.size(); ++r) {
    for (std::size_t c = 0; c < s.alphas.size(); ++c) {
      out += fmt(s.alphas[c]) + ',' + fmt(s.betas[r]) + ',' + fmt(s.at(r, c)) + '\n';
    }
  }
  return out;
}

std::string to_csv(const DifferenceSurface& s) {
  std::string out = "alpha,beta,value,region\n";
  for (std::size_t r = 0; r < s.betas.size(); ++r) {
    for (std::size_t c = 0; c < s.alphas.size(); ++c) {
      out += fmt(s.alphas[c]) + ',' + fmt(s.betas[r]) + ',' + fmt(s.at(r, c)) + ',' +
             std::string(to_string(s.region_at(r, c))) + '\n';
    }
  }
  return out;
}

std::string to_json(const GainSurface& s) {
  nlohmann::json doc;
  doc["kind"] = "gain_surface";
  doc["grid"] = {{"alpha", axis_json(s.grid.alpha)}, {"beta", axis_json(s.grid.beta)}};
  doc["protocol"] = std::string(to_string(s.protocol));
  doc["lambda2"] = s.lambda2;
  doc["alphas"] = s.alphas;
  doc["betas"] = s.betas;
  doc["values"] = s.values;
  doc["critical_beta"] = s.critical_beta;
  doc["layout"] = "row-major, beta rows, alpha columns";
  return doc.dump();
}

std::string to_json(const DifferenceSurface& s) {
  nlohmann::json doc;
  doc["kind"] = "difference_surface";
  doc["grid"] = {{"alpha", axis_json(s.grid.alpha)}, {"beta", axis_json(s.grid.beta)}};
  doc["lambda2"] = s.lambda2;
  doc["alphas"] = s.alphas;
  doc["betas"] = s.betas;
  doc["values"] = s.values;
  std::vector<std::string> regions;
  regions.reserve(s.regions.size());
  for (const auto r : s.regions) regions.emplace_back(to_string(r));
  doc["regions"] = regions;
  doc["critical_absolute"] = s.critical_absolute;
  doc["critical_relative"] = s.critical_relative;
  doc["layout"] = "row-major, beta rows, alpha columns";
  return doc.dump();
}

// --- Table 1 ----------------------------------------------------------------

std::vector<GraphFamily> table1_families(std::size_t n) {
  return {complete(n), star(n), path(n), ring_lattice(1, n), ring_lattice(2, n),
          ring_lattice(3, n)};
}

std::vector<Table1Row> table1_report(const std::vector<std::size_t>& ns) {
  std::vector<Table1Row> rows;
  for (const auto& proto : table1_families(2)) {
    for (const std::size_t n : ns) {
      GraphFamily f = proto;
      f.n = n;
      try {
        f.validate();
      } catch (const ParameterError&) {
        continue;
      }
      const Graph g = build_family(f);
      Table1Row row;
      row.family = f;
      row.closed_form = closed_form_lambda2(f);
      row.numeric = spectrum(g).algebraic_connectivity();
      row.density = density(g);
      row.verdict = select_protocol(row.numeric).verdict;
      rows.push_back(row);
    }
  }
  return rows;
}

namespace {
std::string_view relation(Verdict v) {
  switch (v) {
    case Verdict::AbsoluteBetter:
      return "<1";
    case Verdict::RelativeBetter:
      return ">1";
    case Verdict::Tie:
      return "=1";
  }
  return "?";
}
}  // namespace

std::string table1_text(const std::vector<Table1Row>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "graph" << std::right << std::setw(6) << "n"
      << std::setw(20) << "lambda2_closed" << std::setw(20) << "lambda2_eig" << std::setw(12)
      << "density" << std::setw(8) << "class" << "  verdict\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(10) << family_label(r.family) << std::right << std::setw(6)
        << r.family.n << std::setw(20) << std::setprecision(12) << r.closed_form
        << std::setw(20) << r.numeric << std::setw(12) << std::setprecision(6)
        << r.density.value() << std::setw(8) << relation(r.verdict) << "  "
        << to_string(r.verdict) << '\n';
  }
  return out.str();
}

std::string table1_csv(const std::vector<Table1Row>& rows) {
  std::string out = "family,n,k,lambda2_closed,lambda2_eig,edges,pairs,density,class,verdict\n";
  for (const auto& r : rows) {
    out += family_label(r.family) + ',' + std::to_string(r.family.n) + ',' +
           std::to_string(r.family.k) + ',' + fmt(r.closed_form) + ',' + fmt(r.numeric) + ',' +
           std::to_string(r.density.edges) + ',' + std::to_string(r.density.pairs) + ',' +
           fmt(r.density.value()) + ',' + std::string(relation(r.verdict)) + ',' +
           std::string(to_string(r.verdict)) + '\n';
  }
  return out;
}

std::string table1_json(const std::vector<Table1Row>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"family", family_label(r.family)},
                   {"n", r.family.n},
                   {"k", r.family.k},
                   {"lambda2_closed", r.closed_form},
                   {"lambda2_eig", r.numeric},
                   {"edges", r.density.edges},
                   {"pairs", r.density.pairs},
                   {"density", r.density.value()},
                   {"verdict", std::string(to_string(r.verdict))}});
  }
  return nlohmann::json{{"table1", std::move(arr)}}.dump();
}

// --- density trends ---------------------------------------------------------

std::string family_label(const GraphFamily& f) {
  if (f.kind == FamilyKind::RingLattice) {
    return "ring" + std::to_string(f.k);
  }
  return std::string(to_string(f.kind));
}

std::map<std::string, std::vector<DensityPoint>> density_trends(
    const std::vector<GraphFamily>& families, std::size_t n_max) {
  std::map<std::string, std::vector<DensityPoint>> out;
  for (const auto& proto : families) {
    const std::size_t n_min = proto.kind == FamilyKind::RingLattice ? 2 * proto.k + 1 : 2;
    if (n_max < n_min) {
      throw ParameterError("n_max=" + std::to_string(n_max) + " is below the smallest valid n for " +
                           family_label(proto));
    }
    auto& seq = out[family_label(proto)];
    for (std::size_t n = n_min; n <= n_max; ++n) {
      GraphFamily f = proto;
      f.n = n;
      seq.push_back({n, density(build_family(f))});
    }
  }
  return out;
}

std::string density_csv(const std::map<std::string, std::vector<DensityPoint>>& t) {
  std::string out = "family,n,edges,pairs,density\n";
  for (const auto& [label, seq] : t) {
    for (const auto& p : seq) {
      out += label + ',' + std::to_string(p.n) + ',' + std::to_string(p.density.edges) + ',' +
             std::to_string(p.density.pairs) + ',' + fmt(p.density.value()) + '\n';
    }
  }
  return out;
}

std::string density_json(const std::map<std::string, std::vector<DensityPoint>>& t) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [label, seq] : t) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : seq) {
      arr.push_back({{"n", p.n}, {"density", p.density.value()}});
    }
    doc[label] = std::move(arr);
  }
  return nlohmann::json{{"density_trends", std::move(doc)}}.dump();
}

}  // namespace consgain
