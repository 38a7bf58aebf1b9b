#include "hodgefan/logmod.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "hodgefan/exact_core.hpp"
#include "hodgefan/hodge.hpp"

namespace hodgefan {

namespace {

std::string vec_to_text(const Vec<Rat>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += rat_to_string(v[i]);
  }
  out += ")";
  return out;
}

nlohmann::ordered_json vec_to_json(const Vec<Rat>& v) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const Rat& x : v) out.push_back(rat_to_string(x));
  return out;
}

nlohmann::ordered_json mat_to_json(const Mat<Rat>& m) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& row : mat_to_strings(m)) out.push_back(row);
  return out;
}

nlohmann::ordered_json cone_to_json(const Cone& c) {
  nlohmann::ordered_json out;
  out["ambient"] = c.ambient;
  nlohmann::ordered_json gens = nlohmann::ordered_json::array();
  for (const Vec<Rat>& g : c.generators) gens.push_back(vec_to_json(g));
  out["generators"] = gens;
  return out;
}

bool is_integer(const Rat& x) { return x.get_den() == 1; }

// Solve R z = v with R the n x d matrix whose columns are `rays`; the
// system is consistent whenever v lies in the span of the rays.
Vec<Rat> coords_in_rays(const std::vector<Vec<Rat>>& rays, const Vec<Rat>& v) {
  const int n = static_cast<int>(v.size());
  const int d = static_cast<int>(rays.size());
  Mat<Rat> m(n, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < n; ++i) m.at(i, j) = rays[j][i];
  }
  Vec<Rat> z;
  if (!mat_solve(m, v, z)) {
    throw std::logic_error("ray coordinates: vector is outside the span of the cone");
  }
  return z;
}

// Top-dimensional pieces of the star subdivision of `c` at `ray`, in the
// canonical cone order.
std::vector<Cone> star_tops(const Cone& c, const Vec<Rat>& ray) {
  ConeComplex pieces = star_subdivision(c, ray);
  std::vector<Cone> tops;
  for (const Cone& p : pieces.cones) {
    if (p.dim() == c.dim()) tops.push_back(p);
  }
  return tops;
}

// The exponent matrix of a child chart: column i is the i-th child ray in
// the parent's ray basis, so x_j = prod_i t_i^{E(j,i)}.
Mat<Rat> substitution_exponents(const Cone& parent, const Cone& child) {
  const int d = parent.dim();
  Mat<Rat> e(d, d);
  for (int i = 0; i < d; ++i) {
    Vec<Rat> z = coords_in_rays(parent.generators, child.generators[i]);
    for (int j = 0; j < d; ++j) e.at(j, i) = z[j];
  }
  return e;
}

bool is_unit_column(const Mat<Rat>& e, int i, int* which) {
  int hit = -1;
  for (int j = 0; j < e.rows; ++j) {
    if (e.at(j, i) == 0) continue;
    if (e.at(j, i) != 1 || hit >= 0) return false;
    hit = j;
  }
  if (hit < 0) return false;
  *which = hit;
  return true;
}

std::string exceptional_label(const Mat<Rat>& e, int i) {
  std::string out = "E(";
  for (int j = 0; j < e.rows; ++j) {
    if (j) out += ",";
    out += rat_to_string(e.at(j, i));
  }
  out += ")";
  return out;
}

std::string monomial_text(const Mat<Rat>& e, int j) {
  std::string out;
  for (int i = 0; i < e.cols; ++i) {
    const Rat& exp = e.at(j, i);
    if (exp == 0) continue;
    if (!out.empty()) out += "*";
    out += "t" + std::to_string(i);
    if (exp != 1) out += "^" + rat_to_string(exp);
  }
  return out.empty() ? "1" : out;
}

}  // namespace

void LocalChart::validate() const {
  if (dim < 0) throw std::invalid_argument("chart '" + name + "': negative dimension");
  if (static_cast<int>(divisors.size()) != dim) {
    throw std::invalid_argument("chart '" + name + "': " + std::to_string(divisors.size()) +
                                " divisor labels for " + std::to_string(dim) + " coordinates");
  }
  if (static_cast<int>(logs.size()) > dim) {
    throw std::invalid_argument("chart '" + name + "': more monodromy logs than coordinates");
  }
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const Mat<Rat>& n = logs[i];
    const std::string at = "chart '" + name + "', log of divisor '" + divisors[i] + "'";
    if (n.rows != n.cols) throw std::invalid_argument(at + ": matrix is not square");
    if (n.rows != logs[0].rows) {
      throw std::invalid_argument(at + ": matrix size differs from the first log");
    }
    if (!mat_is_nilpotent(n)) throw std::invalid_argument(at + ": matrix is not nilpotent");
    if (!mat_is_integral(exp_nilpotent(n))) {
      throw std::invalid_argument(at + ": exponential is not integral");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (!commute(logs[j], n)) {
        throw std::invalid_argument(at + ": does not commute with the log of divisor '" +
                                    divisors[j] + "'");
      }
    }
  }
}

SubdivisionPlan subdivision_to_blowups(const Cone& sigma, const ConeComplex& target) {
  const int n = sigma.ambient;
  const int d = sigma.dim();
  if (static_cast<int>(sigma.generators.size()) != d) {
    throw std::invalid_argument("source cone is not simplicial: " +
                                std::to_string(sigma.generators.size()) +
                                " extreme rays span a space of dimension " + std::to_string(d));
  }

  ConeComplex tgt = target;
  tgt.canonicalize();
  if (tgt.ambient != n) {
    throw NotARefinementError("target lives in ambient dimension " + std::to_string(tgt.ambient) +
                              ", the source cone in " + std::to_string(n));
  }
  FanDecision fd = is_fan(tgt);
  if (!fd.ok) throw NotARefinementError("target is not a fan: " + fd.detail);
  for (const Cone& c : tgt.cones) {
    for (const Vec<Rat>& g : c.generators) {
      if (!sigma.closure_contains(g)) {
        throw NotARefinementError("target ray " + vec_to_text(g) +
                                  " lies outside the source cone");
      }
    }
  }

  // New rays of the target, lexicographically.
  std::vector<Vec<Rat>> new_rays;
  for (const Cone& c : tgt.cones) {
    for (const Vec<Rat>& g : c.generators) {
      if (std::find(sigma.generators.begin(), sigma.generators.end(), g) !=
          sigma.generators.end()) {
        continue;
      }
      if (std::find(new_rays.begin(), new_rays.end(), g) == new_rays.end()) new_rays.push_back(g);
    }
  }
  std::sort(new_rays.begin(), new_rays.end(),
            [](const Vec<Rat>& a, const Vec<Rat>& b) { return vec_lex_compare(a, b) < 0; });

  SubdivisionPlan plan;
  plan.source = sigma;

  ConeComplex current = face_closure(ConeComplex{n, {sigma}});
  std::map<std::vector<Vec<Rat>>, std::string> chart_names;
  chart_names[sigma.generators] = "c0";

  for (const Vec<Rat>& ray : new_rays) {
    BlowupStep step;
    step.center = ray;

    std::vector<Cone> kept;
    std::vector<Cone> split_tops;
    std::vector<Cone> split_rest;
    for (const Cone& c : current.cones) {
      if (!c.closure_contains(ray)) {
        kept.push_back(c);
      } else if (c.dim() == d) {
        split_tops.push_back(c);
      } else {
        split_rest.push_back(c);
      }
    }
    std::sort(split_tops.begin(), split_tops.end(), cone_less);
    if (split_tops.empty()) {
      throw std::logic_error("star center " + vec_to_text(ray) +
                             " is not inside any top-dimensional cell");
    }
    step.affected = chart_names.at(split_tops.front().generators);
    step.weights = coords_in_rays(split_tops.front().generators, ray);

    for (const Cone& parent : split_tops) {
      const std::string parent_name = chart_names.at(parent.generators);
      chart_names.erase(parent.generators);
      std::vector<Cone> children = star_tops(parent, ray);
      for (std::size_t i = 0; i < children.size(); ++i) {
        ChartSubstitution sub;
        sub.parent = parent_name;
        sub.name = parent_name + "." + std::to_string(i);
        sub.cone = children[i];
        sub.exponents = substitution_exponents(parent, children[i]);
        chart_names[children[i].generators] = sub.name;
        step.charts.push_back(std::move(sub));
      }
    }

    ConeComplex next;
    next.ambient = n;
    next.cones = kept;
    for (const Cone& c : split_tops) {
      ConeComplex pieces = star_subdivision(c, ray);
      next.cones.insert(next.cones.end(), pieces.cones.begin(), pieces.cones.end());
    }
    for (const Cone& c : split_rest) {
      ConeComplex pieces = star_subdivision(c, ray);
      next.cones.insert(next.cones.end(), pieces.cones.begin(), pieces.cones.end());
    }
    next.canonicalize();
    current = std::move(next);
    plan.steps.push_back(std::move(step));
  }

  if (!(current == tgt)) {
    bool target_inside = true;
    for (const Cone& c : tgt.cones) {
      if (!current.contains(c)) {
        target_inside = false;
        break;
      }
    }
    if (target_inside) {
      throw NotARefinementError(
          "target does not cover the source cone: star subdivision at its rays yields " +
          std::to_string(current.cones.size()) + " cells, the target lists only " +
          std::to_string(tgt.cones.size()));
    }
    std::string witness;
    for (const Cone& c : tgt.cones) {
      if (!current.contains(c)) {
        witness = c.generators.empty() ? std::string("(origin)") : vec_to_text(c.generators[0]);
        break;
      }
    }
    throw NotReachableByStarsError(
        "star subdivisions at the target's new rays in lexicographic order yield a different "
        "fan; the target cone with first ray " +
        witness + " never appears");
  }

  plan.final_fan = current;
  return plan;
}

std::vector<LocalChart> blowup_chart(const LocalChart& chart, const BlowupStep& step) {
  chart.validate();
  const int k = static_cast<int>(chart.logs.size());

  std::vector<ChartSubstitution> subs;
  for (const ChartSubstitution& s : step.charts) {
    if (s.parent == chart.name) subs.push_back(s);
  }
  const bool named = step.affected == chart.name;
  if (!named && subs.empty()) return {chart};

  if (named) {
    bool inside = static_cast<int>(step.weights.size()) == k;
    bool nonzero = false;
    for (const Rat& w : step.weights) {
      if (!is_integer(w) || rat_sign(w) < 0) inside = false;
      if (rat_sign(w) != 0) nonzero = true;
    }
    if (!inside || !nonzero) {
      throw CenterOutsideError("center of the blow-up at chart '" + chart.name +
                               "' does not lie in its monodromy cone (" + std::to_string(k) +
                               " nonnegative integer weights, not all zero, required)");
    }
  }

  if (subs.empty()) {
    // A bare step naming this chart: synthesize the children from the
    // weights in the chart's own log coordinates.
    Vec<Rat> w(step.weights.begin(), step.weights.end());
    if (!(primitive_ray(w) == w)) {
      throw std::invalid_argument("center weights " + vec_to_text(w) + " are not primitive");
    }
    std::vector<Vec<Rat>> units;
    for (int i = 0; i < k; ++i) {
      Vec<Rat> e(k, Rat(0));
      e[i] = 1;
      units.push_back(e);
    }
    Cone std_cone = Cone::from_generators(units, k);
    std::vector<Cone> children = star_tops(std_cone, w);
    for (std::size_t i = 0; i < children.size(); ++i) {
      ChartSubstitution sub;
      sub.parent = chart.name;
      sub.name = chart.name + "." + std::to_string(i);
      sub.cone = children[i];
      sub.exponents = substitution_exponents(std_cone, children[i]);
      subs.push_back(std::move(sub));
    }
  }

  std::vector<LocalChart> out;
  for (const ChartSubstitution& sub : subs) {
    const Mat<Rat>& e = sub.exponents;
    if (e.rows != k || e.cols != k) {
      throw std::invalid_argument("substitution '" + sub.name + "' expects " +
                                  std::to_string(e.rows) + " log coordinates, chart '" +
                                  chart.name + "' carries " + std::to_string(k));
    }
    LocalChart child;
    child.name = sub.name;
    child.dim = chart.dim;
    child.psi0 = chart.psi0;
    for (int i = 0; i < k; ++i) {
      int j = -1;
      child.divisors.push_back(is_unit_column(e, i, &j) ? chart.divisors[j]
                                                        : exceptional_label(e, i));
      Mat<Rat> log = Mat<Rat>::zero(chart.logs[0].rows, chart.logs[0].cols);
      for (int r = 0; r < k; ++r) log = log + Rat(e.at(r, i)) * chart.logs[r];
      child.logs.push_back(std::move(log));
    }
    for (int i = k; i < chart.dim; ++i) child.divisors.push_back(chart.divisors[i]);
    child.validate();
    out.push_back(std::move(child));
  }
  return out;
}

OrbitLabel boundary_orbit(const LocalChart& chart, const std::vector<std::string>& stratum) {
  chart.validate();
  if (!chart.psi0) {
    throw MissingLimitError("chart '" + chart.name + "' stores no limit filtration");
  }
  const int k = static_cast<int>(chart.logs.size());
  std::vector<int> picked;
  for (const std::string& label : stratum) {
    auto it = std::find(chart.divisors.begin(), chart.divisors.end(), label);
    if (it == chart.divisors.end()) {
      throw std::invalid_argument("chart '" + chart.name + "' has no divisor labelled '" + label +
                                  "'");
    }
    const int idx = static_cast<int>(it - chart.divisors.begin());
    if (idx >= k) {
      throw std::invalid_argument("divisor '" + label + "' of chart '" + chart.name +
                                  "' carries no monodromy log");
    }
    if (std::find(picked.begin(), picked.end(), idx) == picked.end()) picked.push_back(idx);
  }
  std::sort(picked.begin(), picked.end());
  OrbitLabel out;
  for (int idx : picked) out.cone.generators.push_back(chart.logs[idx]);
  out.psi0 = *chart.psi0;
  return out;
}

OrbitLabel boundary_orbit(const LocalChart& chart, const std::vector<std::string>& stratum,
                          const SymplecticLattice& lattice) {
  OrbitLabel label = boundary_orbit(chart, stratum);
  OrbitReport rep = is_nilpotent_orbit(label.cone, label.psi0, lattice.weight, lattice.Q);
  if (!rep.ok) {
    std::string why;
    for (std::size_t i = 0; i < rep.transversality.size(); ++i) {
      if (!rep.transversality[i].ok) {
        why = "generator " + std::to_string(i) + " fails transversality";
        break;
      }
    }
    if (why.empty()) why = "the limit is not a polarized mixed structure on the stratum cone";
    throw std::domain_error("stratum of chart '" + chart.name +
                            "' is not a nilpotent orbit: " + why);
  }
  return label;
}

nlohmann::ordered_json plan_to_json(const SubdivisionPlan& plan) {
  nlohmann::ordered_json out;
  out["source"] = cone_to_json(plan.source);
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const BlowupStep& step : plan.steps) {
    nlohmann::ordered_json js;
    js["center"] = vec_to_json(step.center);
    js["affected"] = step.affected;
    js["weights"] = vec_to_json(Vec<Rat>(step.weights.begin(), step.weights.end()));
    nlohmann::ordered_json charts = nlohmann::ordered_json::array();
    for (const ChartSubstitution& sub : step.charts) {
      nlohmann::ordered_json jc;
      jc["parent"] = sub.parent;
      jc["name"] = sub.name;
      jc["cone"] = cone_to_json(sub.cone);
      jc["exponents"] = mat_to_json(sub.exponents);
      charts.push_back(std::move(jc));
    }
    js["charts"] = std::move(charts);
    steps.push_back(std::move(js));
  }
  out["steps"] = std::move(steps);
  nlohmann::ordered_json fan;
  fan["ambient"] = plan.final_fan.ambient;
  nlohmann::ordered_json cones = nlohmann::ordered_json::array();
  for (const Cone& c : plan.final_fan.cones) cones.push_back(cone_to_json(c));
  fan["cones"] = std::move(cones);
  out["final_fan"] = std::move(fan);
  return out;
}

std::string plan_to_script(const SubdivisionPlan& plan) {
  std::ostringstream out;
  out << "blow-up script for the cone with rays";
  if (plan.source.generators.empty()) out << " (none)";
  for (const Vec<Rat>& g : plan.source.generators) out << " " << vec_to_text(g);
  out << "\n";
  if (plan.steps.empty()) {
    out << "no blow-ups needed: the target is the face closure of the source\n";
  }
  for (std::size_t s = 0; s < plan.steps.size(); ++s) {
    const BlowupStep& step = plan.steps[s];
    out << "step " << (s + 1) << ": blow up at center " << vec_to_text(step.center) << " in chart "
        << step.affected << ", weights "
        << vec_to_text(Vec<Rat>(step.weights.begin(), step.weights.end())) << "\n";
    for (const ChartSubstitution& sub : step.charts) {
      out << "  " << sub.parent << " -> " << sub.name << ": rays";
      for (const Vec<Rat>& g : sub.cone.generators) out << " " << vec_to_text(g);
      out << ";";
      for (int j = 0; j < sub.exponents.rows; ++j) {
        out << (j ? ", " : " ") << "x" << j << " = " << monomial_text(sub.exponents, j);
      }
      out << "\n";
    }
  }
  int tops = 0;
  int top_dim = 0;
  for (const Cone& c : plan.final_fan.cones) top_dim = std::max(top_dim, c.dim());
  for (const Cone& c : plan.final_fan.cones) {
    if (c.dim() == top_dim) ++tops;
  }
  out << "final fan: " << plan.final_fan.cones.size() << " cones (" << tops
      << " of top dimension)\n";
  return out.str();
}

}  // namespace hodgefan
