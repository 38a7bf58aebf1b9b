#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "hodgefan/exact_core.hpp"
#include "hodgefan/logmod.hpp"
#include "test_util.hpp"

using namespace hodgefan;
using tu::GV;
using tu::M;
using tu::V;

namespace {

Cone quadrant() { return Cone::from_generators({V({1, 0}), V({0, 1})}, 2); }

ConeComplex closed_fan(int ambient, std::vector<std::vector<Vec<Rat>>> tops) {
  ConeComplex cc;
  cc.ambient = ambient;
  for (auto& gens : tops) cc.cones.push_back(Cone::from_generators(gens, ambient));
  cc.canonicalize();
  return face_closure(cc);
}

Mat<Rat> nx() { return M({{0, 1}, {0, 0}}); }
Mat<Rat> ny() { return M({{0, 2}, {0, 0}}); }

HodgeFiltration limit_f() {
  HodgeFiltration f;
  f.lo = 0;
  f.f = {Subspace<GaussRat>::full(2), canonical_subspace<GaussRat>(2, {GV({"0+1 i", "1"})})};
  return f;
}

LocalChart base_chart() {
  LocalChart c;
  c.name = "c0";
  c.dim = 2;
  c.divisors = {"x", "y"};
  c.logs = {nx(), ny()};
  c.psi0 = limit_f();
  return c;
}

SymplecticLattice elliptic_lattice() {
  SymplecticLattice l;
  l.rank = 2;
  l.weight = 1;
  l.hodge_numbers = {1, 1};
  l.Q = M({{0, -1}, {1, 0}});
  l.validate();
  return l;
}

const LocalChart& chart_named(const std::vector<LocalChart>& charts, const std::string& name) {
  auto it = std::find_if(charts.begin(), charts.end(),
                         [&](const LocalChart& c) { return c.name == name; });
  REQUIRE(it != charts.end());
  return *it;
}

}  // namespace

TEST_CASE("local chart validation") {
  LocalChart c = base_chart();
  CHECK_NOTHROW(c.validate());

  SUBCASE("label count must match the dimension") {
    c.divisors = {"x"};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
  SUBCASE("at most one log per coordinate") {
    c.dim = 1;
    c.divisors = {"x"};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
  SUBCASE("logs must commute") {
    c.logs = {nx(), M({{0, 0}, {1, 0}})};
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("does not commute"),
                         std::invalid_argument);
  }
  SUBCASE("logs must be nilpotent") {
    c.logs = {nx(), M({{1, 0}, {0, 1}})};
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("not nilpotent"), std::invalid_argument);
  }
  SUBCASE("exponentials must be integral") {
    c.logs = {nx(), tu::Mq({{"0", "1/2"}, {"0", "0"}})};
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("exponential is not integral"),
                         std::invalid_argument);
  }
}

TEST_CASE("target equal to the face closure of the source needs no blow-up") {
  Cone sigma = quadrant();
  ConeComplex target = closed_fan(2, {{V({1, 0}), V({0, 1})}});
  SubdivisionPlan plan = subdivision_to_blowups(sigma, target);
  CHECK(plan.steps.empty());
  CHECK(plan.final_fan == target);
  CHECK(plan_to_script(plan).find("no blow-ups needed") != std::string::npos);
}

TEST_CASE("subdividing the quadrant at the diagonal is a single blow-up at the origin") {
  Cone sigma = quadrant();
  ConeComplex target =
      closed_fan(2, {{V({1, 0}), V({1, 1})}, {V({1, 1}), V({0, 1})}});
  SubdivisionPlan plan = subdivision_to_blowups(sigma, target);

  REQUIRE(plan.steps.size() == 1);
  const BlowupStep& step = plan.steps[0];
  CHECK(step.center == V({1, 1}));
  CHECK(step.affected == "c0");
  CHECK(Vec<Rat>(step.weights.begin(), step.weights.end()) == V({1, 1}));

  // The chart coordinates follow the canonical generator order of the
  // quadrant, which lists (0,1) before (1,0).
  REQUIRE(step.charts.size() == 2);
  CHECK(step.charts[0].parent == "c0");
  CHECK(step.charts[0].name == "c0.0");
  CHECK(step.charts[0].cone == Cone::from_generators({V({0, 1}), V({1, 1})}, 2));
  CHECK(step.charts[0].exponents == M({{1, 1}, {0, 1}}));
  CHECK(step.charts[1].name == "c0.1");
  CHECK(step.charts[1].cone == Cone::from_generators({V({1, 0}), V({1, 1})}, 2));
  CHECK(step.charts[1].exponents == M({{0, 1}, {1, 1}}));

  CHECK(plan.final_fan == target);
  CHECK(plan.final_fan.cones.size() == 6);
}

TEST_CASE("ordinary blow-up transports charts, labels, and logs") {
  Cone sigma = quadrant();
  ConeComplex target =
      closed_fan(2, {{V({1, 0}), V({1, 1})}, {V({1, 1}), V({0, 1})}});
  SubdivisionPlan plan = subdivision_to_blowups(sigma, target);
  std::vector<LocalChart> charts = blowup_chart(base_chart(), plan.steps[0]);
  REQUIRE(charts.size() == 2);

  const LocalChart& around_x = chart_named(charts, "c0.0");
  CHECK(around_x.divisors == std::vector<std::string>{"x", "E(1,1)"});
  REQUIRE(around_x.logs.size() == 2);
  CHECK(around_x.logs[0] == nx());
  CHECK(around_x.logs[1] == nx() + ny());
  CHECK(around_x.psi0.has_value());
  CHECK(*around_x.psi0 == limit_f());

  const LocalChart& around_y = chart_named(charts, "c0.1");
  CHECK(around_y.divisors == std::vector<std::string>{"y", "E(1,1)"});
  CHECK(around_y.logs[0] == ny());
  CHECK(around_y.logs[1] == nx() + ny());

  SUBCASE("a bare step with the same weights produces the same charts") {
    BlowupStep bare;
    bare.center = V({1, 1});
    bare.affected = "c0";
    bare.weights = {Rat(1), Rat(1)};
    std::vector<LocalChart> direct = blowup_chart(base_chart(), bare);
    REQUIRE(direct.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(direct[i].name == charts[i].name);
      CHECK(direct[i].divisors == charts[i].divisors);
      CHECK(direct[i].logs[0] == charts[i].logs[0]);
      CHECK(direct[i].logs[1] == charts[i].logs[1]);
    }
  }

  SUBCASE("a chart the step does not involve is returned unchanged") {
    LocalChart other = base_chart();
    other.name = "elsewhere";
    std::vector<LocalChart> untouched = blowup_chart(other, plan.steps[0]);
    REQUIRE(untouched.size() == 1);
    CHECK(untouched[0].name == "elsewhere");
    CHECK(untouched[0].divisors == std::vector<std::string>{"x", "y"});
    CHECK(untouched[0].logs[0] == nx());
    CHECK(untouched[0].logs[1] == ny());
  }
}

TEST_CASE("a new interior ray with unequal weights is a weighted blow-up") {
  Cone sigma = quadrant();
  ConeComplex target =
      closed_fan(2, {{V({1, 0}), V({1, 2})}, {V({1, 2}), V({0, 1})}});
  SubdivisionPlan plan = subdivision_to_blowups(sigma, target);

  REQUIRE(plan.steps.size() == 1);
  const BlowupStep& step = plan.steps[0];
  CHECK(step.center == V({1, 2}));
  CHECK(Vec<Rat>(step.weights.begin(), step.weights.end()) == V({2, 1}));

  REQUIRE(step.charts.size() == 2);
  CHECK(step.charts[0].cone == Cone::from_generators({V({0, 1}), V({1, 2})}, 2));
  CHECK(step.charts[0].exponents == M({{1, 2}, {0, 1}}));
  CHECK(step.charts[1].cone == Cone::from_generators({V({1, 0}), V({1, 2})}, 2));
  CHECK(step.charts[1].exponents == M({{0, 2}, {1, 1}}));
  CHECK(plan.final_fan == target);

  SUBCASE("pullback-of-monomials oracle ties exponents to the child rays") {
    for (const ChartSubstitution& sub : step.charts) {
      const Mat<Rat>& e = sub.exponents;
      // Invertible off the exceptional locus.
      CHECK(mat_det(e) != 0);
      // Column i of E claims that pulling the parent coordinates back
      // along the substitution turns the monomial of child ray i into the
      // ray itself: sum_j E(j,i) * p_j must reproduce the child ray, with
      // both rays read independently from the stored cones.
      for (int i = 0; i < 2; ++i) {
        Vec<Rat> rebuilt = vec_scale(e.at(0, i), sigma.generators[0]);
        rebuilt = vec_add(rebuilt, vec_scale(e.at(1, i), sigma.generators[1]));
        CHECK(rebuilt == sub.cone.generators[i]);
      }
    }
    // The chart keeping the full ray basis change has index 2, the other
    // is unimodular.
    CHECK(mat_det(step.charts[0].exponents) == 1);
    CHECK(mat_det(step.charts[1].exponents) == -2);
  }

  SUBCASE("the exceptional coordinate carries the weighted log") {
    std::vector<LocalChart> charts = blowup_chart(base_chart(), step);
    const LocalChart& around_x = chart_named(charts, "c0.0");
    CHECK(around_x.divisors == std::vector<std::string>{"x", "E(2,1)"});
    CHECK(around_x.logs[1] == Rat(2) * nx() + ny());
    CHECK(mat_is_integral(exp_nilpotent(around_x.logs[1])));
    const LocalChart& around_y = chart_named(charts, "c0.1");
    CHECK(around_y.divisors == std::vector<std::string>{"y", "E(2,1)"});
    CHECK(around_y.logs[1] == Rat(2) * nx() + ny());
  }
}

TEST_CASE("several new rays are blown up in lexicographic order") {
  Cone sigma = quadrant();
  ConeComplex target = closed_fan(2, {{V({1, 0}), V({1, 1})},
                                      {V({1, 1}), V({1, 2})},
                                      {V({1, 2}), V({0, 1})}});
  SubdivisionPlan plan = subdivision_to_blowups(sigma, target);

  REQUIRE(plan.steps.size() == 2);
  CHECK(plan.steps[0].center == V({1, 1}));
  CHECK(plan.steps[0].affected == "c0");
  CHECK(plan.steps[1].center == V({1, 2}));
  CHECK(plan.steps[1].affected == "c0.0");
  CHECK(Vec<Rat>(plan.steps[1].weights.begin(), plan.steps[1].weights.end()) == V({1, 1}));

  REQUIRE(plan.steps[1].charts.size() == 2);
  CHECK(plan.steps[1].charts[0].name == "c0.0.0");
  CHECK(plan.steps[1].charts[0].cone == Cone::from_generators({V({0, 1}), V({1, 2})}, 2));
  CHECK(plan.steps[1].charts[1].name == "c0.0.1");
  CHECK(plan.steps[1].charts[1].cone == Cone::from_generators({V({1, 1}), V({1, 2})}, 2));

  CHECK(plan.final_fan == target);
  // 3 tops, 4 rays, the origin.
  CHECK(plan.final_fan.cones.size() == 8);
}

TEST_CASE("refinement preconditions are enforced") {
  Cone sigma = quadrant();

  SUBCASE("a target ray outside the source cone") {
    ConeComplex target =
        closed_fan(2, {{V({1, 0}), V({-1, 1})}});
    CHECK_THROWS_WITH_AS(subdivision_to_blowups(sigma, target),
                         doctest::Contains("outside the source cone"), NotARefinementError);
  }
  SUBCASE("a target that is not face-closed is not a fan") {
    ConeComplex target;
    target.ambient = 2;
    target.cones = {sigma};
    CHECK_THROWS_WITH_AS(subdivision_to_blowups(sigma, target),
                         doctest::Contains("not a fan"), NotARefinementError);
  }
  SUBCASE("a target covering only part of the source") {
    ConeComplex target = closed_fan(2, {{V({1, 0}), V({1, 1})}});
    CHECK_THROWS_WITH_AS(subdivision_to_blowups(sigma, target),
                         doctest::Contains("does not cover the source cone"), NotARefinementError);
  }
  SUBCASE("a non-simplicial source is rejected") {
    Cone square = Cone::from_generators(
        {V({1, 0, 1}), V({0, 1, 1}), V({-1, 0, 1}), V({0, -1, 1})}, 3);
    ConeComplex target = closed_fan(3, {{V({1, 0, 1}), V({0, 1, 1}), V({-1, 0, 1}), V({0, -1, 1})}});
    CHECK_THROWS_WITH_AS(subdivision_to_blowups(square, target),
                         doctest::Contains("not simplicial"), std::invalid_argument);
  }
}

TEST_CASE("a fan reachable only in non-lexicographic star order is refused") {
  Cone sigma = Cone::from_generators({V({1, 0, 0}), V({0, 1, 0}), V({0, 0, 1})}, 3);
  // Starring first at (1,1,0) and then at (0,1,1) produces this fan; the
  // lexicographic order visits (0,1,1) first and lands elsewhere.
  ConeComplex target = closed_fan(3, {{V({1, 0, 0}), V({0, 0, 1}), V({1, 1, 0})},
                                      {V({0, 1, 0}), V({1, 1, 0}), V({0, 1, 1})},
                                      {V({0, 0, 1}), V({1, 1, 0}), V({0, 1, 1})}});
  CHECK(is_fan(target).ok);
  CHECK_THROWS_AS(subdivision_to_blowups(sigma, target), NotReachableByStarsError);
}

TEST_CASE("center checks when applying a step to a chart") {
  LocalChart chart = base_chart();

  BlowupStep step;
  step.affected = "c0";

  SUBCASE("negative weights leave the monodromy cone") {
    step.center = V({1, -1});
    step.weights = {Rat(1), Rat(-1)};
    CHECK_THROWS_AS(blowup_chart(chart, step), CenterOutsideError);
  }
  SUBCASE("zero weights are no center at all") {
    step.center = V({0, 0});
    step.weights = {Rat(0), Rat(0)};
    CHECK_THROWS_AS(blowup_chart(chart, step), CenterOutsideError);
  }
  SUBCASE("fractional weights leave the lattice") {
    step.center = V({1, 1});
    step.weights = {Rat(1, 2), Rat(1)};
    CHECK_THROWS_AS(blowup_chart(chart, step), CenterOutsideError);
  }
  SUBCASE("the weight count must match the chart's logs") {
    step.center = V({1, 1});
    step.weights = {Rat(1)};
    CHECK_THROWS_AS(blowup_chart(chart, step), CenterOutsideError);
  }
  SUBCASE("imprimitive weights are rejected") {
    step.center = V({2, 2});
    step.weights = {Rat(2), Rat(2)};
    CHECK_THROWS_WITH_AS(blowup_chart(chart, step), doctest::Contains("not primitive"),
                         std::invalid_argument);
  }
}

TEST_CASE("boundary strata are labelled by their logs and the limit filtration") {
  LocalChart chart = base_chart();

  SUBCASE("the deepest stratum of the unblown chart") {
    OrbitLabel label = boundary_orbit(chart, {"x", "y"});
    REQUIRE(label.cone.generators.size() == 2);
    CHECK(label.cone.generators[0] == nx());
    CHECK(label.cone.generators[1] == ny());
    CHECK(label.psi0 == limit_f());
  }
  SUBCASE("generators follow chart coordinates, not the query order") {
    OrbitLabel label = boundary_orbit(chart, {"y", "x", "y"});
    REQUIRE(label.cone.generators.size() == 2);
    CHECK(label.cone.generators[0] == nx());
    CHECK(label.cone.generators[1] == ny());
  }
  SUBCASE("unknown labels are named") {
    CHECK_THROWS_WITH_AS(boundary_orbit(chart, {"w"}), doctest::Contains("no divisor labelled"),
                         std::invalid_argument);
  }
  SUBCASE("a log-free coordinate cannot enter a stratum label") {
    LocalChart wide = chart;
    wide.dim = 3;
    wide.divisors = {"x", "y", "z"};
    CHECK_THROWS_WITH_AS(boundary_orbit(wide, {"z"}), doctest::Contains("no monodromy log"),
                         std::invalid_argument);
  }
  SUBCASE("a chart without a limit filtration cannot be labelled") {
    chart.psi0.reset();
    CHECK_THROWS_AS(boundary_orbit(chart, {"x"}), MissingLimitError);
  }
}

TEST_CASE("orbit labels are constant across the charts seeing the exceptional divisor") {
  Cone sigma = quadrant();
  ConeComplex target =
      closed_fan(2, {{V({1, 0}), V({1, 1})}, {V({1, 1}), V({0, 1})}});
  SubdivisionPlan plan = subdivision_to_blowups(sigma, target);
  std::vector<LocalChart> charts = blowup_chart(base_chart(), plan.steps[0]);

  OrbitLabel on_e_0 = boundary_orbit(charts[0], {"E(1,1)"});
  OrbitLabel on_e_1 = boundary_orbit(charts[1], {"E(1,1)"});
  REQUIRE(on_e_0.cone.generators.size() == 1);
  CHECK(on_e_0.cone.generators[0] == nx() + ny());
  CHECK(on_e_1.cone.generators[0] == nx() + ny());
  CHECK(on_e_0.psi0 == on_e_1.psi0);

  OrbitLabel corner = boundary_orbit(chart_named(charts, "c0.1"), {"y", "E(1,1)"});
  REQUIRE(corner.cone.generators.size() == 2);
  CHECK(corner.cone.generators[0] == ny());
  CHECK(corner.cone.generators[1] == nx() + ny());
}

TEST_CASE("the validating overload runs the nilpotent-orbit test") {
  SymplecticLattice l = elliptic_lattice();
  LocalChart chart;
  chart.name = "disc";
  chart.dim = 1;
  chart.divisors = {"x"};
  chart.logs = {nx()};
  chart.psi0 = limit_f();

  OrbitLabel label = boundary_orbit(chart, {"x"}, l);
  REQUIRE(label.cone.generators.size() == 1);
  CHECK(label.cone.generators[0] == nx());

  SUBCASE("the reversed log fails polarization") {
    chart.logs = {M({{0, -1}, {0, 0}})};
    CHECK_THROWS_WITH_AS(boundary_orbit(chart, {"x"}, l),
                         doctest::Contains("not a nilpotent orbit"), std::domain_error);
  }
}

TEST_CASE("plans serialize to JSON and to a deterministic script") {
  Cone sigma = quadrant();
  ConeComplex target =
      closed_fan(2, {{V({1, 0}), V({1, 2})}, {V({1, 2}), V({0, 1})}});
  SubdivisionPlan plan = subdivision_to_blowups(sigma, target);

  nlohmann::ordered_json js = plan_to_json(plan);
  CHECK(js["source"]["generators"].size() == 2);
  REQUIRE(js["steps"].size() == 1);
  CHECK(js["steps"][0]["center"] == nlohmann::ordered_json::array({"1", "2"}));
  CHECK(js["steps"][0]["affected"] == "c0");
  CHECK(js["steps"][0]["weights"] == nlohmann::ordered_json::array({"2", "1"}));
  CHECK(js["steps"][0]["charts"].size() == 2);
  CHECK(js["steps"][0]["charts"][1]["exponents"][0] ==
        nlohmann::ordered_json::array({"0", "2"}));
  CHECK(js["final_fan"]["cones"].size() == 6);

  std::string script = plan_to_script(plan);
  CHECK(script.find("step 1: blow up at center (1, 2) in chart c0, weights (2, 1)") !=
        std::string::npos);
  CHECK(script.find("c0 -> c0.0") != std::string::npos);
  CHECK(script.find("x0 = t1^2") != std::string::npos);
  CHECK(script.find("x1 = t0*t1") != std::string::npos);
  CHECK(script.find("final fan: 6 cones (2 of top dimension)") != std::string::npos);

  // Regenerating the plan reproduces both forms byte for byte.
  SubdivisionPlan again = subdivision_to_blowups(sigma, target);
  CHECK(plan_to_json(again).dump() == js.dump());
  CHECK(plan_to_script(again) == script);
}
