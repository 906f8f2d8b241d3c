#include <doctest.h>

#include <cmath>

#include "paramsets.hpp"
#include "thz/errors.hpp"
#include "thz/observables.hpp"
#include "thz/optimize.hpp"

using namespace thz;

namespace {

Cavity cavity(double chi, double kappa, double f = 1000.0, double gamma = testutil::kGammaEmitter) {
  return Cavity{chi, kappa, f, gamma, 5};
}

MaximizeOptions small_grid() {
  MaximizeOptions o;
  o.grid_omega = 4;
  o.grid_theta = 4;
  return o;
}

}  // namespace

TEST_CASE("maximize_concurrence near the 1 THz optimum") {
  Cavity cav = cavity(35.0, 20.0);
  OptimResult r = maximize_concurrence(cav, 500.0);
  MESSAGE("C = " << r.concurrence << " at Omega~ " << r.omega_r_tilde << " theta~ " << r.theta_tilde << " after "
                 << r.evaluations << " evaluations");
  CHECK(r.concurrence == doctest::Approx(0.90).epsilon(0.03 / 0.90));
  CHECK(r.converged);
  CHECK(r.rwa_valid);
  CHECK(r.adiabatic_valid);
  // stored optimum re-evaluates to the same number
  CHECK(std::abs(reduced_concurrence(cav, 500.0, r.omega_r_tilde, r.theta_tilde) - r.concurrence) <= 1e-8);
  // the optimum satisfies the conditions by construction
  CHECK(condition_residuals(r.params).all());
  CHECK(r.params.omega[0] == 500.0);
}

TEST_CASE("without emitter decay the dark state is reached almost exactly") {
  OptimResult r = maximize_concurrence(cavity(35.0, 20.0, 1000.0, 0.0), 500.0);
  MESSAGE("gamma = 0: C = " << r.concurrence << " theta~ " << r.theta_tilde);
  CHECK(r.concurrence > 0.98);
}

TEST_CASE("vanishing drive cap gives no entanglement") {
  OptimResult r = maximize_concurrence(cavity(35.0, 20.0), 1e-3, small_grid());
  CHECK(r.concurrence < 1e-3);
}

TEST_CASE("maximize_concurrence is deterministic") {
  Cavity cav = cavity(25.0, 40.0);
  OptimResult a = maximize_concurrence(cav, 500.0, small_grid());
  OptimResult b = maximize_concurrence(cav, 500.0, small_grid());
  CHECK(a.concurrence == b.concurrence);
  CHECK(a.omega_r_tilde == b.omega_r_tilde);
  CHECK(a.theta_tilde == b.theta_tilde);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("validity flags follow the inequalities at the boundary") {
  // f_thz = 10 kappa exactly counts as inside the RWA region
  OptimResult r = maximize_concurrence(cavity(25.0, 100.0), 500.0, small_grid());
  CHECK(r.rwa_valid);
  OptimResult s = maximize_concurrence(cavity(25.0, 100.0 * (1 + 1e-12)), 500.0, small_grid());
  CHECK_FALSE(s.rwa_valid);
  double th = 0.5 * std::asin(r.params.omega[0] / std::hypot(r.params.omega[0], r.params.delta[0]));
  CHECK(r.adiabatic_valid == (100.0 >= std::sin(2 * th) * 25.0));
}

TEST_CASE("maximize_concurrence rejects bad cavities") {
  CHECK_THROWS_AS(maximize_concurrence(cavity(0.0, 20.0), 500.0), InvalidArgument);
  CHECK_THROWS_AS(maximize_concurrence(cavity(20.0, 0.0), 500.0), InvalidArgument);
  // the drive cap exceeds every reachable Omega_R1
  CHECK_THROWS_AS(maximize_concurrence(cavity(20.0, 20.0), 5000.0, small_grid()), InfeasibleError);
}

TEST_CASE("axis values") {
  Axis lin{"x", 1.0, 3.0, 3, false};
  CHECK(lin.values() == std::vector<double>{1.0, 2.0, 3.0});
  Axis lg{"x", 1.0, 100.0, 3, true};
  CHECK(lg.values()[1] == doctest::Approx(10.0));
  CHECK(Axis{"x", 1.0, 1.0, 0, false}.values().empty());
  CHECK_THROWS_AS((Axis{"x", 0.0, 1.0, 3, true}.values()), InvalidArgument);
}

TEST_CASE("sweep_map") {
  SweepRequest req;
  req.f_thz = 1000.0;
  req.n_fock = 4;
  req.opt = small_grid();
  SUBCASE("zero-size grid") {
    req.chi.points = 0;
    SweepGrid g = sweep_map(req);
    CHECK(g.points.empty());
    CHECK(g.best() == nullptr);
  }
  SUBCASE("per-point failures are recorded and the rest is evaluated") {
    req.chi_values = {25.0};
    req.kappa_values = {0.0, 40.0};
    SweepGrid g = sweep_map(req);
    REQUIRE(g.points.size() == 2);
    CHECK_FALSE(g.points[0].ok);
    CHECK_FALSE(g.points[0].failure.empty());
    CHECK(g.points[1].ok);
    CHECK(g.best() == &g.points[1]);
  }
  SUBCASE("thread count does not change the result") {
    req.chi_values = {20.0, 40.0};
    req.kappa_values = {30.0, 60.0};
    req.threads = 1;
    SweepGrid a = sweep_map(req);
    req.threads = 3;
    SweepGrid b = sweep_map(req);
    REQUIRE(a.points.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(a.points[k].x == b.points[k].x);
      CHECK(a.points[k].y == b.points[k].y);
      CHECK(a.points[k].best.concurrence == b.points[k].best.concurrence);
    }
    CHECK(a.points[1].x == 20.0);
    CHECK(a.points[1].y == 60.0);
  }
}

TEST_CASE("drive plane around the operating point") {
  PlaneRequest q;
  q.base = testutil::operating_point(4);
  q.omega1 = {"omega1", 491.7, 507.7, 9, false};
  q.omega2 = {"omega2", 488.3, 504.3, 9, false};
  PlaneResult r = drive_plane(q);
  REQUIRE(r.points.size() == 81);
  REQUIRE(r.intersection.has_value());
  const PlanePoint& best = r.points[r.argmax_concurrence];
  MESSAGE("C max " << best.concurrence << " at (" << best.omega1 << ", " << best.omega2 << "), curves meet at ("
                   << (*r.intersection)[0] << ", " << (*r.intersection)[1] << ") spread "
                   << r.intersection_spread << ", Pearson " << r.pearson_c_g2);
  for (int k = 0; k < 3; ++k) CHECK_FALSE(r.curves[k].empty());
  // the maximum sits ~1 GHz below the intersection in Omega2; the concurrence there is nearly maximal
  SystemParams at = q.base;
  at.omega = *r.intersection;
  double c_at = steady_report(at, ModelLevel::Grwa).concurrence;
  CHECK(best.concurrence - c_at < 0.005);
  CHECK(std::hypot((*r.intersection)[0] - best.omega1, (*r.intersection)[1] - best.omega2) < 2.0 * std::sqrt(2.0));
  CHECK(r.pearson_c_g2 < 0.0);
  // the curves meet close to the operating point
  CHECK(std::abs((*r.intersection)[0] - 499.7) < 0.5);
  CHECK(std::abs((*r.intersection)[1] - 496.3) < 0.5);
}

TEST_CASE("drive plane is symmetric for identical emitters") {
  PlaneRequest q;
  q.base = testutil::operating_point(3);
  q.base.delta = {870.0, 870.0};
  q.base.omega_sb = {17.0, 17.0};
  q.omega1 = {"omega1", 494.0, 502.0, 5, false};
  q.omega2 = q.omega1;
  PlaneResult r = drive_plane(q);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(r.points[i * 5 + j].concurrence == doctest::Approx(r.points[j * 5 + i].concurrence).epsilon(1e-9));
      CHECK(r.points[i * 5 + j].conditions.residual1 ==
            doctest::Approx(r.points[j * 5 + i].conditions.residual1).epsilon(1e-12));
    }
}

TEST_CASE("full model agrees with the GRWA at the operating point") {
  FullValidation v = validate_full(testutil::operating_point(), {3, 1e-6, 64});
  MESSAGE("C_grwa " << v.c_grwa << " C_full " << v.c_full << " oscillation " << v.oscillation << " periods "
                    << v.periods);
  CHECK(std::abs(v.delta) <= 0.05);
  CHECK(v.residual <= 1e-6);
  CHECK(v.oscillation > 0.0);
}

TEST_CASE("full model without coupling") {
  SystemParams p = testutil::operating_point();
  p.chi = {0.0, 0.0};
  FullValidation v = validate_full(p, {2, 1e-6, 32});
  CHECK(v.c_grwa < 1e-6);
  CHECK(v.c_full < 1e-6);
  CHECK(std::abs(v.delta) < 1e-6);
}

TEST_CASE("full model deep in the RWA region") {
  // f_thz / kappa = 62.5
  OptimResult opt = maximize_concurrence(cavity(25.0, 16.0), 500.0, small_grid());
  FullValidation v = validate_full(opt.params, {3, 1e-6, 64});
  MESSAGE("deep RWA: C_grwa " << v.c_grwa << " C_full " << v.c_full);
  CHECK(std::abs(v.delta) <= 0.02);
}
