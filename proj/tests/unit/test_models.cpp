#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "paramsets.hpp"
#include "thz/errors.hpp"
#include "thz/models.hpp"

using namespace thz;
using testutil::max_abs;

namespace {

SystemParams single(double omega, double delta) {
  SystemParams p;
  p.f_thz = 1000.0;
  p.omega = {omega, omega};
  p.delta = {delta, delta};
  return p;
}

}  // namespace

TEST_CASE("dressed_frame closed forms") {
  DressedFrame d = dressed_frame(single(1.0, 0.0));
  CHECK(d.theta[0] == doctest::Approx(M_PI / 4).epsilon(1e-15));
  CHECK(d.omega_r[0] == doctest::Approx(1.0));
  CHECK(d.lamb[0] == doctest::Approx(0.0));
  CHECK(d.J == doctest::Approx(0.0));

  SystemParams p = testutil::spectrum_point(0.0);
  d = dressed_frame(p);
  CHECK(d.omega_r[0] == doctest::Approx(std::sqrt(871.6 * 871.6 + 499.8 * 499.8)).epsilon(1e-14));
  CHECK(d.omega_r[0] == doctest::Approx(1004.7).epsilon(1e-4));

  d = dressed_frame(single(1e-9, 5.0));
  CHECK(d.theta[0] < 1e-9);
  CHECK(dressed_frame(single(0.0, 5.0)).theta[0] == 0.0);
  CHECK_THROWS_AS(dressed_frame(single(0.0, 0.0)), InvalidArgument);
}

TEST_CASE("dressed_frame mixing angle matches the arctan form") {
  for (auto [om, de] : {std::pair{499.7, 874.9}, {3.0, -2.0}, {1.0, 10.0}}) {
    DressedFrame d = dressed_frame(single(om, de));
    double ref = std::atan((std::hypot(om, de) - de) / om);
    CHECK(d.theta[0] == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("Lamb shift and J at the operating point") {
  SystemParams p = testutil::operating_point();
  DressedFrame d = dressed_frame(p);
  for (int i = 0; i < 2; ++i) {
    double c2 = std::cos(2 * d.theta[i]);
    CHECK(d.lamb[i] == doctest::Approx(8 * 24.4 * 24.4 * c2 / 1000.0).epsilon(1e-13));
    CHECK(d.delta_r[i] == doctest::Approx(d.omega_r[i] - 1000.0 - d.lamb[i]));
  }
  double ref_j = 2 * 24.4 * 24.4 * std::cos(2 * d.theta[0]) * std::cos(2 * d.theta[1]) / 1000.0;
  CHECK(d.J == doctest::Approx(ref_j).epsilon(1e-13));
}

TEST_CASE("doubly_dressed_frame closed forms") {
  SystemParams p;
  p.f_thz = 1000.0;
  p.chi = {24.4, 24.4};
  p.kappa = 59.6;
  // theta = pi/4 and Omega_R = f_thz so that Delta_R = -Lambda = 0
  p.omega = {1000.0, 1000.0};
  p.delta = {0.0, 0.0};
  p.omega_sb = {3.0, 3.0};
  DressedFrame d = dressed_frame(p);
  REQUIRE(d.delta_r[0] == doctest::Approx(0.0));
  DoublyDressedFrame dd = doubly_dressed_frame(p, d);
  CHECK(dd.theta[0] == doctest::Approx(M_PI / 4));
  CHECK(dd.purcell[0] == doctest::Approx(4 * 24.4 * 24.4 / 59.6).epsilon(1e-13));
  CHECK(dd.purcell[0] == doctest::Approx(39.96).epsilon(1e-4));
  CHECK(dd.omega_r[0] == doctest::Approx(0.5 * 3.0).epsilon(1e-13));  // c^2 Omega_sb

  p.omega = {900.0, 900.0};
  p.delta = {600.0, 600.0};
  p.omega_sb = {0.0, 0.0};
  d = dressed_frame(p);
  REQUIRE(d.delta_r[0] > 0.0);
  dd = doubly_dressed_frame(p, d);
  CHECK(dd.theta[0] == 0.0);
  CHECK(dd.omega_r[0] == doctest::Approx(d.delta_r[0]));
}

TEST_CASE("closed forms are scale covariant") {
  SystemParams p = testutil::operating_point();
  DressedFrame d = dressed_frame(p);
  DoublyDressedFrame dd = doubly_dressed_frame(p, d);
  const double ls = 3.7;
  SystemParams q = p;
  q.f_thz *= ls;
  q.kappa *= ls;
  for (int i = 0; i < 2; ++i) {
    q.omega[i] *= ls;
    q.delta[i] *= ls;
    q.omega_sb[i] *= ls;
    q.chi[i] *= ls;
    q.gamma[i] *= ls;
  }
  DressedFrame e = dressed_frame(q);
  DoublyDressedFrame ee = doubly_dressed_frame(q, e);
  for (int i = 0; i < 2; ++i) {
    CHECK(e.theta[i] == doctest::Approx(d.theta[i]).epsilon(1e-13));
    CHECK(ee.theta[i] == doctest::Approx(dd.theta[i]).epsilon(1e-10));
    CHECK(e.lamb[i] == doctest::Approx(ls * d.lamb[i]).epsilon(1e-12));
    CHECK(ee.purcell[i] == doctest::Approx(ls * dd.purcell[i]).epsilon(1e-12));
  }
  CHECK(e.J == doctest::Approx(ls * d.J).epsilon(1e-12));
}

TEST_CASE("dressed basis rotation diagonalizes the carrier Hamiltonian") {
  const double om = 499.7, de = 874.9;
  DressedFrame d = dressed_frame(single(om, de));
  QMatrix h = 0.5 * de * ops::pauli_z() + 0.5 * om * ops::pauli_x();
  QMatrix hd = to_rotated(h, d.theta[0]);
  CHECK(max_abs(hd.mat() - (0.5 * d.omega_r[0] * ops::pauli_z()).mat()) < 1e-12);

  // sigma in the dressed basis: c^2 xi - s^2 xi^dag + c s xi_z
  double c = d.c[0], s = d.s[0];
  QMatrix ref = c * c * ops::lowering() - s * s * ops::raising() + c * s * ops::pauli_z();
  CHECK(max_abs(sigma_in_dressed(d.theta[0]).mat() - ref.mat()) < 1e-15);
  // and sigma_z
  QMatrix zref = (c * c - s * s) * ops::pauli_z() - 2 * c * s * ops::pauli_x();
  CHECK(max_abs(to_rotated(ops::pauli_z(), d.theta[0]).mat() - zref.mat()) < 1e-15);
}

TEST_CASE("doubly-dressed Hamiltonian is the rotated GRWA qubit Hamiltonian") {
  SystemParams p = testutil::operating_point();
  DressedFrame d = dressed_frame(p);
  DoublyDressedFrame dd = doubly_dressed_frame(p, d);
  QMatrix hq = grwa_qubit_hamiltonian(p, d);
  QMatrix r = kron(rotation(dd.theta[0]), rotation(dd.theta[1]));
  QMatrix rotated(r.mat().transpose() * hq.mat() * r.mat(), {2, 2});
  LindbladModel m = build_doubly_dressed_model(p);
  CHECK(max_abs(rotated.mat() - m.hamiltonian.mat()) < 1e-12);
}

TEST_CASE("build_xplus: bare cavity gives the annihilation operator") {
  const int n = 7;
  QMatrix a = ops::destroy(n);
  QMatrix h = 1000.0 * ops::number(n);
  QMatrix xp = build_xplus(h, a, 1000.0);
  CHECK(max_abs(xp.mat() - a.mat()) < 1e-12);
}

TEST_CASE("build_xplus is strictly upper triangular in the eigenbasis") {
  SystemParams p = testutil::operating_point(5);
  QMatrix h = full_static_hamiltonian(p);
  QMatrix a = embed(ops::destroy(5), 2, h.dims());
  QMatrix xp = build_xplus(h, a, p.f_thz);
  Eigen::SelfAdjointEigenSolver<CMat> es(h.mat());
  CMat x = es.eigenvectors().adjoint() * xp.mat() * es.eigenvectors();
  double lower = 0.0;
  for (int j = 0; j < x.rows(); ++j)
    for (int k = 0; k <= j; ++k) lower = std::max(lower, std::abs(x(j, k)));
  CHECK(lower < 1e-10);
}

TEST_CASE("X+ and a dissipators agree in the dispersive regime") {
  SystemParams p = testutil::operating_point(5);
  LindbladModel m = build_grwa_model(p);
  QMatrix rho_x = steady_state(liouvillian(m));
  m.jumps.back().op = embed(ops::destroy(5), 2, m.dims());
  QMatrix rho_a = steady_state(liouvillian(m));
  double td = trace_distance(rho_x, rho_a);
  MESSAGE("trace distance X+ vs a: " << td);
  CHECK(td < 0.05);
}

TEST_CASE("full model: Hermitian pieces and decoupled limit") {
  SystemParams p = testutil::operating_point(4);
  LindbladModel m = build_full_model(p);
  CHECK(m.hamiltonian.hermiticity_error() < 1e-12);
  REQUIRE(m.periodic);
  QMatrix herm = m.periodic->amplitude + m.periodic->amplitude.adjoint();
  CHECK(herm.hermiticity_error() < 1e-12);
  CHECK(m.periodic->frequency == p.f_thz);
  CHECK(m.jumps.size() == 3);

  // chi = 0, no sideband: emitters factorize into Mollow problems, cavity in vacuum
  p.chi = {0.0, 0.0};
  p.omega_sb = {0.0, 0.0};
  p.kappa = 20.0;
  p.gamma = {0.4, 0.6};
  LindbladModel s = build_full_model(p);
  s.periodic.reset();
  QMatrix rho = steady_state(liouvillian(s));
  std::vector<QMatrix> singles;
  for (int i = 0; i < 2; ++i) {
    LindbladModel q;
    q.hamiltonian = 0.5 * p.delta[i] * ops::pauli_z() + 0.5 * p.omega[i] * ops::pauli_x();
    q.jumps.push_back({ops::lowering(), p.gamma[i], ""});
    singles.push_back(steady_state(liouvillian(q)));
  }
  QMatrix vac = QMatrix::projector(ops::basis(4, 0), {4});
  QMatrix ref = kron({singles[0], singles[1], vac});
  CHECK(max_abs(rho.mat() - ref.mat()) < 1e-10);
}

TEST_CASE("GRWA model: chi = 0 decouples emitters and cavity") {
  SystemParams p = testutil::operating_point(4);
  p.chi = {0.0, 0.0};
  DressedFrame d = dressed_frame(p);
  CHECK(d.lamb[0] == 0.0);
  CHECK(d.J == 0.0);
  LindbladModel m = build_grwa_model(p);
  // H = H_q (x) 1 exactly
  QMatrix ref = kron(grwa_qubit_hamiltonian(p, d), ops::eye(4));
  CHECK(max_abs(m.hamiltonian.mat() - ref.mat()) < 1e-12);
  CHECK(m.warnings.empty());
}

TEST_CASE("GRWA model warns outside its validity range") {
  SystemParams p = testutil::operating_point(3);
  p.chi = {150.0, 150.0};
  CHECK(!build_grwa_model(p).warnings.empty());
}

TEST_CASE("Lamb shift accounts for the polaron shift of the dressed spectrum") {
  // One emitter coupled to the cavity; compare the low-lying spectrum of the
  // full static Hamiltonian with the GRWA Hamiltonian (f_thz N restored).
  const int n = 10;
  const double f = 1000.0, om = 499.8, de = 871.6;
  for (double chi : {10.0, 20.0}) {
    SystemParams p;
    p.f_thz = f;
    p.omega = {om, 0.0};
    p.delta = {de, 1.0};
    p.chi = {chi, 0.0};
    p.n_fock = n;
    DressedFrame d = dressed_frame(p);
    std::vector<int> dims{2, n};
    QMatrix a = embed(ops::destroy(n), 1, dims);
    QMatrix sz = embed(ops::pauli_z(), 0, dims);
    QMatrix id = QMatrix::identity(dims);
    QMatrix hfull = f * (a.adjoint() * a) + 0.5 * de * sz + 0.5 * om * embed(ops::pauli_x(), 0, dims) +
                    chi * ((id + sz) * (a + a.adjoint()));
    auto spectrum = [&](double lamb) {
      QMatrix xi = embed(ops::lowering(), 0, dims);
      double dr = d.omega_r[0] - f - lamb;
      QMatrix h = 0.5 * dr * sz + d.g[0] * (a.adjoint() * xi + a * xi.adjoint()) +
                  f * (a.adjoint() * a + 0.5 * (sz + id));
      Eigen::SelfAdjointEigenSolver<CMat> es(h.mat(), Eigen::EigenvaluesOnly);
      return RVec(es.eigenvalues().head(5).array() - es.eigenvalues()(0));
    };
    Eigen::SelfAdjointEigenSolver<CMat> es(hfull.mat(), Eigen::EigenvaluesOnly);
    RVec ref = es.eigenvalues().head(5).array() - es.eigenvalues()(0);
    double with = (spectrum(d.lamb[0]) - ref).cwiseAbs().maxCoeff();
    double without = (spectrum(0.0) - ref).cwiseAbs().maxCoeff();
    MESSAGE("chi " << chi << ": Lambda " << d.lamb[0] << " error with " << with << " without " << without);
    CHECK(with < 0.05 * d.lamb[0]);
    CHECK(without > 0.5 * d.lamb[0]);
  }
}

TEST_CASE("adiabatic model: antisymmetric single excitation is dark to the collective jump") {
  SystemParams p;
  p.f_thz = 1000.0;
  p.omega = {500.0, 500.0};
  p.delta = {866.0, 866.0};
  p.chi = {20.0, 20.0};
  p.kappa = 60.0;
  LindbladModel m = build_adiabatic_model(p);
  const QMatrix& l = m.jumps[0].op;
  CVec anti = (ops::basis(4, 1) - ops::basis(4, 2)) / std::sqrt(2.0);
  CVec sym = (ops::basis(4, 1) + ops::basis(4, 2)) / std::sqrt(2.0);
  CHECK((l.mat() * anti).norm() < 1e-14);
  CHECK((l.mat() * sym).norm() > 1.0);
}

TEST_CASE("doubly-dressed jumps at vanishing angle") {
  SystemParams p;
  p.f_thz = 1000.0;
  p.omega = {500.0, 480.0};
  p.delta = {900.0, 900.0};
  p.chi = {20.0, 25.0};
  p.kappa = 60.0;
  DressedFrame d = dressed_frame(p);
  REQUIRE(d.delta_r[0] > 0.0);
  REQUIRE(d.delta_r[1] > 0.0);
  DoublyDressedFrame dd = doubly_dressed_frame(p, d);
  LindbladModel m = build_doubly_dressed_model(p, {true, false});
  std::vector<int> dims{2, 2};
  QMatrix ref = std::sqrt(dd.purcell[0]) * embed(ops::lowering(), 1, dims) +
                std::sqrt(dd.purcell[1]) * embed(ops::lowering(), 0, dims);
  CHECK(max_abs(m.jumps[0].op.mat() - ref.mat()) < 1e-14);
  CHECK(max_abs(m.jumps[1].op.mat()) == 0.0);
  CHECK(max_abs(m.jumps[2].op.mat()) == 0.0);
  CHECK(m.jumps.size() == 3);
}
