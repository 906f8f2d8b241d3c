#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "helpers.hpp"
#include "thz/errors.hpp"
#include "thz/lindblad.hpp"

using namespace thz;
using testutil::max_abs;

namespace {

const cplx I1(0.0, 1.0);

LindbladModel decay_model(double gamma) {
  LindbladModel m;
  m.hamiltonian = QMatrix::zero({2});
  m.jumps.push_back({ops::lowering(), gamma, "sigma"});
  return m;
}

LindbladModel driven_qubit(double delta, double omega, double gamma) {
  LindbladModel m;
  m.hamiltonian = 0.5 * delta * ops::pauli_z() + 0.5 * omega * ops::pauli_x();
  m.jumps.push_back({ops::lowering(), gamma, "sigma"});
  return m;
}

// d rho/dt evaluated directly in matrix form.
CMat lindblad_rhs(const CMat& h, const std::vector<std::pair<CMat, double>>& jumps, const CMat& rho) {
  CMat out = -I1 * kTwoPi * (h * rho - rho * h);
  for (const auto& [o, r] : jumps) {
    CMat od = o.adjoint();
    out += kTwoPi * r * (o * rho * od - 0.5 * (od * o * rho + rho * od * o));
  }
  return out;
}

}  // namespace

TEST_CASE("kron identity, eigenbasis and squares") {
  QMatrix i4 = kron(ops::eye(2), ops::eye(2));
  CHECK(max_abs(i4.mat() - CMat::Identity(4, 4)) == 0.0);
  CHECK(i4.dims() == std::vector<int>{2, 2});

  // |e g> = |0>|1> -> index 1
  QMatrix zi = kron(ops::pauli_z(), ops::eye(2));
  CVec eg = ops::basis(4, 1);
  CHECK(max_abs(zi.mat() * eg - eg) == 0.0);

  QMatrix xx = kron(ops::pauli_x(), ops::pauli_x());
  CHECK(max_abs((xx * xx).mat() - CMat::Identity(4, 4)) == 0.0);
}

TEST_CASE("kron is associative exactly") {
  // small Gaussian-integer entries keep every product exact in floating point
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> u(-9, 9);
  auto rnd = [&](int n) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = cplx(u(rng), u(rng));
    return QMatrix(m);
  };
  QMatrix a = rnd(2), b = rnd(3), c = rnd(2);
  QMatrix l = kron(kron(a, b), c), r = kron(a, kron(b, c));
  CHECK(max_abs(l.mat() - r.mat()) == 0.0);
  CHECK(l.dims() == std::vector<int>{2, 3, 2});
}

TEST_CASE("QMatrix rejects inconsistent dims") {
  CHECK_THROWS_AS(QMatrix(CMat::Identity(4, 4), {2, 3}), InvalidArgument);
  CHECK_THROWS_AS(ops::pauli_x() + ops::eye(3), InvalidArgument);
}

TEST_CASE("partial trace") {
  std::mt19937_64 rng(11);
  QMatrix ra(testutil::random_density(2, rng)), rb(testutil::random_density(3, rng));
  QMatrix ab = kron(ra, rb);
  CHECK(max_abs(partial_trace(ab, {0}).mat() - ra.mat()) < 1e-12);
  CHECK(max_abs(partial_trace(ab, {1}).mat() - rb.mat()) < 1e-12);

  CVec bell = (ops::basis(4, 1) - ops::basis(4, 2)) / std::sqrt(2.0);
  QMatrix pb = QMatrix::projector(bell, {2, 2});
  CHECK(max_abs(partial_trace(pb, {1}).mat() - 0.5 * CMat::Identity(2, 2)) < 1e-15);

  // brute-force oracle on a 2 x 3 x 2 state keeping {0, 2}
  QMatrix r3(testutil::random_density(12, rng), {2, 3, 2});
  CMat oracle = CMat::Zero(4, 4);
  for (int i0 = 0; i0 < 2; ++i0)
    for (int i2 = 0; i2 < 2; ++i2)
      for (int j0 = 0; j0 < 2; ++j0)
        for (int j2 = 0; j2 < 2; ++j2)
          for (int k = 0; k < 3; ++k)
            oracle(i0 * 2 + i2, j0 * 2 + j2) += r3.mat()(i0 * 6 + k * 2 + i2, j0 * 6 + k * 2 + j2);
  QMatrix pt = partial_trace(r3, {0, 2});
  CHECK(max_abs(pt.mat() - oracle) < 1e-14);
  CHECK(pt.dims() == std::vector<int>{2, 2});
  CHECK(std::abs(pt.trace() - 1.0) < 1e-12);
  CHECK_THROWS_AS(partial_trace(r3, {3}), InvalidArgument);
}

TEST_CASE("liouvillian vectorization matches the matrix form") {
  std::mt19937_64 rng(3);
  CMat h0 = testutil::random_matrix(3, rng);
  CMat h = 0.5 * (h0 + h0.adjoint());
  CMat o1 = testutil::random_matrix(3, rng), o2 = testutil::random_matrix(3, rng);
  LindbladModel m;
  m.hamiltonian = QMatrix(h);
  m.jumps.push_back({QMatrix(o1), 0.7, "a"});
  m.jumps.push_back({QMatrix(o2), 0.2, "b"});
  Superoperator L = liouvillian(m);
  CMat rho = testutil::random_density(3, rng);
  CMat direct = lindblad_rhs(h, {{o1, 0.7}, {o2, 0.2}}, rho);
  CMat viaL = unvec(L.data * vec(QMatrix(rho)), {3}).mat();
  CHECK(max_abs(direct - viaL) < 1e-12);
}

TEST_CASE("liouvillian preserves trace and Hermiticity") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + trial % 4;
    CMat h = testutil::random_matrix(n, rng);
    LindbladModel m;
    m.hamiltonian = QMatrix(0.5 * (h + h.adjoint()));
    for (int k = 0; k < 3; ++k) m.jumps.push_back({QMatrix(testutil::random_matrix(n, rng)), 0.1 * (k + 1), ""});
    Superoperator L = liouvillian(m);
    QMatrix rho(testutil::random_density(n, rng));
    QMatrix d = unvec(L.data * vec(rho), {n});
    double scale = max_abs(d.mat());
    CHECK(std::abs(d.trace()) < 1e-8 * std::max(1.0, scale));
    CHECK(d.hermiticity_error() < 1e-8 * std::max(1.0, scale));
  }
}

TEST_CASE("liouvillian rejects non-Hermitian H and negative rates") {
  LindbladModel m;
  m.hamiltonian = ops::lowering();
  CHECK_THROWS_AS(liouvillian(m), InvalidArgument);
  LindbladModel n = decay_model(-1.0);
  CHECK_THROWS_AS(liouvillian(n), InvalidArgument);
}

TEST_CASE("zero generator") {
  LindbladModel m;
  m.hamiltonian = QMatrix::zero({2});
  Superoperator L = liouvillian(m);
  CHECK(max_abs(L.data) == 0.0);
  auto ev = liouvillian_spectrum(L);
  for (auto z : ev) CHECK(std::abs(z) == 0.0);
  CHECK_THROWS_AS(steady_state(L), MultistabilityError);
}

TEST_CASE("single decay: spectrum and steady state") {
  const double g = 0.37;
  Superoperator L = liouvillian(decay_model(g));
  auto ev = liouvillian_spectrum(L);
  REQUIRE(ev.size() == 4);
  // analytic: {0, -pi g, -pi g, -2 pi g}
  CHECK(std::abs(ev[0]) < 1e-12);
  CHECK(std::abs(ev[1] - cplx(-kTwoPi * g / 2, 0)) < 1e-12);
  CHECK(std::abs(ev[2] - cplx(-kTwoPi * g / 2, 0)) < 1e-12);
  CHECK(std::abs(ev[3] - cplx(-kTwoPi * g, 0)) < 1e-12);
  QMatrix rho = steady_state(L);
  CHECK(std::abs(rho.mat()(1, 1) - 1.0) < 1e-12);
  CHECK(steady_residual(L, rho) <= 1e-9);
}

TEST_CASE("driven qubit steady state matches the optical Bloch solution") {
  for (double delta : {0.0, 0.8, -1.7}) {
    const double om = 1.3, g = 0.45;
    QMatrix rho = steady_state(liouvillian(driven_qubit(delta, om, g)));
    // resonance-fluorescence closed form (frequencies in common units)
    double pe = (om * om / 4) / (delta * delta + g * g / 4 + om * om / 2);
    CHECK(std::abs(rho.mat()(0, 0).real() - pe) < 1e-12);
    CHECK(is_density(rho));
  }
}

TEST_CASE("independent qubits factorize") {
  LindbladModel a = driven_qubit(0.3, 1.1, 0.5), b = driven_qubit(-0.6, 0.7, 0.9);
  QMatrix ra = steady_state(liouvillian(a)), rb = steady_state(liouvillian(b));
  LindbladModel ab;
  std::vector<int> d{2, 2};
  ab.hamiltonian = embed(a.hamiltonian, 0, d) + embed(b.hamiltonian, 1, d);
  ab.jumps.push_back({embed(ops::lowering(), 0, d), 0.5, ""});
  ab.jumps.push_back({embed(ops::lowering(), 1, d), 0.9, ""});
  Superoperator L = liouvillian(ab);
  QMatrix r = steady_state(L);
  CHECK(max_abs(r.mat() - kron(ra, rb).mat()) < 1e-12);
  CHECK(steady_residual(L, r) <= 1e-9);
  auto ev = liouvillian_spectrum(L, 3);
  CHECK(ev.size() == 3);
  CHECK(std::abs(ev[0]) <= 1e-9);
  CHECK(ev[1].real() < -1e-9);
}

TEST_CASE("degenerate kernel is reported") {
  LindbladModel m;
  m.hamiltonian = 0.4 * ops::pauli_z();
  m.jumps.push_back({ops::pauli_z(), 0.3, "dephasing"});
  CHECK_THROWS_AS(steady_state(liouvillian(m)), MultistabilityError);
}

TEST_CASE("evolve_periodic: static model agrees with the dense exponential") {
  LindbladModel m = driven_qubit(0.4, 1.2, 0.3);
  QMatrix rho0 = QMatrix::projector(ops::basis(2, 1), {2});
  auto traj = evolve_periodic(m, rho0, 2.0, 0.25);
  REQUIRE(traj.size() == 9);
  Superoperator L = liouvillian(m);
  for (const auto& pt : traj) {
    CMat P = (L.data * pt.t).exp();
    QMatrix ref = unvec(P * vec(rho0), {2});
    CHECK(trace_distance(pt.rho, ref) < 1e-7);
    CHECK(std::abs(pt.rho.trace() - 1.0) < 1e-8);
  }
  CHECK(traj.back().t == 2.0);
}

TEST_CASE("evolve_periodic: zero generator keeps rho0") {
  LindbladModel m;
  m.hamiltonian = QMatrix::zero({2});
  std::mt19937_64 rng(1);
  QMatrix rho0(testutil::random_density(2, rng));
  for (const auto& pt : evolve_periodic(m, rho0, 1.0, 0.5)) CHECK(max_abs(pt.rho.mat() - rho0.mat()) == 0.0);
}

TEST_CASE("evolve_periodic: lossless Rabi period is 1/Omega") {
  const double om = 2.5;
  LindbladModel m;
  m.hamiltonian = 0.5 * om * ops::pauli_x();
  QMatrix rho0 = QMatrix::projector(ops::basis(2, 1), {2});
  auto traj = evolve_periodic(m, rho0, 1.0 / om, 0.05 / om);
  for (const auto& pt : traj) {
    double s = std::sin(M_PI * om * pt.t);
    CHECK(std::abs(pt.rho.mat()(0, 0).real() - s * s) < 1e-8);
  }
  CHECK(std::abs(traj.back().rho.mat()(1, 1).real() - 1.0) < 1e-8);
}

TEST_CASE("evolve_periodic: trace and Hermiticity preserved with a periodic term") {
  LindbladModel m = driven_qubit(0.5, 0.9, 0.2);
  m.periodic = PeriodicTerm{0.7 * ops::lowering(), 3.0};
  QMatrix rho0 = QMatrix::projector(ops::basis(2, 0), {2});
  for (const auto& pt : evolve_periodic(m, rho0, 5.0, 0.1)) {
    CHECK(std::abs(pt.rho.trace() - 1.0) < 1e-8);
    CHECK(pt.rho.hermiticity_error() < 1e-8);
  }
}

TEST_CASE("period_averaged_steady: zero amplitude equals the static steady state") {
  LindbladModel m = driven_qubit(0.5, 0.9, 0.2);
  QMatrix stat = steady_state(liouvillian(m));
  m.periodic = PeriodicTerm{QMatrix::zero({2}), 5.0};
  auto res = period_averaged_steady(m, QMatrix::projector(ops::basis(2, 1), {2}));
  CHECK(trace_distance(res.rho, stat) < 1e-6);
  CHECK(res.oscillation < 1e-6);
}

TEST_CASE("period_averaged_steady: fast oscillation approaches the static steady state") {
  LindbladModel m = driven_qubit(1.0, 0.6, 0.5);
  QMatrix stat = steady_state(liouvillian(m));
  QMatrix rho0 = QMatrix::projector(ops::basis(2, 1), {2});
  double prev = 1.0;
  for (double f : {2.0, 20.0, 200.0, 2000.0}) {
    LindbladModel mp = m;
    mp.periodic = PeriodicTerm{0.8 * ops::lowering(), f};
    auto res = period_averaged_steady(mp, rho0);
    double d = trace_distance(res.rho, stat);
    CHECK(d < prev);
    prev = d;
    CHECK(is_density(res.rho));
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("period_averaged_steady agrees with brute-force long evolution") {
  LindbladModel m = driven_qubit(1.0, 0.6, 0.5);
  m.periodic = PeriodicTerm{0.8 * ops::lowering(), 1.0};
  QMatrix rho0 = QMatrix::projector(ops::basis(2, 1), {2});
  auto res = period_averaged_steady(m, rho0);
  // evolve 30 periods, average the last one with the same rectangle rule
  auto traj = evolve_periodic(m, rho0, 30.0, 1.0 / 64);
  CMat avg = CMat::Zero(2, 2);
  for (std::size_t k = traj.size() - 65; k < traj.size() - 1; ++k) avg += traj[k].rho.mat();
  avg /= 64.0;
  CHECK(trace_distance(res.rho, QMatrix(avg, {2})) < 1e-6);
  CHECK(res.oscillation > 1e-3);
}
