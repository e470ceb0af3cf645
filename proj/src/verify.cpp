#include "mcf4/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mcf4/oracles.hpp"

namespace mcf4::verify {

using forms::AdaptedBasisResult;
using forms::Frame4;
using forms::OrientedPlane2;
using forms::TwoForm4;

bool VerifyReport::all_pass() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.pass; });
}

forms::TwoForm4 standard_omega_prime() {
  Mat4 m = Mat4::Zero();
  m(0, 1) = 1.0;
  m(2, 3) = 1.0;
  m -= m.transpose().eval();
  return TwoForm4(m);
}

forms::TwoForm4 standard_omega_double_prime() {
  Mat4 m = Mat4::Zero();
  m(0, 1) = 1.0;
  m(2, 3) = -1.0;
  m -= m.transpose().eval();
  return TwoForm4(m);
}

Mat4 random_rotation4(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat4 g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Mat4> qr(g);
  Mat4 q = qr.householderQ();
  Mat4 r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 4; ++i)
    if (r(i, i) < 0) q.col(i) *= -1.0;
  if (q.determinant() < 0) q.col(3) *= -1.0;
  return q;
}

forms::OrientedPlane2 random_plane(std::uint64_t seed) {
  Mat4 q = random_rotation4(seed);
  return OrientedPlane2{q.col(0), q.col(1), 1.0};
}

namespace {

TwoForm4 random_form(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat4 m = Mat4::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      m(i, j) = gauss(rng);
      m(j, i) = -m(i, j);
    }
  return TwoForm4(m);
}

struct Tracker {
  PropertyResult r;
  explicit Tracker(std::string name, double tol) {
    r.name = std::move(name);
    r.tol = tol;
    r.pass = true;
  }
  void observe(double dev, const std::string& detail_if_worst = "") {
    if (dev > r.worst) {
      r.worst = dev;
      if (!detail_if_worst.empty()) r.detail = detail_if_worst;
    }
    if (dev > r.tol) r.pass = false;
  }
  void fail(const std::string& why) {
    r.pass = false;
    if (r.detail.empty()) r.detail = why;
  }
};

}  // namespace

VerifyReport verify_forms(int batch, std::uint64_t seed, Mutation mutation,
                          int oracle_samples) {
  VerifyReport report;
  report.batch = batch;
  report.seed = seed;
  if (batch <= 0) {
    report.vacuous = true;
    return report;
  }

  std::mt19937_64 rng(seed);

  Tracker eigen_ident("eigen_pair identities (l1*l2 = Pf, l1^2+l2^2 = |a|^2)", 1e-10);
  Tracker comass_oracle("comass equals Grassmannian sampling+polish oracle", 1e-6);
  Tracker comass_scale("comass is absolutely homogeneous and rotation invariant", 1e-10);
  Tracker star_involution("hodge_star is an involution", 1e-12);
  Tracker k_orthogonal("endomorphism of a self-dual calibrating form is orthogonal", 1e-10);
  Tracker display_alpha("adapted basis reproduces the alpha display matrix", 1e-9);
  Tracker display_beta("adapted basis reproduces the beta display matrix", 1e-9);
  Tracker circle_ident("eta^2 + zeta^2 = 1 for both forms", 1e-10);
  Tracker sum_pair("alpha+beta has eigen pair (2, 0)", 1e-9);
  Tracker idempotent("adapted basis is idempotent on its own plane", 1e-10);

  const TwoForm4 omega_p = standard_omega_prime();
  const TwoForm4 omega_pp = mutation == Mutation::BetaSignFlip
                                ? standard_omega_prime()
                                : standard_omega_double_prime();

  std::uniform_real_distribution<double> unif(-2.0, 2.0);

  for (int k = 0; k < batch; ++k) {
    TwoForm4 a = random_form(rng);
    auto [l1, l2] = forms::eigen_pair(a);
    eigen_ident.observe(std::abs(l1 * l2 - forms::pfaffian(a)));
    eigen_ident.observe(std::abs(l1 * l1 + l2 * l2 - a.norm2()));

    auto oracle = oracles::comass_by_sampling(a, oracle_samples, seed ^ (k * 0x9e37), 6, 400);
    comass_oracle.observe(std::abs(forms::comass(a) - oracle.comass));

    double c = unif(rng);
    comass_scale.observe(std::abs(forms::comass(a * c) - std::abs(c) * forms::comass(a)));
    Mat4 q = random_rotation4(seed ^ (0xabcdu + k));
    TwoForm4 rotated(q * a.components() * q.transpose());
    comass_scale.observe(std::abs(forms::comass(rotated) - forms::comass(a)));

    TwoForm4 ss = forms::hodge_star(forms::hodge_star(a, Frame4::standard()), Frame4::standard());
    star_involution.observe((ss.components() - a.components()).cwiseAbs().maxCoeff());

    // Random self-dual calibrating form: rotate the standard Kahler form.
    TwoForm4 sd(q * omega_p.components() * q.transpose());
    Mat4 kk = sd.endomorphism();
    k_orthogonal.observe((kk.transpose() * kk - Mat4::Identity()).cwiseAbs().maxCoeff());

    OrientedPlane2 plane = random_plane(seed ^ (0x51u + 3 * k));
    try {
      AdaptedBasisResult res = forms::adapted_basis(plane, omega_p, omega_pp);
      const Mat4& e = res.frame.matrix();
      Mat4 ca = e.transpose() * omega_p.components() * e;
      Mat4 cb = e.transpose() * omega_pp.components() * e;
      display_alpha.observe(
          (ca - forms::alpha_display(res.eta1, res.zeta1)).cwiseAbs().maxCoeff());
      display_beta.observe(
          (cb - forms::beta_display(res.eta2, res.zeta2)).cwiseAbs().maxCoeff());
      circle_ident.observe(std::abs(res.eta1 * res.eta1 + res.zeta1 * res.zeta1 - 1.0));
      circle_ident.observe(std::abs(res.eta2 * res.eta2 + res.zeta2 * res.zeta2 - 1.0));

      auto [s1, s2] = forms::eigen_pair(omega_p + omega_pp);
      sum_pair.observe(std::abs(s1 - 2.0));
      sum_pair.observe(std::abs(s2));

      OrientedPlane2 own{res.frame.e(0), res.frame.e(1), 1.0};
      AdaptedBasisResult again = forms::adapted_basis(own, omega_p, omega_pp);
      idempotent.observe(std::abs(again.eta1 - res.eta1));
      idempotent.observe(std::abs(again.eta2 - res.eta2));
    } catch (const ValidationError& err) {
      display_beta.fail(err.what());
      display_alpha.fail(err.what());
    }
  }

  report.properties = {eigen_ident.r,   comass_oracle.r, comass_scale.r,
                       star_involution.r, k_orthogonal.r,  display_alpha.r,
                       display_beta.r,  circle_ident.r,  sum_pair.r,
                       idempotent.r};
  return report;
}

}  // namespace mcf4::verify
