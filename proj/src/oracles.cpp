#include "mcf4/oracles.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace mcf4::oracles {

namespace {

// Alternating ascent: u <- Av/|Av|, v <- -Au/|Au|. Each half-step cannot
// decrease u^T A v, so the iteration converges to a local maximum on the
// Stiefel manifold of oriented planes.
double polish(const Mat4& a, Vec4& u, Vec4& v, int iters) {
  double value = u.dot(a * v);
  for (int it = 0; it < iters; ++it) {
    Vec4 au = a * v;
    double n = au.norm();
    if (n < 1e-300) break;
    u = au / n;
    Vec4 av = -(a * u);
    n = av.norm();
    if (n < 1e-300) break;
    v = av / n;
    double next = u.dot(a * v);
    if (next - value < 1e-16 * std::max(1.0, std::abs(value))) {
      value = next;
      break;
    }
    value = next;
  }
  return value;
}

}  // namespace

ComassOracleResult comass_by_sampling(const forms::TwoForm4& form, int samples,
                                      std::uint64_t seed, int polish_starts,
                                      int polish_iters) {
  const Mat4 a = form.components();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto draw = [&]() {
    Vec4 w;
    for (int i = 0; i < 4; ++i) w(i) = gauss(rng);
    return w;
  };

  std::vector<ComassSample> best;
  ComassOracleResult out;
  for (int s = 0; s < samples; ++s) {
    // Sample the plane through v that maximizes the form: u is v's optimal
    // partner and automatically orthogonal to v since A is antisymmetric.
    Vec4 v = draw();
    double nv = v.norm();
    if (nv < 1e-12) continue;
    v /= nv;
    Vec4 av = a * v;
    double nu = av.norm();
    if (nu < 1e-300) continue;
    Vec4 u = av / nu;
    double val = u.dot(av);
    if (val > out.sampled_max) out.sampled_max = val;
    if (static_cast<int>(best.size()) < polish_starts) {
      best.push_back({u, v, val});
    } else {
      auto worst = std::min_element(best.begin(), best.end(),
                                    [](auto& l, auto& r) { return l.value < r.value; });
      if (val > worst->value) *worst = {u, v, val};
    }
  }

  out.comass = out.sampled_max;
  for (auto& cand : best) {
    Vec4 u = cand.u, v = cand.v;
    double val = polish(a, u, v, polish_iters);
    if (val > out.comass) {
      out.comass = val;
      out.argmax = {u, v, val};
    }
  }
  return out;
}

}  // namespace mcf4::oracles
