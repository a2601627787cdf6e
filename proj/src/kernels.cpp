#include "ymjoin/kernels.hpp"

#include <algorithm>

namespace ymjoin {

namespace {

inline double sq(double x) { return x * x; }

EnergyTerms block_terms(const DiscreteWeights& w, const std::vector<double>& a,
                        const std::vector<double>& b, int lo, int hi) {
  const int n = w.nodes();
  const bool single = w.single();
  EnergyTerms e{};
  for (int i = lo; i < hi; ++i) {
    double a2 = a[i] * a[i];
    e[3] += w.q4[i] * sq(a2 - 1);
    if (i + 1 < n) e[0] += w.ka[i] * sq(a[i + 1] - a[i]);
    if (single) continue;
    double b2 = b[i] * b[i];
    e[2] += w.q3[i] * a2 * b2;
    e[4] += w.q5[i] * sq(b2 - 1);
    if (i + 1 < n) e[1] += w.kb[i] * sq(b[i + 1] - b[i]);
  }
  return e;
}

inline void node_gradient(const DiscreteWeights& w, const std::vector<double>& a,
                          const std::vector<double>& b, int i, double& ga, double& gb) {
  const int n = w.nodes();
  double g = 4 * w.q4[i] * a[i] * (a[i] * a[i] - 1);
  if (i > 0) g += 2 * w.ka[i - 1] * (a[i] - a[i - 1]);
  if (i + 1 < n) g -= 2 * w.ka[i] * (a[i + 1] - a[i]);
  if (w.single()) {
    ga = g;
    return;
  }
  g += 2 * w.q3[i] * a[i] * b[i] * b[i];
  double h = 2 * w.q3[i] * a[i] * a[i] * b[i] + 4 * w.q5[i] * b[i] * (b[i] * b[i] - 1);
  if (i > 0) h += 2 * w.kb[i - 1] * (b[i] - b[i - 1]);
  if (i + 1 < n) h -= 2 * w.kb[i] * (b[i + 1] - b[i]);
  ga = g;
  gb = h;
}

inline void node_hessian(const DiscreteWeights& w, const std::vector<double>& a,
                         const std::vector<double>& b, int i, HessianBands& h) {
  const int n = w.nodes();
  double kl = i > 0 ? w.ka[i - 1] : 0.0;
  double kr = i + 1 < n ? w.ka[i] : 0.0;
  h.aa[i] = 2 * (kl + kr) + 4 * w.q4[i] * (3 * a[i] * a[i] - 1);
  if (i + 1 < n) h.aa_off[i] = -2 * kr;
  if (w.single()) return;
  h.aa[i] += 2 * w.q3[i] * b[i] * b[i];
  double ml = i > 0 ? w.kb[i - 1] : 0.0;
  double mr = i + 1 < n ? w.kb[i] : 0.0;
  h.bb[i] = 2 * (ml + mr) + 2 * w.q3[i] * a[i] * a[i] + 4 * w.q5[i] * (3 * b[i] * b[i] - 1);
  h.ab[i] = 4 * w.q3[i] * a[i] * b[i];
  if (i + 1 < n) h.bb_off[i] = -2 * mr;
}

void size_bands(const DiscreteWeights& w, HessianBands& h) {
  const int n = w.nodes();
  h.aa.assign(n, 0.0);
  h.aa_off.assign(n - 1, 0.0);
  if (w.single()) {
    h.bb.clear();
    h.ab.clear();
    h.bb_off.clear();
    return;
  }
  h.bb.assign(n, 0.0);
  h.ab.assign(n, 0.0);
  h.bb_off.assign(n - 1, 0.0);
}

}  // namespace

EnergyTerms energy_terms(const DiscreteWeights& w, const std::vector<double>& a,
                         const std::vector<double>& b) {
  const int n = w.nodes();
  const int blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<EnergyTerms> partial(blocks);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < blocks; ++k) {
    partial[k] = block_terms(w, a, b, k * kReductionBlock, std::min(n, (k + 1) * kReductionBlock));
  }
  EnergyTerms e{};
  for (const auto& p : partial) {
    for (int j = 0; j < 5; ++j) e[j] += p[j];
  }
  return e;
}

void gradient(const DiscreteWeights& w, const std::vector<double>& a, const std::vector<double>& b,
              std::vector<double>& ga, std::vector<double>& gb) {
  const int n = w.nodes();
  ga.assign(n, 0.0);
  gb.assign(w.single() ? 0 : n, 0.0);
  double* gbp = w.single() ? nullptr : gb.data();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double x = 0, y = 0;
    node_gradient(w, a, b, i, x, y);
    ga[i] = x;
    if (gbp) gbp[i] = y;
  }
}

void hessian(const DiscreteWeights& w, const std::vector<double>& a, const std::vector<double>& b,
             HessianBands& h) {
  size_bands(w, h);
  const int n = w.nodes();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) node_hessian(w, a, b, i, h);
}

namespace reference {

EnergyTerms energy_terms(const DiscreteWeights& w, const std::vector<double>& a,
                         const std::vector<double>& b) {
  const int n = w.nodes();
  EnergyTerms e{};
  for (int c = 0; c + 1 < n; ++c) {
    e[0] += w.ka[c] * sq(a[c + 1] - a[c]);
    if (!w.single()) e[1] += w.kb[c] * sq(b[c + 1] - b[c]);
  }
  for (int i = 0; i < n; ++i) {
    e[3] += w.q4[i] * sq(a[i] * a[i] - 1);
    if (w.single()) continue;
    e[2] += w.q3[i] * a[i] * a[i] * b[i] * b[i];
    e[4] += w.q5[i] * sq(b[i] * b[i] - 1);
  }
  return e;
}

void gradient(const DiscreteWeights& w, const std::vector<double>& a, const std::vector<double>& b,
              std::vector<double>& ga, std::vector<double>& gb) {
  const int n = w.nodes();
  ga.assign(n, 0.0);
  gb.assign(w.single() ? 0 : n, 0.0);
  for (int c = 0; c + 1 < n; ++c) {
    double fa = 2 * w.ka[c] * (a[c + 1] - a[c]);
    ga[c] -= fa;
    ga[c + 1] += fa;
    if (w.single()) continue;
    double fb = 2 * w.kb[c] * (b[c + 1] - b[c]);
    gb[c] -= fb;
    gb[c + 1] += fb;
  }
  for (int i = 0; i < n; ++i) {
    ga[i] += 4 * w.q4[i] * a[i] * (a[i] * a[i] - 1);
    if (w.single()) continue;
    ga[i] += 2 * w.q3[i] * a[i] * b[i] * b[i];
    gb[i] += 2 * w.q3[i] * a[i] * a[i] * b[i] + 4 * w.q5[i] * b[i] * (b[i] * b[i] - 1);
  }
}

void hessian(const DiscreteWeights& w, const std::vector<double>& a, const std::vector<double>& b,
             HessianBands& h) {
  size_bands(w, h);
  const int n = w.nodes();
  for (int c = 0; c + 1 < n; ++c) {
    h.aa[c] += 2 * w.ka[c];
    h.aa[c + 1] += 2 * w.ka[c];
    h.aa_off[c] = -2 * w.ka[c];
    if (w.single()) continue;
    h.bb[c] += 2 * w.kb[c];
    h.bb[c + 1] += 2 * w.kb[c];
    h.bb_off[c] = -2 * w.kb[c];
  }
  for (int i = 0; i < n; ++i) {
    h.aa[i] += 4 * w.q4[i] * (3 * a[i] * a[i] - 1);
    if (w.single()) continue;
    h.aa[i] += 2 * w.q3[i] * b[i] * b[i];
    h.bb[i] += 2 * w.q3[i] * a[i] * a[i] + 4 * w.q5[i] * (3 * b[i] * b[i] - 1);
    h.ab[i] = 4 * w.q3[i] * a[i] * b[i];
  }
}

}  // namespace reference

}  // namespace ymjoin
