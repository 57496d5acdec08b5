#include "gmps/poly.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gmps {

double Poly::max_abs_coeff() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

double Poly::operator()(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::complex<double> Poly::operator()(std::complex<double> x) const {
  std::complex<double> acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<double> out(std::max(c_.size(), o.c_.size()), 0.0);
  for (size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) out[i] += o.c_[i];
  return Poly(std::move(out));
}

Poly Poly::operator-(const Poly& o) const { return *this + o * -1.0; }

Poly Poly::operator*(const Poly& o) const {
  if (is_zero() || o.is_zero()) return Poly();
  std::vector<double> out(c_.size() + o.c_.size() - 1, 0.0);
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) out[i + j] += c_[i] * o.c_[j];
  return Poly(std::move(out));
}

Poly Poly::operator*(double s) const {
  std::vector<double> out = c_;
  for (double& v : out) v *= s;
  return Poly(std::move(out));
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly();
  std::vector<double> out(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) out[i - 1] = c_[i] * static_cast<double>(i);
  return Poly(std::move(out));
}

void Poly::trim(double tol) {
  while (!c_.empty() && std::abs(c_.back()) <= tol) c_.pop_back();
}

std::vector<std::complex<double>> Poly::roots() const {
  const int deg = degree();
  if (deg <= 0) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c_[i] / c_[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<std::complex<double>> out(deg);
  for (int i = 0; i < deg; ++i) out[i] = es.eigenvalues()(i);
  return out;
}

Poly Poly::deflate(std::complex<double> r) const {
  if (degree() < 1) throw std::invalid_argument("deflate: degree too small");
  if (std::abs(r.imag()) < 1e-300) {
    // synthetic division by (x - r)
    std::vector<double> out(c_.size() - 1);
    double carry = c_.back();
    for (int i = static_cast<int>(c_.size()) - 2; i >= 0; --i) {
      out[i] = carry;
      carry = c_[i] + carry * r.real();
    }
    return Poly(std::move(out));
  }
  // divide by x^2 - 2 Re(r) x + |r|^2
  if (degree() < 2) throw std::invalid_argument("deflate: complex root needs degree >= 2");
  const double b = -2.0 * r.real();
  const double c0 = std::norm(r);
  std::vector<double> rem = c_;
  std::vector<double> quot(c_.size() - 2, 0.0);
  for (int i = static_cast<int>(rem.size()) - 1; i >= 2; --i) {
    const double f = rem[i];
    quot[i - 2] = f;
    rem[i] = 0.0;
    rem[i - 1] -= f * b;
    rem[i - 2] -= f * c0;
  }
  return Poly(std::move(quot));
}

Poly Poly::from_roots(const std::vector<std::complex<double>>& roots, double lead) {
  Poly p = Poly::constant(lead);
  std::vector<std::complex<double>> pending = roots;
  while (!pending.empty()) {
    const auto r = pending.back();
    pending.pop_back();
    if (std::abs(r.imag()) < 1e-12) {
      p = p * Poly({-r.real(), 1.0});
      continue;
    }
    // find and consume the conjugate partner
    auto it = std::min_element(pending.begin(), pending.end(),
                               [&](const auto& a, const auto& b) {
                                 return std::abs(a - std::conj(r)) < std::abs(b - std::conj(r));
                               });
    if (it == pending.end() || std::abs(*it - std::conj(r)) > 1e-6 * (1.0 + std::abs(r)))
      throw std::invalid_argument("from_roots: complex roots must come in conjugate pairs");
    pending.erase(it);
    p = p * Poly({std::norm(r), -2.0 * r.real(), 1.0});
  }
  return p;
}

std::vector<RootCluster> cluster_roots(const std::vector<std::complex<double>>& roots,
                                       double radius) {
  std::vector<RootCluster> clusters;
  std::vector<bool> used(roots.size(), false);
  for (size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    std::complex<double> sum = roots[i];
    int count = 1;
    used[i] = true;
    for (size_t j = i + 1; j < roots.size(); ++j) {
      if (!used[j] && std::abs(roots[j] - roots[i]) <= radius) {
        sum += roots[j];
        ++count;
        used[j] = true;
      }
    }
    clusters.push_back({sum / static_cast<double>(count), count});
  }
  return clusters;
}

std::vector<double> chebyshev_harmonics(const Poly& p) {
  // cos^k(phi) = 2^{1-k} sum_{j<k/2} C(k,j) cos((k-2j) phi) + [k even] 2^{-k} C(k, k/2)
  const int deg = std::max(p.degree(), 0);
  std::vector<double> h(deg + 1, 0.0);
  for (int k = 0; k <= p.degree(); ++k) {
    const double a = p.coeffs()[k];
    if (a == 0.0) continue;
    if (k == 0) {
      h[0] += a;
      continue;
    }
    double binom = 1.0;  // C(k, 0)
    const double scale = std::ldexp(1.0, 1 - k);
    for (int j = 0; 2 * j < k; ++j) {
      h[k - 2 * j] += a * scale * binom;
      binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
    }
    if (k % 2 == 0) h[0] += a * std::ldexp(binom, -k);
  }
  return h;
}

Poly z_expand(const Poly& p, int k) {
  if (k < p.degree()) throw std::invalid_argument("z_expand: K must be >= deg p");
  // z^K sum_j a_j ((z^2+1)/(2z))^j = sum_j a_j 2^{-j} z^{K-j} (z^2+1)^j
  std::vector<double> out(2 * k + 1, 0.0);
  for (int j = 0; j <= p.degree(); ++j) {
    const double a = p.coeffs()[j];
    if (a == 0.0) continue;
    double binom = 1.0;
    for (int i = 0; i <= j; ++i) {
      out[k - j + 2 * i] += a * std::ldexp(binom, -j);
      binom = binom * static_cast<double>(j - i) / static_cast<double>(i + 1);
    }
  }
  Poly res{std::move(out)};
  return res;
}

ZPoly ZPoly::expand(const Poly& p) { return expand(p, std::max(p.degree(), 0)); }

ZPoly ZPoly::expand(const Poly& p, int k) {
  ZPoly z;
  z.k = k;
  z.coefficients = z_expand(p, k);
  const auto& c = z.coefficients.coeffs();
  while (z.trailing_zeros < static_cast<int>(c.size()) && c[z.trailing_zeros] == 0.0)
    ++z.trailing_zeros;
  return z;
}

}  // namespace gmps
