#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace gmps {

/// Real polynomial in the power basis, coefficient k multiplying x^k.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }
  static Poly constant(double v) { return Poly({v}); }

  const std::vector<double>& coeffs() const { return c_; }
  int degree() const { return c_.empty() ? -1 : static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  double max_abs_coeff() const;

  double operator()(double x) const;
  std::complex<double> operator()(std::complex<double> x) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(double s) const;

  Poly derivative() const;

  /// Roots via the companion matrix of the monic normalization.
  std::vector<std::complex<double>> roots() const;

  /// Deflate by the real linear factor (x - r) or, for complex r, by the real
  /// quadratic (x - r)(x - conj(r)).
  Poly deflate(std::complex<double> r) const;

  /// Real polynomial with the given roots (complex ones must come in
  /// conjugate pairs) and leading coefficient `lead`.
  static Poly from_roots(const std::vector<std::complex<double>>& roots, double lead);

  void trim(double tol = 0.0);

 private:
  std::vector<double> c_;
};

struct RootCluster {
  std::complex<double> center;
  int multiplicity = 0;
};

/// Greedy clustering of numerically split multiple roots.
std::vector<RootCluster> cluster_roots(const std::vector<std::complex<double>>& roots,
                                       double radius);

/// Cosine-harmonic expansion: p(cos phi) = h[0] + sum_{k>=1} h[k] cos(k phi).
/// Exact (dyadic) conversion from the power basis.
std::vector<double> chebyshev_harmonics(const Poly& p);

/// z^K p((z + 1/z)/2) as a polynomial in z (requires K >= deg p).
Poly z_expand(const Poly& p, int k);

/// Laurent-cleared form of a polynomial in cos(phi): coefficients of
/// z^K p((z + 1/z)/2) with K = deg p minimal (no negative powers). The roots
/// come in (z, 1/z) pairs; `trailing_zeros` counts the z = 0 roots that
/// appear when a larger common K is requested.
struct ZPoly {
  Poly coefficients;
  int k = 0;
  int trailing_zeros = 0;  // multiplicity of z = 0 among the roots

  static ZPoly expand(const Poly& p);         // minimal K = deg p
  static ZPoly expand(const Poly& p, int k);  // common-denominator K
};

}  // namespace gmps
