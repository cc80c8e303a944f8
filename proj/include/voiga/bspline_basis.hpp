#pragma once

#include "voiga/core.hpp"
#include "voiga/knot_vector.hpp"

namespace voiga {

/// Non-zero B-spline basis values and derivatives at one parameter.
/// values[j] and ders(k, j) refer to basis function (span - p + j),
/// j = 0..p; ders row k holds the k-th derivatives (row 0 = values).
struct BasisEval {
  int span = 0;
  VecX values;
  MatX ders;  // (der_order+1) x (p+1)

  int first_index(int p) const { return span - p; }
};

/// Values and derivatives of the p+1 non-zero basis functions at xi
/// (Cox-de Boor via the banded knot-difference table). Derivative orders
/// beyond p come out as zero rows.
inline BasisEval eval_basis(const KnotVector& kv, double xi, int der_order) {
  const int p = kv.degree();
  const int span = kv.find_span(xi);
  const auto& U = kv.knots();

  MatX ndu(p + 1, p + 1);
  VecX left(p + 1), right(p + 1);
  ndu(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left(j) = xi - U[static_cast<size_t>(span + 1 - j)];
    right(j) = U[static_cast<size_t>(span + j)] - xi;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right(r + 1) + left(j - r);
      const double temp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right(r + 1) * temp;
      saved = left(j - r) * temp;
    }
    ndu(j, j) = saved;
  }

  BasisEval out;
  out.span = span;
  out.values = ndu.col(p);
  out.ders = MatX::Zero(der_order + 1, p + 1);
  out.ders.row(0) = out.values.transpose();

  const int nd = std::min(der_order, p);
  if (nd > 0) {
    MatX a(2, p + 1);
    for (int r = 0; r <= p; ++r) {
      int s1 = 0, s2 = 1;
      a(0, 0) = 1.0;
      for (int k = 1; k <= nd; ++k) {
        double d = 0.0;
        const int rk = r - k;
        const int pk = p - k;
        if (r >= k) {
          a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
          d = a(s2, 0) * ndu(rk, pk);
        }
        const int j1 = (rk >= -1) ? 1 : -rk;
        const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
        for (int j = j1; j <= j2; ++j) {
          a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
          d += a(s2, j) * ndu(rk + j, pk);
        }
        if (r <= pk) {
          a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
          d += a(s2, k) * ndu(r, pk);
        }
        out.ders(k, r) = d;
        std::swap(s1, s2);
      }
    }
    double r = p;
    for (int k = 1; k <= nd; ++k) {
      out.ders.row(k) *= r;
      r *= (p - k);
    }
  }
  return out;
}

}  // namespace voiga
