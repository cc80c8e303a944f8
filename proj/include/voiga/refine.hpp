#pragma once

#include <cmath>
#include <vector>

#include "voiga/bspline_basis.hpp"
#include "voiga/core.hpp"
#include "voiga/knot_vector.hpp"

namespace voiga {

/// Curve refinement in homogeneous (weight-multiplied) coordinates, so all
/// operations are exact for rational geometry. A "curve" is a clamped knot
/// vector plus control points (w*x, w*y, w*z, w).
struct HomogeneousCurve {
  KnotVector kv;
  std::vector<Vec4> ctrl;
};

inline Vec4 to_homogeneous(const Vec3& x, double w) {
  return Vec4(w * x.x(), w * x.y(), w * x.z(), w);
}

inline Vec3 from_homogeneous(const Vec4& h) {
  return h.head<3>() / h.w();
}

/// Boehm single knot insertion, applied `repetitions` times. Geometry is
/// unchanged; the new multiplicity must stay <= p.
inline HomogeneousCurve insert_knot(const HomogeneousCurve& c, double u,
                                    int repetitions = 1) {
  HomogeneousCurve cur = c;
  for (int rep = 0; rep < repetitions; ++rep) {
    const int p = cur.kv.degree();
    const auto& U = cur.kv.knots();
    if (u <= U.front() || u >= U.back())
      throw RefinementError("knot to insert must be interior");
    if (cur.kv.multiplicity(u) >= p)
      throw RefinementError("knot multiplicity would exceed degree");
    const int k = cur.kv.find_span(u);

    std::vector<Vec4> q(cur.ctrl.size() + 1);
    for (int i = 0; i <= k - p; ++i) q[static_cast<size_t>(i)] = cur.ctrl[static_cast<size_t>(i)];
    for (int i = k - p + 1; i <= k; ++i) {
      const double denom = U[static_cast<size_t>(i + p)] - U[static_cast<size_t>(i)];
      const double a = (u - U[static_cast<size_t>(i)]) / denom;
      q[static_cast<size_t>(i)] =
          a * cur.ctrl[static_cast<size_t>(i)] + (1.0 - a) * cur.ctrl[static_cast<size_t>(i - 1)];
    }
    for (size_t i = static_cast<size_t>(k + 1); i < q.size(); ++i)
      q[i] = cur.ctrl[i - 1];

    std::vector<double> nk = U;
    nk.insert(nk.begin() + k + 1, u);
    cur.kv = KnotVector(std::move(nk), p);
    cur.ctrl = std::move(q);
  }
  return cur;
}

/// Removes one occurrence of the interior knot u. Only valid when the knot
/// is exactly removable (the curve has the corresponding continuity); used
/// by degree elevation where removability is guaranteed by construction.
inline HomogeneousCurve remove_knot_exact(const HomogeneousCurve& c, double u,
                                          double tol = 1e-9) {
  const int p = c.kv.degree();
  const int s = c.kv.multiplicity(u);
  if (s == 0) throw RefinementError("knot not present");

  // Knot vector after removal.
  std::vector<double> nk = c.kv.knots();
  auto it = std::find(nk.begin(), nk.end(), u);
  nk.erase(it);
  KnotVector kv_new(nk, p);

  const int k = kv_new.find_span(u);
  const int s_new = s - 1;
  const auto& Un = kv_new.knots();
  const int n_new = static_cast<int>(c.ctrl.size()) - 1;

  // Invert the insertion relations. Anchored from both ends and meeting in
  // the middle keeps the back-substitution stable.
  std::vector<Vec4> q(static_cast<size_t>(n_new));
  const int lo = k - p + 1;          // first blended fine index
  const int hi = k - s_new;          // last blended fine index
  for (int i = 0; i <= lo - 1; ++i) q[static_cast<size_t>(i)] = c.ctrl[static_cast<size_t>(i)];
  for (int i = hi + 1; i <= n_new; ++i) q[static_cast<size_t>(i - 1)] = c.ctrl[static_cast<size_t>(i)];

  auto alpha = [&](int i) {
    return (u - Un[static_cast<size_t>(i)]) /
           (Un[static_cast<size_t>(i + p)] - Un[static_cast<size_t>(i)]);
  };

  const int mid = (lo + hi) / 2;
  for (int i = lo; i <= mid; ++i) {
    const double a = alpha(i);
    q[static_cast<size_t>(i)] =
        (c.ctrl[static_cast<size_t>(i)] - (1.0 - a) * q[static_cast<size_t>(i - 1)]) / a;
  }
  for (int i = hi; i > mid; --i) {
    const double a = alpha(i);
    q[static_cast<size_t>(i - 1)] =
        (c.ctrl[static_cast<size_t>(i)] - a * q[static_cast<size_t>(i)]) / (1.0 - a);
  }
  // Consistency at the meeting point: the two sweeps must give the same
  // interior control point (they overlap at index mid via relation mid+1).
  if (mid + 1 <= hi) {
    const double a = alpha(mid + 1);
    const Vec4 recon = a * q[static_cast<size_t>(mid + 1)] + (1.0 - a) * q[static_cast<size_t>(mid)];
    double scale = 0.0;
    for (const auto& pt : c.ctrl) scale = std::max(scale, pt.norm());
    if ((recon - c.ctrl[static_cast<size_t>(mid + 1)]).norm() > tol * std::max(scale, 1.0))
      throw RefinementError("knot is not exactly removable");
  }

  return {kv_new, std::move(q)};
}

namespace detail {

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Degree elevation of a single Bezier segment by t.
inline std::vector<Vec4> elevate_bezier(const std::vector<Vec4>& b, int t) {
  const int p = static_cast<int>(b.size()) - 1;
  std::vector<Vec4> out(static_cast<size_t>(p + t + 1), Vec4::Zero());
  for (int i = 0; i <= p + t; ++i) {
    const int jlo = std::max(0, i - t);
    const int jhi = std::min(p, i);
    for (int j = jlo; j <= jhi; ++j) {
      const double c =
          binomial(p, j) * binomial(t, i - j) / binomial(p + t, i);
      out[static_cast<size_t>(i)] += c * b[static_cast<size_t>(j)];
    }
  }
  return out;
}

}  // namespace detail

/// Degree elevation by `steps`: Bezier extraction, segment-wise elevation,
/// reassembly by exact knot removal. Every knot multiplicity grows by
/// `steps`, so the continuity of the curve is preserved.
inline HomogeneousCurve elevate_degree(const HomogeneousCurve& c, int steps) {
  if (steps < 1) throw RefinementError("elevation steps must be >= 1");
  const int p = c.kv.degree();

  // 1. Decompose into Bezier segments (raise interior multiplicities to p).
  HomogeneousCurve dec = c;
  const auto interior = c.kv.interior_knots();
  for (const auto& [u, m] : interior)
    if (m < p) dec = insert_knot(dec, u, p - m);

  // 2. Elevate each segment.
  const int pt = p + steps;
  const int nseg = dec.kv.num_spans();
  std::vector<Vec4> glued;
  glued.reserve(static_cast<size_t>(nseg * pt + 1));
  for (int seg = 0; seg < nseg; ++seg) {
    std::vector<Vec4> bez(dec.ctrl.begin() + seg * p,
                          dec.ctrl.begin() + seg * p + p + 1);
    auto ele = detail::elevate_bezier(bez, steps);
    const size_t start = (seg == 0) ? 0 : 1;  // shared joint point
    glued.insert(glued.end(), ele.begin() + static_cast<std::ptrdiff_t>(start), ele.end());
  }

  // 3. Target knot vector with interior multiplicities p+steps, then remove
  //    the surplus insertions down to original multiplicity + steps.
  std::vector<double> nk(static_cast<size_t>(pt + 1), c.kv.front());
  for (const auto& [u, m] : interior)
    nk.insert(nk.end(), static_cast<size_t>(pt), u);
  // keep sorted: interiors are in ascending order already
  std::sort(nk.begin() + pt + 1, nk.end());
  nk.insert(nk.end(), static_cast<size_t>(pt + 1), c.kv.back());
  HomogeneousCurve out{KnotVector(std::move(nk), pt), std::move(glued)};

  for (const auto& [u, m] : interior) {
    const int remove = p - m;  // pt - (m + steps)
    for (int r = 0; r < remove; ++r) out = remove_knot_exact(out, u);
  }
  return out;
}

/// Point on a homogeneous curve (for tests and self-checks).
inline Vec3 eval_homogeneous_curve(const HomogeneousCurve& c, double u) {
  const auto be = eval_basis(c.kv, u, 0);
  Vec4 h = Vec4::Zero();
  const int p = c.kv.degree();
  for (int j = 0; j <= p; ++j)
    h += be.values(j) * c.ctrl[static_cast<size_t>(be.first_index(p) + j)];
  return from_homogeneous(h);
}

}  // namespace voiga
