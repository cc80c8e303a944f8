#pragma once

#include <vector>

#include "voiga/core.hpp"
#include "voiga/nurbs.hpp"

namespace voiga {

enum class ElementKind { Bulk, ContactLayer };

/// One element of a varying-order body. conn holds merged control-point
/// indices; for contact-layer elements the through-thickness interior
/// levels come first (ascending), the elevated-face block last, which makes
/// the steps=0 connectivity identical to the standard tensor-product body.
struct VOElement {
  int id = 0;
  ElementKind kind = ElementKind::Bulk;
  std::array<int, 3> spans{};    // knot span left-indices in the bulk volume
  std::array<int, 2> spans_c{};  // elevated-surface span left-indices (layer)
  std::vector<int> conn;
  bool degenerate = false;

  std::array<double, 2> range(const NurbsVolume& v, int d) const {
    const auto& kv = v.kv[static_cast<size_t>(d)];
    return {kv[spans[static_cast<size_t>(d)]], kv[spans[static_cast<size_t>(d)] + 1]};
  }
};

/// Basis values and parametric gradients of one element at one point,
/// ordered like VOElement::conn.
struct ElementBasis {
  VecX values;
  MatX grads;  // n x 3
};

/// Solid with a higher-order NURBS contact layer: the contact face carries a
/// degree-elevated surface while the rest of the volume keeps its original
/// orders. The volume is stored canonically with the contact face at Xi3Max.
class VOBody {
public:
  NurbsVolume vol;        // canonicalized bulk volume
  NurbsSurface surf_c;    // elevated contact-face surface (== face at steps=0)
  int steps = 0;
  std::vector<Vec4> ctrl;         // merged control table (homogeneous)
  std::vector<VOElement> elements;
  std::vector<int> face_old_to_new;  // original face-slab CP -> merged id (steps=0 only)

  int n1c() const { return surf_c.n1; }
  int n2c() const { return surf_c.n2; }
  int num_interior_cp() const { return vol.n1 * vol.n2 * (vol.n3 - 1); }
  int num_face_cp() const { return n1c() * n2c(); }
  int num_cp() const { return num_interior_cp() + num_face_cp(); }
  int face_cp_index(int a, int b) const { return num_interior_cp() + a + n1c() * b; }
  int num_elements() const { return static_cast<int>(elements.size()); }

  int order(int d) const { return vol.degree(d); }
  int order_c(int d) const { return surf_c.degree(d); }

  Vec3 cp_position(int id) const { return from_homogeneous(ctrl[static_cast<size_t>(id)]); }
  double cp_weight(int id) const { return ctrl[static_cast<size_t>(id)].w(); }

  /// Element count per parametric direction.
  std::array<int, 3> element_counts() const {
    return {vol.kv[0].num_spans(), vol.kv[1].num_spans(), vol.kv[2].num_spans()};
  }

  ElementBasis eval_basis(int elem, const Vec3& xi) const {
    const VOElement& e = elements[static_cast<size_t>(elem)];
    return e.kind == ElementKind::Bulk ? bulk_basis(xi) : layer_basis(xi);
  }

  /// Reference point and Jacobian through the merged table.
  VolumeEval eval_geometry(int elem, const Vec3& xi) const {
    const VOElement& e = elements[static_cast<size_t>(elem)];
    const ElementBasis b = eval_basis(elem, xi);
    VolumeEval out;
    out.x = Vec3::Zero();
    out.jac = Mat3::Zero();
    for (size_t a = 0; a < e.conn.size(); ++a) {
      const Vec3 p = cp_position(e.conn[a]);
      out.x += b.values(static_cast<int>(a)) * p;
      out.jac += p * b.grads.row(static_cast<int>(a));
    }
    out.detJ = out.jac.determinant();
    return out;
  }

  /// Contact-face surface elements: (pc1+1)(pc2+1) merged ids per element,
  /// lexicographic, matching the tail block of the volume layer elements.
  struct FaceElement {
    std::array<int, 2> spans_c{};
    std::vector<int> conn;
  };
  std::vector<FaceElement> face_elements() const {
    std::vector<FaceElement> out;
    const auto s1 = surf_c.kv[0].span_indices();
    const auto s2 = surf_c.kv[1].span_indices();
    const int pc1 = order_c(0), pc2 = order_c(1);
    for (int e2 = 0; e2 < static_cast<int>(s2.size()); ++e2)
      for (int e1 = 0; e1 < static_cast<int>(s1.size()); ++e1) {
        FaceElement fe;
        fe.spans_c = {s1[static_cast<size_t>(e1)], s2[static_cast<size_t>(e2)]};
        for (int b = 0; b <= pc2; ++b)
          for (int a = 0; a <= pc1; ++a)
            fe.conn.push_back(face_cp_index(fe.spans_c[0] - pc1 + a, fe.spans_c[1] - pc2 + b));
        out.push_back(std::move(fe));
      }
    return out;
  }

  /// Merged control-point ids lying on a parametric face (for Dirichlet and
  /// load sets). Faces touching the contact slab pick up the corresponding
  /// boundary rows of the elevated surface.
  std::vector<int> face_set(Face f) const {
    std::vector<int> out;
    const int axis = face_axis(f);
    const bool maxf = face_is_max(f);
    if (axis == 2) {
      if (maxf) {
        for (int id = num_interior_cp(); id < num_cp(); ++id) out.push_back(id);
      } else {
        for (int j = 0; j < vol.n2; ++j)
          for (int i = 0; i < vol.n1; ++i) out.push_back(vol.index(i, j, 0));
      }
      return out;
    }
    const int fixed = maxf ? (axis == 0 ? vol.n1 - 1 : vol.n2 - 1) : 0;
    for (int k = 0; k < vol.n3 - 1; ++k) {
      if (axis == 0)
        for (int j = 0; j < vol.n2; ++j) out.push_back(vol.index(fixed, j, k));
      else
        for (int i = 0; i < vol.n1; ++i) out.push_back(vol.index(i, fixed, k));
    }
    const int fixed_c = maxf ? (axis == 0 ? n1c() - 1 : n2c() - 1) : 0;
    if (axis == 0)
      for (int b = 0; b < n2c(); ++b) out.push_back(face_cp_index(fixed_c, b));
    else
      for (int a = 0; a < n1c(); ++a) out.push_back(face_cp_index(a, fixed_c));
    return out;
  }

  /// DOF bookkeeping mirroring the benchmark tables: interface = contact
  /// face slab, bulk = everything else (3 dofs per control point).
  struct DofSummary {
    int interface = 0, bulk = 0, total = 0;
  };
  DofSummary dof_summary() const {
    DofSummary s;
    s.interface = 3 * num_face_cp();
    s.bulk = 3 * num_interior_cp();
    s.total = s.interface + s.bulk;
    return s;
  }

private:
  ElementBasis bulk_basis(const Vec3& xi) const {
    const auto tb = trivariate_basis(vol, xi);
    ElementBasis out;
    out.values = tb.values;
    out.grads = tb.grads;
    return out;
  }

  ElementBasis layer_basis(const Vec3& xi) const {
    const int p1 = order(0), p2 = order(1), p3 = order(2);
    const int pc1 = order_c(0), pc2 = order_c(1);
    const BasisEval b1 = voiga::eval_basis(vol.kv[0], xi(0), 1);
    const BasisEval b2 = voiga::eval_basis(vol.kv[1], xi(1), 1);
    const BasisEval b3 = voiga::eval_basis(vol.kv[2], xi(2), 1);
    const BasisEval c1 = voiga::eval_basis(surf_c.kv[0], xi(0), 1);
    const BasisEval c2 = voiga::eval_basis(surf_c.kv[1], xi(1), 1);

    const int n_int = (p1 + 1) * (p2 + 1) * p3;
    const int n = n_int + (pc1 + 1) * (pc2 + 1);
    VecX num(n);
    MatX dnum(n, 3);
    // Interior levels: original orders, through-thickness functions below
    // the face level. The face level is the last function (index n3-1); it
    // is the local index p3 in the last span, so locals 0..p3-1 are interior.
    int a = 0;
    for (int k = 0; k < p3; ++k)
      for (int j = 0; j <= p2; ++j)
        for (int i = 0; i <= p1; ++i, ++a) {
          const double w = vol.at(b1.first_index(p1) + i, b2.first_index(p2) + j,
                                  b3.first_index(p3) + k)
                               .w();
          num(a) = w * b1.values(i) * b2.values(j) * b3.values(k);
          dnum(a, 0) = w * b1.ders(1, i) * b2.values(j) * b3.values(k);
          dnum(a, 1) = w * b1.values(i) * b2.ders(1, j) * b3.values(k);
          dnum(a, 2) = w * b1.values(i) * b2.values(j) * b3.ders(1, k);
        }
    // Elevated face level, weighted by the last through-thickness function.
    const double N3f = b3.values(p3);
    const double dN3f = b3.ders(1, p3);
    for (int bb = 0; bb <= pc2; ++bb)
      for (int aa = 0; aa <= pc1; ++aa, ++a) {
        const double w =
            surf_c.at(c1.first_index(pc1) + aa, c2.first_index(pc2) + bb).w();
        const double s12 = c1.values(aa) * c2.values(bb);
        num(a) = w * s12 * N3f;
        dnum(a, 0) = w * c1.ders(1, aa) * c2.values(bb) * N3f;
        dnum(a, 1) = w * c1.values(aa) * c2.ders(1, bb) * N3f;
        dnum(a, 2) = w * s12 * dN3f;
      }

    const double W = num.sum();
    const Vec3 dW = dnum.colwise().sum().transpose();
    ElementBasis out;
    out.values = num / W;
    out.grads.resize(n, 3);
    for (int r = 0; r < n; ++r)
      out.grads.row(r) = (dnum.row(r) - out.values(r) * dW.transpose()) / W;
    return out;
  }

  friend VOBody build_vo_body(const NurbsVolume&, Face, int);
};

/// Builds the varying-order body: reorients the volume so the contact face
/// is Xi3Max, degree-elevates that face surface by `elevation_steps` in both
/// in-surface directions, merges control tables and derives per-element
/// connectivity. steps=0 reproduces the standard body exactly.
inline VOBody build_vo_body(const NurbsVolume& vol_in, Face contact_face,
                            int elevation_steps) {
  if (elevation_steps < 0) throw ConstructionError("elevation steps must be >= 0");
  VOBody body;
  body.vol = canonicalize_for_face(vol_in, contact_face);
  body.steps = elevation_steps;
  if (body.vol.kv[2].num_spans() < 1)
    throw ConstructionError("volume needs at least one element through thickness");

  const auto face = extract_face_surface(body.vol, Face::Xi3Max);
  body.surf_c = elevation_steps > 0
                    ? elevate_surface(face.s, {elevation_steps, elevation_steps})
                    : face.s;

  // Span alignment: the elevated surface must partition exactly like the
  // bulk face (same interior knot values).
  for (int d = 0; d < 2; ++d) {
    const auto a = body.vol.kv[static_cast<size_t>(d)].interior_knots();
    const auto b = body.surf_c.kv[static_cast<size_t>(d)].interior_knots();
    if (a.size() != b.size())
      throw ConstructionError("contact-layer span mismatch after elevation");
    for (size_t i = 0; i < a.size(); ++i)
      if (std::abs(a[i].first - b[i].first) > 1e-12)
        throw ConstructionError("contact-layer span mismatch after elevation");
  }

  // Merged control table: interior slabs in lexicographic order, then the
  // elevated face control points.
  body.ctrl.reserve(static_cast<size_t>(body.num_cp()));
  for (int k = 0; k < body.vol.n3 - 1; ++k)
    for (int j = 0; j < body.vol.n2; ++j)
      for (int i = 0; i < body.vol.n1; ++i)
        body.ctrl.push_back(body.vol.at(i, j, k));
  for (const auto& h : body.surf_c.ctrl) body.ctrl.push_back(h);

  if (elevation_steps == 0) {
    body.face_old_to_new.resize(static_cast<size_t>(body.vol.n1 * body.vol.n2));
    for (int j = 0; j < body.vol.n2; ++j)
      for (int i = 0; i < body.vol.n1; ++i)
        body.face_old_to_new[static_cast<size_t>(i + body.vol.n1 * j)] =
            body.face_cp_index(i, j);
  }

  const auto s1 = body.vol.kv[0].span_indices();
  const auto s2 = body.vol.kv[1].span_indices();
  const auto s3 = body.vol.kv[2].span_indices();
  const auto sc1 = body.surf_c.kv[0].span_indices();
  const auto sc2 = body.surf_c.kv[1].span_indices();
  const int p1 = body.order(0), p2 = body.order(1), p3 = body.order(2);
  const int pc1 = body.order_c(0), pc2 = body.order_c(1);
  const int n3 = body.vol.n3;

  int id = 0;
  for (size_t e3 = 0; e3 < s3.size(); ++e3)
    for (size_t e2 = 0; e2 < s2.size(); ++e2)
      for (size_t e1 = 0; e1 < s1.size(); ++e1, ++id) {
        VOElement el;
        el.id = id;
        el.spans = {s1[e1], s2[e2], s3[e3]};
        const bool layer = (e3 + 1 == s3.size());
        el.kind = layer ? ElementKind::ContactLayer : ElementKind::Bulk;
        if (!layer) {
          for (int k = 0; k <= p3; ++k)
            for (int j = 0; j <= p2; ++j)
              for (int i = 0; i <= p1; ++i)
                el.conn.push_back(body.vol.index(s1[e1] - p1 + i, s2[e2] - p2 + j,
                                                 s3[e3] - p3 + k));
        } else {
          el.spans_c = {sc1[e1], sc2[e2]};
          for (int k = 0; k < p3; ++k)
            for (int j = 0; j <= p2; ++j)
              for (int i = 0; i <= p1; ++i)
                el.conn.push_back(body.vol.index(s1[e1] - p1 + i, s2[e2] - p2 + j,
                                                 s3[e3] - p3 + k));
          for (int b = 0; b <= pc2; ++b)
            for (int a = 0; a <= pc1; ++a)
              el.conn.push_back(body.face_cp_index(sc1[e1] - pc1 + a, sc2[e2] - pc2 + b));
          if (static_cast<int>(el.conn.size()) !=
              (pc1 + 1) * (pc2 + 1) + (p1 + 1) * (p2 + 1) * p3)
            throw ConstructionError("contact-layer connectivity count mismatch");
        }
        body.elements.push_back(std::move(el));
      }
  (void)n3;

  // Degenerate elements (collapsed edges at patch poles): an element edge of
  // zero length marks them. Interior Jacobians must stay non-negative.
  double scale = 0.0;
  for (const auto& h : body.ctrl)
    scale = std::max(scale, from_homogeneous(h).norm());
  static const int edge_pairs[12][2] = {{0, 1}, {2, 3}, {4, 5}, {6, 7},
                                        {0, 2}, {1, 3}, {4, 6}, {5, 7},
                                        {0, 4}, {1, 5}, {2, 6}, {3, 7}};
  for (auto& el : body.elements) {
    std::array<Vec3, 8> corners;
    for (int c = 0; c < 8; ++c) {
      Vec3 xi;
      for (int d = 0; d < 3; ++d) {
        const auto r = el.range(body.vol, d);
        xi(d) = ((c >> d) & 1) ? r[1] : r[0];
      }
      corners[static_cast<size_t>(c)] = eval_volume(body.vol, xi).x;
    }
    for (const auto& ep : edge_pairs)
      if ((corners[static_cast<size_t>(ep[0])] - corners[static_cast<size_t>(ep[1])]).norm() <
          1e-12 * std::max(scale, 1.0))
        el.degenerate = true;
    Vec3 xi_mid;
    for (int d = 0; d < 3; ++d) {
      const auto r = el.range(body.vol, d);
      xi_mid(d) = 0.5 * (r[0] + r[1]);
    }
    if (eval_volume(body.vol, xi_mid).detJ <= 0.0 && !el.degenerate)
      throw MeshQualityError(el.id, "non-positive Jacobian in element " + std::to_string(el.id));
  }
  return body;
}

}  // namespace voiga
