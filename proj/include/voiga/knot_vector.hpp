#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "voiga/core.hpp"

namespace voiga {

/// Open (clamped) knot vector of degree p. Indices are 0-based; knot spans
/// are the non-empty intervals [knots[i], knots[i+1]). Knot values are kept
/// as given (no rescaling to [0,1]).
class KnotVector {
public:
  KnotVector() = default;

  KnotVector(std::vector<double> knots, int degree)
      : knots_(std::move(knots)), p_(degree) {
    validate();
  }

  /// Clamped vector on [a,b] with the given interior knots (multiplicity 1
  /// each unless repeated in the list).
  static KnotVector clamped(int degree, double a, double b,
                            const std::vector<double>& interior = {}) {
    std::vector<double> k(degree + 1, a);
    k.insert(k.end(), interior.begin(), interior.end());
    k.insert(k.end(), degree + 1, b);
    return KnotVector(std::move(k), degree);
  }

  int degree() const { return p_; }
  int num_basis() const { return static_cast<int>(knots_.size()) - p_ - 1; }
  const std::vector<double>& knots() const { return knots_; }
  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }
  double operator[](int i) const { return knots_[static_cast<size_t>(i)]; }

  /// Index i with knots[i] <= xi < knots[i+1]; the last non-empty span at
  /// the right end. Throws DomainError outside the knot range.
  int find_span(double xi) const {
    const int n = num_basis() - 1;
    if (xi < knots_.front() || xi > knots_.back())
      throw DomainError("parameter " + std::to_string(xi) +
                        " outside knot range [" + std::to_string(front()) +
                        ", " + std::to_string(back()) + "]");
    if (xi >= knots_[static_cast<size_t>(n + 1)]) return n;
    if (xi <= knots_[static_cast<size_t>(p_)]) return p_;
    auto it = std::upper_bound(knots_.begin() + p_, knots_.begin() + n + 1, xi);
    return static_cast<int>(it - knots_.begin()) - 1;
  }

  int multiplicity(double u, double tol = 0.0) const {
    int m = 0;
    for (double k : knots_)
      if (std::abs(k - u) <= tol) ++m;
    return m;
  }

  /// Left indices of the non-empty spans, in order. One entry per element.
  std::vector<int> span_indices() const {
    std::vector<int> out;
    for (int i = p_; i < num_basis(); ++i)
      if (knots_[static_cast<size_t>(i)] < knots_[static_cast<size_t>(i + 1)])
        out.push_back(i);
    return out;
  }

  int num_spans() const { return static_cast<int>(span_indices().size()); }

  /// Distinct interior knot values with multiplicities.
  std::vector<std::pair<double, int>> interior_knots() const {
    std::vector<std::pair<double, int>> out;
    for (size_t i = p_ + 1; i + p_ + 1 < knots_.size(); ++i) {
      if (!out.empty() && out.back().first == knots_[i])
        ++out.back().second;
      else
        out.emplace_back(knots_[i], 1);
    }
    return out;
  }

  bool operator==(const KnotVector& o) const {
    return p_ == o.p_ && knots_ == o.knots_;
  }

private:
  void validate() const {
    if (p_ < 0) throw ConstructionError("negative degree");
    if (static_cast<int>(knots_.size()) < 2 * (p_ + 1))
      throw ConstructionError("knot vector too short for degree");
    for (size_t i = 1; i < knots_.size(); ++i)
      if (knots_[i] < knots_[i - 1])
        throw ConstructionError("knots must be non-decreasing");
    for (int i = 0; i <= p_; ++i) {
      if (knots_[static_cast<size_t>(i)] != knots_.front() ||
          knots_[knots_.size() - 1 - static_cast<size_t>(i)] != knots_.back())
        throw ConstructionError("knot vector is not clamped");
    }
    if (knots_[static_cast<size_t>(p_ + 1)] == knots_.front() ||
        knots_[knots_.size() - p_ - 2] == knots_.back())
      throw ConstructionError("end knot multiplicity exceeds degree+1");
    for (auto& [u, m] : interior_knots())
      if (m > p_)
        throw ConstructionError("interior knot multiplicity exceeds degree");
  }

  std::vector<double> knots_;
  int p_ = 0;
};

}  // namespace voiga
