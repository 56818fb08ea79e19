#pragma once

// Square matrices over a Field, compared modulo nonzero scalars (PGL).

#include <functional>

#include "twistforge/field.hpp"

namespace twistforge {

class ProjMatrix {
 public:
  ProjMatrix() = default;
  /// Rejects non-square input; invertibility is checked by `require_invertible`.
  ProjMatrix(FieldPtr field, Matrix entries);

  static ProjMatrix identity(FieldPtr field, std::size_t size);
  static ProjMatrix diagonal(FieldPtr field, const std::vector<Elem>& diag);

  const FieldPtr& field() const noexcept { return field_; }
  const Matrix& entries() const noexcept { return m_; }
  std::size_t size() const noexcept { return m_.size(); }
  const Elem& operator()(std::size_t i, std::size_t j) const { return m_[i][j]; }

  Elem det() const;
  bool invertible() const;
  /// Throws Error with the determinant as witness when singular.
  void require_invertible() const;

  ProjMatrix operator*(const ProjMatrix& other) const;
  ProjMatrix scaled(const Elem& c) const;
  ProjMatrix pow(unsigned e) const;
  ProjMatrix inverse() const;
  /// Entrywise map (Galois action, embedding into a larger field).
  ProjMatrix map(FieldPtr target, const std::function<Elem(const Elem&)>& f) const;
  ProjMatrix embed_into(FieldPtr larger) const;

  /// Divides by the first nonzero entry in row-major order.
  ProjMatrix normalized() const;
  /// Equality in PGL (after normalization).
  bool pgl_equal(const ProjMatrix& other) const;
  bool exact_equal(const ProjMatrix& other) const;
  /// The scalar c with *this = c * I, if any.
  std::optional<Elem> scalar_value() const;
  bool is_diagonal() const;

  json to_json() const;
  static ProjMatrix from_json(const json& j, const FieldPtr& default_field, const std::string& pointer = "");
  std::string str() const;

 private:
  FieldPtr field_;
  Matrix m_;
};

/// The larger of two tower fields when one embeds in the other.
FieldPtr common_field(const FieldPtr& a, const FieldPtr& b);

}  // namespace twistforge
