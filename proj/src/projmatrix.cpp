#include "twistforge/projmatrix.hpp"

#include <sstream>

namespace twistforge {

namespace {

bool in_tower(const FieldPtr& top, const FieldPtr& sub) {
  for (const Field* F = top.get(); F; F = F->is_extension() ? F->base().get() : nullptr)
    if (F->same_as(*sub)) return true;
  return false;
}

}  // namespace

FieldPtr common_field(const FieldPtr& a, const FieldPtr& b) {
  if (same_field(a, b)) return a;
  if (in_tower(a, b)) return a;
  if (in_tower(b, a)) return b;
  throw DomainError("fields are not comparable in a tower", json{{"left", a->describe()}, {"right", b->describe()}});
}

ProjMatrix::ProjMatrix(FieldPtr field, Matrix entries) : field_(std::move(field)), m_(std::move(entries)) {
  for (const auto& row : m_)
    if (row.size() != m_.size()) throw Error("matrix is not square");
}

ProjMatrix ProjMatrix::identity(FieldPtr field, std::size_t size) {
  Matrix I = identity_matrix(*field, size);
  return ProjMatrix(std::move(field), std::move(I));
}

ProjMatrix ProjMatrix::diagonal(FieldPtr field, const std::vector<Elem>& diag) {
  Matrix D(diag.size(), std::vector<Elem>(diag.size(), field->zero()));
  for (std::size_t i = 0; i < diag.size(); ++i) D[i][i] = diag[i];
  return ProjMatrix(std::move(field), std::move(D));
}

Elem ProjMatrix::det() const { return determinant(*field_, m_); }

bool ProjMatrix::invertible() const { return !field_->is_zero(det()); }

void ProjMatrix::require_invertible() const {
  Elem d = det();
  if (field_->is_zero(d)) throw Error("singular matrix", json{{"determinant", field_->elem_to_json(d)}});
}

ProjMatrix ProjMatrix::operator*(const ProjMatrix& other) const {
  if (size() != other.size()) throw DomainError("matrix sizes differ");
  FieldPtr F = common_field(field_, other.field_);
  ProjMatrix a = embed_into(F), b = other.embed_into(F);
  return ProjMatrix(F, mat_mul(*F, a.m_, b.m_));
}

ProjMatrix ProjMatrix::scaled(const Elem& c) const {
  Matrix r = m_;
  for (auto& row : r)
    for (auto& e : row) e = field_->mul(e, c);
  return ProjMatrix(field_, std::move(r));
}

ProjMatrix ProjMatrix::pow(unsigned e) const {
  ProjMatrix r = identity(field_, size());
  ProjMatrix base = *this;
  while (e) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

ProjMatrix ProjMatrix::inverse() const {
  auto inv = twistforge::inverse(*field_, m_);
  if (!inv) require_invertible();
  return ProjMatrix(field_, std::move(*inv));
}

ProjMatrix ProjMatrix::map(FieldPtr target, const std::function<Elem(const Elem&)>& f) const {
  Matrix r = m_;
  for (auto& row : r)
    for (auto& e : row) e = f(e);
  return ProjMatrix(std::move(target), std::move(r));
}

ProjMatrix ProjMatrix::embed_into(FieldPtr larger) const {
  if (same_field(field_, larger)) return *this;
  const Field& L = *larger;
  const Field& S = *field_;
  return map(larger, [&](const Elem& e) { return L.embed_from(S, e); });
}

ProjMatrix ProjMatrix::normalized() const {
  for (const auto& row : m_)
    for (const auto& e : row)
      if (!field_->is_zero(e)) return scaled(field_->inv(e));
  return *this;
}

bool ProjMatrix::exact_equal(const ProjMatrix& other) const {
  if (size() != other.size()) return false;
  FieldPtr F = common_field(field_, other.field_);
  return mat_eq(*F, embed_into(F).m_, other.embed_into(F).m_);
}

bool ProjMatrix::pgl_equal(const ProjMatrix& other) const { return normalized().exact_equal(other.normalized()); }

std::optional<Elem> ProjMatrix::scalar_value() const {
  const Field& F = *field_;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j) {
      if (i != j && !F.is_zero(m_[i][j])) return std::nullopt;
      if (i == j && !F.eq(m_[i][i], m_[0][0])) return std::nullopt;
    }
  return m_[0][0];
}

bool ProjMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (i != j && !field_->is_zero(m_[i][j])) return false;
  return true;
}

json ProjMatrix::to_json() const {
  json rows = json::array();
  for (const auto& row : m_) {
    json r = json::array();
    for (const auto& e : row) r.push_back(field_->elem_to_json(e));
    rows.push_back(r);
  }
  return json{{"field", field_->to_json()}, {"rows", rows}};
}

ProjMatrix ProjMatrix::from_json(const json& j, const FieldPtr& default_field, const std::string& pointer) {
  const json* rows = &j;
  FieldPtr F = default_field;
  std::string rp = pointer;
  if (j.is_object()) {
    if (!j.contains("rows")) throw ParseError("matrix object needs 'rows'", pointer);
    if (j.contains("field")) F = Field::from_json(j["field"], pointer + "/field");
    rows = &j["rows"];
    rp += "/rows";
  }
  if (!F) throw ParseError("matrix field unspecified", pointer);
  if (!rows->is_array() || rows->empty()) throw ParseError("matrix rows must be a nonempty array", rp);
  Matrix m;
  for (std::size_t i = 0; i < rows->size(); ++i) {
    const json& row = (*rows)[i];
    if (!row.is_array() || row.size() != rows->size())
      throw ParseError("matrix must be square", rp + "/" + std::to_string(i));
    std::vector<Elem> r;
    for (std::size_t k = 0; k < row.size(); ++k)
      r.push_back(F->elem_from_json(row[k], rp + "/" + std::to_string(i) + "/" + std::to_string(k)));
    m.push_back(std::move(r));
  }
  return ProjMatrix(F, std::move(m));
}

std::string ProjMatrix::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < size(); ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < size(); ++j) os << (j ? ", " : "") << field_->format(m_[i][j]);
  }
  os << "]";
  return os.str();
}

}  // namespace twistforge
