#include "twistforge/hyperform.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "twistforge/groebner.hpp"

namespace twistforge {

// MPoly

MPoly MPoly::monomial(FieldPtr field, const Exponent& e, const Elem& c) {
  MPoly f(std::move(field), static_cast<int>(e.size()));
  f.add_term(e, c);
  return f;
}

MPoly MPoly::variable(FieldPtr field, int nvars, int i) {
  Exponent e(nvars, 0);
  e.at(i) = 1;
  Elem one = field->one();
  return monomial(std::move(field), e, one);
}

MPoly MPoly::constant(FieldPtr field, int nvars, const Elem& c) {
  return monomial(std::move(field), Exponent(nvars, 0), c);
}

Elem MPoly::coeff(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? field_->zero() : it->second;
}

void MPoly::add_term(const Exponent& e, const Elem& c) {
  if (static_cast<int>(e.size()) != nvars_) throw DomainError("exponent length does not match variable count");
  for (int x : e)
    if (x < 0) throw DomainError("negative exponent");
  if (field_->is_zero(c)) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (inserted) return;
  it->second = field_->add(it->second, c);
  if (field_->is_zero(it->second)) terms_.erase(it);
}

int MPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

bool MPoly::is_homogeneous(int d) const {
  for (const auto& [e, c] : terms_)
    if (std::accumulate(e.begin(), e.end(), 0) != d) return false;
  return true;
}

MPoly MPoly::operator+(const MPoly& o) const {
  require_same_field(field_, o.field_, "MPoly +");
  MPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

MPoly MPoly::operator-(const MPoly& o) const {
  require_same_field(field_, o.field_, "MPoly -");
  MPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, field_->neg(c));
  return r;
}

MPoly MPoly::operator*(const MPoly& o) const {
  require_same_field(field_, o.field_, "MPoly *");
  if (nvars_ != o.nvars_) throw DomainError("variable counts differ");
  MPoly r(field_, nvars_);
  Exponent e(nvars_);
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) {
      for (int i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, field_->mul(ca, cb));
    }
  return r;
}

MPoly MPoly::scaled(const Elem& c) const {
  MPoly r(field_, nvars_);
  for (const auto& [e, a] : terms_) r.add_term(e, field_->mul(a, c));
  return r;
}

MPoly MPoly::pow(unsigned e) const {
  MPoly r = constant(field_, nvars_, field_->one());
  MPoly base = *this;
  while (e) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

MPoly MPoly::derivative(int i) const {
  MPoly r(field_, nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponent f = e;
    --f[i];
    r.add_term(f, field_->mul(c, field_->from_int(e[i])));
  }
  return r;
}

Elem MPoly::eval(const std::vector<Elem>& point) const {
  if (static_cast<int>(point.size()) != nvars_) throw DomainError("point has the wrong number of coordinates");
  Elem s = field_->zero();
  for (const auto& [e, c] : terms_) {
    Elem t = c;
    for (int i = 0; i < nvars_; ++i)
      if (e[i]) t = field_->mul(t, field_->pow(point[i], e[i]));
    s = field_->add(s, t);
  }
  return s;
}

bool MPoly::operator==(const MPoly& o) const {
  if (nvars_ != o.nvars_ || terms_.size() != o.terms_.size()) return false;
  if (!same_field(field_, o.field_)) return false;
  auto it = o.terms_.begin();
  for (const auto& [e, c] : terms_) {
    if (e != it->first || !field_->eq(c, it->second)) return false;
    ++it;
  }
  return true;
}

MPoly MPoly::map(FieldPtr target, const std::function<Elem(const Elem&)>& f) const {
  MPoly r(std::move(target), nvars_);
  for (const auto& [e, c] : terms_) r.add_term(e, f(c));
  return r;
}

MPoly MPoly::embed_into(FieldPtr larger) const {
  if (same_field(field_, larger)) return *this;
  const Field& S = *field_;
  const Field& L = *larger;
  return map(larger, [&](const Elem& c) { return L.embed_from(S, c); });
}

json MPoly::to_json() const {
  json terms = json::array();
  for (const auto& [e, c] : terms_) terms.push_back(json{{"e", e}, {"c", field_->elem_to_json(c)}});
  json j{{"vars", nvars_}, {"terms", terms}};
  if (!field_->is_rationals()) j["field"] = field_->to_json();
  return j;
}

MPoly MPoly::from_json(const json& j, const FieldPtr& default_field, const std::string& pointer) {
  if (!j.is_object()) throw ParseError("polynomial must be an object", pointer);
  if (!j.contains("vars") || !j["vars"].is_number_integer() || j["vars"].get<int>() < 1)
    throw ParseError("'vars' must be a positive integer", pointer + "/vars");
  if (!j.contains("terms") || !j["terms"].is_array()) throw ParseError("'terms' must be an array", pointer + "/terms");
  FieldPtr F = j.contains("field") ? Field::from_json(j["field"], pointer + "/field") : default_field;
  const int nv = j["vars"].get<int>();
  MPoly f(F, nv);
  for (std::size_t k = 0; k < j["terms"].size(); ++k) {
    const json& t = j["terms"][k];
    const std::string tp = pointer + "/terms/" + std::to_string(k);
    if (!t.is_object() || !t.contains("e") || !t.contains("c")) throw ParseError("term needs 'e' and 'c'", tp);
    const json& je = t["e"];
    if (!je.is_array() || static_cast<int>(je.size()) != nv)
      throw ParseError("exponent must list " + std::to_string(nv) + " entries", tp + "/e");
    Exponent e;
    for (std::size_t i = 0; i < je.size(); ++i) {
      if (!je[i].is_number_integer() || je[i].get<long long>() < 0) throw ParseError("exponent entries are nonnegative integers", tp + "/e/" + std::to_string(i));
      e.push_back(je[i].get<int>());
    }
    f.add_term(e, F->elem_from_json(t["c"], tp + "/c"));
  }
  return f;
}

std::string MPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string cs = field_->format(c);
    const bool monomial_one = std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
    const bool compound = field_->is_extension() && cs.find_first_of("+-", 1) != std::string::npos;
    if (!first) os << " + ";
    first = false;
    if (compound) cs = "(" + cs + ")";
    bool need_star = false;
    if (monomial_one || cs != "1") {
      os << cs;
      need_star = !monomial_one;
    }
    for (int i = 0; i < nvars_; ++i) {
      if (!e[i]) continue;
      os << (need_star ? "*" : "") << "X" << i;
      if (e[i] > 1) os << "^" << e[i];
      need_star = true;
    }
  }
  return os.str();
}

// HomForm

HomForm::HomForm(int n, int d, MPoly body) : n_(n), d_(d), body_(std::move(body)) {
  if (n < 1) throw DomainError("projective dimension must be at least 1");
  if (d < 1) throw DomainError("degree must be positive");
  if (body_.nvars() != n + 1) throw DomainError("form must have n+1 variables", json{{"n", n}, {"vars", body_.nvars()}});
  if (body_.is_zero()) throw DomainError("form is identically zero");
  if (!body_.is_homogeneous(d)) throw DomainError("form is not homogeneous of degree " + std::to_string(d));
}

HomForm HomForm::diagonal(FieldPtr field, const std::vector<Elem>& coeffs, int d) {
  const int nv = static_cast<int>(coeffs.size());
  MPoly f(field, nv);
  for (int i = 0; i < nv; ++i) {
    Exponent e(nv, 0);
    e[i] = d;
    f.add_term(e, coeffs[i]);
  }
  return HomForm(nv - 1, d, std::move(f));
}

HomForm HomForm::fermat(FieldPtr field, int n, int d) {
  std::vector<Elem> c(n + 1, field->one());
  return diagonal(std::move(field), c, d);
}

bool HomForm::is_diagonal() const {
  for (const auto& [e, c] : body_.terms())
    if (std::count(e.begin(), e.end(), 0) != n_) return false;
  return true;
}

HomForm HomForm::embed_into(FieldPtr larger) const { return HomForm(n_, d_, body_.embed_into(std::move(larger))); }

HomForm HomForm::scaled(const Elem& c) const { return HomForm(n_, d_, body_.scaled(c)); }

json HomForm::to_json() const {
  json j = body_.to_json();
  j["n"] = n_;
  j["d"] = d_;
  return j;
}

HomForm HomForm::from_json(const json& j, const FieldPtr& default_field, const std::string& pointer) {
  if (!j.is_object()) throw ParseError("form must be an object", pointer);
  // n and d are optional: a bare polynomial document gives n = vars - 1 and
  // d = its total degree.
  for (const char* key : {"n", "d"})
    if (j.contains(key) && (!j[key].is_number_integer() || j[key].get<long long>() < 0))
      throw ParseError(std::string("'") + key + "' must be a nonnegative integer", pointer + "/" + key);
  MPoly body = MPoly::from_json(j, default_field, pointer);
  const int n = j.contains("n") ? j["n"].get<int>() : body.nvars() - 1;
  const int d = j.contains("d") ? j["d"].get<int>() : body.total_degree();
  try {
    return HomForm(n, d, std::move(body));
  } catch (const DomainError& e) {
    throw ParseError(e.what(), pointer);
  }
}

HomForm substitute(const HomForm& F, const ProjMatrix& M) {
  if (static_cast<int>(M.size()) != F.n() + 1)
    throw DomainError("matrix size does not match the form", json{{"matrix", M.size()}, {"vars", F.n() + 1}});
  M.require_invertible();
  FieldPtr K = common_field(F.field(), M.field());
  ProjMatrix A = M.embed_into(K);
  MPoly body = F.body().embed_into(K);
  const int nv = F.n() + 1;
  std::vector<std::vector<MPoly>> powers(nv);
  for (int i = 0; i < nv; ++i) {
    MPoly L(K, nv);
    for (int j = 0; j < nv; ++j) {
      Exponent e(nv, 0);
      e[j] = 1;
      L.add_term(e, A(i, j));
    }
    powers[i] = {MPoly::constant(K, nv, K->one()), L};
  }
  auto power = [&](int i, int k) -> const MPoly& {
    while (static_cast<int>(powers[i].size()) <= k) powers[i].push_back(powers[i].back() * powers[i][1]);
    return powers[i][k];
  };
  MPoly out(K, nv);
  for (const auto& [e, c] : body.terms()) {
    MPoly t = MPoly::constant(K, nv, c);
    for (int i = 0; i < nv; ++i)
      if (e[i]) t = t * power(i, e[i]);
    out = out + t;
  }
  return HomForm(F.n(), F.d(), std::move(out));
}

std::vector<MPoly> jacobian(const HomForm& F) {
  std::vector<MPoly> J;
  for (int i = 0; i <= F.n(); ++i) J.push_back(F.body().derivative(i));
  return J;
}

MPoly euler_sum(const HomForm& F) {
  const int nv = F.n() + 1;
  MPoly s(F.field(), nv);
  auto J = jacobian(F);
  for (int i = 0; i < nv; ++i) s = s + MPoly::variable(F.field(), nv, i) * J[i];
  return s;
}

bool is_singular_point(const HomForm& F, const std::vector<Elem>& point) {
  const Field& K = *F.field();
  if (std::all_of(point.begin(), point.end(), [&](const Elem& x) { return K.is_zero(x); }))
    throw DomainError("the zero vector is not a projective point");
  if (!K.is_zero(F.body().eval(point))) return false;
  for (const auto& g : jacobian(F))
    if (!K.is_zero(g.eval(point))) return false;
  return true;
}

// Smoothness

json SmoothnessCertificate::to_json(const Field& F) const {
  json j{{"method", method}, {"smooth", smooth}, {"conclusive", conclusive}, {"order", order}};
  if (prime) j["prime"] = prime;
  if (place) j["place"] = place->to_json();
  j["pure_powers"] = pure_powers;
  j["leading_monomials"] = leading_monomials;
  if (singular_point_mod_p) j["singular_point_mod_p"] = *singular_point_mod_p;
  if (singular_point) {
    json pt = json::array();
    for (const auto& x : *singular_point) pt.push_back(F.elem_to_json(x));
    j["singular_point"] = pt;
  }
  if (!attempts.empty()) j["attempts"] = attempts;
  if (!note.empty()) j["note"] = note;
  return j;
}

namespace {

// Runs the Jacobian-ideal test on a form over a prime field or Q.
void groebner_verdict(const HomForm& F, SmoothnessCertificate& cert) {
  std::vector<MPoly> gens{F.body()};
  for (auto& g : jacobian(F)) gens.push_back(std::move(g));
  GroebnerStats stats;
  auto G = groebner_basis(gens, &stats);
  const int nv = F.n() + 1;
  std::vector<bool> have(nv, false);
  bool unit = false;
  for (const auto& g : G) {
    Exponent lm = grevlex_leading(g);
    cert.leading_monomials.push_back(lm);
    int support = 0, var = -1;
    for (int i = 0; i < nv; ++i)
      if (lm[i]) {
        ++support;
        var = i;
      }
    if (support == 0) unit = true;
    if (support == 1 && !have[var]) {
      have[var] = true;
      cert.pure_powers.push_back(lm);
    }
  }
  cert.smooth = unit || std::all_of(have.begin(), have.end(), [](bool b) { return b; });
}

// Searches P^n(F_p) for a singular point of a form over F_p.
std::optional<std::vector<std::uint64_t>> singular_point_search_mod_p(const HomForm& F, std::uint64_t p) {
  const int nv = F.n() + 1;
  double total = 1;
  for (int i = 0; i < F.n(); ++i) total *= static_cast<double>(p);
  if (total > 2e5) return std::nullopt;
  const Field& K = *F.field();
  auto J = jacobian(F);
  std::vector<std::uint64_t> v(nv);
  std::vector<Elem> pt(nv);
  // Normalized points: first nonzero coordinate is 1.
  for (int lead = 0; lead < nv; ++lead) {
    std::vector<std::uint64_t> rest(nv - lead - 1, 0);
    while (true) {
      std::fill(v.begin(), v.end(), 0);
      v[lead] = 1;
      for (std::size_t k = 0; k < rest.size(); ++k) v[lead + 1 + k] = rest[k];
      for (int i = 0; i < nv; ++i) pt[i] = K.from_integer(Integer(static_cast<unsigned long>(v[i])));
      bool sing = K.is_zero(F.body().eval(pt));
      for (std::size_t i = 0; sing && i < J.size(); ++i) sing = K.is_zero(J[i].eval(pt));
      if (sing) return v;
      std::size_t k = 0;
      while (k < rest.size() && ++rest[k] == p) rest[k++] = 0;
      if (k == rest.size()) break;
    }
  }
  return std::nullopt;
}

// Integer points with coordinates in [-bound, bound], primitive and with
// first nonzero coordinate positive.
std::optional<std::vector<Elem>> singular_point_search_box(const HomForm& F, int bound) {
  const int nv = F.n() + 1;
  const Field& K = *F.field();
  std::vector<int> c(nv, -bound);
  auto J = jacobian(F);
  while (true) {
    int first = 0;
    while (first < nv && c[first] == 0) ++first;
    int g = 0;
    for (int x : c) g = std::gcd(g, std::abs(x));
    if (first < nv && c[first] > 0 && g == 1) {
      std::vector<Elem> pt;
      for (int x : c) pt.push_back(K.from_int(x));
      bool sing = K.is_zero(F.body().eval(pt));
      for (std::size_t i = 0; sing && i < J.size(); ++i) sing = K.is_zero(J[i].eval(pt));
      if (sing) return pt;
    }
    int k = 0;
    while (k < nv && ++c[k] > bound) c[k++] = -bound;
    if (k == nv) break;
  }
  return std::nullopt;
}

HomForm reduce_form(const HomForm& F, const FieldPtr& Fp, const std::function<std::optional<std::uint64_t>(const Elem&)>& red,
                    std::uint64_t p, json& reason) {
  MPoly g(Fp, F.n() + 1);
  for (const auto& [e, c] : F.body().terms()) {
    auto r = red(c);
    if (!r) {
      reason = json{{"bad", "coefficient not integral"}, {"monomial", e}};
      throw DomainError("coefficient is not integral at p = " + std::to_string(p), reason);
    }
    g.add_term(e, Fp->from_integer(Integer(static_cast<unsigned long>(*r))));
  }
  if (g.is_zero()) {
    reason = json{{"bad", "form vanishes mod p"}};
    throw DomainError("form vanishes mod p = " + std::to_string(p), reason);
  }
  return HomForm(F.n(), F.d(), std::move(g));
}

void check_good_prime(const HomForm& F, std::uint64_t p) {
  if (!is_prime(p)) throw DomainError("not a prime", json{{"p", p}});
  if (F.d() % static_cast<long long>(p) == 0) throw DomainError("p divides the degree", json{{"p", p}, {"d", F.d()}});
}

SmoothnessCertificate verdict_mod_p(const HomForm& reduced, std::uint64_t p) {
  SmoothnessCertificate cert;
  cert.method = "good-prime";
  cert.prime = p;
  groebner_verdict(reduced, cert);
  if (!cert.smooth) {
    cert.conclusive = false;
    cert.singular_point_mod_p = singular_point_search_mod_p(reduced, p);
    cert.note = "singular reduction";
  } else {
    cert.note = "p divides neither d nor any coefficient denominator; verdict is independent of scaling the form";
  }
  return cert;
}

}  // namespace

SmoothnessCertificate smooth_diagonal(const HomForm& F) {
  if (!F.is_diagonal()) throw DomainError("form is not diagonal");
  const Field& K = *F.field();
  const std::uint64_t ch = K.characteristic();
  if (ch && F.d() % static_cast<long long>(ch) == 0)
    throw DomainError("characteristic divides the degree", json{{"p", ch}, {"d", F.d()}});
  SmoothnessCertificate cert;
  cert.method = "diagonal";
  const int nv = F.n() + 1;
  cert.smooth = true;
  for (int i = 0; i < nv; ++i) {
    Exponent e(nv, 0);
    e[i] = F.d();
    if (K.is_zero(F.body().coeff(e))) {
      if (F.d() == 1) continue;
      cert.smooth = false;
      std::vector<Elem> pt(nv, K.zero());
      pt[i] = K.one();
      cert.singular_point = pt;
      break;
    }
    cert.pure_powers.push_back(e);
  }
  if (F.d() == 1) cert.smooth = true;
  return cert;
}

SmoothnessCertificate smooth_good_prime(const HomForm& F, std::uint64_t p) {
  if (!F.field()->is_rationals()) throw DomainError("good-prime reduction expects a form over Q", json{{"field", F.field()->describe()}});
  check_good_prime(F, p);
  json reason;
  FieldPtr Fp = Field::prime_field(p);
  HomForm g = reduce_form(
      F, Fp,
      [p](const Elem& c) -> std::optional<std::uint64_t> {
        if (c.q().get_den() % static_cast<unsigned long>(p) == 0) return std::nullopt;
        return reduce_mod_p(c.q(), p);
      },
      p, reason);
  return verdict_mod_p(g, p);
}

SmoothnessCertificate smooth_at_place(const HomForm& F, const DegreeOnePlace& place) {
  if (!same_field(F.field(), place.field)) throw DomainError("place belongs to a different field");
  check_good_prime(F, place.p);
  json reason;
  FieldPtr Fp = Field::prime_field(place.p);
  HomForm g = reduce_form(F, Fp, [&](const Elem& c) { return place.reduce(c); }, place.p, reason);
  SmoothnessCertificate cert = verdict_mod_p(g, place.p);
  cert.place = place;
  return cert;
}

std::vector<std::uint64_t> good_prime_list() {
  const char* env = std::getenv("TWISTFORGE_PRIME_LIST");
  if (!env || !*env) return {7, 11, 13, 17, 19};
  std::vector<std::uint64_t> out;
  std::stringstream ss(env);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    Integer z;
    try {
      z = parse_integer(item);
    } catch (const ParseError&) {
      throw ParseError("TWISTFORGE_PRIME_LIST entry '" + item + "' is not an integer");
    }
    if (z < 2 || !is_prime(z)) throw ParseError("TWISTFORGE_PRIME_LIST entry '" + item + "' is not prime");
    out.push_back(to_u64(z));
  }
  if (out.empty()) throw ParseError("TWISTFORGE_PRIME_LIST is empty");
  return out;
}

SmoothnessCertificate certify_smooth(const HomForm& F) {
  const FieldPtr& K = F.field();
  const std::uint64_t ch = K->characteristic();

  if (ch) {
    if (!K->is_prime()) throw DomainError("smoothness over finite extension fields is not supported");
    SmoothnessCertificate cert;
    cert.method = "good-prime";
    cert.prime = ch;
    groebner_verdict(F, cert);
    if (!cert.smooth) cert.singular_point_mod_p = singular_point_search_mod_p(F, ch);
    cert.note = "form defined over F_p";
    return cert;
  }

  if (F.is_diagonal()) return smooth_diagonal(F);

  json attempts = json::array();
  constexpr std::size_t kAttempts = 5;
  auto record = [&](const SmoothnessCertificate& c) {
    json a{{"prime", c.prime}, {"smooth", c.smooth}};
    if (c.singular_point_mod_p) a["singular_point_mod_p"] = *c.singular_point_mod_p;
    attempts.push_back(a);
  };

  if (K->is_rationals()) {
    for (std::uint64_t p : good_prime_list()) {
      if (attempts.size() >= kAttempts) break;
      SmoothnessCertificate c;
      try {
        c = smooth_good_prime(F, p);
      } catch (const DomainError& e) {
        attempts.push_back(json{{"prime", p}, {"skipped", e.what()}});
        continue;
      }
      record(c);
      if (c.smooth) {
        c.attempts = attempts;
        return c;
      }
    }
  } else {
    // Degree-one places: primes from the list first, then a scan upward.
    std::vector<DegreeOnePlace> places;
    for (std::uint64_t p : good_prime_list())
      if (auto pl = degree_one_place(K, p)) places.push_back(*pl);
    for (auto& pl : degree_one_places(K, kAttempts, 23))
      if (std::none_of(places.begin(), places.end(), [&](const DegreeOnePlace& q) { return q.p == pl.p; }))
        places.push_back(pl);
    std::size_t tried = 0;
    for (const auto& pl : places) {
      if (tried >= kAttempts) break;
      SmoothnessCertificate c;
      try {
        c = smooth_at_place(F, pl);
      } catch (const DomainError& e) {
        attempts.push_back(json{{"prime", pl.p}, {"skipped", e.what()}});
        continue;
      }
      ++tried;
      record(c);
      if (c.smooth) {
        c.attempts = attempts;
        return c;
      }
    }
  }

  if (auto pt = singular_point_search_box(F, 2)) {
    SmoothnessCertificate c;
    c.method = "singular-point";
    c.smooth = false;
    c.singular_point = *pt;
    c.attempts = attempts;
    c.note = "rational singular point verified exactly";
    return c;
  }

  SmoothnessCertificate c;
  c.attempts = attempts;
  if (K->is_rationals() && F.n() <= 3 && F.d() <= 8) {
    c.method = "groebner-char0";
    groebner_verdict(F, c);
    c.note = "Buchberger over Q";
    return c;
  }
  c.method = "good-prime";
  c.smooth = false;
  c.conclusive = false;
  c.note = "every reduction tried was singular";
  return c;
}

}  // namespace twistforge
