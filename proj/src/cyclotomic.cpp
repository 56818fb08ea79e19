#include "twistforge/cyclotomic.hpp"

#include <map>
#include <mutex>

namespace twistforge {

Poly cyclotomic_polynomial(unsigned m) {
  if (m == 0) throw Error("cyclotomic order must be positive");
  static std::mutex mu;
  static std::map<unsigned, Poly> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
  }
  const Field& Q = *Field::rationals();
  PolyRing R(Q);
  Poly p(m + 1, Q.zero());
  p[0] = Q.from_int(-1);
  p[m] = Q.one();
  for (unsigned d = 1; d < m; ++d)
    if (m % d == 0) p = R.exact_quo(p, cyclotomic_polynomial(d));
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(m, p);
  return p;
}

FieldPtr cyclotomic_field(unsigned m) {
  if (m == 0) throw Error("cyclotomic order must be positive");
  if (m <= 2) return Field::rationals();
  return Field::extension(Field::rationals(), cyclotomic_polynomial(m), "cyclotomic(" + std::to_string(m) + ")",
                          "z" + std::to_string(m));
}

}  // namespace twistforge
