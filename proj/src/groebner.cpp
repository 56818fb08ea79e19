#include "twistforge/groebner.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "twistforge/nmod_poly.hpp"

namespace twistforge {

namespace {

struct Mono {
  std::array<std::uint16_t, kMaxGroebnerVars> e{};
  std::uint32_t deg = 0;

  bool divides(const Mono& o) const {
    for (int i = 0; i < kMaxGroebnerVars; ++i)
      if (e[i] > o.e[i]) return false;
    return true;
  }
  bool operator==(const Mono& o) const { return e == o.e; }
};

// grevlex: higher degree first; ties broken by the last variable, smaller
// exponent wins.
bool mono_greater(const Mono& a, const Mono& b) {
  if (a.deg != b.deg) return a.deg > b.deg;
  for (int i = kMaxGroebnerVars - 1; i >= 0; --i)
    if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
  return false;
}

struct MonoGreater {
  bool operator()(const Mono& a, const Mono& b) const { return mono_greater(a, b); }
};

Mono mono_mul(const Mono& a, const Mono& b) {
  Mono r;
  for (int i = 0; i < kMaxGroebnerVars; ++i) r.e[i] = static_cast<std::uint16_t>(a.e[i] + b.e[i]);
  r.deg = a.deg + b.deg;
  return r;
}

Mono mono_div(const Mono& a, const Mono& b) {
  Mono r;
  for (int i = 0; i < kMaxGroebnerVars; ++i) r.e[i] = static_cast<std::uint16_t>(a.e[i] - b.e[i]);
  r.deg = a.deg - b.deg;
  return r;
}

Mono mono_lcm(const Mono& a, const Mono& b) {
  Mono r;
  for (int i = 0; i < kMaxGroebnerVars; ++i) {
    r.e[i] = std::max(a.e[i], b.e[i]);
    r.deg += r.e[i];
  }
  return r;
}

bool coprime(const Mono& a, const Mono& b) {
  for (int i = 0; i < kMaxGroebnerVars; ++i)
    if (a.e[i] && b.e[i]) return false;
  return true;
}

struct FpOps {
  Zp F;
  using T = std::uint64_t;
  T zero() const { return 0; }
  T one() const { return 1; }
  bool is_zero(T a) const { return a == 0; }
  T add(T a, T b) const { return F.add(a, b); }
  T sub(T a, T b) const { return F.sub(a, b); }
  T mul(T a, T b) const { return F.mul(a, b); }
  T inv(T a) const { return F.inv(a); }
};

struct QOps {
  using T = Rational;
  T zero() const { return 0; }
  T one() const { return 1; }
  bool is_zero(const T& a) const { return a == 0; }
  T add(const T& a, const T& b) const { return a + b; }
  T sub(const T& a, const T& b) const { return a - b; }
  T mul(const T& a, const T& b) const { return a * b; }
  T inv(const T& a) const { return 1 / a; }
};

template <class Ops>
using Terms = std::vector<std::pair<Mono, typename Ops::T>>;  // descending

template <class Ops>
struct Engine {
  using OpsType = Ops;
  Ops ops;

  Terms<Ops> make_monic(Terms<Ops> f) const {
    if (f.empty()) return f;
    auto inv = ops.inv(f.front().second);
    for (auto& t : f) t.second = ops.mul(t.second, inv);
    return f;
  }

  // Full reduction of f by G.
  Terms<Ops> reduce(const Terms<Ops>& f, const std::vector<Terms<Ops>>& G) const {
    std::map<Mono, typename Ops::T, MonoGreater> work;
    for (const auto& t : f) work.emplace(t.first, t.second);
    Terms<Ops> rem;
    while (!work.empty()) {
      auto it = work.begin();
      const Mono m = it->first;
      const auto c = it->second;
      const Terms<Ops>* div = nullptr;
      for (const auto& g : G)
        if (g.front().first.divides(m)) {
          div = &g;
          break;
        }
      work.erase(it);
      if (!div) {
        rem.emplace_back(m, c);
        continue;
      }
      const Mono q = mono_div(m, div->front().first);
      const auto factor = ops.mul(c, ops.inv(div->front().second));
      for (std::size_t k = 1; k < div->size(); ++k) {
        const Mono mk = mono_mul(q, (*div)[k].first);
        auto v = ops.mul(factor, (*div)[k].second);
        auto [pos, inserted] = work.emplace(mk, ops.zero());
        pos->second = ops.sub(pos->second, v);
        if (ops.is_zero(pos->second)) work.erase(pos);
      }
    }
    return rem;
  }

  Terms<Ops> spoly(const Terms<Ops>& f, const Terms<Ops>& g) const {
    const Mono l = mono_lcm(f.front().first, g.front().first);
    const Mono qf = mono_div(l, f.front().first), qg = mono_div(l, g.front().first);
    std::map<Mono, typename Ops::T, MonoGreater> acc;
    const auto cf = ops.inv(f.front().second), cg = ops.inv(g.front().second);
    for (const auto& t : f) {
      auto [pos, ins] = acc.emplace(mono_mul(qf, t.first), ops.zero());
      pos->second = ops.add(pos->second, ops.mul(cf, t.second));
    }
    for (const auto& t : g) {
      auto [pos, ins] = acc.emplace(mono_mul(qg, t.first), ops.zero());
      pos->second = ops.sub(pos->second, ops.mul(cg, t.second));
    }
    Terms<Ops> out;
    for (auto& [m, c] : acc)
      if (!ops.is_zero(c)) out.emplace_back(m, c);
    return out;
  }

  std::vector<Terms<Ops>> buchberger(std::vector<Terms<Ops>> gens, GroebnerStats* stats) const {
    std::vector<Terms<Ops>> G;
    for (auto& g : gens) {
      Terms<Ops> r = reduce(g, G);
      if (!r.empty()) G.push_back(make_monic(std::move(r)));
    }
    // pairs keyed by lcm so the smallest is processed first
    auto cmp = [](const std::pair<Mono, std::pair<std::size_t, std::size_t>>& a,
                  const std::pair<Mono, std::pair<std::size_t, std::size_t>>& b) {
      if (!(a.first == b.first)) return mono_greater(b.first, a.first);
      return a.second < b.second;
    };
    std::set<std::pair<Mono, std::pair<std::size_t, std::size_t>>, decltype(cmp)> pairs(cmp);
    std::set<std::pair<std::size_t, std::size_t>> pending;
    auto add_pairs = [&](std::size_t j) {
      for (std::size_t i = 0; i < j; ++i) {
        pairs.insert({mono_lcm(G[i].front().first, G[j].front().first), {i, j}});
        pending.insert({i, j});
      }
    };
    for (std::size_t j = 1; j < G.size(); ++j) add_pairs(j);
    std::vector<bool> alive(G.size(), true);
    while (!pairs.empty()) {
      auto [lcm, ij] = *pairs.begin();
      pairs.erase(pairs.begin());
      pending.erase(ij);
      if (stats) ++stats->pairs_considered;
      auto [i, j] = ij;
      if (coprime(G[i].front().first, G[j].front().first)) continue;
      bool chain = false;
      for (std::size_t k = 0; k < G.size() && !chain; ++k) {
        if (k == i || k == j) continue;
        if (!G[k].front().first.divides(lcm)) continue;
        auto key = [](std::size_t a, std::size_t b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
        if (!pending.count(key(i, k)) && !pending.count(key(j, k))) chain = true;
      }
      if (chain) continue;
      if (stats) ++stats->pairs_reduced;
      Terms<Ops> h = reduce(spoly(G[i], G[j]), G);
      if (h.empty()) continue;
      G.push_back(make_monic(std::move(h)));
      alive.push_back(true);
      if (G.back().front().first.deg == 0) {
        return {G.back()};  // unit ideal
      }
      add_pairs(G.size() - 1);
      if (stats) stats->basis_peak = std::max(stats->basis_peak, G.size());
    }
    // minimalize then inter-reduce
    std::vector<Terms<Ops>> minimal;
    for (std::size_t i = 0; i < G.size(); ++i) {
      bool redundant = false;
      for (std::size_t k = 0; k < G.size() && !redundant; ++k) {
        if (k == i) continue;
        if (G[k].front().first.divides(G[i].front().first)) {
          // keep the earlier of two equal leading monomials
          if (!(G[k].front().first == G[i].front().first) || k < i) redundant = true;
        }
      }
      if (!redundant) minimal.push_back(G[i]);
    }
    std::vector<Terms<Ops>> reduced;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
      std::vector<Terms<Ops>> others;
      for (std::size_t k = 0; k < minimal.size(); ++k)
        if (k != i) others.push_back(minimal[k]);
      Terms<Ops> tail(minimal[i].begin() + 1, minimal[i].end());
      Terms<Ops> r = reduce(tail, others);
      Terms<Ops> full{minimal[i].front()};
      full.insert(full.end(), r.begin(), r.end());
      reduced.push_back(make_monic(std::move(full)));
    }
    std::sort(reduced.begin(), reduced.end(),
              [](const Terms<Ops>& a, const Terms<Ops>& b) { return mono_greater(a.front().first, b.front().first); });
    return reduced;
  }
};

Mono to_mono(const Exponent& e) {
  if (static_cast<int>(e.size()) > kMaxGroebnerVars) throw DomainError("too many variables for the Groebner engine");
  Mono m;
  for (std::size_t i = 0; i < e.size(); ++i) {
    m.e[i] = static_cast<std::uint16_t>(e[i]);
    m.deg += static_cast<std::uint32_t>(e[i]);
  }
  return m;
}

Exponent from_mono(const Mono& m, int nvars) {
  Exponent e(nvars);
  for (int i = 0; i < nvars; ++i) e[i] = m.e[i];
  return e;
}

template <class Ops, class Conv>
Terms<Ops> to_terms(const MPoly& f, Conv conv) {
  Terms<Ops> t;
  for (const auto& [e, c] : f.terms()) t.emplace_back(to_mono(e), conv(c));
  std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) { return mono_greater(a.first, b.first); });
  return t;
}

template <class Ops, class Back>
MPoly from_terms(const Terms<Ops>& t, const FieldPtr& field, int nvars, Back back) {
  MPoly f(field, nvars);
  for (const auto& [m, c] : t) f.add_term(from_mono(m, nvars), back(c));
  return f;
}

template <class Fn>
auto with_engine(const FieldPtr& F, Fn fn) {
  if (F->is_prime()) {
    Engine<FpOps> eng{FpOps{Zp(F->prime())}};
    auto conv = [](const Elem& c) { return static_cast<std::uint64_t>(c.q().get_num().get_ui()); };
    auto back = [&F](std::uint64_t c) { return F->from_integer(Integer(static_cast<unsigned long>(c))); };
    return fn(eng, conv, back);
  }
  if (F->is_rationals()) {
    Engine<QOps> eng{QOps{}};
    auto conv = [](const Elem& c) { return c.q(); };
    auto back = [](const Rational& c) { return Elem(c); };
    return fn(eng, conv, back);
  }
  throw DomainError("Groebner bases are computed over Q or F_p", json{{"field", F->describe()}});
}

}  // namespace

bool grevlex_greater(const Exponent& a, const Exponent& b) { return mono_greater(to_mono(a), to_mono(b)); }

Exponent grevlex_leading(const MPoly& f) {
  if (f.is_zero()) throw Error("leading monomial of zero");
  const Exponent* best = nullptr;
  for (const auto& [e, c] : f.terms())
    if (!best || grevlex_greater(e, *best)) best = &e;
  return *best;
}

std::vector<MPoly> groebner_basis(const std::vector<MPoly>& gens, GroebnerStats* stats) {
  if (gens.empty()) return {};
  const FieldPtr F = gens.front().field();
  const int nvars = gens.front().nvars();
  for (const auto& g : gens) {
    require_same_field(F, g.field(), "groebner_basis");
    if (g.nvars() != nvars) throw DomainError("generators have different variable counts");
  }
  return with_engine(F, [&](auto& eng, auto conv, auto back) {
    using Ops = typename std::decay_t<decltype(eng)>::OpsType;
    std::vector<Terms<Ops>> in;
    for (const auto& g : gens)
      if (!g.is_zero()) in.push_back(to_terms<Ops>(g, conv));
    std::vector<MPoly> out;
    for (const auto& t : eng.buchberger(std::move(in), stats)) out.push_back(from_terms<Ops>(t, F, nvars, back));
    return out;
  });
}

MPoly normal_form(const MPoly& f, const std::vector<MPoly>& divisors) {
  const FieldPtr F = f.field();
  return with_engine(F, [&](auto& eng, auto conv, auto back) {
    using Ops = typename std::decay_t<decltype(eng)>::OpsType;
    std::vector<Terms<Ops>> G;
    for (const auto& g : divisors)
      if (!g.is_zero()) G.push_back(to_terms<Ops>(g, conv));
    return from_terms<Ops>(eng.reduce(to_terms<Ops>(f, conv), G), F, f.nvars(), back);
  });
}

bool verify_groebner(const std::vector<MPoly>& basis) {
  if (basis.empty()) return true;
  const FieldPtr F = basis.front().field();
  return with_engine(F, [&](auto& eng, auto conv, auto) {
    using Ops = typename std::decay_t<decltype(eng)>::OpsType;
    std::vector<Terms<Ops>> G;
    for (const auto& g : basis) G.push_back(to_terms<Ops>(g, conv));
    for (std::size_t i = 0; i < G.size(); ++i)
      for (std::size_t j = i + 1; j < G.size(); ++j)
        if (!eng.reduce(eng.spoly(G[i], G[j]), G).empty()) return false;
    return true;
  });
}

}  // namespace twistforge
