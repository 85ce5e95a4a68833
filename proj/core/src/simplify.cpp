#include "gtd/simplify.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "gtd/errors.hpp"

namespace gtd {

namespace {

// Thrown internally to abandon normalization (size explosion, exponent
// blowup, division by a symbolic zero). The caller falls back to local
// constant folding, which is always safe.
struct Bail {};

constexpr std::size_t kPolyTermCap = 20000;
constexpr std::int64_t kExponentCap = 512;

Expression cheap_fold(const Expression& e);

// ---------------------------------------------------------------------
// Sparse multivariate polynomials over atom ids.
//
// An atom is any subtree that rational-function arithmetic treats as
// opaque: a variable, a float literal, a ln(...) subtree, or a power with
// fractional exponent. Atom ids are assigned in structural order over the
// whole input so equivalent inputs normalize identically.

struct Monomial {
  std::vector<std::pair<int, int>> f;  // (atom id, exponent > 0), ids ascending

  int degree() const {
    int d = 0;
    for (const auto& p : f) d += p.second;
    return d;
  }
  bool empty() const { return f.empty(); }
};

// Graded lexicographic, larger monomials first, so map iteration starts at
// the leading term.
struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    int da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    for (std::size_t i = 0; i < a.f.size() && i < b.f.size(); ++i) {
      if (a.f[i].first != b.f[i].first) return a.f[i].first < b.f[i].first;
      if (a.f[i].second != b.f[i].second) return a.f[i].second > b.f[i].second;
    }
    return false;
  }
};

using Poly = std::map<Monomial, Rational, MonoLess>;

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.f.reserve(a.f.size() + b.f.size());
  std::size_t i = 0, j = 0;
  while (i < a.f.size() && j < b.f.size()) {
    if (a.f[i].first < b.f[j].first)
      out.f.push_back(a.f[i++]);
    else if (a.f[i].first > b.f[j].first)
      out.f.push_back(b.f[j++]);
    else {
      out.f.emplace_back(a.f[i].first, a.f[i].second + b.f[j].second);
      ++i, ++j;
    }
  }
  while (i < a.f.size()) out.f.push_back(a.f[i++]);
  while (j < b.f.size()) out.f.push_back(b.f[j++]);
  return out;
}

std::optional<Monomial> mono_div(const Monomial& a, const Monomial& b) {
  Monomial out;
  std::size_t i = 0;
  for (const auto& [id, e] : b.f) {
    while (i < a.f.size() && a.f[i].first < id) out.f.push_back(a.f[i++]);
    if (i >= a.f.size() || a.f[i].first != id || a.f[i].second < e)
      return std::nullopt;
    if (a.f[i].second > e) out.f.emplace_back(id, a.f[i].second - e);
    ++i;
  }
  while (i < a.f.size()) out.f.push_back(a.f[i++]);
  return out;
}

void poly_add_term(Poly& p, const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  auto it = p.find(m);
  if (it == p.end()) {
    p.emplace(m, c);
    if (p.size() > kPolyTermCap) throw Bail{};
    return;
  }
  it->second += c;
  if (it->second.is_zero()) p.erase(it);
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b) poly_add_term(out, m, c);
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) poly_add_term(out, mono_mul(ma, mb), ca * cb);
  return out;
}

Poly poly_powi(const Poly& a, int k) {
  Poly out;
  out.emplace(Monomial{}, Rational(1));
  for (int i = 0; i < k; ++i) out = poly_mul(out, a);
  return out;
}

// Exact division; nullopt when f does not divide p.
std::optional<Poly> poly_exact_div(const Poly& p, const Poly& f) {
  if (f.empty()) throw Bail{};
  Poly rem = p, q;
  const auto& [fm, fc] = *f.begin();
  std::size_t iters = 0;
  while (!rem.empty()) {
    if (++iters > kPolyTermCap) return std::nullopt;
    const auto& [lm, lc] = *rem.begin();
    auto qm = mono_div(lm, fm);
    if (!qm) return std::nullopt;
    Rational qc = lc / fc;
    poly_add_term(q, *qm, qc);
    for (const auto& [m, c] : f) poly_add_term(rem, mono_mul(*qm, m), -(qc * c));
  }
  return q;
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  __int128 l = static_cast<__int128>(a) / std::gcd(a, b) * b;
  if (l > INT64_MAX) throw std::overflow_error("content lcm overflow");
  return static_cast<std::int64_t>(l);
}

// Scales p to primitive integer coefficients with positive leading
// coefficient; returns the extracted rational factor.
Rational extract_content(Poly& p) {
  std::int64_t den_lcm = 1;
  for (const auto& [m, c] : p) den_lcm = checked_lcm(den_lcm, c.den());
  std::int64_t num_gcd = 0;
  for (const auto& [m, c] : p) {
    Rational ci = c * Rational(den_lcm);
    num_gcd = std::gcd(num_gcd, ci.num() < 0 ? -ci.num() : ci.num());
  }
  Rational content(num_gcd, den_lcm);
  if (p.begin()->second.is_negative()) content = -content;
  for (auto& [m, c] : p) c = c / content;
  return content;
}

struct PolyKeyLess {
  bool operator()(const Poly& a, const Poly& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    MonoLess ml;
    auto ia = a.begin(), ib = b.begin();
    for (; ia != a.end(); ++ia, ++ib) {
      if (ml(ia->first, ib->first)) return true;
      if (ml(ib->first, ia->first)) return false;
      auto c = ia->second <=> ib->second;
      if (c != 0) return c < 0;
    }
    return false;
  }
};

// ---------------------------------------------------------------------
// Rational functions in factored form: an overall rational coefficient, a
// signed monomial over atoms, and a list of primitive polynomial factors
// with signed integer exponents. Denominators stay factored through
// multiplication and division; addition expands over the common
// denominator and cancels by exact trial division.

struct RF {
  Rational coeff{1};
  std::map<int, int> atom_pows;
  std::map<Poly, int, PolyKeyLess> factors;

  bool is_zero() const { return coeff.is_zero(); }
};

RF rf_zero() {
  RF r;
  r.coeff = Rational(0);
  return r;
}

RF rf_const(const Rational& c) {
  if (c.is_zero()) return rf_zero();
  RF r;
  r.coeff = c;
  return r;
}

RF rf_atom(int id) {
  RF r;
  r.atom_pows[id] = 1;
  return r;
}

void merge_pow(std::map<int, int>& pows, int id, int e) {
  auto [it, inserted] = pows.emplace(id, e);
  if (!inserted) {
    it->second += e;
    if (it->second == 0) pows.erase(it);
  }
}

void merge_factor(std::map<Poly, int, PolyKeyLess>& factors, const Poly& f,
                  int e) {
  auto [it, inserted] = factors.emplace(f, e);
  if (!inserted) {
    it->second += e;
    if (it->second == 0) factors.erase(it);
  }
}

RF rf_mul(const RF& a, const RF& b) {
  if (a.is_zero() || b.is_zero()) return rf_zero();
  RF out = a;
  out.coeff *= b.coeff;
  for (const auto& [id, e] : b.atom_pows) merge_pow(out.atom_pows, id, e);
  for (const auto& [f, e] : b.factors) merge_factor(out.factors, f, e);
  return out;
}

RF rf_inv(const RF& a) {
  if (a.is_zero()) throw Bail{};
  RF out;
  out.coeff = Rational(1) / a.coeff;
  for (const auto& [id, e] : a.atom_pows) out.atom_pows[id] = -e;
  for (const auto& [f, e] : a.factors) out.factors[f] = -e;
  return out;
}

RF rf_powi(const RF& a, std::int64_t k) {
  if (k == 0) return rf_const(Rational(1));
  if (a.is_zero()) {
    if (k < 0) throw Bail{};
    return rf_zero();
  }
  if (k < 0) return rf_powi(rf_inv(a), -k);
  if (k > kExponentCap) throw Bail{};
  RF out;
  out.coeff = a.coeff.pow(k);
  for (const auto& [id, e] : a.atom_pows) {
    std::int64_t ne = static_cast<std::int64_t>(e) * k;
    if (ne > kExponentCap || ne < -kExponentCap) throw Bail{};
    out.atom_pows[id] = static_cast<int>(ne);
  }
  for (const auto& [f, e] : a.factors) {
    std::int64_t ne = static_cast<std::int64_t>(e) * k;
    if (ne > kExponentCap || ne < -kExponentCap) throw Bail{};
    out.factors[f] = static_cast<int>(ne);
  }
  return out;
}

RF rf_neg(const RF& a) {
  if (a.is_zero()) return a;
  RF out = a;
  out.coeff = -out.coeff;
  return out;
}

// Expands one side of an addition as a single polynomial against the
// common denominator (den_atoms, den_factors hold positive exponents).
Poly expand_against(const RF& x, const std::map<int, int>& den_atoms,
                    const std::map<Poly, int, PolyKeyLess>& den_factors) {
  Monomial m;
  for (const auto& [id, need] : den_atoms) {
    auto it = x.atom_pows.find(id);
    int have = it == x.atom_pows.end() ? 0 : it->second;
    int e = have + need;
    if (e > 0) m.f.emplace_back(id, e);
  }
  for (const auto& [id, e] : x.atom_pows) {
    if (den_atoms.count(id)) continue;
    if (e > 0) m.f.emplace_back(id, e);
    // e < 0 with no den entry cannot happen: the common denominator
    // covers every negative exponent of both sides
  }
  std::sort(m.f.begin(), m.f.end());
  Poly out;
  out.emplace(std::move(m), x.coeff);
  for (const auto& [f, need] : den_factors) {
    auto it = x.factors.find(f);
    int have = it == x.factors.end() ? 0 : it->second;
    int e = have + need;
    if (e > 0) out = poly_mul(out, poly_powi(f, e));
  }
  for (const auto& [f, e] : x.factors) {
    if (den_factors.count(f)) continue;
    if (e > 0) out = poly_mul(out, poly_powi(f, e));
  }
  return out;
}

RF rf_add(const RF& a, const RF& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;

  std::map<int, int> den_atoms;
  std::map<Poly, int, PolyKeyLess> den_factors;
  for (const RF* x : {&a, &b}) {
    for (const auto& [id, e] : x->atom_pows)
      if (e < 0) {
        int& cur = den_atoms[id];
        cur = std::max(cur, -e);
      }
    for (const auto& [f, e] : x->factors)
      if (e < 0) {
        int& cur = den_factors[f];
        cur = std::max(cur, -e);
      }
  }

  Poly num = poly_add(expand_against(a, den_atoms, den_factors),
                      expand_against(b, den_atoms, den_factors));
  if (num.empty()) return rf_zero();

  RF out;
  for (const auto& [id, e] : den_atoms) out.atom_pows[id] = -e;
  for (const auto& [f, e] : den_factors) out.factors[f] = -e;

  // Monomial content: atoms common to every term move out of the poly.
  std::map<int, int> common;
  bool first = true;
  for (const auto& [m, c] : num) {
    if (first) {
      for (const auto& [id, e] : m.f) common[id] = e;
      first = false;
      continue;
    }
    for (auto it = common.begin(); it != common.end();) {
      int have = 0;
      for (const auto& [id, e] : m.f)
        if (id == it->first) {
          have = e;
          break;
        }
      if (have == 0) {
        it = common.erase(it);
      } else {
        it->second = std::min(it->second, have);
        ++it;
      }
    }
    if (common.empty()) break;
  }
  if (!common.empty()) {
    Monomial g;
    for (const auto& [id, e] : common) g.f.emplace_back(id, e);
    Poly reduced;
    for (const auto& [m, c] : num) reduced.emplace(*mono_div(m, g), c);
    num = std::move(reduced);
    for (const auto& [id, e] : common) merge_pow(out.atom_pows, id, e);
  }

  out.coeff = extract_content(num);

  if (num.size() > 1) {
    // Cancel against denominator factors by exact division.
    for (auto it = out.factors.begin(); it != out.factors.end();) {
      bool advanced = false;
      while (it->second < 0 && num.size() > 1) {
        auto q = poly_exact_div(num, it->first);
        if (!q) break;
        num = std::move(*q);
        if (++it->second == 0) {
          it = out.factors.erase(it);
          advanced = true;
          break;
        }
      }
      if (!advanced) ++it;
    }
  }

  if (num.size() == 1) {
    // After content and monomial-gcd extraction a single term is exactly 1.
    const auto& [m, c] = *num.begin();
    for (const auto& [id, e] : m.f) merge_pow(out.atom_pows, id, e);
    out.coeff *= c;
  } else {
    merge_factor(out.factors, num, 1);
  }
  return out;
}

// ---------------------------------------------------------------------
// Conversion between expression trees and RF form.

struct ExprLess {
  bool operator()(const Expression& a, const Expression& b) const {
    return structural_compare(a, b) < 0;
  }
};

struct Context {
  SimplifyOptions opts;
  std::map<const ExprNode*, Expression> inner;  // subtree -> simplified
  std::map<Expression, int, ExprLess> atom_ids;
  std::vector<Expression> atoms;
};

Expression simplify_impl(const Expression& e, const SimplifyOptions& opts);

const Expression& simplify_inner(const Expression& e, Context& ctx) {
  auto it = ctx.inner.find(&e.node());
  if (it != ctx.inner.end()) return it->second;
  Expression s = simplify_impl(e, ctx.opts);
  return ctx.inner.emplace(&e.node(), std::move(s)).first->second;
}

// The opaque form of a Ln/fractional-Pow/leaf subtree, with its interior
// simplified. May fold to a rational constant (e.g. ln(1)); callers handle
// that case as a constant rather than an atom.
Expression atom_form(const Expression& e, Context& ctx) {
  switch (e.kind()) {
    case ExprKind::Ln:
      return Expression::ln(simplify_inner(Expression(e.node().lhs), ctx));
    case ExprKind::Pow:
      return Expression::pow(simplify_inner(Expression(e.node().lhs), ctx),
                             e.node().rat);
    default:
      return e;
  }
}

void collect_atoms(const Expression& e, Context& ctx,
                   std::set<Expression, ExprLess>& found) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case ExprKind::Rational:
      return;
    case ExprKind::Float:
    case ExprKind::Variable:
      found.insert(e);
      return;
    case ExprKind::Ln: {
      Expression a = atom_form(e, ctx);
      if (!a.is_rational_constant()) found.insert(a);
      return;
    }
    case ExprKind::Pow:
      if (n.rat.is_integer()) {
        collect_atoms(Expression(n.lhs), ctx, found);
      } else {
        Expression a = atom_form(e, ctx);
        if (!a.is_rational_constant()) found.insert(a);
      }
      return;
    case ExprKind::Neg:
      collect_atoms(Expression(n.lhs), ctx, found);
      return;
    default:
      collect_atoms(Expression(n.lhs), ctx, found);
      collect_atoms(Expression(n.rhs), ctx, found);
      return;
  }
}

RF to_rf(const Expression& e, Context& ctx) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case ExprKind::Rational:
      return rf_const(n.rat);
    case ExprKind::Float:
    case ExprKind::Variable:
      return rf_atom(ctx.atom_ids.at(e));
    case ExprKind::Ln: {
      Expression a = atom_form(e, ctx);
      if (a.is_rational_constant()) return rf_const(a.node().rat);
      return rf_atom(ctx.atom_ids.at(a));
    }
    case ExprKind::Pow: {
      if (n.rat.is_integer())
        return rf_powi(to_rf(Expression(n.lhs), ctx), n.rat.num());
      Expression a = atom_form(e, ctx);
      if (a.is_rational_constant()) return rf_const(a.node().rat);
      return rf_atom(ctx.atom_ids.at(a));
    }
    case ExprKind::Add:
      return rf_add(to_rf(Expression(n.lhs), ctx), to_rf(Expression(n.rhs), ctx));
    case ExprKind::Sub:
      return rf_add(to_rf(Expression(n.lhs), ctx),
                    rf_neg(to_rf(Expression(n.rhs), ctx)));
    case ExprKind::Mul:
      return rf_mul(to_rf(Expression(n.lhs), ctx), to_rf(Expression(n.rhs), ctx));
    case ExprKind::Div:
      return rf_mul(to_rf(Expression(n.lhs), ctx),
                    rf_inv(to_rf(Expression(n.rhs), ctx)));
    case ExprKind::Neg:
      return rf_neg(to_rf(Expression(n.lhs), ctx));
  }
  throw Bail{};
}

Expression term_to_expr(const Monomial& m, const Rational& c,
                        const Context& ctx) {
  Expression out = Expression::rational(c);
  for (const auto& [id, e] : m.f)
    out = out * Expression::pow(ctx.atoms[id], Rational(e));
  return out;
}

Expression poly_to_expr(const Poly& p, const Context& ctx) {
  Expression acc;
  bool first = true;
  for (const auto& [m, c] : p) {
    if (first) {
      acc = term_to_expr(m, c, ctx);
      first = false;
    } else if (c.is_negative()) {
      acc = acc - term_to_expr(m, -c, ctx);
    } else {
      acc = acc + term_to_expr(m, c, ctx);
    }
  }
  return acc;
}

std::pair<Expression, Expression> emit_fraction(const RF& rf,
                                                const Context& ctx) {
  if (rf.is_zero()) return {Expression::integer(0), Expression::integer(1)};
  Expression num = Expression::integer(rf.coeff.num());
  Expression den = Expression::integer(rf.coeff.den());
  for (const auto& [id, e] : rf.atom_pows) {
    if (e > 0)
      num = num * Expression::pow(ctx.atoms[id], Rational(e));
    else
      den = den * Expression::pow(ctx.atoms[id], Rational(-e));
  }
  for (const auto& [f, e] : rf.factors) {
    Expression fe = poly_to_expr(f, ctx);
    if (e > 0)
      num = num * Expression::pow(fe, Rational(e));
    else
      den = den * Expression::pow(fe, Rational(-e));
  }
  return {num, den};
}

// ---------------------------------------------------------------------
// Fallback: bottom-up local folding only. The Expression operators already
// fold identity elements and rational constants; on top of that, nested
// integer powers merge.

Expression cheap_fold(const Expression& e) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case ExprKind::Rational:
    case ExprKind::Float:
    case ExprKind::Variable:
      return e;
    case ExprKind::Add:
      return cheap_fold(Expression(n.lhs)) + cheap_fold(Expression(n.rhs));
    case ExprKind::Sub:
      return cheap_fold(Expression(n.lhs)) - cheap_fold(Expression(n.rhs));
    case ExprKind::Mul:
      return cheap_fold(Expression(n.lhs)) * cheap_fold(Expression(n.rhs));
    case ExprKind::Div:
      return cheap_fold(Expression(n.lhs)) / cheap_fold(Expression(n.rhs));
    case ExprKind::Neg:
      return -cheap_fold(Expression(n.lhs));
    case ExprKind::Ln:
      return Expression::ln(cheap_fold(Expression(n.lhs)));
    case ExprKind::Pow: {
      Expression base = cheap_fold(Expression(n.lhs));
      if (base.kind() == ExprKind::Pow && n.rat.is_integer()) {
        try {
          return Expression::pow(Expression(base.node().lhs),
                                 base.node().rat * n.rat);
        } catch (const std::overflow_error&) {
        }
      }
      return Expression::pow(base, n.rat);
    }
  }
  return e;
}

Expression simplify_impl(const Expression& e, const SimplifyOptions& opts) {
  if (e.node_count() > opts.node_budget) return cheap_fold(e);
  Context ctx{opts, {}, {}, {}};
  try {
    std::set<Expression, ExprLess> atoms;
    collect_atoms(e, ctx, atoms);
    for (const auto& a : atoms) {
      ctx.atom_ids.emplace(a, static_cast<int>(ctx.atoms.size()));
      ctx.atoms.push_back(a);
    }
    RF rf = to_rf(e, ctx);
    auto [num, den] = emit_fraction(rf, ctx);
    return num / den;
  } catch (const Bail&) {
    return cheap_fold(e);
  } catch (const std::overflow_error&) {
    return cheap_fold(e);
  } catch (const std::domain_error&) {
    return cheap_fold(e);
  }
}

}  // namespace

Expression simplify(const Expression& e, const SimplifyOptions& opts) {
  return simplify_impl(e, opts);
}

std::pair<Expression, Expression> as_fraction(const Expression& e,
                                              const SimplifyOptions& opts) {
  if (e.node_count() <= opts.node_budget) {
    Context ctx{opts, {}, {}, {}};
    try {
      std::set<Expression, ExprLess> atoms;
      collect_atoms(e, ctx, atoms);
      for (const auto& a : atoms) {
        ctx.atom_ids.emplace(a, static_cast<int>(ctx.atoms.size()));
        ctx.atoms.push_back(a);
      }
      RF rf = to_rf(e, ctx);
      return emit_fraction(rf, ctx);
    } catch (const Bail&) {
    } catch (const std::overflow_error&) {
    } catch (const std::domain_error&) {
    }
  }
  return {cheap_fold(e), Expression::integer(1)};
}

}  // namespace gtd
