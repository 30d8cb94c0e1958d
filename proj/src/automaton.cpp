#include "consys/automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace consys {

namespace {

// Largest (k - 1) k^(n - 1) accepted for the kernel elimination.
constexpr double kMaxKernelDegree = 512;

// Digits of n, least significant first; empty for 0.
std::vector<std::size_t> digits(unsigned long long n, long base) {
  std::vector<std::size_t> d;
  for (; n > 0; n /= static_cast<unsigned long long>(base))
    d.push_back(static_cast<std::size_t>(n % static_cast<unsigned long long>(base)));
  return d;
}

int run_padded(const DFAO &a, unsigned long long n, std::size_t zeros) {
  auto d = digits(n, a.base);
  d.insert(d.end(), zeros, 0);
  if (!a.lsd_first)
    std::reverse(d.begin(), d.end());
  std::size_t s = a.initial;
  for (auto digit : d)
    s = a.delta[s][digit];
  return a.output[s];
}

// States reachable from the initial one, renumbered in BFS order.
DFAO reachable(const DFAO &a) {
  std::vector<std::size_t> index(a.states(), a.states());
  std::vector<std::size_t> order{a.initial};
  index[a.initial] = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t d = 0; d < static_cast<std::size_t>(a.base); ++d) {
      std::size_t t = a.delta[order[i]][d];
      if (index[t] == a.states()) {
        index[t] = order.size();
        order.push_back(t);
      }
    }
  std::vector<std::vector<std::size_t>> delta;
  std::vector<int> output;
  for (auto s : order) {
    std::vector<std::size_t> row;
    for (auto t : a.delta[s])
      row.push_back(index[t]);
    delta.push_back(row);
    output.push_back(a.output[s]);
  }
  return make_dfao(a.base, delta, output, 0, a.lsd_first);
}

// Merges states with equal output behaviour (Moore partition refinement),
// then renumbers the reachable part.
DFAO minimal(const DFAO &a) {
  const std::size_t n = a.states();
  std::vector<std::size_t> cls(n);
  for (std::size_t s = 0; s < n; ++s)
    cls[s] = static_cast<std::size_t>(a.output[s]);
  for (std::size_t count = 0;;) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::size_t> key{cls[s]};
      for (auto t : a.delta[s])
        key.push_back(cls[t]);
      next[s] = ids.emplace(key, ids.size()).first->second;
    }
    cls = next;
    if (ids.size() == count)
      break;
    count = ids.size();
  }
  std::size_t m = *std::max_element(cls.begin(), cls.end()) + 1;
  std::vector<std::vector<std::size_t>> delta(m);
  std::vector<int> output(m);
  for (std::size_t s = 0; s < n; ++s) {
    output[cls[s]] = a.output[s];
    delta[cls[s]].clear();
    for (auto t : a.delta[s])
      delta[cls[s]].push_back(cls[t]);
  }
  return reachable(make_dfao(a.base, delta, output, cls[a.initial], a.lsd_first));
}

// Right division in the Mahler operator ring: L = Q D + R with ord R < ord D.
std::pair<std::vector<RatFunc>, std::vector<RatFunc>> right_divide(const ScalarOperator &L, const ScalarOperator &D) {
  std::vector<RatFunc> rem = L.coeffs, quo(static_cast<std::size_t>(std::max(0L, L.order() - D.order() + 1)));
  const long d = D.order();
  for (long top = L.order(); top >= d; --top) {
    const RatFunc lead = rem[static_cast<std::size_t>(top)];
    if (lead.is_zero())
      continue;
    long s = top - d;
    RatFunc q = lead / sigma_power_of(D.leading(), D.cs, 1, s);
    quo[static_cast<std::size_t>(s)] = q;
    for (long i = 0; i <= d; ++i)
      rem[static_cast<std::size_t>(s + i)] -= q * sigma_power_of(D.coeffs[static_cast<std::size_t>(i)], D.cs, 1, s);
  }
  rem.resize(static_cast<std::size_t>(d));
  return {quo, rem};
}

// Largest valuation a nonzero Laurent series solution of sum_i q_i sigma^i can have.
std::optional<long> solution_valuation_bound(const std::vector<RatFunc> &q, long k) {
  std::optional<long> best;
  std::vector<long> pw{1};
  for (std::size_t i = 1; i < q.size(); ++i)
    pw.push_back(pw.back() * k);
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t l = i + 1; l < q.size(); ++l) {
      if (q[i].is_zero() || q[l].is_zero())
        continue;
      // v(q_i) + k^i v = v(q_l) + k^l v
      long num = q[i].valuation() - q[l].valuation(), den = pw[l] - pw[i];
      long v = num >= 0 ? num / den : -((-num + den - 1) / den);
      best = best ? std::max(*best, v) : v;
    }
  return best;
}

bool residual_vanishes(const ScalarOperator &op, const Series &f, long through) {
  Series r = apply_operator(op, f);
  return r.prec() > through && (r.is_zero() || r.valuation() > through);
}

// Lower-order annihilator guessed from the series and proved by right
// division of the exact one plus a valuation argument on the quotient.
std::optional<ScalarOperator> reduce_order(const ScalarOperator &L, const Series &f, long k, long terms) {
  const auto &c = L.cs;
  Poly common(1);
  for (const auto &co : L.coeffs) {
    Poly q, r;
    co.den().monic().divmod(gcd(common, co.den().monic()), q, r);
    common = common * q;
  }
  long B = 0;
  for (const auto &co : L.coeffs)
    B = std::max(B, (co * RatFunc(common)).num().degree());
  for (long j = 1; j < L.order(); ++j) {
    const std::size_t cols = static_cast<std::size_t>((j + 1) * (B + 1));
    if (cols >= static_cast<std::size_t>(terms))
      break;
    ScalarMatrix M(static_cast<std::size_t>(terms), cols);
    long kp = 1;
    for (long i = 0; i <= j; ++i, kp *= k)
      for (long b = 0; b <= B; ++b)
        for (long e = b; e < terms; ++e)
          if ((e - b) % kp == 0)
            M(static_cast<std::size_t>(e), static_cast<std::size_t>(i * (B + 1) + b)) = f.coeff((e - b) / kp);
    auto ns = nullspace(M);
    if (ns.empty())
      continue;
    std::vector<RatFunc> co;
    for (long i = 0; i <= j; ++i) {
      std::vector<Scalar> p;
      for (long b = 0; b <= B; ++b)
        p.push_back(ns[0](static_cast<std::size_t>(i * (B + 1) + b), 0));
      co.push_back(RatFunc(Poly(p)));
    }
    if (co.back().is_zero())
      continue;
    ScalarOperator cand = make_monic(make_operator(c, OpKind::Sigma1, co));
    auto [quo, rem] = right_divide(L, cand);
    if (std::any_of(rem.begin(), rem.end(), [](const RatFunc &r) { return !r.is_zero(); }))
      continue;
    auto bound = solution_valuation_bound(quo, k);
    if (!bound || residual_vanishes(cand, f, *bound))
      return cand;
  }
  return std::nullopt;
}

// Determinant of a polynomial matrix by fraction-free elimination.
Poly determinant(std::vector<std::vector<Poly>> m) {
  const std::size_t n = m.size();
  Poly prev(1), sign(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m[piv][k].is_zero())
      ++piv;
    if (piv == n)
      return Poly();
    if (piv != k) {
      std::swap(m[piv], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Poly q, r;
        (m[i][j] * m[k][k] - m[i][k] * m[k][j]).divmod(prev, q, r);
        m[i][j] = q;
      }
      m[i][k] = Poly();
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

// Coefficients c with sum_l c_l cols[l] = target, when target lies in the
// span of the (independent) columns; Cramer's rule on a nonsingular minor.
std::optional<std::vector<RatFunc>> express(const std::vector<std::vector<Poly>> &cols, const std::vector<Poly> &target) {
  const std::size_t n = target.size(), m = cols.size();
  std::vector<std::size_t> rows(m);
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(m), true);
  auto minor = [&](std::size_t replace, const std::vector<std::size_t> &r) {
    std::vector<std::vector<Poly>> sq(m, std::vector<Poly>(m));
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        sq[a][b] = b == replace ? target[r[a]] : cols[b][r[a]];
    return determinant(sq);
  };
  do {
    rows.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (pick[i])
        rows.push_back(i);
    Poly det = minor(m, rows);
    if (det.is_zero())
      continue;
    std::vector<Poly> num;
    for (std::size_t l = 0; l < m; ++l)
      num.push_back(minor(l, rows));
    for (std::size_t t = 0; t < n; ++t) {
      Poly lhs;
      for (std::size_t l = 0; l < m; ++l)
        lhs += num[l] * cols[l][t];
      if (lhs != det * target[t])
        return std::nullopt;
    }
    std::vector<RatFunc> c;
    for (const auto &p : num)
      c.push_back(RatFunc(p, det));
    return c;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  fail(ErrorKind::Internal, "kernel vectors are unexpectedly dependent");
}

} // namespace

int DFAO::run(unsigned long long n) const { return run_padded(*this, n, 0); }

DFAO make_dfao(long base, std::vector<std::vector<std::size_t>> delta, std::vector<int> output, std::size_t initial,
               bool lsd_first) {
  if (base < 2)
    fail(ErrorKind::InvalidInput, "automaton base must be at least 2");
  if (output.empty() || delta.size() != output.size())
    fail(ErrorKind::InvalidInput, "automaton needs one transition row and one output per state");
  if (initial >= output.size())
    fail(ErrorKind::InvalidInput, "initial state out of range");
  for (std::size_t s = 0; s < delta.size(); ++s) {
    if (delta[s].size() != static_cast<std::size_t>(base))
      fail(ErrorKind::InvalidInput, "state " + std::to_string(s) + " needs one transition per digit");
    for (auto t : delta[s])
      if (t >= output.size())
        fail(ErrorKind::InvalidInput, "transition target out of range in state " + std::to_string(s));
    if (output[s] != 0 && output[s] != 1)
      fail(ErrorKind::InvalidInput, "outputs must be 0 or 1");
  }
  return DFAO{base, std::move(delta), std::move(output), initial, lsd_first};
}

DFAO dfao_from_json(const json &j) {
  if (!j.is_object())
    fail(ErrorKind::InvalidInput, "automaton must be a JSON object");
  try {
    std::string order = j.value("digit_order", std::string("lsd"));
    if (order != "lsd" && order != "msd")
      fail(ErrorKind::InvalidInput, "digit_order must be \"lsd\" or \"msd\"");
    auto delta = j.at("transitions").get<std::vector<std::vector<std::size_t>>>();
    auto output = j.at("outputs").get<std::vector<int>>();
    return make_dfao(j.at("base").get<long>(), delta, output, j.value("initial", std::size_t{0}), order == "lsd");
  } catch (const json::exception &e) {
    fail(ErrorKind::InvalidInput, std::string("malformed automaton: ") + e.what());
  }
}

json to_json(const DFAO &a) {
  return {{"base", a.base},
          {"transitions", a.delta},
          {"outputs", a.output},
          {"initial", a.initial},
          {"digit_order", a.lsd_first ? "lsd" : "msd"}};
}

DFAO to_lsd(const DFAO &a) {
  if (a.lsd_first)
    return a;
  // State after reading u: the set of original states s whose run on the
  // reversed word ends in an accepting state.
  using Set = std::vector<bool>;
  Set start(a.states());
  for (std::size_t s = 0; s < a.states(); ++s)
    start[s] = a.output[s] == 1;
  std::map<Set, std::size_t> index{{start, 0}};
  std::vector<Set> sets{start};
  std::vector<std::vector<std::size_t>> delta;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::vector<std::size_t> row;
    for (std::size_t d = 0; d < static_cast<std::size_t>(a.base); ++d) {
      Set next(a.states());
      for (std::size_t s = 0; s < a.states(); ++s)
        next[s] = sets[i][a.delta[s][d]];
      auto [it, inserted] = index.emplace(next, sets.size());
      if (inserted)
        sets.push_back(next);
      row.push_back(it->second);
    }
    delta.push_back(row);
  }
  std::vector<int> output;
  for (const auto &s : sets)
    output.push_back(s[a.initial] ? 1 : 0);
  return make_dfao(a.base, delta, output, 0, true);
}

std::vector<unsigned long long> leading_zero_violations(const DFAO &a, unsigned long long limit) {
  std::vector<unsigned long long> out;
  for (unsigned long long n = 0; n < limit; ++n)
    for (std::size_t z = 1; z <= a.states(); ++z)
      if (run_padded(a, n, z) != run_padded(a, n, 0)) {
        out.push_back(n);
        break;
      }
  return out;
}

Series brute_force_series(const DFAO &a, long count) {
  std::vector<Scalar> c;
  for (long n = 0; n < count; ++n)
    c.push_back(Scalar(a.run(static_cast<unsigned long long>(n))));
  return Series(1, 0, c, count);
}

MahlerRelation automaton_to_mahler(const DFAO &input, long residual_terms) {
  MahlerRelation out;
  if (!input.lsd_first)
    out.warnings.push_back("most-significant-digit-first automaton converted by reversal");
  auto bad = leading_zero_violations(input);
  if (!bad.empty())
    fail(ErrorKind::InvalidInput, "output depends on leading zeros (first at n = " + std::to_string(bad[0]) + ")");
  const DFAO a = minimal(to_lsd(input));
  out.lsd = a;
  const std::size_t n = a.states();
  const long k = a.base;
  const auto c = OperatorCase::M(k);

  // F_s(x) = sum_j x^j F_{delta(s, j)}(x^k).
  out.P = RatMatrix(n, n);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j)
      out.P(s, a.delta[s][j]) += RatFunc::x().pow(static_cast<long>(j));
  out.invertible = rank(out.P) == n;
  if (out.invertible)
    out.system = inverse(out.P);
  else
    out.warnings.push_back("kernel relation is singular: no first-order system");

  out.degenerate = std::none_of(a.output.begin(), a.output.end(), [](int o) { return o == 1; });
  if (out.degenerate) {
    out.warnings.push_back("generating series is zero");
    return out;
  }

  // sigma^i F_0 = r_i sigma^n F with r_i = e_0^T sigma^i(P) ... sigma^(n-1)(P).
  double growth = static_cast<double>(k - 1);
  for (std::size_t i = 1; i < n; ++i)
    growth *= static_cast<double>(k);
  if (growth > kMaxKernelDegree)
    fail(ErrorKind::ResourceCap, "kernel too large for elimination (degree " + std::to_string(static_cast<long long>(growth)) + ")");
  std::vector<std::vector<Poly>> rows(n + 1, std::vector<Poly>(n));
  RatMatrix suffix = RatMatrix::identity(n);
  rows[n][0] = Poly(1);
  for (std::size_t i = n; i-- > 0;) {
    suffix = sigma_power_of(out.P, c, 1, static_cast<long>(i)) * suffix;
    for (std::size_t t = 0; t < n; ++t)
      rows[i][t] = suffix(0, t).num();
  }
  std::optional<ScalarOperator> L;
  for (std::size_t i = 1; i <= n && !L; ++i) {
    std::vector<std::vector<Poly>> basis(rows.begin(), rows.begin() + static_cast<long>(i));
    if (auto sol = express(basis, rows[i])) {
      std::vector<RatFunc> co;
      for (const auto &e : *sol)
        co.push_back(-e);
      co.push_back(RatFunc(1));
      L = make_operator(c, OpKind::Sigma1, co);
    }
  }
  if (!L)
    fail(ErrorKind::Internal, "elimination found no relation among n + 1 vectors of length n");
  out.elimination_order = L->order();

  const Series f = brute_force_series(a, std::max(residual_terms, 2L) * 2);
  if (auto lower = reduce_order(*L, f, k, residual_terms))
    L = lower;
  out.annihilator = normalized(*L);

  out.residual_terms = residual_terms;
  if (!apply_operator(*out.annihilator, brute_force_series(a, residual_terms)).is_zero())
    fail(ErrorKind::Internal, "derived annihilator leaves a residual on the brute-force series");
  return out;
}

} // namespace consys
