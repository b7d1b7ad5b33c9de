#include "vtcheck/linarith.hpp"

#include <algorithm>
#include <sstream>

namespace vtcheck {

std::string_view rel_symbol(Rel r) {
  switch (r) {
    case Rel::Le: return "<=";
    case Rel::Lt: return "<";
    case Rel::Eq: return "=";
    case Rel::Ne: return "!=";
  }
  return "?";
}

bool LinearAtom::ground_value() const {
  switch (rel) {
    case Rel::Le: return constant <= 0;
    case Rel::Lt: return constant < 0;
    case Rel::Eq: return constant == 0;
    case Rel::Ne: return constant != 0;
  }
  return false;
}

std::string to_string(const TermStore& store, const LinearAtom& a) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : a.coeffs) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str() << "*" << term_to_string(store, v);
  }
  if (!first) os << " + ";
  os << a.constant.get_str() << " " << rel_symbol(a.rel) << " 0";
  return os.str();
}

namespace {

struct Lin {
  std::map<TermId, Rational> c;
  Rational k;
  std::set<TermId> ints;
};

void linearize(TermStore& store, TermId t, const Rational& scale, Lin& out);

bool constant_value(TermStore& store, TermId t, Rational& value) {
  Lin tmp;
  linearize(store, t, 1, tmp);
  for (const auto& [v, c] : tmp.c)
    if (c != 0) return false;
  value = tmp.k;
  return true;
}

void opaque(TermStore& store, TermId t, const Rational& scale, Lin& out) {
  TermId v = store.canonical(t);
  out.c[v] += scale;
  if (store.sort_of(t) == store.int_sort()) out.ints.insert(v);
}

void linearize(TermStore& store, TermId t, const Rational& scale, Lin& out) {
  const TermNode n = store.node(t);
  if (n.kind == Kind::Const) {
    out.k += scale * n.value;
    return;
  }
  if (n.kind != Kind::App) return opaque(store, t, scale, out);
  switch (n.op) {
    case Op::Add:
      for (TermId c : n.children) linearize(store, c, scale, out);
      return;
    case Op::Sub:
      if (n.children.size() == 1) return linearize(store, n.children[0], -scale, out);
      linearize(store, n.children[0], scale, out);
      for (std::size_t i = 1; i < n.children.size(); ++i)
        linearize(store, n.children[i], -scale, out);
      return;
    case Op::Mul: {
      Rational factor = 1;
      std::optional<TermId> variable;
      for (TermId c : n.children) {
        Rational v;
        if (constant_value(store, c, v)) {
          factor *= v;
        } else if (variable) {
          throw NonlinearError("nonlinear product " + term_to_string(store, t));
        } else {
          variable = c;
        }
      }
      if (!variable) {
        out.k += scale * factor;
      } else if (factor != 0) {
        linearize(store, *variable, scale * factor, out);
      }
      return;
    }
    case Op::Div: {
      Rational divisor = 1;
      for (std::size_t i = 1; i < n.children.size(); ++i) {
        Rational v;
        if (!constant_value(store, n.children[i], v))
          throw NonlinearError("division by a non-constant in " + term_to_string(store, t));
        divisor *= v;
      }
      // Division by zero is an uninterpreted value.
      if (divisor == 0) return opaque(store, t, scale, out);
      return linearize(store, n.children[0], scale / divisor, out);
    }
    case Op::ToReal:
      return linearize(store, n.children[0], scale, out);
    default:
      return opaque(store, t, scale, out);
  }
}

LinearAtom make_atom(Lin lin, Rel rel) {
  LinearAtom a;
  for (auto& [v, c] : lin.c)
    if (c != 0) {
      a.coeffs.emplace(v, c);
      if (lin.ints.count(v)) a.int_vars.insert(v);
    }
  a.constant = lin.k;
  a.rel = rel;
  return a;
}

Lin negate(Lin l) {
  for (auto& [v, c] : l.c) c = -c;
  l.k = -l.k;
  return l;
}

// Sign of an (in)equation is arbitrary; fix it so the first coefficient is positive.
Lin oriented(Lin l) {
  for (const auto& [v, c] : l.c)
    if (c != 0) return c < 0 ? negate(std::move(l)) : l;
  return l.k < 0 ? negate(std::move(l)) : l;
}

Integer lcm_den(const LinearAtom& a) {
  Integer l = a.constant.get_den();
  for (const auto& [v, c] : a.coeffs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  return l;
}

Integer ceil_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Linear combination of atoms; returns nullopt on a sign violation.
std::optional<LinearAtom> combine(const std::vector<LinearAtom>& basis,
                                  const std::vector<Rational>& mult) {
  if (mult.size() > basis.size()) return std::nullopt;
  LinearAtom out;
  out.rel = Rel::Eq;
  std::set<TermId> ints;
  bool any = false;
  for (std::size_t i = 0; i < mult.size(); ++i) {
    const Rational& m = mult[i];
    if (m == 0) continue;
    const LinearAtom& b = basis[i];
    if (b.rel == Rel::Ne) return std::nullopt;
    if (b.rel != Rel::Eq) {
      if (m < 0) return std::nullopt;
      if (b.rel == Rel::Lt) out.rel = Rel::Lt;
      else if (out.rel == Rel::Eq) out.rel = Rel::Le;
    }
    any = true;
    for (const auto& [v, c] : b.coeffs) out.coeffs[v] += m * c;
    ints.insert(b.int_vars.begin(), b.int_vars.end());
    out.constant += m * b.constant;
  }
  if (!any) return std::nullopt;
  for (auto it = out.coeffs.begin(); it != out.coeffs.end();) {
    if (it->second == 0) {
      it = out.coeffs.erase(it);
    } else {
      if (ints.count(it->first)) out.int_vars.insert(it->first);
      ++it;
    }
  }
  return out;
}

struct Row {
  LinearAtom atom;
  std::map<std::size_t, Rational> mult;  // over inputs then cuts
};

void axpy(Row& into, const Row& from, const Rational& s) {
  for (const auto& [v, c] : from.atom.coeffs) into.atom.coeffs[v] += s * c;
  into.atom.int_vars.insert(from.atom.int_vars.begin(), from.atom.int_vars.end());
  into.atom.constant += s * from.atom.constant;
  for (const auto& [i, m] : from.mult) into.mult[i] += s * m;
}

void clean(Row& r) {
  for (auto it = r.atom.coeffs.begin(); it != r.atom.coeffs.end();) {
    if (it->second == 0) {
      r.atom.int_vars.erase(it->first);
      it = r.atom.coeffs.erase(it);
    } else {
      ++it;
    }
  }
  for (auto it = r.atom.int_vars.begin(); it != r.atom.int_vars.end();)
    it = r.atom.coeffs.count(*it) ? std::next(it) : r.atom.int_vars.erase(it);
  for (auto it = r.mult.begin(); it != r.mult.end();)
    it = it->second == 0 ? r.mult.erase(it) : std::next(it);
}

Row scaled(const Row& r, const Rational& s) {
  Row out;
  out.atom.rel = r.atom.rel;
  out.atom.int_vars = r.atom.int_vars;
  for (const auto& [v, c] : r.atom.coeffs) out.atom.coeffs[v] = s * c;
  out.atom.constant = s * r.atom.constant;
  for (const auto& [i, m] : r.mult) out.mult[i] = s * m;
  return out;
}

class Fm {
 public:
  Fm(std::size_t inputs, bool tighten, FmLimits limits)
      : inputs_(inputs), tighten_(tighten), limits_(limits) {}

  FmStatus run(const std::vector<LinearAtom>& system) {
    std::vector<Row> rows;
    for (std::size_t i = 0; i < system.size(); ++i) {
      Row r;
      r.atom = system[i];
      r.mult[i] = 1;
      if (!admit(std::move(r), rows)) return FmStatus::Unsat;
    }
    // Equalities: substitute one variable away.
    for (;;) {
      auto eq = std::find_if(rows.begin(), rows.end(),
                             [](const Row& r) { return r.atom.rel == Rel::Eq; });
      if (eq == rows.end()) break;
      Row e = *eq;
      rows.erase(eq);
      TermId x = e.atom.coeffs.begin()->first;
      Rational ce = e.atom.coeffs.at(x);
      std::vector<Row> next;
      for (Row& r : rows) {
        auto it = r.atom.coeffs.find(x);
        if (it == r.atom.coeffs.end()) {
          next.push_back(std::move(r));
          continue;
        }
        Row nr = r;
        axpy(nr, e, -it->second / ce);
        clean(nr);
        if (!admit(std::move(nr), next)) return FmStatus::Unsat;
      }
      rows = std::move(next);
    }
    while (!rows.empty()) {
      // Fewest lower/upper pairs first.
      std::map<TermId, std::pair<std::size_t, std::size_t>> counts;
      for (const Row& r : rows)
        for (const auto& [v, c] : r.atom.coeffs)
          (c > 0 ? counts[v].second : counts[v].first)++;
      TermId best;
      std::size_t best_cost = SIZE_MAX;
      for (const auto& [v, lu] : counts) {
        std::size_t cost = lu.first * lu.second;
        if (cost < best_cost) {
          best_cost = cost;
          best = v;
        }
      }
      std::vector<Row> lowers, uppers, next;
      for (Row& r : rows) {
        auto it = r.atom.coeffs.find(best);
        if (it == r.atom.coeffs.end())
          next.push_back(std::move(r));
        else if (it->second > 0)
          uppers.push_back(std::move(r));
        else
          lowers.push_back(std::move(r));
      }
      for (const Row& l : lowers)
        for (const Row& u : uppers) {
          Rational cl = -l.atom.coeffs.at(best);
          Rational cu = u.atom.coeffs.at(best);
          Row nr = scaled(l, cu);
          axpy(nr, u, cl);
          nr.atom.rel = (l.atom.rel == Rel::Lt || u.atom.rel == Rel::Lt) ? Rel::Lt : Rel::Le;
          clean(nr);
          if (!admit(std::move(nr), next)) return FmStatus::Unsat;
          if (next.size() > limits_.max_rows) return FmStatus::ResourceOut;
        }
      rows = dedupe(std::move(next));
    }
    return FmStatus::Sat;
  }

  FarkasCertificate certificate() const {
    FarkasCertificate cert;
    cert.cuts = cuts_;
    cert.multipliers.assign(inputs_ + cuts_.size(), 0);
    for (const auto& [i, m] : contradiction_->mult) cert.multipliers[i] = m;
    cert.derived = contradiction_->atom;
    return cert;
  }

 private:
  // Normalizes, tightens and ground-checks a derived row.  Returns false on
  // a contradiction.
  bool admit(Row r, std::vector<Row>& out) {
    clean(r);
    if (!r.atom.ground()) {
      Rational lead = abs(r.atom.coeffs.begin()->second);
      if (lead != 1) r = scaled(r, 1 / lead);
    }
    if (tighten_ && !r.atom.ground() && r.atom.all_int()) {
      LinearAtom t = integer_tighten(r.atom);
      if (!(t == r.atom)) {
        Cut cut;
        cut.multipliers.assign(inputs_ + cuts_.size(), 0);
        for (const auto& [i, m] : r.mult) cut.multipliers[i] = m;
        cuts_.push_back(std::move(cut));
        Row cr;
        cr.atom = t;
        cr.mult[inputs_ + cuts_.size() - 1] = 1;
        r = std::move(cr);
      }
    }
    if (r.atom.ground()) {
      if (r.atom.ground_value()) return true;
      contradiction_ = std::move(r);
      return false;
    }
    out.push_back(std::move(r));
    return true;
  }

  // Among rows with identical coefficients keep the strongest.
  static std::vector<Row> dedupe(std::vector<Row> rows) {
    std::map<std::map<TermId, Rational>, std::size_t> seen;
    std::vector<Row> out;
    for (Row& r : rows) {
      auto [it, inserted] = seen.emplace(r.atom.coeffs, out.size());
      if (inserted) {
        out.push_back(std::move(r));
        continue;
      }
      Row& kept = out[it->second];
      bool stronger = r.atom.constant > kept.atom.constant ||
                      (r.atom.constant == kept.atom.constant && r.atom.rel == Rel::Lt &&
                       kept.atom.rel == Rel::Le);
      if (stronger) kept = std::move(r);
    }
    return out;
  }

  std::size_t inputs_;
  bool tighten_;
  FmLimits limits_;
  std::vector<Cut> cuts_;
  std::optional<Row> contradiction_;
};

void split_disequalities(const std::vector<LinearAtom>& system, std::size_t at,
                         std::vector<LinearAtom>& current,
                         std::vector<std::vector<LinearAtom>>& out) {
  if (at == system.size()) {
    out.push_back(current);
    return;
  }
  const LinearAtom& a = system[at];
  if (a.rel != Rel::Ne) {
    current.push_back(a);
    split_disequalities(system, at + 1, current, out);
    current.pop_back();
    return;
  }
  LinearAtom below = a;
  below.rel = Rel::Lt;
  current.push_back(below);
  split_disequalities(system, at + 1, current, out);
  current.pop_back();
  LinearAtom above = a;
  above.rel = Rel::Lt;
  for (auto& [v, c] : above.coeffs) c = -c;
  above.constant = -above.constant;
  current.push_back(above);
  split_disequalities(system, at + 1, current, out);
  current.pop_back();
}

}  // namespace

std::optional<LinearAtom> atom_of_term(TermStore& store, TermId t) {
  auto [core, negations] = store.strip_negations(t);
  bool negated = negations % 2 == 1;
  const TermNode& n = store.node(core);
  if (n.kind != Kind::App || n.children.size() != 2) return std::nullopt;
  Op op = n.op;
  switch (op) {
    case Op::Lt: case Op::Le: case Op::Gt: case Op::Ge: break;
    case Op::Eq: case Op::Distinct:
      if (!store.is_numeric(store.sort_of(n.children[0]))) return std::nullopt;
      break;
    default:
      return std::nullopt;
  }
  TermId a = n.children[0];
  TermId b = n.children[1];
  Lin diff;  // a - b
  linearize(store, a, 1, diff);
  linearize(store, b, -1, diff);
  switch (op) {
    case Op::Lt: return negated ? make_atom(negate(diff), Rel::Le) : make_atom(diff, Rel::Lt);
    case Op::Le: return negated ? make_atom(negate(diff), Rel::Lt) : make_atom(diff, Rel::Le);
    case Op::Gt: return negated ? make_atom(diff, Rel::Le) : make_atom(negate(diff), Rel::Lt);
    case Op::Ge: return negated ? make_atom(diff, Rel::Lt) : make_atom(negate(diff), Rel::Le);
    case Op::Eq: return make_atom(oriented(diff), negated ? Rel::Ne : Rel::Eq);
    case Op::Distinct: return make_atom(oriented(diff), negated ? Rel::Eq : Rel::Ne);
    default: return std::nullopt;
  }
}

LinearAtom integer_tighten(const LinearAtom& a) {
  if (a.ground()) return a;
  LinearAtom out = a;
  Integer l = lcm_den(a);
  if (l != 1) {
    for (auto& [v, c] : out.coeffs) c *= l;
    out.constant *= l;
  }
  if (out.rel == Rel::Lt) {
    out.rel = Rel::Le;
    out.constant += 1;
  }
  Integer g = 0;
  for (const auto& [v, c] : out.coeffs) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
  Integer k = out.constant.get_num();
  bool divides = mpz_divisible_p(k.get_mpz_t(), g.get_mpz_t()) != 0;
  auto ground = [&](Rational constant) {
    LinearAtom z;
    z.rel = out.rel;
    z.constant = constant;
    return z;
  };
  switch (out.rel) {
    case Rel::Le:
      out.constant = Rational(ceil_div(k, g));
      break;
    case Rel::Eq:
      if (!divides) return ground(1);  // 1 = 0
      out.constant = Rational(k / g);
      break;
    case Rel::Ne:
      if (!divides) return ground(1);  // 1 != 0
      out.constant = Rational(k / g);
      break;
    case Rel::Lt:
      break;
  }
  for (auto& [v, c] : out.coeffs) c /= g;
  return out;
}

FmResult fm_decide(const std::vector<LinearAtom>& system, bool tighten, FmLimits limits) {
  std::size_t splits = std::count_if(system.begin(), system.end(),
                                     [](const LinearAtom& a) { return a.rel == Rel::Ne; });
  FmResult result;
  if (splits > limits.max_splits) {
    result.status = FmStatus::ResourceOut;
    return result;
  }
  std::vector<std::vector<LinearAtom>> cases;
  std::vector<LinearAtom> current;
  split_disequalities(system, 0, current, cases);
  result.status = FmStatus::Unsat;
  for (const auto& c : cases) {
    Fm fm(c.size(), tighten, limits);
    FmStatus s = fm.run(c);
    if (s != FmStatus::Unsat) {
      result.status = s;
      result.branches.clear();
      return result;
    }
    result.branches.push_back({c, fm.certificate()});
  }
  return result;
}

bool verify_certificate(const std::vector<LinearAtom>& system, const FarkasCertificate& cert) {
  std::vector<LinearAtom> basis;
  for (const auto& a : system) {
    if (a.rel == Rel::Ne) return false;
    basis.push_back(a);
  }
  for (const Cut& cut : cert.cuts) {
    auto row = combine(basis, cut.multipliers);
    if (!row || row->ground() || !row->all_int()) return false;
    basis.push_back(integer_tighten(*row));
  }
  auto derived = combine(basis, cert.multipliers);
  if (!derived || !derived->ground() || derived->ground_value()) return false;
  return derived->constant == cert.derived.constant && derived->rel == cert.derived.rel &&
         cert.derived.ground();
}

namespace {

LaOutcome valid() { return {LaOutcome::Kind::Valid, ""}; }
LaOutcome invalid(std::string why) { return {LaOutcome::Kind::Invalid, std::move(why)}; }
LaOutcome unchecked(std::string why) { return {LaOutcome::Kind::Unchecked, std::move(why)}; }

// Literal without double negations, as (core, negated).
std::pair<TermId, bool> polarity(TermStore& store, TermId lit) {
  auto [core, n] = store.strip_negations(lit);
  return {store.eq_nf(core), n % 2 == 1};
}

LaOutcome check_totality(TermStore& store, const Clause& clause) {
  if (clause.size() != 2) return invalid("la_totality expects two literals");
  auto [a, na] = polarity(store, clause[0]);
  auto [b, nb] = polarity(store, clause[1]);
  if (na || nb || !store.is_app(a, Op::Le) || !store.is_app(b, Op::Le))
    return invalid("la_totality expects (<= t1 t2) and (<= t2 t1)");
  const auto& ka = store.node(a).children;
  const auto& kb = store.node(b).children;
  if (ka.size() != 2 || kb.size() != 2 || ka[0] != kb[1] || ka[1] != kb[0])
    return invalid("la_totality literals do not mirror each other");
  return valid();
}

LaOutcome check_rw_eq(TermStore& store, const Clause& clause) {
  if (clause.size() != 1) return invalid("la_rw_eq expects one literal");
  auto [lit, neg] = polarity(store, clause[0]);
  const TermNode& n = store.node(lit);
  if (neg || !store.is_app(lit, Op::Eq) || n.children.size() != 2)
    return invalid("la_rw_eq expects an equivalence");
  TermId lhs = n.children[0];
  TermId rhs = n.children[1];
  // Either orientation of the outer equality.
  for (int pass = 0; pass < 2; ++pass, std::swap(lhs, rhs)) {
    if (!store.is_app(lhs, Op::Eq) || !store.is_app(rhs, Op::And)) continue;
    const auto& eq = store.node(lhs).children;
    const auto& conj = store.node(rhs).children;
    if (eq.size() != 2 || conj.size() != 2) continue;
    TermId le1 = store.eq_nf(store.app(Op::Le, {eq[0], eq[1]}));
    TermId le2 = store.eq_nf(store.app(Op::Le, {eq[1], eq[0]}));
    auto [c0, n0] = polarity(store, conj[0]);
    auto [c1, n1] = polarity(store, conj[1]);
    if (!n0 && !n1 && c0 == le1 && c1 == le2) return valid();
  }
  return invalid("la_rw_eq clause does not match (= (= t u) (and (<= t u) (<= u t)))");
}

}  // namespace

LaOutcome check_la_rule(TermStore& store, const std::string& rule, const Clause& clause) {
  if (rule == "la_totality") return check_totality(store, clause);
  if (rule == "la_rw_eq") return check_rw_eq(store, clause);
  std::vector<LinearAtom> system;
  bool all_int = true;
  for (TermId lit : clause) {
    std::optional<LinearAtom> atom;
    try {
      atom = atom_of_term(store, store.mk_not(lit));
    } catch (const NonlinearError& e) {
      return unchecked(e.bare_message());
    }
    if (!atom) return invalid("literal " + term_to_string(store, lit) + " is not a linear comparison");
    if (!atom->all_int()) all_int = false;
    system.push_back(std::move(*atom));
  }
  FmResult r = fm_decide(system, all_int);
  switch (r.status) {
    case FmStatus::ResourceOut:
      return unchecked("arithmetic search exceeded its resource limits");
    case FmStatus::Sat:
      return invalid(all_int ? "negated clause is satisfiable for Fourier-Motzkin with integer "
                               "tightening (the procedure is incomplete over Int)"
                             : "negated clause is satisfiable");
    case FmStatus::Unsat:
      for (const auto& b : r.branches)
        if (!verify_certificate(b.system, b.certificate))
          return invalid("refutation certificate failed to verify");
      return valid();
  }
  return invalid("unreachable");
}

}  // namespace vtcheck
