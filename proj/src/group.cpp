#include "capkit/group.hpp"

#include "capkit/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace capkit {

// -------------------------------------------------------------- FiniteGroup

FiniteGroup::FiniteGroup() : FiniteGroup(1, {0}, {"1"}) {}

FiniteGroup::FiniteGroup(std::size_t order, std::vector<Element> table, std::vector<std::string> labels) {
  if (order == 0) throw InvalidInput("FiniteGroup: order must be positive");
  if (table.size() != order * order) throw InvalidInput("FiniteGroup: table size is not order^2");
  auto d = std::make_shared<Data>();
  d->order = order;
  d->table = std::move(table);
  const auto at = [&](std::size_t a, std::size_t b) { return d->table[a * order + b]; };

  for (std::size_t i = 0; i < order; ++i)
    if (at(0, i) != i || at(i, 0) != i) throw InvalidInput("FiniteGroup: element 0 is not the identity");

  std::vector<char> seen(order);
  for (std::size_t i = 0; i < order; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t j = 0; j < order; ++j) {
      const Element v = at(i, j);
      if (v >= order || seen[v]) throw InvalidInput("FiniteGroup: table row is not a permutation");
      seen[v] = 1;
    }
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t j = 0; j < order; ++j) {
      const Element v = at(j, i);
      if (seen[v]) throw InvalidInput("FiniteGroup: table column is not a permutation");
      seen[v] = 1;
    }
  }

  if (order <= 64) {
    for (std::size_t a = 0; a < order; ++a)
      for (std::size_t b = 0; b < order; ++b) {
        const Element ab = at(a, b);
        for (std::size_t c = 0; c < order; ++c)
          if (at(ab, c) != at(a, at(b, c))) throw InvalidInput("FiniteGroup: table is not associative");
      }
  } else {
    std::mt19937_64 rng(0x5eed + order);
    std::uniform_int_distribution<std::size_t> pick(0, order - 1);
    for (std::size_t s = 0; s < 10 * order * order; ++s) {
      const std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
      if (at(at(a, b), c) != at(a, at(b, c))) throw InvalidInput("FiniteGroup: table is not associative");
    }
  }

  d->inverse.assign(order, 0);
  for (std::size_t a = 0; a < order; ++a)
    for (std::size_t b = 0; b < order; ++b)
      if (at(a, b) == 0) {
        if (at(b, a) != 0) throw InvalidInput("FiniteGroup: one-sided inverse");
        d->inverse[a] = static_cast<Element>(b);
        break;
      }

  for (std::size_t a = 0; a < order && d->abelian; ++a)
    for (std::size_t b = a + 1; b < order; ++b)
      if (at(a, b) != at(b, a)) {
        d->abelian = false;
        break;
      }

  if (labels.empty()) {
    labels.reserve(order);
    for (std::size_t i = 0; i < order; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != order) throw InvalidInput("FiniteGroup: label count does not match order");
  d->labels = std::move(labels);
  data_ = std::move(d);
}

Element FiniteGroup::power(Element a, long long e) const {
  if (e < 0) {
    a = inv(a);
    e = -e;
  }
  Element r = identity();
  Element base = a;
  while (e > 0) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

std::size_t FiniteGroup::element_order(Element a) const {
  std::size_t k = 1;
  for (Element x = a; x != identity(); x = mul(x, a)) ++k;
  return k;
}

// ----------------------------------------------------------------- Subgroup

Subgroup::Subgroup(FiniteGroup parent, std::vector<Element> members)
    : parent_(std::move(parent)), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (members_.empty() || members_.front() != FiniteGroup::identity())
    throw InvalidInput("Subgroup: identity missing");
  if (members_.back() >= parent_.order()) throw InvalidInput("Subgroup: element index out of range");
  for (Element a : members_) {
    if (!contains(parent_.inv(a))) throw InvalidInput("Subgroup: not closed under inverses");
    for (Element b : members_)
      if (!contains(parent_.mul(a, b))) throw InvalidInput("Subgroup: not closed under products");
  }
}

Subgroup Subgroup::whole(const FiniteGroup& g) {
  std::vector<Element> all(g.order());
  std::iota(all.begin(), all.end(), Element{0});
  return Subgroup(g, std::move(all));
}

bool Subgroup::contains(Element e) const { return std::binary_search(members_.begin(), members_.end(), e); }

bool Subgroup::is_normal() const {
  for (Element g = 0; g < parent_.order(); ++g)
    for (Element n : members_)
      if (!contains(parent_.mul(parent_.mul(parent_.inv(g), n), g))) return false;
  return true;
}

bool Subgroup::is_central() const {
  for (Element n : members_)
    for (Element g = 0; g < parent_.order(); ++g)
      if (parent_.mul(n, g) != parent_.mul(g, n)) return false;
  return true;
}

bool Subgroup::is_subset_of(const Subgroup& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
}

// ----------------------------------------------------------------- GroupHom

GroupHom::GroupHom(FiniteGroup source, FiniteGroup target, std::vector<Element> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != source_.order()) throw InvalidInput("GroupHom: one image per source element required");
  for (Element v : images_)
    if (v >= target_.order()) throw InvalidInput("GroupHom: image index out of range");
  if (images_[0] != FiniteGroup::identity()) throw InvalidInput("GroupHom: identity must map to identity");
  for (Element a = 0; a < source_.order(); ++a)
    for (Element b = 0; b < source_.order(); ++b)
      if (images_[source_.mul(a, b)] != target_.mul(images_[a], images_[b]))
        throw InvalidInput("GroupHom: map is not a homomorphism");
}

GroupHom GroupHom::identity(const FiniteGroup& g) {
  std::vector<Element> img(g.order());
  std::iota(img.begin(), img.end(), Element{0});
  return GroupHom(g, g, std::move(img));
}

GroupHom GroupHom::trivial(const FiniteGroup& source, const FiniteGroup& target) {
  return GroupHom(source, target, std::vector<Element>(source.order(), 0));
}

Subgroup GroupHom::kernel() const {
  std::vector<Element> k;
  for (Element a = 0; a < source_.order(); ++a)
    if (images_[a] == FiniteGroup::identity()) k.push_back(a);
  return Subgroup(source_, std::move(k));
}

bool GroupHom::is_surjective() const {
  std::vector<char> hit(target_.order());
  for (Element v : images_) hit[v] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

GroupHom compose(const GroupHom& h, const GroupHom& f) {
  if (!(f.target() == h.source())) throw InvalidInput("compose: intermediate groups do not match");
  std::vector<Element> img(f.source().order());
  for (Element a = 0; a < img.size(); ++a) img[a] = h(f(a));
  return GroupHom(f.source(), h.target(), std::move(img));
}

// ------------------------------------------------------------ constructions

DirectProduct direct_product(const FiniteGroup& g, const FiniteGroup& h, std::size_t max_order) {
  const std::size_t ng = g.order(), nh = h.order();
  const std::size_t n = ng * nh;
  if (n > max_order)
    throw CapExceeded("direct product of order " + std::to_string(n) + " exceeds the table cap " +
                      std::to_string(max_order));
  std::vector<Element> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      table[a * n + b] = static_cast<Element>(g.mul(static_cast<Element>(a / nh), static_cast<Element>(b / nh)) * nh +
                                              h.mul(static_cast<Element>(a % nh), static_cast<Element>(b % nh)));
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t a = 0; a < n; ++a)
    labels.push_back("(" + g.label(static_cast<Element>(a / nh)) + "," + h.label(static_cast<Element>(a % nh)) + ")");
  FiniteGroup p(n, std::move(table), std::move(labels));
  std::vector<Element> i1(ng), i2(nh);
  for (std::size_t a = 0; a < ng; ++a) i1[a] = static_cast<Element>(a * nh);
  for (std::size_t b = 0; b < nh; ++b) i2[b] = static_cast<Element>(b);
  return {p, GroupHom(g, p, std::move(i1)), GroupHom(h, p, std::move(i2))};
}

FiniteGroup cyclic_group(std::size_t n) {
  if (n == 0) throw InvalidInput("cyclic_group: order must be positive");
  std::vector<Element> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a * n + b] = static_cast<Element>((a + b) % n);
  return FiniteGroup(n, std::move(table));
}

FiniteGroup abelian_group(std::span<const std::size_t> moduli, std::size_t max_order) {
  std::size_t n = 1;
  for (std::size_t m : moduli) {
    if (m == 0) throw InvalidInput("abelian_group: moduli must be positive");
    n *= m;
    if (n > max_order)
      throw CapExceeded("abelian group exceeds the table cap " + std::to_string(max_order));
  }
  const std::size_t k = moduli.size();
  std::vector<std::vector<std::size_t>> digits(n, std::vector<std::size_t>(k));
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t rest = a;
    for (std::size_t i = k; i-- > 0;) {
      digits[a][i] = rest % moduli[i];
      rest /= moduli[i];
    }
  }
  std::vector<Element> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::size_t idx = 0;
      for (std::size_t i = 0; i < k; ++i) idx = idx * moduli[i] + (digits[a][i] + digits[b][i]) % moduli[i];
      table[a * n + b] = static_cast<Element>(idx);
    }
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < n; ++a) {
    std::string s = "(";
    for (std::size_t i = 0; i < k; ++i) s += (i ? "," : "") + std::to_string(digits[a][i]);
    labels.push_back(s + ")");
  }
  return FiniteGroup(n, std::move(table), std::move(labels));
}

FiniteGroup dihedral_group(std::size_t n) {
  if (n == 0) throw InvalidInput("dihedral_group: n must be positive");
  const std::size_t order = 2 * n;
  std::vector<Element> table(order * order);
  for (std::size_t x = 0; x < order; ++x)
    for (std::size_t y = 0; y < order; ++y) {
      // r^a s^b * r^c s^d = r^(a + (-1)^b c) s^(b + d)
      const std::size_t a = x % n, b = x / n, c = y % n, d = y / n;
      const std::size_t rot = b == 0 ? (a + c) % n : (a + n - c) % n;
      table[x * order + y] = static_cast<Element>(((b + d) % 2) * n + rot);
    }
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < order; ++x) {
    const std::size_t a = x % n;
    std::string s = a == 0 ? "" : (a == 1 ? "r" : "r^" + std::to_string(a));
    if (x >= n) s += "s";
    labels.push_back(s.empty() ? "1" : s);
  }
  return FiniteGroup(order, std::move(table), std::move(labels));
}

FiniteGroup quaternion_group() {
  // unit u in {1, i, j, k} with sign; index = 2 * u + (negative ? 1 : 0)
  static const int unit_product[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int sign_product[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  std::vector<Element> table(64);
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      const int ux = x / 2, uy = y / 2;
      int sign = (x % 2 ? -1 : 1) * (y % 2 ? -1 : 1) * sign_product[ux][uy];
      table[x * 8 + y] = static_cast<Element>(2 * unit_product[ux][uy] + (sign < 0 ? 1 : 0));
    }
  return FiniteGroup(8, std::move(table), {"1", "-1", "i", "-i", "j", "-j", "k", "-k"});
}

namespace {

std::string cycle_label(const std::vector<std::size_t>& p) {
  std::string out;
  std::vector<char> done(p.size());
  for (std::size_t start = 0; start < p.size(); ++start) {
    if (done[start] || p[start] == start) continue;
    out += "(";
    std::size_t x = start;
    bool first = true;
    while (!done[x]) {
      done[x] = 1;
      out += (first ? "" : " ") + std::to_string(x + 1);
      first = false;
      x = p[x];
    }
    out += ")";
  }
  return out.empty() ? "()" : out;
}

}  // namespace

FiniteGroup permutation_group(const std::vector<std::vector<std::size_t>>& generators, std::size_t max_order) {
  std::size_t degree = 0;
  for (const auto& g : generators) degree = std::max(degree, g.size());
  auto normalize = [degree](std::vector<std::size_t> p) {
    for (std::size_t i = p.size(); i < degree; ++i) p.push_back(i);
    return p;
  };
  std::vector<std::vector<std::size_t>> gens;
  for (const auto& g : generators) {
    auto p = normalize(g);
    std::vector<char> hit(degree);
    for (std::size_t v : p) {
      if (v >= degree || hit[v]) throw InvalidInput("permutation_group: generator is not a permutation");
      hit[v] = 1;
    }
    gens.push_back(std::move(p));
  }

  std::vector<std::size_t> id(degree);
  std::iota(id.begin(), id.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> elems{id};
  std::map<std::vector<std::size_t>, Element> index{{id, 0}};
  auto compose_perm = [degree](const std::vector<std::size_t>& p, const std::vector<std::size_t>& q) {
    std::vector<std::size_t> r(degree);
    for (std::size_t x = 0; x < degree; ++x) r[x] = q[p[x]];
    return r;
  };
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (const auto& g : gens) {
      auto next = compose_perm(elems[i], g);
      if (index.count(next)) continue;
      if (elems.size() >= max_order)
        throw CapExceeded("permutation closure exceeds the table cap " + std::to_string(max_order));
      index.emplace(next, static_cast<Element>(elems.size()));
      elems.push_back(std::move(next));
    }

  const std::size_t n = elems.size();
  std::vector<Element> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a * n + b] = index.at(compose_perm(elems[a], elems[b]));
  std::vector<std::string> labels;
  for (const auto& p : elems) labels.push_back(cycle_label(p));
  return FiniteGroup(n, std::move(table), std::move(labels));
}

// ---------------------------------------------------------------- subgroups

Subgroup center(const FiniteGroup& g) {
  std::vector<Element> z;
  for (Element a = 0; a < g.order(); ++a) {
    bool central = true;
    for (Element b = 0; b < g.order() && central; ++b) central = g.mul(a, b) == g.mul(b, a);
    if (central) z.push_back(a);
  }
  return Subgroup(g, std::move(z));
}

Subgroup subgroup_closure(const FiniteGroup& g, std::span<const Element> gens) {
  std::vector<char> in(g.order());
  std::vector<Element> members{FiniteGroup::identity()};
  in[0] = 1;
  std::vector<Element> todo;
  for (Element x : gens) {
    if (x >= g.order()) throw InvalidInput("subgroup_closure: element index out of range");
    todo.push_back(x);
  }
  // Right-multiplying by generators from the identity reaches every element
  // of the (finite) generated subgroup.
  for (std::size_t i = 0; i < members.size(); ++i)
    for (Element s : todo) {
      const Element y = g.mul(members[i], s);
      if (!in[y]) {
        in[y] = 1;
        members.push_back(y);
      }
    }
  return Subgroup(g, std::move(members));
}

Subgroup commutator_subgroup(const FiniteGroup& g, const Subgroup& a, const Subgroup& b) {
  std::vector<char> seen(g.order());
  std::vector<Element> comms;
  for (Element x : a.members())
    for (Element y : b.members()) {
      const Element c = g.commutator(x, y);
      if (!seen[c]) {
        seen[c] = 1;
        comms.push_back(c);
      }
    }
  return subgroup_closure(g, comms);
}

Subgroup derived_subgroup(const FiniteGroup& g) {
  const Subgroup all = Subgroup::whole(g);
  return commutator_subgroup(g, all, all);
}

std::vector<Subgroup> lower_central_series(const FiniteGroup& g) {
  std::vector<Subgroup> series{Subgroup::whole(g)};
  for (;;) {
    Subgroup next = commutator_subgroup(g, series.back(), series.front());
    const bool stable = next == series.back();
    if (stable) break;
    series.push_back(std::move(next));
  }
  return series;
}

std::optional<std::size_t> nilpotency_class(const FiniteGroup& g) {
  const auto series = lower_central_series(g);
  if (!series.back().is_trivial()) return std::nullopt;
  return series.size() - 1;
}

std::vector<Subgroup> upper_central_series(const FiniteGroup& g) {
  std::vector<Subgroup> series{Subgroup::trivial(g)};
  for (;;) {
    const Subgroup& prev = series.back();
    std::vector<Element> next;
    for (Element x = 0; x < g.order(); ++x) {
      bool ok = true;
      for (Element y = 0; y < g.order() && ok; ++y) ok = prev.contains(g.commutator(x, y));
      if (ok) next.push_back(x);
    }
    Subgroup s(g, std::move(next));
    if (s == prev) break;
    series.push_back(std::move(s));
  }
  return series;
}

std::size_t exponent(const FiniteGroup& g) {
  std::size_t e = 1;
  for (Element a = 0; a < g.order(); ++a) e = std::lcm(e, g.element_order(a));
  return e;
}

Quotient quotient(const FiniteGroup& g, const Subgroup& n) {
  if (!n.is_normal()) throw InvalidInput("quotient: subgroup is not normal");
  const std::size_t order = g.order();
  std::vector<Element> coset(order, static_cast<Element>(-1));
  std::vector<Element> reps;
  for (Element x = 0; x < order; ++x) {
    if (coset[x] != static_cast<Element>(-1)) continue;
    const auto id = static_cast<Element>(reps.size());
    reps.push_back(x);
    for (Element m : n.members()) coset[g.mul(x, m)] = id;
  }
  const std::size_t q = reps.size();
  std::vector<Element> table(q * q);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b) table[a * q + b] = coset[g.mul(reps[a], reps[b])];
  std::vector<std::string> labels;
  for (Element r : reps) labels.push_back("[" + g.label(r) + "]");
  FiniteGroup qg(q, std::move(table), std::move(labels));
  return {qg, GroupHom(g, qg, std::move(coset))};
}

AbelianSubgroupPresentation abelian_presentation(const Subgroup& s) {
  const FiniteGroup& g = s.parent();
  const auto members = s.members();
  const std::size_t k = members.size() - 1;
  // ambient basis: non-identity members; e_identity = 0
  auto basis_index = [&](Element x) -> std::optional<std::size_t> {
    if (x == FiniteGroup::identity()) return std::nullopt;
    auto it = std::lower_bound(members.begin(), members.end(), x);
    return static_cast<std::size_t>(it - members.begin()) - 1;
  };

  std::vector<Element> gens;
  {
    Subgroup current = Subgroup::trivial(g);
    for (Element x : members)
      if (!current.contains(x)) {
        gens.push_back(x);
        current = subgroup_closure(g, gens);
      }
  }

  std::vector<IntVector> rels;
  for (Element a : members)
    for (Element x : gens) {
      if (g.mul(a, x) != g.mul(x, a)) throw InvalidInput("abelian_presentation: subgroup is not abelian");
      IntVector v(k);
      if (auto i = basis_index(a)) v[*i] += 1;
      if (auto i = basis_index(x)) v[*i] += 1;
      if (auto i = basis_index(g.mul(a, x))) v[*i] -= 1;
      rels.push_back(std::move(v));
    }
  FPAbelianGroup raw(k, IntMatrix::from_columns(k, rels));
  SimplifiedPresentation simple = simplify(raw);
  const auto& moduli = simple.compact.torsion();

  AbelianSubgroupPresentation out{simple.compact, {}};
  for (Element x : members) {
    IntVector e(k);
    if (auto i = basis_index(x)) e[*i] = 1;
    IntVector c = simple.to_compact.apply(e);
    for (std::size_t i = 0; i < c.size() && i < moduli.size(); ++i) mpz_fdiv_r(c[i].get_mpz_t(), c[i].get_mpz_t(), moduli[i].get_mpz_t());
    out.coords.push_back(std::move(c));
  }
  return out;
}

Abelianization abelianization(const FiniteGroup& g) {
  Quotient q = quotient(g, derived_subgroup(g));
  AbelianSubgroupPresentation p = abelian_presentation(Subgroup::whole(q.group));
  Abelianization out{p.group, {}};
  out.coords.reserve(g.order());
  for (Element a = 0; a < g.order(); ++a) out.coords.push_back(p.coords[q.projection(a)]);
  return out;
}

bool is_perfect(const FiniteGroup& g) { return derived_subgroup(g).is_whole(); }

}  // namespace capkit
