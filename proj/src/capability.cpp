#include "capkit/capability.hpp"

#include "capkit/error.hpp"

#include <algorithm>
#include <chrono>
#include <iterator>
#include <numeric>

namespace capkit {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::vector<std::size_t> greedy_generators(const Subject& s, std::span<const std::size_t> members) {
  std::vector<std::size_t> gens;
  std::vector<std::size_t> current{0};
  for (std::size_t x : members) {
    if (std::binary_search(current.begin(), current.end(), x)) continue;
    gens.push_back(x);
    current = s.closure(gens);
  }
  return gens;
}

std::vector<std::size_t> intersect(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::size_t> product_set(std::span<const std::size_t> a, std::span<const std::size_t> b, std::size_t order_b) {
  std::vector<std::size_t> out;
  out.reserve(a.size() * b.size());
  for (std::size_t x : a)
    for (std::size_t y : b) out.push_back(x * order_b + y);
  return out;  // sorted because a and b are
}

// Invariant factors of an abelian subgroup given by its members.
std::vector<std::size_t> subgroup_invariants(const Subject& s, std::span<const std::size_t> members) {
  if (s.has_abelian_view()) {
    std::vector<std::size_t> gens;
    for (std::size_t g : greedy_generators(s, members)) gens.push_back(s.to_abelian(g));
    return s.abelian().subgroup_invariants(gens);
  }
  const FiniteGroup& t = s.require_table();
  const auto p = abelian_presentation(Subgroup(t, std::vector<Element>(members.begin(), members.end())));
  std::vector<std::size_t> out;
  for (const Int& x : p.group.torsion()) out.push_back(x.get_ui());
  return out;
}

std::vector<std::string> format_elements(const Subject& s, std::span<const std::size_t> elements) {
  std::vector<std::string> out;
  for (std::size_t x : elements) out.push_back(s.format_element(x));
  return out;
}

Epicenter run_abelian(const Subject& s, const EngineOptions& options) {
  const AbelianSubgroup z = abelian_epicenter(s.abelian(), options.abelian_cap);
  Epicenter e;
  for (std::size_t x : z.members) e.members.push_back(s.from_abelian(x));
  std::sort(e.members.begin(), e.members.end());
  for (std::size_t g : z.generators) e.generators.push_back(s.from_abelian(g));
  e.invariant_factors = z.invariant_factors;
  e.engine = "abelian";
  return e;
}

Epicenter run_bar(const Subject& s, const EngineOptions& options) {
  const FiniteGroup& t = s.require_table();
  if (t.order() > options.homology_cap)
    throw CapExceeded("group " + s.spec() + " of order " + std::to_string(t.order()) +
                      " exceeds the homology cap " + std::to_string(options.homology_cap) +
                      (s.is_abelian() ? " (use the abelian engine)" : " (use --force to raise it)"));
  const Subgroup z = homology_epicenter(t, {BarBasis::Normalized, options.homology_cap});
  Epicenter e;
  e.members.assign(z.members().begin(), z.members().end());
  e.generators = greedy_generators(s, e.members);
  e.invariant_factors = subgroup_invariants(s, e.members);
  e.engine = "homology";
  return e;
}

bool homology_reach(const Subject& s, const EngineOptions& options) {
  return s.table() && s.order() <= options.homology_cap;
}

}  // namespace

std::string to_string(Engine e) {
  switch (e) {
    case Engine::Auto: return "auto";
    case Engine::Bar: return "bar";
    case Engine::Abelian: break;
  }
  return "abelian";
}

Engine parse_engine(std::string_view text) {
  if (text == "auto") return Engine::Auto;
  if (text == "bar") return Engine::Bar;
  if (text == "abelian") return Engine::Abelian;
  throw ParseError("unknown engine '" + std::string(text) + "'", 0, "expected auto, bar or abelian");
}

bool Epicenter::contains(std::size_t x) const { return std::binary_search(members.begin(), members.end(), x); }

// ------------------------------------------------------------------ epicenter

Subgroup homology_epicenter(const FiniteGroup& g, const HomologyOptions& options) {
  const Subgroup z = center(g);
  const MultiplierPresentation m = schur_multiplier(g, options);
  if (m.h2().is_trivial()) return z;

  enum : char { Unknown, In, Out };
  std::vector<char> state(g.order(), Unknown);
  state[FiniteGroup::identity()] = In;
  for (Element x : z.members()) {
    if (state[x] != Unknown) continue;
    const Element gen[] = {x};
    const bool inside = is_multiplier_mono(m, subgroup_closure(g, gen), options);
    const std::size_t ord = g.element_order(x);
    for (std::size_t j = 1; j < ord; ++j) {
      const Element h = g.power(x, static_cast<long long>(j));
      if (inside)
        state[h] = In;
      else if (std::gcd(j, ord) == 1)
        state[h] = Out;
    }
    state[x] = inside ? In : Out;
  }
  std::vector<Element> members;
  for (Element x : z.members())
    if (state[x] == In) members.push_back(x);
  if (subgroup_closure(g, members).order() != members.size())
    throw std::logic_error("epicenter: element set is not a subgroup");
  return Subgroup(g, std::move(members));
}

Epicenter epicenter(const Subject& s, const EngineOptions& options) {
  switch (options.engine) {
    case Engine::Bar: return run_bar(s, options);
    case Engine::Abelian:
      if (!s.has_abelian_view()) throw CapExceeded("the abelian engine needs an abelian group; " + s.spec() + " is not");
      return run_abelian(s, options);
    case Engine::Auto: break;
  }
  if (s.has_abelian_view()) {
    Epicenter e = run_abelian(s, options);
    if (options.cross_check && homology_reach(s, options)) {
      const Epicenter b = run_bar(s, options);
      if (b.members != e.members)
        throw EngineMismatch("epicenter of " + s.spec() + ": abelian engine found " +
                             std::to_string(e.members.size()) + " elements, homology engine " +
                             std::to_string(b.members.size()));
      e.cross_checked = true;
    }
    return e;
  }
  if (homology_reach(s, options)) return run_bar(s, options);
  throw CapExceeded("no engine applies to " + s.spec() + " of order " + std::to_string(s.order()) +
                    ": it is non-abelian and above the homology cap " + std::to_string(options.homology_cap));
}

Subgroup epicenter(const FiniteGroup& g, const EngineOptions& options) {
  const Subject s = Subject::from_group(g, "G");
  const Epicenter e = epicenter(s, options);
  return Subgroup(g, std::vector<Element>(e.members.begin(), e.members.end()));
}

// ----------------------------------------------------------------- reports

CapabilityReport is_capable(const Subject& s, const EngineOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const Epicenter e = epicenter(s, options);
  CapabilityReport r;
  r.subject = s.spec();
  r.order = s.order();
  r.engine = e.engine;
  r.invariant_factors = e.invariant_factors;
  r.generators = format_elements(s, e.generators);
  r.epicenter_computed = true;
  if (e.is_trivial())
    r.verdict = {CapabilityVerdict::Status::Capable, "Z*(G) = 1 by the multiplier monomorphism test"};
  else
    r.verdict = {CapabilityVerdict::Status::NotCapable, "Z*(G) != 1 by the multiplier monomorphism test"};
  if (e.cross_checked) r.notes.push_back("abelian and homology engines agree");
  r.ms = elapsed_ms(start);
  return r;
}

CapabilityReport is_capable(const FiniteGroup& g, const EngineOptions& options) {
  return is_capable(Subject::from_group(g, "G"), options);
}

CapabilityReport varietal_capability(const Subject& s, const VarietyDescriptor& v, const EngineOptions& options) {
  if (v.is_abelian_variety()) {
    CapabilityReport r = is_capable(s, options);
    r.variety = v;
    return r;
  }
  const auto start = std::chrono::steady_clock::now();
  CapabilityReport r;
  r.subject = s.spec();
  r.order = s.order();
  r.engine = "classifier";
  r.variety = v;
  if (s.is_abelian()) {
    const AbelianGroupIF a(s.abelian().invariant_factors());
    r.verdict = polynilpotent_capable(a, v);
    r.notes.push_back("invariant factors " + a.to_string());
  } else {
    r.verdict = {CapabilityVerdict::Status::Undetermined,
                 "no implemented criterion for a non-abelian group under " + v.to_string()};
  }
  r.ms = elapsed_ms(start);
  return r;
}

CapabilityReport varietal_capability(const FiniteGroup& g, const VarietyDescriptor& v, const EngineOptions& options) {
  return varietal_capability(Subject::from_group(g, "G"), v, options);
}

// --------------------------------------------------------------------- pairs

PairOfGroups::PairOfGroups(Subject group, std::vector<std::size_t> members, std::string subgroup_spec)
    : group_(std::move(group)), members_(std::move(members)), spec_(std::move(subgroup_spec)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (std::size_t x : members_)
    if (x >= group_.order()) throw InvalidInput("pair: subgroup element out of range");
  if (members_.empty() || group_.closure(members_) != members_)
    throw InvalidInput("pair: N is not a subgroup of " + group_.spec());
  if (!group_.is_normal(members_)) throw InvalidInput("pair: N is not normal in " + group_.spec());
  if (spec_.empty()) spec_ = "order " + std::to_string(members_.size());
}

PairOfGroups::PairOfGroups(const FiniteGroup& g, const Subgroup& n)
    : PairOfGroups(Subject::from_group(g, "G"), {n.members().begin(), n.members().end()}) {}

std::vector<std::size_t> exterior_g_center(const PairOfGroups& p, const Epicenter& z) {
  return intersect(z.members, p.members());
}

std::vector<std::size_t> exterior_g_center(const PairOfGroups& p, const EngineOptions& options) {
  return exterior_g_center(p, epicenter(p.group(), options));
}

CapabilityReport is_capable_pair(const PairOfGroups& p, const EngineOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const Subject& s = p.group();
  const Epicenter z = epicenter(s, options);
  const auto ext = exterior_g_center(p, z);
  CapabilityReport r;
  r.subject = s.spec();
  r.subgroup = p.subgroup_spec();
  r.order = s.order();
  r.engine = z.engine;
  r.invariant_factors = subgroup_invariants(s, ext);
  r.generators = format_elements(s, greedy_generators(s, ext));
  r.epicenter_computed = true;
  if (ext.size() == 1)
    r.verdict = {CapabilityVerdict::Status::Capable, "exterior G-center Z*(G) ∩ N = 1"};
  else
    r.verdict = {CapabilityVerdict::Status::NotCapable, "exterior G-center Z*(G) ∩ N != 1"};
  r.notes.push_back("exterior G-center derived as Z*(G) ∩ N");
  if (!s.is_abelian()) r.notes.push_back("non-abelian G: the identity Z^(N) = Z*(G) ∩ N is assumed, not verified");
  if (z.cross_checked) r.notes.push_back("abelian and homology engines agree");
  r.ms = elapsed_ms(start);
  return r;
}

// ------------------------------------------------------------------ products

ProductCheck product_epicenter_check(const Subject& a, const Subject& b, const EngineOptions& options,
                                     std::size_t max_order) {
  const Subject ab = Subject::product(a, b, max_order);
  ProductCheck c;
  c.left = epicenter(a, options);
  c.right = epicenter(b, options);
  c.product = epicenter(ab, options);
  const auto rhs = product_set(c.left.members, c.right.members, b.order());
  c.inclusion_holds = std::includes(rhs.begin(), rhs.end(), c.product.members.begin(), c.product.members.end());
  c.equality_holds = c.inclusion_holds && rhs.size() == c.product.members.size();
  const Subject both[] = {a, b};
  c.coprime = coprime_abelianizations(both);
  const ZeroMapFactor f[] = {zero_map_factor(a, c.left), zero_map_factor(b, c.right)};
  c.zero_map = zero_map_condition(f);
  return c;
}

ProductCheck product_epicenter_check(const FiniteGroup& a, const FiniteGroup& b, const EngineOptions& options) {
  const std::size_t n = a.order() * b.order();
  return product_epicenter_check(Subject::from_group(a, "A"), Subject::from_group(b, "B"), options, n);
}

PairProductCheck pair_product_check(const PairOfGroups& p1, const PairOfGroups& p2, const EngineOptions& options,
                                    std::size_t max_order) {
  const Subject prod = Subject::product(p1.group(), p2.group(), max_order);
  const std::size_t n2 = p2.group().order();
  const PairOfGroups p(prod, product_set(p1.members(), p2.members(), n2));
  const auto lhs = exterior_g_center(p, options);
  const auto rhs = product_set(exterior_g_center(p1, options), exterior_g_center(p2, options), n2);
  const Subject both[] = {p1.group(), p2.group()};
  return {lhs == rhs, coprime_abelianizations(both)};
}

namespace {

std::size_t abelianization_order(const Subject& s) {
  std::size_t n = 1;
  for (const Subject::Factor& f : s.factors()) {
    if (f.abelian_structured)
      n *= f.order;
    else
      n *= abelianization(*f.group).group.order()->get_ui();
  }
  return n;
}

}  // namespace

bool coprime_abelianizations(std::span<const Subject> groups) {
  std::vector<std::size_t> orders;
  for (const Subject& s : groups) orders.push_back(abelianization_order(s));
  return pairwise_coprime(orders);
}

std::optional<std::size_t> nilpotency_class(const Subject& s) {
  std::size_t c = 0;
  for (const Subject::Factor& f : s.factors()) {
    if (f.abelian_structured) {
      if (f.order > 1) c = std::max<std::size_t>(c, 1);
      continue;
    }
    const auto fc = nilpotency_class(*f.group);
    if (!fc) return std::nullopt;
    c = std::max(c, *fc);
  }
  return c;
}

bool coprime_product_criterion_applies(std::span<const Subject> groups, const VarietyDescriptor& v) {
  if (!coprime_abelianizations(groups)) return false;
  for (const Subject& s : groups) {
    const auto c = nilpotency_class(s);
    if (!c || *c > v.first_class()) return false;
  }
  return true;
}

bool coprime_product_criterion_applies(std::span<const FiniteGroup> groups, const VarietyDescriptor& v) {
  std::vector<Subject> subjects;
  for (const FiniteGroup& g : groups) subjects.push_back(Subject::from_group(g, "G"));
  return coprime_product_criterion_applies(subjects, v);
}

// ----------------------------------------------------------------- zero maps

ZeroMapFactor zero_map_factor(const Subject& s, const Epicenter& z) {
  if (s.has_abelian_view()) {
    AbelianSubgroup az;
    for (std::size_t x : z.members) az.members.push_back(s.to_abelian(x));
    std::sort(az.members.begin(), az.members.end());
    for (std::size_t g : z.generators) az.generators.push_back(s.to_abelian(g));
    return zero_map_factor(s.abelian(), az);
  }
  // Z*(G) on the basis of its non-identity members, relations e_a + e_x = e_ax.
  const FiniteGroup& t = s.require_table();
  const Abelianization ab = abelianization(t);
  const auto& members = z.members;
  const std::size_t k = members.size() - 1;
  auto basis = [&](std::size_t x) -> long {
    if (x == 0) return -1;
    return std::lower_bound(members.begin(), members.end(), x) - members.begin() - 1;
  };
  std::vector<IntVector> rels;
  for (std::size_t a : members)
    for (std::size_t x : z.generators) {
      IntVector v(k);
      if (long i = basis(a); i >= 0) v[i] += 1;
      if (long i = basis(x); i >= 0) v[i] += 1;
      if (long i = basis(t.mul(a, x)); i >= 0) v[i] -= 1;
      rels.push_back(std::move(v));
    }
  const FPAbelianGroup zg(k, IntMatrix::from_columns(k, rels));
  const std::size_t r = ab.group.ambient_rank();
  std::vector<IntVector> cols;
  for (std::size_t i = 1; i < members.size(); ++i) cols.push_back(ab.coords[members[i]]);
  const IntMatrix m = IntMatrix::from_columns(r, cols);
  return {zg, ab.group, AbHom(zg, ab.group, m)};
}

bool zero_map_check(std::span<const Subject> groups, const EngineOptions& options) {
  std::vector<ZeroMapFactor> factors;
  for (const Subject& s : groups) factors.push_back(zero_map_factor(s, epicenter(s, options)));
  return zero_map_condition(factors);
}

bool zero_map_check(std::span<const FiniteGroup> groups, const EngineOptions& options) {
  std::vector<Subject> subjects;
  for (const FiniteGroup& g : groups) subjects.push_back(Subject::from_group(g, "G"));
  return zero_map_check(subjects, options);
}

}  // namespace capkit
