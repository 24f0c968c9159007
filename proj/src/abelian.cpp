#include "capkit/abelian.hpp"

#include "capkit/error.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>

namespace capkit {

namespace {

std::size_t to_size(const Int& v) {
  if (v < 0 || !v.fits_ulong_p()) throw CapExceeded("integer does not fit the element index range");
  return v.get_ui();
}

std::vector<std::size_t> to_sizes(const std::vector<Int>& v) {
  std::vector<std::size_t> out;
  out.reserve(v.size());
  for (const Int& x : v) out.push_back(to_size(x));
  return out;
}

}  // namespace

// ----------------------------------------------------------------- CyclicSum

CyclicSum::CyclicSum(std::vector<std::size_t> moduli) : moduli_(std::move(moduli)) {
  for (std::size_t m : moduli_) {
    if (m == 0) throw InvalidInput("CyclicSum: moduli must be positive");
    if (order_ > (std::size_t{1} << 40) / m) throw CapExceeded("CyclicSum: order exceeds 2^40");
    order_ *= m;
  }
}

std::vector<std::size_t> CyclicSum::residues(std::size_t index) const {
  std::vector<std::size_t> r(moduli_.size());
  for (std::size_t i = moduli_.size(); i-- > 0;) {
    r[i] = index % moduli_[i];
    index /= moduli_[i];
  }
  return r;
}

std::size_t CyclicSum::index(std::span<const long long> residues) const {
  if (residues.size() != moduli_.size()) throw InvalidInput("CyclicSum: residue tuple has the wrong length");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    const auto m = static_cast<long long>(moduli_[i]);
    idx = idx * moduli_[i] + static_cast<std::size_t>(((residues[i] % m) + m) % m);
  }
  return idx;
}

std::size_t CyclicSum::add(std::size_t a, std::size_t b) const {
  std::size_t idx = 0, scale = 1;
  for (std::size_t i = moduli_.size(); i-- > 0;) {
    const std::size_t m = moduli_[i];
    idx += ((a % m + b % m) % m) * scale;
    a /= m;
    b /= m;
    scale *= m;
  }
  return idx;
}

std::size_t CyclicSum::multiple(std::size_t a, std::size_t k) const {
  std::size_t idx = 0, scale = 1;
  for (std::size_t i = moduli_.size(); i-- > 0;) {
    const std::size_t m = moduli_[i];
    idx += ((a % m) * (k % m) % m) * scale;
    a /= m;
    scale *= m;
  }
  return idx;
}

std::size_t CyclicSum::element_order(std::size_t a) const {
  std::size_t ord = 1;
  const auto r = residues(a);
  for (std::size_t i = 0; i < r.size(); ++i) ord = std::lcm(ord, moduli_[i] / std::gcd(moduli_[i], r[i]));
  return ord;
}

FPAbelianGroup CyclicSum::presentation() const {
  std::vector<Int> m(moduli_.begin(), moduli_.end());
  return FPAbelianGroup::cyclic_sum(m);
}

IntVector CyclicSum::ambient(std::size_t index) const {
  const auto r = residues(index);
  return IntVector(r.begin(), r.end());
}

std::vector<std::size_t> CyclicSum::invariant_factors() const { return to_sizes(presentation().torsion()); }

std::vector<std::size_t> CyclicSum::closure(std::span<const std::size_t> gens) const {
  std::vector<char> seen(order_, 0);
  std::vector<std::size_t> members{0};
  seen[0] = 1;
  for (std::size_t head = 0; head < members.size(); ++head)
    for (std::size_t g : gens) {
      const std::size_t s = add(members[head], g);
      if (!seen[s]) {
        seen[s] = 1;
        members.push_back(s);
      }
    }
  std::sort(members.begin(), members.end());
  return members;
}

std::vector<std::size_t> CyclicSum::generators(std::span<const std::size_t> members) const {
  std::vector<std::size_t> gens;
  std::vector<std::size_t> current{0};
  for (std::size_t x : members) {
    if (std::binary_search(current.begin(), current.end(), x)) continue;
    gens.push_back(x);
    current = closure(gens);
  }
  return gens;
}

std::vector<std::size_t> CyclicSum::subgroup_invariants(std::span<const std::size_t> gens) const {
  std::vector<IntVector> cols;
  for (std::size_t g : gens) cols.push_back(ambient(g));
  const FPAbelianGroup p = presentation();
  return to_sizes(subgroup_presentation(p, IntMatrix::from_columns(rank(), cols)).group.torsion());
}

// ------------------------------------------------------------ AbelianGroupIF

AbelianGroupIF::AbelianGroupIF(std::vector<std::size_t> factors) : factors_(std::move(factors)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i] < 2) throw InvalidInput("AbelianGroupIF: invariant factors must be at least 2");
    if (i > 0 && factors_[i - 1] % factors_[i] != 0)
      throw InvalidInput("AbelianGroupIF: factors must satisfy n_{i+1} | n_i");
  }
}

AbelianGroupIF AbelianGroupIF::from_moduli(std::span<const std::size_t> moduli) {
  return AbelianGroupIF(CyclicSum(std::vector<std::size_t>(moduli.begin(), moduli.end())).invariant_factors());
}

std::size_t AbelianGroupIF::order() const {
  return std::accumulate(factors_.begin(), factors_.end(), std::size_t{1}, std::multiplies<>());
}

std::string AbelianGroupIF::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < factors_.size(); ++i) os << (i ? "," : "") << factors_[i];
  os << ']';
  return os.str();
}

// --------------------------------------------------------------- varieties

VarietyDescriptor VarietyDescriptor::nilpotent(std::size_t c) {
  if (c == 0) throw InvalidInput("nilpotent variety: class must be at least 1");
  return VarietyDescriptor(Kind::Nilpotent, {c});
}

VarietyDescriptor VarietyDescriptor::polynilpotent(std::vector<std::size_t> classes) {
  if (classes.empty()) throw InvalidInput("polynilpotent variety: empty class row");
  for (std::size_t c : classes)
    if (c == 0) throw InvalidInput("polynilpotent variety: classes must be at least 1");
  return VarietyDescriptor(Kind::Polynilpotent, std::move(classes));
}

std::string VarietyDescriptor::to_string() const {
  switch (kind_) {
    case Kind::Abelian: return "abelian";
    case Kind::Nilpotent: return "N:" + std::to_string(classes_.front());
    case Kind::Polynilpotent: break;
  }
  std::string s = "PN:";
  for (std::size_t i = 0; i < classes_.size(); ++i) s += (i ? "," : "") + std::to_string(classes_[i]);
  return s;
}

VarietyDescriptor parse_variety(std::string_view text) {
  const std::string hint = "expected `abelian`, `N:<c>` or `PN:<c1,c2,...>`";
  if (text == "abelian") return VarietyDescriptor::abelian();

  auto parse_list = [&](std::size_t start) {
    std::vector<std::size_t> out;
    std::size_t pos = start;
    while (true) {
      std::size_t value = 0;
      const char* first = text.data() + pos;
      const char* last = text.data() + text.size();
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc() || ptr == first) throw ParseError("variety: expected a positive integer", pos, hint);
      if (value == 0) throw ParseError("variety: classes must be at least 1", pos, hint);
      out.push_back(value);
      pos = static_cast<std::size_t>(ptr - text.data());
      if (pos == text.size()) break;
      if (text[pos] != ',') throw ParseError("variety: unexpected character", pos, hint);
      ++pos;
    }
    return out;
  };

  if (text.starts_with("PN:")) return VarietyDescriptor::polynilpotent(parse_list(3));
  if (text.starts_with("N:")) {
    auto classes = parse_list(2);
    if (classes.size() != 1) throw ParseError("variety: `N:` takes a single class", 2, hint);
    return VarietyDescriptor::nilpotent(classes.front());
  }
  throw ParseError("variety: unknown variety", 0, hint);
}

std::string to_string(CapabilityVerdict::Status s) {
  switch (s) {
    case CapabilityVerdict::Status::Capable: return "capable";
    case CapabilityVerdict::Status::NotCapable: return "not_capable";
    case CapabilityVerdict::Status::Undetermined: break;
  }
  return "undetermined";
}

// ----------------------------------------------------- multiplier, epicenter

FPAbelianGroup abelian_multiplier(const CyclicSum& a) { return exterior_square(a.presentation()); }

namespace {

bool mono_against(const CyclicSum& a, const FPAbelianGroup& wedge, std::size_t g) {
  if (wedge.is_trivial()) return true;
  const FPAbelianGroup p = a.presentation();
  const IntMatrix col = IntMatrix::from_columns(a.rank(), {a.ambient(g)});
  const FPAbelianGroup q(a.rank(), p.relations().hconcat(col));
  const FPAbelianGroup wq = exterior_square(q);
  return hom_is_injective(AbHom(wedge, wq, IntMatrix::identity(wedge.ambient_rank())));
}

}  // namespace

bool exterior_square_mono(const CyclicSum& a, std::size_t g) {
  if (g >= a.order()) throw InvalidInput("exterior_square_mono: element index out of range");
  return mono_against(a, abelian_multiplier(a), g);
}

AbelianSubgroup abelian_epicenter(const CyclicSum& a, std::size_t cap) {
  if (a.order() > cap)
    throw CapExceeded("abelian epicenter: order " + std::to_string(a.order()) + " exceeds the abelian cap " +
                      std::to_string(cap));
  const FPAbelianGroup wedge = abelian_multiplier(a);
  const std::size_t n = a.order();

  enum : char { Unknown, In, Out };
  std::vector<char> state(n, Unknown);
  state[0] = In;
  for (std::size_t g = 1; g < n; ++g) {
    if (state[g] != Unknown) continue;
    const bool inside = mono_against(a, wedge, g);
    // ⟨g⟩ inside Z* puts every multiple in; otherwise every other generator
    // of ⟨g⟩ is out as well.
    const std::size_t ord = a.element_order(g);
    for (std::size_t j = 1; j < ord; ++j) {
      const std::size_t h = a.multiple(g, j);
      if (inside)
        state[h] = In;
      else if (std::gcd(j, ord) == 1)
        state[h] = Out;
    }
    state[g] = inside ? In : Out;
  }

  AbelianSubgroup out;
  for (std::size_t g = 0; g < n; ++g)
    if (state[g] == In) out.members.push_back(g);
  out.generators = a.generators(out.members);
  if (a.closure(out.generators) != out.members)
    throw std::logic_error("abelian epicenter: element set is not a subgroup");
  out.invariant_factors = a.subgroup_invariants(out.generators);
  return out;
}

// ---------------------------------------------------------------- classifiers

CapabilityVerdict baer_capable(const AbelianGroupIF& a) {
  using S = CapabilityVerdict::Status;
  const auto& n = a.factors();
  if (n.empty()) return {S::Capable, "trivial group"};
  if (n.size() >= 2 && n[0] == n[1]) return {S::Capable, "Baer criterion: n1 = n2"};
  return {S::NotCapable, "Baer criterion: k < 2 or n1 != n2"};
}

CapabilityVerdict polynilpotent_capable(const AbelianGroupIF& a, const VarietyDescriptor& v) {
  using S = CapabilityVerdict::Status;
  const auto& n = a.factors();
  const std::size_t k = n.size();
  const std::size_t t = v.length();
  const std::size_t c1 = v.first_class();
  if (k == 0) return {S::Capable, "rule (a): trivial group"};
  if (k == 1) return {S::NotCapable, "rule (b): nontrivial cyclic group"};
  if (n[0] == n[1] && (t == 1 || c1 >= 2)) return {S::Capable, "rule (c): n1 = n2 with t = 1 or c1 >= 2"};
  if (k >= 3 && n[0] == n[1] && n[1] == n[2] && t >= 2 && c1 == 1)
    return {S::Capable, "rule (d): n1 = n2 = n3 with t >= 2 and c1 = 1"};
  if (v.is_abelian_variety() && n[0] != n[1]) return {S::NotCapable, "rule (e): Baer criterion, n1 != n2"};
  return {S::Undetermined, "rule (f): no implemented criterion applies"};
}

// ---------------------------------------------------------------- zero maps

ZeroMapFactor zero_map_factor(const CyclicSum& a, const AbelianSubgroup& epicenter) {
  const FPAbelianGroup p = a.presentation();
  std::vector<IntVector> cols;
  for (std::size_t g : epicenter.generators) cols.push_back(a.ambient(g));
  SubgroupPresentation sub = subgroup_presentation(p, IntMatrix::from_columns(a.rank(), cols));
  return {sub.group, p, sub.inclusion};
}

bool zero_map_condition(std::span<const ZeroMapFactor> factors) {
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].epicenter.is_trivial()) continue;
    for (std::size_t j = 0; j < factors.size(); ++j) {
      if (i == j) continue;
      const AbHom map = tensor_map(factors[i].natural_map, AbHom::identity(factors[j].abelianization));
      if (!map.is_zero()) return false;
    }
  }
  return true;
}

bool pairwise_coprime(std::span<const std::size_t> orders) {
  for (std::size_t i = 0; i < orders.size(); ++i)
    for (std::size_t j = i + 1; j < orders.size(); ++j)
      if (std::gcd(orders[i], orders[j]) != 1) return false;
  return true;
}

bool coprime_abelianizations(std::span<const FiniteGroup> groups) {
  std::vector<std::size_t> orders;
  for (const FiniteGroup& g : groups) {
    const auto order = abelianization(g).group.order();
    orders.push_back(to_size(*order));
  }
  return pairwise_coprime(orders);
}

bool coprime_abelianizations(std::span<const CyclicSum> groups) {
  std::vector<std::size_t> orders;
  for (const CyclicSum& g : groups) orders.push_back(g.order());
  return pairwise_coprime(orders);
}

// -------------------------------------------------------------- enumeration

std::vector<std::vector<std::size_t>> enumerate_subgroups(const CyclicSum& a) {
  std::vector<std::vector<std::size_t>> found{{0}};
  std::vector<std::vector<std::size_t>> gens{{}};
  std::set<std::vector<std::size_t>> seen{{0}};
  for (std::size_t i = 0; i < found.size(); ++i)
    for (std::size_t g = 1; g < a.order(); ++g) {
      if (std::binary_search(found[i].begin(), found[i].end(), g)) continue;
      std::vector<std::size_t> next = gens[i];
      next.push_back(g);
      std::vector<std::size_t> members = a.closure(next);
      if (seen.insert(members).second) {
        found.push_back(std::move(members));
        gens.push_back(std::move(next));
      }
    }
  return found;
}

namespace {

void extend_chains(std::vector<std::size_t>& chain, std::size_t max_rank, std::size_t bound,
                   std::size_t remaining, bool exact, std::vector<AbelianGroupIF>& out) {
  if (!exact || remaining == 1) out.emplace_back(chain);
  if (chain.size() == max_rank) return;
  for (std::size_t n = 2; n <= bound; ++n) {
    if (!chain.empty() && chain.back() % n != 0) continue;
    if (exact && remaining % n != 0) continue;
    chain.push_back(n);
    extend_chains(chain, max_rank, n, exact ? remaining / n : 1, exact, out);
    chain.pop_back();
  }
}

}  // namespace

std::vector<AbelianGroupIF> enumerate_invariant_factor_lists(std::size_t max_rank, std::size_t max_factor) {
  std::vector<AbelianGroupIF> out;
  std::vector<std::size_t> chain;
  extend_chains(chain, max_rank, max_factor, 1, false, out);
  return out;
}

std::vector<AbelianGroupIF> abelian_groups_of_order(std::size_t n) {
  if (n == 0) throw InvalidInput("abelian_groups_of_order: order must be positive");
  std::vector<AbelianGroupIF> out;
  std::vector<std::size_t> chain;
  std::size_t rank = 0;
  for (std::size_t m = n; m > 1; m /= 2) ++rank;
  extend_chains(chain, rank, n, n, true, out);
  return out;
}

}  // namespace capkit
