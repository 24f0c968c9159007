#pragma once

// Closed-form engine for finite abelian groups: multiplier as an exterior
// square, epicenter through the Λ²-monomorphism test, Baer's criterion, the
// (poly)nilpotent rule table and the zero-map product condition.

#include "capkit/group.hpp"
#include "capkit/zlinalg.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace capkit {

inline constexpr std::size_t kDefaultAbelianCap = 1'000'000;

/// Z/m1 ⊕ ... ⊕ Z/mk with arbitrary positive moduli. Elements are residue
/// tuples, indexed in mixed radix with the first modulus most significant
/// (the same indexing abelian_group() uses for its Cayley table).
class CyclicSum {
 public:
  CyclicSum() = default;
  explicit CyclicSum(std::vector<std::size_t> moduli);

  const std::vector<std::size_t>& moduli() const noexcept { return moduli_; }
  std::size_t rank() const noexcept { return moduli_.size(); }
  std::size_t order() const noexcept { return order_; }

  std::vector<std::size_t> residues(std::size_t index) const;
  /// Entries are reduced modulo the moduli.
  std::size_t index(std::span<const long long> residues) const;
  std::size_t add(std::size_t a, std::size_t b) const;
  std::size_t multiple(std::size_t a, std::size_t k) const;
  std::size_t element_order(std::size_t a) const;

  FPAbelianGroup presentation() const;
  /// Residue vector as an ambient vector of presentation().
  IntVector ambient(std::size_t index) const;
  /// Canonical invariant factors, descending divisibility.
  std::vector<std::size_t> invariant_factors() const;

  /// Sorted closure of the generators.
  std::vector<std::size_t> closure(std::span<const std::size_t> gens) const;
  /// Greedy generating set (ascending index order) of a subgroup.
  std::vector<std::size_t> generators(std::span<const std::size_t> members) const;
  /// Invariant factors of the subgroup generated by `gens`.
  std::vector<std::size_t> subgroup_invariants(std::span<const std::size_t> gens) const;

  friend bool operator==(const CyclicSum&, const CyclicSum&) = default;

 private:
  std::vector<std::size_t> moduli_;
  std::size_t order_ = 1;
};

/// Finite abelian group in invariant-factor form n1, n2, ..., nk with
/// n_{i+1} | n_i and all n_i >= 2. The trivial group is the empty list.
class AbelianGroupIF {
 public:
  AbelianGroupIF() = default;
  /// Throws InvalidInput unless the list is a descending divisibility chain
  /// without ones.
  explicit AbelianGroupIF(std::vector<std::size_t> factors);
  /// Canonical form of an arbitrary direct sum of cyclic groups.
  static AbelianGroupIF from_moduli(std::span<const std::size_t> moduli);

  const std::vector<std::size_t>& factors() const noexcept { return factors_; }
  std::size_t rank() const noexcept { return factors_.size(); }
  std::size_t order() const;
  bool is_trivial() const noexcept { return factors_.empty(); }
  CyclicSum as_cyclic_sum() const { return CyclicSum(factors_); }
  std::string to_string() const;

  friend bool operator==(const AbelianGroupIF&, const AbelianGroupIF&) = default;

 private:
  std::vector<std::size_t> factors_;
};

/// Variety of groups: polynilpotent with class row (c1, ..., cs). The
/// abelian variety is (1); nilpotent of class c is (c).
class VarietyDescriptor {
 public:
  enum class Kind { Abelian, Nilpotent, Polynilpotent };

  static VarietyDescriptor abelian() { return VarietyDescriptor(Kind::Abelian, {1}); }
  static VarietyDescriptor nilpotent(std::size_t c);
  static VarietyDescriptor polynilpotent(std::vector<std::size_t> classes);

  Kind kind() const noexcept { return kind_; }
  const std::vector<std::size_t>& classes() const noexcept { return classes_; }
  std::size_t length() const noexcept { return classes_.size(); }
  std::size_t first_class() const noexcept { return classes_.front(); }
  bool is_abelian_variety() const noexcept { return classes_.size() == 1 && classes_.front() == 1; }
  /// "abelian", "N:<c>" or "PN:<c1,c2,...>".
  std::string to_string() const;

  friend bool operator==(const VarietyDescriptor& a, const VarietyDescriptor& b) { return a.classes_ == b.classes_; }

 private:
  VarietyDescriptor(Kind kind, std::vector<std::size_t> classes) : kind_(kind), classes_(std::move(classes)) {}
  Kind kind_;
  std::vector<std::size_t> classes_;
};

/// Parses `abelian` | `N:<c>` | `PN:<c1,c2,...>`. Throws ParseError.
VarietyDescriptor parse_variety(std::string_view text);

struct CapabilityVerdict {
  enum class Status { Capable, NotCapable, Undetermined };
  Status status = Status::Undetermined;
  std::string criterion;

  bool capable() const noexcept { return status == Status::Capable; }
};

std::string to_string(CapabilityVerdict::Status s);

/// Subgroup of a CyclicSum: sorted element indices plus its structure.
struct AbelianSubgroup {
  std::vector<std::size_t> members;
  std::vector<std::size_t> generators;
  std::vector<std::size_t> invariant_factors;

  bool is_trivial() const noexcept { return members.size() == 1; }
};

/// Λ² of the diagonal presentation.
FPAbelianGroup abelian_multiplier(const CyclicSum& a);
inline FPAbelianGroup abelian_multiplier(const AbelianGroupIF& a) { return abelian_multiplier(a.as_cyclic_sum()); }

/// True iff Λ²(A) -> Λ²(A/⟨g⟩) is injective.
bool exterior_square_mono(const CyclicSum& a, std::size_t g);

/// { g : Λ²(A) -> Λ²(A/⟨g⟩) injective }, scanned one cyclic subgroup at a
/// time. Throws CapExceeded when |A| > cap.
AbelianSubgroup abelian_epicenter(const CyclicSum& a, std::size_t cap = kDefaultAbelianCap);
inline AbelianSubgroup abelian_epicenter(const AbelianGroupIF& a, std::size_t cap = kDefaultAbelianCap) {
  return abelian_epicenter(a.as_cyclic_sum(), cap);
}

/// Capable iff k >= 2 and n1 = n2; the trivial group is capable.
CapabilityVerdict baer_capable(const AbelianGroupIF& a);

/// Tri-state rule table for (poly)nilpotent varieties on abelian groups.
CapabilityVerdict polynilpotent_capable(const AbelianGroupIF& a, const VarietyDescriptor& v);

/// Data needed to test whether v ⊗ 1 : Z*(G_i) ⊗ G_j^ab -> G_i^ab ⊗ G_j^ab
/// vanishes, where v : Z*(G_i) -> G_i^ab is the natural map.
struct ZeroMapFactor {
  FPAbelianGroup epicenter;
  FPAbelianGroup abelianization;
  AbHom natural_map;  // epicenter -> abelianization
};

/// Builds the factor data of an abelian group from its epicenter.
ZeroMapFactor zero_map_factor(const CyclicSum& a, const AbelianSubgroup& epicenter);

/// True iff v_i ⊗ 1 is the zero map for every ordered pair i != j.
bool zero_map_condition(std::span<const ZeroMapFactor> factors);

/// Pairwise coprimality of a list of orders.
bool pairwise_coprime(std::span<const std::size_t> orders);
/// |G_i^ab| pairwise coprime.
bool coprime_abelianizations(std::span<const FiniteGroup> groups);
bool coprime_abelianizations(std::span<const CyclicSum> groups);

/// Every subgroup of a, as sorted member lists (trivial subgroup first).
std::vector<std::vector<std::size_t>> enumerate_subgroups(const CyclicSum& a);

/// Every invariant-factor list with at most max_rank entries, each at most
/// max_factor (the trivial group included).
std::vector<AbelianGroupIF> enumerate_invariant_factor_lists(std::size_t max_rank, std::size_t max_factor);
/// Every abelian group of order exactly n, in invariant-factor form.
std::vector<AbelianGroupIF> abelian_groups_of_order(std::size_t n);

}  // namespace capkit
