#pragma once

// Concrete finite groups stored as Cayley tables, with subgroups as sorted
// element-index sets. Element 0 is always the identity.

#include "capkit/zlinalg.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace capkit {

using Element = std::uint32_t;

/// Default hard cap on the order of a materialized Cayley table.
inline constexpr std::size_t kDefaultMaxOrder = 24;

class FiniteGroup {
 public:
  /// Trivial group.
  FiniteGroup();
  /// Validates the table: identity row/column at index 0, Latin square,
  /// associativity (exhaustive up to order 64, sampled above). Throws
  /// InvalidInput on failure.
  FiniteGroup(std::size_t order, std::vector<Element> table, std::vector<std::string> labels = {});

  std::size_t order() const noexcept { return data_->order; }
  static constexpr Element identity() noexcept { return 0; }
  Element mul(Element a, Element b) const noexcept { return data_->table[a * data_->order + b]; }
  Element inv(Element a) const noexcept { return data_->inverse[a]; }
  Element commutator(Element a, Element b) const noexcept { return mul(mul(inv(a), inv(b)), mul(a, b)); }
  Element power(Element a, long long e) const;
  std::size_t element_order(Element a) const;
  const std::string& label(Element a) const { return data_->labels[a]; }
  bool is_abelian() const noexcept { return data_->abelian; }
  std::span<const Element> table() const noexcept { return data_->table; }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.data_ == b.data_ || a.data_->table == b.data_->table;
  }

 private:
  struct Data {
    std::size_t order = 1;
    std::vector<Element> table;
    std::vector<Element> inverse;
    std::vector<std::string> labels;
    bool abelian = true;
  };
  std::shared_ptr<const Data> data_;
};

class Subgroup {
 public:
  Subgroup() = default;
  /// Members need not be sorted; closure is validated (InvalidInput).
  Subgroup(FiniteGroup parent, std::vector<Element> members);
  static Subgroup trivial(const FiniteGroup& g) { return Subgroup(g, {FiniteGroup::identity()}); }
  static Subgroup whole(const FiniteGroup& g);

  const FiniteGroup& parent() const noexcept { return parent_; }
  std::span<const Element> members() const noexcept { return members_; }
  std::size_t order() const noexcept { return members_.size(); }
  bool contains(Element e) const;
  bool is_trivial() const noexcept { return members_.size() == 1; }
  bool is_whole() const noexcept { return members_.size() == parent_.order(); }
  bool is_normal() const;
  bool is_central() const;
  bool is_subset_of(const Subgroup& other) const;

  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.members_ == b.members_; }

 private:
  FiniteGroup parent_;
  std::vector<Element> members_;
};

class GroupHom {
 public:
  /// Throws InvalidInput unless images define a homomorphism.
  GroupHom(FiniteGroup source, FiniteGroup target, std::vector<Element> images);
  static GroupHom identity(const FiniteGroup& g);
  static GroupHom trivial(const FiniteGroup& source, const FiniteGroup& target);

  const FiniteGroup& source() const noexcept { return source_; }
  const FiniteGroup& target() const noexcept { return target_; }
  Element operator()(Element e) const noexcept { return images_[e]; }
  std::span<const Element> images() const noexcept { return images_; }
  Subgroup kernel() const;
  bool is_surjective() const;

 private:
  FiniteGroup source_;
  FiniteGroup target_;
  std::vector<Element> images_;
};

/// h ∘ f
GroupHom compose(const GroupHom& h, const GroupHom& f);

struct DirectProduct {
  FiniteGroup group;
  GroupHom first;   // g -> (g, 1)
  GroupHom second;  // h -> (1, h)
};

/// Element (g, h) has index g * |H| + h. Throws CapExceeded above max_order.
DirectProduct direct_product(const FiniteGroup& g, const FiniteGroup& h, std::size_t max_order = kDefaultMaxOrder);

FiniteGroup cyclic_group(std::size_t n);
/// Z/m1 ⊕ Z/m2 ⊕ ... ; element index is the mixed-radix value of the residues.
FiniteGroup abelian_group(std::span<const std::size_t> moduli, std::size_t max_order = kDefaultMaxOrder);
/// Dihedral group of order 2n: index k < n is r^k, index n + k is r^k s.
FiniteGroup dihedral_group(std::size_t n);
/// Indices 0..7 are 1, -1, i, -i, j, -j, k, -k.
FiniteGroup quaternion_group();
/// Closure of permutations (images of points 0..degree-1) under composition
/// (p * q means apply p first). Throws CapExceeded beyond max_order.
FiniteGroup permutation_group(const std::vector<std::vector<std::size_t>>& generators,
                              std::size_t max_order = kDefaultMaxOrder);

Subgroup center(const FiniteGroup& g);
Subgroup subgroup_closure(const FiniteGroup& g, std::span<const Element> gens);
/// Closure of { [a, b] : a in A, b in B }.
Subgroup commutator_subgroup(const FiniteGroup& g, const Subgroup& a, const Subgroup& b);
Subgroup derived_subgroup(const FiniteGroup& g);
/// γ1 = G, γ_{i+1} = [γ_i, G], up to and including the first repeated term.
std::vector<Subgroup> lower_central_series(const FiniteGroup& g);
/// Least c with γ_{c+1} = 1; std::nullopt when G is not nilpotent.
std::optional<std::size_t> nilpotency_class(const FiniteGroup& g);
/// Z0 = 1, Z_{i+1}/Z_i = Z(G/Z_i), up to and including the first repeated term.
std::vector<Subgroup> upper_central_series(const FiniteGroup& g);
std::size_t exponent(const FiniteGroup& g);

struct Quotient {
  FiniteGroup group;
  GroupHom projection;
};
/// Cosets are numbered by least representative. Throws InvalidInput when N
/// is not normal.
Quotient quotient(const FiniteGroup& g, const Subgroup& n);

/// G/G' in compact invariant-factor coordinates together with the image of
/// every element of G.
struct Abelianization {
  FPAbelianGroup group;
  std::vector<IntVector> coords;  // indexed by element of G
};
Abelianization abelianization(const FiniteGroup& g);
bool is_perfect(const FiniteGroup& g);

/// Presentation of an abelian subgroup S of G in compact coordinates, with
/// the coordinates of every member (same order as S.members()).
struct AbelianSubgroupPresentation {
  FPAbelianGroup group;
  std::vector<IntVector> coords;
};
AbelianSubgroupPresentation abelian_presentation(const Subgroup& s);

}  // namespace capkit
