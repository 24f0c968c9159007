#pragma once

// A group under analysis, independent of which engine will look at it.
//
// Elements are coordinate tuples: an abelian-structured factor contributes
// one residue per cyclic component, any other factor contributes its Cayley
// table index. The element index is the mixed-radix value of the tuple,
// first coordinate most significant. For specs made only of cyclic and
// abelian factors this index agrees with both the Cayley table (when one is
// materialized) and the CyclicSum of the concatenated moduli.

#include "capkit/abelian.hpp"
#include "capkit/group.hpp"
#include "capkit/group_spec.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace capkit {

class Subject {
 public:
  struct Factor {
    std::string spec;
    std::size_t order = 1;
    std::vector<std::size_t> moduli;    // abelian-structured factors
    std::optional<FiniteGroup> group;   // other factors, or small abelian ones
    bool abelian_structured = false;
  };

  /// Trivial group.
  Subject();
  /// Builds the Cayley table when the order is at most max_order.
  static Subject from_spec(const GroupSpec& spec, std::size_t max_order = kDefaultMaxOrder);
  static Subject parse(std::string_view spec, std::size_t max_order = kDefaultMaxOrder);
  static Subject from_group(FiniteGroup g, std::string label);
  static Subject from_cyclic_sum(const CyclicSum& a, std::size_t max_order = kDefaultMaxOrder);
  /// a x b; element (x, y) has index x * |b| + y.
  static Subject product(const Subject& a, const Subject& b, std::size_t max_order = kDefaultMaxOrder);

  const std::string& spec() const noexcept { return spec_; }
  std::size_t order() const noexcept { return order_; }
  const std::vector<Factor>& factors() const noexcept { return factors_; }

  const std::optional<FiniteGroup>& table() const noexcept { return table_; }
  /// Cayley table or CapExceeded.
  const FiniteGroup& require_table() const;
  /// Known abelian: abelian-structured spec, or an abelian Cayley table.
  bool is_abelian() const;

  bool has_abelian_view() const noexcept { return abelian_.has_value(); }
  const CyclicSum& abelian() const;
  std::size_t to_abelian(std::size_t index) const;
  std::size_t from_abelian(std::size_t index) const;

  std::size_t coordinate_count() const;
  /// Index of a coordinate tuple; residues are reduced, table indices are
  /// range-checked (InvalidInput).
  std::size_t element(std::span<const long long> coords) const;
  std::vector<std::size_t> coordinates(std::size_t index) const;
  /// "(2,0)"
  std::string format_element(std::size_t index) const;

  /// Sorted members of the subgroup generated by the given elements.
  std::vector<std::size_t> closure(std::span<const std::size_t> gens) const;
  /// Normality check (abelian groups: always normal).
  bool is_normal(std::span<const std::size_t> members) const;

 private:
  void finish(std::size_t max_order);

  std::string spec_;
  std::size_t order_ = 1;
  std::vector<Factor> factors_;
  std::optional<FiniteGroup> table_;
  std::optional<CyclicSum> abelian_;
  std::vector<std::size_t> radices_;
  std::vector<char> residue_;  // coordinate is a residue (else a table index)
  // Only for abelian view derived from a table; empty means identity.
  std::vector<std::size_t> to_abelian_;
  std::vector<std::size_t> from_abelian_;
};

/// `whole` | `trivial` | `gens:(a,b,...);(c,d,...)` in the subject's element
/// coordinates. Returns the sorted members of the generated subgroup.
/// Throws ParseError on malformed text and on out-of-range coordinates.
std::vector<std::size_t> parse_subgroup_spec(const Subject& s, std::string_view text);

}  // namespace capkit
