#pragma once

// Capability decisions for G and for pairs (G, N), plus the direct-product
// checks on epicenters and exterior G-centers.
//
// Engine dispatch: abelian groups go to the Λ² engine; groups with a Cayley
// table within the homology cap go to the bar engine. When both apply they
// both run and must agree, otherwise EngineMismatch is thrown.

#include "capkit/abelian.hpp"
#include "capkit/group.hpp"
#include "capkit/homology.hpp"
#include "capkit/subject.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace capkit {

enum class Engine { Auto, Bar, Abelian };

std::string to_string(Engine e);
/// `auto` | `bar` | `abelian`; ParseError otherwise.
Engine parse_engine(std::string_view text);

struct EngineOptions {
  Engine engine = Engine::Auto;
  std::size_t homology_cap = kDefaultHomologyCap;
  std::size_t abelian_cap = kDefaultAbelianCap;
  /// Under Engine::Auto, also run the bar engine on abelian groups that fit
  /// the homology cap.
  bool cross_check = true;
};

/// Epicenter as element indices of the subject.
struct Epicenter {
  std::vector<std::size_t> members;
  std::vector<std::size_t> generators;
  std::vector<std::size_t> invariant_factors;
  std::string engine;  // "abelian" or "homology"
  bool cross_checked = false;

  bool is_trivial() const noexcept { return members.size() == 1; }
  bool contains(std::size_t x) const;
};

/// Z*(G) = { g in Z(G) : M(G) -> M(G/<g>) injective }.
Epicenter epicenter(const Subject& s, const EngineOptions& options = {});
Subgroup epicenter(const FiniteGroup& g, const EngineOptions& options = {});

/// Bar-engine epicenter of a Cayley table (cap enforced).
Subgroup homology_epicenter(const FiniteGroup& g, const HomologyOptions& options = {});

struct CapabilityReport {
  std::string subject;
  std::string subgroup;  // pairs only
  std::size_t order = 1;
  std::string engine;    // "homology" | "abelian" | "classifier"
  VarietyDescriptor variety = VarietyDescriptor::abelian();
  /// Epicenter (of a group) or exterior center (of a pair), when computed.
  std::optional<std::vector<std::size_t>> invariant_factors;
  std::vector<std::string> generators;
  bool epicenter_computed = false;
  CapabilityVerdict verdict;
  std::vector<std::string> notes;
  double ms = 0.0;
};

CapabilityReport is_capable(const Subject& s, const EngineOptions& options = {});
CapabilityReport is_capable(const FiniteGroup& g, const EngineOptions& options = {});
CapabilityReport varietal_capability(const Subject& s, const VarietyDescriptor& v, const EngineOptions& options = {});
CapabilityReport varietal_capability(const FiniteGroup& g, const VarietyDescriptor& v,
                                     const EngineOptions& options = {});

/// (G, N) with N normal in G (checked).
class PairOfGroups {
 public:
  PairOfGroups(Subject group, std::vector<std::size_t> members, std::string subgroup_spec = {});
  PairOfGroups(const FiniteGroup& g, const Subgroup& n);

  const Subject& group() const noexcept { return group_; }
  const std::vector<std::size_t>& members() const noexcept { return members_; }
  const std::string& subgroup_spec() const noexcept { return spec_; }

 private:
  Subject group_;
  std::vector<std::size_t> members_;
  std::string spec_;
};

/// Z^∧_G(N) = Z*(G) ∩ N.
std::vector<std::size_t> exterior_g_center(const PairOfGroups& p, const EngineOptions& options = {});
/// Same, from a precomputed epicenter of p.group().
std::vector<std::size_t> exterior_g_center(const PairOfGroups& p, const Epicenter& z);
CapabilityReport is_capable_pair(const PairOfGroups& p, const EngineOptions& options = {});

struct ProductCheck {
  bool inclusion_holds = false;
  bool equality_holds = false;
  bool coprime = false;
  bool zero_map = false;  // v_i ⊗ 1 vanish for both ordered pairs
  Epicenter product, left, right;
};

/// Compares Z*(A x B) with Z*(A) x Z*(B) inside A x B.
ProductCheck product_epicenter_check(const Subject& a, const Subject& b, const EngineOptions& options = {},
                                     std::size_t max_order = kDefaultMaxOrder);
ProductCheck product_epicenter_check(const FiniteGroup& a, const FiniteGroup& b, const EngineOptions& options = {});

struct PairProductCheck {
  bool equality_holds = false;
  bool coprime = false;
};

/// Compares Z^∧_{G1 x G2}(N1 x N2) with Z^∧_{G1}(N1) x Z^∧_{G2}(N2).
PairProductCheck pair_product_check(const PairOfGroups& p1, const PairOfGroups& p2, const EngineOptions& options = {},
                                    std::size_t max_order = kDefaultMaxOrder);

/// |G_i^ab| pairwise coprime.
bool coprime_abelianizations(std::span<const Subject> groups);

/// Pairwise coprime abelianizations and the product is nilpotent of class
/// at most c1. The class of a direct product is the largest factor class.
bool coprime_product_criterion_applies(std::span<const Subject> groups, const VarietyDescriptor& v);
bool coprime_product_criterion_applies(std::span<const FiniteGroup> groups, const VarietyDescriptor& v);

/// Nilpotency class of a subject (0 for the trivial group).
std::optional<std::size_t> nilpotency_class(const Subject& s);

/// Factor data for the zero-map condition, from a computed epicenter.
ZeroMapFactor zero_map_factor(const Subject& s, const Epicenter& z);
/// True iff v_i ⊗ 1 : Z*(G_i) ⊗ G_j^ab -> G_i^ab ⊗ G_j^ab is zero for all i != j.
bool zero_map_check(std::span<const Subject> groups, const EngineOptions& options = {});
bool zero_map_check(std::span<const FiniteGroup> groups, const EngineOptions& options = {});

}  // namespace capkit
