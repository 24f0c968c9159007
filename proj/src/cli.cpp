#include "capkit/cli.hpp"

#include "capkit/error.hpp"
#include "capkit/group_spec.hpp"
#include "capkit/homology.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace capkit::cli {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double stamp(double ms, bool timing) { return timing ? std::round(ms * 1000.0) / 1000.0 : 0.0; }

std::string format_factors(const std::vector<std::size_t>& f) {
  if (f.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? " + Z/" : "Z/") + std::to_string(f[i]);
  return s;
}

std::vector<std::size_t> to_sizes(const std::vector<Int>& v) {
  std::vector<std::size_t> out;
  for (const Int& x : v) out.push_back(x.get_ui());
  return out;
}

json echo(const Command& cmd) {
  json c;
  c["verb"] = to_string(cmd.verb);
  c["subjects"] = cmd.subjects;
  c["variety"] = cmd.variety.to_string();
  c["engine"] = to_string(cmd.engine);
  c["max_order"] = cmd.max_order;
  c["force"] = cmd.force;
  if (cmd.verb == Verb::Pair) c["subgroup"] = cmd.subgroup;
  if (cmd.verb == Verb::Verify) c["abelian_order"] = cmd.abelian_order;
  return c;
}

json document(const Command& cmd) {
  json body;
  body["schema"] = kSchema;
  body["command"] = echo(cmd);
  body["subjects"] = json::array();
  body["failures"] = 0;
  body["version"] = CAPKIT_VERSION;
  return body;
}

json report_json(const CapabilityReport& r, bool timing) {
  json e;
  e["spec"] = r.subject;
  e["order"] = r.order;
  e["engine"] = r.engine;
  e["variety"] = r.variety.to_string();
  if (r.epicenter_computed)
    e["epicenter"] = {{"invariant_factors", *r.invariant_factors}, {"generators", r.generators}};
  else
    e["epicenter"] = nullptr;
  e["verdict"] = to_string(r.verdict.status);
  e["criterion"] = r.verdict.criterion;
  e["notes"] = r.notes;
  e["ms"] = stamp(r.ms, timing);
  return e;
}

Subject load(const std::string& spec, const Command& cmd) { return Subject::parse(spec, cmd.max_order); }

// ------------------------------------------------------------------ verbs

json multiplier_entry(const Subject& s, const EngineOptions& opts, bool timing) {
  const auto start = Clock::now();
  std::vector<std::size_t> factors;
  std::string engine;
  std::vector<std::string> notes;
  auto bar = [&] {
    const FiniteGroup& t = s.require_table();
    if (t.order() > opts.homology_cap)
      throw CapExceeded("group " + s.spec() + " exceeds the homology cap " + std::to_string(opts.homology_cap));
    return to_sizes(schur_multiplier(t, {BarBasis::Normalized, opts.homology_cap}).h2().torsion());
  };
  if (opts.engine == Engine::Bar || (opts.engine == Engine::Auto && !s.has_abelian_view())) {
    factors = bar();
    engine = "homology";
  } else {
    if (!s.has_abelian_view()) throw CapExceeded("the abelian engine needs an abelian group; " + s.spec() + " is not");
    factors = to_sizes(abelian_multiplier(s.abelian()).torsion());
    engine = "abelian";
    if (opts.engine == Engine::Auto && opts.cross_check && s.table() && s.order() <= opts.homology_cap) {
      if (bar() != factors) throw EngineMismatch("multiplier of " + s.spec() + ": engines disagree");
      notes.push_back("abelian and homology engines agree");
    }
  }
  json e;
  e["spec"] = s.spec();
  e["order"] = s.order();
  e["engine"] = engine;
  e["variety"] = nullptr;
  e["epicenter"] = nullptr;
  e["multiplier"] = {{"invariant_factors", factors}};
  e["verdict"] = nullptr;
  e["criterion"] = nullptr;
  e["notes"] = notes;
  e["ms"] = stamp(elapsed_ms(start), timing);
  return e;
}

json epicenter_entry(const Subject& s, const EngineOptions& opts, bool timing) {
  CapabilityReport r = is_capable(s, opts);
  json e = report_json(r, timing);
  const Epicenter z = epicenter(s, opts);
  e["epicenter"]["order"] = z.members.size();
  return e;
}

json analyze_entry(const Subject& s, const Command& cmd, const EngineOptions& opts) {
  const auto start = Clock::now();
  CapabilityReport r = varietal_capability(s, cmd.variety, opts);
  json e = report_json(r, cmd.timing);
  json d;
  d["abelian"] = s.is_abelian();
  const auto cls = nilpotency_class(s);
  if (cls)
    d["nilpotency_class"] = *cls;
  else
    d["nilpotency_class"] = "not nilpotent";
  if (s.has_abelian_view()) {
    const auto inv = s.abelian().invariant_factors();
    d["invariant_factors"] = inv;
    d["center_order"] = s.order();
    d["derived_order"] = 1;
    d["abelianization"] = inv;
  } else {
    const FiniteGroup& t = s.require_table();
    d["center_order"] = center(t).order();
    d["derived_order"] = derived_subgroup(t).order();
    d["abelianization"] = to_sizes(abelianization(t).group.torsion());
  }
  if (s.table() && s.order() <= opts.homology_cap && opts.engine != Engine::Abelian)
    d["multiplier"] = to_sizes(schur_multiplier(*s.table(), {BarBasis::Normalized, opts.homology_cap}).h2().torsion());
  else if (s.has_abelian_view())
    d["multiplier"] = to_sizes(abelian_multiplier(s.abelian()).torsion());
  else
    d["multiplier"] = nullptr;
  if (!cmd.variety.is_abelian_variety()) {
    const CapabilityReport plain = is_capable(s, opts);
    d["capable"] = to_string(plain.verdict.status);
    d["epicenter"] = {{"invariant_factors", *plain.invariant_factors}, {"generators", plain.generators}};
  }
  e["details"] = d;
  e["ms"] = stamp(elapsed_ms(start), cmd.timing);
  return e;
}

// ------------------------------------------------------------------ suites

class Suite {
 public:
  explicit Suite(bool timing) : timing_(timing) {}

  void add(const std::string& check, const std::string& spec, bool passed, const std::string& detail,
           double ms = 0.0) {
    json e;
    e["check"] = check;
    e["spec"] = spec;
    e["passed"] = passed;
    e["detail"] = detail;
    e["ms"] = stamp(ms, timing_);
    entries_.push_back(std::move(e));
    if (!passed) ++failures_;
  }
  void witness(const std::string& spec, const std::string& detail) {
    witnesses_.push_back({{"spec", spec}, {"detail", detail}});
  }
  void fill(json& body) const {
    body["subjects"] = entries_;
    body["witnesses"] = witnesses_;
    body["failures"] = failures_;
    body["instances"] = entries_.size();
  }
  std::size_t failures() const { return failures_; }

 private:
  bool timing_;
  json entries_ = json::array();
  json witnesses_ = json::array();
  std::size_t failures_ = 0;
};

const std::vector<std::string>& catalog() {
  static const std::vector<std::string> c = {"cyclic:2", "cyclic:3",           "cyclic:4",   "cyclic:5",
                                             "cyclic:2 x cyclic:2", "perm:(1 2 3);(1 2)", "dihedral:4", "quaternion:8"};
  return c;
}

std::string pair_name(const std::string& a, const std::string& b) { return "(" + a + ", " + b + ")"; }

std::vector<std::size_t> concat(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Nontrivial abelian groups of order <= bound, in invariant-factor form.
std::vector<AbelianGroupIF> abelian_groups_up_to(std::size_t bound) {
  std::vector<AbelianGroupIF> out;
  for (std::size_t n = 2; n <= bound; ++n)
    for (AbelianGroupIF& a : abelian_groups_of_order(n)) out.push_back(std::move(a));
  return out;
}

void suite_products(Suite& suite, const Command& cmd) {
  EngineOptions opts = engine_options(cmd);
  opts.homology_cap = std::max(opts.homology_cap, cmd.max_order);
  bool witness_c2 = false;
  for (const std::string& a : catalog())
    for (const std::string& b : catalog()) {
      const Subject sa = load(a, cmd), sb = load(b, cmd);
      if (sa.order() * sb.order() > cmd.max_order) continue;
      const auto start = Clock::now();
      const ProductCheck c = product_epicenter_check(sa, sb, opts, cmd.max_order);
      const double ms = elapsed_ms(start);
      std::ostringstream detail;
      detail << "|Z*(AxB)| = " << c.product.members.size() << ", |Z*(A)| = " << c.left.members.size()
             << ", |Z*(B)| = " << c.right.members.size();
      const std::string name = pair_name(a, b);
      suite.add("product inclusion", name, c.inclusion_holds, detail.str(), ms);
      if (c.inclusion_holds && !c.equality_holds) {
        suite.witness(name, "strict: " + detail.str());
        if (a == "cyclic:2" && b == "cyclic:2" && c.product.is_trivial()) witness_c2 = true;
      }
      if (c.zero_map) suite.add("zero-map condition gives equality", name, c.equality_holds, detail.str());
      if (c.coprime) suite.add("coprime abelianizations give equality", name, c.equality_holds, detail.str());
    }
  if (cmd.max_order >= 4)
    suite.add("strict inclusion witness", pair_name("cyclic:2", "cyclic:2"), witness_c2,
              witness_c2 ? "Z*(C2 x C2) = 1 inside Z*(C2) x Z*(C2) of order 4" : "witness not found");

  // Coprime abelian sweep on the Λ² engine.
  EngineOptions ab = opts;
  ab.engine = Engine::Abelian;
  std::map<std::vector<std::size_t>, std::pair<AbelianSubgroup, ZeroMapFactor>> cache;
  auto data = [&](const AbelianGroupIF& g) -> const std::pair<AbelianSubgroup, ZeroMapFactor>& {
    auto it = cache.find(g.factors());
    if (it == cache.end()) {
      AbelianSubgroup z = abelian_epicenter(g.as_cyclic_sum(), ab.abelian_cap);
      ZeroMapFactor f = zero_map_factor(g.as_cyclic_sum(), z);
      it = cache.emplace(g.factors(), std::make_pair(std::move(z), std::move(f))).first;
    }
    return it->second;
  };
  const auto groups = abelian_groups_up_to(cmd.abelian_order / 2);
  for (const AbelianGroupIF& a : groups)
    for (const AbelianGroupIF& b : groups) {
      if (a.order() * b.order() > cmd.abelian_order || std::gcd(a.order(), b.order()) != 1) continue;
      const auto start = Clock::now();
      const auto& [za, fa] = data(a);
      const auto& [zb, fb] = data(b);
      const CyclicSum sum(concat(a.factors(), b.factors()));
      const AbelianSubgroup zp = abelian_epicenter(sum, ab.abelian_cap);
      std::vector<std::size_t> rhs;
      for (std::size_t x : za.members)
        for (std::size_t y : zb.members) rhs.push_back(x * b.order() + y);
      const bool equal = rhs == zp.members;
      const ZeroMapFactor f[] = {fa, fb};
      const bool zero = zero_map_condition(f);
      const std::string name = pair_name(a.to_string(), b.to_string());
      const std::string detail = "Z*(A+B) = " + format_factors(zp.invariant_factors) + ", Z*(A) = " +
                                 format_factors(za.invariant_factors) + ", Z*(B) = " + format_factors(zb.invariant_factors);
      const double ms = elapsed_ms(start);
      suite.add("abelian coprime product equality", name, equal, detail, ms);
      suite.add("zero-map condition for coprime factors", name, zero, zero ? "all v_i (x) 1 vanish" : "nonzero map");
    }
}

// Pair-product equality for abelian factors, every choice of subgroups.
struct AbelianFactorData {
  AbelianGroupIF group;
  std::vector<std::size_t> epicenter;
  std::vector<std::vector<std::size_t>> subgroups;
};

AbelianFactorData factor_data(const AbelianGroupIF& g, std::size_t cap) {
  const CyclicSum s = g.as_cyclic_sum();
  return {g, abelian_epicenter(s, cap).members, enumerate_subgroups(s)};
}

// Checks Z*(∏G) ∩ ∏N = ∏(Z*(G_i) ∩ N_i) for every choice of subgroups.
std::pair<std::size_t, std::size_t> multi_pair_sweep(const std::vector<const AbelianFactorData*>& fs, std::size_t cap) {
  std::vector<std::size_t> moduli;
  std::size_t order = 1;
  for (const auto* f : fs) {
    moduli = concat(moduli, f->group.factors());
    order *= f->group.order();
  }
  const CyclicSum prod(moduli);
  std::vector<char> in(order, 0);
  for (std::size_t x : abelian_epicenter(prod, cap).members) in[x] = 1;

  std::vector<std::vector<char>> local;
  for (const auto* f : fs) {
    std::vector<char> v(f->group.order(), 0);
    for (std::size_t x : f->epicenter) v[x] = 1;
    local.push_back(std::move(v));
  }

  std::size_t checked = 0, bad = 0;
  std::vector<std::size_t> choice(fs.size(), 0);
  while (true) {
    // Walk N1 x ... x Nk and compare membership on both sides.
    bool ok = true;
    std::vector<std::size_t> pos(fs.size(), 0);
    while (ok) {
      std::size_t idx = 0;
      bool rhs = true;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        const std::size_t x = fs[i]->subgroups[choice[i]][pos[i]];
        idx = idx * fs[i]->group.order() + x;
        rhs = rhs && local[i][x];
      }
      if (static_cast<bool>(in[idx]) != rhs) ok = false;
      std::size_t i = fs.size();
      while (i-- > 0) {
        if (++pos[i] < fs[i]->subgroups[choice[i]].size()) break;
        pos[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
    ++checked;
    if (!ok) ++bad;
    std::size_t i = fs.size();
    while (i-- > 0) {
      if (++choice[i] < fs[i]->subgroups.size()) break;
      choice[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return {checked, bad};
}

void suite_pairs(Suite& suite, const Command& cmd) {
  EngineOptions opts = engine_options(cmd);
  {
    const auto start = Clock::now();
    const Subject g = load("cyclic:6 x cyclic:6", cmd);
    const PairOfGroups p(g, parse_subgroup_spec(g, "gens:(2,0);(0,2)"), "gens:(2,0);(0,2)");
    const CapabilityReport r = is_capable_pair(p, opts);
    suite.add("pair capability example", "(cyclic:6 x cyclic:6, gens:(2,0);(0,2))", r.verdict.capable(),
              "expected capable, got " + to_string(r.verdict.status), elapsed_ms(start));
  }
  {
    const auto start = Clock::now();
    const Subject g = load("cyclic:6", cmd);
    const PairOfGroups p(g, parse_subgroup_spec(g, "gens:(2)"), "gens:(2)");
    const CapabilityReport r = is_capable_pair(p, opts);
    suite.add("pair capability example", "(cyclic:6, gens:(2))",
              r.verdict.status == CapabilityVerdict::Status::NotCapable,
              "expected not_capable, got " + to_string(r.verdict.status), elapsed_ms(start));
  }

  // Capable groups give capable pairs for every normal subgroup.
  for (const std::string& spec : catalog()) {
    const auto start = Clock::now();
    const Subject g = load(spec, cmd);
    const Epicenter z = epicenter(g, opts);
    const FiniteGroup& t = g.require_table();
    std::set<std::vector<std::size_t>> normals;
    for (Element a = 0; a < t.order(); ++a)
      for (Element b = a; b < t.order(); ++b) {
        const Element gens[] = {a, b};
        const Subgroup n = subgroup_closure(t, gens);
        if (n.is_normal()) normals.insert({n.members().begin(), n.members().end()});
      }
    bool ok = true;
    for (const auto& n : normals) {
      const PairOfGroups p(g, n);
      const bool pair_capable = exterior_g_center(p, z).size() == 1;
      if (z.is_trivial() && !pair_capable) ok = false;
    }
    suite.add("capable group gives capable pairs", spec, ok,
              std::to_string(normals.size()) + " normal subgroups, |Z*(G)| = " + std::to_string(z.members.size()),
              elapsed_ms(start));
  }

  // Coprime abelian pair products.
  std::map<std::vector<std::size_t>, AbelianFactorData> cache;
  auto data = [&](const AbelianGroupIF& g) -> const AbelianFactorData& {
    auto it = cache.find(g.factors());
    if (it == cache.end()) it = cache.emplace(g.factors(), factor_data(g, opts.abelian_cap)).first;
    return it->second;
  };
  const auto groups = abelian_groups_up_to(cmd.abelian_order / 2);
  for (const AbelianGroupIF& a : groups)
    for (const AbelianGroupIF& b : groups) {
      if (a.order() * b.order() > cmd.abelian_order || std::gcd(a.order(), b.order()) != 1) continue;
      const auto start = Clock::now();
      const auto [checked, bad] = multi_pair_sweep({&data(a), &data(b)}, opts.abelian_cap);
      suite.add("coprime pair product equality", pair_name(a.to_string(), b.to_string()), bad == 0,
                std::to_string(checked) + " subgroup pairs, " + std::to_string(bad) + " mismatches", elapsed_ms(start));
    }

  // Three factors of orders 4, 9 and 25.
  for (const AbelianGroupIF& a : abelian_groups_of_order(4))
    for (const AbelianGroupIF& b : abelian_groups_of_order(9))
      for (const AbelianGroupIF& c : abelian_groups_of_order(25)) {
        const auto start = Clock::now();
        const auto [checked, bad] = multi_pair_sweep({&data(a), &data(b), &data(c)}, opts.abelian_cap);
        suite.add("three-factor pair product equality",
                  "(" + a.to_string() + ", " + b.to_string() + ", " + c.to_string() + ")", bad == 0,
                  std::to_string(checked) + " subgroup triples, " + std::to_string(bad) + " mismatches",
                  elapsed_ms(start));
      }
}

void suite_engines(Suite& suite, const Command& cmd) {
  const std::size_t bound = cmd.max_order;
  EngineOptions bar = engine_options(cmd);
  bar.engine = Engine::Bar;
  bar.homology_cap = std::max(bar.homology_cap, bound);
  EngineOptions ab = bar;
  ab.engine = Engine::Abelian;
  for (std::size_t n = 1; n <= bound; ++n)
    for (const AbelianGroupIF& a : abelian_groups_of_order(n)) {
      const auto start = Clock::now();
      const Subject s = Subject::from_cyclic_sum(a.as_cyclic_sum(), bound);
      const auto m_bar =
          to_sizes(schur_multiplier(s.require_table(), {BarBasis::Normalized, bar.homology_cap}).h2().torsion());
      const auto m_ab = to_sizes(abelian_multiplier(a).torsion());
      suite.add("multiplier agreement", s.spec(), m_bar == m_ab,
                "homology " + format_factors(m_bar) + ", exterior square " + format_factors(m_ab), elapsed_ms(start));
      const auto start2 = Clock::now();
      const Epicenter zb = epicenter(s, bar);
      const Epicenter za = epicenter(s, ab);
      suite.add("epicenter agreement", s.spec(), zb.members == za.members,
                "homology |Z*| = " + std::to_string(zb.members.size()) + ", abelian |Z*| = " +
                    std::to_string(za.members.size()),
                elapsed_ms(start2));
    }
}

void suite_classifier(Suite& suite, const Command& cmd) {
  using S = CapabilityVerdict::Status;
  // Monotonicity in the class at t = 1.
  {
    const auto start = Clock::now();
    std::size_t checked = 0, bad = 0;
    std::string first_bad;
    for (const AbelianGroupIF& a : enumerate_invariant_factor_lists(4, 12))
      for (std::size_t c = 2; c <= 6; ++c) {
        ++checked;
        const auto hi = polynilpotent_capable(a, VarietyDescriptor::nilpotent(c));
        const auto lo = polynilpotent_capable(a, VarietyDescriptor::nilpotent(c - 1));
        if (hi.status == S::Capable && lo.status != S::Capable) {
          if (!bad) first_bad = a.to_string() + " at c = " + std::to_string(c);
          ++bad;
        }
      }
    suite.add("classifier monotonicity in c", "k <= 4, n_i <= 12, c = 2..6", bad == 0,
              std::to_string(checked) + " instances" + (bad ? ", first failure " + first_bad : ""), elapsed_ms(start));
  }

  struct Expect {
    std::vector<std::size_t> factors;
    std::string variety;
    S status;
  };
  std::vector<Expect> cases = {
      {{4, 4, 4}, "PN:1,2", S::Capable},
      {{4, 4}, "N:3", S::Capable},
      {{4, 2}, "PN:1,1", S::Undetermined},
  };
  for (const char* v : {"abelian", "N:1", "N:2", "N:3", "PN:1,1", "PN:1,2", "PN:2,1", "PN:2,2,3"})
    cases.push_back({{4}, v, S::NotCapable});
  for (std::size_t n = 2; n <= 6; ++n) {
    cases.push_back({{n, n}, "N:1", S::Capable});
    cases.push_back({{n, n, n, n}, "N:1", S::Capable});
  }
  for (const Expect& e : cases) {
    const AbelianGroupIF a(e.factors);
    const CapabilityVerdict v = polynilpotent_capable(a, parse_variety(e.variety));
    suite.add("rule table instance", "(" + a.to_string() + ", " + e.variety + ")", v.status == e.status,
              "expected " + to_string(e.status) + ", got " + to_string(v.status) + " via " + v.criterion);
  }
  for (std::size_t n = 2; n <= 6; ++n) {
    const AbelianGroupIF half({n, n});
    const AbelianGroupIF sum({n, n, n, n});
    const auto va = polynilpotent_capable(half, VarietyDescriptor::nilpotent(1));
    const auto vs = polynilpotent_capable(sum, VarietyDescriptor::nilpotent(1));
    const bool ok = va.capable() && vs.capable();
    suite.add("capable summands without coprimality", "(" + half.to_string() + " + " + half.to_string() + ")", ok,
              "summands " + to_string(va.status) + ", sum " + to_string(vs.status));
    if (ok) suite.witness(sum.to_string(), "capable sum of two capable non-coprime summands " + half.to_string());
  }

  // Baer criterion against the Λ² epicenter.
  const std::size_t bound = cmd.max_order;
  std::size_t checked = 0, bad = 0;
  std::string first_bad;
  const auto start = Clock::now();
  for (std::size_t n = 1; n <= bound; ++n)
    for (const AbelianGroupIF& a : abelian_groups_of_order(n)) {
      ++checked;
      const bool trivial = abelian_epicenter(a).is_trivial();
      const bool baer = baer_capable(a).capable();
      const auto rule = polynilpotent_capable(a, VarietyDescriptor::abelian());
      if (trivial != baer || rule.capable() != trivial || rule.status == S::Undetermined) {
        if (!bad) first_bad = a.to_string();
        ++bad;
      }
    }
  if (bound > 0)
    suite.add("Baer criterion matches epicenter", "abelian groups of order <= " + std::to_string(bound), bad == 0,
              std::to_string(checked) + " groups" + (bad ? ", first failure " + first_bad : ""), elapsed_ms(start));
}

// ------------------------------------------------------------------ text

std::string pad(const std::string& s, std::size_t w) {
  std::size_t len = 0;
  for (unsigned char c : s) len += (c & 0xC0) != 0x80;  // count code points
  return s + std::string(w > len ? w - len : 0, ' ');
}

std::size_t width(const std::string& s) {
  std::size_t len = 0;
  for (unsigned char c : s) len += (c & 0xC0) != 0x80;
  return len;
}

std::string table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> w;
  for (const auto& h : header) w.push_back(width(h));
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], width(r[i]));
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& r) {
    std::string s;
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "  " : "") + (i + 1 < r.size() ? pad(r[i], w[i]) : r[i]);
    os << s << '\n';
  };
  line(header);
  std::vector<std::string> rule;
  for (std::size_t x : w) rule.push_back(std::string(x, '-'));
  line(rule);
  for (const auto& r : rows) line(r);
  return os.str();
}

std::string text_of(const json& v) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string factors_text(const json& group) {
  if (group.is_null()) return "-";
  return format_factors(group.at("invariant_factors").get<std::vector<std::size_t>>());
}

}  // namespace

// -------------------------------------------------------------------- public

std::string to_string(Verb v) {
  switch (v) {
    case Verb::Analyze: return "analyze";
    case Verb::Capability: return "capability";
    case Verb::Pair: return "pair";
    case Verb::Epicenter: return "epicenter";
    case Verb::Multiplier: return "multiplier";
    case Verb::Verify: break;
  }
  return "verify";
}

Command parse_command(const std::vector<std::string>& argv) {
  CLI::App app{"Capability of finite groups: epicenters, Schur multipliers, pairs and varieties.", "capkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CAPKIT_VERSION);

  std::vector<std::string> specs;
  std::string suite, subgroup, variety = "abelian", engine = "auto", format = "text", output;
  std::size_t max_order = kDefaultMaxOrder, abelian_order = 100;
  bool force = false, no_timing = false;

  struct VerbSpec {
    Verb verb;
    const char* name;
    const char* help;
  };
  const VerbSpec verbs[] = {
      {Verb::Analyze, "analyze", "Structure, multiplier, epicenter and capability of groups"},
      {Verb::Capability, "capability", "Capability (optionally for a variety) of groups"},
      {Verb::Pair, "pair", "Capability of a pair (G, N)"},
      {Verb::Epicenter, "epicenter", "Epicenter Z*(G) of groups"},
      {Verb::Multiplier, "multiplier", "Schur multiplier M(G) of groups"},
      {Verb::Verify, "verify", "Run a verification sweep: products, pairs, engines or classifier"},
  };
  std::map<const CLI::App*, Verb> verb_of;
  std::vector<CLI::Option*> max_order_opts;
  for (const VerbSpec& v : verbs) {
    CLI::App* sub = app.add_subcommand(v.name, v.help);
    verb_of[sub] = v.verb;
    if (v.verb == Verb::Verify) {
      sub->add_option("suite", suite, "products | pairs | engines | classifier")->required();
      sub->add_option("--abelian-order", abelian_order, "Order bound for the abelian sweeps (default 100)");
    } else {
      sub->add_option("spec", specs, "Group spec, e.g. \"cyclic:6 x cyclic:6\"")->required();
      sub->add_option("--variety", variety, "abelian | N:<c> | PN:<c1,c2,...>");
    }
    if (v.verb == Verb::Pair)
      sub->add_option("--subgroup", subgroup, "N as whole | trivial | gens:(a,b);(c,d)")->required();
    sub->add_option("--engine", engine, "auto | bar | abelian");
    max_order_opts.push_back(
        sub->add_option("--max-order", max_order, "Cayley table cap; for verify, the sweep bound"));
    sub->add_flag("--force", force, "Raise the homology cap to --max-order");
    sub->add_option("--format", format, "json | text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--output", output, "Write the report to a file");
    sub->add_flag("--no-timing", no_timing, "Report ms = 0 for byte-stable output");
  }

  if (!argv.empty() && !argv.front().starts_with("-") &&
      std::none_of(std::begin(verbs), std::end(verbs), [&](const VerbSpec& v) { return argv.front() == v.name; }))
    throw ParseError("unknown verb '" + argv.front() + "'", 0,
                     "expected analyze, capability, pair, epicenter, multiplier or verify");

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested{std::string(CAPKIT_VERSION) + "\n"};
  } catch (const CLI::ParseError& e) {
    const std::string what = e.what();
    std::size_t position = 0;
    for (std::size_t i = 0; i < argv.size(); ++i)
      if (!argv[i].empty() && what.find(argv[i]) != std::string::npos) {
        position = i;
        break;
      }
    throw ParseError(what, position, "run `capkit --help` for usage");
  }

  Command cmd;
  for (CLI::App* sub : app.get_subcommands()) cmd.verb = verb_of.at(sub);
  cmd.subjects = cmd.verb == Verb::Verify ? std::vector<std::string>{suite} : specs;
  cmd.subgroup = subgroup;
  cmd.variety = parse_variety(variety);
  cmd.engine = parse_engine(engine);
  cmd.max_order = max_order;
  cmd.max_order_given = std::any_of(max_order_opts.begin(), max_order_opts.end(),
                                    [](const CLI::Option* o) { return o->count() > 0; });
  cmd.abelian_order = abelian_order;
  cmd.force = force;
  cmd.format = format == "json" ? Format::Json : Format::Text;
  cmd.output = output;
  cmd.timing = !no_timing;

  if (cmd.verb != Verb::Verify)
    for (const std::string& s : cmd.subjects) parse_group_spec(s);
  if (cmd.verb == Verb::Pair && cmd.subjects.size() != 1)
    throw ParseError("pair takes exactly one group spec", 1, "capkit pair \"<spec>\" --subgroup \"gens:(...)\"");
  if (cmd.verb == Verb::Pair && !cmd.variety.is_abelian_variety())
    throw ParseError("pairs are decided for the abelian variety only", 1, "drop --variety");
  if (cmd.verb == Verb::Verify) {
    static const std::vector<std::string> suites = {"products", "pairs", "engines", "classifier"};
    if (std::find(suites.begin(), suites.end(), suite) == suites.end())
      throw ParseError("unknown suite '" + suite + "'", 1, "expected products, pairs, engines or classifier");
    if (!cmd.max_order_given) {
      if (suite == "engines")
        cmd.max_order = 16;
      else if (suite == "classifier")
        cmd.max_order = 64;
    }
  }
  return cmd;
}

EngineOptions engine_options(const Command& cmd) {
  EngineOptions o;
  o.engine = cmd.engine;
  if (cmd.force) o.homology_cap = std::max(o.homology_cap, cmd.max_order);
  return o;
}

ReportDocument verify_suite(const std::string& name, const Command& cmd) {
  ReportDocument doc{document(cmd), kExitOk};
  Suite suite(cmd.timing);
  if (name == "products")
    suite_products(suite, cmd);
  else if (name == "pairs")
    suite_pairs(suite, cmd);
  else if (name == "engines")
    suite_engines(suite, cmd);
  else if (name == "classifier")
    suite_classifier(suite, cmd);
  else
    throw ParseError("unknown suite '" + name + "'", 0, "expected products, pairs, engines or classifier");
  suite.fill(doc.body);
  if (suite.failures() > 0) doc.exit_code = kExitFailures;
  return doc;
}

ReportDocument run(const Command& cmd) {
  ReportDocument doc{document(cmd), kExitOk};
  auto fail = [&](int code, const std::string& kind, const std::string& message, json extra = json::object()) {
    doc.exit_code = code;
    extra["kind"] = kind;
    extra["message"] = message;
    doc.body["error"] = extra;
  };
  try {
    if (cmd.verb == Verb::Verify) return verify_suite(cmd.subjects.front(), cmd);
    const EngineOptions opts = engine_options(cmd);
    bool undetermined = false;
    for (const std::string& spec : cmd.subjects) {
      const Subject s = load(spec, cmd);
      json entry;
      switch (cmd.verb) {
        case Verb::Capability: entry = report_json(varietal_capability(s, cmd.variety, opts), cmd.timing); break;
        case Verb::Epicenter: entry = epicenter_entry(s, opts, cmd.timing); break;
        case Verb::Multiplier: entry = multiplier_entry(s, opts, cmd.timing); break;
        case Verb::Analyze: entry = analyze_entry(s, cmd, opts); break;
        case Verb::Pair: {
          const PairOfGroups p(s, parse_subgroup_spec(s, cmd.subgroup), cmd.subgroup);
          const CapabilityReport r = is_capable_pair(p, opts);
          entry = report_json(r, cmd.timing);
          entry["exterior_center"] = entry["epicenter"];
          entry["epicenter"] = nullptr;
          entry["subgroup"] = cmd.subgroup;
          entry["subgroup_order"] = p.members().size();
          break;
        }
        case Verb::Verify: break;
      }
      if (entry.contains("verdict") && entry["verdict"] == "undetermined") undetermined = true;
      doc.body["subjects"].push_back(std::move(entry));
    }
    if (undetermined) doc.exit_code = kExitUndetermined;
  } catch (const ParseError& e) {
    fail(kExitParse, "parse", e.what(), {{"position", e.position()}, {"hint", e.hint()}});
  } catch (const InvalidInput& e) {
    fail(kExitParse, "invalid", e.what());
  } catch (const CapExceeded& e) {
    fail(kExitCap, "cap", e.what());
  } catch (const EngineMismatch& e) {
    fail(kExitFailures, "mismatch", e.what());
  }
  return doc;
}

std::string render_json(const ReportDocument& doc) { return doc.body.dump(2) + "\n"; }

std::string render_text(const ReportDocument& doc) {
  const json& b = doc.body;
  std::ostringstream os;
  if (b.contains("error")) {
    const json& e = b["error"];
    os << "error: " << e["message"].get<std::string>() << '\n';
    if (e.contains("hint") && !e["hint"].get<std::string>().empty()) os << "hint: " << e["hint"].get<std::string>() << '\n';
    return os.str();
  }
  const std::string verb = b["command"]["verb"];
  std::vector<std::vector<std::string>> rows;
  if (verb == "verify") {
    for (const json& e : b["subjects"])
      rows.push_back({e["passed"].get<bool>() ? "PASS" : "FAIL", e["check"], e["spec"], e["detail"]});
    os << table({"result", "check", "instance", "detail"}, rows);
    for (const json& w : b["witnesses"]) os << "witness: " << w["spec"].get<std::string>() << "  " << w["detail"].get<std::string>() << '\n';
    os << b["instances"].get<std::size_t>() << " checks, " << b["failures"].get<std::size_t>() << " failures\n";
    return os.str();
  }
  if (verb == "multiplier") {
    for (const json& e : b["subjects"])
      rows.push_back({e["spec"], text_of(e["order"]), e["engine"], factors_text(e["multiplier"])});
    os << table({"spec", "order", "engine", "M(G)"}, rows);
  } else if (verb == "pair") {
    for (const json& e : b["subjects"])
      rows.push_back({e["spec"], e["subgroup"], text_of(e["order"]), e["engine"], factors_text(e["exterior_center"]),
                      e["verdict"], e["criterion"]});
    os << table({"spec", "subgroup", "order", "engine", "Z^(N)", "verdict", "criterion"}, rows);
  } else {
    for (const json& e : b["subjects"])
      rows.push_back({e["spec"], text_of(e["order"]), e["engine"], e["variety"], factors_text(e["epicenter"]),
                      e["verdict"], e["criterion"]});
    os << table({"spec", "order", "engine", "variety", "Z*(G)", "verdict", "criterion"}, rows);
  }
  for (const json& e : b["subjects"]) {
    if (e.contains("details")) {
      os << '\n' << e["spec"].get<std::string>() << '\n';
      for (const auto& [k, v] : e["details"].items()) {
        std::string val = v.is_array() ? format_factors(v.get<std::vector<std::size_t>>()) : text_of(v);
        if (v.is_object()) val = factors_text(v);
        os << "  " << pad(k, 18) << val << '\n';
      }
    }
    for (const json& n : e["notes"]) os << "note: " << e["spec"].get<std::string>() << ": " << n.get<std::string>() << '\n';
  }
  return os.str();
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  Command cmd;
  try {
    cmd = parse_command(args);
  } catch (const HelpRequested& h) {
    std::cout << h.text;
    return kExitOk;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (!e.hint().empty()) std::cerr << "hint: " << e.hint() << '\n';
    return kExitParse;
  }
  const ReportDocument doc = run(cmd);
  const std::string out = cmd.format == Format::Json ? render_json(doc) : render_text(doc);
  if (!cmd.output.empty()) {
    std::ofstream f(cmd.output);
    if (!f) {
      std::cerr << "error: cannot write " << cmd.output << '\n';
      return kExitParse;
    }
    f << out;
  } else if (doc.body.contains("error") && cmd.format == Format::Text) {
    std::cerr << out;
  } else {
    std::cout << out;
  }
  return doc.exit_code;
}

}  // namespace capkit::cli
