#include "capkit/subject.hpp"

#include "capkit/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace capkit {

Subject::Subject() {
  Factor f;
  f.spec = "cyclic:1";
  f.moduli = {1};
  f.abelian_structured = true;
  factors_.push_back(std::move(f));
  finish(kDefaultMaxOrder);
}

Subject Subject::from_spec(const GroupSpec& spec, std::size_t max_order) {
  if (spec.factors.empty()) return Subject();
  Subject s;
  s.factors_.clear();
  s.table_.reset();
  for (const FactorSpec& fs : spec.factors) {
    Factor f;
    f.spec = fs.to_string();
    f.abelian_structured = fs.abelian_structured();
    if (f.abelian_structured) {
      f.moduli = fs.moduli();
      f.order = fs.order();
    } else {
      f.group = construct_factor(fs, max_order);
      f.order = f.group->order();
    }
    s.factors_.push_back(std::move(f));
  }
  s.finish(max_order);
  return s;
}

Subject Subject::parse(std::string_view spec, std::size_t max_order) {
  return from_spec(parse_group_spec(spec), max_order);
}

Subject Subject::from_group(FiniteGroup g, std::string label) {
  Subject s;
  s.factors_.clear();
  Factor f;
  f.spec = std::move(label);
  f.order = g.order();
  s.table_ = g;
  f.group = std::move(g);
  s.factors_.push_back(std::move(f));
  s.finish(s.factors_.front().order);
  return s;
}

Subject Subject::from_cyclic_sum(const CyclicSum& a, std::size_t max_order) {
  if (a.rank() == 0) return Subject();
  GroupSpec spec;
  FactorSpec f;
  f.kind = a.rank() == 1 ? FactorSpec::Kind::Cyclic : FactorSpec::Kind::Abelian;
  f.params = a.moduli();
  spec.factors.push_back(std::move(f));
  return from_spec(spec, max_order);
}

Subject Subject::product(const Subject& a, const Subject& b, std::size_t max_order) {
  Subject s;
  s.factors_ = a.factors_;
  s.factors_.insert(s.factors_.end(), b.factors_.begin(), b.factors_.end());
  s.table_.reset();
  if (a.table_ && b.table_ && a.order_ * b.order_ <= max_order) s.table_ = direct_product(*a.table_, *b.table_, max_order).group;
  s.finish(max_order);
  return s;
}

void Subject::finish(std::size_t max_order) {
  spec_.clear();
  order_ = 1;
  radices_.clear();
  residue_.clear();
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Factor& f = factors_[i];
    spec_ += (i ? " x " : "") + f.spec;
    if (f.order != 0 && order_ > (std::size_t{1} << 40) / f.order) throw CapExceeded("group order exceeds 2^40");
    order_ *= f.order;
    if (f.abelian_structured) {
      for (std::size_t m : f.moduli) {
        radices_.push_back(m);
        residue_.push_back(1);
      }
    } else {
      radices_.push_back(f.order);
      residue_.push_back(0);
    }
  }

  if (!table_ && order_ <= max_order) {
    auto factor_table = [&](const Factor& f) {
      return f.group ? *f.group : abelian_group(f.moduli, max_order);
    };
    FiniteGroup t = factor_table(factors_.front());
    for (std::size_t i = 1; i < factors_.size(); ++i) t = direct_product(t, factor_table(factors_[i]), max_order).group;
    table_ = std::move(t);
  }

  abelian_.reset();
  to_abelian_.clear();
  from_abelian_.clear();
  const bool structured =
      std::all_of(factors_.begin(), factors_.end(), [](const Factor& f) { return f.abelian_structured; });
  if (structured) {
    abelian_ = CyclicSum(radices_);
  } else if (table_ && table_->is_abelian()) {
    const Subgroup whole = Subgroup::whole(*table_);
    const AbelianSubgroupPresentation p = abelian_presentation(whole);
    std::vector<std::size_t> moduli;
    for (const Int& t : p.group.torsion()) moduli.push_back(t.get_ui());
    abelian_ = CyclicSum(moduli);
    to_abelian_.resize(order_);
    from_abelian_.resize(order_);
    const auto members = whole.members();
    for (std::size_t i = 0; i < members.size(); ++i) {
      std::vector<long long> r;
      for (std::size_t c = 0; c < moduli.size(); ++c) r.push_back(p.coords[i][c].get_si());
      const std::size_t idx = abelian_->index(r);
      to_abelian_[members[i]] = idx;
      from_abelian_[idx] = members[i];
    }
  }
}

const FiniteGroup& Subject::require_table() const {
  if (!table_)
    throw CapExceeded("group " + spec_ + " of order " + std::to_string(order_) +
                      " exceeds the maximum order for a Cayley table (raise --max-order)");
  return *table_;
}

bool Subject::is_abelian() const { return abelian_.has_value() || (table_ && table_->is_abelian()); }

const CyclicSum& Subject::abelian() const {
  if (!abelian_) throw InvalidInput("group " + spec_ + " has no abelian view");
  return *abelian_;
}

std::size_t Subject::to_abelian(std::size_t index) const { return to_abelian_.empty() ? index : to_abelian_.at(index); }
std::size_t Subject::from_abelian(std::size_t index) const {
  return from_abelian_.empty() ? index : from_abelian_.at(index);
}

std::size_t Subject::coordinate_count() const { return radices_.size(); }

std::size_t Subject::element(std::span<const long long> coords) const {
  if (coords.size() != radices_.size())
    throw InvalidInput("element of " + spec_ + " needs " + std::to_string(radices_.size()) + " coordinates, got " +
                       std::to_string(coords.size()));
  std::size_t idx = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const auto m = static_cast<long long>(radices_[i]);
    long long c = coords[i];
    if (residue_[i])
      c = ((c % m) + m) % m;
    else if (c < 0 || c >= m)
      throw InvalidInput("coordinate " + std::to_string(i + 1) + " is a table index and must lie in [0, " +
                         std::to_string(m) + ")");
    idx = idx * radices_[i] + static_cast<std::size_t>(c);
  }
  return idx;
}

std::vector<std::size_t> Subject::coordinates(std::size_t index) const {
  std::vector<std::size_t> c(radices_.size());
  for (std::size_t i = radices_.size(); i-- > 0;) {
    c[i] = index % radices_[i];
    index /= radices_[i];
  }
  return c;
}

std::string Subject::format_element(std::size_t index) const {
  std::string s = "(";
  const auto c = coordinates(index);
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + ")";
}

std::vector<std::size_t> Subject::closure(std::span<const std::size_t> gens) const {
  if (abelian_) {
    std::vector<std::size_t> ag;
    for (std::size_t g : gens) ag.push_back(to_abelian(g));
    std::vector<std::size_t> out;
    for (std::size_t x : abelian_->closure(ag)) out.push_back(from_abelian(x));
    std::sort(out.begin(), out.end());
    return out;
  }
  const FiniteGroup& t = require_table();
  std::vector<Element> eg(gens.begin(), gens.end());
  const Subgroup sub = subgroup_closure(t, eg);
  return {sub.members().begin(), sub.members().end()};
}

bool Subject::is_normal(std::span<const std::size_t> members) const {
  if (is_abelian()) return true;
  const FiniteGroup& t = require_table();
  return Subgroup(t, std::vector<Element>(members.begin(), members.end())).is_normal();
}

std::vector<std::size_t> parse_subgroup_spec(const Subject& s, std::string_view text) {
  const std::string hint = "expected `whole`, `trivial` or `gens:(a,b,...);(c,d,...)`";
  if (text == "trivial") return {0};
  if (text == "whole") {
    std::vector<std::size_t> all(s.order());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
  }
  if (!text.starts_with("gens:")) throw ParseError("subgroup spec: unknown form", 0, hint);

  std::size_t pos = 5;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  std::vector<std::size_t> gens;
  while (true) {
    skip();
    if (pos >= text.size() || text[pos] != '(') throw ParseError("subgroup spec: expected '('", pos, hint);
    const std::size_t open = pos++;
    std::vector<long long> coords;
    while (true) {
      skip();
      long long v = 0;
      const char* first = text.data() + pos;
      auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
      if (ec != std::errc() || ptr == first) throw ParseError("subgroup spec: expected an integer", pos, hint);
      coords.push_back(v);
      pos = static_cast<std::size_t>(ptr - text.data());
      skip();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < text.size() && text[pos] == ')') {
        ++pos;
        break;
      }
      throw ParseError("subgroup spec: expected ',' or ')'", pos, hint);
    }
    if (coords.size() != s.coordinate_count())
      throw ParseError("subgroup spec: tuple has " + std::to_string(coords.size()) + " coordinates, " + s.spec() +
                           " needs " + std::to_string(s.coordinate_count()),
                       open, hint);
    try {
      gens.push_back(s.element(coords));
    } catch (const InvalidInput& e) {
      throw ParseError(std::string("subgroup spec: ") + e.what(), open, hint);
    }
    skip();
    if (pos == text.size()) break;
    if (text[pos] != ';') throw ParseError("subgroup spec: expected ';' between generators", pos, hint);
    ++pos;
  }
  return s.closure(gens);
}

}  // namespace capkit
