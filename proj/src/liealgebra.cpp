#include "vfkit/liealgebra.hpp"

#include "vfkit/distribution.hpp"
#include "vfkit/modalgebra.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace vfkit {

std::string BracketWord::str(const std::vector<VectorField>& family) const {
  if (letters.empty()) return "";
  std::string s = family.at(letters.front()).name();
  for (std::size_t k = 1; k < letters.size(); ++k) s = "[" + family.at(letters[k]).name() + "," + s + "]";
  return s;
}

std::vector<VectorField> LieFiltration::fields_up_to(int depth) const {
  std::vector<VectorField> out;
  for (const auto& e : entries)
    if (e.word.depth() <= depth) out.push_back(e.field);
  return out;
}

namespace {

// Tracks the rational span of the words generated so far, in coordinates
// given by (component, term shape). A bracket of a combination of words is the
// same combination of brackets, so dropping dependent words loses nothing.
class SpanTracker {
public:
  /// Adds f if it is independent of everything added before.
  bool add(const VectorField& f) {
    std::map<int, Rational> v;
    for (std::size_t c = 0; c < f.dim(); ++c)
      for (const auto& t : f[c].terms()) v[column(c, t)] += t.coef;
    std::erase_if(v, [](const auto& kv) { return kv.second == 0; });
    while (!v.empty()) {
      auto lead = v.begin();
      auto it = pivots_.find(lead->first);
      if (it == pivots_.end()) {
        const Rational inv = 1 / lead->second;
        for (auto& [col, x] : v) x *= inv;
        pivots_.emplace(lead->first, std::move(v));
        return true;
      }
      const Rational c = lead->second;
      for (const auto& [col, x] : it->second) {
        Rational& y = v[col];
        y -= c * x;
        if (y == 0) v.erase(col);
      }
    }
    return false;
  }

private:
  struct KeyLess {
    bool operator()(const std::pair<std::size_t, Term>& a, const std::pair<std::size_t, Term>& b) const {
      if (a.first != b.first) return a.first < b.first;
      return compare_terms_by_key(a.second, b.second) < 0;
    }
  };

  int column(std::size_t comp, const Term& t) {
    Term key = t;
    key.coef = 1;
    auto [it, inserted] = columns_.try_emplace({comp, std::move(key)}, static_cast<int>(columns_.size()));
    return it->second;
  }

  std::map<std::pair<std::size_t, Term>, int, KeyLess> columns_;
  std::map<int, std::map<int, Rational>> pivots_;
};

std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Values of the given fields at p, skipping those undefined there.
std::vector<FieldValue> values_at(const std::vector<VectorField>& fields, const Point& p) {
  std::vector<FieldValue> out;
  for (const auto& f : fields)
    if (f.domain().contains(p)) out.push_back(evaluate(f, p));
  return out;
}

} // namespace

LieFiltration filtration(const std::vector<VectorField>& family, const std::vector<Point>& samples,
                         FiltrationOptions options) {
  if (family.empty()) throw std::invalid_argument("filtration of an empty family");
  if (options.depth_cap < 1 || options.depth_cap > kMaxDepthCap)
    throw std::invalid_argument("depth cap must lie in 1.." + std::to_string(kMaxDepthCap));
  const std::size_t n = family.front().dim();
  for (const auto& x : family)
    if (x.dim() != n) throw std::invalid_argument("family fields have different dimensions");

  LieFiltration out;
  out.family = family;
  out.depth_cap = options.depth_cap;
  out.samples = samples;
  out.module_degree = options.module_degree;

  const bool polynomial =
      std::all_of(family.begin(), family.end(), [](const VectorField& x) { return x.is_polynomial(); });

  SpanTracker span;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!span.add(family[i])) continue;
    out.entries.push_back({BracketWord{{i}}, family[i]});
  }
  out.generated_depth = 1;

  bool overflow = false;
  bool skipped_check = false;
  std::size_t frontier_begin = 0;
  while (!out.certified && out.generated_depth < options.depth_cap) {
    const std::size_t frontier_end = out.entries.size();
    const std::size_t previous = frontier_end;
    for (std::size_t i = 0; i < family.size() && !overflow; ++i) {
      for (std::size_t w = frontier_begin; w < frontier_end; ++w) {
        VectorField b = lie_bracket(family[i], out.entries[w].field);
        if (!span.add(b)) continue;
        BracketWord word = out.entries[w].word;
        word.letters.push_back(i);
        out.entries.push_back({std::move(word), std::move(b)});
        if (out.entries.size() > options.max_words) {
          overflow = true;
          break;
        }
      }
    }
    ++out.generated_depth;
    frontier_begin = previous;
    if (overflow) break;

    const int k = out.generated_depth - 1;
    if (out.entries.size() == previous) {
      // Every new word is a rational combination of earlier ones.
      out.certified = true;
      out.certified_depth = k;
      break;
    }
    if (!polynomial) continue;
    std::vector<VectorField> lower;
    for (std::size_t e = 0; e < previous; ++e) lower.push_back(out.entries[e].field);
    std::vector<VectorField> fresh;
    for (std::size_t e = previous; e < out.entries.size(); ++e) fresh.push_back(out.entries[e].field);
    const std::size_t unknowns = lower.size() * binomial(n + static_cast<std::size_t>(options.module_degree), n);
    if (unknowns > 6000) {
      skipped_check = true;
      continue;
    }
    if (module_contained_bounded(fresh, lower, options.module_degree)) {
      out.certified = true;
      out.certified_depth = k;
    }
  }

  if (out.certified) {
    out.note = "stable from depth " + std::to_string(out.certified_depth);
  } else {
    out.note = "capped at depth " + std::to_string(out.generated_depth) + "; ranks are lower bounds";
    if (overflow) out.note += " (word limit reached)";
    else if (!polynomial) out.note += " (no certificate for non-polynomial families)";
    else if (skipped_check) out.note += " (module check too large)";
  }

  for (const auto& p : samples) {
    std::vector<int> seq;
    for (int k = 1; k <= out.generated_depth; ++k) {
      auto vals = values_at(out.fields_up_to(k), p);
      seq.push_back(vals.empty() ? 0 : value_rank(vals));
    }
    out.ranks.push_back(std::move(seq));
  }
  return out;
}

int lie_rank_at(const std::vector<VectorField>& family, const Point& p, int depth_cap) {
  FiltrationOptions o;
  o.depth_cap = depth_cap;
  return filtration(family, {p}, o).rank(0);
}

std::vector<VectorField> derived_algebra(const std::vector<VectorField>& family, int depth_cap) {
  FiltrationOptions o;
  o.depth_cap = depth_cap;
  auto f = filtration(family, {}, o);
  std::vector<VectorField> out;
  for (const auto& e : f.entries)
    if (e.word.depth() >= 2) out.push_back(e.field);
  return out;
}

InvolutivityReport involutive_pointwise(const std::vector<VectorField>& family,
                                        const std::vector<Point>& samples) {
  InvolutivityReport out;
  out.mode = "pointwise";
  std::vector<std::tuple<std::size_t, std::size_t, VectorField>> brackets;
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      VectorField b = lie_bracket(family[i], family[j]);
      if (!b.is_zero()) brackets.emplace_back(i, j, std::move(b));
    }
  for (const auto& p : samples) {
    auto fibre = values_at(family, p);
    const int r = fibre.empty() ? 0 : value_rank(fibre);
    bool ok = true;
    for (const auto& [i, j, b] : brackets) {
      if (!b.domain().contains(p)) continue;
      auto with = fibre;
      with.push_back(evaluate(b, p));
      if (value_rank(with) != r) {
        ok = false;
        out.involutive = false;
        out.witnesses.push_back({i, j, p});
      }
    }
    if (ok) out.passing.push_back(p);
  }
  return out;
}

InvolutivityReport involutive_module(const std::vector<VectorField>& family, int degree) {
  InvolutivityReport out;
  out.mode = "module";
  out.degree = degree;
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      VectorField b = lie_bracket(family[i], family[j]);
      if (b.is_zero()) continue;
      if (!member_bounded({b, family, degree}).member) {
        out.involutive = false;
        out.witnesses.push_back({i, j, std::nullopt});
      }
    }
  return out;
}

FixedTimeRank fixed_time_ideal_rank(const LieFiltration& f, const Point& p) {
  std::vector<FieldValue> ideal;
  std::optional<FieldValue> first;
  for (const auto& x : f.family) {
    if (!x.domain().contains(p)) continue;
    FieldValue v = evaluate(x, p);
    if (!first) {
      first = v;
      continue;
    }
    FieldValue d;
    d.approx = v.approx - first->approx;
    if (v.exact && first->exact) {
      RationalVector e(v.exact->size());
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = (*v.exact)[k] - (*first->exact)[k];
      d.exact = std::move(e);
    }
    ideal.push_back(std::move(d));
  }
  std::vector<FieldValue> all;
  for (const auto& e : f.entries) {
    if (!e.field.domain().contains(p)) continue;
    FieldValue v = evaluate(e.field, p);
    if (e.word.depth() >= 2) ideal.push_back(v);
    all.push_back(std::move(v));
  }

  FixedTimeRank out;
  out.ideal_rank = ideal.empty() ? 0 : value_rank(ideal);
  out.lie_rank = all.empty() ? 0 : value_rank(all);
  out.codim = out.lie_rank - out.ideal_rank;
  if (out.codim < 0 || out.codim > 1)
    throw std::logic_error("fixed-time ideal has codimension " + std::to_string(out.codim) + " at " +
                           p.str());
  return out;
}

FixedTimeRank fixed_time_ideal_rank(const std::vector<VectorField>& family, const Point& p,
                                    int depth_cap) {
  FiltrationOptions o;
  o.depth_cap = depth_cap;
  return fixed_time_ideal_rank(filtration(family, {}, o), p);
}

} // namespace vfkit
