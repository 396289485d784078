#include "aplab/group_action.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "aplab/errors.hpp"

namespace aplab {

namespace {

Rational probe_tolerance() { return Rational::pow2(-30); }

bool valid_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (c == ' ' || c == '\t' || c == ';' || c == '#' || c == '\n' || c == '\r') return false;
  }
  return name != "e" && name != "1";
}

std::string canonical_key(const PLHomeo& h) {
  std::string key = h.left_slope().str() + "|" + h.right_slope().str() + "|" + h.function().intercept().str();
  for (const auto& p : h.breakpoints()) {
    key += "|" + p.x.str() + "," + p.y.str();
  }
  return key;
}

}  // namespace

// ---------------------------------------------------------------------------
// Map helpers

bool is_pl(const Map& m) { return std::holds_alternative<PLHomeo>(m); }

HomeoExpr to_expr(const Map& m) {
  if (const auto* h = std::get_if<PLHomeo>(&m)) return HomeoExpr::pl(*h);
  return std::get<HomeoExpr>(m);
}

Map compose(const Map& g, const Map& h) {
  if (is_pl(g) && is_pl(h)) return compose(std::get<PLHomeo>(g), std::get<PLHomeo>(h));
  return HomeoExpr::compose(to_expr(g), to_expr(h));
}

Map inverse(const Map& m) {
  if (const auto* h = std::get_if<PLHomeo>(&m)) return inverse(*h);
  return std::get<HomeoExpr>(m).inverse();
}

Interval eval(const Map& m, const Rational& x, const Rational& tol) {
  if (const auto* h = std::get_if<PLHomeo>(&m)) return Interval::point((*h)(x));
  return eval_enclosure(std::get<HomeoExpr>(m), x, tol);
}

const std::vector<Rational>& probe_points() {
  static const std::vector<Rational> probes = [] {
    std::vector<Rational> p;
    p.reserve(64);
    // Dense near the origin, geometric further out, both signs.
    for (int i = 0; i < 16; ++i) p.push_back(Rational(2 * i - 15, 8));
    for (int i = 0; i < 24; ++i) {
      const Rational mag = Rational(3, 2) * Rational(5, 4).pow(i);
      p.push_back(mag);
      p.push_back(-mag);
    }
    std::sort(p.begin(), p.end());
    return p;
  }();
  return probes;
}

bool same_map(const Map& f, const Map& g, const Rational& tol) {
  if (is_pl(f) && is_pl(g)) return std::get<PLHomeo>(f) == std::get<PLHomeo>(g);
  for (const auto& x : probe_points()) {
    const Interval a = eval(f, x, tol);
    const Interval b = eval(g, x, tol);
    if ((a.mid() - b.mid()).abs() > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Words

Word parse_word(std::string_view text) {
  std::istringstream in{std::string(text)};
  Word w;
  std::string tok;
  while (in >> tok) w.push_back(tok);
  if (w.size() == 1 && (w[0] == "e" || w[0] == "1")) w.clear();
  return w;
}

std::string to_string(const Word& w) {
  if (w.empty()) return "e";
  std::string out;
  for (const auto& s : w) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

// ---------------------------------------------------------------------------
// GroupAction

void GroupAction::add_generator(std::string name, Map map) {
  if (!valid_name(name)) throw ValidationError("invalid generator name '" + name + "'");
  auto it = std::lower_bound(gens_.begin(), gens_.end(), name,
                             [](const Generator& g, const std::string& n) { return g.name < n; });
  if (it != gens_.end() && it->name == name) throw ValidationError("duplicate generator '" + name + "'");
  gens_.insert(it, Generator{std::move(name), std::move(map)});
}

std::size_t GroupAction::index_of(std::string_view name) const {
  auto it = std::lower_bound(gens_.begin(), gens_.end(), name,
                             [](const Generator& g, std::string_view n) { return g.name < n; });
  if (it == gens_.end() || it->name != name) throw UnknownGenerator(std::string(name));
  return static_cast<std::size_t>(it - gens_.begin());
}

bool GroupAction::has_generator(std::string_view name) const {
  auto it = std::lower_bound(gens_.begin(), gens_.end(), name,
                             [](const Generator& g, std::string_view n) { return g.name < n; });
  return it != gens_.end() && it->name == name;
}

const Generator& GroupAction::generator(std::string_view name) const { return gens_[index_of(name)]; }

void GroupAction::declare_inverse(const std::string& a, const std::string& b) {
  const Map& fa = generator(a).map;
  const Map& fb = generator(b).map;
  const Map prod = compose(fa, fb);
  bool ok = false;
  if (is_pl(prod)) {
    ok = std::get<PLHomeo>(prod).is_identity();
  } else {
    ok = same_map(prod, PLHomeo::identity(), probe_tolerance());
  }
  if (!ok) throw ValidationError("bad symmetric pairing: " + a + " and " + b + " are not inverse");
  for (const auto& n : {a, b}) {
    auto it = inverse_of_.find(n);
    if (it != inverse_of_.end() && it->second != (n == a ? b : a)) {
      throw ValidationError("bad symmetric pairing: " + n + " already paired with " + it->second);
    }
  }
  inverse_of_[a] = b;
  inverse_of_[b] = a;
}

void GroupAction::add_relator(Word w) {
  for (const auto& s : w) (void)index_of(s);
  relators_.push_back(std::move(w));
}

void GroupAction::adopt_structure_of_conjugate(const GroupAction& from) {
  for (const auto& [a, b] : from.inverse_of_) {
    (void)index_of(a);
    inverse_of_[a] = b;
  }
  for (const auto& r : from.relators_) add_relator(r);
}

std::optional<std::string> GroupAction::inverse_name(std::string_view name) const {
  auto it = inverse_of_.find(name);
  if (it == inverse_of_.end()) return std::nullopt;
  return it->second;
}

bool GroupAction::symmetric() const {
  return std::all_of(gens_.begin(), gens_.end(),
                     [&](const Generator& g) { return inverse_of_.count(g.name) > 0; });
}

std::vector<std::pair<std::string, std::string>> GroupAction::inverse_pairs() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [a, b] : inverse_of_) {
    if (a <= b) out.emplace_back(a, b);
  }
  return out;
}

bool GroupAction::all_pl() const {
  return std::all_of(gens_.begin(), gens_.end(), [](const Generator& g) { return is_pl(g.map); });
}

std::vector<PLHomeo> GroupAction::pl_maps() const {
  std::vector<PLHomeo> out;
  out.reserve(gens_.size());
  for (const auto& g : gens_) {
    if (!is_pl(g.map)) throw std::logic_error("generator '" + g.name + "' is not PL");
    out.push_back(std::get<PLHomeo>(g.map));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Operations

Map word_eval(const GroupAction& a, const Word& w) {
  Map acc = PLHomeo::identity();
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    acc = compose(a.generator(*it).map, acc);
  }
  return acc;
}

Word free_reduce(const GroupAction& a, Word w) {
  Word out;
  for (auto& s : w) {
    if (!out.empty()) {
      const auto inv = a.inverse_name(out.back());
      if (inv && *inv == s) {
        out.pop_back();
        continue;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

Ball ball(const GroupAction& a, int radius) {
  if (radius < 0) throw std::invalid_argument("ball: negative radius");
  Ball out;
  out.entries.push_back({Word{}, PLHomeo::identity()});
  std::set<std::string> pl_keys{canonical_key(PLHomeo::identity())};

  auto admit = [&](Word w, Map m) {
    if (const auto* h = std::get_if<PLHomeo>(&m)) {
      if (!pl_keys.insert(canonical_key(*h)).second) return;
    } else {
      out.certified = false;
      const Rational tol = probe_tolerance();
      for (const auto& e : out.entries) {
        if (same_map(e.map, m, tol)) return;
      }
    }
    out.entries.push_back({std::move(w), std::move(m)});
  };

  std::size_t level_begin = 0;
  for (int r = 1; r <= radius; ++r) {
    const std::size_t level_end = out.entries.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (const auto& g : a.generators()) {
        const Word& w = out.entries[i].word;
        if (!w.empty()) {
          const auto inv = a.inverse_name(w.front());
          if (inv && *inv == g.name) continue;
        }
        Word nw;
        nw.reserve(w.size() + 1);
        nw.push_back(g.name);
        nw.insert(nw.end(), w.begin(), w.end());
        Map nm = compose(g.map, out.entries[i].map);
        admit(std::move(nw), std::move(nm));
      }
    }
    level_begin = level_end;
    if (level_begin == out.entries.size()) break;
  }
  return out;
}

GroupAction square_generating_set(const GroupAction& a) {
  if (!a.symmetric()) throw std::invalid_argument("square_generating_set: action is not symmetric");
  GroupAction out(a.name());
  const Rational tol = probe_tolerance();
  std::vector<std::pair<std::string, Map>> kept;
  auto find_equal = [&](const Map& m) -> std::optional<std::string> {
    for (const auto& [n, k] : kept) {
      if (same_map(k, m, tol)) return n;
    }
    return std::nullopt;
  };

  for (const auto& g : a.generators()) kept.emplace_back(g.name, g.map);
  // rep[(g,h)]: name of the kept generator equal to g ∘ h, or nullopt for the identity.
  std::map<std::pair<std::string, std::string>, std::optional<std::string>> rep;
  for (const auto& g : a.generators()) {
    for (const auto& h : a.generators()) {
      Map prod = compose(g.map, h.map);
      const bool identity = is_pl(prod) ? std::get<PLHomeo>(prod).is_identity()
                                        : same_map(prod, PLHomeo::identity(), tol);
      if (identity) {
        rep[{g.name, h.name}] = std::nullopt;
        continue;
      }
      if (auto existing = find_equal(prod)) {
        rep[{g.name, h.name}] = *existing;
        continue;
      }
      const std::string name = g.name + "*" + h.name;
      kept.emplace_back(name, std::move(prod));
      rep[{g.name, h.name}] = name;
    }
  }
  for (auto& [n, m] : kept) out.add_generator(n, m);
  for (const auto& [x, y] : a.inverse_pairs()) out.declare_inverse(x, y);
  for (const auto& [key, name] : rep) {
    if (!name || a.has_generator(*name)) continue;
    const auto gi = a.inverse_name(key.first);
    const auto hi = a.inverse_name(key.second);
    const auto& partner = rep.at({*hi, *gi});
    if (partner && !out.inverse_name(*name)) out.declare_inverse(*name, *partner);
  }
  for (const auto& r : a.relators()) out.add_relator(r);
  return out;
}

GroupAction adjoin_translation(const GroupAction& a, const Rational& t) {
  if (t.is_zero()) throw std::invalid_argument("adjoin_translation: t must be nonzero");
  GroupAction out = a;
  std::string name = "tau";
  while (out.has_generator(name) || out.has_generator(name + "-")) name += "'";
  out.add_generator(name, PLHomeo::translation(t.abs()));
  out.add_generator(name + "-", PLHomeo::translation(-t.abs()));
  out.declare_inverse(name, name + "-");
  return out;
}

GroupAction extend_interval_action(const GroupAction& a, int periods) {
  if (periods < 1) throw std::invalid_argument("extend_interval_action: periods must be >= 1");
  GroupAction out(a.name());
  const Rational zero(0);
  const Rational one(1);
  for (const auto& g : a.generators()) {
    if (!is_pl(g.map)) throw NotAnIntervalAction("generator '" + g.name + "' is not PL");
    const auto& f = std::get<PLHomeo>(g.map);
    if (f(zero) != zero || f(one) != one) {
      throw NotAnIntervalAction("generator '" + g.name + "' does not fix 0 and 1");
    }
    std::vector<Rational> cell{zero};
    for (const auto& x : f.function().breakpoints_in({zero, one})) cell.push_back(x);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(2 * periods) * cell.size() + 1);
    for (int k = -periods; k < periods; ++k) {
      const Rational shift(k);
      for (const auto& x : cell) pts.push_back({shift + x, shift + f(x)});
    }
    pts.push_back({Rational(periods), Rational(periods)});
    out.add_generator(g.name, PLHomeo::from_points(std::move(pts), one, one));
  }
  for (const auto& [x, y] : a.inverse_pairs()) out.declare_inverse(x, y);
  for (const auto& r : a.relators()) out.add_relator(r);
  return out;
}

GroupAction symmetrize(const GroupAction& a, std::vector<std::string>* warnings) {
  GroupAction out = a;
  const Rational tol = probe_tolerance();
  for (const auto& g : a.generators()) {
    if (out.inverse_name(g.name)) continue;
    const Map inv = inverse(g.map);
    std::optional<std::string> partner;
    for (const auto& h : out.generators()) {
      if (!out.inverse_name(h.name) && same_map(h.map, inv, tol)) {
        partner = h.name;
        break;
      }
    }
    if (!partner) {
      std::string name = g.name + "-";
      while (out.has_generator(name)) name += "'";
      out.add_generator(name, inv);
      partner = name;
      if (warnings) warnings->push_back("adjoined inverse '" + name + "' of generator '" + g.name + "'");
    }
    out.declare_inverse(g.name, *partner);
  }
  return out;
}

std::vector<RelatorCheck> check_relators(const GroupAction& a) {
  std::vector<RelatorCheck> out;
  for (const auto& w : a.relators()) {
    const Map m = word_eval(a, w);
    RelatorCheck rc{w, false, is_pl(m)};
    if (rc.certified) {
      rc.holds = std::get<PLHomeo>(m).is_identity();
    } else {
      rc.holds = same_map(m, PLHomeo::identity(), probe_tolerance());
    }
    out.push_back(std::move(rc));
  }
  return out;
}

}  // namespace aplab
