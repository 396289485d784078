#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "aplab/numeric_homeo.hpp"
#include "aplab/pl_homeo.hpp"

namespace aplab {

/// A group element acting on the line: exact PL, or an expression once the
/// Lipschitz stage has conjugated it by a non-PL map.
using Map = std::variant<PLHomeo, HomeoExpr>;

bool is_pl(const Map& m);
HomeoExpr to_expr(const Map& m);
/// g ∘ h; stays PL when both are PL.
Map compose(const Map& g, const Map& h);
Map inverse(const Map& m);
/// Exact singleton for PL maps, certified enclosure otherwise.
Interval eval(const Map& m, const Rational& x, const Rational& tol);

/// Sequence of generator names, applied right to left: "g1 g2 g3" acts as
/// g1 ∘ g2 ∘ g3. The empty word is the identity.
using Word = std::vector<std::string>;

/// Splits on whitespace; "1" and "e" alone denote the identity word.
Word parse_word(std::string_view text);
std::string to_string(const Word& w);

struct Generator {
  std::string name;
  Map map;
};

/// Finitely generated action on the line. Generators are kept sorted by name;
/// inverse pairs are declared explicitly and checked on declaration.
class GroupAction {
 public:
  explicit GroupAction(std::string name = "action") : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  /// Throws ValidationError on a duplicate or malformed name.
  void add_generator(std::string name, Map map);
  /// Throws ValidationError unless the two maps are mutually inverse (exactly
  /// for PL maps, at probe points otherwise).
  void declare_inverse(const std::string& a, const std::string& b);
  void add_relator(Word w);
  /// Copies the inverse pairs and relators of `from` without re-checking
  /// them. Only valid when every generator here is the conjugate of the
  /// same-named generator of `from` by one common homeomorphism.
  void adopt_structure_of_conjugate(const GroupAction& from);

  const std::vector<Generator>& generators() const { return gens_; }
  const Generator& generator(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;
  bool has_generator(std::string_view name) const;
  std::optional<std::string> inverse_name(std::string_view name) const;
  /// Every generator has a declared inverse.
  bool symmetric() const;
  /// Each pair once, smaller name first, sorted.
  std::vector<std::pair<std::string, std::string>> inverse_pairs() const;
  const std::vector<Word>& relators() const { return relators_; }

  bool all_pl() const;
  /// Generator maps in name order; throws std::logic_error unless all_pl().
  std::vector<PLHomeo> pl_maps() const;

 private:
  std::string name_;
  std::vector<Generator> gens_;
  std::map<std::string, std::string, std::less<>> inverse_of_;
  std::vector<Word> relators_;
};

/// Throws UnknownGenerator.
Map word_eval(const GroupAction& a, const Word& w);

/// Cancels adjacent declared-inverse pairs.
Word free_reduce(const GroupAction& a, Word w);

struct BallEntry {
  Word word;  ///< a shortest freely reduced word reaching this element
  Map map;
};

struct Ball {
  std::vector<BallEntry> entries;  ///< in order of word length
  /// False when expression maps were deduplicated by probe agreement.
  bool certified = true;
};

/// Distinct elements reachable by freely reduced words of length <= radius.
Ball ball(const GroupAction& a, int radius);

/// 𝒢 ∪ 𝒢² without the identity and duplicates; products are named "g*h"
/// (meaning g ∘ h). Requires a symmetric action.
GroupAction square_generating_set(const GroupAction& a);

/// Adds x ↦ x+|t| and its inverse, named "tau" and "tau-" (suffixed with
/// primes on a clash).
GroupAction adjoin_translation(const GroupAction& a, const Rational& t);

/// Extends an action on [0,1] (every generator fixes 0 and 1) to the line by
/// F(x) = ⌊x⌋ + f(x − ⌊x⌋) on [−periods, periods]; the extension is the
/// identity outside. Throws NotAnIntervalAction.
GroupAction extend_interval_action(const GroupAction& a, int periods = 128);

/// Declares or adjoins inverses for every generator lacking one. Each
/// adjoined inverse is reported in warnings.
GroupAction symmetrize(const GroupAction& a, std::vector<std::string>* warnings = nullptr);

struct RelatorCheck {
  Word word;
  bool holds = false;
  bool certified = true;  ///< exact identity check (PL) rather than probes
};

std::vector<RelatorCheck> check_relators(const GroupAction& a);

/// 64 fixed rational probe points used for expression-map comparisons.
const std::vector<Rational>& probe_points();

/// Equality: exact for PL maps, agreement within tol at probe points otherwise.
bool same_map(const Map& f, const Map& g, const Rational& tol);

}  // namespace aplab
