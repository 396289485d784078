#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aplab/group_action.hpp"

namespace aplab {

struct TailSlopes {
  std::string generator;
  Rational right;  ///< s₊, slope near +∞
  Rational left;   ///< s₋, slope near −∞
};

struct RelatorSlope {
  Word word;
  Rational right;
  Rational left;
  bool consistent = false;  ///< both products equal 1
};

struct TranslationNumber {
  Rational estimate;       ///< (gⁿ(p) − p)/n for n = n_max
  Rational halving_error;  ///< |estimate − the same at n_max/2|
};

struct TranslationOptions {
  std::size_t n_max = 1024;
  Rational base = Rational(0);
  /// Iterates with |gᵏ(p)| above this bound raise Overflow.
  Rational bound = Rational::pow2(64);
};

/// Throws std::invalid_argument unless n_max is a power of two >= 2,
/// Overflow on escape past the bound, std::logic_error for non-PL words.
TranslationNumber translation_number(const GroupAction& a, const Word& g, const TranslationOptions& opt = {});

enum class Verdict { ScalingCocycle, TranslationLike, Inconclusive };

/// "scaling cocycle nontrivial", "translation-like", "inconclusive".
std::string to_string(Verdict v);

struct TranslationRow {
  std::string generator;
  std::optional<TranslationNumber> value;
  std::string error;  ///< set when value is absent
};

struct AdditivityRow {
  Word u;
  Word v;
  std::optional<Rational> defect;  ///< |τ(uv) − τ(u) − τ(v)|
  std::string error;
};

struct MorphismOptions {
  TranslationOptions translation;
  std::size_t additivity_pairs = 20;
  int max_word_length = 3;
  std::uint64_t seed = 20240611;
  Rational halving_threshold = Rational(1, 1000000);
  Rational additivity_threshold = Rational(1, 10000);
};

struct MorphismReport {
  std::vector<TailSlopes> slopes;
  bool nontrivial = false;  ///< some s₊(g) != 1
  std::vector<RelatorSlope> relators;
  std::vector<TranslationRow> translation;
  std::vector<AdditivityRow> additivity;
  MorphismOptions options;
  Verdict verdict = Verdict::Inconclusive;
};

/// Tail slopes of every generator and of every relator word. Requires PL
/// generators.
MorphismReport tail_slope_morphism(const GroupAction& a);

/// Tail-slope morphism, then translation numbers and the additivity test
/// when the morphism is trivial.
MorphismReport morphism_report(const GroupAction& a, const MorphismOptions& opt = {});

}  // namespace aplab
