#include "aplab/morphism_detector.hpp"

#include <random>
#include <stdexcept>

#include "aplab/errors.hpp"

namespace aplab {

namespace {

const PLHomeo& as_pl(const Map& m) {
  if (!is_pl(m)) throw std::logic_error("morphism detector: generators must be PL");
  return std::get<PLHomeo>(m);
}

bool power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ScalingCocycle:
      return "scaling cocycle nontrivial";
    case Verdict::TranslationLike:
      return "translation-like";
    case Verdict::Inconclusive:
      break;
  }
  return "inconclusive";
}

TranslationNumber translation_number(const GroupAction& a, const Word& g, const TranslationOptions& opt) {
  if (!power_of_two(opt.n_max)) throw std::invalid_argument("translation_number: n_max must be a power of 2");
  const Map m = word_eval(a, g);
  const PLHomeo& h = as_pl(m);
  const std::size_t half = opt.n_max / 2;
  Rational y = opt.base;
  Rational at_half;
  for (std::size_t k = 1; k <= opt.n_max; ++k) {
    y = h(y);
    if (y.abs() > opt.bound) {
      throw Overflow("translation_number: iterate " + std::to_string(k) + " of '" + to_string(g) +
                     "' exceeds the bound " + opt.bound.str());
    }
    if (k == half) at_half = y;
  }
  const Rational est = (y - opt.base) / Rational(static_cast<long>(opt.n_max));
  const Rational est_half = (at_half - opt.base) / Rational(static_cast<long>(half));
  return {est, (est - est_half).abs()};
}

MorphismReport tail_slope_morphism(const GroupAction& a) {
  MorphismReport rep;
  for (const auto& g : a.generators()) {
    const PLHomeo& h = as_pl(g.map);
    rep.slopes.push_back({g.name, h.right_slope(), h.left_slope()});
    if (h.right_slope() != Rational(1)) rep.nontrivial = true;
  }
  for (const auto& w : a.relators()) {
    Rational right(1);
    Rational left(1);
    for (const auto& s : w) {
      const PLHomeo& h = as_pl(a.generator(s).map);
      right *= h.right_slope();
      left *= h.left_slope();
    }
    rep.relators.push_back({w, right, left, right == Rational(1) && left == Rational(1)});
  }
  rep.verdict = rep.nontrivial ? Verdict::ScalingCocycle : Verdict::Inconclusive;
  return rep;
}

MorphismReport morphism_report(const GroupAction& a, const MorphismOptions& opt) {
  MorphismReport rep = tail_slope_morphism(a);
  rep.options = opt;

  bool numbers_ok = !a.generators().empty();
  for (const auto& g : a.generators()) {
    TranslationRow row{g.name, std::nullopt, ""};
    try {
      row.value = translation_number(a, Word{g.name}, opt.translation);
      if (row.value->halving_error > opt.halving_threshold) numbers_ok = false;
    } catch (const Overflow& e) {
      row.error = e.what();
      numbers_ok = false;
    }
    rep.translation.push_back(std::move(row));
  }

  bool additive = true;
  if (!a.generators().empty()) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> len(1, std::max(1, opt.max_word_length));
    std::uniform_int_distribution<std::size_t> pick(0, a.generators().size() - 1);
    auto word = [&] {
      Word w;
      for (int i = len(rng); i > 0; --i) w.push_back(a.generators()[pick(rng)].name);
      return w;
    };
    for (std::size_t i = 0; i < opt.additivity_pairs; ++i) {
      AdditivityRow row{word(), word(), std::nullopt, ""};
      Word uv = row.u;
      uv.insert(uv.end(), row.v.begin(), row.v.end());
      try {
        const Rational tu = translation_number(a, row.u, opt.translation).estimate;
        const Rational tv = translation_number(a, row.v, opt.translation).estimate;
        const Rational tuv = translation_number(a, uv, opt.translation).estimate;
        row.defect = (tuv - tu - tv).abs();
        if (*row.defect > opt.additivity_threshold) additive = false;
      } catch (const Overflow& e) {
        row.error = e.what();
        additive = false;
      }
      rep.additivity.push_back(std::move(row));
    }
  }

  if (rep.nontrivial) {
    rep.verdict = Verdict::ScalingCocycle;
  } else if (numbers_ok && additive) {
    rep.verdict = Verdict::TranslationLike;
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

}  // namespace aplab
