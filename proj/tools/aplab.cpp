#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>

#include "aplab/action_file.hpp"
#include "aplab/displacement_normalization.hpp"
#include "aplab/errors.hpp"
#include "aplab/flow_lab.hpp"
#include "aplab/lipschitz_conjugation.hpp"
#include "aplab/morphism_detector.hpp"
#include "report.hpp"

using namespace aplab;
using aplab::cli::Json;
using aplab::cli::Report;

namespace {

constexpr int kOk = 0;
constexpr int kCertificateFailure = 2;
constexpr int kStructural = 3;
constexpr int kNonConvergence = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Rational rational_flag(const std::string& flag, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const std::invalid_argument&) {
    throw UsageError("--" + flag + ": expected p/q, got '" + text + "'");
  }
}

Rational positive_flag(const std::string& flag, const std::string& text) {
  Rational r = rational_flag(flag, text);
  if (r.sign() <= 0) throw UsageError("--" + flag + " must be positive");
  return r;
}

std::string interval_str(const Interval& w) { return "[" + w.lo.str() + ", " + w.hi.str() + "]"; }

void describe_normalization(Report& rep, const NormalizationResult& res) {
  const EscapeSequence& es = res.escape;
  rep.field("escape depth M", std::to_string(es.M));
  std::string xs;
  for (int n = -std::min(es.M, 4); n <= std::min(es.M, 4); ++n) xs += (xs.empty() ? "" : " ") + es.x(n).str();
  rep.field("escape x_-4..x_4", xs);
  rep.field("x_-M, x_M", es.x(-es.M).str() + ", " + es.x(es.M).str());
  rep.field("K (max Lipschitz over generators)", res.K.str());
  rep.field("certified window", interval_str(res.certified_window));
  rep.field("single-generator bound K^3", res.single.bound.str());
  for (const auto& s : res.single.slopes) rep.field("single lipschitz " + s.generator, s.lipschitz.str());
  rep.field("single-generator check", res.single.pass ? "pass" : "FAIL");
  rep.field("distortion worst ratio", res.distortion.worst_ratio.str());
  rep.field("distortion check", res.distortion.pass ? "pass" : "FAIL");
  if (res.snapshot_error) rep.field("snapshot error", res.snapshot_error->str());
  for (const auto& w : res.warnings) rep.field("warning", w);
  rep.line("");
  describe(rep, res.report);
  rep.line("");
  rep.field("result", res.pass ? "pass" : "FAIL");

  Json& j = rep.json();
  Json pts = Json::array();
  for (const auto& x : es.points) pts.push_back(x.str());
  j["escape"] = {{"M", es.M}, {"points", pts}, {"forward", es.forward}, {"backward", es.backward}};
  j["K"] = res.K.str();
  j["certified_window"] = cli::to_json(res.certified_window);
  Json single = Json::object();
  for (const auto& s : res.single.slopes) single[s.generator] = s.lipschitz.str();
  j["single_generator"] = {{"bound", res.single.bound.str()}, {"lipschitz", single}, {"pass", res.single.pass}};
  j["distortion"] = {{"worst_ratio", res.distortion.worst_ratio.str()}, {"pass", res.distortion.pass}};
  if (res.distortion.witness) j["distortion"]["witness"] = *res.distortion.witness;
  if (res.snapshot_error) j["snapshot_error"] = res.snapshot_error->str();
  j["warnings"] = res.warnings;
  j["membership"] = cli::to_json(res.report);
  j["pass"] = res.pass;
}

struct LipschitzFlags {
  std::string alpha = "default";
  int ball = 6;
  std::string tol = "1/1099511627776";
  std::string window = "64";
  std::size_t grid = 1000;
  std::string snapshot_error = "1/4096";
};

void add_lipschitz_flags(CLI::App* sub, LipschitzFlags& f) {
  sub->add_option("--alpha", f.alpha, "weight decay p/q; default 1/(4k) for k generators")->capture_default_str();
  sub->add_option("--ball", f.ball, "ball radius N")->capture_default_str();
  sub->add_option("--tol", f.tol, "enclosure tolerance p/q")->capture_default_str();
  sub->add_option("--window", f.window, "half-width W of the window [-W, W]")->capture_default_str();
  sub->add_option("--grid", f.grid, "grid points for Lipschitz estimates")->capture_default_str();
  sub->add_option("--snapshot-error", f.snapshot_error, "certified error of the PL snapshot")->capture_default_str();
}

struct StageOne {
  LipschitzifyResult result;
  Snapshot snapshot;
};

StageOne run_stage_one(const GroupAction& a, const LipschitzFlags& f, Report& rep) {
  WeightScheme ws = WeightScheme::defaults_for(a);
  if (f.alpha != "default") ws.alpha = positive_flag("alpha", f.alpha);
  ws.ball_radius = f.ball;
  const Rational W = positive_flag("window", f.window);
  const Interval window{-W, W};
  const Rational tol = positive_flag("tol", f.tol);
  const Rational err = positive_flag("snapshot-error", f.snapshot_error);
  rep.option("alpha", ws.alpha.str());
  rep.option("ball", std::to_string(f.ball));
  rep.option("tol", tol.str());
  rep.option("window", W.str());
  rep.option("grid", std::to_string(f.grid));
  rep.option("snapshot-error", err.str());

  LipschitzifyResult res = lipschitzify(a, ws, window, f.grid, tol);
  Snapshot snap = snapshot_action(res.action, window, err);

  rep.field("ball size", std::to_string(res.ball_size));
  rep.field("truncation defect", res.defect.str() + " (" + res.defect.decimal(6) + ")");
  Json rows = Json::array();
  for (const auto& r : res.rows) {
    const std::string upper = r.upper_hint ? r.upper_hint->decimal(12) : "unavailable";
    rep.field("generator " + r.generator, "L=" + r.L.str() + " lower=" + r.lower.decimal(12) + " upper_hint=" + upper +
                                              " analytic_hint=" + r.analytic_hint.str());
    Json row = {{"generator", r.generator}, {"L", r.L.str()}, {"lower", r.lower.str()},
                {"analytic_hint", r.analytic_hint.str()}};
    if (r.upper_hint) row["upper_hint"] = r.upper_hint->str();
    rows.push_back(row);
  }
  rep.field("snapshot certified error", snap.certified_error.decimal(6) + " (exact value in the json section)");
  rep.field("snapshot cells", std::to_string(snap.total_cells));
  Json& j = rep.json();
  j["stage1"] = {{"alpha", ws.alpha.str()},
                 {"ball", ws.ball_radius},
                 {"ball_size", res.ball_size},
                 {"truncation_defect", res.defect.str()},
                 {"generators", rows},
                 {"snapshot_error", snap.certified_error.str()},
                 {"snapshot_cells", snap.total_cells}};
  return {std::move(res), std::move(snap)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamics of groups acting on the line by PL homeomorphisms"};
  app.require_subcommand(1);
  bool no_timestamp = false;
  app.add_flag("--no-timestamp", no_timestamp, "omit the generation time from reports");
  std::function<int()> run;

  // normalize
  std::string in;
  std::string out;
  std::string report_path;
  int depth = 64;
  auto* normalize = app.add_subcommand("normalize", "escape sequence, straightening and R-membership report");
  normalize->add_option("in", in, "action file")->required();
  normalize->add_option("--depth", depth, "escape depth M")->capture_default_str();
  normalize->add_option("--out", out, "normalized action file");
  normalize->add_option("--report", report_path, "report file (stdout when absent)");
  normalize->callback([&] {
    run = [&] {
      if (depth < 3) throw UsageError("--depth must be at least 3");
      const GroupAction a = read_action_file(in);
      Report rep("normalize", in);
      rep.option("depth", std::to_string(depth));
      NormalizeOptions opt;
      opt.M = depth;
      const NormalizationResult res = normalize_action(a, opt);
      if (!out.empty()) write_action_file(out, res.normalized);
      describe_normalization(rep, res);
      rep.emit(report_path, !no_timestamp);
      return res.pass ? kOk : kCertificateFailure;
    };
  });

  // lipschitzify
  LipschitzFlags lf;
  auto* lipschitz = app.add_subcommand("lipschitzify", "conjugate to a Lipschitz action and snapshot it as PL");
  lipschitz->add_option("in", in, "action file")->required();
  add_lipschitz_flags(lipschitz, lf);
  lipschitz->add_option("--out", out, "PL snapshot action file");
  lipschitz->add_option("--report", report_path, "report file (stdout when absent)");
  lipschitz->callback([&] {
    run = [&] {
      const GroupAction a = read_action_file(in);
      Report rep("lipschitzify", in);
      const StageOne s = run_stage_one(a, lf, rep);
      if (!out.empty()) write_action_file(out, s.snapshot.action);
      rep.emit(report_path, !no_timestamp);
      return kOk;
    };
  });

  // pipeline
  bool force_lipschitz = false;
  auto* pipeline = app.add_subcommand("pipeline", "Lipschitz conjugation when needed, then normalization");
  pipeline->add_option("in", in, "action file")->required();
  pipeline->add_option("--depth", depth, "escape depth M")->capture_default_str();
  add_lipschitz_flags(pipeline, lf);
  pipeline->add_flag("--force-lipschitz", force_lipschitz, "run the Lipschitz stage even for uniformly Lipschitz input");
  pipeline->add_option("--out", out, "normalized action file");
  pipeline->add_option("--report", report_path, "report file (stdout when absent)");
  pipeline->callback([&] {
    run = [&] {
      if (depth < 3) throw UsageError("--depth must be at least 3");
      const GroupAction a = read_action_file(in);
      Report rep("pipeline", in);
      rep.option("depth", std::to_string(depth));
      rep.option("force-lipschitz", force_lipschitz ? "true" : "false");
      // Every PL generator is globally bi-Lipschitz with constant max(s, 1/s) over its pieces.
      bool uniform = true;
      Json scan = Json::object();
      for (const auto& g : a.generators()) {
        if (!is_pl(g.map)) {
          uniform = false;
          continue;
        }
        const Rational L = lipschitz_constant(std::get<PLHomeo>(g.map));
        rep.field("global lipschitz " + g.name, L.str());
        scan[g.name] = L.str();
      }
      rep.json()["lipschitz_scan"] = scan;
      GroupAction stage2_input = a;
      if (force_lipschitz || !uniform) {
        rep.field("stage 1", "run");
        stage2_input = run_stage_one(a, lf, rep).snapshot.action;
      } else {
        rep.field("stage 1", "skipped (input uniformly Lipschitz)");
      }
      rep.json()["stage1_run"] = force_lipschitz || !uniform;
      rep.line("");
      NormalizeOptions opt;
      opt.M = depth;
      const NormalizationResult res = normalize_action(stage2_input, opt);
      if (!out.empty()) write_action_file(out, res.normalized);
      describe_normalization(rep, res);
      rep.emit(report_path, !no_timestamp);
      return res.pass ? kOk : kCertificateFailure;
    };
  });

  // verify-r
  std::string K = "64";
  std::string C = "1";
  std::string D = "4";
  std::vector<std::string> window{"-20", "20"};
  auto* verify = app.add_subcommand("verify-r", "standalone R-membership check");
  verify->add_option("in", in, "action file")->required();
  verify->add_option("--K", K, "Lipschitz bound")->capture_default_str();
  verify->add_option("--C", C, "lower displacement bound")->capture_default_str();
  verify->add_option("--D", D, "upper displacement bound")->capture_default_str();
  verify->add_option("--window", window, "window ends a b")->expected(2)->allow_extra_args(false)->capture_default_str();
  verify->add_option("--report", report_path, "report file (stdout when absent)");
  verify->callback([&] {
    run = [&] {
      const Rational k = positive_flag("K", K);
      const Rational c = rational_flag("C", C);
      const Rational d = rational_flag("D", D);
      const Interval w{rational_flag("window", window.at(0)), rational_flag("window", window.at(1))};
      if (w.hi < w.lo) throw UsageError("--window: a must not exceed b");
      const GroupAction a = read_action_file(in);
      Report rep("verify-r", in);
      rep.option("K", k.str());
      rep.option("C", c.str());
      rep.option("D", d.str());
      rep.option("window", w.lo.str() + " " + w.hi.str());
      const RMembershipReport r = check_R_membership(a, k, c, d, w);
      describe(rep, r);
      rep.json() = cli::to_json(r);
      rep.emit(report_path, !no_timestamp);
      return r.pass ? kOk : kCertificateFailure;
    };
  });

  // flow
  std::string eps = "1/100";
  std::string S = "50";
  std::string Wflag = "20";
  std::size_t samples = 250;
  std::string csv_path;
  auto* flow = app.add_subcommand("flow", "almost periods, covering number and almost fixed points of the flow");
  flow->add_option("in", in, "action file")->required();
  flow->add_option("--eps", eps, "almost-period threshold")->capture_default_str();
  flow->add_option("--S", S, "flow horizon")->capture_default_str();
  flow->add_option("--W", Wflag, "window half-width")->capture_default_str();
  flow->add_option("--samples", samples, "flow samples on [0, S]")->capture_default_str();
  flow->add_option("--csv", csv_path, "almost-period scan as CSV");
  flow->add_option("--report", report_path, "report file (stdout when absent)");
  flow->callback([&] {
    run = [&] {
      const Rational e = positive_flag("eps", eps);
      const Rational s = positive_flag("S", S);
      const Rational W = positive_flag("W", Wflag);
      if (samples < 1) throw UsageError("--samples must be at least 1");
      const GroupAction a = read_action_file(in);
      Report rep("flow", in);
      rep.option("eps", e.str());
      rep.option("S", s.str());
      rep.option("W", W.str());
      rep.option("samples", std::to_string(samples));
      const Rational step = s / Rational(static_cast<long>(samples));
      const AfpResult fix = afp(a, {-W, W});
      const AlmostPeriodScan scan = almost_periods(a, e, s, step, W);
      const std::size_t net = covering_number(a, e, samples, s, W);
      rep.field("afp", fix.value.str() + " at x=" + fix.argmin.str());
      rep.field("scan step", step.str());
      rep.field("almost periods", std::to_string(scan.periods.size()) + "/" + std::to_string(scan.rows.size()));
      rep.field("max gap", scan.max_gap.str());
      rep.field("covering number", std::to_string(net));
      Json periods = Json::array();
      for (const auto& p : scan.periods) periods.push_back(p.str());
      rep.json() = {{"afp", fix.value.str()},
                    {"afp_argmin", fix.argmin.str()},
                    {"step", step.str()},
                    {"almost_periods", periods},
                    {"max_gap", scan.max_gap.str()},
                    {"covering_number", net}};
      if (!csv_path.empty()) {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + csv_path);
        f << "s,d_W,is_almost_period,s_exact,d_W_exact\n";
        for (const auto& r : scan.rows) {
          f << r.s.decimal(12) << ',' << r.d.decimal(12) << ',' << (r.is_almost_period ? 1 : 0) << ',' << r.s.str()
            << ',' << r.d.str() << '\n';
        }
      }
      rep.emit(report_path, !no_timestamp);
      return kOk;
    };
  });

  // morphism
  std::size_t n_max = 1024;
  std::size_t pairs = 20;
  std::uint64_t seed = MorphismOptions{}.seed;
  auto* morphism = app.add_subcommand("morphism", "tail-slope morphism and translation numbers");
  morphism->add_option("in", in, "action file")->required();
  morphism->add_option("--n-max", n_max, "iterations for translation numbers (power of 2)")->capture_default_str();
  morphism->add_option("--pairs", pairs, "random word pairs for the additivity test")->capture_default_str();
  morphism->add_option("--seed", seed, "seed for the additivity test")->capture_default_str();
  morphism->add_option("--report", report_path, "report file (stdout when absent)");
  morphism->callback([&] {
    run = [&] {
      const GroupAction a = read_action_file(in);
      MorphismOptions opt;
      opt.translation.n_max = n_max;
      opt.additivity_pairs = pairs;
      opt.seed = seed;
      Report rep("morphism", in);
      rep.option("n-max", std::to_string(n_max));
      rep.option("pairs", std::to_string(pairs));
      rep.option("seed", std::to_string(seed));
      rep.option("halving-threshold", opt.halving_threshold.str());
      rep.option("additivity-threshold", opt.additivity_threshold.str());
      rep.option("bound", opt.translation.bound.str());
      const MorphismReport r = morphism_report(a, opt);
      describe(rep, r);
      rep.json() = cli::to_json(r);
      rep.emit(report_path, !no_timestamp);
      return kOk;
    };
  });

  // extend-interval
  int periods = 128;
  auto* extend = app.add_subcommand("extend-interval", "periodic extension of an action on [0, 1]");
  extend->add_option("in", in, "action file")->required();
  extend->add_option("--periods", periods, "extend over [-P, P]")->capture_default_str();
  extend->add_option("--out", out, "extended action file (stdout when absent)");
  extend->callback([&] {
    run = [&] {
      if (periods < 1) throw UsageError("--periods must be at least 1");
      const GroupAction ext = extend_interval_action(read_action_file(in), periods);
      if (out.empty()) {
        std::cout << serialize_action(ext);
      } else {
        write_action_file(out, ext);
      }
      return kOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kStructural;
  }

  try {
    return run();
  } catch (const NonConvergence& e) {
    std::cerr << "error (non-convergence): " << e.what() << '\n';
    return kNonConvergence;
  } catch (const BracketFailure& e) {
    std::cerr << "error (non-convergence): " << e.what() << '\n';
    return kNonConvergence;
  } catch (const Overflow& e) {
    std::cerr << "error (non-convergence): " << e.what() << '\n';
    return kNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kStructural;
  }
}
