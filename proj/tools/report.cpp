#include "report.hpp"

#include <ctime>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace aplab::cli {

Report::Report(std::string command, std::string input) : command_(std::move(command)), input_(std::move(input)) {}

void Report::option(const std::string& key, const std::string& value) { options_.emplace_back(key, value); }

std::string Report::render(bool timestamp) const {
  std::string out = "# aplab " + command_ + "\n";
  if (timestamp) {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    out += std::string("# generated: ") + buf + "\n";
  }
  out += "# input: " + input_ + "\n";
  for (const auto& [k, v] : options_) out += "# option " + k + ": " + v + "\n";
  out += "\n";
  for (const auto& l : lines_) out += l + "\n";
  Json doc = Json::object();
  doc["command"] = command_;
  doc["input"] = input_;
  Json opts = Json::object();
  for (const auto& [k, v] : options_) opts[k] = v;
  doc["options"] = opts;
  doc["result"] = json_;
  out += "\n--- json ---\n" + doc.dump(2) + "\n";
  return out;
}

void Report::emit(const std::filesystem::path& path, bool timestamp) const {
  const std::string text = render(timestamp);
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

Json to_json(const Rational& r) { return r.str(); }

Json to_json(const Interval& w) { return Json::array({w.lo.str(), w.hi.str()}); }

Json to_json(const RMembershipReport& r) {
  Json j = Json::object();
  j["window"] = to_json(r.window);
  j["K"] = to_json(r.K);
  j["C"] = to_json(r.C);
  j["D"] = to_json(r.D);
  j["pass"] = r.pass;
  j["points_checked"] = r.points_checked;
  Json slopes = Json::object();
  for (const auto& s : r.slopes) slopes[s.generator] = to_json(s.lipschitz);
  j["lipschitz"] = slopes;
  j["max_displacement"] = {{"min", r.max_displacement.min.str()}, {"max", r.max_displacement.max.str()}};
  j["min_displacement"] = {{"min", r.min_displacement.min.str()}, {"max", r.min_displacement.max.str()}};
  Json ws = Json::array();
  for (const auto& w : r.witnesses) {
    ws.push_back({{"x", w.x.str()},
                  {"generator", w.generator},
                  {"kind", w.kind},
                  {"value", w.value.str()},
                  {"bound", w.bound.str()}});
  }
  j["witnesses"] = ws;
  return j;
}

Json to_json(const MorphismReport& r) {
  Json j = Json::object();
  Json slopes = Json::array();
  for (const auto& s : r.slopes) {
    slopes.push_back({{"generator", s.generator}, {"right", s.right.str()}, {"left", s.left.str()}});
  }
  j["tail_slopes"] = slopes;
  j["nontrivial"] = r.nontrivial;
  Json rels = Json::array();
  for (const auto& s : r.relators) {
    rels.push_back({{"word", to_string(s.word)},
                    {"right", s.right.str()},
                    {"left", s.left.str()},
                    {"consistent", s.consistent}});
  }
  j["relators"] = rels;
  Json tr = Json::array();
  for (const auto& t : r.translation) {
    Json row = {{"generator", t.generator}};
    if (t.value) {
      row["estimate"] = t.value->estimate.str();
      row["halving_error"] = t.value->halving_error.str();
    } else {
      row["error"] = t.error;
    }
    tr.push_back(row);
  }
  j["translation_numbers"] = tr;
  Json add = Json::array();
  for (const auto& a : r.additivity) {
    Json row = {{"u", to_string(a.u)}, {"v", to_string(a.v)}};
    if (a.defect) {
      row["defect"] = a.defect->str();
    } else {
      row["error"] = a.error;
    }
    add.push_back(row);
  }
  j["additivity"] = add;
  j["verdict"] = to_string(r.verdict);
  return j;
}

void describe(Report& rep, const RMembershipReport& r, const std::string& prefix) {
  rep.field(prefix + "window", "[" + r.window.lo.str() + ", " + r.window.hi.str() + "]");
  rep.field(prefix + "R", "K=" + r.K.str() + " C=" + r.C.str() + " D=" + r.D.str());
  for (const auto& s : r.slopes) rep.field(prefix + "lipschitz " + s.generator, s.lipschitz.str());
  rep.field(prefix + "max displacement", "[" + r.max_displacement.min.str() + ", " + r.max_displacement.max.str() + "]");
  rep.field(prefix + "min displacement", "[" + r.min_displacement.min.str() + ", " + r.min_displacement.max.str() + "]");
  rep.field(prefix + "points checked", std::to_string(r.points_checked));
  rep.field(prefix + "membership", r.pass ? "pass" : "FAIL");
  for (const auto& w : r.witnesses) {
    rep.field(prefix + "witness", "x=" + w.x.str() + " generator=" + w.generator + " kind=" + w.kind +
                                      " value=" + w.value.str() + " bound=" + w.bound.str());
  }
}

void describe(Report& rep, const MorphismReport& r) {
  for (const auto& s : r.slopes) {
    rep.field("tail slope " + s.generator, "s+=" + s.right.str() + " s-=" + s.left.str());
  }
  for (const auto& s : r.relators) {
    rep.field("relator " + to_string(s.word),
              "s+=" + s.right.str() + " s-=" + s.left.str() + (s.consistent ? " consistent" : " INCONSISTENT"));
  }
  rep.field("scaling morphism", r.nontrivial ? "nontrivial" : "trivial");
  for (const auto& t : r.translation) {
    if (t.value) {
      rep.field("translation number " + t.generator,
                t.value->estimate.str() + " (halving error " + t.value->halving_error.str() + ")");
    } else {
      rep.field("translation number " + t.generator, "unavailable: " + t.error);
    }
  }
  std::size_t failed = 0;
  for (const auto& a : r.additivity) {
    if (!a.defect || *a.defect > r.options.additivity_threshold) ++failed;
  }
  rep.field("additivity", std::to_string(r.additivity.size() - failed) + "/" + std::to_string(r.additivity.size()) +
                              " pairs within " + r.options.additivity_threshold.str());
  rep.field("verdict", to_string(r.verdict));
}

}  // namespace aplab::cli
