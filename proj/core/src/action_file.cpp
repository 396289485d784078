#include "aplab/action_file.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "aplab/errors.hpp"

namespace aplab {

namespace {

struct Token {
  std::string text;
  int column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    if (line[i] == ';') {
      out.push_back({";", static_cast<int>(i) + 1});
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != ';' && line[i] != '#') {
      ++i;
    }
    out.push_back({std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
  }
  return out;
}

class LineReader {
 public:
  LineReader(int line, std::vector<Token> toks, int end_column)
      : line_(line), toks_(std::move(toks)), end_column_(end_column) {}

  bool done() const { return pos_ >= toks_.size(); }

  [[noreturn]] void fail(const std::string& what) const {
    const int col = done() ? end_column_ : toks_[pos_].column;
    throw ParseError(line_, col, what);
  }

  const Token& next(const char* what) {
    if (done()) fail(std::string("expected ") + what);
    return toks_[pos_++];
  }

  void expect(const char* keyword) {
    if (done() || toks_[pos_].text != keyword) fail(std::string("expected '") + keyword + "'");
    ++pos_;
  }

  bool peek(const char* keyword) const { return !done() && toks_[pos_].text == keyword; }

  Rational number(const char* what) {
    const Token& t = next(what);
    try {
      return Rational::parse(t.text);
    } catch (const std::invalid_argument&) {
      --pos_;
      fail(std::string("expected ") + what + ", found '" + t.text + "'");
    }
  }

  void finish() {
    if (!done()) fail("unexpected '" + toks_[pos_].text + "'");
  }

 private:
  int line_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int end_column_;
};

std::string pl_line(const std::string& name, const PLHomeo& h) {
  std::string s = "gen " + name;
  if (h.is_affine()) return s + " affine " + h.left_slope().str() + " " + h.function().intercept().str();
  s += " pl ltail " + h.left_slope().str() + " pts";
  bool first = true;
  for (const auto& p : h.breakpoints()) {
    s += first ? " " : " ; ";
    s += p.x.str() + " " + p.y.str();
    first = false;
  }
  return s + " rtail " + h.right_slope().str();
}

}  // namespace

GroupAction parse_action(std::string_view text) {
  GroupAction out;
  bool have_header = false;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    auto toks = tokenize(line);
    if (toks.empty()) {
      if (end == text.size()) break;
      continue;
    }
    LineReader r(line_no, std::move(toks), static_cast<int>(line.size()) + 1);
    const Token kw = r.next("keyword");
    try {
      if (kw.text == "action") {
        if (have_header) r.fail("duplicate 'action' header");
        out = GroupAction(r.next("action name").text);
        have_header = true;
        r.finish();
        continue;
      }
      if (!have_header) throw ParseError(line_no, kw.column, "expected 'action' header");
      if (kw.text == "gen") {
        const std::string name = r.next("generator name").text;
        if (r.peek("affine")) {
          r.expect("affine");
          const Rational m = r.number("slope");
          const Rational b = r.number("intercept");
          r.finish();
          out.add_generator(name, PLHomeo::affine(m, b));
        } else {
          r.expect("pl");
          r.expect("ltail");
          const Rational left = r.number("left tail slope");
          r.expect("pts");
          std::vector<Point> pts;
          while (true) {
            const Rational x = r.number("breakpoint x");
            const Rational y = r.number("breakpoint y");
            pts.push_back({x, y});
            if (r.peek(";")) {
              r.expect(";");
              continue;
            }
            break;
          }
          r.expect("rtail");
          const Rational right = r.number("right tail slope");
          r.finish();
          out.add_generator(name, PLHomeo::from_points(std::move(pts), left, right));
        }
      } else if (kw.text == "inv") {
        const std::string a = r.next("generator name").text;
        const std::string b = r.next("generator name").text;
        r.finish();
        out.declare_inverse(a, b);
      } else if (kw.text == "rel") {
        Word w;
        while (!r.done()) {
          const std::string s = r.next("letter").text;
          if (s != "e" && s != "1") w.push_back(s);
        }
        if (w.empty()) r.fail("empty relator");
        out.add_relator(std::move(w));
      } else {
        throw ParseError(line_no, kw.column, "unknown keyword '" + kw.text + "'");
      }
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const UnknownGenerator& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw ParseError(line_no, 1, "missing 'action' header");
  for (const auto& c : check_relators(out)) {
    if (!c.holds) throw ValidationError("relator '" + to_string(c.word) + "' does not hold");
  }
  return out;
}

std::string serialize_action(const GroupAction& a) {
  std::string s = "action " + a.name() + "\n";
  for (const auto& g : a.generators()) {
    if (!is_pl(g.map)) throw std::logic_error("serialize_action: generator '" + g.name + "' is not PL");
    s += pl_line(g.name, std::get<PLHomeo>(g.map)) + "\n";
  }
  for (const auto& [x, y] : a.inverse_pairs()) s += "inv " + x + " " + y + "\n";
  for (const auto& w : a.relators()) s += "rel " + to_string(w) + "\n";
  return s;
}

GroupAction read_action_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_action(ss.str());
}

void write_action_file(const std::filesystem::path& path, const GroupAction& a) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize_action(a);
}

}  // namespace aplab
