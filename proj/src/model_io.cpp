#include "diapoly/model_io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "diapoly/errors.hpp"
#include "diapoly/json_support.hpp"

namespace diapoly {

using nlohmann::json;

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Rational::parse(std::to_string(j.get<std::uint64_t>()));
    return Rational(static_cast<long long>(j.get<std::int64_t>()));
  }
  if (j.is_number_float()) return Rational::parse(j.dump());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_object() && j.contains("num")) {
    Rational num = rational_from_json(j.at("num"));
    Rational den = j.contains("den") ? rational_from_json(j.at("den")) : Rational(1);
    if (!num.is_integer() || !den.is_integer()) throw ParseError("rational parts must be integers");
    if (den.is_zero()) throw ParseError("zero denominator");
    return num / den;
  }
  throw ParseError("expected a rational, got " + j.dump());
}

RatVector rational_vector_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of rationals");
  RatVector v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(rational_from_json(e));
  return v;
}

json rational_to_json(const Rational& r) { return r.to_string(); }

json rational_vector_to_json(const RatVector& v) {
  json a = json::array();
  for (const auto& r : v) a.push_back(rational_to_json(r));
  return a;
}

json rational_parts_json(const Rational& r) {
  auto part = [](const mpz_class& z) -> json {
    if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
    return z.get_str();
  };
  return json{{"num", part(r.numerator())}, {"den", part(r.denominator())}};
}

namespace {

Sense sense_from_string(const std::string& s) {
  if (s == "<=" || s == "=<" || s == "<" || s == "le" || s == "L") return Sense::LessEqual;
  if (s == ">=" || s == "=>" || s == ">" || s == "ge" || s == "G") return Sense::GreaterEqual;
  if (s == "=" || s == "==" || s == "eq" || s == "E") return Sense::Equal;
  throw ParseError("unknown constraint sense '" + s + "'");
}

}  // namespace

BinaryProgram model_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ParseError("model must be a JSON object");
    RatVector objective = j.contains("objective") ? rational_vector_from_json(j.at("objective")) : RatVector{};
    std::size_t n = j.contains("n") ? j.at("n").get<std::size_t>() : objective.size();
    std::vector<std::string> names;
    if (j.contains("variables")) names = j.at("variables").get<std::vector<std::string>>();
    BinaryProgram bp(n, std::move(objective), std::move(names));
    if (j.contains("name")) bp.set_name(j.at("name").get<std::string>());
    if (j.contains("constraints")) {
      for (const auto& row : j.at("constraints")) {
        RatVector coeffs = rational_vector_from_json(row.at("coefficients"));
        Sense sense = sense_from_string(row.value("sense", std::string("<=")));
        Rational rhs = rational_from_json(row.at("rhs"));
        bp.add_constraint(std::move(coeffs), sense, std::move(rhs), row.value("name", std::string{}));
      }
    }
    return bp;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model JSON: ") + e.what());
  } catch (const DimensionError& e) {
    throw ParseError(std::string("inconsistent model JSON: ") + e.what());
  }
}

json model_to_json(const BinaryProgram& bp) {
  json rows = json::array();
  for (const auto& row : bp.constraints()) {
    rows.push_back(json{{"name", row.name},
                        {"coefficients", rational_vector_to_json(row.coefficients)},
                        {"sense", to_string(row.sense)},
                        {"rhs", rational_to_json(row.rhs)}});
  }
  json j{{"n", bp.num_variables()},
         {"variables", bp.variable_names()},
         {"objective", rational_vector_to_json(bp.objective())},
         {"constraints", std::move(rows)}};
  if (!bp.name().empty()) j["name"] = bp.name();
  return j;
}

namespace {

class LineWriter {
 public:
  explicit LineWriter(std::ostringstream& out) : out_(out) {}
  void start(const std::string& head) {
    out_ << ' ' << head;
    width_ = head.size() + 1;
  }
  void piece(const std::string& s) {
    if (width_ + s.size() + 1 > 78) {
      out_ << "\n   ";
      width_ = 3;
    }
    out_ << ' ' << s;
    width_ += s.size() + 1;
  }
  void end() { out_ << '\n'; }

 private:
  std::ostringstream& out_;
  std::size_t width_ = 0;
};

struct TermPrinter {
  bool exact = true;
  std::string operator()(const Rational& c, const std::string& var) {
    if (!has_finite_decimal(c)) exact = false;
    std::string mag = to_decimal(c.sign() < 0 ? -c : c);
    return std::string(c.sign() < 0 ? "- " : "+ ") + mag + " " + var;
  }
  std::string number(const Rational& c) {
    if (!has_finite_decimal(c)) exact = false;
    return to_decimal(c);
  }
};

void write_row(LineWriter& w, TermPrinter& tp, const std::string& name, const RatVector& a, const Rational& rhs,
               const std::vector<std::string>& vars) {
  w.start(name + ":");
  bool any = false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j].is_zero()) continue;
    w.piece(tp(a[j], vars[j]));
    any = true;
  }
  if (!any) w.piece("0 " + vars.front());
  w.piece("<= " + tp.number(rhs));
  w.end();
}

}  // namespace

LpExport write_lp(const BinaryProgram& bp) {
  std::ostringstream body;
  TermPrinter tp;
  LineWriter w(body);
  const auto& vars = bp.variable_names();

  body << "Maximize\n";
  w.start("obj:");
  bool any = false;
  for (std::size_t j = 0; j < bp.num_variables(); ++j) {
    if (bp.objective()[j].is_zero()) continue;
    w.piece(tp(bp.objective()[j], vars[j]));
    any = true;
  }
  if (!any) w.piece("0 " + vars.front());
  w.end();

  body << "Subject To\n";
  for (const auto& row : bp.constraints()) {
    RatVector neg(row.coefficients.size());
    for (std::size_t j = 0; j < neg.size(); ++j) neg[j] = -row.coefficients[j];
    switch (row.sense) {
      case Sense::LessEqual: write_row(w, tp, row.name, row.coefficients, row.rhs, vars); break;
      case Sense::GreaterEqual: write_row(w, tp, row.name, neg, -row.rhs, vars); break;
      case Sense::Equal:
        write_row(w, tp, row.name + "_le", row.coefficients, row.rhs, vars);
        write_row(w, tp, row.name + "_ge", neg, -row.rhs, vars);
        break;
    }
  }
  body << "Binary\n";
  w.start("");
  for (const auto& v : vars) w.piece(v);
  w.end();
  body << "End\n";

  std::ostringstream out;
  out << "\\ Problem: " << (bp.name().empty() ? "binary program" : bp.name()) << '\n';
  if (!tp.exact)
    out << "\\ WARNING: some coefficients are rounded decimals; exact rationals are in the JSON sidecar\n";
  out << body.str();
  return LpExport{out.str(), tp.exact};
}

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

enum class Section { None, Objective, Constraints, Bounds, Binary, End };

Section section_of(const std::string& line, bool& minimize) {
  const std::string l = lower(line);
  if (l == "maximize" || l == "maximum" || l == "max" || l == "maximise") return Section::Objective;
  if (l == "minimize" || l == "minimum" || l == "min" || l == "minimise") {
    minimize = true;
    return Section::Objective;
  }
  if (l == "subject to" || l == "such that" || l == "st" || l == "s.t.") return Section::Constraints;
  if (l == "bounds" || l == "bound") return Section::Bounds;
  if (l == "binary" || l == "binaries" || l == "bin") return Section::Binary;
  if (l == "end") return Section::End;
  return Section::None;
}

struct LinearExpr {
  std::vector<std::pair<std::string, Rational>> terms;
  std::string op;
  Rational rhs;
};

LinearExpr parse_expression(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) {
    // split glued signs such as "+2" "-x1"
    tokens.push_back(t);
  }
  LinearExpr e;
  Rational sign = 1;
  std::optional<Rational> coef;
  bool rhs_next = false;
  for (const auto& t : tokens) {
    if (rhs_next) {
      e.rhs = Rational::parse(t);
      rhs_next = false;
      continue;
    }
    if (t == "+") continue;
    if (t == "-") {
      sign = -sign;
      continue;
    }
    if (t == "<=" || t == ">=" || t == "=" || t == "=<" || t == "=>" || t == "<" || t == ">") {
      e.op = t;
      rhs_next = true;
      continue;
    }
    const char c0 = t[0];
    if (std::isdigit(static_cast<unsigned char>(c0)) || c0 == '.' ||
        ((c0 == '-' || c0 == '+') && t.size() > 1 && (std::isdigit(static_cast<unsigned char>(t[1])) || t[1] == '.'))) {
      coef = Rational::parse(t);
      continue;
    }
    if (c0 == '-' || c0 == '+') {
      if (c0 == '-') sign = -sign;
      e.terms.emplace_back(t.substr(1), sign * coef.value_or(Rational(1)));
    } else {
      e.terms.emplace_back(t, sign * coef.value_or(Rational(1)));
    }
    sign = 1;
    coef.reset();
  }
  if (rhs_next) throw ParseError("missing right-hand side in LP row");
  return e;
}

}  // namespace

BinaryProgram read_lp(const std::string& text) {
  std::istringstream in(text);
  Section section = Section::None;
  bool minimize = false;
  std::string objective_text;
  std::vector<std::string> row_texts;
  std::vector<std::string> binaries;
  std::string pending;

  auto flush_row = [&] {
    if (!pending.empty()) row_texts.push_back(pending);
    pending.clear();
  };

  for (std::string line; std::getline(in, line);) {
    if (auto bs = line.find('\\'); bs != std::string::npos) line.erase(bs);
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
    trimmed.erase(trimmed.find_last_not_of(" \t\r") + 1);
    if (trimmed.empty()) continue;
    Section s = section_of(trimmed, minimize);
    if (s != Section::None) {
      flush_row();
      section = s;
      if (section == Section::End) break;
      continue;
    }
    switch (section) {
      case Section::Objective: objective_text += " " + trimmed; break;
      case Section::Constraints:
        // a row ends once its relational operator and rhs have been seen
        pending += " " + trimmed;
        if (pending.find_first_of("<>=") != std::string::npos) {
          auto pos = pending.find_last_of("<>=");
          if (pending.find_first_not_of(" \t", pos + 1) != std::string::npos) flush_row();
        }
        break;
      case Section::Binary: {
        std::istringstream names(trimmed);
        for (std::string v; names >> v;) binaries.push_back(v);
        break;
      }
      case Section::Bounds: break;
      case Section::None: throw ParseError("LP text before any section header");
      case Section::End: break;
    }
  }
  flush_row();

  auto split_label = [](const std::string& s, std::string& label) {
    auto colon = s.find(':');
    if (colon == std::string::npos) return s;
    label = s.substr(0, colon);
    label.erase(0, label.find_first_not_of(" \t"));
    label.erase(label.find_last_not_of(" \t") + 1);
    return s.substr(colon + 1);
  };

  std::vector<std::string> order = binaries;
  std::map<std::string, std::size_t> index;
  for (std::size_t j = 0; j < order.size(); ++j) index.emplace(order[j], j);
  auto var_index = [&](const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    index.emplace(name, order.size());
    order.push_back(name);
    return order.size() - 1;
  };

  std::string obj_label;
  LinearExpr obj = parse_expression(split_label(objective_text, obj_label));
  for (const auto& [v, c] : obj.terms) var_index(v);
  std::vector<std::pair<std::string, LinearExpr>> rows;
  for (const auto& rt : row_texts) {
    std::string label;
    LinearExpr e = parse_expression(split_label(rt, label));
    if (e.op.empty()) throw ParseError("LP row without relational operator: " + rt);
    for (const auto& [v, c] : e.terms) var_index(v);
    rows.emplace_back(label, std::move(e));
  }
  if (order.empty()) throw ParseError("LP model without variables");

  const std::size_t n = order.size();
  RatVector objective(n);
  for (const auto& [v, c] : obj.terms) objective[index.at(v)] += minimize ? -c : c;
  BinaryProgram bp(n, std::move(objective), order);
  for (auto& [label, e] : rows) {
    RatVector a(n);
    for (const auto& [v, c] : e.terms) a[index.at(v)] += c;
    Sense s = (e.op[0] == '<' || e.op == "=<") ? Sense::LessEqual
              : (e.op[0] == '>' || e.op == "=>") ? Sense::GreaterEqual
                                                 : Sense::Equal;
    bp.add_constraint(std::move(a), s, e.rhs, label);
  }
  return bp;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BinaryProgram load_model(const std::string& path) {
  const std::string text = read_text_file(path);
  const bool lp_ext = path.size() > 3 && lower(path.substr(path.size() - 3)) == ".lp";
  const auto first = text.find_first_not_of(" \t\r\n");
  if (!lp_ext && first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ParseError(std::string("invalid JSON in '") + path + "': " + e.what());
    }
    return model_from_json(j);
  }
  return read_lp(text);
}

}  // namespace diapoly
