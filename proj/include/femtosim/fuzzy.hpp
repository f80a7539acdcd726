#pragma once

// Generic Mamdani-style fuzzy inference: membership evaluation, rule firing
// (min/max connectives with complement negation), clipped aggregation and
// centre-of-gravity defuzzification. Nothing in here knows about radio.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace femtosim::fuzzy {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Shape { Trapezoid, Triangle, OpenLeft, OpenRight };

// Piecewise-linear membership function. Breakpoints are nondecreasing and
// expressed in the owning variable's universe units. Open shoulders saturate
// at 1 toward their open side.
struct MembershipFunction {
  Shape shape = Shape::Trapezoid;
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  static MembershipFunction trapezoid(double a, double b, double c, double d) {
    check_order({a, b, c, d});
    return {Shape::Trapezoid, a, b, c, d};
  }
  static MembershipFunction triangle(double a, double b, double c) {
    check_order({a, b, c});
    return {Shape::Triangle, a, b, b, c};
  }
  // mu = 1 for x <= c, linear down to 0 at d.
  static MembershipFunction open_left(double c, double d) {
    check_order({c, d});
    return {Shape::OpenLeft, c, c, c, d};
  }
  // mu = 0 for x <= a, linear up to 1 at b, 1 beyond.
  static MembershipFunction open_right(double a, double b) {
    check_order({a, b});
    return {Shape::OpenRight, a, b, b, b};
  }

 private:
  static void check_order(std::initializer_list<double> xs) {
    double prev = -std::numeric_limits<double>::infinity();
    for (double x : xs) {
      if (!(x >= prev)) throw ConfigError("membership breakpoints must be nondecreasing");
      prev = x;
    }
  }
};

inline double rising_edge(double x, double lo, double hi) {
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  return (x - lo) / (hi - lo);
}

inline double evaluate_membership(const MembershipFunction& mf, double x) {
  switch (mf.shape) {
    case Shape::OpenLeft:
      if (x <= mf.c) return 1.0;
      return 1.0 - rising_edge(x, mf.c, mf.d);
    case Shape::OpenRight:
      return rising_edge(x, mf.a, mf.b);
    case Shape::Triangle:
    case Shape::Trapezoid: {
      if (x <= mf.a || x >= mf.d) {
        // Degenerate vertical edges keep the plateau value at the boundary.
        if (x == mf.a && mf.a == mf.b) return 1.0;
        if (x == mf.d && mf.c == mf.d) return 1.0;
        return 0.0;
      }
      if (x < mf.b) return rising_edge(x, mf.a, mf.b);
      if (x <= mf.c) return 1.0;
      return 1.0 - rising_edge(x, mf.c, mf.d);
    }
  }
  return 0.0;
}

struct Term {
  std::string label;
  MembershipFunction mf;
};

struct LinguisticVariable {
  std::string name;
  double lo = 0.0, hi = 1.0;
  std::string unit;
  std::vector<Term> terms;

  const Term& term(const std::string& label) const {
    for (const auto& t : terms)
      if (t.label == label) return t;
    throw ConfigError("unknown term '" + label + "' of variable '" + name + "'");
  }

  int term_index(const std::string& label) const {
    for (std::size_t i = 0; i < terms.size(); ++i)
      if (terms[i].label == label) return static_cast<int>(i);
    throw ConfigError("unknown term '" + label + "' of variable '" + name + "'");
  }

  // Every universe point must carry nonzero membership in some term, and term
  // labels must be unique.
  void validate() const {
    if (!(hi > lo)) throw ConfigError("variable '" + name + "': empty universe");
    if (terms.empty()) throw ConfigError("variable '" + name + "': no terms");
    for (std::size_t i = 0; i < terms.size(); ++i)
      for (std::size_t j = i + 1; j < terms.size(); ++j)
        if (terms[i].label == terms[j].label)
          throw ConfigError("variable '" + name + "': duplicate term '" + terms[i].label + "'");
    constexpr int kProbe = 512;
    for (int i = 0; i <= kProbe; ++i) {
      const double x = lo + (hi - lo) * i / kProbe;
      double best = 0.0;
      for (const auto& t : terms) best = std::max(best, evaluate_membership(t.mf, x));
      if (best <= 0.0)
        throw ConfigError("variable '" + name + "': universe not covered near x=" +
                          std::to_string(x));
    }
  }

  // Out-of-universe inputs clamp to the nearest universe endpoint.
  double membership(int term_idx, double x) const {
    const double xc = std::clamp(x, lo, hi);
    return evaluate_membership(terms[static_cast<std::size_t>(term_idx)].mf, xc);
  }
};

enum class Combiner { And, Or };

struct Antecedent {
  std::string variable;
  std::string term;
  bool negated = false;
};

struct Consequent {
  std::string variable;
  std::string term;
};

struct Rule {
  Combiner combiner = Combiner::And;
  std::vector<Antecedent> antecedents;
  std::vector<Consequent> consequents;
};

// Sampled membership curve of one output variable. The grid is strictly
// increasing and spans the output universe; aggregation produces a uniform
// grid but callers may construct sets on any valid grid.
struct FuzzyOutputSet {
  std::string variable;
  std::vector<double> grid;
  std::vector<double> mu;
};

// Centre of gravity by trapezoidal quadrature on the sample grid. An all-zero
// set defuzzifies to the universe midpoint ("neutral").
inline double defuzzify(const FuzzyOutputSet& set) {
  if (set.grid.size() < 2 || set.grid.size() != set.mu.size())
    throw ConfigError("defuzzify: invalid sample grid");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i + 1 < set.grid.size(); ++i) {
    const double h = set.grid[i + 1] - set.grid[i];
    num += 0.5 * h * (set.grid[i] * set.mu[i] + set.grid[i + 1] * set.mu[i + 1]);
    den += 0.5 * h * (set.mu[i] + set.mu[i + 1]);
  }
  if (den == 0.0) return 0.5 * (set.grid.front() + set.grid.back());
  return num / den;
}

// A registered vocabulary of input/output variables plus the rule list.
// Immutable once built; evaluation is pure and thread-safe.
class RuleBase {
 public:
  struct ResolvedAntecedent {
    int var = -1;
    int term = -1;
    bool negated = false;
  };
  struct ResolvedConsequent {
    int out_var = -1;
    int term = -1;
  };
  struct ResolvedRule {
    Combiner combiner;
    std::vector<ResolvedAntecedent> antecedents;
    std::vector<ResolvedConsequent> consequents;
  };

  void add_input(LinguisticVariable v) {
    v.validate();
    check_fresh_name(v.name);
    inputs_.push_back(std::move(v));
  }

  void add_output(LinguisticVariable v) {
    v.validate();
    check_fresh_name(v.name);
    outputs_.push_back(std::move(v));
  }

  void add_rule(const Rule& rule) {
    if (rule.antecedents.empty() || rule.consequents.empty())
      throw ConfigError("rule needs at least one antecedent and one consequent");
    ResolvedRule rr;
    rr.combiner = rule.combiner;
    for (const auto& a : rule.antecedents) {
      const int vi = input_index(a.variable);
      rr.antecedents.push_back({vi, inputs_[vi].term_index(a.term), a.negated});
    }
    for (const auto& c : rule.consequents) {
      const int vi = output_index(c.variable);
      rr.consequents.push_back({vi, outputs_[vi].term_index(c.term)});
    }
    rules_.push_back(rule);
    resolved_.push_back(std::move(rr));
  }

  const std::vector<LinguisticVariable>& inputs() const { return inputs_; }
  const std::vector<LinguisticVariable>& outputs() const { return outputs_; }
  const std::vector<Rule>& rules() const { return rules_; }

  int input_index(const std::string& name) const {
    for (std::size_t i = 0; i < inputs_.size(); ++i)
      if (inputs_[i].name == name) return static_cast<int>(i);
    throw ConfigError("unknown input variable '" + name + "'");
  }

  int output_index(const std::string& name) const {
    for (std::size_t i = 0; i < outputs_.size(); ++i)
      if (outputs_[i].name == name) return static_cast<int>(i);
    throw ConfigError("unknown output variable '" + name + "'");
  }

  // Antecedent degrees combine by min (AND) or max (OR); negation is 1 - mu.
  double fire_rule(std::size_t rule_idx, std::span<const double> crisp_by_input) const {
    const ResolvedRule& rr = resolved_[rule_idx];
    double acc = rr.combiner == Combiner::And ? 1.0 : 0.0;
    for (const auto& a : rr.antecedents) {
      double deg = inputs_[a.var].membership(a.term, crisp_by_input[a.var]);
      if (a.negated) deg = 1.0 - deg;
      acc = rr.combiner == Combiner::And ? std::min(acc, deg) : std::max(acc, deg);
    }
    return acc;
  }

  double fire_rule(const Rule& rule, const std::map<std::string, double>& crisp) const {
    double acc = rule.combiner == Combiner::And ? 1.0 : 0.0;
    for (const auto& a : rule.antecedents) {
      const auto it = crisp.find(a.variable);
      if (it == crisp.end()) throw ConfigError("no crisp input for variable '" + a.variable + "'");
      const int vi = input_index(a.variable);
      double deg = inputs_[vi].membership(inputs_[vi].term_index(a.term), it->second);
      if (a.negated) deg = 1.0 - deg;
      acc = rule.combiner == Combiner::And ? std::min(acc, deg) : std::max(acc, deg);
    }
    return acc;
  }

  std::vector<double> fire_all(std::span<const double> crisp_by_input) const {
    std::vector<double> act(resolved_.size());
    for (std::size_t r = 0; r < resolved_.size(); ++r) act[r] = fire_rule(r, crisp_by_input);
    return act;
  }

  // Min-implication (clip at activation) then pointwise-max merge across
  // rules. Rules with zero activation contribute nothing.
  FuzzyOutputSet aggregate(std::span<const double> activations, int output_var,
                           int grid_points = 201) const {
    const LinguisticVariable& out = outputs_[static_cast<std::size_t>(output_var)];
    FuzzyOutputSet set;
    set.variable = out.name;
    set.grid.resize(static_cast<std::size_t>(grid_points));
    set.mu.assign(static_cast<std::size_t>(grid_points), 0.0);
    for (int i = 0; i < grid_points; ++i)
      set.grid[static_cast<std::size_t>(i)] = out.lo + (out.hi - out.lo) * i / (grid_points - 1);
    for (std::size_t r = 0; r < resolved_.size(); ++r) {
      const double act = activations[r];
      if (act <= 0.0) continue;
      for (const auto& c : resolved_[r].consequents) {
        if (c.out_var != output_var) continue;
        const MembershipFunction& mf = out.terms[static_cast<std::size_t>(c.term)].mf;
        for (int i = 0; i < grid_points; ++i) {
          const std::size_t k = static_cast<std::size_t>(i);
          const double clipped = std::min(act, evaluate_membership(mf, set.grid[k]));
          set.mu[k] = std::max(set.mu[k], clipped);
        }
      }
    }
    return set;
  }

  FuzzyOutputSet aggregate(std::span<const double> activations, const std::string& output_var,
                           int grid_points = 201) const {
    return aggregate(activations, output_index(output_var), grid_points);
  }

  // Full inference: one crisp score per output variable.
  std::vector<double> infer(std::span<const double> crisp_by_input, int grid_points = 201) const {
    const std::vector<double> act = fire_all(crisp_by_input);
    std::vector<double> scores(outputs_.size());
    for (std::size_t o = 0; o < outputs_.size(); ++o)
      scores[o] = defuzzify(aggregate(act, static_cast<int>(o), grid_points));
    return scores;
  }

 private:
  void check_fresh_name(const std::string& name) const {
    for (const auto& v : inputs_)
      if (v.name == name) throw ConfigError("duplicate variable '" + name + "'");
    for (const auto& v : outputs_)
      if (v.name == name) throw ConfigError("duplicate variable '" + name + "'");
  }

  std::vector<LinguisticVariable> inputs_;
  std::vector<LinguisticVariable> outputs_;
  std::vector<Rule> rules_;
  std::vector<ResolvedRule> resolved_;
};

// --- JSON round-trip -------------------------------------------------------
//
// {
//   "variables": [
//     {"name": "...", "role": "input"|"output", "universe": [lo, hi],
//      "unit": "...", "terms": [{"label": "...", "shape": "trapezoid",
//      "points": [a,b,c,d]}, ...]},
//   ],
//   "rules": [
//     {"combiner": "and", "if": [{"var": "...", "term": "...",
//      "negate": false}, ...], "then": [{"var": "...", "term": "..."}]},
//   ]
// }

inline nlohmann::json mf_to_json(const MembershipFunction& mf) {
  nlohmann::json j;
  switch (mf.shape) {
    case Shape::Trapezoid:
      j["shape"] = "trapezoid";
      j["points"] = {mf.a, mf.b, mf.c, mf.d};
      break;
    case Shape::Triangle:
      j["shape"] = "triangle";
      j["points"] = {mf.a, mf.b, mf.d};
      break;
    case Shape::OpenLeft:
      j["shape"] = "open_left";
      j["points"] = {mf.c, mf.d};
      break;
    case Shape::OpenRight:
      j["shape"] = "open_right";
      j["points"] = {mf.a, mf.b};
      break;
  }
  return j;
}

inline MembershipFunction mf_from_json(const nlohmann::json& j) {
  const std::string shape = j.at("shape").get<std::string>();
  const auto pts = j.at("points").get<std::vector<double>>();
  auto need = [&](std::size_t n) {
    if (pts.size() != n)
      throw ConfigError("shape '" + shape + "' needs " + std::to_string(n) + " points");
  };
  if (shape == "trapezoid") {
    need(4);
    return MembershipFunction::trapezoid(pts[0], pts[1], pts[2], pts[3]);
  }
  if (shape == "triangle") {
    need(3);
    return MembershipFunction::triangle(pts[0], pts[1], pts[2]);
  }
  if (shape == "open_left") {
    need(2);
    return MembershipFunction::open_left(pts[0], pts[1]);
  }
  if (shape == "open_right") {
    need(2);
    return MembershipFunction::open_right(pts[0], pts[1]);
  }
  throw ConfigError("unknown membership shape '" + shape + "'");
}

inline nlohmann::json rulebase_to_json(const RuleBase& rb) {
  nlohmann::json j;
  j["variables"] = nlohmann::json::array();
  auto dump_var = [&](const LinguisticVariable& v, const char* role) {
    nlohmann::json jv;
    jv["name"] = v.name;
    jv["role"] = role;
    jv["universe"] = {v.lo, v.hi};
    jv["unit"] = v.unit;
    jv["terms"] = nlohmann::json::array();
    for (const auto& t : v.terms) {
      nlohmann::json jt = mf_to_json(t.mf);
      jt["label"] = t.label;
      jv["terms"].push_back(jt);
    }
    j["variables"].push_back(jv);
  };
  for (const auto& v : rb.inputs()) dump_var(v, "input");
  for (const auto& v : rb.outputs()) dump_var(v, "output");
  j["rules"] = nlohmann::json::array();
  for (const auto& r : rb.rules()) {
    nlohmann::json jr;
    jr["combiner"] = r.combiner == Combiner::And ? "and" : "or";
    jr["if"] = nlohmann::json::array();
    for (const auto& a : r.antecedents) {
      nlohmann::json ja = {{"var", a.variable}, {"term", a.term}};
      if (a.negated) ja["negate"] = true;
      jr["if"].push_back(ja);
    }
    jr["then"] = nlohmann::json::array();
    for (const auto& c : r.consequents)
      jr["then"].push_back({{"var", c.variable}, {"term", c.term}});
    j["rules"].push_back(jr);
  }
  return j;
}

inline RuleBase rulebase_from_json(const nlohmann::json& j) {
  RuleBase rb;
  for (const auto& jv : j.at("variables")) {
    LinguisticVariable v;
    v.name = jv.at("name").get<std::string>();
    const auto uni = jv.at("universe").get<std::vector<double>>();
    if (uni.size() != 2) throw ConfigError("universe must be [lo, hi]");
    v.lo = uni[0];
    v.hi = uni[1];
    v.unit = jv.value("unit", "");
    for (const auto& jt : jv.at("terms"))
      v.terms.push_back({jt.at("label").get<std::string>(), mf_from_json(jt)});
    const std::string role = jv.at("role").get<std::string>();
    if (role == "input")
      rb.add_input(std::move(v));
    else if (role == "output")
      rb.add_output(std::move(v));
    else
      throw ConfigError("variable role must be 'input' or 'output'");
  }
  for (const auto& jr : j.at("rules")) {
    Rule r;
    const std::string comb = jr.at("combiner").get<std::string>();
    if (comb == "and")
      r.combiner = Combiner::And;
    else if (comb == "or")
      r.combiner = Combiner::Or;
    else
      throw ConfigError("rule combiner must be 'and' or 'or'");
    for (const auto& ja : jr.at("if"))
      r.antecedents.push_back({ja.at("var").get<std::string>(), ja.at("term").get<std::string>(),
                               ja.value("negate", false)});
    for (const auto& jc : jr.at("then"))
      r.consequents.push_back({jc.at("var").get<std::string>(), jc.at("term").get<std::string>()});
    rb.add_rule(r);
  }
  return rb;
}

} // namespace femtosim::fuzzy
