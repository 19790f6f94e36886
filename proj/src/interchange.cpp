#include "newton/interchange.hpp"

#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace newton {

using nlohmann::json;

namespace {

std::string base_name(BaseSignalId id, const NewtonIR& ir) {
  return id.value < ir.fundamentals.size() ? ir.fundamentals[id.value] : "#" + std::to_string(id.value);
}

json optional_range(const std::optional<ComponentRange>& r) {
  if (!r) return nullptr;
  return json::array({r->lo, r->hi});
}

json exponent_json(const Integer& e) {
  if (!e.fits_slong_p()) return e.get_str();
  return static_cast<std::int64_t>(e.get_si());
}

}  // namespace

json to_json(const DimensionSignature& d, const NewtonIR& ir) {
  json out = json::object();
  for (const auto& [id, e] : d.terms()) out[base_name(id, ir)] = e.fraction_str();
  return out;
}

json to_json(const TypedExpr& e, const NewtonIR& ir) {
  json out;
  out["op"] = to_string(e.op);
  out["dim"] = to_json(e.dimension, ir);
  switch (e.op) {
    case ExprOp::Number: out["value"] = e.number; break;
    case ExprOp::Parameter:
      out["name"] = e.name;
      if (e.component) out["component"] = *e.component;
      break;
    case ExprOp::Constant:
    case ExprOp::Unit:
    case ExprOp::Signal: out["name"] = e.name; break;
    case ExprOp::Pow: out["exponent"] = e.exponent.fraction_str(); [[fallthrough]];
    default: {
      json args = json::array();
      for (const auto& child : e.operands) args.push_back(to_json(child, ir));
      out["args"] = std::move(args);
    }
  }
  return out;
}

json to_json(const DimensionMatrix& m, const NewtonIR& ir) {
  json rows = json::array();
  for (const auto id : m.rows) rows.push_back(base_name(id, ir));
  json entries = json::array();
  for (const auto& row : m.entries) {
    json r = json::array();
    for (const auto& x : row) r.push_back(x.fraction_str());
    entries.push_back(std::move(r));
  }
  return json{{"columns", m.columns}, {"rows", std::move(rows)}, {"entries", std::move(entries)}};
}

json to_json(const PiGroup& g, const DimensionMatrix& m) {
  json exps = json::array();
  for (const auto& col : m.columns) {
    Integer e = 0;
    for (const auto& t : g.terms) {
      if (t.quantity == col) e = t.exponent;
    }
    exps.push_back(exponent_json(e));
  }
  return json{{"exponents", std::move(exps)}, {"monomial", to_quotient_string(g)}};
}

json to_json(const CheckResult& r) {
  json rels = json::array();
  for (const auto& rel : r.relations) {
    json j{{"index", rel.index}, {"pass", rel.pass}};
    auto number = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    j["lhs"] = number(rel.lhs);
    j["rhs"] = number(rel.rhs);
    j["residual"] = number(rel.residual);
    if (!rel.reason.empty()) j["reason"] = rel.reason;
    rels.push_back(std::move(j));
  }
  json out{{"invariant", r.invariant}, {"pass", r.pass}, {"relations", std::move(rels)}};
  if (r.timestamp) out["t"] = *r.timestamp;
  return out;
}

json to_json(const InvariantInfo& info) {
  json params = json::array();
  for (const auto& p : info.params) {
    json dim = json::object();
    for (const auto& [base, e] : p.dimension) dim[base] = e.fraction_str();
    params.push_back(json{{"name", p.name},
                          {"signal", p.signal},
                          {"unit_symbol", p.unit_symbol ? json(*p.unit_symbol) : json(nullptr)},
                          {"dimension", std::move(dim)},
                          {"components", p.components}});
  }
  json ops = json::array();
  for (const auto op : info.operators) ops.push_back(ast::to_string(op));
  json groups = json::array();
  for (const auto& g : info.pi_groups) {
    json terms = json::object();
    for (const auto& t : g.terms) terms[t.quantity] = exponent_json(t.exponent);
    groups.push_back(json{{"exponents", std::move(terms)}, {"monomial", to_monomial_string(g)}});
  }
  return json{{"name", info.name},          {"params", std::move(params)}, {"relation_count", info.relation_count},
              {"operators", std::move(ops)}, {"n", info.quantity_count},    {"k", info.rank},
              {"pi_groups", std::move(groups)}};
}

json ir_to_json(const NewtonIR& ir) {
  json signals = json::array();
  for (const auto& s : ir.signals) {
    signals.push_back(json{
        {"id", s.id},
        {"name", s.name},
        {"unit_name", s.unit_name ? json{{"text", s.unit_name->text}, {"language", s.unit_name->language}}
                                  : json(nullptr)},
        {"unit_symbol", s.unit_symbol ? json(*s.unit_symbol) : json(nullptr)},
        {"fundamental", s.is_fundamental},
        {"dimension", to_json(s.dimension, ir)},
        {"index_range", optional_range(s.range)},
        {"components", s.components()},
    });
  }
  json constants = json::array();
  for (const auto& c : ir.constants) {
    constants.push_back(json{{"name", c.name}, {"value", c.value}, {"dimension", to_json(c.dimension, ir)}});
  }
  json invariants = json::array();
  for (const auto& inv : ir.invariants) {
    json params = json::array();
    for (const auto& p : inv.params) {
      params.push_back(json{{"name", p.name},
                            {"signal", p.signal},
                            {"dimension", to_json(p.dimension, ir)},
                            {"index_range", optional_range(p.range)}});
    }
    json relations = json::array();
    for (const auto& rel : inv.relations) {
      relations.push_back(
          json{{"op", ast::to_string(rel.op)}, {"lhs", to_json(rel.lhs, ir)}, {"rhs", to_json(rel.rhs, ir)}});
    }
    const DimensionMatrix m = dimension_matrix(inv, true);
    json groups = json::array();
    for (const auto& g : pi_groups(m)) groups.push_back(to_json(g, m));
    invariants.push_back(json{{"name", inv.name},
                              {"params", std::move(params)},
                              {"relations", std::move(relations)},
                              {"dimension_matrix", to_json(m, ir)},
                              {"n", m.column_count()},
                              {"k", rank(m)},
                              {"pi_groups", std::move(groups)}});
  }
  return json{{"format_version", kIrFormatVersion},
              {"fundamentals", ir.fundamentals},
              {"signals", std::move(signals)},
              {"constants", std::move(constants)},
              {"invariants", std::move(invariants)}};
}

std::string emit_ir(const NewtonIR& ir, IrStyle style) {
  return ir_to_json(ir).dump(style == IrStyle::Pretty ? 2 : -1) + "\n";
}

// ---------------------------------------------------------------------------
// Loading

namespace {

std::string child(const std::string& path, std::string_view key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') {
      escaped += "~0";
    } else if (c == '/') {
      escaped += "~1";
    } else {
      escaped += c;
    }
  }
  return path + "/" + escaped;
}

std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

class Loader {
 public:
  NewtonIR run(const json& doc) {
    expect_keys(doc, "", {"format_version", "fundamentals", "signals", "constants", "invariants"});
    const auto& version = doc.at("format_version");
    if (!version.is_string()) throw LoadError("/format_version", "must be a string");
    if (version.get<std::string>() != kIrFormatVersion) {
      throw LoadError("/format_version", "unsupported format version '" + version.get<std::string>() +
                                             "' (expected '" + std::string(kIrFormatVersion) + "')");
    }
    load_fundamentals(doc.at("fundamentals"));
    load_signals(doc.at("signals"));
    load_constants(doc.at("constants"));
    const auto& invs = array_at(doc, "", "invariants");
    for (std::size_t i = 0; i < invs.size(); ++i) load_invariant(invs[i], child("/invariants", i));
    return std::move(ir_);
  }

 private:
  static void expect_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> keys,
                          std::initializer_list<std::string_view> optional = {}) {
    if (!obj.is_object()) throw LoadError(path, "expected an object");
    for (auto k : keys) {
      if (!obj.contains(k)) throw LoadError(child(path, k), "missing required key");
    }
    for (const auto& [k, v] : obj.items()) {
      bool known = false;
      for (auto x : keys) known = known || x == k;
      for (auto x : optional) known = known || x == k;
      if (!known) throw LoadError(child(path, k), "unexpected key");
    }
  }

  static const json& array_at(const json& obj, const std::string& path, std::string_view key) {
    const auto& v = obj.at(key);
    if (!v.is_array()) throw LoadError(child(path, key), "expected an array");
    return v;
  }

  static std::string string_at(const json& obj, const std::string& path, std::string_view key) {
    const auto& v = obj.at(key);
    if (!v.is_string() || v.get<std::string>().empty()) throw LoadError(child(path, key), "expected a non-empty string");
    return v.get<std::string>();
  }

  static std::optional<std::string> optional_string_at(const json& obj, const std::string& path,
                                                       std::string_view key) {
    if (obj.at(key).is_null()) return std::nullopt;
    return string_at(obj, path, key);
  }

  static std::int64_t int_at(const json& obj, const std::string& path, std::string_view key) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw LoadError(child(path, key), "expected an integer");
    return v.get<std::int64_t>();
  }

  static Rational rational_at(const json& v, const std::string& path) {
    if (!v.is_string()) throw LoadError(path, "rational must be a \"p/q\" string");
    const auto text = v.get<std::string>();
    Rational r;
    try {
      r = Rational::parse(text);
    } catch (const std::exception& e) {
      throw LoadError(path, e.what());
    }
    if (r.fraction_str() != text) throw LoadError(path, "rational '" + text + "' is not in canonical p/q form");
    return r;
  }

  static std::optional<ComponentRange> range_at(const json& obj, const std::string& path) {
    const auto& v = obj.at("index_range");
    const auto p = child(path, "index_range");
    if (v.is_null()) return std::nullopt;
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
      throw LoadError(p, "expected null or [lo, hi]");
    }
    ComponentRange r{v[0].get<std::int64_t>(), v[1].get<std::int64_t>()};
    if (r.lo > r.hi) throw LoadError(p, "empty index range");
    return r;
  }

  DimensionSignature dimension_at(const json& v, const std::string& path) const {
    if (!v.is_object()) throw LoadError(path, "dimension must be an object");
    std::vector<std::pair<BaseSignalId, Rational>> terms;
    for (const auto& [base, e] : v.items()) {
      const auto it = base_ids_.find(base);
      if (it == base_ids_.end()) throw LoadError(child(path, base), "unknown fundamental signal '" + base + "'");
      Rational r = rational_at(e, child(path, base));
      if (r.is_zero()) throw LoadError(child(path, base), "zero exponents must be omitted");
      terms.emplace_back(it->second, std::move(r));
    }
    return DimensionSignature::from_terms(terms);
  }

  void claim_name(const std::string& name, const std::string& path) {
    if (!global_names_.insert(name).second) throw LoadError(path, "duplicate name '" + name + "'");
  }

  void load_fundamentals(const json& v) {
    if (!v.is_array()) throw LoadError("/fundamentals", "expected an array");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) throw LoadError(child("/fundamentals", i), "expected a string");
      const auto name = v[i].get<std::string>();
      if (!base_ids_.emplace(name, BaseSignalId{static_cast<std::uint32_t>(i)}).second) {
        throw LoadError(child("/fundamentals", i), "duplicate fundamental '" + name + "'");
      }
      ir_.fundamentals.push_back(name);
    }
  }

  void load_signals(const json& v) {
    if (!v.is_array()) throw LoadError("/signals", "expected an array");
    std::size_t next_base = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto path = child("/signals", i);
      const auto& s = v[i];
      expect_keys(s, path,
                  {"id", "name", "unit_name", "unit_symbol", "fundamental", "dimension", "index_range", "components"});
      SignalDef sig;
      if (int_at(s, path, "id") != static_cast<std::int64_t>(i)) {
        throw LoadError(child(path, "id"), "signal ids must equal table positions");
      }
      sig.id = static_cast<std::uint32_t>(i);
      sig.name = string_at(s, path, "name");
      claim_name(sig.name, child(path, "name"));
      if (!s.at("unit_name").is_null()) {
        const auto up = child(path, "unit_name");
        expect_keys(s.at("unit_name"), up, {"text", "language"});
        const auto& un = s.at("unit_name");
        if (!un.at("text").is_string() || !un.at("language").is_string()) throw LoadError(up, "expected strings");
        sig.unit_name = UnitName{un.at("text").get<std::string>(), un.at("language").get<std::string>()};
      }
      sig.unit_symbol = optional_string_at(s, path, "unit_symbol");
      if (sig.unit_symbol) claim_name(*sig.unit_symbol, child(path, "unit_symbol"));
      if (!s.at("fundamental").is_boolean()) throw LoadError(child(path, "fundamental"), "expected a boolean");
      sig.is_fundamental = s.at("fundamental").get<bool>();
      sig.dimension = dimension_at(s.at("dimension"), child(path, "dimension"));
      sig.range = range_at(s, path);
      if (int_at(s, path, "components") != sig.components()) {
        throw LoadError(child(path, "components"), "component count disagrees with index_range");
      }
      if (sig.is_fundamental) {
        if (next_base >= ir_.fundamentals.size() || ir_.fundamentals[next_base] != sig.name) {
          throw LoadError(child(path, "fundamental"), "fundamental signal '" + sig.name +
                                                          "' is out of order with the fundamentals list");
        }
        sig.base = BaseSignalId{static_cast<std::uint32_t>(next_base++)};
        if (sig.dimension != DimensionSignature::base(*sig.base)) {
          throw LoadError(child(path, "dimension"), "a fundamental signal's dimension must be itself");
        }
      }
      ir_.signals.push_back(std::move(sig));
    }
    if (next_base != ir_.fundamentals.size()) {
      throw LoadError("/fundamentals", "lists signals that are not declared fundamental");
    }
  }

  void load_constants(const json& v) {
    if (!v.is_array()) throw LoadError("/constants", "expected an array");
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto path = child("/constants", i);
      const auto& c = v[i];
      expect_keys(c, path, {"name", "value", "dimension"});
      ConstantDef def;
      def.name = string_at(c, path, "name");
      claim_name(def.name, child(path, "name"));
      if (!c.at("value").is_number()) throw LoadError(child(path, "value"), "expected a number");
      def.value = c.at("value").get<double>();
      def.dimension = dimension_at(c.at("dimension"), child(path, "dimension"));
      ir_.constants.push_back(std::move(def));
    }
  }

  TypedExpr load_expr(const json& v, const std::string& path, const InvariantDef& inv) const {
    if (!v.is_object() || !v.contains("op") || !v.at("op").is_string()) {
      throw LoadError(path, "expression node needs a string 'op'");
    }
    const auto op_text = v.at("op").get<std::string>();
    TypedExpr e;
    static const std::unordered_map<std::string, ExprOp> kOps = {
        {"num", ExprOp::Number}, {"param", ExprOp::Parameter}, {"const", ExprOp::Constant},
        {"unit", ExprOp::Unit},  {"neg", ExprOp::Negate},      {"add", ExprOp::Add},
        {"sub", ExprOp::Sub},    {"mul", ExprOp::Mul},         {"div", ExprOp::Div},
        {"pow", ExprOp::Pow}};
    const auto op_it = kOps.find(op_text);
    if (op_it == kOps.end()) throw LoadError(child(path, "op"), "unknown operation '" + op_text + "'");
    e.op = op_it->second;
    DimensionSignature expected;
    switch (e.op) {
      case ExprOp::Number: {
        expect_keys(v, path, {"op", "dim", "value"});
        const auto& value = v.at("value");
        if (!value.is_number_float()) throw LoadError(child(path, "value"), "expected a real number");
        e.number = value.get<double>();
        break;
      }
      case ExprOp::Parameter: {
        expect_keys(v, path, {"op", "dim", "name"}, {"component"});
        e.name = string_at(v, path, "name");
        const auto it = std::find_if(inv.params.begin(), inv.params.end(),
                                     [&](const InvariantParam& p) { return p.name == e.name; });
        if (it == inv.params.end()) {
          throw LoadError(child(path, "name"), "'" + e.name + "' is not a parameter of '" + inv.name + "'");
        }
        if (v.contains("component")) {
          e.component = int_at(v, path, "component");
          if (!it->range || !it->range->contains(*e.component)) {
            throw LoadError(child(path, "component"), "component out of range for '" + e.name + "'");
          }
        } else if (it->range) {
          throw LoadError(path, "indexed parameter '" + e.name + "' needs a component");
        }
        expected = it->dimension;
        break;
      }
      case ExprOp::Constant: {
        expect_keys(v, path, {"op", "dim", "name"});
        e.name = string_at(v, path, "name");
        const ConstantDef* c = ir_.find_constant(e.name);
        if (!c) throw LoadError(child(path, "name"), "unknown constant '" + e.name + "'");
        expected = c->dimension;
        break;
      }
      case ExprOp::Unit: {
        expect_keys(v, path, {"op", "dim", "name"});
        e.name = string_at(v, path, "name");
        const SignalDef* s = ir_.find_signal_by_symbol(e.name);
        if (!s) throw LoadError(child(path, "name"), "unknown unit symbol '" + e.name + "'");
        expected = s->dimension;
        break;
      }
      default: {
        const bool pow = e.op == ExprOp::Pow;
        if (pow) {
          expect_keys(v, path, {"op", "dim", "args", "exponent"});
          e.exponent = rational_at(v.at("exponent"), child(path, "exponent"));
        } else {
          expect_keys(v, path, {"op", "dim", "args"});
        }
        const auto& args = array_at(v, path, "args");
        const std::size_t arity = (pow || e.op == ExprOp::Negate) ? 1 : 2;
        if (args.size() != arity) {
          throw LoadError(child(path, "args"), "'" + op_text + "' takes " + std::to_string(arity) + " operand(s)");
        }
        for (std::size_t i = 0; i < arity; ++i) {
          e.operands.push_back(load_expr(args[i], child(child(path, "args"), i), inv));
        }
        switch (e.op) {
          case ExprOp::Negate: expected = e.operands[0].dimension; break;
          case ExprOp::Add:
          case ExprOp::Sub:
            if (e.operands[0].dimension != e.operands[1].dimension) {
              throw LoadError(path, "operands of '" + op_text + "' differ in dimension");
            }
            expected = e.operands[0].dimension;
            break;
          case ExprOp::Mul: expected = dim_mul(e.operands[0].dimension, e.operands[1].dimension); break;
          case ExprOp::Div: expected = dim_div(e.operands[0].dimension, e.operands[1].dimension); break;
          default: expected = dim_pow(e.operands[0].dimension, e.exponent); break;
        }
      }
    }
    e.dimension = dimension_at(v.at("dim"), child(path, "dim"));
    if (e.dimension != expected) throw LoadError(child(path, "dim"), "dimension annotation is inconsistent");
    return e;
  }

  void load_invariant(const json& v, const std::string& path) {
    expect_keys(v, path, {"name", "params", "relations", "dimension_matrix", "n", "k", "pi_groups"});
    InvariantDef inv;
    inv.name = string_at(v, path, "name");
    claim_name(inv.name, child(path, "name"));
    const auto& params = array_at(v, path, "params");
    std::unordered_set<std::string> param_names;
    for (std::size_t i = 0; i < params.size(); ++i) {
      const auto pp = child(child(path, "params"), i);
      expect_keys(params[i], pp, {"name", "signal", "dimension", "index_range"});
      InvariantParam p;
      p.name = string_at(params[i], pp, "name");
      if (!param_names.insert(p.name).second || global_names_.count(p.name)) {
        throw LoadError(child(pp, "name"), "parameter name '" + p.name + "' is not unique");
      }
      p.signal = string_at(params[i], pp, "signal");
      const SignalDef* sig = ir_.find_signal(p.signal);
      if (!sig) throw LoadError(child(pp, "signal"), "unknown signal '" + p.signal + "'");
      p.dimension = dimension_at(params[i].at("dimension"), child(pp, "dimension"));
      if (p.dimension != sig->dimension) throw LoadError(child(pp, "dimension"), "differs from the signal's dimension");
      p.range = range_at(params[i], pp);
      if (p.range != sig->range) throw LoadError(child(pp, "index_range"), "differs from the signal's index range");
      inv.params.push_back(std::move(p));
    }
    const auto& rels = array_at(v, path, "relations");
    if (rels.empty()) throw LoadError(child(path, "relations"), "an invariant needs at least one relation");
    for (std::size_t i = 0; i < rels.size(); ++i) {
      const auto rp = child(child(path, "relations"), i);
      expect_keys(rels[i], rp, {"op", "lhs", "rhs"});
      const auto& op = rels[i].at("op");
      const auto parsed = op.is_string() ? ast::parse_relop(op.get<std::string>()) : std::nullopt;
      if (!parsed) throw LoadError(child(rp, "op"), "unknown relational operator");
      InvariantRelation rel;
      rel.op = *parsed;
      rel.lhs = load_expr(rels[i].at("lhs"), child(rp, "lhs"), inv);
      rel.rhs = load_expr(rels[i].at("rhs"), child(rp, "rhs"), inv);
      if (rel.lhs.dimension != rel.rhs.dimension) throw LoadError(rp, "relation is not dimensionally homogeneous");
      inv.relations.push_back(std::move(rel));
    }
    const DimensionMatrix m = dimension_matrix(inv, true);
    if (v.at("dimension_matrix") != to_json(m, ir_)) {
      throw LoadError(child(path, "dimension_matrix"), "does not match the invariant's quantities");
    }
    if (int_at(v, path, "n") != static_cast<std::int64_t>(m.column_count())) {
      throw LoadError(child(path, "n"), "does not match the dimension matrix");
    }
    if (int_at(v, path, "k") != static_cast<std::int64_t>(rank(m))) {
      throw LoadError(child(path, "k"), "does not match the rank of the dimension matrix");
    }
    json groups = json::array();
    for (const auto& g : pi_groups(m)) groups.push_back(to_json(g, m));
    if (v.at("pi_groups") != groups) throw LoadError(child(path, "pi_groups"), "does not match recomputed groups");
    ir_.invariants.push_back(std::move(inv));
  }

  NewtonIR ir_;
  std::unordered_map<std::string, BaseSignalId> base_ids_;
  std::unordered_set<std::string> global_names_;
};

}  // namespace

NewtonIR ir_from_json(const json& doc) { return Loader().run(doc); }

NewtonIR load_ir(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw LoadError("", std::string("invalid JSON: ") + e.what());
  }
  return ir_from_json(doc);
}

}  // namespace newton
