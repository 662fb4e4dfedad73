#include <algorithm>
#include <fstream>
#include <sstream>

#include "lintegra/errors.hpp"
#include "lintegra/spec.hpp"

namespace lintegra {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_trim(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::string piece;
  std::istringstream in(s);
  while (std::getline(in, piece, delim)) out.push_back(trim(piece));
  if (!s.empty() && s.back() == delim) out.push_back("");
  return out;
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw DomainError("key '" + key + "' expects an integer, got '" + value + "'");
  }
}

Rational parse_rational(const std::string& key, const std::string& value) {
  try {
    return Rational::from_string(value);
  } catch (const std::exception&) {
    throw DomainError("key '" + key + "' expects a rational, got '" + value + "'");
  }
}

ExprPtr parse_value_expr(const std::string& key, const std::string& value,
                         const std::set<std::string>& declared) {
  try {
    return parse_expr(value, declared);
  } catch (const ParseError& err) {
    throw ParseError("in value of '" + key + "': " + err.what(), err.offset);
  }
}

// "table v0, v1, ... [period k] [offset j]" after the leading keyword
CoeffSeq parse_table(const std::string& key, const std::string& body) {
  std::string spaced = body;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream in(spaced);
  std::vector<Rational> values;
  std::optional<long> period;
  long offset = 0;
  std::string tok;
  while (in >> tok) {
    if (tok == "period" || tok == "offset") {
      std::string num;
      if (!(in >> num)) throw DomainError("key '" + key + "': '" + tok + "' needs a value");
      if (tok == "period") period = parse_long(key, num);
      else offset = parse_long(key, num);
    } else {
      values.push_back(parse_rational(key, tok));
    }
  }
  return CoeffSeq::table(std::move(values), offset, period);
}

struct MappingCommon {
  std::string name = "unnamed";
  std::string type;
  std::vector<std::pair<std::string, std::string>> rest;  // non-reserved keys
};

MappingCommon mapping_common(const RawSection& sec) {
  MappingCommon out;
  for (const auto& [key, value] : sec.entries) {
    if (key == "name") out.name = value;
    else if (key == "type") out.type = value;
    else out.rest.emplace_back(key, value);
  }
  if (out.type.empty()) throw DomainError("[mapping] requires a 'type' key");
  return out;
}

std::set<std::string> param_names(const std::map<std::string, ParamDef>& params) {
  std::set<std::string> names;
  for (const auto& [k, v] : params) names.insert(k);
  return names;
}

ExprPtr coeff_in(const SparsePoly& p, const std::string& var, unsigned k) {
  auto cs = p.coeffs_in(var);
  if (cs.size() <= k) return expr_const(Rational(0));
  return sparse_to_expr(cs[k]);
}

}  // namespace

PolyFrac update_polyfrac(const ExprPtr& e) {
  std::map<std::string, PolyFrac> env;
  for (const auto& s : free_symbols(e)) env[s] = PolyFrac::variable(s);
  return eval_expr<PolyFrac>(e, env, PolyFrac());
}

ParamInstance instantiate_params(const std::map<std::string, ParamDef>& params,
                                 RandomRationalGen& gen) {
  ParamInstance inst;
  for (const auto& [name, def] : params) {
    if (def.random) {
      Rational v = gen.next();
      inst.random_values[name] = v;
      inst.seqs[name] = CoeffSeq::constant(v);
    } else {
      inst.seqs[name] = def.seq;
    }
  }
  return inst;
}

std::vector<RawSection> read_spec_sections(const std::string& text) {
  std::vector<RawSection> sections;
  std::istringstream in(text);
  std::string raw;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("unterminated section header on line " + std::to_string(lineno), 0);
      sections.push_back({trim(line.substr(1, line.size() - 2)), {}});
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value' on line " + std::to_string(lineno), 0);
    if (sections.empty())
      throw ParseError("content before the first section header on line " +
                           std::to_string(lineno), 0);
    sections.back().entries.emplace_back(trim(line.substr(0, eq)),
                                         trim(line.substr(eq + 1)));
  }
  return sections;
}

ExprPtr sparse_to_expr(const SparsePoly& p) {
  ExprPtr acc = expr_const(Rational(0));
  bool first = true;
  for (const auto& [mono, coeff] : p.terms()) {
    ExprPtr term = expr_const(coeff);
    for (const auto& [var, e] : mono) term = expr_mul(term, expr_pow(expr_sym(var), e));
    acc = first ? term : expr_add(acc, term);
    first = false;
  }
  return acc;
}

SpecFile parse_specfile(const std::string& text) {
  auto sections = read_spec_sections(text);
  auto find = [&](const std::string& name) -> const RawSection* {
    const RawSection* hit = nullptr;
    for (const auto& s : sections) {
      if (s.name != name) continue;
      if (hit) throw DomainError("duplicate section [" + name + "]");
      hit = &s;
    }
    return hit;
  };

  SpecFile out;
  std::map<std::string, ParamDef> params;
  if (const RawSection* sec = find("coefficients")) {
    for (const auto& [key, value] : sec->entries) {
      if (params.count(key)) throw DomainError("duplicate coefficient '" + key + "'");
      ParamDef def;
      if (value == "random") {
        def.random = true;
      } else if (value.rfind("table", 0) == 0 &&
                 (value.size() == 5 || value[5] == ' ' || value[5] == '\t')) {
        def.seq = parse_table(key, value.substr(5));
      } else {
        def.seq = CoeffSeq::closed(parse_value_expr(key, value, {"n"}));
      }
      params[key] = std::move(def);
    }
  }

  if (const RawSection* sec = find("probe")) {
    for (const auto& [key, value] : sec->entries) {
      if (key == "T") out.probe.T = static_cast<int>(parse_long(key, value));
      else if (key == "nmax") out.probe.n_max = static_cast<int>(parse_long(key, value));
      else if (key == "seed") out.probe.seed = static_cast<std::uint64_t>(parse_long(key, value));
      else if (key == "n0") out.probe.n0 = parse_long(key, value);
      else if (key == "variable") out.probe.variable = value;
      else if (key == "sites") out.probe.sites = split_trim(value, ',');
      else if (key == "witness") {
        auto parts = split_trim(value, ',');
        if (parts.size() != 2)
          throw DomainError("'witness' expects two comma-separated rationals");
        out.probe.witnesses = {parse_rational(key, parts[0]), parse_rational(key, parts[1])};
        if (out.probe.witnesses->first == out.probe.witnesses->second)
          throw DomainError("witness values must be distinct");
      } else throw DomainError("unknown [probe] key '" + key + "'");
    }
    if (out.probe.T < 4) throw DomainError("probe truncation T must be >= 4");
    if (out.probe.n_max < 2) throw DomainError("probe nmax must be >= 2");
  }

  if (const RawSection* sec = find("run")) {
    for (const auto& [key, value] : sec->entries) {
      if (key == "N") out.run.N = parse_long(key, value);
      else if (key == "seed") out.run.seed = static_cast<std::uint64_t>(parse_long(key, value));
      else if (key == "x0") out.run.x0 = parse_rational(key, value);
      else if (key == "x1") out.run.x1 = parse_rational(key, value);
      else if (key.rfind("init.", 0) == 0) out.run.init[key.substr(5)] = parse_rational(key, value);
      else throw DomainError("unknown [run] key '" + key + "'");
    }
  }

  if (const RawSection* sec = find("derivmatch")) out.derivmatch = *sec;
  if (const RawSection* sec = find("ode")) out.ode = *sec;

  const RawSection* mapping = find("mapping");
  if (!mapping) {
    if (out.derivmatch) out.kind = SpecKind::DerivMatch;
    else if (out.ode) out.kind = SpecKind::Ode;
    else throw DomainError("spec has no [mapping], [derivmatch], or [ode] section");
    return out;
  }

  MappingCommon common = mapping_common(*mapping);
  std::set<std::string> declared_params = param_names(params);

  if (common.type == "three-point") {
    MapSpec spec;
    spec.name = common.name;
    spec.params = params;
    std::set<std::string> declared = declared_params;
    declared.insert({"x", "xp", "n"});
    for (const auto& [key, value] : common.rest) {
      if (key != "update") throw DomainError("unknown three-point key '" + key + "'");
      if (spec.update) throw DomainError("duplicate 'update' key");
      spec.update = parse_value_expr(key, value, declared);
    }
    if (!spec.update) throw DomainError("three-point mapping requires 'update'");
    auto syms = free_symbols(spec.update);
    if (!syms.count("x") && !syms.count("xp"))
      throw DomainError("update must reference x or xp");
    update_polyfrac(spec.update);  // rejects division by a zero polynomial
    out.kind = SpecKind::ThreePoint;
    out.map = std::move(spec);
  } else if (common.type == "cascade") {
    CascadeSpec spec;
    spec.name = common.name;
    spec.params = params;
    std::set<std::string> declared = declared_params;
    declared.insert("n");
    for (const auto& [var, value] : common.rest) {
      for (const auto& st : spec.stages)
        if (st.var == var) throw DomainError("duplicate stage variable '" + var + "'");
      if (declared_params.count(var) || var == "n")
        throw DomainError("stage variable '" + var + "' shadows a declared name");
      declared.insert(var);
      CascadeStage stage;
      stage.var = var;
      try {
        stage.update = parse_value_expr(var, value, declared);
      } catch (const ParseError& err) {
        // a later-stage variable is simply undeclared at this point
        throw DomainError(std::string("stage '") + var + "': " + err.what());
      }
      PolyFrac pf = update_polyfrac(stage.update);
      if (pf.num().degree(var) > 1 || pf.den().degree(var) > 1)
        throw DomainError("stage '" + var + "' is not homographic in " + var);
      stage.a = coeff_in(pf.num(), var, 1);
      stage.b = coeff_in(pf.num(), var, 0);
      stage.c = coeff_in(pf.den(), var, 1);
      stage.d = coeff_in(pf.den(), var, 0);
      spec.stages.push_back(std::move(stage));
    }
    if (spec.stages.empty()) throw DomainError("cascade requires at least one stage");
    out.kind = SpecKind::Cascade;
    out.cascade = std::move(spec);
  } else if (common.type == "projective") {
    ProjectiveSpec spec;
    spec.name = common.name;
    spec.params = params;
    std::set<std::string> declared = declared_params;
    declared.insert("n");
    for (const auto& [key, value] : common.rest) {
      if (key != "matrix") throw DomainError("unknown projective key '" + key + "'");
      if (!spec.entries.empty()) throw DomainError("duplicate 'matrix' key");
      for (const auto& row : split_trim(value, ';')) {
        std::vector<ExprPtr> entries;
        for (const auto& cell : split_trim(row, ','))
          entries.push_back(parse_value_expr(key, cell, declared));
        spec.entries.push_back(std::move(entries));
      }
    }
    spec.dim = static_cast<int>(spec.entries.size());
    if (spec.dim < 2) throw DomainError("projective matrix must have dimension >= 2");
    for (const auto& row : spec.entries)
      if (static_cast<int>(row.size()) != spec.dim)
        throw DomainError("projective matrix must be square");
    out.kind = SpecKind::Projective;
    out.projective = std::move(spec);
  } else {
    throw DomainError("unknown mapping type '" + common.type + "'");
  }
  return out;
}

SpecFile load_specfile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_specfile(buf.str());
}

}  // namespace lintegra
