#include "indde/specfile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace indde {

namespace {

constexpr double kEstimateLo = -10.0;
constexpr double kEstimateHi = 10.0;
constexpr double kEstimateStep = 1e-3;

struct Value {
  enum Kind { string, bare, list } kind = bare;
  std::string text;                // unquoted content for strings, raw text otherwise
  std::vector<std::string> items;  // list items
  std::size_t line = 0;
  std::size_t column = 0;          // 1-based column of the first content character
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::map<std::string, Value> entries;
  std::set<std::string> used;

  const Value* take(const std::string& key) {
    auto it = entries.find(key);
    if (it == entries.end()) return nullptr;
    used.insert(key);
    return &it->second;
  }
};

const std::set<std::string> kSections = {
    "system",   "matrix.Q",       "matrix.C",  "matrix.A", "matrix.B", "matrix.W",
    "delays",   "nonlinearities", "auxiliary", "impulses", "history",  "run"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double to_number(std::string_view text, std::size_t line, std::size_t column) {
  text = trim(text);
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
    throw SpecFileError("expected a number, got '" + std::string(text) + "'", line, column);
  }
  return v;
}

double number(const Value& v) {
  if (v.kind != Value::bare) throw SpecFileError("expected a number", v.line, v.column);
  return to_number(v.text, v.line, v.column);
}

std::size_t count_value(const Value& v) {
  const double d = number(v);
  if (!(d >= 1.0) || d != std::floor(d) || d > 1e9) {
    throw SpecFileError("expected a positive integer", v.line, v.column);
  }
  return static_cast<std::size_t>(d);
}

Expr expression(const Value& v, Var over) {
  if (v.kind == Value::list) throw SpecFileError("expected an expression", v.line, v.column);
  try {
    return parse_over(v.text, over);
  } catch (const ParseError& e) {
    throw SpecFileError(e.what(), v.line, v.column + e.offset());
  } catch (const Error& e) {
    throw SpecFileError(e.what(), v.line, v.column);
  }
}

Value parse_value(std::string_view raw, std::size_t line, std::size_t column) {
  Value v;
  v.line = line;
  v.column = column;
  if (raw.empty()) throw SpecFileError("missing value", line, column);
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') {
      throw SpecFileError("unterminated string", line, column);
    }
    v.kind = Value::string;
    v.text = std::string(raw.substr(1, raw.size() - 2));
    if (v.text.find('"') != std::string::npos) {
      throw SpecFileError("stray quote in string", line, column);
    }
    v.column = column + 1;
    return v;
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') throw SpecFileError("unterminated list", line, column);
    v.kind = Value::list;
    std::string_view body = raw.substr(1, raw.size() - 2);
    while (!trim(body).empty()) {
      const auto comma = body.find(',');
      v.items.emplace_back(trim(body.substr(0, comma)));
      if (v.items.back().empty()) throw SpecFileError("empty list item", line, column);
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
    return v;
  }
  v.kind = Value::bare;
  v.text = std::string(raw);
  return v;
}

std::vector<Section> tokenize(std::string_view text) {
  std::vector<Section> sections;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    bool quoted = false;
    for (std::size_t p = 0; p < line.size(); ++p) {
      if (line[p] == '"') quoted = !quoted;
      if (line[p] == '#' && !quoted) {
        line = line.substr(0, p);
        break;
      }
    }
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const std::size_t indent = static_cast<std::size_t>(body.data() - line.data());

    if (body.front() == '[') {
      if (body.back() != ']') throw SpecFileError("malformed section header", line_no, indent + 1);
      std::string name(trim(body.substr(1, body.size() - 2)));
      if (!kSections.count(name)) {
        throw SpecFileError("unknown section [" + name + "]", line_no, indent + 1);
      }
      if (!seen.insert(name).second) {
        throw SpecFileError("duplicate section [" + name + "]", line_no, indent + 1);
      }
      sections.push_back(Section{name, line_no, {}, {}});
      continue;
    }
    if (sections.empty()) throw SpecFileError("entry outside any section", line_no, indent + 1);

    std::size_t eq = std::string_view::npos;
    quoted = false;
    for (std::size_t p = 0; p < body.size(); ++p) {
      if (body[p] == '"') quoted = !quoted;
      if (body[p] == '=' && !quoted) {
        eq = p;
        break;
      }
    }
    if (eq == std::string_view::npos) throw SpecFileError("expected 'key = value'", line_no, indent + 1);
    std::string key;
    for (char c : trim(body.substr(0, eq))) {
      if (c == '\t') c = ' ';
      if (c == ' ' && !key.empty() && key.back() == ' ') continue;
      key.push_back(c);
    }
    if (key.empty()) throw SpecFileError("missing key", line_no, indent + 1);
    const std::string_view rest = body.substr(eq + 1);
    const std::string_view raw = trim(rest);
    const std::size_t col = indent + eq + 2 + static_cast<std::size_t>(raw.data() - rest.data());
    Value v = parse_value(raw, line_no, col);
    auto& entries = sections.back().entries;
    if (!entries.emplace(key, std::move(v)).second) {
      throw SpecFileError("duplicate key '" + key + "'", line_no, indent + 1);
    }
  }
  return sections;
}

Section* find(std::vector<Section>& sections, const std::string& name) {
  for (auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

// Looks up "<base><i+1>" then "<base>".
const Value* per_component(Section* s, const std::string& base, std::size_t i) {
  if (!s) return nullptr;
  if (const Value* v = s->take(base + std::to_string(i + 1))) return v;
  return s->take(base);
}

void mark_generic(Section* s, const std::string& base) {
  if (s && s->entries.count(base)) s->used.insert(base);
}

void expand_impulses(LoadedSpec& l) {
  auto& imp = l.spec.impulses;
  const std::size_t n = l.spec.dim;
  if (l.impulse_maps.empty()) {
    imp = ImpulseSchedule{};
    return;
  }
  imp.instants = imp.increment ? generate_instants(*imp.increment, l.generator_count,
                                                   l.integrator.horizon)
                               : l.explicit_instants;
  const std::size_t count = imp.instants.size();
  imp.maps.assign(n, {});
  imp.lipschitz.assign(n, {});
  imp.row_rate.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    imp.maps[i].assign(count, l.impulse_maps[i]);
    imp.lipschitz[i].assign(count, l.impulse_lip[i]);
    const std::string key = "p_i" + std::to_string(i + 1);
    if (l.estimated.count(key) || l.impulse_rate[i] < 0.0) {
      // Smallest rate compatible with every listed gap.
      double rate = 0.0;
      for (std::size_t k = 0; k < count; ++k) {
        const double gap = imp.instants[k] - (k == 0 ? 0.0 : imp.instants[k - 1]);
        if (gap > 0.0) rate = std::max(rate, l.impulse_lip[i] / gap);
      }
      l.impulse_rate[i] = rate;
      l.estimated.insert(key);
    }
    imp.row_rate[i] = l.impulse_rate[i];
  }
}

bool any_lipschitz_estimate(const std::set<std::string>& keys) {
  return std::any_of(keys.begin(), keys.end(),
                     [](const std::string& k) { return k.rfind("p_i", 0) != 0 || k.rfind("p_ik", 0) == 0; });
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(ErrorCode::spec_file,
            [&] {
              std::string msg = "spec violates its assumptions:";
              for (const auto& v : violations) msg += "\n  " + v.to_string();
              return msg;
            }()),
      violations_(std::move(violations)) {}

LoadedSpec parse_spec(std::string_view text) {
  std::vector<Section> sections = tokenize(text);
  LoadedSpec out;

  Section* system = find(sections, "system");
  if (!system) throw SpecFileError("missing [system] section", 1);
  const Value* nv = system->take("n");
  if (!nv) throw SpecFileError("[system] needs n", system->line);
  const std::size_t n = count_value(*nv);
  if (n > 64) throw SpecFileError("n is too large", nv->line, nv->column);

  SystemSpec& spec = out.spec;
  spec = SystemSpec::zero(n);
  if (const Value* v = system->take("name")) spec.name = v->text;
  if (const Value* v = system->take("reference_rho")) spec.reference_rho = number(*v);

  const std::pair<const char*, Matrix*> matrices[] = {
      {"matrix.Q", &spec.neutral}, {"matrix.C", &spec.linear}, {"matrix.A", &spec.instant},
      {"matrix.B", &spec.delayed}, {"matrix.W", &spec.distributed}};
  for (const auto& [name, m] : matrices) {
    Section* s = find(sections, name);
    if (!s) continue;
    for (auto& [key, v] : s->entries) {
      const auto sp = key.find(' ');
      if (sp == std::string::npos) {
        throw SpecFileError("matrix entries are keyed 'i j'", v.line);
      }
      const double i = to_number(key.substr(0, sp), v.line, 1);
      const double j = to_number(key.substr(sp + 1), v.line, 1);
      if (i < 1 || j < 1 || i > static_cast<double>(n) || j > static_cast<double>(n) ||
          i != std::floor(i) || j != std::floor(j)) {
        throw SpecFileError("index '" + key + "' outside 1.." + std::to_string(n), v.line);
      }
      (*m)(static_cast<std::size_t>(i) - 1, static_cast<std::size_t>(j) - 1) =
          expression(v, Var::t);
      s->used.insert(key);
    }
  }

  if (Section* s = find(sections, "delays")) {
    if (const Value* v = s->take("tau")) spec.neutral_delay = expression(*v, Var::t);
    if (const Value* v = s->take("delta")) spec.discrete_delay = expression(*v, Var::t);
    if (const Value* v = s->take("r")) spec.window_delay = expression(*v, Var::t);
    if (const Value* v = s->take("mu")) spec.delay_bound = number(*v);
  }

  {
    Section* s = find(sections, "nonlinearities");
    struct Act {
      const char* name;
      const char* lip;
      std::vector<Expr>* acts;
      std::vector<double>* lips;
    } acts[] = {{"f", "alpha", &spec.instant_act, &spec.instant_lip},
                {"g", "beta", &spec.delayed_act, &spec.delayed_lip},
                {"h", "gamma", &spec.distributed_act, &spec.distributed_lip}};
    for (const Act& a : acts) {
      for (std::size_t i = 0; i < n; ++i) {
        if (const Value* v = per_component(s, a.name, i)) (*a.acts)[i] = expression(*v, Var::x);
        if (const Value* v = per_component(s, a.lip, i)) {
          (*a.lips)[i] = number(*v);
        } else if ((*a.acts)[i].is_constant()) {
          (*a.lips)[i] = 0.0;
        } else {
          (*a.lips)[i] = lipschitz_estimate((*a.acts)[i], kEstimateLo, kEstimateHi, kEstimateStep);
          const std::string key = a.lip + std::to_string(i + 1);
          out.estimated.insert(key);
          out.warnings.push_back("estimated " + key + " = " + fmt((*a.lips)[i]) +
                                 " on a grid (non-rigorous)");
        }
      }
      mark_generic(s, a.name);
      mark_generic(s, a.lip);
    }
  }

  if (Section* s = find(sections, "auxiliary")) {
    for (std::size_t i = 0; i < n; ++i) {
      if (const Value* v = per_component(s, "v", i)) spec.aux[i] = expression(*v, Var::t);
      if (const Value* v = per_component(s, "eta", i)) spec.aux_floor[i] = number(*v);
    }
    mark_generic(s, "v");
    mark_generic(s, "eta");
  }

  if (Section* s = find(sections, "run")) {
    auto num_key = [&](const char* key, double& into) {
      if (const Value* v = s->take(key)) into = number(*v);
    };
    auto count_key = [&](const char* key, std::size_t& into) {
      if (const Value* v = s->take(key)) into = count_value(*v);
    };
    num_key("horizon", out.integrator.horizon);
    num_key("step", out.integrator.step);
    count_key("quad_points", out.integrator.quad_points);
    num_key("recovery_tol", out.integrator.recovery_tol);
    count_key("recovery_max_iter", out.integrator.recovery_max_iter);
    num_key("picard_grid", out.oracle.grid_step);
    num_key("picard_tol", out.oracle.tol);
    count_key("picard_max_iter", out.oracle.max_iter);
    num_key("sup_window", spec.window.t_max);
    num_key("sup_step", spec.window.step);
    try {
      check_config(out.integrator);
    } catch (const Error& e) {
      throw SpecFileError(e.what(), s->line);
    }
    if (!(out.oracle.grid_step > 0.0) || !(out.oracle.tol > 0.0)) {
      throw SpecFileError("picard_grid and picard_tol must be positive", s->line);
    }
  }

  if (Section* s = find(sections, "impulses")) {
    const Value* instants = s->take("instants");
    const Value* generator = s->take("generator");
    if (instants && generator) {
      throw SpecFileError("give either instants or generator, not both", generator->line);
    }
    if (instants) {
      if (instants->kind != Value::list) {
        throw SpecFileError("instants must be a list", instants->line, instants->column);
      }
      for (const auto& item : instants->items) {
        out.explicit_instants.push_back(to_number(item, instants->line, instants->column));
      }
    } else if (generator) {
      static constexpr std::string_view prefix = "t_{k-1}";
      std::string_view g = trim(generator->text);
      if (g.substr(0, prefix.size()) != prefix) {
        throw SpecFileError("generator must read 't_{k-1} + <expr in k>'", generator->line,
                            generator->column);
      }
      g.remove_prefix(prefix.size());
      const std::string_view after = trim(g);
      if (after.empty() || after.front() != '+') {
        throw SpecFileError("generator must read 't_{k-1} + <expr in k>'", generator->line,
                            generator->column);
      }
      Value inc = *generator;
      inc.text = std::string(after.substr(1));
      inc.column = generator->column +
                   static_cast<std::size_t>(after.data() + 1 - generator->text.data());
      spec.impulses.increment = expression(inc, Var::k);
      if (const Value* c = s->take("count")) out.generator_count = count_value(*c);
    } else if (!s->entries.empty()) {
      throw SpecFileError("[impulses] needs instants or generator", s->line);
    }
    if (instants || generator) {
      out.impulse_maps.assign(n, Expr{});
      out.impulse_lip.assign(n, 0.0);
      out.impulse_rate.assign(n, -1.0);
      for (std::size_t i = 0; i < n; ++i) {
        const std::string idx = std::to_string(i + 1);
        if (const Value* v = per_component(s, "map", i)) out.impulse_maps[i] = expression(*v, Var::x);
        if (const Value* v = per_component(s, "p_ik", i)) {
          out.impulse_lip[i] = number(*v);
        } else if (!out.impulse_maps[i].is_constant()) {
          out.impulse_lip[i] =
              lipschitz_estimate(out.impulse_maps[i], kEstimateLo, kEstimateHi, kEstimateStep);
          out.estimated.insert("p_ik" + idx);
          out.warnings.push_back("estimated p_ik" + idx + " = " + fmt(out.impulse_lip[i]) +
                                 " on a grid (non-rigorous)");
        }
        if (const Value* v = per_component(s, "p_i", i)) {
          out.impulse_rate[i] = number(*v);
        } else {
          out.estimated.insert("p_i" + idx);
        }
      }
      mark_generic(s, "map");
      mark_generic(s, "p_ik");
      mark_generic(s, "p_i");
    }
  }

  if (Section* s = find(sections, "history")) {
    for (std::size_t i = 0; i < n; ++i) {
      if (const Value* v = per_component(s, "phi", i)) spec.history[i] = expression(*v, Var::t);
    }
    mark_generic(s, "phi");
    if (const Value* v = s->take("lo")) spec.history_lo = number(*v);
  }

  for (const Section& s : sections) {
    for (const auto& [key, v] : s.entries) {
      if (!s.used.count(key)) {
        throw SpecFileError("unknown key '" + key + "' in [" + s.name + "]", v.line);
      }
    }
  }

  spec.estimated_constants = any_lipschitz_estimate(out.estimated);
  try {
    spec.theta_floor = theta(spec);
    expand_impulses(out);
  } catch (const SpecFileError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(std::vector<Violation>{{"eval", e.what()}});
  }
  if (auto violations = validate(spec); !violations.empty()) {
    throw ValidationError(std::move(violations));
  }
  return out;
}

LoadedSpec load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

void set_horizon(LoadedSpec& loaded, double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorCode::invalid_argument, "horizon must be positive");
  }
  loaded.integrator.horizon = horizon;
  // Derived rates depend on the schedule; recompute them.
  for (std::size_t i = 0; i < loaded.impulse_rate.size(); ++i) {
    if (loaded.estimated.count("p_i" + std::to_string(i + 1))) loaded.impulse_rate[i] = -1.0;
  }
  expand_impulses(loaded);
  if (auto violations = validate(loaded.spec); !violations.empty()) {
    throw ValidationError(std::move(violations));
  }
}

std::string serialize(const LoadedSpec& l) {
  const SystemSpec& s = l.spec;
  const std::size_t n = s.dim;
  std::ostringstream os;
  auto quote = [](const Expr& e) { return "\"" + e.print() + "\""; };

  os << "[system]\nn = " << n << "\n";
  if (!s.name.empty()) os << "name = \"" << s.name << "\"\n";
  if (s.reference_rho) os << "reference_rho = " << fmt(*s.reference_rho) << "\n";

  const std::pair<const char*, const Matrix*> matrices[] = {
      {"Q", &s.neutral}, {"C", &s.linear}, {"A", &s.instant},
      {"B", &s.delayed}, {"W", &s.distributed}};
  for (const auto& [name, m] : matrices) {
    if (m->is_zero()) continue;
    os << "\n[matrix." << name << "]\n";
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!(*m)(i, j).is_zero()) os << i + 1 << " " << j + 1 << " = " << quote((*m)(i, j)) << "\n";
  }

  os << "\n[delays]\ntau = " << quote(s.neutral_delay) << "\ndelta = " << quote(s.discrete_delay)
     << "\nr = " << quote(s.window_delay) << "\n";
  if (s.delay_bound) os << "mu = " << fmt(*s.delay_bound) << "\n";

  os << "\n[nonlinearities]\n";
  auto acts = [&](const char* name, const char* lip, const std::vector<Expr>& e,
                  const std::vector<double>& c) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::string idx = std::to_string(i + 1);
      os << name << idx << " = " << quote(e[i]) << "\n";
      if (!l.estimated.count(lip + idx)) os << lip << idx << " = " << fmt(c[i]) << "\n";
    }
  };
  acts("f", "alpha", s.instant_act, s.instant_lip);
  acts("g", "beta", s.delayed_act, s.delayed_lip);
  acts("h", "gamma", s.distributed_act, s.distributed_lip);

  os << "\n[auxiliary]\n";
  for (std::size_t i = 0; i < n; ++i) {
    os << "v" << i + 1 << " = " << quote(s.aux[i]) << "\neta" << i + 1 << " = "
       << fmt(s.aux_floor[i]) << "\n";
  }

  if (!l.impulse_maps.empty()) {
    os << "\n[impulses]\n";
    if (s.impulses.increment) {
      os << "generator = \"t_{k-1} + " << s.impulses.increment->print() << "\"\n";
      if (l.generator_count) os << "count = " << *l.generator_count << "\n";
    } else {
      os << "instants = [";
      for (std::size_t k = 0; k < l.explicit_instants.size(); ++k) {
        os << (k ? ", " : "") << fmt(l.explicit_instants[k]);
      }
      os << "]\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::string idx = std::to_string(i + 1);
      os << "map" << idx << " = " << quote(l.impulse_maps[i]) << "\n";
      if (!l.estimated.count("p_ik" + idx)) os << "p_ik" << idx << " = " << fmt(l.impulse_lip[i]) << "\n";
      if (!l.estimated.count("p_i" + idx)) os << "p_i" << idx << " = " << fmt(l.impulse_rate[i]) << "\n";
    }
  }

  os << "\n[history]\n";
  for (std::size_t i = 0; i < n; ++i) os << "phi" << i + 1 << " = " << quote(s.history[i]) << "\n";
  os << "lo = " << fmt(s.history_lo) << "\n";

  const IntegratorConfig& c = l.integrator;
  os << "\n[run]\nhorizon = " << fmt(c.horizon) << "\nstep = " << fmt(c.step)
     << "\nquad_points = " << c.quad_points << "\nrecovery_tol = " << fmt(c.recovery_tol)
     << "\nrecovery_max_iter = " << c.recovery_max_iter
     << "\npicard_grid = " << fmt(l.oracle.grid_step) << "\npicard_tol = " << fmt(l.oracle.tol)
     << "\npicard_max_iter = " << l.oracle.max_iter << "\nsup_window = " << fmt(s.window.t_max)
     << "\nsup_step = " << fmt(s.window.step) << "\n";
  return os.str();
}

namespace {

constexpr std::string_view kExample1 = R"spec(# Two-dimensional impulsive neutral system with a distributed delay.
[system]
n = 2
name = "ex5_1"
reference_rho = 0.7925

[matrix.Q]
1 1 = "0.1*sin(t)"
2 2 = "0.1*cos(t)"

[matrix.C]
1 1 = "-16"
1 2 = "2.5"
2 1 = "1.5"
2 2 = "-16"

[matrix.B]
1 1 = "0.3/(1 + exp(-t))"
2 2 = "0.4/(1 + exp(-t))"

[matrix.W]
1 1 = "0.2"
2 2 = "0.5"

[delays]
tau = "0.2"
delta = "0.2"
r = "0.2"
mu = 0.2

[nonlinearities]
g = "(abs(x + 1) - abs(x - 1))/2"
h = "sin(x)"
beta = 1
gamma = 1

[auxiliary]
v = "16"
eta = 16

[impulses]
generator = "t_{k-1} + 0.5*k"
map = "arctan(0.4*x)"
p_ik = 0.4
p_i = 0.8

[history]
phi1 = "cos(t)"
phi2 = "sin(t)"
lo = -1

[run]
horizon = 10
step = 0.001
)spec";

constexpr std::string_view kExample2 = R"spec(# Two-dimensional impulsive neutral system with state-dependent activations.
[system]
n = 2
name = "ex5_2"
reference_rho = 0.8832

[matrix.Q]
1 1 = "sin(t)^3/8"
2 2 = "0.2*sin(t)"

[matrix.C]
1 1 = "-18"
1 2 = "-0.5773502691896258"
2 1 = "0.5773502691896258"
2 2 = "-20"

[matrix.A]
1 1 = "0.01/(1 + t)"
2 2 = "0.01*exp(-t)"

[matrix.B]
1 1 = "0.999*cos(t)*sin(2*t)"
2 2 = "0.999*cos(t)^2"

[delays]
tau = "0.2*abs(sin(t))"
delta = "0.2*abs(sin(t))"
r = "0.2*abs(sin(t))"

[nonlinearities]
f = "0.2*tanh(2*x)"
g = "0.6*x"
alpha = 0.4
beta = 0.6

[auxiliary]
v = "20"
eta = 20

[impulses]
generator = "t_{k-1} + 0.5*k"
map = "arctan(0.4*x)"
p_ik = 0.4
p_i = 0.8

[history]
phi1 = "0.575*t - 0.5"
phi2 = "0.7*cos(t)"
lo = -1

[run]
horizon = 10
step = 0.001
)spec";

}  // namespace

std::optional<std::string_view> builtin_example(std::string_view name) {
  if (name == "ex5_1") return kExample1;
  if (name == "ex5_2") return kExample2;
  return std::nullopt;
}

std::vector<std::string> builtin_names() { return {"ex5_1", "ex5_2"}; }

}  // namespace indde
