#include "gca/problem.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

namespace gca {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw Error(Errc::ValidationError, "unknown key '" + it.key() + "' in " + where);
  }
}

Elem label_to_elem(const GroupPtr& g, const std::string& label, const std::string& where) {
  const Elem e = g->element_by_label(label);
  if (e < 0)
    throw Error(Errc::ValidationError, "unknown element label '" + label + "' in " + where);
  return e;
}

GroupPtr parse_group(const json& j, const std::string& name) {
  check_keys(j, {"preset", "cayley", "labels"}, "group " + name);
  if (j.contains("preset")) return Group::preset(j.at("preset").get<std::string>());
  if (!j.contains("cayley"))
    throw Error(Errc::ValidationError, "group " + name + " needs 'preset' or 'cayley'");
  const auto& table = j.at("cayley");
  // the table is given over labels; first row order fixes the indexing
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    for (const auto& l : j.at("labels")) labels.push_back(l.get<std::string>());
  } else {
    for (const auto& l : table.at(0)) labels.push_back(l.get<std::string>());
  }
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index[labels[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> t;
  for (const auto& row : table) {
    std::vector<int> r;
    for (const auto& cellv : row) {
      const std::string s = cellv.get<std::string>();
      auto it = index.find(s);
      if (it == index.end())
        throw Error(Errc::ValidationError, "unknown label '" + s + "' in group " + name);
      r.push_back(it->second);
    }
    t.push_back(std::move(r));
  }
  return Group::from_table(labels, t);
}

Shape parse_cells(const json& j, int dim, const std::string& where) {
  std::vector<Cell> cells;
  for (const auto& jc : j) {
    Cell c;
    for (const auto& v : jc) c.push_back(v.get<int>());
    if (static_cast<int>(c.size()) != dim)
      throw Error(Errc::ValidationError, "cell arity mismatch in " + where);
    cells.push_back(std::move(c));
  }
  return Shape(std::move(cells));
}

}  // namespace

json pattern_to_json(const Pattern& p) {
  json cells = json::array();
  json values = json::array();
  for (std::size_t i = 0; i < p.shape.size(); ++i) {
    cells.push_back(p.shape.cells()[i]);
    values.push_back(p.group->label(p.values[i]));
  }
  return json{{"cells", cells}, {"values", values}};
}

Pattern pattern_from_json(const json& j, const GroupPtr& g, int dim) {
  check_keys(j, {"cells", "values"}, "pattern");
  Pattern p;
  p.group = g;
  const Shape raw = parse_cells(j.at("cells"), dim, "pattern");
  std::vector<Cell> cells;
  for (const auto& jc : j.at("cells")) {
    Cell c;
    for (const auto& v : jc) c.push_back(v.get<int>());
    cells.push_back(std::move(c));
  }
  if (cells.size() != j.at("values").size())
    throw Error(Errc::ValidationError, "cells and values must be parallel arrays");
  if (raw.size() != cells.size())
    throw Error(Errc::ValidationError, "duplicate cells in pattern");
  // values follow the canonical cell order
  p.shape = raw;
  p.values.assign(raw.size(), 0);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const int idx = raw.index_of(cells[i]);
    p.values[static_cast<std::size_t>(idx)] =
        label_to_elem(g, j.at("values")[i].get<std::string>(), "pattern");
  }
  return p;
}

json config_to_json(const PeriodicConfiguration& c) {
  json rows = json::array();
  for (Elem v : c.fundamental) rows.push_back(c.group->label(v));
  return json{{"periods", c.periods}, {"rows", rows}};
}

PeriodicConfiguration config_from_json(const json& j, const GroupPtr& g) {
  check_keys(j, {"periods", "rows"}, "configuration");
  PeriodicConfiguration c;
  c.group = g;
  for (const auto& v : j.at("periods")) {
    const int k = v.get<int>();
    if (k <= 0) throw Error(Errc::ValidationError, "periods must be positive");
    c.periods.push_back(k);
  }
  for (const auto& v : j.at("rows"))
    c.fundamental.push_back(label_to_elem(g, v.get<std::string>(), "configuration"));
  if (static_cast<std::int64_t>(c.fundamental.size()) != c.volume())
    throw Error(Errc::ValidationError, "row data does not match the fundamental box");
  return c;
}

json shift_to_json(const ShiftPtr& x) {
  json out;
  out["dimension"] = x->dim();
  out["alphabet_order"] = x->alphabet()->order();
  if (x->zero_dim()) {
    json members = json::array();
    for (Elem e : x->members().members) members.push_back(x->alphabet()->label(e));
    out["members"] = members;
  } else {
    json pats = json::array();
    for (const auto& p : x->forbidden()) pats.push_back(pattern_to_json(p));
    out["forbidden"] = pats;
  }
  return out;
}

json report_to_json(const DecisionReport& r) {
  json out;
  out["property"] = r.property;
  out["verdict"] = r.verdict == Verdict::Yes    ? json(true)
                   : r.verdict == Verdict::No ? json(false)
                                              : json("budget_exceeded");
  if (r.pattern_certificate) out["certificate"] = pattern_to_json(*r.pattern_certificate);
  if (r.config_certificate) out["certificate"] = config_to_json(*r.config_certificate);
  if (!r.details.empty()) {
    json d;
    for (const auto& [k, v] : r.details) d[k] = v;
    out["details"] = d;
  }
  out["wall_ms"] = r.wall_ms;
  return out;
}

ProblemFile parse_problem_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, e.what());
  }
  check_keys(j, {"groups", "shifts", "maps", "patterns", "configs", "defaults"}, "problem file");
  ProblemFile pf;

  if (j.contains("defaults")) {
    const auto& d = j.at("defaults");
    check_keys(d, {"max_period", "max_box", "max_steps"}, "defaults");
    if (d.contains("max_period")) pf.defaults.max_period = d.at("max_period").get<int>();
    if (d.contains("max_box")) pf.defaults.max_box = d.at("max_box").get<int>();
    if (d.contains("max_steps")) pf.defaults.max_steps = d.at("max_steps").get<std::int64_t>();
  }

  if (j.contains("groups"))
    for (auto it = j.at("groups").begin(); it != j.at("groups").end(); ++it)
      pf.groups[it.key()] = parse_group(it.value(), it.key());

  auto find_group = [&](const std::string& name, const std::string& where) {
    auto it = pf.groups.find(name);
    if (it == pf.groups.end())
      throw Error(Errc::ValidationError, "unresolved group reference '" + name + "' in " + where);
    return it->second;
  };

  if (j.contains("shifts")) {
    for (auto it = j.at("shifts").begin(); it != j.at("shifts").end(); ++it) {
      const auto& js = it.value();
      check_keys(js, {"group", "dimension", "forbidden", "members"}, "shift " + it.key());
      const GroupPtr g = find_group(js.at("group").get<std::string>(), "shift " + it.key());
      const int dim = js.at("dimension").get<int>();
      if (dim == 0 && js.contains("members")) {
        Subgroup s;
        s.parent = g;
        for (const auto& v : js.at("members"))
          s.members.push_back(label_to_elem(g, v.get<std::string>(), "shift " + it.key()));
        std::sort(s.members.begin(), s.members.end());
        pf.shifts[it.key()] = Shift::from_subgroup(std::move(s));
        continue;
      }
      std::vector<Pattern> pats;
      if (js.contains("forbidden"))
        for (const auto& jp : js.at("forbidden")) pats.push_back(pattern_from_json(jp, g, dim));
      pf.shifts[it.key()] = Shift::from_patterns(g, dim, std::move(pats));
    }
  }

  if (j.contains("patterns")) {
    for (auto it = j.at("patterns").begin(); it != j.at("patterns").end(); ++it) {
      const auto& jp = it.value();
      check_keys(jp, {"group", "dimension", "cells", "values"}, "pattern " + it.key());
      const GroupPtr g = find_group(jp.at("group").get<std::string>(), "pattern " + it.key());
      int dim = jp.contains("dimension") ? jp.at("dimension").get<int>() : -1;
      if (dim < 0) dim = static_cast<int>(jp.at("cells").at(0).size());
      pf.patterns[it.key()] =
          pattern_from_json(json{{"cells", jp.at("cells")}, {"values", jp.at("values")}}, g, dim);
    }
  }

  if (j.contains("configs")) {
    for (auto it = j.at("configs").begin(); it != j.at("configs").end(); ++it) {
      const auto& jc = it.value();
      check_keys(jc, {"group", "periods", "rows"}, "config " + it.key());
      const GroupPtr g = find_group(jc.at("group").get<std::string>(), "config " + it.key());
      pf.configs[it.key()] =
          config_from_json(json{{"periods", jc.at("periods")}, {"rows", jc.at("rows")}}, g);
    }
  }

  if (j.contains("maps")) {
    for (auto it = j.at("maps").begin(); it != j.at("maps").end(); ++it) {
      const auto& jm = it.value();
      check_keys(jm, {"domain", "target", "neighborhood", "rule", "endomorphism"},
                 "map " + it.key());
      auto sit = pf.shifts.find(jm.at("domain").get<std::string>());
      if (sit == pf.shifts.end())
        throw Error(Errc::ValidationError,
                    "unresolved shift reference in map " + it.key());
      const ShiftPtr domain = sit->second;
      const GroupPtr g = domain->alphabet();
      const GroupPtr target = jm.contains("target")
                                  ? find_group(jm.at("target").get<std::string>(), "map " + it.key())
                                  : g;
      const Shape n = parse_cells(jm.at("neighborhood"), domain->dim(), "map " + it.key());
      const bool want_ca = jm.contains("endomorphism") ? jm.at("endomorphism").get<bool>()
                                                       : target->same_as(*g);
      const auto& jr = jm.at("rule");
      check_keys(jr, {"table", "word"}, "rule of map " + it.key());
      std::unordered_map<Elem, Elem> rule;
      if (jr.contains("word")) {
        const Subgroup allowed = allowed_patterns(domain, n, pf.defaults);
        rule = compile_rule_word(jr.at("word").get<std::string>(), g, target, n, allowed.members);
      } else {
        for (const auto& entry : jr.at("table")) {
          check_keys(entry, {"pattern", "value"}, "rule entry of map " + it.key());
          const auto& jp = entry.at("pattern");
          if (jp.size() != n.size())
            throw Error(Errc::ValidationError, "rule pattern arity mismatch in map " + it.key());
          Elem code = 0;
          for (const auto& v : jp)
            code = code * g->order() + label_to_elem(g, v.get<std::string>(), "map " + it.key());
          rule[code] = label_to_elem(target, entry.at("value").get<std::string>(), "map " + it.key());
        }
      }
      pf.maps.emplace(it.key(), make_hom(domain, target, n, std::move(rule), want_ca, pf.defaults));
    }
  }
  return pf;
}

ProblemFile parse_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

namespace {

const ShiftPtr& named_shift(const ProblemFile& pf, const std::string& name) {
  auto it = pf.shifts.find(name);
  if (it == pf.shifts.end())
    throw Error(Errc::ValidationError, "no shift named '" + name + "'");
  return it->second;
}

const Hom& named_map(const ProblemFile& pf, const std::string& name) {
  auto it = pf.maps.find(name);
  if (it == pf.maps.end()) throw Error(Errc::ValidationError, "no map named '" + name + "'");
  return it->second;
}

const std::string& need(const CommandOptions& o, const std::string& key) {
  auto it = o.args.find(key);
  if (it == o.args.end())
    throw Error(Errc::ValidationError, "missing required argument '" + key + "'");
  return it->second;
}

json verdict_entry(const std::string& property, bool verdict) {
  return json{{"property", property}, {"verdict", verdict}};
}

}  // namespace

std::string render_orbit_text(const Hom& f, const PeriodicConfiguration& c0, int steps) {
  if (f.dim() != 1) throw Error(Errc::NotOneDimensional, "orbit rendering needs d = 1");
  if (!torus_member(c0, *f.domain))
    throw Error(Errc::ConfigNotInShift, "seed configuration violates the shift");
  static const char* palette = "123456789abcdefghijklmnopqrstuvwxyz";
  std::string out;
  PeriodicConfiguration c = c0;
  const int width = c0.periods[0];
  for (int t = 0; t < steps; ++t) {
    for (int i = 0; i < width; ++i) {
      const Elem v = c.fundamental[static_cast<std::size_t>(i)];
      if (v == f.source()->identity()) {
        out += '.';
      } else {
        const Elem rank = v - (v > f.source()->identity() ? 1 : 0);
        out += palette[rank % 35];
      }
    }
    out += '\n';
    c = apply_to_torus(f, c);
  }
  return out;
}

std::string render_orbit_pgm(const Hom& f, const PeriodicConfiguration& c0, int steps) {
  if (f.dim() != 1) throw Error(Errc::NotOneDimensional, "orbit rendering needs d = 1");
  if (!torus_member(c0, *f.domain))
    throw Error(Errc::ConfigNotInShift, "seed configuration violates the shift");
  const int width = c0.periods[0];
  std::string out = "P2\n" + std::to_string(width) + " " + std::to_string(steps) + "\n255\n";
  PeriodicConfiguration c = c0;
  const std::int64_t order = f.source()->order();
  for (int t = 0; t < steps; ++t) {
    for (int i = 0; i < width; ++i) {
      const Elem v = c.fundamental[static_cast<std::size_t>(i)];
      int gray = 255;  // identity renders white
      if (v != f.source()->identity()) {
        const Elem rank = v - (v > f.source()->identity() ? 1 : 0);
        gray = order > 1 ? static_cast<int>(200 - (rank * 200) / std::max<std::int64_t>(1, order - 1))
                         : 0;
      }
      out += std::to_string(gray);
      out += i + 1 == width ? '\n' : ' ';
    }
    c = apply_to_torus(f, c);
  }
  return out;
}

json run_command(const std::string& command, const CommandOptions& opts, const ProblemFile& pf) {
  json report;
  report["command"] = command;
  report["version"] = kToolVersion;
  report["budget"] = json{{"max_period", opts.budget.max_period},
                          {"max_box", opts.budget.max_box},
                          {"max_steps", opts.budget.max_steps}};
  json inputs;
  for (const auto& [k, v] : opts.args) inputs[k] = v;
  report["inputs"] = inputs;
  json verdicts = json::array();
  json presentations;
  json stats;
  const auto t0 = std::chrono::steady_clock::now();

  if (command == "member") {
    const ShiftPtr x = named_shift(pf, need(opts, "shift"));
    auto pit = pf.patterns.find(need(opts, "pattern"));
    if (pit == pf.patterns.end())
      throw Error(Errc::ValidationError, "no pattern named '" + need(opts, "pattern") + "'");
    const MemberResult r = member(pit->second, x, opts.budget);
    if (r.verdict == Verdict::Budget)
      throw BudgetExceeded("membership undecided", r.frontier);
    json v = verdict_entry("member", r.yes());
    if (r.witness) v["certificate"] = config_to_json(*r.witness);
    if (r.no()) v["refuted_box"] = r.refuted_box;
    verdicts.push_back(v);
    if (opts.cross_check) {
      const auto o = oracle::find_pattern(pit->second, x, 8);
      stats["oracle_found"] = o.found;
      if (o.found && !r.yes())
        throw Error(Errc::Internal, "oracle found a torus the engine rejected");
    }
  } else if (command == "compare") {
    const ShiftPtr a = named_shift(pf, need(opts, "left"));
    const ShiftPtr b = named_shift(pf, need(opts, "right"));
    const CompareResult c = compare(a, b, opts.budget);
    verdicts.push_back(verdict_entry("subset_left_in_right", c.subset_12));
    verdicts.push_back(verdict_entry("subset_right_in_left", c.subset_21));
    verdicts.push_back(verdict_entry("equal", c.equal()));
  } else if (command == "project") {
    const ShiftPtr x = named_shift(pf, need(opts, "shift"));
    ShiftPtr result;
    if (opts.args.count("width")) {
      result = project_slice(x, std::stoi(need(opts, "width")), opts.budget);
    } else if (opts.args.count("track")) {
      const TrackSplit split = split_alphabet(x->alphabet(), 1);
      result = need(opts, "track") == "second"
                   ? project_track_second(x, split, opts.budget).shift
                   : project_track(x, split, opts.budget).shift;
    } else {
      const int k = std::stoi(need(opts, "keep-dim"));
      const json cells = json::parse(need(opts, "cells"));
      const Shape d = parse_cells(cells, x->dim() - k, "project cells");
      result = project_general(x, k, d, opts.budget);
    }
    presentations["projection"] = shift_to_json(result);
  } else if (command == "image" || command == "kernel" || command == "spacetime" ||
             command == "limitset") {
    const Hom& f = named_map(pf, need(opts, "map"));
    if (command == "image") {
      const ImageRoute route = opts.args.count("route") && opts.args.at("route") == "generic"
                                   ? ImageRoute::Generic
                                   : ImageRoute::Auto;
      const ImageResult r = image_shift(f, f.domain, opts.budget, route);
      presentations["image"] = shift_to_json(r.shift);
      stats["route"] = r.automaton_path ? "automaton" : "generic";
      if (opts.cross_check && f.dim() == 1) {
        const auto words = oracle::image_words(f, 2, 6);
        for (Elem w : words) {
          const Pattern p = pattern_from_code(f.target, Shape::interval(0, 1), w);
          if (!member_or_throw(p, r.shift, opts.budget))
            throw Error(Errc::Internal, "oracle image word missing from the image");
        }
        stats["oracle_words_checked"] = words.size();
      }
    } else if (command == "kernel") {
      presentations["kernel"] = shift_to_json(kernel_shift(f, opts.budget));
    } else if (command == "spacetime") {
      presentations["spacetime"] = shift_to_json(spacetime_shift(f, opts.budget));
    } else {
      const LimitSet omega = limit_set(f, opts.budget);
      presentations["limitset"] = shift_to_json(omega.shift);
      stats["route"] = omega.route;
    }
  } else if (command == "trace") {
    const Hom& f = named_map(pf, need(opts, "map"));
    const json cells = json::parse(need(opts, "cells"));
    const Shape d = parse_cells(cells, f.dim(), "trace cells");
    const ShiftPtr trace = trace_shift(f, d, opts.budget);
    presentations["trace"] = shift_to_json(trace);
    const MixingClass mc = mixing_class_1d(trace);
    verdicts.push_back(verdict_entry("trace_transitive", mc.transitive));
    verdicts.push_back(verdict_entry("trace_mixing", mc.mixing));
    verdicts.push_back(verdict_entry("trace_finite", mc.finite));
  } else if (command == "analyze") {
    const Hom& f = named_map(pf, need(opts, "map"));
    const Analysis a = analyze_ca(f, opts.budget);
    for (const auto& r : a.reports) verdicts.push_back(report_to_json(r));
    presentations["kernel"] = shift_to_json(a.kernel);
    presentations["limitset"] = shift_to_json(a.limit.shift);
    stats["limit_route"] = a.limit.route;
    stats["transient_length"] = a.chain.length;
    if (opts.cross_check) {
      json agreements = json::array();
      const std::pair<const char*, oracle::Property> props[] = {
          {"injective", oracle::Property::InjectiveOnTori},
          {"surjective", oracle::Property::SurjectiveOnTori},
          {"nilpotent", oracle::Property::NilpotentOnTori}};
      const int cap = f.dim() == 1 ? 6 : 3;
      for (const auto& [name, prop] : props) {
        const oracle::Decision d = oracle::decide(f, prop, cap);
        bool engine = false;
        for (const auto& r : a.reports)
          if (r.property == name) engine = r.holds();
        json entry{{"property", name},
                   {"oracle", d.verdict},
                   {"conclusive", d.conclusive},
                   {"engine", engine}};
        if (d.conclusive && !d.verdict && engine)
          throw Error(Errc::Internal, std::string("oracle contradicts the engine on ") + name);
        agreements.push_back(entry);
      }
      stats["oracle"] = agreements;
    }
  } else if (command == "entropy") {
    const ShiftPtr x = named_shift(pf, need(opts, "shift"));
    const double tol = opts.args.count("tol") ? std::stod(opts.args.at("tol")) : 1e-10;
    const EntropyEstimate est = entropy_1d(x, tol);
    stats["entropy"] = est.value;
    stats["block_counts"] = est.block_counts;
    stats["method"] = est.method;
  } else if (command == "orbit") {
    const Hom& f = named_map(pf, need(opts, "map"));
    auto cit = pf.configs.find(need(opts, "config"));
    if (cit == pf.configs.end())
      throw Error(Errc::ValidationError, "no config named '" + need(opts, "config") + "'");
    const int steps = std::stoi(need(opts, "steps"));
    const std::string format = opts.args.count("format") ? opts.args.at("format") : "text";
    const std::string art = format == "pgm" ? render_orbit_pgm(f, cit->second, steps)
                                            : render_orbit_text(f, cit->second, steps);
    if (opts.args.count("out")) {
      std::ofstream out(opts.args.at("out"));
      if (!out) throw Error(Errc::ValidationError, "cannot write '" + opts.args.at("out") + "'");
      out << art;
      stats["written"] = opts.args.at("out");
    } else {
      stats["art"] = art;
    }
  } else {
    throw Error(Errc::ValidationError, "unknown command '" + command + "'");
  }

  const auto t1 = std::chrono::steady_clock::now();
  stats["wall_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  report["verdicts"] = verdicts;
  if (!presentations.is_null()) report["presentations"] = presentations;
  report["stats"] = stats;
  return report;
}

}  // namespace gca
