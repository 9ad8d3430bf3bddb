#include "cli.hpp"

#include "presets.hpp"

#include "vfkit/distribution.hpp"
#include "vfkit/errors.hpp"
#include "vfkit/frobenius.hpp"
#include "vfkit/liealgebra.hpp"
#include "vfkit/modalgebra.hpp"
#include "vfkit/orbit.hpp"
#include "vfkit/system.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <ostream>
#include <sstream>

namespace vfkit::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Options shared by every analysis command.
struct Common {
  std::string system_file;
  std::string preset;
  std::string format = "text";
  std::string fields;
};

// Tolerances reported with their origin: a built-in default or a flag.
class Tolerances {
public:
  void add(const std::string& name, const Json& value, bool from_flag = false) {
    j_[name] = {{"value", value}, {"origin", from_flag ? "flag" : "default"}};
  }
  const Json& json() const { return j_; }

private:
  Json j_ = Json::object();
};

System load(const Common& c) {
  if (c.system_file.empty() == c.preset.empty()) throw UsageError("exactly one of --system or --preset is required");
  if (!c.preset.empty()) {
    const Preset* p = find_preset(c.preset);
    if (!p) throw UsageError("unknown preset '" + c.preset + "' (see: vfkit examples --list)");
    return p->system();
  }
  try {
    return load_system(c.system_file);
  } catch (const ParseError&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
}

std::vector<VectorField> select(const System& s, const std::string& names) {
  try {
    return s.select(names);
  } catch (const std::out_of_range& e) {
    throw UsageError(e.what());
  }
}

Point point_arg(const std::string& text, std::size_t dim) {
  if (text.find_first_not_of(" \t") == std::string::npos) throw UsageError("--point is empty");
  Point p = parse_point(text);
  if (p.dim() != dim)
    throw UsageError("--point has " + std::to_string(p.dim()) + " coordinates, the system has dimension " +
                     std::to_string(dim));
  return p;
}

VectorField tuple_arg(const std::string& text, std::size_t dim) {
  // Reuse the system-file grammar for "(e1, ..., en)".
  try {
    return parse_system("system target dim " + std::to_string(dim) + "\nfield T = " + text + "\n").fields.at(0);
  } catch (const ParseError& e) {
    throw ParseError(e.message(), 1, e.line() == 2 ? e.column() - 10 : e.column());
  }
}

Json names(const std::vector<VectorField>& fam, const std::vector<std::size_t>& idx) {
  Json a = Json::array();
  for (auto i : idx) a.push_back(fam[i].name());
  return a;
}

Json vec(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json strings(const std::vector<Expr>& es) {
  Json a = Json::array();
  for (const auto& e : es) a.push_back(e.str());
  return a;
}

Json points(const std::vector<Point>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(p.str());
  return a;
}

// Text rendering: one "key: value" line per scalar, nested keys indented,
// long lists cut after kTextRows entries.
constexpr std::size_t kTextRows = 12;

void render_text(const Json& j, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  auto scalar = [](const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  auto flat = [](const Json& v) {
    return std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_primitive(); });
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Json& v = it.value();
    if (v.is_primitive()) {
      out << pad << it.key() << ": " << scalar(v) << "\n";
    } else if (v.is_array() && flat(v)) {
      out << pad << it.key() << ": ";
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << scalar(v[i]);
      out << "\n";
    } else if (v.is_array()) {
      out << pad << it.key() << ":\n";
      std::size_t shown = 0;
      for (const auto& x : v) {
        if (shown++ == kTextRows) {
          out << pad << "  ... " << v.size() - kTextRows << " more (see --format json)\n";
          break;
        }
        if (x.is_object()) {
          render_text(x, out, indent + 1);
          out << pad << "  --\n";
        } else {
          out << pad << "  -";
          for (const auto& y : x) out << " " << scalar(y);
          out << "\n";
        }
      }
    } else {
      out << pad << it.key() << ":\n";
      render_text(v, out, indent + 1);
    }
  }
}

struct Outcome {
  Json results = Json::object();
  Tolerances tolerances;
  int status = kOk;
  // Tabular part for --format csv.
  std::optional<std::string> csv;
};

Outcome bracket_cmd(const Common& c, const std::string& fields) {
  System s = load(c);
  auto fam = select(s, fields);
  if (fam.size() != 2) throw UsageError("--fields needs exactly two field names");
  VectorField b = lie_bracket(fam[0], fam[1]);
  Outcome o;
  o.results["system"] = s.name;
  o.results["bracket"] = "[" + fam[0].name() + "," + fam[1].name() + "]";
  o.results["field"] = b.str();
  o.results["components"] = strings(b.components());
  o.results["polynomial"] = b.is_polynomial();
  if (!b.domain().is_everything()) o.results["domain"] = b.domain().str();
  return o;
}

Outcome lie_cmd(const Common& c, const std::string& point, int depth, bool depth_set, int module_degree,
                bool degree_set) {
  System s = load(c);
  auto fam = select(s, c.fields);
  Point p = point_arg(point, s.dim);
  FiltrationOptions fo;
  fo.depth_cap = depth;
  fo.module_degree = module_degree;
  auto f = filtration(fam, {p}, fo);
  Outcome o;
  o.results["system"] = s.name;
  o.results["point"] = p.str();
  Json words = Json::array();
  for (const auto& e : f.entries)
    words.push_back({{"word", e.word.str(fam)}, {"depth", e.word.depth()}, {"field", e.field.str()}});
  o.results["words"] = words;
  o.results["ranks_by_depth"] = f.ranks[0];
  o.results["rank"] = f.rank(0);
  o.results["dimension"] = s.dim;
  o.results["generated_depth"] = f.generated_depth;
  o.results["certified"] = f.certified;
  if (f.certified) o.results["certified_depth"] = f.certified_depth;
  o.results["note"] = f.note;
  auto ft = fixed_time_ideal_rank(f, p);
  o.results["ideal_rank"] = ft.ideal_rank;
  o.results["codim"] = ft.codim;
  o.tolerances.add("depth_cap", depth, depth_set);
  o.tolerances.add("module_degree", module_degree, degree_set);
  o.tolerances.add("rank_threshold", kRankThreshold);
  return o;
}

Outcome rank_cmd(const Common& c, const std::string& point, bool point_set, const std::string& grid) {
  System s = load(c);
  Distribution d(select(s, c.fields));
  const bool grid_set = !grid.empty();
  if (point_set == grid_set) throw UsageError("exactly one of --point or --grid is required");
  Outcome o;
  o.results["system"] = s.name;
  o.tolerances.add("rank_threshold", kRankThreshold);
  if (point_set) {
    Point p = point_arg(point, s.dim);
    auto r = rank_at(d, p);
    o.results["point"] = p.str();
    o.results["rank"] = r.rank;
    o.results["method"] = to_string(r.method);
    o.results["witnesses"] = names(d.generators(), r.witnesses);
    o.results["excluded"] = names(d.generators(), r.excluded);
    return o;
  }
  auto axes = parse_grid(grid, s.dim);
  auto g = classify_grid(d, axes);
  Json rows = Json::array();
  std::ostringstream csv;
  for (std::size_t i = 0; i < s.dim; ++i) csv << "x" << i + 1 << ",";
  csv << "rank,regular\n";
  for (std::size_t k = 0; k < g.points.size(); ++k) {
    rows.push_back({{"point", g.points[k].str()}, {"rank", g.ranks[k]}, {"regular", static_cast<bool>(g.regular[k])}});
    for (const auto& q : g.points[k].rational()) csv << to_string(q) << ",";
    csv << g.ranks[k] << "," << (g.regular[k] ? 1 : 0) << "\n";
  }
  o.csv = csv.str();
  o.results["grid"] = rows;
  o.results["regular_density"] = g.regular_density;
  if (d.is_polynomial()) {
    auto locus = singular_locus_minors(d);
    o.results["generic_rank"] = locus.generic_rank;
    o.results["minors"] = strings(locus.minors);
  } else {
    o.results["minors"] = nullptr;
    o.results["note"] = "minors need polynomial generators; singular points come from grid probes only";
  }
  return o;
}

Outcome member_cmd(const Common& c, const std::string& target, const std::string& gens, int degree) {
  System s = load(c);
  auto fam = select(s, gens);
  VectorField t = tuple_arg(target, s.dim);
  auto cert = member_bounded({t, fam, degree});
  Outcome o;
  o.results["system"] = s.name;
  o.results["target"] = t.str();
  o.results["generators"] = names(fam, [&] {
    std::vector<std::size_t> i(fam.size());
    for (std::size_t k = 0; k < i.size(); ++k) i[k] = k;
    return i;
  }());
  o.results["degree"] = cert.degree;
  o.results["member"] = cert.member;
  o.results["verdict"] = cert.verdict();
  if (cert.member) o.results["multipliers"] = strings(cert.multipliers);
  return o;
}

struct OrbitArgs {
  std::string point;
  std::size_t words = 200;
  int max_len = 6;
  double max_time = 0.5;
  std::optional<double> fixed_time;
  std::string invariant;
  int depth = 6;
};

Outcome orbit_cmd(const Common& c, const OrbitArgs& a, std::uint64_t seed, const CLI::App& sub) {
  System s = load(c);
  auto fam = select(s, c.fields);
  Point p = point_arg(a.point, s.dim);
  if (a.words == 0 || a.max_len < 1 || !(a.max_time > 0)) throw UsageError("--words, --max-len and --max-time must be positive");
  WordSampler w;
  w.seed = seed;
  w.count = a.words;
  w.max_length = a.max_len;
  w.max_time = a.max_time;
  std::optional<Expr> inv;
  if (!a.invariant.empty()) inv = parse_expr(a.invariant, static_cast<int>(s.dim));
  OrbitTangentReport r = a.fixed_time ? fixed_time_dimension(fam, p, *a.fixed_time, w, inv, {a.depth})
                                      : orbit_dimension(fam, p, w, {a.depth});
  Outcome o;
  o.results["system"] = s.name;
  o.results["point"] = p.str();
  o.results["probed_point"] = r.point.str();
  o.results["dimension"] = r.dimension;
  o.results["exact"] = r.exact;
  o.results["words_used"] = r.words_used;
  o.results["words_skipped"] = r.words_skipped;
  o.results["lie_rank"] = r.lie_rank;
  o.results["consistent"] = r.consistent;
  if (a.fixed_time) {
    o.results["fixed_time"] = *a.fixed_time;
    o.results["fixed_time_dimension"] = *r.fixed_time_dimension;
    o.results["ideal_rank"] = *r.ideal_rank;
    o.results["gap"] = *r.gap;
    if (r.invariant_drift) o.results["invariant_drift"] = *r.invariant_drift;
  }
  if (!r.note.empty()) o.results["note"] = r.note;
  Json vs = Json::array();
  std::ostringstream csv;
  csv << "index";
  for (std::size_t i = 0; i < s.dim; ++i) csv << ",v" << i + 1;
  csv << "\n";
  csv.precision(17);
  for (std::size_t k = 0; k < r.vectors.size(); ++k) {
    vs.push_back(vec(r.vectors[k]));
    csv << k;
    for (Eigen::Index i = 0; i < r.vectors[k].size(); ++i) csv << "," << r.vectors[k][i];
    csv << "\n";
  }
  o.results["vectors"] = vs;
  o.csv = csv.str();
  o.tolerances.add("orbit_rank_threshold", kOrbitRankThreshold);
  o.tolerances.add("words", a.words, sub.count("--words") > 0);
  o.tolerances.add("max_length", a.max_len, sub.count("--max-len") > 0);
  o.tolerances.add("max_time", a.max_time, sub.count("--max-time") > 0);
  o.tolerances.add("depth_cap", a.depth, sub.count("--depth") > 0);
  return o;
}

struct FrobeniusArgs {
  std::string grid;
  int depth = 6;
  int module_degree = 4;
  std::size_t words = 200;
  double max_time = 0.5;
  std::vector<std::string> charts;
};

Outcome frobenius_cmd(const Common& c, const FrobeniusArgs& a, std::uint64_t seed, const CLI::App& sub) {
  System s = load(c);
  Distribution d(select(s, c.fields));
  auto axes = a.grid.empty() ? default_grid(s.dim) : parse_grid(a.grid, s.dim);
  FrobeniusOptions fo;
  fo.depth_cap = a.depth;
  fo.module_degree = a.module_degree;
  fo.sampler.seed = seed;
  fo.sampler.count = a.words;
  fo.sampler.max_time = a.max_time;
  std::vector<Point> chart_points;
  for (const auto& q : a.charts) chart_points.push_back(point_arg(q, s.dim));
  auto v = frobenius_verdict(d, axes, fo);

  Outcome o;
  o.results["system"] = s.name;
  o.results["integrable"] = to_string(v.integrable);
  o.results["clause"] = v.clause;
  o.results["justification"] = v.justification;
  o.results["involutive_pointwise"] = v.involutive_pointwise;
  o.results["involutive_module"] = v.involutive_module ? Json(*v.involutive_module) : Json(nullptr);
  o.results["rank_constant"] = v.rank_constant;
  Json ws = Json::array();
  for (const auto& w : v.witnesses) {
    Json j = {{"kind", w.kind}, {"point", w.point.str()}};
    if (w.kind == "bracket") {
      j["bracket"] = "[" + d.generators()[w.i].name() + "," + d.generators()[w.j].name() + "]";
    } else {
      j["orbit_dimension"] = w.orbit_dimension;
      j["rank"] = w.rank;
    }
    ws.push_back(j);
  }
  o.results["witnesses"] = ws;
  o.results["isolated"] = points(v.isolated);
  o.results["probed"] = points(v.probed);
  Json charts = Json::array();
  for (const auto& p : chart_points) {
    auto ch = flow_box_chart(d, p);
    Json gens = Json::array();
    for (const auto& g : ch.generators) gens.push_back({{"name", g.name()}, {"field", g.str()}});
    charts.push_back({{"base", p.str()},
                      {"rank", ch.rank},
                      {"generators", gens},
                      {"residual", ch.residual},
                      {"tangent_rank", ch.tangent_rank},
                      {"rank_mismatches", ch.rank_mismatches},
                      {"samples", ch.images.size()},
                      {"skipped", ch.skipped},
                      {"accepted", ch.accepted},
                      {"reason", ch.reason}});
  }
  if (!chart_points.empty()) o.results["charts"] = charts;
  o.tolerances.add("rank_threshold", kRankThreshold);
  o.tolerances.add("orbit_rank_threshold", kOrbitRankThreshold);
  o.tolerances.add("chart_residual_threshold", ChartOptions{}.threshold);
  o.tolerances.add("chart_radius", ChartOptions{}.radius);
  o.tolerances.add("depth_cap", a.depth, sub.count("--depth") > 0);
  o.tolerances.add("module_degree", a.module_degree, sub.count("--module-degree") > 0);
  o.tolerances.add("max_time", a.max_time, sub.count("--max-time") > 0);
  return o;
}

Json run_preset(const Preset& p, std::uint64_t seed, std::size_t& failed) {
  System s = p.system();
  Json facts = Json::array();
  for (const auto& f : p.facts) {
    FactOutcome r;
    try {
      r = f.check(s, {seed});
    } catch (const std::exception& e) {
      r = {false, std::string("error: ") + e.what()};
    }
    if (!r.pass) ++failed;
    facts.push_back({{"statement", f.statement}, {"basis", f.basis}, {"pass", r.pass}, {"observed", r.observed}});
  }
  return {{"name", p.name}, {"source", p.source}, {"facts", facts}};
}

Outcome examples_cmd(bool list, const std::string& run_name, bool run_all, const std::string& show, std::uint64_t seed) {
  const int chosen = int(list) + int(!run_name.empty()) + int(run_all) + int(!show.empty());
  if (chosen != 1) throw UsageError("exactly one of --list, --run, --run-all or --show is required");
  Outcome o;
  if (list) {
    Json a = Json::array();
    for (const auto& p : presets()) {
      Json facts = Json::array();
      for (const auto& f : p.facts) facts.push_back({{"statement", f.statement}, {"basis", f.basis}});
      a.push_back({{"name", p.name}, {"source", p.source}, {"facts", facts}});
    }
    o.results["presets"] = a;
    return o;
  }
  if (!show.empty()) {
    const Preset* p = find_preset(show);
    if (!p) throw UsageError("unknown preset '" + show + "'");
    o.results["name"] = p->name;
    o.results["system"] = p->text;
    return o;
  }
  std::size_t failed = 0, total = 0;
  Json runs = Json::array();
  for (const auto& p : presets()) {
    if (!run_all && p.name != run_name) continue;
    runs.push_back(run_preset(p, seed, failed));
    total += p.facts.size();
  }
  if (runs.empty()) throw UsageError("unknown preset '" + run_name + "'");
  o.results["presets"] = runs;
  o.results["facts"] = total;
  o.results["failed"] = failed;
  if (failed) o.status = kMismatch;
  return o;
}

std::uint64_t parse_seed(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    if (text.empty() || text[0] == '-') throw std::invalid_argument(text);
    const unsigned long long v = std::stoull(text, &used, 10);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string(what) + " must be a nonnegative integer, got '" + text + "'");
  }
}

void emit(const Outcome& o, const std::vector<std::string>& args, std::uint64_t seed, const std::string& format,
          std::ostream& out) {
  if (format == "csv") {
    if (!o.csv) throw UsageError("--format csv is only available for rank --grid and orbit");
    out << *o.csv;
    return;
  }
  Json report;
  report["tool"] = "vfkit";
  report["version"] = kVersion;
  report["command"] = args;
  report["seed"] = seed;
  report["status"] = o.status;
  report["results"] = o.results;
  report["tolerances"] = o.tolerances.json();
  if (format == "json") {
    out << report.dump(2) << "\n";
  } else {
    render_text(o.results, out, 0);
    if (!o.tolerances.json().empty()) {
      out << "tolerances:\n";
      for (auto it = o.tolerances.json().begin(); it != o.tolerances.json().end(); ++it)
        out << "  " << it.key() << ": " << it.value()["value"].dump() << " (" << it.value()["origin"].get<std::string>()
            << ")\n";
    }
    out << "seed: " << seed << "\n";
  }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::optional<std::string>& env_seed) {
  CLI::App app{"Lie brackets, distributions, orbits and integrability of vector field families", "vfkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common common;
  std::string seed_text;
  auto add_common = [&](CLI::App* sub, bool fields) {
    sub->add_option("--system", common.system_file, "System file");
    sub->add_option("--preset", common.preset, "Built-in preset system (see examples --list)");
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--seed", seed_text, "Sampler seed (default: VFKIT_SEED, else 1)");
    if (fields) sub->add_option("--fields", common.fields, "Comma-separated field names (default: all)");
  };

  auto* bracket = app.add_subcommand("bracket", "Lie bracket of two fields");
  std::string bracket_fields;
  add_common(bracket, false);
  bracket->add_option("--fields", bracket_fields, "Two field names, e.g. X1,X2")->required();

  auto* lie = app.add_subcommand("lie", "Bracket filtration and its rank at a point");
  std::string lie_point;
  int lie_depth = 6, lie_degree = 4;
  add_common(lie, true);
  lie->add_option("--point", lie_point, "Point, e.g. 0,1/2")->required();
  lie->add_option("--depth", lie_depth, "Depth cap (at most 10)");
  lie->add_option("--module-degree", lie_degree, "Multiplier degree for the stabilization certificate");

  auto* rank = app.add_subcommand("rank", "Rank of the distribution at a point or over a grid");
  std::string rank_point, rank_grid;
  add_common(rank, true);
  auto* rank_point_opt = rank->add_option("--point", rank_point, "Point");
  rank->add_option("--grid", rank_grid, "Grid, e.g. x1=-1:1:0.25,x2=-1:1:0.25");

  auto* member = app.add_subcommand("member", "Bounded-degree module membership");
  std::string member_target, member_gens;
  int member_degree = 0;
  add_common(member, false);
  member->add_option("--target", member_target, "Target field, e.g. \"(x1, 0)\"")->required();
  member->add_option("--gens", member_gens, "Generator field names");
  member->add_option("--degree", member_degree, "Multiplier degree bound")->required();

  auto* orbit = app.add_subcommand("orbit", "Sampled orbit or fixed-time orbit tangent dimension");
  OrbitArgs oa;
  double fixed_time = 0.0;
  add_common(orbit, true);
  orbit->add_option("--point", oa.point, "Point")->required();
  orbit->add_option("--words", oa.words, "Number of sampled words");
  orbit->add_option("--max-len", oa.max_len, "Largest word length");
  orbit->add_option("--max-time", oa.max_time, "Largest |time| per step");
  auto* ft_opt = orbit->add_option("--fixed-time", fixed_time, "Net time T of the fixed-time orbit");
  orbit->add_option("--invariant", oa.invariant, "Function whose drift along zero-sum words is reported");
  orbit->add_option("--depth", oa.depth, "Depth cap for the bracket rank cross-check");

  auto* frob = app.add_subcommand("frobenius", "Integrability verdict and flow-box charts");
  FrobeniusArgs fa;
  add_common(frob, true);
  frob->add_option("--grid", fa.grid, "Sample grid (default: [-1,1]^n with step 1/2)");
  frob->add_option("--depth", fa.depth, "Depth cap for orbit cross-checks");
  frob->add_option("--module-degree", fa.module_degree, "Multiplier degree for module involutivity");
  frob->add_option("--words", fa.words, "Sampled words per orbit probe");
  frob->add_option("--max-time", fa.max_time, "Largest |time| per step in orbit probes");
  frob->add_option("--chart", fa.charts, "Build a flow-box chart at this point (repeatable)");

  auto* ex = app.add_subcommand("examples", "Preset corpus with expected facts");
  bool ex_list = false, ex_all = false;
  std::string ex_run, ex_show, ex_format = "text";
  ex->add_flag("--list", ex_list, "List presets and their facts");
  ex->add_option("--run", ex_run, "Check the facts of one preset");
  ex->add_flag("--run-all", ex_all, "Check every preset");
  ex->add_option("--show", ex_show, "Print the system file of a preset");
  ex->add_option("--format", ex_format, "Output format")->check(CLI::IsMember({"json", "text"}));
  ex->add_option("--seed", seed_text, "Sampler seed");

  std::vector<const char*> argv{"vfkit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "vfkit: " << e.what() << "\n";
    return kUsage;
  }

  try {
    std::uint64_t seed = 1;
    if (!seed_text.empty()) {
      seed = parse_seed(seed_text, "--seed");
    } else if (env_seed && !env_seed->empty()) {
      seed = parse_seed(*env_seed, "VFKIT_SEED");
    }
    std::string format = common.format;
    Outcome o;
    if (bracket->parsed()) {
      o = bracket_cmd(common, bracket_fields);
    } else if (lie->parsed()) {
      o = lie_cmd(common, lie_point, lie_depth, lie->count("--depth") > 0, lie_degree, lie->count("--module-degree") > 0);
    } else if (rank->parsed()) {
      o = rank_cmd(common, rank_point, rank_point_opt->count() > 0, rank_grid);
    } else if (member->parsed()) {
      o = member_cmd(common, member_target, member_gens, member_degree);
    } else if (orbit->parsed()) {
      if (ft_opt->count()) oa.fixed_time = fixed_time;
      o = orbit_cmd(common, oa, seed, *orbit);
    } else if (frob->parsed()) {
      o = frobenius_cmd(common, fa, seed, *frob);
    } else {
      format = ex_format;
      o = examples_cmd(ex_list, ex_run, ex_all, ex_show, seed);
      if (!ex_show.empty() && format == "text") {
        out << o.results["system"].get<std::string>();
        return kOk;
      }
    }
    emit(o, args, seed, format, out);
    return o.status;
  } catch (const UsageError& e) {
    err << "vfkit: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "vfkit: parse error: " << e.what() << "\n";
    return kParse;
  } catch (const std::invalid_argument& e) {
    err << "vfkit: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "vfkit: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "vfkit: numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
}

} // namespace vfkit::cli
