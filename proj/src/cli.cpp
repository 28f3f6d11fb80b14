#include "chabauty/cli.hpp"

#include "chabauty/duality.hpp"
#include "chabauty/invariants.hpp"
#include "chabauty/json_io.hpp"
#include "chabauty/local_structure.hpp"
#include "chabauty/metric.hpp"
#include "chabauty/plane.hpp"
#include "chabauty/strata.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <thread>

namespace chabauty::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<std::string> inputs;
  std::string params_path;
  std::string out_path;
  std::string format = "json";
  std::uint64_t seed = 0;
  double delta = 0.1;
  bool delta_set = false;
  std::vector<int> base;
  std::vector<double> t;
  int n = 0;
  std::vector<int> type;
  int count = 1;
  double radius = -1;
  double step = 0.05;
  double max_im = 2.0;
  int jobs = 0;
};

Json parse_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError("cannot parse JSON from " + origin + ": " + e.what());
  }
}

// A path, or inline JSON when the argument starts with '{' or '['.
// Top-level arrays are batches.
std::vector<Json> load_items(const std::vector<std::string>& inputs) {
  std::vector<Json> items;
  for (const auto& in : inputs) {
    Json j;
    const auto first = in.find_first_not_of(" \t\n");
    if (first != std::string::npos && (in[first] == '{' || in[first] == '[')) {
      j = parse_text(in, "argument");
    } else {
      std::ifstream f(in);
      if (!f) throw UsageError("cannot open input '" + in + "'");
      std::stringstream ss;
      ss << f.rdbuf();
      j = parse_text(ss.str(), in);
    }
    if (j.is_array())
      for (auto& e : j) items.push_back(e);
    else
      items.push_back(j);
  }
  return items;
}

MetricParams load_params(const std::string& path) {
  MetricParams p;
  if (path.empty()) return p;
  const Json j = load_items({path}).at(0);
  if (!j.is_object()) throw UsageError("--params must hold a JSON object");
  auto reals = [&](const char* key, std::vector<double>& dst) {
    if (!j.contains(key)) return;
    dst.clear();
    for (const auto& x : j.at(key)) dst.push_back(real_from_json(x));
  };
  reals("radii", p.radii);
  reals("weights", p.weights);
  if (j.contains("grid")) p.grid = real_from_json(j.at("grid"));
  if (j.contains("precision")) p.precision = real_from_json(j.at("precision"));
  else p.precision = std::min(p.precision, p.grid);
  if (j.contains("cap")) p.cap = j.at("cap").get<std::size_t>();
  if (j.contains("box_cap")) p.box_cap = j.at("box_cap").get<std::size_t>();
  try {
    p.validate();
  } catch (const Error& e) {
    throw UsageError(std::string("invalid --params: ") + e.what());
  }
  return p;
}

Json type_json(GroupType t) { return Json::array({t.p, t.q}); }

Json reals(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(real_to_json(x));
  return a;
}

Json error_json(const Error& e) {
  Json j;
  j["error"] = e.what();
  j["code"] = std::string(code_name(e.code()));
  return j;
}

struct Outcome {
  std::string line;
  bool failed = false;
};

// Applies fn to every item on a small worker pool; results keep input order.
std::vector<Outcome> map_items(const std::vector<Json>& items, const std::function<Json(const Json&)>& fn,
                               int jobs) {
  std::vector<Outcome> out(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        out[i].line = dump(fn(items[i]));
      } catch (const Error& e) {
        out[i] = {dump(error_json(e)), true};
      } catch (const Json::exception& e) {
        out[i] = {dump(error_json(Error(ErrorCode::InvalidArgument, e.what()))), true};
      }
    }
  };
  unsigned n = jobs > 0 ? static_cast<unsigned>(jobs) : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, items.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

int emit(const std::vector<Outcome>& results, std::ostream& out) {
  bool failed = false;
  for (const auto& r : results) {
    out << r.line << '\n';
    failed = failed || r.failed;
  }
  return failed ? 1 : 0;
}

GroupType base_type(const Options& o) {
  if (o.base.size() != 2) throw UsageError("--base needs two integers p q");
  return {o.base[0], o.base[1]};
}

Json decomposition_json(const Decomposition& d) {
  const LocalDecomposition& loc = d.local;
  Json j;
  j["base"] = type_json(loc.base);
  j["delta"] = loc.delta;
  Json lin;
  lin["V1"] = matrix_rows(d.linear.v1);
  lin["V2"] = matrix_rows(d.linear.v2);
  lin["V3"] = matrix_rows(d.linear.v3);
  j["linear"] = lin;
  j["tau"] = matrix_rows(d.tau.transpose());
  j["gamma1"] = to_json(loc.gamma1);
  j["gamma2"] = matrix_rows(loc.gamma2);
  j["gamma3"] = matrix_rows(loc.gamma3);
  j["phi2"] = matrix_rows(loc.phi2);
  Json phi3 = Json::array();
  for (Eigen::Index k = 0; k < loc.gamma3.cols(); ++k) {
    Json e;
    e["v1"] = vector_to_json(loc.phi3_v1.col(k));
    e["v2"] = vector_to_json(loc.phi3_v2.col(k));
    phi3.push_back(e);
  }
  j["phi3"] = phi3;
  j["norm_sum"] = norm_sum(loc);
  return j;
}

Json reduced_json(const ReducedForm& f) {
  Json j;
  j["theta"] = f.theta;
  if (f.infinite) j["z"] = "inf";
  else j["z"] = Json::array({f.z.real(), f.z.imag()});
  return j;
}

Json limit_json(const Json& spec, const Options& o) {
  if (!spec.is_object() || !spec.contains("template"))
    throw Error(ErrorCode::InvalidArgument, "family spec needs a template");
  const std::string name = spec.at("template").get<std::string>();
  const int n = spec.at("n").get<int>();
  const int p = spec.value("p", 0);
  Family fam;
  if (spec.contains("exponents")) {
    std::vector<double> a;
    for (const auto& x : spec.at("exponents")) a.push_back(real_from_json(x));
    if (name != "power") throw Error(ErrorCode::InvalidArgument, "exponents go with the power template");
    fam = power_family(n, p, a);
  } else {
    fam = named_family(name, n, p, spec.value("q", 0));
  }
  std::vector<double> t = o.t;
  if (t.empty() && spec.contains("t"))
    for (const auto& x : spec.at("t")) t.push_back(real_from_json(x));
  if (t.empty()) t = {10, 100, 1000, 10000, 100000};
  double delta = 0.01;
  if (o.delta_set) delta = o.delta;
  else if (spec.contains("delta")) delta = real_from_json(spec.at("delta"));
  const LimitReport rep = classify_limit(fam, t, delta);
  Json j;
  j["type"] = type_json(rep.type);
  j["shrunk"] = rep.shrunk;
  j["grown"] = rep.grown;
  j["t"] = reals(rep.t);
  Json trace = Json::array();
  for (const auto& v : rep.norm_trace) trace.push_back(reals(v));
  j["norms"] = trace;
  return j;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int dispatch(const std::string& cmd, const Options& o, std::ostream& out) {
  const int jobs = o.jobs;
  if (cmd == "fiber-dim") {
    std::vector<int> v;
    for (const auto& s : o.inputs) {
      try {
        v.push_back(std::stoi(s));
      } catch (const std::exception&) {
        throw UsageError("fiber-dim expects integers n p q r s");
      }
    }
    if (v.size() != 5) throw UsageError("fiber-dim expects integers n p q r s");
    try {
      out << fiber_dimension(v[0], {v[1], v[2]}, {v[3], v[4]}) << '\n';
    } catch (const Error& e) {
      out << dump(error_json(e)) << '\n';
      return 1;
    }
    return 0;
  }
  if (cmd == "poset") {
    int n = o.n;
    if (n == 0 && o.inputs.size() == 1) n = std::atoi(o.inputs[0].c_str());
    if (n < 1) throw UsageError("poset needs a positive dimension");
    Json j;
    j["n"] = n;
    Json types = Json::array();
    for (const auto& t : all_types(n)) {
      Json e;
      e["type"] = type_json(t);
      e["dim"] = stratum_dimension(n, t);
      types.push_back(e);
    }
    j["types"] = types;
    Json edges = Json::array();
    for (const auto& [hi, lo] : hasse_diagram(n)) edges.push_back(Json::array({type_json(hi), type_json(lo)}));
    j["edges"] = edges;
    out << dump(j) << '\n';
    return 0;
  }
  if (cmd == "sample") {
    if (o.n < 1 || o.type.size() != 2 || o.count < 1) throw UsageError("sample needs --n, --type p q and --count");
    std::vector<Json> idx;
    for (int k = 0; k < o.count; ++k) idx.push_back(k);
    return emit(map_items(idx, [&](const Json& k) {
      return to_json(random_subgroup(o.n, {o.type[0], o.type[1]}, o.seed + k.get<std::uint64_t>()));
    }, jobs), out);
  }
  if (cmd == "atlas") {
    if (!(o.step > 0)) throw UsageError("--step must be positive");
    const double lo_im = std::sqrt(3.0) / 2;
    if (o.format == "csv") out << "re,im,stabilizer_order\n";
    for (double im = lo_im; im <= o.max_im + 1e-12; im += o.step) {
      for (int k = 0;; ++k) {
        const double re = -0.5 + k * o.step;
        if (re >= 0.5 - 1e-12) break;
        const Complex z{re, im};
        if (std::abs(z) < 1 - 1e-12) continue;
        const int order = stabilizer_order(plane_lattice({1, 0}, z));
        if (o.format == "csv") {
          out << fmt(re) << ',' << fmt(im) << ',' << order << '\n';
        } else {
          Json j;
          j["z"] = Json::array({re, im});
          j["stabilizer_order"] = order;
          out << dump(j) << '\n';
        }
      }
    }
    return 0;
  }

  if (o.format != "json") throw UsageError("--format csv is only available for atlas");
  if (o.inputs.empty()) throw UsageError(cmd + " needs at least one input");
  const std::vector<Json> items = load_items(o.inputs);

  if (cmd == "info") {
    return emit(map_items(items, [](const Json& in) {
      const ClosedSubgroup g = subgroup_from_json(in);
      Json j;
      j["type"] = type_json(g.type());
      j["norms"] = reals(norms(g));
      j["rank"] = g.rank();
      j["systole"] = real_to_json(systole(g));
      if (g.ambient_dim() == 2) {
        const auto c = covolume(g);
        j["covolume"] = c ? real_to_json(*c) : Json("indeterminate");
      }
      j["discrete_covolume"] = discrete_covolume(g);
      j["subgroup"] = to_json(g);
      return j;
    }, jobs), out);
  }
  if (cmd == "dual") {
    return emit(map_items(items, [](const Json& in) {
      const ClosedSubgroup d = dual(subgroup_from_json(in));
      Json j;
      j["type"] = type_json(d.type());
      j["subgroup"] = to_json(d);
      return j;
    }, jobs), out);
  }
  if (cmd == "dist") {
    const MetricParams params = load_params(o.params_path);
    std::vector<Json> pairs;
    if (o.inputs.size() == 2) {
      const auto a = load_items({o.inputs[0]});
      const auto b = load_items({o.inputs[1]});
      if (a.size() != b.size()) throw UsageError("dist inputs must have the same batch size");
      for (std::size_t i = 0; i < a.size(); ++i) pairs.push_back(Json::array({a[i], b[i]}));
    } else {
      for (const auto& it : items) {
        if (!it.is_array() || it.size() != 2) throw UsageError("dist expects two subgroups or pairs");
        pairs.push_back(it);
      }
    }
    const double radius = o.radius;
    return emit(map_items(pairs, [&](const Json& pr) {
      const ClosedSubgroup a = subgroup_from_json(pr[0]), b = subgroup_from_json(pr[1]);
      Json j;
      if (radius >= 0) {
        j["radius"] = radius;
        j["gap"] = hausdorff_gap(a, b, radius, params);
      } else {
        j["distance"] = chabauty_distance(a, b, params);
      }
      return j;
    }, jobs), out);
  }
  if (cmd == "decompose") {
    const GroupType base = base_type(o);
    const double delta = o.delta;
    return emit(map_items(items, [&](const Json& in) {
      return decomposition_json(local_decomposition(subgroup_from_json(in), base, delta));
    }, jobs), out);
  }
  if (cmd == "limit") {
    return emit(map_items(items, [&](const Json& in) { return limit_json(in, o); }, jobs), out);
  }
  if (cmd == "reduce2") {
    return emit(map_items(items, [](const Json& in) { return reduced_json(reduce_lattice(subgroup_from_json(in))); },
                          jobs), out);
  }
  if (cmd == "suspend") {
    if (o.t.size() != 1) throw UsageError("suspend needs exactly one --t value");
    const double t = o.t[0];
    return emit(map_items(items, [&](const Json& in) {
      Json j;
      j["subgroup"] = to_json(suspension_map(subgroup_from_json(in), t));
      return j;
    }, jobs), out);
  }
  if (cmd == "stab") {
    return emit(map_items(items, [](const Json& in) {
      Json j;
      j["order"] = stabilizer_order(subgroup_from_json(in));
      return j;
    }, jobs), out);
  }
  throw UsageError("unknown command '" + cmd + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closed subgroups of R^n under the Chabauty topology", "chabauty"};
  app.require_subcommand(1, 1);
  Options o;
  std::vector<std::string> t_text;
  app.add_option("--params", o.params_path, "metric parameters (JSON file)");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--out", o.out_path, "output path (default stdout)");
  app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--jobs", o.jobs, "worker threads (default: hardware concurrency)");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"info", "type, norms and covolumes"},
      {"dual", "dual subgroup"},
      {"dist", "Chabauty distance (or gap at --radius) between two subgroups"},
      {"decompose", "local decomposition at scale --delta around --base p q"},
      {"limit", "delta-type limit of a parametric family"},
      {"reduce2", "reduce a unit-systole lattice of R^2 to the fundamental domain"},
      {"suspend", "suspension map at parameter --t"},
      {"stab", "stabilizer order of a unit-systole subgroup of R^2"},
      {"poset", "strata, dimensions and covering relations in R^n"},
      {"fiber-dim", "fiber dimension: n p q r s"},
      {"sample", "random subgroups"},
      {"atlas", "stabilizer orders over a grid of the fundamental domain"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->add_option("inputs", o.inputs, "paths or inline JSON");
    if (name == "decompose" || name == "limit") {
      sub->add_option("--delta", o.delta, "scale in (0,1)")->each([&](const std::string&) { o.delta_set = true; });
    }
    if (name == "decompose") sub->add_option("--base", o.base, "base type p q")->expected(2);
    if (name == "limit" || name == "suspend") sub->add_option("--t", t_text, "parameter values ('inf' allowed)");
    if (name == "poset" || name == "sample") sub->add_option("--n", o.n, "ambient dimension");
    if (name == "sample") {
      sub->add_option("--type", o.type, "type p q")->expected(2);
      sub->add_option("--count", o.count, "number of samples");
    }
    if (name == "dist") sub->add_option("--radius", o.radius, "report the gap at this radius");
    if (name == "atlas") {
      sub->add_option("--step", o.step, "grid step");
      sub->add_option("--max-im", o.max_im, "upper end of the imaginary range");
    }
  }

  // CLI11 splits bracketed values on commas, so inline JSON is swapped for a
  // placeholder token during parsing.
  std::vector<std::string> inline_json;
  std::vector<std::string> reversed;
  for (auto it = args.rbegin(); it != args.rend(); ++it) {
    const auto first = it->find_first_not_of(" \t\n");
    if (first != std::string::npos && ((*it)[first] == '{' || (*it)[first] == '[')) {
      reversed.push_back("@inline:" + std::to_string(inline_json.size()));
      inline_json.push_back(*it);
    } else {
      reversed.push_back(*it);
    }
  }
  try {
    app.parse(reversed);
    for (auto& in : o.inputs)
      if (in.rfind("@inline:", 0) == 0) in = inline_json.at(std::stoul(in.substr(8)));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  }

  std::ofstream file;
  if (!o.out_path.empty()) {
    file.open(o.out_path);
    if (!file) {
      err << "usage error: cannot write '" << o.out_path << "'\n";
      return 2;
    }
  }
  std::ostream& sink = o.out_path.empty() ? out : file;
  try {
    for (const auto& s : t_text) {
      if (s == "inf") o.t.push_back(kInf);
      else o.t.push_back(std::stod(s));
    }
    return dispatch(app.get_subcommands().front()->get_name(), o, sink);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument&) {
    err << "usage error: bad number\n";
    return 2;
  } catch (const Error& e) {
    sink << dump(error_json(e)) << '\n';
    return 1;
  }
}

}  // namespace chabauty::cli
