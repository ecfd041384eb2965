#include "commands.hpp"

#include "ipl/lpp_exp.hpp"
#include "ipl/lpp_geom.hpp"
#include "ipl/polymer.hpp"
#include "ipl/prelimit.hpp"
#include "ipl/rsk.hpp"
#include "ipl/schur.hpp"
#include "ipl/simulate.hpp"
#include "ipl/textio.hpp"
#include "ipl/whittaker.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

namespace ipl::cli {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------- plumbing

void collect_params(const CLI::App* app, json& out) {
  for (const CLI::Option* o : app->get_options()) {
    if (o->count() == 0 || o->get_name() == "--help") continue;
    auto r = o->results();
    std::string name = o->get_name();
    while (!name.empty() && name.front() == '-') name.erase(name.begin());
    out[name] = r.size() == 1 ? json(r.front()) : json(r);
  }
  for (const CLI::App* sub : app->get_subcommands()) {
    json inner = json::object();
    collect_params(sub, inner);
    out[sub->get_name()] = inner;
  }
}

std::string command_line(const Context& ctx) {
  std::string s;
  for (const CLI::App* a = ctx.app; a && !a->get_subcommands().empty();) {
    a = a->get_subcommands().front();
    s += (s.empty() ? "" : " ") + a->get_name();
  }
  return s;
}

// Prints the result and writes a manifest beside every output file.
void emit(const Context& ctx, json result, const std::vector<std::string>& outputs = {}) {
  RunManifest m;
  m.command = command_line(ctx);
  m.argv = ctx.argv;
  collect_params(ctx.app, m.parameters);
  m.seed = ctx.seed;
  m.outputs = outputs;
  m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
  if (!outputs.empty()) {
    write_manifests(m);
    result["outputs"] = outputs;
  }
  std::cout << result.dump(2) << std::endl;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

template <class T>
std::vector<T> broadcast(std::vector<T> v, int N, const std::string& name) {
  if (v.size() == 1 && N > 1) v.assign(N, v.front());
  if (static_cast<int>(v.size()) != N)
    throw std::invalid_argument("--" + name + ": expected 1 or " + std::to_string(N) + " values, got " +
                                std::to_string(v.size()));
  return v;
}

void require_positive_samples(long n) {
  if (n < 1) throw std::invalid_argument("--samples must be positive");
}

// Parameter options shared by the environment commands.
struct EnvArgs {
  std::string geometry = "flat";
  int N = 1;
  std::string alpha, beta, q, p;
  double gamma = 0;

  void add(CLI::App* c, bool with_geom = true) {
    c->add_option("--geometry", geometry, "flat, half-flat or restricted")->capture_default_str();
    c->add_option("--N", N, "lattice parameter")->capture_default_str();
    c->add_option("--alpha", alpha, "row parameters (comma list; one value is repeated)");
    c->add_option("--beta", beta, "column parameters");
    c->add_option("--gamma", gamma, "log-gamma boundary shape, or i.i.d. rate parameter");
    if (with_geom) {
      c->add_option("--q", q, "geometric row parameters (p/q rationals allowed)");
      c->add_option("--p", p, "geometric column parameters");
    }
  }

  Geometry geom() const { return parse_geometry(geometry); }

  ExpEnvSpec exp_spec() const {
    ExpEnvSpec s;
    s.geometry = geom();
    s.N = N;
    if (alpha.empty()) throw std::invalid_argument("exponential environment needs --alpha");
    s.alpha = broadcast(parse_doubles(alpha), N, "alpha");
    if (s.geometry != Geometry::Restricted)
      s.beta = beta.empty() ? s.alpha : broadcast(parse_doubles(beta), N, "beta");
    s.validate();
    return s;
  }

  GeomEnvSpec geom_spec() const {
    GeomEnvSpec s;
    s.geometry = geom();
    s.N = N;
    if (q.empty()) throw std::invalid_argument("geometric environment needs --q");
    s.q = broadcast(parse_rationals(q), N, "q");
    if (s.geometry != Geometry::Restricted) s.p = p.empty() ? s.q : broadcast(parse_rationals(p), N, "p");
    s.validate();
    return s;
  }

  LogGammaSpec log_gamma_spec() const {
    LogGammaSpec s;
    s.geometry = geom();
    s.N = N;
    if (alpha.empty()) throw std::invalid_argument("log-gamma environment needs --alpha");
    s.alpha = broadcast(parse_doubles(alpha), N, "alpha");
    if (s.geometry != Geometry::Restricted)
      s.beta = beta.empty() ? s.alpha : broadcast(parse_doubles(beta), N, "beta");
    s.gamma = gamma;
    s.validate();
    return s;
  }
};

// ---------------------------------------------------------------- rsk

std::vector<std::vector<std::string>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> f;
    std::string item;
    std::istringstream s(line);
    while (std::getline(s, item, ',')) {
      auto b = item.find_first_not_of(" \t\r"), e = item.find_last_not_of(" \t\r");
      f.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
    }
    rows.push_back(f);
  }
  if (rows.empty()) throw std::invalid_argument(path + " is empty");
  return rows;
}

// Plain rows of numbers (a Young-shaped array) or an "i,j,value" table.
std::vector<std::vector<std::string>> read_array(const std::string& path) {
  auto rows = read_rows(path);
  if (rows.front() != std::vector<std::string>{"i", "j", "value"}) return rows;
  std::vector<std::vector<std::string>> out;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].size() != 3) throw std::invalid_argument(path + ": triplet rows need 3 fields");
    int i = std::stoi(rows[k][0]), j = std::stoi(rows[k][1]);
    if (i < 1 || j < 1) throw std::invalid_argument(path + ": indices start at 1");
    if (static_cast<int>(out.size()) < i) out.resize(i);
    auto& r = out[i - 1];
    if (static_cast<int>(r.size()) < j) r.resize(j);
    r[j - 1] = rows[k][2];
  }
  for (const auto& r : out)
    for (const auto& v : r)
      if (v.empty()) throw std::invalid_argument(path + ": triplets do not fill a Young shape");
  return out;
}

template <class T, class F>
PolyArray<T> to_array(const std::vector<std::vector<std::string>>& rows, F parse) {
  std::vector<std::vector<T>> v;
  for (const auto& r : rows) {
    v.emplace_back();
    for (const auto& x : r) v.back().push_back(parse(x));
  }
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k].size() > v[k - 1].size()) throw std::invalid_argument("array rows must not get longer");
  return PolyArray<T>::from_rows(v);
}

template <class T, class F>
CsvTable triplets(const PolyArray<T>& a, F str) {
  CsvTable t{{"i", "j", "value"}, {}};
  for (auto [i, j] : a.shape().indices()) t.rows.push_back({std::to_string(i), std::to_string(j), str(a(i, j))});
  return t;
}

void add_rsk(CLI::App& app, Context& ctx) {
  auto* rsk = app.add_subcommand("rsk", "RSK correspondences");
  rsk->require_subcommand(1);
  auto* apply = rsk->add_subcommand("apply", "apply classical, geometric or piecewise-linear RSK to an array");
  struct A {
    std::string kind, in, out;
    bool inverse = false, exact = false;
  };
  auto a = std::make_shared<A>();
  apply->add_option("--kind", a->kind, "classical, geometric or pl")
      ->required()
      ->check(CLI::IsMember({"classical", "geometric", "pl"}));
  apply->add_option("--in", a->in, "input array (rows of numbers or i,j,value triplets)")->required();
  apply->add_option("--out", a->out, "output CSV (i,j,value)")->required();
  apply->add_flag("--inverse", a->inverse, "apply the inverse map (geometric, pl)");
  apply->add_flag("--exact", a->exact, "rational arithmetic (geometric, pl)");
  apply->callback([a, &ctx] {
    auto rows = read_array(a->in);
    CsvTable out;
    json res{{"kind", a->kind}, {"inverse", a->inverse}};
    if (a->kind == "classical") {
      if (a->inverse) throw std::invalid_argument("--inverse is not available for classical RSK");
      IntMatrix w;
      std::size_t width = rows.front().size();
      for (const auto& r : rows) {
        if (r.size() != width) throw std::invalid_argument("classical RSK needs a rectangular matrix");
        w.emplace_back();
        for (const auto& x : r) {
          long v = std::stol(x);
          if (v < 0) throw std::invalid_argument("classical RSK needs nonnegative integers");
          w.back().push_back(v);
        }
      }
      auto r = classical_rsk(w);
      IntMatrix g = glued_matrix(r, static_cast<int>(w.size()), static_cast<int>(width));
      std::vector<std::vector<long>> gv(g.begin(), g.end());
      out = triplets(PolyArray<long>::from_rows(gv), [](long v) { return std::to_string(v); });
      res["shape"] = r.shape;
    } else if (a->exact) {
      auto parse = [](const std::string& x) { return parse_rationals(x).front(); };
      auto w = to_array<Rational>(rows, parse);
      PolyArray<Rational> t;
      if (a->kind == "geometric")
        t = a->inverse ? grsk_inverse(w) : grsk(w);
      else
        t = a->inverse ? rsk_pl_inverse(w) : rsk_pl(w);
      out = triplets(t, [](const Rational& v) { return rational_string(v); });
    } else {
      auto w = to_array<double>(rows, [](const std::string& x) { return parse_doubles(x).front(); });
      PolyArray<double> t;
      if (a->kind == "geometric")
        t = a->inverse ? grsk_inverse(w) : grsk(w);
      else
        t = a->inverse ? rsk_pl_inverse(w) : rsk_pl(w);
      out = triplets(t, fmt);
    }
    write_csv(a->out, out);
    res["entries"] = out.rows.size();
    emit(ctx, res, {a->out});
  });
}

// ---------------------------------------------------------------- schur / whittaker

void add_schur(CLI::App& app, Context& ctx) {
  auto* schur = app.add_subcommand("schur", "Schur and symplectic Schur functions");
  schur->require_subcommand(1);
  auto* ev = schur->add_subcommand("eval", "evaluate a (symplectic) Schur function");
  struct A {
    std::string family = "gl", mode = "discrete", lambda, alpha, x, method = "det";
    bool exact = false;
  };
  auto a = std::make_shared<A>();
  ev->add_option("--family", a->family, "gl or sp")->check(CLI::IsMember({"gl", "sp"}))->capture_default_str();
  ev->add_option("--mode", a->mode, "discrete or cont")->check(CLI::IsMember({"discrete", "cont"}))->capture_default_str();
  ev->add_option("--lambda", a->lambda, "partition (discrete)");
  ev->add_option("--alpha", a->alpha, "variables (discrete) or parameters (cont)")->required();
  ev->add_option("--x", a->x, "point (cont)");
  ev->add_option("--method", a->method, "det or gt (discrete)")->check(CLI::IsMember({"det", "gt"}))->capture_default_str();
  ev->add_flag("--exact", a->exact, "rational arithmetic (discrete)");
  ev->callback([a, &ctx] {
    json res{{"family", a->family}, {"mode", a->mode}};
    const bool sp = a->family == "sp";
    if (a->mode == "cont") {
      if (a->x.empty()) throw std::invalid_argument("--mode cont needs --x");
      auto al = parse_doubles(a->alpha), x = parse_doubles(a->x);
      res["value"] = sp ? sp_cont(al, x) : schur_cont(al, x);
      res["method"] = "determinantal formula on the ordered chamber";
      emit(ctx, res);
      return;
    }
    if (a->lambda.empty()) throw std::invalid_argument("--mode discrete needs --lambda");
    auto parts = parse_ints(a->lambda);
    Partition lam(parts);
    const bool gt = a->method == "gt";
    res["method"] = gt ? "Gelfand-Tsetlin pattern sum" : (sp ? "symplectic bialternant" : "bialternant");
    if (a->exact) {
      auto v = parse_rationals(a->alpha);
      Rational r = gt ? (sp ? sp_gt(lam, v) : schur_gt(lam, v)) : (sp ? sp_det(lam, v) : schur_det(lam, v));
      put_rational(res, "value", r);
    } else {
      auto v = parse_doubles(a->alpha);
      res["value"] = gt ? (sp ? sp_gt(lam, v) : schur_gt(lam, v)) : (sp ? sp_det(lam, v) : schur_det(lam, v));
    }
    emit(ctx, res);
  });
}

void add_whittaker(CLI::App& app, Context& ctx) {
  auto* w = app.add_subcommand("whittaker", "gl and so Whittaker functions");
  w->require_subcommand(1);
  auto* ev = w->add_subcommand("eval", "evaluate a Whittaker function by nested quadrature");
  struct A {
    std::string algebra = "gl", alpha, x;
  };
  auto a = std::make_shared<A>();
  ev->add_option("--algebra", a->algebra, "gl or so")->capture_default_str();
  ev->add_option("--alpha", a->alpha, "spectral parameters")->required();
  ev->add_option("--x", a->x, "point in the positive orthant")->required();
  ev->callback([a, &ctx] {
    WhittakerQuad q;
    if (ctx.tol > 0) q.tol = ctx.tol;
    auto v = whittaker_eval(parse_algebra(a->algebra), parse_doubles(a->alpha), parse_doubles(a->x), q);
    emit(ctx, {{"algebra", a->algebra}, {"value", v.value}, {"error", v.error}, {"tol", q.tol}});
  });
}

// ---------------------------------------------------------------- polymer / lpp / simulate

void add_polymer(CLI::App& app, Context& ctx) {
  auto* pol = app.add_subcommand("polymer", "log-gamma polymer partition functions");
  pol->require_subcommand(1);
  auto* lap = pol->add_subcommand("laplace", "Laplace transform E exp(-r Z)");
  struct A {
    EnvArgs env;
    std::string r = "1", method = "whittaker", csv;
    long samples = 100000;
  };
  auto a = std::make_shared<A>();
  a->env.add(lap, false);
  lap->add_option("--r", a->r, "evaluation points")->capture_default_str();
  lap->add_option("--method", a->method, "whittaker, contour or mc")
      ->check(CLI::IsMember({"whittaker", "contour", "mc"}))
      ->capture_default_str();
  lap->add_option("--samples", a->samples, "Monte Carlo samples")->capture_default_str();
  lap->add_option("--csv", a->csv, "write the curve to this CSV file");
  lap->callback([a, &ctx] {
    auto s = a->env.log_gamma_spec();
    if (a->method == "mc") require_positive_samples(a->samples);
    json pts = json::array();
    CsvTable t{{"r", "value", "error"}, {}};
    ContourOptions co;
    if (ctx.tol > 0) co.rel_tol = ctx.tol;
    for (double r : parse_doubles(a->r)) {
      json p{{"r", r}};
      double val, err = 0;
      if (a->method == "whittaker") {
        val = laplace_whittaker(s, r);
      } else if (a->method == "contour") {
        auto c = laplace_contour(s, r, co);
        val = c.value;
        err = c.tail_bound;
        p["height"] = c.height;
        p["tail_bound"] = c.tail_bound;
      } else {
        auto e = laplace_mc(s, r, a->samples, ctx.seed);
        val = e.value;
        err = e.se;
        p["se"] = e.se;
        p["n"] = e.n;
      }
      p["value"] = val;
      pts.push_back(p);
      t.rows.push_back({fmt(r), fmt(val), fmt(err)});
    }
    json res{{"method", a->method}, {"geometry", to_string(s.geometry)}, {"points", pts}};
    std::vector<std::string> outs;
    if (!a->csv.empty()) {
      write_csv(a->csv, t);
      outs.push_back(a->csv);
    }
    emit(ctx, res, outs);
  });
}

void add_lpp(CLI::App& app, Context& ctx) {
  auto* lpp = app.add_subcommand("lpp", "last passage percolation distributions");
  lpp->require_subcommand(1);
  auto* cdf = lpp->add_subcommand("cdf", "P(tau <= u) from the exact formulas");
  struct A {
    EnvArgs env;
    std::string kind = "exponential", u, method = "auto", csv;
    bool exact = false;
  };
  auto a = std::make_shared<A>();
  a->env.add(cdf);
  cdf->add_option("--env", a->kind, "geometric or exponential")
      ->check(CLI::IsMember({"geometric", "exponential"}))
      ->capture_default_str();
  cdf->add_option("--u", a->u, "thresholds (integers for geometric)")->required();
  cdf->add_option("--method", a->method, "auto, double or hp (exponential)")
      ->check(CLI::IsMember({"auto", "double", "hp"}))
      ->capture_default_str();
  cdf->add_flag("--exact", a->exact, "emit the rational value (geometric)");
  cdf->add_option("--csv", a->csv, "write the curve to this CSV file");
  cdf->callback([a, &ctx] {
    json pts = json::array();
    CsvTable t{{"u", "cdf"}, {}};
    if (a->kind == "geometric") {
      auto s = a->env.geom_spec();
      for (int u : parse_ints(a->u)) {
        auto c = cdf_geom(s, u);
        json p{{"u", u}};
        if (a->exact)
          put_rational(p, "value", c.value);
        else
          p["value"] = c.value.get_d();
        pts.push_back(p);
        t.rows.push_back({std::to_string(u), a->exact ? rational_string(c.value) : fmt(c.value.get_d())});
      }
    } else {
      if (a->exact) throw std::invalid_argument("--exact applies to the geometric environment");
      auto s = a->env.exp_spec();
      ExpMethod m = a->method == "double" ? ExpMethod::DoubleEngine
                    : a->method == "hp"   ? ExpMethod::HighPrecisionIid
                                          : ExpMethod::Automatic;
      for (double u : parse_doubles(a->u)) {
        double v = cdf_exp(s, u, m);
        pts.push_back({{"u", u}, {"value", v}});
        t.rows.push_back({fmt(u), fmt(v)});
      }
    }
    json res{{"env", a->kind}, {"geometry", a->env.geometry}, {"N", a->env.N}, {"points", pts}};
    std::vector<std::string> outs;
    if (!a->csv.empty()) {
      write_csv(a->csv, t);
      outs.push_back(a->csv);
    }
    emit(ctx, res, outs);
  });
}

void add_simulate(CLI::App& app, Context& ctx) {
  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimates from seeded environments");
  struct A {
    EnvArgs env;
    std::string kind = "exponential", stat = "cdf", points, csv;
    long samples = 100000;
    double center = 0, scale = 1;
  };
  auto a = std::make_shared<A>();
  a->env.add(sim);
  sim->add_option("--env", a->kind, "geometric, exponential or loggamma")
      ->check(CLI::IsMember({"geometric", "exponential", "loggamma"}))
      ->capture_default_str();
  sim->add_option("--stat", a->stat, "cdf, laplace or rescaled-cdf")->capture_default_str();
  sim->add_option("--u,--r,--points", a->points, "evaluation points");
  sim->add_option("--samples", a->samples, "number of samples")->capture_default_str();
  sim->add_option("--center", a->center, "rescaled-cdf: u = center + scale r");
  sim->add_option("--scale", a->scale, "rescaled-cdf scale");
  sim->add_option("--csv", a->csv, "write the estimates to this CSV file");
  sim->callback([a, &ctx] {
    require_positive_samples(a->samples);
    if (a->points.empty()) throw std::invalid_argument("simulate needs evaluation points (--u)");
    SimConfig c;
    c.seed = ctx.seed;
    c.samples = a->samples;
    c.stat = parse_statistic(a->stat);
    c.points = parse_doubles(a->points);
    c.center = a->center;
    c.scale = a->scale;
    if (a->kind == "geometric")
      c.env = a->env.geom_spec();
    else if (a->kind == "exponential")
      c.env = a->env.exp_spec();
    else
      c.env = a->env.log_gamma_spec();
    auto est = estimate(c);
    json pts = json::array();
    CsvTable t{{"point", "estimate", "se", "n"}, {}};
    for (std::size_t k = 0; k < est.size(); ++k) {
      pts.push_back({{"point", c.points[k]}, {"estimate", est[k].value}, {"se", est[k].se}, {"n", est[k].n}});
      t.rows.push_back({fmt(c.points[k]), fmt(est[k].value), fmt(est[k].se), std::to_string(est[k].n)});
    }
    json res{{"env", a->kind}, {"stat", a->stat}, {"seed", ctx.seed}, {"results", pts}};
    if (est.size() == 1) {
      res["estimate"] = est[0].value;
      res["se"] = est[0].se;
      res["n"] = est[0].n;
    }
    std::vector<std::string> outs;
    if (!a->csv.empty()) {
      write_csv(a->csv, t);
      outs.push_back(a->csv);
    }
    emit(ctx, res, outs);
  });
}

// ---------------------------------------------------------------- fredholm

NystromConfig nystrom_config(const Context& ctx, int nodes) {
  NystromConfig n;
  n.nodes = nodes;
  if (ctx.tol > 0) n.tol = ctx.tol;
  return n;
}

void check_converged(const json& res, bool ok, const std::string& what) {
  if (!ok) throw ContractFailure(what + ": node doubling did not reach the tolerance", res);
}

void add_fredholm(CLI::App& app, Context& ctx) {
  auto* fr = app.add_subcommand("fredholm", "Fredholm determinants and scaling limits");
  fr->require_subcommand(1);

  struct Tw {
    std::string law = "goe", s = "0", csv;
    int nodes = 32;
  };
  auto tw = std::make_shared<Tw>();
  auto* twc = fr->add_subcommand("tw", "GOE Tracy-Widom F1 or the Airy 2->1 one-point law");
  twc->add_option("--law", tw->law, "goe or airy21")->check(CLI::IsMember({"goe", "airy21"}))->capture_default_str();
  twc->add_option("--s", tw->s, "arguments")->capture_default_str();
  twc->add_option("--nodes", tw->nodes, "Gauss-Legendre nodes (doubled for the error estimate)")->capture_default_str();
  twc->add_option("--csv", tw->csv, "write the curve to this CSV file");
  twc->callback([tw, &ctx] {
    auto cfg = nystrom_config(ctx, tw->nodes);
    json pts = json::array();
    CsvTable t{{"s", "value", "error"}, {}};
    bool ok = true;
    for (double s : parse_doubles(tw->s)) {
      auto v = tw->law == "goe" ? f1_value(s, cfg) : f21_value(s, cfg);
      pts.push_back({{"s", s}, {"value", v.value}, {"error", v.error}, {"converged", v.converged}});
      t.rows.push_back({fmt(s), fmt(v.value), fmt(v.error)});
      ok = ok && v.converged;
    }
    json res{{"law", tw->law}, {"points", pts}};
    std::vector<std::string> outs;
    if (!tw->csv.empty()) {
      write_csv(tw->csv, t);
      outs.push_back(tw->csv);
    }
    check_converged(res, ok, "fredholm tw");
    emit(ctx, res, outs);
  });

  struct Pre {
    EnvArgs env;
    std::string r, u, method = "contour", csv;
    int nodes = 32;
    bool whole = false;
  };
  auto pre = std::make_shared<Pre>();
  auto* pc = fr->add_subcommand("prelimit", "finite-N Fredholm determinant against the determinant formula");
  pre->env.add(pc, false);
  pc->add_option("--r", pre->r, "i.i.d. rate 2 gamma: u = 2N/gamma + r N^{1/3}");
  pc->add_option("--u", pre->u, "thresholds (with --alpha/--beta)");
  pc->add_option("--method", pre->method, "residue or contour")
      ->check(CLI::IsMember({"residue", "contour"}))
      ->capture_default_str();
  pc->add_option("--nodes", pre->nodes, "Nystrom nodes")->capture_default_str();
  pc->add_flag("--whole-kernel", pre->whole, "skip the i.i.d. split and integrate the whole kernel on circles");
  pc->add_option("--csv", pre->csv, "write the curve to this CSV file");
  pc->callback([pre, &ctx] {
    const bool iid = pre->env.alpha.empty();
    ExpEnvSpec s;
    std::vector<double> us, rs;
    const int N = pre->env.N;
    if (iid) {
      if (!(pre->env.gamma > 0)) throw std::invalid_argument("prelimit needs --gamma > 0 or --alpha/--beta");
      s = iid_exp_spec(pre->env.geom(), N, pre->env.gamma);
      if (pre->r.empty()) throw std::invalid_argument("i.i.d. prelimit needs --r");
      rs = parse_doubles(pre->r);
      for (double r : rs) us.push_back(2.0 * N / pre->env.gamma + r * std::cbrt(double(N)));
    } else {
      s = pre->env.exp_spec();
      if (pre->u.empty()) throw std::invalid_argument("prelimit with --alpha needs --u");
      us = parse_doubles(pre->u);
    }
    PrelimitConfig c;
    c.decompose_iid = !pre->whole;
    auto m = pre->method == "residue" ? KernelMethod::ResidueSum : KernelMethod::ContourQuadrature;
    auto cfg = nystrom_config(ctx, pre->nodes);
    json pts = json::array();
    CsvTable t{{"u", "fredholm", "error", "det_ratio"}, {}};
    if (iid) t.header.push_back("limit");
    bool ok = true;
    for (std::size_t k = 0; k < us.size(); ++k) {
      auto v = prelimit_cdf(s, us[k], m, cfg, c);
      double d = cdf_exp(s, us[k]);
      json p{{"u", us[k]}, {"fredholm", v.value}, {"error", v.error}, {"det_ratio", d}, {"converged", v.converged}};
      t.rows.push_back({fmt(us[k]), fmt(v.value), fmt(v.error), fmt(d)});
      if (iid) {
        double lim = scaling_limit_value(s.geometry, pre->env.gamma, rs[k]);
        p["r"] = rs[k];
        p["limit"] = lim;
        t.rows.back().push_back(fmt(lim));
      }
      ok = ok && v.converged;
      pts.push_back(p);
    }
    json res{{"geometry", to_string(s.geometry)}, {"N", N}, {"method", pre->method}, {"points", pts}};
    std::vector<std::string> outs;
    if (!pre->csv.empty()) {
      write_csv(pre->csv, t);
      outs.push_back(pre->csv);
    }
    check_converged(res, ok, "fredholm prelimit");
    emit(ctx, res, outs);
  });

  struct Sd {
    std::string Ns = "8,32,128", x = "0,1,2";
    double gamma = 1, eps = 1;
  };
  auto sd = std::make_shared<Sd>();
  auto* sdc = fr->add_subcommand("steepest", "|J~_N(x) - Ai(x)| along N");
  sdc->add_option("--N", sd->Ns, "lattice sizes")->capture_default_str();
  sdc->add_option("--x", sd->x, "arguments")->capture_default_str();
  sdc->add_option("--gamma", sd->gamma, "rate parameter")->capture_default_str();
  sdc->add_option("--eps", sd->eps, "triangle shift")->capture_default_str();
  sdc->callback([sd, &ctx] {
    auto Ns = parse_ints(sd->Ns);
    json rows = json::array();
    for (double x : parse_doubles(sd->x)) {
      auto d = steepest_descent_demo(Ns, sd->gamma, x, sd->eps);
      bool dec = true;
      for (std::size_t k = 1; k < d.size(); ++k) dec = dec && d[k] < d[k - 1];
      rows.push_back({{"x", x}, {"deviations", d}, {"decreasing", dec}});
    }
    emit(ctx, {{"N", Ns}, {"gamma", sd->gamma}, {"results", rows}});
  });

  struct Sc {
    EnvArgs env;
    std::string Ns = "16,64", r = "-2,-1,0,1,2";
  };
  auto sc = std::make_shared<Sc>();
  auto* scc = fr->add_subcommand("scaling", "sup over r of |P(tau <= 2N/gamma + r N^{1/3}) - limit|");
  scc->add_option("--geometry", sc->env.geometry, "flat or half-flat")->capture_default_str();
  scc->add_option("--N", sc->Ns, "lattice sizes")->capture_default_str();
  scc->add_option("--gamma", sc->env.gamma, "i.i.d. rate 2 gamma")->required();
  scc->add_option("--r", sc->r, "r grid")->capture_default_str();
  scc->callback([sc, &ctx] {
    auto Ns = parse_ints(sc->Ns);
    auto d = scaling_limit_check(sc->env.geom(), Ns, sc->env.gamma, parse_doubles(sc->r));
    emit(ctx, {{"geometry", sc->env.geometry}, {"N", Ns}, {"sup_deviation", d}});
  });
}

// ---------------------------------------------------------------- verify

void verdict(const Context& ctx, json res, bool passed, const std::string& suite) {
  res["suite"] = suite;
  res["passed"] = passed;
  if (!passed) throw ContractFailure("verify " + suite + " failed", res);
  emit(ctx, res);
}

Rational random_unit_rational(std::mt19937_64& rng) {
  long den = 2 + static_cast<long>(rng() % 11);
  long num = 1 + static_cast<long>(rng() % (den - 1));
  return ratio(num, den);
}

void add_verify(CLI::App& app, Context& ctx) {
  auto* v = app.add_subcommand("verify", "run a named identity suite; exit 1 on failure");
  v->require_subcommand(1);

  struct Gc {
    int N = 2, u = 4, draws = 20;
  };
  auto gc = std::make_shared<Gc>();
  auto* gcc = v->add_subcommand("geom-comparison", "flat and restricted geometric comparison identities, exactly");
  gcc->add_option("--N", gc->N)->capture_default_str();
  gcc->add_option("--u", gc->u)->capture_default_str();
  gcc->add_option("--draws", gc->draws, "random rational parameter draws")->capture_default_str();
  gcc->callback([gc, &ctx] {
    std::mt19937_64 rng(ctx.seed);
    int fails = 0;
    for (int d = 0; d < gc->draws; ++d) {
      std::vector<Rational> q, p;
      for (int i = 0; i < gc->N; ++i) {
        q.push_back(random_unit_rational(rng));
        p.push_back(random_unit_rational(rng));
      }
      auto f = flat_comparison(q, p, gc->u);
      auto r = restricted_comparison(q, gc->u);
      if (f.lhs != f.rhs || r.lhs != r.rhs) ++fails;
    }
    verdict(ctx, {{"N", gc->N}, {"u", gc->u}, {"draws", gc->draws}, {"failures", fails}}, fails == 0,
            "geom-comparison");
  });

  struct Ca {
    std::string kind = "discrete-std", first, second;
    int n = 2, Lambda = 60;
  };
  auto ca = std::make_shared<Ca>();
  auto* cac = v->add_subcommand("cauchy", "Cauchy identities (standard and symplectic)");
  cac->add_option("--kind", ca->kind, "discrete-std, cont-std, discrete-sp or cont-sp")->capture_default_str();
  cac->add_option("--n", ca->n, "number of variables")->capture_default_str();
  cac->add_option("--Lambda", ca->Lambda, "cap on the first part (discrete)")->capture_default_str();
  cac->add_option("--first", ca->first, "p (discrete) or alpha (cont); default family otherwise");
  cac->add_option("--second", ca->second, "q (discrete) or beta (cont)");
  cac->callback([ca, &ctx] {
    const auto kind = parse_cauchy_kind(ca->kind);
    const bool discrete = kind == CauchyKind::DiscreteStd || kind == CauchyKind::DiscreteSp;
    std::vector<double> f, s;
    for (int i = 0; i < ca->n; ++i) {
      if (discrete) {
        f.push_back(0.5 * std::pow(0.8, i));
        s.push_back(0.3 * std::pow(2.0 / 3, i));
      } else {
        f.push_back(0.3 + 0.3 * i);
        s.push_back(1.0 + 0.5 * i);
      }
    }
    if (!ca->first.empty()) f = parse_doubles(ca->first);
    if (!ca->second.empty()) s = parse_doubles(ca->second);
    auto r = cauchy_check(kind, f, s, ca->Lambda);
    const double tol = ctx.tol > 0 ? ctx.tol : (discrete ? 1e-10 : 1e-8);
    const bool ok = discrete ? r.excess <= tol : r.residual <= tol;
    verdict(ctx,
            {{"kind", ca->kind}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"residual", r.residual}, {"tail_bound", r.tail_bound},
             {"excess", r.excess}, {"terms", r.terms}, {"tol", tol}},
            ok, "cauchy");
  });

  struct Bs {
    std::string a = "0.6", b = "0.9";
    double r = 1.7;
  };
  auto bs = std::make_shared<Bs>();
  auto* bsc = v->add_subcommand("bump-stade", "gl_n Whittaker Laplace-Mellin identity (n <= 2)");
  bsc->add_option("--a", bs->a)->capture_default_str();
  bsc->add_option("--b", bs->b)->capture_default_str();
  bsc->add_option("--r", bs->r)->capture_default_str();
  bsc->callback([bs, &ctx] {
    auto a = parse_doubles(bs->a);
    auto c = bump_stade_check(a, parse_doubles(bs->b), bs->r);
    const double tol = ctx.tol > 0 ? ctx.tol : (a.size() == 1 ? 1e-12 : 1e-4);
    verdict(ctx, {{"lhs", c.lhs}, {"rhs", c.rhs}, {"residual", c.residual}, {"tol", tol}}, c.residual <= tol,
            "bump-stade");
  });

  struct Is {
    std::string a = "0.3", b = "1.2";
  };
  auto is = std::make_shared<Is>();
  auto* isc = v->add_subcommand("ishii-stade", "so_3 Whittaker Mellin identity");
  isc->add_option("--a", is->a)->capture_default_str();
  isc->add_option("--b", is->b)->capture_default_str();
  isc->callback([is, &ctx] {
    auto c = ishii_stade_check(parse_doubles(is->a), parse_doubles(is->b));
    const double tol = ctx.tol > 0 ? ctx.tol : 1e-8;
    verdict(ctx, {{"lhs", c.lhs}, {"rhs", c.rhs}, {"residual", c.residual}, {"tol", tol}}, c.residual <= tol,
            "ishii-stade");
  });

  struct Df {
    EnvArgs env;
    std::string u = "1,3,6";
  };
  auto df = std::make_shared<Df>();
  auto* dfc = v->add_subcommand("det-fredholm", "determinant formula equals the prelimit Fredholm determinant");
  df->env.add(dfc, false);
  dfc->add_option("--u", df->u)->capture_default_str();
  dfc->callback([df, &ctx] {
    ExpEnvSpec s;
    if (df->env.alpha.empty()) {
      s.geometry = df->env.geom();
      s.N = df->env.N;
      for (int i = 0; i < s.N; ++i) {
        s.alpha.push_back(0.5 + 0.13 * i);
        s.beta.push_back(0.7 + 0.11 * i);
      }
    } else {
      s = df->env.exp_spec();
    }
    const double tol = ctx.tol > 0 ? ctx.tol : 1e-8;
    double worst = 0;
    json pts = json::array();
    for (double u : parse_doubles(df->u)) {
      const double d = cdf_exp(s, u);
      const double c = prelimit_cdf(s, u, KernelMethod::ContourQuadrature).value;
      double r = NAN;
      bool distinct = true;
      try {
        r = prelimit_cdf(s, u, KernelMethod::ResidueSum).value;
      } catch (const std::invalid_argument&) {
        distinct = false;
      }
      double dev = std::fabs(c - d);
      if (distinct) dev = std::max(dev, std::fabs(r - d));
      worst = std::max(worst, dev);
      json p{{"u", u}, {"det_ratio", d}, {"contour", c}};
      if (distinct) p["residue"] = r;
      pts.push_back(p);
    }
    verdict(ctx, {{"points", pts}, {"max_deviation", worst}, {"tol", tol}}, worst <= tol, "det-fredholm");
  });

  struct Rk {
    int draws = 200;
  };
  auto rk = std::make_shared<Rk>();
  auto* rkc = v->add_subcommand("rsk", "gRSK and piecewise-linear RSK properties on random arrays");
  rkc->add_option("--draws", rk->draws)->capture_default_str();
  rkc->callback([rk, &ctx] {
    std::mt19937_64 rng(ctx.seed);
    std::uniform_real_distribution<double> U(0.2, 3.0);
    const std::vector<YoungShape> shapes{YoungShape::rectangle(3, 4), YoungShape({4, 3, 1}), YoungShape::flat(2),
                                         YoungShape::half_flat(3)};
    const double tol = ctx.tol > 0 ? ctx.tol : 1e-10;
    double worst = 0;
    bool ordered_all = true;
    for (int d = 0; d < rk->draws; ++d)
      for (const auto& sh : shapes) {
        PolyArray<double> w(sh);
        for (auto [i, j] : sh.indices()) w(i, j) = U(rng);
        auto t = grsk(w);
        for (double r : grsk_property_residuals(w, t)) worst = std::max(worst, r);
        auto back = grsk_inverse(t);
        for (auto [i, j] : sh.indices()) worst = std::max(worst, std::fabs(back(i, j) / w(i, j) - 1));
        bool ordered = true;
        auto tp = rsk_pl(w);
        for (double r : pl_property_residuals(w, tp, &ordered)) worst = std::max(worst, r);
        ordered_all = ordered_all && ordered;
      }
    verdict(ctx, {{"draws", rk->draws}, {"max_residual", worst}, {"tol", tol}, {"pl_ordered", ordered_all}},
            worst <= tol && ordered_all, "rsk");
  });
}

// ---------------------------------------------------------------- plot-data

void add_plot_data(CLI::App& app, Context& ctx) {
  auto* pd = app.add_subcommand("plot-data", "checks on emitted data files");
  pd->require_subcommand(1);
  auto file = std::make_shared<std::string>();
  auto* val = pd->add_subcommand("validate", "check that a CSV is a well-formed numeric table");
  val->add_option("--file", *file, "CSV file")->required();
  val->callback([file, &ctx] {
    auto problems = validate_csv(*file);
    json res{{"file", *file}, {"valid", problems.empty()}, {"problems", problems}};
    if (!problems.empty()) throw ContractFailure("invalid CSV " + *file, res);
    emit(ctx, res);
  });
}

}  // namespace

void register_commands(CLI::App& app, Context& ctx) {
  add_rsk(app, ctx);
  add_schur(app, ctx);
  add_whittaker(app, ctx);
  add_polymer(app, ctx);
  add_lpp(app, ctx);
  add_simulate(app, ctx);
  add_fredholm(app, ctx);
  add_verify(app, ctx);
  add_plot_data(app, ctx);
}

}  // namespace ipl::cli
