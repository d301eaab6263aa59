#include "spiraldim/commands.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <thread>

#include <json.hpp>

#include "spiraldim/errors.hpp"
#include "spiraldim/io.hpp"

namespace spiraldim {

using nlohmann::json;

namespace {

const std::vector<std::string> kMapKeys = {"a", "alpha", "b", "theta0", "d", "c",
                                           "mu", "radial_tail", "angular_tail"};

std::vector<TailTerm> parse_tail(const Config& cfg, const std::string& key) {
  std::vector<TailTerm> out;
  const auto* v = cfg.find("map", key);
  if (!v) return out;
  if (v->kind != ConfigValue::Kind::Array)
    throw ConfigError("[map] " + key + ": expected [[coef, exponent], ...]");
  for (const auto& t : v->items) {
    if (t.kind != ConfigValue::Kind::Array || t.items.size() != 2 ||
        t.items[0].kind != ConfigValue::Kind::Number ||
        t.items[1].kind != ConfigValue::Kind::Number ||
        std::floor(t.items[1].number) != t.items[1].number)
      throw ConfigError("[map] " + key + ": each term is [coef, integer exponent]");
    out.push_back({t.items[0].number, int(t.items[1].number)});
  }
  return out;
}

Polynomial2 parse_poly(const Config& cfg, const std::string& key) {
  Polynomial2 p;
  const auto* v = cfg.find("cartesian", key);
  if (!v) return p;
  if (v->kind != ConfigValue::Kind::Array)
    throw ConfigError("[cartesian] " + key + ": expected [[i, j, coef], ...]");
  for (const auto& t : v->items) {
    if (t.kind != ConfigValue::Kind::Array || t.items.size() != 3)
      throw ConfigError("[cartesian] " + key + ": each term is [i, j, coef]");
    for (const auto& e : t.items)
      if (e.kind != ConfigValue::Kind::Number)
        throw ConfigError("[cartesian] " + key + ": numeric entries expected");
    const double i = t.items[0].number, j = t.items[1].number;
    if (i < 0 || j < 0 || std::floor(i) != i || std::floor(j) != j)
      throw ConfigError("[cartesian] " + key + ": powers must be nonnegative integers");
    p.terms.push_back({int(i), int(j), t.items[2].number});
  }
  return p;
}

std::vector<double> number_list(const Config& cfg, const std::string& sec,
                                const std::string& key) {
  std::vector<double> out;
  const auto* v = cfg.find(sec, key);
  if (!v) return out;
  if (v->kind == ConfigValue::Kind::Number) return {v->number};
  if (v->kind != ConfigValue::Kind::Array)
    throw ConfigError("[" + sec + "] " + key + ": expected a list of numbers");
  for (const auto& e : v->items) {
    if (e.kind != ConfigValue::Kind::Number)
      throw ConfigError("[" + sec + "] " + key + ": expected a list of numbers");
    out.push_back(e.number);
  }
  return out;
}

NormalFormParams map_params(const Config& cfg) {
  NormalFormParams p;
  p.a = cfg.number("map", "a", -1.0);
  p.alpha = int(cfg.integer("map", "alpha", 3));
  p.b = cfg.number("map", "b", 0.0);
  if (const auto* t = cfg.find("map", "theta0")) {
    if (t->kind != ConfigValue::Kind::Number)
      throw ConfigError("[map] theta0: expected a number or pi fraction");
    p.theta0 = t->number;
    p.theta0_over_pi = t->pi_multiple;
  } else {
    throw ConfigError("[map] theta0 is required");
  }
  p.d = cfg.number("map", "d", 0.0);
  p.c = cfg.number("map", "c", 0.0);
  p.mu = cfg.number("map", "mu", 0.0);
  p.radial_tail = parse_tail(cfg, "radial_tail");
  p.angular_tail = parse_tail(cfg, "angular_tail");
  return p;
}

void write_json(const std::string& path, json j) {
  write_file(path, j.dump(2) + "\n");
}

std::string out_path(const RunConfig& rc, const std::string& name) {
  return (std::filesystem::path(rc.out_dir) / name).string();
}

std::string write_table(const RunConfig& rc, const std::string& base,
                        const Table& t) {
  if (rc.format == OutputFormat::Json) {
    const auto p = out_path(rc, base + ".json");
    write_file(p, t.to_json(rc.hash));
    return p;
  }
  const auto p = out_path(rc, base + ".csv");
  write_file(p, t.to_csv(rc.hash));
  return p;
}

json estimate_json(const DimensionEstimate& e) {
  json j;
  j["dim"] = e.dim;
  j["dim_raw"] = e.dim_raw;
  j["dim_stderr"] = e.dim_stderr;
  j["dim_lower"] = e.dim_lower;
  j["dim_upper"] = e.dim_upper;
  j["content_lower"] = e.content_lower ? json(*e.content_lower) : json(nullptr);
  j["content_upper"] = e.content_upper ? json(*e.content_upper) : json(nullptr);
  j["r2"] = e.r2;
  j["poor_fit"] = e.poor_fit;
  return j;
}

json rotation_json(const RotationAnalysis& r) {
  json j;
  j["theta0"] = r.theta0;
  j["beta"] = r.beta;
  j["kind"] = r.kind == RotationKind::Rational ? "Rational" : "Irrational";
  if (r.kind == RotationKind::Rational) {
    j["p"] = r.p;
    j["q"] = r.q;
  }
  j["q_max"] = r.q_max;
  j["tol"] = r.tol;
  j["nonresonant"] = r.nonresonant;
  j["exact"] = r.exact;
  return j;
}

json map_json(const RunConfig& rc) {
  json j;
  switch (rc.kind) {
    case SystemKind::Polar: {
      const auto& p = rc.map->params();
      j = {{"type", "polar"}, {"a", p.a}, {"alpha", p.alpha}, {"b", p.b},
           {"theta0", p.theta0}, {"d", p.d}, {"c", p.c}, {"mu", p.mu}};
      if (p.theta0_over_pi) j["theta0_over_pi"] = p.theta0_over_pi->str();
      break;
    }
    case SystemKind::Hopf: {
      const auto& p = rc.hopf->params();
      j = {{"type", "hopf"}, {"a", p.a}, {"b", p.b}, {"omega", p.omega},
           {"k", p.k}, {"d", p.d}, {"c", p.c}, {"mu", p.mu},
           {"mode", rc.hopf_settings.continuous ? "continuous" : "discrete"}};
      break;
    }
    case SystemKind::Cartesian:
      j = {{"type", "cartesian"}, {"lambda1", rc.cartesian->lambda1},
           {"lambda2", rc.cartesian->lambda2}};
      break;
  }
  return j;
}

const char* kind_name(SystemKind k) {
  switch (k) {
    case SystemKind::Polar: return "polar";
    case SystemKind::Hopf: return "hopf";
    case SystemKind::Cartesian: return "cartesian";
  }
  return "?";
}

FlowMap flow_of(const RunConfig& rc) {
  return unit_time_map(*rc.hopf, rc.hopf_settings.T, rc.hopf_settings.steps,
                       rc.hopf_settings.ceiling);
}

bool cartesian_nonhyperbolic(const RunConfig& rc) {
  const PlanarMapSystem sys = *rc.cartesian;
  const auto m = multipliers([&](Vec2 p) { return sys(p); }, {0.0, 0.0}, rc.cart.tol);
  return m.kind == FixedPointKind::Nonhyperbolic;
}

std::vector<Vec2> cartesian_full_orbit(const RunConfig& rc) {
  const PlanarMapSystem& sys = *rc.cartesian;
  Vec2 p{rc.cart.x1, rc.cart.y1.value_or(0.0)};
  std::vector<Vec2> pts{p};
  for (std::int64_t n = 0; n < rc.cart.max_iter; ++n) {
    if (std::hypot(p.x, p.y) < rc.cart.y_floor) break;
    p = sys(p);
    if (!std::isfinite(p.x) || !std::isfinite(p.y) ||
        std::hypot(p.x, p.y) > rc.cart.basin)
      throw NumericError("orbit escapes the basin");
    pts.push_back(p);
  }
  return pts;
}

// checked where sampling happens so that simulate-only configs need no seed
void require_seed(const RunConfig& rc) {
  if (rc.estimator.area.method == AreaMethod::MonteCarlo && !rc.estimator.seed_given)
    throw ConfigError("[estimator] seed is mandatory for MonteCarlo");
}

std::vector<EpsAreaSample> ladder_of(const RunConfig& rc, const PlanarSet& set) {
  require_seed(rc);
  return eps_ladder(set, rc.estimator.eps_min, rc.estimator.eps_max,
                    rc.estimator.rungs, rc.estimator.area, rc.threads);
}

std::optional<Regime> regime_of(const RunConfig& rc, const DiscreteSpiral& s,
                                const PolarNormalForm* m,
                                std::optional<RegimeReport>* rep,
                                std::int64_t* q0_out) {
  std::int64_t q0 = 0;
  if (rc.overlap.q0) q0 = *rc.overlap.q0;
  else if (m) q0 = q0_of(*m);
  else q0 = q0_of(rc.hopf->params().omega, rc.q_max, rc.rational_tol);
  *q0_out = q0;
  if (std::int64_t(s.size()) <= q0 + 10) return std::nullopt;
  const auto a = overlap_sequences(s, q0);
  const auto L = std::int64_t(a.y.size());
  const auto window = rc.overlap.window > 0 ? rc.overlap.window : L / 4;
  if (window < 1 || L < 2 * window) return std::nullopt;
  *rep = ordering_regime(a, window);
  return (*rep)->regime;
}

json report_json(const RunConfig& rc, const ClassificationReport& r) {
  json j;
  j["config_hash"] = rc.hash;
  j["scenario"] = r.predicted.scenario.str();
  j["predicted"] = r.predicted.value.str();
  j["predicted_value"] = r.predicted.value.value();
  if (r.predicted.bounds)
    j["bounds"] = {r.predicted.bounds->first.str(), r.predicted.bounds->second.str()};
  j["estimate"] = r.estimate ? json(*r.estimate) : json(nullptr);
  j["verdict"] = to_string(r.verdict);
  j["tolerance"] = r.tolerance;
  if (r.within_envelope) j["within_envelope"] = *r.within_envelope;
  j["explanation"] = r.explanation;
  json ev = json::object();
  if (r.rotation) ev["rotation"] = rotation_json(*r.rotation);
  if (r.regime) ev["regime"] = to_string(*r.regime);
  j["evidence"] = ev;
  return j;
}

}  // namespace

RunConfig make_run_config(Config cfg, const CliOverrides& o) {
  RunConfig rc;
  try {
    cfg.require_keys("", {});
    cfg.require_keys("system", {"kind"});
    cfg.require_keys("map", kMapKeys);
    cfg.require_keys("hopf", {"a", "b", "omega", "k", "d", "c", "mu", "T", "steps",
                              "ceiling", "mode", "r_end", "n", "max_angle_step"});
    cfg.require_keys("cartesian", {"lambda1", "lambda2", "f", "g", "x1", "y1",
                                   "x_floor", "y_floor", "basin", "max_iter",
                                   "fd_step", "c", "tol"});
    cfg.require_keys("orbit", {"r0", "phi0", "max_iter", "r_floor", "escape"});
    cfg.require_keys("estimator", {"method", "samples", "seed", "eps_min", "eps_max",
                                   "rungs", "raster_subdiv", "box_count", "plot"});
    cfg.require_keys("overlap", {"window", "q0", "eps"});
    cfg.require_keys("tolerance", {"ns_rational", "ns_irrational", "chenciner",
                                   "center_manifold", "hyperbolic", "hopf_spiral",
                                   "envelope"});
    cfg.require_keys("sweep", {"param", "values"});
    cfg.require_keys("classify", {"q_max", "tol"});
    for (const auto& s : cfg.sections())
      if (s != "" && s != "system" && s != "map" && s != "hopf" && s != "cartesian" &&
          s != "orbit" && s != "estimator" && s != "overlap" && s != "tolerance" &&
          s != "sweep" && s != "classify")
        throw ConfigError("unknown section [" + s + "]");

    if (o.seed) {
      ConfigValue v;
      v.number = double(*o.seed);
      v.text = std::to_string(*o.seed);
      if (double(*o.seed) > 9.0e15) throw ConfigError("--seed must be below 9e15");
      cfg.set("estimator", "seed", v);
    }

    const int present = int(cfg.has("map")) + int(cfg.has("hopf")) + int(cfg.has("cartesian"));
    std::string kind = cfg.string("system", "kind", "");
    if (kind.empty()) {
      if (present != 1)
        throw ConfigError("config needs exactly one of [map], [hopf], [cartesian]");
      kind = cfg.has("map") ? "polar" : cfg.has("hopf") ? "hopf" : "cartesian";
    }
    if (kind == "polar") rc.kind = SystemKind::Polar;
    else if (kind == "hopf") rc.kind = SystemKind::Hopf;
    else if (kind == "cartesian") rc.kind = SystemKind::Cartesian;
    else throw ConfigError("[system] kind must be polar, hopf or cartesian");

    auto& ob = rc.orbit;
    ob.r0 = cfg.number("orbit", "r0", ob.r0);
    ob.phi0 = cfg.number("orbit", "phi0", ob.phi0);
    ob.max_iter = cfg.integer("orbit", "max_iter", ob.max_iter);
    ob.r_floor = cfg.number("orbit", "r_floor", ob.r_floor);
    ob.escape = cfg.number("orbit", "escape", ob.escape);
    if (ob.max_iter < 0) throw ConfigError("[orbit] max_iter must be >= 0");

    auto& es = rc.estimator;
    const bool cart = rc.kind == SystemKind::Cartesian;
    es.area.method = parse_area_method(
        cfg.string("estimator", "method", cart ? "GridRaster" : "MonteCarlo"));
    es.area.mc_samples = cfg.integer("estimator", "samples", kDefaultMcSamples);
    es.seed_given = cfg.has("estimator", "seed");
    const std::int64_t seed = cfg.integer("estimator", "seed", 0);
    if (seed < 0) throw ConfigError("[estimator] seed must be >= 0");
    es.area.seed = std::uint64_t(seed);
    es.area.raster_subdiv = int(cfg.integer("estimator", "raster_subdiv", kDefaultRasterSubdiv));
    es.eps_min = cfg.number("estimator", "eps_min", cart ? 1e-5 : 2e-3);
    es.eps_max = cfg.number("estimator", "eps_max", cart ? 1e-3 : 5e-2);
    es.rungs = int(cfg.integer("estimator", "rungs", 12));
    es.box_count = cfg.boolean("estimator", "box_count", false);
    es.plot = cfg.boolean("estimator", "plot", true);
    if (es.area.method == AreaMethod::MonteCarlo && es.area.mc_samples < kMinMcSamples)
      throw ConfigError("[estimator] samples must be >= 10000 for MonteCarlo");
    if (!(es.eps_min > 0 && es.eps_min < es.eps_max))
      throw ConfigError("[estimator] need 0 < eps_min < eps_max");
    if (es.rungs < 5) throw ConfigError("[estimator] rungs must be >= 5");

    if (rc.kind == SystemKind::Polar) {
      if (!cfg.has("map")) throw ConfigError("polar system needs a [map] section");
      rc.map = PolarNormalForm(map_params(cfg));
      if (!(ob.r0 > ob.r_floor && ob.r_floor > 0))
        throw ConfigError("[orbit] need r0 > r_floor > 0");
    }
    if (rc.kind == SystemKind::Hopf) {
      HopfParams h;
      h.a = cfg.number("hopf", "a", -1.0);
      h.b = cfg.number("hopf", "b", 0.0);
      h.omega = cfg.number("hopf", "omega", 1.0);
      h.k = int(cfg.integer("hopf", "k", 1));
      h.d = cfg.number("hopf", "d", 0.0);
      h.c = cfg.number("hopf", "c", 0.0);
      h.mu = cfg.number("hopf", "mu", 0.0);
      rc.hopf = ContinuousHopfSystem(h);
      auto& hs = rc.hopf_settings;
      hs.T = cfg.number("hopf", "T", hs.T);
      hs.steps = int(cfg.integer("hopf", "steps", hs.steps));
      hs.ceiling = cfg.number("hopf", "ceiling", hs.ceiling);
      const auto mode = cfg.string("hopf", "mode", "discrete");
      if (mode != "discrete" && mode != "continuous")
        throw ConfigError("[hopf] mode must be discrete or continuous");
      hs.continuous = mode == "continuous";
      hs.r_end = cfg.number("hopf", "r_end", hs.r_end);
      hs.n = cfg.integer("hopf", "n", hs.n);
      hs.max_angle_step = cfg.number("hopf", "max_angle_step", hs.max_angle_step);
      (void)flow_of(rc);  // validates T and steps
    }
    if (rc.kind == SystemKind::Cartesian) {
      PlanarMapSystem sys;
      sys.lambda1 = cfg.number("cartesian", "lambda1", 1.0);
      sys.lambda2 = cfg.number("cartesian", "lambda2", 0.5);
      sys.f = parse_poly(cfg, "f");
      sys.g = parse_poly(cfg, "g");
      rc.cartesian = sys;
      auto& cs = rc.cart;
      cs.x1 = cfg.number("cartesian", "x1", cs.x1);
      cs.y1 = cfg.number("cartesian", "y1");
      cs.x_floor = cfg.number("cartesian", "x_floor", cs.x_floor);
      cs.y_floor = cfg.number("cartesian", "y_floor", cs.y_floor);
      cs.basin = cfg.number("cartesian", "basin", cs.basin);
      cs.max_iter = cfg.integer("cartesian", "max_iter", cs.max_iter);
      cs.fd_step = cfg.number("cartesian", "fd_step", cs.fd_step);
      cs.c_override = cfg.number("cartesian", "c");
      cs.tol = cfg.number("cartesian", "tol", cs.tol);
    }

    rc.overlap.window = cfg.integer("overlap", "window", 0);
    if (cfg.has("overlap", "q0")) rc.overlap.q0 = cfg.integer("overlap", "q0", 1);
    rc.overlap.eps = number_list(cfg, "overlap", "eps");

    rc.sweep.param = cfg.string("sweep", "param", "mu");
    rc.sweep.values = number_list(cfg, "sweep", "values");

    auto& t = rc.tol;
    t.ns_rational = cfg.number("tolerance", "ns_rational", t.ns_rational);
    t.ns_irrational = cfg.number("tolerance", "ns_irrational", t.ns_irrational);
    t.chenciner = cfg.number("tolerance", "chenciner", t.chenciner);
    t.center_manifold = cfg.number("tolerance", "center_manifold", t.center_manifold);
    t.hyperbolic = cfg.number("tolerance", "hyperbolic", t.hyperbolic);
    t.hopf_spiral = cfg.number("tolerance", "hopf_spiral", t.hopf_spiral);
    t.envelope = cfg.number("tolerance", "envelope", t.envelope);
    rc.q_max = cfg.integer("classify", "q_max", kDefaultQMax);
    rc.rational_tol = cfg.number("classify", "tol", kDefaultRationalTol);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }

  rc.threads = std::max(1, o.threads.value_or(1));
  rc.format = o.format.value_or(OutputFormat::Csv);
  rc.out_dir = o.out_dir.value_or(".");
  rc.hash = sha256_hex(cfg.canonical());
  rc.raw = std::move(cfg);
  return rc;
}

RunConfig load_run_config(const std::string& path, const CliOverrides& o) {
  return make_run_config(Config::load(path), o);
}

MeasuredSet build_measured_set(const RunConfig& rc) {
  MeasuredSet ms;
  const auto& ob = rc.orbit;
  switch (rc.kind) {
    case SystemKind::Polar:
      ms.spiral = generate_spiral(*rc.map, ob.r0, ob.phi0, ob.max_iter, ob.r_floor,
                                  ob.escape);
      ms.set = planar_set(*ms.spiral);
      break;
    case SystemKind::Hopf:
      if (rc.hopf_settings.continuous) {
        ms.continuous = sample_continuous_spiral(*rc.hopf, ob.r0, rc.hopf_settings.r_end,
                                                 rc.hopf_settings.n,
                                                 rc.hopf_settings.max_angle_step);
        ms.set = planar_set(*ms.continuous);
      } else {
        ms.spiral = generate_spiral(flow_of(rc), ob.r0, ob.phi0, ob.max_iter,
                                    ob.r_floor, ob.escape);
        ms.set = planar_set(*ms.spiral);
      }
      break;
    case SystemKind::Cartesian: {
      CmOrbitResult cm;
      if (cartesian_nonhyperbolic(rc)) {
        cm.report = cm_coefficients(*rc.cartesian, rc.cart.fd_step, rc.cart.c_override,
                                    rc.cart.tol);
        cm.predicted = cm.report.predicted_dim;
        cm.x = cm_orbit(restriction_map(cm.report, rc.cartesian->lambda1), rc.cart.x1,
                        rc.cart.x_floor, rc.cart.max_iter, rc.cart.basin);
        for (double x : cm.x) cm.lifted.push_back({x, 0.5 * cm.report.omega_cm * x * x});
      } else {
        cm.lifted = cartesian_full_orbit(rc);
        cm.predicted = Fraction(0);
      }
      ms.set = planar_set(cm.lifted, 0.0);
      ms.cm = std::move(cm);
      break;
    }
  }
  return ms;
}

std::vector<std::string> cmd_simulate(const RunConfig& rc) {
  std::vector<std::string> files;
  const MeasuredSet ms = build_measured_set(rc);
  json meta;
  meta["config_hash"] = rc.hash;
  meta["system"] = map_json(rc);
  meta["kind"] = kind_name(rc.kind);
  if (ms.spiral) {
    files.push_back(write_table(rc, "orbit", orbit_table(ms.spiral->points)));
    const auto& last = ms.spiral->points.back();
    meta["length"] = ms.spiral->size();
    meta["stop_reason"] = to_string(ms.spiral->stop_reason);
    meta["final_r"] = last.r;
    meta["final_phi"] = last.unreduced();
    meta["winding"] = last.turns;
  } else if (ms.continuous) {
    files.push_back(write_table(rc, "orbit", orbit_table(ms.continuous->points)));
    meta["length"] = ms.continuous->points.size();
    meta["phi_range"] = {ms.continuous->phi_start, ms.continuous->phi_end};
  } else {
    files.push_back(write_table(rc, "orbit", orbit_table_xy(ms.cm->lifted)));
    meta["length"] = ms.cm->lifted.size();
  }
  meta["r0"] = rc.orbit.r0;
  meta["phi0"] = rc.orbit.phi0;
  const auto p = out_path(rc, "orbit_meta.json");
  write_json(p, meta);
  files.push_back(p);
  return files;
}

namespace {

std::optional<TheoreticalDimension> quick_prediction(const RunConfig& rc) {
  try {
    switch (rc.kind) {
      case SystemKind::Polar: return classify(*rc.map).predicted;
      case SystemKind::Hopf:
        return rc.hopf_settings.continuous ? classify_continuous_spiral(*rc.hopf).predicted
                                           : classify(*rc.hopf).predicted;
      case SystemKind::Cartesian:
        if (!cartesian_nonhyperbolic(rc)) return classify_hyperbolic().predicted;
        return classify(cm_coefficients(*rc.cartesian, rc.cart.fd_step,
                                        rc.cart.c_override, rc.cart.tol))
            .predicted;
    }
  } catch (const RefusedError&) {
  }
  return std::nullopt;
}

BoxdimResult run_boxdim(const RunConfig& rc, const MeasuredSet& ms) {
  BoxdimResult r;
  r.estimate = fit_box_dimension(ladder_of(rc, ms.set));
  if (rc.estimator.box_count && !ms.set.polyline)
    r.box = fit_box_dimension_from_counts(box_count_ladder(
        ms.set, rc.estimator.eps_min, rc.estimator.eps_max, rc.estimator.rungs));
  r.predicted = quick_prediction(rc);
  return r;
}

}  // namespace

std::vector<std::string> cmd_boxdim(const RunConfig& rc, BoxdimResult* out) {
  std::vector<std::string> files;
  const MeasuredSet ms = build_measured_set(rc);
  BoxdimResult r = run_boxdim(rc, ms);

  files.push_back(write_table(rc, "ladder", ladder_table(r.estimate.ladder)));
  json side;
  side["config_hash"] = rc.hash;
  side["seed"] = rc.estimator.area.seed;
  side["method"] = to_string(rc.estimator.area.method);
  side["samples"] = rc.estimator.area.mc_samples;
  side["eps_min"] = rc.estimator.eps_min;
  side["eps_max"] = rc.estimator.eps_max;
  side["rungs"] = rc.estimator.rungs;
  side["substreams"] = "rung index";
  auto p = out_path(rc, "ladder_meta.json");
  write_json(p, side);
  files.push_back(p);

  json j = estimate_json(r.estimate);
  j["config_hash"] = rc.hash;
  j["ladder"] = rc.format == OutputFormat::Json ? "ladder.json" : "ladder.csv";
  j["points"] = ms.set.points.size();
  j["nucleus"] = ms.set.nucleus;
  if (r.predicted) {
    j["scenario"] = r.predicted->scenario.str();
    j["predicted"] = r.predicted->value.str();
  }
  if (r.box) {
    j["box_count"] = estimate_json(*r.box);
    files.push_back(write_table(rc, "boxcount", box_count_table(r.box->counts)));
  }
  p = out_path(rc, "dimension.json");
  write_json(p, j);
  files.push_back(p);

  if (rc.estimator.plot) {
    std::optional<double> pred;
    if (r.predicted) pred = r.predicted->value.value();
    p = out_path(rc, "boxdim.svg");
    write_file(p, ladder_svg(r.estimate, pred, rc.hash));
    files.push_back(p);
  }
  if (out) *out = std::move(r);
  return files;
}

std::vector<std::string> cmd_overlap(const RunConfig& rc, OverlapResult* out) {
  if (rc.kind == SystemKind::Cartesian || (rc.kind == SystemKind::Hopf && rc.hopf_settings.continuous))
    throw ConfigError("overlap needs a discrete polar orbit ([map] or discrete [hopf])");
  const MeasuredSet ms = build_measured_set(rc);
  const DiscreteSpiral& s = *ms.spiral;
  std::int64_t q0 = 0;
  if (rc.overlap.q0) q0 = *rc.overlap.q0;
  else if (rc.map) q0 = q0_of(*rc.map);
  else q0 = q0_of(rc.hopf->params().omega, rc.q_max, rc.rational_tol);

  OverlapResult r;
  r.analysis = overlap_sequences(s, q0);
  r.regime = ordering_regime(r.analysis, rc.overlap.window);
  r.analysis.regime = r.regime.regime;
  r.analysis.K0 = r.regime.K0;
  if (r.analysis.y.size() >= 1000) r.exponents = overlap_exponents(r.analysis);

  std::vector<std::string> files;
  files.push_back(write_table(rc, "overlaps", overlap_table(r.analysis)));
  json j;
  j["config_hash"] = rc.hash;
  j["q0"] = q0;
  j["regime"] = to_string(r.regime.regime);
  j["K0"] = r.regime.K0 ? json(*r.regime.K0) : json(nullptr);
  j["length"] = r.analysis.y.size();
  if (r.exponents) {
    auto fit = [](const PowerFit& f) {
      return json{{"slope", f.slope}, {"stderr", f.slope_stderr},
                  {"coefficient", f.coefficient}};
    };
    j["exponents"] = {{"y", fit(r.exponents->y)}, {"z", fit(r.exponents->z)},
                      {"w", fit(r.exponents->w)}};
  }
  json m1 = json::array();
  const auto pts = planar_set(s, false).points;
  for (double e : rc.overlap.eps) {
    const auto k = first_overlap_index(r.analysis.z, e);
    m1.push_back({{"eps", e}, {"m1", k ? json(*k) : json(nullptr)},
                  {"overlap_count_tail", overlap_count_tail(pts, e)}});
  }
  j["m1"] = m1;
  if (r.regime.regime == Regime::Mixed)
    j["suggestion"] = "ordering is mixed; analyse the q-th root map (a/q, b/q, theta0/q)";
  const auto p = out_path(rc, "regime.json");
  write_json(p, j);
  files.push_back(p);
  if (out) *out = std::move(r);
  return files;
}

std::string write_refusal(const RunConfig& rc, const std::string& why) {
  json j;
  j["config_hash"] = rc.hash;
  j["verdict"] = "Refused";
  j["explanation"] = why;
  const auto p = out_path(rc, "classification.json");
  write_json(p, j);
  return p;
}

std::vector<std::string> cmd_classify(const RunConfig& rc, ClassificationReport* out) {
  ClassificationReport rep;
  json extra = json::object();
  try {
    switch (rc.kind) {
      case SystemKind::Polar:
      case SystemKind::Hopf: {
        const bool cont = rc.kind == SystemKind::Hopf && rc.hopf_settings.continuous;
        // resonance gate before any simulation
        if (rc.kind == SystemKind::Polar) {
          if (!rotation_rationality(*rc.map, rc.q_max, rc.rational_tol).nonresonant)
            (void)classify(*rc.map);
        } else if (!cont) {
          (void)classify(*rc.hopf);
        }
        const MeasuredSet ms = build_measured_set(rc);
        std::optional<RegimeReport> rr;
        std::optional<Regime> regime;
        if (ms.spiral) {
          std::int64_t q0 = 0;
          regime = regime_of(rc, *ms.spiral, rc.map ? &*rc.map : nullptr, &rr, &q0);
          extra["q0"] = q0;
          if (rr && rr->K0) extra["K0"] = *rr->K0;
        }
        const auto est = fit_box_dimension(ladder_of(rc, ms.set));
        extra["estimate"] = estimate_json(est);
        if (rc.kind == SystemKind::Polar) rep = classify(*rc.map, est, regime, rc.tol);
        else if (cont) rep = classify_continuous_spiral(*rc.hopf, est, rc.tol);
        else rep = classify(*rc.hopf, est, regime, rc.tol);
        break;
      }
      case SystemKind::Cartesian: {
        const PlanarMapSystem sys = *rc.cartesian;
        const auto m = multipliers([&](Vec2 p) { return sys(p); }, {0.0, 0.0}, rc.cart.tol);
        extra["multipliers"] = {{"n0", m.n0}, {"n_minus", m.n_minus}, {"n_plus", m.n_plus},
                                {"kind", to_string(m.kind)}};
        const MeasuredSet ms = build_measured_set(rc);
        const auto est = fit_box_dimension(ladder_of(rc, ms.set));
        extra["estimate"] = estimate_json(est);
        if (m.kind == FixedPointKind::Nonhyperbolic) rep = classify(ms.cm->report, est, rc.tol);
        else rep = classify_hyperbolic(est, rc.tol);
        break;
      }
    }
  } catch (const RefusedError& e) {
    write_refusal(rc, e.what());
    throw;
  }
  json j = report_json(rc, rep);
  for (auto& [k, v] : extra.items()) j["evidence"][k] = v;
  const auto p = out_path(rc, "classification.json");
  write_json(p, j);
  if (out) *out = rep;
  return {p};
}

std::vector<std::string> cmd_centermanifold(const RunConfig& rc) {
  if (rc.kind != SystemKind::Cartesian)
    throw ConfigError("centermanifold needs a [cartesian] system");
  require_seed(rc);
  CmOrbitParams p;
  p.fd_step = rc.cart.fd_step;
  p.c_override = rc.cart.c_override;
  p.tol = rc.cart.tol;
  p.x_floor = rc.cart.x_floor;
  p.max_iter = rc.cart.max_iter;
  p.basin = rc.cart.basin;
  p.eps_min = rc.estimator.eps_min;
  p.eps_max = rc.estimator.eps_max;
  p.rungs = rc.estimator.rungs;
  p.area = rc.estimator.area;
  p.threads = rc.threads;
  const auto res = cm_orbit_and_dimension(*rc.cartesian, rc.cart.x1, p);
  const auto& r = res.report;

  std::vector<std::string> files;
  json j;
  j["config_hash"] = rc.hash;
  j["lambda1"] = r.lambda1;
  j["lambda2"] = r.lambda2;
  j["sigma"] = r.sigma;
  j["delta"] = r.delta;
  j["a_coef"] = r.a_coef;
  j["b_coef"] = r.b_coef;
  j["c_used"] = r.c_used;
  j["c_source"] = r.c_overridden ? "config" : "lambda2";
  j["omega_cm"] = r.omega_cm;
  j["cubic_coef"] = r.cubic_coef;
  j["restriction"] = {0.0, r.lambda1, 0.5 * r.sigma, r.cubic_coef};
  j["nondegeneracy_order"] = r.nondegeneracy_order ? json(*r.nondegeneracy_order)
                                                   : json("Undetermined");
  j["predicted_dim"] = r.predicted_dim ? json(r.predicted_dim->str()) : json(nullptr);
  j["estimate"] = estimate_json(res.estimate);
  j["orbit_length"] = res.x.size();
  if (rc.cart.y1) {
    CmOrbitParams hp = p;
    hp.x_floor = rc.cart.y_floor;
    const auto hyp = hyperbolic_orbit_and_dimension(*rc.cartesian, *rc.cart.y1, hp);
    j["hyperbolic_direction"] = {{"estimate", estimate_json(hyp.estimate)},
                                 {"predicted_dim", "0"},
                                 {"orbit_length", hyp.x.size()}};
  }
  files.push_back(write_table(rc, "cm_orbit", orbit_table_xy(res.lifted)));
  files.push_back(write_table(rc, "cm_ladder", ladder_table(res.estimate.ladder)));
  const auto path = out_path(rc, "centermanifold.json");
  write_json(path, j);
  files.push_back(path);
  return files;
}

std::vector<std::string> cmd_hopfmap(const RunConfig& rc) {
  if (rc.kind != SystemKind::Hopf) throw ConfigError("hopfmap needs a [hopf] system");
  const FlowMap f = flow_of(rc);
  const auto& hp = rc.hopf->params();
  Table t{{"r0", "r_map", "r_closed_form", "abs_err", "dphi"}, {}};
  double max_err = 0.0;
  const bool closed = hp.mu == 0.0;
  for (int i = 0; i < 25; ++i) {
    const double r0 = 1e-3 * std::pow(100.0, i / 24.0);
    const auto [r1, dphi] = f.advance(r0);
    std::string rc_s = "nan", err_s = "nan";
    if (closed) {
      const double rcf = flow_radial_closed_form(hp.a, hp.k, r0, f.period());
      max_err = std::max(max_err, std::fabs(r1 - rcf));
      rc_s = fmt17(rcf);
      err_s = fmt17(std::fabs(r1 - rcf));
    }
    t.rows.push_back({fmt17(r0), fmt17(r1), rc_s, err_s, fmt17(dphi)});
  }
  std::vector<std::string> files{write_table(rc, "hopfmap", t)};
  json j;
  j["config_hash"] = rc.hash;
  j["T"] = f.period();
  j["steps"] = f.steps();
  if (closed) {
    j["max_abs_err_vs_closed_form"] = max_err;
    const auto c = fit_flow_coefficients(f, 1e-3, 1e-2);
    j["fitted"] = {{"a", c.a}, {"b", c.b}, {"omega", c.omega}};
  }
  j["system"] = map_json(rc);
  if (hp.k == 1) j["V3"] = rc.hopf->third_lyapunov_coefficient();
  const auto p = out_path(rc, "hopfmap.json");
  write_json(p, j);
  files.push_back(p);
  return files;
}

std::vector<std::string> cmd_sweep(const RunConfig& rc) {
  if (rc.kind != SystemKind::Polar) throw ConfigError("sweep needs a [map] system");
  if (rc.sweep.values.empty()) throw ConfigError("[sweep] values is empty");
  const auto& prm = rc.sweep.param;
  if (prm != "a" && prm != "b" && prm != "theta0" && prm != "d" && prm != "c" && prm != "mu")
    throw ConfigError("[sweep] param must be one of a, b, theta0, d, c, mu");

  const std::size_t n = rc.sweep.values.size();
  std::vector<std::optional<DiscreteSpiral>> spirals(n);
  std::vector<std::exception_ptr> errs(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        NormalFormParams p = rc.map->params();
        const double v = rc.sweep.values[i];
        if (prm == "a") p.a = v;
        if (prm == "b") p.b = v;
        if (prm == "theta0") { p.theta0 = v; p.theta0_over_pi.reset(); }
        if (prm == "d") p.d = v;
        if (prm == "c") p.c = v;
        if (prm == "mu") p.mu = v;
        const PolarNormalForm m(std::move(p));
        spirals[i] = generate_spiral(m, rc.orbit.r0, rc.orbit.phi0, rc.orbit.max_iter,
                                     rc.orbit.r_floor, rc.orbit.escape);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  const int nt = std::clamp<int>(rc.threads, 1, int(n));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);

  std::vector<std::string> files;
  json summary;
  summary["config_hash"] = rc.hash;
  summary["param"] = prm;
  json runs = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = *spirals[i];
    files.push_back(write_table(rc, "sweep_" + std::to_string(i), orbit_table(s.points)));
    json e;
    e["value"] = rc.sweep.values[i];
    e["length"] = s.size();
    e["stop_reason"] = to_string(s.stop_reason);
    e["final_r"] = s.points.back().r;
    const auto& mp = s.map->params();
    // invariant circle of r + d mu r + a r^alpha when d mu / a < 0
    const double q = -mp.d * mp.mu / mp.a;
    if (mp.a != 0.0 && q > 0.0) {
      const double rc_circle = std::pow(q, 1.0 / (mp.alpha - 1));
      e["invariant_circle_radius"] = rc_circle;
      e["final_rel_dev"] = std::fabs(s.points.back().r - rc_circle) / rc_circle;
    }
    runs.push_back(e);
  }
  summary["runs"] = runs;
  const auto p = out_path(rc, "sweep.json");
  write_json(p, summary);
  files.push_back(p);
  return files;
}

}  // namespace spiraldim
