// Acceptance runner. `acceptance` runs every criterion, `acceptance N` only
// criterion N. One line per criterion; exit status 1 if any failed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spiraldim/center_manifold.hpp"
#include "spiraldim/commands.hpp"
#include "spiraldim/dimension.hpp"
#include "spiraldim/fit.hpp"
#include "spiraldim/neighborhood.hpp"
#include "spiraldim/normal_forms.hpp"
#include "spiraldim/orbits.hpp"
#include "spiraldim/overlaps.hpp"

using namespace spiraldim;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PolarNormalForm polar(int alpha, double b, double theta0, std::optional<Fraction> exact = {}) {
  NormalFormParams p;
  p.a = -1;
  p.alpha = alpha;
  p.b = b;
  p.theta0 = theta0;
  p.theta0_over_pi = exact;
  return PolarNormalForm(p);
}

AreaOptions mc(std::int64_t samples, std::uint64_t seed) {
  AreaOptions o;
  o.method = AreaMethod::MonteCarlo;
  o.mc_samples = samples;
  o.seed = seed;
  return o;
}

AreaOptions raster() {
  AreaOptions o;
  o.method = AreaMethod::GridRaster;
  return o;
}

struct SpiralRun {
  DiscreteSpiral spiral;
  DimensionEstimate est;
  double seconds = 0.0;
};

// r0 = 0.5, pinned ladder [2e-3, 5e-2], 12 rungs, MonteCarlo 2e5 per rung
SpiralRun measure_spiral(const PolarNormalForm& m, double r_floor, double eps_max = 5e-2) {
  const auto t0 = std::chrono::steady_clock::now();
  SpiralRun run;
  run.spiral = generate_spiral(m, 0.5, 0.0, 2000000, r_floor);
  const auto lad = eps_ladder(planar_set(run.spiral), 2e-3, eps_max, 12, mc(200000, 1));
  run.est = fit_box_dimension(lad);
  run.seconds = seconds_since(t0);
  return run;
}

const SpiralRun& rational_run() {
  static const auto r = measure_spiral(polar(3, 0, pi / 6, Fraction(1, 6)), 1e-3);
  return r;
}

const SpiralRun& irrational_run() {
  static const auto r = measure_spiral(polar(3, 1, 1.0), 1e-3);
  return r;
}

Outcome c01() {
  const auto& r = rational_run();
  const double d = r.est.dim;
  return {std::fabs(d - 2.0 / 3) <= 0.10 && r.seconds < 60,
          fmt("rational NS, b=0: dim=%.4f (target 2/3 +- 0.10), %.1f s (limit 60 s)", d,
              r.seconds)};
}

Outcome c02() {
  const auto r = measure_spiral(polar(3, 1, pi / 6, Fraction(1, 6)), 1e-3);
  const double d = r.est.dim;
  return {std::fabs(d - 2.0 / 3) <= 0.10,
          fmt("rational NS, b=1: dim=%.4f (target 2/3 +- 0.10), %.1f s", d, r.seconds)};
}

Outcome c03() {
  const auto& r = irrational_run();
  const double d = r.est.dim;
  return {std::fabs(d - 4.0 / 3) <= 0.12 && r.seconds < 120,
          fmt("irrational NS, theta0=1, b=1: dim=%.4f (target 4/3 +- 0.12), %.1f s (limit 120 s)",
              d, r.seconds)};
}

Outcome c04() {
  const double lo = 2.0 / 3 - 0.12, hi = 4.0 / 3 + 0.12;
  bool ok = true;
  std::string s = "half-ladder envelope [" + fmt("%.4f, %.4f", lo, hi) + "]:";
  for (const auto* r : {&rational_run(), &irrational_run()}) {
    const double l = r->est.dim_lower, u = r->est.dim_upper;
    ok = ok && lo <= l && l <= u && u <= hi;
    s += fmt(" (lower=%.4f, upper=%.4f)", l, u);
  }
  return {ok, s};
}

Outcome c05() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = generate_spiral(polar(5, 1, 1.0), 0.5, 0.0, 2000000, 0.02);
  const auto est = fit_box_dimension(eps_ladder(planar_set(s), 2e-3, 3e-2, 12, mc(200000, 5)));
  const double d = est.dim;
  return {std::fabs(d - 8.0 / 5) <= 0.15,
          fmt("alpha=5, theta0=1, b=1: dim=%.4f (target 8/5 +- 0.15), %.1f s", d,
              seconds_since(t0))};
}

Outcome c06() {
  PlanarMapSystem e1;
  e1.lambda1 = 1;
  e1.lambda2 = 0.5;
  e1.f.terms = {{2, 0, 1.0}};
  PlanarMapSystem e2 = e1;
  e2.lambda1 = -1;
  e2.f.terms = {{3, 0, 1.0}};

  CmOrbitParams p1;
  p1.x_floor = 1e-5;
  p1.eps_min = 1e-5;
  p1.eps_max = 1e-3;
  p1.rungs = 12;
  const auto r1 = cm_orbit_and_dimension(e1, -0.4, p1);

  CmOrbitParams p2;
  p2.x_floor = 1e-3;
  p2.eps_min = 1e-3;
  p2.eps_max = 2e-2;
  p2.rungs = 12;
  const auto r2 = cm_orbit_and_dimension(e2, 0.4, p2);

  CmOrbitParams ph;
  ph.x_floor = 1e-12;
  ph.eps_min = 1e-5;
  ph.eps_max = 1e-3;
  ph.rungs = 12;
  const auto rh = hyperbolic_orbit_and_dimension(e1, 0.5, ph);

  const double d1 = r1.estimate.dim, s1 = r1.report.sigma, d2 = r2.estimate.dim,
               dh = rh.estimate.dim;
  const bool ok = std::fabs(d1 - 0.5) <= 0.08 && std::fabs(s1 - 2) <= 1e-6 &&
                  std::fabs(d2 - 2.0 / 3) <= 0.08 && dh < 0.15;
  return {ok, fmt("example 1: dim=%.4f (1/2 +- 0.08), sigma=%.9f (2 +- 1e-6); "
                  "example 2: dim=%.4f (2/3 +- 0.08); hyperbolic: dim=%.4f (< 0.15)",
                  d1, s1, d2, dh)};
}

Outcome c07() {
  bool ok = true;
  std::string s = "decay exponent:";
  for (int alpha : {3, 5}) {
    const auto sp = generate_spiral(polar(alpha, 0, 1.0), 0.5, 0.0, 2000000, 1e-6);
    const auto f = radial_decay_exponent(sp);
    const double want = 1.0 / (alpha - 1);
    ok = ok && std::fabs(f.gamma - want) <= 0.03;
    s += fmt(" alpha=%d gamma=%.4f (%.4f +- 0.03);", alpha, f.gamma, want);
  }
  return {ok, s};
}

// Regress (f^k(r) - r)/r^alpha on r^(alpha-1); the intercept is the leading
// radial coefficient. Same for the angle with exponent alpha-1.
Outcome c08() {
  double worst = 0.0;
  for (int alpha : {3, 5})
    for (double b : {0.0, 1.0}) {
      const auto m = polar(alpha, b, 1.0);
      for (int k = 1; k <= 20; ++k) {
        std::vector<double> x, yr, ya;
        for (double r : geometric_ladder(alpha == 3 ? 1e-4 : 1e-2, alpha == 3 ? 1e-3 : 3e-2, 12)) {
          const PolarPoint p{r, 0.0, 0};
          const auto q = iterate_k(m, p, k);
          x.push_back(std::pow(r, alpha - 1));
          yr.push_back((q.r - r) / std::pow(r, alpha));
          ya.push_back((q.unreduced() - k * m.theta0()) / std::pow(r, alpha - 1));
        }
        const double cr = linear_fit(x, yr).intercept;
        worst = std::max(worst, std::fabs(cr - k * m.a()) / std::fabs(k * m.a()));
        if (b != 0) {
          const double ca = linear_fit(x, ya).intercept;
          worst = std::max(worst, std::fabs(ca - k * b) / std::fabs(k * b));
        }
      }
    }
  return {worst <= 0.01,
          fmt("leading coefficients of f^k, k<=20, alpha in {3,5}: worst relative error %.2e "
              "(limit 1e-2)",
              worst)};
}

Outcome c09() {
  const auto& s = rational_run().spiral;
  const auto a = overlap_sequences(s, 12);
  const auto ex = overlap_exponents(a);
  const auto reg = ordering_regime(a);
  bool ordered = reg.regime == Regime::RationalLike && reg.K0;
  if (ordered)
    for (auto k = std::size_t(*reg.K0); k < a.y.size(); ++k) ordered = ordered && a.z[k] < a.y[k];

  const auto small = generate_spiral(polar(3, 1, 0.1), 0.5, 0.0, 2000000, 1e-3);
  const auto small_reg = ordering_regime(overlap_sequences(small, q0_of(0.1)));

  const bool ok = std::fabs(ex.z.slope + 1.5) <= 0.05 && std::fabs(ex.y.slope + 0.5) <= 0.05 &&
                  ordered && small_reg.regime == Regime::IrrationalLike;
  return {ok, fmt("z slope=%.4f (-3/2 +- 0.05), y slope=%.4f (-1/2 +- 0.05); rational: %s, "
                  "K0=%lld, z<y beyond K0: %s; theta0=0.1: %s (want IrrationalLike)",
                  ex.z.slope, ex.y.slope, to_string(reg.regime),
                  (long long)(reg.K0 ? *reg.K0 : -1), ordered ? "yes" : "no",
                  to_string(small_reg.regime))};
}

Outcome c10() {
  const auto a = overlap_sequences(rational_run().spiral, 12);
  // asymptotic window: m1 >> 1/r0^2 (m1 ~ 10^3..10^4 here)
  std::vector<double> x, y;
  for (double e : geometric_ladder(1e-6, 1e-4, 9)) {
    const auto m = first_overlap_index(a.z, e);
    if (!m) return {false, fmt("no overlap index at eps=%.3g", e)};
    x.push_back(std::log(e));
    y.push_back(std::log(double(*m)));
  }
  const double sl = linear_fit(x, y).slope;
  return {std::fabs(sl + 2.0 / 3) <= 0.05,
          fmt("log m1 vs log eps over [1e-6, 1e-4]: slope=%.4f (-2/3 +- 0.05)", sl)};
}

Outcome c11() {
  double err = 0.0, rel = 0.0;
  for (int k : {1, 2}) {
    HopfParams h;
    h.a = -1;
    h.b = 1;
    h.omega = 1;
    h.k = k;
    const auto f = unit_time_map(ContinuousHopfSystem(h));
    for (double r0 : geometric_ladder(1e-3, 0.1, 25))
      err = std::max(err, std::fabs(f.advance(r0).first - flow_radial_closed_form(-1, k, r0, 1)));
    const auto c = k == 1 ? fit_flow_coefficients(f, 1e-3, 1e-2)
                          : fit_flow_coefficients(f, 1e-2, 5e-2);
    rel = std::max({rel, std::fabs(c.a - h.a) / std::fabs(h.a),
                    std::fabs(c.b - h.b) / std::fabs(h.b),
                    std::fabs(c.omega - h.omega) / std::fabs(h.omega)});
  }
  return {err <= 1e-8 && rel <= 1e-3,
          fmt("k in {1,2}: max |r(1) - closed form| = %.2e (limit 1e-8), fitted (a,b,omega) "
              "worst relative error %.2e (limit 1e-3)",
              err, rel)};
}

Outcome c12() {
  double d[2];
  for (int k : {1, 2}) {
    HopfParams h;
    h.a = -1;
    h.b = 1;
    h.omega = 1;
    h.k = k;
    const ContinuousHopfSystem sys(h);
    const auto s = sample_continuous_spiral(sys, 1.0, k == 1 ? 0.03 : 0.1, 2000);
    d[k - 1] = fit_box_dimension(eps_ladder(planar_set(s), 2e-3, 5e-2, 12, raster())).dim;
  }
  return {std::fabs(d[0] - 4.0 / 3) <= 0.10 && std::fabs(d[1] - 8.0 / 5) <= 0.12,
          fmt("continuous Hopf spiral: k=1 dim=%.4f (4/3 +- 0.10), k=2 dim=%.4f (8/5 +- 0.12)",
              d[0], d[1])};
}

Outcome c13() {
  const auto& run = rational_run();
  const auto& pts = run.spiral.points;
  const double nucleus = pts.back().r;
  std::vector<DimensionEstimate> parts;
  for (std::size_t j = 0; j < 12; ++j) {
    std::vector<Vec2> ray;
    for (std::size_t k = j; k < pts.size(); k += 12) ray.push_back({pts[k].x(), pts[k].y()});
    parts.push_back(
        fit_box_dimension(eps_ladder(planar_set(ray, nucleus), 2e-3, 5e-2, 12, mc(200000, 1))));
  }
  const auto fs_ = finite_stability_check(parts, run.est, 0.10);
  return {fs_.pass, fmt("max over 12 rays=%.4f, full spiral=%.4f, |diff|=%.4f (limit 0.10)",
                        fs_.max_dim, fs_.union_dim, std::fabs(fs_.max_dim - fs_.union_dim))};
}

Outcome c14() {
  PlanarMapSystem s;
  s.lambda1 = 1;
  s.lambda2 = 0.5;
  s.f.terms = {{2, 0, 1.0}};
  s.g.terms = {{2, 0, 1.0}};
  CmOrbitParams p;
  p.x_floor = 1e-5;
  p.eps_min = 1e-5;
  p.eps_max = 1e-3;
  p.rungs = 12;
  const auto r = cm_orbit_and_dimension(s, -0.4, p);
  std::vector<Vec2> flat;
  for (double x : r.x) flat.push_back({x, 0.0});
  const double proj =
      fit_box_dimension(eps_ladder(planar_set(flat), p.eps_min, p.eps_max, p.rungs, p.area)).dim;
  const double lifted = r.estimate.dim;
  return {std::fabs(lifted - proj) <= 0.05,
          fmt("lifted dim=%.4f, projected dim=%.4f, |diff|=%.4f (limit 0.05)", lifted, proj,
              std::fabs(lifted - proj))};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome c15() {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"polar", R"([map]
a = -1
b = 1
theta0 = pi/6
[orbit]
r0 = 0.5
r_floor = 5e-3
[estimator]
method = MonteCarlo
samples = 50000
seed = 17
eps_min = 5e-3
eps_max = 5e-2
rungs = 8
box_count = true
[sweep]
param = mu
values = [-0.05, 0.05]
)"},
      {"cartesian", R"([cartesian]
lambda1 = 1
lambda2 = 0.5
f = [[2, 0, 1]]
x1 = -0.4
y1 = 0.5
x_floor = 1e-3
[estimator]
method = GridRaster
eps_min = 1e-3
eps_max = 1e-2
rungs = 6
)"},
      {"hopf", R"([hopf]
a = -1
b = 1
omega = 1
[orbit]
r0 = 0.5
r_floor = 0.02
[estimator]
method = MonteCarlo
samples = 20000
seed = 3
eps_min = 1e-2
eps_max = 5e-2
rungs = 5
)"}};
  const auto base = fs::temp_directory_path() / "spiraldim_acceptance_det";
  fs::remove_all(base);
  std::size_t files = 0, differ = 0;
  for (const auto& [name, text] : cases)
    for (auto format : {OutputFormat::Csv, OutputFormat::Json}) {
      std::vector<fs::path> dirs;
      for (int rep = 0; rep < 2; ++rep) {
        const auto dir = base / (name + (format == OutputFormat::Csv ? "_csv_" : "_json_") +
                                 std::to_string(rep));
        fs::create_directories(dir);
        CliOverrides o;
        o.out_dir = dir.string();
        o.format = format;
        const auto rc = make_run_config(Config::parse(text), o);
        cmd_simulate(rc);
        cmd_boxdim(rc);
        if (name == "polar") {
          cmd_overlap(rc);
          cmd_sweep(rc);
        }
        if (name == "cartesian") cmd_centermanifold(rc);
        if (name == "hopf") cmd_hopfmap(rc);
        cmd_classify(rc);
        dirs.push_back(dir);
      }
      for (const auto& e : fs::directory_iterator(dirs[0])) {
        ++files;
        const auto other = dirs[1] / e.path().filename();
        if (!fs::exists(other) || slurp(e.path()) != slurp(other)) ++differ;
      }
    }
  fs::remove_all(base);
  return {files > 0 && differ == 0,
          fmt("%zu output files compared across repeated runs, %zu differ", files, differ)};
}

const std::vector<std::function<Outcome()>> kCriteria = {c01, c02, c03, c04, c05, c06, c07, c08,
                                                         c09, c10, c11, c12, c13, c14, c15};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  if (argc > 1) {
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > int(kCriteria.size())) {
      std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0], kCriteria.size());
      return 2;
    }
    which.push_back(n);
  } else {
    for (int i = 1; i <= int(kCriteria.size()); ++i) which.push_back(i);
  }
  int failed = 0;
  for (int i : which) {
    Outcome o;
    try {
      o = kCriteria[i - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d: %s  %s\n", i, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
