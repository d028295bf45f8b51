#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>

#include "biharm/averaged_kernel.hpp"
#include "biharm/conformal.hpp"
#include "biharm/discrete.hpp"
#include "biharm/fields.hpp"
#include "biharm/haar.hpp"
#include "biharm/io.hpp"
#include "biharm/liouville.hpp"
#include "biharm/parallel.hpp"
#include "biharm/runner.hpp"
#include "biharm/spectral_core.hpp"

#ifndef BIHARM_VERSION
#define BIHARM_VERSION "unknown"
#endif

namespace biharm {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

// Tracks outputs and stage timings for one run.
class Context {
 public:
  explicit Context(const ExperimentConfig& c) : cfg(c), hash(config_hash(c)) {
    std::error_code ec;
    fs::create_directories(c.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + c.out_dir.string() + ": " + ec.message());
  }

  const ExperimentConfig& cfg;
  const std::string hash;
  RunManifest manifest;

  void stage(const std::string& name, const std::function<void()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    current_ = name;
    body();
    manifest.stages.push_back({name, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
  }
  const std::string& current() const { return current_; }

  fs::path path(const std::string& name) const { return cfg.out_dir / name; }

  void record(const std::string& name) {
    for (const auto& o : manifest.outputs)
      if (o.name == name) return;
    manifest.outputs.push_back({name, "", 0});
  }

  // Appends one JSON record with provenance fields.
  void jsonl(const std::string& file, ordered_json rec) {
    ordered_json out;
    out["stage"] = current_;
    out["config_hash"] = hash;
    for (auto it = rec.begin(); it != rec.end(); ++it) out[it.key()] = it.value();
    open_text(file) << out.dump() << '\n';
  }
  void report(const std::string& file, const MomentReport& r) { jsonl(file, ordered_json::parse(r.to_json())); }

  std::ofstream& open_text(const std::string& file) {
    auto it = streams_.find(file);
    if (it == streams_.end()) {
      std::ofstream os(path(file));
      if (!os) throw IoError("cannot open " + path(file).string() + " for writing");
      it = streams_.emplace(file, std::move(os)).first;
      record(file);
    }
    return it->second;
  }

  void dump(const std::string& file, const Dump& d) {
    write_dump(path(file), d.header, d.values);
    record(file);
  }

  void finish() {
    for (auto& [name, os] : streams_) {
      os.flush();
      if (!os) throw IoError("write failed: " + name);
      os.close();
    }
    for (auto& o : manifest.outputs) {
      o.crc32 = file_crc32(path(o.name));
      o.bytes = fs::file_size(path(o.name));
    }
  }

 private:
  std::string current_;
  std::map<std::string, std::ofstream> streams_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string level_tag(int l) { return "l" + std::to_string(l); }

std::string gamma_tag(double g) {
  std::ostringstream os;
  os << "g" << g;
  return os.str();
}

Vec4 unit_direction(const SeededStream& s) {
  Vec4 e;
  double n = 0.0;
  for (int k = 0; k < kDim; ++k) {
    e[k] = s.normal(StreamTag::replica, 0, static_cast<std::uint32_t>(k));
    n += e[k] * e[k];
  }
  for (double& v : e) v /= std::sqrt(n);
  return e;
}

// ---- kernel-eval -------------------------------------------------------------

void kernel_eval(Context& ctx) {
  ctx.stage("kernel-eval", [&] {
    const Vec4 e = unit_direction(SeededStream(ctx.cfg.seed));
    const TorusPoint x(0.17, 0.41, 0.63, 0.29);
    auto& csv = ctx.open_text("kernel_eval.csv");
    csv << "stage,config_hash,d,green_d2,green_4pi2_d2,k_plus_log_d,green_error,k_error\n";
    const int n = 40;
    const double band = ctx.cfg.tolerance("kernel.green_band", 0.02);
    double sup = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (int j = 0; j < n; ++j) {
      const double d = 1e-3 * std::pow(300.0, j / (n - 1.0));
      Vec4 step = e;
      for (double& v : step) v *= d;
      const TorusPoint y = x.shifted(step);
      const KernelValue g = green_kernel(x, y);
      const KernelValue k = biharmonic_kernel(x, y);
      const double gd2 = g.value * d * d;
      csv << ctx.current() << ',' << ctx.hash << ',' << fmt(d) << ',' << fmt(gd2) << ',' << fmt(gd2 * kFourPiSq) << ','
          << fmt(k.value + std::log(d)) << ',' << fmt(g.error_bound) << ',' << fmt(k.error_bound) << '\n';
      if (d <= 1e-2 && std::abs(gd2 * kFourPiSq - 1.0) > band)
        throw NumericalBreach("G d^2 outside the 1/(4 pi^2) band at d=" + fmt(d));
      if (d <= 0.1) {
        const double t = -std::log(d);
        sx += t, sy += k.value, sxx += t * t, sxy += t * k.value;
        ++m;
        sup = std::max(sup, std::abs(k.value + std::log(d)));
      }
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    ctx.jsonl("kernel_eval.jsonl", {{"log_slope", slope}, {"sup_abs_k_plus_log_d", sup}, {"points", m}});
    if (std::abs(slope - 1.0) > ctx.cfg.tolerance("kernel.slope", 0.02)) throw NumericalBreach("log-kernel slope " + fmt(slope));
  });
}

// ---- sample-field ------------------------------------------------------------

void sample_field(Context& ctx) {
  const SeededStream root(ctx.cfg.seed);
  for (int l = ctx.cfg.level_min; l <= ctx.cfg.level_max; ++l) {
    ctx.stage("sample-field." + level_tag(l), [&] {
      const HaarFieldSample h(l, root);
      ctx.dump("haar_xi_" + level_tag(l) + ".bin", {{DumpKind::haar, l, ctx.cfg.seed, 0.0, h.xi().size()}, h.xi()});
      const GridField cells = h.cell_averages(l);
      ctx.dump("haar_cells_" + level_tag(l) + ".bin", to_dump(cells, ctx.cfg.seed));
      const GridField fine = h.cell_averages(l + 1 <= 7 ? l + 1 : l);
      const GridField back = project_piecewise(fine, l);
      double tower = 0.0;
      for (std::size_t i = 0; i < cells.size(); ++i) tower = std::max(tower, std::abs(back[i] - cells[i]));
      if (tower > ctx.cfg.tolerance("field.tower", 1e-12)) throw NumericalBreach("tower identity defect " + fmt(tower));

      const GridField cube = CubeAverageSampler(l).sample(root);
      ctx.dump("cube_avg_" + level_tag(l) + ".bin", to_dump(cube, ctx.cfg.seed));
      double var = 0.0;
      for (double v : cube.values()) var += v * v;
      ctx.jsonl("sample_field.jsonl", {{"level", l},
                                       {"haar_coefficients", h.xi().size()},
                                       {"haar_cell_mean", cells.mean()},
                                       {"tower_defect", tower},
                                       {"cube_avg_mean", cube.mean()},
                                       {"cube_avg_empirical_var", var / static_cast<double>(cube.size())},
                                       {"k_l_diagonal", cube_covariance_lattice(l)[0]}});
    });
  }
  ctx.stage("sample-field.spectral", [&] {
    const int n = std::min(ctx.cfg.cutoff, 16);
    const SpectralField u = sample_spectral_field(n, root);
    ctx.dump("spectral_N" + std::to_string(n) + ".bin", to_dump(u, ctx.cfg.seed));
    ctx.jsonl("sample_field.jsonl", {{"cutoff", n}, {"paneitz_energy", paneitz_energy(u)}, {"hermitian_defect", u.max_hermitian_defect()}});
  });
}

// ---- discrete-field ----------------------------------------------------------

void discrete_field(Context& ctx) {
  const SeededStream root(ctx.cfg.seed);
  for (int l = ctx.cfg.level_min; l <= ctx.cfg.level_max; ++l) {
    ctx.stage("discrete-field." + level_tag(l), [&] {
      const DiscreteField h = sample_discrete_field(l, root);
      ctx.dump("discrete_" + level_tag(l) + ".bin", to_dump(h, ctx.cfg.seed));

      DiscreteField u(l);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = root.normal(StreamTag::replica, i, 1000u + static_cast<std::uint32_t>(l));
      u.ground();
      const DiscreteField a = discrete_green_apply(u, GreenMethod::dft);
      const GreenResult b = discrete_green(u, GreenMethod::neumann);
      double dn = 0.0, dd = -1.0;
      for (std::size_t i = 0; i < u.size(); ++i) dn = std::max(dn, std::abs(a[i] - b.value[i]));
      if (l <= 2) {
        const DiscreteField c = discrete_green_apply(u, GreenMethod::dense);
        dd = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) dd = std::max(dd, std::abs(a[i] - c[i]));
      }
      ordered_json rec{{"level", l},
                       {"spectral_gap", spectral_gap(l)},
                       {"k_dot", diagonal_variance(l)},
                       {"gibbs_log_density", gibbs_log_density(h)},
                       {"dft_vs_neumann", dn},
                       {"neumann_terms", b.iterations},
                       {"neumann_tail_bound", b.tail_bound}};
      if (dd >= 0.0) rec["dft_vs_dense"] = dd;
      ctx.jsonl("discrete_field.jsonl", rec);
      if (dn > ctx.cfg.tolerance("green.neumann", 1e-9)) throw NumericalBreach("dft/neumann Green disagreement " + fmt(dn));
      if (dd > ctx.cfg.tolerance("green.dense", 1e-10)) throw NumericalBreach("dft/dense Green disagreement " + fmt(dd));
    });
  }
}

// ---- liouville ---------------------------------------------------------------

void liouville(Context& ctx) {
  const SeededStream root(ctx.cfg.seed);
  for (int l = ctx.cfg.level_min; l <= ctx.cfg.level_max; ++l)
    for (std::size_t gi = 0; gi < ctx.cfg.gammas.size(); ++gi) {
      const double g = ctx.cfg.gammas[gi];
      ctx.stage("liouville." + level_tag(l) + "." + gamma_tag(g), [&] {
        const SeededStream s = root.derive(static_cast<std::uint64_t>(l) * 1000 + gi);
        const MomentReport semi = mass_moments(l, g, ctx.cfg.samples, s.derive(0));
        const MomentReport disc = discrete_mass_moments(l, g, ctx.cfg.samples, s.derive(1));
        ctx.report("liouville.jsonl", semi);
        ctx.report("liouville.jsonl", disc);
        const LiouvilleMeasure mu = semi_discrete_measure(CubeAverageSampler(l).sample(s.derive(0).derive(0)), g, ctx.cfg.seed);
        ctx.dump("measure_" + level_tag(l) + "_" + gamma_tag(g) + ".bin", {{DumpKind::measure_semi, l, ctx.cfg.seed, g, mu.masses.size()}, mu.masses});
      });
    }
}

// ---- conformal-check ---------------------------------------------------------

void conformal_check(Context& ctx) {
  const SeededStream root(ctx.cfg.seed);
  const double amp = ctx.cfg.tolerance("conformal.amplitude", 0.1);
  const ConformalWeight w(SpectralField::cosine_mode(FrequencyVector{{1, 0, 0, 0}}, 1, amp));
  ctx.stage("conformal-check.covariance", [&] {
    SpectralField u1 = SpectralField::cosine_mode(FrequencyVector{{1, 0, 0, 0}}, 2);
    SpectralField u2(2, true);
    u2.set(FrequencyVector{{1, 1, 0, 0}}, {0.0, -0.5});  // sin(2 pi (x1 + x2))
    SpectralField u3 = SpectralField::cosine_mode(FrequencyVector{{0, 1, 0, 0}}, 2);
    u3.set(FrequencyVector{{2, 0, 0, 0}}, 0.25);
    const std::vector<SpectralField> us{u1, u2, u3};
    std::vector<WeightedTest> tests;
    for (const auto& u : us) tests.push_back(weighted_test(w, u));
    const std::size_t n = ctx.cfg.samples;
    std::vector<double> p(3 * n);
    parallel_for(0, n, [&](std::size_t s) {
      const SeededStream ss = root.derive(s);
      const double xi = conformal_shift(ss, w);
      for (int a = 0; a < 3; ++a) p[3 * s + a] = conformal_pairing(ss, xi, tests[a]);
    });
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) {
        std::vector<double> prod(n);
        for (std::size_t s = 0; s < n; ++s) prod[s] = p[3 * s + a] * p[3 * s + b];
        const Estimate e = summarize("cov", prod);
        const double exact = conformal_kernel_pairing(w, us[a], us[b]);
        ctx.jsonl("conformal.jsonl", {{"pair", std::to_string(a + 1) + std::to_string(b + 1)},
                                      {"monte_carlo", e.value},
                                      {"std_error", e.std_error},
                                      {"kernel", exact},
                                      {"z", (e.value - exact) / e.std_error}});
      }
    ctx.jsonl("conformal.jsonl", {{"volume", w.volume()}, {"quadrature_error", w.quadrature_error()}});
  });
  ctx.stage("conformal-check.quasi_invariance", [&] {
    SpectralField one(0, false);
    one.set(FrequencyVector{}, 1.0);
    const MomentReport r = quasi_invariance_check(ctx.cfg.level_max, ctx.cfg.gammas.front(), w, one, ctx.cfg.samples, root.derive(1u << 30));
    ctx.report("conformal.jsonl", r);
  });
}

// ---- convergence-report --------------------------------------------------------

void convergence_report(Context& ctx) {
  ctx.stage("convergence-report", [&] {
    auto& csv = ctx.open_text("convergence.csv");
    csv << "stage,config_hash,level,k_l_diag,k_dot,k_hat_center,neg_sobolev_expectation,spectral_gap";
    for (double g : ctx.cfg.gammas) csv << ",second_moment_" << gamma_tag(g);
    csv << '\n';
    const auto one = [](const TorusPoint&) { return 1.0; };
    for (int l = ctx.cfg.level_min; l <= ctx.cfg.level_max; ++l) {
      const double h = std::ldexp(1.0, -l);
      const TorusPoint c(h / 2, h / 2, h / 2, h / 2);
      csv << ctx.current() << ',' << ctx.hash << ',' << l << ',' << fmt(cube_covariance_lattice(l)[0]) << ',' << fmt(diagonal_variance(l))
          << ',' << fmt(covariance_hat(l, c, c)) << ',' << fmt(negative_sobolev_expectation(l, 0.5)) << ',' << fmt(spectral_gap(l));
      for (double g : ctx.cfg.gammas) csv << ',' << (std::abs(g) < kL2Gamma ? fmt(second_moment_quadrature(l, g, one)) : std::string());
      csv << '\n';
    }
    ctx.jsonl("convergence.jsonl", {{"neg_sobolev_limit", kEightPiSq * fractional_green_at_offset(3.0, Vec4{}).value},
                                    {"continuum_spectral_gap", kFourPiSq}});
  });
}

}  // namespace

RunManifest run(const ExperimentConfig& cfg) {
  bool known = false;
  for (const auto& s : suite_names()) known = known || s == cfg.experiment;
  if (!known) throw UnknownSuite("unknown experiment: '" + cfg.experiment + "'");
  std::vector<std::string> warnings;
  for (const auto& v : validate(cfg)) {
    if (v.error) throw ConfigError(v.message);
    warnings.push_back(v.message);
  }
  set_thread_count(cfg.threads);

  Context ctx(cfg);
  ctx.manifest.config_json = config_to_json(cfg);
  ctx.manifest.config_hash = ctx.hash;
  ctx.manifest.version = BIHARM_VERSION;
  ctx.manifest.warnings = warnings;

  std::exception_ptr failure;
  try {
    if (cfg.experiment == "kernel-eval") kernel_eval(ctx);
    else if (cfg.experiment == "sample-field") sample_field(ctx);
    else if (cfg.experiment == "discrete-field") discrete_field(ctx);
    else if (cfg.experiment == "liouville") liouville(ctx);
    else if (cfg.experiment == "conformal-check") conformal_check(ctx);
    else convergence_report(ctx);
  } catch (const NumericalBreach&) {
    failure = std::current_exception();  // still write what was produced
  }
  ctx.finish();
  {
    std::ofstream os(cfg.out_dir / "manifest.json");
    os << ctx.manifest.to_json() << '\n';
    if (!os) throw IoError("cannot write manifest");
  }
  if (failure) std::rethrow_exception(failure);
  return ctx.manifest;
}

}  // namespace biharm
