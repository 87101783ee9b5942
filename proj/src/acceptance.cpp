#include "machlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <random>

#include "machlab/acoustic.hpp"
#include "machlab/bounds.hpp"
#include "machlab/compressible.hpp"
#include "machlab/experiments.hpp"
#include "machlab/initial_data.hpp"
#include "machlab/littlewood_paley.hpp"
#include "machlab/norms.hpp"
#include "machlab/operators.hpp"
#include "machlab/profile.hpp"

namespace fs = std::filesystem;

namespace machlab {

std::string CriterionResult::line() const {
  return std::string(pass ? "PASS" : "FAIL") + " criterion " + std::to_string(id) + " " + title +
         (detail.empty() ? "" : ": " + detail);
}

namespace {

const double kDeskLength = 16.0 * M_PI;
constexpr int kDeskN = 256;

std::string sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

SpectralField random_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RealSamples s(g.n(), g.n());
  for (Eigen::Index j = 0; j < s.size(); ++j) s(j) = normal(rng);
  SpectralField u = real_part(fft_forward(g, s));
  dealias(u);
  return u;
}

double max_abs(const Modes& m) { return m.abs().maxCoeff(); }

double rel(const Modes& a, const Modes& b) {
  const double s = std::max(max_abs(a), max_abs(b));
  return s == 0.0 ? 0.0 : max_abs(a - b) / s;
}

struct Check {
  std::vector<std::string> failed;
  std::vector<std::string> info;
  void require(bool ok, const std::string& what) {
    if (!ok) failed.push_back(what);
  }
};

CriterionResult finish(int id, const std::string& title, const Check& c) {
  std::string detail;
  for (const auto& f : c.failed) detail += (detail.empty() ? "failed: " : "; ") + f;
  for (const auto& i : c.info) detail += (detail.empty() ? "" : "; ") + i;
  return {id, title, c.failed.empty(), detail};
}

CriterionResult spectral_substrate() {
  const Grid g(kDeskN, kDeskLength);
  double round = 0.0, parseval = 0.0, idem = 0.0, grads = 0.0;
  for (int i = 0; i < 100; ++i) {
    const SpectralField u = random_field(g, 1000 + i);
    const RealSamples s = fft_inverse(u);
    round = std::max(round, rel(fft_forward(g, s).modes, u.modes));
    const double phys = lp_norm(s, g.cell_area(), 2.0);
    parseval = std::max(parseval, std::abs(phys - l2_norm_spectral(u)) / phys);
    const VectorField v{u, random_field(g, 5000 + i)};
    const VectorField p = leray_P(v);
    const VectorField pp = leray_P(p);
    idem = std::max({idem, rel(pp.x.modes, p.x.modes), rel(pp.y.modes, p.y.modes)});
    const VectorField gr = grad(u);
    const VectorField pg = leray_P(gr);
    grads = std::max(grads, std::max(max_abs(pg.x.modes), max_abs(pg.y.modes)) /
                                std::max(max_abs(gr.x.modes), max_abs(gr.y.modes)));
  }
  Check c;
  c.require(round <= 1e-12, "round trip " + sci(round));
  c.require(parseval <= 1e-12, "Parseval " + sci(parseval));
  c.require(idem <= 1e-12, "P idempotent " + sci(idem));
  c.require(grads <= 1e-12, "P grad " + sci(grads));
  c.info.push_back("round_trip=" + sci(round) + " parseval=" + sci(parseval) + " idempotence=" +
                   sci(idem) + " gradient_leak=" + sci(grads));
  return finish(1, "spectral substrate", c);
}

CriterionResult littlewood_paley() {
  const Grid g(kDeskN, kDeskLength);
  const DyadicPartition& part = partition_for(g);
  double unity = 0.0;
  for (Eigen::Index j = 0; j < g.kabs().size(); ++j) {
    if (g.kabs()(j) > g.dealias_cutoff()) continue;
    double s = 0.0;
    for (int q = -1; q <= part.q_max; ++q) s += part.block(q)(j);
    unity = std::max(unity, std::abs(s - 1.0));
  }
  double recon = 0.0, cross = 0.0, lo = kInf, hi = 0.0;
  for (int i = 0; i < 50; ++i) {
    const SpectralField u = random_field(g, 2000 + i);
    Modes sum = Modes::Zero(g.n(), g.n());
    for (int q = -1; q <= part.q_max; ++q) {
      const SpectralField d = delta_q(part, u, q);
      sum += d.modes;
      for (int p = -1; p <= part.q_max; ++p) {
        if (std::abs(p - q) >= 2) cross = std::max(cross, max_abs(delta_q(part, d, p).modes));
      }
      if (q >= 0) {
        const double base = lp_norm(d, 2.0);
        if (base > 0.0) {
          const double r = lp_norm(grad(d), 2.0) / (std::ldexp(1.0, q) * base);
          lo = std::min(lo, r);
          hi = std::max(hi, r);
        }
      }
    }
    recon = std::max(recon, rel(sum, u.modes));
  }
  Check c;
  c.require(unity <= 1e-12, "partition residual " + sci(unity));
  c.require(recon <= 1e-12, "reconstruction " + sci(recon));
  c.require(cross == 0.0, "Delta_p Delta_q " + sci(cross));
  c.require(lo >= 0.125 && hi <= 8.0, "Bernstein range");
  c.info.push_back("unity=" + sci(unity) + " reconstruction=" + sci(recon) + " cross=" + sci(cross) +
                   " bernstein=[" + sci(lo) + ", " + sci(hi) + "]");
  return finish(2, "Littlewood-Paley", c);
}

CriterionResult heterogeneous_norms() {
  const Grid g(kDeskN, kDeskLength);
  const DyadicPartition& part = partition_for(g);
  double worst = 0.0;
  int rejected = 0;
  for (int i = 0; i < 50; ++i) {
    const SpectralField u = random_field(g, 3000 + i);
    for (double alpha : {0.25, 1.0}) {
      std::vector<double> w;
      for (int q = -1; q <= part.q_max; ++q) w.push_back(std::pow(2.0, alpha * q));
      const BesovProfile prof = validate_profile(w);
      for (double p : {2.0, kInf}) {
        const double a = besov_norm_hetero(u, 1.0, p, 1.0, prof);
        const double b = besov_norm(u, 1.0 + alpha, p, 1.0);
        worst = std::max(worst, std::abs(a - b) / b);
      }
    }
    try {
      validate_profile(find_profile(u, 2.0, 2.0).profile.values);
    } catch (const std::invalid_argument&) {
      ++rejected;
    }
  }
  Check c;
  c.require(worst <= 1e-12, "reduction " + sci(worst));
  c.require(rejected == 0, std::to_string(rejected) + " found profiles rejected");
  c.info.push_back("reduction_error=" + sci(worst) + " profiles_validated=" + std::to_string(50 - rejected));
  return finish(3, "heterogeneous norms", c);
}

CriterionResult linear_acoustics() {
  const Grid g(kDeskN, kDeskLength);
  StepperConfig cfg;
  cfg.nonlinear = false;
  cfg.fixed_dt = 0.01;
  double worst = 0.0, energy = 0.0;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    const FlowState s0 = make_initial_data(DataSpec{}, g, eps);
    FlowState s = s0;
    for (int i = 0; i < 50; ++i) s = step(s, cfg);
    const FlowState exact = acoustic_exact_step(s0, 0.5);
    worst = std::max({worst, rel(s.v.x.modes, exact.v.x.modes), rel(s.v.y.modes, exact.v.y.modes),
                      rel(s.c.modes, exact.c.modes)});
    for (Eigen::Index j = 0; j < s.c.modes.size(); ++j) {
      const double e0 = std::norm(s0.v.x.modes(j)) + std::norm(s0.v.y.modes(j)) + std::norm(s0.c.modes(j));
      if (e0 == 0.0) continue;
      const double e1 = std::norm(s.v.x.modes(j)) + std::norm(s.v.y.modes(j)) + std::norm(s.c.modes(j));
      energy = std::max(energy, std::abs(e1 - e0) / e0);
    }
  }
  Check c;
  c.require(worst <= 1e-12, "propagator mismatch " + sci(worst));
  c.require(energy <= 1e-13, "per-mode energy " + sci(energy));
  c.info.push_back("propagator_mismatch=" + sci(worst) + " per_mode_energy=" + sci(energy));
  return finish(4, "linear acoustics", c);
}

CriterionResult splitting_order() {
  const Grid g(kDeskN, kDeskLength);
  const double T = 0.5;
  const FlowState s0 = make_initial_data(DataSpec{}, g, 0.1);
  std::vector<FlowState> finals;
  for (double dt : {0.01, 0.005, 0.0025}) {
    StepperConfig cfg;
    cfg.fixed_dt = dt;
    FlowState s = s0;
    const int steps = static_cast<int>(std::lround(T / dt));
    for (int i = 0; i < steps; ++i) s = step(s, cfg);
    finals.push_back(s);
  }
  auto diff = [](const FlowState& a, const FlowState& b) {
    const SpectralField d[3] = {a.v.x - b.v.x, a.v.y - b.v.y, a.c - b.c};
    return l2_norm_spectral(d);
  };
  const double e1 = diff(finals[0], finals[1]);
  const double e2 = diff(finals[1], finals[2]);
  const double order = std::log2(e1 / e2);
  Check c;
  c.require(order >= 1.8 && order <= 2.2, "order out of [1.8, 2.2]");
  c.info.push_back("errors " + sci(e1) + " " + sci(e2) + " order=" + std::to_string(order));
  return finish(5, "splitting order", c);
}

ExperimentConfig config_from(const std::string& text) { return parse_config(text); }

CriterionResult from_reports(int id, const std::string& title,
                             const std::vector<const ExperimentReport*>& reports,
                             const std::function<bool(const Assertion&)>& select = {}) {
  Check c;
  int count = 0;
  for (const auto* r : reports) {
    for (const auto& a : r->assertions) {
      if (select && !select(a)) continue;
      ++count;
      if (!a.pass) c.failed.push_back(a.name + (a.detail.empty() ? "" : " (" + a.detail + ")"));
    }
  }
  c.info.push_back(std::to_string(count - static_cast<int>(c.failed.size())) + "/" +
                   std::to_string(count) + " assertions pass");
  return finish(id, title, c);
}

bool contains(const std::string& s, const char* what) { return s.find(what) != std::string::npos; }

bool is_vorticity_control(const Assertion& a) {
  return contains(a.name, "vorticity sup-norm drift") || contains(a.name, "reference energy drift");
}

CriterionResult lifespan_bookkeeping(const ExperimentReport& table) {
  Check c;
  for (const char* name : {"exp:1", "power:2"}) {
    const LifespanModel m = make_lifespan_model(make_named_profile(name, 64));
    double prev_phi = 0.0, prev_T = kInf;
    bool phi_ok = true, t_ok = true;
    for (double le = -30.0; le <= -0.5; le += 0.25) {
      const double e = std::exp(le);
      const double phi = phi_of_eps(m, e);
      phi_ok = phi_ok && phi >= prev_phi;
      prev_phi = phi;
      const LifespanPrediction p = lifespan_prediction(m, e);
      if (p.defined) {
        t_ok = t_ok && p.T <= prev_T;
        prev_T = p.T;
      }
    }
    c.require(phi_ok, std::string("Phi monotone for ") + name);
    c.require(t_ok, std::string("T_eps monotone for ") + name);
    c.require(phi_of_eps(m, std::exp(-30.0)) < phi_of_eps(m, 0.5), std::string("Phi decays for ") + name);
  }
  // Closed forms: Psi = e^q gives log log(1/eps); Psi = (q+2)^2 gives log(2 log(log(1/eps) + 2)).
  const double C0 = 1.3;
  const LifespanModel e = make_lifespan_model(make_named_profile("exp:1", 64), C0);
  const LifespanModel p = make_lifespan_model(make_named_profile("power:2", 64), C0);
  double worst = 0.0;
  for (double eps : {1e-12, 1e-8, 1e-4, 1e-2, 0.05, 0.2}) {
    const double L = std::log(1.0 / eps);
    worst = std::max(worst, std::abs(lifespan_prediction(e, eps).T - std::log(L) / C0));
    const LifespanPrediction pp = lifespan_prediction(p, eps);
    if (pp.defined) worst = std::max(worst, std::abs(pp.T - std::log(2.0 * std::log(L + 2.0)) / C0));
  }
  c.require(worst <= 1e-12, "closed forms " + sci(worst));
  c.info.push_back("closed_form_error=" + sci(worst));
  for (const auto& a : table.assertions) {
    if (!a.pass) c.failed.push_back(a.name + (a.detail.empty() ? "" : " (" + a.detail + ")"));
    if (contains(a.name, "numerical lifespan")) c.info.push_back("T_num " + a.detail);
  }
  return finish(10, "lifespan bookkeeping", c);
}

// Acceptance configurations.  Kept as text so the config hash in every
// ledger is reproducible.
const char* kTransportConfig = "experiment=transport-log\n";
const char* kAcousticConfig = "experiment=acoustic-decay\n";
const char* kStrichartzConfig = "experiment=strichartz-sweep\neps=0.1,0.05,0.025\n";
const char* kLimitConfig = "experiment=incompressible-limit\n";
const char* kLifespanConfig =
    "experiment=lifespan-table\n"
    "eps=1,0.5,0.2,0.1\n"
    "data=vortex-pair-ill\n"
    "amplitude=1\n"
    "acoustic=3\n"
    "blowup_grad=8\n";

ExperimentReport run_config(const char* text, const fs::path& dir, int threads) {
  const ExperimentConfig cfg = config_from(text);
  ExperimentReport rep;
  validate_experiment(cfg);
  if (cfg.experiment == "transport-log") rep = transport_log_experiment(cfg, dir, threads);
  if (cfg.experiment == "acoustic-decay") rep = acoustic_decay_experiment(cfg, dir, threads);
  if (cfg.experiment == "strichartz-sweep") rep = strichartz_sweep_experiment(cfg, dir, threads);
  if (cfg.experiment == "incompressible-limit") rep = incompressible_limit_experiment(cfg, dir, threads);
  if (cfg.experiment == "lifespan-table") rep = lifespan_table_experiment(cfg, dir, threads);
  write_summary(dir / "summary.txt", rep);
  return rep;
}

bool wanted(const std::vector<int>& ids, int id) {
  return ids.empty() || std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<fs::path> tree(const fs::path& root) {
  std::vector<fs::path> files;
  if (!fs::exists(root)) return files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), root));
  }
  std::sort(files.begin(), files.end());
  return files;
}

void write_criteria(const fs::path& path, const std::vector<CriterionResult>& results) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  for (const auto& r : results) out << r.line() << '\n';
}

}  // namespace

std::vector<CriterionResult> run_criteria(const fs::path& out, int threads,
                                          const std::vector<int>& ids,
                                          const CriterionCallback& progress) {
  fs::create_directories(out);
  std::vector<CriterionResult> results;
  auto emit = [&](CriterionResult r) {
    if (progress) progress(r);
    results.push_back(std::move(r));
  };
  if (wanted(ids, 1)) emit(spectral_substrate());
  if (wanted(ids, 2)) emit(littlewood_paley());
  if (wanted(ids, 3)) emit(heterogeneous_norms());
  if (wanted(ids, 4)) emit(linear_acoustics());
  if (wanted(ids, 5)) emit(splitting_order());
  if (wanted(ids, 6)) {
    const ExperimentReport t = run_config(kTransportConfig, out / "c06_transport", threads);
    emit(from_reports(6, "transport lab", {&t}));
  }
  if (wanted(ids, 7)) {
    const ExperimentReport a = run_config(kAcousticConfig, out / "c07_acoustic_decay", threads);
    const ExperimentReport s = run_config(kStrichartzConfig, out / "c07_strichartz", threads);
    emit(from_reports(7, "acoustic decay trend", {&a, &s}));
  }
  if (wanted(ids, 8) || wanted(ids, 9)) {
    const ExperimentReport l = run_config(kLimitConfig, out / "c08_incompressible_limit", threads);
    if (wanted(ids, 8)) {
      emit(from_reports(8, "incompressible limit trend", {&l},
                        [](const Assertion& a) { return !is_vorticity_control(a); }));
    }
    if (wanted(ids, 9)) emit(from_reports(9, "vorticity control", {&l}, is_vorticity_control));
  }
  if (wanted(ids, 10)) {
    const ExperimentReport t = run_config(kLifespanConfig, out / "c10_lifespan", threads);
    emit(lifespan_bookkeeping(t));
  }
  write_criteria(out / "criteria.txt", results);
  return results;
}

std::vector<CriterionResult> run_acceptance(const fs::path& out, int threads,
                                            const CriterionCallback& progress) {
  std::vector<CriterionResult> results = run_criteria(out / "run_a", threads, {}, progress);
  run_criteria(out / "run_b", threads, {}, {});
  const std::vector<fs::path> a = tree(out / "run_a");
  const std::vector<fs::path> b = tree(out / "run_b");
  std::string detail;
  bool same = a == b;
  if (!same) detail = "file lists differ";
  for (size_t i = 0; same && i < a.size(); ++i) {
    if (read_bytes(out / "run_a" / a[i]) != read_bytes(out / "run_b" / b[i])) {
      same = false;
      detail = "differs: " + a[i].generic_string();
    }
  }
  if (same) detail = std::to_string(a.size()) + " files bit-identical";
  CriterionResult det{11, "determinism", same, detail};
  if (progress) progress(det);
  results.push_back(det);
  return results;
}

}  // namespace machlab
