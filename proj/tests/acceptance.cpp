// Acceptance gate: one pass/fail line per criterion A1 .. A10.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "depnet/batch.hpp"
#include "depnet/experiment.hpp"
#include "depnet/metrics.hpp"

using namespace depnet;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
  std::printf("%s %s: %s\n", id.c_str(), pass ? "PASS" : "FAIL",
              detail.c_str());
  if (!pass) ++g_failures;
}

Matrix random_matrix(RngStream& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

// E[relu(z1) relu(z2)] for a centered bivariate Gaussian (arc-cosine
// closed form, degree 1).
double relu_cross_moment(double k11, double k12, double k22) {
  const double denom = std::sqrt(k11 * k22);
  const double c = std::min(1.0, std::max(-1.0, k12 / denom));
  const double theta = std::acos(c);
  return denom * (std::sin(theta) + (M_PI - theta) * std::cos(theta)) /
         (2.0 * M_PI);
}

// Self-normalized importance-sampling oracle for a scalar-output
// posterior: prior simulations weighted by exp(-||xi - y||^2), then
// resampled with replacement.
std::vector<double> is_oracle_draws(std::uint64_t seed,
                                    const Architecture& arch, const Matrix& x,
                                    const Matrix& y, int n_prior, int n_out) {
  RngStream rng(seed, 0);
  std::vector<double> values(n_prior), weights(n_prior);
  for (int i = 0; i < n_prior; ++i) {
    NetworkParams params = sample_prior_params(rng, arch);
    Matrix xi = forward(params, x, arch.activation).back();
    values[i] = xi(0, 0);
    weights[i] = std::exp(gaussian_log_likelihood(xi, y));
  }
  std::vector<double> cum(n_prior);
  double total = 0.0;
  for (int i = 0; i < n_prior; ++i) {
    total += weights[i];
    cum[i] = total;
  }
  std::vector<double> out(n_out);
  for (int i = 0; i < n_out; ++i) {
    const double u = rng.uniform() * total;
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    out[i] = values[it - cum.begin()];
  }
  return out;
}

std::vector<double> marginal(const BatchResult& result, int row, int col) {
  std::vector<double> out;
  out.reserve(result.samples.size());
  for (const Matrix& m : result.samples) out.push_back(m(row, col));
  return out;
}

Architecture tiny_model1_arch() {
  // L = 2, all widths 1, Model-1 variances, C_B = C_W = 1, relu.
  Architecture arch;
  arch.depth = 2;
  arch.widths = {1, 1, 1, 1};
  arch.variance_models = {VarianceModel::model1, VarianceModel::model1};
  return arch;
}

Architecture tiny_model2_arch() {
  // L = 1, n1 = 2, Model-2 variances, C_B = C_W = 1, relu.
  Architecture arch;
  arch.depth = 1;
  arch.widths = {1, 2, 1};
  arch.variance_models = {VarianceModel::model2};
  return arch;
}

DataSet scalar_data() {
  DataSet ds;
  ds.inputs = Matrix::Constant(1, 1, 1.0);
  ds.targets = Matrix::Constant(1, 1, 1.0);
  return ds;
}

void a1_matrix_identities() {
  RngStream rng(101, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    auto dim = [&] { return 1 + static_cast<int>(rng.next_u64() % 6); };
    const int p = dim(), q = dim(), r = dim(), s = dim(), q2 = dim(),
              s2 = dim();
    Matrix a = random_matrix(rng, p, q);
    Matrix a2 = random_matrix(rng, q, p);
    worst = std::max(worst, std::abs((a * a2).trace() -
                                     vec(a.transpose()).dot(vec(a2))));
    Matrix mid = random_matrix(rng, q, r);
    Matrix tail = random_matrix(rng, r, s);
    worst = std::max(
        worst, (vec(a * mid * tail) - kron(tail.transpose(), a) * vec(mid))
                   .cwiseAbs()
                   .maxCoeff());
    Matrix b = random_matrix(rng, r, s);
    Matrix c = random_matrix(rng, q, q2);
    Matrix c2 = random_matrix(rng, s, s2);
    worst = std::max(worst, (kron(a, b) * kron(c, c2) - kron(a * c, b * c2))
                                .cwiseAbs()
                                .maxCoeff());
  }
  std::ostringstream d;
  d << "max identity error " << worst << " (tol 1e-10)";
  report("A1", worst <= 1e-10, d.str());
}

void a2_distribution_primitives() {
  RngStream rng(102, 0);
  const int n = 1000000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double w = sample_weibull_half(rng);
    sum += w;
    sum2 += w * w;
  }
  const double mean = sum / n, second = sum2 / n;

  std::vector<double> hc(400000);
  for (double& v : hc) v = sample_half_cauchy(rng);
  std::nth_element(hc.begin(), hc.begin() + hc.size() / 2, hc.end());
  const double median = hc[hc.size() / 2];

  double count_sum = 0;
  const int series = 10000;
  for (int t = 0; t < series; ++t)
    count_sum += static_cast<double>(sample_poisson_points(rng, 0.01).points.size());
  const double count_mean = count_sum / series;

  const bool pass = std::abs(mean - 2.0) <= 0.02 &&
                    std::abs(second - 24.0) <= 1.2 &&
                    std::abs(median - 1.0) <= 0.01 &&
                    std::abs(count_mean - 20.0) <= 0.4;
  std::ostringstream d;
  d << "weibull mean " << mean << " (2 +- 1%), second moment " << second
    << " (24 +- 5%), half-cauchy median " << median
    << " (1 +- 1%), poisson count mean " << count_mean << " (20 +- 2%)";
  report("A2", pass, d.str());
}

void a3_sampler_vs_oracle() {
  const DataSet data = scalar_data();

  // Model-2 shallow instance: exact sampler vs IS oracle.
  Architecture m2 = tiny_model2_arch();
  std::vector<double> oracle2 =
      is_oracle_draws(301, m2, data.inputs, data.targets, 100000, 100000);
  BatchRequest req;
  req.kind = SamplerKind::posterior;
  req.samples = 10000;
  req.seed = 302;
  req.threads = 0;
  BatchResult shallow = run_batch(m2, data, req);
  const double ks_shallow = ks_distance(marginal(shallow, 0, 0), oracle2);

  // Model-1 deep instance: rejection sampler vs IS oracle.
  Architecture m1 = tiny_model1_arch();
  std::vector<double> oracle1 =
      is_oracle_draws(303, m1, data.inputs, data.targets, 100000, 100000);
  req.seed = 304;
  BatchResult deep = run_batch(m1, data, req);
  const double ks_deep = ks_distance(marginal(deep, 0, 0), oracle1);

  // Shallow-exact vs deep-rejection on the L = 1 instance.
  std::vector<double> deep_l1(10000);
  for (int i = 0; i < 10000; ++i) {
    RngStream rng(305, static_cast<std::uint64_t>(i));
    deep_l1[i] = sample_posterior_deep(rng, m2, data.inputs, data.targets,
                                       RejectionConfig{})
                     .first(0, 0);
  }
  const double ks_cross = ks_distance(marginal(shallow, 0, 0), deep_l1);

  const bool pass = ks_shallow < 0.05 && ks_deep < 0.05 && ks_cross < 0.03;
  std::ostringstream d;
  d << "KS shallow-vs-oracle " << ks_shallow << ", deep-vs-oracle " << ks_deep
    << " (tol 0.05), shallow-vs-deep " << ks_cross << " (tol 0.03)";
  report("A3", pass, d.str());
}

void a4_figure_convergence() {
  bool pass = true;
  std::ostringstream d;
  for (const std::string preset : {"model1", "model2"}) {
    ExperimentConfig cfg;
    cfg.preset = preset;
    cfg.apply_preset();
    cfg.samples = 2000;
    cfg.seed = 400;
    cfg.max_proposals = 10000000;
    DataSet data = cfg.dataset();

    cfg.sampler = SamplerKind::limit_posterior;
    BatchRequest limit_req = cfg.batch_request();
    BatchResult limit = run_batch(cfg.architecture(), data, limit_req);

    const std::vector<int> widths =
        preset == "model1" ? std::vector<int>{4, 8, 16, 32}
                           : std::vector<int>{2, 4, 8, 16};
    const int n_marginals = data.d();
    std::vector<double> prev_ks(n_marginals, 2.0);
    for (int w : widths) {
      ExperimentConfig wide = cfg;
      wide.sampler = SamplerKind::posterior;
      wide.width = w;
      BatchResult finite = run_batch(wide.architecture(), data,
                                     wide.batch_request());
      for (int i = 0; i < n_marginals; ++i) {
        const double ks =
            ks_distance(marginal(finite, 0, i), marginal(limit, 0, i));
        d << preset << " n=" << w << " i=" << i << " ks=" << ks << "; ";
        if (ks > prev_ks[i] + 0.02) pass = false;
        if (w == widths.back() && ks >= 0.1) pass = false;
        prev_ks[i] = ks;
      }
    }
  }
  report("A4", pass, d.str());
}

void a5_limit_closed_form() {
  double worst = 0.0;
  for (double k : {0.5, 1.0, 4.0}) {
    for (double y : {0.0, 1.0, 5.1}) {
      Matrix km = Matrix::Constant(1, 1, k);
      Matrix ym = Matrix::Constant(1, 1, y);
      auto [lambda, dmat] = limit_posterior_params(km, ym);
      const double var = 1.0 / dmat(0, 0);

      // Grid integration of the unnormalized posterior density
      // exp(-(xi - y)^2) N(xi; 0, k) on a wide symmetric range.
      const double half_width = std::abs(y) + 12.0 * std::sqrt(k) + 12.0;
      const int steps = 1000000;
      const double h = 2.0 * half_width / steps;
      double z = 0, m1 = 0, m2 = 0;
      for (int i = 0; i <= steps; ++i) {
        const double xi = -half_width + h * i;
        const double simpson = (i == 0 || i == steps) ? 1.0
                               : (i % 2 == 1)          ? 4.0
                                                       : 2.0;
        const double f = simpson * std::exp(-(xi - y) * (xi - y)) *
                         std::exp(-xi * xi / (2.0 * k));
        z += f;
        m1 += f * xi;
        m2 += f * xi * xi;
      }
      const double mean_oracle = m1 / z;
      const double var_oracle = m2 / z - mean_oracle * mean_oracle;
      worst = std::max(worst, std::abs(lambda(0, 0) - mean_oracle));
      worst = std::max(worst, std::abs(var - var_oracle));
    }
  }
  std::ostringstream d;
  d << "max |closed form - grid oracle| " << worst << " (tol 1e-6)";
  report("A5", worst <= 1e-6, d.str());
}

void a6_kernel_step_cross_check() {
  // Model-1 reference inputs: x(i) = e_i in R^4, C_B = C_W = 1, so
  // K1 = 11^T + I/4 (1.25 on the diagonal, 1 off it).
  ExperimentConfig cfg;
  cfg.preset = "model1";
  cfg.apply_preset();
  Matrix x = cfg.dataset().inputs;
  Matrix k_prev = k1(x, 1.0, 1.0);

  RngStream rng(106, 0);
  Matrix se;
  Matrix k2 = k_step(rng, k_prev, LimitLayerSpec{24.0, {}}, 1.0, 1.0,
                     Activation::relu(), 100000, &se);
  bool pass = true;
  double worst_sigmas = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double oracle =
          1.0 + 24.0 * relu_cross_moment(k_prev(i, i), k_prev(i, j),
                                         k_prev(j, j));
      const double sigmas = std::abs(k2(i, j) - oracle) /
                            std::max(se(i, j), 1e-300);
      worst_sigmas = std::max(worst_sigmas, sigmas);
      if (sigmas > 3.0) pass = false;
    }
  std::ostringstream d;
  d << "max deviation " << worst_sigmas << " MC standard errors (tol 3)";
  report("A6", pass, d.str());
}

void a7_layer1_invariance() {
  // Model-1 reference inputs; closed form C = (C_W/n0) X^T X + C_B 11^T.
  ExperimentConfig cfg;
  cfg.preset = "model1";
  cfg.apply_preset();
  cfg.width = 2;
  Architecture arch = cfg.architecture();
  Matrix x = cfg.dataset().inputs;
  Matrix c = Matrix::Ones(3, 3) + 0.25 * (x.transpose() * x);

  RngStream rng(107, 0);
  Matrix second = Matrix::Zero(3, 3);
  long rows = 0;
  for (int t = 0; t < 100000; ++t) {
    Matrix z = sample_z1_posterior(rng, x, arch);
    for (Eigen::Index h = 0; h < z.rows(); ++h) {
      second += z.row(h).transpose() * z.row(h);
      ++rows;
    }
  }
  second /= static_cast<double>(rows);
  const double rel = (second - c).norm() / c.norm();
  std::ostringstream d;
  d << "relative Frobenius error " << rel << " (tol 0.03)";
  report("A7", rel <= 0.03, d.str());
}

void a8_estimator_consistency() {
  const DataSet data = scalar_data();
  Architecture m1 = tiny_model1_arch();
  std::vector<double> oracle =
      is_oracle_draws(801, m1, data.inputs, data.targets, 100000, 100000);

  const std::vector<std::pair<int, double>> settings = {
      {10, 0.9}, {100, 0.99}, {1000, 0.999}};
  bool pass = true;
  std::ostringstream d;
  double prev_ks = 2.0;
  for (const auto& [n, delta] : settings) {
    BatchRequest req;
    req.kind = SamplerKind::posterior;
    req.samples = 10000;
    req.seed = 802;
    req.threads = 0;
    req.rejection.replica_count = n;
    req.rejection.delta = delta;
    BatchResult batch = run_batch(m1, data, req);
    const double ks = ks_distance(marginal(batch, 0, 0), oracle);
    d << "N=" << n << " delta=" << delta << " ks=" << ks << "; ";
    if (ks > prev_ks + 0.01) pass = false;
    prev_ks = ks;
  }

  // acceptance_estimate at N = 1e5 vs a plain (unclamped, fresh
  // replicas) Monte Carlo estimate of the same acceptance probability.
  RngStream rng(803, 0);
  Matrix z_prev = sample_z1_posterior(rng, data.inputs, m1);
  WeightDraw proposal = prior_weight_draw(rng, m1, 2);
  const double delta = 0.999;
  const int big_n = 100000;
  ReplicaFamily family = draw_replicas(rng, m1, 2, big_n);
  const double clamped =
      acceptance_estimate(family, proposal.bias, proposal.weights, z_prev,
                          data.targets, m1.activation, delta);

  Matrix z_here = phi_sigma(proposal.bias, proposal.weights, z_prev,
                            m1.activation);
  double sum = 0, sum2 = 0;
  for (int r = 0; r < big_n; ++r) {
    WeightDraw last = prior_weight_draw(rng, m1, 3);
    const double psi = acceptance_exact_last(last.bias, last.weights, z_here,
                                             data.targets, m1.activation);
    sum += psi;
    sum2 += psi * psi;
  }
  const double plain = sum / big_n;
  const double var_plain =
      std::max(0.0, sum2 / big_n - plain * plain) / big_n;
  // The clamped estimator has the same order of per-replica variance;
  // combine both standard errors.
  const double se = std::sqrt(2.0 * var_plain);
  const double sigmas = std::abs(clamped - plain) / std::max(se, 1e-300);
  d << "clamped " << clamped << " vs plain " << plain << " (" << sigmas
    << " combined standard errors, tol 3)";
  if (sigmas > 3.0) pass = false;
  report("A8", pass, d.str());
}

void a9_clamp_and_budget() {
  const DataSet data = scalar_data();
  Architecture m1 = tiny_model1_arch();
  RngStream rng(109, 0);
  bool bounds_ok = true;
  for (int t = 0; t < 10000; ++t) {
    const double delta = 0.5 + 0.499 * rng.uniform();
    const int n = 1 + static_cast<int>(rng.next_u64() % 8);
    ReplicaFamily family = draw_replicas(rng, m1, 2, n);
    WeightDraw proposal = prior_weight_draw(rng, m1, 2);
    Matrix z_prev = Matrix::Constant(1, 1, 4.0 * rng.normal());
    Matrix y = Matrix::Constant(1, 1, 4.0 * rng.normal());
    const double est =
        acceptance_estimate(family, proposal.bias, proposal.weights, z_prev, y,
                            m1.activation, delta);
    if (est < 1.0 - delta - 1e-12 || est > delta + 1e-12) bounds_ok = false;
  }

  BatchRequest req;
  req.kind = SamplerKind::posterior;
  req.samples = 500;
  req.seed = 902;
  req.threads = 0;
  BatchResult batch = run_batch(m1, data, req);
  double rate = 0.0;
  for (const auto& l : batch.stats.layers)
    if (l.layer == 2) rate = l.acceptance_rate();
  const bool rate_ok = rate >= 1.0 - req.rejection.delta;
  std::ostringstream d;
  d << "estimates in bounds: " << (bounds_ok ? "yes" : "no")
    << ", intermediate acceptance rate " << rate << " (floor "
    << 1.0 - req.rejection.delta << ")";
  report("A9", bounds_ok && rate_ok, d.str());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Data outputs only: the manifest records the run's own --threads and
// --out values, which legitimately differ between invocations.
bool same_outputs(const fs::path& a, const fs::path& b) {
  for (const char* name :
       {"samples.csv", "stats.csv", "ecdf_r0_i0.csv", "ecdf_r0_i1.csv",
        "ecdf_r0_i2.csv"}) {
    if (slurp(a / name) != slurp(b / name)) return false;
    if (slurp(a / name).empty()) return false;
  }
  return true;
}

void a10_determinism() {
  const char* bin = std::getenv("DEPNET_CLI");
  if (!bin) {
    report("A10", false, "DEPNET_CLI not set");
    return;
  }
  const fs::path tmp = fs::temp_directory_path() / "depnet_acceptance_a10";
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  auto run = [&](const std::string& args) {
    const std::string cmd =
        std::string(bin) + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  const std::string base =
      "run --preset model2 --width 4 --samples 50 --seed 10 --sampler "
      "posterior";
  bool ok = run(base + " --threads 1 --out " + (tmp / "t1").string());
  ok = ok && run(base + " --threads 4 --out " + (tmp / "t4").string());
  // Re-run from the emitted manifest alone.
  ok = ok && run("run --config " + (tmp / "t1" / "manifest.txt").string() +
                 " --out " + (tmp / "replay").string());
  const bool match = ok && same_outputs(tmp / "t1", tmp / "t4") &&
                     same_outputs(tmp / "t1", tmp / "replay");
  report("A10", match,
         match ? "thread counts 1/4 and manifest replay byte-identical"
               : "outputs differ or a run failed");
  fs::remove_all(tmp);
}

}  // namespace

int main() {
  a1_matrix_identities();
  a2_distribution_primitives();
  a3_sampler_vs_oracle();
  a4_figure_convergence();
  a5_limit_closed_form();
  a6_kernel_step_cross_check();
  a7_layer1_invariance();
  a8_estimator_consistency();
  a9_clamp_and_budget();
  a10_determinism();
  return g_failures == 0 ? 0 : 1;
}
