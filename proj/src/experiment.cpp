#include "depnet/experiment.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "depnet/metrics.hpp"

namespace depnet {

namespace {

constexpr const char* kCodeVersion = "0.1.0";

Matrix preset_inputs() {
  // x(i) = e_i in R^4, i = 1..3.
  Matrix x = Matrix::Zero(4, 3);
  x(0, 0) = 1.0;
  x(1, 1) = 1.0;
  x(2, 2) = 1.0;
  return x;
}

Matrix preset_targets(const Matrix& x) {
  // y(i) = 0.1 ||x(i)||^2 + 5, scalar output.
  Matrix y(1, x.cols());
  for (Eigen::Index i = 0; i < x.cols(); ++i)
    y(0, i) = 0.1 * x.col(i).squaredNorm() + 5.0;
  return y;
}

}  // namespace

SamplerKind parse_sampler(const std::string& name) {
  if (name == "prior") return SamplerKind::prior;
  if (name == "posterior") return SamplerKind::posterior;
  if (name == "limit-prior") return SamplerKind::limit_prior;
  if (name == "limit-posterior") return SamplerKind::limit_posterior;
  throw std::invalid_argument("unknown sampler: " + name);
}

std::string sampler_name(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::prior: return "prior";
    case SamplerKind::posterior: return "posterior";
    case SamplerKind::limit_prior: return "limit-prior";
    case SamplerKind::limit_posterior: return "limit-posterior";
  }
  return "posterior";
}

VarianceModel parse_variance_model(const std::string& name) {
  if (name == "fixed") return VarianceModel::fixed;
  if (name == "model1") return VarianceModel::model1;
  if (name == "model2") return VarianceModel::model2;
  throw std::invalid_argument("unknown variance model: " + name);
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void ExperimentConfig::apply_preset() {
  if (preset == "custom") return;
  if (preset == "model1") {
    depth = 2;
    n0 = 4;
    n_out = 1;
    c_b = 1.0;
    c_w = 1.0;
    activation = "relu";
    variance_model = "model1";
    data_path.clear();
    return;
  }
  if (preset == "model2") {
    depth = 1;
    n0 = 4;
    n_out = 1;
    c_b = 1.0;
    c_w = 1.0;
    activation = "relu";
    variance_model = "model2";
    data_path.clear();
    return;
  }
  throw std::invalid_argument("unknown preset: " + preset);
}

Architecture ExperimentConfig::architecture() const {
  Architecture arch;
  arch.depth = depth;
  arch.widths.push_back(n0);
  for (int l = 0; l < depth; ++l) arch.widths.push_back(width);
  arch.widths.push_back(n_out);
  arch.c_b = c_b;
  arch.c_w = c_w;
  if (activation == "relu")
    arch.activation = Activation::relu();
  else if (activation == "identity")
    arch.activation = Activation::identity();
  else
    throw std::invalid_argument("unknown activation: " + activation);
  arch.variance_models.assign(depth, parse_variance_model(variance_model));
  arch.validate();
  return arch;
}

DataSet ExperimentConfig::dataset() const {
  if (!data_path.empty()) return DataSet::load_csv(data_path, n0, n_out);
  if (preset == "custom")
    throw std::invalid_argument("custom experiments require a data file");
  DataSet ds;
  ds.inputs = preset_inputs();
  ds.targets = preset_targets(ds.inputs);
  return ds;
}

LimitSpec ExperimentConfig::limit_spec() const {
  LimitSpec spec;
  spec.mc_samples = limit_mc;
  switch (parse_variance_model(variance_model)) {
    case VarianceModel::model1:
      spec.layers.assign(depth, LimitLayerSpec{24.0, {LevySpec::Tag::none, poisson_eps}});
      break;
    case VarianceModel::model2:
      spec.layers.assign(
          depth, LimitLayerSpec{0.0, {LevySpec::Tag::inv_sqrt_cube, poisson_eps}});
      break;
    case VarianceModel::fixed:
      // sum_j 1/n -> 1, so the limit has unit drift and no Levy part.
      spec.layers.assign(depth, LimitLayerSpec{1.0, {LevySpec::Tag::none, poisson_eps}});
      break;
  }
  return spec;
}

int ExperimentConfig::resolved_threads() const {
  if (threads > 0) return threads;
  if (const char* env = std::getenv("DEPNET_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

BatchRequest ExperimentConfig::batch_request() const {
  BatchRequest request;
  request.kind = sampler;
  request.samples = samples;
  request.seed = seed;
  request.threads = resolved_threads();
  request.rejection.replica_count = mc_n;
  request.rejection.delta = delta;
  request.rejection.max_proposals = max_proposals;
  request.limit = limit_spec();
  return request;
}

std::map<std::string, std::string> ExperimentConfig::to_keys() const {
  std::map<std::string, std::string> keys;
  keys["preset"] = preset;
  keys["sampler"] = sampler_name(sampler);
  keys["depth"] = std::to_string(depth);
  keys["width"] = std::to_string(width);
  keys["n0"] = std::to_string(n0);
  keys["n_out"] = std::to_string(n_out);
  keys["c_b"] = format_double(c_b);
  keys["c_w"] = format_double(c_w);
  keys["activation"] = activation;
  keys["variance_model"] = variance_model;
  keys["data"] = data_path;
  keys["samples"] = std::to_string(samples);
  keys["seed"] = std::to_string(seed);
  keys["threads"] = std::to_string(threads);
  keys["delta"] = format_double(delta);
  keys["mc_n"] = std::to_string(mc_n);
  keys["max_proposals"] = std::to_string(max_proposals);
  keys["limit_mc"] = std::to_string(limit_mc);
  keys["poisson_eps"] = format_double(poisson_eps);
  keys["out"] = out_dir;
  keys["code_version"] = kCodeVersion;
  return keys;
}

ExperimentConfig ExperimentConfig::from_keys(
    const std::map<std::string, std::string>& keys) {
  ExperimentConfig config;
  auto get = [&](const char* key) -> std::optional<std::string> {
    auto it = keys.find(key);
    if (it == keys.end()) return std::nullopt;
    return it->second;
  };
  if (auto v = get("preset")) config.preset = *v;
  if (auto v = get("sampler")) config.sampler = parse_sampler(*v);
  if (auto v = get("depth")) config.depth = std::stoi(*v);
  if (auto v = get("width")) config.width = std::stoi(*v);
  if (auto v = get("n0")) config.n0 = std::stoi(*v);
  if (auto v = get("n_out")) config.n_out = std::stoi(*v);
  if (auto v = get("c_b")) config.c_b = std::stod(*v);
  if (auto v = get("c_w")) config.c_w = std::stod(*v);
  if (auto v = get("activation")) config.activation = *v;
  if (auto v = get("variance_model")) config.variance_model = *v;
  if (auto v = get("data")) config.data_path = *v;
  if (auto v = get("samples")) config.samples = std::stoi(*v);
  if (auto v = get("seed")) config.seed = std::stoull(*v);
  if (auto v = get("threads")) config.threads = std::stoi(*v);
  if (auto v = get("delta")) config.delta = std::stod(*v);
  if (auto v = get("mc_n")) config.mc_n = std::stoi(*v);
  if (auto v = get("max_proposals")) config.max_proposals = std::stol(*v);
  if (auto v = get("limit_mc")) config.limit_mc = std::stoi(*v);
  if (auto v = get("poisson_eps")) config.poisson_eps = std::stod(*v);
  if (auto v = get("out")) config.out_dir = *v;
  return config;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::map<std::string, std::string> keys;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("bad config line: " + line);
    keys[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return from_keys(keys);
}

void ExperimentConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config: " + path);
  for (const auto& [key, value] : to_keys()) out << key << '=' << value << '\n';
}

int run_experiment(const ExperimentConfig& config) {
  Architecture arch = config.architecture();
  DataSet data = config.dataset();
  if (config.sampler == SamplerKind::limit_prior ||
      config.sampler == SamplerKind::limit_posterior) {
    if (rank(data.inputs) < data.inputs.cols())
      throw std::invalid_argument(
          "limit samplers require linearly independent input points");
  }

  BatchResult result = run_batch(arch, data, config.batch_request());

  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  const fs::path out(config.out_dir);

  {
    std::ofstream f(out / "samples.csv");
    f << "sample_index,output_row,input_index,value\n";
    for (std::size_t s = 0; s < result.samples.size(); ++s) {
      const Matrix& m = result.samples[s];
      for (Eigen::Index h = 0; h < m.rows(); ++h)
        for (Eigen::Index i = 0; i < m.cols(); ++i)
          f << s << ',' << h << ',' << i << ',' << format_double(m(h, i))
            << '\n';
    }
  }
  {
    std::ofstream f(out / "stats.csv");
    f << "layer,proposals,acceptances\n";
    for (const auto& layer : result.stats.layers)
      f << layer.layer << ',' << layer.proposals << ',' << layer.acceptances
        << '\n';
  }
  if (!result.samples.empty()) {
    const Matrix& first = result.samples.front();
    for (Eigen::Index h = 0; h < first.rows(); ++h) {
      for (Eigen::Index i = 0; i < first.cols(); ++i) {
        std::vector<double> values;
        values.reserve(result.samples.size());
        for (const Matrix& m : result.samples) values.push_back(m(h, i));
        EcdfCurve curve = ecdf(std::move(values));
        std::ofstream f(out / ("ecdf_r" + std::to_string(h) + "_i" +
                               std::to_string(i) + ".csv"));
        f << "x,F\n";
        for (std::size_t k = 0; k < curve.support.size(); ++k)
          f << format_double(curve.support[k]) << ','
            << format_double(curve.heights[k]) << '\n';
      }
    }
  }
  {
    ExperimentConfig resolved = config;
    resolved.threads = config.threads;  // thread count does not affect output
    resolved.save((out / "manifest.txt").string());
  }
  return 0;
}

namespace {

// samples.csv -> per (output_row, input_index) value series, ordered by
// sample index.
std::map<std::pair<int, int>, std::vector<double>> read_samples(
    std::string path) {
  if (std::filesystem::is_directory(path))
    path = (std::filesystem::path(path) / "samples.csv").string();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open batch: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty batch file: " + path);
  std::map<std::pair<int, int>, std::vector<double>> series;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 4)
      throw std::runtime_error("bad batch row: " + line);
    series[{std::stoi(cells[1]), std::stoi(cells[2])}].push_back(
        std::stod(cells[3]));
  }
  if (series.empty()) throw std::runtime_error("batch has no samples: " + path);
  return series;
}

}  // namespace

int compare_batches(const std::string& path_a, const std::string& path_b,
                    const std::string& report_path) {
  auto series_a = read_samples(path_a);
  auto series_b = read_samples(path_b);
  if (series_a.size() != series_b.size())
    throw std::runtime_error("compare: batches have different output shapes");
  std::ofstream f(report_path);
  if (!f) throw std::runtime_error("cannot write report: " + report_path);
  f << "output_row,input_index,ks,mean_a,var_a,mean_b,var_b\n";
  for (const auto& [key, values_a] : series_a) {
    auto it = series_b.find(key);
    if (it == series_b.end())
      throw std::runtime_error("compare: batches have different output shapes");
    const double ks = ks_distance(values_a, it->second);
    const SampleSummary sa = summary(values_a);
    const SampleSummary sb = summary(it->second);
    f << key.first << ',' << key.second << ',' << format_double(ks) << ','
      << format_double(sa.mean) << ',' << format_double(sa.variance) << ','
      << format_double(sb.mean) << ',' << format_double(sb.variance) << '\n';
  }
  return 0;
}

int emit_kernel_chain(const ExperimentConfig& config,
                      const std::string& out_path) {
  Architecture arch = config.architecture();
  DataSet data = config.dataset();
  RngStream rng(config.seed, 0);
  KernelChain chain = sample_kernel_chain(rng, data.inputs, config.limit_spec(),
                                          arch.c_b, arch.c_w, arch.activation);
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot write kernel chain: " + out_path);
  f << "layer,i,j,value,mc_stderr\n";
  for (std::size_t l = 0; l < chain.kernels.size(); ++l) {
    const Matrix& k = chain.kernels[l];
    const Matrix& se = chain.mc_stderrs[l];
    for (Eigen::Index i = 0; i < k.rows(); ++i)
      for (Eigen::Index j = 0; j < k.cols(); ++j)
        f << (l + 1) << ',' << i << ',' << j << ',' << format_double(k(i, j))
          << ',' << format_double(se(i, j)) << '\n';
  }
  return 0;
}

}  // namespace depnet
