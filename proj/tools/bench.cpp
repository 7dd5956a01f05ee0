// Benchmark comparing the serial reference batch runner against the
// OpenMP path on the two preset workloads.

#include <chrono>
#include <cstdio>
#include <thread>

#include "depnet/experiment.hpp"

namespace {

double time_batch(const depnet::Architecture& arch, const depnet::DataSet& data,
                  const depnet::BatchRequest& request, bool serial) {
  const auto t0 = std::chrono::steady_clock::now();
  if (serial)
    depnet::run_batch_serial(arch, data, request);
  else
    depnet::run_batch(arch, data, request);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void bench_config(const char* name, depnet::ExperimentConfig config) {
  config.apply_preset();
  const depnet::Architecture arch = config.architecture();
  const depnet::DataSet data = config.dataset();
  depnet::BatchRequest request = config.batch_request();

  request.threads = 1;
  const double serial = time_batch(arch, data, request, true);
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  request.threads = hw > 0 ? hw : 1;
  const double parallel = time_batch(arch, data, request, false);
  std::printf("%-28s serial %8.3fs   omp(%d) %8.3fs   speedup %.2fx\n", name,
              serial, request.threads, parallel, serial / parallel);
}

}  // namespace

int main() {
  {
    depnet::ExperimentConfig config;
    config.preset = "model1";
    config.width = 8;
    config.sampler = depnet::SamplerKind::posterior;
    config.samples = 200;
    bench_config("model1 posterior n=8", config);
  }
  {
    depnet::ExperimentConfig config;
    config.preset = "model2";
    config.width = 8;
    config.sampler = depnet::SamplerKind::posterior;
    config.samples = 20000;
    bench_config("model2 shallow n=8", config);
  }
  {
    depnet::ExperimentConfig config;
    config.preset = "model1";
    config.sampler = depnet::SamplerKind::limit_posterior;
    config.samples = 50;
    config.limit_mc = 20000;
    bench_config("model1 limit-posterior", config);
  }
  return 0;
}
