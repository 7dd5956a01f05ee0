#include "depnet/batch.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace depnet {
namespace {

struct SampleOutcome {
  Matrix sample;
  RejectionStats stats;
};

SampleOutcome draw_one(const Architecture& arch, const DataSet& data,
                       const BatchRequest& request, int index) {
  RngStream rng(request.seed, static_cast<std::uint64_t>(index));
  SampleOutcome out;
  switch (request.kind) {
    case SamplerKind::prior: {
      NetworkParams params = sample_prior_params(rng, arch);
      out.sample = forward(params, data.inputs, arch.activation).back();
      break;
    }
    case SamplerKind::posterior: {
      if (arch.depth == 1) {
        out.sample =
            sample_posterior_shallow(rng, arch, data.inputs, data.targets);
      } else {
        auto [z, stats] = sample_posterior_deep(rng, arch, data.inputs,
                                                data.targets, request.rejection);
        out.sample = std::move(z);
        out.stats = std::move(stats);
      }
      break;
    }
    case SamplerKind::limit_prior:
      out.sample = sample_limit_prior(rng, data.inputs, request.limit,
                                      arch.n_out(), arch.c_b, arch.c_w,
                                      arch.activation);
      break;
    case SamplerKind::limit_posterior:
      out.sample = sample_limit_posterior(rng, data.inputs, data.targets,
                                          request.limit, arch.n_out(),
                                          arch.c_b, arch.c_w, arch.activation);
      break;
  }
  return out;
}

}  // namespace

BatchResult run_batch_serial(const Architecture& arch, const DataSet& data,
                             const BatchRequest& request) {
  BatchResult result;
  result.samples.resize(request.samples);
  for (int i = 0; i < request.samples; ++i) {
    SampleOutcome out = draw_one(arch, data, request, i);
    result.samples[i] = std::move(out.sample);
    result.stats.merge(out.stats);
  }
  return result;
}

BatchResult run_batch(const Architecture& arch, const DataSet& data,
                      const BatchRequest& request) {
#ifndef _OPENMP
  return run_batch_serial(arch, data, request);
#else
  if (request.threads <= 1) return run_batch_serial(arch, data, request);
  BatchResult result;
  result.samples.resize(request.samples);
  std::vector<RejectionStats> stats(request.samples);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) num_threads(request.threads)
  for (int i = 0; i < request.samples; ++i) {
    try {
      SampleOutcome out = draw_one(arch, data, request, i);
      result.samples[i] = std::move(out.sample);
      stats[i] = std::move(out.stats);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  // Merge after the workers finish; the sums are order-independent.
  for (const auto& s : stats) result.stats.merge(s);
  return result;
#endif
}

}  // namespace depnet
