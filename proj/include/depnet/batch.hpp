#ifndef DEPNET_BATCH_HPP_
#define DEPNET_BATCH_HPP_

#include <cstdint>
#include <vector>

#include "depnet/posterior_sampler.hpp"
#include "depnet/wide_limit.hpp"

namespace depnet {

enum class SamplerKind { prior, posterior, limit_prior, limit_posterior };

struct BatchRequest {
  SamplerKind kind = SamplerKind::prior;
  int samples = 1000;
  std::uint64_t seed = 0;
  int threads = 1;  // 1 = serial reference path
  RejectionConfig rejection;
  LimitSpec limit;
};

struct BatchResult {
  std::vector<Matrix> samples;  // each n_out x d
  RejectionStats stats;         // populated for the posterior sampler
};

/// Draws request.samples independent samples; sample i always uses
/// stream index i, so the output is identical for every thread count.
/// Posterior batches use the shallow exact sampler when L = 1 and the
/// layered rejection sampler otherwise.
BatchResult run_batch(const Architecture& arch, const DataSet& data,
                      const BatchRequest& request);

/// Serial reference implementation of run_batch (no OpenMP), kept for
/// testing and benchmarking against the parallel path.
BatchResult run_batch_serial(const Architecture& arch, const DataSet& data,
                             const BatchRequest& request);

}  // namespace depnet

#endif  // DEPNET_BATCH_HPP_
