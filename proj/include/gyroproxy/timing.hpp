#pragma once

#include <cstdint>
#include <vector>

#include "gyroproxy/grid.hpp"
#include "gyroproxy/kernels.hpp"

namespace gyroproxy {

/// Seeded operands for every kernel on one shape. Each operand draws from its own child
/// stream of the seed, so adding an operand never perturbs the others.
struct KernelInputs {
  DistributionState h;
  kernels::VelocityWeights weights;
  std::vector<double> stencil;
  std::vector<long> shifts;
  kernels::CollisionMatrices collision;
  kernels::FieldMoment phi;
};

KernelInputs make_kernel_inputs(const GridShape& shape, Seed seed);

/// Five-point centered fourth-order derivative stencil, or the three-point centered
/// difference when n_theta < 5.
std::vector<double> default_stencil(std::size_t n_theta);

/// Run one kernel variant once and return the checksum of its output.
std::uint64_t run_kernel(kernels::KernelId kernel, kernels::Variant variant, const KernelInputs& inputs);

struct KernelTiming {
  std::size_t reps = 0;
  double median_s = 0.0;
  double min_s = 0.0;
  std::uint64_t checksum = 0;
};

/// One untimed warm-up, then `reps` wall-clock timed runs (reps >= 3). Call from one thread
/// at a time.
KernelTiming time_kernel(kernels::KernelId kernel, kernels::Variant variant, const GridShape& shape, std::size_t reps,
                         Seed seed);
KernelTiming time_kernel(kernels::KernelId kernel, kernels::Variant variant, const KernelInputs& inputs,
                         std::size_t reps);

double median(std::vector<double> samples);

/// Forward transforms of `batch` seeded sequences of length n, timed like time_kernel. Each
/// rep starts from the same input.
KernelTiming time_fft(std::size_t n, std::size_t batch, std::size_t reps, Seed seed);

}  // namespace gyroproxy
