#include "gyroproxy/timing.hpp"

#include <algorithm>
#include <chrono>

#include "gyroproxy/errors.hpp"
#include "gyroproxy/fft.hpp"

namespace gyroproxy {

namespace {

enum Stream : std::uint64_t { kState = 0, kWeights = 1, kShifts = 2, kCollision = 3 };

}  // namespace

std::vector<double> default_stencil(std::size_t n_theta) {
  if (n_theta >= 5) return {1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0};
  if (n_theta >= 3) return {-0.5, 0.0, 0.5};
  return {1.0};
}

KernelInputs make_kernel_inputs(const GridShape& shape, Seed seed) {
  const CounterRng root(seed);
  KernelInputs inputs{random_state(shape, seed),
                      kernels::VelocityWeights::constant(shape, 0.0),
                      default_stencil(shape.n_theta()),
                      std::vector<long>(shape.n_toroidal()),
                      kernels::CollisionMatrices::zero(shape),
                      kernels::FieldMoment(shape.n_theta(), shape.n_toroidal(), shape.n_radial())};

  const auto wrng = root.split(kWeights);
  for (std::size_t i = 0; i < inputs.weights.values.size(); ++i) inputs.weights.values[i] = wrng.unit(i);

  const auto srng = root.split(kShifts);
  for (std::size_t ky = 0; ky < inputs.shifts.size(); ++ky) {
    const long span = std::min<long>(3, static_cast<long>(shape.n_radial()));
    inputs.shifts[ky] = static_cast<long>(srng.bits(ky) % static_cast<std::uint64_t>(2 * span + 1)) - span;
  }

  // scaled by 1/dim so outputs stay O(1)
  const auto crng = root.split(kCollision);
  const std::size_t m = inputs.collision.dim;
  for (std::size_t i = 0; i < inputs.collision.values.size(); ++i) {
    inputs.collision.values[i] = crng.symmetric(i) / static_cast<double>(m);
  }

  inputs.phi = kernels::field_kernel(inputs.h, inputs.weights, kernels::Variant::optimized);
  return inputs;
}

std::uint64_t run_kernel(kernels::KernelId kernel, kernels::Variant variant, const KernelInputs& inputs) {
  using kernels::KernelId;
  switch (kernel) {
    case KernelId::field: return kernels::checksum(kernels::field_kernel(inputs.h, inputs.weights, variant).values());
    case KernelId::stream: return kernels::checksum(kernels::stream_kernel(inputs.h, inputs.stencil, variant).values());
    case KernelId::shear: return kernels::checksum(kernels::shear_kernel(inputs.h, inputs.shifts, variant).values());
    case KernelId::collision: return kernels::checksum(kernels::collision_kernel(inputs.h, inputs.collision).values());
    case KernelId::nonlinear:
      return kernels::checksum(
          kernels::nonlinear_kernel(inputs.h, inputs.phi, kernels::nonlinear_plans(inputs.h.shape(), variant)).values());
  }
  throw ParameterError("run_kernel: unknown kernel");
}

double median(std::vector<double> samples) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  const std::size_t mid = samples.size() / 2;
  return samples.size() % 2 ? samples[mid] : 0.5 * (samples[mid - 1] + samples[mid]);
}

KernelTiming time_kernel(kernels::KernelId kernel, kernels::Variant variant, const KernelInputs& inputs,
                         std::size_t reps) {
  if (reps < 3) throw ParameterError("time_kernel: reps must be >= 3, got " + std::to_string(reps));
  using clock = std::chrono::steady_clock;
  KernelTiming timing;
  timing.reps = reps;
  timing.checksum = run_kernel(kernel, variant, inputs);  // warm-up

  std::vector<double> samples;
  samples.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const auto start = clock::now();
    const auto sum = run_kernel(kernel, variant, inputs);
    samples.push_back(std::chrono::duration<double>(clock::now() - start).count());
    timing.checksum = sum;
  }
  timing.median_s = median(samples);
  timing.min_s = *std::min_element(samples.begin(), samples.end());
  return timing;
}

KernelTiming time_kernel(kernels::KernelId kernel, kernels::Variant variant, const GridShape& shape, std::size_t reps,
                         Seed seed) {
  if (reps < 3) throw ParameterError("time_kernel: reps must be >= 3, got " + std::to_string(reps));
  return time_kernel(kernel, variant, make_kernel_inputs(shape, seed), reps);
}

KernelTiming time_fft(std::size_t n, std::size_t batch, std::size_t reps, Seed seed) {
  if (reps < 3) throw ParameterError("time_fft: reps must be >= 3, got " + std::to_string(reps));
  if (n == 0 || batch == 0) throw ParameterError("time_fft: size and batch must be >= 1");
  using clock = std::chrono::steady_clock;
  const auto plan = fft::cached_plan(n);
  const CounterRng rng(seed);
  std::vector<complex> input(n * batch);
  for (std::size_t i = 0; i < input.size(); ++i) input[i] = {rng.symmetric(2 * i), rng.symmetric(2 * i + 1)};

  std::vector<complex> work(input);
  plan->execute_batch(work, batch, fft::Direction::forward);  // warm-up

  KernelTiming timing;
  timing.reps = reps;
  std::vector<double> samples;
  for (std::size_t r = 0; r < reps; ++r) {
    std::copy(input.begin(), input.end(), work.begin());
    const auto start = clock::now();
    plan->execute_batch(work, batch, fft::Direction::forward);
    samples.push_back(std::chrono::duration<double>(clock::now() - start).count());
  }
  timing.checksum = kernels::checksum(work);
  timing.median_s = median(samples);
  timing.min_s = *std::min_element(samples.begin(), samples.end());
  return timing;
}

}  // namespace gyroproxy
