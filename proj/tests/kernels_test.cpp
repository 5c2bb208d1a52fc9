#include <doctest.h>

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "homog/kernels.hpp"
#include "homog/rng.hpp"

using namespace homog;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-3.0, 3.0);
  return v;
}

const std::vector<std::size_t> kSizes = {0, 1, 3, 4, 7, 8, 9, 31, 32, 33, 1000};

struct ArchGuard {
  kernels::Arch saved = kernels::active_arch();
  ~ArchGuard() { kernels::set_arch(saved); }
};

} // namespace

TEST_CASE("arch names and support") {
  CHECK(std::string(kernels::arch_name(kernels::Arch::scalar)) == "scalar");
  CHECK(std::string(kernels::arch_name(kernels::Arch::avx2)) == "avx2");
  CHECK(std::string(kernels::arch_name(kernels::Arch::neon)) == "neon");
  CHECK(kernels::arch_supported(kernels::Arch::scalar));
  CHECK(kernels::arch_supported(kernels::active_arch()));
}

TEST_CASE("set_arch rejects unsupported architectures") {
  ArchGuard guard;
  for (const kernels::Arch a : {kernels::Arch::avx2, kernels::Arch::neon}) {
    if (kernels::arch_supported(a)) {
      kernels::set_arch(a);
      CHECK(kernels::active_arch() == a);
    } else {
      CHECK_THROWS_AS(kernels::set_arch(a), std::invalid_argument);
    }
  }
}

TEST_CASE("vector variants agree with the scalar reference") {
  ArchGuard guard;
  std::vector<kernels::Arch> variants;
  for (const kernels::Arch a : {kernels::Arch::avx2, kernels::Arch::neon})
    if (kernels::arch_supported(a)) variants.push_back(a);

  for (const std::size_t n : kSizes) {
    const std::vector<double> x = random_vec(n, 101 + n);
    const std::vector<double> y = random_vec(n, 202 + n);
    const double alpha = 0.731;

    kernels::set_arch(kernels::Arch::scalar);
    const double sum_ref = kernels::sum(x.data(), n);
    const double dot_ref = kernels::dot(x.data(), y.data(), n);
    const double max_ref = kernels::max_abs(x.data(), n);
    std::vector<double> axpy_ref(n), scale_ref(n);
    kernels::axpy(axpy_ref.data(), x.data(), y.data(), alpha, n);
    kernels::scale(scale_ref.data(), x.data(), alpha, n);

    for (const kernels::Arch a : variants) {
      CAPTURE(n);
      CAPTURE(kernels::arch_name(a));
      kernels::set_arch(a);

      // Elementwise kernels and max_abs are bit-identical by contract.
      std::vector<double> axpy_v(n), scale_v(n);
      kernels::axpy(axpy_v.data(), x.data(), y.data(), alpha, n);
      kernels::scale(scale_v.data(), x.data(), alpha, n);
      if (n > 0) {
        CHECK(std::memcmp(axpy_v.data(), axpy_ref.data(), n * sizeof(double)) == 0);
        CHECK(std::memcmp(scale_v.data(), scale_ref.data(), n * sizeof(double)) == 0);
      }
      CHECK(kernels::max_abs(x.data(), n) == max_ref);

      // Reductions may reorder; compare to roundoff.
      double mag_sum = 1.0, mag_dot = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        mag_sum += std::fabs(x[i]);
        mag_dot += std::fabs(x[i] * y[i]);
      }
      CHECK(std::fabs(kernels::sum(x.data(), n) - sum_ref) <= 1e-13 * mag_sum);
      CHECK(std::fabs(kernels::dot(x.data(), y.data(), n) - dot_ref) <= 1e-13 * mag_dot);
    }
  }
}

TEST_CASE("axpy supports aliased destination") {
  ArchGuard guard;
  for (const std::size_t n : {std::size_t(9), std::size_t(33)}) {
    const std::vector<double> x = random_vec(n, 5 + n);
    const std::vector<double> y = random_vec(n, 6 + n);
    std::vector<double> expect(n);
    kernels::set_arch(kernels::Arch::scalar);
    kernels::axpy(expect.data(), x.data(), y.data(), -1.25, n);

    for (const kernels::Arch a : {kernels::Arch::scalar, kernels::active_arch()}) {
      if (!kernels::arch_supported(a)) continue;
      kernels::set_arch(a);
      std::vector<double> dst = x;
      kernels::axpy(dst.data(), dst.data(), y.data(), -1.25, n);
      CHECK(std::memcmp(dst.data(), expect.data(), n * sizeof(double)) == 0);
    }
  }
}

TEST_CASE("reduction oracles") {
  const double x[4] = {1.0, 2.0, 3.0, 4.0};
  const double y[4] = {2.0, -1.0, 0.5, 4.0};
  CHECK(kernels::sum(x, 4) == 10.0);
  CHECK(kernels::dot(x, y, 4) == 17.5);
  CHECK(kernels::max_abs(y, 4) == 4.0);
  const double z[3] = {-5.0, 0.0, 4.0};
  CHECK(kernels::max_abs(z, 3) == 5.0);
  CHECK(kernels::sum(nullptr, 0) == 0.0);
}
