// Brute-force reference for P(eta > T) of dX = (|X|^alpha + X) dt + dW, X(0) = 0.
//
// Deliberately independent of the library: fixed-step Euler-Maruyama, std::mt19937_64
// and std::normal_distribution, explosion declared when |X| >= x_max. The output is
// pinned as a regression target in the unit and acceptance tests.
//
//   corollary2_reference [paths=1000000] [dt=1e-4] [x_max=1e6] [alpha=4] [T=1] [seed=20240601]

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <random>

int main(int argc, char** argv) {
  const auto arg = [&](int i, double fallback) { return argc > i ? std::atof(argv[i]) : fallback; };
  const auto paths = static_cast<std::uint64_t>(arg(1, 1e6));
  const double dt = arg(2, 1e-4);
  const double x_max = arg(3, 1e6);
  const double alpha = arg(4, 4.0);
  const double horizon = arg(5, 1.0);
  const auto seed = static_cast<std::uint64_t>(arg(6, 20240601));

  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto steps = static_cast<std::uint64_t>(std::llround(horizon / dt));
  const double sqrt_dt = std::sqrt(dt);

  std::uint64_t survived = 0;
  for (std::uint64_t p = 0; p < paths; ++p) {
    double x = 0.0;
    bool exploded = false;
    for (std::uint64_t k = 0; k < steps; ++k) {
      x += (std::pow(std::abs(x), alpha) + x) * dt + sqrt_dt * normal(gen);
      if (!(std::abs(x) < x_max)) {
        exploded = true;
        break;
      }
    }
    if (!exploded) ++survived;
  }
  const double mean = static_cast<double>(survived) / static_cast<double>(paths);
  const double se = std::sqrt(mean * (1.0 - mean) / static_cast<double>(paths));
  std::printf("paths %llu dt %g x_max %g alpha %g T %g\n", static_cast<unsigned long long>(paths), dt, x_max, alpha,
              horizon);
  std::printf("survival %.10f std_error %.10f\n", mean, se);
  return 0;
}
