#include "stochexp/brownian.hpp"

#include <cmath>
#include <stdexcept>

namespace stochexp {

std::vector<double> BrownianPath::interpolate(double t) const {
  const std::size_t k = grid.index_at_or_before(t);
  if (k == TimeGrid::npos || t > grid.back() * (1.0 + 1e-12) + 1e-300)
    throw std::invalid_argument("BrownianPath: time outside the sampled grid");
  std::vector<double> out(at_index(k).begin(), at_index(k).end());
  if (k + 1 < grid.size() && t > grid[k]) {
    const double w = (t - grid[k]) / grid.step(k);
    for (std::size_t c = 0; c < dim; ++c) out[c] += w * (value(k + 1, c) - value(k, c));
  }
  return out;
}

BrownianPath sample_brownian(const TimeGrid& grid, RngStream& stream, std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("sample_brownian: dim must be positive");
  if (grid.size() == 0) throw std::invalid_argument("sample_brownian: empty grid");
  BrownianPath path{grid, dim, std::vector<double>(grid.size() * dim, 0.0)};
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double scale = std::sqrt(grid.step(k));
    for (std::size_t c = 0; c < dim; ++c)
      path.values[(k + 1) * dim + c] = path.values[k * dim + c] + scale * stream.normal();
  }
  return path;
}

BridgeSampler::BridgeSampler(double length, std::span<const double> endpoint_increment,
                             RngStream& stream)
    : remaining_(length), gap_(endpoint_increment.begin(), endpoint_increment.end()), stream_(&stream) {
  if (!(length > 0.0)) throw std::invalid_argument("BridgeSampler: non-positive interval");
}

void BridgeSampler::reset(double length, std::span<const double> endpoint_increment) {
  if (!(length > 0.0)) throw std::invalid_argument("BridgeSampler: non-positive interval");
  remaining_ = length;
  gap_.assign(endpoint_increment.begin(), endpoint_increment.end());
}

double BridgeSampler::advance(double h, std::span<double> increment) {
  if (increment.size() != gap_.size()) throw std::invalid_argument("BridgeSampler: dimension mismatch");
  if (closed()) throw std::logic_error("BridgeSampler: interval already closed");
  if (!(h > 0.0)) throw std::invalid_argument("BridgeSampler: non-positive step");
  if (h >= remaining_) {
    for (std::size_t c = 0; c < gap_.size(); ++c) {
      increment[c] = gap_[c];
      gap_[c] = 0.0;
    }
    const double advanced = remaining_;
    remaining_ = 0.0;
    return advanced;
  }
  // W(t+h) | W(t), W(end) ~ N(W(t) + (h/r) gap, h (r - h) / r)
  const double left = remaining_ - h;
  const double frac = h / remaining_;
  const double sd = std::sqrt(h * left / remaining_);
  for (std::size_t c = 0; c < gap_.size(); ++c) {
    const double dw = frac * gap_[c] + sd * stream_->normal();
    increment[c] = dw;
    gap_[c] -= dw;
  }
  remaining_ = left;
  return h;
}

BrownianPath refine_brownian(const BrownianPath& coarse, const TimeGrid& fine, RngStream& stream) {
  const std::size_t dim = coarse.dim;
  BrownianPath out{fine, dim, std::vector<double>(fine.size() * dim, 0.0)};
  std::vector<double> increment(dim);
  std::vector<double> gap(dim);
  std::size_t j = 0;  // index into fine
  for (std::size_t k = 0; k < coarse.grid.size(); ++k) {
    if (j >= fine.size() || std::abs(fine[j] - coarse.grid[k]) > 1e-12 * std::max(1.0, fine[j]))
      throw std::invalid_argument("refine_brownian: fine grid must contain every coarse point");
    for (std::size_t c = 0; c < dim; ++c) out.values[j * dim + c] = coarse.value(k, c);
    if (k + 1 == coarse.grid.size()) break;

    std::size_t next = j + 1;
    while (next < fine.size() && fine[next] < coarse.grid[k + 1] * (1.0 - 1e-12) - 1e-300) ++next;
    if (next == j + 1) {
      j = next;
      continue;
    }
    for (std::size_t c = 0; c < dim; ++c) gap[c] = coarse.value(k + 1, c) - coarse.value(k, c);
    BridgeSampler bridge(coarse.grid.step(k), gap, stream);
    for (std::size_t i = j + 1; i < next; ++i) {
      bridge.advance(fine[i] - fine[i - 1], increment);
      for (std::size_t c = 0; c < dim; ++c)
        out.values[i * dim + c] = out.values[(i - 1) * dim + c] + increment[c];
    }
    j = next;
  }
  if (j + 1 != fine.size())
    throw std::invalid_argument("refine_brownian: fine grid extends beyond the coarse grid");
  return out;
}

}  // namespace stochexp
