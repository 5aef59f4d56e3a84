#include "mbl/discretize.hpp"

#include <cmath>
#include <stdexcept>

#include "mbl/parallel.hpp"

namespace mbl::discretize {

DiscretizationDraw sample_draw(int k, int d, std::uint64_t seed) {
  if (k < 1 || d < 1)
    throw std::invalid_argument("sample_draw: k and d must be >= 1");
  Rng rng(seed);
  const double sd = 1.0 / std::sqrt(static_cast<double>(k));
  DiscretizationDraw draw;
  draw.A.resize(k, d);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < d; ++j) draw.A(i, j) = rng.gaussian(sd);
  draw.offsets.resize(k);
  for (int i = 0; i < k; ++i) draw.offsets[i] = rng.uniform01();
  return draw;
}

double grid_pitch(int k) { return 1.0 / (10.0 * std::sqrt(static_cast<double>(k))); }

double grid_value(std::int64_t z, int k) {
  return (static_cast<double>(z) + 0.5) * grid_pitch(k);
}

RoundingChoice rounding_probability(double v, int k) {
  if (!std::isfinite(v) || std::fabs(v) > 1e12)
    throw std::invalid_argument("rounding_probability: v must be finite and |v| <= 1e12");
  const double pitch = grid_pitch(k);
  const double u = v / pitch - 0.5;
  auto z = static_cast<std::int64_t>(std::floor(u));
  // Guard against floor landing one cell off after the division.
  if (grid_value(z + 1, k) <= v) ++z;
  if (grid_value(z, k) > v) --z;
  // 1 - (v - grid(z)) / pitch rather than (grid(z+1) - v) / pitch: the
  // former is exactly 1 when v sits on the grid point itself.
  const double p = 1.0 - (v - grid_value(z, k)) / pitch;
  return {z, std::min(1.0, std::max(0.0, p))};
}

Eigen::VectorXd GridVector::realized() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = grid_value(z[i], k);
  return out;
}

double GridVector::squared_norm() const {
  // (2z+1)^2 summed exactly; coordinates are (2z+1) / (20 sqrt(k)).
  unsigned long long sum = 0;
  for (std::int64_t zi : z) {
    const long long odd = 2 * zi + 1;
    sum += static_cast<unsigned long long>(odd * odd);
  }
  return static_cast<double>(sum) / (400.0 * static_cast<double>(k));
}

double GridVector::norm() const { return std::sqrt(squared_norm()); }

GridVector snap_vector(const Eigen::VectorXd& v, const Eigen::VectorXd& offsets) {
  if (v.size() != offsets.size())
    throw std::invalid_argument("snap_vector: offsets length must match v");
  const int k = static_cast<int>(v.size());
  GridVector g;
  g.k = k;
  g.z.resize(v.size());
  for (int i = 0; i < k; ++i) {
    const RoundingChoice rc = rounding_probability(v[i], k);
    g.z[static_cast<std::size_t>(i)] =
        offsets[i] <= rc.down_probability ? rc.z : rc.z + 1;
  }
  return g;
}

GridVector snap(const DiscretizationDraw& draw, const UnitVector& w) {
  if (draw.d() != w.dim())
    throw std::invalid_argument("snap: draw dimension must match hypothesis");
  return snap_vector(draw.A * w.coords(), draw.offsets);
}

int grid_level(const GridVector& g) {
  // ||g||_2 <= 2^i * 4 in integers: sum (2z+1)^2 <= 6400 k 4^i.
  unsigned long long sum = 0;
  for (std::int64_t zi : g.z) {
    const long long odd = 2 * zi + 1;
    sum += static_cast<unsigned long long>(odd * odd);
  }
  unsigned __int128 limit =
      static_cast<unsigned __int128>(6400) * static_cast<unsigned __int128>(g.k);
  for (int level = 0; level < 64; ++level) {
    if (sum <= limit) return level;
    limit *= 4;
  }
  throw std::overflow_error("grid_level: vector norm out of representable range");
}

namespace {

// Largest odd integer a >= 0 with a^2 <= q; -1 when q < 1.
long long largest_odd_below_sqrt(unsigned long long q) {
  if (q < 1) return -1;
  auto a = static_cast<long long>(std::sqrt(static_cast<double>(q)));
  while (static_cast<unsigned long long>(a) * static_cast<unsigned long long>(a) > q) --a;
  while (static_cast<unsigned long long>(a + 1) * static_cast<unsigned long long>(a + 1) <= q) ++a;
  if (a % 2 == 0) --a;
  return a;
}

// Count of odd integers o (both signs) with o^2 <= q.
std::uint64_t count_odd_coords(unsigned long long q) {
  const long long a = largest_odd_below_sqrt(q);
  return a < 0 ? 0 : static_cast<std::uint64_t>(a) + 1;
}

}  // namespace

GridCount grid_count(int k, int level) {
  if (level < 0) throw std::invalid_argument("grid_count: level must be >= 0");
  if (k < 1 || k > 3)
    throw std::invalid_argument("grid_count: enumeration supports k in {1,2,3}");
  if (level > (k == 3 ? 6 : 14))
    throw std::invalid_argument("grid_count: level too large for enumeration");

  // Membership: sum over coordinates of (2z+1)^2 <= 6400 k 4^level.
  const unsigned long long q = 6400ULL * static_cast<unsigned long long>(k)
                               << (2 * level);
  std::uint64_t count = 0;
  if (k == 1) {
    count = count_odd_coords(q);
  } else if (k == 2) {
    const long long a1 = largest_odd_below_sqrt(q);
    for (long long o1 = -a1; o1 <= a1; o1 += 2)
      count += count_odd_coords(q - static_cast<unsigned long long>(o1 * o1));
  } else {
    const long long a1 = largest_odd_below_sqrt(q);
    for (long long o1 = -a1; o1 <= a1; o1 += 2) {
      const unsigned long long rem1 = q - static_cast<unsigned long long>(o1 * o1);
      const long long a2 = largest_odd_below_sqrt(rem1);
      for (long long o2 = -a2; o2 <= a2; o2 += 2)
        count += count_odd_coords(rem1 - static_cast<unsigned long long>(o2 * o2));
    }
  }

  GridCount result;
  result.exact = count;
  result.log2_bound = std::ldexp(static_cast<double>(k), level + 7);
  result.within_bound =
      count == 0 || std::log2(static_cast<double>(count)) <= result.log2_bound;
  return result;
}

double sample_margin(double alpha, int k, Rng& rng) {
  if (std::fabs(alpha) > 1.0)
    throw std::invalid_argument("sample_margin: |alpha| must be <= 1");
  const double inv_sqrt_k = 1.0 / std::sqrt(static_cast<double>(k));
  const double y_sd = std::sqrt(std::max(0.0, 1.0 - alpha * alpha)) * inv_sqrt_k;
  Eigen::VectorXd x(k), z(k), offsets(k);
  for (int i = 0; i < k; ++i) x[i] = rng.gaussian(inv_sqrt_k);
  for (int i = 0; i < k; ++i) z[i] = alpha * x[i] + rng.gaussian(y_sd);
  for (int i = 0; i < k; ++i) offsets[i] = rng.uniform01();
  const GridVector snapped = snap_vector(x, offsets);
  double dot = 0.0;
  for (int i = 0; i < k; ++i) dot += snapped.coordinate(i) * z[i];
  return dot;
}

double sample_margin(double alpha, int k, std::uint64_t seed) {
  Rng rng(seed);
  return sample_margin(alpha, k, rng);
}

Estimate estimate_preservation(double alpha, double gamma, int k,
                               std::int64_t trials, std::uint64_t seed,
                               int threads) {
  if (trials < 1)
    throw std::invalid_argument("estimate_preservation: trials must be >= 1");
  if (!(gamma > 0.0) || gamma > 1.0)
    throw std::invalid_argument("estimate_preservation: gamma must lie in (0, 1]");
  std::vector<std::uint8_t> failures(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    const double v = sample_margin(alpha, k, rng);
    failures[t] = std::fabs(v - alpha) > gamma ? 1 : 0;
  });
  std::int64_t hits = 0;
  for (std::uint8_t f : failures) hits += f;
  return bernoulli_estimate(hits, trials);
}

double sample_margin_direct(const UnitVector& w, const LabeledPoint& p, int k,
                            Rng& rng) {
  const int d = static_cast<int>(w.dim());
  if (p.x.size() != d)
    throw std::invalid_argument("sample_margin_direct: dimension mismatch");
  const double sd = 1.0 / std::sqrt(static_cast<double>(k));
  Eigen::MatrixXd a(k, d);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = rng.gaussian(sd);
  Eigen::VectorXd offsets(k);
  for (int i = 0; i < k; ++i) offsets[i] = rng.uniform01();
  const GridVector h = snap_vector(a * w.coords(), offsets);
  const Eigen::VectorXd ax = a * p.x;
  double dot = 0.0;
  for (int i = 0; i < k; ++i) dot += h.coordinate(i) * ax[i];
  return static_cast<double>(p.y) * dot;
}

}  // namespace mbl::discretize
