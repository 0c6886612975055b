#include "chaoskit/simulate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <map>
#include <numbers>
#include <optional>
#include <string>

#include "chaoskit/multi_index.hpp"

namespace chaoskit {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) { return splitmix64(seed ^ splitmix64(index)); }

SplitMix64::result_type SplitMix64::operator()() noexcept {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double standard_normal(SplitMix64& rng) {
  constexpr double kUnit = 0x1.0p-53;
  const double u1 = (static_cast<double>(rng() >> 11) + 0.5) * kUnit;  // in (0,1)
  const double u2 = static_cast<double>(rng() >> 11) * kUnit;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

struct RunningStats {
  double n = 0;
  double mean = 0;
  double m2 = 0;

  void push(double x) {
    n += 1;
    const double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }
};

RunningStats merge(const RunningStats& a, const RunningStats& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  RunningStats out;
  out.n = a.n + b.n;
  const double delta = b.mean - a.mean;
  out.mean = a.mean + delta * (b.n / out.n);
  out.m2 = a.m2 + b.m2 + delta * delta * (a.n * b.n / out.n);
  return out;
}

// Pairwise merge in a fixed tree, independent of how blocks were produced.
RunningStats merge_pairwise(std::span<const RunningStats> blocks) {
  if (blocks.empty()) return {};
  if (blocks.size() == 1) return blocks.front();
  const std::size_t half = blocks.size() / 2;
  return merge(merge_pairwise(blocks.first(half)), merge_pairwise(blocks.subspan(half)));
}

constexpr std::int64_t kBlock = 4096;

void check_config(int k, const SampleConfig& cfg) {
  if (k < 1) throw InputError("moment order k must be >= 1");
  if (cfg.n_samples < 1) throw InputError("n_samples must be >= 1");
}

MomentReport<double> to_report(int k, const RunningStats& s) {
  const double variance = s.m2 / s.n;
  return MomentReport<double>::simulated(k, s.mean, std::sqrt(variance / s.n));
}

RunningStats classical_block(const ClassicalSampler& sampler, int k, const SampleConfig& cfg, std::int64_t block) {
  RunningStats stats;
  const std::int64_t end = std::min(cfg.n_samples, (block + 1) * kBlock);
  for (std::int64_t i = block * kBlock; i < end; ++i) {
    SplitMix64 rng(sample_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    stats.push(std::pow(sampler(rng), k));
  }
  return stats;
}

std::int64_t block_count(const SampleConfig& cfg) { return (cfg.n_samples + kBlock - 1) / kBlock; }

}  // namespace

ClassicalSampler::ClassicalSampler(const GridKernel<double>& f) : m_(f.resolution()) {
  const int p = f.order();
  std::map<std::vector<int>, double> orbit_sums;
  std::vector<int> digits(static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0.0) continue;
    decode_index(i, m_, digits);
    std::sort(digits.begin(), digits.end());
    orbit_sums[digits] += f[i];
  }
  const double norm = std::pow(static_cast<double>(m_), -0.5 * p);
  for (const auto& [cells, weight] : orbit_sums) {
    if (weight == 0.0) continue;
    Term term{weight * norm, {}};
    for (std::size_t a = 0; a < cells.size();) {
      std::size_t b = a;
      while (b < cells.size() && cells[b] == cells[a]) ++b;
      term.powers.emplace_back(cells[a], static_cast<int>(b - a));
      max_multiplicity_ = std::max(max_multiplicity_, static_cast<int>(b - a));
      a = b;
    }
    terms_.push_back(std::move(term));
  }
}

double ClassicalSampler::evaluate(std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != m_) throw InputError("expected one Gaussian per grid cell");
  // He_n(xi_i) for n = 0..max multiplicity, row per cell.
  const auto width = static_cast<std::size_t>(max_multiplicity_) + 1;
  std::vector<double> he(xi.size() * width);
  for (std::size_t i = 0; i < xi.size(); ++i) {
    double* row = he.data() + i * width;
    row[0] = 1.0;
    if (width > 1) row[1] = xi[i];
    for (std::size_t n = 1; n + 1 < width; ++n) row[n + 1] = xi[i] * row[n] - static_cast<double>(n) * row[n - 1];
  }
  double total = 0.0;
  for (const auto& term : terms_) {
    double prod = term.coeff;
    for (auto [cell, power] : term.powers) prod *= he[static_cast<std::size_t>(cell) * width + static_cast<std::size_t>(power)];
    total += prod;
  }
  return total;
}

double ClassicalSampler::operator()(SplitMix64& rng) const {
  std::vector<double> xi(static_cast<std::size_t>(m_));
  for (double& x : xi) x = standard_normal(rng);
  return evaluate(xi);
}

double sample_classical(const GridKernel<double>& f, SplitMix64& rng) { return ClassicalSampler(f)(rng); }

MomentReport<double> mc_classical_moment(const GridKernel<double>& f, int k, const SampleConfig& cfg) {
  check_config(k, cfg);
  const ClassicalSampler sampler(f);
  const std::int64_t blocks = block_count(cfg);
  std::vector<RunningStats> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t b = 0; b < blocks; ++b) partial[static_cast<std::size_t>(b)] = classical_block(sampler, k, cfg, b);
  return to_report(k, merge_pairwise(partial));
}

namespace reference {

MomentReport<double> mc_classical_moment(const GridKernel<double>& f, int k, const SampleConfig& cfg) {
  check_config(k, cfg);
  const ClassicalSampler sampler(f);
  std::vector<RunningStats> partial;
  for (std::int64_t b = 0; b < block_count(cfg); ++b) partial.push_back(classical_block(sampler, k, cfg, b));
  return to_report(k, merge_pairwise(partial));
}

}  // namespace reference

namespace {

using Matrix = Eigen::MatrixXcd;

// Hermitian G with E|G_ab|^2 = sigma_sq for every entry, so E[tr(G^2)] = N^2 sigma_sq.
Matrix gue(int n, double sigma_sq, SplitMix64& rng) {
  Matrix g(n, n);
  const double diag_sd = std::sqrt(sigma_sq);
  const double part_sd = std::sqrt(sigma_sq / 2.0);
  for (int a = 0; a < n; ++a) {
    g(a, a) = {diag_sd * standard_normal(rng), 0.0};
    for (int b = a + 1; b < n; ++b) {
      const double re = part_sd * standard_normal(rng);
      const double im = part_sd * standard_normal(rng);
      g(a, b) = {re, im};
      g(b, a) = {re, -im};
    }
  }
  return g;
}

// tr(X Y) without forming the product.
std::complex<double> trace_product(const Matrix& x, const Matrix& y) { return x.cwiseProduct(y.transpose()).sum(); }

// sum over the remaining p - depth indices of a_{prefix, rest} G_{rest_1} ... G_{rest_last}.
bool build_tail(const GridKernel<double>& f, const std::vector<Matrix>& g, int depth, std::size_t offset,
                Matrix& out) {
  const int m = f.resolution();
  const int p = f.order();
  const auto n = g.front().rows();
  out.setZero(n, n);
  bool any = false;
  for (int j = 0; j < m; ++j) {
    const std::size_t next = offset * static_cast<std::size_t>(m) + static_cast<std::size_t>(j);
    if (depth == p - 1) {
      const double a = f[next];
      if (a == 0.0) continue;
      out += a * g[static_cast<std::size_t>(j)];
      any = true;
    } else {
      Matrix tail;
      if (!build_tail(f, g, depth + 1, next, tail)) continue;
      out.noalias() += g[static_cast<std::size_t>(j)] * tail;
      any = true;
    }
  }
  return any;
}

// Products G_i G_j computed on demand; G_j G_i is the adjoint of G_i G_j.
class PairProducts {
 public:
  explicit PairProducts(const std::vector<Matrix>& g) : g_(g), cache_(g.size() * g.size()) {}

  const Matrix& upper(std::size_t i, std::size_t j) {
    auto& slot = cache_[i * g_.size() + j];
    if (!slot) slot = g_[i] * g_[j];
    return *slot;
  }

 private:
  const std::vector<Matrix>& g_;
  std::vector<std::optional<Matrix>> cache_;
};

struct FreeDraw {
  std::vector<double> moments;
  std::vector<double> controls;
};

void validate_free(const GridKernel<double>& f, int matrix_dim, int k) {
  if (k < 1) throw InputError("moment order k must be >= 1");
  if (matrix_dim < 2) throw InputError("matrix dimension N must be >= 2");
  if (!is_mirror_symmetric(f)) throw PreconditionError("GUE sampling needs a mirror-symmetric kernel");
  if (!is_off_diagonal(f))
    throw PreconditionError("GUE sampling needs an off-diagonal kernel; refine and take the off-diagonal part first");
  check_budget(matrix_dim, 2);
}

FreeDraw draw_free(const GridKernel<double>& f, int matrix_dim, int k, SplitMix64& rng, bool with_controls) {
  const int m = f.resolution();
  const int p = f.order();
  const auto mu = static_cast<std::size_t>(m);
  const double n = matrix_dim;
  const double sigma_sq = 1.0 / (n * m);
  std::vector<Matrix> g;
  g.reserve(mu);
  for (int i = 0; i < m; ++i) g.push_back(gue(matrix_dim, sigma_sq, rng));
  PairProducts pairs(g);

  Matrix big;
  if (p == 0) {
    big = f[0] * Matrix::Identity(matrix_dim, matrix_dim);
  } else if (p == 2 && m <= kMaxControlResolution) {
    big.setZero(matrix_dim, matrix_dim);
    for (std::size_t i = 0; i < mu; ++i)
      for (std::size_t j = i + 1; j < mu; ++j) {
        const double a = f[i * mu + j];
        const double b = f[j * mu + i];
        if (a == 0.0 && b == 0.0) continue;
        const Matrix& q = pairs.upper(i, j);
        big += a * q + b * q.adjoint();
      }
  } else {
    build_tail(f, g, 0, 0, big);
  }

  const double scale = std::max(1.0, big.cwiseAbs().maxCoeff());
  if ((big - big.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw PreconditionError("sampled matrix integral is not Hermitian");

  // tr(F^j) = tr(F^a F^b) with a = floor(j/2), b = j - a.
  std::vector<Matrix> powers{Matrix(), big};
  for (int j = 2; j <= (k + 1) / 2; ++j) powers.push_back(powers.back() * big);
  FreeDraw out;
  out.moments.reserve(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    const auto a = static_cast<std::size_t>(j / 2);
    const auto b = static_cast<std::size_t>(j) - a;
    const std::complex<double> tr = (a == 0 ? powers[b].trace() : trace_product(powers[a], powers[b])) / n;
    if (std::abs(tr.imag()) > 1e-10 * std::max(1.0, std::pow(scale, j)))
      throw PreconditionError("trace of power " + std::to_string(j) + " has a non-negligible imaginary part");
    out.moments.push_back(tr.real());
  }

  if (with_controls) {
    const double s = 1.0 / m;
    std::vector<Matrix> squares;
    for (const auto& gi : g) {
      out.controls.push_back(trace_product(gi, gi).real() / n - s);
      squares.push_back(gi * gi);
    }
    for (std::size_t i = 0; i < mu; ++i)
      for (std::size_t j = i + 1; j < mu; ++j) {
        out.controls.push_back(trace_product(squares[i], squares[j]).real() / n - s * s);
        const Matrix& q = pairs.upper(i, j);
        out.controls.push_back(trace_product(q, q).real() / n - s * s / (n * n));
      }
  }
  return out;
}

}  // namespace

std::vector<double> sample_free_gue(const GridKernel<double>& f, int matrix_dim, int k, SplitMix64& rng) {
  validate_free(f, matrix_dim, k);
  return draw_free(f, matrix_dim, k, rng, false).moments;
}

MomentReport<double> mc_free_moment(const GridKernel<double>& f, int k, const SampleConfig& cfg) {
  check_config(k, cfg);
  validate_free(f, cfg.matrix_dim, k);
  const int m = f.resolution();
  const bool cv = cfg.control_variates;
  const auto draws = static_cast<std::size_t>(cfg.n_samples);
  const std::size_t n_controls = cv ? static_cast<std::size_t>(m) * static_cast<std::size_t>(m) : 0;
  if (cv && m > kMaxControlResolution)
    throw InputError("control variates need resolution m <= " + std::to_string(kMaxControlResolution));
  if (cv && draws < n_controls + 2) throw InputError("too few draws for the control-variate regression");

  std::vector<double> y(draws);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(draws), static_cast<Eigen::Index>(n_controls));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < cfg.n_samples; ++i) {
    try {
      SplitMix64 rng(sample_seed(cfg.seed, static_cast<std::uint64_t>(i)));
      const auto d = draw_free(f, cfg.matrix_dim, k, rng, cv);
      y[static_cast<std::size_t>(i)] = d.moments[static_cast<std::size_t>(k - 1)];
      for (std::size_t c = 0; c < n_controls; ++c) x(i, static_cast<Eigen::Index>(c)) = d.controls[c];
    } catch (...) {
#pragma omp critical(chaoskit_gue_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  if (cv) {
    // Regress the draws on the centered controls and remove the fitted part.
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(draws));
    const Eigen::RowVectorXd x_mean = x.colwise().mean();
    const Eigen::MatrixXd xc = x.rowwise() - x_mean;
    const Eigen::VectorXd beta = xc.colPivHouseholderQr().solve((yv.array() - yv.mean()).matrix());
    const Eigen::VectorXd adjusted = yv - x * beta;
    std::copy(adjusted.begin(), adjusted.end(), y.begin());
  }

  std::vector<RunningStats> partial;
  for (std::size_t start = 0; start < y.size(); start += kBlock) {
    RunningStats s;
    for (std::size_t i = start; i < std::min(y.size(), start + kBlock); ++i) s.push(y[i]);
    partial.push_back(s);
  }
  return to_report(k, merge_pairwise(partial));
}

}  // namespace chaoskit
