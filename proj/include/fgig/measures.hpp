#ifndef FGIG_MEASURES_HPP
#define FGIG_MEASURES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "fgig/numeric.hpp"
#include "fgig/params.hpp"

namespace fgig {

struct Atom {
  double location = 0.0;
  double weight = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Absolutely continuous part of a spectral measure. Its mass need not be one.
class ContinuousPart {
 public:
  virtual ~ContinuousPart() = default;

  virtual Interval support() const = 0;
  virtual double density(double x) const = 0;
  /// Mass of (-inf, x].
  virtual double cdf(double x) const = 0;
  /// Points at which cdf() is tabulated; used to build comparison grids.
  virtual std::vector<double> breakpoints() const = 0;
  /// Quadrature rule: integral of g against this part ~ sum_i weights[i] g(nodes[i]).
  virtual const std::vector<double>& nodes() const = 0;
  virtual const std::vector<double>& weights() const = 0;

  /// Cauchy transform int density(x)/(z - x) dx by the most accurate route available.
  /// The default is the quadrature rule.
  virtual cplx cauchy(cplx z) const { return cauchy_quadrature(z); }

  cplx cauchy_quadrature(cplx z) const {
    const auto& x = nodes();
    const auto& w = weights();
    cplx acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] / (z - x[i]);
    return acc;
  }

  double mass() const {
    const auto& w = weights();
    return std::accumulate(w.begin(), w.end(), 0.0);
  }
};

/// density(x) = sqrt((x - lo)(hi - x)) * smooth(x) on [lo, hi]. Integration uses
/// x = lo + (hi - lo) sin^2(theta/2), which absorbs the square-root weight; the
/// quadrature rule is Gauss-Chebyshev of the second kind.
class ChebyshevPart final : public ContinuousPart {
 public:
  using Smooth = std::function<double(double)>;
  /// Exact evaluator; returning nullopt falls back to quadrature.
  using CauchyFn = std::function<std::optional<cplx>(cplx)>;

  /// `edge_limits` are the limits of d(mass)/d(theta) at theta = 0 and pi. They are
  /// zero unless `smooth` has a pole at an endpoint, in which case the rule becomes
  /// the full trapezoid rule with endpoint nodes.
  ChebyshevPart(double lo, double hi, Smooth smooth, std::size_t n, CauchyFn exact = {},
                std::array<double, 2> edge_limits = {0.0, 0.0})
      : lo_(lo), hi_(hi), half_(0.5 * (hi - lo)), smooth_(std::move(smooth)), exact_(std::move(exact)),
        edge_limits_(edge_limits) {
    if (!(hi > lo)) throw DomainError("ChebyshevPart: empty interval");
    if (n < 2) throw DomainError("ChebyshevPart: need at least two nodes");
    const double step = pi / static_cast<double>(n + 1);
    if (edge_limits_[0] != 0.0) {
      nodes_.push_back(lo_);
      weights_.push_back(0.5 * step * edge_limits_[0]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double th = step * static_cast<double>(i + 1);
      const double s = std::sin(th);
      nodes_.push_back(x_of(th));
      weights_.push_back(half_ * half_ * step * s * s * smooth_(nodes_.back()));
    }
    if (edge_limits_[1] != 0.0) {
      nodes_.push_back(hi_);
      weights_.push_back(0.5 * step * edge_limits_[1]);
    }
    build_cdf_table();
  }

  Interval support() const override { return {lo_, hi_}; }

  double density(double x) const override {
    if (x <= lo_ || x >= hi_) return 0.0;
    return std::sqrt((x - lo_) * (hi_ - x)) * smooth_(x);
  }

  double cdf(double x) const override {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return total_;
    const double th = theta_of(x);
    auto it = std::upper_bound(panel_lo_.begin(), panel_lo_.end(), th);
    const std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - panel_lo_.begin()) - 1));
    auto g = [this](double t) { return integrand(t); };
    return cumulative_[k] + integrate_fixed<double>(g, panel_lo_[k], th, gauss_legendre_16());
  }

  std::vector<double> breakpoints() const override {
    std::vector<double> out;
    out.reserve(panel_lo_.size() + 1);
    for (double th : panel_lo_) out.push_back(x_of(th));
    out.push_back(hi_);
    return out;
  }

  const std::vector<double>& nodes() const override { return nodes_; }
  const std::vector<double>& weights() const override { return weights_; }

  cplx cauchy(cplx z) const override {
    if (exact_)
      if (auto v = exact_(z)) return *v;
    return cauchy_quadrature(z);
  }

  double smooth(double x) const { return smooth_(x); }

 private:
  double x_of(double th) const {
    const double s = std::sin(0.5 * th);
    return lo_ + 2.0 * half_ * s * s;
  }
  double theta_of(double x) const {
    const double r = std::clamp((x - lo_) / (2.0 * half_), 0.0, 1.0);
    return 2.0 * std::asin(std::sqrt(r));
  }
  // d(mass)/d(theta)
  double integrand(double th) const {
    if (th <= 0.0) return edge_limits_[0];
    if (th >= pi) return edge_limits_[1];
    const double s = std::sin(th);
    return half_ * half_ * s * s * smooth_(x_of(th));
  }

  void build_cdf_table() {
    std::vector<std::pair<double, double>> panels;
    auto g = [this](double t) { return integrand(t); };
    total_ = integrate_adaptive(g, 0.0, pi, 1e-15, 40, &panels);
    panel_lo_.clear();
    cumulative_.clear();
    double acc = 0.0;
    for (const auto& [a, b] : panels) {
      panel_lo_.push_back(a);
      cumulative_.push_back(acc);
      acc += integrate_fixed<double>(g, a, b, gauss_legendre_16());
    }
    total_ = acc;
  }

  double lo_, hi_, half_;
  Smooth smooth_;
  CauchyFn exact_;
  std::array<double, 2> edge_limits_;
  std::vector<double> nodes_, weights_;
  std::vector<double> panel_lo_, cumulative_;
  double total_ = 0.0;
};

/// Density known on a grid. Interior cells interpolate linearly; a cell where the
/// density switches between zero and positive is modelled as a square-root edge
/// sqrt(kappa |x - edge|), with the edge located by extrapolating the squared
/// density from the two nearest positive samples. Cauchy transforms and the CDF
/// are exact for this piecewise model.
class TabulatedPart final : public ContinuousPart {
 public:
  TabulatedPart(std::vector<double> grid, std::vector<double> values, double zero_threshold = 0.0) {
    if (grid.size() != values.size() || grid.size() < 3) throw DomainError("TabulatedPart: bad grid");
    const double vmax = *std::max_element(values.begin(), values.end());
    if (!(vmax > 0.0)) throw DomainError("TabulatedPart: density vanishes on the whole grid");
    const double cut = std::max(zero_threshold, 0.0);
    for (double& v : values)
      if (!(v > cut)) v = 0.0;
    build_cells(grid, values);
    build_rule();
  }

  Interval support() const override { return {cells_.front().x0, cells_.back().x1}; }

  double density(double x) const override {
    const auto* c = find(x);
    return c ? c->density(x) : 0.0;
  }

  double cdf(double x) const override {
    if (x <= cells_.front().x0) return 0.0;
    if (x >= cells_.back().x1) return cumulative_.back();
    auto it = std::upper_bound(starts_.begin(), starts_.end(), x);
    const std::size_t k = static_cast<std::size_t>((it - starts_.begin()) - 1);
    return cumulative_[k] + cells_[k].partial(x);
  }

  std::vector<double> breakpoints() const override {
    std::vector<double> out;
    out.reserve(cells_.size() + 1);
    for (const auto& c : cells_) out.push_back(c.x0);
    out.push_back(cells_.back().x1);
    return out;
  }

  const std::vector<double>& nodes() const override { return nodes_; }
  const std::vector<double>& weights() const override { return weights_; }

  cplx cauchy(cplx z) const override {
    if (z.imag() < 0.0) return std::conj(cauchy(std::conj(z)));
    cplx acc = 0.0;
    for (const auto& b : blocks_) {
      const cplx d = z - b.center;
      if (std::abs(d) > kFarRatio * b.radius) {
        // far field: sum_k m_k / d^{k+1}, moments scaled by radius^k
        const cplx q = b.radius / d;
        cplx s = 0.0;
        for (std::size_t k = kOrder; k-- > 0;) s = s * q + b.moments[k];
        acc += s / d;
      } else {
        for (std::size_t i = b.first; i < b.last; ++i) acc += cells_[i].cauchy(z);
      }
    }
    return acc;
  }

 private:
  enum class Kind { Linear, LeftEdge, RightEdge };

  static constexpr std::size_t kBlock = 32;
  static constexpr std::size_t kOrder = 26;
  static constexpr double kFarRatio = 4.0;

  struct Block {
    std::size_t first = 0, last = 0;
    double center = 0.0, radius = 0.0;
    std::array<double, kOrder> moments{};
  };

  struct Cell {
    Kind kind;
    double x0, x1;  // cell extent (for edges: [edge, x1] or [x0, edge])
    double y0 = 0.0, y1 = 0.0, kappa = 0.0;

    double density(double x) const {
      switch (kind) {
        case Kind::Linear:
          return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        case Kind::LeftEdge:
          return std::sqrt(kappa * std::max(0.0, x - x0));
        case Kind::RightEdge:
          return std::sqrt(kappa * std::max(0.0, x1 - x));
      }
      return 0.0;
    }
    double partial(double x) const {
      x = std::clamp(x, x0, x1);
      switch (kind) {
        case Kind::Linear: {
          const double d = x - x0;
          return y0 * d + 0.5 * (y1 - y0) / (x1 - x0) * d * d;
        }
        case Kind::LeftEdge:
          return 2.0 / 3.0 * std::sqrt(kappa) * std::pow(x - x0, 1.5);
        case Kind::RightEdge:
          return 2.0 / 3.0 * std::sqrt(kappa) * (std::pow(x1 - x0, 1.5) - std::pow(x1 - x, 1.5));
      }
      return 0.0;
    }
    double mass() const { return partial(x1); }
    cplx cauchy(cplx z) const {
      switch (kind) {
        case Kind::Linear: {
          const double s = (y1 - y0) / (x1 - x0);
          return (y0 + s * (z - x0)) * std::log((z - x0) / (z - x1)) - s * (x1 - x0);
        }
        case Kind::LeftEdge: {
          const double U = std::sqrt(x1 - x0);
          const cplx r = std::sqrt(z - x0);
          return std::sqrt(kappa) * (-2.0 * U + 2.0 * r * std::atanh(U / r));
        }
        case Kind::RightEdge: {
          const double U = std::sqrt(x1 - x0);
          const cplx r = std::sqrt(z - x1);
          return std::sqrt(kappa) * (2.0 * U - 2.0 * r * std::atan(U / r));
        }
      }
      return 0.0;
    }
  };

  const Cell* find(double x) const {
    if (x < cells_.front().x0 || x > cells_.back().x1) return nullptr;
    auto it = std::upper_bound(starts_.begin(), starts_.end(), x);
    const std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - starts_.begin()) - 1));
    return &cells_[k];
  }

  void build_cells(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const bool p0 = y[i] > 0.0, p1 = y[i + 1] > 0.0;
      if (p0 && p1) {
        cells_.push_back({Kind::Linear, x[i], x[i + 1], y[i], y[i + 1]});
      } else if (!p0 && p1) {
        // rising edge inside [x_i, x_{i+1}]
        double edge = x[i];
        if (i + 2 < n && y[i + 2] > 0.0) {
          const double q1 = y[i + 1] * y[i + 1], q2 = y[i + 2] * y[i + 2];
          if (q2 > q1) edge = x[i + 1] - q1 * (x[i + 2] - x[i + 1]) / (q2 - q1);
        }
        edge = std::clamp(edge, x[i], x[i + 1] - 1e-12 * (x[i + 1] - x[i]));
        const double kappa = y[i + 1] * y[i + 1] / (x[i + 1] - edge);
        cells_.push_back({Kind::LeftEdge, edge, x[i + 1], 0.0, y[i + 1], kappa});
      } else if (p0 && !p1) {
        double edge = x[i + 1];
        if (i >= 1 && y[i - 1] > 0.0) {
          const double q0 = y[i] * y[i], qm = y[i - 1] * y[i - 1];
          if (qm > q0) edge = x[i] + q0 * (x[i] - x[i - 1]) / (qm - q0);
        }
        edge = std::clamp(edge, x[i] + 1e-12 * (x[i + 1] - x[i]), x[i + 1]);
        const double kappa = y[i] * y[i] / (edge - x[i]);
        cells_.push_back({Kind::RightEdge, x[i], edge, y[i], 0.0, kappa});
      }
    }
    if (cells_.empty()) throw DomainError("TabulatedPart: no positive cells");
    // Zero gaps between disjoint components are represented by their absence; keep
    // the cell list sorted and record starts for lookup.
    starts_.reserve(cells_.size());
    cumulative_.reserve(cells_.size() + 1);
    double acc = 0.0;
    for (const auto& c : cells_) {
      starts_.push_back(c.x0);
      cumulative_.push_back(acc);
      acc += c.mass();
    }
    cumulative_.push_back(acc);
  }

  void build_rule() {
    static const QuadratureRule rule = gauss_legendre(8);
    for (const auto& c : cells_) {
      if (c.kind == Kind::Linear) {
        const double half = 0.5 * (c.x1 - c.x0), mid = 0.5 * (c.x1 + c.x0);
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
          const double x = mid + half * rule.nodes[j];
          nodes_.push_back(x);
          weights_.push_back(half * rule.weights[j] * c.density(x));
        }
      } else {
        // x = edge +/- u^2 removes the square root
        const double U = std::sqrt(c.x1 - c.x0);
        const double sk = std::sqrt(c.kappa);
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
          const double u = 0.5 * U * (1.0 + rule.nodes[j]);
          const double w = 0.5 * U * rule.weights[j] * 2.0 * u * sk * u;
          nodes_.push_back(c.kind == Kind::LeftEdge ? c.x0 + u * u : c.x1 - u * u);
          weights_.push_back(w);
        }
      }
    }
    build_blocks();
    // keep nodes ascending
    std::vector<std::size_t> idx(nodes_.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return nodes_[a] < nodes_[b]; });
    std::vector<double> xn, wn;
    xn.reserve(idx.size());
    wn.reserve(idx.size());
    for (auto i : idx) {
      xn.push_back(nodes_[i]);
      wn.push_back(weights_[i]);
    }
    nodes_ = std::move(xn);
    weights_ = std::move(wn);
  }

  // nodes_ still follow cell order here, eight per cell
  void build_blocks() {
    for (std::size_t first = 0; first < cells_.size(); first += kBlock) {
      Block b;
      b.first = first;
      b.last = std::min(cells_.size(), first + kBlock);
      const double lo = cells_[b.first].x0, hi = cells_[b.last - 1].x1;
      b.center = 0.5 * (lo + hi);
      b.radius = std::max(0.5 * (hi - lo), 1e-300);
      for (std::size_t j = 8 * b.first; j < 8 * b.last; ++j) {
        const double t = (nodes_[j] - b.center) / b.radius;
        double p = weights_[j];
        for (std::size_t k = 0; k < kOrder; ++k, p *= t) b.moments[k] += p;
      }
      blocks_.push_back(b);
    }
  }

  std::vector<Cell> cells_;
  std::vector<Block> blocks_;
  std::vector<double> starts_, cumulative_;
  std::vector<double> nodes_, weights_;
};

/// Image of a part under x -> scale * x + shift, scale > 0.
class AffinePart final : public ContinuousPart {
 public:
  AffinePart(std::shared_ptr<const ContinuousPart> inner, double scale, double shift)
      : inner_(std::move(inner)), scale_(scale), shift_(shift) {
    if (!(scale > 0.0)) throw DomainError("AffinePart: scale must be positive");
    for (double x : inner_->nodes()) nodes_.push_back(scale_ * x + shift_);
  }
  Interval support() const override {
    const auto s = inner_->support();
    return {scale_ * s.lo + shift_, scale_ * s.hi + shift_};
  }
  double density(double x) const override { return inner_->density(back(x)) / scale_; }
  double cdf(double x) const override { return inner_->cdf(back(x)); }
  std::vector<double> breakpoints() const override {
    auto b = inner_->breakpoints();
    for (double& x : b) x = scale_ * x + shift_;
    return b;
  }
  const std::vector<double>& nodes() const override { return nodes_; }
  const std::vector<double>& weights() const override { return inner_->weights(); }
  cplx cauchy(cplx z) const override { return inner_->cauchy((z - shift_) / scale_) / scale_; }

 private:
  double back(double x) const { return (x - shift_) / scale_; }
  std::shared_ptr<const ContinuousPart> inner_;
  double scale_, shift_;
  std::vector<double> nodes_;
};

/// Image of a part supported in (0, inf) under x -> 1/x.
class ReciprocalPart final : public ContinuousPart {
 public:
  explicit ReciprocalPart(std::shared_ptr<const ContinuousPart> inner) : inner_(std::move(inner)) {
    if (!(inner_->support().lo > 1e-12)) throw DomainError("reciprocal pushforward: support touches 0");
    mass_ = inner_->mass();
    total_ = inner_->cdf(inner_->support().hi);
    const auto& x = inner_->nodes();
    const auto& w = inner_->weights();
    for (std::size_t i = x.size(); i-- > 0;) {
      nodes_.push_back(1.0 / x[i]);
      weights_.push_back(w[i]);
    }
  }
  Interval support() const override {
    const auto s = inner_->support();
    return {1.0 / s.hi, 1.0 / s.lo};
  }
  double density(double y) const override {
    if (y <= 0.0) return 0.0;
    return inner_->density(1.0 / y) / (y * y);
  }
  double cdf(double y) const override {
    if (y <= 0.0) return 0.0;
    return total_ - inner_->cdf(1.0 / y);
  }
  std::vector<double> breakpoints() const override {
    auto b = inner_->breakpoints();
    std::vector<double> out;
    out.reserve(b.size());
    for (auto it = b.rbegin(); it != b.rend(); ++it) out.push_back(1.0 / *it);
    return out;
  }
  const std::vector<double>& nodes() const override { return nodes_; }
  const std::vector<double>& weights() const override { return weights_; }
  /// G_{1/X}(z) = (1/z) (m - (1/z) G_X(1/z)) for a part of mass m.
  cplx cauchy(cplx z) const override {
    const cplx w = 1.0 / z;
    return w * (total_ - w * inner_->cauchy(w));
  }

 private:
  std::shared_ptr<const ContinuousPart> inner_;
  std::vector<double> nodes_, weights_;
  double mass_ = 0.0, total_ = 0.0;
};

/// Compactly supported probability measure: finitely many atoms plus an optional
/// absolutely continuous part. Immutable once built.
class SpectralMeasure {
 public:
  SpectralMeasure() = default;
  SpectralMeasure(std::vector<Atom> atoms, std::shared_ptr<const ContinuousPart> part)
      : atoms_(std::move(atoms)), part_(std::move(part)) {
    for (const auto& a : atoms_)
      if (a.weight < 0.0) throw DomainError("SpectralMeasure: negative atom weight");
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.location < b.location; });
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const ContinuousPart* continuous() const { return part_.get(); }
  std::shared_ptr<const ContinuousPart> continuous_ptr() const { return part_; }

  Interval support() const {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& a : atoms_) {
      lo = std::min(lo, a.location);
      hi = std::max(hi, a.location);
    }
    if (part_) {
      const auto s = part_->support();
      lo = std::min(lo, s.lo);
      hi = std::max(hi, s.hi);
    }
    return {lo, hi};
  }

  double atom_mass() const {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.weight;
    return m;
  }
  double mass() const { return atom_mass() + (part_ ? part_->mass() : 0.0); }

  double density(double x) const { return part_ ? part_->density(x) : 0.0; }

  /// mu((-inf, x]).
  double cdf(double x) const {
    double f = part_ ? part_->cdf(x) : 0.0;
    for (const auto& a : atoms_)
      if (a.location <= x) f += a.weight;
    return f;
  }
  /// mu((-inf, x)).
  double cdf_left(double x) const {
    double f = part_ ? part_->cdf(x) : 0.0;
    for (const auto& a : atoms_)
      if (a.location < x) f += a.weight;
    return f;
  }

  std::vector<double> breakpoints() const {
    std::vector<double> out = part_ ? part_->breakpoints() : std::vector<double>{};
    for (const auto& a : atoms_) out.push_back(a.location);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Sum over atoms plus the quadrature rule of the continuous part.
  template <typename F>
  auto integrate(F&& g) const {
    using R = decltype(g(0.0));
    R acc{};
    for (const auto& a : atoms_) acc += a.weight * g(a.location);
    if (part_) {
      const auto& x = part_->nodes();
      const auto& w = part_->weights();
      for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * g(x[i]);
    }
    return acc;
  }

 private:
  std::vector<Atom> atoms_;
  std::shared_ptr<const ContinuousPart> part_;
};

inline SpectralMeasure dirac(double location) { return SpectralMeasure({{location, 1.0}}, nullptr); }

namespace detail {

inline cplx sqrt_product(cplx z, double lo, double hi) { return std::sqrt(z - lo) * std::sqrt(z - hi); }

}  // namespace detail

/// Closed-form Cauchy transform of mu(alpha, beta, lambda), valid off [a, b].
inline cplx fgig_cauchy(const FgigLaw& law, cplx z) {
  const double a = law.a(), b = law.b();
  const double c = 0.5 * (a + b), rab = std::sqrt(a * b);
  const double s = law.beta() / rab;
  // (1/pi) int sqrt((x-a)(b-x)) / x^k dx for k = 1, 2
  const double i1 = c - rab;
  const double i2 = c / rab - 1.0;
  const cplx j = (z - c) - detail::sqrt_product(z, a, b);
  const cplx k1 = (i1 + j) / z;
  const cplx k2 = i2 / z + (i1 + j) / (z * z);
  return 0.5 * (law.alpha() * k1 + s * k2);
}

inline double fgig_density(const FgigLaw& law, double x) {
  const double a = law.a(), b = law.b();
  if (x <= a || x >= b) return 0.0;
  return std::sqrt((x - a) * (b - x)) / (2.0 * pi) *
         (law.alpha() / x + law.beta() / (std::sqrt(a * b) * x * x));
}

inline double fgig_density(const NaturalParams& p, double x) { return fgig_density(FgigLaw(p), x); }

/// Node count giving near machine precision for the fGIG rule: the nearest
/// singularity of the smooth factor sits at 0, a/(b-a) half-widths below the support.
inline std::size_t default_node_count(double a, double b) {
  const double rho = std::sqrt(a / (b - a));
  const double n = 20.0 / std::max(rho, 1e-6);
  return static_cast<std::size_t>(std::clamp(n, 256.0, 65536.0));
}

inline SpectralMeasure build_fgig(const FgigLaw& law, std::size_t n) {
  if (n < 16) throw DomainError("build_fgig: need at least 16 nodes");
  const double a = law.a(), b = law.b();
  const double alpha = law.alpha(), s = law.beta() / std::sqrt(a * b);
  auto smooth = [alpha, s](double x) { return (alpha / x + s / (x * x)) / (2.0 * pi); };
  // The closed form cancels near z = 0, which lies a distance a from the support.
  auto exact = [law, a](cplx z) -> std::optional<cplx> {
    if (std::abs(z) < 0.25 * a) return std::nullopt;
    return fgig_cauchy(law, z);
  };
  return SpectralMeasure({}, std::make_shared<ChebyshevPart>(a, b, smooth, n, exact));
}

inline SpectralMeasure build_fgig(const NaturalParams& p, std::size_t n) { return build_fgig(FgigLaw(p), n); }

inline SpectralMeasure build_fgig(const NaturalParams& p) {
  const FgigLaw law(p);
  return build_fgig(law, default_node_count(law.a(), law.b()));
}

/// Free Poisson (Marchenko-Pastur) law with jump size `jump` and rate `rate`.
struct FreePoissonParams {
  double jump = 1.0;
  double rate = 1.0;
};

inline Interval free_poisson_support(const FreePoissonParams& fp) {
  const double r = std::sqrt(fp.rate);
  return {fp.jump * (1.0 - r) * (1.0 - r), fp.jump * (1.0 + r) * (1.0 + r)};
}

/// Cauchy transform of nu(jump, rate) including its atom at 0.
inline cplx free_poisson_cauchy(const FreePoissonParams& fp, cplx z) {
  const auto s = free_poisson_support(fp);
  const double g = fp.jump, l = fp.rate;
  return (z + g * (1.0 - l) - detail::sqrt_product(z, s.lo, s.hi)) / (2.0 * g * z);
}

/// `weight` scales the whole law (used for mixtures).
inline SpectralMeasure build_free_poisson(const FreePoissonParams& fp, std::size_t n = 256, double weight = 1.0,
                                          std::vector<Atom> extra_atoms = {}) {
  if (!(fp.jump > 0.0) || !(fp.rate > 0.0)) throw DomainError("build_free_poisson: parameters must be positive");
  const auto s = free_poisson_support(fp);
  const double g = fp.jump;
  const double atom = std::max(0.0, 1.0 - fp.rate);
  auto smooth = [g, weight](double x) { return weight / (2.0 * pi * g * x); };
  auto exact = [fp, atom, weight](cplx z) -> std::optional<cplx> { return weight * (free_poisson_cauchy(fp, z) - atom / z); };
  // rate 1: the pole of smooth sits on the lower edge, where d(mass)/d(theta) -> weight (hi - lo) / (2 pi g)
  std::array<double, 2> edges{0.0, 0.0};
  if (s.lo == 0.0) edges[0] = weight * s.hi / (2.0 * pi * g);
  auto part = std::make_shared<ChebyshevPart>(s.lo, s.hi, smooth, n, exact, edges);
  if (atom > 0.0) extra_atoms.push_back({0.0, weight * atom});
  return SpectralMeasure(std::move(extra_atoms), part);
}

/// Semicircle law with the given mean and variance.
inline SpectralMeasure build_semicircle(double mean, double variance, std::size_t n = 256) {
  if (!(variance > 0.0)) throw DomainError("build_semicircle: variance must be positive");
  const double r = 2.0 * std::sqrt(variance);
  auto smooth = [variance](double) { return 1.0 / (2.0 * pi * variance); };
  auto exact = [mean, r, variance](cplx z) -> std::optional<cplx> {
    return (z - mean - detail::sqrt_product(z, mean - r, mean + r)) / (2.0 * variance);
  };
  return SpectralMeasure({}, std::make_shared<ChebyshevPart>(mean - r, mean + r, smooth, n, exact));
}

/// int x^k dmu for k >= -2.
inline double moment(const SpectralMeasure& m, int k) {
  if (k < -2) throw DomainError("moment: order must be >= -2");
  if (k < 0) {
    for (const auto& a : m.atoms())
      if (a.location == 0.0 && a.weight > 0.0) throw DomainError("moment: negative order with an atom at 0");
    if (m.continuous() && !(m.continuous()->support().lo > 1e-12))
      throw DomainError("moment: negative order with support touching 0");
  }
  return m.integrate([k](double x) { return std::pow(x, k); });
}

/// Mode of mu(alpha, beta, lambda): the root in (a, b) of the quadratic numerator of
/// the density derivative, c2 x^2 + c1 x + c0.
struct ModeQuadratic {
  double c2, c1, c0;
  double operator()(double x) const { return (c2 * x + c1) * x + c0; }
};

inline ModeQuadratic mode_quadratic(const FgigLaw& law) {
  const double a = law.a(), b = law.b(), al = law.alpha();
  const double s = law.beta() / std::sqrt(a * b);
  return {-al * (a + b) + 2.0 * s, 2.0 * al * a * b - 3.0 * s * (a + b), 4.0 * a * b * s};
}

inline double mode(const FgigLaw& law) {
  const auto q = mode_quadratic(law);
  const double a = law.a(), b = law.b();
  double root;
  if (q.c2 == 0.0) {
    root = -q.c0 / q.c1;
  } else {
    const double disc = q.c1 * q.c1 - 4.0 * q.c2 * q.c0;
    const double sq = std::sqrt(std::max(disc, 0.0));
    const double t = -0.5 * (q.c1 + std::copysign(sq, q.c1));
    const double r1 = t / q.c2, r2 = q.c0 / t;
    root = (r1 > a && r1 < b) ? r1 : r2;
  }
  // polish; the quadratic changes sign on (a, b)
  if (!(root > a && root < b)) root = bisect(q, a, b);
  for (int i = 0; i < 3; ++i) {
    const double d = 2.0 * q.c2 * root + q.c1;
    if (d == 0.0) break;
    const double next = root - q(root) / d;
    if (!(next > a && next < b)) break;
    root = next;
  }
  return root;
}

inline double mode(const NaturalParams& p) { return mode(FgigLaw(p)); }

/// Law of 1/X.
inline SpectralMeasure pushforward_reciprocal(const SpectralMeasure& m) {
  std::vector<Atom> atoms;
  for (const auto& a : m.atoms()) {
    if (a.location <= 0.0 && a.weight > 0.0) throw DomainError("reciprocal pushforward: mass at or below 0");
    atoms.push_back({1.0 / a.location, a.weight});
  }
  std::shared_ptr<const ContinuousPart> part;
  if (m.continuous()) part = std::make_shared<ReciprocalPart>(m.continuous_ptr());
  return SpectralMeasure(std::move(atoms), part);
}

/// Law of scale * X + shift.
inline SpectralMeasure affine_image(const SpectralMeasure& m, double scale, double shift) {
  std::vector<Atom> atoms;
  for (const auto& a : m.atoms()) atoms.push_back({scale * a.location + shift, a.weight});
  std::shared_ptr<const ContinuousPart> part;
  if (m.continuous()) part = std::make_shared<AffinePart>(m.continuous_ptr(), scale, shift);
  return SpectralMeasure(std::move(atoms), part);
}

inline SpectralMeasure translate(const SpectralMeasure& m, double shift) { return affine_image(m, 1.0, shift); }
inline SpectralMeasure dilate(const SpectralMeasure& m, double scale) { return affine_image(m, scale, 0.0); }

namespace detail {

inline std::vector<double> comparison_grid(const SpectralMeasure& m1, const SpectralMeasure& m2,
                                           std::size_t uniform = 4001) {
  std::vector<double> xs = m1.breakpoints();
  const auto b2 = m2.breakpoints();
  xs.insert(xs.end(), b2.begin(), b2.end());
  const auto s1 = m1.support(), s2 = m2.support();
  const double lo = std::min(s1.lo, s2.lo), hi = std::max(s1.hi, s2.hi);
  if (hi > lo) {
    const auto u = linspace(lo, hi, uniform);
    xs.insert(xs.end(), u.begin(), u.end());
  }
  // midpoints catch extrema between tabulated points
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  const std::size_t n = xs.size();
  for (std::size_t i = 0; i + 1 < n; ++i) xs.push_back(0.5 * (xs[i] + xs[i + 1]));
  std::sort(xs.begin(), xs.end());
  return xs;
}

}  // namespace detail

/// sup_x |F1(x) - F2(x)| over a merged grid of both measures' breakpoints.
inline double kolmogorov_distance(const SpectralMeasure& m1, const SpectralMeasure& m2) {
  double d = 0.0;
  for (double x : detail::comparison_grid(m1, m2)) {
    d = std::max(d, std::abs(m1.cdf(x) - m2.cdf(x)));
    d = std::max(d, std::abs(m1.cdf_left(x) - m2.cdf_left(x)));
  }
  return d;
}

/// Levy distance inf{e : F1(x - e) - e <= F2(x) <= F1(x + e) + e for all x}; metrizes
/// weak convergence, including convergence to laws with atoms.
inline double levy_distance(const SpectralMeasure& m1, const SpectralMeasure& m2, double tol = 1e-10) {
  const auto grid = detail::comparison_grid(m1, m2, 2001);
  std::vector<double> f1(grid.size()), f2(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    f1[i] = m1.cdf(grid[i]);
    f2[i] = m2.cdf(grid[i]);
  }
  auto ok = [&](double e) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = grid[i];
      if (f2[i] > m1.cdf(x + e) + e) return false;
      if (f1[i] > m2.cdf(x + e) + e) return false;
      // shifted probes: x - e hits the jump points from the left
      if (m2.cdf(x - e) > f1[i] + e) return false;
      if (m1.cdf(x - e) > f2[i] + e) return false;
    }
    return true;
  };
  double lo = 0.0, hi = 1.0;
  if (ok(0.0)) return 0.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace fgig

#endif  // FGIG_MEASURES_HPP
