#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "kverify/error.hpp"
#include "kverify/geometry.hpp"
#include "kverify/model.hpp"
#include "model_nodes.hpp"

namespace kverify {

namespace detail {

JetMatrix MetricNode::complex_structure(std::span<const Jet>) const {
  fail(ErrorCode::InvalidArgument, "model carries no almost complex structure");
}

std::optional<std::vector<Jet>> MetricNode::transition(int, int, std::span<const Jet>) const {
  return std::nullopt;
}

}  // namespace detail

namespace {

using detail::MetricNode;

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

void sample_ball(std::mt19937_64& rng, double radius, std::span<double> out) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double len = 0.0;
  do {
    for (double& v : out) v = normal(rng);
    len = std::sqrt(norm2(out));
  } while (len == 0.0);
  const double r = radius * std::pow(uniform(rng), 1.0 / static_cast<double>(out.size()));
  for (double& v : out) v *= r / len;
}

// J d/dx_k = d/dy_k on R^{2N} with coordinates (x_1, y_1, ..., x_N, y_N).
JetMatrix standard_complex_structure(const JetSpace& space, int n) {
  JetMatrix j(space, n, 0.0);
  for (int k = 0; k + 1 < n; k += 2) {
    j(k + 1, k) += 1.0;
    j(k, k + 1) -= 1.0;
  }
  return j;
}

Jet sum_of_squares(std::span<const Jet> x) {
  Jet s(x.front().space(), 0.0);
  for (const Jet& v : x) s += v * v;
  return s;
}

// Constant holomorphic sectional curvature c in an affine chart (c > 0) or the
// ball model (c < 0):
//   g = (4/|c|) [ (1 + k r^2) |dz|^2 - k |<z, dz>|^2 ] / (1 + k r^2)^2,  k = sign(c).
class SpaceFormNode final : public MetricNode {
 public:
  SpaceFormNode(int complex_dim, double c) : complex_dim_(complex_dim), c_(c) {
    const int n = 2 * complex_dim;
    metadata_.einstein_constant = (complex_dim + 1) * c / 2.0;
    metadata_.constant_h = c;
    metadata_.kahler = true;
    metadata_.homogeneous = true;
    metadata_.symmetric = true;
    metadata_.product_of_surfaces = false;
    (void)n;
  }

  int dimension() const override { return 2 * complex_dim_; }
  bool has_complex_structure() const override { return true; }

  JetMatrix metric(std::span<const Jet> x) const override {
    const JetSpace& space = x.front().space();
    const int n = dimension();
    const double k = c_ > 0 ? 1.0 : -1.0;
    const Jet s = 1.0 + k * sum_of_squares(x);
    const Jet inv = reciprocal(s);
    const Jet factor = (4.0 / std::abs(c_)) * (inv * inv);
    // Real and imaginary parts of conj(z) . U for U = d/dx_m and d/dy_m.
    std::vector<Jet> p, q;
    p.reserve(static_cast<std::size_t>(n));
    q.reserve(static_cast<std::size_t>(n));
    for (int m = 0; m < complex_dim_; ++m) {
      const Jet& xm = x[static_cast<std::size_t>(2 * m)];
      const Jet& ym = x[static_cast<std::size_t>(2 * m + 1)];
      p.push_back(xm);
      q.push_back(-ym);
      p.push_back(ym);
      q.push_back(xm);
    }
    JetMatrix g(space, n, 0.0);
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        const auto ua = static_cast<std::size_t>(a);
        const auto ub = static_cast<std::size_t>(b);
        Jet inner = p[ua] * p[ub] + q[ua] * q[ub];
        inner *= -k;
        if (a == b) inner += s;
        g(a, b) = factor * inner;
        if (a != b) g(b, a) = g(a, b);
      }
    }
    return g;
  }

  JetMatrix complex_structure(std::span<const Jet> x) const override {
    return standard_complex_structure(x.front().space(), dimension());
  }

  bool contains(int chart, std::span<const double> x) const override {
    if (chart < 0 || chart >= chart_count()) return false;
    const double r2 = norm2(x);
    return c_ > 0 ? r2 < kAffineRadius * kAffineRadius : r2 < kBallRadius * kBallRadius;
  }

  void sample(std::mt19937_64& rng, std::span<double> out) const override {
    sample_ball(rng, c_ > 0 ? 1.5 : 0.7, out);
  }

  int chart_count() const override { return c_ > 0 ? complex_dim_ + 1 : 1; }

  std::optional<std::vector<Jet>> transition(int from, int to, std::span<const Jet> x) const override {
    if (c_ < 0 || from < 0 || to < 0 || from > complex_dim_ || to > complex_dim_) return std::nullopt;
    const JetSpace& space = x.front().space();
    // Homogeneous coordinates with Z_from = 1.
    std::vector<Jet> re, im;
    for (int j = 0, m = 0; j <= complex_dim_; ++j) {
      if (j == from) {
        re.emplace_back(space, 1.0);
        im.emplace_back(space, 0.0);
      } else {
        re.push_back(x[static_cast<std::size_t>(2 * m)]);
        im.push_back(x[static_cast<std::size_t>(2 * m + 1)]);
        ++m;
      }
    }
    const auto tb = static_cast<std::size_t>(to);
    const Jet den = re[tb] * re[tb] + im[tb] * im[tb];
    if (std::abs(den.value()) < 1e-24) return std::nullopt;
    const Jet inv = reciprocal(den);
    std::vector<Jet> out;
    for (int j = 0; j <= complex_dim_; ++j) {
      if (j == to) continue;
      const auto uj = static_cast<std::size_t>(j);
      // (a + ib) / (c + id) = ((ac + bd) + i(bc - ad)) / (c^2 + d^2)
      out.push_back((re[uj] * re[tb] + im[uj] * im[tb]) * inv);
      out.push_back((im[uj] * re[tb] - re[uj] * im[tb]) * inv);
    }
    return out;
  }

 private:
  static constexpr double kAffineRadius = 50.0;
  static constexpr double kBallRadius = 0.95;

  int complex_dim_;
  double c_;
};

// Stereographic chart: g = 4 r^2 / (1 + |u|^2)^2 delta.
class RoundSphereNode final : public MetricNode {
 public:
  RoundSphereNode(int n, double radius) : n_(n), radius_(radius) {
    metadata_.einstein_constant = (n - 1) / (radius * radius);
    metadata_.homogeneous = true;
    metadata_.symmetric = true;
    if (n == 2) {
      metadata_.kahler = true;
      metadata_.constant_h = 1.0 / (radius * radius);
    }
  }

  int dimension() const override { return n_; }
  bool has_complex_structure() const override { return n_ == 2; }

  JetMatrix metric(std::span<const Jet> x) const override {
    const JetSpace& space = x.front().space();
    const Jet inv = reciprocal(1.0 + sum_of_squares(x));
    const Jet factor = (4.0 * radius_ * radius_) * (inv * inv);
    JetMatrix g(space, n_, 0.0);
    for (int a = 0; a < n_; ++a) g(a, a) = factor;
    return g;
  }

  JetMatrix complex_structure(std::span<const Jet> x) const override {
    if (n_ != 2) return MetricNode::complex_structure(x);
    return standard_complex_structure(x.front().space(), 2);
  }

  bool contains(int chart, std::span<const double> x) const override { return chart == 0 && norm2(x) < 2500.0; }
  void sample(std::mt19937_64& rng, std::span<double> out) const override { sample_ball(rng, 1.5, out); }

 private:
  int n_;
  double radius_;
};

class FlatTorusNode final : public MetricNode {
 public:
  explicit FlatTorusNode(int n) : n_(n) {
    metadata_.einstein_constant = 0.0;
    metadata_.homogeneous = true;
    metadata_.symmetric = true;
    metadata_.flat = true;
    if (n % 2 == 0) {
      metadata_.kahler = true;
      metadata_.constant_h = 0.0;
    }
  }

  int dimension() const override { return n_; }
  bool has_complex_structure() const override { return n_ % 2 == 0; }

  JetMatrix metric(std::span<const Jet> x) const override {
    JetMatrix g(x.front().space(), n_, 0.0);
    for (int a = 0; a < n_; ++a) g(a, a) += 1.0;
    return g;
  }

  JetMatrix complex_structure(std::span<const Jet> x) const override {
    if (n_ % 2 != 0) return MetricNode::complex_structure(x);
    return standard_complex_structure(x.front().space(), n_);
  }

  bool contains(int chart, std::span<const double>) const override { return chart == 0; }

  void sample(std::mt19937_64& rng, std::span<double> out) const override {
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    for (double& v : out) v = u(rng);
  }

 private:
  int n_;
};

class ProductNode final : public MetricNode {
 public:
  ProductNode(std::shared_ptr<const MetricNode> a, std::shared_ptr<const MetricNode> b)
      : a_(std::move(a)), b_(std::move(b)) {
    const auto& ma = a_->metadata();
    const auto& mb = b_->metadata();
    if (ma.einstein_constant && mb.einstein_constant &&
        std::abs(*ma.einstein_constant - *mb.einstein_constant) < 1e-12) {
      metadata_.einstein_constant = ma.einstein_constant;
    }
    if (ma.flat && mb.flat && ma.constant_h && mb.constant_h) metadata_.constant_h = 0.0;
    metadata_.kahler = ma.kahler && mb.kahler;
    metadata_.homogeneous = ma.homogeneous && mb.homogeneous;
    metadata_.symmetric = ma.symmetric && mb.symmetric;
    metadata_.flat = ma.flat && mb.flat;
    metadata_.product_of_surfaces = a_->dimension() == 2 && b_->dimension() == 2 &&
                                    a_->has_complex_structure() && b_->has_complex_structure();
  }

  int dimension() const override { return a_->dimension() + b_->dimension(); }
  bool has_complex_structure() const override {
    return a_->has_complex_structure() && b_->has_complex_structure();
  }

  JetMatrix metric(std::span<const Jet> x) const override {
    return block(a_->metric(x.first(split())), b_->metric(x.subspan(split())), x.front().space());
  }

  JetMatrix complex_structure(std::span<const Jet> x) const override {
    return block(a_->complex_structure(x.first(split())), b_->complex_structure(x.subspan(split())),
                 x.front().space());
  }

  bool contains(int chart, std::span<const double> x) const override {
    return chart == 0 && a_->contains(0, x.first(split())) && b_->contains(0, x.subspan(split()));
  }

  void sample(std::mt19937_64& rng, std::span<double> out) const override {
    a_->sample(rng, out.first(split()));
    b_->sample(rng, out.subspan(split()));
  }

 private:
  std::size_t split() const { return static_cast<std::size_t>(a_->dimension()); }

  JetMatrix block(const JetMatrix& ga, const JetMatrix& gb, const JetSpace& space) const {
    const int na = ga.rows();
    const int n = na + gb.rows();
    JetMatrix g(space, n, 0.0);
    for (int i = 0; i < na; ++i) {
      for (int j = 0; j < na; ++j) g(i, j) = ga(i, j);
    }
    for (int i = 0; i < gb.rows(); ++i) {
      for (int j = 0; j < gb.rows(); ++j) g(na + i, na + j) = gb(i, j);
    }
    return g;
  }

  std::shared_ptr<const MetricNode> a_, b_;
};

class ScaledNode final : public MetricNode {
 public:
  ScaledNode(std::shared_ptr<const MetricNode> child, double lambda) : child_(std::move(child)), lambda_(lambda) {
    metadata_ = child_->metadata();
    const double s = 1.0 / (lambda * lambda);
    if (metadata_.einstein_constant) *metadata_.einstein_constant *= s;
    if (metadata_.constant_h) *metadata_.constant_h *= s;
  }

  int dimension() const override { return child_->dimension(); }
  bool has_complex_structure() const override { return child_->has_complex_structure(); }

  JetMatrix metric(std::span<const Jet> x) const override {
    JetMatrix g = child_->metric(x);
    for (int i = 0; i < g.rows(); ++i) {
      for (int j = 0; j < g.rows(); ++j) g(i, j) *= lambda_ * lambda_;
    }
    return g;
  }

  JetMatrix complex_structure(std::span<const Jet> x) const override { return child_->complex_structure(x); }
  bool contains(int chart, std::span<const double> x) const override { return child_->contains(chart, x); }
  void sample(std::mt19937_64& rng, std::span<double> out) const override { child_->sample(rng, out); }
  int chart_count() const override { return child_->chart_count(); }
  std::optional<std::vector<Jet>> transition(int from, int to, std::span<const Jet> x) const override {
    return child_->transition(from, to, x);
  }

 private:
  std::shared_ptr<const MetricNode> child_;
  double lambda_;
};

// g -> exp(2u) g with u(x) = A exp(1 / (|x - x0|^2 / rho^2 - 1)) inside the
// ball |x - x0| < rho and 0 outside. J is left untouched.
class ConformalNode final : public MetricNode {
 public:
  ConformalNode(std::shared_ptr<const MetricNode> child, double amplitude, double width, std::vector<double> center)
      : child_(std::move(child)), amplitude_(amplitude), width_(width), center_(std::move(center)) {
    if (amplitude_ == 0.0) {
      metadata_ = child_->metadata();
    } else {
      metadata_.product_of_surfaces = child_->metadata().product_of_surfaces;
    }
  }

  int dimension() const override { return child_->dimension(); }
  bool has_complex_structure() const override { return child_->has_complex_structure(); }

  JetMatrix metric(std::span<const Jet> x) const override {
    JetMatrix g = child_->metric(x);
    if (amplitude_ == 0.0) return g;
    const JetSpace& space = x.front().space();
    Jet d(space, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Jet dx = x[i] - center_[i];
      d += dx * dx;
    }
    d /= width_ * width_;
    if (d.value() >= 1.0) return g;  // every derivative of the bump vanishes here
    const Jet u = amplitude_ * exp(reciprocal(d - 1.0));
    const Jet factor = exp(2.0 * u);
    for (int i = 0; i < g.rows(); ++i) {
      for (int j = 0; j < g.rows(); ++j) g(i, j) = factor * g(i, j);
    }
    return g;
  }

  JetMatrix complex_structure(std::span<const Jet> x) const override { return child_->complex_structure(x); }
  bool contains(int chart, std::span<const double> x) const override { return chart == 0 && child_->contains(0, x); }

  void sample(std::mt19937_64& rng, std::span<double> out) const override {
    // Sample where the bump is active so conformal effects are visible.
    for (int attempt = 0; attempt < 1000; ++attempt) {
      sample_ball(rng, 0.8 * width_, out);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += center_[i];
      if (child_->contains(0, out)) return;
    }
    fail(ErrorCode::InvalidArgument, "conformal bump lies outside the chart");
  }

 private:
  std::shared_ptr<const MetricNode> child_;
  double amplitude_;
  double width_;
  std::vector<double> center_;
};

class BlackBoxNode final : public MetricNode {
 public:
  BlackBoxNode(int n, MetricFunction metric, std::optional<Matrix> j, double radius)
      : n_(n), metric_(std::move(metric)), j_(std::move(j)), radius_(radius) {}

  int dimension() const override { return n_; }
  bool has_complex_structure() const override { return j_.has_value(); }

  JetMatrix metric(std::span<const Jet> x) const override {
    const JetSpace& space = x.front().space();
    int order = space.order();
    for (const Jet& v : x) order = std::min(order, v.valid_order());
    std::vector<double> y0(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) y0[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)].value();

    // Taylor coefficients of every component in the black box's own variables.
    const JetSpace& own = JetSpace::get(n_, order);
    std::vector<std::vector<double>> taylor(static_cast<std::size_t>(n_ * n_));
    for (int a = 0; a < n_; ++a) {
      for (int b = a; b < n_; ++b) {
        taylor[static_cast<std::size_t>(a * n_ + b)] = finite_difference_taylor(
            [&](std::span<const double> y) { return metric_(y)(a, b); }, y0, order);
      }
    }
    // Compose with the nilpotent parts of the inputs.
    std::vector<Jet> h;
    for (const Jet& v : x) h.push_back(v - v.value());
    std::vector<Jet> monomials;
    monomials.reserve(own.size());
    for (std::size_t k = 0; k < own.size(); ++k) {
      Jet m(space, 1.0);
      const auto e = own.exponent(k);
      for (int i = 0; i < n_; ++i) {
        for (int p = 0; p < e[static_cast<std::size_t>(i)]; ++p) m = m * h[static_cast<std::size_t>(i)];
      }
      monomials.push_back(std::move(m));
    }
    JetMatrix g(space, n_, 0.0);
    for (int a = 0; a < n_; ++a) {
      for (int b = a; b < n_; ++b) {
        const auto& t = taylor[static_cast<std::size_t>(a * n_ + b)];
        Jet v(space, 0.0);
        for (std::size_t k = 0; k < own.size(); ++k) v += t[k] * monomials[k];
        g(a, b) = v;
        g(b, a) = v;
      }
    }
    return g;
  }

  JetMatrix complex_structure(std::span<const Jet> x) const override {
    if (!j_) return MetricNode::complex_structure(x);
    JetMatrix j(x.front().space(), n_, 0.0);
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b) j(a, b) += (*j_)(a, b);
    }
    return j;
  }

  bool contains(int chart, std::span<const double> x) const override {
    return chart == 0 && norm2(x) < radius_ * radius_;
  }
  void sample(std::mt19937_64& rng, std::span<double> out) const override { sample_ball(rng, 0.5 * radius_, out); }

 private:
  int n_;
  MetricFunction metric_;
  std::optional<Matrix> j_;
  double radius_;
};

std::shared_ptr<const MetricNode> build_node(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::FubiniStudy:
      if (spec.complex_dim < 1 || 2 * spec.complex_dim > kMaxDimension) {
        fail(ErrorCode::InvalidArgument, "fubini_study needs 1 <= N <= 4");
      }
      if (!(spec.curvature > 0.0)) fail(ErrorCode::InvalidArgument, "fubini_study needs c > 0");
      return std::make_shared<SpaceFormNode>(spec.complex_dim, spec.curvature);
    case ModelKind::ComplexHyperbolic:
      if (spec.complex_dim < 1 || 2 * spec.complex_dim > kMaxDimension) {
        fail(ErrorCode::InvalidArgument, "complex_hyperbolic needs 1 <= N <= 4");
      }
      if (!(spec.curvature < 0.0)) fail(ErrorCode::InvalidArgument, "complex_hyperbolic needs c < 0");
      return std::make_shared<SpaceFormNode>(spec.complex_dim, spec.curvature);
    case ModelKind::RoundSphere:
      if (spec.real_dim < 2 || spec.real_dim > kMaxDimension) {
        fail(ErrorCode::InvalidArgument, "round_sphere needs 2 <= n <= 8");
      }
      if (!(spec.radius > 0.0)) fail(ErrorCode::InvalidArgument, "round_sphere needs radius > 0");
      return std::make_shared<RoundSphereNode>(spec.real_dim, spec.radius);
    case ModelKind::FlatTorus:
      if (spec.real_dim < 1 || spec.real_dim > kMaxDimension) {
        fail(ErrorCode::InvalidArgument, "flat_torus needs 1 <= n <= 8");
      }
      return std::make_shared<FlatTorusNode>(spec.real_dim);
    case ModelKind::Product: {
      if (spec.children.size() < 2) fail(ErrorCode::InvalidArgument, "product needs at least two children");
      auto node = build_node(spec.children[0]);
      for (std::size_t i = 1; i < spec.children.size(); ++i) {
        node = std::make_shared<ProductNode>(node, build_node(spec.children[i]));
      }
      if (node->dimension() > kMaxDimension) fail(ErrorCode::InvalidArgument, "product dimension exceeds 8");
      return node;
    }
    case ModelKind::Scaled:
      if (spec.children.size() != 1) fail(ErrorCode::InvalidArgument, "scaled needs exactly one child");
      if (!(spec.scale > 0.0)) fail(ErrorCode::InvalidArgument, "scaled needs lambda > 0");
      return std::make_shared<ScaledNode>(build_node(spec.children[0]), spec.scale);
    case ModelKind::Conformal: {
      if (spec.children.size() != 1) fail(ErrorCode::InvalidArgument, "conformal needs exactly one child");
      if (!(spec.width > 0.0)) fail(ErrorCode::InvalidArgument, "conformal needs width > 0");
      auto child = build_node(spec.children[0]);
      std::vector<double> center = spec.center;
      if (center.empty()) center.assign(static_cast<std::size_t>(child->dimension()), 0.0);
      if (center.size() != static_cast<std::size_t>(child->dimension())) {
        fail(ErrorCode::InvalidArgument, "conformal center has the wrong dimension");
      }
      // The bump's support must stay inside the chart.
      std::mt19937_64 probe(7);
      std::vector<double> x(center.size());
      for (int k = 0; k < 64; ++k) {
        std::normal_distribution<double> normal(0.0, 1.0);
        double len = 0.0;
        for (double& v : x) {
          v = normal(probe);
          len += v * v;
        }
        len = std::sqrt(len);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = center[i] + spec.width * x[i] / len;
        if (!child->contains(0, x)) fail(ErrorCode::InvalidArgument, "conformal bump exceeds chart validity");
      }
      return std::make_shared<ConformalNode>(child, spec.amplitude, spec.width, std::move(center));
    }
    case ModelKind::BlackBox:
      fail(ErrorCode::InvalidArgument, "black-box models are built with make_black_box_model");
  }
  fail(ErrorCode::InvalidArgument, "unknown model kind");
}

std::vector<Jet> seeded_variables(const ChartPoint& p, int order) {
  const JetSpace& space = JetSpace::get(static_cast<int>(p.coords.size()), order);
  std::vector<Jet> x;
  x.reserve(p.coords.size());
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    x.push_back(Jet::variable(space, static_cast<int>(i), p.coords[i]));
  }
  return x;
}

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::RoundSphere: return "round_sphere";
    case ModelKind::FlatTorus: return "flat_torus";
    case ModelKind::FubiniStudy: return "fubini_study";
    case ModelKind::ComplexHyperbolic: return "complex_hyperbolic";
    case ModelKind::Product: return "product";
    case ModelKind::Scaled: return "scaled";
    case ModelKind::Conformal: return "conformal";
    case ModelKind::BlackBox: return "black_box";
  }
  return "unknown";
}

std::string describe(const ModelSpec& spec) {
  if (!spec.name.empty()) return spec.name;
  std::string out = model_kind_name(spec.kind);
  switch (spec.kind) {
    case ModelKind::FubiniStudy:
    case ModelKind::ComplexHyperbolic:
      return out + "(N=" + std::to_string(spec.complex_dim) + ",c=" + format_number(spec.curvature) + ")";
    case ModelKind::RoundSphere:
      return out + "(n=" + std::to_string(spec.real_dim) + ",r=" + format_number(spec.radius) + ")";
    case ModelKind::FlatTorus:
      return out + "(n=" + std::to_string(spec.real_dim) + ")";
    case ModelKind::Scaled:
      return out + "(" + format_number(spec.scale) + "," + describe(spec.children.at(0)) + ")";
    case ModelKind::Conformal:
      return out + "(A=" + format_number(spec.amplitude) + ",rho=" + format_number(spec.width) + "," +
             describe(spec.children.at(0)) + ")";
    case ModelKind::Product: {
      out += "(";
      for (std::size_t i = 0; i < spec.children.size(); ++i) {
        if (i) out += ",";
        out += describe(spec.children[i]);
      }
      return out + ")";
    }
    case ModelKind::BlackBox:
      return out;
  }
  return out;
}

ModelManifold::ModelManifold(std::shared_ptr<const detail::MetricNode> node, ModelSpec spec, std::string name)
    : node_(std::move(node)), spec_(std::move(spec)), name_(std::move(name)) {}

int ModelManifold::dimension() const { return node_->dimension(); }
bool ModelManifold::has_complex_structure() const { return node_->has_complex_structure(); }
const ModelMetadata& ModelManifold::metadata() const { return node_->metadata(); }
int ModelManifold::chart_count() const { return node_->chart_count(); }

bool ModelManifold::contains(const ChartPoint& p) const {
  return p.coords.size() == static_cast<std::size_t>(dimension()) && node_->contains(p.chart_id, p.coords);
}

void ModelManifold::require_contains(const ChartPoint& p) const {
  if (p.coords.size() != static_cast<std::size_t>(dimension())) {
    fail(ErrorCode::InvalidArgument, "point has " + std::to_string(p.coords.size()) + " coordinates, model needs " +
                                         std::to_string(dimension()));
  }
  if (!node_->contains(p.chart_id, p.coords)) fail(ErrorCode::OutOfChart, "point outside chart validity");
}

JetMatrix ModelManifold::metric(const ChartPoint& p, int order) const {
  require_contains(p);
  const auto x = seeded_variables(p, order);
  return node_->metric(x);
}

std::optional<JetMatrix> ModelManifold::complex_structure(const ChartPoint& p, int order) const {
  require_contains(p);
  if (!node_->has_complex_structure()) return std::nullopt;
  const auto x = seeded_variables(p, order);
  return node_->complex_structure(x);
}

Matrix ModelManifold::metric_value(const ChartPoint& p) const {
  const JetMatrix g = metric(p, 0);
  const int n = dimension();
  Matrix out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = g(i, j).value();
  }
  return out;
}

std::optional<Matrix> ModelManifold::complex_structure_value(const ChartPoint& p) const {
  const auto j = complex_structure(p, 0);
  if (!j) return std::nullopt;
  const int n = dimension();
  Matrix out(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) out(a, b) = (*j)(a, b).value();
  }
  return out;
}

ChartPoint ModelManifold::origin() const {
  ChartPoint p{0, std::vector<double>(static_cast<std::size_t>(dimension()), 0.0)};
  return p;
}

ChartPoint ModelManifold::sample_point(std::mt19937_64& rng) const {
  ChartPoint p = origin();
  node_->sample(rng, p.coords);
  return p;
}

std::optional<ModelManifold::Transition> ModelManifold::to_chart(const ChartPoint& p, int target) const {
  require_contains(p);
  const auto x = seeded_variables(p, 1);
  const auto mapped = node_->transition(p.chart_id, target, x);
  if (!mapped) return std::nullopt;
  const int n = dimension();
  Transition t{ChartPoint{target, std::vector<double>(static_cast<std::size_t>(n))}, Matrix(n, n)};
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    const Jet& w = (*mapped)[static_cast<std::size_t>(i)];
    t.point.coords[static_cast<std::size_t>(i)] = w.value();
    for (int j = 0; j < n; ++j) {
      e[static_cast<std::size_t>(j)] = 1;
      t.jacobian(i, j) = w.derivative(e);
      e[static_cast<std::size_t>(j)] = 0;
    }
  }
  if (!node_->contains(target, t.point.coords)) return std::nullopt;
  return t;
}

ModelManifold make_model(const ModelSpec& spec) {
  ModelManifold model(build_node(spec), spec, describe(spec));
  verify_model_metadata(model);
  return model;
}

ModelManifold make_black_box_model(int dimension, MetricFunction metric, std::optional<Matrix> complex_structure,
                                   double validity_radius, std::string name) {
  if (dimension < 1 || dimension > kMaxDimension) fail(ErrorCode::InvalidArgument, "black-box dimension out of range");
  if (!metric) fail(ErrorCode::InvalidArgument, "black-box metric function is empty");
  if (complex_structure && (complex_structure->rows() != dimension || complex_structure->cols() != dimension)) {
    fail(ErrorCode::InvalidArgument, "black-box complex structure has the wrong shape");
  }
  ModelSpec spec;
  spec.kind = ModelKind::BlackBox;
  spec.real_dim = dimension;
  spec.name = name;
  auto node = std::make_shared<BlackBoxNode>(dimension, std::move(metric), std::move(complex_structure),
                                             validity_radius);
  return ModelManifold(std::move(node), std::move(spec), name.empty() ? "black_box" : std::move(name));
}

ModelManifold normalize(const ModelManifold& model) {
  if (model.metadata().flat) fail(ErrorCode::FlatModel, "a flat model cannot be normalized");
  const double m = max_abs_sec(model);
  if (m < 1e-12) fail(ErrorCode::FlatModel, "model is flat to working precision");
  if (model.spec().kind == ModelKind::BlackBox) {
    fail(ErrorCode::InvalidArgument, "black-box models cannot be rescaled");
  }
  ModelSpec spec;
  spec.kind = ModelKind::Scaled;
  spec.scale = std::sqrt(m);
  spec.children.push_back(model.spec());
  spec.children.back().name.clear();
  spec.name = "normalized(" + model.name() + ")";
  return make_model(spec);
}

namespace {

ModelSpec fs(int n, double c) {
  ModelSpec s;
  s.kind = ModelKind::FubiniStudy;
  s.complex_dim = n;
  s.curvature = c;
  return s;
}

ModelSpec ch(int n, double c) {
  ModelSpec s;
  s.kind = ModelKind::ComplexHyperbolic;
  s.complex_dim = n;
  s.curvature = c;
  return s;
}

ModelSpec sphere(int n) {
  ModelSpec s;
  s.kind = ModelKind::RoundSphere;
  s.real_dim = n;
  return s;
}

ModelSpec torus(int n) {
  ModelSpec s;
  s.kind = ModelKind::FlatTorus;
  s.real_dim = n;
  return s;
}

ModelSpec product(ModelSpec a, ModelSpec b) {
  ModelSpec s;
  s.kind = ModelKind::Product;
  s.children = {std::move(a), std::move(b)};
  return s;
}

ModelSpec conformal(ModelSpec child) {
  ModelSpec s;
  s.kind = ModelKind::Conformal;
  s.children = {std::move(child)};
  return s;
}

const std::vector<std::pair<std::string, ModelSpec>>& catalog() {
  static const std::vector<std::pair<std::string, ModelSpec>> entries = [] {
    std::vector<std::pair<std::string, ModelSpec>> e = {
        {"s2", sphere(2)},
        {"s4", sphere(4)},
        {"torus2", torus(2)},
        {"torus4", torus(4)},
        {"cp1", fs(1, 1.0)},
        {"cp2", fs(2, 1.0)},
        {"cp3", fs(3, 1.0)},
        {"cp2_c2", fs(2, 2.0)},
        {"ch1", ch(1, -1.0)},
        {"ch2", ch(2, -1.0)},
        {"cp1xcp1", product(fs(1, 1.0), fs(1, 1.0))},
        {"cp1xcp1_c2", product(fs(1, 2.0), fs(1, 2.0))},
        {"ch1xch1", product(ch(1, -1.0), ch(1, -1.0))},
        {"conformal_cp1xcp1", conformal(product(fs(1, 1.0), fs(1, 1.0)))},
    };
    for (auto& [name, spec] : e) spec.name = name;
    return e;
  }();
  return entries;
}

}  // namespace

ModelSpec catalog_spec(std::string_view name) {
  for (const auto& [key, spec] : catalog()) {
    if (key == name) return spec;
  }
  fail(ErrorCode::UnknownModel, "unknown catalog model '" + std::string(name) + "'");
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& entry : catalog()) out.push_back(entry.first);
  return out;
}

ModelManifold make_catalog_model(std::string_view name) { return make_model(catalog_spec(name)); }

// ---------------------------------------------------------------------------

namespace {

// Central-difference weights for the a-th derivative: offsets (a/2 - k) h.
double central_derivative(const std::function<double(std::span<const double>)>& f, std::span<const double> x,
                          std::span<const int> alpha, double h) {
  const std::size_t n = x.size();
  std::vector<int> k(n, 0);
  std::vector<double> y(x.begin(), x.end());
  double total = 0.0;
  while (true) {
    double weight = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int a = alpha[i];
      if (a == 0) {
        y[i] = x[i];
        continue;
      }
      double binom = 1.0;
      for (int j = 1; j <= k[i]; ++j) binom = binom * (a - j + 1) / j;
      weight *= ((k[i] % 2) ? -1.0 : 1.0) * binom / std::pow(h, a);
      y[i] = x[i] + (0.5 * a - k[i]) * h;
    }
    total += weight * f(y);
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (k[i] < alpha[i]) {
        ++k[i];
        break;
      }
      k[i] = 0;
    }
    if (i == n) break;
  }
  return total;
}

}  // namespace

std::vector<double> finite_difference_taylor(const std::function<double(std::span<const double>)>& f,
                                             std::span<const double> x, int order, double step) {
  const JetSpace& space = JetSpace::get(static_cast<int>(x.size()), order);
  std::vector<double> out(space.size());
  std::vector<int> alpha(x.size());
  for (std::size_t k = 0; k < space.size(); ++k) {
    const auto e = space.exponent(k);
    double factorial = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      alpha[i] = e[i];
      for (int j = 2; j <= alpha[i]; ++j) factorial *= j;
    }
    const double coarse = central_derivative(f, x, alpha, step);
    const double fine = central_derivative(f, x, alpha, 0.5 * step);
    out[k] = (4.0 * fine - coarse) / 3.0 / factorial;
  }
  return out;
}

}  // namespace kverify
