#pragma once

// Truncated multivariate Taylor polynomials ("jets").
//
// A jet stores the Taylor coefficients c_α = ∂^α f(0) / α! of a function of
// the perturbation variables, truncated to a box of degrees: variables are
// split into an x-group and a y-group, each with its own maximum degree.
// Arithmetic on jets is exact up to the truncation, so composing the closed
// form of F(x, y) on jets yields exact mixed partials of any order inside the
// box.  A single group (y-group empty) gives the usual total-order jet.

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace finsler {

struct JetShape {
  int x_vars = 0;
  int x_order = 0;
  int y_vars = 0;
  int y_order = 0;

  auto operator<=>(const JetShape&) const = default;
};

class JetSpace {
 public:
  struct Product {
    int b;
    int c;
  };
  struct DerivTerm {
    int src;
    int dst;
    double factor;
  };

  /// Shared, cached space for the given shape.  Thread safe.
  static std::shared_ptr<const JetSpace> get(const JetShape& shape);
  /// Single group of `vars` variables truncated at total degree `order`.
  static std::shared_ptr<const JetSpace> get(int vars, int order);

  const JetShape& shape() const { return shape_; }
  int variables() const { return shape_.x_vars + shape_.y_vars; }
  int size() const { return static_cast<int>(degree_.size()); }
  /// Largest total degree of any monomial; nilpotent parts vanish beyond it.
  int max_degree() const { return shape_.x_order + shape_.y_order; }

  std::span<const std::uint8_t> exponents(int index) const {
    return {exps_.data() + static_cast<std::size_t>(index) * variables(),
            static_cast<std::size_t>(variables())};
  }
  int degree(int index) const { return degree_[index]; }
  /// Index of the monomial with exponents `exps`, or -1 when it is truncated away.
  int index_of(std::span<const int> exps) const;
  /// α! for monomial `index`.
  double factorial_weight(int index) const { return weight_[index]; }

  std::span<const Product> products_of(int a) const {
    return {products_.data() + product_offset_[a],
            static_cast<std::size_t>(product_offset_[a + 1] - product_offset_[a])};
  }
  const std::vector<DerivTerm>& derivative_terms(int var) const { return deriv_[var]; }

  explicit JetSpace(const JetShape& shape);

 private:
  std::uint64_t key_of(int index) const;

  JetShape shape_;
  std::vector<std::uint8_t> exps_;
  std::vector<int> degree_;
  std::vector<double> weight_;
  std::vector<std::uint64_t> keys_;  // sorted order mirrors `sorted_index_`
  std::vector<int> sorted_index_;
  std::vector<int> product_offset_;
  std::vector<Product> products_;
  std::vector<std::vector<DerivTerm>> deriv_;
};

using JetSpacePtr = std::shared_ptr<const JetSpace>;

class Jet {
 public:
  Jet() = default;
  Jet(JetSpacePtr space, double value);

  /// The independent variable `var` expanded about `value`.
  static Jet variable(JetSpacePtr space, int var, double value);

  const JetSpacePtr& space() const { return space_; }
  double value() const { return c_.empty() ? 0.0 : c_[0]; }
  std::span<const double> coefficients() const { return c_; }
  double coeff(int index) const { return c_[index]; }

  /// ∂^α f at the expansion point, for exponent vector α.
  double partial(std::span<const int> exps) const;
  /// Convenience: partial derivative w.r.t. the listed variables (repeats allowed).
  double partial_vars(std::initializer_list<int> vars) const;

  /// ∂f/∂var as a jet in the same space.  Its top-degree layer is truncated,
  /// so it is exact one degree lower than `this` in that variable's group.
  Jet derivative(int var) const;
  /// Restriction to a smaller space whose monomials are a subset of ours.
  Jet project(const JetSpacePtr& target) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);
  Jet& operator/=(double s);

  Jet operator-() const;

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }
  friend Jet operator/(double s, const Jet& a);

  /// f(a) for a scalar function given its Taylor coefficients about a.value():
  /// taylor[k] = f^(k)(a0) / k!, k = 0..max_degree.
  friend Jet compose(const Jet& a, std::span<const double> taylor);

 private:
  JetSpacePtr space_;
  std::vector<double> c_;
};

Jet pow(const Jet& a, double p);
Jet sqrt(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet reciprocal(const Jet& a);

/// Solves A·X = B for square A with jet entries (Gaussian elimination with
/// partial pivoting on the constant terms).  A is row-major n×n, B is n×m.
std::vector<Jet> solve(std::vector<Jet> a, std::vector<Jet> b, int n, int m);

}  // namespace finsler
