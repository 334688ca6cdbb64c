#include "finsler/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace finsler {
namespace {

constexpr int kExponentBits = 4;
constexpr int kMaxVariables = 64 / kExponentBits;

// Appends every exponent vector over `vars` variables with total degree <= order.
void enumerate(int vars, int order, std::vector<std::vector<std::uint8_t>>& out) {
  std::vector<std::uint8_t> cur(vars, 0);
  for (int deg = 0; deg <= order; ++deg) {
    // all compositions of deg into `vars` parts, lexicographically descending
    std::fill(cur.begin(), cur.end(), 0);
    if (vars == 0) {
      if (deg == 0) out.push_back(cur);
      continue;
    }
    cur[0] = static_cast<std::uint8_t>(deg);
    while (true) {
      out.push_back(cur);
      // next composition
      int i = vars - 2;
      while (i >= 0 && cur[i] == 0) --i;
      if (i < 0) break;
      --cur[i];
      const int tail = cur[vars - 1] + 1;
      cur[vars - 1] = 0;
      cur[i + 1] = static_cast<std::uint8_t>(tail);
    }
  }
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

JetSpace::JetSpace(const JetShape& shape) : shape_(shape) {
  const int nv = variables();
  if (shape.x_vars < 0 || shape.y_vars < 0 || shape.x_order < 0 || shape.y_order < 0)
    throw std::invalid_argument("JetSpace: negative shape");
  if (nv > kMaxVariables) throw std::invalid_argument("JetSpace: too many variables");
  if (max_degree() >= (1 << kExponentBits))
    throw std::invalid_argument("JetSpace: order too large");

  std::vector<std::vector<std::uint8_t>> xs, ys;
  enumerate(shape.x_vars, shape.x_order, xs);
  enumerate(shape.y_vars, shape.y_order, ys);

  // graded by total degree so that index 0 is the constant term
  struct Mono {
    std::vector<std::uint8_t> e;
    int deg;
  };
  std::vector<Mono> monos;
  for (const auto& xe : xs)
    for (const auto& ye : ys) {
      Mono m;
      m.e = xe;
      m.e.insert(m.e.end(), ye.begin(), ye.end());
      m.deg = std::accumulate(m.e.begin(), m.e.end(), 0);
      monos.push_back(std::move(m));
    }
  std::stable_sort(monos.begin(), monos.end(),
                   [](const Mono& a, const Mono& b) { return a.deg < b.deg; });

  const int n = static_cast<int>(monos.size());
  exps_.reserve(static_cast<std::size_t>(n) * nv);
  for (const auto& m : monos) {
    exps_.insert(exps_.end(), m.e.begin(), m.e.end());
    degree_.push_back(m.deg);
    double w = 1.0;
    for (auto k : m.e) w *= factorial(k);
    weight_.push_back(w);
  }

  std::vector<std::uint64_t> keys(n);
  for (int i = 0; i < n; ++i) keys[i] = key_of(i);
  sorted_index_.resize(n);
  std::iota(sorted_index_.begin(), sorted_index_.end(), 0);
  std::sort(sorted_index_.begin(), sorted_index_.end(),
            [&](int a, int b) { return keys[a] < keys[b]; });
  keys_.resize(n);
  for (int i = 0; i < n; ++i) keys_[i] = keys[sorted_index_[i]];

  auto lookup = [&](std::uint64_t key) -> int {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key) return -1;
    return sorted_index_[it - keys_.begin()];
  };

  // x-degree / y-degree of each monomial, for the product box test
  std::vector<int> xdeg(n), ydeg(n);
  for (int i = 0; i < n; ++i) {
    auto e = exponents(i);
    xdeg[i] = std::accumulate(e.begin(), e.begin() + shape.x_vars, 0);
    ydeg[i] = degree_[i] - xdeg[i];
  }

  product_offset_.assign(n + 1, 0);
  for (int a = 0; a < n; ++a) {
    product_offset_[a] = static_cast<int>(products_.size());
    for (int b = 0; b < n; ++b) {
      if (xdeg[a] + xdeg[b] > shape.x_order || ydeg[a] + ydeg[b] > shape.y_order) continue;
      const int c = lookup(keys[a] + keys[b]);
      products_.push_back({b, c});
    }
  }
  product_offset_[n] = static_cast<int>(products_.size());

  deriv_.resize(nv);
  for (int v = 0; v < nv; ++v) {
    const std::uint64_t unit = std::uint64_t{1} << (kExponentBits * v);
    for (int i = 0; i < n; ++i) {
      const int k = exponents(i)[v];
      if (k == 0) continue;
      deriv_[v].push_back({i, lookup(keys[i] - unit), static_cast<double>(k)});
    }
  }
}

std::uint64_t JetSpace::key_of(int index) const {
  std::uint64_t key = 0;
  auto e = exponents(index);
  for (int v = 0; v < variables(); ++v)
    key |= static_cast<std::uint64_t>(e[v]) << (kExponentBits * v);
  return key;
}

int JetSpace::index_of(std::span<const int> exps) const {
  if (static_cast<int>(exps.size()) != variables()) return -1;
  int xd = 0, yd = 0;
  std::uint64_t key = 0;
  for (int v = 0; v < variables(); ++v) {
    if (exps[v] < 0) return -1;
    (v < shape_.x_vars ? xd : yd) += exps[v];
    if (exps[v] >= (1 << kExponentBits)) return -1;
    key |= static_cast<std::uint64_t>(exps[v]) << (kExponentBits * v);
  }
  if (xd > shape_.x_order || yd > shape_.y_order) return -1;
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return -1;
  return sorted_index_[it - keys_.begin()];
}

std::shared_ptr<const JetSpace> JetSpace::get(const JetShape& shape) {
  static std::mutex mutex;
  static std::map<JetShape, std::shared_ptr<const JetSpace>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[shape];
  if (!slot) slot = std::make_shared<const JetSpace>(shape);
  return slot;
}

std::shared_ptr<const JetSpace> JetSpace::get(int vars, int order) {
  return get(JetShape{vars, order, 0, 0});
}

// ---------------------------------------------------------------------------

Jet::Jet(JetSpacePtr space, double value) : space_(std::move(space)) {
  c_.assign(space_->size(), 0.0);
  c_[0] = value;
}

Jet Jet::variable(JetSpacePtr space, int var, double value) {
  Jet j(space, value);
  std::vector<int> e(space->variables(), 0);
  e[var] = 1;
  const int idx = space->index_of(e);
  if (idx >= 0) j.c_[idx] = 1.0;
  return j;
}

double Jet::partial(std::span<const int> exps) const {
  const int idx = space_->index_of(exps);
  if (idx < 0) throw std::out_of_range("Jet::partial: monomial truncated");
  return c_[idx] * space_->factorial_weight(idx);
}

double Jet::partial_vars(std::initializer_list<int> vars) const {
  std::vector<int> e(space_->variables(), 0);
  for (int v : vars) ++e[v];
  return partial(e);
}

Jet Jet::derivative(int var) const {
  Jet out(space_, 0.0);
  for (const auto& t : space_->derivative_terms(var)) out.c_[t.dst] += t.factor * c_[t.src];
  return out;
}

Jet Jet::project(const JetSpacePtr& target) const {
  if (target->variables() != space_->variables())
    throw std::invalid_argument("Jet::project: variable count mismatch");
  Jet out(target, 0.0);
  std::vector<int> e(target->variables());
  for (int i = 0; i < target->size(); ++i) {
    auto te = target->exponents(i);
    std::copy(te.begin(), te.end(), e.begin());
    const int src = space_->index_of(e);
    if (src < 0) throw std::invalid_argument("Jet::project: target is not a sub-space");
    out.c_[i] = c_[src];
  }
  return out;
}

Jet& Jet::operator+=(const Jet& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}
Jet& Jet::operator-=(const Jet& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}
Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }
Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }
Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}
Jet& Jet::operator-=(double s) {
  c_[0] -= s;
  return *this;
}
Jet& Jet::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}
Jet& Jet::operator/=(double s) {
  for (auto& v : c_) v /= s;
  return *this;
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (auto& v : out.c_) v = -v;
  return out;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.space_ != b.space_) throw std::invalid_argument("Jet: mixing spaces");
  Jet out(a.space_, 0.0);
  const int n = a.space_->size();
  for (int i = 0; i < n; ++i) {
    const double ai = a.c_[i];
    if (ai == 0.0) continue;
    for (const auto& p : a.space_->products_of(i)) out.c_[p.c] += ai * b.c_[p.b];
  }
  return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet operator/(double s, const Jet& a) { return reciprocal(a) * s; }

Jet compose(const Jet& a, std::span<const double> taylor) {
  const int k_max = std::min<int>(a.space_->max_degree(), static_cast<int>(taylor.size()) - 1);
  Jet h = a;
  h.c_[0] = 0.0;
  Jet out(a.space_, taylor[k_max]);
  for (int k = k_max - 1; k >= 0; --k) {
    out = out * h;
    out.c_[0] += taylor[k];
  }
  return out;
}

Jet pow(const Jet& a, double p) {
  const double a0 = a.value();
  const int K = a.space()->max_degree();
  std::vector<double> t(K + 1);
  t[0] = std::pow(a0, p);
  for (int k = 1; k <= K; ++k) t[k] = t[k - 1] * (p - (k - 1)) / (k * a0);
  return compose(a, t);
}

Jet sqrt(const Jet& a) { return pow(a, 0.5); }

Jet reciprocal(const Jet& a) { return pow(a, -1.0); }

Jet exp(const Jet& a) {
  const int K = a.space()->max_degree();
  std::vector<double> t(K + 1);
  t[0] = std::exp(a.value());
  for (int k = 1; k <= K; ++k) t[k] = t[k - 1] / k;
  return compose(a, t);
}

Jet log(const Jet& a) {
  const double a0 = a.value();
  const int K = a.space()->max_degree();
  std::vector<double> t(K + 1);
  t[0] = std::log(a0);
  double pw = 1.0;
  for (int k = 1; k <= K; ++k) {
    pw *= a0;
    t[k] = ((k % 2 == 1) ? 1.0 : -1.0) / (k * pw);
  }
  return compose(a, t);
}

std::vector<Jet> solve(std::vector<Jet> a, std::vector<Jet> b, int n, int m) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col].value()) > std::abs(a[piv * n + col].value())) piv = r;
    if (a[piv * n + col].value() == 0.0) throw std::domain_error("solve: singular matrix");
    if (piv != col) {
      for (int k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
      for (int k = 0; k < m; ++k) std::swap(b[col * m + k], b[piv * m + k]);
    }
    const Jet inv = reciprocal(a[col * n + col]);
    for (int r = col + 1; r < n; ++r) {
      const Jet f = a[r * n + col] * inv;
      for (int k = col + 1; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
      for (int k = 0; k < m; ++k) b[r * m + k] -= f * b[col * m + k];
    }
  }
  for (int row = n - 1; row >= 0; --row) {
    const Jet inv = reciprocal(a[row * n + row]);
    for (int k = 0; k < m; ++k) {
      Jet acc = b[row * m + k];
      for (int c = row + 1; c < n; ++c) acc -= a[row * n + c] * b[c * m + k];
      b[row * m + k] = acc * inv;
    }
  }
  return b;
}

}  // namespace finsler
