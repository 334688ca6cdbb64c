#include "finsler/jet_geometry.hpp"

#include <cmath>
#include <sstream>

#include "finsler/error.hpp"

namespace finsler {
namespace {

void require_domain(const PhiModel& m, const Invariants& inv) {
  if (!m.in_domain(inv.u, inv.s, inv.v, inv.t)) {
    std::ostringstream msg;
    msg << "point (u,s,v,t) = (" << inv.u << ", " << inv.s << ", " << inv.v << ", " << inv.t
        << ") outside the domain of " << m.name();
    throw Error(ErrorCode::OutOfDomain, msg.str());
  }
}

}  // namespace

double finsler_value(const PhiModel& m, const EvalPoint& p) {
  const Invariants inv = compute_invariants(p);
  require_domain(m, inv);
  return inv.r * m(inv.u, inv.s, inv.v, inv.t);
}

FinslerExpansion expand_finsler(const PhiModel& m, const EvalPoint& p, int x_order, int y_order) {
  const Invariants inv = compute_invariants(p);
  require_domain(m, inv);
  const int n = p.dim();
  FinslerExpansion fx;
  fx.n = n;
  fx.space = JetSpace::get(JetShape{n, x_order, n, y_order});
  const auto& S = fx.space;

  Jet r2(S, 0.0), u(S, 0.0), xy(S, 0.0), v(S, 0.0), ay(S, 0.0);
  for (int i = 0; i < n; ++i) {
    const Jet X = Jet::variable(S, fx.xv(i), p.x[i]);
    const Jet Y = Jet::variable(S, fx.yv(i), p.y[i]);
    r2 += Y * Y;
    u += X * X;
    xy += X * Y;
    v += p.a[i] * X;
    ay += p.a[i] * Y;
  }
  const Jet r = sqrt(r2);
  const Jet inv_r = reciprocal(r);
  fx.F = r * m(u, xy * inv_r, v, ay * inv_r);
  fx.F2 = fx.F * fx.F;
  return fx;
}

std::vector<Jet> spray_jets(const FinslerExpansion& fx, const EvalPoint& p) {
  const JetShape shape = fx.space->shape();
  if (shape.x_order < 1 || shape.y_order < 2)
    throw std::invalid_argument("spray_jets: expansion too shallow");
  const int n = fx.n;
  auto T = JetSpace::get(JetShape{n, shape.x_order - 1, n, shape.y_order - 2});

  std::vector<Jet> g(n * n), rhs(n);
  std::vector<Jet> dx(n), dy(n);
  for (int i = 0; i < n; ++i) {
    dx[i] = fx.F2.derivative(fx.xv(i));
    dy[i] = fx.F2.derivative(fx.yv(i));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      g[i * n + j] = (0.5 * dy[i].derivative(fx.yv(j))).project(T);
      g[j * n + i] = g[i * n + j];
    }
  for (int l = 0; l < n; ++l) {
    Jet acc = -dx[l].project(T);
    for (int k = 0; k < n; ++k)
      acc += dx[k].derivative(fx.yv(l)).project(T) * Jet::variable(T, fx.yv(k), p.y[k]);
    rhs[l] = 0.25 * acc;
  }
  try {
    return solve(std::move(g), std::move(rhs), n, 1);
  } catch (const std::domain_error&) {
    throw Error(ErrorCode::SingularMetric, "fundamental tensor is singular");
  }
}

LandsbergBundle landsberg_bundle(const PhiModel& m, const EvalPoint& p, bool derivatives) {
  const int n = p.dim();
  const FinslerExpansion fx =
      derivatives ? expand_finsler(m, p, 2, 6) : expand_finsler(m, p, 1, 5);
  const std::vector<Jet> G = spray_jets(fx, p);
  const JetShape gs = G.front().space()->shape();
  auto W = JetSpace::get(JetShape{n, gs.x_order, n, gs.y_order - 3});

  const Jet F2 = fx.F2.project(W);
  const Jet F = sqrt(F2);
  const Jet half_inv_F = 0.5 * reciprocal(F);
  std::vector<Jet> Fy(n);
  std::vector<Jet> dyF2(n);
  for (int i = 0; i < n; ++i) {
    dyF2[i] = fx.F2.derivative(fx.yv(i));
    Fy[i] = dyF2[i].project(W) * half_inv_F;
  }

  std::vector<Jet> g(n * n), id(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      g[i * n + j] = (0.5 * dyF2[i].derivative(fx.yv(j))).project(W);
      id[i * n + j] = Jet(W, i == j ? 1.0 : 0.0);
    }
  std::vector<Jet> ginv;
  try {
    ginv = solve(g, id, n, n);
  } catch (const std::domain_error&) {
    throw Error(ErrorCode::SingularMetric, "fundamental tensor is singular");
  }

  // ∂³G^l/∂y^i∂y^j∂y^k for i ≤ j ≤ k
  auto tri = [n](int i, int j, int k) { return (i * n + j) * n + k; };
  std::vector<Jet> L(n * n * n);
  {
    std::vector<std::vector<Jet>> d1(n, std::vector<Jet>(n));
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i) d1[l][i] = G[l].derivative(fx.yv(i));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        std::vector<Jet> d2(n);
        for (int l = 0; l < n; ++l) d2[l] = d1[l][i].derivative(fx.yv(j));
        for (int k = j; k < n; ++k) {
          Jet acc(W, 0.0);
          for (int l = 0; l < n; ++l) acc += Fy[l] * d2[l].derivative(fx.yv(k)).project(W);
          const Jet val = -0.5 * F * acc;
          for (auto idx : {tri(i, j, k), tri(i, k, j), tri(j, i, k), tri(j, k, i), tri(k, i, j),
                           tri(k, j, i)})
            L[idx] = val;
        }
      }
  }

  LandsbergBundle out;
  out.n = n;
  out.F = F.value();
  out.F_y.resize(n);
  out.g = SymTensor2(n);
  out.g_inv = SymTensor2(n);
  out.G.resize(n);
  out.dG_dy = Matrix(n);
  out.L = SymTensor3(n);
  out.J.assign(n, 0.0);
  out.has_derivatives = derivatives;
  out.dJ_dx = Matrix(n);
  out.dJ_dy = Matrix(n);

  for (int i = 0; i < n; ++i) {
    out.F_y[i] = Fy[i].value();
    out.G[i] = G[i].value();
    for (int j = 0; j < n; ++j) {
      if (j >= i) {
        out.g.set(i, j, g[i * n + j].value());
        out.g_inv.set(i, j, 0.5 * (ginv[i * n + j].value() + ginv[j * n + i].value()));
      }
      out.dG_dy(i, j) = G[i].partial_vars({fx.yv(j)});
      for (int k = 0; k < n; ++k) out.L.set_raw(i, j, k, L[tri(i, j, k)].value());
    }
  }

  for (int i = 0; i < n; ++i) {
    Jet Ji(W, 0.0);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) Ji += ginv[j * n + k] * L[tri(i, j, k)];
    out.J[i] = Ji.value();
    if (derivatives) {
      for (int j = 0; j < n; ++j) {
        out.dJ_dx(i, j) = Ji.partial_vars({fx.xv(j)});
        out.dJ_dy(i, j) = Ji.partial_vars({fx.yv(j)});
      }
    }
  }
  return out;
}

}  // namespace finsler
