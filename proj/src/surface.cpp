#include "minkcmc/surface.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "minkcmc/log.hpp"

namespace minkcmc {

Mat2 to_matrix(const Vec3& v) {
  Mat2 m;
  m(0, 0) = cplx(0.0, v[2]);
  m(0, 1) = cplx(v[0], v[1]);
  m(1, 0) = cplx(v[0], -v[1]);
  m(1, 1) = cplx(0.0, -v[2]);
  return m;
}

Vec3 from_matrix(const Mat2& m) {
  Vec3 v;
  v[0] = ((m(0, 1) + m(1, 0)) / 2.0).real();
  v[1] = ((m(0, 1) - m(1, 0)) / (2.0 * kI)).real();
  v[2] = m(0, 0).imag();
  return v;
}

double minkowski_inner(const Vec3& u, const Vec3& v) {
  return u[0] * v[0] + u[1] * v[1] - u[2] * v[2];
}

cplx minkowski_inner(const Eigen::Vector3cd& u, const Eigen::Vector3cd& v) {
  return u[0] * v[0] + u[1] * v[1] - u[2] * v[2];
}

Vec3 euclidean_cross(const Vec3& u, const Vec3& v) {
  return Vec3(u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
              u[0] * v[1] - u[1] * v[0]);
}

Vec3 lorentz_cross(const Vec3& u, const Vec3& v) {
  return Vec3(-(u[1] * v[2] - u[2] * v[1]), -(u[2] * v[0] - u[0] * v[2]),
              u[0] * v[1] - u[1] * v[0]);
}

Vec3 sym_bobenko(const LoopMatrix& f, const cplx& lambda0, double H) {
  if (std::abs(std::abs(lambda0) - 1.0) > 1e-12)
    throw std::invalid_argument("sym_bobenko: lambda0 must lie on the unit circle");
  if (!(H > 0.0)) throw std::invalid_argument("sym_bobenko: H must be positive");
  const Mat2 fv = loop_eval(f, lambda0);
  const Mat2 fi = fv.inverse();
  const Mat2 df = loop_eval(lambda_scaled_derivative(f), lambda0);
  const Mat2 s = -(fv * basis_e3() * fi + 2.0 * kI * df * fi) / (2.0 * H);
  return from_matrix(s);
}

double metric_g(const PlusFactor& b, const cplx& a_val, double H, int eps) {
  const double chi2 = std::abs(h_probe(b)) / (b.rho * b.rho);
  return eps * chi2 * std::abs(a_val) / H;
}

cplx hopf_Q(const SingularPotential& xi, const cplx& z, double H) {
  const cplx bt = xi.b_refl(z);
  return 2.0 * xi.a(z) / H * (xi.b(z) - bt - 2.0 * kI * xi.r(z));
}

std::pair<Vec3, NormalProbe> euclidean_normal(const Mat2& f_omega, const PlusFactor& b) {
  NormalProbe p;
  const double h = h_probe(b);
  const double den = std::sqrt(h * h + 8.0 * h + 8.0);
  p.Z1 = 2.0 / den;
  p.Z2 = h / den;
  p.Y = Vec3(std::imag(b.mu) * b.rho * p.Z1, -(std::real(b.mu) + b.rho) * b.rho * p.Z1,
             p.Z1 + p.Z2);
  const Mat2 e3 = basis_e3();
  const Mat2 conj = f_omega * to_matrix(p.Y) * f_omega.inverse();
  Vec3 n = from_matrix(e3 * conj * e3.inverse());
  n.normalize();
  return {n, p};
}

double psi_signed(const Vec3& f_x, const Vec3& f_y, int eps) {
  return eps * euclidean_cross(f_x, f_y).norm();
}

namespace {

// Area density from the unitary frame of the standard (omega_1-shifted)
// factorization: f_x and f_y are 2|g| times Ad_F of an orthonormal pair
// spanning e1, e2, and the diagonal phase freedom drops out of the cross
// product, so psi = eps * 4 g^2 ||(Ad_F e1) x (Ad_F e2)||.
double psi_from_frame(const Mat2& f_std, double g, int eps) {
  const Mat2 fi = f_std.inverse();
  const Vec3 u1 = from_matrix(f_std * basis_e1() * fi);
  const Vec3 u2 = from_matrix(f_std * basis_e2() * fi);
  return eps * 4.0 * g * g * euclidean_cross(u1, u2).norm();
}

struct BuildContext {
  const SingularPotential* xi;
  LoopPotentialFn xi_fn;
  BuildOptions opt;
  FrameIntegrationOptions fopt;
  IwasawaOptions iopt;
  LoopMatrix omega1;
  Eigen::Matrix3d rot;
};

Eigen::Matrix3d rotation_about_e3(double alpha) {
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  r(0, 0) = std::cos(alpha);
  r(0, 1) = -std::sin(alpha);
  r(1, 0) = std::sin(alpha);
  r(1, 1) = std::cos(alpha);
  return r;
}

void assemble_sample(const BuildContext& ctx, const LoopMatrix& phi, const cplx& z,
                     SurfaceSample& s) {
  s.z = z;
  s.Q = hopf_Q(*ctx.xi, z, ctx.opt.H);
  const cplx a_val = ctx.xi->a(z);
  const double x = z.real();
  const double grad_h = std::abs(4.0 * (ctx.xi->b(x).imag() - ctx.xi->r(x).real()));
  const double band = ctx.opt.delta_cell * std::max(1.0, grad_h);

  IwasawaResult main = iwasawa_factor(phi, ctx.iopt);
  if (main.ok) {
    s.h = h_probe(main.b);
    s.residual = main.residual;
    const Mat2 f1 = loop_eval(main.f, ctx.opt.lambda0);
    if (std::abs(s.h) <= band) {
      if (main.eps != 1) {
        s.tag = CellTag::Unknown;
        s.valid = false;
        return;
      }
      s.tag = CellTag::P1;
      s.eps = 0;
      s.g = 0.0;
      s.psi = 0.0;
      s.f = sym_bobenko(main.f, ctx.opt.lambda0, ctx.opt.H);
      s.n_E = euclidean_normal(f1, main.b).first;
      s.valid = true;
      return;
    }
    const int eps_tag = main.eps * (s.h > 0 ? 1 : -1);
    s.tag = eps_tag > 0 ? CellTag::BigCellPlus : CellTag::BigCellMinus;
    s.eps = eps_tag;
    s.f = sym_bobenko(main.f, ctx.opt.lambda0, ctx.opt.H);
    s.g = metric_g(main.b, a_val, ctx.opt.H, eps_tag);
    s.n_E = euclidean_normal(f1, main.b).first;
    SwitchResult sw = switch_factor(main.b, ctx.opt.delta_cell);
    if (sw.kase == SwitchResult::Case::Boundary) {
      s.psi = 0.0;
    } else {
      s.psi = psi_from_frame(f1 * loop_eval(sw.x, ctx.opt.lambda0), s.g, eps_tag);
    }
    s.valid = true;
    return;
  }

  // The singular frame left its big cell; retry on Phi omega_1, which
  // represents the same surface.
  LoopMatrix shifted = loop_mul(phi, ctx.omega1);
  IwasawaResult fb = iwasawa_factor(shifted, ctx.iopt);
  if (fb.ok) {
    s.tag = fb.eps > 0 ? CellTag::BigCellPlus : CellTag::BigCellMinus;
    s.eps = fb.eps;
    s.h = h_probe(fb.b);
    s.residual = fb.residual;
    s.f = sym_bobenko(fb.f, ctx.opt.lambda0, ctx.opt.H);
    const double chi = fb.b.rho;
    s.g = fb.eps * chi * chi * std::abs(a_val) / ctx.opt.H;
    const Mat2 f1 = loop_eval(fb.f, ctx.opt.lambda0);
    const Mat2 e3 = basis_e3();
    Vec3 n = from_matrix(e3 * (f1 * e3 * f1.inverse()) * e3.inverse());
    n.normalize();
    s.n_E = static_cast<double>(fb.eps) * n;
    s.psi = psi_from_frame(f1, s.g, fb.eps);
    s.valid = true;
    return;
  }

  s.tag = cell_classify(phi, ctx.iopt);
  if (s.tag == CellTag::BigCellPlus || s.tag == CellTag::BigCellMinus) s.tag = CellTag::Unknown;
  s.valid = false;
}

}  // namespace

SurfaceGrid build_surface(const SingularPotential& xi, const GridSpec& grid,
                          const BuildOptions& opt) {
  if (grid.nx < 1 || grid.ny < 1)
    throw std::invalid_argument("build_surface: grid must have at least one point per axis");

  BuildContext ctx;
  ctx.xi = &xi;
  ctx.xi_fn = potential_fn(xi, opt.trunc);
  ctx.opt = opt;
  ctx.fopt.trunc = opt.trunc;
  double step = opt.h_step;
  if (step <= 0.0) {
    step = std::min(grid.nx > 1 ? grid.dx() : 0.1, grid.ny > 1 ? grid.dy() : 0.1) / 4.0;
  }
  ctx.fopt.h_step = step;
  ctx.fopt.tol_det = opt.tol_det;
  ctx.iopt.eps_iwa = opt.eps_iwa;
  ctx.iopt.circle_samples = opt.circle_samples;
  ctx.omega1 = make_omega(1, opt.trunc);
  ctx.rot = rotation_about_e3(opt.rotation_angle);

  SurfaceGrid out;
  out.spec = grid;
  out.H = opt.H;
  out.lambda0 = opt.lambda0;
  out.samples.resize(static_cast<size_t>(grid.nx) * grid.ny);

  // Non-degeneracy of the singular curve: Im b - r (which is -theta'/2 for
  // Bjorling data) must not vanish identically on the real axis.
  {
    double sup = 0.0;
    for (int k = 0; k <= 64; ++k) {
      double x = grid.x_lo + (grid.x_hi - grid.x_lo) * k / 64.0;
      sup = std::max(sup, std::abs(xi.b(x).imag() - xi.r(x).real()));
    }
    out.degenerate = sup <= 1e-12;
  }

  // Anchor frames Phi(x_k, 0) along the real axis, chained outward from 0.
  std::vector<LoopMatrix> anchors(grid.nx);
  {
    std::vector<int> order(grid.nx);
    for (int i = 0; i < grid.nx; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return std::abs(grid.x(i)) < std::abs(grid.x(j)); });
    LoopMatrix from_pos = LoopMatrix::identity(opt.trunc);
    LoopMatrix from_neg = from_pos;
    double at_pos = 0.0, at_neg = 0.0;
    for (int idx : order) {
      const double x = grid.x(idx);
      if (x >= 0.0) {
        from_pos = integrate_frame(ctx.xi_fn, at_pos, from_pos, x, ctx.fopt).phi;
        at_pos = x;
        anchors[idx] = from_pos;
      } else {
        from_neg = integrate_frame(ctx.xi_fn, at_neg, from_neg, x, ctx.fopt).phi;
        at_neg = x;
        anchors[idx] = from_neg;
      }
    }
  }

  // Row indices above and below the axis, nearest first, so each column
  // can chain vertically from its anchor.
  std::vector<int> up, down;
  for (int iy = 0; iy < grid.ny; ++iy) (grid.y(iy) >= 0.0 ? up : down).push_back(iy);
  std::sort(up.begin(), up.end(), [&](int i, int j) { return grid.y(i) < grid.y(j); });
  std::sort(down.begin(), down.end(), [&](int i, int j) { return grid.y(i) > grid.y(j); });

  auto process_column = [&](int ix) {
    const double x = grid.x(ix);
    LoopMatrix phi = anchors[ix];
    double at = 0.0;
    for (int iy : up) {
      const cplx z(x, grid.y(iy));
      phi = integrate_frame(ctx.xi_fn, cplx(x, at), phi, z, ctx.fopt).phi;
      at = grid.y(iy);
      assemble_sample(ctx, phi, z, out.at(ix, iy));
    }
    phi = anchors[ix];
    at = 0.0;
    for (int iy : down) {
      const cplx z(x, grid.y(iy));
      phi = integrate_frame(ctx.xi_fn, cplx(x, at), phi, z, ctx.fopt).phi;
      at = grid.y(iy);
      assemble_sample(ctx, phi, z, out.at(ix, iy));
    }
  };

  const int threads = std::max(1, opt.threads);
  if (threads == 1 || grid.nx == 1) {
    for (int ix = 0; ix < grid.nx; ++ix) process_column(ix);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (int ix = next.fetch_add(1); ix < grid.nx; ix = next.fetch_add(1)) process_column(ix);
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(threads, grid.nx); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Position the surface on the prescribed curve.
  for (SurfaceSample& s : out.samples) {
    if (!s.valid) continue;
    s.f = ctx.rot * (s.f + Vec3(0.0, 0.0, 1.0 / (2.0 * opt.H))) + opt.translation;
    s.n_E = ctx.rot * s.n_E;
  }

  int invalid = 0;
  for (const SurfaceSample& s : out.samples)
    if (!s.valid) ++invalid;
  if (invalid > 0)
    logging::warn("build_surface: %d of %zu samples invalid", invalid, out.samples.size());
  return out;
}

OracleStats mean_curvature_oracle(const SurfaceGrid& grid, double min_abs_y) {
  const GridSpec& gs = grid.spec;
  if (gs.nx < 3 || gs.ny < 3)
    throw std::invalid_argument("mean_curvature_oracle: grid too small for finite differences");
  const double dx = gs.dx(), dy = gs.dy();

  auto big_cell = [](const SurfaceSample& s) {
    return s.valid && (s.tag == CellTag::BigCellPlus || s.tag == CellTag::BigCellMinus);
  };

  OracleStats st;
  double h_sum = 0.0, q_sum = 0.0;
  for (int iy = 1; iy + 1 < gs.ny; ++iy) {
    if (std::abs(gs.y(iy)) <= min_abs_y) continue;
    for (int ix = 1; ix + 1 < gs.nx; ++ix) {
      const SurfaceSample& c = grid.at(ix, iy);
      bool usable = big_cell(c);
      for (int jy = -1; jy <= 1 && usable; ++jy)
        for (int jx = -1; jx <= 1; ++jx) {
          const SurfaceSample& n = grid.at(ix + jx, iy + jy);
          if (!big_cell(n) || n.tag != c.tag) {
            usable = false;
            break;
          }
        }
      if (!usable) continue;

      const Vec3 fx = (grid.at(ix + 1, iy).f - grid.at(ix - 1, iy).f) / (2 * dx);
      const Vec3 fy = (grid.at(ix, iy + 1).f - grid.at(ix, iy - 1).f) / (2 * dy);
      const Vec3 fxx =
          (grid.at(ix + 1, iy).f - 2 * c.f + grid.at(ix - 1, iy).f) / (dx * dx);
      const Vec3 fyy =
          (grid.at(ix, iy + 1).f - 2 * c.f + grid.at(ix, iy - 1).f) / (dy * dy);
      const Vec3 fxy = (grid.at(ix + 1, iy + 1).f - grid.at(ix + 1, iy - 1).f -
                        grid.at(ix - 1, iy + 1).f + grid.at(ix - 1, iy - 1).f) /
                       (4 * dx * dy);

      Vec3 nvec = lorentz_cross(fx, fy);
      const double nn = minkowski_inner(nvec, nvec);
      if (!(nn < 0.0)) continue;  // normal must be timelike at a regular point
      nvec /= std::sqrt(-nn);
      if (nvec[2] < 0.0) nvec = -nvec;  // future-pointing
      // The construction's orientation is the future normal on the plus
      // cell and the past normal on the minus cell.
      const double eps = c.tag == CellTag::BigCellPlus ? 1.0 : -1.0;
      nvec *= eps;

      const double E = minkowski_inner(fx, fx);
      const double F = minkowski_inner(fx, fy);
      const double G = minkowski_inner(fy, fy);
      const double e = minkowski_inner(fxx, nvec);
      const double ff = minkowski_inner(fxy, nvec);
      const double g2 = minkowski_inner(fyy, nvec);
      const double denom = E * G - F * F;
      if (!(std::abs(denom) > 0.0)) continue;
      const double h_est = (e * G - 2 * ff * F + g2 * E) / (2 * denom);
      const cplx q_est = cplx((e - g2) / 4.0, -ff / 2.0);

      const double h_err = std::abs(h_est - grid.H);
      const double q_err = std::abs(q_est - c.Q);
      st.points += 1;
      h_sum += h_err;
      q_sum += q_err;
      st.h_max_err = std::max(st.h_max_err, h_err);
      st.q_max_err = std::max(st.q_max_err, q_err);

      const Vec3 ncross = euclidean_cross(fx, fy);
      if (ncross.norm() > 0.0) {
        const Vec3 n_fd = eps * ncross / ncross.norm();
        st.normal_max_dev = std::max(st.normal_max_dev, (n_fd - c.n_E).norm());
      }
    }
  }
  if (st.points < 9)
    throw std::runtime_error("mean_curvature_oracle: fewer than 9 usable interior points");
  st.h_mean_err = h_sum / st.points;
  st.q_mean_err = q_sum / st.points;
  return st;
}

}  // namespace minkcmc
