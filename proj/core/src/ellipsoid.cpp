#include "randpoly/ellipsoid.hpp"

#include <cmath>
#include <string>

#include "randpoly/error.hpp"
#include "randpoly/hull.hpp"
#include "randpoly/rng.hpp"

namespace randpoly {
namespace {

void check_tolerance(double tol) {
  if (!(tol > 0.0) || tol > 1e-3) fail(ErrorCode::kInvalidArgument, "MVEE tolerance must lie in (0, 1e-3]");
}

double ellipsoid_volume(const Ellipsoid& e) {
  return volume(ConvexBody::ellipsoid(e.center, e.shape));
}

}  // namespace

MveeCertificate mvee(const PointCloud& points, const MveeOptions& options) {
  check_tolerance(options.tolerance);
  const int d = points.dim();
  const int m = static_cast<int>(points.size());
  const double hull_volume = [&] {
    try {
      return polytope_volume(convex_hull(points));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kDegenerateHull) {
        fail(ErrorCode::kDegenerateBody, "MVEE needs a full-dimensional point set");
      }
      throw;
    }
  }();

  Matrix q(d + 1, m);
  for (int j = 0; j < m; ++j) {
    q.col(j).head(d) = as_vector(points[static_cast<std::size_t>(j)]);
    q(d, j) = 1.0;
  }
  const double dp1 = d + 1.0;
  Vector u = Vector::Constant(m, 1.0 / m);
  Matrix x = q * u.asDiagonal() * q.transpose();

  MveeCertificate cert;
  cert.tolerance = options.tolerance;
  std::size_t iter = 0;
  Vector omega(m);
  for (;; ++iter) {
    if (iter % 64 == 0) x = q * u.asDiagonal() * q.transpose();
    Eigen::LLT<Matrix> llt(x);
    if (llt.info() != Eigen::Success) fail(ErrorCode::kNonConvergence, "MVEE moment matrix lost definiteness");
    const Matrix w = llt.matrixL().solve(q);
    omega = w.colwise().squaredNorm().transpose();
    if (options.record_objective) {
      const Matrix l = llt.matrixL();
      cert.objective.push_back(2.0 * l.diagonal().array().log().sum());
    }

    int up = 0;
    int down = -1;
    for (int j = 0; j < m; ++j) {
      if (omega[j] > omega[up]) up = j;
      if (u[j] > 0.0 && (down < 0 || omega[j] < omega[down])) down = j;
    }
    const double gap_up = omega[up] / dp1 - 1.0;
    const double gap_down = 1.0 - omega[down] / dp1;
    if (gap_up <= options.tolerance) break;
    if (iter >= options.max_iterations) {
      fail(ErrorCode::kNonConvergence,
           "MVEE did not converge within " + std::to_string(options.max_iterations) + " iterations");
    }

    if (gap_up >= gap_down) {
      const double tau = (omega[up] - dp1) / (dp1 * (omega[up] - 1.0));
      u *= 1.0 - tau;
      u[up] += tau;
      x = (1.0 - tau) * x + tau * q.col(up) * q.col(up).transpose();
    } else {
      const double ud = u[down];
      const double cap = ud / (1.0 - ud);
      double tau = omega[down] - 1.0 > 1e-300 ? (dp1 - omega[down]) / (dp1 * (omega[down] - 1.0)) : cap;
      const bool drop = tau >= cap;
      if (drop) tau = cap;
      u *= 1.0 + tau;
      u[down] = drop ? 0.0 : u[down] - tau;
      x = (1.0 + tau) * x - tau * q.col(down) * q.col(down).transpose();
    }
  }

  Matrix p(d, m);
  for (int j = 0; j < m; ++j) p.col(j) = q.col(j).head(d);
  const Vector c = p * u;
  const Matrix centered = p.colwise() - c;
  const Matrix sigma = centered * u.asDiagonal() * centered.transpose();
  Matrix shape = sigma.inverse() / d;
  shape = 0.5 * (shape + shape.transpose()).eval();
  double reach = 0.0;
  for (int j = 0; j < m; ++j) reach = std::max(reach, centered.col(j).dot(shape * centered.col(j)));
  shape /= reach;

  cert.ellipsoid = Ellipsoid{c, shape};
  cert.iterations = iter;
  cert.ratio = ellipsoid_volume(cert.ellipsoid) / hull_volume;
  return cert;
}

MveeCertificate mvee(const ConvexBody& body, const MveeOptions& options) {
  check_tolerance(options.tolerance);
  if (const auto* b = body.as<Ball>()) {
    const int d = body.dim();
    MveeCertificate cert;
    cert.ellipsoid = Ellipsoid{b->center, Matrix::Identity(d, d) / (b->radius * b->radius)};
    cert.ratio = 1.0;
    cert.tolerance = options.tolerance;
    return cert;
  }
  if (const auto* e = body.as<Ellipsoid>()) {
    MveeCertificate cert;
    cert.ellipsoid = *e;
    cert.ratio = 1.0;
    cert.tolerance = options.tolerance;
    return cert;
  }
  MveeCertificate cert = mvee(vertex_points(body), options);
  cert.ratio = ellipsoid_volume(cert.ellipsoid) / volume(body);
  return cert;
}

bool ratio_check(const ConvexBody& body, const MveeCertificate& cert) {
  const int d = body.dim();
  const Ellipsoid& e = cert.ellipsoid;
  if (e.center.size() != d) return false;
  const double slack = 1.0 + cert.tolerance;
  const double ratio = ellipsoid_volume(e) / volume(body);
  if (!(ratio <= std::pow(d, d) * std::pow(slack, d))) return false;

  const PointCloud verts = vertex_points(body);
  if (!verts.empty()) {
    for (std::size_t i = 0; i < verts.size(); ++i) {
      const Vector r = as_vector(verts[i]) - e.center;
      if (r.dot(e.shape * r) > slack * slack) return false;
    }
    return true;
  }
  // Smooth body: K inside (1+tol)E iff h_K <= h_{(1+tol)E} on every direction.
  const ConvexBody scaled = ConvexBody::ellipsoid(e.center, e.shape / (slack * slack));
  std::vector<Vector> dirs;
  for (int i = 0; i < d; ++i) {
    dirs.push_back(Vector::Unit(d, i));
    dirs.push_back(-Vector::Unit(d, i));
  }
  RngStream stream(0x5eed, 0);
  for (int k = 0; k < 256; ++k) {
    Vector u(d);
    for (int i = 0; i < d; ++i) u[i] = stream.uniform() - 0.5;
    if (u.norm() == 0.0) continue;
    dirs.push_back(u.normalized());
  }
  for (const Vector& u : dirs) {
    if (support(body, u) > support(scaled, u) * (1.0 + 1e-12) + 1e-12) return false;
  }
  return true;
}

AffineMap unit_ball_map(const Ellipsoid& e) {
  Eigen::LLT<Matrix> llt(e.shape);
  if (llt.info() != Eigen::Success) fail(ErrorCode::kDegenerateBody, "ellipsoid shape is not positive definite");
  const Matrix lt = llt.matrixL().transpose();
  return {lt, -lt * e.center};
}

Normalization normalize(const ConvexBody& body, double tolerance) {
  const int d = body.dim();
  MveeOptions options;
  options.tolerance = tolerance;
  const MveeCertificate cert = mvee(body, options);
  const AffineMap t = unit_ball_map(cert.ellipsoid);
  const bool smooth = body.as<Ball>() != nullptr || body.as<Ellipsoid>() != nullptr;
  ConvexBody image = smooth ? ConvexBody::ball(Point::Zero(d), 1.0) : affine_image(t, body);
  return {t, std::move(image), cert.ellipsoid, ellipsoid_volume(cert.ellipsoid)};
}

}  // namespace randpoly
