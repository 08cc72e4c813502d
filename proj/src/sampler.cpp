#include "deepnurbs/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "deepnurbs/errors.hpp"

namespace dn {

std::vector<Point2> sample_parametric(int n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("sample_parametric: n must be >= 1");
  Rng rng(seed);
  std::vector<Point2> out(static_cast<size_t>(n));
  for (auto& p : out) {
    p[0] = rng.uniform01();
    p[1] = rng.uniform01();
  }
  return out;
}

SampleBatch push_forward(const ControlNet& geometry, const std::vector<Point2>& xi_batch,
                         std::uint64_t seed) {
  SampleBatch batch;
  batch.seed = seed;
  batch.n = static_cast<int>(xi_batch.size());
  batch.xi = xi_batch;
  batch.x.resize(xi_batch.size());
  batch.det_abs.resize(xi_batch.size());
  batch.skipped.resize(xi_batch.size());
  for (size_t i = 0; i < xi_batch.size(); ++i) {
    const Vec3 xi{xi_batch[i][0], xi_batch[i][1], 0.0};
    const Vec3 x = eval_geometry(geometry, xi);
    batch.x[i] = {x[0], x[1]};
    const double det = std::abs(jacobian(geometry, xi).det);
    batch.det_abs[i] = det;
    batch.skipped[i] = det < kDetEpsilon ? 1 : 0;
  }
  return batch;
}

double density_at(const ControlNet& geometry, const Vec3& xi) {
  const double det = std::abs(jacobian(geometry, xi).det);
  if (det <= kDetEpsilon)
    throw SingularJacobian("density_at: Jacobian determinant below threshold");
  return 1.0 / det;
}

double integrate(const std::function<double(const Point2&, const Point2&)>& integrand,
                 const SampleBatch& batch) {
  bool any = false;
  double sum = 0.0;
  for (size_t i = 0; i < batch.xi.size(); ++i) {
    if (batch.skipped[i]) continue;
    any = true;
    sum += integrand(batch.x[i], batch.xi[i]) * batch.det_abs[i];
  }
  if (!any) throw EmptyBatch("integrate: every sample in the batch was skipped");
  return sum / static_cast<double>(batch.n);
}

void dump_batch_csv(const SampleBatch& batch, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("dump_batch_csv: cannot open " + path);
  std::fprintf(f, "xi1,xi2,x1,x2,det_abs,skipped\n");
  for (size_t i = 0; i < batch.xi.size(); ++i)
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", batch.xi[i][0], batch.xi[i][1],
                 batch.x[i][0], batch.x[i][1], batch.det_abs[i],
                 static_cast<int>(batch.skipped[i]));
  std::fclose(f);
}

}  // namespace dn
