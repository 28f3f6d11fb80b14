#include "chabauty/duality.hpp"

namespace chabauty {

ClosedSubgroup dual(const ClosedSubgroup& g) {
  const int n = g.ambient_dim();
  const Mat& d = g.discrete_basis();
  Mat both(n, g.rank());
  both << g.continuous_basis(), d;
  const Mat cont = orthogonal_complement(orthonormalize(both), n);
  if (d.cols() == 0) return make_subgroup(n, cont, Mat(n, 0));
  // Dual lattice in an orthonormal frame of span(d): coordinates C -> C^{-T}.
  const Mat frame = orthonormalize(d, 0.0);
  const Mat coords = frame.transpose() * d;
  const Mat dual_coords = coords.transpose().fullPivLu().solve(Mat::Identity(d.cols(), d.cols()));
  return make_subgroup(n, cont, Mat(frame * dual_coords));
}

}  // namespace chabauty
