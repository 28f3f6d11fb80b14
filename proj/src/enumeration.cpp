#include "chabauty/enumeration.hpp"

#include "chabauty/error.hpp"

namespace chabauty {

std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonClosedInput: return "NonClosedInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::InvalidType: return "InvalidType";
    case ErrorCode::WrongAmbientDim: return "WrongAmbientDim";
    case ErrorCode::NotDecomposable: return "NotDecomposable";
    case ErrorCode::FlagsTooFar: return "FlagsTooFar";
    case ErrorCode::NotInNeighborhood: return "NotInNeighborhood";
    case ErrorCode::InconsistentData: return "InconsistentData";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidStratum: return "InvalidStratum";
    case ErrorCode::InvalidPair: return "InvalidPair";
    case ErrorCode::NotUnitSystole: return "NotUnitSystole";
    case ErrorCode::NotLattice: return "NotLattice";
    case ErrorCode::NotInC1: return "NotInC1";
    case ErrorCode::SingularBasePoint: return "SingularBasePoint";
    case ErrorCode::Unstable: return "Unstable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

LatticeFrame::LatticeFrame(const Mat& basis) : basis_(basis) {
  const auto k = basis.cols();
  if (k == 0) {
    q_ = Mat(basis.rows(), 0);
    r_ = Mat(0, 0);
    return;
  }
  Eigen::HouseholderQR<Mat> qr(basis);
  q_ = qr.householderQ() * Mat::Identity(basis.rows(), k);
  r_ = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
}

Vec LatticeFrame::combine(const IntVec& x) const {
  Vec v = Vec::Zero(basis_.rows());
  for (std::size_t j = 0; j < x.size(); ++j)
    v += static_cast<double>(x[j]) * basis_.col(static_cast<Eigen::Index>(j));
  return v;
}

IntVec LatticeFrame::closest(const Vec& target, double* sq_dist) const {
  const int k = rank();
  IntVec best(static_cast<std::size_t>(k), 0);
  if (k == 0) {
    if (sq_dist) *sq_dist = target.squaredNorm();
    return best;
  }
  // Babai rounding gives the initial radius.
  const Vec t = q_.transpose() * target;
  IntVec babai(static_cast<std::size_t>(k), 0);
  for (int i = k - 1; i >= 0; --i) {
    double c = t(i);
    for (int j = i + 1; j < k; ++j) c -= r_(i, j) * static_cast<double>(babai[static_cast<std::size_t>(j)]);
    babai[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor(c / r_(i, i) + 0.5));
  }
  best = babai;
  double best_sq = (combine(babai) - target).squaredNorm();
  enumerate(target, best_sq * (1 + 1e-12) + 1e-300,
            [&](const IntVec& x, double sq, double& bound) {
              if (sq < best_sq) {
                best_sq = sq;
                best = x;
                bound = sq * (1 + 1e-12) + 1e-300;
              }
              return true;
            });
  if (sq_dist) *sq_dist = (combine(best) - target).squaredNorm();
  return best;
}

double LatticeFrame::distance(const Vec& target) const {
  double sq = 0;
  closest(target, &sq);
  return std::sqrt(sq);
}

}  // namespace chabauty
