#include "owcsim/precoder.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "owcsim/errors.hpp"

namespace owc {

ChannelMatrix ChannelMatrix::identity(int n) {
  ChannelMatrix m;
  m.rows = m.cols = n;
  m.entries.assign(std::size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

ChannelMatrix ChannelMatrix::diagonal(const std::vector<double>& d) {
  ChannelMatrix m;
  m.rows = m.cols = int(d.size());
  m.entries.assign(d.size() * d.size(), 0.0);
  for (int i = 0; i < m.rows; ++i) m.at(i, i) = d[std::size_t(i)];
  return m;
}

void ChannelMatrix::validate() const {
  if (rows <= 0 || cols <= 0 ||
      entries.size() != std::size_t(rows) * cols) {
    throw Error(ErrorCode::config_invalid, "ChannelMatrix: bad shape");
  }
  for (double v : entries) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::config_invalid, "ChannelMatrix: non-finite entry");
    }
  }
}

Precoder zf_precoder(const ChannelMatrix& h) {
  h.validate();
  Eigen::MatrixXd m(h.rows, h.cols);
  for (int r = 0; r < h.rows; ++r) {
    for (int c = 0; c < h.cols; ++c) m(r, c) = h.at(r, c);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m);
  Eigen::MatrixXd pinv = cod.pseudoInverse();

  Precoder out;
  out.rank_deficient = cod.rank() < std::min(h.rows, h.cols) ||
                       cod.rank() < h.rows;
  out.weights.rows = int(pinv.rows());
  out.weights.cols = int(pinv.cols());
  out.weights.entries.resize(std::size_t(pinv.size()));
  for (int r = 0; r < out.weights.rows; ++r) {
    for (int c = 0; c < out.weights.cols; ++c) {
      out.weights.at(r, c) = pinv(r, c);
    }
  }
  return out;
}

}  // namespace owc
