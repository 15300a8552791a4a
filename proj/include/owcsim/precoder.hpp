#pragma once

#include <vector>

namespace owc {

// Real channel-gain matrix between one AP's streams and its served users.
// Row-major, rows x cols.
struct ChannelMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> entries;

  double& at(int r, int c) { return entries[std::size_t(r) * cols + c]; }
  double at(int r, int c) const { return entries[std::size_t(r) * cols + c]; }

  static ChannelMatrix identity(int n);
  static ChannelMatrix diagonal(const std::vector<double>& d);
  void validate() const;
};

struct Precoder {
  ChannelMatrix weights;     // W = H^+
  bool rank_deficient = false;  // numerical rank < row count (still usable)
};

// Moore-Penrose pseudo-inverse of the channel matrix. Satisfies H W H = H.
Precoder zf_precoder(const ChannelMatrix& h);

}  // namespace owc
