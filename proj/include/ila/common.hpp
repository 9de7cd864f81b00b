#ifndef ILA_COMMON_HPP
#define ILA_COMMON_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace ila {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Runs body(begin, end) over fixed-size chunks of [0, n). The chunk grid
// depends only on n, so any reduction that combines per-chunk results in
// chunk order is independent of the worker count.
void parallel_for(std::int64_t n,
                  const std::function<void(std::int64_t, std::int64_t)>& body,
                  int workers = 0);

int default_workers();

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace ila

#endif
