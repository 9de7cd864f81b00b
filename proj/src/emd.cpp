#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "ila/metrics.hpp"

namespace ila {

namespace {

// Primal network simplex specialized to the dense transportation problem
//
//   min sum_ij c_ij x_ij   s.t.  sum_j x_ij = a_i,  sum_i x_ij = b_j, x >= 0,
//
// with sum a = sum b. The basis is a spanning tree over the m + n bipartite
// nodes; entering arcs are found by block pricing over the dense cost matrix.
class TransportSimplex {
 public:
  TransportSimplex(const Mat& cost, Vec supply, Vec demand)
      : m_(static_cast<int>(supply.size())),
        n_(static_cast<int>(demand.size())),
        cost_(cost),
        supply_(std::move(supply)),
        demand_(std::move(demand)) {}

  double solve() {
    init_northwest();
    const std::int64_t arcs = static_cast<std::int64_t>(m_) * n_;
    const std::int64_t block = std::max<std::int64_t>(
        64, static_cast<std::int64_t>(std::sqrt(static_cast<double>(arcs))));
    const std::int64_t max_pivots =
        1000 * static_cast<std::int64_t>(m_ + n_) + 1000000;

    compute_potentials();
    std::int64_t cursor = 0;
    std::int64_t pivot = 0;
    for (; pivot < max_pivots; ++pivot) {
      // Block search: scan from the cursor until a block contains a negative
      // reduced cost, then pivot on that block's most negative arc.
      std::int64_t best = -1;
      double best_rc = -1e-12;
      std::int64_t scanned = 0;
      while (scanned < arcs) {
        const std::int64_t stop = std::min<std::int64_t>(arcs, cursor + block);
        for (std::int64_t e = cursor; e < stop; ++e) {
          const int i = static_cast<int>(e / n_);
          const int j = static_cast<int>(e % n_);
          const double rc = cost_(i, j) - u_[i] - v_[j];
          if (rc < best_rc) {
            best_rc = rc;
            best = e;
          }
        }
        scanned += stop - cursor;
        cursor = stop == arcs ? 0 : stop;
        if (best >= 0) break;
      }
      if (best < 0) break;  // optimal
      pivot_on(static_cast<int>(best / n_), static_cast<int>(best % n_));
      compute_potentials();
    }
    if (pivot >= max_pivots)
      throw std::runtime_error("transport: pivot limit exceeded");

    double total = 0.0;
    for (const auto& arc : basis_)
      total += cost_(arc.i, arc.j) * arc.flow;
    return total;
  }

 private:
  struct Arc {
    int i, j;
    double flow;
  };

  // Northwest-corner initial basic feasible solution. One arc per iteration
  // and exactly one index advance, so the walk ends at (m-1, n-1) with
  // m + n - 1 (possibly degenerate) arcs.
  void init_northwest() {
    basis_.clear();
    basis_.reserve(m_ + n_ - 1);
    Vec a = supply_, b = demand_;
    int i = 0, j = 0;
    for (;;) {
      const double f = std::max(0.0, std::min(a[i], b[j]));
      basis_.push_back({i, j, f});
      a[i] -= f;
      b[j] -= f;
      if (i == m_ - 1 && j == n_ - 1) break;
      if (j == n_ - 1)
        ++i;
      else if (i == m_ - 1)
        ++j;
      else if (a[i] <= b[j])
        ++i;
      else
        ++j;
    }

    adj_.assign(m_ + n_, {});
    for (int k = 0; k < static_cast<int>(basis_.size()); ++k) {
      adj_[basis_[k].i].push_back(k);
      adj_[m_ + basis_[k].j].push_back(k);
    }
    u_.assign(m_, 0.0);
    v_.assign(n_, 0.0);
    seen_.assign(m_ + n_, 0);
    parent_node_.assign(m_ + n_, -1);
    parent_arc_.assign(m_ + n_, -1);
    stack_.reserve(m_ + n_);
  }

  // Dual potentials from the basis tree: u_i + v_j = c_ij on basic arcs.
  void compute_potentials() {
    std::fill(seen_.begin(), seen_.end(), 0);
    stack_.clear();
    stack_.push_back(0);
    seen_[0] = 1;
    u_[0] = 0.0;
    while (!stack_.empty()) {
      const int node = stack_.back();
      stack_.pop_back();
      for (const int k : adj_[node]) {
        const auto& arc = basis_[k];
        const int other = node < m_ ? m_ + arc.j : arc.i;
        if (seen_[other]) continue;
        seen_[other] = 1;
        if (node < m_)
          v_[arc.j] = cost_(arc.i, arc.j) - u_[arc.i];
        else
          u_[arc.i] = cost_(arc.i, arc.j) - v_[arc.j];
        stack_.push_back(other);
      }
    }
  }

  void drop_from(int node, int k) {
    auto& list = adj_[node];
    list.erase(std::find(list.begin(), list.end(), k));
  }

  // Adds arc (ei, ej), cancels flow around the unique tree cycle, and
  // replaces the blocking arc.
  void pivot_on(int ei, int ej) {
    const int start = ei, goal = m_ + ej;
    std::fill(seen_.begin(), seen_.end(), 0);
    stack_.clear();
    stack_.push_back(start);
    seen_[start] = 1;
    while (!stack_.empty()) {
      const int node = stack_.back();
      stack_.pop_back();
      if (node == goal) break;
      for (const int k : adj_[node]) {
        const auto& arc = basis_[k];
        const int other = node < m_ ? m_ + arc.j : arc.i;
        if (seen_[other]) continue;
        seen_[other] = 1;
        parent_node_[other] = node;
        parent_arc_[other] = k;
        stack_.push_back(other);
      }
    }

    // Walk goal -> start. The bipartite cycle alternates: the arc whose
    // near-side node is a sink loses flow, the arc whose near-side node is a
    // source gains it.
    cycle_arcs_.clear();
    cycle_gains_.clear();
    int node = goal;
    while (node != start) {
      const int k = parent_arc_[node];
      cycle_arcs_.push_back(k);
      cycle_gains_.push_back(node < m_);  // near side is a source -> gains
      node = parent_node_[node];
    }

    double theta = std::numeric_limits<double>::infinity();
    int leave = -1;
    for (size_t t = 0; t < cycle_arcs_.size(); ++t) {
      if (cycle_gains_[t]) continue;
      const auto& arc = basis_[cycle_arcs_[t]];
      if (arc.flow < theta ||
          (arc.flow == theta && cycle_arcs_[t] < leave)) {
        theta = arc.flow;
        leave = cycle_arcs_[t];
      }
    }
    require(leave >= 0, "transport: malformed pivot cycle");

    for (size_t t = 0; t < cycle_arcs_.size(); ++t)
      basis_[cycle_arcs_[t]].flow += cycle_gains_[t] ? theta : -theta;

    const Arc old = basis_[leave];
    drop_from(old.i, leave);
    drop_from(m_ + old.j, leave);
    basis_[leave] = {ei, ej, theta};
    adj_[ei].push_back(leave);
    adj_[m_ + ej].push_back(leave);
  }

  int m_, n_;
  const Mat& cost_;
  Vec supply_, demand_;
  std::vector<Arc> basis_;
  std::vector<std::vector<int>> adj_;
  std::vector<double> u_, v_;
  // Pivot scratch.
  std::vector<char> seen_;
  std::vector<int> parent_node_, parent_arc_, stack_, cycle_arcs_;
  std::vector<char> cycle_gains_;
};

}  // namespace

double transport_cost_sq(const Mat& pos_a, const Vec& mass_a, const Mat& pos_b,
                         const Vec& mass_b) {
  require(pos_a.rows() == mass_a.size() && pos_b.rows() == mass_b.size(),
          "transport: positions/masses mismatch");
  require(pos_a.cols() == pos_b.cols(), "transport: dimension mismatch");
  require(mass_a.size() > 0 && mass_b.size() > 0, "transport: empty support");
  require((mass_a.array() > 0.0).all() && (mass_b.array() > 0.0).all(),
          "transport: masses must be positive (prune zeros first)");
  const double sum_a = mass_a.sum(), sum_b = mass_b.sum();
  require(std::abs(sum_a - sum_b) <= 1e-9 * std::max(sum_a, sum_b),
          "transport: total masses differ");

  const int m = static_cast<int>(mass_a.size());
  const int n = static_cast<int>(mass_b.size());
  Mat cost(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      cost(i, j) = (pos_a.row(i) - pos_b.row(j)).squaredNorm();

  // Rescale demand so the totals match bit-for-bit.
  Vec demand = mass_b * (sum_a / sum_b);
  TransportSimplex solver(cost, mass_a, std::move(demand));
  return solver.solve();
}

double emd_w2(const Histogram2D& a, const Histogram2D& b) {
  require(a.edges_x.size() == b.edges_x.size() &&
              a.edges_y.size() == b.edges_y.size() &&
              a.edges_x.isApprox(b.edges_x) && a.edges_y.isApprox(b.edges_y),
          "emd_w2: histograms must share the bin grid");

  auto atoms = [](const Histogram2D& h) {
    std::vector<std::pair<double, double>> pos;
    std::vector<double> mass;
    for (Eigen::Index i = 0; i < h.mass.rows(); ++i)
      for (Eigen::Index j = 0; j < h.mass.cols(); ++j)
        if (h.mass(i, j) > 0.0) {
          pos.emplace_back(h.center_x(static_cast<int>(i)),
                           h.center_y(static_cast<int>(j)));
          mass.push_back(h.mass(i, j));
        }
    return std::make_pair(pos, mass);
  };

  const auto [pa, ma] = atoms(a);
  const auto [pb, mb] = atoms(b);
  require(!pa.empty() && !pb.empty(), "emd_w2: empty histogram");
  if (static_cast<int>(pa.size() + pb.size()) > kEmdMaxSupport)
    throw std::invalid_argument(
        "emd_w2: combined support exceeds " + std::to_string(kEmdMaxSupport) +
        " atoms; downsample the histograms (coarser bins or fewer samples)");

  Mat pos_a(pa.size(), 2), pos_b(pb.size(), 2);
  Vec mass_va(ma.size()), mass_vb(mb.size());
  for (size_t i = 0; i < pa.size(); ++i) {
    pos_a(i, 0) = pa[i].first;
    pos_a(i, 1) = pa[i].second;
    mass_va[i] = ma[i];
  }
  for (size_t i = 0; i < pb.size(); ++i) {
    pos_b(i, 0) = pb[i].first;
    pos_b(i, 1) = pb[i].second;
    mass_vb[i] = mb[i];
  }
  return std::sqrt(
      std::max(0.0, transport_cost_sq(pos_a, mass_va, pos_b, mass_vb)));
}

}  // namespace ila
