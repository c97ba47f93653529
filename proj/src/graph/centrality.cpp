#include "fconn/error.hpp"
#include "fconn/graph.hpp"
#include "fconn/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace fconn {

CentralityRanking eigenvector_centrality(const SparseSymGraph& g, double tol,
                                         std::size_t max_iter) {
  if (g.nodes() == 0) throw ValidationError("centrality of an empty graph");
  if (!(tol > 0.0)) throw ValidationError("centrality tolerance must be positive");

  CentralityRanking r;
  if (g.edge_count() == 0) {
    r.scores = Eigen::VectorXd::Constant(g.nodes(), 1.0 / std::sqrt(double(g.nodes())));
    r.eigenvalue = 0.0;
    return r;
  }

  EigsOptions opt;
  opt.tol = tol;
  opt.ones_start = true;
  opt.max_matvecs = max_iter ? max_iter
                             : std::max<std::size_t>(100, 10 * static_cast<std::size_t>(g.nodes()));
  const Eigenpairs ep =
      extremal_eigenpairs(g.adjacency(), 1, SpectrumEnd::LargestAlgebraic, opt);

  // The Perron vector has one sign; entries that come out negative are at
  // roundoff level (or belong to a component outside the dominant one).
  Eigen::VectorXd x = ep.vectors.col(0);
  if (x.sum() < 0.0) x = -x;
  x = x.cwiseAbs();
  x.normalize();

  const Eigen::VectorXd ax = g.adjacency() * x;
  const double lambda = x.dot(ax);
  const double residual = (ax - lambda * x).norm();
  if (residual > tol * std::abs(lambda) * (1.0 + 1e-6))
    throw ConvergenceError("eigenvector centrality residual " +
                               std::to_string(residual) + " above tolerance",
                           residual);
  r.scores = x;
  r.eigenvalue = lambda;
  return r;
}

}  // namespace fconn
