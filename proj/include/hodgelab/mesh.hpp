#pragma once

// Oriented simplicial complexes with signed coboundary operators.
//
// Simplices are stored as sorted vertex tuples; coboundary matrices use the
// alternating-face convention on sorted tuples, so d(k+1) * d(k) = 0 holds in
// exact integer arithmetic. Top cells additionally carry an orientation sign
// relative to their sorted tuple, propagated breadth-first across shared
// facets (NonOrientable if impossible, NonManifold if a ridge has more than
// two cofaces).
//
// The flat torus is stored as an abstract periodic complex over chart
// coordinates in [0,w)^2 with per-cell lifted vertex coordinates, so every
// cell has honest flat-chart geometry while the connectivity wraps.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <string>
#include <vector>

namespace hodgelab {

struct SimplicialComplex {
  std::string name;  // generator descriptor, carried into spectrum reports
  int ambient_dim = 0;
  int top_dim = 0;
  Eigen::MatrixXd vertices;  // ambient_dim x V

  // simplices[k][i]: sorted vertex ids of the i-th k-simplex (k = 0..top_dim),
  // ordered lexicographically. orientation[i]: sign of top cell i.
  std::vector<std::vector<std::vector<int>>> simplices;
  std::vector<int> orientation;

  // coboundary[k]: (#(k+1)-simplices) x (#k-simplices), entries in {-1,0,1}.
  std::vector<Eigen::SparseMatrix<double>> coboundary;

  bool periodic = false;
  Eigen::VectorXd periods;                 // chart widths (periodic only)
  std::vector<Eigen::MatrixXd> cell_lift;  // per cell: ambient_dim x (top_dim+1)

  int count(int k) const { return static_cast<int>(simplices[k].size()); }
  int euler_characteristic() const;

  // Geometric vertex matrix (ambient_dim x (k+1)) of a k-simplex; for
  // periodic complexes the coordinates are lifted consistently inside one
  // containing top cell.
  Eigen::MatrixXd simplex_coords(int k, int i) const;

  // Some top cell containing the given k-simplex (deterministic choice).
  int owner_cell(int k, int i) const { return owner_[k][i]; }

  // Cofaces of a (top_dim-1)-simplex among top cells (1 = boundary facet).
  const std::vector<int>& facet_cofaces(int i) const { return facet_cells_[i]; }

  // internal: populated by build; exposed read-only through the accessors
  std::vector<std::vector<int>> owner_;
  std::vector<std::vector<int>> facet_cells_;
};

struct BoundaryMap {
  bool closed = false;             // parent is closed: boundary empty
  SimplicialComplex boundary;      // (top_dim - 1)-complex over parent coordinates
  // inclusion[k][i] = parent index of the i-th boundary k-simplex
  std::vector<std::vector<int>> inclusion;
  // unit inner normal per boundary top cell (points toward the incident cell)
  Eigen::MatrixXd inner_normals;   // ambient_dim x (#facets)
};

// Assemble a complex from top cells; the orientation of the first cell of
// each connected component follows the input vertex order, the rest follows
// by facet matching.
SimplicialComplex build_complex(int ambient_dim, const Eigen::MatrixXd& vertices,
                                const std::vector<std::vector<int>>& top_cells);

BoundaryMap boundary_complex(const SimplicialComplex& K);

// --- generators -----------------------------------------------------------------

SimplicialComplex gen_interval(int nseg);
SimplicialComplex gen_circle(int nseg);
SimplicialComplex gen_disc(int level);
SimplicialComplex gen_icosphere(int level);
SimplicialComplex gen_ball3(int level);
SimplicialComplex gen_annulus3(int level, double r0, double r1);
SimplicialComplex gen_flat_torus(int nx, int ny, double wx = 1.0, double wy = 1.0);

// Midpoint refinement. The projector receives each new midpoint and whether
// its parent edge lies on the boundary; identity when omitted. Periodic
// complexes are generated at final resolution instead.
using EdgeProjector = std::function<Eigen::VectorXd(const Eigen::VectorXd&, bool)>;
SimplicialComplex refine(const SimplicialComplex& K, const EdgeProjector& project = {});

// Betti numbers b_0..b_top via exact rational rank of the coboundaries.
std::vector<int> betti(const SimplicialComplex& K);

// Plain-text serialization; load(dump(K)) reproduces coordinates bit-exactly.
std::string dump_mesh(const SimplicialComplex& K);
SimplicialComplex load_mesh(const std::string& text);

} // namespace hodgelab
