#include "legmcs/mc.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace legmcs {

std::vector<std::pair<int, int>> complex_cohomology(const Field& F, const FiniteComplex& c) {
  std::map<int, std::vector<Eigen::Index>> by_degree;
  for (Eigen::Index i = 0; i < c.size(); ++i) by_degree[c.degrees[static_cast<size_t>(i)]].push_back(i);
  // rank of d restricted to the degree-n columns (rows are forced by grading)
  std::map<int, int> rank_from;
  for (const auto& [deg, cols] : by_degree) {
    Mat block = zeros(F, c.d.rows(), static_cast<Eigen::Index>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) block.col(static_cast<Eigen::Index>(j)) = c.d.col(cols[j]);
    rank_from[deg] = rank(block);
  }
  std::vector<std::pair<int, int>> out;
  for (const auto& [deg, cols] : by_degree) {
    int dim = static_cast<int>(cols.size());
    int r_out = rank_from.count(deg) ? rank_from[deg] : 0;
    int r_in = rank_from.count(deg - 1) ? rank_from[deg - 1] : 0;
    out.push_back({deg, dim - r_out - r_in});
  }
  return out;
}

bool is_acyclic(const Field& F, const FiniteComplex& c) {
  for (auto [deg, dim] : complex_cohomology(F, c))
    if (dim != 0) return false;
  return true;
}

FiniteComplex cone(const Field& F, const FiniteComplex& src, const FiniteComplex& tgt, const Mat& f) {
  FiniteComplex c;
  const Eigen::Index ns = src.size(), nt = tgt.size();
  c.degrees.reserve(static_cast<size_t>(ns + nt));
  for (int d : tgt.degrees) c.degrees.push_back(d);
  for (int d : src.degrees) c.degrees.push_back(d - 1);
  c.d = zeros(F, nt + ns, nt + ns);
  if (nt > 0) c.d.block(0, 0, nt, nt) = tgt.d;
  if (nt > 0 && ns > 0) c.d.block(0, nt, nt, ns) = f;
  if (ns > 0) c.d.block(nt, nt, ns, ns) = -src.d;
  return c;
}

FiniteComplex MCObject::as_complex() const {
  FiniteComplex c;
  c.degrees.reserve(mu.size());
  for (int m : mu) c.degrees.push_back(-m);
  c.d = d;
  return c;
}

bool is_strictly_lower(const Mat& d) {
  for (Eigen::Index i = 0; i < d.cols(); ++i)
    for (Eigen::Index j = 0; j <= i && j < d.rows(); ++j)
      if (!d(j, i).is_zero()) return false;
  return true;
}

bool degree_mask_ok(const std::vector<int>& mu, const Mat& d) {
  for (Eigen::Index i = 0; i < d.cols(); ++i)
    for (Eigen::Index j = 0; j < d.rows(); ++j)
      if (!d(j, i).is_zero() &&
          mu[static_cast<size_t>(i)] - mu[static_cast<size_t>(j)] != 1)
        return false;
  return true;
}

bool hom_mask_ok(const std::vector<int>& mu_src, const std::vector<int>& mu_tgt, const Mat& m,
                 int degree) {
  for (Eigen::Index i = 0; i < m.cols(); ++i)
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
      if (m(j, i).is_zero()) continue;
      if (j < i) return false;
      if (mu_src[static_cast<size_t>(i)] - mu_tgt[static_cast<size_t>(j)] != degree) return false;
    }
  return true;
}

MCObject mc_new(const Field& F, std::vector<int> mu, Mat d) {
  const auto n = static_cast<Eigen::Index>(mu.size());
  if (d.rows() != n || d.cols() != n) fail("DimensionMismatch", "differential shape != n x n");
  if (!is_strictly_lower(d)) fail("FiltrationViolation", "differential is not strictly lower triangular");
  if (!degree_mask_ok(mu, d)) fail("DegreeViolation", "entry violates mu(i) - mu(j) = 1");
  if (!mat_is_zero((d * d).eval())) fail("NotSquareZero", "d^2 != 0");
  return MCObject{F, std::move(mu), std::move(d)};
}

FilteredHom hom_identity(const Field& F, const std::vector<int>& mu) {
  return FilteredHom{F, mu, mu, 0, identity(F, static_cast<Eigen::Index>(mu.size()))};
}

FilteredHom hom_compose(const FilteredHom& phi, const FilteredHom& psi) {
  if (psi.mu_tgt != phi.mu_src) fail("BasisMismatch", "hom_compose: psi target != phi source");
  return FilteredHom{phi.F, psi.mu_src, phi.mu_tgt, phi.degree + psi.degree, (phi.m * psi.m).eval()};
}

HomComplex hom_complex(const MCObject& a, const MCObject& b) {
  HomComplex h;
  const Field& F = a.F;
  const int na = a.n(), nb = b.n();
  std::map<std::pair<int, int>, int> index;
  for (int j = 0; j < nb; ++j)
    for (int i = 0; i <= j && i < na; ++i) {
      index[{j, i}] = static_cast<int>(h.basis.size());
      h.basis.push_back({j, i});
      h.complex.degrees.push_back(a.mu[static_cast<size_t>(i)] - b.mu[static_cast<size_t>(j)]);
    }
  const auto dim = static_cast<Eigen::Index>(h.basis.size());
  h.complex.d = zeros(F, dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    auto [j, i] = h.basis[static_cast<size_t>(col)];
    int deg = h.complex.degrees[static_cast<size_t>(col)];
    Fp sign = Fp((deg % 2 == 0) ? 1 : -1, F);
    // D(E_ji) = sum_k d_B(k,j) E_ki - (-1)^deg sum_l d_A(i,l) E_jl
    for (int k = 0; k < nb; ++k) {
      if (b.d(k, j).is_zero()) continue;
      auto it = index.find({k, i});
      if (it == index.end()) continue;  // k < i cannot happen: k > j >= i
      h.complex.d(it->second, col) += b.d(k, j);
    }
    for (int l = 0; l < na; ++l) {
      if (a.d(i, l).is_zero()) continue;
      auto it = index.find({j, l});
      if (it == index.end()) continue;
      h.complex.d(it->second, col) -= sign * a.d(i, l);
    }
  }
  return h;
}

BarannikovResult barannikov(const MCObject& a) {
  const Field& F = a.F;
  const int n = a.n();
  Mat R = a.d;
  Mat V = identity(F, n);
  std::vector<int> pivot_owner(static_cast<size_t>(n), -1);  // row -> column
  std::vector<int> pivot_of(static_cast<size_t>(n), -1);     // column -> row

  // Columns in filtration (insertion) order |n>, ..., |1>; the pivot of a
  // column is its topmost nonzero row (the latest-born generator it hits).
  for (int i = n - 1; i >= 0; --i) {
    for (;;) {
      int piv = -1;
      for (int j = 0; j < n; ++j)
        if (!R(j, i).is_zero()) {
          piv = j;
          break;
        }
      if (piv < 0) break;
      int other = pivot_owner[static_cast<size_t>(piv)];
      if (other < 0) {
        pivot_owner[static_cast<size_t>(piv)] = i;
        pivot_of[static_cast<size_t>(i)] = piv;
        break;
      }
      Fp c = R(piv, i) / R(piv, other);
      R.col(i) -= c * R.col(other);
      V.col(i) -= c * V.col(other);
    }
  }

  BarannikovResult out;
  Mat P = identity(F, n);
  for (int i = 0; i < n; ++i) {
    int j = pivot_of[static_cast<size_t>(i)];
    if (j >= 0) {
      out.barcode.pairs.push_back({i + 1, j + 1});
      P.col(i) = V.col(i);
      P.col(j) = R.col(i);  // new basis vector |j>' := d|i>'
      assert(mat_is_zero(R.col(j).eval()));
    } else if (pivot_owner[static_cast<size_t>(i)] < 0) {
      out.barcode.unpaired.push_back(i + 1);
      P.col(i) = V.col(i);
    }
  }
  std::sort(out.barcode.pairs.begin(), out.barcode.pairs.end());
  out.normalizer = P;
  return out;
}

std::optional<Mat> mc_isomorphic(const MCObject& a, const MCObject& b) {
  if (a.F != b.F || a.mu != b.mu) fail("BasisMismatch", "mc_isomorphic needs equal (n, mu, p)");
  BarannikovResult ra = barannikov(a), rb = barannikov(b);
  if (!(ra.barcode == rb.barcode)) return std::nullopt;
  Mat phi = rb.normalizer * inverse(ra.normalizer);
  assert(mat_equal((phi * a.d).eval(), (b.d * phi).eval()));
  return phi;
}

}  // namespace legmcs
