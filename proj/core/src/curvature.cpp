#include "bochner/curvature.hpp"

#include <Eigen/Dense>

namespace bochner {

std::vector<std::pair<int, int>> bivector_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

namespace {

/// Frame components F(i,j,k,l) = T(e_i, e_j, e_k, e_l) of a lowered 4-tensor.
Tensor<double> frame4(const Tensor<double>& frame, const Tensor<double>& T4) {
  const int n = frame.n();
  Tensor<double> out(n, 4);
  for_each_index(n, 4, [&](const int* I) {
    double s = 0.0;
    for_each_index(n, 4, [&](const int* A) {
      s += frame(I[0], A[0]) * frame(I[1], A[1]) * frame(I[2], A[2]) * frame(I[3], A[3]) * T4.at(A);
    });
    out.at(I) = s;
  });
  return out;
}

}  // namespace

BivectorMatrices bivector_ops(const Geometry& geo, const Point<double>& p) {
  const int n = geo.dim();
  const Tensor<double> E = orthonormal_frame(geo.g(p));
  const auto pairs = bivector_pairs(n);
  const int m = static_cast<int>(pairs.size());
  const Tensor<double> R = frame4(E, riemann(geo.manifold(), geo.diff(), p));
  const Tensor<double> RP = frame4(E, curvature(geo, p, Variant::plain));
  const Tensor<double> RPb = frame4(E, curvature(geo, p, Variant::bar));
  const Tensor<double> RPh = frame4(E, curvature_hat_formula(geo, p));
  const Tensor<double> KK = frame4(E, k_commutator(geo, p, Variant::plain));
  BivectorMatrices b;
  b.size = m;
  const std::size_t sz = static_cast<std::size_t>(m * m);
  b.R.resize(sz);
  b.RP.resize(sz);
  b.RPbar.resize(sz);
  b.RPhat.resize(sz);
  b.K.resize(sz);
  for (int al = 0; al < m; ++al)
    for (int be = 0; be < m; ++be) {
      const auto [i, j] = pairs[static_cast<std::size_t>(al)];
      const auto [k, l] = pairs[static_cast<std::size_t>(be)];
      const std::size_t at = static_cast<std::size_t>(be * m + al);
      // xi_beta = e_k ^ e_l = Z ^ W, so the pairing reads T(e_i, e_j, e_l, e_k).
      b.R[at] = R(i, j, l, k);
      b.RP[at] = RP(i, j, l, k);
      b.RPbar[at] = RPb(i, j, l, k);
      b.RPhat[at] = RPh(i, j, l, k);
      b.K[at] = KK(i, j, k, l);
    }
  return b;
}

std::vector<std::vector<int>> increasing_indices(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

Tensor<double> frame_form(const Tensor<double>& theta, const std::vector<int>& idx) {
  const int n = theta.n();
  const int k = static_cast<int>(idx.size());
  Tensor<double> w(n, k);
  std::vector<int> perm(static_cast<std::size_t>(k));
  for_each_index(n, k, [&](const int* A) {
    // determinant of theta(idx[r], A[c])
    double s = 0.0;
    for (int r = 0; r < k; ++r) perm[static_cast<std::size_t>(r)] = r;
    do {
      double prod = static_cast<double>(permutation_sign(perm.data(), k));
      for (int r = 0; r < k; ++r) prod *= theta(idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])], A[r]);
      s += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    w.at(A) = s;
  });
  return w;
}

std::vector<double> weitzenbock_matrix(const Geometry& geo, const Point<double>& p, int k) {
  const Tensor<double> g = geo.g(p);
  const Tensor<double> gi = geo.ginv(p);
  const Tensor<double> th = coframe(g, orthonormal_frame(g));
  const auto idx = increasing_indices(geo.dim(), k);
  const int m = static_cast<int>(idx.size());
  std::vector<Tensor<double>> basis;
  for (const auto& I : idx) basis.push_back(frame_form(th, I));
  std::vector<double> M(static_cast<std::size_t>(m * m));
  for (int c = 0; c < m; ++c) {
    const Tensor<double> img = weitzenbock_coordinate(geo, basis[static_cast<std::size_t>(c)], p);
    for (int r = 0; r < m; ++r)
      M[static_cast<std::size_t>(r * m + c)] = form_inner(g, gi, img, basis[static_cast<std::size_t>(r)]);
  }
  return M;
}

std::vector<double> symmetric_eigenvalues(const std::vector<double>& m, int size) {
  if (size == 0) return {};
  Eigen::MatrixXd A(size, size);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) A(r, c) = m[static_cast<std::size_t>(r * size + c)];
  const Eigen::MatrixXd S = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

PositivityProbe positivity_probe(const Geometry& geo, const Point<double>& p, int k) {
  PositivityProbe out;
  const int n = geo.dim();
  const BivectorMatrices b = bivector_ops(geo, p);
  const auto ev_r = symmetric_eigenvalues(b.RP, b.size);
  out.min_curvature_operator = ev_r.empty() ? 0.0 : ev_r.front();
  const auto W = weitzenbock_matrix(geo, p, k);
  const int m = static_cast<int>(increasing_indices(n, k).size());
  const auto ev_w = symmetric_eigenvalues(W, m);
  out.min_weitzenbock = ev_w.empty() ? 0.0 : ev_w.front();

  // sum_alpha |xi_alpha S|^2 as a quadratic form on frame k-forms.
  const Tensor<double> g = geo.g(p);
  const Tensor<double> gi = geo.ginv(p);
  const Tensor<double> E = orthonormal_frame(g);
  const Tensor<double> th = coframe(g, E);
  const auto xis = so_basis(g, E);
  std::vector<Tensor<double>> basis;
  for (const auto& I : increasing_indices(n, k)) basis.push_back(frame_form(th, I));
  std::vector<double> Q(static_cast<std::size_t>(m * m), 0.0);
  for (const auto& xi : xis) {
    std::vector<Tensor<double>> img;
    for (const auto& w : basis) img.push_back(slot_action(xi, w));
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c)
        Q[static_cast<std::size_t>(r * m + c)] +=
            form_inner(g, gi, img[static_cast<std::size_t>(r)], img[static_cast<std::size_t>(c)]);
  }
  const auto ev_q = symmetric_eigenvalues(Q, m);
  out.constant_C = ev_q.empty() ? 0.0 : ev_q.back();
  return out;
}

int numerical_rank(const std::vector<std::vector<double>>& columns, int n, double tol) {
  if (columns.empty()) return 0;
  Eigen::MatrixXd M(n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c)
    for (int r = 0; r < n; ++r) M(r, static_cast<Eigen::Index>(c)) = columns[c][static_cast<std::size_t>(r)];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const Eigen::VectorXd s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * std::max(1.0, s(0))) ++rank;
  return rank;
}

}  // namespace bochner
