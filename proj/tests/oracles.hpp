// Independent oracles for the test suites. Everything here is deliberately
// written from scratch against the definitions, not against the library:
// a cyclic Jacobi eigensolver, a quadruple-loop partial transpose, and a
// Kronecker-product construction of the state family. The suites compare
// library results against these, so none of this may call into pptfarm.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

// ---- cyclic Jacobi eigensolver ---------------------------------------------

// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations,
// ascending. Converges to machine precision for the orders used in tests.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::int64_t n) {
  if (static_cast<std::int64_t>(a.size()) != n * n)
    throw std::invalid_argument("jacobi: bad size");
  auto at = [&](std::int64_t r, std::int64_t c) -> double& {
    return a[static_cast<std::size_t>(r * n + c)];
  };

  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) return std::vector<double>(static_cast<std::size_t>(n), 0.0);

  const double stop = 1e-15 * scale;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::int64_t p = 0; p < n; ++p)
      for (std::int64_t q = p + 1; q < n; ++q) off = std::max(off, std::fabs(at(p, q)));
    if (off <= stop) break;

    for (std::int64_t p = 0; p < n; ++p) {
      for (std::int64_t q = p + 1; q < n; ++q) {
        double apq = at(p, q);
        if (std::fabs(apq) <= stop * 1e-2) continue;
        double tau = (at(q, q) - at(p, p)) / (2.0 * apq);
        double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        for (std::int64_t k = 0; k < n; ++k) {
          double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::int64_t k = 0; k < n; ++k) {
          double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> eigs(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) eigs[static_cast<std::size_t>(k)] = at(k, k);
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

inline double jacobi_min_eigenvalue(const std::vector<double>& a, std::int64_t n) {
  return jacobi_eigenvalues(a, n).front();
}

// ---- naive partial transpose ------------------------------------------------

// Re-indexing straight from the definition: decode row and column into
// factor components, swap the listed factors, re-encode.
inline std::vector<double> naive_partial_transpose(const std::vector<double>& m,
                                                   const std::vector<int>& dims,
                                                   const std::vector<int>& factors_1based) {
  const int nf = static_cast<int>(dims.size());
  std::int64_t order = 1;
  for (int d : dims) order *= d;
  if (static_cast<std::int64_t>(m.size()) != order * order)
    throw std::invalid_argument("naive_pt: bad size");

  std::vector<bool> swap_factor(static_cast<std::size_t>(nf), false);
  for (int f : factors_1based) swap_factor[static_cast<std::size_t>(f - 1)] = true;

  auto decode = [&](std::int64_t flat) {
    std::vector<int> comps(static_cast<std::size_t>(nf));
    for (int k = nf - 1; k >= 0; --k) {
      comps[static_cast<std::size_t>(k)] = static_cast<int>(flat % dims[static_cast<std::size_t>(k)]);
      flat /= dims[static_cast<std::size_t>(k)];
    }
    return comps;
  };
  auto encode = [&](const std::vector<int>& comps) {
    std::int64_t flat = 0;
    for (int k = 0; k < nf; ++k)
      flat = flat * dims[static_cast<std::size_t>(k)] + comps[static_cast<std::size_t>(k)];
    return flat;
  };

  std::vector<double> out(m.size());
  for (std::int64_t r = 0; r < order; ++r) {
    std::vector<int> rc = decode(r);
    for (std::int64_t c = 0; c < order; ++c) {
      std::vector<int> cc = decode(c);
      std::vector<int> rr = rc, cc2 = cc;
      for (int k = 0; k < nf; ++k)
        if (swap_factor[static_cast<std::size_t>(k)]) std::swap(rr[static_cast<std::size_t>(k)], cc2[static_cast<std::size_t>(k)]);
      out[static_cast<std::size_t>(encode(rr) * order + encode(cc2))] =
          m[static_cast<std::size_t>(r * order + c)];
    }
  }
  return out;
}

// ---- Kronecker-product family construction ----------------------------------

// rho(q) assembled from first principles: the core is the outer product of
// the diagonal-family vector tensored with identity/(dA*dB^n), and every
// mixed-support component is the outer product of unit(v)+unit(w) tensored
// with the all-ones payload/(2*dB^n). Labels are ranked by the lexicographic
// scan of qualifying support vectors.
struct FamilyOracle {
  int n, da, db;
  std::int64_t agrid, m, order;
  std::vector<std::pair<std::int64_t, std::int64_t>> supports;  // 0-based (v, w) flats

  FamilyOracle(int n_, int da_, int db_) : n(n_), da(da_), db(db_) {
    agrid = 1;
    m = 1;
    for (int k = 0; k < n; ++k) {
      agrid *= da;
      m *= db;
    }
    order = agrid * m;

    std::vector<int> v(static_cast<std::size_t>(n), 1);
    auto flat_of = [&](const std::vector<int>& comps) {
      std::int64_t f = 0;
      for (int c : comps) f = f * da + (c - 1);
      return f;
    };
    // odometer over {1..da}^n in lexicographic order
    while (true) {
      int low = *std::min_element(v.begin(), v.end());
      int high = *std::max_element(v.begin(), v.end());
      bool two = low != high && std::all_of(v.begin(), v.end(), [&](int c) {
                   return c == low || c == high;
                 });
      if (two && v[0] == low) {
        std::vector<int> w(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) w[k] = (v[k] == low) ? high : low;
        supports.emplace_back(flat_of(v), flat_of(w));
      }
      int k = n - 1;
      while (k >= 0 && v[static_cast<std::size_t>(k)] == da) {
        v[static_cast<std::size_t>(k)] = 1;
        --k;
      }
      if (k < 0) break;
      ++v[static_cast<std::size_t>(k)];
    }
  }

  std::vector<double> matrix(double q) const {
    const double nd = static_cast<double>(supports.size());
    const double p = 1.0 - q;
    const double x = q / nd;
    const double nu = 1.0 / (static_cast<double>(da) * static_cast<double>(m));
    const double ones = 1.0 / (2.0 * static_cast<double>(m));

    std::vector<double> rho(static_cast<std::size_t>(order * order), 0.0);
    auto add_block = [&](std::int64_t rb, std::int64_t cb, bool identity_payload,
                         double scale) {
      for (std::int64_t beta = 0; beta < m; ++beta) {
        for (std::int64_t gamma = 0; gamma < m; ++gamma) {
          double payload = identity_payload ? (beta == gamma ? nu : 0.0) : ones;
          rho[static_cast<std::size_t>((rb * m + beta) * order + (cb * m + gamma))] +=
              scale * payload;
        }
      }
    };

    std::int64_t diag_step = 0;  // flat of (i,...,i) advances by this per i
    for (int k = 0; k < n; ++k) diag_step = diag_step * da + 1;
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < da; ++j)
        add_block(i * diag_step, j * diag_step, true, p);
    for (const auto& [vf, wf] : supports) {
      add_block(vf, vf, false, x);
      add_block(vf, wf, false, x);
      add_block(wf, vf, false, x);
      add_block(wf, wf, false, x);
    }
    return rho;
  }

  // factor dims of the full space, A factors first
  std::vector<int> dims() const {
    std::vector<int> d;
    for (int k = 0; k < n; ++k) d.push_back(da);
    for (int k = 0; k < n; ++k) d.push_back(db);
    return d;
  }
};

// ---- random symmetric matrices ----------------------------------------------

// Entries are dyadic rationals k/16 with small k, so permutation-invariant
// sums (trace, squared Frobenius norm) are exact in double arithmetic.
inline std::vector<double> random_dyadic_symmetric(std::int64_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dist(-16, 16);
  std::vector<double> m(static_cast<std::size_t>(n * n));
  for (std::int64_t r = 0; r < n; ++r)
    for (std::int64_t c = r; c < n; ++c) {
      double v = dist(rng) / 16.0;
      m[static_cast<std::size_t>(r * n + c)] = v;
      m[static_cast<std::size_t>(c * n + r)] = v;
    }
  return m;
}

inline std::vector<double> random_symmetric(std::int64_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> m(static_cast<std::size_t>(n * n));
  for (std::int64_t r = 0; r < n; ++r)
    for (std::int64_t c = r; c < n; ++c) {
      double v = dist(rng);
      m[static_cast<std::size_t>(r * n + c)] = v;
      m[static_cast<std::size_t>(c * n + r)] = v;
    }
  return m;
}

}  // namespace oracle
