// Copyright 2026 The xlrep Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef XLREP_TESTS_ORACLES_H_
#define XLREP_TESTS_ORACLES_H_

// Straightforward reference implementations used to cross-check the library.
// They follow the written rules literally and favor loops over cleverness.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace xlrep::oracle {

using Rows = std::vector<std::vector<double>>;

inline Rows ToRows(const Eigen::MatrixXd &m) {
  Rows r(m.rows(), std::vector<double>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) r[i][j] = m(i, j);
  }
  return r;
}

inline double Dot(const std::vector<double> &a, const std::vector<double> &b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double Cos(const std::vector<double> &a, const std::vector<double> &b) {
  return Dot(a, b) / std::sqrt(Dot(a, a) * Dot(b, b));
}

// ||Y^T X||_F^2 / (||X^T X||_F ||Y^T Y||_F) on column-centered copies.
inline double Cka(Rows x, Rows y) {
  auto center = [](Rows &m) {
    const std::size_t n = m.size();
    for (std::size_t j = 0; j < m[0].size(); ++j) {
      double mean = 0;
      for (std::size_t i = 0; i < n; ++i) mean += m[i][j];
      mean /= n;
      for (std::size_t i = 0; i < n; ++i) m[i][j] -= mean;
    }
  };
  center(x);
  center(y);
  // (A^T B)_{ab} = sum_i A_ia B_ib
  auto cross = [](const Rows &a, const Rows &b) {
    double total = 0;
    for (std::size_t p = 0; p < a[0].size(); ++p) {
      for (std::size_t q = 0; q < b[0].size(); ++q) {
        double s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i][p] * b[i][q];
        total += s * s;
      }
    }
    return total;
  };
  return cross(y, x) / (std::sqrt(cross(x, x)) * std::sqrt(cross(y, y)));
}

// CSLS score matrix with sources and targets given as rows.
inline Rows CslsScores(const Rows &src, const Rows &tgt, int k) {
  const std::size_t n = src.size();
  const std::size_t m = tgt.size();
  Rows cos(n, std::vector<double>(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) cos[i][j] = Cos(src[i], tgt[j]);
  }
  auto top_mean = [k](std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    double s = 0;
    for (int a = 0; a < k; ++a) s += v[a];
    return s / k;
  };
  std::vector<double> r_t(n), r_s(m);
  for (std::size_t i = 0; i < n; ++i) r_t[i] = top_mean(cos[i]);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = cos[i][j];
    r_s[j] = top_mean(col);
  }
  Rows score(n, std::vector<double>(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      score[i][j] = 2 * cos[i][j] - r_t[i] - r_s[j];
    }
  }
  return score;
}

using Grid = std::vector<std::vector<bool>>;

// grow-diag-final-and as in the usual pseudo-code, on boolean grids.
inline Grid Gdfa(const Grid &e2f, const Grid &f2e) {
  const int n = static_cast<int>(e2f.size());
  const int m = n ? static_cast<int>(e2f[0].size()) : 0;
  Grid a(n, std::vector<bool>(m, false));
  Grid u(n, std::vector<bool>(m, false));
  for (int e = 0; e < n; ++e) {
    for (int f = 0; f < m; ++f) {
      a[e][f] = e2f[e][f] && f2e[e][f];
      u[e][f] = e2f[e][f] || f2e[e][f];
    }
  }
  auto e_aligned = [&](int e) {
    for (int f = 0; f < m; ++f) if (a[e][f]) return true;
    return false;
  };
  auto f_aligned = [&](int f) {
    for (int e = 0; e < n; ++e) if (a[e][f]) return true;
    return false;
  };
  const int neighbors[8][2] = {{-1, 0}, {0, -1}, {1, 0},  {0, 1},
                               {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
  bool added = true;
  while (added) {
    added = false;
    for (int e = 0; e < n; ++e) {
      for (int f = 0; f < m; ++f) {
        if (!a[e][f]) continue;
        for (const auto &d : neighbors) {
          const int en = e + d[0];
          const int fn = f + d[1];
          if (en < 0 || fn < 0 || en >= n || fn >= m) continue;
          if ((!e_aligned(en) || !f_aligned(fn)) && u[en][fn]) {
            a[en][fn] = true;
            added = true;
          }
        }
      }
    }
  }
  for (int e = 0; e < n; ++e) {
    for (int f = 0; f < m; ++f) {
      if (!e_aligned(e) && !f_aligned(f) && u[e][f]) a[e][f] = true;
    }
  }
  return a;
}

using LinkGrid = std::vector<std::vector<bool>>;  // [source][target]

inline std::vector<std::optional<std::string>> ProjectTokens(
    const std::vector<std::string> &labels, const LinkGrid &links, int m) {
  std::vector<std::optional<std::string>> out(m);
  for (int t = 0; t < m; ++t) {
    for (std::size_t s = 0; s < labels.size(); ++s) {
      if (links[s][t]) {
        out[t] = labels[s];
        break;
      }
    }
  }
  return out;
}

struct Span {
  int start, end;
  std::string label;
};

// Spans are given in source order.
inline std::vector<Span> ProjectSpans(const std::vector<Span> &spans,
                                      const LinkGrid &links, int m,
                                      double ratio) {
  struct Candidate {
    Span span;
    int source_len;
    bool used = false;
  };
  std::vector<Candidate> pool;
  for (const Span &s : spans) {
    std::vector<int> hit;
    for (int i = s.start; i <= s.end; ++i) {
      for (int t = 0; t < m; ++t) if (links[i][t]) hit.push_back(t);
    }
    if (hit.empty()) continue;
    const int lo = *std::min_element(hit.begin(), hit.end());
    const int hi = *std::max_element(hit.begin(), hit.end());
    const int len = s.end - s.start + 1;
    if (hi - lo + 1 > ratio * len) continue;
    pool.push_back({{lo, hi, s.label}, len});
  }
  std::vector<Span> kept;
  while (true) {
    int best = -1;
    for (int c = 0; c < static_cast<int>(pool.size()); ++c) {
      if (pool[c].used) continue;
      if (best < 0 || pool[c].source_len > pool[best].source_len ||
          (pool[c].source_len == pool[best].source_len &&
           pool[c].span.start < pool[best].span.start)) {
        best = c;
      }
    }
    if (best < 0) break;
    pool[best].used = true;
    bool clash = false;
    for (const Span &k : kept) {
      for (int t = k.start; t <= k.end; ++t) {
        if (t >= pool[best].span.start && t <= pool[best].span.end) {
          clash = true;
        }
      }
    }
    if (!clash) kept.push_back(pool[best].span);
  }
  std::sort(kept.begin(), kept.end(),
            [](const Span &a, const Span &b) { return a.start < b.start; });
  return kept;
}

struct Deps {
  std::vector<std::optional<int>> heads;
  std::vector<std::optional<std::string>> rels;
};

inline Deps ProjectDeps(const std::vector<int> &heads,
                        const std::vector<std::string> &rels,
                        const LinkGrid &links, int m) {
  const int n = static_cast<int>(heads.size());
  std::function<int(int)> depth = [&](int s) {
    return heads[s] == 0 ? 0 : 1 + depth(heads[s] - 1);
  };
  // Representative source of each target: highest in the tree, then lowest
  // index.
  std::vector<int> rep(m, -1);
  for (int t = 0; t < m; ++t) {
    for (int s = 0; s < n; ++s) {
      if (!links[s][t]) continue;
      if (rep[t] < 0 || depth(s) < depth(rep[t])) rep[t] = s;
    }
  }
  auto image = [&](int s) {
    for (int t = 0; t < m; ++t) if (rep[t] == s) return t;
    return -1;
  };
  Deps out{std::vector<std::optional<int>>(m),
           std::vector<std::optional<std::string>>(m)};
  for (int t = 0; t < m; ++t) {
    if (rep[t] < 0) continue;
    std::optional<int> head;
    for (int h = heads[rep[t]]; !head; h = heads[h - 1]) {
      if (h == 0) {
        head = 0;
      } else if (image(h - 1) >= 0) {
        head = image(h - 1) + 1;
      }
    }
    out.heads[t] = head;
    out.rels[t] = rels[rep[t]];
  }
  return out;
}

inline std::vector<double> Mlp(const Eigen::MatrixXd &w1,
                               const Eigen::VectorXd &b1,
                               const Eigen::MatrixXd &w2,
                               const Eigen::VectorXd &b2,
                               const std::vector<double> &x) {
  std::vector<double> hidden(w1.rows());
  for (Eigen::Index i = 0; i < w1.rows(); ++i) {
    double s = b1(i);
    for (Eigen::Index j = 0; j < w1.cols(); ++j) s += w1(i, j) * x[j];
    hidden[i] = s > 0 ? s : 0;
  }
  std::vector<double> out(w2.rows());
  for (Eigen::Index i = 0; i < w2.rows(); ++i) {
    double s = b2(i);
    for (Eigen::Index j = 0; j < w2.cols(); ++j) s += w2(i, j) * hidden[j];
    out[i] = s;
  }
  return out;
}

using Sim = std::function<double(const std::vector<double> &,
                                 const std::vector<double> &)>;

// Negated weak objective: -(1/2B) sum_i [log softmax_j sim(s_i, t_j)/T at i
//                                        + log softmax_j sim(s_j, t_i)/T at i]
inline double WeakLoss(const Rows &s, const Rows &t, const Sim &sim,
                       double temp) {
  const std::size_t b = s.size();
  double total = 0;
  for (std::size_t i = 0; i < b; ++i) {
    double row = 0, col = 0;
    for (std::size_t j = 0; j < b; ++j) {
      row += std::exp(sim(s[i], t[j]) / temp);
      col += std::exp(sim(s[j], t[i]) / temp);
    }
    const double pos = std::exp(sim(s[i], t[i]) / temp);
    total += std::log(pos / row) + std::log(pos / col);
  }
  return -total / (2.0 * b);
}

// Negated strong objective over H = (s_1..s_B, t_1..t_B).
inline double StrongLoss(const Rows &s, const Rows &t, const Sim &sim,
                         double temp) {
  Rows h = s;
  h.insert(h.end(), t.begin(), t.end());
  const std::size_t b = s.size();
  double total = 0;
  for (std::size_t a = 0; a < h.size(); ++a) {
    const std::size_t partner = a < b ? a + b : a - b;
    double denom = 0;
    for (std::size_t c = 0; c < h.size(); ++c) {
      if (c != a) denom += std::exp(sim(h[a], h[c]) / temp);
    }
    total += std::log(std::exp(sim(h[a], h[partner]) / temp) / denom);
  }
  return -total / (2.0 * b);
}

// Central-difference gradient of f at x.
inline Eigen::MatrixXd NumericGradient(
    const std::function<double(const Eigen::MatrixXd &)> &f,
    Eigen::MatrixXd x, double step) {
  Eigen::MatrixXd g(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double keep = x(i, j);
      x(i, j) = keep + step;
      const double up = f(x);
      x(i, j) = keep - step;
      const double down = f(x);
      x(i, j) = keep;
      g(i, j) = (up - down) / (2 * step);
    }
  }
  return g;
}

// max |a - n| / max(1, |a|).
inline double RelativeError(const Eigen::MatrixXd &analytic,
                            const Eigen::MatrixXd &numeric) {
  double worst = 0;
  for (Eigen::Index i = 0; i < analytic.size(); ++i) {
    const double a = analytic.data()[i];
    worst = std::max(worst, std::abs(a - numeric.data()[i]) /
                                std::max(1.0, std::abs(a)));
  }
  return worst;
}

}  // namespace xlrep::oracle

#endif  // XLREP_TESTS_ORACLES_H_
