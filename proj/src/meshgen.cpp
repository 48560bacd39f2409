#include "tspline/meshgen.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace tsp {

namespace {

// Flip quads whose positions run clockwise.
void orient(MeshDocument& doc) {
  for (auto& q : doc.elements) {
    double area = 0;
    for (int k = 0; k < 4; ++k) {
      auto a = *doc.xy[q[k]], b = *doc.xy[q[(k + 1) & 3]];
      area += a[0] * b[1] - a[1] * b[0];
    }
    if (area < 0) std::swap(q[1], q[3]);
  }
}

}  // namespace

MeshDocument grid_document(int nx, int ny, int degree) {
  MeshDocument doc;
  doc.degree = degree;
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) doc.xy.push_back(std::array<double, 2>{double(i), double(j)});
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      doc.elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  return doc;
}

MeshDocument star_document(int k, int n, int degree) {
  MeshDocument doc;
  doc.degree = degree;
  std::map<std::array<int, 3>, int> ids;
  // sector s spans spoke s (a axis) and spoke s+1 (b axis)
  auto key = [&](int s, int a, int b) -> std::array<int, 3> {
    if (a == 0 && b == 0) return {0, 0, 0};
    if (a == 0) return {(s + 1) % k, b, 0};
    return {s, a, b};
  };
  auto id = [&](int s, int a, int b) {
    auto kk = key(s, a, b);
    auto it = ids.find(kk);
    if (it != ids.end()) return it->second;
    double t0 = 2 * std::numbers::pi * kk[0] / k, t1 = 2 * std::numbers::pi * (kk[0] + 1) / k;
    doc.xy.push_back(std::array<double, 2>{kk[1] * std::cos(t0) + kk[2] * std::cos(t1),
                                           kk[1] * std::sin(t0) + kk[2] * std::sin(t1)});
    int v = int(ids.size());
    ids[kk] = v;
    return v;
  };
  id(0, 0, 0);
  for (int s = 0; s < k; ++s)
    for (int b = 0; b < n; ++b)
      for (int a = 0; a < n; ++a)
        doc.elements.push_back({id(s, a, b), id(s, a + 1, b), id(s, a + 1, b + 1), id(s, a, b + 1)});
  orient(doc);
  return doc;
}

MeshDocument ring_document(int degree) {
  MeshDocument doc;
  doc.degree = degree;
  const double ro = 3.0, ri = 1.5;
  auto corner = [](double r, int k) {
    double t = std::numbers::pi / 2 + 2 * std::numbers::pi * k / 5;
    return std::array<double, 2>{r * std::cos(t), r * std::sin(t)};
  };
  auto lerp = [](std::array<double, 2> a, std::array<double, 2> b, double t) {
    return std::array<double, 2>{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
  };
  // ids: inner corner I_k = k, inner midpoint M_k = 5+k, outer corner
  // C_k = 10+k, outer side points Pa_k = 15+k, Q_k = 20+k, Pb_k = 25+k
  doc.xy.resize(30);
  for (int k = 0; k < 5; ++k) {
    auto i0 = corner(ri, k), i1 = corner(ri, k + 1), c0 = corner(ro, k), c1 = corner(ro, k + 1);
    doc.xy[k] = i0;
    doc.xy[5 + k] = lerp(i0, i1, 0.5);
    doc.xy[10 + k] = c0;
    doc.xy[15 + k] = lerp(c0, c1, 0.25);
    doc.xy[20 + k] = lerp(c0, c1, 0.5);
    doc.xy[25 + k] = lerp(c0, c1, 0.75);
  }
  for (int k = 0; k < 5; ++k) {
    int km = (k + 4) % 5, kp = (k + 1) % 5;
    doc.elements.push_back({k, 25 + km, 10 + k, 15 + k});
    doc.elements.push_back({k, 5 + k, 20 + k, 15 + k});
    doc.elements.push_back({5 + k, kp, 25 + k, 20 + k});
  }
  orient(doc);
  return doc;
}

MeshDocument twisted_document(int degree) {
  MeshDocument doc;
  doc.degree = degree;
  // grid nodes (i,j), 0 <= i,j <= 4, minus the removed block; (4,j) and
  // (j,4) are the same node for j = 0,1,2
  std::map<std::array<int, 2>, int> ids;
  auto id = [&](int i, int j) {
    std::array<int, 2> kk{i, j};
    if (j == 4 && i <= 2) kk = {4, i};
    auto it = ids.find(kk);
    if (it != ids.end()) return it->second;
    int v = int(ids.size());
    ids[kk] = v;
    // positions are only a sketch: glued nodes cannot sit in both places
    doc.xy.push_back(std::array<double, 2>{double(kk[0]), double(kk[1])});
    return v;
  };
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) {
      if (i >= 2 && j >= 2) continue;
      doc.elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return doc;
}

std::vector<std::pair<std::array<int, 2>, std::vector<int>>> twisted_labels() {
  return {
      {{0, 1}, {0}}, {{1, 2}, {1}}, {{2, 3}, {0}}, {{0, 3}, {1}},
      {{1, 4}, {0}}, {{4, 5}, {1}}, {{2, 5}, {0}}, {{4, 6}, {0}},
      {{6, 7}, {1}}, {{5, 7}, {0}}, {{6, 8}, {0}}, {{8, 9}, {1}},
      {{7, 9}, {0}}, {{2, 10}, {1}}, {{10, 11}, {0}}, {{3, 11}, {1}},
      {{5, 12}, {1}}, {{10, 12}, {0}}, {{7, 13}, {1}}, {{12, 13}, {0}},
      {{9, 14}, {1}}, {{13, 14}, {0}}, {{10, 15}, {2}}, {{15, 16}, {0, 1}},
      {{11, 16}, {2}}, {{12, 17}, {2}}, {{15, 17}, {0, 1}}, {{9, 15}, {2}},
      {{8, 16}, {2}}, {{14, 17}, {2}},
  };
}

}  // namespace tsp
