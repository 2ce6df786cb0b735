#pragma once

#include <cmath>

namespace convac {

struct Vec2 {
  double x = 0, y = 0;

  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double a) { x *= a; y *= a; return *this; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
// rotation by +90 degrees, J = ((0,-1),(1,0))
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

// J[i][j] = d v_i / d x_j
struct Mat2 {
  double a[2][2] = {{0, 0}, {0, 0}};
};

inline Vec2 operator*(const Mat2& m, Vec2 u) {
  return {m.a[0][0] * u.x + m.a[0][1] * u.y, m.a[1][0] * u.x + m.a[1][1] * u.y};
}

// H[i][j][k] = d^2 v_i / dx_j dx_k
struct Tensor2 {
  double a[2][2][2] = {};

  // returns the vector  sum_jk H[i][j][k] u_j w_k
  Vec2 apply(Vec2 u, Vec2 w) const {
    double uu[2] = {u.x, u.y}, ww[2] = {w.x, w.y}, out[2] = {0, 0};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) out[i] += a[i][j][k] * uu[j] * ww[k];
    return {out[0], out[1]};
  }
};

}  // namespace convac
