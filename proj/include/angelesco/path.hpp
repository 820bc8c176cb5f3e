#pragma once

// Parametrized pieces of a contour. Each piece maps u in [0,1] to a point,
// its derivative, and a continuous (lifted) argument of the point so that
// fractional powers can be taken without consulting a principal branch.

#include <string>
#include <variant>
#include <vector>

#include "precision.hpp"

namespace angelesco {

struct PathPoint {
  Complex z;
  Complex dz; // dz/du
  Real r;     // |z|
  Real theta; // lifted argument of z
};

// radial piece r e^{i theta}, r from r0 to r1, theta fixed and lifted
struct Ray {
  Real theta, r0, r1;
  Complex dir;

  Ray(Real th, Real from, Real to) : theta(std::move(th)), r0(std::move(from)), r1(std::move(to)), dir(expi(theta)) {}
  PathPoint at(const Real &u) const {
    Real r = r0 + (r1 - r0) * u;
    return {dir * r, dir * (r1 - r0), r, theta};
  }
  Complex start() const { return dir * r0; }
  Complex end() const { return dir * r1; }
  Ray reversed() const { return Ray(theta, r1, r0); }
};

// circular arc center + rho e^{i phi}, phi from phi0 to phi1.
// Centered at 0 the lifted argument is phi itself; otherwise it is the
// principal argument shifted by 2 pi * sheet.
struct Arc {
  Complex center;
  Real rho, phi0, phi1;
  int sheet = 0;

  Arc(Complex c, Real radius, Real from, Real to, int sh = 0)
      : center(std::move(c)), rho(std::move(radius)), phi0(std::move(from)), phi1(std::move(to)), sheet(sh) {}
  bool origin_centered() const { return iszero(center.re) && iszero(center.im); }
  PathPoint at(const Real &u) const {
    Real phi = phi0 + (phi1 - phi0) * u;
    Complex w = expi(phi);
    Complex dz = w * (rho * (phi1 - phi0));
    dz = Complex(-dz.im, dz.re);
    if (origin_centered())
      return {w * rho, std::move(dz), rho, std::move(phi)};
    Complex z = center + w * rho;
    Real r = abs(z);
    Real th = arg(z);
    if (sheet)
      th += 2 * pi() * sheet;
    return {std::move(z), std::move(dz), std::move(r), std::move(th)};
  }
  Complex start() const { return center + expi(phi0) * rho; }
  Complex end() const { return center + expi(phi1) * rho; }
  Arc reversed() const { return Arc(center, rho, phi1, phi0, sheet); }
};

// straight piece a -> b, principal argument shifted by 2 pi * sheet
struct Line {
  Complex a, b;
  int sheet = 0;

  Line(Complex from, Complex to, int sh = 0) : a(std::move(from)), b(std::move(to)), sheet(sh) {}
  PathPoint at(const Real &u) const {
    Complex d = b - a;
    Complex z = a + d * u;
    Real r = abs(z);
    Real th = arg(z);
    if (sheet)
      th += 2 * pi() * sheet;
    return {std::move(z), std::move(d), std::move(r), std::move(th)};
  }
  Complex start() const { return a; }
  Complex end() const { return b; }
  Line reversed() const { return Line(b, a, sheet); }
};

struct Segment {
  std::variant<Ray, Arc, Line> shape;
  bool truncated_tail = false; // stands in for a ray to infinity

  PathPoint at(const Real &u) const {
    return std::visit([&](const auto &s) { return s.at(u); }, shape);
  }
  Complex start() const {
    return std::visit([](const auto &s) { return s.start(); }, shape);
  }
  Complex end() const {
    return std::visit([](const auto &s) { return s.end(); }, shape);
  }
  Segment reversed() const {
    return {std::visit([](const auto &s) -> std::variant<Ray, Arc, Line> { return s.reversed(); }, shape),
            truncated_tail};
  }
  const char *kind() const {
    static const char *names[] = {"ray", "arc", "line"};
    return names[shape.index()];
  }
};

enum class BranchCut { NegativeReal, PositiveReal, None };

struct ContourPath {
  std::string name;
  std::vector<Segment> segments;
  BranchCut branch_cut = BranchCut::None;

  ContourPath reversed() const {
    ContourPath p{name + "^-1", {}, branch_cut};
    for (auto it = segments.rbegin(); it != segments.rend(); ++it)
      p.segments.push_back(it->reversed());
    return p;
  }
  Complex start() const { return segments.front().start(); }
  Complex end() const { return segments.back().end(); }
};

} // namespace angelesco
