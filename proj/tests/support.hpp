#pragma once

#include <memory>
#include <string>

#include "bochner/chart.hpp"
#include "bochner/structure.hpp"

namespace bochner::testing {

/// Owns manifold, structure and geometry for one fixture:P:K triple.
struct Fixture {
  Manifold m;
  PStructure ps;
  std::unique_ptr<Geometry> geo;

  Fixture(const std::string& fixture, const std::string& p, const std::string& k, Diff diff = {})
      : m(ManifoldRegistry::builtin().get(fixture)),
        ps(make_structure(m, parse_named_spec(p), parse_named_spec(k), diff)),
        geo(std::make_unique<Geometry>(m, ps, diff)) {}
};

inline Point<double> pt(double a, double b) { return make_point({a, b}); }
inline Point<double> pt(double a, double b, double c) { return make_point({a, b, c}); }

}  // namespace bochner::testing
