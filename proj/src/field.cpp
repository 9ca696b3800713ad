#include "confext/field.hpp"

namespace confext {

std::string_view to_string(Domain d) {
  switch (d) {
    case Domain::plane:
      return "plane";
    case Domain::halfspace:
      return "halfspace";
    case Domain::sphere:
      return "sphere";
    case Domain::ball:
      return "ball";
  }
  return "unknown";
}

FieldFunction constant_field(Domain domain, int n, double value) {
  FieldFunction f;
  f.domain = domain;
  f.n = n;
  f.eval = [value](std::span<const double>) { return value; };
  f.polynomial_degree = 0;
  return f;
}

FieldFunction scaled(const FieldFunction& f, double c) {
  FieldFunction g = f;
  g.eval = [inner = f.eval, c](std::span<const double> x) { return c * inner(x); };
  return g;
}

}  // namespace confext
