#include "bochner/random_fields.hpp"

#include <numbers>

namespace bochner {

RandomScalar RandomScalar::draw(const Manifold& m, Rng& rng, int terms) {
  RandomScalar s;
  s.dim = m.dim;
  s.sphere = m.kind == "round-sphere";
  if (s.sphere) {
    for (double& c : s.poly) c = rng.uniform(-1.0, 1.0);
    return s;
  }
  for (int t = 0; t < terms; ++t) {
    Wave w{};
    w.coef = rng.uniform(-1.0, 1.0);
    w.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < m.dim; ++i) w.k[static_cast<std::size_t>(i)] = rng.integer(-2, 2);
    s.waves.push_back(w);
  }
  return s;
}

RandomForm RandomForm::draw(const Manifold& m, int k, Rng& rng) {
  if (k < 0 || k > m.dim) throw Error(ErrorKind::config, "form degree out of range");
  RandomForm f;
  f.dim = m.dim;
  f.k = k;
  f.sphere = m.kind == "round-sphere";
  std::size_t count = 1;
  if (f.sphere && k == 1) {
    count = 3;
  } else if (!(f.sphere && k == 2)) {
    for (int i = 0; i < k; ++i) count = count * static_cast<std::size_t>(m.dim - i) / static_cast<std::size_t>(i + 1);
  }
  for (std::size_t c = 0; c < count; ++c) f.comps.push_back(RandomScalar::draw(m, rng));
  return f;
}

RandomVector RandomVector::draw(const Manifold& m, Rng& rng) {
  RandomVector v;
  v.form = RandomForm::draw(m, 1, rng);
  v.metric = m.metric;
  return v;
}

}  // namespace bochner
