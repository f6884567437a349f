#include "relsite/samples.hpp"

namespace relsite {

Site sierpinski_site() {
  auto w = walking_arrow();
  Coverage cov(w);
  cov.add(*w->find_object("b"), {*w->find_arrow("u")});
  return Site{w, saturate(cov)};
}

IndexedCategory two_point(const CategoryPtr& walk2) {
  auto top = discrete_category(2, "x");
  auto bottom = discrete_category(1, "y");
  const int a = *walk2->find_object("a"), b = *walk2->find_object("b");
  std::vector<CategoryPtr> fibers(2);
  fibers[a] = bottom;
  fibers[b] = top;
  std::vector<Functor> restrictions(walk2->num_arrows());
  restrictions[walk2->identity(a)] = identity_functor(bottom);
  restrictions[walk2->identity(b)] = identity_functor(top);
  restrictions[*walk2->find_arrow("u")] = constant_functor(top, bottom, 0);
  return validate_indexed(walk2, std::move(fibers), std::move(restrictions));
}

Site vee_site() {
  auto c = poset_category({{1, 0, 1}, {0, 1, 1}, {0, 0, 1}}, {"a", "b", "c"});
  Coverage cov(c);
  cov.add(2, {c->hom(0, 2)[0], c->hom(1, 2)[0]});
  return Site{c, saturate(cov)};
}

Site split_epi_site() {
  auto c = split_epi_category();
  Coverage cov(c);
  cov.add(*c->find_object("x"), {*c->find_arrow("s")});
  return Site{c, saturate(cov)};
}

}  // namespace relsite
