#pragma once

#include "relsite/fibration.hpp"

namespace relsite {

struct Site {
  CategoryPtr category;
  Topology topology;
};

/// Walk2 with ⟨u⟩ covering b.
Site sierpinski_site();
/// Over Walk2: fiber(b) = {x0, x1}, fiber(a) = {y}, both restricting to y.
IndexedCategory two_point(const CategoryPtr& walk2);
/// a <= c >= b with {a <= c, b <= c} covering c.
Site vee_site();
/// The split-epi category with the section s covering x.
Site split_epi_site();

}  // namespace relsite
